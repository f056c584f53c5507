//! Plain-text instances: one `x y w` record per line, `#` comments.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{VertexId, WeightedVertex};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// Leading comment lines, without the `#`.
    pub header: Vec<String>,
    /// Terminals with ids `0..n` in record order.
    pub terminals: Vec<WeightedVertex>,
}

impl Instance {
    pub fn new(terminals: Vec<WeightedVertex>) -> Self {
        Instance {
            header: Vec::new(),
            terminals,
        }
    }

    /// Record order, which is also the order the solver visits vertices in.
    pub fn insertion_order(&self) -> Vec<VertexId> {
        self.terminals.iter().map(|t| t.id).collect()
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header = Vec::new();
    let mut terminals: Vec<WeightedVertex> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if terminals.is_empty() {
                header.push(comment.trim().to_string());
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 fields `x y w`, found {}", fields.len()),
            });
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("{what} `{s}` is not a number"),
            })
        };
        let x = num(fields[0], "x")?;
        let y = num(fields[1], "y")?;
        let w = num(fields[2], "weight")?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::Parse {
                line: line_no,
                message: "coordinates must be finite".into(),
            });
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Weight { line: line_no });
        }
        // +0.0 and -0.0 are the same position
        if !seen.insert(((x + 0.0).to_bits(), (y + 0.0).to_bits())) {
            return Err(Error::DuplicateTerminal { record: line_no });
        }
        terminals.push(WeightedVertex::terminal(terminals.len() as u32, x, y, w));
    }
    if terminals.is_empty() {
        return Err(Error::EmptyInstance);
    }
    Ok(Instance { header, terminals })
}

/// Writes numbers with Rust's shortest round-tripping formatting, so that
/// parsing the output gives back the same terminals.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    for h in &instance.header {
        if h.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {h}");
        }
    }
    for t in &instance.terminals {
        let _ = writeln!(out, "{} {} {}", t.pos.x, t.pos.y, t.weight);
    }
    out
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Replaces `path` in one step: the bytes go to a temporary file in the same
/// directory, which is then renamed over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// `n` terminals uniform in [0,100]² with integer weights drawn uniformly
/// from `wmin..=wmax`, reproducible from `seed`.
pub fn generate_random_instance(n: usize, wmin: u32, wmax: u32, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    if wmin == 0 || wmin > wmax {
        return Err(Error::InvalidInput(format!("weight range {wmin}..={wmax} is empty or not positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut terminals = Vec::with_capacity(n);
    while terminals.len() < n {
        let x: f64 = rng.gen_range(0.0..100.0);
        let y: f64 = rng.gen_range(0.0..100.0);
        let w = rng.gen_range(wmin..=wmax) as f64;
        if seen.insert((x.to_bits(), y.to_bits())) {
            terminals.push(WeightedVertex::terminal(terminals.len() as u32, x, y, w));
        }
    }
    Ok(Instance {
        header: vec![format!("random instance: n={n} weights={wmin}..={wmax} seed={seed}")],
        terminals,
    })
}
