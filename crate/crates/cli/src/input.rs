//! Quiver files, dimension vectors and slopes as typed on the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;

use quiver_dt::{load_quiver, DimVector, Error, Quiver, QuiverDescription, Slope, Stability};

#[derive(Debug)]
pub enum CliError {
    /// Some identity failed to hold or could not be certified.
    Failed(String),
    Config(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Failed(m) => write!(f, "verification failed: {m}"),
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(msg),
            Error::CyclicQuiver { .. }
            | Error::UnknownVertex(_)
            | Error::DuplicateVertex(_)
            | Error::DimensionMismatch { .. }
            | Error::ZeroDimVector
            | Error::NotDynkin { .. }
            | Error::UnsupportedField(_)
            | Error::NotCoprime { .. }
            | Error::Precondition(_) => CliError::Config(msg),
            _ => CliError::Failed(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
    theta: Option<BTreeMap<String, i64>>,
}

/// Vertex names in display order, with their positions in the quiver.
#[derive(Clone, Debug)]
pub struct Layout {
    names: Vec<String>,
    index: Vec<usize>,
}

impl Layout {
    pub fn new(quiver: &Quiver, names: &[String]) -> Self {
        let index = names
            .iter()
            .map(|v| quiver.index_of(v).expect("name belongs to the quiver"))
            .collect();
        Layout {
            names: names.to_vec(),
            index,
        }
    }

    /// Names ordered by length, then alphabetically: `1, 2, .., 10` and `i, j`.
    pub fn sorted(quiver: &Quiver) -> Self {
        let mut names = quiver.vertices().to_vec();
        names.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Layout::new(quiver, &names)
    }

    /// Inverse of the name-keyed JSON map.
    pub fn parse_map(&self, v: &serde_json::Value) -> Option<DimVector> {
        let mut entries = vec![0; self.names.len()];
        for (name, &i) in self.names.iter().zip(&self.index) {
            entries[i] = u32::try_from(v.get(name)?.as_u64()?).ok()?;
        }
        Some(DimVector::new(entries))
    }

    pub fn entries<'a>(&'a self, d: &'a DimVector) -> impl Iterator<Item = (&'a str, u32)> + 'a {
        self.names.iter().zip(&self.index).map(|(v, &i)| (v.as_str(), d.entries()[i]))
    }

    pub fn weights<'a>(&'a self, theta: &'a Stability) -> impl Iterator<Item = (&'a str, i64)> + 'a {
        self.names.iter().zip(&self.index).map(|(v, &i)| (v.as_str(), theta.weights()[i]))
    }

    pub fn unit_vectors(&self) -> Vec<DimVector> {
        self.index.iter().map(|&i| DimVector::unit(self.index.len(), i)).collect()
    }

    pub fn parse_dim(&self, csv: &str) -> CliResult<DimVector> {
        let parts: Vec<&str> = csv.split(',').map(str::trim).collect();
        if parts.len() != self.names.len() {
            return Err(CliError::Config(format!(
                "--dim has {} entries, the quiver has {} vertices ({})",
                parts.len(),
                self.names.len(),
                self.names.join(", ")
            )));
        }
        let mut entries = vec![0; self.names.len()];
        for (part, &i) in parts.iter().zip(&self.index) {
            entries[i] = part
                .parse()
                .map_err(|_| CliError::Config(format!("--dim entry `{part}` is not a nonnegative integer")))?;
        }
        Ok(DimVector::new(entries))
    }

    pub fn show(&self, d: &DimVector) -> String {
        let parts: Vec<String> = self.entries(d).map(|(v, x)| format!("{v}:{x}")).collect();
        format!("[{}]", parts.join(" "))
    }
}

/// A loaded quiver file.
pub struct Input {
    pub desc: QuiverDescription,
    pub quiver: Arc<Quiver>,
    pub theta: Stability,
    pub layout: Layout,
}

impl Input {
    pub fn load(path: &Path) -> CliResult<Self> {
        let shown = path.display();
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {shown}: {e}")))?;
        let file: QuiverFile = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{shown}: {e}")))?;
        let theta = file
            .theta
            .ok_or_else(|| CliError::Config(format!("{shown}: missing field `theta`")))?;
        let desc = QuiverDescription {
            vertices: file.vertices,
            arrows: file.arrows,
            theta: Some(theta.clone()),
        };
        let quiver = load_quiver(&desc).map_err(|e| CliError::Config(format!("{shown}: {e}")))?;
        if let Some(v) = desc.vertices.iter().find(|v| !theta.contains_key(*v)) {
            return Err(CliError::Config(format!("{shown}: missing field `theta.{v}`")));
        }
        let stability = Stability::from_names(&quiver, &theta).map_err(|e| CliError::Config(format!("{shown}: {e}")))?;
        let layout = Layout::new(&quiver, &desc.vertices);
        Ok(Input {
            desc,
            quiver: Arc::new(quiver),
            theta: stability,
            layout,
        })
    }
}

pub fn parse_slope(s: &str) -> CliResult<Slope> {
    let bad = || CliError::Config(format!("--slope `{s}` is not of the form a/b"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Slope(quiver_dt::BigRational::new(num, den)))
}
