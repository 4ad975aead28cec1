//! Seeded random frameworks and a few structured families.
//!
//! Random frameworks draw from `ChaCha8Rng::seed_from_u64(seed)`, visiting
//! ordered pairs `(x, y)` row by row. The diagonal is skipped entirely (no
//! draw) unless self-loops are allowed. The stream is platform independent,
//! so a `(n, p, allow_self_loops, seed)` tuple names one framework.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::framework::Framework;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub p: f64,
    pub allow_self_loops: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("attack probability must lie in [0, 1]")]
    Probability,
    #[error("unknown framework family `{0}`")]
    UnknownFamily(String),
    #[error("a {0} needs at least one argument")]
    Empty(Family),
}

fn arg_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("a{i}")).collect()
}

pub fn random_af(spec: &GenSpec) -> Result<Framework, GenError> {
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(GenError::Probability);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut attacks = Vec::new();
    for x in 0..spec.n {
        for y in 0..spec.n {
            if x == y && !spec.allow_self_loops {
                continue;
            }
            if rng.gen_bool(spec.p) {
                attacks.push((x, y));
            }
        }
    }
    Ok(Framework::from_indices(arg_names(spec.n), attacks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `a0 → a1 → … → a(n-1) → a0`
    Cycle,
    /// `a0 → a1 → … → a(n-1)`
    Chain,
    /// Two halves, each a clique of mutual attacks; no attacks between them.
    TwoCliques,
    /// No attacks at all.
    Isolated,
    /// Every argument attacks itself and nothing else.
    SelfLoops,
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "cycle" => Family::Cycle,
            "chain" => Family::Chain,
            "two_cliques" => Family::TwoCliques,
            "isolated" => Family::Isolated,
            "self_loops" => Family::SelfLoops,
            other => return Err(GenError::UnknownFamily(other.to_string())),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cycle => "cycle",
            Family::Chain => "chain",
            Family::TwoCliques => "two_cliques",
            Family::Isolated => "isolated",
            Family::SelfLoops => "self_loops",
        })
    }
}

pub fn family(kind: Family, n: usize) -> Result<Framework, GenError> {
    if n == 0 {
        return Err(GenError::Empty(kind));
    }
    let attacks: Vec<(usize, usize)> = match kind {
        Family::Cycle => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        Family::Chain => (1..n).map(|i| (i - 1, i)).collect(),
        Family::TwoCliques => {
            let half = n.div_ceil(2);
            let mut out = Vec::new();
            for range in [0..half, half..n] {
                for x in range.clone() {
                    for y in range.clone() {
                        if x != y {
                            out.push((x, y));
                        }
                    }
                }
            }
            out
        }
        Family::Isolated => Vec::new(),
        Family::SelfLoops => (0..n).map(|i| (i, i)).collect(),
    };
    Ok(Framework::from_indices(arg_names(n), attacks))
}
