//! Pieces shared by the two backtracking engines.

use std::fmt;
use std::str::FromStr;

use crate::argset::ArgId;
use crate::framework::Framework;

/// How the branching argument is chosen among the undecided ones.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PickStrategy {
    /// Lowest declaration index.
    #[default]
    Lowest,
    /// Largest out-degree, ties to the lowest index.
    MaxOut,
    /// Largest in-degree, ties to the lowest index.
    MaxIn,
}

impl PickStrategy {
    pub fn pick(self, f: &Framework, candidates: impl Iterator<Item = ArgId>) -> Option<ArgId> {
        match self {
            PickStrategy::Lowest => candidates.min(),
            PickStrategy::MaxOut => best_by(candidates, |x| f.out_degree(x)),
            PickStrategy::MaxIn => best_by(candidates, |x| f.in_degree(x)),
        }
    }
}

fn best_by(it: impl Iterator<Item = ArgId>, key: impl Fn(ArgId) -> usize) -> Option<ArgId> {
    it.fold(None, |best: Option<(usize, ArgId)>, x| {
        let k = key(x);
        match best {
            Some((bk, bx)) if bk > k || (bk == k && bx < x) => Some((bk, bx)),
            _ => Some((k, x)),
        }
    })
    .map(|(_, x)| x)
}

impl FromStr for PickStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" | "lowest" => Ok(PickStrategy::Lowest),
            "max-out" => Ok(PickStrategy::MaxOut),
            "max-in" => Ok(PickStrategy::MaxIn),
            other => Err(format!("unknown pick order `{other}` (expected lex, max-out or max-in)")),
        }
    }
}

impl fmt::Display for PickStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PickStrategy::Lowest => "lex",
            PickStrategy::MaxOut => "max-out",
            PickStrategy::MaxIn => "max-in",
        })
    }
}

/// Result of running propagation to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    Fixpoint,
    DeadEnd,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub extensions: u64,
    /// Branching decisions taken.
    pub branches: u64,
    /// Arguments moved into the extension by propagation.
    pub propagations: u64,
    pub dead_ends: u64,
    /// False when the sink asked to stop early.
    pub complete: bool,
}
