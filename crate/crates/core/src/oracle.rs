//! Definition-level stability checks and exhaustive enumeration.
//!
//! Nothing here shares code with the search engines; it is the ground truth
//! they are tested against.

use thiserror::Error;

use crate::argset::{ArgId, ArgSet};
use crate::extension::Extension;
use crate::framework::Framework;

/// Largest number of free arguments the exhaustive routines accept.
pub const BRUTEFORCE_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exhaustive search over {size} arguments exceeds the limit of {limit}")]
pub struct TooLarge {
    pub size: usize,
    pub limit: usize,
}

/// `S⁺ = A ∖ S`.
pub fn is_stable(f: &Framework, s: &ArgSet) -> bool {
    let plus = f.attacked_by(s);
    let rest = ArgSet::full(f.len()).difference(s);
    plus == rest
}

pub fn is_conflict_free(f: &Framework, s: &ArgSet) -> bool {
    f.attacked_by(s).is_disjoint(s)
}

/// Every stable extension, ordered lexicographically by member list.
pub fn enumerate_bruteforce(f: &Framework) -> Result<Vec<Extension>, TooLarge> {
    let all = f.arguments().collect::<Vec<_>>();
    let mut out = completions_over(f, &f.empty_set(), &all)?;
    out.sort();
    Ok(out)
}

/// Every stable extension `T` with `base ⊆ T ⊆ base ∪ candidates`.
pub fn stable_completions(
    f: &Framework,
    base: &ArgSet,
    candidates: &ArgSet,
) -> Result<Vec<Extension>, TooLarge> {
    let free = candidates.difference(base).to_vec();
    let mut out = completions_over(f, base, &free)?;
    out.sort();
    Ok(out)
}

fn completions_over(
    f: &Framework,
    base: &ArgSet,
    free: &[ArgId],
) -> Result<Vec<Extension>, TooLarge> {
    if free.len() > BRUTEFORCE_LIMIT {
        return Err(TooLarge {
            size: free.len(),
            limit: BRUTEFORCE_LIMIT,
        });
    }
    if f.len() > 64 {
        // Fall back to the set-based check; only reachable with few free
        // arguments in a large framework.
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << free.len()) {
            let mut t = base.clone();
            for (bit, &x) in free.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    t.insert(x);
                }
            }
            if is_stable(f, &t) {
                out.push(Extension::from_set(&t));
            }
        }
        return Ok(out);
    }

    let n = f.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let succ: Vec<u64> = f
        .arguments()
        .map(|x| f.targets(x).iter().fold(0u64, |m, y| m | (1 << y.0)))
        .collect();
    let base_mask = base.iter().fold(0u64, |m, x| m | (1 << x.0));
    let base_plus = base.iter().fold(0u64, |m, x| m | succ[x.index()]);

    let mut out = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut t = base_mask;
        let mut plus = base_plus;
        for (bit, &x) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                t |= 1 << x.0;
                plus |= succ[x.index()];
            }
        }
        if plus == (!t & full) {
            out.push(Extension::new(
                (0..n).filter(|&i| t & (1 << i) != 0).map(ArgId::from).collect(),
            ));
        }
    }
    Ok(out)
}
