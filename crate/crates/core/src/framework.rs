//! Abstract argumentation frameworks: a set of arguments and a binary attack
//! relation, stored as forward and backward adjacency over dense indices.

use std::collections::HashMap;

use thiserror::Error;

use crate::argset::{ArgId, ArgSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("attack refers to undeclared argument `{0}`")]
    UnknownArgument(String),
}

/// Non-fatal observations made while building a framework.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildWarning {
    DuplicateArgument(String),
}

/// An immutable argumentation framework `(A, R)`.
///
/// Argument indices follow declaration order. `succ[x]` holds the arguments
/// attacked by `x` and `pred[x]` the arguments attacking `x`; both lists are
/// sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Framework {
    names: Vec<String>,
    lookup: HashMap<String, ArgId>,
    attacks: Vec<(ArgId, ArgId)>,
    succ: Vec<Vec<ArgId>>,
    pred: Vec<Vec<ArgId>>,
    self_loop: Vec<bool>,
}

impl Framework {
    /// Builds a framework from named arguments and named attacks. Duplicate
    /// names and duplicate attacks are collapsed.
    pub fn build<N, A, S>(names: N, attacks: A) -> Result<Framework, FrameworkError>
    where
        N: IntoIterator<Item = S>,
        A: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut builder = FrameworkBuilder::new();
        for name in names {
            builder.add_argument(name.as_ref());
        }
        for (from, to) in attacks {
            builder.add_named_attack(from.as_ref(), to.as_ref())?;
        }
        Ok(builder.build())
    }

    /// Builds a framework from argument names and attacks given as index
    /// pairs into `names`.
    pub fn from_indices(
        names: Vec<String>,
        attacks: impl IntoIterator<Item = (usize, usize)>,
    ) -> Framework {
        let mut builder = FrameworkBuilder::new();
        for name in &names {
            builder.add_argument(name);
        }
        for (from, to) in attacks {
            builder.add_attack(ArgId::from(from), ArgId::from(to));
        }
        builder.build()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn arguments(&self) -> impl ExactSizeIterator<Item = ArgId> {
        (0..self.names.len()).map(ArgId::from)
    }

    pub fn name(&self, id: ArgId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<ArgId> {
        self.lookup.get(name).copied()
    }

    /// Attack pairs in insertion order, deduplicated.
    pub fn attacks(&self) -> &[(ArgId, ArgId)] {
        &self.attacks
    }

    /// `{x}⁺`: the arguments attacked by `x`.
    #[inline]
    pub fn targets(&self, x: ArgId) -> &[ArgId] {
        &self.succ[x.index()]
    }

    /// `{x}⁻`: the arguments attacking `x`.
    #[inline]
    pub fn attackers(&self, x: ArgId) -> &[ArgId] {
        &self.pred[x.index()]
    }

    #[inline]
    pub fn attacks_itself(&self, x: ArgId) -> bool {
        self.self_loop[x.index()]
    }

    pub fn attacks_pair(&self, from: ArgId, to: ArgId) -> bool {
        self.succ[from.index()].binary_search(&to).is_ok()
    }

    pub fn empty_set(&self) -> ArgSet {
        ArgSet::empty(self.len())
    }

    pub fn set_of<I: IntoIterator<Item = ArgId>>(&self, ids: I) -> ArgSet {
        ArgSet::from_ids(self.len(), ids)
    }

    /// Looks up every name; panics on an unknown one. Intended for fixtures.
    pub fn set_of_names(&self, names: &[&str]) -> ArgSet {
        self.set_of(names.iter().map(|n| {
            self.id(n)
                .unwrap_or_else(|| panic!("unknown argument `{n}`"))
        }))
    }

    /// `T⁺`
    pub fn attacked_by(&self, set: &ArgSet) -> ArgSet {
        let mut out = self.empty_set();
        for x in set.iter() {
            for &y in self.targets(x) {
                out.insert(y);
            }
        }
        out
    }

    /// `T⁻`
    pub fn attackers_of(&self, set: &ArgSet) -> ArgSet {
        let mut out = self.empty_set();
        for x in set.iter() {
            for &y in self.attackers(x) {
                out.insert(y);
            }
        }
        out
    }

    /// Splits the arguments into those that may still join an extension and
    /// those that attack themselves and never can.
    pub fn initial_partition(&self) -> (ArgSet, ArgSet) {
        let mut choice = self.empty_set();
        let mut tabu = self.empty_set();
        for x in self.arguments() {
            if self.attacks_itself(x) {
                tabu.insert(x);
            } else {
                choice.insert(x);
            }
        }
        (choice, tabu)
    }

    pub fn out_degree(&self, x: ArgId) -> usize {
        self.succ[x.index()].len()
    }

    pub fn in_degree(&self, x: ArgId) -> usize {
        self.pred[x.index()].len()
    }
}

/// Incremental construction of a [`Framework`].
#[derive(Debug, Default)]
pub struct FrameworkBuilder {
    names: Vec<String>,
    lookup: HashMap<String, ArgId>,
    attacks: Vec<(ArgId, ArgId)>,
    warnings: Vec<BuildWarning>,
}

impl FrameworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an argument, returning its id. A repeated name yields the
    /// existing id and records a warning.
    pub fn add_argument(&mut self, name: &str) -> ArgId {
        if let Some(&id) = self.lookup.get(name) {
            self.warnings
                .push(BuildWarning::DuplicateArgument(name.to_string()));
            return id;
        }
        let id = ArgId::from(self.names.len());
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<ArgId> {
        self.lookup.get(name).copied()
    }

    pub fn add_attack(&mut self, from: ArgId, to: ArgId) {
        assert!(
            from.index() < self.names.len() && to.index() < self.names.len(),
            "attack endpoint out of range"
        );
        self.attacks.push((from, to));
    }

    pub fn add_named_attack(&mut self, from: &str, to: &str) -> Result<(), FrameworkError> {
        let a = self
            .id(from)
            .ok_or_else(|| FrameworkError::UnknownArgument(from.to_string()))?;
        let b = self
            .id(to)
            .ok_or_else(|| FrameworkError::UnknownArgument(to.to_string()))?;
        self.add_attack(a, b);
        Ok(())
    }

    pub fn warnings(&self) -> &[BuildWarning] {
        &self.warnings
    }

    pub fn build(self) -> Framework {
        let n = self.names.len();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        let mut attacks = Vec::with_capacity(self.attacks.len());
        let mut seen = std::collections::HashSet::with_capacity(self.attacks.len());
        for (a, b) in self.attacks {
            if seen.insert((a, b)) {
                attacks.push((a, b));
                succ[a.index()].push(b);
                pred[b.index()].push(a);
            }
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
        }
        let self_loop = (0..n)
            .map(|x| succ[x].binary_search(&ArgId::from(x)).is_ok())
            .collect();
        Framework {
            names: self.names,
            lookup: self.lookup,
            attacks,
            succ,
            pred,
            self_loop,
        }
    }
}
