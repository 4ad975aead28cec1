//! Set-based backtracking enumeration of stable extensions.
//!
//! The search state keeps four sets: the extension under construction `S`,
//! the arguments it attacks `S⁺`, the arguments still eligible to join
//! (`choice`) and the arguments excluded from `S` but not yet attacked by it
//! (`tabu`). Each call propagates forced arguments to a fixpoint, then
//! branches on one `choice` argument: first with it in `S`, then with it in
//! `tabu`.
//!
//! This engine copies the state at every branch and recomputes the
//! propagation conditions from scratch. It is the readable reference; the
//! labelling engine in [`crate::label_enum`] is the fast path.

use std::ops::ControlFlow;

use crate::argset::{ArgId, ArgSet};
use crate::extension::Extension;
use crate::framework::Framework;
use crate::search::{PickStrategy, Propagation, SearchStats};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetState {
    pub s: ArgSet,
    pub s_plus: ArgSet,
    pub choice: ArgSet,
    pub tabu: ArgSet,
}

/// What produced a new search state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetStep {
    Initial,
    /// Every `choice` argument with no attacker left in `S ∪ choice` joined.
    Alpha,
    /// The sole `choice` attacker of some `tabu` argument joined.
    Beta(ArgId),
    /// Branch: the argument joined `S`.
    Include(ArgId),
    /// Branch: the argument moved from `choice` to `tabu`.
    Exclude(ArgId),
}

/// Hooks into the set engine. All methods default to no-ops.
pub trait SetObserver {
    /// Called after every state change.
    fn state(&mut self, _f: &Framework, _state: &SetState, _step: SetStep) {}
    /// Called before `x` is joined by propagation, with the state that
    /// forces it.
    fn forced(&mut self, _f: &Framework, _state: &SetState, _x: ArgId) {}
    /// Called when the dead-end test prunes the branch at `state`.
    fn dead_end(&mut self, _f: &Framework, _state: &SetState) {}
}

impl SetObserver for () {}

impl<O: SetObserver + ?Sized> SetObserver for &mut O {
    fn state(&mut self, f: &Framework, state: &SetState, step: SetStep) {
        (**self).state(f, state, step)
    }
    fn forced(&mut self, f: &Framework, state: &SetState, x: ArgId) {
        (**self).forced(f, state, x)
    }
    fn dead_end(&mut self, f: &Framework, state: &SetState) {
        (**self).dead_end(f, state)
    }
}

impl SetState {
    /// `S = ∅`, `choice` = non-self-attacking arguments, `tabu` = the rest.
    pub fn initial(f: &Framework) -> Self {
        let (choice, tabu) = f.initial_partition();
        SetState {
            s: f.empty_set(),
            s_plus: f.empty_set(),
            choice,
            tabu,
        }
    }

    /// `{x}⁻ ⊆ S⁺ ∪ tabu`
    fn unattackable(&self, f: &Framework, x: ArgId) -> bool {
        f.attackers(x)
            .iter()
            .all(|&y| self.s_plus.contains(y) || self.tabu.contains(y))
    }

    /// Some `tabu` argument can no longer be attacked by any extension of
    /// `S` drawn from `choice`, so the branch holds no stable extension.
    pub fn dead_end(&self, f: &Framework) -> bool {
        self.tabu.iter().any(|x| self.unattackable(f, x))
    }

    /// The `choice` arguments whose attackers all lie in `S⁺ ∪ tabu`.
    pub fn find_alpha(&self, f: &Framework) -> ArgSet {
        f.set_of(self.choice.iter().filter(|&x| self.unattackable(f, x)))
    }

    /// A `choice` argument that is the only `choice` attacker of some `tabu`
    /// argument. The `tabu` witness with the lowest index wins.
    pub fn find_beta(&self, f: &Framework) -> Option<ArgId> {
        self.tabu.iter().find_map(|x| {
            let mut it = f
                .attackers(x)
                .iter()
                .copied()
                .filter(|&y| self.choice.contains(y));
            match (it.next(), it.next()) {
                (Some(y), None) => Some(y),
                _ => None,
            }
        })
    }

    /// Moves `delta ⊆ choice` into `S`.
    pub fn join(&mut self, f: &Framework, delta: &ArgSet) {
        if delta.is_empty() {
            return;
        }
        let plus = f.attacked_by(delta);
        let minus = f.attackers_of(delta);
        self.s.union_with(delta);
        self.s_plus.union_with(&plus);
        self.choice.difference_with(delta);
        self.choice.difference_with(&plus);
        self.choice.difference_with(&minus);
        self.tabu.union_with(&minus);
        self.tabu.difference_with(&self.s_plus);
    }

    /// The second branch: keep `x` out of `S` for good.
    pub fn exclude(&mut self, x: ArgId) {
        self.choice.remove(x);
        self.tabu.insert(x);
    }

    /// Alternates the dead-end test, the α join and the β join until neither
    /// adds anything.
    pub fn propagate<O: SetObserver>(&mut self, f: &Framework, obs: &mut O) -> Propagation {
        loop {
            if self.dead_end(f) {
                obs.dead_end(f, self);
                return Propagation::DeadEnd;
            }
            let alpha = self.find_alpha(f);
            if !alpha.is_empty() {
                for x in alpha.iter() {
                    obs.forced(f, self, x);
                }
                self.join(f, &alpha);
                obs.state(f, self, SetStep::Alpha);
            }
            let beta = self.find_beta(f);
            if let Some(y) = beta {
                obs.forced(f, self, y);
                self.join(f, &f.set_of([y]));
                obs.state(f, self, SetStep::Beta(y));
            }
            if alpha.is_empty() && beta.is_none() {
                return Propagation::Fixpoint;
            }
        }
    }

    /// `choice = ∅` and `tabu = ∅`; then `S` is stable.
    pub fn is_solution(&self) -> bool {
        self.choice.is_empty() && self.tabu.is_empty()
    }
}

/// Enumerates every stable extension, handing each to `sink` in discovery
/// order. The sink may stop the search by returning `Break`.
pub fn enumerate<F>(f: &Framework, pick: PickStrategy, sink: F) -> SearchStats
where
    F: FnMut(&Extension) -> ControlFlow<()>,
{
    enumerate_observed(f, pick, &mut (), sink)
}

pub fn enumerate_observed<O, F>(
    f: &Framework,
    pick: PickStrategy,
    obs: &mut O,
    mut sink: F,
) -> SearchStats
where
    O: SetObserver,
    F: FnMut(&Extension) -> ControlFlow<()>,
{
    let mut run = Run {
        f,
        pick,
        obs,
        sink: &mut sink,
        stats: SearchStats::default(),
    };
    let state = SetState::initial(f);
    run.obs.state(f, &state, SetStep::Initial);
    let flow = run.stb(state);
    run.stats.complete = flow.is_continue();
    run.stats
}

pub fn collect(f: &Framework, pick: PickStrategy) -> Vec<Extension> {
    let mut out = Vec::new();
    enumerate(f, pick, |e| {
        out.push(e.clone());
        ControlFlow::Continue(())
    });
    out
}

struct Run<'a, O, F> {
    f: &'a Framework,
    pick: PickStrategy,
    obs: &'a mut O,
    sink: &'a mut F,
    stats: SearchStats,
}

impl<O, F> Run<'_, O, F>
where
    O: SetObserver,
    F: FnMut(&Extension) -> ControlFlow<()>,
{
    fn stb(&mut self, mut state: SetState) -> ControlFlow<()> {
        let f = self.f;
        let before = state.s.len();
        let outcome = state.propagate(f, self.obs);
        self.stats.propagations += (state.s.len() - before) as u64;
        if outcome == Propagation::DeadEnd {
            self.stats.dead_ends += 1;
            return ControlFlow::Continue(());
        }
        let Some(x) = self.pick.pick(f, state.choice.iter()) else {
            if state.tabu.is_empty() {
                self.stats.extensions += 1;
                return (self.sink)(&Extension::from_set(&state.s));
            }
            return ControlFlow::Continue(());
        };
        self.stats.branches += 1;

        let mut with = state.clone();
        with.join(f, &f.set_of([x]));
        self.obs.state(f, &with, SetStep::Include(x));
        self.stb(with)?;

        state.exclude(x);
        self.obs.state(f, &state, SetStep::Exclude(x));
        self.stb(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::six;

    fn st(f: &Framework, s: &[&str], s_plus: &[&str], choice: &[&str], tabu: &[&str]) -> SetState {
        SetState {
            s: f.set_of_names(s),
            s_plus: f.set_of_names(s_plus),
            choice: f.set_of_names(choice),
            tabu: f.set_of_names(tabu),
        }
    }

    #[test]
    fn dead_end_cases() {
        let f = six();
        assert!(st(&f, &["d"], &["b", "e", "f"], &["c"], &["a"]).dead_end(&f));
        assert!(!st(&f, &[], &[], &["b", "c", "d", "e", "f"], &["a"]).dead_end(&f));
        assert!(!SetState::initial(&f).dead_end(&f));
    }

    #[test]
    fn alpha_cases() {
        let f = six();
        let s = st(&f, &["a"], &["b"], &["c", "d"], &["e", "f"]);
        assert_eq!(s.find_alpha(&f), f.set_of_names(&["c", "d"]));
        let s = st(&f, &[], &[], &["c", "d", "e", "f"], &["a", "b"]);
        assert_eq!(s.find_alpha(&f), f.set_of_names(&["d"]));
        let s = st(&f, &["a", "c", "d"], &["b", "e", "f"], &[], &[]);
        assert!(s.find_alpha(&f).is_empty());
    }

    #[test]
    fn beta_cases() {
        let g = Framework::build(["x", "y"], [("y", "y"), ("x", "y")]).unwrap();
        let s = SetState::initial(&g);
        assert_eq!(s.find_beta(&g), g.id("x"));

        let f = six();
        assert_eq!(SetState::initial(&f).find_beta(&f), None);
        let s = st(&f, &[], &[], &["b", "c", "d", "e", "f"], &["a"]);
        assert_eq!(s.find_beta(&f), None);
    }

    #[test]
    fn beta_tie_break() {
        // t1 and t2 are tabu (self-attacking); t2 has the single choice
        // attacker p, t1 has the single choice attacker q. t1 has the lower
        // index so q wins.
        let g = Framework::build(
            ["t1", "t2", "p", "q"],
            [("t1", "t1"), ("t2", "t2"), ("p", "t2"), ("q", "t1")],
        )
        .unwrap();
        assert_eq!(SetState::initial(&g).find_beta(&g), g.id("q"));
    }

    #[test]
    fn join_traces() {
        let f = six();
        let mut s = SetState::initial(&f);
        s.join(&f, &f.set_of_names(&["a"]));
        assert_eq!(s, st(&f, &["a"], &["b"], &["c", "d"], &["e", "f"]));
        s.join(&f, &f.set_of_names(&["c", "d"]));
        assert_eq!(s, st(&f, &["a", "c", "d"], &["b", "e", "f"], &[], &[]));
        assert!(s.is_solution());

        let before = s.clone();
        s.join(&f, &f.empty_set());
        assert_eq!(s, before);
    }

    #[test]
    fn propagate_traces() {
        let f = six();
        let mut s = SetState::initial(&f);
        s.join(&f, &f.set_of_names(&["a"]));
        assert_eq!(s.propagate(&f, &mut ()), Propagation::Fixpoint);
        assert_eq!(s, st(&f, &["a", "c", "d"], &["b", "e", "f"], &[], &[]));

        let mut s = st(&f, &[], &[], &["c", "d", "e", "f"], &["a", "b"]);
        assert_eq!(s.propagate(&f, &mut ()), Propagation::DeadEnd);
        assert_eq!(s, st(&f, &["d"], &["b", "e", "f"], &["c"], &["a"]));

        let g = Framework::build(["x", "y", "z"], Vec::<(&str, &str)>::new()).unwrap();
        let mut s = SetState::initial(&g);
        assert_eq!(s.propagate(&g, &mut ()), Propagation::Fixpoint);
        assert_eq!(s.s, ArgSet::full(3));
        assert!(s.is_solution());
    }

    #[test]
    fn is_solution_cases() {
        let f = six();
        assert!(st(&f, &["b", "e"], &["a", "c", "d", "f"], &[], &[]).is_solution());
        assert!(!st(&f, &["d"], &["b", "e", "f"], &[], &["a"]).is_solution());
    }

    #[test]
    fn six_in_order() {
        let f = six();
        let exts = collect(&f, PickStrategy::Lowest);
        let names: Vec<Vec<&str>> = exts.iter().map(|e| e.names(&f)).collect();
        assert_eq!(names, vec![vec!["a", "c", "d"], vec!["b", "e"]]);
    }

    #[test]
    fn empty_framework() {
        let f = Framework::build::<_, _, &str>([], []).unwrap();
        assert_eq!(collect(&f, PickStrategy::Lowest), vec![Extension::new(vec![])]);
    }

    #[test]
    fn stop_after_first() {
        let f = six();
        let mut seen = 0;
        let stats = enumerate(&f, PickStrategy::Lowest, |_| {
            seen += 1;
            ControlFlow::Break(())
        });
        assert_eq!(seen, 1);
        assert!(!stats.complete);
    }

    /// Replays the six-argument walk-through: pick a, propagate, backtrack,
    /// exclude a, pick b, propagate, backtrack, exclude b, propagate.
    #[test]
    fn walkthrough_states() {
        let f = six();
        let mut steps = Vec::new();
        struct Rec<'a>(&'a mut Vec<(SetStep, SetState)>);
        impl SetObserver for Rec<'_> {
            fn state(&mut self, _f: &Framework, s: &SetState, step: SetStep) {
                self.0.push((step, s.clone()));
            }
        }
        enumerate_observed(&f, PickStrategy::Lowest, &mut Rec(&mut steps), |_| {
            ControlFlow::Continue(())
        });
        let id = |n: &str| f.id(n).unwrap();
        let expected = vec![
            (SetStep::Initial, st(&f, &[], &[], &["a", "b", "c", "d", "e", "f"], &[])),
            (SetStep::Include(id("a")), st(&f, &["a"], &["b"], &["c", "d"], &["e", "f"])),
            (SetStep::Alpha, st(&f, &["a", "c", "d"], &["b", "e", "f"], &[], &[])),
            (SetStep::Exclude(id("a")), st(&f, &[], &[], &["b", "c", "d", "e", "f"], &["a"])),
            (SetStep::Include(id("b")), st(&f, &["b"], &["c", "d"], &["e", "f"], &["a"])),
            (SetStep::Alpha, st(&f, &["b", "e"], &["a", "c", "d", "f"], &[], &[])),
            (SetStep::Exclude(id("b")), st(&f, &[], &[], &["c", "d", "e", "f"], &["a", "b"])),
            (SetStep::Alpha, st(&f, &["d"], &["b", "e", "f"], &["c"], &["a"])),
        ];
        assert_eq!(steps, expected);
    }
}
