//! Runtime checks of the state properties both engines maintain, and an
//! exhaustive audit of every pruning decision.
//!
//! The checks recompute everything from the framework and the current state;
//! they share no bookkeeping with the engines.

use std::fmt;

use crate::argset::{ArgId, ArgSet};
use crate::framework::Framework;
use crate::label_enum::{Boundary, Label, LabelObserver, LabelState, Phase};
use crate::oracle;
use crate::set_enum::{SetObserver, SetState, SetStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `S ∩ S⁺ = ∅`
    ConflictFree,
    /// The stored `S⁺` equals the recomputed one.
    AttackedSet,
    /// `choice ⊆ A ∖ (S ∪ S⁺ ∪ S⁻)`
    ChoiceIsolated,
    /// `tabu = A ∖ (S ∪ S⁺ ∪ choice)`
    TabuComplement,
    /// Counter of a blank or must-out argument equals its blank attackers.
    CounterFresh,
    /// Counter tests agree with the set conditions they stand for.
    CounterEquivalence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantViolation {
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.rule, self.detail)
    }
}

fn violation(rule: Rule, detail: String) -> InvariantViolation {
    InvariantViolation { rule, detail }
}

/// Checks the three set-state properties against a recomputed `S⁺`.
pub fn check_set_state(f: &Framework, st: &SetState) -> Vec<InvariantViolation> {
    let mut out = Vec::new();
    let plus = f.attacked_by(&st.s);
    let minus = f.attackers_of(&st.s);
    if plus != st.s_plus {
        out.push(violation(
            Rule::AttackedSet,
            format!("stored {:?}, recomputed {:?}", st.s_plus, plus),
        ));
    }
    if !st.s.is_disjoint(&plus) {
        out.push(violation(
            Rule::ConflictFree,
            format!("{:?} attacks itself", st.s.intersection(&plus)),
        ));
    }
    let blocked = st.s.union(&plus).union(&minus);
    if !st.choice.is_disjoint(&blocked) {
        out.push(violation(
            Rule::ChoiceIsolated,
            format!("{:?} in choice", st.choice.intersection(&blocked)),
        ));
    }
    let expected_tabu = ArgSet::full(f.len()).difference(&st.s.union(&plus).union(&st.choice));
    if st.tabu != expected_tabu {
        out.push(violation(
            Rule::TabuComplement,
            format!("tabu {:?}, expected {:?}", st.tabu, expected_tabu),
        ));
    }
    out
}

/// Checks a labelling: the label classes must satisfy the set-state
/// properties (with `S⁺` recomputed from the in-labelled arguments), the
/// counters of blank and must-out arguments must be fresh, and the three
/// counter tests must agree with their set conditions.
pub fn check_label_state(f: &Framework, st: &LabelState) -> Vec<InvariantViolation> {
    let view = st.as_set_state();
    let mut out = check_set_state(f, &view);
    let plus = f.attacked_by(&view.s);

    for x in f.arguments() {
        let label = st.label(x);
        if !matches!(label, Label::Blank | Label::MustOut) {
            continue;
        }
        let blank_attackers = f
            .attackers(x)
            .iter()
            .filter(|&&y| st.label(y) == Label::Blank)
            .count() as u32;
        if st.counter(x) != blank_attackers {
            out.push(violation(
                Rule::CounterFresh,
                format!(
                    "{}: counter {}, blank attackers {}",
                    f.name(x),
                    st.counter(x),
                    blank_attackers
                ),
            ));
        }
    }

    for x in f.arguments() {
        let label = st.label(x);
        let count = st.counter(x);
        let in_tabu = view.tabu.contains(x);
        let in_choice = view.choice.contains(x);
        let unattackable = f
            .attackers(x)
            .iter()
            .all(|&y| plus.contains(y) || view.tabu.contains(y));
        let choice_attackers = f
            .attackers(x)
            .iter()
            .filter(|&&y| view.choice.contains(y))
            .count();
        let checks = [
            (
                "must-out with counter 0",
                label == Label::MustOut && count == 0,
                in_tabu && unattackable,
            ),
            (
                "blank with counter 0",
                label == Label::Blank && count == 0,
                in_choice && unattackable,
            ),
            (
                "must-out with counter 1",
                label == Label::MustOut && count == 1,
                in_tabu && choice_attackers == 1,
            ),
        ];
        for (what, counter_side, set_side) in checks {
            if counter_side != set_side {
                out.push(violation(
                    Rule::CounterEquivalence,
                    format!(
                        "{}: {what} is {counter_side}, set condition is {set_side}",
                        f.name(x)
                    ),
                ));
            }
        }
    }
    out
}

/// Observer that runs the state checks at every set-engine state change and
/// at every completed labelling state boundary.
#[derive(Debug, Default)]
pub struct InvariantMonitor {
    pub checks: u64,
    pub violations: Vec<InvariantViolation>,
}

impl InvariantMonitor {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl SetObserver for InvariantMonitor {
    fn state(&mut self, f: &Framework, state: &SetState, _step: SetStep) {
        self.checks += 1;
        self.violations.extend(check_set_state(f, state));
    }
}

impl LabelObserver for InvariantMonitor {
    fn boundary(&mut self, f: &Framework, state: &LabelState, b: Boundary) {
        // An aborted decision leaves the labelling mid-update.
        if b.phase == Phase::Abort {
            return;
        }
        self.checks += 1;
        self.violations.extend(
            check_label_state(f, state)
                .into_iter()
                .map(|mut v| {
                    v.detail = format!("state {} ({:?}): {}", b.state_id, b.phase, v.detail);
                    v
                }),
        );
    }
}

/// A pruning decision that exhaustive search refutes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// A stable completion of the state omits the forced argument.
    Forced { arg: String, completion: Vec<String> },
    /// A stable completion exists although the branch was pruned.
    DeadEnd { completion: Vec<String> },
}

/// Observer that confirms every forcing and every dead end by enumerating
/// the stable extensions `T` with `S ⊆ T ⊆ S ∪ choice`.
///
/// Exponential in the number of undecided arguments; desk scale only.
#[derive(Debug, Default)]
pub struct PruningAudit {
    pub forced_checked: u64,
    pub dead_ends_checked: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl PruningAudit {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn check_forced(&mut self, f: &Framework, base: &ArgSet, choice: &ArgSet, x: ArgId) {
        self.forced_checked += 1;
        let completions =
            oracle::stable_completions(f, base, choice).expect("audit limited to small frameworks");
        if let Some(t) = completions.iter().find(|t| !t.contains(x)) {
            self.counterexamples.push(Counterexample::Forced {
                arg: f.name(x).to_string(),
                completion: t.names(f).into_iter().map(String::from).collect(),
            });
        }
    }

    fn check_dead_end(&mut self, f: &Framework, base: &ArgSet, choice: &ArgSet) {
        self.dead_ends_checked += 1;
        let completions =
            oracle::stable_completions(f, base, choice).expect("audit limited to small frameworks");
        if let Some(t) = completions.first() {
            self.counterexamples.push(Counterexample::DeadEnd {
                completion: t.names(f).into_iter().map(String::from).collect(),
            });
        }
    }
}

impl SetObserver for PruningAudit {
    fn forced(&mut self, f: &Framework, state: &SetState, x: ArgId) {
        self.check_forced(f, &state.s, &state.choice, x);
    }

    fn dead_end(&mut self, f: &Framework, state: &SetState) {
        self.check_dead_end(f, &state.s, &state.choice);
    }
}

impl LabelObserver for PruningAudit {
    fn forced(&mut self, f: &Framework, state: &LabelState, x: ArgId) {
        let base = state.with_label(Label::In);
        let choice = state.with_label(Label::Blank);
        self.check_forced(f, &base, &choice, x);
    }

    fn dead_end(&mut self, f: &Framework, state: &LabelState) {
        let base = state.with_label(Label::In);
        let choice = state.with_label(Label::Blank);
        self.check_dead_end(f, &base, &choice);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::six;

    #[test]
    fn detects_broken_set_state() {
        let f = six();
        let mut st = SetState::initial(&f);
        assert!(check_set_state(&f, &st).is_empty());
        // a joins without updating anything else
        st.s.insert(f.id("a").unwrap());
        let rules: Vec<Rule> = check_set_state(&f, &st).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::AttackedSet));
        assert!(rules.contains(&Rule::ChoiceIsolated));
    }

    #[test]
    fn detects_conflict() {
        let f = six();
        let st = SetState {
            s: f.set_of_names(&["a", "b"]),
            s_plus: f.set_of_names(&["b", "c", "d"]),
            choice: f.empty_set(),
            tabu: f.set_of_names(&["e", "f"]),
        };
        let rules: Vec<Rule> = check_set_state(&f, &st).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::ConflictFree));
    }

    #[test]
    fn fresh_label_state_is_clean() {
        let f = six();
        assert!(check_label_state(&f, &LabelState::new(&f)).is_empty());
    }

    #[test]
    fn audit_flags_wrong_forcing() {
        let f = six();
        let st = SetState::initial(&f);
        let mut audit = PruningAudit::default();
        // b is not in every stable extension
        SetObserver::forced(&mut audit, &f, &st, f.id("b").unwrap());
        SetObserver::dead_end(&mut audit, &f, &st);
        assert_eq!(audit.counterexamples.len(), 2);
    }
}
