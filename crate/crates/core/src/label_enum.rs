//! Labelling-based enumeration of stable extensions with attacker counters.
//!
//! Every argument carries a [`Label`]: `In` arguments form the extension
//! under construction, `Out` arguments are attacked by it, `Blank` arguments
//! are still undecided and `MustOut` arguments are excluded but still need an
//! attacker from the extension. For blank and must-out arguments the counter
//! holds the number of blank attackers, which turns the propagation tests
//! into constant-time checks:
//!
//! * must-out with counter 0: nothing can attack it any more, dead end;
//! * blank with counter 0: it must join, push it on the worklist;
//! * must-out with counter 1: its one blank attacker must join.
//!
//! Counters of in/out arguments are never read and go stale.
//!
//! Backtracking uses a trail of overwritten values with checkpoint markers.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::argset::{ArgId, ArgSet};
use crate::extension::Extension;
use crate::framework::Framework;
use crate::search::{PickStrategy, Propagation, SearchStats};
use crate::set_enum::SetState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Blank,
    In,
    Out,
    MustOut,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Blank => "blank",
            Label::In => "in",
            Label::Out => "out",
            Label::MustOut => "must_out",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The branch being explored holds no stable extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("dead end")]
pub struct DeadEnd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("rollback without a matching checkpoint")]
pub struct UnbalancedRollback;

/// The two decisions that open a new search state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// An argument taken off the worklist is labelled `In`.
    Assign,
    /// A branching argument is labelled `MustOut` after its `In` branch.
    Exclude,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Before the decision is applied.
    Enter,
    /// After the decision and its counter updates completed.
    Exit,
    /// The decision hit a dead end part-way; the state is mid-update.
    Abort,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Enter => "enter",
            Phase::Exit => "exit",
            Phase::Abort => "abort",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub state_id: u64,
    pub kind: BoundaryKind,
    pub phase: Phase,
    pub arg: ArgId,
}

/// Copy of the observable part of a [`LabelState`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub mu: Vec<Label>,
    pub pi: Vec<u32>,
    pub gamma: Vec<ArgId>,
}

/// A recorded state boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub state_id: u64,
    pub kind: BoundaryKind,
    pub phase: Phase,
    pub arg: ArgId,
    pub snapshot: Snapshot,
}

/// Hooks into the labelling engine. All methods default to no-ops.
pub trait LabelObserver {
    fn boundary(&mut self, _f: &Framework, _state: &LabelState, _b: Boundary) {}
    /// `x` was pushed on the worklist by a counter trigger.
    fn forced(&mut self, _f: &Framework, _state: &LabelState, _x: ArgId) {}
    fn dead_end(&mut self, _f: &Framework, _state: &LabelState) {}
    /// Called right after a checkpoint was taken.
    fn checkpoint(&mut self, _state: &LabelState) {}
    /// Called right after a rollback completed.
    fn rollback(&mut self, _state: &LabelState) {}
}

impl LabelObserver for () {}

impl<O: LabelObserver + ?Sized> LabelObserver for &mut O {
    fn boundary(&mut self, f: &Framework, state: &LabelState, b: Boundary) {
        (**self).boundary(f, state, b)
    }
    fn forced(&mut self, f: &Framework, state: &LabelState, x: ArgId) {
        (**self).forced(f, state, x)
    }
    fn dead_end(&mut self, f: &Framework, state: &LabelState) {
        (**self).dead_end(f, state)
    }
    fn checkpoint(&mut self, state: &LabelState) {
        (**self).checkpoint(state)
    }
    fn rollback(&mut self, state: &LabelState) {
        (**self).rollback(state)
    }
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Label(ArgId, Label),
    Counter(ArgId, u32),
    Pushed(ArgId),
    Popped(ArgId),
}

#[derive(Clone, Debug)]
pub struct LabelState {
    mu: Vec<Label>,
    pi: Vec<u32>,
    gamma: BTreeSet<ArgId>,
    trail: Vec<Undo>,
    checkpoints: Vec<usize>,
    blank: usize,
    must_out: usize,
    next_state_id: u64,
    assigned: u64,
}

impl LabelState {
    /// Self-attacking arguments start `MustOut`, the rest `Blank`; counters
    /// hold the number of non-self-attacking attackers; the worklist holds
    /// the blank arguments without such attackers.
    pub fn new(f: &Framework) -> Self {
        let mu: Vec<Label> = f
            .arguments()
            .map(|x| {
                if f.attacks_itself(x) {
                    Label::MustOut
                } else {
                    Label::Blank
                }
            })
            .collect();
        let pi: Vec<u32> = f
            .arguments()
            .map(|x| {
                f.attackers(x)
                    .iter()
                    .filter(|&&y| !f.attacks_itself(y))
                    .count() as u32
            })
            .collect();
        let gamma = f
            .arguments()
            .filter(|x| mu[x.index()] == Label::Blank && pi[x.index()] == 0)
            .collect();
        let must_out = mu.iter().filter(|&&l| l == Label::MustOut).count();
        LabelState {
            blank: mu.len() - must_out,
            must_out,
            mu,
            pi,
            gamma,
            trail: Vec::new(),
            checkpoints: Vec::new(),
            next_state_id: 1,
            assigned: 0,
        }
    }

    #[inline]
    pub fn label(&self, x: ArgId) -> Label {
        self.mu[x.index()]
    }

    #[inline]
    pub fn counter(&self, x: ArgId) -> u32 {
        self.pi[x.index()]
    }

    pub fn labels(&self) -> &[Label] {
        &self.mu
    }

    pub fn counters(&self) -> &[u32] {
        &self.pi
    }

    pub fn worklist(&self) -> impl Iterator<Item = ArgId> + '_ {
        self.gamma.iter().copied()
    }

    pub fn blank_count(&self) -> usize {
        self.blank
    }

    pub fn must_out_count(&self) -> usize {
        self.must_out
    }

    pub fn with_label(&self, label: Label) -> ArgSet {
        let mut out = ArgSet::empty(self.mu.len());
        for (i, &l) in self.mu.iter().enumerate() {
            if l == label {
                out.insert(ArgId::from(i));
            }
        }
        out
    }

    /// Reads the labelling as a set-engine state: in → `S`, out → `S⁺`,
    /// blank → `choice`, must-out → `tabu`.
    pub fn as_set_state(&self) -> SetState {
        SetState {
            s: self.with_label(Label::In),
            s_plus: self.with_label(Label::Out),
            choice: self.with_label(Label::Blank),
            tabu: self.with_label(Label::MustOut),
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            mu: self.mu.clone(),
            pi: self.pi.clone(),
            gamma: self.gamma.iter().copied().collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.checkpoints.len()
    }

    /// No blank and no must-out argument is left; the in-labelled arguments
    /// then form a stable extension.
    pub fn is_solution(&self) -> bool {
        self.blank == 0 && self.must_out == 0
    }

    pub fn checkpoint(&mut self) {
        self.checkpoints.push(self.trail.len());
    }

    /// Restores labels, counters and worklist to the most recent checkpoint
    /// and discards it.
    pub fn rollback(&mut self) -> Result<(), UnbalancedRollback> {
        let mark = self.checkpoints.pop().ok_or(UnbalancedRollback)?;
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Label(x, old) => self.write_label(x, old),
                Undo::Counter(x, old) => self.pi[x.index()] = old,
                Undo::Pushed(x) => {
                    self.gamma.remove(&x);
                }
                Undo::Popped(x) => {
                    self.gamma.insert(x);
                }
            }
        }
        Ok(())
    }

    fn write_label(&mut self, x: ArgId, label: Label) {
        let slot = &mut self.mu[x.index()];
        match *slot {
            Label::Blank => self.blank -= 1,
            Label::MustOut => self.must_out -= 1,
            _ => {}
        }
        match label {
            Label::Blank => self.blank += 1,
            Label::MustOut => self.must_out += 1,
            _ => {}
        }
        *slot = label;
    }

    fn set_label(&mut self, x: ArgId, label: Label) {
        let old = self.mu[x.index()];
        self.trail.push(Undo::Label(x, old));
        self.write_label(x, label);
    }

    fn decrement(&mut self, x: ArgId) -> u32 {
        let old = self.pi[x.index()];
        self.trail.push(Undo::Counter(x, old));
        let new = old - 1;
        self.pi[x.index()] = new;
        new
    }

    /// Adds `x` to the worklist.
    pub fn push(&mut self, x: ArgId) {
        if self.gamma.insert(x) {
            self.trail.push(Undo::Pushed(x));
        }
    }

    fn pop(&mut self, x: ArgId) {
        if self.gamma.remove(&x) {
            self.trail.push(Undo::Popped(x));
        }
    }

    fn force<O: LabelObserver>(&mut self, f: &Framework, x: ArgId, obs: &mut O) {
        self.push(x);
        obs.forced(f, self, x);
    }

    fn open(&mut self, kind: BoundaryKind, arg: ArgId) -> Boundary {
        let state_id = self.next_state_id;
        self.next_state_id += 1;
        Boundary {
            state_id,
            kind,
            phase: Phase::Enter,
            arg,
        }
    }

    /// `z` just stopped being blank: decrement the counter of each of its
    /// targets and apply the three triggers.
    fn release<O: LabelObserver>(
        &mut self,
        f: &Framework,
        z: ArgId,
        obs: &mut O,
    ) -> Result<(), DeadEnd> {
        for &x in f.targets(z) {
            let count = self.decrement(x);
            match (self.label(x), count) {
                (Label::MustOut, 0) => return Err(DeadEnd),
                (Label::Blank, 0) => self.force(f, x, obs),
                (Label::MustOut, 1) => {
                    for &y in f.attackers(x) {
                        if self.label(y) == Label::Blank {
                            self.force(f, y, obs);
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Takes `q` off the worklist and labels it `In`. Its must-out targets
    /// become out; each blank neighbour becomes out (if attacked by `q`) or
    /// must-out (if attacking `q`) and releases its targets' counters.
    pub fn assign_in<O: LabelObserver>(
        &mut self,
        f: &Framework,
        q: ArgId,
        obs: &mut O,
    ) -> Result<(), DeadEnd> {
        debug_assert_eq!(self.label(q), Label::Blank);
        let mut b = self.open(BoundaryKind::Assign, q);
        obs.boundary(f, self, b);
        self.assigned += 1;

        self.pop(q);
        self.set_label(q, Label::In);
        let targets = f.targets(q);
        for &z in targets {
            if self.label(z) == Label::MustOut {
                self.set_label(z, Label::Out);
            }
        }
        for z in merge_sorted(f.attackers(q), targets) {
            if self.label(z) != Label::Blank {
                continue;
            }
            let attacked = targets.binary_search(&z).is_ok();
            self.set_label(z, if attacked { Label::Out } else { Label::MustOut });
            if let Err(e) = self.release(f, z, obs) {
                b.phase = Phase::Abort;
                obs.boundary(f, self, b);
                obs.dead_end(f, self);
                return Err(e);
            }
        }
        b.phase = Phase::Exit;
        obs.boundary(f, self, b);
        Ok(())
    }

    /// Runs [`assign_in`](Self::assign_in) on the lowest worklist entry until
    /// the worklist is empty.
    ///
    /// An entry that is no longer blank when popped was forced in by an
    /// earlier state: if it is already in, it is dropped; if it has since
    /// been excluded, the branch is contradictory and reported as a dead end.
    pub fn drain<O: LabelObserver>(&mut self, f: &Framework, obs: &mut O) -> Propagation {
        while let Some(&q) = self.gamma.first() {
            match self.label(q) {
                Label::Blank => {
                    if self.assign_in(f, q, obs).is_err() {
                        return Propagation::DeadEnd;
                    }
                }
                Label::In => self.pop(q),
                Label::Out | Label::MustOut => {
                    obs.dead_end(f, self);
                    return Propagation::DeadEnd;
                }
            }
        }
        Propagation::Fixpoint
    }

    /// Labels the blank argument `x` must-out and releases its targets'
    /// counters. Triggered arguments accumulate on the worklist.
    pub fn mark_must_out<O: LabelObserver>(
        &mut self,
        f: &Framework,
        x: ArgId,
        obs: &mut O,
    ) -> Result<(), DeadEnd> {
        debug_assert_eq!(self.label(x), Label::Blank);
        let mut b = self.open(BoundaryKind::Exclude, x);
        obs.boundary(f, self, b);
        self.set_label(x, Label::MustOut);
        if let Err(e) = self.release(f, x, obs) {
            b.phase = Phase::Abort;
            obs.boundary(f, self, b);
            obs.dead_end(f, self);
            return Err(e);
        }
        b.phase = Phase::Exit;
        obs.boundary(f, self, b);
        Ok(())
    }
}

/// Union of two sorted duplicate-free slices, in order.
fn merge_sorted<'a>(a: &'a [ArgId], b: &'a [ArgId]) -> impl Iterator<Item = ArgId> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || match (a.get(i), b.get(j)) {
        (Some(&x), Some(&y)) => {
            if x < y {
                i += 1;
                Some(x)
            } else if y < x {
                j += 1;
                Some(y)
            } else {
                i += 1;
                j += 1;
                Some(x)
            }
        }
        (Some(&x), None) => {
            i += 1;
            Some(x)
        }
        (None, Some(&y)) => {
            j += 1;
            Some(y)
        }
        (None, None) => None,
    })
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
    O: LabelObserver,
    F: FnMut(&Extension) -> ControlFlow<()>,
{
    let mut stats = SearchStats::default();
    let mut state = LabelState::new(f);
    // Branching arguments whose `In` branch is being explored. Each has a
    // checkpoint taken just before it was pushed on the worklist.
    let mut pending: Vec<ArgId> = Vec::new();

    'search: loop {
        match state.drain(f, obs) {
            Propagation::Fixpoint if state.blank_count() > 0 => {
                let x = pick
                    .pick(f, f.arguments().filter(|&x| state.label(x) == Label::Blank))
                    .expect("blank argument exists");
                stats.branches += 1;
                state.checkpoint();
                obs.checkpoint(&state);
                pending.push(x);
                state.push(x);
                continue 'search;
            }
            Propagation::Fixpoint => {
                if state.is_solution() {
                    stats.extensions += 1;
                    let ext = Extension::from_set(&state.with_label(Label::In));
                    if sink(&ext).is_break() {
                        stats.propagations = state.assigned - stats.branches;
                        return stats;
                    }
                }
            }
            Propagation::DeadEnd => stats.dead_ends += 1,
        }

        loop {
            let Some(x) = pending.pop() else {
                break 'search;
            };
            state.rollback().expect("one checkpoint per pending branch");
            obs.rollback(&state);
            if state.mark_must_out(f, x, obs).is_ok() {
                continue 'search;
            }
            stats.dead_ends += 1;
        }
    }

    stats.propagations = state.assigned - stats.branches;
    stats.complete = true;
    stats
}

pub fn collect(f: &Framework, pick: PickStrategy) -> Vec<Extension> {
    let mut out = Vec::new();
    enumerate(f, pick, |e| {
        out.push(e.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Observer that records a [`TraceEvent`] at every state boundary.
#[derive(Debug, Default)]
pub struct TraceRecorder {
    pub events: Vec<TraceEvent>,
}

impl LabelObserver for TraceRecorder {
    fn boundary(&mut self, _f: &Framework, state: &LabelState, b: Boundary) {
        self.events.push(TraceEvent {
            state_id: b.state_id,
            kind: b.kind,
            phase: b.phase,
            arg: b.arg,
            snapshot: state.snapshot(),
        });
    }
}

/// Forwards every hook to two observers in turn.
pub struct Both<A, B>(pub A, pub B);

impl<A: LabelObserver, B: LabelObserver> LabelObserver for Both<A, B> {
    fn boundary(&mut self, f: &Framework, state: &LabelState, b: Boundary) {
        self.0.boundary(f, state, b);
        self.1.boundary(f, state, b);
    }
    fn forced(&mut self, f: &Framework, state: &LabelState, x: ArgId) {
        self.0.forced(f, state, x);
        self.1.forced(f, state, x);
    }
    fn dead_end(&mut self, f: &Framework, state: &LabelState) {
        self.0.dead_end(f, state);
        self.1.dead_end(f, state);
    }
    fn checkpoint(&mut self, state: &LabelState) {
        self.0.checkpoint(state);
        self.1.checkpoint(state);
    }
    fn rollback(&mut self, state: &LabelState) {
        self.0.rollback(state);
        self.1.rollback(state);
    }
}
