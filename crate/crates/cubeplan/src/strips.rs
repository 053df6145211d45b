//! Grounded STRIPS data model and progression semantics.
//!
//! A task is a set of `F` propositions, grounded actions over them, an
//! initial bit state, and a goal condition. Applying an action computes
//! `(s \ del) ∪ add`. All values are immutable after construction and every
//! operation is a pure function.

use thiserror::Error;

use crate::bits::BitState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("add and delete effects overlap on bit {bit}")]
    OverlappingEffects { bit: usize },
    #[error("positive and negative preconditions overlap on bit {bit}")]
    OverlappingPreconditions { bit: usize },
    #[error("literal index {index} out of range for {num_props} propositions")]
    LiteralOutOfRange { index: usize, num_props: usize },
    #[error("action {id} has wrong width (expected {expected} propositions)")]
    ActionWidthMismatch { id: usize, expected: usize },
    #[error("action ids are not dense 0..{expected}")]
    NonDenseActionIds { expected: usize },
    #[error("unknown action id {id} (task has {num_actions} actions)")]
    UnknownAction { id: usize, num_actions: usize },
    #[error("triggered conditional effects conflict on bit {bit}")]
    EffectConflict { bit: usize },
}

/// A single proposition with polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub prop: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(prop: usize) -> Self {
        Literal { prop, positive: true }
    }

    pub fn neg(prop: usize) -> Self {
        Literal { prop, positive: false }
    }
}

/// A conjunction of literals, stored as disjoint positive/negative masks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Condition {
    pub pos: BitState,
    pub neg: BitState,
}

impl Condition {
    pub fn empty(num_props: usize) -> Self {
        Condition {
            pos: BitState::zeros(num_props),
            neg: BitState::zeros(num_props),
        }
    }

    pub fn new(pos: BitState, neg: BitState) -> Result<Self, ModelError> {
        if !pos.is_disjoint(&neg) {
            let bit = pos.and(&neg).iter_ones().next().unwrap();
            return Err(ModelError::OverlappingPreconditions { bit });
        }
        Ok(Condition { pos, neg })
    }

    pub fn from_literals(num_props: usize, literals: &[Literal]) -> Result<Self, ModelError> {
        let mut pos = BitState::zeros(num_props);
        let mut neg = BitState::zeros(num_props);
        for lit in literals {
            if lit.prop >= num_props {
                return Err(ModelError::LiteralOutOfRange { index: lit.prop, num_props });
            }
            if lit.positive {
                pos.set(lit.prop, true);
            } else {
                neg.set(lit.prop, true);
            }
        }
        Condition::new(pos, neg)
    }

    /// The goal condition that pins every bit of `state`.
    pub fn full_state(state: &BitState) -> Self {
        Condition {
            pos: state.clone(),
            neg: state.not(),
        }
    }

    /// Literals in emission order: positives ascending, then negatives ascending.
    pub fn literals(&self) -> Vec<Literal> {
        self.pos
            .iter_ones()
            .map(Literal::pos)
            .chain(self.neg.iter_ones().map(Literal::neg))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_zero() && self.neg.is_zero()
    }

    /// True iff every positive literal's bit is 1 and every negative
    /// literal's bit is 0 in `state`. The empty conjunction holds everywhere.
    pub fn satisfied_by(&self, state: &BitState) -> bool {
        state.contains_all(&self.pos) && state.is_disjoint(&self.neg)
    }

    /// Number of literals not satisfied by `state`.
    pub fn count_unsatisfied(&self, state: &BitState) -> usize {
        self.pos.and_not(state).count_ones() + self.neg.and(state).count_ones()
    }
}

/// One conditional effect: when `condition` holds in the input state, the
/// add/del masks fire together with the action's unconditional effects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondEffect {
    pub condition: Condition,
    pub add: BitState,
    pub del: BitState,
}

impl CondEffect {
    pub fn new(condition: Condition, add: BitState, del: BitState) -> Result<Self, ModelError> {
        if !add.is_disjoint(&del) {
            let bit = add.and(&del).iter_ones().next().unwrap();
            return Err(ModelError::OverlappingEffects { bit });
        }
        Ok(CondEffect { condition, add, del })
    }
}

/// A grounded action: precondition plus add/delete masks, optionally with
/// conditional effects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSchema {
    pub id: usize,
    pub name: String,
    pub pre: Condition,
    pub add: BitState,
    pub del: BitState,
    pub cond_effects: Vec<CondEffect>,
}

impl ActionSchema {
    pub fn new(
        id: usize,
        name: impl Into<String>,
        pre: Condition,
        add: BitState,
        del: BitState,
    ) -> Result<Self, ModelError> {
        if !add.is_disjoint(&del) {
            let bit = add.and(&del).iter_ones().next().unwrap();
            return Err(ModelError::OverlappingEffects { bit });
        }
        Ok(ActionSchema {
            id,
            name: name.into(),
            pre,
            add,
            del,
            cond_effects: Vec::new(),
        })
    }

    pub fn with_cond_effects(mut self, effects: Vec<CondEffect>) -> Self {
        self.cond_effects = effects;
        self
    }

    pub fn num_props(&self) -> usize {
        self.add.len()
    }

    pub fn applicable(&self, state: &BitState) -> bool {
        self.pre.satisfied_by(state)
    }

    /// STRIPS progression `(s \ del) ∪ add`, ignoring conditional effects.
    ///
    /// Applicability is deliberately not enforced here; callers that need
    /// effect-only semantics apply unconditionally, while [`GroundTask`]
    /// gates on [`ActionSchema::applicable`].
    pub fn apply(&self, state: &BitState) -> BitState {
        state.and_not(&self.del).or(&self.add)
    }

    /// Applies the unconditional effects plus every conditional effect whose
    /// condition holds in the *input* state (simultaneous semantics). A bit
    /// both added and deleted by the triggered set is a hard error.
    pub fn apply_conditional(&self, state: &BitState) -> Result<BitState, ModelError> {
        let mut add = self.add.clone();
        let mut del = self.del.clone();
        for eff in &self.cond_effects {
            if eff.condition.satisfied_by(state) {
                add = add.or(&eff.add);
                del = del.or(&eff.del);
            }
        }
        if !add.is_disjoint(&del) {
            let bit = add.and(&del).iter_ones().next().unwrap();
            return Err(ModelError::EffectConflict { bit });
        }
        Ok(state.and_not(&del).or(&add))
    }

    pub fn has_cond_effects(&self) -> bool {
        !self.cond_effects.is_empty()
    }
}

/// A grounded planning task ⟨propositions, actions, init, goal⟩ with unit
/// action costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTask {
    pub num_props: usize,
    pub actions: Vec<ActionSchema>,
    pub init: BitState,
    pub goal: Condition,
}

impl GroundTask {
    pub fn new(
        num_props: usize,
        actions: Vec<ActionSchema>,
        init: BitState,
        goal: Condition,
    ) -> Result<Self, ModelError> {
        for (k, a) in actions.iter().enumerate() {
            if a.id != k {
                return Err(ModelError::NonDenseActionIds { expected: actions.len() });
            }
            let widths_ok = a.add.len() == num_props
                && a.del.len() == num_props
                && a.pre.pos.len() == num_props
                && a.pre.neg.len() == num_props
                && a.cond_effects.iter().all(|e| {
                    e.add.len() == num_props
                        && e.del.len() == num_props
                        && e.condition.pos.len() == num_props
                });
            if !widths_ok {
                return Err(ModelError::ActionWidthMismatch { id: a.id, expected: num_props });
            }
        }
        if init.len() != num_props {
            return Err(ModelError::ActionWidthMismatch { id: usize::MAX, expected: num_props });
        }
        Ok(GroundTask { num_props, actions, init, goal })
    }

    pub fn is_goal(&self, state: &BitState) -> bool {
        self.goal.satisfied_by(state)
    }

    /// One `(action id, successor)` entry per applicable action, in
    /// ascending action-id order.
    ///
    /// Panics if a triggered conditional-effect set conflicts; that is a
    /// model bug, not a search condition.
    pub fn successors(&self, state: &BitState) -> Vec<(usize, BitState)> {
        self.actions
            .iter()
            .filter(|a| a.applicable(state))
            .map(|a| {
                let succ = if a.has_cond_effects() {
                    a.apply_conditional(state).expect("conflicting conditional effects")
                } else {
                    a.apply(state)
                };
                (a.id, succ)
            })
            .collect()
    }

    /// Replays `plan` from the initial state, checking applicability at each
    /// step and the goal at the end.
    pub fn validate_plan(&self, plan: &Plan) -> Result<PlanValidation, ModelError> {
        let mut state = self.init.clone();
        for (step, &id) in plan.steps.iter().enumerate() {
            let action = self
                .actions
                .get(id)
                .ok_or(ModelError::UnknownAction { id, num_actions: self.actions.len() })?;
            if !action.applicable(&state) {
                return Ok(PlanValidation::Invalid { step, reason: InvalidReason::Inapplicable });
            }
            state = if action.has_cond_effects() {
                match action.apply_conditional(&state) {
                    Ok(s) => s,
                    Err(_) => {
                        return Ok(PlanValidation::Invalid {
                            step,
                            reason: InvalidReason::EffectConflict,
                        })
                    }
                }
            } else {
                action.apply(&state)
            };
        }
        if self.is_goal(&state) {
            Ok(PlanValidation::Valid)
        } else {
            Ok(PlanValidation::Invalid {
                step: plan.steps.len(),
                reason: InvalidReason::GoalUnsatisfied,
            })
        }
    }
}

/// A sequence of action ids; cost equals length under unit costs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<usize>,
}

impl Plan {
    pub fn new(steps: Vec<usize>) -> Self {
        Plan { steps }
    }

    pub fn cost(&self) -> usize {
        self.steps.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanValidation {
    Valid,
    Invalid { step: usize, reason: InvalidReason },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvalidReason {
    Inapplicable,
    GoalUnsatisfied,
    EffectConflict,
}
