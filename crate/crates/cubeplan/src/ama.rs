//! Action-model acquisition from latent transitions.
//!
//! The default pipeline clusters transitions by their effect signature (the
//! pair of 0→1 and 1→0 bit sets), extracts effects as the union of member
//! signatures, and extracts preconditions as the static bits shared by every
//! member's pre-state. Signature clustering makes the add/delete implication
//! of the monotone-logit apply operator hold by construction, so the learned
//! effects are exact; preconditions are the usual over-approximation.

use std::collections::HashMap;

use thiserror::Error;

use crate::bits::BitState;
use crate::envs::{Transition, TransitionDataset};
use crate::strips::{ActionSchema, Condition, GroundTask, ModelError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AmaError {
    #[error("found {found} distinct signatures, action budget is {budget}")]
    SignatureBudgetExceeded { found: usize, budget: usize },
    #[error("transition {index} carries no label; external clustering needs labels")]
    MissingLabel { index: usize },
    #[error("cluster is empty")]
    EmptyCluster,
    #[error("cluster is inconsistent: bit {bit} both added and deleted")]
    InconsistentCluster { bit: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A transition's effect signature: bits that turned on and bits that turned
/// off.
pub fn effect_signature(t: &Transition) -> (BitState, BitState) {
    (t.post.and_not(&t.pre), t.pre.and_not(&t.post))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClusterLabel {
    Signature { add: BitState, del: BitState },
    External(String),
}

impl ClusterLabel {
    pub fn describe(&self) -> String {
        match self {
            ClusterLabel::Signature { add, del } => format!("+{add}/-{del}"),
            ClusterLabel::External(s) => s.clone(),
        }
    }
}

/// A group of transition indices that share a label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionCluster {
    pub label: ClusterLabel,
    pub members: Vec<usize>,
}

/// One cluster per distinct effect signature, ordered by first occurrence in
/// the dataset. When `budget` is given and the dataset needs more distinct
/// signatures, learning fails the same way a preset label budget would.
pub fn cluster_by_signature(
    dataset: &TransitionDataset,
    budget: Option<usize>,
) -> Result<Vec<ActionCluster>, AmaError> {
    let mut index: HashMap<(BitState, BitState), usize> = HashMap::new();
    let mut clusters: Vec<ActionCluster> = Vec::new();
    for (i, t) in dataset.transitions.iter().enumerate() {
        let sig = effect_signature(t);
        match index.get(&sig) {
            Some(&k) => clusters[k].members.push(i),
            None => {
                index.insert(sig.clone(), clusters.len());
                clusters.push(ActionCluster {
                    label: ClusterLabel::Signature { add: sig.0, del: sig.1 },
                    members: vec![i],
                });
            }
        }
    }
    if let Some(budget) = budget {
        if clusters.len() > budget {
            return Err(AmaError::SignatureBudgetExceeded { found: clusters.len(), budget });
        }
    }
    Ok(clusters)
}

/// One cluster per distinct `label` field, ordered by first occurrence.
pub fn cluster_by_label(dataset: &TransitionDataset) -> Result<Vec<ActionCluster>, AmaError> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut clusters: Vec<ActionCluster> = Vec::new();
    for (i, t) in dataset.transitions.iter().enumerate() {
        let label = t.label.as_deref().ok_or(AmaError::MissingLabel { index: i })?;
        match index.get(label) {
            Some(&k) => clusters[k].members.push(i),
            None => {
                index.insert(label, clusters.len());
                clusters.push(ActionCluster {
                    label: ClusterLabel::External(label.to_string()),
                    members: vec![i],
                });
            }
        }
    }
    Ok(clusters)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubeCompat {
    Ok,
    /// Some bit of some cluster witnesses a 0→1 change in one member while
    /// another member leaves it 0 afterwards (or the 1→0 dual), so a single
    /// state-independent effect cannot explain the cluster.
    Violation {
        label: String,
        bit: usize,
        witnesses: (usize, usize),
    },
}

/// Checks whether each cluster's members are consistent with one
/// state-independent add/delete pair. Signature-built clusters pass by
/// construction; externally labeled data may not.
pub fn check_cube_compat(clusters: &[ActionCluster], dataset: &TransitionDataset) -> CubeCompat {
    for cluster in clusters {
        let f = dataset.num_bits;
        // per bit: first member seeing 0→1, first with post=0, and duals
        let mut first_01: Vec<Option<usize>> = vec![None; f];
        let mut first_10: Vec<Option<usize>> = vec![None; f];
        let mut first_post0: Vec<Option<usize>> = vec![None; f];
        let mut first_post1: Vec<Option<usize>> = vec![None; f];
        for &m in &cluster.members {
            let t = &dataset.transitions[m];
            for bit in 0..f {
                let (pre, post) = (t.pre.get(bit), t.post.get(bit));
                let slot = |v: &mut Vec<Option<usize>>| {
                    if v[bit].is_none() {
                        v[bit] = Some(m);
                    }
                };
                if !pre && post {
                    slot(&mut first_01);
                }
                if pre && !post {
                    slot(&mut first_10);
                }
                if post {
                    slot(&mut first_post1);
                } else {
                    slot(&mut first_post0);
                }
            }
        }
        for bit in 0..f {
            let conflict = match (first_01[bit], first_post0[bit]) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            }
            .or(match (first_10[bit], first_post1[bit]) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            });
            if let Some(witnesses) = conflict {
                return CubeCompat::Violation { label: cluster.label.describe(), bit, witnesses };
            }
        }
    }
    CubeCompat::Ok
}

/// Union of member signatures. For signature clusters this equals the label.
pub fn extract_effects(
    cluster: &ActionCluster,
    dataset: &TransitionDataset,
) -> Result<(BitState, BitState), AmaError> {
    if cluster.members.is_empty() {
        return Err(AmaError::EmptyCluster);
    }
    let f = dataset.num_bits;
    let mut add = BitState::zeros(f);
    let mut del = BitState::zeros(f);
    for &m in &cluster.members {
        let (a, d) = effect_signature(&dataset.transitions[m]);
        add = add.or(&a);
        del = del.or(&d);
    }
    if !add.is_disjoint(&del) {
        let bit = add.and(&del).iter_ones().next().unwrap();
        return Err(AmaError::InconsistentCluster { bit });
    }
    Ok((add, del))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PreconditionMode {
    /// Static-bits rule over both polarities: bits 1 in every member
    /// pre-state become positive literals, bits 0 in every member pre-state
    /// become negative literals.
    #[default]
    Both,
    /// Positive static bits only. Negative static bits over-constrain small
    /// samples, so this mode trades precision for applicability.
    PositiveOnly,
}

pub fn extract_preconditions(
    cluster: &ActionCluster,
    dataset: &TransitionDataset,
    mode: PreconditionMode,
) -> Result<Condition, AmaError> {
    if cluster.members.is_empty() {
        return Err(AmaError::EmptyCluster);
    }
    let f = dataset.num_bits;
    let mut always_on = BitState::ones(f);
    let mut always_off = BitState::ones(f);
    for &m in &cluster.members {
        let pre = &dataset.transitions[m].pre;
        always_on = always_on.and(pre);
        always_off = always_off.and_not(pre);
    }
    let neg = match mode {
        PreconditionMode::Both => always_off,
        PreconditionMode::PositiveOnly => BitState::zeros(f),
    };
    Ok(Condition::new(always_on, neg)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LabelSource {
    #[default]
    Signature,
    External,
}

#[derive(Clone, Debug, Default)]
pub struct LearnOptions {
    pub mode: PreconditionMode,
    pub label_source: LabelSource,
    /// Maximum number of distinct signatures tolerated (diagnostic).
    pub budget: Option<usize>,
}

/// The learned grounded model: one schema per cluster, named `a0`, `a1`, …
/// in cluster order.
#[derive(Clone, Debug)]
pub struct LearnedModel {
    pub num_props: usize,
    pub schemas: Vec<ActionSchema>,
    pub sample_counts: Vec<usize>,
    /// Index of the degenerate no-effect action, if the dataset contained
    /// self-loop transitions. Emitted but excluded from planning by default.
    pub nop_action: Option<usize>,
    pub warnings: Vec<String>,
}

impl LearnedModel {
    pub fn num_actions(&self) -> usize {
        self.schemas.len()
    }

    /// Schemas relevant for search: the NOP action, when present, is dropped
    /// and ids are re-densified.
    pub fn planning_schemas(&self) -> Vec<ActionSchema> {
        self.schemas
            .iter()
            .filter(|s| Some(s.id) != self.nop_action)
            .enumerate()
            .map(|(new_id, s)| {
                let mut s = s.clone();
                s.id = new_id;
                s
            })
            .collect()
    }

    pub fn to_task(&self, init: BitState, goal: Condition) -> Result<GroundTask, ModelError> {
        GroundTask::new(self.num_props, self.planning_schemas(), init, goal)
    }
}

pub fn learn_model(
    dataset: &TransitionDataset,
    options: &LearnOptions,
) -> Result<LearnedModel, AmaError> {
    let clusters = match options.label_source {
        LabelSource::Signature => cluster_by_signature(dataset, options.budget)?,
        LabelSource::External => cluster_by_label(dataset)?,
    };
    let mut schemas = Vec::with_capacity(clusters.len());
    let mut sample_counts = Vec::with_capacity(clusters.len());
    let mut warnings = Vec::new();
    let mut nop_action = None;
    if matches!(options.label_source, LabelSource::External) {
        if let CubeCompat::Violation { label, bit, .. } = check_cube_compat(&clusters, dataset) {
            warnings.push(format!(
                "label {label:?} is not effect-consistent at bit {bit}; extraction will fail or over-approximate"
            ));
        }
    }
    for (id, cluster) in clusters.iter().enumerate() {
        let (add, del) = extract_effects(cluster, dataset)?;
        let pre = extract_preconditions(cluster, dataset, options.mode)?;
        if add.is_zero() && del.is_zero() {
            nop_action = Some(id);
            warnings.push(format!(
                "action a{id} has no effect ({} self-loop transitions); excluded from planning",
                cluster.members.len()
            ));
        }
        schemas.push(ActionSchema::new(id, format!("a{id}"), pre, add, del)?);
        sample_counts.push(cluster.members.len());
    }
    Ok(LearnedModel {
        num_props: dataset.num_bits,
        schemas,
        sample_counts,
        nop_action,
        warnings,
    })
}

/// How much of a plan was already present in the training data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MemorizationStats {
    pub states_seen: usize,
    pub transitions_seen: usize,
    pub total_states: usize,
    pub total_transitions: usize,
}

/// Counts how many of the given plan states appear as any dataset pre/post
/// state and how many of the given (pre, post) pairs appear verbatim.
pub fn memorization_stats(
    plan_states: &[BitState],
    plan_transitions: &[(BitState, BitState)],
    dataset: &TransitionDataset,
) -> MemorizationStats {
    use std::collections::HashSet;
    let mut known_states: HashSet<&BitState> = HashSet::new();
    let mut known_pairs: HashSet<(&BitState, &BitState)> = HashSet::new();
    for t in &dataset.transitions {
        known_states.insert(&t.pre);
        known_states.insert(&t.post);
        known_pairs.insert((&t.pre, &t.post));
    }
    MemorizationStats {
        states_seen: plan_states.iter().filter(|s| known_states.contains(s)).count(),
        transitions_seen: plan_transitions
            .iter()
            .filter(|(a, b)| known_pairs.contains(&(a, b)))
            .count(),
        total_states: plan_states.len(),
        total_transitions: plan_transitions.len(),
    }
}
