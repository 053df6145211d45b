//! Discrete mechanics of the back-to-logit apply operator and its naive
//! min/max alternatives.
//!
//! Back-to-logit re-encodes a binary state through an order-preserving
//! monotone map `m` (batch-normalization statistics), adds a per-bit effect
//! logit, and re-discretizes with a step / binary-concrete activation. The
//! monotonicity of `m` forces every action's observed bit changes to be
//! state-independent: if any member of an action's batch flips a bit 0→1,
//! every member ends with that bit 1 (and dually for 1→0). That is exactly
//! the STRIPS add/delete discipline, which is why effects can be read
//! directly off the data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitState;
use crate::strips::ActionSchema;

#[derive(Debug, Error, PartialEq)]
pub enum BtlError {
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("noise value {value} at index {index} outside the open interval (0,1)")]
    NoiseOutOfRange { index: usize, value: f64 },
    #[error("length mismatch: {what} has {found}, expected {expected}")]
    LengthMismatch { what: &'static str, found: usize, expected: usize },
    #[error("batch is empty")]
    EmptyBatch,
    #[error("scale must be positive per feature, got {value} at feature {feature}")]
    NonPositiveScale { feature: usize, value: f64 },
    #[error("feature {feature} has m(0) = {m0} and m(1) = {m1}; no no-op logit exists")]
    NopInfeasible { feature: usize, m0: f64, m1: f64 },
    #[error("add and delete masks overlap on bit {bit}")]
    OverlappingMasks { bit: usize },
    #[error("degenerate statistics: feature {feature} has zero variance")]
    DegenerateStats { feature: usize },
    #[error("apply requires a deterministic temperature")]
    StochasticApply,
    #[error("action {id} out of range for effect table with {rows} rows")]
    ActionOutOfRange { id: usize, rows: usize },
}

/// Annealing temperature. The deterministic flag selects the zero-temperature
/// limit (step / argmax) used after training.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Temperature {
    tau: f64,
    deterministic: bool,
}

impl Temperature {
    pub fn deterministic() -> Self {
        Temperature { tau: 0.0, deterministic: true }
    }

    pub fn stochastic(tau: f64) -> Result<Self, BtlError> {
        if tau <= 0.0 || !tau.is_finite() {
            return Err(BtlError::NonPositiveTemperature(tau));
        }
        Ok(Temperature { tau, deterministic: false })
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// step(x) = 1 iff x > 0; the boundary goes to 0, matching the strict
/// inequality the add/delete guarantee is proved with.
pub fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn check_noise(u: &[f64], expected: usize) -> Result<(), BtlError> {
    if u.len() != expected {
        return Err(BtlError::LengthMismatch { what: "noise", found: u.len(), expected });
    }
    for (index, &value) in u.iter().enumerate() {
        if !(value > 0.0 && value < 1.0) {
            return Err(BtlError::NoiseOutOfRange { index, value });
        }
    }
    Ok(())
}

/// Binary-concrete relaxation of step: `Sigmoid((x + log u − log(1−u))/τ)`.
/// Deterministic mode returns `step(x)`; omitting the noise in stochastic
/// mode is the noise-free relaxation `Sigmoid(x/τ)` (equivalent to u = 0.5).
pub fn binconcrete(
    logits: &[f64],
    temp: &Temperature,
    noise: Option<&[f64]>,
) -> Result<Vec<f64>, BtlError> {
    if temp.deterministic {
        return Ok(logits.iter().map(|&x| step(x)).collect());
    }
    if let Some(u) = noise {
        check_noise(u, logits.len())?;
        Ok(logits
            .iter()
            .zip(u)
            .map(|(&x, &u)| sigmoid((x + u.ln() - (1.0 - u).ln()) / temp.tau))
            .collect())
    } else {
        Ok(logits.iter().map(|&x| sigmoid(x / temp.tau)).collect())
    }
}

/// Categorical relaxation of argmax, row-wise:
/// `Softmax((x − log(−log u))/τ)`. Deterministic mode returns one-hot argmax
/// rows with ties broken to the lowest index.
pub fn gumbel_softmax(
    rows: &[Vec<f64>],
    temp: &Temperature,
    noise: Option<&[Vec<f64>]>,
) -> Result<Vec<Vec<f64>>, BtlError> {
    if let Some(n) = noise {
        if n.len() != rows.len() {
            return Err(BtlError::LengthMismatch { what: "noise rows", found: n.len(), expected: rows.len() });
        }
    }
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            if temp.deterministic {
                let mut best = 0;
                for (i, &x) in row.iter().enumerate() {
                    if x > row[best] {
                        best = i;
                    }
                }
                let mut out = vec![0.0; row.len()];
                out[best] = 1.0;
                return Ok(out);
            }
            let perturbed: Vec<f64> = match noise {
                Some(n) => {
                    check_noise(&n[r], row.len())?;
                    row.iter().zip(&n[r]).map(|(&x, &u)| (x - (-u.ln()).ln()) / temp.tau).collect()
                }
                None => row.iter().map(|&x| x / temp.tau).collect(),
            };
            let max = perturbed.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let exps: Vec<f64> = perturbed.iter().map(|&x| (x - max).exp()).collect();
            let total: f64 = exps.iter().sum();
            Ok(exps.into_iter().map(|e| e / total).collect())
        })
        .collect()
}

/// Per-feature batch-normalization statistics realizing the monotone map
/// `m(x) = γ(x − μ)/√(σ² + ε) + β`. Positive γ keeps `m` order-preserving.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BNStats {
    mean: Vec<f64>,
    var: Vec<f64>,
    gamma: Vec<f64>,
    beta: Vec<f64>,
    eps: f64,
}

impl BNStats {
    /// Per-feature batch mean and population variance of `batch`.
    pub fn fit(batch: &[Vec<f64>], gamma: &[f64], beta: &[f64], eps: f64) -> Result<Self, BtlError> {
        let rows = batch.len();
        if rows == 0 {
            return Err(BtlError::EmptyBatch);
        }
        let width = batch[0].len();
        for row in batch {
            if row.len() != width {
                return Err(BtlError::LengthMismatch { what: "batch row", found: row.len(), expected: width });
            }
        }
        if gamma.len() != width {
            return Err(BtlError::LengthMismatch { what: "gamma", found: gamma.len(), expected: width });
        }
        if beta.len() != width {
            return Err(BtlError::LengthMismatch { what: "beta", found: beta.len(), expected: width });
        }
        for (feature, &g) in gamma.iter().enumerate() {
            if g <= 0.0 || !g.is_finite() {
                return Err(BtlError::NonPositiveScale { feature, value: g });
            }
        }
        let mut mean = vec![0.0; width];
        for row in batch {
            for (m, &x) in mean.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= rows as f64;
        }
        let mut var = vec![0.0; width];
        for row in batch {
            for ((v, &x), &m) in var.iter_mut().zip(row).zip(&mean) {
                *v += (x - m) * (x - m);
            }
        }
        for v in &mut var {
            *v /= rows as f64;
        }
        Ok(BNStats { mean, var, gamma: gamma.to_vec(), beta: beta.to_vec(), eps })
    }

    /// Statistics built directly from parameters, for synthetic maps.
    pub fn from_parts(mean: Vec<f64>, var: Vec<f64>, gamma: Vec<f64>, beta: Vec<f64>, eps: f64) -> Result<Self, BtlError> {
        for (feature, &g) in gamma.iter().enumerate() {
            if g <= 0.0 || !g.is_finite() {
                return Err(BtlError::NonPositiveScale { feature, value: g });
            }
        }
        let width = mean.len();
        if var.len() != width || gamma.len() != width || beta.len() != width {
            return Err(BtlError::LengthMismatch { what: "parameters", found: var.len(), expected: width });
        }
        Ok(BNStats { mean, var, gamma, beta, eps })
    }

    pub fn width(&self) -> usize {
        self.mean.len()
    }

    pub fn transform_feature(&self, feature: usize, x: f64) -> f64 {
        self.gamma[feature] * (x - self.mean[feature]) / (self.var[feature] + self.eps).sqrt()
            + self.beta[feature]
    }

    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>, BtlError> {
        if x.len() != self.width() {
            return Err(BtlError::LengthMismatch { what: "input", found: x.len(), expected: self.width() });
        }
        Ok((0..x.len()).map(|f| self.transform_feature(f, x[f])).collect())
    }

    /// m(0) and m(1) for a feature; the useful landmarks on binary inputs.
    pub fn logit_of_bit(&self, feature: usize, bit: bool) -> f64 {
        self.transform_feature(feature, if bit { 1.0 } else { 0.0 })
    }

    /// Features with zero variance (and therefore a constant or unstable
    /// normalized output at ε = 0).
    pub fn degenerate_features(&self) -> Vec<usize> {
        (0..self.width()).filter(|&f| self.var[f] == 0.0).collect()
    }
}

/// Per-action effect logits. The scalar form adds one real logit per bit;
/// the three-way form is the categorical add/del/nop head it replaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EffectTable {
    Scalar { rows: Vec<Vec<f64>> },
    ThreeWay { rows: Vec<Vec<[f64; 3]>> },
}

impl EffectTable {
    pub fn num_actions(&self) -> usize {
        match self {
            EffectTable::Scalar { rows } => rows.len(),
            EffectTable::ThreeWay { rows } => rows.len(),
        }
    }

    pub fn scalar_row(&self, action: usize) -> Result<&[f64], BtlError> {
        match self {
            EffectTable::Scalar { rows } => rows
                .get(action)
                .map(|r| r.as_slice())
                .ok_or(BtlError::ActionOutOfRange { id: action, rows: rows.len() }),
            EffectTable::ThreeWay { rows } => {
                Err(BtlError::ActionOutOfRange { id: action, rows: rows.len() })
            }
        }
    }

    /// Argmax over {add, del, nop} per bit, as add/del masks.
    pub fn three_way_masks(&self, action: usize) -> Result<(BitState, BitState), BtlError> {
        let EffectTable::ThreeWay { rows } = self else {
            return Err(BtlError::ActionOutOfRange { id: action, rows: self.num_actions() });
        };
        let row = rows
            .get(action)
            .ok_or(BtlError::ActionOutOfRange { id: action, rows: rows.len() })?;
        let mut add = BitState::zeros(row.len());
        let mut del = BitState::zeros(row.len());
        for (bit, cats) in row.iter().enumerate() {
            let mut best = 0;
            for (i, &x) in cats.iter().enumerate() {
                if x > cats[best] {
                    best = i;
                }
            }
            match best {
                0 => add.set(bit, true),
                1 => del.set(bit, true),
                _ => {}
            }
        }
        Ok((add, del))
    }
}

/// The back-to-logit successor: per bit, `step(m(z) + e)` where `e` is the
/// action's effect logit (optionally normalized by `effect_bn`). Requires a
/// deterministic temperature and a strictly monotone state map.
pub fn btl_apply(
    state: &BitState,
    action: usize,
    effects: &EffectTable,
    state_bn: &BNStats,
    effect_bn: Option<&BNStats>,
    temp: &Temperature,
) -> Result<BitState, BtlError> {
    if !temp.deterministic {
        return Err(BtlError::StochasticApply);
    }
    if state_bn.width() != state.len() {
        return Err(BtlError::LengthMismatch {
            what: "state stats",
            found: state_bn.width(),
            expected: state.len(),
        });
    }
    if let Some(feature) = state_bn.degenerate_features().first() {
        return Err(BtlError::DegenerateStats { feature: *feature });
    }
    let row = effects.scalar_row(action)?;
    if row.len() != state.len() {
        return Err(BtlError::LengthMismatch { what: "effect row", found: row.len(), expected: state.len() });
    }
    let effect_logits: Vec<f64> = match effect_bn {
        None => row.to_vec(),
        Some(bn) => bn.transform(row)?,
    };
    let mut out = BitState::zeros(state.len());
    for bit in 0..state.len() {
        let m = state_bn.logit_of_bit(bit, state.get(bit));
        if step(m + effect_logits[bit]) == 1.0 {
            out.set(bit, true);
        }
    }
    Ok(out)
}

/// Effect logits that make [`btl_apply`] realize a given schema exactly:
/// `−m(0)+1` on add bits, `−m(1)−1` on delete bits, `0` elsewhere. Needs
/// `m(0) < 0 < m(1)` per feature so that the zero logit is a no-op.
pub fn logits_from_schema(schema: &ActionSchema, state_bn: &BNStats) -> Result<Vec<f64>, BtlError> {
    let width = schema.num_props();
    if state_bn.width() != width {
        return Err(BtlError::LengthMismatch { what: "state stats", found: state_bn.width(), expected: width });
    }
    let mut row = vec![0.0; width];
    for feature in 0..width {
        let m0 = state_bn.logit_of_bit(feature, false);
        let m1 = state_bn.logit_of_bit(feature, true);
        if !(m0 < 0.0 && m1 > 0.0) {
            return Err(BtlError::NopInfeasible { feature, m0, m1 });
        }
        if schema.add.get(feature) {
            row[feature] = -m0 + 1.0;
        } else if schema.del.get(feature) {
            row[feature] = -m1 - 1.0;
        }
    }
    Ok(row)
}

/// The naive apply variant `max(min(z, 1−del), add)` on binary inputs; equal
/// to STRIPS progression whenever add and del are disjoint.
pub fn minmax_apply(state: &BitState, add: &BitState, del: &BitState) -> Result<BitState, BtlError> {
    if !add.is_disjoint(del) {
        let bit = add.and(del).iter_ones().next().unwrap();
        return Err(BtlError::OverlappingMasks { bit });
    }
    Ok(state.and_not(del).or(add))
}

/// log-sum-exp soft maximum.
pub fn smax(x: f64, y: f64) -> f64 {
    let hi = x.max(y);
    let lo = x.min(y);
    hi + (1.0 + (lo - hi).exp()).ln()
}

/// Soft minimum, `−smax(−x, −y)`.
pub fn smin(x: f64, y: f64) -> f64 {
    -smax(-x, -y)
}

/// Smooth variant of [`minmax_apply`] on real vectors:
/// `smax(smin(z, 1−del), add)` elementwise.
pub fn smooth_apply(state: &[f64], add: &[f64], del: &[f64]) -> Vec<f64> {
    state
        .iter()
        .zip(add)
        .zip(del)
        .map(|((&z, &a), &d)| smax(smin(z, 1.0 - d), a))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem2Outcome {
    Ok,
    /// Bit `bit` has a member flipping it in one direction and another
    /// member contradicting the implied post-value.
    Counterexample { bit: usize, witnesses: (usize, usize) },
}

/// Checks the add/delete implication on a batch attributed to one action:
/// a 0→1 flip at a bit in any member forces post = 1 at that bit in all
/// members, and dually for 1→0. Posts genuinely produced by
/// `step(m(pre) + e)` with a strictly monotone `m` can never violate this;
/// hand-assembled batches can.
pub fn verify_theorem2(
    pairs: &[(BitState, BitState)],
    state_bn: &BNStats,
    effect: &[f64],
) -> Result<Theorem2Outcome, BtlError> {
    if let Some(feature) = state_bn.degenerate_features().first() {
        return Err(BtlError::DegenerateStats { feature: *feature });
    }
    if effect.len() != state_bn.width() {
        return Err(BtlError::LengthMismatch { what: "effect", found: effect.len(), expected: state_bn.width() });
    }
    let Some(first) = pairs.first() else { return Ok(Theorem2Outcome::Ok) };
    let width = first.0.len();
    for bit in 0..width {
        let mut saw_01 = None;
        let mut saw_10 = None;
        let mut saw_post0 = None;
        let mut saw_post1 = None;
        for (i, (pre, post)) in pairs.iter().enumerate() {
            let (p, q) = (pre.get(bit), post.get(bit));
            if !p && q && saw_01.is_none() {
                saw_01 = Some(i);
            }
            if p && !q && saw_10.is_none() {
                saw_10 = Some(i);
            }
            if q && saw_post1.is_none() {
                saw_post1 = Some(i);
            } else if !q && saw_post0.is_none() {
                saw_post0 = Some(i);
            }
        }
        if let (Some(a), Some(b)) = (saw_01, saw_post0) {
            return Ok(Theorem2Outcome::Counterexample { bit, witnesses: (a, b) });
        }
        if let (Some(a), Some(b)) = (saw_10, saw_post1) {
            return Ok(Theorem2Outcome::Counterexample { bit, witnesses: (a, b) });
        }
    }
    Ok(Theorem2Outcome::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strips::Condition;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn det() -> Temperature {
        Temperature::deterministic()
    }

    #[test]
    fn binconcrete_deterministic_is_step() {
        let out = binconcrete(&[2.0, -0.5, 0.0], &det(), None).unwrap();
        assert_eq!(out, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn binconcrete_half_noise_is_plain_sigmoid() {
        let temp = Temperature::stochastic(1.0).unwrap();
        let xs = [0.3, -1.2, 4.0];
        let with_half = binconcrete(&xs, &temp, Some(&[0.5, 0.5, 0.5])).unwrap();
        let noise_free = binconcrete(&xs, &temp, None).unwrap();
        for ((a, b), &x) in with_half.iter().zip(&noise_free).zip(&xs) {
            assert!((a - sigmoid(x)).abs() < 1e-12);
            assert!((b - sigmoid(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn binconcrete_rejects_bad_noise() {
        let temp = Temperature::stochastic(0.5).unwrap();
        assert_eq!(
            binconcrete(&[0.0], &temp, Some(&[1.0])),
            Err(BtlError::NoiseOutOfRange { index: 0, value: 1.0 })
        );
    }

    #[test]
    fn gumbel_softmax_deterministic_argmax_and_ties() {
        let rows = vec![vec![3.0, 1.0, 0.0], vec![0.5, 0.5, 0.5]];
        let out = gumbel_softmax(&rows, &det(), None).unwrap();
        assert_eq!(out[0], vec![1.0, 0.0, 0.0]);
        assert_eq!(out[1], vec![1.0, 0.0, 0.0]); // tie goes to the lowest index
    }

    #[test]
    fn gumbel_softmax_rows_normalize() {
        let temp = Temperature::stochastic(0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let row: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let noise: Vec<f64> = (0..4).map(|_| rng.gen_range(1e-6..1.0 - 1e-6)).collect();
            let out = gumbel_softmax(&[row], &temp, Some(&[noise])).unwrap();
            let total: f64 = out[0].iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn relaxations_tighten_as_temperature_drops() {
        let xs: Vec<f64> = vec![-2.0, -0.7, 0.4, 1.9];
        let hard = binconcrete(&xs, &det(), None).unwrap();
        let mut prev = f64::INFINITY;
        for tau in [1.0, 0.1, 0.01] {
            let soft = binconcrete(&xs, &Temperature::stochastic(tau).unwrap(), None).unwrap();
            let dev = soft
                .iter()
                .zip(&hard)
                .map(|(s, h)| (s - h).abs())
                .fold(0.0f64, f64::max);
            assert!(dev <= prev + 1e-12);
            prev = dev;
        }

        let rows = vec![vec![0.9, 0.1, -0.5]];
        let hard_rows = gumbel_softmax(&rows, &det(), None).unwrap();
        let mut prev = f64::INFINITY;
        for tau in [1.0, 0.1, 0.01] {
            let soft = gumbel_softmax(&rows, &Temperature::stochastic(tau).unwrap(), None).unwrap();
            let dev = soft[0]
                .iter()
                .zip(&hard_rows[0])
                .map(|(s, h)| (s - h).abs())
                .fold(0.0f64, f64::max);
            assert!(dev <= prev + 1e-12);
            prev = dev;
        }
    }

    #[test]
    fn bn_fit_binary_batch() {
        let batch = vec![vec![0.0], vec![1.0]];
        let bn = BNStats::fit(&batch, &[1.0], &[0.0], 0.0).unwrap();
        assert_eq!(bn.logit_of_bit(0, false), -1.0);
        assert_eq!(bn.logit_of_bit(0, true), 1.0);
        assert!(bn.degenerate_features().is_empty());
    }

    #[test]
    fn bn_fit_flags_constant_features() {
        let batch = vec![vec![0.5, 0.0], vec![0.5, 1.0]];
        let bn = BNStats::fit(&batch, &[1.0, 1.0], &[0.0, 0.0], 0.0).unwrap();
        assert_eq!(bn.degenerate_features(), vec![0]);
        assert_eq!(BNStats::fit(&[], &[], &[], 0.0), Err(BtlError::EmptyBatch));
    }

    #[test]
    fn bn_normalizes_its_own_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let batch: Vec<Vec<f64>> = (0..32)
            .map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let bn = BNStats::fit(&batch, &[1.0; 3], &[0.0; 3], 0.0).unwrap();
        let transformed: Vec<Vec<f64>> = batch.iter().map(|row| bn.transform(row).unwrap()).collect();
        for f in 0..3 {
            let mean: f64 = transformed.iter().map(|r| r[f]).sum::<f64>() / 32.0;
            let var: f64 = transformed.iter().map(|r| (r[f] - mean).powi(2)).sum::<f64>() / 32.0;
            assert!(mean.abs() < 1e-9);
            assert!((var - 1.0).abs() < 1e-9);
        }
    }

    fn unit_bn(width: usize) -> BNStats {
        // m(0) = -1, m(1) = +1 per feature
        BNStats::from_parts(vec![0.5; width], vec![0.25; width], vec![1.0; width], vec![0.0; width], 0.0).unwrap()
    }

    #[test]
    fn btl_apply_add_nop_del() {
        let bn = unit_bn(1);
        let one = BitState::parse("1").unwrap();
        let zero = BitState::parse("0").unwrap();
        for (e, expect_from_0, expect_from_1) in [(1.5, true, true), (0.0, false, true), (-1.5, false, false)] {
            let table = EffectTable::Scalar { rows: vec![vec![e]] };
            let from0 = btl_apply(&zero, 0, &table, &bn, None, &det()).unwrap();
            let from1 = btl_apply(&one, 0, &table, &bn, None, &det()).unwrap();
            assert_eq!(from0.get(0), expect_from_0, "e={e}");
            assert_eq!(from1.get(0), expect_from_1, "e={e}");
        }
    }

    #[test]
    fn btl_apply_requires_deterministic_temperature() {
        let bn = unit_bn(1);
        let table = EffectTable::Scalar { rows: vec![vec![0.0]] };
        let z = BitState::parse("1").unwrap();
        let temp = Temperature::stochastic(0.5).unwrap();
        assert_eq!(btl_apply(&z, 0, &table, &bn, None, &temp), Err(BtlError::StochasticApply));
    }

    #[test]
    fn constructed_logits_formula() {
        let bn = unit_bn(2);
        let schema = ActionSchema::new(
            0,
            "a0",
            Condition::empty(2),
            BitState::from_indices(2, &[0]),
            BitState::zeros(2),
        )
        .unwrap();
        let row = logits_from_schema(&schema, &bn).unwrap();
        assert_eq!(row, vec![2.0, 0.0]);
        let empty = ActionSchema::new(0, "a0", Condition::empty(2), BitState::zeros(2), BitState::zeros(2)).unwrap();
        assert_eq!(logits_from_schema(&empty, &bn).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn constructed_logits_need_a_nop_gap() {
        let bn = BNStats::from_parts(vec![-2.0], vec![0.25], vec![1.0], vec![0.0], 0.0).unwrap();
        // m(0) = 4 > 0
        let schema = ActionSchema::new(0, "a0", Condition::empty(1), BitState::zeros(1), BitState::zeros(1)).unwrap();
        assert!(matches!(
            logits_from_schema(&schema, &bn),
            Err(BtlError::NopInfeasible { feature: 0, .. })
        ));
    }

    #[test]
    fn btl_realizes_strips_exhaustively() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let width = 6;
        let bn = unit_bn(width);
        for _ in 0..20 {
            let add = BitState::from_bools(&(0..width).map(|_| rng.gen_bool(0.3)).collect::<Vec<_>>());
            let del_raw = BitState::from_bools(&(0..width).map(|_| rng.gen_bool(0.3)).collect::<Vec<_>>());
            let del = del_raw.and_not(&add);
            let schema = ActionSchema::new(0, "a0", Condition::empty(width), add, del).unwrap();
            let table = EffectTable::Scalar { rows: vec![logits_from_schema(&schema, &bn).unwrap()] };
            for v in 0..(1u32 << width) {
                let state = BitState::from_bools(&(0..width).map(|i| v >> i & 1 == 1).collect::<Vec<_>>());
                assert_eq!(
                    btl_apply(&state, 0, &table, &bn, None, &det()).unwrap(),
                    schema.apply(&state)
                );
            }
        }
    }

    #[test]
    fn minmax_matches_strips() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let width = 16;
        for _ in 0..500 {
            let z = BitState::from_bools(&(0..width).map(|_| rng.gen()).collect::<Vec<_>>());
            let add = BitState::from_bools(&(0..width).map(|_| rng.gen_bool(0.25)).collect::<Vec<_>>());
            let del = BitState::from_bools(&(0..width).map(|_| rng.gen_bool(0.25)).collect::<Vec<_>>())
                .and_not(&add);
            let schema =
                ActionSchema::new(0, "a0", Condition::empty(width), add.clone(), del.clone()).unwrap();
            assert_eq!(minmax_apply(&z, &add, &del).unwrap(), schema.apply(&z));
        }
        let a = BitState::parse("10").unwrap();
        assert_eq!(minmax_apply(&a, &a, &a), Err(BtlError::OverlappingMasks { bit: 0 }));
        // identity when both masks are empty
        let none = BitState::zeros(2);
        assert_eq!(minmax_apply(&a, &none, &none).unwrap(), a);
    }

    #[test]
    fn smooth_apply_frozen_value() {
        // direct evaluation of smax(smin(1, 1-0), 0) = ln(e/2 + 1)
        let out = smooth_apply(&[1.0], &[0.0], &[0.0]);
        assert!((out[0] - 0.8582975333721057).abs() < 1e-12);
    }

    #[test]
    fn smax_is_symmetric_and_dominates_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let x = rng.gen_range(-50.0..50.0);
            let y = rng.gen_range(-50.0..50.0);
            assert!((smax(x, y) - smax(y, x)).abs() < 1e-12);
            assert!(smax(x, y) >= x.max(y));
            assert!((smin(x, y) + smax(-x, -y)).abs() < 1e-12);
        }
    }

    #[test]
    fn smooth_converges_to_hard_minmax_under_scaling() {
        // generic real inputs with separated branch values; binary inputs sit
        // exactly on smax ties and keep an irreducible ln(2)/t offset
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let scale = 100.0;
        for _ in 0..1000 {
            let z: f64 = rng.gen_range(0.0..1.0);
            let a: f64 = rng.gen_range(0.0..1.0);
            let d: f64 = rng.gen_range(0.0..1.0);
            let gap_ok = (z - (1.0 - d)).abs() > 0.05 && (z.min(1.0 - d) - a).abs() > 0.05;
            if !gap_ok {
                continue;
            }
            let hard = (z.min(1.0 - d)).max(a);
            let soft = smax(smin(scale * z, scale * (1.0 - d)), scale * a) / scale;
            assert!((soft - hard).abs() < 1e-3, "z={z} a={a} d={d}");
        }
    }

    fn random_monotone_bn(width: usize, rng: &mut ChaCha8Rng) -> BNStats {
        BNStats::from_parts(
            (0..width).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            (0..width).map(|_| rng.gen_range(0.05..2.0)).collect(),
            (0..width).map(|_| rng.gen_range(0.1..3.0)).collect(),
            (0..width).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            1e-5,
        )
        .unwrap()
    }

    #[test]
    fn theorem2_randomized_never_finds_counterexamples() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let width = rng.gen_range(1..10);
            let bn = random_monotone_bn(width, &mut rng);
            let effect: Vec<f64> = (0..width).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let pairs: Vec<(BitState, BitState)> = (0..rng.gen_range(1..16))
                .map(|_| {
                    let pre = BitState::from_bools(&(0..width).map(|_| rng.gen()).collect::<Vec<_>>());
                    let mut post = BitState::zeros(width);
                    for bit in 0..width {
                        let logit = bn.logit_of_bit(bit, pre.get(bit)) + effect[bit];
                        if step(logit) == 1.0 {
                            post.set(bit, true);
                        }
                    }
                    (pre, post)
                })
                .collect();
            assert_eq!(verify_theorem2(&pairs, &bn, &effect).unwrap(), Theorem2Outcome::Ok);
        }
    }

    #[test]
    fn theorem2_detects_hand_built_violations() {
        let bn = unit_bn(1);
        let pairs = vec![
            (BitState::parse("0").unwrap(), BitState::parse("1").unwrap()),
            (BitState::parse("0").unwrap(), BitState::parse("0").unwrap()),
        ];
        assert_eq!(
            verify_theorem2(&pairs, &bn, &[0.0]).unwrap(),
            Theorem2Outcome::Counterexample { bit: 0, witnesses: (0, 1) }
        );
    }

    #[test]
    fn theorem2_flags_degenerate_stats_first() {
        let bn = BNStats::from_parts(vec![0.5], vec![0.0], vec![1.0], vec![0.0], 0.0).unwrap();
        assert_eq!(
            verify_theorem2(&[], &bn, &[0.0]),
            Err(BtlError::DegenerateStats { feature: 0 })
        );
    }
}
