//! Brute-force oracles and seeded randomized campaigns.
//!
//! Every trial is a pure function of `(seed, trial index)`, so campaigns run
//! trials in parallel and still produce identical reports for identical seeds.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::densemat::{
    cholesky_invert, cholesky_invert_with, inversion_residual, matrix_graph, perron_eigenpair, verify_doubly_nonnegative,
    SymMatrix,
};
use crate::error::{Error, Result};
use crate::graph::{is_connected, UGraph};
use crate::rng::{seeded, trial_seed};
use crate::signpattern::{check_feasible, negative_sign_graph, sign_of_report, sign_of_with, Sign, SignMatrix};
use crate::tol::Tolerances;
use crate::treesign::{leaf_ratio_check_with, pattern_from_coloring, random_tree, random_tree_dn_matrix, two_coloring};

/// Largest dimension the exhaustive bipartition oracle accepts.
pub const ORACLE_MAX_N: usize = 16;

/// Draw budget for [`random_dn_matrix`] before giving up on irreducibility.
pub const MAX_RESAMPLES: usize = 1000;

/// A split of `0..n` into two nonempty sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub side_one: Vec<usize>,
    pub side_two: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, side_one: &[usize]) -> Result<Self> {
        let mut member = vec![false; n];
        for &v in side_one {
            if v >= n || member[v] {
                return Err(Error::InvalidArgument(format!("bad vertex {v} in bipartition side")));
            }
            member[v] = true;
        }
        let one: Vec<usize> = (0..n).filter(|&v| member[v]).collect();
        let two: Vec<usize> = (0..n).filter(|&v| !member[v]).collect();
        if one.is_empty() || two.is_empty() {
            return Err(Error::InvalidArgument("bipartition sides must be nonempty".into()));
        }
        Ok(Self {
            side_one: one,
            side_two: two,
        })
    }

    /// All `2^(n−1) − 1` bipartitions of `0..n`, with vertex 0 on side one.
    pub fn enumerate(n: usize) -> impl Iterator<Item = Bipartition> {
        let count: u64 = if n == 0 { 0 } else { (1u64 << (n - 1)) - 1 };
        (1..=count).map(move |mask| {
            let two_mask = mask << 1;
            let (two, one): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| two_mask >> v & 1 == 1);
            Bipartition {
                side_one: one,
                side_two: two,
            }
        })
    }

    pub fn n(&self) -> usize {
        self.side_one.len() + self.side_two.len()
    }
}

/// True iff every bipartition of `0..n` has a `Minus` entry between its
/// sides. Exhaustive over `2^(n−1) − 1` bipartitions.
pub fn bipartition_crossing_oracle(s: &SignMatrix) -> Result<bool> {
    let n = s.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            limit: ORACLE_MAX_N,
        });
    }
    if let Some((row, col)) = s.first_asymmetry() {
        return Err(Error::AsymmetricSignMatrix { row, col });
    }
    if n <= 1 {
        return Ok(true);
    }
    let minus_mask: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && s.get(i, j) == Sign::Minus)
                .fold(0u32, |m, j| m | 1 << j)
        })
        .collect();
    let full = (1u32 << n) - 1;
    let crossed = (1u32..1 << (n - 1)).all(|mask| {
        let side_two = mask << 1;
        let side_one = full & !side_two;
        (0..n).any(|i| side_one >> i & 1 == 1 && minus_mask[i] & side_two != 0)
    });
    Ok(crossed)
}

/// `x₁ᵀ · Z₁₂ · x₂` for the off-diagonal block `Z₁₂` of `ainv` under `part`.
pub fn quadratic_form_gap(ainv: &SymMatrix, x: &[f64], part: &Bipartition) -> Result<f64> {
    let n = ainv.n();
    for found in [x.len(), part.n()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    Ok(part
        .side_one
        .iter()
        .map(|&i| x[i] * part.side_two.iter().map(|&j| ainv.get(i, j) * x[j]).sum::<f64>())
        .sum())
}

/// Random irreducible doubly-nonnegative matrix `B·Bᵀ + μ·I`, `μ = 1e-6·n`.
///
/// `B` is `n × n` with entries uniform in `[0, 1]`, each kept with probability
/// `density`. Draws repeat until the graph is connected.
pub fn random_dn_matrix(n: usize, density: f64, seed: u64) -> Result<SymMatrix> {
    random_dn_matrix_traced(n, density, seed).map(|(a, _)| a)
}

/// Like [`random_dn_matrix`], also returning the number of rejected draws.
pub fn random_dn_matrix_traced(n: usize, density: f64, seed: u64) -> Result<(SymMatrix, usize)> {
    if n < 2 {
        return Err(Error::InvalidArgument("random DN matrices need n >= 2".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!("density {density} outside (0, 1]")));
    }
    let mut rng = seeded(seed);
    let ridge = 1e-6 * n as f64;
    for rejected in 0..MAX_RESAMPLES {
        let b: Vec<f64> = (0..n * n)
            .map(|_| {
                let value: f64 = rng.gen();
                let keep = rng.gen_bool(density);
                if keep {
                    value
                } else {
                    0.0
                }
            })
            .collect();
        let a = SymMatrix::from_fn(n, |i, j| {
            let dot: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
            if i == j {
                dot + ridge
            } else {
                dot
            }
        });
        if is_connected(&matrix_graph(&a)).connected {
            return Ok((a, rejected));
        }
    }
    Err(Error::ResampleBudget {
        budget: MAX_RESAMPLES,
    })
}

/// Campaign outcome. Merging is associative and independent of order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub trials: usize,
    pub failures: usize,
    /// Per-trial seeds of failed trials, ascending.
    pub failure_seeds: Vec<u64>,
    /// Smallest value of each monitored margin across trials.
    pub min_margins: BTreeMap<String, f64>,
    /// Event counts across trials.
    pub counters: BTreeMap<String, u64>,
}

impl CampaignReport {
    pub fn empty() -> Self {
        Self {
            trials: 0,
            failures: 0,
            failure_seeds: Vec::new(),
            min_margins: BTreeMap::new(),
            counters: BTreeMap::new(),
        }
    }

    pub fn merge(mut self, other: CampaignReport) -> Self {
        self.trials += other.trials;
        self.failures += other.failures;
        self.failure_seeds.extend(other.failure_seeds);
        self.failure_seeds.sort_unstable();
        for (k, v) in other.min_margins {
            self.record_margin(&k, v);
        }
        for (k, v) in other.counters {
            *self.counters.entry(k).or_insert(0) += v;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record_margin(&mut self, key: &str, value: f64) {
        let slot = self.min_margins.entry(key.to_string()).or_insert(value);
        *slot = slot.min(value);
    }

    fn single(seed: u64, failed: bool, margins: &[(&str, f64)], counters: &[(&str, u64)]) -> Self {
        let mut r = Self::empty();
        r.trials = 1;
        if failed {
            r.failures = 1;
            r.failure_seeds.push(seed);
        }
        for &(k, v) in margins {
            r.record_margin(k, v);
        }
        for &(k, v) in counters {
            r.counters.insert(k.to_string(), v);
        }
        r
    }
}

fn run_campaign<F>(trials: usize, seed: u64, trial: F) -> CampaignReport
where
    F: Fn(u64) -> CampaignReport + Sync,
{
    let outcomes: Vec<CampaignReport> = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial(trial_seed(seed, t)))
        .collect();
    outcomes.into_iter().fold(CampaignReport::empty(), CampaignReport::merge)
}

/// Dimension and density drawn for a necessity trial.
pub fn necessity_trial_params(n_range: &RangeInclusive<usize>, trial_seed: u64) -> (usize, f64) {
    let mut rng = seeded(trial_seed ^ 0xA5A5_A5A5_A5A5_A5A5);
    (rng.gen_range(n_range.clone()), rng.gen_range(0.2..=1.0))
}

/// For each trial: draw a random irreducible DN matrix, invert it, and check
/// that the inverse pattern is symmetric with `+` diagonal and a connected
/// negative-sign graph.
pub fn necessity_campaign(n_range: RangeInclusive<usize>, trials: usize, seed: u64) -> CampaignReport {
    necessity_campaign_with(n_range, trials, seed, &Tolerances::default())
}

pub fn necessity_campaign_with(
    n_range: RangeInclusive<usize>,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> CampaignReport {
    run_campaign(trials, seed, |ts| {
        let (n, density) = necessity_trial_params(&n_range, ts);
        let Ok(a) = random_dn_matrix(n, density, ts) else {
            return CampaignReport::single(ts, true, &[], &[("generation_errors", 1)]);
        };
        let Ok(ainv) = cholesky_invert_with(&a, tol) else {
            return CampaignReport::single(ts, true, &[], &[("inversion_errors", 1)]);
        };
        let s = sign_of_with(&ainv, tol);
        let connected = negative_sign_graph(&s)
            .map(|g| is_connected(&g).connected)
            .unwrap_or(false);
        let ok = s.is_symmetric() && s.diagonal_all_plus() && connected;
        let scale = ainv.max_abs();
        let min_diag = (0..n).map(|i| ainv.get(i, i)).fold(f64::INFINITY, f64::min);
        let residual = inversion_residual(&a, &ainv);
        let ok = ok && residual <= tol.residual(n);
        CampaignReport::single(
            ts,
            !ok,
            &[
                ("inverse_diagonal_rel", min_diag / scale),
                ("residual_headroom", tol.residual(n) / residual.max(f64::MIN_POSITIVE)),
            ],
            &[],
        )
    })
}

/// Per-trial classification of a tree prediction check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeTrial {
    pub n: usize,
    /// Smallest `−x / max|A⁻¹|` over entries predicted `−`.
    pub minus_margin: f64,
    /// Smallest `x / max|A⁻¹|` over off-diagonal entries predicted `+`.
    pub plus_margin: f64,
    pub min_diagonal: f64,
    /// Entries predicted `−` lying in `[−tol_zero, 0)`.
    pub minus_within_tolerance: u64,
    /// Entries whose computed sign is strictly opposite to the prediction.
    pub sign_contradictions: u64,
    pub residual: f64,
    pub leaf_ratio_ok: bool,
    pub max_leaf_deviation: f64,
}

impl TreeTrial {
    /// Predicted `−` below `−tol_zero`, predicted `+` above `−tol_zero`,
    /// positive diagonal, constant negative leaf ratios.
    pub fn passes(&self, tol: &Tolerances) -> bool {
        let zero_rel = tol.zero_rel;
        self.minus_margin > zero_rel
            && self.plus_margin > -zero_rel
            && self.min_diagonal > 0.0
            && self.leaf_ratio_ok
    }
}

/// Compares the predicted tree pattern against the computed inverse of `a`.
pub fn tree_trial(g: &UGraph, a: &SymMatrix) -> Result<TreeTrial> {
    tree_trial_with(g, a, &Tolerances::default())
}

pub fn tree_trial_with(g: &UGraph, a: &SymMatrix, tol: &Tolerances) -> Result<TreeTrial> {
    let coloring = two_coloring(g)?;
    let predicted = pattern_from_coloring(&coloring);
    let ainv = cholesky_invert_with(a, tol)?;
    let n = g.n();
    let scale = ainv.max_abs();
    let zero = tol.zero_abs(scale);
    let mut minus_margin = f64::INFINITY;
    let mut plus_margin = f64::INFINITY;
    let mut minus_within_tolerance = 0;
    let mut sign_contradictions = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = ainv.get(i, j);
            match predicted.get(i, j) {
                Sign::Minus => {
                    minus_margin = minus_margin.min(-x / scale);
                    if x >= 0.0 {
                        sign_contradictions += 1;
                    } else if x >= -zero {
                        minus_within_tolerance += 1;
                    }
                }
                Sign::Plus => {
                    plus_margin = plus_margin.min(x / scale);
                    if x < 0.0 {
                        sign_contradictions += 1;
                    }
                }
            }
        }
    }
    let leaf = leaf_ratio_check_with(a, &ainv, g, tol)?;
    Ok(TreeTrial {
        n,
        minus_margin,
        plus_margin,
        min_diagonal: (0..n).map(|i| ainv.get(i, i)).fold(f64::INFINITY, f64::min),
        minus_within_tolerance,
        sign_contradictions,
        residual: inversion_residual(a, &ainv),
        leaf_ratio_ok: leaf.passes(),
        max_leaf_deviation: leaf.leaves.iter().map(|l| l.max_rel_deviation).fold(0.0, f64::max),
    })
}

/// Tree and realization seeds for one tree-campaign trial.
pub fn tree_trial_instance(n_range: &RangeInclusive<usize>, trial_seed: u64) -> Result<(UGraph, SymMatrix)> {
    let n = seeded(trial_seed ^ 0x5A5A_5A5A_5A5A_5A5A).gen_range(n_range.clone());
    let g = random_tree(n, trial_seed);
    let a = random_tree_dn_matrix(&g, trial_seed.rotate_left(17))?;
    Ok((g, a))
}

/// Random trees with random DN realizations: checks the predicted inverse
/// pattern and the leaf-ratio property on each.
pub fn tree_prediction_campaign(n_range: RangeInclusive<usize>, trials: usize, seed: u64) -> CampaignReport {
    tree_prediction_campaign_with(n_range, trials, seed, &Tolerances::default())
}

pub fn tree_prediction_campaign_with(
    n_range: RangeInclusive<usize>,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> CampaignReport {
    run_campaign(trials, seed, |ts| {
        let trial = tree_trial_instance(&n_range, ts).and_then(|(g, a)| tree_trial_with(&g, &a, tol));
        match trial {
            Err(_) => CampaignReport::single(ts, true, &[], &[("errors", 1)]),
            Ok(t) => CampaignReport::single(
                ts,
                !t.passes(tol),
                &[
                    ("minus_entry_rel", t.minus_margin),
                    ("plus_entry_rel", t.plus_margin),
                    ("inverse_diagonal", t.min_diagonal),
                    ("leaf_ratio_headroom", tol.ratio / t.max_leaf_deviation.max(f64::MIN_POSITIVE)),
                ],
                &[
                    ("minus_within_tolerance", t.minus_within_tolerance),
                    ("sign_contradictions", t.sign_contradictions),
                    ("leaf_ratio_violations", u64::from(!t.leaf_ratio_ok)),
                ],
            ),
        }
    })
}

/// Outcome of replaying the quadratic-form argument on one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticReplay {
    pub perron_value: f64,
    pub perron_min_entry: f64,
    pub bipartitions: usize,
    /// Largest `x₁ᵀ Z₁₂ x₂` over all bipartitions, relative to `λ⁻¹·‖x‖²`.
    pub max_gap_rel: f64,
    /// Bipartitions whose block `Z₁₂` is entrywise nonnegative and nonzero.
    pub nonnegative_blocks: usize,
}

/// Evaluates the cross term of the inverse's quadratic form at the Perron
/// vector of `a` for every bipartition. The cross term can never be
/// positive, and an entrywise-nonnegative nonzero block would contradict that.
pub fn quadratic_form_replay(a: &SymMatrix) -> Result<QuadraticReplay> {
    let n = a.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            limit: ORACLE_MAX_N,
        });
    }
    let perron = perron_eigenpair(a)?;
    let ainv = cholesky_invert(a)?;
    let zero = Tolerances::default().zero_abs(ainv.max_abs());
    let gamma = 1.0 / perron.value;
    let mut max_gap_rel = f64::NEG_INFINITY;
    let mut nonnegative_blocks = 0;
    let mut bipartitions = 0;
    for part in Bipartition::enumerate(n) {
        bipartitions += 1;
        let gap = quadratic_form_gap(&ainv, &perron.vector, &part)?;
        max_gap_rel = max_gap_rel.max(gap / gamma);
        let block = part
            .side_one
            .iter()
            .flat_map(|&i| part.side_two.iter().map(move |&j| (i, j)));
        let (mut nonneg, mut nonzero) = (true, false);
        for (i, j) in block {
            let z = ainv.get(i, j);
            nonneg &= z >= -zero;
            nonzero |= z.abs() > zero;
        }
        if nonneg && nonzero {
            nonnegative_blocks += 1;
        }
    }
    Ok(QuadraticReplay {
        perron_value: perron.value,
        perron_min_entry: perron.vector.iter().copied().fold(f64::INFINITY, f64::min),
        bipartitions,
        max_gap_rel,
        nonnegative_blocks,
    })
}

/// Two doubly-nonnegative matrices with the same complete graph whose
/// inverses have different sign patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct NonUniquePair {
    pub first: SymMatrix,
    pub second: SymMatrix,
    pub first_pattern: SignMatrix,
    pub second_pattern: SignMatrix,
    pub first_seed: u64,
    pub second_seed: u64,
    pub trials_used: usize,
}

/// Randomly searches dense DN matrices with complete graph `K_n` until two
/// have different inverse sign patterns. Candidates with any inverse entry
/// inside the zero band are skipped.
pub fn search_nonunique_complete(n: usize, max_trials: usize, seed: u64) -> Result<NonUniquePair> {
    if n < 3 {
        return Err(Error::InvalidArgument(
            "every 2 x 2 candidate has the same inverse pattern; need n >= 3".into(),
        ));
    }
    let tol = Tolerances::default();
    let complete = UGraph::complete(n);
    let mut reference: Option<(SymMatrix, SignMatrix, u64)> = None;
    for t in 0..max_trials {
        let ts = trial_seed(seed, t as u64);
        let a = random_dn_matrix(n, 1.0, ts)?;
        if matrix_graph(&a) != complete || !verify_doubly_nonnegative(&a).passes() {
            continue;
        }
        let Ok(ainv) = cholesky_invert(&a) else { continue };
        let reading = sign_of_report(&ainv, &tol);
        if !reading.ambiguous.is_empty() {
            continue;
        }
        match &reference {
            None => reference = Some((a, reading.signs, ts)),
            Some((first, first_pattern, first_seed)) if *first_pattern != reading.signs => {
                return Ok(NonUniquePair {
                    first: first.clone(),
                    second: a,
                    first_pattern: first_pattern.clone(),
                    second_pattern: reading.signs,
                    first_seed: *first_seed,
                    second_seed: ts,
                    trials_used: t + 1,
                });
            }
            Some(_) => {}
        }
    }
    Err(Error::NotFound { trials: max_trials })
}

/// Independent re-verification of a non-uniqueness pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    pub both_doubly_nonnegative: bool,
    pub both_complete: bool,
    pub both_patterns_feasible: bool,
    pub unambiguous: bool,
    pub patterns_differ: bool,
}

impl PairCheck {
    pub fn passes(&self) -> bool {
        self.both_doubly_nonnegative
            && self.both_complete
            && self.both_patterns_feasible
            && self.unambiguous
            && self.patterns_differ
    }
}

pub fn check_nonunique_pair(a: &SymMatrix, b: &SymMatrix) -> Result<PairCheck> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let tol = Tolerances::default();
    let complete = UGraph::complete(a.n());
    let ra = sign_of_report(&cholesky_invert(a)?, &tol);
    let rb = sign_of_report(&cholesky_invert(b)?, &tol);
    Ok(PairCheck {
        both_doubly_nonnegative: verify_doubly_nonnegative(a).passes() && verify_doubly_nonnegative(b).passes(),
        both_complete: matrix_graph(a) == complete && matrix_graph(b) == complete,
        both_patterns_feasible: check_feasible(&ra.signs).feasible && check_feasible(&rb.signs).feasible,
        unambiguous: ra.ambiguous.is_empty() && rb.ambiguous.is_empty(),
        patterns_differ: ra.signs != rb.signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_component_pattern() -> SignMatrix {
        SignMatrix::from_rows(&["+-++", "-+++", "+++-", "++-+"]).unwrap()
    }

    #[test]
    fn bipartition_enumeration_counts() {
        assert_eq!(Bipartition::enumerate(1).count(), 0);
        assert_eq!(Bipartition::enumerate(2).count(), 1);
        assert_eq!(Bipartition::enumerate(5).count(), 15);
        for p in Bipartition::enumerate(4) {
            assert!(p.side_one.contains(&0));
            assert!(!p.side_two.is_empty());
        }
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(3, &[0, 1]).is_ok());
        assert!(Bipartition::new(3, &[]).is_err());
        assert!(Bipartition::new(3, &[0, 1, 2]).is_err());
        assert!(Bipartition::new(3, &[0, 0]).is_err());
    }

    #[test]
    fn crossing_oracle_examples() {
        assert!(!bipartition_crossing_oracle(&two_component_pattern()).unwrap());
        assert!(bipartition_crossing_oracle(&SignMatrix::from_rows(&["+-", "-+"]).unwrap()).unwrap());
        assert!(bipartition_crossing_oracle(&SignMatrix::all_plus(1)).unwrap());
        assert_eq!(
            bipartition_crossing_oracle(&SignMatrix::all_plus(17)),
            Err(Error::TooLarge { n: 17, limit: 16 })
        );
    }

    #[test]
    fn quadratic_gap_examples() {
        let part = Bipartition::new(2, &[0]).unwrap();
        assert_eq!(quadratic_form_gap(&SymMatrix::identity(2), &[1.0, 1.0], &part).unwrap(), 0.0);
        let z = SymMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let gap = quadratic_form_gap(&z, &[h, h], &part).unwrap();
        assert!((gap + 0.5).abs() < 1e-15);
        assert!(matches!(
            quadratic_form_gap(&z, &[1.0], &part),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_dn_small_and_sparse() {
        let a = random_dn_matrix(2, 1.0, 0).unwrap();
        assert!(a.get(0, 1) > 0.0);
        assert!(verify_doubly_nonnegative(&a).passes());
        let (a, rejected) = random_dn_matrix_traced(6, 0.3, 1234).unwrap();
        assert!(rejected < MAX_RESAMPLES);
        assert!(verify_doubly_nonnegative(&a).passes());
        assert!(random_dn_matrix(1, 1.0, 0).is_err());
        assert!(random_dn_matrix(3, 0.0, 0).is_err());
    }

    #[test]
    fn empty_campaign() {
        let r = necessity_campaign(2..=12, 0, 9);
        assert_eq!(r, CampaignReport::empty());
    }

    #[test]
    fn campaigns_are_deterministic() {
        assert_eq!(necessity_campaign(2..=8, 40, 5), necessity_campaign(2..=8, 40, 5));
        assert_eq!(tree_prediction_campaign(2..=20, 20, 5), tree_prediction_campaign(2..=20, 20, 5));
    }

    #[test]
    fn merge_is_order_independent() {
        let a = CampaignReport::single(9, true, &[("m", 0.5)], &[("c", 1)]);
        let b = CampaignReport::single(3, true, &[("m", 0.2)], &[("c", 2)]);
        let c = CampaignReport::single(5, false, &[("m", 0.9)], &[]);
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = c.merge(b.merge(a));
        assert_eq!(left, right);
        assert_eq!(left.failure_seeds, vec![3, 9]);
        assert_eq!(left.min_margins["m"], 0.2);
        assert_eq!(left.counters["c"], 3);
    }

    #[test]
    fn replay_on_random_matrices() {
        for seed in 0..10 {
            let a = random_dn_matrix(6, 0.6, seed).unwrap();
            let r = quadratic_form_replay(&a).unwrap();
            assert!(r.perron_min_entry > 0.0);
            assert_eq!(r.nonnegative_blocks, 0);
            assert!(r.max_gap_rel < 0.0, "{r:?}");
        }
    }

    #[test]
    fn nonunique_search_rejects_small_n() {
        assert!(matches!(search_nonunique_complete(2, 10, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn nonunique_search_finds_pair_for_three() {
        let pair = search_nonunique_complete(3, 100_000, 1).unwrap();
        assert_ne!(pair.first_pattern, pair.second_pattern);
        assert!(check_nonunique_pair(&pair.first, &pair.second).unwrap().passes());
    }
}
