//! Metropolis–Hastings sampling over a fiber and the conditional exact
//! test it supports.
//!
//! Given an observed table, the conditional test asks how extreme its
//! goodness-of-fit statistic is among all tables with the same marginals,
//! weighted by the hypergeometric law π(x) ∝ Π 1/x_ij!. The walk proposes
//! a uniformly chosen signed balanced move and accepts with the
//! Metropolis ratio for π, so its stationary distribution is exactly that
//! law — provided the moves connect the fiber, which is what the
//! classifier decides. [`exact_test`] surfaces that caveat as
//! `connectivity_warning` instead of silently reporting a p-value for the
//! wrong reference set.
//!
//! Everything is driven by [`SplitMix64`], a small published generator,
//! so a (seed, config) pair reproduces a trajectory bit for bit anywhere.

use serde::{Deserialize, Serialize};

use crate::basis::{generate_basic_moves, BasicMove, MoveSet};
use crate::error::{Error, Result};
use crate::pattern::basic_moves_suffice;
use crate::table::{SubtableMask, Table};

/// SplitMix64 (Steele–Lea–Vigna): state advances by the golden-gamma
/// constant and the output is a two-round xor–multiply mix.
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z  = state
/// z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// out = z ^ (z >> 31)
/// ```
///
/// All arithmetic is mod 2⁶⁴. The first outputs from seed 0 are
/// `0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, …` — frozen in the tests so
/// any reimplementation can check itself against them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    /// Seeds the generator. Every seed, including 0, is valid.
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// The next 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// A uniform double in [0, 1): the top 53 bits of one `next_u64`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * 2_f64.powi(-53)
    }
}

/// Length, warm-up, and seeding of one chain.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Total number of walk steps.
    pub steps: u64,
    /// Steps discarded before the first sample.
    pub burn_in: u64,
    /// Distance between consecutive samples (≥ 1).
    pub thinning: u64,
    /// Seed for [`SplitMix64`].
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            steps: 10_000,
            burn_in: 1_000,
            thinning: 10,
            seed: 0,
        }
    }
}

impl WalkConfig {
    fn validate(&self) -> Result<()> {
        if self.thinning == 0 {
            return Err(Error::InvalidConfig("thinning must be at least 1"));
        }
        if self.burn_in > self.steps {
            return Err(Error::InvalidConfig(
                "burn_in exceeds steps; no samples would remain",
            ));
        }
        Ok(())
    }
}

/// The outcome of [`exact_test`].
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TestReport {
    /// The statistic evaluated at the observed table.
    pub observed_statistic: f64,
    /// Fraction of samples whose statistic is ≥ the observed one.
    pub p_value_estimate: f64,
    /// Batch-means standard error of the estimate.
    pub monte_carlo_std_error: f64,
    /// Number of samples behind the estimate.
    pub samples_used: u64,
    /// True when the balanced moves provably do not connect every fiber,
    /// so the chain may explore only part of the reference set.
    pub connectivity_warning: bool,
}

/// One Metropolis–Hastings step from `current`, returning the next state
/// (possibly `current` itself on rejection or an infeasible proposal —
/// both count as a step, which keeps the chain reversible).
///
/// Randomness consumption is fixed: one `next_u64` picks the signed move
/// as `k = u % (2m)`, move `k/2`, sign + for even `k`; if the proposal is
/// feasible, exactly one `next_f64` decides acceptance. The acceptance
/// probability is min(1, Π x_old!/x_new!) over the four changed cells —
/// the hypergeometric ratio. (The modulo draw is biased by less than
/// 2⁻⁶⁰ for any realistic move count; it is kept because it makes the
/// draw trivially portable.)
pub fn walk_step(current: &Table, moves: &MoveSet, rng: &mut SplitMix64) -> Result<Table> {
    if moves.is_empty() {
        return Err(Error::EmptyMoveSet);
    }
    if current.shape() != moves.shape() {
        return Err(Error::ShapeMismatch {
            expected: moves.shape(),
            found: current.shape(),
        });
    }
    let mut next = current.clone();
    step_in_place(&mut next, moves.moves(), rng);
    Ok(next)
}

/// The walk kernel. Callers have validated shape and non-emptiness.
fn step_in_place(state: &mut Table, moves: &[BasicMove], rng: &mut SplitMix64) {
    let k = rng.next_u64() % (2 * moves.len() as u64);
    let mv = &moves[(k / 2) as usize];
    let sign: i8 = if k.is_multiple_of(2) { 1 } else { -1 };
    if !mv.feasible(state, sign) {
        return;
    }
    // π(new)/π(old) = Π x_old!/x_new!: each incremented cell contributes
    // 1/(x+1), each decremented cell contributes x.
    let mut numerator = 1.0_f64;
    let mut denominator = 1.0_f64;
    for ((r, c), delta) in mv.cells() {
        let old = state.get(r, c);
        if i64::from(sign) * delta > 0 {
            denominator *= (old + 1) as f64;
        } else {
            numerator *= old as f64;
        }
    }
    let u = rng.next_f64();
    if u * denominator < numerator {
        mv.apply(state, sign).expect("feasibility checked");
    }
}

/// Pearson chi-square against the independence fit: Σ (x − e)²/e with
/// e = (row sum)·(column sum)/total; cells with e = 0 contribute 0.
///
/// Errors with [`Error::EmptyTable`] when the grand total is zero.
pub fn chi_square(table: &Table) -> Result<f64> {
    let total = table.total();
    if total == 0 {
        return Err(Error::EmptyTable);
    }
    let rows = table.row_sums();
    let cols = table.col_sums();
    let mut statistic = 0.0;
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &cj) in cols.iter().enumerate() {
            let expected = (ri * cj) as f64 / total as f64;
            if expected > 0.0 {
                let deviation = table.get(i, j) as f64 - expected;
                statistic += deviation * deviation / expected;
            }
        }
    }
    Ok(statistic)
}

/// Monte Carlo conditional exact test with the chi-square statistic.
///
/// Runs the walk from `observed`, samples after burn-in at the thinning
/// interval (the state after exactly `burn_in` steps is the first
/// sample), and estimates p as the fraction of sampled statistics ≥ the
/// observed one — ties count, so `steps = 0` gives exactly 1.0 from the
/// single observed sample.
pub fn exact_test(
    observed: &Table,
    mask: &SubtableMask,
    config: &WalkConfig,
) -> Result<TestReport> {
    exact_test_with(observed, mask, config, chi_square)
}

/// [`exact_test`] with a caller-chosen statistic. Larger values must mean
/// a worse fit, since p estimates Pr(statistic ≥ observed).
pub fn exact_test_with<F>(
    observed: &Table,
    mask: &SubtableMask,
    config: &WalkConfig,
    statistic: F,
) -> Result<TestReport>
where
    F: Fn(&Table) -> Result<f64>,
{
    config.validate()?;
    if observed.shape() != mask.shape() {
        return Err(Error::ShapeMismatch {
            expected: mask.shape(),
            found: observed.shape(),
        });
    }
    let moves = generate_basic_moves(mask)?;
    if moves.is_empty() {
        return Err(Error::EmptyMoveSet);
    }
    // An all-in or all-out mask adds nothing beyond the marginals, so the
    // moves trivially suffice; the classifier proper rejects such masks.
    let connectivity_warning = if mask.is_empty() || mask.is_full() {
        false
    } else {
        !basic_moves_suffice(mask)?
    };

    let observed_statistic = statistic(observed)?;
    let mut rng = SplitMix64::new(config.seed);
    let mut state = observed.clone();
    let mut indicators = Vec::new();
    for t in 0..=config.steps {
        if t >= config.burn_in && (t - config.burn_in).is_multiple_of(config.thinning) {
            let value = statistic(&state)?;
            indicators.push(if value >= observed_statistic {
                1.0
            } else {
                0.0
            });
        }
        if t < config.steps {
            step_in_place(&mut state, moves.moves(), &mut rng);
        }
    }
    let samples_used = indicators.len() as u64;
    let p_value_estimate = indicators.iter().sum::<f64>() / samples_used as f64;
    Ok(TestReport {
        observed_statistic,
        p_value_estimate,
        monte_carlo_std_error: batch_means_std_error(&indicators),
        samples_used,
        connectivity_warning,
    })
}

/// Batch-means standard error: split the series into ⌊√n⌋ equal batches
/// (dropping the tail remainder) and take the standard error of the batch
/// means. Zero when fewer than two batches exist.
fn batch_means_std_error(series: &[f64]) -> f64 {
    let n = series.len();
    let batches = (n as f64).sqrt().floor() as usize;
    if batches < 2 {
        return 0.0;
    }
    let width = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| series[b * width..(b + 1) * width].iter().sum::<f64>() / width as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let variance = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
    (variance / batches as f64).sqrt()
}
