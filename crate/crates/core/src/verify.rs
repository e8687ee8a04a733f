//! Batch property suites and figure datasets.
//!
//! Each suite samples states, evaluates one or more margins per sample and
//! folds them into a [`CheckResult`]. Margins follow one convention: a
//! sample passes a check when its margin is `>= -tolerance`. Identity checks
//! use `-|deviation|` as the margin.
//!
//! Sampling is blocked: sample `i` for party count `N` is drawn from the
//! stream `RngStream::new(seed).split_path(&[N, i / BLOCK])`, in order within
//! its block. Blocks run in parallel and are merged in index order, so every
//! report depends only on the configuration.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{self, PolytopeMesh};
use crate::monotones::{self, BoundsReport, PairConcurrenceTable};
use crate::rng::RngStream;
use crate::states::{self, PureState};
use crate::tolerances;

/// States per sampling block.
pub const BLOCK: usize = 256;
/// Counterexample records kept per check.
pub const MAX_RECORDS: usize = 32;
/// Points of the GHZ angle grid on `[0, pi]`.
pub const GHZ_GRID: usize = 181;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub party_counts: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Tolerance for identity and inequality checks.
    pub tolerance: f64,
    /// Tolerance for reconstruction residuals.
    pub reconstruction_tolerance: f64,
    /// Tolerance for W-class face classification.
    pub face_tolerance: f64,
    pub local_dim: usize,
    /// Hand-supplied Y vectors run through the sharing-margin evaluator.
    pub inject: Vec<Vec<f64>>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            party_counts: (2..=8).collect(),
            samples: 10_000,
            seed: 0,
            tolerance: tolerances::IDENTITY,
            reconstruction_tolerance: tolerances::RECONSTRUCTION,
            face_tolerance: tolerances::FACE,
            local_dim: 2,
            inject: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if self.party_counts.is_empty() || self.party_counts.contains(&0) {
            return Err(Error::InvalidParameter("party counts must be at least 1".into()));
        }
        if self.local_dim < 2 {
            return Err(Error::InvalidParameter("local_dim must be at least 2".into()));
        }
        for &n in &self.party_counts {
            states::hilbert_dim(n, self.local_dim)?;
        }
        Ok(())
    }
}

/// Reproducible record of a failing sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub n_parties: usize,
    pub sample_index: usize,
    pub margin: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub y: Vec<f64>,
    /// `[re, im]` pairs in flat-index order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub tolerance: f64,
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub p01: f64,
    pub p50: f64,
    pub p99: f64,
    pub pass: bool,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub speculative: bool,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerificationReport {
    fn new(suite: &str, seed: u64, speculative: bool, checks: Vec<CheckResult>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            suite: suite.to_string(),
            seed,
            speculative,
            checks,
            pass,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned-column summary, six significant digits.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let tag = if self.speculative { " [SPECULATIVE]" } else { "" };
        let _ = writeln!(
            out,
            "suite {}{} seed={} -> {}",
            self.suite,
            tag,
            self.seed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(
            out,
            "  {:<width$}  {:>8}  {:>6}  {:>13}  {:>13}  {:>13}  {:>13}  result",
            "check", "samples", "viol", "worst", "p01", "p50", "p99"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:<width$}  {:>8}  {:>6}  {:>13}  {:>13}  {:>13}  {:>13}  {}",
                c.name,
                c.samples,
                c.violations,
                sig6(c.worst_margin),
                sig6(c.p01),
                sig6(c.p50),
                sig6(c.p99),
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        if self.speculative && !self.pass {
            let _ = writeln!(
                out,
                "  POTENTIAL COUNTEREXAMPLE: see counterexample records in the structured report"
            );
        }
        out
    }
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Exponent after rounding, so 0.9999999 reads as 1.00000.
    let sci = format!("{x:.5e}");
    let mag: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

struct Check {
    name: String,
    tolerance: f64,
    seed: u64,
    margins: Vec<f64>,
    violations: usize,
    records: Vec<Counterexample>,
}

impl Check {
    fn new(name: impl Into<String>, tolerance: f64, seed: u64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            seed,
            margins: Vec::new(),
            violations: 0,
            records: Vec::new(),
        }
    }

    fn push(&mut self, margin: f64, n_parties: usize, index: usize, y: &[f64], state: Option<&PureState>) {
        // NaN counts as a violation.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(margin >= -self.tolerance) {
            self.violations += 1;
            if self.records.len() < MAX_RECORDS {
                self.records.push(Counterexample {
                    seed: self.seed,
                    n_parties,
                    sample_index: index,
                    margin,
                    y: y.to_vec(),
                    amplitudes: state
                        .map(|s| s.amplitudes().iter().map(|z| [z.re, z.im]).collect())
                        .unwrap_or_default(),
                });
            }
        }
        self.margins.push(margin);
    }

    fn finish(self) -> CheckResult {
        let mut sorted = self.margins.clone();
        sorted.sort_by(f64::total_cmp);
        let pct = |p: f64| -> f64 {
            if sorted.is_empty() {
                return f64::NAN;
            }
            let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
            sorted[rank - 1]
        };
        let worst = self
            .margins
            .iter()
            .copied()
            .fold(f64::INFINITY, |a, b| if b.is_nan() || b < a { b } else { a });
        CheckResult {
            name: self.name,
            tolerance: self.tolerance,
            samples: self.margins.len(),
            violations: self.violations,
            worst_margin: worst,
            p01: pct(0.01),
            p50: pct(0.50),
            p99: pct(0.99),
            pass: self.violations == 0,
            counterexamples: self.records,
        }
    }
}

/// Draw `count` Haar states for `n` parties and map each through `f`, in
/// sample order.
pub fn map_samples<T, F>(seed: u64, n: usize, m: usize, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut RngStream, PureState) -> T + Sync,
{
    states::hilbert_dim(n, m)?;
    let master = RngStream::new(seed);
    let blocks = count.div_ceil(BLOCK);
    let parts: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = master.split_path(&[n as u64, b as u64]);
            let start = b * BLOCK;
            let end = (start + BLOCK).min(count);
            (start..end)
                .map(|i| {
                    let state = PureState::haar_random(n, m, &mut stream)
                        .expect("dimension checked above");
                    f(i, &mut stream, state)
                })
                .collect()
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

fn max_abs_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sharing inequality, half-total corollary and the two-party equality.
pub fn run_inequality_sweep(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let tol = config.tolerance;
    let mut checks = Vec::new();
    for &n in &config.party_counts {
        let per_sample = map_samples(config.seed, n, 2, config.samples, |_, _, state| {
            let y = monotones::entanglement_profile(&state).expect("qubit state").y;
            (y, state)
        })?;
        let mut sharing = Check::new(format!("sharing[N={n}]"), tol, config.seed);
        let mut half = Check::new(format!("half_total[N={n}]"), tol, config.seed);
        let mut equal = Check::new("two_party_equality[N=2]", tol, config.seed);
        for (i, (y, state)) in per_sample.iter().enumerate() {
            sharing.push(geometry::min_margin(y), n, i, y, Some(state));
            let total: f64 = y.iter().sum();
            let max = y.iter().copied().fold(0.0, f64::max);
            half.push(total - 2.0 * max, n, i, y, Some(state));
            if n == 2 {
                equal.push(-(y[0] - y[1]).abs(), n, i, y, Some(state));
            }
        }
        checks.push(sharing.finish());
        checks.push(half.finish());
        if n == 2 {
            checks.push(equal.finish());
        }
    }
    if !config.inject.is_empty() {
        let mut injected = Check::new("injected_sharing", tol, config.seed);
        for (i, y) in config.inject.iter().enumerate() {
            injected.push(geometry::min_margin(y), y.len(), i, y, None);
        }
        checks.push(injected.finish());
    }
    Ok(VerificationReport::new("inequality", config.seed, false, checks))
}

/// Lower bound from pairwise concurrences, clamped upper bound and the
/// monogamy residual.
pub fn run_bound_sandwich(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let tol = config.tolerance;
    let mut checks = Vec::new();
    for &n in config.party_counts.iter().filter(|&&n| n >= 2) {
        let per_sample = map_samples(config.seed, n, 2, config.samples, |_, _, state| {
            let profile = monotones::entanglement_profile(&state)?;
            let table = PairConcurrenceTable::compute(&state)?;
            let max_shared = (1..=n).map(|j| table.squared_row_sum(j)).fold(0.0, f64::max);
            Ok::<_, Error>((
                profile.y.clone(),
                BoundsReport::unchecked(&profile, &table),
                max_shared,
                state,
            ))
        })?;
        let mut lower = Check::new(format!("lower_bound[N={n}]"), tol, config.seed);
        let mut upper = Check::new(format!("upper_bound[N={n}]"), tol, config.seed);
        let mut monogamy = Check::new(format!("monogamy[N={n}]"), tol, config.seed);
        let mut pair_sum =
            Check::new(format!("pair_sum_at_most_one[N={n}]"), tolerances::MONOGAMY_FAULT, config.seed);
        for (i, item) in per_sample.into_iter().enumerate() {
            let (y, bounds, max_shared, state) = item?;
            let p = &bounds.parties;
            let min_of = |f: &dyn Fn(&monotones::PartyBounds) -> f64| {
                p.iter().map(f).fold(f64::INFINITY, f64::min)
            };
            lower.push(min_of(&|b| b.y - b.lower), n, i, &y, Some(&state));
            upper.push(min_of(&|b| b.upper - b.y), n, i, &y, Some(&state));
            monogamy.push(min_of(&|b| b.monogamy_residual), n, i, &y, Some(&state));
            pair_sum.push(1.0 - max_shared, n, i, &y, Some(&state));
        }
        checks.extend([lower.finish(), upper.finish(), monogamy.finish(), pair_sum.finish()]);
    }
    Ok(VerificationReport::new("bounds", config.seed, false, checks))
}

/// C-Y identity, local-unitary invariance of Y and Schmidt reconstruction.
pub fn run_identity_checks(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let tol = config.tolerance;
    let mut checks = Vec::new();
    for &n in &config.party_counts {
        let per_sample = map_samples(config.seed, n, 2, config.samples, |_, rng, state| {
            let profile = monotones::entanglement_profile(&state)?;
            let c_y = profile
                .marginals
                .iter()
                .map(|m| (m.c_rest * m.c_rest - m.y * (2.0 - m.y)).abs())
                .fold(0.0, f64::max);

            let mut rotated = state.clone();
            for j in 1..=n {
                let u = states::random_unitary(2, rng);
                rotated = rotated.apply_local_unitary(j, &u)?;
            }
            let drift = max_abs_deviation(&profile.y, &monotones::entanglement_profile(&rotated)?.y);

            let mut residual = 0.0f64;
            for j in 1..=n {
                let d = monotones::schmidt_vectors(&state, j)?;
                let rebuilt = d.reconstruct();
                for (a, b) in rebuilt.iter().zip(state.amplitudes()) {
                    residual = residual.max((a - b).norm());
                }
            }
            Ok::<_, Error>((profile.y, c_y, drift, residual, state))
        })?;
        let mut cy = Check::new(format!("c_y_identity[N={n}]"), tol, config.seed);
        let mut lu = Check::new(format!("local_unitary_invariance[N={n}]"), tol, config.seed);
        let mut rec = Check::new(
            format!("schmidt_reconstruction[N={n}]"),
            config.reconstruction_tolerance,
            config.seed,
        );
        for (i, item) in per_sample.into_iter().enumerate() {
            let (y, c_y, drift, residual, state) = item?;
            cy.push(-c_y, n, i, &y, Some(&state));
            lu.push(-drift, n, i, &y, Some(&state));
            rec.push(-residual, n, i, &y, Some(&state));
        }
        checks.extend([cy.finish(), lu.finish(), rec.finish()]);
    }
    Ok(VerificationReport::new("identities", config.seed, false, checks))
}

/// Random W-class coefficients: magnitudes uniform on the positive octant of
/// the unit sphere, independent uniform phases.
pub fn random_w_coefficients(rng: &mut RngStream) -> [Complex64; 3] {
    loop {
        let g: [f64; 3] = std::array::from_fn(|_| {
            let x: f64 = StandardNormal.sample(rng);
            x.abs()
        });
        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        if norm > 0.0 {
            return g.map(|m| Complex64::from_polar(m / norm, rng.random::<f64>() * 2.0 * PI));
        }
    }
}

/// GHZ diagonal, W-class faces, the base triangle and the symmetric W point.
pub fn run_family_checks(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let tol = config.tolerance;
    let seed = config.seed;
    let mut checks = Vec::new();

    let mut ghz = Check::new("ghz_diagonal", tol, seed);
    for i in 0..GHZ_GRID {
        let theta = PI * i as f64 / (GHZ_GRID - 1) as f64;
        let state = PureState::ghz(theta);
        let y = monotones::entanglement_profile(&state)?.y;
        let expected = 1.0 - (2.0 * theta).cos().abs();
        let dev = y.iter().map(|v| (v - expected).abs()).fold(0.0, f64::max);
        let locus = max_abs_deviation(&y, &geometry::ghz_locus(theta));
        ghz.push(-dev.max(locus), 3, i, &y, Some(&state));
    }
    checks.push(ghz.finish());

    let master = RngStream::new(seed);
    let blocks = config.samples.div_ceil(BLOCK);
    let w_samples: Vec<_> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = master.split_path(&[u64::MAX, b as u64]);
            let end = ((b + 1) * BLOCK).min(config.samples);
            (b * BLOCK..end)
                .map(|_| {
                    let [a, be, g] = random_w_coefficients(&mut stream);
                    let state = PureState::w_state(a, be, g)?;
                    let bare = PureState::w_state(
                        Complex64::new(a.norm(), 0.0),
                        Complex64::new(be.norm(), 0.0),
                        Complex64::new(g.norm(), 0.0),
                    )?;
                    let y = monotones::entanglement_profile(&state)?.y;
                    let y_bare = monotones::entanglement_profile(&bare)?.y;
                    let max_weight = [a, be, g].iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
                    Ok::<_, Error>((y, y_bare, max_weight, state))
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    let mut surface = Check::new("w_on_tetrahedron_surface", 0.0, seed);
    let mut base = Check::new("w_base_triangle_total", tol, seed);
    let mut phases = Check::new("w_phase_independence", tol, seed);
    for (i, item) in w_samples.into_iter().enumerate() {
        let (y, y_bare, max_weight, state) = item?;
        let face = geometry::classify_face(&[y[0], y[1], y[2]], config.face_tolerance);
        surface.push(if face.on_tetrahedron_surface() { 0.0 } else { -1.0 }, 3, i, &y, Some(&state));
        if max_weight <= 0.5 {
            let total: f64 = y.iter().sum();
            base.push(-(total - 2.0).abs(), 3, i, &y, Some(&state));
        }
        phases.push(-max_abs_deviation(&y, &y_bare), 3, i, &y, Some(&state));
    }
    checks.extend([surface.finish(), base.finish(), phases.finish()]);

    let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let w = PureState::w_state(a, a, a)?;
    let profile = monotones::entanglement_profile(&w)?;
    let table = PairConcurrenceTable::compute(&w)?;
    let bounds = BoundsReport::from_parts(&profile, &table)?;
    let third2 = 2.0 / 3.0;
    let mut sym_y = Check::new("symmetric_w_y", tol, seed);
    sym_y.push(-max_abs_deviation(&profile.y, &[third2; 3]), 3, 0, &profile.y, Some(&w));
    let mut sym_c = Check::new("symmetric_w_pairwise_concurrence", tol, seed);
    let pair_dev = [(1, 2), (1, 3), (2, 3)]
        .iter()
        .map(|&(j, k)| (table.get(j, k) - third2).abs())
        .fold(0.0, f64::max);
    sym_c.push(-pair_dev, 3, 0, &profile.y, Some(&w));
    let mut sym_tight = Check::new("symmetric_w_lower_bound_tight", tol, seed);
    let tight = bounds.parties.iter().map(|b| b.lower_margin.abs()).fold(0.0, f64::max);
    sym_tight.push(-tight, 3, 0, &profile.y, Some(&w));
    let mut sym_face = Check::new("symmetric_w_on_triangle_abc", 0.0, seed);
    let face = geometry::classify_face(&[profile.y[0], profile.y[1], profile.y[2]], config.face_tolerance);
    sym_face.push(
        if face == geometry::Face::TriangleAbc { 0.0 } else { -1.0 },
        3,
        0,
        &profile.y,
        Some(&w),
    );
    checks.extend([sym_y.finish(), sym_c.finish(), sym_tight.finish(), sym_face.finish()]);

    Ok(VerificationReport::new("families", seed, false, checks))
}

/// Y vector of an M-level state via the qudit monotone.
pub fn qudit_profile(state: &PureState) -> Result<Vec<f64>> {
    let m = state.local_dim();
    if state.n_parties() == 1 {
        return Ok(vec![0.0]);
    }
    (1..=state.n_parties())
        .map(|j| {
            let lambdas = monotones::schmidt_coefficients(state, j)?;
            monotones::qudit_y_monotone(&lambdas, m)
        })
        .collect()
}

/// Exploratory check of the sharing inequality for M-level parties. The
/// report is flagged speculative; violations are counterexample candidates.
pub fn run_qudit_speculation(m: usize, n: usize, samples: usize, seed: u64) -> Result<VerificationReport> {
    if m < 3 {
        return Err(Error::InvalidParameter("qudit suite needs local_dim >= 3".into()));
    }
    if samples == 0 || n == 0 {
        return Err(Error::InvalidParameter("samples and N must be positive".into()));
    }
    states::hilbert_dim(n, m)?;
    let tol = tolerances::IDENTITY;
    let per_sample = map_samples(seed, n, m, samples, |_, _, state| {
        qudit_profile(&state).map(|y| (y, state))
    })?;
    let mut sharing = Check::new(format!("qudit_sharing[M={m},N={n}]"), tol, seed);
    let mut equal = Check::new(format!("qudit_two_party_equality[M={m}]"), tol, seed);
    for (i, item) in per_sample.into_iter().enumerate() {
        let (y, state) = item?;
        sharing.push(geometry::min_margin(&y), n, i, &y, Some(&state));
        if n == 2 {
            equal.push(-(y[0] - y[1]).abs(), n, i, &y, Some(&state));
        }
    }
    let mut checks = vec![sharing.finish()];
    if n == 2 {
        checks.push(equal.finish());
    }
    Ok(VerificationReport::new("qudit", seed, true, checks))
}

/// Run every suite selected by name: `inequality`, `bounds`, `identities`,
/// `families`, `qudit` (M from the config, N = 3), or `all`.
pub fn run_named(suite: &str, config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let qudit = || {
        let m = if config.local_dim >= 3 { config.local_dim } else { 3 };
        run_qudit_speculation(m, 3, config.samples, config.seed)
    };
    Ok(match suite {
        "inequality" => vec![run_inequality_sweep(config)?],
        "bounds" => vec![run_bound_sandwich(config)?],
        "identities" => vec![run_identity_checks(config)?],
        "families" => vec![run_family_checks(config)?],
        "qudit" => vec![qudit()?],
        "all" => vec![
            run_inequality_sweep(config)?,
            run_bound_sandwich(config)?,
            run_identity_checks(config)?,
            run_family_checks(config)?,
            qudit()?,
        ],
        other => return Err(Error::InvalidParameter(format!("unknown suite '{other}'"))),
    })
}

/// Row of the bound-sandwich dataset for party 1 of a random three-qubit state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1Row {
    pub state_id: usize,
    pub y1: f64,
    pub upper_raw: f64,
    pub upper_clamped: f64,
    pub lower: f64,
}

pub fn figure1_dataset(samples: usize, seed: u64) -> Result<Vec<Figure1Row>> {
    map_samples(seed, 3, 2, samples, |i, _, state| {
        let b = monotones::bounds_report(&state)?.parties[0].clone();
        Ok(Figure1Row {
            state_id: i,
            y1: b.y,
            upper_raw: b.upper_raw,
            upper_clamped: b.upper,
            lower: b.lower,
        })
    })?
    .into_iter()
    .collect()
}

/// Row of the three-qubit additivity curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure4Row {
    pub y_total: f64,
    pub exact: f64,
    pub mc: f64,
    pub mc_std_error: f64,
}

/// Additivity on `grid` evenly spaced totals covering `[0, 3]`. Grid point
/// `i` draws from `RngStream::new(seed).split(i)`; the endpoints are
/// degenerate slices and carry zero area with zero error.
pub fn figure4_dataset(grid: usize, samples: u64, seed: u64) -> Result<Vec<Figure4Row>> {
    if grid < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points".into()));
    }
    let master = RngStream::new(seed);
    (0..grid)
        .map(|i| {
            let y_total = if i == grid - 1 { 3.0 } else { 3.0 * i as f64 / (grid - 1) as f64 };
            let exact = geometry::additivity_n3(y_total)?;
            let (mc, se) = if i == 0 || i == grid - 1 {
                (0.0, 0.0)
            } else {
                let cs = geometry::additivity_mc(3, y_total, samples, &master.split(i as u64))?;
                (cs.hyperarea, cs.standard_error.unwrap_or(0.0))
            };
            Ok(Figure4Row {
                y_total,
                exact,
                mc,
                mc_std_error: se,
            })
        })
        .collect()
}

pub fn polytope_mesh_export() -> PolytopeMesh {
    PolytopeMesh::oabce()
}

/// Per-state row of a sampling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub y: Vec<f64>,
    pub y_total: f64,
    pub min_margin: f64,
}

pub fn sample_profiles(n: usize, count: usize, seed: u64) -> Result<Vec<SampleRow>> {
    map_samples(seed, n, 2, count, |i, _, state| {
        let p = monotones::entanglement_profile(&state)?;
        Ok(SampleRow {
            index: i,
            min_margin: geometry::min_margin(&p.y),
            y_total: p.y_total,
            y: p.y,
        })
    })?
    .into_iter()
    .collect()
}

/// Comma-separated table with a header row, LF line endings and
/// shortest round-trip float formatting.
pub fn to_csv(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn figure1_csv(rows: &[Figure1Row]) -> String {
    let header = ["state_id", "y1", "upper_raw", "upper_clamped", "lower"].map(String::from);
    to_csv(
        &header,
        rows.iter().map(|r| {
            vec![
                r.state_id.to_string(),
                r.y1.to_string(),
                r.upper_raw.to_string(),
                r.upper_clamped.to_string(),
                r.lower.to_string(),
            ]
        }),
    )
}

pub fn figure4_csv(rows: &[Figure4Row]) -> String {
    let header = ["y_total", "a_exact", "a_mc", "mc_std_error"].map(String::from);
    to_csv(
        &header,
        rows.iter().map(|r| {
            vec![
                r.y_total.to_string(),
                r.exact.to_string(),
                r.mc.to_string(),
                r.mc_std_error.to_string(),
            ]
        }),
    )
}

pub fn samples_csv(n: usize, rows: &[SampleRow]) -> String {
    let mut header: Vec<String> = vec!["index".into()];
    header.extend((1..=n).map(|j| format!("y{j}")));
    header.extend(["y_total".into(), "min_margin".into()]);
    to_csv(
        &header,
        rows.iter().map(|r| {
            let mut row = vec![r.index.to_string()];
            row.extend(r.y.iter().map(f64::to_string));
            row.push(r.y_total.to_string());
            row.push(r.min_margin.to_string());
            row
        }),
    )
}
