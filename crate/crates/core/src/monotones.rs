//! One-vs-rest entanglement quantities.
//!
//! For party `j` of a pure qubit state, the single-party reduction has
//! eigenvalues `lambda_max >= lambda_min`. From these:
//!
//! - Schmidt weight `K_j = 1 / (lambda_max^2 + lambda_min^2)`, in `[1, 2]`
//! - monotone `Y_j = 1 - sqrt(2/K_j - 1) = 2 * lambda_min`, in `[0, 1]`
//! - one-vs-rest concurrence `C_j = 2 sqrt(lambda_max * lambda_min)`, with
//!   `C_j^2 = Y_j (2 - Y_j)`
//!
//! Pairwise concurrences use the Wootters construction. Only Hermitian
//! eigensolvers are involved; see [`wootters_concurrence`].

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::smallmat::{self, clamp_nonnegative, hermitian_eigen, ComplexMatrix};
use crate::states::PureState;
use crate::tolerances;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Clamp `x >= -CLAMP` to zero, pass larger values through.
fn hygiene(x: f64) -> f64 {
    if (-tolerances::CLAMP..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

fn sqrt_clamped(x: f64) -> f64 {
    hygiene(x).max(0.0).sqrt()
}

fn check_distribution(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::BadDistribution("empty".into()));
    }
    // Written so NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if let Some(l) = lambdas.iter().find(|&&l| !(l >= -tolerances::CLAMP)) {
        return Err(Error::BadDistribution(format!("negative weight {l}")));
    }
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > tolerances::RENORMALIZE {
        return Err(Error::BadDistribution(format!("weights sum to {sum}")));
    }
    Ok(())
}

/// Eigenvalues of the party-`j` reduction, descending, clamped to `[0, 1]`
/// and renormalized.
///
/// For qubits this is `[lambda_max, lambda_min]`.
pub fn schmidt_coefficients(state: &PureState, j: usize) -> Result<Vec<f64>> {
    let rho = state.reduced_density_single(j)?;
    let eig = hermitian_eigen(&rho, false)?;
    normalize_spectrum(eig.values.into_iter().rev().collect())
}

fn normalize_spectrum(mut lambdas: Vec<f64>) -> Result<Vec<f64>> {
    for l in lambdas.iter_mut() {
        *l = clamp_nonnegative(*l)?.min(1.0);
    }
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > tolerances::RENORMALIZE {
        return Err(Error::BadDistribution(format!("reduced trace {sum}")));
    }
    for l in lambdas.iter_mut() {
        *l /= sum;
    }
    Ok(lambdas)
}

/// `(lambda_max, lambda_min)` for a qubit party.
pub fn qubit_lambdas(state: &PureState, j: usize) -> Result<(f64, f64)> {
    state.require_qubits()?;
    let l = schmidt_coefficients(state, j)?;
    Ok((l[0], l[1]))
}

/// Schmidt decomposition of a state across party `j` versus the rest.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub party: usize,
    pub n_parties: usize,
    pub local_dim: usize,
    /// Descending.
    pub lambdas: Vec<f64>,
    /// Local vectors `f_n` on party `j`.
    pub local: Vec<Vec<Complex64>>,
    /// Complement vectors `g_n` over the other parties, in their original
    /// order with the lowest-numbered party most significant.
    pub complement: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    /// `sum_n sqrt(lambda_n) f_n (x) g_n` reassembled in the global index order.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let m = self.local_dim;
        let total = m.pow(self.n_parties as u32);
        let stride = m.pow((self.n_parties - self.party) as u32);
        let mut out = vec![ZERO; total];
        for (i, slot) in out.iter_mut().enumerate() {
            let s = (i / stride) % m;
            let rest = (i / (stride * m)) * stride + i % stride;
            *slot = self
                .lambdas
                .iter()
                .zip(self.local.iter().zip(&self.complement))
                .map(|(&l, (f, g))| f[s] * g[rest] * l.sqrt())
                .sum();
        }
        out
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormalize `v` against `basis`; `None` if nothing is left.
fn orthonormalize(mut v: Vec<Complex64>, basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    for b in basis {
        let overlap = inner(b, &v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= overlap * y;
        }
    }
    let n = vec_norm(&v);
    (n > 1e-7).then(|| v.into_iter().map(|z| z / n).collect())
}

/// Schmidt vectors and coefficients for party `j`.
///
/// Complement vectors for vanishing coefficients are completed to an
/// orthonormal set; for degenerate coefficients any eigenbasis is returned.
pub fn schmidt_vectors(state: &PureState, j: usize) -> Result<SchmidtDecomposition> {
    let rho = state.reduced_density_single(j)?;
    let eig = hermitian_eigen(&rho, true)?;
    let vectors = eig.vectors.expect("vectors requested");
    let m = state.local_dim();
    let lambdas = normalize_spectrum(eig.values.iter().rev().copied().collect())?;
    let local: Vec<Vec<Complex64>> = (0..m).rev().map(|c| vectors.column(c)).collect();

    let stride = state.stride(j);
    let rest_dim = state.amplitudes().len() / m;
    let amps = state.amplitudes();

    let mut complement: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    let mut pending = Vec::new();
    for (n, f) in local.iter().enumerate() {
        // <f_n| psi> contracted on party j.
        let g: Vec<Complex64> = (0..rest_dim)
            .map(|rest| {
                let hi = rest / stride;
                let lo = rest % stride;
                (0..m)
                    .map(|s| f[s].conj() * amps[(hi * m + s) * stride + lo])
                    .sum()
            })
            .collect();
        match orthonormalize(g, &complement) {
            Some(g) if lambdas[n] > 0.0 => complement.push(g),
            _ => {
                complement.push(Vec::new());
                pending.push(n);
            }
        }
    }
    // Complete missing partners from the computational basis.
    let mut candidate = 0;
    for n in pending {
        let filled: Vec<Vec<Complex64>> =
            complement.iter().filter(|g| !g.is_empty()).cloned().collect();
        loop {
            if candidate >= rest_dim {
                // Rest space smaller than M (N = 1): leave a zero partner.
                complement[n] = vec![ZERO; rest_dim];
                break;
            }
            let mut e = vec![ZERO; rest_dim];
            e[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            if let Some(g) = orthonormalize(e, &filled) {
                complement[n] = g;
                break;
            }
        }
    }

    Ok(SchmidtDecomposition {
        party: j,
        n_parties: state.n_parties(),
        local_dim: m,
        lambdas,
        local,
        complement,
    })
}

/// `K = 1 / sum(lambda^2)`.
pub fn schmidt_weight(lambdas: &[f64]) -> Result<f64> {
    check_distribution(lambdas)?;
    let purity: f64 = lambdas.iter().map(|l| l * l).sum();
    Ok((1.0 / purity).clamp(1.0, lambdas.len() as f64))
}

/// `Y = 1 - sqrt(2/K - 1)` from the Schmidt weight alone.
///
/// Loses precision near `K = 2`; [`y_monotone`] is the accurate route.
pub fn y_from_weight(weight: f64) -> f64 {
    (1.0 - sqrt_clamped(2.0 / weight - 1.0)).clamp(0.0, 1.0)
}

/// `Y = 2 * lambda_min` for a two-outcome distribution.
pub fn y_monotone(lambdas: &[f64]) -> Result<f64> {
    if lambdas.len() != 2 {
        return Err(Error::BadDistribution(format!(
            "expected 2 weights, got {}",
            lambdas.len()
        )));
    }
    check_distribution(lambdas)?;
    Ok((2.0 * lambdas[0].min(lambdas[1]).max(0.0)).clamp(0.0, 1.0))
}

/// `Y = 1 - sqrt((M/K - 1) / (M - 1))` for an M-level party.
///
/// Uses the identity `M/K - 1 = M * sum (lambda - 1/M)^2`, which avoids the
/// cancellation in `M * sum(lambda^2) - 1`.
pub fn qudit_y_monotone(lambdas: &[f64], m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter("local_dim must be at least 2".into()));
    }
    if lambdas.len() != m {
        return Err(Error::BadDistribution(format!(
            "expected {m} weights, got {}",
            lambdas.len()
        )));
    }
    check_distribution(lambdas)?;
    let mf = m as f64;
    let spread: f64 = lambdas.iter().map(|l| (l - 1.0 / mf).powi(2)).sum();
    Ok((1.0 - sqrt_clamped(mf * spread / (mf - 1.0))).clamp(0.0, 1.0))
}

/// `sqrt(Y (2 - Y))`.
pub fn concurrence_from_y(y: f64) -> f64 {
    sqrt_clamped(y * (2.0 - y))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitMarginal {
    pub party: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Schmidt weight.
    pub k: f64,
    pub y: f64,
    /// One-vs-rest concurrence, `2 sqrt(lambda_min lambda_max)`.
    pub c_rest: f64,
}

impl QubitMarginal {
    fn from_lambdas(party: usize, lambda_max: f64, lambda_min: f64) -> Result<Self> {
        let lambdas = [lambda_max, lambda_min];
        Ok(Self {
            party,
            lambda_min,
            lambda_max,
            k: schmidt_weight(&lambdas)?,
            y: y_monotone(&lambdas)?,
            c_rest: 2.0 * (lambda_max * lambda_min).max(0.0).sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementProfile {
    pub marginals: Vec<QubitMarginal>,
    pub y: Vec<f64>,
    pub y_total: f64,
}

impl EntanglementProfile {
    pub fn n_parties(&self) -> usize {
        self.y.len()
    }
}

/// Per-party Schmidt data and `Y` vector of a qubit state.
///
/// A single party has no bipartition, so `N = 1` yields `Y = (0)`.
pub fn entanglement_profile(state: &PureState) -> Result<EntanglementProfile> {
    state.require_qubits()?;
    let n = state.n_parties();
    let marginals = if n == 1 {
        vec![QubitMarginal::from_lambdas(1, 1.0, 0.0)?]
    } else {
        (1..=n)
            .map(|j| {
                let (hi, lo) = qubit_lambdas(state, j)?;
                QubitMarginal::from_lambdas(j, hi, lo)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let y: Vec<f64> = marginals.iter().map(|m| m.y).collect();
    let y_total = y.iter().sum();
    Ok(EntanglementProfile {
        marginals,
        y,
        y_total,
    })
}

/// `C_{j|rest} = 2 sqrt(lambda_1 lambda_2)`.
pub fn concurrence_one_vs_rest(state: &PureState, j: usize) -> Result<f64> {
    let (hi, lo) = qubit_lambdas(state, j)?;
    Ok(2.0 * (hi * lo).max(0.0).sqrt())
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// The Wootters values `mu_i` (square roots of the spectrum of
/// `sqrt(rho) rho~ sqrt(rho)`) are the singular values of
/// `T = sqrt(rho) (sigma_y (x) sigma_y) sqrt(rho)*`. In the eigenbasis `V` of
/// `rho` this is `D (V^dagger Y V*) D` with `D = diag(sqrt(e))`, and its
/// singular values are read off the Hermitian dilation `[[0, T], [T^dagger, 0]]`.
/// This keeps absolute accuracy near rank deficiency, where taking square
/// roots of noisy near-zero eigenvalues would not.
pub fn wootters_concurrence(rho: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: rho.dim(),
        });
    }
    let eig = hermitian_eigen(rho, true)?;
    let v = eig.vectors.expect("vectors requested");
    let roots = eig
        .values
        .iter()
        .map(|&e| {
            let e = clamp_nonnegative(e)?;
            Ok(if e < tolerances::RANK_CUTOFF { 0.0 } else { e.sqrt() })
        })
        .collect::<Result<Vec<_>>>()?;
    let q = &(&v.dagger() * &smallmat::sigma_yy()) * &v.conj();
    let mut dilation = ComplexMatrix::zeros(8);
    for r in 0..4 {
        for c in 0..4 {
            let t = q[(r, c)] * (roots[r] * roots[c]);
            dilation[(r, c + 4)] = t;
            dilation[(c + 4, r)] = t.conj();
        }
    }
    let spectrum = hermitian_eigen(&dilation, false)?.values;
    let mu: Vec<f64> = spectrum.iter().rev().take(4).map(|&s| s.max(0.0)).collect();
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// Wootters concurrence read directly from the eigenvalues of
/// `sqrt(rho) rho~ sqrt(rho)`.
///
/// Accurate to roughly `sqrt(machine epsilon)` for rank-deficient `rho`; kept
/// as an independent cross-check of [`wootters_concurrence`].
pub fn wootters_concurrence_direct(rho: &ComplexMatrix) -> Result<f64> {
    let flipped = smallmat::spin_flip_conjugate(rho)?;
    let root = smallmat::psd_sqrt(rho)?;
    let r = &(&root * &flipped) * &root;
    let eig = hermitian_eigen(&r, false)?;
    let mu = eig
        .values
        .iter()
        .rev()
        .map(|&e| clamp_nonnegative(e).map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// Concurrence of the two-qubit reduction on parties `(j, k)`.
pub fn pairwise_concurrence(state: &PureState, j: usize, k: usize) -> Result<f64> {
    state.require_qubits()?;
    wootters_concurrence(&state.reduced_density_pair(j, k)?)
}

/// Symmetric table of pairwise concurrences with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairConcurrenceTable {
    n: usize,
    entries: Vec<f64>,
}

impl PairConcurrenceTable {
    pub fn compute(state: &PureState) -> Result<Self> {
        state.require_qubits()?;
        let n = state.n_parties();
        let mut entries = vec![0.0; n * n];
        for j in 1..=n {
            for k in j + 1..=n {
                let c = pairwise_concurrence(state, j, k)?;
                entries[(j - 1) * n + (k - 1)] = c;
                entries[(k - 1) * n + (j - 1)] = c;
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n_parties(&self) -> usize {
        self.n
    }

    /// `C_jk` with 1-based party indices.
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[(j - 1) * self.n + (k - 1)]
    }

    /// `sum_{k != j} C_jk^2`.
    pub fn squared_row_sum(&self, j: usize) -> f64 {
        (1..=self.n).map(|k| self.get(j, k).powi(2)).sum()
    }
}

/// `C_{j|rest}^2 - sum_{k != j} C_jk^2`.
pub fn monogamy_residual(state: &PureState, j: usize) -> Result<f64> {
    state.check_party(j)?;
    let table = PairConcurrenceTable::compute(state)?;
    let c = concurrence_one_vs_rest(state, j)?;
    Ok(c * c - table.squared_row_sum(j))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartyBounds {
    pub party: usize,
    /// `1 - sqrt(1 - sum_k C_jk^2)`.
    pub lower: f64,
    pub y: f64,
    /// `sum_{k != j} Y_k`.
    pub upper_raw: f64,
    /// `min(1, upper_raw)`.
    pub upper: f64,
    pub lower_margin: f64,
    pub upper_margin: f64,
    /// `C_{j|rest}^2 - sum_k C_jk^2`.
    pub monogamy_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub parties: Vec<PartyBounds>,
}

impl BoundsReport {
    /// Bounds without the monogamy sanity check; the lower bound saturates
    /// at 1 if the pairwise sum exceeds one.
    pub fn unchecked(profile: &EntanglementProfile, table: &PairConcurrenceTable) -> Self {
        let parties = profile
            .marginals
            .iter()
            .map(|m| {
                let shared = table.squared_row_sum(m.party);
                let lower = 1.0 - sqrt_clamped(1.0 - shared);
                let upper_raw = profile.y_total - m.y;
                PartyBounds {
                    party: m.party,
                    lower,
                    y: m.y,
                    upper_raw,
                    upper: upper_raw.min(1.0),
                    lower_margin: m.y - lower,
                    upper_margin: upper_raw - m.y,
                    monogamy_residual: m.c_rest * m.c_rest - shared,
                }
            })
            .collect();
        Self { parties }
    }

    pub fn from_parts(profile: &EntanglementProfile, table: &PairConcurrenceTable) -> Result<Self> {
        for j in 1..=table.n_parties() {
            let shared = table.squared_row_sum(j);
            if shared > 1.0 + tolerances::MONOGAMY_FAULT {
                return Err(Error::MonogamyViolation(shared));
            }
        }
        Ok(Self::unchecked(profile, table))
    }
}

/// Lower and upper bounds on every `Y_j`.
pub fn bounds_report(state: &PureState) -> Result<BoundsReport> {
    if state.n_parties() < 2 {
        return Err(Error::InvalidParameter("bounds need at least two parties".into()));
    }
    let profile = entanglement_profile(state)?;
    let table = PairConcurrenceTable::compute(state)?;
    BoundsReport::from_parts(&profile, &table)
}
