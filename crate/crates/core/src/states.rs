//! N-party pure states over local dimension M.
//!
//! Flat index convention: party 1 is the most significant digit, so basis
//! state `|s_1 s_2 ... s_N>` sits at `sum_j s_j * M^(N - j)`. Parties are
//! numbered from 1 in every public function.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::smallmat::ComplexMatrix;
use crate::tolerances;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_parties: usize,
    local_dim: usize,
    amplitudes: Vec<Complex64>,
}

/// `M^N`, or `TooLarge` when it exceeds the resource cap.
pub fn hilbert_dim(n_parties: usize, local_dim: usize) -> Result<usize> {
    if n_parties == 0 {
        return Err(Error::InvalidParameter("n_parties must be at least 1".into()));
    }
    if local_dim < 2 {
        return Err(Error::InvalidParameter("local_dim must be at least 2".into()));
    }
    let exp = u32::try_from(n_parties).unwrap_or(u32::MAX);
    match (local_dim as u128).checked_pow(exp) {
        Some(d) if d <= tolerances::MAX_STATE_DIM as u128 => Ok(d as usize),
        Some(d) => Err(Error::TooLarge(d)),
        None => Err(Error::TooLarge(u128::MAX)),
    }
}

fn norm_of(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl PureState {
    pub fn from_amplitudes(
        raw: Vec<Complex64>,
        n_parties: usize,
        local_dim: usize,
        normalize: bool,
    ) -> Result<Self> {
        let dim = hilbert_dim(n_parties, local_dim)?;
        if raw.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: raw.len(),
            });
        }
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("amplitudes must be finite".into()));
        }
        let norm = norm_of(&raw);
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let amplitudes = if normalize {
            raw.into_iter().map(|z| z / norm).collect()
        } else {
            if (norm - 1.0).abs() > tolerances::NORM {
                return Err(Error::NotNormalized(norm));
            }
            raw
        };
        Ok(Self {
            n_parties,
            local_dim,
            amplitudes,
        })
    }

    /// `cos(theta)|000> + sin(theta)|111>`.
    pub fn ghz(theta: f64) -> Self {
        let mut amps = vec![ZERO; 8];
        amps[0] = Complex64::new(theta.cos(), 0.0);
        amps[7] = Complex64::new(theta.sin(), 0.0);
        Self {
            n_parties: 3,
            local_dim: 2,
            amplitudes: amps,
        }
    }

    /// `alpha|100> + beta|010> + gamma|001>`, normalized.
    pub fn w_state(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Self> {
        let mut amps = vec![ZERO; 8];
        amps[0b100] = alpha;
        amps[0b010] = beta;
        amps[0b001] = gamma;
        Self::from_amplitudes(amps, 3, 2, true)
    }

    /// `(|00> + |11>) / sqrt(2)`.
    pub fn bell() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            n_parties: 2,
            local_dim: 2,
            amplitudes: vec![
                Complex64::new(s, 0.0),
                ZERO,
                ZERO,
                Complex64::new(s, 0.0),
            ],
        }
    }

    /// Computational basis state `|d_1 d_2 ... d_N>`.
    pub fn product(digits: &[usize], local_dim: usize) -> Result<Self> {
        let dim = hilbert_dim(digits.len(), local_dim)?;
        if let Some(&d) = digits.iter().find(|&&d| d >= local_dim) {
            return Err(Error::InvalidParameter(format!(
                "digit {d} out of range for local_dim {local_dim}"
            )));
        }
        let index = digits.iter().fold(0usize, |acc, &d| acc * local_dim + d);
        let mut amps = vec![ZERO; dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_parties: digits.len(),
            local_dim,
            amplitudes: amps,
        })
    }

    /// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn haar_random(n_parties: usize, local_dim: usize, rng: &mut RngStream) -> Result<Self> {
        let dim = hilbert_dim(n_parties, local_dim)?;
        loop {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                })
                .collect();
            let norm = norm_of(&amps);
            if norm > 0.0 {
                return Ok(Self {
                    n_parties,
                    local_dim,
                    amplitudes: amps.into_iter().map(|z| z / norm).collect(),
                });
            }
        }
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    pub fn is_qubit(&self) -> bool {
        self.local_dim == 2
    }

    pub(crate) fn require_qubits(&self) -> Result<()> {
        if self.is_qubit() {
            Ok(())
        } else {
            Err(Error::NotQubit(self.local_dim))
        }
    }

    pub(crate) fn check_party(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n_parties {
            Err(Error::BadPartyIndex {
                index: j,
                n_parties: self.n_parties,
            })
        } else {
            Ok(())
        }
    }

    /// Flat-index stride of party `j` (1-based).
    pub fn stride(&self, j: usize) -> usize {
        self.local_dim.pow((self.n_parties - j) as u32)
    }

    /// Digit of party `j` in flat index `index`.
    pub fn digit(&self, index: usize, j: usize) -> usize {
        (index / self.stride(j)) % self.local_dim
    }

    /// Apply an M x M unitary to party `j` only.
    pub fn apply_local_unitary(&self, j: usize, u: &ComplexMatrix) -> Result<Self> {
        self.check_party(j)?;
        if u.dim() != self.local_dim {
            return Err(Error::WrongDimension {
                expected: self.local_dim,
                got: u.dim(),
            });
        }
        let defect = u.unitary_defect();
        if defect > tolerances::UNITARY {
            return Err(Error::NotUnitary(defect));
        }
        let m = self.local_dim;
        let stride = self.stride(j);
        let mut out = vec![ZERO; self.amplitudes.len()];
        let mut local = vec![ZERO; m];
        for base in (0..self.amplitudes.len()).filter(|&i| self.digit(i, j) == 0) {
            for (s, slot) in local.iter_mut().enumerate() {
                *slot = self.amplitudes[base + s * stride];
            }
            for (s, z) in u.apply(&local).into_iter().enumerate() {
                out[base + s * stride] = z;
            }
        }
        Ok(Self {
            n_parties: self.n_parties,
            local_dim: m,
            amplitudes: out,
        })
    }

    /// Reduced density matrix of party `j`.
    pub fn reduced_density_single(&self, j: usize) -> Result<ComplexMatrix> {
        self.check_party(j)?;
        let m = self.local_dim;
        let stride = self.stride(j);
        let mut rho = ComplexMatrix::zeros(m);
        for (i, &amp) in self.amplitudes.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let a = self.digit(i, j);
            let base = i - a * stride;
            for b in 0..m {
                rho[(a, b)] += amp * self.amplitudes[base + b * stride].conj();
            }
        }
        Ok(rho)
    }

    /// Reduced density matrix of parties `(j, k)`, with `j` as the first factor.
    pub fn reduced_density_pair(&self, j: usize, k: usize) -> Result<ComplexMatrix> {
        self.check_party(j)?;
        self.check_party(k)?;
        if j == k {
            return Err(Error::SameParty(j));
        }
        let m = self.local_dim;
        let (sj, sk) = (self.stride(j), self.stride(k));
        let mut rho = ComplexMatrix::zeros(m * m);
        for (i, &amp) in self.amplitudes.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let (a, b) = (self.digit(i, j), self.digit(i, k));
            let base = i - a * sj - b * sk;
            let row = a * m + b;
            for a2 in 0..m {
                for b2 in 0..m {
                    rho[(row, a2 * m + b2)] += amp * self.amplitudes[base + a2 * sj + b2 * sk].conj();
                }
            }
        }
        Ok(rho)
    }
}

/// Haar-random M x M unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary(m: usize, rng: &mut RngStream) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    while cols.len() < m {
        let mut v: Vec<Complex64> = (0..m)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        for c in &cols {
            let overlap: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= overlap * y;
            }
        }
        let n = norm_of(&v);
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(m);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            u[(r, c)] = z;
        }
    }
    u
}

/// Trace out the second factor of a `(m*m) x (m*m)` matrix.
pub fn trace_out_second(rho: &ComplexMatrix, m: usize) -> ComplexMatrix {
    assert_eq!(rho.dim(), m * m, "dimension mismatch");
    let mut out = ComplexMatrix::zeros(m);
    for a in 0..m {
        for a2 in 0..m {
            out[(a, a2)] = (0..m).map(|b| rho[(a * m + b, a2 * m + b)]).sum();
        }
    }
    out
}

/// Serialized state description: explicit amplitudes or a named family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Amplitudes(AmplitudeFile),
    Family(FamilySpec),
}

/// `{"n_parties": N, "local_dim": M, "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeFile {
    pub n_parties: usize,
    #[serde(default = "default_local_dim")]
    pub local_dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    pub normalize: bool,
}

fn default_local_dim() -> usize {
    2
}

/// `{"family": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilySpec {
    Ghz {
        theta: f64,
    },
    W {
        alpha: [f64; 2],
        beta: [f64; 2],
        gamma: [f64; 2],
    },
    Bell,
    Product {
        digits: Vec<usize>,
        #[serde(default = "default_local_dim")]
        local_dim: usize,
    },
    Haar {
        n_parties: usize,
        #[serde(default = "default_local_dim")]
        local_dim: usize,
        seed: u64,
    },
}

fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl StateSpec {
    pub fn build(&self) -> Result<PureState> {
        match self {
            StateSpec::Amplitudes(f) => PureState::from_amplitudes(
                f.amplitudes.iter().copied().map(complex).collect(),
                f.n_parties,
                f.local_dim,
                f.normalize,
            ),
            StateSpec::Family(f) => f.build(),
        }
    }
}

impl FamilySpec {
    pub fn build(&self) -> Result<PureState> {
        match *self {
            FamilySpec::Ghz { theta } => {
                if !theta.is_finite() {
                    return Err(Error::InvalidParameter("theta must be finite".into()));
                }
                Ok(PureState::ghz(theta))
            }
            FamilySpec::W { alpha, beta, gamma } => {
                PureState::w_state(complex(alpha), complex(beta), complex(gamma))
            }
            FamilySpec::Bell => Ok(PureState::bell()),
            FamilySpec::Product {
                ref digits,
                local_dim,
            } => PureState::product(digits, local_dim),
            FamilySpec::Haar {
                n_parties,
                local_dim,
                seed,
            } => PureState::haar_random(n_parties, local_dim, &mut RngStream::new(seed)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn real_vec(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| re(x)).collect()
    }

    #[test]
    fn product_from_amplitudes() {
        let mut raw = vec![0.0; 8];
        raw[0] = 1.0;
        let s = PureState::from_amplitudes(real_vec(&raw), 3, 2, false).unwrap();
        assert_eq!(s, PureState::product(&[0, 0, 0], 2).unwrap());
    }

    #[test]
    fn normalization_flag() {
        let s = PureState::from_amplitudes(real_vec(&[2.0, 0.0, 0.0, 2.0]), 2, 2, true).unwrap();
        assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            PureState::from_amplitudes(real_vec(&[2.0, 0.0, 0.0, 2.0]), 2, 2, false),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            PureState::from_amplitudes(real_vec(&[1.0, 0.0]), 2, 2, false),
            Err(Error::LengthMismatch { expected: 4, got: 2 })
        ));
        assert!(matches!(
            PureState::from_amplitudes(real_vec(&[0.0; 4]), 2, 2, true),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            PureState::w_state(re(0.0), re(0.0), re(0.0)),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(hilbert_dim(23, 2), Err(Error::TooLarge(_))));
        assert!(hilbert_dim(22, 2).is_ok());
        assert!(matches!(hilbert_dim(400, 3), Err(Error::TooLarge(_))));
    }

    #[test]
    fn index_convention_party_one_most_significant() {
        let s = PureState::product(&[1, 0, 0], 2).unwrap();
        assert_eq!(s.amplitudes()[4], re(1.0));
        let q = PureState::product(&[0, 2], 3).unwrap();
        assert_eq!(q.amplitudes()[2], re(1.0));
    }

    #[test]
    fn bit_flip_on_last_party() {
        let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = PureState::product(&[0, 0, 0], 2).unwrap();
        let flipped = s.apply_local_unitary(3, &x).unwrap();
        assert_eq!(flipped, PureState::product(&[0, 0, 1], 2).unwrap());
        assert_eq!(s.apply_local_unitary(2, &ComplexMatrix::identity(2)).unwrap(), s);
    }

    #[test]
    fn local_unitary_errors() {
        let s = PureState::bell();
        let not_unitary = ComplexMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(s.apply_local_unitary(1, &not_unitary), Err(Error::NotUnitary(_))));
        assert!(matches!(
            s.apply_local_unitary(3, &ComplexMatrix::identity(2)),
            Err(Error::BadPartyIndex { .. })
        ));
    }

    #[test]
    fn single_reductions() {
        let s = PureState::product(&[0, 0, 0], 2).unwrap();
        let rho = s.reduced_density_single(1).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 0.0])) < 1e-15);

        let rho = PureState::bell().reduced_density_single(1).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.5])) < 1e-15);
        assert!(matches!(s.reduced_density_single(0), Err(Error::BadPartyIndex { .. })));
    }

    #[test]
    fn pair_reductions() {
        let s = PureState::product(&[0, 0, 0], 2).unwrap();
        let rho = s.reduced_density_pair(1, 2).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);

        let ghz = PureState::ghz(std::f64::consts::FRAC_PI_4);
        let rho = ghz.reduced_density_pair(1, 2).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5])) < 1e-15);

        let bell0 = PureState::w_state(re(1.0), re(1.0), re(0.0)).unwrap();
        let rho = bell0.reduced_density_pair(1, 2).unwrap();
        let psi_plus = real_vec(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]);
        assert!(rho.max_abs_diff(&ComplexMatrix::projector(&psi_plus)) < 1e-15);

        assert!(matches!(s.reduced_density_pair(2, 2), Err(Error::SameParty(2))));
    }

    #[test]
    fn pair_ordering_puts_first_argument_first() {
        let s = PureState::product(&[1, 0, 0], 2).unwrap();
        let r12 = s.reduced_density_pair(1, 2).unwrap();
        let r21 = s.reduced_density_pair(2, 1).unwrap();
        assert_eq!(r12[(2, 2)], re(1.0)); // |10>
        assert_eq!(r21[(1, 1)], re(1.0)); // |01>
    }

    #[test]
    fn haar_is_normalized_and_deterministic() {
        let a = PureState::haar_random(4, 2, &mut RngStream::new(11)).unwrap();
        let b = PureState::haar_random(4, 2, &mut RngStream::new(11)).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert_eq!(a, b);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = RngStream::new(4);
        for m in 2..5 {
            assert!(random_unitary(m, &mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn spec_round_trip_through_json() {
        let json = r#"{"family": "ghz", "params": {"theta": 0.5}}"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.build().unwrap(), PureState::ghz(0.5));

        let json = r#"{"n_parties": 2, "local_dim": 2,
                       "amplitudes": [[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]]}"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.build().unwrap(), PureState::bell());

        let bad = r#"{"family": "ghz", "params": {"phi": 0.5}}"#;
        assert!(serde_json::from_str::<StateSpec>(bad).is_err());
    }
}
