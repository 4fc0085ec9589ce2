//! Pure states, reduced density matrices, and local-unitary action.
//!
//! A [`PureState`] is a normalized complex amplitude vector over `n`
//! parties of equal local dimension `d`, with party 1 as the most
//! significant basis digit. Reduced states are obtained by contracting the
//! amplitude tensor directly ([`PureState::partial_trace`]); the full
//! `d^n x d^n` projector is never formed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Norm and Hermiticity tolerance for state/density invariants.
pub const VALUE_TOL: f64 = 1e-12;
/// Allowed negative excursion of density-matrix eigenvalues.
pub const PSD_TOL: f64 = 1e-10;
/// Unitarity tolerance for local factors.
pub const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalues at or below this cutoff contribute nothing to the entropy.
pub const ENTROPY_EIGENVALUE_CUTOFF: f64 = 1e-12;

/// A normalized pure state of `n` qudits with local dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    d: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Build a state from raw amplitudes, normalizing them.
    ///
    /// Fails if the vector length is not exactly `d^n` or if the vector is
    /// zero.
    pub fn new(n: usize, d: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimMismatch(format!("party count {n} must be >= 2")));
        }
        if d < 2 {
            return Err(Error::DimMismatch(format!("local dimension {d} must be >= 2")));
        }
        let expected = checked_dim(n, d)?;
        if amps.len() != expected {
            return Err(Error::AmplitudeCount { expected, got: amps.len() });
        }
        let norm = l2_norm(&amps);
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n, d, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Total Hilbert-space dimension `d^n`.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Reduced density matrix of the given parties (1-based), computed by
    /// contracting the amplitude tensor over the complement.
    ///
    /// `keep` must be a nonempty proper subset of `1..=n`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = validated_subset(keep, self.n)?;
        let env: Vec<usize> = (1..=self.n).filter(|p| !keep.contains(p)).collect();
        let keep_base = subset_base_indices(self.n, self.d, &keep);
        let env_base = subset_base_indices(self.n, self.d, &env);
        let dk = keep_base.len();
        let mut mat = DMatrix::<Complex64>::zeros(dk, dk);
        for a in 0..dk {
            for b in a..dk {
                let mut acc = Complex64::ZERO;
                for &e in &env_base {
                    acc += self.amps[keep_base[a] + e] * self.amps[keep_base[b] + e].conj();
                }
                mat[(a, b)] = acc;
                if a != b {
                    mat[(b, a)] = acc.conj();
                }
            }
        }
        DensityMatrix::new(keep, self.d, mat)
    }

    /// Apply a tensor product of single-party unitaries.
    pub fn apply_local(&self, us: &LocalUnitarySet) -> Result<PureState> {
        if us.factors.len() != self.n {
            return Err(Error::DimMismatch(format!(
                "{} local factors for {} parties",
                us.factors.len(),
                self.n
            )));
        }
        for (p, u) in us.factors.iter().enumerate() {
            if u.nrows() != self.d {
                return Err(Error::DimMismatch(format!(
                    "factor for party {} is {}x{}, expected {}x{}",
                    p + 1,
                    u.nrows(),
                    u.ncols(),
                    self.d,
                    self.d
                )));
            }
        }
        let d = self.d;
        let mut amps = self.amps.clone();
        let mut scratch = vec![Complex64::ZERO; d];
        for (p, u) in us.factors.iter().enumerate() {
            let stride = d.pow((self.n - 1 - p) as u32);
            let block = stride * d;
            for chunk in (0..amps.len()).step_by(block) {
                for off in 0..stride {
                    for (r, s) in scratch.iter_mut().enumerate() {
                        let mut acc = Complex64::ZERO;
                        for c in 0..d {
                            acc += u[(r, c)] * amps[chunk + off + c * stride];
                        }
                        *s = acc;
                    }
                    for (r, s) in scratch.iter().enumerate() {
                        amps[chunk + off + r * stride] = *s;
                    }
                }
            }
        }
        PureState::new(self.n, self.d, amps)
    }
}

/// A reduced density matrix of an ordered party subset.
///
/// Construction validates Hermiticity, unit trace, and numerical positive
/// semidefiniteness.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    parties: Vec<usize>,
    d: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(parties: Vec<usize>, d: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        let dim = checked_dim(parties.len(), d)?;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimMismatch(format!(
                "density matrix is {}x{}, expected {dim}x{dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let mut herm_dev = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                herm_dev = herm_dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
            }
        }
        if herm_dev > VALUE_TOL {
            return Err(Error::Internal(format!(
                "density matrix not Hermitian: max deviation {herm_dev:e}"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > VALUE_TOL || trace.im.abs() > VALUE_TOL {
            return Err(Error::Internal(format!("density matrix trace {trace} != 1")));
        }
        let min_eig = mat
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, &l| m.min(l));
        if min_eig < -PSD_TOL {
            return Err(Error::Internal(format!(
                "density matrix has eigenvalue {min_eig:e} below -{PSD_TOL:e}"
            )));
        }
        Ok(Self { parties, d, mat })
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Tr rho^2, real by Hermiticity.
    pub fn purity(&self) -> f64 {
        // sum |rho_ij|^2 equals Tr rho^2 for Hermitian rho
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Von Neumann entropy in bits (base-2 logarithm).
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > ENTROPY_EIGENVALUE_CUTOFF)
            .map(|l| -l * l.log2())
            .sum()
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut evs: Vec<f64> = self.mat.clone().symmetric_eigenvalues().iter().copied().collect();
        evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        evs
    }

    /// Trace out one party of a two-party density matrix.
    ///
    /// `keep_pos` selects which of the two tensor slots (0 or 1) survives.
    pub fn trace_out_pair(&self, keep_pos: usize) -> Result<DensityMatrix> {
        if self.parties.len() != 2 || keep_pos > 1 {
            return Err(Error::DimMismatch(
                "trace_out_pair requires a two-party density matrix".into(),
            ));
        }
        let d = self.d;
        let mut out = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::ZERO;
                for e in 0..d {
                    let (r, c) = if keep_pos == 0 {
                        (i * d + e, j * d + e)
                    } else {
                        (e * d + i, e * d + j)
                    };
                    acc += self.mat[(r, c)];
                }
                out[(i, j)] = acc;
            }
        }
        DensityMatrix::new(vec![self.parties[keep_pos]], d, out)
    }
}

/// A tensor product of single-party unitaries, one factor per party.
#[derive(Debug, Clone)]
pub struct LocalUnitarySet {
    factors: Vec<DMatrix<Complex64>>,
}

impl LocalUnitarySet {
    /// Validates that every factor is square and unitary within 1e-10.
    pub fn new(factors: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::DimMismatch("no local factors given".into()));
        }
        for (p, u) in factors.iter().enumerate() {
            if u.nrows() != u.ncols() {
                return Err(Error::DimMismatch(format!(
                    "factor for party {} is not square",
                    p + 1
                )));
            }
            let dev = unitarity_deviation(u);
            if dev > UNITARY_TOL {
                return Err(Error::NotUnitary { dev, tol: UNITARY_TOL });
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[DMatrix<Complex64>] {
        &self.factors
    }
}

/// Max elementwise deviation of `U U^dagger` from the identity.
pub fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let prod = u * u.adjoint();
    let n = u.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
            dev = dev.max((prod[(i, j)] - expect).norm());
        }
    }
    dev
}

/// Draw a Haar-distributed unitary deterministically from a seed.
///
/// Uses the QR decomposition of a complex Ginibre matrix with the phase of
/// the R diagonal absorbed into Q.
pub fn haar_unitary(dim: usize, seed: u64) -> DMatrix<Complex64> {
    assert!(dim >= 1, "haar_unitary requires dim >= 1");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        let re: f64 = normal.sample(&mut rng);
        let im: f64 = normal.sample(&mut rng);
        Complex64::new(re, im) / 2.0f64.sqrt()
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `d^n` with overflow checking.
pub(crate) fn checked_dim(n: usize, d: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(d)
            .ok_or_else(|| Error::DimMismatch(format!("d^n overflows for d={d}, n={n}")))?;
    }
    Ok(dim)
}

fn validated_subset(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let distinct = keep.windows(2).all(|w| w[0] != w[1]);
    let in_range = keep.iter().all(|&p| (1..=n).contains(&p));
    if keep.is_empty() || keep.len() >= n || !distinct || !in_range {
        return Err(Error::BadSubset { n });
    }
    Ok(keep)
}

/// Basis indices spanned by the digits of `parties`, other digits zero.
///
/// The returned vector walks the subset digits in row-major order with the
/// first listed party most significant, so the full basis index of a
/// (subset digit, complement digit) pair is just the sum of the two base
/// indices.
pub(crate) fn subset_base_indices(n: usize, d: usize, parties: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in parties {
        let stride = d.pow((n - p) as u32);
        let mut next = Vec::with_capacity(out.len() * d);
        for base in &out {
            for digit in 0..d {
                next.push(base + digit * stride);
            }
        }
        out = next;
    }
    out
}
