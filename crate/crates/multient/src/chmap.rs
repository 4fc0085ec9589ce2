//! Operator-to-state mapping for two-qudit operators.
//!
//! A `d^2 x d^2` operator A with entries <i alpha|A|j beta> maps to the
//! four-party state |A> whose amplitude at basis point (i, alpha, j, beta)
//! is proportional to that entry. The four reshaping maps below re-index
//! the entries; the Gram matrices of two of them give the cross two-party
//! marginals of |A> without ever touching the 4-party state:
//!
//! ```text
//! rho_12 ~ A A^dag,   rho_13 ~ A^R2 (A^R2)^dag,   rho_14 ~ A^T2 (A^T2)^dag
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{unitarity_deviation, DensityMatrix, PureState};

/// A two-qudit operator on composite labels (i alpha) row, (j beta) column.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    d: usize,
    mat: DMatrix<Complex64>,
}

/// The four entrywise re-indexings of a bipartite operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reshape {
    /// (i alpha, j beta) -> (beta alpha, j i)
    R1,
    /// (i alpha, j beta) -> (i j, alpha beta)
    R2,
    /// (i alpha, j beta) -> (j alpha, i beta)
    T1,
    /// (i alpha, j beta) -> (i beta, j alpha)
    T2,
}

impl BipartiteOperator {
    pub fn new(d: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimMismatch(format!("local dimension {d} must be >= 2")));
        }
        let dim = d * d;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimMismatch(format!(
                "operator is {}x{}, expected {dim}x{dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { d, mat })
    }

    /// Build from entries indexed by the four basis digits (i, alpha, j, beta).
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize, usize, usize) -> Complex64) -> Self {
        let mat = DMatrix::from_fn(d * d, d * d, |r, c| f(r / d, r % d, c / d, c % d));
        Self { d, mat }
    }

    pub fn identity(d: usize) -> Self {
        Self { d, mat: DMatrix::identity(d * d, d * d) }
    }

    /// SWAP: |i j> -> |j i>.
    pub fn swap(d: usize) -> Self {
        Self::from_fn(d, |i, a, j, b| {
            if i == b && a == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Two-qubit CNOT with the first qudit as control.
    pub fn cnot() -> Self {
        Self::from_fn(2, |i, a, j, b| {
            let target = if j == 1 { 1 - b } else { b };
            if i == j && a == target {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Two-qubit DCNOT: |a b> -> |b, a xor b>.
    pub fn dcnot() -> Self {
        Self::from_fn(2, |i, a, j, b| {
            if i == b && a == (j ^ b) {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mat(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max elementwise deviation of `A A^dag` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.mat)
    }

    /// Entrywise re-indexing per the map `kind`.
    pub fn reshape(&self, kind: Reshape) -> BipartiteOperator {
        let d = self.d;
        let mut out = DMatrix::<Complex64>::zeros(d * d, d * d);
        for i in 0..d {
            for a in 0..d {
                for j in 0..d {
                    for b in 0..d {
                        let v = self.mat[(i * d + a, j * d + b)];
                        let (r, c) = match kind {
                            Reshape::R1 => (b * d + a, j * d + i),
                            Reshape::R2 => (i * d + j, a * d + b),
                            Reshape::T1 => (j * d + a, i * d + b),
                            Reshape::T2 => (i * d + b, j * d + a),
                        };
                        out[(r, c)] = v;
                    }
                }
            }
        }
        BipartiteOperator { d, mat: out }
    }
}

/// Map an operator to the normalized four-party state |A>.
///
/// Normalization divides by the Frobenius norm, so non-unitary operators
/// still map to valid states; for unitary A this is the usual 1/d factor.
pub fn op_to_state(a: &BipartiteOperator) -> Result<PureState> {
    let d = a.d;
    let norm = a.frobenius_norm();
    if norm <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let mut amps = vec![Complex64::ZERO; d * d * d * d];
    for i in 0..d {
        for al in 0..d {
            for j in 0..d {
                for b in 0..d {
                    amps[((i * d + al) * d + j) * d + b] = a.mat[(i * d + al, j * d + b)];
                }
            }
        }
    }
    PureState::new(4, d, amps)
}

/// The two-party marginals (rho_12, rho_13, rho_14) of |A> computed from
/// the Gram matrices of A and its reshapes, each scaled to unit trace.
pub fn pair_marginals(
    a: &BipartiteOperator,
) -> Result<(DensityMatrix, DensityMatrix, DensityMatrix)> {
    let norm_sq = a.frobenius_norm().powi(2);
    if norm_sq <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let gram = |m: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        (m * m.adjoint()).map(|z| z / norm_sq)
    };
    let rho12 = DensityMatrix::new(vec![1, 2], a.d, gram(&a.mat))?;
    let rho13 = DensityMatrix::new(vec![1, 3], a.d, gram(&a.reshape(Reshape::R2).mat))?;
    let rho14 = DensityMatrix::new(vec![1, 4], a.d, gram(&a.reshape(Reshape::T2).mat))?;
    Ok((rho12, rho13, rho14))
}

/// Test whether a unitary stays unitary under R2 and under T2.
///
/// Returns `(flag_r2, flag_t2)`. Errors if the input itself is not unitary
/// within `tol`.
pub fn is_dual_unitary(a: &BipartiteOperator, tol: f64) -> Result<(bool, bool)> {
    let dev = a.unitarity_deviation();
    if dev > tol {
        return Err(Error::NotUnitary { dev, tol });
    }
    let flag_r2 = a.reshape(Reshape::R2).unitarity_deviation() < tol;
    let flag_t2 = a.reshape(Reshape::T2).unitarity_deviation() < tol;
    Ok((flag_r2, flag_t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_operator(d: usize, seed: u64) -> BipartiteOperator {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        BipartiteOperator::from_fn(d, |_, _, _, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn identity_realignment_is_all_pairs() {
        for d in [2usize, 3] {
            let r2 = BipartiteOperator::identity(d).reshape(Reshape::R2);
            for i in 0..d * d {
                for j in 0..d * d {
                    let (r1, r2i) = (i / d, i % d);
                    let (c1, c2) = (j / d, j % d);
                    // sum_ij |ii><jj|
                    let expect = if r1 == r2i && c1 == c2 { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(r2.mat()[(i, j)].re, expect, epsilon = 0.0);
                }
            }
        }
    }

    #[test]
    fn swap_partial_transpose_is_all_pairs_flipped() {
        let t2 = BipartiteOperator::swap(2).reshape(Reshape::T2);
        // sum_ij |jj><ii|
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i / 2 == i % 2 && j / 2 == j % 2 { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(t2.mat()[(i, j)].re, expect, epsilon = 0.0);
            }
        }
    }

    #[test]
    fn reshape_involutions_are_exact() {
        for seed in 0..4u64 {
            let a = random_operator(3, seed);
            for kind in [Reshape::T1, Reshape::T2, Reshape::R2] {
                assert_eq!(a.reshape(kind).reshape(kind), a);
            }
            // T1 then T2 is the full transpose
            let t = a.reshape(Reshape::T1).reshape(Reshape::T2);
            assert_eq!(t.mat(), &a.mat().transpose());
        }
    }

    #[test]
    fn identity_state_has_bell_rho13() {
        let (_, rho13, _) = pair_marginals(&BipartiteOperator::identity(2)).unwrap();
        // |phi+><phi+| in the (party1, party3) basis
        for (r, c, expect) in [
            (0, 0, 0.5),
            (0, 3, 0.5),
            (3, 0, 0.5),
            (3, 3, 0.5),
            (1, 1, 0.0),
            (2, 2, 0.0),
        ] {
            assert_abs_diff_eq!(rho13.mat()[(r, c)].re, expect, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(rho13.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn swap_state_has_bell_rho14() {
        let (_, _, rho14) = pair_marginals(&BipartiteOperator::swap(2)).unwrap();
        assert_abs_diff_eq!(rho14.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho14.mat()[(0, 3)].re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn cnot_state_amplitudes() {
        let s = op_to_state(&BipartiteOperator::cnot()).unwrap();
        // (|0000> + |0101> + |1011> + |1110>)/2, read off the four unit entries
        let expect = [0b0000usize, 0b0101, 0b1011, 0b1110];
        for (idx, amp) in s.amps().iter().enumerate() {
            let v = if expect.contains(&idx) { 0.5 } else { 0.0 };
            assert_abs_diff_eq!(amp.re, v, epsilon = 1e-15);
            assert_abs_diff_eq!(amp.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn op_to_state_rejects_zero() {
        let zero = BipartiteOperator::new(2, DMatrix::zeros(4, 4)).unwrap();
        assert!(matches!(op_to_state(&zero), Err(Error::ZeroOperator)));
        assert!(matches!(pair_marginals(&zero), Err(Error::ZeroOperator)));
    }

    #[test]
    fn unitary_rho12_is_maximally_mixed() {
        for a in [
            BipartiteOperator::identity(3),
            BipartiteOperator::swap(3),
            BipartiteOperator::cnot(),
        ] {
            let (rho12, _, _) = pair_marginals(&a).unwrap();
            let dim = rho12.dim() as f64;
            assert_abs_diff_eq!(rho12.purity(), 1.0 / dim, epsilon = 1e-12);
        }
    }

    #[test]
    fn cnot_marginal_purities() {
        let (_, rho13, rho14) = pair_marginals(&BipartiteOperator::cnot()).unwrap();
        assert_abs_diff_eq!(rho13.purity(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho14.purity(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn marginals_match_generic_partial_trace() {
        for seed in 0..8u64 {
            let a = random_operator(2, seed);
            let s = op_to_state(&a).unwrap();
            let (m12, m13, m14) = pair_marginals(&a).unwrap();
            for (m, keep) in [(m12, vec![1, 2]), (m13, vec![1, 3]), (m14, vec![1, 4])] {
                let generic = s.partial_trace(&keep).unwrap();
                assert!((m.mat() - generic.mat()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unitary_singles_are_maximally_mixed() {
        let s = op_to_state(&BipartiteOperator::dcnot()).unwrap();
        for p in 1..=4usize {
            let rho = s.partial_trace(&[p]).unwrap();
            assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn dual_unitarity_flags() {
        let (r2, _) = is_dual_unitary(&BipartiteOperator::swap(2), 1e-10).unwrap();
        assert!(r2);
        let (_, t2) = is_dual_unitary(&BipartiteOperator::identity(2), 1e-10).unwrap();
        assert!(t2);
        let (r2, t2) = is_dual_unitary(&BipartiteOperator::cnot(), 1e-10).unwrap();
        assert!(!r2);
        assert!(t2);
        let nonunitary = random_operator(2, 3);
        assert!(matches!(
            is_dual_unitary(&nonunitary, 1e-10),
            Err(Error::NotUnitary { .. })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn reshapes_preserve_frobenius_norm(seed in 0u64..500) {
                let a = random_operator(3, seed);
                for kind in [Reshape::R1, Reshape::R2, Reshape::T1, Reshape::T2] {
                    let r = a.reshape(kind);
                    prop_assert!((r.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
                }
            }

            #[test]
            fn state_and_marginal_routes_agree(seed in 0u64..500) {
                let a = random_operator(2, seed);
                let s = op_to_state(&a).unwrap();
                let (m12, m13, m14) = pair_marginals(&a).unwrap();
                for (m, keep) in [(m12, [1, 2]), (m13, [1, 3]), (m14, [1, 4])] {
                    let generic = s.partial_trace(&keep).unwrap();
                    prop_assert!((m.mat() - generic.mat()).norm() < 1e-12);
                }
            }
        }
    }
}
