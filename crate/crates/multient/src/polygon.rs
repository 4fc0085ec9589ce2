//! Four-qubit polygon (simplex-volume) measure.
//!
//! Six face areas gamma_ij and a scale lambda are determined by the seven
//! equations
//!
//! ```text
//! gamma_ij + gamma_ik + gamma_il                                  = E_i        (4 faces)
//! -sqrt(g_ab g_cd) + sqrt(g_ac g_bd) + sqrt(g_ad g_bc)            = lambda E_ab|cd
//! ```
//!
//! where the negative root pairs with the named bipartition and the E are
//! base-2 von Neumann entropies. The measure is
//!
//! ```text
//! V = sqrt(2)/3 * S^(1/2) * (R0 R1 R2 R3)^(1/4),   P = 3^(7/6)/2 * V^(2/3)
//! ```
//!
//! The solver substitutes gamma = u^2 to keep the areas nonnegative and
//! runs a damped least-squares iteration from multiple deterministic
//! starts.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::state::PureState;

/// Entropy below this is treated as a vanishing bipartition (non-GME gate).
pub const ENTROPY_GATE: f64 = 1e-9;
/// Band in which slightly negative R coefficients clamp to zero.
const R_CLAMP_TOL: f64 = 1e-9;

/// Base-2 entropies of the four single-party and three pair bipartitions
/// of a four-qubit state. Pair order: 12|34, 13|24, 14|23.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyVector {
    pub singles: [f64; 4],
    pub pairs: [f64; 3],
}

impl EntropyVector {
    pub fn new(singles: [f64; 4], pairs: [f64; 3]) -> Result<Self> {
        for e in singles {
            if !(-1e-12..=1.0 + 1e-9).contains(&e) {
                return Err(Error::Internal(format!("single-party entropy {e} out of [0, 1]")));
            }
        }
        for e in pairs {
            if !(-1e-12..=2.0 + 1e-9).contains(&e) {
                return Err(Error::Internal(format!("pair entropy {e} out of [0, 2]")));
            }
        }
        Ok(Self {
            singles: singles.map(|e| e.max(0.0)),
            pairs: pairs.map(|e| e.max(0.0)),
        })
    }

    pub fn min_entry(&self) -> f64 {
        self.singles.iter().chain(&self.pairs).copied().fold(f64::INFINITY, f64::min)
    }

    fn is_zero(&self) -> bool {
        self.singles.iter().chain(&self.pairs).all(|e| e.abs() < 1e-12)
    }
}

/// Compute the entropy vector of a four-qubit state.
pub fn entropy_vector(state: &PureState) -> Result<EntropyVector> {
    if state.n() != 4 || state.d() != 2 {
        return Err(Error::DimMismatch(format!(
            "entropy vector requires a four-qubit state, got n={}, d={}",
            state.n(),
            state.d()
        )));
    }
    let mut singles = [0.0; 4];
    for (i, s) in singles.iter_mut().enumerate() {
        *s = state.partial_trace(&[i + 1])?.von_neumann_entropy();
    }
    let mut pairs = [0.0; 3];
    for (i, pair) in [[1usize, 2], [1, 3], [1, 4]].iter().enumerate() {
        pairs[i] = state.partial_trace(pair)?.von_neumann_entropy();
    }
    EntropyVector::new(singles, pairs)
}

/// Settings for the damped least-squares solve.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Accept a solution when the L2 equation residual drops below this.
    pub residual_tol: f64,
    /// Number of deterministic starts.
    pub max_restarts: u32,
    /// Iteration cap per start.
    pub max_iterations: u32,
    /// Run seed; start `i` draws from `derive_seed(seed, i)`.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { residual_tol: 1e-10, max_restarts: 32, max_iterations: 200, seed: 0 }
    }
}

/// An accepted solution of the seven-equation system.
///
/// Gamma order: [g12, g13, g14, g23, g24, g34].
#[derive(Debug, Clone)]
pub struct PolygonSolution {
    pub gammas: [f64; 6],
    pub lambda: f64,
    pub residual: f64,
    /// True when different starts converged to distinct gamma vectors,
    /// all within tolerance; `alternates` then lists the others.
    pub ambiguous: bool,
    pub alternates: Vec<[f64; 6]>,
}

/// Which gammas enter face equation i (gammas touching party i+1).
const FACES: [[usize; 3]; 4] = [
    [0, 1, 2], // g12 g13 g14
    [0, 3, 4], // g12 g23 g24
    [1, 3, 5], // g13 g23 g34
    [2, 4, 5], // g14 g24 g34
];
/// Complement-product pairs (a, b) with gamma_a * gamma_b under the root,
/// ordered as the bipartitions 12|34, 13|24, 14|23.
const ROOT_PAIRS: [(usize, usize); 3] = [(0, 5), (1, 4), (2, 3)];

fn residual_vec(u: &[f64; 6], lambda: f64, ev: &EntropyVector) -> DVector<f64> {
    let g: Vec<f64> = u.iter().map(|x| x * x).collect();
    let mut r = DVector::zeros(7);
    for (i, face) in FACES.iter().enumerate() {
        r[i] = face.iter().map(|&k| g[k]).sum::<f64>() - ev.singles[i];
    }
    let roots: Vec<f64> = ROOT_PAIRS.iter().map(|&(a, b)| (u[a] * u[b]).abs()).collect();
    for i in 0..3 {
        let mut v = 0.0;
        for (j, root) in roots.iter().enumerate() {
            v += if j == i { -root } else { *root };
        }
        r[4 + i] = v - lambda * ev.pairs[i];
    }
    r
}

fn jacobian(u: &[f64; 6], ev: &EntropyVector) -> DMatrix<f64> {
    let mut jac = DMatrix::zeros(7, 7);
    for (i, face) in FACES.iter().enumerate() {
        for &k in face {
            jac[(i, k)] = 2.0 * u[k];
        }
    }
    for i in 0..3 {
        for (j, &(a, b)) in ROOT_PAIRS.iter().enumerate() {
            let sign = if j == i { -1.0 } else { 1.0 };
            // d|u_a u_b|/du_a = |u_b| * sgn(u_a)
            jac[(4 + i, a)] += sign * u[b].abs() * sgn(u[a]);
            jac[(4 + i, b)] += sign * u[a].abs() * sgn(u[b]);
        }
        jac[(4 + i, 6)] = -ev.pairs[i];
    }
    jac
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// One damped least-squares run from a given start. Returns (u, lambda,
/// residual L2) at the best point reached.
fn lm_run(
    start_u: [f64; 6],
    start_lambda: f64,
    ev: &EntropyVector,
    max_iterations: u32,
) -> ([f64; 6], f64, f64) {
    let mut u = start_u;
    let mut lambda = start_lambda;
    let mut r = residual_vec(&u, lambda, ev);
    let mut cost = r.norm();
    let mut mu = 1e-3;
    for _ in 0..max_iterations {
        if cost < 1e-13 {
            break;
        }
        let jac = jacobian(&u, ev);
        let jt = jac.transpose();
        let a = &jt * &jac;
        let grad = &jt * &r;
        let mut improved = false;
        for _ in 0..25 {
            let mut m = a.clone();
            for k in 0..7 {
                m[(k, k)] += mu * a[(k, k)].max(1e-12);
            }
            let Some(delta) = m.lu().solve(&(-&grad)) else {
                mu *= 10.0;
                continue;
            };
            let mut u_new = u;
            for k in 0..6 {
                u_new[k] += delta[k];
            }
            let lambda_new = lambda + delta[6];
            let r_new = residual_vec(&u_new, lambda_new, ev);
            let cost_new = r_new.norm();
            if cost_new < cost {
                u = u_new;
                lambda = lambda_new;
                r = r_new;
                cost = cost_new;
                mu = (mu / 3.0).max(1e-14);
                improved = true;
                break;
            }
            mu *= 10.0;
            if mu > 1e14 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    (u, lambda, cost)
}

/// Solve the seven-equation system for the six gammas and lambda.
///
/// Every start samples gamma uniformly in [0,1]^6, rescales it to fit the
/// linear face equations in least squares, and seeds lambda from the first
/// root equation. All `max_restarts` starts run; the first accepted
/// solution is returned and disagreeing accepted solutions are recorded as
/// alternates.
pub fn solve_polygon_system(ev: &EntropyVector, cfg: &SolverConfig) -> Result<PolygonSolution> {
    if ev.is_zero() {
        return Ok(PolygonSolution {
            gammas: [0.0; 6],
            lambda: 0.0,
            residual: 0.0,
            ambiguous: false,
            alternates: Vec::new(),
        });
    }
    let mut best_residual = f64::INFINITY;
    let mut accepted: Vec<([f64; 6], f64, f64)> = Vec::new();
    for restart in 0..cfg.max_restarts {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(cfg.seed, restart as u64));
        let mut gamma: [f64; 6] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        // least-squares scale c minimizing sum_i (c * face_i - E_i)^2
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, face) in FACES.iter().enumerate() {
            let f: f64 = face.iter().map(|&k| gamma[k]).sum();
            num += f * ev.singles[i];
            den += f * f;
        }
        let scale = if den > 1e-30 { (num / den).max(0.0) } else { 1.0 };
        for g in &mut gamma {
            *g *= scale;
        }
        let u: [f64; 6] = gamma.map(f64::sqrt);
        let r1 = (u[0] * u[5]).abs();
        let r2 = (u[1] * u[4]).abs();
        let r3 = (u[2] * u[3]).abs();
        let lambda0 =
            if ev.pairs[0] > 1e-12 { (-r1 + r2 + r3) / ev.pairs[0] } else { 0.0 };

        let (u_fin, lambda_fin, residual) = lm_run(u, lambda0, ev, cfg.max_iterations);
        best_residual = best_residual.min(residual);
        if residual < cfg.residual_tol && lambda_fin >= -1e-12 {
            let gammas: [f64; 6] = u_fin.map(|x| x * x);
            accepted.push((gammas, lambda_fin.max(0.0), residual));
        }
    }
    let Some((gammas, lambda, residual)) = accepted.first().cloned() else {
        return Err(Error::SolverFailure { best_residual, restarts: cfg.max_restarts });
    };
    let mut alternates: Vec<[f64; 6]> = Vec::new();
    for (g, _, _) in accepted.iter().skip(1) {
        let differs_from_primary =
            g.iter().zip(&gammas).any(|(a, b)| (a - b).abs() > 1e-6);
        let novel = alternates
            .iter()
            .all(|alt| alt.iter().zip(g).any(|(a, b)| (a - b).abs() > 1e-6));
        if differs_from_primary && novel {
            alternates.push(*g);
        }
    }
    Ok(PolygonSolution {
        gammas,
        lambda,
        residual,
        ambiguous: !alternates.is_empty(),
        alternates,
    })
}

/// The polygon measure from a solved entropy vector.
pub fn polygon_from_entropies(ev: &EntropyVector, cfg: &SolverConfig) -> Result<f64> {
    if ev.min_entry() < ENTROPY_GATE {
        // some bipartition is (numerically) pure: not GME
        return Ok(0.0);
    }
    let sol = solve_polygon_system(ev, cfg)?;
    let g = sol.gammas;
    let t = [
        (g[0] * g[5]).sqrt(),
        (g[1] * g[4]).sqrt(),
        (g[2] * g[3]).sqrt(),
    ];
    let r0 = t[0] + t[1] + t[2];
    let rs = [
        -t[0] + t[1] + t[2],
        t[0] - t[1] + t[2],
        t[0] + t[1] - t[2],
    ];
    let mut prod = r0;
    for (i, &r) in rs.iter().enumerate() {
        if r < -R_CLAMP_TOL {
            return Err(Error::Internal(format!(
                "polygon coefficient R{} = {r:e} is negative beyond -{R_CLAMP_TOL:e}",
                i + 1
            )));
        }
        prod *= r.max(0.0);
    }
    let s: f64 = 2.0 * g.iter().sum::<f64>();
    let volume = (2.0f64.sqrt() / 3.0) * s.sqrt() * prod.powf(0.25);
    Ok(3.0f64.powf(7.0 / 6.0) / 2.0 * volume.powf(2.0 / 3.0))
}

/// The polygon measure of a four-qubit state.
///
/// Returns 0 whenever some single-party or pair entropy vanishes.
pub fn polygon_measure(state: &PureState, cfg: &SolverConfig) -> Result<f64> {
    let ev = entropy_vector(state)?;
    polygon_from_entropies(&ev, cfg)
}
