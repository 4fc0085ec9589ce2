//! The Cartan-parametrized two-qubit unitary family and its exact
//! measure formulas.
//!
//! `X(x, y, z) = exp[-i(x XX + y YY + z ZZ)]` with coordinates confined to
//! the chamber `0 <= |z| <= y <= x <= pi/4`, whose vertices are the local
//! class (0,0,0), CNOT (pi/4,0,0), DCNOT (pi/4,pi/4,0) and SWAP
//! (pi/4,pi/4,pi/4). The closed forms below are exact in the chamber
//! coordinates and double as oracles for the numeric operator-state
//! pipeline.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::chmap::BipartiteOperator;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

const CHAMBER_SLACK: f64 = 1e-12;

/// Cartan coordinates (x, y, z) inside the chamber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylPoint {
    x: f64,
    y: f64,
    z: f64,
}

impl WeylPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let ok = z.abs() <= y + CHAMBER_SLACK
            && y <= x + CHAMBER_SLACK
            && x <= FRAC_PI_4 + CHAMBER_SLACK
            && y >= 0.0
            && x >= 0.0;
        if !ok {
            return Err(Error::OutsideChamber { x, y, z });
        }
        Ok(Self { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// The explicit 4x4 matrix of X(x, y, z).
pub fn cartan_unitary(p: &WeylPoint) -> BipartiteOperator {
    let (x, y, z) = (p.x, p.y, p.z);
    let cm = (x - y).cos();
    let cp = (x + y).cos();
    let sm = (x - y).sin();
    let sp = (x + y).sin();
    let em = Complex64::from_polar(1.0, -z);
    let ep = Complex64::from_polar(1.0, z);
    let mi = Complex64::new(0.0, -1.0);
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(4, 4);
    m[(0, 0)] = em * cm;
    m[(0, 3)] = mi * em * sm;
    m[(1, 1)] = ep * cp;
    m[(1, 2)] = mi * ep * sp;
    m[(2, 1)] = mi * ep * sp;
    m[(2, 2)] = ep * cp;
    m[(3, 0)] = mi * em * sm;
    m[(3, 3)] = em * cm;
    BipartiteOperator::new(2, m).expect("4x4 matrix")
}

/// The two bracket sums shared by both closed forms. Scaled by 1/8 they
/// are the purities of rho_13 and rho_14 of |X>.
fn brackets(x: f64, y: f64, z: f64) -> (f64, f64) {
    let cm2 = (x - y).cos().powi(2);
    let cp2 = (x + y).cos().powi(2);
    let sm2 = (x - y).sin().powi(2);
    let sp2 = (x + y).sin().powi(2);
    let c2z2 = (2.0 * z).cos().powi(2);
    let s2z2 = (2.0 * z).sin().powi(2);
    let b1 = (cm2 + cp2).powi(2) + (sp2 + sm2).powi(2) + 4.0 * cm2 * cp2 * c2z2
        + 4.0 * sp2 * sm2 * c2z2;
    let b2 = (cm2 + sp2).powi(2) + (cp2 + sm2).powi(2) + 4.0 * cm2 * sp2 * s2z2
        + 4.0 * cp2 * sm2 * s2z2;
    (b1, b2)
}

/// Closed-form bipartition-product measure of |X(x,y,z)>.
pub fn gme_ame_closed_form(p: &WeylPoint) -> f64 {
    let (b1, b2) = brackets(p.x, p.y, p.z);
    16.0 / 9.0 * (1.0 - b1 / 8.0) * (1.0 - b2 / 8.0)
}

/// Closed-form Sct_2 of |X(x,y,z)>, as 4/3 - f/18 with f = 2 + b1 + b2.
pub fn scott2_closed_form(p: &WeylPoint) -> f64 {
    let (b1, b2) = brackets(p.x, p.y, p.z);
    4.0 / 3.0 - (2.0 + b1 + b2) / 18.0
}

/// The two chamber edges with exact single-parameter measure formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChamberEdge {
    /// x axis from the local vertex to CNOT: points (t, 0, 0).
    LocalCnot,
    /// z axis from DCNOT up to SWAP: points (pi/4, pi/4, t).
    SwapDcnot,
}

/// Exact measure value along a chamber edge, `t` in [0, pi/4].
pub fn edge_formula(edge: ChamberEdge, t: f64) -> f64 {
    match edge {
        ChamberEdge::LocalCnot => (1.0 - (4.0 * t).cos()) / 3.0,
        ChamberEdge::SwapDcnot => ((4.0 * t).cos() + 1.0) / 3.0,
    }
}

/// Deterministic uniform samples from the chamber by per-index rejection
/// sampling of the bounding box.
pub fn sample_chamber(count: usize, seed: u64) -> Vec<WeylPoint> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, i as u64));
            loop {
                let x = rng.random_range(0.0..FRAC_PI_4);
                let y = rng.random_range(0.0..FRAC_PI_4);
                let z = rng.random_range(-FRAC_PI_4..FRAC_PI_4);
                if z.abs() <= y && y <= x {
                    return WeylPoint { x, y, z };
                }
            }
        })
        .collect()
}
