//! Named reference states and parametrized four-qubit families.
//!
//! The catalog covers the GHZ and W states, the operator states of the
//! identity, SWAP, CNOT and DCNOT gates, a four-party qutrit state that
//! saturates both measures, and the nine four-qubit family classes
//! written as literal superpositions. All constructions normalize after
//! building the raw amplitude vector, so family norms may depend on the
//! parameters.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::chmap::{op_to_state, BipartiteOperator};
use crate::error::{Error, Result};
use crate::measures::{measure_report, MeasureReport};
use crate::perm::PermutationSpec;
use crate::seed::derive_seed;
use crate::state::PureState;

/// Parameter map for parametrized families.
pub type Params = BTreeMap<String, Complex64>;

/// A catalog state request: a name plus whatever the name needs.
#[derive(Debug, Clone, Default)]
pub struct NamedStateSpec {
    pub name: String,
    pub params: Params,
    /// Party count for `ghz`/`w`; ignored elsewhere.
    pub n: Option<usize>,
    /// Local dimension for `ghz`/`identity`/`swap`; ignored elsewhere.
    pub d: Option<usize>,
}

impl NamedStateSpec {
    pub fn bare(name: &str) -> Self {
        Self { name: name.to_string(), ..Self::default() }
    }

    pub fn with_params(name: &str, params: Params) -> Self {
        Self { name: name.to_string(), params, ..Self::default() }
    }
}

/// Schema entry for one catalog name.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub shape: &'static str,
    pub description: &'static str,
}

pub static CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "ghz", params: &[], shape: "n parties, dimension d", description: "uniform superposition of |0..0> .. |(d-1)..(d-1)>" },
    CatalogEntry { name: "w", params: &[], shape: "n qubits", description: "uniform superposition of single-excitation basis states" },
    CatalogEntry { name: "identity", params: &[], shape: "4 parties, dimension d", description: "operator state of the identity gate" },
    CatalogEntry { name: "swap", params: &[], shape: "4 parties, dimension d", description: "operator state of the SWAP gate" },
    CatalogEntry { name: "cnot", params: &[], shape: "4 qubits", description: "operator state of the CNOT gate" },
    CatalogEntry { name: "dcnot", params: &[], shape: "4 qubits", description: "operator state of the DCNOT gate" },
    CatalogEntry { name: "ame43", params: &[], shape: "4 qutrits", description: "permutation state with every reduction maximally mixed" },
    CatalogEntry { name: "g_abcd", params: &["a", "b", "c", "d"], shape: "4 qubits", description: "generic four-qubit family" },
    CatalogEntry { name: "l_abc2", params: &["a", "b", "c"], shape: "4 qubits", description: "three-parameter degenerate family" },
    CatalogEntry { name: "l_a2b2", params: &["a", "b"], shape: "4 qubits", description: "two-parameter degenerate family" },
    CatalogEntry { name: "l_ab3", params: &["a", "b"], shape: "4 qubits", description: "two-parameter degenerate family" },
    CatalogEntry { name: "l_a4", params: &["a"], shape: "4 qubits", description: "one-parameter degenerate family" },
    CatalogEntry { name: "l_a2_0", params: &["a"], shape: "4 qubits", description: "one-parameter degenerate family" },
    CatalogEntry { name: "l_05_3", params: &[], shape: "4 qubits", description: "parameter-free degenerate class" },
    CatalogEntry { name: "l_07_1", params: &[], shape: "4 qubits", description: "parameter-free degenerate class" },
    CatalogEntry { name: "l_03_03", params: &[], shape: "4 qubits", description: "biseparable degenerate class" },
];

/// Family names accepted by [`class_sweep`].
pub static SWEEPABLE_CLASSES: &[&str] =
    &["g_abcd", "l_abc2", "l_a2b2", "l_ab3", "l_a4", "l_a2_0"];

/// Build a catalog state.
pub fn named_state(spec: &NamedStateSpec) -> Result<PureState> {
    let n = spec.n.unwrap_or(4);
    let d = spec.d.unwrap_or(2);
    match spec.name.as_str() {
        "ghz" => ghz_state(n, d),
        "w" => w_state(n),
        "identity" => op_to_state(&BipartiteOperator::identity(d)),
        "swap" => op_to_state(&BipartiteOperator::swap(d)),
        "cnot" => op_to_state(&BipartiteOperator::cnot()),
        "dcnot" => op_to_state(&BipartiteOperator::dcnot()),
        "ame43" => Ok(ame43_state()),
        "g_abcd" => {
            let [a, b, c, dd] = get_params(&spec.params, &["a", "b", "c", "d"])?;
            g_abcd_state(a, b, c, dd)
        }
        "l_abc2" => {
            let [a, b, c] = get_params(&spec.params, &["a", "b", "c"])?;
            l_abc2_state(a, b, c)
        }
        "l_a2b2" => {
            let [a, b] = get_params(&spec.params, &["a", "b"])?;
            l_a2b2_state(a, b)
        }
        "l_ab3" => {
            let [a, b] = get_params(&spec.params, &["a", "b"])?;
            l_ab3_state(a, b)
        }
        "l_a4" => {
            let [a] = get_params(&spec.params, &["a"])?;
            l_a4_state(a)
        }
        "l_a2_0" => {
            let [a] = get_params(&spec.params, &["a"])?;
            l_a2_0_state(a)
        }
        "l_05_3" => l_05_3_state(),
        "l_07_1" => l_07_1_state(),
        "l_03_03" => l_03_03_state(),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn get_params<const K: usize>(params: &Params, names: &[&str; K]) -> Result<[Complex64; K]> {
    let mut out = [Complex64::ZERO; K];
    for (slot, name) in out.iter_mut().zip(names) {
        *slot = *params.get(*name).ok_or_else(|| Error::MissingParam(name.to_string()))?;
    }
    Ok(out)
}

pub fn ghz_state(n: usize, d: usize) -> Result<PureState> {
    let dim = crate::state::checked_dim(n, d)?;
    let mut amps = vec![Complex64::ZERO; dim];
    for i in 0..d {
        let mut idx = 0usize;
        for _ in 0..n {
            idx = idx * d + i;
        }
        amps[idx] = Complex64::ONE;
    }
    PureState::new(n, d, amps)
}

pub fn w_state(n: usize) -> Result<PureState> {
    let mut amps = vec![Complex64::ZERO; 1usize << n];
    for k in 0..n {
        amps[1usize << k] = Complex64::ONE;
    }
    PureState::new(n, 2, amps)
}

/// The qutrit permutation (j, b) -> (j+b, j+2b) mod 3, whose state has
/// every one- and two-party reduction maximally mixed.
pub fn ame43_state() -> PureState {
    let images: Vec<usize> = (0..9)
        .map(|t| {
            let (j, b) = (t / 3, t % 3);
            ((j + b) % 3) * 3 + (j + 2 * b) % 3
        })
        .collect();
    let spec = PermutationSpec::new(3, images, None).expect("fixed bijection");
    crate::perm::perm_state(&spec).expect("unit operator")
}

/// Assemble a four-qubit state from (bitstring, coefficient) terms.
fn four_qubit(terms: &[(usize, Complex64)]) -> Result<PureState> {
    let mut amps = vec![Complex64::ZERO; 16];
    for &(idx, coeff) in terms {
        amps[idx] += coeff;
    }
    PureState::new(4, 2, amps)
}

pub fn g_abcd_state(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<PureState> {
    let half = Complex64::new(0.5, 0.0);
    four_qubit(&[
        (0b0000, (a + d) * half),
        (0b1111, (a + d) * half),
        (0b0011, (a - d) * half),
        (0b1100, (a - d) * half),
        (0b0101, (b + c) * half),
        (0b1010, (b + c) * half),
        (0b0110, (b - c) * half),
        (0b1001, (b - c) * half),
    ])
}

pub fn l_abc2_state(a: Complex64, b: Complex64, c: Complex64) -> Result<PureState> {
    let half = Complex64::new(0.5, 0.0);
    four_qubit(&[
        (0b0000, (a + b) * half),
        (0b1111, (a + b) * half),
        (0b0011, (a - b) * half),
        (0b1100, (a - b) * half),
        (0b0101, c),
        (0b1010, c),
        (0b0110, Complex64::ONE),
    ])
}

pub fn l_a2b2_state(a: Complex64, b: Complex64) -> Result<PureState> {
    four_qubit(&[
        (0b0000, a),
        (0b1111, a),
        (0b0101, b),
        (0b1010, b),
        (0b0110, Complex64::ONE),
        (0b0011, Complex64::ONE),
    ])
}

pub fn l_ab3_state(a: Complex64, b: Complex64) -> Result<PureState> {
    let half = Complex64::new(0.5, 0.0);
    let i_over_sqrt2 = Complex64::new(0.0, 1.0 / 2.0f64.sqrt());
    four_qubit(&[
        (0b0000, a),
        (0b1111, a),
        (0b0101, (a + b) * half),
        (0b1010, (a + b) * half),
        (0b0110, (a - b) * half),
        (0b1001, (a - b) * half),
        (0b0001, i_over_sqrt2),
        (0b0010, i_over_sqrt2),
        (0b0111, Complex64::ONE),
        (0b1011, Complex64::ONE),
    ])
}

pub fn l_a4_state(a: Complex64) -> Result<PureState> {
    let i = Complex64::new(0.0, 1.0);
    four_qubit(&[
        (0b0000, a),
        (0b0101, a),
        (0b1010, a),
        (0b1111, a),
        (0b0001, i),
        (0b0110, Complex64::ONE),
        (0b1011, -i),
    ])
}

pub fn l_a2_0_state(a: Complex64) -> Result<PureState> {
    four_qubit(&[
        (0b0000, a),
        (0b1111, a),
        (0b0011, Complex64::ONE),
        (0b0101, Complex64::ONE),
        (0b0110, Complex64::ONE),
    ])
}

pub fn l_05_3_state() -> Result<PureState> {
    four_qubit(&[
        (0b0000, Complex64::ONE),
        (0b0101, Complex64::ONE),
        (0b1000, Complex64::ONE),
        (0b1110, Complex64::ONE),
    ])
}

pub fn l_07_1_state() -> Result<PureState> {
    four_qubit(&[
        (0b0000, Complex64::ONE),
        (0b1011, Complex64::ONE),
        (0b1101, Complex64::ONE),
        (0b1110, Complex64::ONE),
    ])
}

pub fn l_03_03_state() -> Result<PureState> {
    four_qubit(&[(0b0000, Complex64::ONE), (0b0111, Complex64::ONE)])
}

/// Evaluate a parametrized family over a grid of parameter maps.
pub fn class_sweep(name: &str, grid: &[Params]) -> Result<Vec<(Params, MeasureReport)>> {
    if !SWEEPABLE_CLASSES.contains(&name) {
        return Err(Error::UnknownName(name.to_string()));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    grid.iter()
        .map(|params| {
            let state = named_state(&NamedStateSpec::with_params(name, params.clone()))?;
            Ok((params.clone(), measure_report(&state, false)?))
        })
        .collect()
}

/// The default parameter grid for a sweepable family.
///
/// Multi-parameter families draw complex parameters with seeded uniform
/// phases and moduli just below one, which is the sampling that
/// reproduces the reported value bands; the one-parameter families use a
/// real line grid over [0, 2].
pub fn default_grid(name: &str, count: usize, seed: u64) -> Result<Vec<Params>> {
    if count == 0 {
        return Err(Error::EmptyGrid);
    }
    let entry = CATALOG
        .iter()
        .find(|e| e.name == name && SWEEPABLE_CLASSES.contains(&name))
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    let grid = match entry.params.len() {
        1 => (0..count)
            .map(|i| {
                let a = 2.0 * i as f64 / (count.max(2) - 1) as f64;
                let mut p = Params::new();
                p.insert("a".into(), Complex64::new(a, 0.0));
                p
            })
            .collect(),
        _ => (0..count)
            .map(|i| {
                let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, i as u64));
                entry
                    .params
                    .iter()
                    .map(|&name| {
                        let radius: f64 = rng.random_range(0.9..1.0);
                        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                        (name.to_string(), Complex64::from_polar(radius, theta))
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(grid)
}

/// Parameters that make `g_abcd` reproduce the chamber state |X(x,y,z)>.
///
/// Reading the Cartan matrix entries off against the family's
/// coefficients gives a+d, a-d, b+c, b-c directly.
pub fn g_abcd_params_for_chamber_point(p: &crate::weyl::WeylPoint) -> Params {
    let (x, y, z) = (p.x(), p.y(), p.z());
    let em = Complex64::from_polar(1.0, -z);
    let ep = Complex64::from_polar(1.0, z);
    let mi = Complex64::new(0.0, -1.0);
    let a1 = em * (x - y).cos();
    let a2 = mi * em * (x - y).sin();
    let a3 = ep * (x + y).cos();
    let a4 = mi * ep * (x + y).sin();
    let half = Complex64::new(0.5, 0.0);
    let mut params = Params::new();
    params.insert("a".into(), (a1 + a2) * half);
    params.insert("d".into(), (a1 - a2) * half);
    params.insert("b".into(), (a3 + a4) * half);
    params.insert("c".into(), (a3 - a4) * half);
    params
}
