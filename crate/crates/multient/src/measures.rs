//! Bipartition-product and averaged-linear-entropy measures.
//!
//! `gme_ame` multiplies the normalized linear entropies `d^l/(d^l - 1) *
//! (1 - Tr rho_S^2)` over every canonical bipartition: all subsets of size
//! `l < n/2`, and for even `n` only the size-`n/2` subsets containing
//! party 1, so each bipartition is counted once. The product vanishes
//! exactly when some bipartition is separable and reaches 1 exactly when
//! every reduction is maximally mixed.
//!
//! `scott` averages `Tr rho_S^2` over all C(n,k) subsets of size `k`
//! (complements counted separately, matching the binomial prefactor).

use std::collections::{BTreeMap, BTreeSet};

use crate::chmap::{pair_marginals, BipartiteOperator};
use crate::error::{Error, Result};
use crate::polygon::{polygon_measure, SolverConfig};
use crate::state::PureState;

/// Round-off band: linear entropies in [-1e-12, 0) clamp to 0, larger
/// negatives are an internal error.
const ROUNDOFF_TOL: f64 = 1e-12;
/// Biseparability detection threshold on the product measure.
pub const BISEPARABLE_TOL: f64 = 1e-10;
/// Flag tolerance for the AME and k-uniform checks.
pub const FLAG_TOL: f64 = 1e-9;

/// The canonical bipartitions of `n` parties, grouped by subset size.
#[derive(Debug, Clone)]
pub struct BipartitionLedger {
    n: usize,
    entries: Vec<(usize, Vec<Vec<usize>>)>,
}

impl BipartitionLedger {
    pub fn new(n: usize) -> Self {
        let half = n / 2;
        let mut entries = Vec::new();
        for l in 1..=half {
            let mut subsets = combinations(n, l);
            if n % 2 == 0 && l == half {
                // keep one representative per bipartition
                subsets.retain(|s| s[0] == 1);
            }
            entries.push((l, subsets));
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(subset size, subsets)` pairs; the subset count per size is the
    /// multiplicity exponent of that size's prefactor.
    pub fn entries(&self) -> &[(usize, Vec<Vec<usize>>)] {
        &self.entries
    }

    pub fn all_subsets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.entries.iter().flat_map(|(_, subs)| subs.iter())
    }
}

/// All size-`k` subsets of `{1..n}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for p in start..=n {
            cur.push(p);
            rec(p + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    num
}

/// One normalized linear-entropy factor, with the round-off clamp.
///
/// A linear entropy within the 1e-12 round-off band of zero is a detected
/// pure marginal and snaps the factor to exactly 0, so biseparable states
/// come out at exactly 0 despite normalization dust in the purity.
fn linear_entropy_factor(d: usize, l: usize, purity: f64) -> Result<f64> {
    let dl = (d as f64).powi(l as i32);
    let lin = 1.0 - purity;
    if lin < -ROUNDOFF_TOL {
        return Err(Error::Internal(format!(
            "purity {purity} exceeds 1 by more than {ROUNDOFF_TOL:e}"
        )));
    }
    if lin.abs() <= ROUNDOFF_TOL {
        return Ok(0.0);
    }
    Ok(dl / (dl - 1.0) * lin)
}

fn clamp_unit(v: f64) -> Result<f64> {
    if v < 0.0 {
        // factors are clamped individually, so this cannot go below -eps
        if v >= -ROUNDOFF_TOL {
            return Ok(0.0);
        }
        return Err(Error::Internal(format!("measure value {v} below 0")));
    }
    if v > 1.0 {
        if v <= 1.0 + ROUNDOFF_TOL {
            return Ok(1.0);
        }
        return Err(Error::Internal(format!("measure value {v} above 1")));
    }
    Ok(v)
}

/// The bipartition-product measure over the canonical ledger.
pub fn gme_ame(state: &PureState) -> Result<f64> {
    let purities = ledger_purities(state)?;
    gme_ame_from_purities(state.d(), &purities)
}

/// Purities of every ledger subset.
pub fn ledger_purities(state: &PureState) -> Result<BTreeMap<Vec<usize>, f64>> {
    let ledger = BipartitionLedger::new(state.n());
    let mut out = BTreeMap::new();
    for subset in ledger.all_subsets() {
        let purity = state.partial_trace(subset)?.purity();
        out.insert(subset.clone(), purity);
    }
    Ok(out)
}

fn gme_ame_from_purities(d: usize, purities: &BTreeMap<Vec<usize>, f64>) -> Result<f64> {
    let mut value = 1.0;
    for (subset, &purity) in purities {
        value *= linear_entropy_factor(d, subset.len(), purity)?;
    }
    clamp_unit(value)
}

/// Same measure for a four-party operator state, evaluated through the
/// Gram-matrix marginal shortcuts instead of the generic partial trace.
pub fn gme_ame_operator(a: &BipartiteOperator) -> Result<f64> {
    let d = a.d();
    let (rho12, rho13, rho14) = pair_marginals(a)?;
    let singles = [
        rho12.trace_out_pair(0)?,
        rho12.trace_out_pair(1)?,
        rho13.trace_out_pair(1)?,
        rho14.trace_out_pair(1)?,
    ];
    let mut value = 1.0;
    for rho in &singles {
        value *= linear_entropy_factor(d, 1, rho.purity())?;
    }
    for rho in [&rho12, &rho13, &rho14] {
        value *= linear_entropy_factor(d, 2, rho.purity())?;
    }
    clamp_unit(value)
}

/// The averaged linear-entropy measure over all size-`k` reductions.
pub fn scott(state: &PureState, k: usize) -> Result<f64> {
    let n = state.n();
    let max = n / 2;
    if k == 0 || k > max {
        return Err(Error::KOutOfRange { k, max });
    }
    let d = state.d();
    let mut purity_sum = 0.0;
    for subset in combinations(n, k) {
        purity_sum += state.partial_trace(&subset)?.purity();
    }
    let count = binomial(n, k) as f64;
    let dk = (d as f64).powi(k as i32);
    clamp_unit(dk / (dk - 1.0) * (1.0 - purity_sum / count))
}

/// True iff every size-`k` reduced state is within `tol` of I/d^k
/// elementwise.
pub fn is_k_uniform(state: &PureState, k: usize, tol: f64) -> Result<bool> {
    let n = state.n();
    let max = n / 2;
    if k == 0 || k > max {
        return Err(Error::KOutOfRange { k, max });
    }
    let dk = state.d().pow(k as u32);
    let uniform = 1.0 / dk as f64;
    for subset in combinations(n, k) {
        let rho = state.partial_trace(&subset)?;
        for r in 0..dk {
            for c in 0..dk {
                let expect = if r == c { uniform } else { 0.0 };
                if (rho.mat()[(r, c)] - expect).norm() >= tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// State classification flags derived from the measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    Biseparable,
    Ame,
    KUniform(usize),
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flag::Biseparable => write!(f, "biseparable"),
            Flag::Ame => write!(f, "ame"),
            Flag::KUniform(k) => write!(f, "k_uniform_{k}"),
        }
    }
}

/// All measure values of one state, with per-bipartition purities.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub n: usize,
    pub d: usize,
    pub gme_ame: f64,
    /// k -> Sct_k for k = 1..=n/2.
    pub scott: BTreeMap<usize, f64>,
    pub polygon: Option<f64>,
    pub purities: BTreeMap<Vec<usize>, f64>,
    pub flags: BTreeSet<Flag>,
}

/// Evaluate every measure on one state.
///
/// `want_polygon` is only valid for four-qubit states.
pub fn measure_report(state: &PureState, want_polygon: bool) -> Result<MeasureReport> {
    measure_report_with(state, want_polygon, &SolverConfig::default())
}

/// [`measure_report`] with explicit polygon solver settings.
pub fn measure_report_with(
    state: &PureState,
    want_polygon: bool,
    solver: &SolverConfig,
) -> Result<MeasureReport> {
    let (n, d) = (state.n(), state.d());
    if want_polygon && (n != 4 || d != 2) {
        return Err(Error::DimMismatch(format!(
            "polygon measure is defined for four qubits, not n={n}, d={d}"
        )));
    }
    let purities = ledger_purities(state)?;
    let gme = gme_ame_from_purities(d, &purities)?;
    let mut scott_map = BTreeMap::new();
    for k in 1..=n / 2 {
        scott_map.insert(k, scott(state, k)?);
    }
    let polygon = if want_polygon { Some(polygon_measure(state, solver)?) } else { None };
    let mut flags = BTreeSet::new();
    if gme <= BISEPARABLE_TOL {
        flags.insert(Flag::Biseparable);
    }
    if gme >= 1.0 - FLAG_TOL {
        flags.insert(Flag::Ame);
    }
    for k in 1..=n / 2 {
        if is_k_uniform(state, k, FLAG_TOL)? {
            flags.insert(Flag::KUniform(k));
        }
    }
    Ok(MeasureReport { n, d, gme_ame: gme, scott: scott_map, polygon, purities, flags })
}
