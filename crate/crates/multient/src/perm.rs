//! Bipartite permutation states: enumeration, enphasing, exact-rational
//! measure evaluation, sweeps, and classification.
//!
//! A permutation of the d^2 basis points maps to a four-party state whose
//! amplitude tensor has entries in {0, +-1/d} (" +- " once binary
//! enphasing is applied). Every reduced-state Gram matrix is then an
//! integer matrix and every purity a rational with denominator d^4, so
//! the measures are evaluated in exact arithmetic and classification uses
//! exact equality instead of a float tolerance.
//!
//! Enumeration is lexicographic over the images array; the record index is
//! the lexicographic rank (times the number of sign patterns when
//! enphasing), which makes sweeps shardable and their merged output
//! independent of the worker count.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::chmap::{op_to_state as chmap_op_to_state, BipartiteOperator};
use crate::error::{Error, Result};
use crate::polygon::{polygon_measure, SolverConfig};
use crate::state::PureState;

/// A bijection on the d^2 bipartite basis points, with optional per-point
/// phases.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationSpec {
    d: usize,
    images: Vec<usize>,
    phases: Option<Vec<f64>>,
}

impl PermutationSpec {
    pub fn new(d: usize, images: Vec<usize>, phases: Option<Vec<f64>>) -> Result<Self> {
        let len = d * d;
        if images.len() != len {
            return Err(Error::NotBijective { len });
        }
        let mut seen = vec![false; len];
        for &m in &images {
            if m >= len || seen[m] {
                return Err(Error::NotBijective { len });
            }
            seen[m] = true;
        }
        if let Some(ref ph) = phases {
            if ph.len() != len {
                return Err(Error::PhaseCount { expected: len, got: ph.len() });
            }
        }
        Ok(Self { d, images, phases })
    }

    /// Binary (0 / pi) enphasing encoded as a sign bitmask over the basis
    /// points.
    pub fn signed(d: usize, images: Vec<usize>, sign_bits: u32) -> Result<Self> {
        let len = d * d;
        let phases: Vec<f64> = (0..len)
            .map(|t| if (sign_bits >> t) & 1 == 1 { std::f64::consts::PI } else { 0.0 })
            .collect();
        Self::new(d, images, Some(phases))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn phases(&self) -> Option<&[f64]> {
        self.phases.as_deref()
    }

    /// The (enphased) permutation operator sum_t e^(i theta_t) |images[t]><t|.
    pub fn operator(&self) -> BipartiteOperator {
        let len = self.d * self.d;
        let mut mat = nalgebra::DMatrix::<num_complex::Complex64>::zeros(len, len);
        for (t, &m) in self.images.iter().enumerate() {
            let phase = self.phases.as_ref().map_or(0.0, |p| p[t]);
            mat[(m, t)] = num_complex::Complex64::from_polar(1.0, phase);
        }
        BipartiteOperator::new(self.d, mat).expect("square by construction")
    }
}

/// The normalized four-party state of an (enphased) permutation.
pub fn perm_state(spec: &PermutationSpec) -> Result<PureState> {
    chmap_op_to_state(&spec.operator())
}

/// A reduced rational, the exact value carrier of the sweeps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        Self(BigRational::new(numer, denom))
    }

    pub fn from_integer(v: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl From<BigRational> for ExactValue {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

/// Exact purities of the seven ledger subsets of a signed permutation
/// state, in the order [p1, p2, p3, p4, p12, p13, p14].
///
/// The reduced state of a subset S is G/d^2 with G the integer Gram matrix
/// of the amplitude tensor reshaped with the S digits as rows, so its
/// purity is (sum of squared Gram entries) / d^4.
pub fn exact_purities(d: usize, images: &[usize], sign_bits: u32) -> [BigRational; 7] {
    // nonzero amplitude positions: tensor digits (i, a, j, b) with
    // (i, a) = images[(j, b)] and sign from the column index
    let entries: Vec<([usize; 4], i64)> = images
        .iter()
        .enumerate()
        .map(|(t, &m)| {
            let sign = if (sign_bits >> t) & 1 == 1 { -1 } else { 1 };
            ([m / d, m % d, t / d, t % d], sign)
        })
        .collect();

    let subsets: [&[usize]; 7] =
        [&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
    let d4 = BigInt::from((d * d * d * d) as i64);
    subsets.map(|subset| {
        let rows = d.pow(subset.len() as u32);
        let cols = d.pow((4 - subset.len()) as u32);
        let comp: Vec<usize> = (0..4).filter(|s| !subset.contains(s)).collect();
        // bucket entries by complement (column) index
        let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cols];
        for (digits, sign) in &entries {
            let mut r = 0;
            for &s in subset {
                r = r * d + digits[s];
            }
            let mut c = 0;
            for &s in &comp {
                c = c * d + digits[s];
            }
            columns[c].push((r, *sign));
        }
        let mut gram = vec![0i64; rows * rows];
        for bucket in &columns {
            for &(r1, s1) in bucket {
                for &(r2, s2) in bucket {
                    gram[r1 * rows + r2] += s1 * s2;
                }
            }
        }
        let tr2: i64 = gram.iter().map(|g| g * g).sum();
        BigRational::new(BigInt::from(tr2), d4.clone())
    })
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact bipartition-product measure from exact purities.
pub fn exact_gme_ame(d: usize, purities: &[BigRational; 7]) -> ExactValue {
    let di = d as i64;
    let mut value = rational(di, di - 1).pow(4) * rational(di * di, di * di - 1).pow(3);
    for p in purities {
        value *= BigRational::one() - p;
    }
    ExactValue(value)
}

/// Exact Sct_2 from exact purities (complement pairs counted via symmetry).
pub fn exact_scott2(d: usize, purities: &[BigRational; 7]) -> ExactValue {
    let di = d as i64;
    let pair_sum = (&purities[4] + &purities[5] + &purities[6]) * rational(2, 1);
    ExactValue(rational(di * di, di * di - 1) * (BigRational::one() - rational(1, 6) * pair_sum))
}

/// Product of the three pair linear entropies, without the dimension
/// prefactors. This is the quantity the sweep audit reports alongside the
/// normalized measure.
pub fn exact_pair_product(purities: &[BigRational; 7]) -> ExactValue {
    let mut value = BigRational::one();
    for p in &purities[4..7] {
        value *= BigRational::one() - p;
    }
    ExactValue(value)
}

/// Sct_2 without its dimension prefactor.
pub fn exact_scott2_unnormalized(purities: &[BigRational; 7]) -> ExactValue {
    let pair_sum = (&purities[4] + &purities[5] + &purities[6]) * rational(2, 1);
    ExactValue(BigRational::one() - rational(1, 6) * pair_sum)
}

/// Measures a sweep can evaluate per record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepMeasure {
    GmeAme,
    Scott2,
    /// Numeric, four-qubit only.
    Polygon,
}

impl SweepMeasure {
    pub fn name(&self) -> &'static str {
        match self {
            SweepMeasure::GmeAme => "gme_ame",
            SweepMeasure::Scott2 => "scott2",
            SweepMeasure::Polygon => "polygon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnphaseMode {
    None,
    /// All 2^(d^2) sign patterns per permutation (d = 2 only).
    Binary,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Worker threads; `None` uses the global rayon default.
    pub threads: Option<usize>,
    /// Solver settings for the polygon column.
    pub solver: SolverConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { threads: None, solver: SolverConfig::default() }
    }
}

/// One sweep row: a permutation (plus optional sign pattern) and its
/// measure values.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    /// Lexicographic rank; with binary enphasing, rank * 2^(d^2) + pattern.
    pub index: u64,
    pub images: Vec<usize>,
    pub sign_bits: Option<u32>,
    pub gme_ame: Option<ExactValue>,
    pub scott2: Option<ExactValue>,
    pub polygon: Option<f64>,
}

impl SweepRecord {
    /// Float view of a measure value.
    pub fn value_f64(&self, measure: SweepMeasure) -> Option<f64> {
        match measure {
            SweepMeasure::GmeAme => self.gme_ame.as_ref().map(ExactValue::to_f64),
            SweepMeasure::Scott2 => self.scott2.as_ref().map(ExactValue::to_f64),
            SweepMeasure::Polygon => self.polygon,
        }
    }

    pub fn value_exact(&self, measure: SweepMeasure) -> Option<&ExactValue> {
        match measure {
            SweepMeasure::GmeAme => self.gme_ame.as_ref(),
            SweepMeasure::Scott2 => self.scott2.as_ref(),
            SweepMeasure::Polygon => None,
        }
    }
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// Number of permutation operators for local dimension d.
pub fn total_permutations(d: usize) -> u64 {
    factorial(d * d)
}

/// The lexicographically `rank`-th permutation of 0..m.
pub fn unrank_permutation(m: usize, rank: u64) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut rank = rank;
    let mut out = Vec::with_capacity(m);
    for pos in (0..m).rev() {
        let f = factorial(pos);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(remaining.remove(idx));
    }
    out
}

fn evaluate_record(
    d: usize,
    index: u64,
    images: Vec<usize>,
    sign_bits: Option<u32>,
    measures: &[SweepMeasure],
    solver: &SolverConfig,
) -> Result<SweepRecord> {
    let bits = sign_bits.unwrap_or(0);
    let needs_exact = measures
        .iter()
        .any(|m| matches!(m, SweepMeasure::GmeAme | SweepMeasure::Scott2));
    let purities = if needs_exact { Some(exact_purities(d, &images, bits)) } else { None };
    let gme_ame = measures
        .contains(&SweepMeasure::GmeAme)
        .then(|| exact_gme_ame(d, purities.as_ref().unwrap()));
    let scott2 = measures
        .contains(&SweepMeasure::Scott2)
        .then(|| exact_scott2(d, purities.as_ref().unwrap()));
    let polygon = if measures.contains(&SweepMeasure::Polygon) {
        let spec = match sign_bits {
            Some(bits) => PermutationSpec::signed(d, images.clone(), bits)?,
            None => PermutationSpec::new(d, images.clone(), None)?,
        };
        Some(polygon_measure(&perm_state(&spec)?, solver)?)
    } else {
        None
    };
    Ok(SweepRecord { index, images, sign_bits, gme_ame, scott2, polygon })
}

fn run_indexed<T: Send>(
    threads: Option<usize>,
    total: u64,
    eval: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let run = || (0..total).into_par_iter().map(|i| eval(i)).collect::<Result<Vec<T>>>();
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Exhaustive sweep over all permutations of the d^2 basis points
/// (d = 2 or 3), optionally crossed with all binary sign patterns.
///
/// Records come back in index order regardless of the worker count.
pub fn sweep(
    d: usize,
    measures: &[SweepMeasure],
    enphase: EnphaseMode,
    cfg: &SweepConfig,
) -> Result<Vec<SweepRecord>> {
    if !(d == 2 || d == 3) {
        return Err(Error::UnsupportedDimension(d));
    }
    if enphase == EnphaseMode::Binary && d != 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    if measures.is_empty() {
        return Err(Error::DimMismatch("no measures requested".into()));
    }
    if measures.contains(&SweepMeasure::Polygon) && d != 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let m = d * d;
    let nperm = factorial(m);
    let patterns: u64 = match enphase {
        EnphaseMode::None => 1,
        EnphaseMode::Binary => 1 << m,
    };
    run_indexed(cfg.threads, nperm * patterns, |index| {
        let perm_rank = index / patterns;
        let images = unrank_permutation(m, perm_rank);
        let sign_bits = match enphase {
            EnphaseMode::None => None,
            EnphaseMode::Binary => Some((index % patterns) as u32),
        };
        evaluate_record(d, index, images, sign_bits, measures, &cfg.solver)
    })
}

/// All 2^(d^2) binary sign patterns applied to one permutation (d = 2).
pub fn enphase_sweep(
    spec: &PermutationSpec,
    measures: &[SweepMeasure],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRecord>> {
    if spec.d() != 2 {
        return Err(Error::UnsupportedDimension(spec.d()));
    }
    let m = spec.d() * spec.d();
    run_indexed(cfg.threads, 1 << m, |pattern| {
        evaluate_record(
            spec.d(),
            pattern,
            spec.images().to_vec(),
            Some(pattern as u32),
            measures,
            &cfg.solver,
        )
    })
}

/// Class key: exact rational equality or float merging within a tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifyMode {
    Exact,
    Tol(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassValue {
    Exact(ExactValue),
    Real(f64),
}

impl ClassValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ClassValue::Exact(v) => v.to_f64(),
            ClassValue::Real(v) => *v,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassEntry {
    pub value: ClassValue,
    pub count: u64,
    /// Smallest record index carrying this value.
    pub representative: u64,
}

/// Histogram of distinct measure values over a record stream, ascending.
#[derive(Debug, Clone)]
pub struct ClassHistogram {
    pub entries: Vec<ClassEntry>,
    pub total: u64,
}

impl ClassHistogram {
    pub fn count_of_exact(&self, value: &ExactValue) -> u64 {
        self.entries
            .iter()
            .find(|e| matches!(&e.value, ClassValue::Exact(v) if v == value))
            .map_or(0, |e| e.count)
    }
}

/// Group records by measure value.
pub fn classify(
    records: &[SweepRecord],
    measure: SweepMeasure,
    mode: ClassifyMode,
) -> Result<ClassHistogram> {
    if records.is_empty() {
        return Err(Error::DimMismatch("empty record stream".into()));
    }
    match mode {
        ClassifyMode::Exact => {
            let mut groups: BTreeMap<&ExactValue, (u64, u64)> = BTreeMap::new();
            for rec in records {
                let value = rec.value_exact(measure).ok_or_else(|| {
                    Error::DimMismatch(format!(
                        "records carry no exact {} values",
                        measure.name()
                    ))
                })?;
                let slot = groups.entry(value).or_insert((0, rec.index));
                slot.0 += 1;
                slot.1 = slot.1.min(rec.index);
            }
            let entries = groups
                .into_iter()
                .map(|(value, (count, representative))| ClassEntry {
                    value: ClassValue::Exact(value.clone()),
                    count,
                    representative,
                })
                .collect();
            Ok(ClassHistogram { entries, total: records.len() as u64 })
        }
        ClassifyMode::Tol(eps) => {
            let mut vals: Vec<(f64, u64)> = records
                .iter()
                .map(|rec| {
                    rec.value_f64(measure)
                        .map(|v| (v, rec.index))
                        .ok_or_else(|| {
                            Error::DimMismatch(format!(
                                "records carry no {} values",
                                measure.name()
                            ))
                        })
                })
                .collect::<Result<_>>()?;
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut entries: Vec<ClassEntry> = Vec::new();
            let mut cluster: Vec<(f64, u64)> = Vec::new();
            let flush = |cluster: &mut Vec<(f64, u64)>, entries: &mut Vec<ClassEntry>| {
                if cluster.is_empty() {
                    return;
                }
                let mean = cluster.iter().map(|(v, _)| v).sum::<f64>() / cluster.len() as f64;
                let rep = cluster.iter().map(|&(_, i)| i).min().unwrap();
                entries.push(ClassEntry {
                    value: ClassValue::Real(mean),
                    count: cluster.len() as u64,
                    representative: rep,
                });
                cluster.clear();
            };
            for (v, i) in vals {
                if let Some(&(last, _)) = cluster.last() {
                    if v - last > eps {
                        flush(&mut cluster, &mut entries);
                    }
                }
                cluster.push((v, i));
            }
            flush(&mut cluster, &mut entries);
            Ok(ClassHistogram { entries, total: records.len() as u64 })
        }
    }
}
