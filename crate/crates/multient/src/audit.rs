//! Sweep audits against the shipped reference class tables.
//!
//! The reference tables list (value, count) rows at four printed decimals
//! for the qutrit permutation sweeps, one per measure. The audit rounds
//! the exact sweep histogram to the same precision, joins the two sides by
//! printed value, and reports every agreement and anomaly
//! machine-readably. The reference rows are kept verbatim, including their
//! duplicated values and count totals that do not reach 9!, so the report
//! documents those anomalies instead of hiding them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::perm::{
    exact_pair_product, exact_purities, exact_scott2_unnormalized, ClassHistogram, ClassValue,
    SweepRecord,
};

/// One reference row: a value printed at four decimals and a state count.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceRow {
    pub value: &'static str,
    pub count: u64,
}

const fn row(value: &'static str, count: u64) -> ReferenceRow {
    ReferenceRow { value, count }
}

/// Reference classes for the qutrit permutation sweep of the
/// bipartition-product measure (33 rows as published).
pub static QUTRIT_GME_AME_REFERENCE: &[ReferenceRow] = &[
    row("0.0000", 72),
    row("0.4444", 1296),
    row("0.5000", 864),
    row("0.5093", 1296),
    row("0.6019", 1296),
    row("0.6296", 5184),
    row("0.6667", 13608),
    row("0.6713", 10368),
    row("0.6821", 10368),
    row("0.6914", 12960),
    row("0.6944", 3456),
    row("0.7160", 23328),
    row("0.7222", 2592),
    row("0.7346", 5184),
    row("0.7407", 10368),
    row("0.7415", 25920),
    row("0.7500", 288),
    row("0.7608", 36288),
    row("0.6420", 5184),
    row("0.7894", 10368),
    row("0.6667", 13608),
    row("0.8133", 25920),
    row("0.8889", 1296),
    row("0.7176", 10368),
    row("0.8148", 15552),
    row("0.7222", 2592),
    row("0.8395", 20736),
    row("0.8403", 1728),
    row("0.7654", 64800),
    row("0.8056", 5184),
    row("0.7901", 34344),
    row("0.8920", 2592),
    row("1.0000", 72),
];

/// Reference classes for the qutrit Sct_2 sweep (16 rows as published).
pub static QUTRIT_SCOTT2_REFERENCE: &[ReferenceRow] = &[
    row("0.6667", 72),
    row("0.8148", 1170),
    row("0.8333", 864),
    row("0.8148", 1422),
    row("0.8796", 20736),
    row("0.8704", 10368),
    row("0.8889", 27432),
    row("0.9630", 3888),
    row("0.8889", 27432),
    row("0.8981", 36288),
    row("0.9167", 101376),
    row("0.9352", 46656),
    row("0.8519", 1296),
    row("0.9074", 44064),
    row("0.9259", 44712),
    row("1.0000", 72),
];

/// Reported maxima for the qubit permutation sweep prose comparison.
pub const QUBIT_GME_AME_REPORTED_MAX: f64 = 0.3;
pub const QUBIT_SCOTT2_REPORTED_MAX: f64 = 0.7;

/// A computed class as it appears in an audit entry.
#[derive(Debug, Clone, Serialize)]
pub struct ComputedClass {
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
    pub count: u64,
    pub representative: u64,
}

/// All computed classes and reference rows sharing one printed value.
#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    /// The four-decimal printed value both sides are joined on.
    pub value: String,
    pub computed: Vec<ComputedClass>,
    pub computed_count: u64,
    pub reference_counts: Vec<u64>,
    pub reference_count: u64,
    /// "match", "count_mismatch", "computed_only", or "reference_only".
    pub status: String,
    pub reference_duplicated: bool,
}

/// Machine-readable diff of a sweep histogram against a reference table.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub measure: String,
    pub computed_total: u64,
    pub computed_classes: usize,
    pub reference_total: u64,
    pub reference_rows: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub entries: Vec<AuditEntry>,
    pub notes: Vec<String>,
}

fn printed(v: f64) -> String {
    format!("{v:.4}")
}

/// Diff an exact class histogram against a reference table.
pub fn audit_against_reference(
    hist: &ClassHistogram,
    reference: &[ReferenceRow],
    measure: &str,
) -> AuditReport {
    let mut by_value: BTreeMap<String, (Vec<ComputedClass>, Vec<u64>)> = BTreeMap::new();
    for entry in &hist.entries {
        let (numerator, denominator, value) = match &entry.value {
            ClassValue::Exact(v) => (v.numer().to_string(), v.denom().to_string(), v.to_f64()),
            ClassValue::Real(v) => (String::new(), String::new(), *v),
        };
        by_value.entry(printed(value)).or_default().0.push(ComputedClass {
            numerator,
            denominator,
            value,
            count: entry.count,
            representative: entry.representative,
        });
    }
    for r in reference {
        by_value.entry(r.value.to_string()).or_default().1.push(r.count);
    }

    let mut entries = Vec::new();
    let mut matches = 0usize;
    let mut mismatches = 0usize;
    for (value, (computed, reference_counts)) in by_value {
        let computed_count: u64 = computed.iter().map(|c| c.count).sum();
        let reference_count: u64 = reference_counts.iter().sum();
        let status = if computed.is_empty() {
            "reference_only"
        } else if reference_counts.is_empty() {
            "computed_only"
        } else if computed_count == reference_count {
            "match"
        } else {
            "count_mismatch"
        };
        if status == "match" {
            matches += 1;
        } else {
            mismatches += 1;
        }
        entries.push(AuditEntry {
            value,
            computed,
            computed_count,
            reference_counts: reference_counts.clone(),
            reference_count,
            status: status.to_string(),
            reference_duplicated: reference_counts.len() > 1,
        });
    }

    let reference_total: u64 = reference.iter().map(|r| r.count).sum();
    let mut notes = Vec::new();
    if reference_total != hist.total {
        notes.push(format!(
            "reference rows sum to {reference_total}, sweep total is {}",
            hist.total
        ));
    }
    let duplicated: Vec<&str> = {
        let mut seen = BTreeMap::new();
        for r in reference {
            *seen.entry(r.value).or_insert(0u32) += 1;
        }
        seen.into_iter().filter(|&(_, c)| c > 1).map(|(v, _)| v).collect()
    };
    if !duplicated.is_empty() {
        notes.push(format!(
            "reference table lists duplicated values: {}",
            duplicated.join(", ")
        ));
    }

    AuditReport {
        measure: measure.to_string(),
        computed_total: hist.total,
        computed_classes: hist.entries.len(),
        reference_total,
        reference_rows: reference.len(),
        matches,
        mismatches,
        entries,
        notes,
    }
}

/// Normalized-vs-unnormalized comparison for one qubit sweep measure.
#[derive(Debug, Clone, Serialize)]
pub struct QubitProseEntry {
    pub measure: String,
    pub class_values: Vec<String>,
    pub class_counts: Vec<u64>,
    pub max_value: String,
    pub max_value_float: f64,
    /// The same quantity with the dimension prefactors stripped; this is
    /// what the reported maximum actually matches.
    pub without_prefactor: String,
    pub without_prefactor_float: f64,
    pub reported_max: f64,
}

/// Audit of the 24-permutation qubit sweep against the reported maxima.
///
/// The normalized maxima are 2/3 and 8/9; the reported figures 0.3 and
/// 0.7 instead match the prefactor-stripped quantities 9/32 and 2/3, and
/// the report records both so the discrepancy is explicit.
#[derive(Debug, Clone, Serialize)]
pub struct QubitSweepAudit {
    pub total: u64,
    pub entries: Vec<QubitProseEntry>,
    pub notes: Vec<String>,
}

pub fn audit_qubit_sweep(
    records: &[SweepRecord],
    gme_hist: &ClassHistogram,
    scott_hist: &ClassHistogram,
) -> QubitSweepAudit {
    let describe = |hist: &ClassHistogram| -> (Vec<String>, Vec<u64>, String, f64, u64) {
        let values: Vec<String> = hist
            .entries
            .iter()
            .map(|e| match &e.value {
                ClassValue::Exact(v) => v.to_string(),
                ClassValue::Real(v) => format!("{v}"),
            })
            .collect();
        let counts: Vec<u64> = hist.entries.iter().map(|e| e.count).collect();
        let last = hist.entries.last().expect("nonempty histogram");
        let max_value = values.last().unwrap().clone();
        (values, counts, max_value, last.value.to_f64(), last.representative)
    };

    let (gv, gc, gmax, gmaxf, grep) = describe(gme_hist);
    let (sv, sc, smax, smaxf, srep) = describe(scott_hist);

    // strip the prefactors off the maximal class representatives
    let rec_of = |idx: u64| records.iter().find(|r| r.index == idx).expect("representative");
    let g_purities = {
        let r = rec_of(grep);
        exact_purities(2, &r.images, r.sign_bits.unwrap_or(0))
    };
    let s_purities = {
        let r = rec_of(srep);
        exact_purities(2, &r.images, r.sign_bits.unwrap_or(0))
    };
    let pair_product = exact_pair_product(&g_purities);
    let scott_bare = exact_scott2_unnormalized(&s_purities);

    let entries = vec![
        QubitProseEntry {
            measure: "gme_ame".into(),
            class_values: gv,
            class_counts: gc,
            max_value: gmax,
            max_value_float: gmaxf,
            without_prefactor: pair_product.to_string(),
            without_prefactor_float: pair_product.to_f64(),
            reported_max: QUBIT_GME_AME_REPORTED_MAX,
        },
        QubitProseEntry {
            measure: "scott2".into(),
            class_values: sv,
            class_counts: sc,
            max_value: smax,
            max_value_float: smaxf,
            without_prefactor: scott_bare.to_string(),
            without_prefactor_float: scott_bare.to_f64(),
            reported_max: QUBIT_SCOTT2_REPORTED_MAX,
        },
    ];
    let notes = vec![
        "normalized maxima are 2/3 (gme_ame) and 8/9 (scott2); the reported 0.3 and 0.7 \
         match the prefactor-stripped values 9/32 = 0.28125 and 2/3 = 0.6667 instead"
            .to_string(),
    ];
    QubitSweepAudit { total: records.len() as u64, entries, notes }
}
