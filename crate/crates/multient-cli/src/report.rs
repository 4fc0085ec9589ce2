//! Measure reports rendered as versioned JSON.

use multient::measures::MeasureReport;
use serde_json::{json, Map, Value};

use crate::fmt::round_sig12;
use crate::statefile::FORMAT_HEADER;

fn subset_key(subset: &[usize]) -> String {
    subset.iter().map(ToString::to_string).collect()
}

/// Render a report with all reals rounded to 12 significant digits.
/// Keys come out sorted, so identical reports render identically.
pub fn render_report(report: &MeasureReport) -> String {
    let scott: Map<String, Value> = report
        .scott
        .iter()
        .map(|(k, v)| (k.to_string(), json!(round_sig12(*v))))
        .collect();
    let purities: Map<String, Value> = report
        .purities
        .iter()
        .map(|(subset, v)| (subset_key(subset), json!(round_sig12(*v))))
        .collect();
    let flags: Vec<String> = report.flags.iter().map(ToString::to_string).collect();
    let body = json!({
        "n": report.n,
        "d": report.d,
        "gme_ame": round_sig12(report.gme_ame),
        "scott": scott,
        "polygon": report.polygon.map(round_sig12),
        "purities": purities,
        "flags": flags,
    });
    format!("{FORMAT_HEADER}\n{}\n", serde_json::to_string_pretty(&body).expect("report json"))
}
