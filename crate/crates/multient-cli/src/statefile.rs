//! State files: a versioned header line followed by a JSON document
//!
//! ```text
//! # multient v1
//! {"n": 2, "d": 2, "amplitudes": [[0.7071, 0.0], ...]}
//! ```
//!
//! Readers skip leading `#` comment lines; amplitudes are written in full
//! precision so a round trip reproduces the state bit-for-bit.

use multient::{Error, PureState, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Version header carried by every file the CLI emits.
pub const FORMAT_HEADER: &str = "# multient v1";

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub d: usize,
    /// [re, im] pairs of length d^n.
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &PureState) -> Self {
        Self {
            n: state.n(),
            d: state.d(),
            amplitudes: state.amps().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<PureState> {
        for pair in &self.amplitudes {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(Error::ZeroNorm);
            }
        }
        let amps: Vec<Complex64> =
            self.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        PureState::new(self.n, self.d, amps)
    }
}

/// Serialize with the version header.
pub fn render(file: &StateFile) -> String {
    let body = serde_json::to_string_pretty(file).expect("statefile serializes");
    format!("{FORMAT_HEADER}\n{body}\n")
}

/// Parse a state file, skipping leading comment lines.
pub fn parse(text: &str) -> std::result::Result<StateFile, String> {
    let body: String = text
        .lines()
        .skip_while(|line| line.trim_start().starts_with('#') || line.trim().is_empty())
        .collect::<Vec<_>>()
        .join("\n");
    serde_json::from_str(&body).map_err(|e| format!("malformed state file: {e}"))
}
