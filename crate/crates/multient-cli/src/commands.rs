//! Implementations of the four subcommands.

use std::fs;
use std::path::Path;

use multient::audit::{
    audit_against_reference, audit_qubit_sweep, AuditReport, QUTRIT_GME_AME_REFERENCE,
    QUTRIT_SCOTT2_REFERENCE,
};
use multient::catalog::{self, NamedStateSpec, Params};
use multient::chmap::op_to_state;
use multient::measures::{measure_report_with, scott};
use multient::perm::{
    classify, sweep, ClassHistogram, ClassValue, ClassifyMode, EnphaseMode, SweepConfig,
    SweepMeasure, SweepRecord,
};
use multient::polygon::{polygon_measure, SolverConfig};
use multient::weyl::{
    cartan_unitary, gme_ame_closed_form, sample_chamber, scott2_closed_form, WeylPoint,
};
use multient::PureState;
use num_complex::Complex64;

use crate::error::{CliError, CliResult};
use crate::fmt::sig12;
use crate::report::render_report;
use crate::statefile::{self, StateFile, FORMAT_HEADER};
use crate::{
    CatalogArgs, EdgeArg, MeasureArgs, PermArgs, SolverArgs, WeylArgs, WeylMode,
};

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

impl SolverArgs {
    fn config(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            residual_tol: self.solver_residual_tol,
            max_restarts: self.solver_max_restarts,
            max_iterations: SolverConfig::default().max_iterations,
            seed,
        }
    }
}

/// Parse "a=1,b=-0.5" into a complex parameter map.
fn parse_params(text: &Option<String>) -> CliResult<Params> {
    let mut out = Params::new();
    let Some(text) = text else {
        return Ok(out);
    };
    for piece in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("bad parameter `{piece}`, expected k=v")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| CliError::input(format!("bad value for `{key}`: {e}")))?;
        out.insert(key.trim().to_string(), Complex64::new(value, 0.0));
    }
    Ok(out)
}

fn parse_measure_names(text: &str) -> CliResult<Vec<String>> {
    let names: Vec<String> =
        text.split(',').map(|m| m.trim().to_string()).filter(|m| !m.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::input("no measures requested"));
    }
    for name in &names {
        if !["gme_ame", "scott", "polygon"].contains(&name.as_str()) {
            return Err(CliError::input(format!(
                "unknown measure `{name}` (expected gme_ame, scott, polygon)"
            )));
        }
    }
    Ok(names)
}

// ---------------------------------------------------------------- measure

pub fn cmd_measure(args: &MeasureArgs) -> CliResult<()> {
    let measures = parse_measure_names(&args.measures)?;
    let state = load_state(args)?;
    let want_polygon = measures.iter().any(|m| m == "polygon");
    if want_polygon && (state.n() != 4 || state.d() != 2) {
        return Err(CliError::input(format!(
            "polygon measure needs a four-qubit state, input has n={}, d={}",
            state.n(),
            state.d()
        )));
    }
    let solver = args.solver.config(args.seed);
    let report = measure_report_with(&state, want_polygon, &solver)?;
    let text = render_report(&report);
    match &args.out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_state(args: &MeasureArgs) -> CliResult<PureState> {
    match (&args.input, &args.named) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            let file = statefile::parse(&text).map_err(CliError::Input)?;
            Ok(file.into_state()?)
        }
        (None, Some(name)) => {
            let spec = NamedStateSpec {
                name: name.clone(),
                params: parse_params(&args.params)?,
                n: args.n,
                d: args.d,
            };
            Ok(catalog::named_state(&spec)?)
        }
        _ => Err(CliError::input("exactly one of --input and --named is required")),
    }
}

// ------------------------------------------------------------------- weyl

pub fn cmd_weyl(args: &WeylArgs) -> CliResult<()> {
    if args.samples == 0 {
        return Err(CliError::input("--samples must be at least 1"));
    }
    let points: Vec<WeylPoint> = match args.mode {
        WeylMode::Sweep => sample_chamber(args.samples, args.seed),
        WeylMode::Edge => {
            let edge = args
                .edge
                .ok_or_else(|| CliError::input("--edge is required with --mode edge"))?;
            edge_points(edge, args.samples)
        }
    };
    let solver = args.solver.config(args.seed);
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str("x,y,z,gme_ame_numeric,gme_ame_closed,scott2_numeric,scott2_closed,polygon\n");
    for p in &points {
        let state = op_to_state(&cartan_unitary(p))?;
        let gme_numeric = multient::measures::gme_ame(&state)?;
        let scott_numeric = scott(&state, 2)?;
        let polygon = polygon_measure(&state, &solver)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            sig12(p.x()),
            sig12(p.y()),
            sig12(p.z()),
            sig12(gme_numeric),
            sig12(gme_ame_closed_form(p)),
            sig12(scott_numeric),
            sig12(scott2_closed_form(p)),
            sig12(polygon),
        ));
    }
    write_text(&args.csv, &out)?;
    println!("wrote {} rows to {}", points.len(), args.csv.display());
    Ok(())
}

fn edge_points(edge: EdgeArg, samples: usize) -> Vec<WeylPoint> {
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    (0..samples)
        .map(|i| {
            let t = if samples == 1 {
                0.0
            } else {
                quarter_pi * i as f64 / (samples - 1) as f64
            };
            match edge {
                EdgeArg::LocalCnot => WeylPoint::new(t, 0.0, 0.0),
                EdgeArg::SwapDcnot => WeylPoint::new(quarter_pi, quarter_pi, t),
            }
            .expect("edge points lie in the chamber")
        })
        .collect()
}

// ------------------------------------------------------------------- perm

pub fn cmd_perm(args: &PermArgs) -> CliResult<()> {
    let measures = perm_measures(&args.measures)?;
    let enphase = if args.enphase == crate::EnphaseArg::Binary {
        if args.d != 2 {
            return Err(CliError::input("--enphase binary is only available with --d 2"));
        }
        EnphaseMode::Binary
    } else {
        EnphaseMode::None
    };
    if measures.contains(&SweepMeasure::Polygon) && args.d != 2 {
        return Err(CliError::input("polygon is only available with --d 2"));
    }
    let cfg = SweepConfig {
        threads: resolve_threads(args.threads),
        solver: args.solver.config(args.seed),
    };
    let records = sweep(args.d, &measures, enphase, &cfg)?;
    println!("swept {} records (d = {})", records.len(), args.d);

    let mut histograms: Vec<(SweepMeasure, ClassHistogram)> = Vec::new();
    for &m in &measures {
        let mode = match m {
            SweepMeasure::Polygon => ClassifyMode::Tol(args.class_tol),
            _ => ClassifyMode::Exact,
        };
        let hist = classify(&records, m, mode)?;
        println!("{}: {} classes", m.name(), hist.entries.len());
        histograms.push((m, hist));
    }

    if let Some(path) = &args.csv {
        write_text(path, &records_csv(&records, &measures, enphase))?;
    }
    if let Some(path) = &args.classes {
        write_text(path, &classes_csv(&histograms))?;
    }
    if let Some(path) = &args.audit {
        let audit = build_audit(args.d, &records, &histograms)?;
        write_text(path, &audit)?;
    }
    Ok(())
}

fn perm_measures(text: &str) -> CliResult<Vec<SweepMeasure>> {
    parse_measure_names(text)?
        .iter()
        .map(|name| match name.as_str() {
            "gme_ame" => Ok(SweepMeasure::GmeAme),
            "scott" => Ok(SweepMeasure::Scott2),
            "polygon" => Ok(SweepMeasure::Polygon),
            other => Err(CliError::input(format!("unknown measure `{other}`"))),
        })
        .collect()
}

fn resolve_threads(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var("ENT_THREADS").ok().and_then(|v| v.parse().ok())
    })
}

fn records_csv(
    records: &[SweepRecord],
    measures: &[SweepMeasure],
    enphase: EnphaseMode,
) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str("index,images");
    if enphase == EnphaseMode::Binary {
        out.push_str(",signs");
    }
    if let [single] = measures {
        if *single == SweepMeasure::Polygon {
            out.push_str(",value_float");
        } else {
            out.push_str(",value_num,value_den,value_float");
        }
    } else {
        for m in measures {
            match m {
                SweepMeasure::Polygon => out.push_str(",polygon_float"),
                _ => {
                    let n = m.name();
                    out.push_str(&format!(",{n}_num,{n}_den,{n}_float"));
                }
            }
        }
    }
    out.push('\n');
    for rec in records {
        let images: Vec<String> = rec.images.iter().map(ToString::to_string).collect();
        out.push_str(&format!("{},{}", rec.index, images.join(";")));
        if enphase == EnphaseMode::Binary {
            out.push_str(&format!(",{}", rec.sign_bits.unwrap_or(0)));
        }
        for m in measures {
            match m {
                SweepMeasure::Polygon => {
                    out.push_str(&format!(",{}", sig12(rec.polygon.unwrap_or(f64::NAN))));
                }
                _ => {
                    let v = rec.value_exact(*m).expect("exact value swept");
                    out.push_str(&format!(
                        ",{},{},{}",
                        v.numer(),
                        v.denom(),
                        sig12(v.to_f64())
                    ));
                }
            }
        }
        out.push('\n');
    }
    out
}

fn classes_csv(histograms: &[(SweepMeasure, ClassHistogram)]) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    let single = histograms.len() == 1;
    if single {
        out.push_str("value_num,value_den,value_float,count,representative\n");
    } else {
        out.push_str("measure,value_num,value_den,value_float,count,representative\n");
    }
    for (measure, hist) in histograms {
        for entry in &hist.entries {
            if !single {
                out.push_str(measure.name());
                out.push(',');
            }
            match &entry.value {
                ClassValue::Exact(v) => {
                    out.push_str(&format!("{},{},{}", v.numer(), v.denom(), sig12(v.to_f64())));
                }
                ClassValue::Real(v) => out.push_str(&format!(",,{}", sig12(*v))),
            }
            out.push_str(&format!(",{},{}\n", entry.count, entry.representative));
        }
    }
    out
}

fn build_audit(
    d: usize,
    records: &[SweepRecord],
    histograms: &[(SweepMeasure, ClassHistogram)],
) -> CliResult<String> {
    let hist_of = |m: SweepMeasure| histograms.iter().find(|(hm, _)| *hm == m).map(|(_, h)| h);
    let body = if d == 3 {
        let mut audits: Vec<AuditReport> = Vec::new();
        if let Some(h) = hist_of(SweepMeasure::GmeAme) {
            audits.push(audit_against_reference(h, QUTRIT_GME_AME_REFERENCE, "gme_ame"));
        }
        if let Some(h) = hist_of(SweepMeasure::Scott2) {
            audits.push(audit_against_reference(h, QUTRIT_SCOTT2_REFERENCE, "scott2"));
        }
        if audits.is_empty() {
            return Err(CliError::input(
                "--audit needs gme_ame or scott in --measures for d = 3",
            ));
        }
        serde_json::to_value(&audits).expect("audit json")
    } else {
        let (Some(gh), Some(sh)) = (hist_of(SweepMeasure::GmeAme), hist_of(SweepMeasure::Scott2))
        else {
            return Err(CliError::input(
                "--audit needs both gme_ame and scott in --measures for d = 2",
            ));
        };
        serde_json::to_value(audit_qubit_sweep(records, gh, sh)).expect("audit json")
    };
    Ok(format!(
        "{FORMAT_HEADER}\n{}\n",
        serde_json::to_string_pretty(&body).expect("audit json")
    ))
}

// ---------------------------------------------------------------- catalog

pub fn cmd_catalog(args: &CatalogArgs) -> CliResult<()> {
    if args.list == args.emit.is_some() {
        return Err(CliError::input("use exactly one of --list and --emit"));
    }
    if args.list {
        println!("{:<10} {:<12} {:<26} description", "name", "params", "shape");
        for entry in catalog::CATALOG {
            let params = if entry.params.is_empty() {
                "-".to_string()
            } else {
                entry.params.join(",")
            };
            println!("{:<10} {:<12} {:<26} {}", entry.name, params, entry.shape, entry.description);
        }
        return Ok(());
    }
    let name = args.emit.as_ref().expect("checked above");
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| CliError::input("--emit requires --out PATH"))?;
    let spec = NamedStateSpec {
        name: name.clone(),
        params: parse_params(&args.params)?,
        n: args.n,
        d: args.d,
    };
    let state = catalog::named_state(&spec)?;
    write_text(out, &statefile::render(&StateFile::from_state(&state)))?;
    println!("wrote {name} to {}", out.display());
    Ok(())
}

