use std::fmt::Write as _;
use std::fs;

use serde::Serialize;
use serde_json::json;

use cqpolar::channels::{
    bob_channel, build_channel, capacity_ratio_curve, check_classical_environment, eve_channel,
    symmetric_coherent_info, symmetric_holevo, CapacityRow, RowStatus,
};
use cqpolar::polarize::{
    evolve_scalar, fractions_of, trajectory_csv, EvolveMode, ScalarTracker, MAX_LEVEL,
};
use cqpolar::qpolar::{
    monte_carlo_classical, monte_carlo_quantum, run_coherent_protocol, select_phases,
};
use cqpolar::report::{fmt_opt, fmt_real, to_json_string};
use cqpolar::wiretap::{
    exact_leakage, partition_channels, partition_csv, reliability_bound, security_report,
    PartitionTrackers,
};
use cqpolar::{ChannelFamilySpec, CqChannel, IsometricChannel, PolarPartition, Tolerances};
use cqpolar::{SetLabel, WiretapCode};

use crate::suites;
use crate::{
    CapacityArgs, ChannelInfoArgs, Common, Failure, Format, PartitionArgs, PolarizeArgs, SimMode,
    SimulateArgs, VerifyArgs,
};

type Outcome = Result<(), Failure>;

fn parse_spec(text: &str) -> Result<ChannelFamilySpec, Failure> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return Ok(ChannelFamilySpec::from_json(trimmed)?);
    }
    let body = fs::read_to_string(text)
        .map_err(|e| Failure::Usage(format!("cannot read spec file '{text}': {e}")))?;
    Ok(ChannelFamilySpec::from_json(&body)?)
}

pub fn spec_of(c: &Common) -> Result<ChannelFamilySpec, Failure> {
    require_spec(c)
}

fn require_spec(c: &Common) -> Result<ChannelFamilySpec, Failure> {
    let text = c
        .spec
        .as_deref()
        .ok_or_else(|| Failure::Usage("--spec is required".into()))?;
    parse_spec(text)
}

/// Level n from --n or --blocklength.
fn level(c: &Common) -> Result<usize, Failure> {
    let n = match (c.n, c.blocklength) {
        (Some(n), _) => n,
        (None, Some(len)) => {
            if len == 0 || !len.is_power_of_two() {
                return Err(Failure::Usage(format!(
                    "blocklength {len} is not a power of two"
                )));
            }
            len.trailing_zeros() as usize
        }
        (None, None) => return Err(Failure::Usage("--n or --blocklength is required".into())),
    };
    if n > MAX_LEVEL {
        return Err(Failure::Core(cqpolar::Error::Resource(format!(
            "level {n} exceeds the limit {MAX_LEVEL}"
        ))));
    }
    Ok(n)
}

fn check_beta(beta: f64) -> Result<(), Failure> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Failure::Usage(format!("beta {beta} outside (0, 1)")));
    }
    Ok(())
}

fn emit(c: &Common, text: &str) -> Outcome {
    match &c.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn format_or(c: &Common, default: Format) -> Format {
    c.format.unwrap_or(default)
}

fn key_value_csv(rows: &[(&str, String)]) -> String {
    let mut s = String::from("quantity,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k},{v}");
    }
    s
}

pub fn channel_info(a: &ChannelInfoArgs) -> Outcome {
    let spec = require_spec(&a.common)?;
    let ch = build_channel(&spec)?;
    let (bob, eve) = (bob_channel(&ch)?, eve_channel(&ch)?);
    let i_w = symmetric_holevo(&bob)?;
    let i_e = symmetric_holevo(&eve)?;
    let ic = symmetric_coherent_info(&ch)?;
    let (f_w, f_e) = (bob.fidelity()?, eve.fidelity()?);
    let comm = check_classical_environment(&ch)?;
    match format_or(&a.common, Format::Json) {
        Format::Json => emit(
            &a.common,
            &to_json_string(&json!({
                "spec": spec,
                "holevo_bob": i_w,
                "holevo_eve": i_e,
                "coherent_info": ic,
                "fidelity_bob": f_w,
                "fidelity_eve": f_e,
                "eve_commutator_norm": comm,
                "degradable": spec.is_degradable(),
                "degradable_range": spec.degradable_range(),
            })),
        ),
        Format::Csv => emit(
            &a.common,
            &key_value_csv(&[
                ("holevo_bob", fmt_real(i_w)),
                ("holevo_eve", fmt_real(i_e)),
                ("coherent_info", fmt_real(ic)),
                ("fidelity_bob", fmt_real(f_w)),
                ("fidelity_eve", fmt_real(f_e)),
                ("eve_commutator_norm", fmt_real(comm)),
                ("degradable", spec.is_degradable().to_string()),
            ]),
        ),
    }
}

fn default_mode(w: &CqChannel) -> Result<EvolveMode, Failure> {
    Ok(if w.is_commuting(&Tolerances::default())? {
        EvolveMode::ExactClassical
    } else {
        EvolveMode::FidelityBounds
    })
}

#[derive(Serialize)]
struct TrackerRow {
    index: usize,
    path: String,
    lower_log2: f64,
    upper_log2: f64,
    exact_value: Option<f64>,
}

fn tracker_rows(trackers: &[ScalarTracker]) -> Vec<TrackerRow> {
    trackers
        .iter()
        .map(|t| TrackerRow {
            index: t.index,
            path: t.path_string(),
            lower_log2: t.lower.log2(),
            upper_log2: t.upper.log2(),
            exact_value: t.value(),
        })
        .collect()
}

pub fn polarize(a: &PolarizeArgs) -> Outcome {
    let c = &a.common;
    let spec = require_spec(c)?;
    let n = level(c)?;
    check_beta(c.beta)?;
    let bob = bob_channel(&build_channel(&spec)?)?;
    let mode = match &a.mode {
        Some(m) => EvolveMode::parse(m)?,
        None => default_mode(&bob)?,
    };
    let trackers = evolve_scalar(&bob, n, mode)?;
    let fractions = fractions_of(&trackers, c.beta);
    match format_or(c, Format::Csv) {
        Format::Csv => {
            eprintln!(
                "good={} poor={} undecided={}",
                fmt_real(fractions.good),
                fmt_real(fractions.poor),
                fmt_real(fractions.undecided)
            );
            emit(c, &trajectory_csv(&trackers))
        }
        Format::Json => emit(
            c,
            &to_json_string(&json!({
                "spec": spec,
                "n": n,
                "beta": c.beta,
                "mode": mode,
                "fractions": fractions,
                "trackers": tracker_rows(&trackers),
            })),
        ),
    }
}

struct Setup {
    spec: ChannelFamilySpec,
    channel: IsometricChannel,
    bob: CqChannel,
    partition: PolarPartition,
    trackers: PartitionTrackers,
    n: usize,
}

fn setup(c: &Common, eve_spec: Option<&str>) -> Result<Setup, Failure> {
    let spec = require_spec(c)?;
    let n = level(c)?;
    check_beta(c.beta)?;
    let channel = build_channel(&spec)?;
    let bob = bob_channel(&channel)?;
    let eve = match eve_spec {
        Some(text) => bob_channel(&build_channel(&parse_spec(text)?)?)?,
        None => eve_channel(&channel)?,
    };
    let (partition, trackers) = partition_channels(&bob, &eve, n, c.beta)?;
    Ok(Setup {
        spec,
        channel,
        bob,
        partition,
        trackers,
        n,
    })
}

fn layout_string(p: &PolarPartition) -> String {
    p.labels().iter().map(|l| l.to_string()).collect()
}

pub fn partition(a: &PartitionArgs) -> Outcome {
    let c = &a.common;
    let s = setup(c, a.eve_spec.as_deref())?;
    let code = WiretapCode::new(s.partition.clone(), c.seed);
    let leakage = if a.leakage {
        if a.eve_spec.is_some() {
            return Err(Failure::Usage(
                "--leakage needs Eve's channel derived from --spec".into(),
            ));
        }
        Some(exact_leakage(&code, &s.channel)?)
    } else {
        None
    };
    let report = security_report(&s.partition, &s.trackers, leakage)?;
    match format_or(c, Format::Csv) {
        Format::Csv => emit(c, &partition_csv(&s.partition, &s.trackers)?),
        Format::Json => {
            let p = &s.partition;
            emit(
                c,
                &to_json_string(&json!({
                    "spec": s.spec,
                    "seed": c.seed,
                    "n": s.n,
                    "beta": c.beta,
                    "layout": layout_string(p),
                    "a": p.set(SetLabel::A),
                    "b": p.set(SetLabel::B),
                    "x": p.set(SetLabel::X),
                    "y": p.set(SetLabel::Y),
                    "key": code.key,
                    "report": report,
                    "warnings": p.warnings,
                })),
            )
        }
    }
}

pub fn simulate(a: &SimulateArgs) -> Outcome {
    let c = &a.common;
    let s = setup(c, None)?;
    let trials = c.trials.unwrap_or(1000);
    let code = WiretapCode::new(s.partition.clone(), c.seed);
    if a.mode == SimMode::Coherent {
        let phases = select_phases(&s.channel, &code)?;
        let trace = run_coherent_protocol(&s.channel, &code, &phases)?;
        return match format_or(c, Format::Json) {
            Format::Json => emit(
                c,
                &to_json_string(&json!({
                    "mode": "coherent",
                    "seed": c.seed,
                    "beta": c.beta,
                    "trace": trace,
                    "bound_holds": trace.bound_holds(),
                })),
            ),
            Format::Csv => emit(
                c,
                &key_value_csv(&[
                    ("seed", c.seed.to_string()),
                    ("layout", layout_string(&s.partition)),
                    ("overlap", fmt_real(trace.overlap)),
                    ("leakage", fmt_real(trace.leakage)),
                    ("final_fidelity", fmt_real(trace.final_fidelity)),
                    ("fidelity_bound", fmt_real(trace.fidelity_bound)),
                    ("ebit_count", trace.ebit_count.to_string()),
                    ("bound_holds", trace.bound_holds().to_string()),
                ]),
            ),
        };
    }
    let run = match a.mode {
        SimMode::ClassicalSc => monte_carlo_classical(&s.bob, &code, trials, c.seed)?,
        _ => monte_carlo_quantum(&s.bob, &code, trials, c.seed)?,
    };
    let bound = reliability_bound(&s.partition, &s.trackers.bob)?;
    match format_or(c, Format::Json) {
        Format::Csv => {
            eprintln!("{}", run.summary());
            emit(c, &run.to_csv())
        }
        Format::Json => emit(
            c,
            &to_json_string(&json!({
                "mode": if a.mode == SimMode::ClassicalSc { "classical_sc" } else { "quantum_sc" },
                "spec": s.spec,
                "seed": c.seed,
                "n": s.n,
                "beta": c.beta,
                "layout": layout_string(&s.partition),
                "trials": run.trials,
                "errors": run.errors,
                "error_rate": run.error_rate,
                "reliability_bound": bound,
                "within_bound": run.error_rate <= bound,
            })),
        ),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("malformed grid '{text}'"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(bad());
        }
        return Ok((0..count).map(|k| start + k as f64 * step).collect());
    }
    text.split(',').map(num).collect()
}

fn capacity_csv(rows: &[CapacityRow]) -> String {
    let mut s = String::from("parameter,q_true,ic_sym,ratio,status\n");
    for r in rows {
        let status = match r.status {
            RowStatus::Ok => "ok",
            RowStatus::NonDegradable => "non_degradable",
            RowStatus::NonPositiveCoherentInfo => "non_positive_coherent_info",
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_real(r.parameter),
            fmt_opt(r.q_true),
            fmt_real(r.ic_sym),
            fmt_opt(r.ratio),
            status
        );
    }
    s
}

pub fn capacity(a: &CapacityArgs) -> Outcome {
    let c = &a.common;
    let spec = require_spec(c)?;
    let grid = parse_grid(&a.grid)?;
    let rows = capacity_ratio_curve(&spec, &grid)?;
    match format_or(c, Format::Csv) {
        Format::Csv => emit(c, &capacity_csv(&rows)),
        Format::Json => emit(
            c,
            &to_json_string(&json!({ "family": spec.family, "rows": rows })),
        ),
    }
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let c = &a.common;
    let report = suites::run(a.suite, c)?;
    let text = match format_or(c, Format::Json) {
        Format::Json => to_json_string(&report),
        Format::Csv => report.to_csv(),
    };
    emit(c, &text)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::SuiteFailed(format!(
            "{} of {} checks failed",
            report.failures, report.checks
        )))
    }
}
