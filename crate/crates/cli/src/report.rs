use std::io::{self, Write};

use aea_core::{
    aea_streaming, bit_length, gcd_aea_with, prefix_violations, verify_transform, AeaConfig,
    AeaError, GcdConfig, HalfGcdResult, Mat2, TraceEvent,
};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::json;

use crate::{input, BaseOpts, CliError, Format, HalfArgs, PairArgs};

fn matrix_strings(m: &Mat2) -> [String; 4] {
    m.entries().map(|x| x.to_string())
}

fn map_aea(e: AeaError) -> CliError {
    match e {
        AeaError::Invariant(s) => CliError::Invariant(s),
        other => CliError::Usage(other.to_string()),
    }
}

#[derive(Serialize)]
struct GcdReport {
    g: String,
    bezout: Option<[String; 2]>,
    algorithm: &'static str,
    divisions: u64,
    halfgcd_rounds: u64,
}

pub fn gcd(pair: &PairArgs, base: &BaseOpts, bezout: bool, format: Format) -> Result<(), CliError> {
    let (u, v) = input::pair(&pair.values, pair.file.as_deref())?;
    let cfg = GcdConfig {
        base: base.resolve()?,
        bezout,
    };
    let out = gcd_aea_with(&u, &v, &cfg).map_err(map_aea)?;
    if let Some((x, y)) = &out.bezout {
        let lhs = x * BigInt::from(u.clone()) + y * BigInt::from(v.clone());
        if lhs != BigInt::from(out.g.clone()) {
            return Err(CliError::Invariant(format!(
                "Bezout check failed: {x}·u + {y}·v != {}",
                out.g
            )));
        }
    }
    let mut stdout = io::stdout().lock();
    match format {
        Format::Json => {
            let report = GcdReport {
                g: out.g.to_string(),
                bezout: out
                    .bezout
                    .as_ref()
                    .map(|(x, y)| [x.to_string(), y.to_string()]),
                algorithm: out.algorithm.as_str(),
                divisions: out.stats.divisions,
                halfgcd_rounds: out.stats.halfgcd_rounds,
            };
            writeln!(
                stdout,
                "{}",
                serde_json::to_string(&report).expect("plain data")
            )?;
        }
        _ => {
            writeln!(stdout, "{}", out.g)?;
            if let Some((x, y)) = &out.bezout {
                writeln!(stdout, "x = {x}")?;
                writeln!(stdout, "y = {y}")?;
            }
        }
    }
    Ok(())
}

fn half_config(args: &HalfArgs) -> Result<AeaConfig, CliError> {
    Ok(AeaConfig {
        base: args.base.resolve()?,
        squeeze: !args.no_squeeze,
        allow_small: args.small,
    })
}

fn operands(args: &HalfArgs, cfg: &AeaConfig) -> Result<(BigUint, BigUint), CliError> {
    let (u, v) = input::pair(&args.pair.values, args.pair.file.as_deref())?;
    if u < v || v <= BigUint::from(2u32) {
        return Err(CliError::Usage("half-GCD needs u >= v > 2".into()));
    }
    let need = 8 * cfg.base.limb_bits();
    if !cfg.allow_small && bit_length(&u) < need {
        return Err(CliError::Usage(format!(
            "u has {} bits, below 8 words ({need}); pass --small to run anyway",
            bit_length(&u)
        )));
    }
    Ok((u, v))
}

/// The matrix must carry the input to the reduced pair before anything is
/// printed about it.
fn verified(u: &BigUint, v: &BigUint, r: &HalfGcdResult) -> Result<(), CliError> {
    let input = (BigInt::from(u.clone()), BigInt::from(v.clone()));
    let output = (
        BigInt::from(r.reduced.0.clone()),
        BigInt::from(r.reduced.1.clone()),
    );
    if verify_transform(&r.matrix, (&input.0, &input.1), (&output.0, &output.1)) {
        return Ok(());
    }
    Err(CliError::Invariant(format!(
        "matrix {} does not map ({u}, {v}) to ({}, {})",
        r.matrix, r.reduced.0, r.reduced.1
    )))
}

pub fn hgcd(args: &HalfArgs, format: Format) -> Result<(), CliError> {
    let cfg = half_config(args)?;
    let (u, v) = operands(args, &cfg)?;
    let r = aea_streaming(&u, &v, &cfg, |_| {}).map_err(map_aea)?;
    verified(&u, &v, &r)?;
    let mut stdout = io::stdout().lock();
    match format {
        Format::Json => {
            let report = json!({
                "matrix": matrix_strings(&r.matrix),
                "reduced": [r.reduced.0.to_string(), r.reduced.1.to_string()],
                "passes": r.stats.passes,
                "ile_calls": r.stats.ile_calls,
                "irregular": r.stats.irregular,
            });
            writeln!(stdout, "{report}")?;
        }
        _ => {
            writeln!(stdout, "matrix {}", r.matrix)?;
            writeln!(stdout, "reduced {} {}", r.reduced.0, r.reduced.1)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct EventLine {
    step: u64,
    kind: &'static str,
    level: u32,
    matrix: Option<[String; 4]>,
    window: Option<[u64; 2]>,
}

#[derive(Serialize)]
struct Summary {
    kind: &'static str,
    matrix: [String; 4],
    reduced: [String; 2],
    events: usize,
    prefix_violations: usize,
}

fn event_json(e: &TraceEvent) -> String {
    let line = EventLine {
        step: e.step,
        kind: e.kind.as_str(),
        level: e.level,
        matrix: e.matrix.as_ref().map(matrix_strings),
        window: e.window.map(|(i, j)| [i, j]),
    };
    serde_json::to_string(&line).expect("plain data")
}

pub fn trace(args: &HalfArgs) -> Result<(), CliError> {
    let cfg = half_config(args)?;
    let (u, v) = operands(args, &cfg)?;
    let mut stdout = io::stdout().lock();
    let mut write_err = None;
    let result = aea_streaming(&u, &v, &cfg, |e| {
        if write_err.is_none() {
            let line = writeln!(stdout, "{}", event_json(e)).and_then(|_| stdout.flush());
            write_err = line.err();
        }
    });
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let r = result.map_err(map_aea)?;
    verified(&u, &v, &r)?;
    let summary = Summary {
        kind: "summary",
        matrix: matrix_strings(&r.matrix),
        reduced: [r.reduced.0.to_string(), r.reduced.1.to_string()],
        events: r.trace.len(),
        prefix_violations: prefix_violations(&u, &v, &r.trace).len(),
    };
    writeln!(
        stdout,
        "{}",
        serde_json::to_string(&summary).expect("plain data")
    )?;
    Ok(())
}
