use std::collections::HashMap;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use aea_core::Algorithm;
use clap::{Args, ValueEnum};
use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Random,
    Fibonacci,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Operand sizes in bits, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "4096")]
    pub bits: Vec<u64>,
    /// Pairs per size.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "aea,euclid,lehmer,binary"
    )]
    pub algos: Vec<String>,
    /// Timed runs per pair, after one untimed warmup.
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = InputKind::Random)]
    pub input: InputKind,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Serialize)]
struct Row {
    algorithm: &'static str,
    bits: u64,
    trials: usize,
    median_ns: u128,
    divisions: u64,
    /// Median time over the previous size's median, same algorithm.
    ratio: Option<f64>,
}

/// `count` pairs of `bits`-bit operands, regenerated identically from
/// `(seed, bits)`.
pub fn inputs(kind: InputKind, seed: u64, bits: u64, count: usize) -> Vec<(BigUint, BigUint)> {
    match kind {
        InputKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ bits.rotate_left(32));
            (0..count)
                .map(|_| (rng.gen_biguint(bits), rng.gen_biguint(bits)))
                .collect()
        }
        InputKind::Fibonacci => {
            let (mut a, mut b) = (BigUint::zero(), BigUint::one());
            while b.bits() < bits {
                let c = &a + &b;
                a = std::mem::replace(&mut b, c);
            }
            vec![(b, a); count]
        }
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs.get(xs.len() / 2).copied().unwrap_or_default()
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let algos: Vec<Algorithm> = args
        .algos
        .iter()
        .map(|s| s.parse().map_err(CliError::Usage))
        .collect::<Result<_, _>>()?;
    if args.bits.iter().any(|&b| b < 4) {
        return Err(CliError::Usage("--bits must be at least 4".into()));
    }
    if args.count == 0 || args.trials == 0 {
        return Err(CliError::Usage(
            "--count and --trials must be positive".into(),
        ));
    }

    let mut rows = Vec::new();
    let mut previous: HashMap<Algorithm, Duration> = HashMap::new();
    for &bits in &args.bits {
        let pairs = inputs(args.input, args.seed, bits, args.count);
        for &alg in &algos {
            let mut times = Vec::new();
            let mut divisions = 0;
            let mut answer = Vec::new();
            for (u, v) in &pairs {
                let out = alg.run(u, v);
                divisions += out.stats.divisions;
                answer.push(out.g);
                for _ in 0..args.trials {
                    let t = Instant::now();
                    let _ = alg.run(u, v);
                    times.push(t.elapsed());
                }
            }
            if let Some(first) = algos.first().filter(|&&a| a != alg) {
                let reference: Vec<BigUint> =
                    pairs.iter().map(|(u, v)| first.run(u, v).g).collect();
                if reference != answer {
                    return Err(CliError::Invariant(format!(
                        "{alg} disagrees with {first} at {bits} bits"
                    )));
                }
            }
            let med = median(times);
            let ratio = previous
                .insert(alg, med)
                .map(|p| med.as_secs_f64() / p.as_secs_f64().max(1e-9));
            rows.push(Row {
                algorithm: alg.as_str(),
                bits,
                trials: args.trials,
                median_ns: med.as_nanos(),
                divisions,
                ratio,
            });
        }
    }
    emit(&rows, args.format)
}

fn emit(rows: &[Row], format: Format) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string(rows).expect("plain data"))?;
        }
        Format::Csv => {
            writeln!(out, "algorithm,bits,trials,median_ns,divisions,ratio")?;
            for r in rows {
                let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.algorithm, r.bits, r.trials, r.median_ns, r.divisions, ratio
                )?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "{:<8} {:>8} {:>14} {:>10} {:>7}",
                "algo", "bits", "median", "divisions", "ratio"
            )?;
            for r in rows {
                let ratio = r
                    .ratio
                    .map(|x| format!("{x:.2}"))
                    .unwrap_or_else(|| "-".into());
                let med = format!("{:?}", Duration::from_nanos(r.median_ns as u64));
                writeln!(
                    out,
                    "{:<8} {:>8} {:>14} {:>10} {:>7}",
                    r.algorithm, r.bits, med, r.divisions, ratio
                )?;
            }
        }
    }
    Ok(())
}
