use std::time::Instant;

use aea_core::{
    aea, bit_length, contract_bits, euclid_gcd, gcd_aea_with, prefix_violations, AeaConfig,
    Algorithm, GcdConfig, LimbBase, Mat2,
};
use clap::Args;
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Random pairs per operand size.
    #[arg(long, default_value_t = 300)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Corrupt the expected value of the named check (tests the harness).
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

type Outcome = Result<(), String>;
type NamedCheck<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn replay(u: u64, v: u64, base: LimbBase, matrix: Mat2, reduced: (u64, u64)) -> Outcome {
    let cfg = AeaConfig {
        base,
        squeeze: true,
        allow_small: true,
    };
    let r = aea(&BigUint::from(u), &BigUint::from(v), &cfg).map_err(|e| e.to_string())?;
    expect(r.matrix == matrix, || {
        format!("matrix {} != {matrix}", r.matrix)
    })?;
    let want = (BigUint::from(reduced.0), BigUint::from(reduced.1));
    expect(r.reduced == want, || {
        format!("pair {:?} != {want:?}", r.reduced)
    })
}

fn random_pairs(seed: u64, bits: u64, count: usize) -> Vec<(BigUint, BigUint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(bits));
    (0..count)
        .map(|_| (rng.gen_biguint(bits), rng.gen_biguint(bits)))
        .collect()
}

fn oracle_agreement(seed: u64, trials: usize) -> Outcome {
    for bits in [64, 256, 1024, 4096] {
        for (u, v) in random_pairs(seed, bits, trials) {
            let g = euclid_gcd(&u, &v).g;
            for alg in Algorithm::ALL {
                expect(alg.run(&u, &v).g == g, || {
                    format!("{alg} wrong on {bits}-bit pair")
                })?;
            }
        }
    }
    Ok(())
}

fn bezout(seed: u64, trials: usize) -> Outcome {
    let cfg = GcdConfig {
        bezout: true,
        ..GcdConfig::default()
    };
    for (u, v) in random_pairs(seed ^ 0xb, 2048, trials) {
        let out = gcd_aea_with(&u, &v, &cfg).map_err(|e| e.to_string())?;
        let (x, y) = out.bezout.ok_or("no coefficients")?;
        let lhs = x * BigInt::from(u) + y * BigInt::from(v);
        expect(lhs == BigInt::from(out.g), || "x·u + y·v != g".into())?;
    }
    Ok(())
}

fn half_gcd_invariants(seed: u64, trials: usize) -> Outcome {
    let cfg = AeaConfig::new(LimbBase::binary(64).expect("valid width"));
    for bits in [1024, 4096] {
        for (u, v) in random_pairs(seed ^ 0x4, bits, trials) {
            let (u, v) = if u >= v { (u, v) } else { (v, u) };
            if bit_length(&u) < 512 || v <= BigUint::from(2u32) {
                continue;
            }
            let r = aea(&u, &v, &cfg).map_err(|e| e.to_string())?;
            let want = (
                BigInt::from(r.reduced.0.clone()),
                BigInt::from(r.reduced.1.clone()),
            );
            expect(r.matrix.apply_unsigned(&u, &v) == want, || {
                "transform".into()
            })?;
            expect(r.matrix.has_unit_det(), || "determinant".into())?;
            expect(
                bit_length(&r.reduced.1) <= contract_bits(bit_length(&u), 64),
                || "size contract".into(),
            )?;
        }
    }
    Ok(())
}

fn prefix(seed: u64, trials: usize) -> Outcome {
    let cfg = AeaConfig::new(LimbBase::binary(64).expect("valid width"));
    for (u, v) in random_pairs(seed ^ 0x6, 2048, trials.div_ceil(10)) {
        let (u, v) = if u >= v { (u, v) } else { (v, u) };
        let r = aea(&u, &v, &cfg).map_err(|e| e.to_string())?;
        let bad = prefix_violations(&u, &v, &r.trace);
        expect(bad.is_empty(), || format!("violations at steps {bad:?}"))?;
    }
    Ok(())
}

fn fibonacci() -> Outcome {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for k in 1..=90 {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
        if k >= 10 {
            for alg in Algorithm::ALL {
                expect(alg.run(&b, &a).g.is_one(), || {
                    format!("{alg} on F{}", k + 1)
                })?;
            }
        }
    }
    Ok(())
}

pub fn run(args: &SelftestArgs) -> Result<(), CliError> {
    let fault = args.inject_fault.as_deref();
    let bump = |name: &str| i64::from(fault == Some(name));
    let b20 = LimbBase::binary(20).expect("valid width");
    let d6 = LimbBase::decimal(6).expect("valid width");
    let (seed, trials) = (args.seed, args.trials);

    let checks: Vec<NamedCheck> = vec![
        (
            "binary-example replay",
            Box::new(move || {
                let m = Mat2::from_i64(
                    -62729 + bump("binary-example replay"),
                    81769,
                    353414,
                    -460685,
                );
                replay(922375420941, 707599307587, b20, m, (1873414, 725479))
            }),
        ),
        (
            "decimal-example replay",
            Box::new(move || {
                let m = Mat2::from_i64(
                    196418 + bump("decimal-example replay"),
                    -317811,
                    -317811,
                    514229,
                );
                replay(956722026041, 591286729879, d6, m, (1346269, 832040))
            }),
        ),
        (
            "oracle agreement",
            Box::new(move || oracle_agreement(seed, trials)),
        ),
        ("bezout identity", Box::new(move || bezout(seed, trials))),
        (
            "half-gcd invariants",
            Box::new(move || half_gcd_invariants(seed, trials)),
        ),
        ("prefix property", Box::new(move || prefix(seed, trials))),
        ("fibonacci pairs", Box::new(fibonacci)),
    ];

    let start = Instant::now();
    let mut first_failure = None;
    for (name, check) in &checks {
        let t = Instant::now();
        match check() {
            Ok(()) => println!("ok    {name} ({:.1?})", t.elapsed()),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                first_failure.get_or_insert_with(|| format!("{name}: {why}"));
            }
        }
    }
    println!("total {:.1?}", start.elapsed());
    match first_failure {
        Some(f) => Err(CliError::Selftest(f)),
        None => Ok(()),
    }
}
