//! Full GCD drivers: repeated half-GCD, plus the classical baselines the
//! half-GCD is checked against.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::aea::{aea, AeaConfig};
use crate::error::AeaError;
use crate::limb_view::{bit_length, to_biguint, LimbBase};
use crate::mat2::Mat2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Aea,
    Euclid,
    Lehmer,
    Binary,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Aea,
        Algorithm::Euclid,
        Algorithm::Lehmer,
        Algorithm::Binary,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Aea => "aea",
            Algorithm::Euclid => "euclid",
            Algorithm::Lehmer => "lehmer",
            Algorithm::Binary => "binary",
        }
    }

    pub fn run(self, u: &BigUint, v: &BigUint) -> GcdOutcome {
        match self {
            Algorithm::Aea => gcd_aea(u, v),
            Algorithm::Euclid => euclid_gcd(u, v),
            Algorithm::Lehmer => lehmer_gcd(u, v),
            Algorithm::Binary => binary_gcd(u, v),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GcdStats {
    /// Division steps on full-size operands.
    pub divisions: u64,
    /// Division steps simulated on leading words or short windows.
    pub word_steps: u64,
    pub halfgcd_rounds: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdOutcome {
    pub g: BigUint,
    /// `(x, y)` with `x·u + y·v = g`.
    pub bezout: Option<(BigInt, BigInt)>,
    pub algorithm: Algorithm,
    pub stats: GcdStats,
}

#[derive(Debug, Clone, Copy)]
pub struct GcdConfig {
    pub base: LimbBase,
    pub bezout: bool,
}

impl Default for GcdConfig {
    fn default() -> Self {
        GcdConfig {
            base: LimbBase::binary(64).expect("64-bit limbs"),
            bezout: false,
        }
    }
}

pub fn verify_transform(m: &Mat2, input: (&BigInt, &BigInt), output: (&BigInt, &BigInt)) -> bool {
    let (x, y) = m.apply(input.0, input.1);
    &x == output.0 && &y == output.1
}

/// GCD by repeated half-GCD with 64-bit limbs.
pub fn gcd_aea(u: &BigUint, v: &BigUint) -> GcdOutcome {
    gcd_aea_with(u, v, &GcdConfig::default()).expect("half-GCD invariant")
}

/// GCD by repeated half-GCD. Operands below `8·W` bits are finished by
/// Lehmer. An `Err` means an internal invariant failed.
pub fn gcd_aea_with(u: &BigUint, v: &BigUint, cfg: &GcdConfig) -> Result<GcdOutcome, AeaError> {
    let start = Instant::now();
    let swapped = u < v;
    let (mut a, mut b) = if swapped {
        (v.clone(), u.clone())
    } else {
        (u.clone(), v.clone())
    };
    let mut cum = Mat2::identity();
    let mut stats = GcdStats::default();
    let word = cfg.base.limb_bits();
    let hcfg = AeaConfig {
        base: cfg.base,
        squeeze: false,
        allow_small: false,
    };

    while !b.is_zero() {
        let n = bit_length(&a);
        if n < 8 * word {
            let track = cfg.bezout.then_some(&mut cum);
            a = lehmer_core(a, b, track, &mut stats);
            b = BigUint::zero();
            break;
        }
        if bit_length(&b) <= n.div_ceil(2) + 1 || b <= BigUint::from(2u32) {
            let (q, r) = a.div_rem(&b);
            if cfg.bezout {
                cum = Mat2::euclid_step(&q).mul(&cum);
            }
            stats.divisions += 1;
            a = std::mem::replace(&mut b, r);
            continue;
        }
        let res = aea(&a, &b, &hcfg)?;
        stats.halfgcd_rounds += 1;
        stats.divisions += res.stats.long_divisions;
        stats.word_steps += res.stats.window_steps;
        if cfg.bezout {
            cum = res.matrix.mul(&cum);
        }
        (a, b) = res.reduced;
    }
    debug_assert!(b.is_zero());

    let bezout = cfg.bezout.then(|| {
        if swapped {
            (cum.b.clone(), cum.a.clone())
        } else {
            (cum.a.clone(), cum.b.clone())
        }
    });
    stats.elapsed = start.elapsed();
    Ok(GcdOutcome {
        g: a,
        bezout,
        algorithm: Algorithm::Aea,
        stats,
    })
}

pub fn euclid_gcd(u: &BigUint, v: &BigUint) -> GcdOutcome {
    let start = Instant::now();
    let (mut a, mut b) = (u.clone(), v.clone());
    let mut stats = GcdStats::default();
    while !b.is_zero() {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
        stats.divisions += 1;
    }
    stats.elapsed = start.elapsed();
    GcdOutcome {
        g: a,
        bezout: None,
        algorithm: Algorithm::Euclid,
        stats,
    }
}

/// Textbook extended Euclid, carrying both coefficient rows.
pub fn ext_euclid(u: &BigUint, v: &BigUint) -> GcdOutcome {
    let start = Instant::now();
    let mut stats = GcdStats::default();
    let (mut r0, mut r1) = (BigInt::from(u.clone()), BigInt::from(v.clone()));
    let (mut x0, mut y0, mut x1, mut y1) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let (q, r2) = r0.div_rem(&r1);
        let x2 = &x0 - &q * &x1;
        let y2 = &y0 - &q * &y1;
        (r0, r1) = (r1, r2);
        (x0, x1) = (x1, x2);
        (y0, y1) = (y1, y2);
        stats.divisions += 1;
    }
    stats.elapsed = start.elapsed();
    GcdOutcome {
        g: to_biguint(&r0).expect("nonnegative remainder"),
        bezout: Some((x0, y0)),
        algorithm: Algorithm::Euclid,
        stats,
    }
}

pub fn lehmer_gcd(u: &BigUint, v: &BigUint) -> GcdOutcome {
    let start = Instant::now();
    let mut stats = GcdStats::default();
    let (a, b) = if u < v { (v, u) } else { (u, v) };
    let g = lehmer_core(a.clone(), b.clone(), None, &mut stats);
    stats.elapsed = start.elapsed();
    GcdOutcome {
        g,
        bezout: None,
        algorithm: Algorithm::Lehmer,
        stats,
    }
}

/// Lehmer's algorithm on `a ≥ b`, simulating quotients on the leading 64
/// bits. With `track`, every transformation is folded into it.
fn lehmer_core(
    mut a: BigUint,
    mut b: BigUint,
    mut track: Option<&mut Mat2>,
    stats: &mut GcdStats,
) -> BigUint {
    while !b.is_zero() {
        if a.bits() <= 64 && track.is_none() {
            let (mut x, mut y) = (a.to_u64().unwrap_or(0), b.to_u64().unwrap_or(0));
            while y != 0 {
                (x, y) = (y, x % y);
                stats.divisions += 1;
            }
            return BigUint::from(x);
        }
        let shift = a.bits().saturating_sub(64);
        let mut ah = i128::from((&a >> shift).to_u64().unwrap_or(0));
        let mut bh = i128::from((&b >> shift).to_u64().unwrap_or(0));
        let (mut ca, mut cb, mut cc, mut cd) = (1i128, 0i128, 0i128, 1i128);
        let mut steps = 0u64;
        if shift > 0 {
            while bh + cc != 0 && bh + cd != 0 {
                let q = (ah + ca) / (bh + cc);
                if q != (ah + cb) / (bh + cd) {
                    break;
                }
                (ca, cc) = (cc, ca - q * cc);
                (cb, cd) = (cd, cb - q * cd);
                (ah, bh) = (bh, ah - q * bh);
                steps += 1;
            }
        }
        if cb == 0 {
            let (q, r) = a.div_rem(&b);
            if let Some(m) = track.as_deref_mut() {
                *m = Mat2::euclid_step(&q).mul(m);
            }
            stats.divisions += 1;
            a = std::mem::replace(&mut b, r);
            continue;
        }
        stats.word_steps += steps;
        let step = Mat2::new(ca.into(), cb.into(), cc.into(), cd.into());
        let (na, nb) = step.apply_unsigned(&a, &b);
        a = to_biguint(&na).expect("Lehmer cofactors keep a nonnegative");
        b = to_biguint(&nb).expect("Lehmer cofactors keep b nonnegative");
        if let Some(m) = track.as_deref_mut() {
            *m = step.mul(m);
        }
    }
    a
}

/// Stein's binary GCD.
pub fn binary_gcd(u: &BigUint, v: &BigUint) -> GcdOutcome {
    let start = Instant::now();
    let mut stats = GcdStats::default();
    let g = if u.is_zero() {
        v.clone()
    } else if v.is_zero() {
        u.clone()
    } else {
        let (mut a, mut b) = (u.clone(), v.clone());
        let za = a.trailing_zeros().unwrap_or(0);
        let zb = b.trailing_zeros().unwrap_or(0);
        let k = za.min(zb);
        a >>= za;
        b >>= zb;
        loop {
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            b -= &a;
            stats.word_steps += 1;
            if b.is_zero() {
                break a << k;
            }
            let z = b.trailing_zeros().unwrap_or(0);
            b >>= z;
        }
    };
    stats.elapsed = start.elapsed();
    GcdOutcome {
        g,
        bezout: None,
        algorithm: Algorithm::Binary,
        stats,
    }
}
