//! ILE: extended Euclid stopped once the remainders reach half size.
//!
//! The a-coefficients follow `a_{i+1} = a_{i−1} − q_i·a_i` with `a₀ = 1,
//! a₁ = 0` (b likewise with `b₀ = 0, b₁ = 1`), so `a_i·u₀ + b_i·u₁ = u_i`.
//! A division step is refused when its new a-coefficient exceeds `2^m`, or
//! when its new remainder would not exceed that coefficient once the current
//! remainder is already small enough (the remainder guard).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::IleError;
use crate::limb_view::bit_length;
use crate::mat2::Mat2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `ℓ(u₁)` already below the half-size threshold; nothing to do.
    Identity,
    /// The next a-coefficient would exceed `2^m`.
    CoefficientBound,
    /// The next remainder would not exceed its a-coefficient.
    RemainderGuard,
    /// The remainder sequence reached zero.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IleResult {
    pub matrix: Mat2,
    /// `(u_{i−1}, u_i)`.
    pub remainders: (BigUint, BigUint),
    /// Division steps performed.
    pub steps: u64,
    pub stop: StopReason,
}

impl IleResult {
    fn identity(u0: &BigUint, u1: &BigUint) -> Self {
        IleResult {
            matrix: Mat2::identity(),
            remainders: (u0.clone(), u1.clone()),
            steps: 0,
            stop: StopReason::Identity,
        }
    }
}

/// Parameters of one ILE run.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StopRule {
    /// Bound exponent: `|a_i| ≤ 2^m`.
    pub m: u64,
    /// The remainder guard only applies once `ℓ(u_i)` is at most this;
    /// `None` applies it throughout.
    pub guard_floor: Option<u64>,
    /// Always take a step whose remainder is zero (exact inputs only).
    pub accept_zero: bool,
}

impl StopRule {
    fn guard_active(&self, current_bits: u64) -> bool {
        self.guard_floor.is_none_or(|f| current_bits <= f)
    }
}

/// `m = p − ⌈n/2⌉ − 1`; negative means the identity case.
pub fn stop_threshold(n: u64, p: u64) -> i64 {
    p as i64 - n.div_ceil(2) as i64 - 1
}

/// Half-size extended Euclid on `u0 ≥ u1 ≥ 0`.
pub fn ile(u0: &BigUint, u1: &BigUint) -> Result<IleResult, IleError> {
    if u1 > u0 {
        return Err(IleError::BadInput);
    }
    let n = bit_length(u0);
    let p = bit_length(u1);
    let m = stop_threshold(n, p);
    if m < 0 {
        return Ok(IleResult::identity(u0, u1));
    }
    let rule = StopRule {
        m: m as u64,
        guard_floor: Some(n.div_ceil(2) + 1),
        accept_zero: true,
    };
    Ok(run(u0, u1, rule))
}

/// As [`ile`] but with an explicit bound `2^mmax` on the a-coefficients and
/// the remainder guard applied throughout.
pub fn ile_bounded(u0: &BigUint, u1: &BigUint, mmax: u64) -> Result<IleResult, IleError> {
    if u1 > u0 {
        return Err(IleError::BadInput);
    }
    let rule = StopRule {
        m: mmax,
        guard_floor: None,
        accept_zero: true,
    };
    Ok(run(u0, u1, rule))
}

/// ILE on a ladder window whose target size is `target_bits`: the bound is
/// `m = ℓ(V_w) − target − 1`.
pub(crate) fn ile_window(uw: &BigUint, vw: &BigUint, target_bits: u64) -> IleResult {
    let p = bit_length(vw);
    if p < target_bits + 1 {
        return IleResult::identity(uw, vw);
    }
    let rule = StopRule {
        m: p - target_bits - 1,
        guard_floor: Some(target_bits + 1),
        accept_zero: false,
    };
    run(uw, vw, rule)
}

pub(crate) fn run(u0: &BigUint, u1: &BigUint, rule: StopRule) -> IleResult {
    if u0.bits() <= 126 && rule.m <= 125 {
        let x = u128_of(u0);
        let y = u128_of(u1);
        if let Some(res) = run_small(x, y, rule) {
            return res;
        }
    }
    run_big(u0, u1, rule)
}

fn u128_of(x: &BigUint) -> u128 {
    x.iter_u64_digits()
        .enumerate()
        .fold(0u128, |acc, (i, d)| acc | (u128::from(d) << (64 * i)))
}

fn bits_u128(x: u128) -> u64 {
    u64::from(128 - x.leading_zeros())
}

/// Machine-word path; `None` if a b-coefficient would overflow.
fn run_small(u0: u128, u1: u128, rule: StopRule) -> Option<IleResult> {
    let bound: u128 = 1u128 << rule.m;
    let (mut r0, mut r1) = (u0, u1);
    let (mut a0, mut b0, mut a1, mut b1) = (1i128, 0i128, 0i128, 1i128);
    let mut steps = 0u64;
    let stop = loop {
        if r1 == 0 {
            break StopReason::Exhausted;
        }
        let q = r0 / r1;
        let r2 = r0 - q * r1;
        let qi = i128::try_from(q).ok();
        let a2 = qi
            .and_then(|q| q.checked_mul(a1))
            .and_then(|t| a0.checked_sub(t));
        let a2 = match a2 {
            Some(a2) if a2.unsigned_abs() <= bound => a2,
            _ => break StopReason::CoefficientBound,
        };
        if !(rule.accept_zero && r2 == 0)
            && rule.guard_active(bits_u128(r1))
            && r2 <= a2.unsigned_abs()
        {
            break StopReason::RemainderGuard;
        }
        let b2 = qi?.checked_mul(b1).and_then(|t| b0.checked_sub(t))?;
        (a0, b0, a1, b1) = (a1, b1, a2, b2);
        (r0, r1) = (r1, r2);
        steps += 1;
    };
    Some(IleResult {
        matrix: Mat2::new(a0.into(), b0.into(), a1.into(), b1.into()),
        remainders: (r0.into(), r1.into()),
        steps,
        stop,
    })
}

fn run_big(u0: &BigUint, u1: &BigUint, rule: StopRule) -> IleResult {
    let bound = BigUint::one() << rule.m;
    let (mut r0, mut r1) = (u0.clone(), u1.clone());
    let (mut a0, mut b0, mut a1, mut b1) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    let mut steps = 0u64;
    let stop = loop {
        if r1.is_zero() {
            break StopReason::Exhausted;
        }
        let (q, r2) = r0.div_rem(&r1);
        let q = BigInt::from(q);
        let a2 = &a0 - &q * &a1;
        if a2.magnitude() > &bound {
            break StopReason::CoefficientBound;
        }
        if !(rule.accept_zero && r2.is_zero())
            && rule.guard_active(r1.bits())
            && &r2 <= a2.magnitude()
        {
            break StopReason::RemainderGuard;
        }
        let b2 = &b0 - &q * &b1;
        a0 = std::mem::replace(&mut a1, a2);
        b0 = std::mem::replace(&mut b1, b2);
        r0 = std::mem::replace(&mut r1, r2);
        steps += 1;
    };
    IleResult {
        matrix: Mat2::new(a0, b0, a1, b1),
        remainders: (r0, r1),
        steps,
        stop,
    }
}
