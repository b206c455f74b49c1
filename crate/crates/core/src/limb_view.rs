//! Most-significant-first limb views of big integers.
//!
//! A [`LimbBase`] slices an integer into base-`B` limbs, index 1 being the
//! most significant one. [`LimbPair`] holds the aligned limb vectors of a
//! pair `(U, V)`; after a matrix update its limbs may be negative or exceed
//! `B` until [`LimbPair::fix`] propagates the carries.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::LimbError;

/// Largest head excess (in bits above the limb width) tolerated by
/// [`LimbPair::is_canonical`] after a fix.
pub const MAX_HEAD_EXCESS_BITS: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseKind {
    Binary,
    Decimal,
}

/// Positional base `2^width` or `10^width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LimbBase {
    kind: BaseKind,
    width: u32,
}

impl LimbBase {
    pub fn binary(width: u32) -> Result<Self, LimbError> {
        if !(4..=64).contains(&width) {
            return Err(LimbError::BadWidth {
                kind: "binary",
                width,
            });
        }
        Ok(LimbBase {
            kind: BaseKind::Binary,
            width,
        })
    }

    pub fn decimal(width: u32) -> Result<Self, LimbError> {
        if !(1..=9).contains(&width) {
            return Err(LimbError::BadWidth {
                kind: "decimal",
                width,
            });
        }
        Ok(LimbBase {
            kind: BaseKind::Decimal,
            width,
        })
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// `B` itself.
    pub fn value(&self) -> u128 {
        match self.kind {
            BaseKind::Binary => 1u128 << self.width,
            BaseKind::Decimal => 10u128.pow(self.width),
        }
    }

    pub fn value_big(&self) -> BigInt {
        BigInt::from(self.value())
    }

    /// Bits needed for one limb, `ℓ(B - 1)`. This is the word size `W` for
    /// binary bases and its closest analogue for decimal ones.
    pub fn limb_bits(&self) -> u64 {
        128 - u64::from((self.value() - 1).leading_zeros())
    }

    /// `log2(B)` as a float; exact for binary bases.
    pub fn log2(&self) -> f64 {
        match self.kind {
            BaseKind::Binary => f64::from(self.width),
            BaseKind::Decimal => f64::from(self.width) * std::f64::consts::LOG2_10,
        }
    }

    /// The half-word digit base the half-GCD ladder sweeps over: two such
    /// digits make one limb of `self`.
    pub fn sweep_digit(&self) -> LimbBase {
        LimbBase {
            kind: self.kind,
            width: (self.width / 2).max(1),
        }
    }

    /// `B^k` as a big integer.
    pub fn pow(&self, k: u64) -> BigInt {
        match self.kind {
            BaseKind::Binary => BigInt::one() << (k * u64::from(self.width)),
            BaseKind::Decimal => num_traits::pow(self.value_big(), k as usize),
        }
    }

    /// `x · B^k`.
    pub fn shift_up(&self, x: &BigInt, k: u64) -> BigInt {
        if k == 0 {
            return x.clone();
        }
        match self.kind {
            BaseKind::Binary => x << (k * u64::from(self.width)),
            BaseKind::Decimal => x * self.pow(k),
        }
    }

    /// Floor split `x = hi · B^k + lo` with `0 ≤ lo < B^k`.
    pub fn split(&self, x: &BigInt, k: u64) -> (BigInt, BigInt) {
        if k == 0 {
            return (x.clone(), BigInt::zero());
        }
        match self.kind {
            BaseKind::Binary => {
                let bits = k * u64::from(self.width);
                let hi = x >> bits; // arithmetic shift floors
                let lo = x - (&hi << bits);
                (hi, lo)
            }
            BaseKind::Decimal => x.div_mod_floor(&self.pow(k)),
        }
    }

    /// Exact division by `B^k`; the caller guarantees divisibility.
    pub fn shift_down_exact(&self, x: &BigInt, k: u64) -> BigInt {
        let (hi, lo) = self.split(x, k);
        debug_assert!(lo.is_zero(), "shift_down_exact on a non-multiple");
        hi
    }

    /// Number of base-`B` digits of `x` (at least 1).
    pub fn digit_count(&self, x: &BigUint) -> u64 {
        match self.kind {
            BaseKind::Binary => {
                let bits = x.bits().max(1);
                bits.div_ceil(u64::from(self.width))
            }
            BaseKind::Decimal => {
                // estimate from the bit length, then correct
                let mut k = ((x.bits() as f64) / self.log2()).floor() as u64;
                let big = BigInt::from(x.clone());
                while k > 0 && self.pow(k) > big {
                    k -= 1;
                }
                while self.pow(k + 1) <= big {
                    k += 1;
                }
                k + 1
            }
        }
    }
}

/// `ℓ(x) = ⌈log₂(x+1)⌉`, the number of significant bits.
pub fn bit_length(x: &BigUint) -> u64 {
    x.bits()
}

/// `ℓ(|x|)` for signed values.
pub fn bit_length_signed(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

/// MSF limbs of `x`; `[0]` for zero.
pub fn decompose(x: &BigUint, base: LimbBase) -> Vec<BigInt> {
    let mut out = Vec::new();
    let b = BigUint::from(base.value());
    let mut rest = x.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&b);
        out.push(BigInt::from(r));
        rest = q;
    }
    if out.is_empty() {
        out.push(BigInt::zero());
    }
    out.reverse();
    out
}

/// `Σ limbs[i]·B^(l−i)`; limbs may be signed or overflowing.
pub fn recompose(limbs: &[BigInt], base: LimbBase) -> BigInt {
    let b = base.value_big();
    limbs
        .iter()
        .fold(BigInt::zero(), |acc, limb| acc * &b + limb)
}

/// The aligned limb vectors of a pair `(U, V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimbPair {
    u_limbs: Vec<BigInt>,
    v_limbs: Vec<BigInt>,
    base: LimbBase,
}

impl LimbPair {
    /// Decomposes `u ≥ v ≥ 0`, zero-padding `v` to the length of `u`.
    pub fn new(u: &BigUint, v: &BigUint, base: LimbBase) -> Result<Self, LimbError> {
        if u < v {
            return Err(LimbError::Unordered);
        }
        let u_limbs = decompose(u, base);
        let mut v_limbs = decompose(v, base);
        let pad = u_limbs.len() - v_limbs.len();
        v_limbs.splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
        Ok(LimbPair {
            u_limbs,
            v_limbs,
            base,
        })
    }

    /// Builds a pair from raw (possibly non-canonical) limbs.
    pub fn from_limbs(
        u_limbs: Vec<BigInt>,
        v_limbs: Vec<BigInt>,
        base: LimbBase,
    ) -> Result<Self, LimbError> {
        if u_limbs.len() != v_limbs.len() || u_limbs.is_empty() {
            return Err(LimbError::LengthMismatch {
                u: u_limbs.len(),
                v: v_limbs.len(),
            });
        }
        Ok(LimbPair {
            u_limbs,
            v_limbs,
            base,
        })
    }

    pub fn len(&self) -> usize {
        self.u_limbs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u_limbs.is_empty()
    }

    pub fn base(&self) -> LimbBase {
        self.base
    }

    pub fn u_limbs(&self) -> &[BigInt] {
        &self.u_limbs
    }

    pub fn v_limbs(&self) -> &[BigInt] {
        &self.v_limbs
    }

    pub fn values(&self) -> (BigInt, BigInt) {
        (
            recompose(&self.u_limbs, self.base),
            recompose(&self.v_limbs, self.base),
        )
    }

    /// `X[i..j]` (1-based, inclusive) as exact integers.
    pub fn window(&self, i: usize, j: usize) -> Result<(BigInt, BigInt), LimbError> {
        if i == 0 || i > j || j > self.len() {
            return Err(LimbError::WindowOutOfRange {
                i,
                j,
                len: self.len(),
            });
        }
        Ok((
            recompose(&self.u_limbs[i - 1..j], self.base),
            recompose(&self.v_limbs[i - 1..j], self.base),
        ))
    }

    /// Bits by which the head limbs exceed the limb width (0 when in range).
    pub fn head_excess_bits(&self) -> u64 {
        let width = self.base.limb_bits();
        [&self.u_limbs[0], &self.v_limbs[0]]
            .iter()
            .map(|h| bit_length_signed(h).saturating_sub(width))
            .max()
            .unwrap_or(0)
    }

    /// True when every non-head limb lies in `[0, B)`, the heads are
    /// non-negative with at most [`MAX_HEAD_EXCESS_BITS`] of excess, and
    /// `U ≥ V ≥ 0`.
    pub fn is_canonical(&self) -> bool {
        let b = self.base.value_big();
        let tails_ok = self.u_limbs[1..]
            .iter()
            .chain(&self.v_limbs[1..])
            .all(|x| !x.is_negative() && x < &b);
        let heads_ok = !self.u_limbs[0].is_negative()
            && !self.v_limbs[0].is_negative()
            && self.head_excess_bits() <= MAX_HEAD_EXCESS_BITS;
        let (u, v) = self.values();
        tails_ok && heads_ok && u >= v && !v.is_negative()
    }

    /// Renormalizes limbs least-significant first, floor-propagating carries
    /// and borrows. The final carry stays in the head limb, so the head may
    /// keep extra bits; the sign of a globally negative component is left
    /// alone.
    pub fn fix(&self) -> LimbPair {
        LimbPair {
            u_limbs: fix_limbs(&self.u_limbs, self.base),
            v_limbs: fix_limbs(&self.v_limbs, self.base),
            base: self.base,
        }
    }
}

fn fix_limbs(limbs: &[BigInt], base: LimbBase) -> Vec<BigInt> {
    let b = base.value_big();
    let mut out = limbs.to_vec();
    let mut carry = BigInt::zero();
    for limb in out.iter_mut().skip(1).rev() {
        let total = &*limb + &carry;
        let (q, r) = total.div_mod_floor(&b);
        *limb = r;
        carry = q;
    }
    out[0] += carry;
    out
}

pub(crate) fn to_biguint(x: &BigInt) -> Option<BigUint> {
    match x.sign() {
        Sign::Minus => None,
        _ => Some(x.magnitude().clone()),
    }
}
