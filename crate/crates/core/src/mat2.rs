//! 2×2 matrices of Bézout coefficients.

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// `[[a, b], [c, d]]`, mapping `(u, v)` to `(a·u + b·v, c·u + d·v)`.
///
/// Rows are `(a_{i−1}, b_{i−1})` and `(a_i, b_i)` of the extended Euclid
/// recurrence when the matrix comes out of ILE.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    /// The single Euclid step `(u, v) ↦ (v, u − q·v)`.
    pub fn euclid_step(q: &BigUint) -> Self {
        Mat2::new(
            BigInt::zero(),
            BigInt::one(),
            BigInt::one(),
            -BigInt::from(q.clone()),
        )
    }

    /// Row swap `(u, v) ↦ (v, u)`.
    pub fn swap() -> Self {
        Mat2::from_i64(0, 1, 1, 0)
    }

    /// `diag(su, sv)` with entries ±1.
    pub fn signs(negate_u: bool, negate_v: bool) -> Self {
        let s = |neg: bool| if neg { -1 } else { 1 };
        Mat2::from_i64(s(negate_u), 0, 0, s(negate_v))
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    pub fn apply(&self, u: &BigInt, v: &BigInt) -> (BigInt, BigInt) {
        if self.is_identity() {
            return (u.clone(), v.clone());
        }
        (&self.a * u + &self.b * v, &self.c * u + &self.d * v)
    }

    pub fn apply_unsigned(&self, u: &BigUint, v: &BigUint) -> (BigInt, BigInt) {
        self.apply(&BigInt::from(u.clone()), &BigInt::from(v.clone()))
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// `max(|a|, |c|)`: the first column holds the a-coefficients the ILE
    /// stop rule bounds.
    pub fn first_col_max(&self) -> BigUint {
        self.a.magnitude().max(self.c.magnitude()).clone()
    }

    pub fn max_abs_entry(&self) -> BigUint {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.magnitude())
            .max()
            .cloned()
            .unwrap_or_default()
    }

    pub fn has_unit_det(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2::mul(self, rhs)
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Mat2::identity()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::from_i64(a, b, c, d)
    }

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn identity_basics() {
        let id = Mat2::identity();
        assert_eq!(id, m(1, 0, 0, 1));
        assert_eq!(id.det(), bi(1));
        assert_eq!(id.apply(&bi(7), &bi(3)), (bi(7), bi(3)));
    }

    #[test]
    fn products_from_the_worked_examples() {
        let n2 = m(-41, 112, 231, -631);
        let n1 = m(369, -481, -425, 554);
        assert_eq!(n2.mul(&n1), m(-62729, 81769, 353414, -460685));

        let r0 = m(233, -377, -377, 610);
        let l0 = m(-144, 233, 233, -377);
        assert_eq!(&r0 * &l0, m(-121393, 196418, 196418, -317811));
        assert_eq!(l0.mul(&Mat2::identity()), l0);
    }

    #[test]
    fn apply_examples() {
        let mm = m(-62729, 81769, 353414, -460685);
        assert_eq!(
            mm.apply(&bi(922375420941), &bi(707599307587)),
            (bi(1873414), bi(725479))
        );
        let l1 = m(196418, -317811, -317811, 514229);
        assert_eq!(
            l1.apply(&bi(956722026041), &bi(591286729879)),
            (bi(1346269), bi(832040))
        );
    }

    #[test]
    fn euclid_step_examples() {
        let q1 = Mat2::euclid_step(&BigUint::from(1u32));
        assert_eq!(
            q1.apply(&bi(2178309), &bi(1346269)),
            (bi(1346269), bi(832040))
        );
        let l1 = m(-121393, 196418, 196418, -317811);
        assert_eq!(q1.mul(&l1), m(196418, -317811, -317811, 514229));
        assert_eq!(Mat2::euclid_step(&BigUint::zero()), m(0, 1, 1, 0));
    }

    #[test]
    fn det_and_first_col() {
        // 369·554 − (−481)·(−425) = 204426 − 204425
        assert_eq!(m(369, -481, -425, 554).det(), bi(1));
        assert_eq!(Mat2::identity().det(), bi(1));
        assert_eq!(
            m(196418, -317811, -317811, 514229).first_col_max(),
            BigUint::from(317811u32)
        );
        assert_eq!(
            m(196418, -317811, -317811, 514229).max_abs_entry(),
            BigUint::from(514229u32)
        );
    }

    fn euclid_product() -> impl Strategy<Value = Mat2> {
        proptest::collection::vec(0u64..50, 0..6).prop_map(|qs| {
            qs.iter().fold(Mat2::identity(), |acc, &q| {
                Mat2::euclid_step(&BigUint::from(q)).mul(&acc)
            })
        })
    }

    proptest! {
        #[test]
        fn euclid_products_are_unimodular(mm in euclid_product()) {
            prop_assert!(mm.has_unit_det());
        }

        #[test]
        fn mul_is_associative(x in euclid_product(), y in euclid_product(), z in euclid_product()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn apply_composes(x in euclid_product(), y in euclid_product(), u in any::<i64>(), v in any::<i64>()) {
            let (u, v) = (bi(u), bi(v));
            let (yu, yv) = y.apply(&u, &v);
            prop_assert_eq!(x.mul(&y).apply(&u, &v), x.apply(&yu, &yv));
        }

        #[test]
        fn apply_is_linear(x in euclid_product(), u1 in any::<i32>(), v1 in any::<i32>(), u2 in any::<i32>(), v2 in any::<i32>()) {
            let (a1, b1) = x.apply(&bi(u1.into()), &bi(v1.into()));
            let (a2, b2) = x.apply(&bi(u2.into()), &bi(v2.into()));
            let (s1, s2) = x.apply(&bi(i64::from(u1) + i64::from(u2)), &bi(i64::from(v1) + i64::from(v2)));
            prop_assert_eq!((s1, s2), (a1 + a2, b1 + b2));
        }
    }
}
