//! Scalars: exact rationals and prime-field residues behind one type.
//!
//! A [`FieldScalar`] is either an arbitrary-precision rational (always stored
//! reduced, denominator positive) or a residue mod a prime p ≥ 5. Residues
//! carry their modulus, so values are self-describing; combining scalars from
//! different fields is a contract violation and the checked operations return
//! [`Error::FieldMismatch`].
//!
//! p = 2 and p = 3 are rejected up front: the expansions divide by 2 and the
//! step recursions divide by constants involving 4, so characteristic 2 and 3
//! are out of scope.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// The ambient field a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rational numbers.
    Rationals,
    /// The prime field F_p, p ≥ 5.
    Prime(u64),
}

impl Field {
    /// F_p with the modulus validated (prime and ≥ 5).
    pub fn prime(p: u64) -> Result<Field> {
        if p < 5 || !is_prime_u64(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldScalar {
        match self {
            Field::Rationals => FieldScalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                // Route through i128 so moduli above i64::MAX reduce correctly.
                let r = (n as i128).rem_euclid(*p as i128) as u64;
                FieldScalar::Mod { val: r, p: *p }
            }
        }
    }

    /// Parse "a", "a/b", or a decimal like "-3.25" in this field.
    ///
    /// Over F_p only integer forms are accepted and they reduce mod p.
    pub fn parse(&self, s: &str) -> Result<FieldScalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("scalar {s:?}"));
        match self {
            Field::Rationals => {
                if let Some((a, b)) = s.split_once('/') {
                    let num: BigInt = a.trim().parse().map_err(|_| bad())?;
                    let den: BigInt = b.trim().parse().map_err(|_| bad())?;
                    FieldScalar::rational(num, den)
                } else if let Some((int, frac)) = s.split_once('.') {
                    let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
                    let int: BigInt = if int.trim() == "-" || int.trim().is_empty() {
                        BigInt::zero()
                    } else {
                        int.trim().parse().map_err(|_| bad())?
                    };
                    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(bad());
                    }
                    let digits: BigInt = frac.parse().map_err(|_| bad())?;
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    let num = &int * &scale + BigInt::from(sign) * digits;
                    FieldScalar::rational(num, scale)
                } else {
                    let num: BigInt = s.parse().map_err(|_| bad())?;
                    Ok(FieldScalar::Rational(BigRational::from_integer(num)))
                }
            }
            Field::Prime(p) => {
                let n: i128 = s.parse().map_err(|_| bad())?;
                let r = n.rem_euclid(*p as i128) as u64;
                Ok(FieldScalar::Mod { val: r, p: *p })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// One exact scalar. See the module docs for the two arms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Mod { val: u64, p: u64 },
}

impl FieldScalar {
    /// num/den as a reduced rational; den must be nonzero.
    pub fn rational(num: BigInt, den: BigInt) -> Result<FieldScalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldScalar::Rational(BigRational::new(num, den)))
    }

    /// A residue mod p with the modulus validated.
    pub fn residue(val: u64, p: u64) -> Result<FieldScalar> {
        let field = Field::prime(p)?;
        match field {
            Field::Prime(p) => Ok(FieldScalar::Mod { val: val % p, p }),
            Field::Rationals => unreachable!(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rationals,
            FieldScalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    /// A small constant in the same field as `self`.
    pub fn small(&self, n: i64) -> FieldScalar {
        self.field().from_i64(n)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Mod { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Mod { val, .. } => *val == 1,
        }
    }

    fn same_field(&self, other: &FieldScalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, rhs: &FieldScalar) -> Result<FieldScalar> {
        self.same_field(rhs)?;
        Ok(match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Mod { val: a, p }, FieldScalar::Mod { val: b, .. }) => {
                FieldScalar::Mod { val: addmod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, rhs: &FieldScalar) -> Result<FieldScalar> {
        self.checked_add(&rhs.neg_ref())
    }

    pub fn checked_mul(&self, rhs: &FieldScalar) -> Result<FieldScalar> {
        self.same_field(rhs)?;
        Ok(match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Mod { val: a, p }, FieldScalar::Mod { val: b, .. }) => {
                FieldScalar::Mod { val: mulmod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, rhs: &FieldScalar) -> Result<FieldScalar> {
        self.checked_mul(&rhs.inverse()?)
    }

    pub fn inverse(&self) -> Result<FieldScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(r.recip()),
            FieldScalar::Mod { val, p } => FieldScalar::Mod { val: invmod(*val, *p), p: *p },
        })
    }

    pub fn neg_ref(&self) -> FieldScalar {
        match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(-r),
            FieldScalar::Mod { val, p } => {
                FieldScalar::Mod { val: if *val == 0 { 0 } else { p - val }, p: *p }
            }
        }
    }

    /// self^n with n any integer; negative n inverts first.
    pub fn pow_i64(&self, n: i64) -> Result<FieldScalar> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.small(1);
        let mut b = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&b)?;
            }
            b = b.checked_mul(&b.clone())?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// An exact square root in the field, if one exists.
    ///
    /// Over Q both numerator and denominator must be perfect squares; over F_p
    /// this is Tonelli–Shanks. The returned root is one of the two; negate for
    /// the other.
    pub fn sqrt(&self) -> Option<FieldScalar> {
        match self {
            FieldScalar::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let num = r.numer();
                let den = r.denom();
                let sn = num.sqrt();
                let sd = den.sqrt();
                if &(&sn * &sn) == num && &(&sd * &sd) == den {
                    Some(FieldScalar::Rational(BigRational::new(sn, sd)))
                } else {
                    None
                }
            }
            FieldScalar::Mod { val, p } => sqrtmod(*val, *p).map(|r| {
                // Canonical choice: the smaller of the two roots.
                let r = if r != 0 { r.min(p - r) } else { 0 };
                FieldScalar::Mod { val: r, p: *p }
            }),
        }
    }

    /// The underlying rational, when this scalar lives over Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rational(r) => Some(r),
            FieldScalar::Mod { .. } => None,
        }
    }

    /// True for a rational with denominator 1 (or any residue).
    pub fn is_integral(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.denom().is_one(),
            FieldScalar::Mod { .. } => true,
        }
    }

    /// JSON form: `{"num": "...", "den": "..."}` or `{"val": n, "mod": p}`.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            FieldScalar::Rational(r) => serde_json::json!({
                "num": r.numer().to_string(),
                "den": r.denom().to_string(),
            }),
            FieldScalar::Mod { val, p } => serde_json::json!({ "val": val, "mod": p }),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FieldScalar> {
        let bad = || Error::Parse(format!("scalar json {v}"));
        if let (Some(num), Some(den)) = (v.get("num"), v.get("den")) {
            let num: BigInt = num.as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let den: BigInt = den.as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            FieldScalar::rational(num, den)
        } else if let (Some(val), Some(p)) = (v.get("val"), v.get("mod")) {
            let val = val.as_u64().ok_or_else(bad)?;
            let p = p.as_u64().ok_or_else(bad)?;
            FieldScalar::residue(val, p)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Mod { val, .. } => write!(f, "{val}"),
        }
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.$checked(rhs).expect("scalar fields must match")
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    // Extended Euclid on signed 128-bit words; p is prime and a != 0 mod p.
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller–Rabin valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Tonelli–Shanks square root mod an odd prime; None for non-residues.
fn sqrtmod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    // Write p − 1 = q·2^s with q odd, then walk the 2-Sylow subgroup.
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Convenience: the integer value of a rational scalar with denominator 1.
pub fn as_integer(s: &FieldScalar) -> Option<BigInt> {
    match s {
        FieldScalar::Rational(r) if r.denom().is_one() => Some(r.numer().clone()),
        _ => None,
    }
}

/// Convenience: an i64 view of an integral rational, when it fits.
pub fn as_i64(s: &FieldScalar) -> Option<i64> {
    as_integer(s).and_then(|n| n.to_i64())
}

/// gcd of two integral rationals, as a nonnegative integer scalar.
pub fn integer_gcd(a: &FieldScalar, b: &FieldScalar) -> Option<FieldScalar> {
    let (a, b) = (as_integer(a)?, as_integer(b)?);
    Some(FieldScalar::Rational(BigRational::from_integer(a.gcd(&b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> FieldScalar {
        Field::Rationals.from_i64(n)
    }

    fn qr(n: i64, d: i64) -> FieldScalar {
        FieldScalar::rational(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    fn m(v: u64, p: u64) -> FieldScalar {
        FieldScalar::residue(v, p).unwrap()
    }

    #[test]
    fn residue_product() {
        // 3 * 4 = 12 = 2 mod 5
        assert_eq!(m(3, 5).checked_mul(&m(4, 5)).unwrap(), m(2, 5));
    }

    #[test]
    fn rational_quotient_normalises() {
        // -48 / 12 = -4, stored with denominator 1
        let r = q(-48).checked_div(&q(12)).unwrap();
        assert_eq!(r, q(-4));
        assert!(r.is_integral());
    }

    #[test]
    fn zero_inverse_is_an_error() {
        assert_eq!(q(1).checked_div(&q(0)), Err(Error::DivisionByZero));
        assert_eq!(m(0, 7).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        assert_eq!(m(1, 5).checked_add(&m(1, 7)), Err(Error::FieldMismatch));
        assert_eq!(q(1).checked_add(&m(1, 7)), Err(Error::FieldMismatch));
    }

    #[test]
    fn tiny_and_composite_moduli_rejected() {
        for p in [0u64, 1, 2, 3, 4, 6, 91, 100] {
            assert_eq!(Field::prime(p), Err(Error::BadModulus(p)), "p = {p}");
        }
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(101).is_ok());
        assert!(Field::prime(18446744073709551557).is_ok()); // largest u64 prime
    }

    #[test]
    fn parse_forms() {
        let f = Field::Rationals;
        assert_eq!(f.parse("-48/12").unwrap(), q(-4));
        assert_eq!(f.parse("7").unwrap(), q(7));
        assert_eq!(f.parse("-3.25").unwrap(), qr(-13, 4));
        assert_eq!(f.parse("0.5").unwrap(), qr(1, 2));
        assert!(f.parse("x").is_err());
        let g = Field::prime(101).unwrap();
        assert_eq!(g.parse("-1").unwrap(), m(100, 101));
        assert_eq!(g.parse("205").unwrap(), m(3, 101));
    }

    #[test]
    fn json_round_trip() {
        for s in [q(-48), qr(13, 4), m(3, 5), m(100, 101)] {
            assert_eq!(FieldScalar::from_json(&s.to_json()).unwrap(), s);
        }
    }

    #[test]
    fn sqrt_both_fields() {
        assert_eq!(qr(9, 4).sqrt(), Some(qr(3, 2)));
        assert_eq!(qr(2, 1).sqrt(), None);
        assert_eq!(q(-4).sqrt(), None);
        // 4^2 = 16 = 3 mod 13, so sqrt(3) is 4 or 9
        let r = m(3, 13).sqrt().unwrap();
        assert!(r == m(4, 13) || r == m(9, 13));
        assert_eq!(m(5, 13).sqrt(), None); // 5 is a non-residue mod 13
        // p = 3 mod 4 branch
        let r = m(2, 7).sqrt().unwrap();
        assert_eq!(r.checked_mul(&r.clone()).unwrap(), m(2, 7));
    }

    #[test]
    fn pow_negative_exponent() {
        assert_eq!(qr(2, 3).pow_i64(-2).unwrap(), qr(9, 4));
        assert_eq!(m(2, 101).pow_i64(-1).unwrap(), m(51, 101));
        assert!(q(0).pow_i64(-1).is_err());
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in -40i64..40, b in 1i64..20, c in -40i64..40, d in 1i64..20) {
            let x = qr(a, b);
            let y = qr(c, d);
            prop_assert_eq!(x.checked_add(&y).unwrap(), y.checked_add(&x).unwrap());
            prop_assert_eq!(x.checked_mul(&y).unwrap(), y.checked_mul(&x).unwrap());
            let sum_then_neg = x.checked_add(&y).unwrap().neg_ref();
            let neg_then_sum = x.neg_ref().checked_add(&y.neg_ref()).unwrap();
            prop_assert_eq!(sum_then_neg, neg_then_sum);
            if !y.is_zero() {
                let back = x.checked_div(&y).unwrap().checked_mul(&y).unwrap();
                prop_assert_eq!(back, x);
            }
        }

        #[test]
        fn prime_field_axioms(a in 0u64..101, b in 0u64..101, c in 0u64..101) {
            let p = 101;
            let (x, y, z) = (m(a, p), m(b, p), m(c, p));
            let assoc_l = x.checked_mul(&y).unwrap().checked_mul(&z).unwrap();
            let assoc_r = x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap();
            prop_assert_eq!(assoc_l, assoc_r);
            let distrib_l = x.checked_mul(&y.checked_add(&z).unwrap()).unwrap();
            let distrib_r = x.checked_mul(&y).unwrap().checked_add(&x.checked_mul(&z).unwrap()).unwrap();
            prop_assert_eq!(distrib_l, distrib_r);
            if !x.is_zero() {
                prop_assert_eq!(x.checked_mul(&x.inverse().unwrap()).unwrap(), m(1, p));
            }
        }

        #[test]
        fn canonical_form_ignores_common_factors(a in -30i64..30, b in 1i64..30, k in 1i64..9) {
            prop_assert_eq!(qr(a * k, b * k), qr(a, b));
        }
    }
}
