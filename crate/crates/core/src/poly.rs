//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored ascending by exponent and kept trimmed, so the
//! representation of every polynomial (including zero, the empty list) is
//! unique and `==` is mathematical equality. Degrees live in [`Degree`],
//! where the zero polynomial gets `MinusInfinity` so that
//! `deg(a*b) = deg a + deg b` holds without special cases.
//!
//! Division, gcd, resultant and discriminant are exact; there is no
//! floating point anywhere.

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use num_traits::Signed;
use std::fmt;

/// Degree of a polynomial: `MinusInfinity` for zero, else `Finite(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    MinusInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Degree addition, with `MinusInfinity` absorbing.
    pub fn plus(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::MinusInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A dense polynomial; see the module docs for representation invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    /// coeffs[k] multiplies X^k; no trailing zeros.
    coeffs: Vec<FieldScalar>,
}

impl Polynomial {
    /// Build from ascending coefficients; trims and checks field agreement.
    pub fn new(field: Field, coeffs: Vec<FieldScalar>) -> Result<Polynomial> {
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        let mut p = Polynomial { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_coeffs_i64(field: Field, ascending: &[i64]) -> Polynomial {
        let coeffs = ascending.iter().map(|&n| field.from_i64(n)).collect();
        let mut p = Polynomial { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: Field) -> Polynomial {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Polynomial {
        Polynomial::constant(field.one())
    }

    pub fn constant(c: FieldScalar) -> Polynomial {
        let field = c.field();
        let mut p = Polynomial { field, coeffs: vec![c] };
        p.trim();
        p
    }

    /// c * X^deg.
    pub fn monomial(c: FieldScalar, deg: usize) -> Polynomial {
        let field = c.field();
        if c.is_zero() {
            return Polynomial::zero(field);
        }
        let mut coeffs = vec![field.zero(); deg];
        coeffs.push(c);
        Polynomial { field, coeffs }
    }

    /// The indeterminate X.
    pub fn x(field: Field) -> Polynomial {
        Polynomial::monomial(field.one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::MinusInfinity
        } else {
            Degree::Finite(self.coeffs.len() as i64 - 1)
        }
    }

    /// Coefficient of X^k (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> FieldScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&FieldScalar> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The constant this polynomial equals, if it has degree ≤ 0.
    pub fn as_constant(&self) -> Option<FieldScalar> {
        match self.coeffs.len() {
            0 => Some(self.field.zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &FieldScalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field);
        }
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Polynomial { field: self.field, coeffs }
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, x: &FieldScalar) -> FieldScalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Substitute another polynomial for X (Horner over polynomials).
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Polynomial::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &self.field.from_i64(k as i64))
            .collect();
        let mut p = Polynomial { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: self = q * rhs + r with deg r < deg rhs.
    pub fn divmod(&self, rhs: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        let dlead = rhs.leading().unwrap().inverse()?;
        let dlen = rhs.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dlen {
            return Ok((Polynomial::zero(self.field), self.clone()));
        }
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![self.field.zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dlen - 1] * &dlead;
            if !c.is_zero() {
                for (j, d) in rhs.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * d);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dlen - 1);
        let mut q = Polynomial { field: self.field, coeffs: quot };
        let mut r = Polynomial { field: self.field, coeffs: rem };
        q.trim();
        r.trim();
        Ok((q, r))
    }

    /// Division that must leave no remainder.
    pub fn div_exact(&self, rhs: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.divmod(rhs)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Mismatch(format!("nonzero remainder {r} in exact division")))
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Polynomial) -> Result<Polynomial> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.divmod(&b)?.1;
            a = b;
            b = r;
        }
        if let Some(l) = a.leading() {
            let linv = l.inverse()?;
            a = a.scale(&linv);
        }
        Ok(a)
    }

    /// Resultant of self and rhs via the Euclidean remainder chain.
    pub fn resultant(&self, rhs: &Polynomial) -> Result<FieldScalar> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        let mut acc = self.field.one();
        loop {
            let (da, db) = match (a.degree().finite(), b.degree().finite()) {
                (None, _) | (_, None) => return Ok(self.field.zero()),
                (Some(da), Some(db)) => (da, db),
            };
            if db == 0 {
                return Ok(&acc * &b.coeffs[0].pow_i64(da)?);
            }
            let r = a.divmod(&b)?.1;
            let dr = r.degree().finite().unwrap_or(-1);
            // res(a, b) = (-1)^(da*db) * lc(b)^(da - dr) * res(b, r)
            let mut factor = b.leading().unwrap().pow_i64(da - dr.max(0))?;
            if dr < 0 {
                factor = b.leading().unwrap().pow_i64(da)?;
            }
            if (da * db) % 2 == 1 {
                factor = factor.neg_ref();
            }
            acc = &acc * &factor;
            if r.is_zero() {
                return Ok(self.field.zero());
            }
            a = b;
            b = r;
        }
    }

    /// Discriminant: (-1)^(n(n-1)/2) res(p, p') / lc(p).
    pub fn discriminant(&self) -> Result<FieldScalar> {
        let n = self
            .degree()
            .finite()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::PreconditionFailed("discriminant needs degree >= 1".into()))?;
        let res = self.resultant(&self.derivative())?;
        let mut d = res.checked_div(self.leading().unwrap())?;
        if (n * (n - 1) / 2) % 2 == 1 {
            d = d.neg_ref();
        }
        Ok(d)
    }

    /// True when gcd(p, p') is constant, i.e. no repeated roots.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_constant() {
            return Ok(true);
        }
        Ok(self.gcd(&self.derivative())?.is_constant())
    }

    // ===== text and JSON forms =====

    /// Parse "X^4 - 6*X^2 + 4*X + 1" style text ('*' optional, x or X).
    pub fn parse(field: Field, s: &str) -> Result<Polynomial> {
        let s = s.trim();
        let bad = |t: &str| Error::Parse(format!("polynomial term {t:?}"));
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        // Split into signed terms at top-level + and -.
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut sign = 1i64;
        let mut cur = String::new();
        let mut seen_any = false;
        for ch in s.chars() {
            match ch {
                '+' | '-' if seen_any && !cur.trim().is_empty() => {
                    terms.push((sign, std::mem::take(&mut cur)));
                    sign = if ch == '-' { -1 } else { 1 };
                }
                '+' if !seen_any || cur.trim().is_empty() => {}
                '-' if !seen_any || cur.trim().is_empty() => sign = -sign,
                _ => {
                    if !ch.is_whitespace() {
                        seen_any = true;
                    }
                    cur.push(ch);
                }
            }
        }
        if !cur.trim().is_empty() {
            terms.push((sign, cur));
        }
        if terms.is_empty() {
            return Err(Error::Parse(format!("polynomial {s:?}")));
        }
        let mut acc = Polynomial::zero(field);
        for (sign, term) in terms {
            let t = term.trim();
            let (coeff_str, exp) = match t.find(['X', 'x']) {
                None => (t, 0usize),
                Some(i) => {
                    let before = t[..i].trim().trim_end_matches('*').trim();
                    let after = t[i + 1..].trim();
                    let exp = if after.is_empty() {
                        1
                    } else if let Some(e) = after.strip_prefix('^') {
                        e.trim().parse::<usize>().map_err(|_| bad(t))?
                    } else {
                        return Err(bad(t));
                    };
                    (before, exp)
                }
            };
            let mut c = if coeff_str.is_empty() {
                field.one()
            } else {
                field.parse(coeff_str)?
            };
            if sign < 0 {
                c = c.neg_ref();
            }
            acc = &acc + &Polynomial::monomial(c, exp);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let field = match self.field {
            Field::Rationals => serde_json::Value::String("Q".into()),
            Field::Prime(p) => serde_json::json!(p),
        };
        let coeffs: Vec<_> = self.coeffs.iter().map(|c| c.to_json()).collect();
        serde_json::json!({ "field": field, "coeffs": coeffs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Polynomial> {
        let bad = || Error::Parse(format!("polynomial json {v}"));
        let field = match v.get("field").ok_or_else(bad)? {
            serde_json::Value::String(s) if s == "Q" => Field::Rationals,
            f => Field::prime(f.as_u64().ok_or_else(bad)?)?,
        };
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(bad)?
            .iter()
            .map(FieldScalar::from_json)
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(field, coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            // Rationals get a printed sign; residues are already in 0..p-1.
            let (neg, mag) = match c {
                FieldScalar::Rational(r) if r.is_negative() => (true, c.neg_ref()),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "X")?;
                } else {
                    write!(f, "X^{k}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! poly_op {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                assert_eq!(self.field, rhs.field, "polynomial fields must match");
                let n = self.coeffs.len().max(rhs.coeffs.len());
                let mut coeffs = Vec::with_capacity(n);
                for k in 0..n {
                    coeffs.push(std::ops::$trait::$method(&self.coeff(k), &rhs.coeff(k)));
                }
                let mut p = Polynomial { field: self.field, coeffs };
                p.trim();
                p
            }
        }
    };
}

poly_op!(Add, add);
poly_op!(Sub, sub);

impl std::ops::Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "polynomial fields must match");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut p = Polynomial { field: self.field, coeffs };
        p.trim();
        p
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|c| c.neg_ref()).collect();
        Polynomial { field: self.field, coeffs }
    }
}
