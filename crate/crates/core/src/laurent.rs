//! Truncated Laurent series in 1/X with certified precision.
//!
//! A [`LaurentSeries`] stores coefficients for the exponents
//! `top, top-1, ..., cutoff+1` and records nothing below: the value is
//! known to be the stored sum plus O(X^cutoff). Every operation computes
//! the cutoff of its result conservatively, so a coefficient the series
//! claims to know is always exact. Asking for a coefficient at or below
//! the cutoff is [`Error::PrecisionExhausted`], never a wrong answer.
//!
//! [`laurent_sqrt`] expands the square root of an even-degree polynomial
//! whose leading coefficient is a square, by solving for one coefficient
//! at a time; this is the expansion at infinity used by the continued
//! fraction machinery.

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::poly::{Degree, Polynomial};
use num_traits::Signed;
use std::fmt;

#[derive(Debug, Clone)]
pub struct LaurentSeries {
    field: Field,
    /// Exponent of coeffs[0]; coeffs[i] multiplies X^(top - i).
    top: i64,
    /// Descending coefficients; len is always top - cutoff.
    coeffs: Vec<FieldScalar>,
    /// Everything at exponent <= cutoff is unknown.
    cutoff: i64,
}

impl LaurentSeries {
    /// The zero-so-far series: 0 + O(X^cutoff).
    pub fn unknown_below(field: Field, cutoff: i64) -> LaurentSeries {
        LaurentSeries { field, top: cutoff, coeffs: Vec::new(), cutoff }
    }

    /// Exact embedding of a polynomial, keeping terms above `cutoff`.
    ///
    /// Fails if the polynomial has a nonzero term at or below the cutoff,
    /// since dropping it would break exactness.
    pub fn from_poly(p: &Polynomial, cutoff: i64) -> Result<LaurentSeries> {
        let field = p.field();
        match p.degree() {
            Degree::MinusInfinity => Ok(LaurentSeries::unknown_below(field, cutoff)),
            Degree::Finite(d) => {
                if d <= cutoff {
                    return Err(Error::PreconditionFailed(format!(
                        "polynomial of degree {d} does not fit above cutoff {cutoff}"
                    )));
                }
                let mut coeffs = Vec::with_capacity((d - cutoff) as usize);
                for k in (cutoff + 1..=d).rev() {
                    if k < 0 {
                        coeffs.push(field.zero());
                    } else {
                        coeffs.push(p.coeff(k as usize));
                    }
                }
                Ok(LaurentSeries { field, top: d, coeffs, cutoff })
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    /// Coefficient of X^k: exact zero above `top`, stored value down to
    /// cutoff+1, and an error at or below the cutoff.
    pub fn coeff(&self, k: i64) -> Result<FieldScalar> {
        if k > self.top {
            Ok(self.field.zero())
        } else if k > self.cutoff {
            Ok(self.coeffs[(self.top - k) as usize].clone())
        } else {
            Err(Error::PrecisionExhausted)
        }
    }

    /// Exponent of the highest nonzero known coefficient.
    ///
    /// If every known coefficient is zero the true degree is at or below
    /// the cutoff and cannot be certified.
    pub fn degree_certified(&self) -> Result<i64> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                return Ok(self.top - i as i64);
            }
        }
        Err(Error::PrecisionExhausted)
    }

    pub fn is_known_zero_so_far(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Raise the cutoff, forgetting coefficients at or below it.
    pub fn truncate(&self, cutoff: i64) -> LaurentSeries {
        if cutoff <= self.cutoff {
            return self.clone();
        }
        let mut s = self.clone();
        s.cutoff = cutoff;
        if cutoff >= s.top {
            s.coeffs.clear();
            s.top = cutoff;
        } else {
            s.coeffs.truncate((s.top - cutoff) as usize);
        }
        s
    }

    /// Multiply by X^k (exact reindexing).
    pub fn shift(&self, k: i64) -> LaurentSeries {
        let mut s = self.clone();
        s.top += k;
        s.cutoff += k;
        s
    }

    pub fn neg(&self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|c| c.neg_ref()).collect();
        LaurentSeries { field: self.field, top: self.top, coeffs, cutoff: self.cutoff }
    }

    pub fn scale(&self, c: &FieldScalar) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        LaurentSeries { field: self.field, top: self.top, coeffs, cutoff: self.cutoff }
    }

    pub fn add(&self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &LaurentSeries, subtract: bool) -> LaurentSeries {
        assert_eq!(self.field, rhs.field, "series fields must match");
        let cutoff = self.cutoff.max(rhs.cutoff);
        let top = self.top.max(rhs.top).max(cutoff);
        let mut coeffs = Vec::with_capacity((top - cutoff) as usize);
        for k in (cutoff + 1..=top).rev() {
            let a = self.coeff(k).expect("k above both cutoffs");
            let b = rhs.coeff(k).expect("k above both cutoffs");
            coeffs.push(if subtract { &a - &b } else { &a + &b });
        }
        LaurentSeries { field: self.field, top, coeffs, cutoff }
    }

    pub fn mul(&self, rhs: &LaurentSeries) -> LaurentSeries {
        assert_eq!(self.field, rhs.field, "series fields must match");
        // The error terms contribute O(X^(self.top + rhs.cutoff)) and
        // O(X^(rhs.top + self.cutoff)); keep whichever is larger.
        let cutoff = (self.top + rhs.cutoff).max(rhs.top + self.cutoff);
        let top = (self.top + rhs.top).max(cutoff);
        let mut coeffs = vec![self.field.zero(); (top - cutoff) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ka = self.top - i as i64;
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let k = ka + rhs.top - j as i64;
                if k <= cutoff {
                    break;
                }
                let idx = (top - k) as usize;
                coeffs[idx] = &coeffs[idx] + &(a * b);
            }
        }
        LaurentSeries { field: self.field, top, coeffs, cutoff }
    }

    /// Multiplicative inverse, with the same number of known terms.
    pub fn inverse(&self) -> Result<LaurentSeries> {
        let t = self.degree_certified().map_err(|_| Error::DivisionByZero)?;
        let terms = t - self.cutoff;
        let lead = self.coeff(t).unwrap();
        let lead_inv = lead.inverse()?;
        // b has exponents -t, -t-1, ...; solve (self * b) = 1 term by term.
        let mut bcoeffs: Vec<FieldScalar> = Vec::with_capacity(terms as usize);
        bcoeffs.push(lead_inv.clone());
        for n in 1..terms {
            // Coefficient of X^(-n) in self*b must vanish:
            // sum_{j=0..n} a_(t-j) * b_(-t-(n-j)) = 0.
            let mut s = self.field.zero();
            for j in 1..=n {
                let a = self.coeff(t - j).expect("within known range");
                s = &s + &(&a * &bcoeffs[(n - j) as usize]);
            }
            bcoeffs.push((&s * &lead_inv).neg_ref());
        }
        Ok(LaurentSeries { field: self.field, top: -t, coeffs: bcoeffs, cutoff: -t - terms })
    }

    pub fn div(&self, rhs: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// The terms with exponent >= 0, as a polynomial.
    ///
    /// Needs the cutoff to be negative, otherwise some nonnegative
    /// coefficient is unknown.
    pub fn poly_part(&self) -> Result<Polynomial> {
        if self.cutoff >= 0 {
            return Err(Error::PrecisionExhausted);
        }
        let mut ascending = Vec::new();
        for k in 0..=self.top.max(0) {
            ascending.push(self.coeff(k).expect("cutoff is negative"));
        }
        Polynomial::new(self.field, ascending)
    }

    /// True when the two series agree on every exponent both know.
    pub fn agrees_with(&self, rhs: &LaurentSeries) -> bool {
        if self.field != rhs.field {
            return false;
        }
        let lo = self.cutoff.max(rhs.cutoff);
        let hi = self.top.max(rhs.top);
        for k in lo + 1..=hi {
            if self.coeff(k).unwrap() != rhs.coeff(k).unwrap() {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.top - i as i64;
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
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(X^{})", self.cutoff)
    }
}

/// Expansion at infinity of sqrt(d) for an even-degree polynomial d whose
/// leading coefficient is a square; the branch with positive (canonical)
/// leading root is returned, with coefficients known down to cutoff+1.
pub fn laurent_sqrt(d: &Polynomial, cutoff: i64) -> Result<LaurentSeries> {
    let field = d.field();
    let deg = match d.degree() {
        Degree::MinusInfinity => {
            return Err(Error::PreconditionFailed("square root of the zero polynomial".into()))
        }
        Degree::Finite(n) => n,
    };
    if deg % 2 != 0 {
        return Err(Error::OddDegree);
    }
    let t = deg / 2;
    let lead_root = d
        .leading()
        .unwrap()
        .sqrt()
        .ok_or(Error::NonSquareLeadingCoefficient)?;
    let terms = (t - cutoff).max(1);
    let dcoeff = |e: i64| -> FieldScalar {
        if e < 0 {
            field.zero()
        } else {
            d.coeff(e as usize)
        }
    };
    let two_lead_inv = (&field.from_i64(2) * &lead_root).inverse()?;
    let mut y: Vec<FieldScalar> = Vec::with_capacity(terms as usize);
    y.push(lead_root);
    for n in 1..terms {
        // Match the coefficient of X^(2t - n) in y^2 against d.
        let mut s = field.zero();
        for i in 1..n {
            s = &s + &(&y[i as usize] * &y[(n - i) as usize]);
        }
        let num = &dcoeff(2 * t - n) - &s;
        y.push(&num * &two_lead_inv);
    }
    Ok(LaurentSeries { field, top: t, coeffs: y, cutoff: t - terms })
}
