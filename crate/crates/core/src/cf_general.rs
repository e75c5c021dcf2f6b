//! Continued fraction expansion of a quadratic irrational over the
//! rational function field.
//!
//! The element Y is a fixed root of Y^2 = T·Y + D; the surd under
//! expansion is (Y + P)/Q. Stepping is fully exact polynomial
//! arithmetic: the partial quotient is the Euclidean quotient
//! (poly_part(Y) + P) div Q, and each new Q divides the norm
//! P^2 + T·P - D on the nose, so no Laurent precision ever enters the
//! tableau itself. Series only back the degree queries (reducedness,
//! distance), which deepen and retry on their own.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::laurent::{laurent_sqrt, LaurentSeries};
use crate::poly::{Degree, Polynomial};

/// A quadratic irrational (Y + P)/Q with Y^2 = T·Y + D.
///
/// `delta` is D + T^2/4, the polynomial whose square root generates Y;
/// `ppy` is the polynomial part of Y, exact regardless of the series
/// cutoff carried in `y`.
#[derive(Debug, Clone)]
pub struct QuadraticSurd {
    pub d: Polynomial,
    pub t: Polynomial,
    pub p: Polynomial,
    pub q: Polynomial,
    delta: Polynomial,
    ppy: Polynomial,
    y: LaurentSeries,
    cutoff: i64,
    multiple_roots: bool,
}

impl QuadraticSurd {
    pub fn new(d: Polynomial, t: Polynomial, p: Polynomial, q: Polynomial) -> Result<QuadraticSurd> {
        let field = d.field();
        if t.field() != field || p.field() != field || q.field() != field {
            return Err(Error::FieldMismatch);
        }
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let quarter = field.from_i64(4).inverse()?;
        let delta = &d + &t.pow(2).scale(&quarter);
        let deg_delta = match delta.degree() {
            Degree::Finite(k) if k >= 2 => k,
            _ => {
                return Err(Error::PreconditionFailed(
                    "the part under the square root must have degree at least 2".into(),
                ))
            }
        };
        if deg_delta % 2 != 0 {
            return Err(Error::OddDegree);
        }
        let genus = deg_delta / 2 - 1;
        if t.degree() > Degree::Finite(genus) {
            return Err(Error::PreconditionFailed(format!(
                "trace degree must be at most {genus} for this D"
            )));
        }
        let root = laurent_sqrt(&delta, -1)?.poly_part()?;
        if root.pow(2) == delta {
            return Err(Error::DegenerateSquare);
        }
        let multiple_roots = !delta.is_squarefree()?;
        let norm_p = {
            let pp = &p.pow(2) + &(&t * &p);
            &pp - &d
        };
        if !norm_p.divmod(&q)?.1.is_zero() {
            return Err(Error::IdealViolation);
        }
        let half = field.from_i64(2).inverse()?;
        let ppy = &t.scale(&half) + &root;
        let cutoff = -(genus + 6);
        let y = y_series_for(&delta, &t, cutoff)?;
        Ok(QuadraticSurd { d, t, p, q, delta, ppy, y, cutoff, multiple_roots })
    }

    /// Expansion of Y itself: P = 0, Q = 1.
    pub fn sqrt_like(d: Polynomial, t: Polynomial) -> Result<QuadraticSurd> {
        let field = d.field();
        QuadraticSurd::new(d, t, Polynomial::zero(field), Polynomial::one(field))
    }

    pub fn field(&self) -> Field {
        self.d.field()
    }

    pub fn genus(&self) -> i64 {
        match self.delta.degree() {
            Degree::Finite(k) => k / 2 - 1,
            Degree::MinusInfinity => unreachable!("delta validated nonzero"),
        }
    }

    /// True when D + T^2/4 has a repeated root; the expansion still runs.
    pub fn has_multiple_roots(&self) -> bool {
        self.multiple_roots
    }

    pub fn poly_part_of_y(&self) -> &Polynomial {
        &self.ppy
    }

    /// The fixed root as a series, deepened on demand.
    pub fn y_series(&self, cutoff: i64) -> Result<LaurentSeries> {
        if cutoff >= self.cutoff {
            Ok(self.y.truncate(cutoff))
        } else {
            y_series_for(&self.delta, &self.t, cutoff)
        }
    }

    /// P^2 + T·P - D, the norm of Y + P.
    pub fn norm_poly(&self, p: &Polynomial) -> Polynomial {
        let pp = &p.pow(2) + &(&self.t * p);
        &pp - &self.d
    }

    /// Fractional tail Y - poly_part(Y); its top exponent is at least
    /// -(genus+1), so the default precision always certifies it.
    fn tail(&self) -> Result<LaurentSeries> {
        let y = self.y_series(self.cutoff)?;
        Ok(y.sub(&LaurentSeries::from_poly(&self.ppy, self.cutoff)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "D": self.d.to_json(),
            "T": self.t.to_json(),
            "P": self.p.to_json(),
            "Q": self.q.to_json(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<QuadraticSurd> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("surd json missing {k}")))
        };
        QuadraticSurd::new(
            Polynomial::from_json(get("D")?)?,
            Polynomial::from_json(get("T")?)?,
            Polynomial::from_json(get("P")?)?,
            Polynomial::from_json(get("Q")?)?,
        )
    }
}

fn y_series_for(delta: &Polynomial, t: &Polynomial, cutoff: i64) -> Result<LaurentSeries> {
    let s = laurent_sqrt(delta, cutoff)?;
    if t.is_zero() {
        return Ok(s);
    }
    let half = t.field().from_i64(2).inverse()?;
    Ok(s.add(&LaurentSeries::from_poly(&t.scale(&half), cutoff)?))
}

/// Degree of Y + P: the polynomial part decides unless it cancels, in
/// which case the series tail does.
fn numerator_degree(s: &QuadraticSurd, p: &Polynomial) -> Result<Degree> {
    let head = &s.ppy + p;
    if !head.is_zero() {
        return Ok(head.degree());
    }
    Ok(Degree::Finite(s.tail()?.degree_certified()?))
}

/// Degree of Ȳ + P where Ȳ = T - Y is the conjugate root.
fn conjugate_numerator_degree(s: &QuadraticSurd, p: &Polynomial) -> Result<Degree> {
    let head = &(&s.t + p) - &s.ppy;
    if !head.is_zero() {
        return Ok(head.degree());
    }
    Ok(Degree::Finite(s.tail()?.degree_certified()?))
}

/// Reducedness for a given (P, Q): deg((Y+P)/Q) > 0 and deg((Ȳ+P)/Q) < 0.
pub fn is_reduced_pair(s: &QuadraticSurd, p: &Polynomial, q: &Polynomial) -> Result<bool> {
    let dq = match q.degree() {
        Degree::Finite(k) => k,
        Degree::MinusInfinity => return Err(Error::DivisionByZero),
    };
    let plus = match numerator_degree(s, p)? {
        Degree::Finite(k) => k > dq,
        Degree::MinusInfinity => false,
    };
    let conj = match conjugate_numerator_degree(s, p)? {
        Degree::Finite(k) => k < dq,
        Degree::MinusInfinity => true,
    };
    Ok(plus && conj)
}

pub fn is_reduced(s: &QuadraticSurd) -> Result<bool> {
    is_reduced_pair(s, &s.p, &s.q)
}

/// One line of the expansion tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralCFLine {
    pub h: i64,
    pub p: Polynomial,
    pub q: Polynomial,
    /// Partial quotient consumed when stepping from this line.
    pub a: Polynomial,
}

impl GeneralCFLine {
    pub fn is_reduced(&self, s: &QuadraticSurd) -> Result<bool> {
        is_reduced_pair(s, &self.p, &self.q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "h": self.h,
            "P": self.p.to_json(),
            "Q": self.q.to_json(),
            "a": self.a.to_json(),
        })
    }
}

impl std::fmt::Display for GeneralCFLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: (Y + {}) / ({}), a = {}", self.h, self.p, self.q, self.a)
    }
}

fn partial_quotient(s: &QuadraticSurd, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    Ok((&s.ppy + p).divmod(q)?.0)
}

/// Line 0 of the tableau for the surd's own (P, Q).
pub fn start_line(s: &QuadraticSurd) -> Result<GeneralCFLine> {
    let a = partial_quotient(s, &s.p, &s.q)?;
    Ok(GeneralCFLine { h: 0, p: s.p.clone(), q: s.q.clone(), a })
}

/// Advance one line: subtract the partial quotient and invert.
pub fn cf_step_general(s: &QuadraticSurd, line: &GeneralCFLine) -> Result<GeneralCFLine> {
    let p_next = &(&(&line.a * &line.q) - &line.p) - &s.t;
    let (q_next, rem) = (-&s.norm_poly(&p_next)).divmod(&line.q)?;
    if !rem.is_zero() {
        return Err(Error::InvariantBroken(format!(
            "norm not divisible by Q at line {}",
            line.h
        )));
    }
    if q_next.is_zero() {
        return Err(Error::InvariantBroken("vanishing Q; the surd is rational".into()));
    }
    let a = partial_quotient(s, &p_next, &q_next)?;
    Ok(GeneralCFLine { h: line.h + 1, p: p_next, q: q_next, a })
}

/// Extend the tableau one line toward negative index, through the
/// conjugate expansion. Inverse of [`cf_step_general`] on reduced lines.
pub fn conjugate_step_back(s: &QuadraticSurd, line: &GeneralCFLine) -> Result<GeneralCFLine> {
    let (q_prev, rem) = (-&s.norm_poly(&line.p)).divmod(&line.q)?;
    if !rem.is_zero() {
        return Err(Error::InvariantBroken(format!(
            "norm not divisible by Q at line {}",
            line.h
        )));
    }
    if q_prev.is_zero() {
        return Err(Error::InvariantBroken("vanishing Q; the surd is rational".into()));
    }
    let a_prev = partial_quotient(s, &line.p, &q_prev)?;
    let p_prev = &(&(&a_prev * &q_prev) - &line.p) - &s.t;
    Ok(GeneralCFLine { h: line.h - 1, p: p_prev, q: q_prev, a: a_prev })
}

/// Lines 0..=n of the expansion.
pub fn expand_lines(s: &QuadraticSurd, n: i64) -> Result<Vec<GeneralCFLine>> {
    let mut lines = vec![start_line(s)?];
    for _ in 0..n {
        let next = cf_step_general(s, lines.last().unwrap())?;
        lines.push(next);
    }
    Ok(lines)
}

/// Continuant columns: after consuming a_0..a_h, `x`/`y` hold the h-th
/// convergent and `x_prev`/`y_prev` the previous one.
#[derive(Debug, Clone)]
pub struct ConvergentState {
    pub h: i64,
    pub x: Polynomial,
    pub x_prev: Polynomial,
    pub y: Polynomial,
    pub y_prev: Polynomial,
}

impl ConvergentState {
    pub fn initial(field: Field) -> ConvergentState {
        ConvergentState {
            h: -1,
            x: Polynomial::one(field),
            x_prev: Polynomial::zero(field),
            y: Polynomial::zero(field),
            y_prev: Polynomial::one(field),
        }
    }

    pub fn advance(&self, a: &Polynomial) -> ConvergentState {
        ConvergentState {
            h: self.h + 1,
            x: &(a * &self.x) + &self.x_prev,
            x_prev: self.x.clone(),
            y: &(a * &self.y) + &self.y_prev,
            y_prev: self.y.clone(),
        }
    }

    /// x_h·y_{h−1} − x_{h−1}·y_h, which must be (−1)^{h+1}.
    pub fn determinant(&self) -> Polynomial {
        &(&self.x * &self.y_prev) - &(&self.x_prev * &self.y)
    }

    pub fn determinant_ok(&self) -> bool {
        let field = self.x.field();
        let expect = if (self.h + 1).rem_euclid(2) == 0 { 1 } else { -1 };
        self.determinant() == Polynomial::constant(field.from_i64(expect))
    }
}

/// Exact norm identity at the convergent's index h:
/// Q₀²x² − Q₀xy(2P₀+T) + (P₀²+TP₀−D)y² = (−1)^{h+1}·Q_{h+1}·Q₀.
pub fn norm_identity_check(
    s: &QuadraticSurd,
    conv: &ConvergentState,
    q_next: &Polynomial,
) -> Result<()> {
    let q0sq = s.q.pow(2);
    let two_p_plus_t = &(&s.p + &s.p) + &s.t;
    let lhs = &(&(&q0sq * &conv.x.pow(2))
        - &(&(&(&s.q * &conv.x) * &conv.y) * &two_p_plus_t))
        + &(&s.norm_poly(&s.p) * &conv.y.pow(2));
    let sign = if (conv.h + 1).rem_euclid(2) == 0 { 1 } else { -1 };
    let rhs = (q_next * &s.q).scale(&s.field().from_i64(sign));
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::Mismatch(format!(
            "norm identity failed at convergent {}",
            conv.h
        )))
    }
}

/// A synchronized expansion: lines 0..=k with the convergents of
/// a_0..a_{k−1} consumed, so `lines.last().q` is the Q the norm
/// identity pairs with the current convergent.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub surd: QuadraticSurd,
    pub lines: Vec<GeneralCFLine>,
    pub conv: ConvergentState,
}

impl Expansion {
    pub fn new(surd: QuadraticSurd) -> Result<Expansion> {
        let first = start_line(&surd)?;
        let conv = ConvergentState::initial(surd.field());
        Ok(Expansion { surd, lines: vec![first], conv })
    }

    pub fn top_line(&self) -> &GeneralCFLine {
        self.lines.last().unwrap()
    }

    pub fn step(&mut self) -> Result<()> {
        let last = self.lines.last().unwrap();
        self.conv = self.conv.advance(&last.a);
        let next = cf_step_general(&self.surd, last)?;
        self.lines.push(next);
        Ok(())
    }

    pub fn advance(&mut self, steps: i64) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    pub fn check_norm_identity(&self) -> Result<()> {
        norm_identity_check(&self.surd, &self.conv, &self.top_line().q)
    }

    /// Degree of the current continuant denominator, cross-checked
    /// against −deg(x_{h−1} − y_{h−1}·Z) from the series side.
    pub fn distance(&self) -> Result<i64> {
        distance(&self.surd, &self.conv)
    }
}

/// The distance after h steps: deg y_h, verified against the series.
pub fn distance(s: &QuadraticSurd, conv: &ConvergentState) -> Result<i64> {
    if conv.h < 0 {
        return Err(Error::PreconditionFailed("no partial quotient consumed yet".into()));
    }
    let d1 = match conv.y.degree() {
        Degree::Finite(k) => k,
        Degree::MinusInfinity => {
            return Err(Error::InvariantBroken("zero continuant denominator".into()))
        }
    };
    let mut cutoff = -(2 * d1 + s.genus() + 8);
    for _ in 0..8 {
        match distance_series_degree(s, conv, cutoff) {
            Ok(d2) => {
                if d1 == -d2 {
                    return Ok(d1);
                }
                return Err(Error::InvariantBroken(format!(
                    "distance mismatch: continuant degree {d1}, series degree {d2}"
                )));
            }
            Err(Error::PrecisionExhausted) => cutoff *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionExhausted)
}

fn distance_series_degree(s: &QuadraticSurd, conv: &ConvergentState, cutoff: i64) -> Result<i64> {
    let y = s.y_series(cutoff)?;
    let num = y.add(&LaurentSeries::from_poly(&s.p, cutoff)?);
    let z = num.div(&LaurentSeries::from_poly(&s.q, cutoff)?)?;
    let head = LaurentSeries::from_poly(&conv.x_prev, cutoff)?;
    let val = head.sub(&LaurentSeries::from_poly(&conv.y_prev, cutoff)?.mul(&z));
    val.degree_certified()
}

/// Outcome of a periodicity scan.
#[derive(Debug, Clone)]
pub enum Periodicity {
    AperiodicSoFar { steps_scanned: i64 },
    Periodic(PeriodData),
}

/// A detected quasi-period: from line `preperiod` on, P repeats exactly
/// every `r_quasi` lines while Q returns scaled by `kappa`; `r_full` is
/// the measured distance to an exact (P, Q) return, when seen in budget.
#[derive(Debug, Clone)]
pub struct PeriodData {
    pub preperiod: i64,
    pub r_quasi: i64,
    pub kappa: FieldScalar,
    pub r_full: Option<i64>,
}

fn quasi_key(line: &GeneralCFLine) -> (Vec<FieldScalar>, Vec<FieldScalar>) {
    let lc_inv = line.q.leading().unwrap().inverse().unwrap();
    (line.p.coeffs().to_vec(), line.q.scale(&lc_inv).coeffs().to_vec())
}

/// Scan for the least r with P_{h+r} = P_h and Q_{h+r} = κ·Q_h.
pub fn detect_periodicity(s: &QuadraticSurd, max_steps: i64) -> Result<Periodicity> {
    let mut seen: HashMap<(Vec<FieldScalar>, Vec<FieldScalar>), i64> = HashMap::new();
    let mut line = start_line(s)?;
    seen.insert(quasi_key(&line), 0);
    let mut lines = vec![line.clone()];
    let mut hit: Option<(i64, i64)> = None;
    for k in 1..=max_steps {
        line = cf_step_general(s, &line)?;
        if let Some(&i) = seen.get(&quasi_key(&line)) {
            hit = Some((i, k));
            break;
        }
        seen.insert(quasi_key(&line), k);
        lines.push(line.clone());
    }
    let Some((i, j)) = hit else {
        return Ok(Periodicity::AperiodicSoFar { steps_scanned: max_steps });
    };
    let entry = &lines[i as usize];
    let kappa = line.q.leading().unwrap().checked_div(entry.q.leading().unwrap())?;
    // keep stepping until (P, Q) match the entry line on the nose
    let mut r_full = None;
    let mut probe = line.clone();
    let mut k = j;
    loop {
        if probe.p == entry.p && probe.q == entry.q {
            r_full = Some(k - i);
            break;
        }
        if k >= max_steps {
            break;
        }
        probe = cf_step_general(s, &probe)?;
        k += 1;
    }
    Ok(Periodicity::Periodic(PeriodData { preperiod: i, r_quasi: j - i, kappa, r_full }))
}

/// A unit extracted from a periodic expansion: x − y·Z has the given
/// constant norm and pole degree.
#[derive(Debug, Clone)]
pub struct CFUnit {
    pub x: Polynomial,
    pub y: Polynomial,
    pub norm: FieldScalar,
    pub degree: i64,
}

/// Walk the period until some Q_n is constant; the convergent just
/// before it is the fundamental unit of the expansion.
pub fn unit_from_period(s: &QuadraticSurd, period: &PeriodData) -> Result<CFUnit> {
    let Some(q0) = s.q.as_constant() else {
        return Err(Error::NoPeriodFound);
    };
    let budget = period.preperiod + period.r_full.unwrap_or(2 * period.r_quasi) + 1;
    let mut line = start_line(s)?;
    let mut conv = ConvergentState::initial(s.field());
    for n in 1..=budget {
        conv = conv.advance(&line.a);
        line = cf_step_general(s, &line)?;
        if let Some(qn) = line.q.as_constant() {
            norm_identity_check(s, &conv, &line.q)?;
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let norm = (&s.field().from_i64(sign) * &qn).checked_div(&q0)?;
            let degree = match conv.x.degree() {
                Degree::Finite(k) => k,
                Degree::MinusInfinity => 0,
            };
            return Ok(CFUnit { x: conv.x, y: conv.y, norm, degree });
        }
    }
    Err(Error::NoPeriodFound)
}

/// Symmetry positions within a run of lines: first kind is P_s = P_{s+1},
/// second kind is Q_s = Q_{s+1}. Positions use the lines' own indices.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub first_kind: Vec<i64>,
    pub second_kind: Vec<i64>,
    /// Set when the slice spans a length-1 period, where the two kinds
    /// collapse into one another.
    pub period_one_exception: bool,
}

pub fn detect_symmetries(lines: &[GeneralCFLine]) -> SymmetryReport {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for w in lines.windows(2) {
        if w[0].p == w[1].p {
            first.push(w[0].h);
        }
        if w[0].q == w[1].q {
            second.push(w[0].h);
        }
    }
    SymmetryReport {
        first_kind: first,
        second_kind: second,
        period_one_exception: lines.len() == 2,
    }
}

/// The two rescaled partial-quotient streams of the multiplication rule
/// B·[Ca₀; Ba₁, Ca₂, …] = C·[Ba₀; Ca₁, Ba₂, …].
pub fn schmidt_scale(
    quotients: &[Polynomial],
    b: &FieldScalar,
    c: &FieldScalar,
) -> Result<(Vec<Polynomial>, Vec<Polynomial>)> {
    if b.is_zero() || c.is_zero() {
        return Err(Error::PreconditionFailed("scale factors must be nonzero".into()));
    }
    let left = quotients
        .iter()
        .enumerate()
        .map(|(i, a)| a.scale(if i % 2 == 0 { c } else { b }))
        .collect();
    let right = quotients
        .iter()
        .enumerate()
        .map(|(i, a)| a.scale(if i % 2 == 0 { b } else { c }))
        .collect();
    Ok((left, right))
}

/// Cross-multiplied check that both sides of the multiplication rule
/// agree as finite continued fractions: B·x_L·y_R = C·x_R·y_L.
pub fn schmidt_verify(quotients: &[Polynomial], b: &FieldScalar, c: &FieldScalar) -> Result<()> {
    if quotients.is_empty() {
        return Ok(());
    }
    let (left, right) = schmidt_scale(quotients, b, c)?;
    let field = quotients[0].field();
    let fold = |qs: &[Polynomial]| {
        qs.iter()
            .fold(ConvergentState::initial(field), |st, a| st.advance(a))
    };
    let l = fold(&left);
    let r = fold(&right);
    let lhs = (&l.x * &r.y).scale(b);
    let rhs = (&r.x * &l.y).scale(c);
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::Mismatch("multiplication rule violated".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> FieldScalar {
        Field::Rationals.from_i64(n)
    }

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_coeffs_i64(Field::Rationals, coeffs)
    }

    /// (X²+f)² + 4(vX − u) with trace zero.
    fn quartic_d(f: i64, v: i64, u: i64) -> Polynomial {
        let a = p(&[f, 0, 1]);
        &a.pow(2) + &p(&[-4 * u, 4 * v])
    }

    fn zero_trace() -> Polynomial {
        Polynomial::zero(Field::Rationals)
    }

    // D = (X²−3)² + 4(X−2), the running example with a non-torsion point
    fn d_42() -> Polynomial {
        quartic_d(-3, 1, 2)
    }

    fn a_42() -> Polynomial {
        p(&[-3, 0, 1])
    }

    #[test]
    fn construction_rejects_degenerates() {
        let field = Field::Rationals;
        let square = p(&[-1, 0, 1]).pow(2);
        assert!(matches!(
            QuadraticSurd::sqrt_like(square, zero_trace()),
            Err(Error::DegenerateSquare)
        ));
        assert!(matches!(
            QuadraticSurd::sqrt_like(p(&[0, 0, 0, 1]), zero_trace()),
            Err(Error::OddDegree)
        ));
        assert!(matches!(
            QuadraticSurd::new(d_42(), zero_trace(), Polynomial::zero(field), Polynomial::zero(field)),
            Err(Error::DivisionByZero)
        ));
        // Q = X does not divide the norm of P = X
        assert!(matches!(
            QuadraticSurd::new(d_42(), zero_trace(), Polynomial::x(field), Polynomial::x(field)),
            Err(Error::IdealViolation)
        ));
        // trace degree above the genus bound
        assert!(matches!(
            QuadraticSurd::new(d_42(), p(&[0, 0, 1]), Polynomial::zero(field), Polynomial::one(field)),
            Err(Error::PreconditionFailed(_))
        ));
        // a repeated root is allowed but flagged
        let s = QuadraticSurd::sqrt_like(p(&[3, -4, 0, 0, 1]), zero_trace()).unwrap();
        assert!(s.has_multiple_roots());
        assert!(!QuadraticSurd::sqrt_like(d_42(), zero_trace()).unwrap().has_multiple_roots());
    }

    #[test]
    fn reducedness_examples() {
        let half_sum = QuadraticSurd::new(
            d_42(),
            zero_trace(),
            a_42(),
            Polynomial::constant(q(2)),
        )
        .unwrap();
        assert!(is_reduced(&half_sum).unwrap());
        let plain = QuadraticSurd::sqrt_like(d_42(), zero_trace()).unwrap();
        assert!(!is_reduced(&plain).unwrap());
        // stepping from a reduced start stays reduced
        let mut line = start_line(&half_sum).unwrap();
        for _ in 0..8 {
            line = cf_step_general(&half_sum, &line).unwrap();
            assert!(line.is_reduced(&half_sum).unwrap());
        }
    }

    #[test]
    fn partial_quotient_examples() {
        // (Y + X² − 1) / (2(X−1)) on the running curve
        let s = QuadraticSurd::new(
            d_42(),
            zero_trace(),
            p(&[-1, 0, 1]),
            p(&[-2, 2]),
        )
        .unwrap();
        let l0 = start_line(&s).unwrap();
        assert_eq!(l0.a, p(&[1, 1]));
        let l1 = cf_step_general(&s, &l0).unwrap();
        assert_eq!(l1.p, p(&[-1, 0, 1]));
        assert_eq!(l1.q, p(&[0, -2]));

        // the other worked curve: (Y + X² − 13) / (8(X+3))
        let d41 = quartic_d(-29, -48, 240);
        let s41 = QuadraticSurd::new(d41, zero_trace(), p(&[-13, 0, 1]), p(&[24, 8])).unwrap();
        let l0 = start_line(&s41).unwrap();
        assert_eq!(l0.a, p(&[-3, 1]).scale(&FieldScalar::rational(1.into(), 4.into()).unwrap()));
    }

    #[test]
    fn quasi_period_one_when_linear_term_vanishes() {
        // D = (X²+1)² − 4: the expansion of (Y + A)/(−4) cycles at once
        let d = quartic_d(1, 0, 1);
        let a = p(&[1, 0, 1]);
        let s = QuadraticSurd::new(d, zero_trace(), a.clone(), Polynomial::constant(q(-4))).unwrap();
        let lines = expand_lines(&s, 2).unwrap();
        assert_eq!(lines[1].p, a);
        assert_eq!(lines[1].q, Polynomial::one(Field::Rationals));
        assert_eq!(lines[2].p, lines[0].p);
        assert_eq!(lines[2].q, lines[0].q);
        match detect_periodicity(&s, 16).unwrap() {
            Periodicity::Periodic(pd) => {
                assert_eq!((pd.preperiod, pd.r_quasi), (0, 1));
                assert_eq!(pd.kappa, FieldScalar::rational((-1).into(), 4.into()).unwrap());
                assert_eq!(pd.r_full, Some(2));
            }
            other => panic!("expected a period, got {other:?}"),
        }
    }

    #[test]
    fn back_step_examples() {
        // stepping line 0 of the second worked curve backwards
        let d41 = quartic_d(-29, -48, 240);
        let s = QuadraticSurd::new(d41, zero_trace(), p(&[-13, 0, 1]), p(&[24, 8])).unwrap();
        let l0 = start_line(&s).unwrap();
        let back = conjugate_step_back(&s, &l0).unwrap();
        assert_eq!(back.h, -1);
        assert_eq!(back.q, p(&[-12, -4]));
        assert_eq!(back.a, p(&[3, -1]).scale(&FieldScalar::rational(1.into(), 2.into()).unwrap()));
        assert_eq!(back.p, p(&[-5, 0, 1]));
        assert_eq!(cf_step_general(&s, &back).unwrap(), l0);

        // round trips in both orders on a reduced start
        let sym = QuadraticSurd::new(d_42(), zero_trace(), a_42(), Polynomial::constant(q(2))).unwrap();
        let l0 = start_line(&sym).unwrap();
        let fwd = cf_step_general(&sym, &l0).unwrap();
        assert_eq!(conjugate_step_back(&sym, &fwd).unwrap(), l0);
        // the symmetric start mirrors: line −1 repeats line 1's (Q, a)
        let mirror = conjugate_step_back(&sym, &l0).unwrap();
        assert_eq!(mirror.q, fwd.q);
        assert_eq!(mirror.a, fwd.a);
    }

    #[test]
    fn convergents_and_determinant() {
        let st = ConvergentState::initial(Field::Rationals).advance(&Polynomial::x(Field::Rationals));
        assert_eq!(st.x, Polynomial::x(Field::Rationals));
        assert_eq!(st.y, Polynomial::one(Field::Rationals));
        assert!(st.determinant_ok());

        let s = QuadraticSurd::new(d_42(), zero_trace(), a_42(), Polynomial::constant(q(2))).unwrap();
        let mut exp = Expansion::new(s).unwrap();
        for _ in 0..8 {
            exp.step().unwrap();
            assert!(exp.conv.determinant_ok());
        }
    }

    #[test]
    fn norm_identity_along_the_expansion() {
        // expansion of Y itself: not reduced at line 0, but the identity
        // holds from the first convergent on
        let s = QuadraticSurd::sqrt_like(d_42(), zero_trace()).unwrap();
        let mut exp = Expansion::new(s).unwrap();
        for _ in 0..=10 {
            exp.step().unwrap();
            exp.check_norm_identity().unwrap();
        }
        // and on a denominator-bearing start
        let s2 = QuadraticSurd::new(d_42(), zero_trace(), p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        let mut exp2 = Expansion::new(s2).unwrap();
        for _ in 0..6 {
            exp2.step().unwrap();
            exp2.check_norm_identity().unwrap();
        }
    }

    #[test]
    fn distance_counts_denominator_degree() {
        // every partial quotient here has degree 1, so after reaching
        // index h the distance is exactly h
        let d41 = quartic_d(-29, -48, 240);
        let s = QuadraticSurd::new(d41, zero_trace(), p(&[-13, 0, 1]), p(&[24, 8])).unwrap();
        let mut exp = Expansion::new(s).unwrap();
        exp.step().unwrap();
        assert_eq!(exp.conv.h, 0);
        assert_eq!(exp.distance().unwrap(), 0);
        exp.step().unwrap();
        assert_eq!(exp.distance().unwrap(), 1);
        exp.advance(2).unwrap();
        assert_eq!(exp.conv.h, 3);
        assert_eq!(exp.distance().unwrap(), 3);
    }

    #[test]
    fn torsion_three_cycle() {
        // f + w² = 0: D = (X²−1)² + 4(X−1)
        let d = quartic_d(-1, 1, 1);
        let a = p(&[-1, 0, 1]);
        let s = QuadraticSurd::new(d, zero_trace(), a.clone(), Polynomial::constant(q(2))).unwrap();
        let pd = match detect_periodicity(&s, 64).unwrap() {
            Periodicity::Periodic(pd) => pd,
            other => panic!("expected a period, got {other:?}"),
        };
        assert_eq!((pd.preperiod, pd.r_quasi, pd.r_full), (0, 2, Some(2)));
        assert!(pd.kappa.is_one());
        let unit = unit_from_period(&s, &pd).unwrap();
        assert_eq!(unit.x, p(&[0, -1, 1, 1]));
        assert_eq!(unit.y, p(&[1, 1]));
        assert!(unit.norm.is_one());
        assert_eq!(unit.degree, 3);
        let lines = expand_lines(&s, 2).unwrap();
        let sym = detect_symmetries(&lines);
        assert_eq!(sym.first_kind, vec![0, 1]);
        assert!(sym.second_kind.is_empty());
        assert!(!sym.period_one_exception);
    }

    #[test]
    fn torsion_four_cycle() {
        // v + 2w(f + w²) = 0: D = X⁴ − 8X + 8
        let d = quartic_d(0, -2, -2);
        let a = p(&[0, 0, 1]);
        let s = QuadraticSurd::new(d, zero_trace(), a, Polynomial::constant(q(2))).unwrap();
        let pd = match detect_periodicity(&s, 64).unwrap() {
            Periodicity::Periodic(pd) => pd,
            other => panic!("expected a period, got {other:?}"),
        };
        assert_eq!((pd.preperiod, pd.r_quasi, pd.r_full), (0, 3, Some(6)));
        assert_eq!(pd.kappa, q(4));
        let unit = unit_from_period(&s, &pd).unwrap();
        assert_eq!(unit.norm, q(-4));
        assert_eq!(unit.degree, 4);
        let lines = expand_lines(&s, 6).unwrap();
        let sym = detect_symmetries(&lines);
        assert_eq!(sym.first_kind, vec![0, 3]);
        assert!(sym.second_kind.is_empty());
    }

    #[test]
    fn torsion_two_cycle() {
        // v = 0, u ≠ 0: D = (X²+1)² − 4, start (Y + A)/2
        let d = quartic_d(1, 0, 1);
        let a = p(&[1, 0, 1]);
        let s = QuadraticSurd::new(d, zero_trace(), a.clone(), Polynomial::constant(q(2))).unwrap();
        let pd = match detect_periodicity(&s, 64).unwrap() {
            Periodicity::Periodic(pd) => pd,
            other => panic!("expected a period, got {other:?}"),
        };
        assert_eq!((pd.preperiod, pd.r_quasi, pd.r_full), (0, 1, Some(2)));
        assert_eq!(pd.kappa, q(-1));
        let unit = unit_from_period(&s, &pd).unwrap();
        assert_eq!(unit.x, a);
        assert_eq!(unit.y, Polynomial::one(Field::Rationals));
        assert!(unit.norm.is_one());
        assert_eq!(unit.degree, 2);
        let lines = expand_lines(&s, 1).unwrap();
        let sym = detect_symmetries(&lines);
        assert_eq!(sym.first_kind, vec![0]);
        assert!(sym.period_one_exception);
    }

    #[test]
    fn finite_field_expansion_is_periodic() {
        let field = Field::prime(101).unwrap();
        let f = field.from_i64(3);
        let v = field.from_i64(7);
        let u = field.from_i64(14);
        let a = Polynomial::new(field, vec![f, field.zero(), field.one()]).unwrap();
        let lin = Polynomial::new(field, vec![&field.from_i64(-4) * &u, &field.from_i64(4) * &v]).unwrap();
        let d = &a.pow(2) + &lin;
        let s = QuadraticSurd::new(d, Polynomial::zero(field), a, Polynomial::constant(field.from_i64(2))).unwrap();
        match detect_periodicity(&s, 4096).unwrap() {
            Periodicity::Periodic(pd) => {
                assert!(pd.r_quasi > 0);
                assert!(pd.r_full.is_some());
            }
            Periodicity::AperiodicSoFar { .. } => panic!("finite field expansion must cycle"),
        }
    }

    #[test]
    fn multiplication_rule() {
        let quotients = vec![
            p(&[1, 1]),
            p(&[-3, 2]),
            p(&[0, 1]),
            p(&[-1, 1]),
            p(&[2, 3]),
            p(&[5, 1]),
        ];
        schmidt_verify(&quotients, &q(1), &q(1)).unwrap();
        schmidt_verify(&quotients, &q(2), &q(3)).unwrap();
        schmidt_verify(&quotients, &q(-5), &q(7)).unwrap();
        let (l, r) = schmidt_scale(&quotients, &q(2), &q(2)).unwrap();
        assert_eq!(l, r);
        assert!(matches!(
            schmidt_scale(&quotients, &q(0), &q(3)),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn surd_json_round_trip() {
        let s = QuadraticSurd::new(d_42(), zero_trace(), a_42(), Polynomial::constant(q(2))).unwrap();
        let back = QuadraticSurd::from_json(&s.to_json()).unwrap();
        assert_eq!(back.d, s.d);
        assert_eq!(back.p, s.p);
        assert_eq!(back.q, s.q);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn expansion_invariants_hold(
            f in -6i64..=6,
            v in -6i64..=6,
            u in -6i64..=6,
        ) {
            prop_assume!(v != 0 || u != 0);
            let d = quartic_d(f, v, u);
            let a = p(&[f, 0, 1]);
            let surd = match QuadraticSurd::new(d, zero_trace(), a, Polynomial::constant(q(2))) {
                Ok(s) => s,
                Err(_) => return Ok(()), // degenerate square family member
            };
            prop_assert!(is_reduced(&surd).unwrap());
            let mut exp = Expansion::new(surd.clone()).unwrap();
            for _ in 0..6 {
                exp.step().unwrap();
                let top = exp.top_line().clone();
                // exact ideal condition
                prop_assert!(surd.norm_poly(&top.p).divmod(&top.q).unwrap().1.is_zero());
                prop_assert!(top.is_reduced(&surd).unwrap());
                prop_assert!(exp.conv.determinant_ok());
                exp.check_norm_identity().unwrap();
                let back = conjugate_step_back(&surd, &top).unwrap();
                prop_assert_eq!(&back, &exp.lines[exp.lines.len() - 2]);
            }
        }
    }
}
