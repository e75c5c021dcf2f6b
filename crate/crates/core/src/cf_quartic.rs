//! Closed-form continued fraction stepping for Y = sqrt((X^2+f)^2 + 4v(X-w)).
//!
//! For this quartic shape every complete quotient is
//! (Y + A + 2e_h) / (v_h (X - w_h)) with A = X^2 + f, so the whole
//! expansion lives in the three scalar streams (w_h, v_h, e_h). Stepping
//! is a handful of field operations per line:
//!
//! - w_{h+1} = v/e_{h+1} - w_h
//! - v_{h+1} = -4 e_{h+1} / v_h
//! - e_{h+2} = -f - w_{h+1}^2 - e_{h+1}
//!
//! and the mirror recursion steps backward, so the tableau is two-sided.
//! Every state keeps the two defining constraints
//! f + e_h + e_{h+1} = -w_h^2 and e_h e_{h+1} = u - v w_h, which the
//! stepping functions re-verify after each move.
//!
//! A zero e blocks the specialized recursion ([`Error::SingularStep`]);
//! [`singular_start`] instead begins the tableau at the line with e_1 = 0,
//! which is the expansion of Y itself.

use crate::cf_general::QuadraticSurd;
use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::poly::Polynomial;
use num_traits::Signed;

/// The quartic-model curve Y^2 = (X^2+f)^2 + 4(vX - u).
///
/// Stored as (f, v, u) so the v = 0, u != 0 degeneration stays
/// representable; w = u/v exists only when v != 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticCurve {
    pub f: FieldScalar,
    pub v: FieldScalar,
    pub u: FieldScalar,
}

impl QuarticCurve {
    pub fn new(f: FieldScalar, v: FieldScalar, u: FieldScalar) -> Result<QuarticCurve> {
        if f.field() != v.field() || f.field() != u.field() {
            return Err(Error::FieldMismatch);
        }
        if v.is_zero() && u.is_zero() {
            // D = (X^2+f)^2 exactly; Y is not irrational.
            return Err(Error::DegenerateSquare);
        }
        Ok(QuarticCurve { f, v, u })
    }

    /// Construct from (f, v, w) with u = v*w; v must be nonzero here.
    pub fn from_fvw(f: FieldScalar, v: FieldScalar, w: FieldScalar) -> Result<QuarticCurve> {
        if v.is_zero() {
            return Err(Error::ZeroV);
        }
        let u = &v * &w;
        QuarticCurve::new(f, v, u)
    }

    pub fn field(&self) -> Field {
        self.f.field()
    }

    /// w = u/v; only defined when v != 0.
    pub fn w(&self) -> Result<FieldScalar> {
        self.u.checked_div(&self.v).map_err(|_| Error::ZeroV)
    }

    /// A = X^2 + f.
    pub fn a_poly(&self) -> Polynomial {
        let field = self.field();
        Polynomial::new(field, vec![self.f.clone(), field.zero(), field.one()]).unwrap()
    }

    /// D = A^2 + 4(vX - u).
    pub fn d_poly(&self) -> Polynomial {
        let field = self.field();
        let a = self.a_poly();
        let four = field.from_i64(4);
        let lin = Polynomial::new(
            field,
            vec![(&four * &self.u).neg_ref(), &four * &self.v],
        )
        .unwrap();
        &a.pow(2) + &lin
    }

    pub fn discriminant(&self) -> FieldScalar {
        self.d_poly().discriminant().unwrap()
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// Whether (x, y) satisfies y^2 = D(x).
    pub fn contains(&self, x: &FieldScalar, y: &FieldScalar) -> bool {
        y * y == self.d_poly().eval(x)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "f": self.f.to_json(),
            "v": self.v.to_json(),
            "u": self.u.to_json(),
        })
    }

    pub fn from_json(val: &serde_json::Value) -> Result<QuarticCurve> {
        let bad = || Error::Parse(format!("quartic curve json {val}"));
        let get = |k: &str| -> Result<FieldScalar> {
            FieldScalar::from_json(val.get(k).ok_or_else(bad)?)
        };
        QuarticCurve::new(get("f")?, get("v")?, get("u")?)
    }
}

/// One line of the specialized tableau.
///
/// Carries e_{h+1} alongside e_h so the point (w_h, e_h - e_{h+1}) can be
/// read off without look-ahead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticCFState {
    pub h: i64,
    pub w_h: FieldScalar,
    pub v_h: FieldScalar,
    pub e_h: FieldScalar,
    pub e_next: FieldScalar,
}

impl QuarticCFState {
    /// Check the two defining constraints against the curve.
    pub fn validate(&self, c: &QuarticCurve) -> Result<()> {
        let sum = &(&c.f + &self.e_h) + &self.e_next;
        if sum != (&self.w_h * &self.w_h).neg_ref() {
            return Err(Error::InvariantBroken(format!(
                "f + e_{h} + e_{h1} != -w_{h}^2 at h = {h}",
                h = self.h,
                h1 = self.h + 1
            )));
        }
        let prod = &self.e_h * &self.e_next;
        if prod != &c.u - &(&c.v * &self.w_h) {
            return Err(Error::InvariantBroken(format!(
                "e_{h} e_{h1} != u - v w_{h} at h = {h}",
                h = self.h,
                h1 = self.h + 1
            )));
        }
        Ok(())
    }

    /// Numerator shift of the complete quotient: P_h = A + 2e_h.
    pub fn line_p(&self, c: &QuarticCurve) -> Polynomial {
        let two = self.w_h.small(2);
        &c.a_poly() + &Polynomial::constant(&two * &self.e_h)
    }

    /// Denominator of the complete quotient: Q_h = v_h (X - w_h).
    pub fn line_q(&self) -> Polynomial {
        Polynomial::new(
            self.w_h.field(),
            vec![(&self.v_h * &self.w_h).neg_ref(), self.v_h.clone()],
        )
        .unwrap()
    }

    /// Partial quotient a_h = (2/v_h)(X + w_h).
    pub fn partial_quotient(&self) -> Result<Polynomial> {
        let two_over_v = self.w_h.small(2).checked_div(&self.v_h)?;
        Polynomial::new(
            self.w_h.field(),
            vec![&two_over_v * &self.w_h, two_over_v.clone()],
        )
    }

    /// Denominator scalar with the sign convention used for printing:
    /// over Q the displayed tableau normalizes v_h to be positive.
    pub fn display_v(&self) -> FieldScalar {
        match &self.v_h {
            FieldScalar::Rational(r) if r.is_negative() => self.v_h.neg_ref(),
            _ => self.v_h.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "h": self.h,
            "v_h": self.v_h.to_json(),
            "w_h": self.w_h.to_json(),
            "e_h": self.e_h.to_json(),
        })
    }
}

/// Start the expansion at the line whose point is M = (x, y) on the curve.
///
/// e_0 - e_1 = y and e_0 e_1 = u - v x hold by construction; v0 is the
/// free denominator normalization of line 0.
pub fn init_from_point(
    c: &QuarticCurve,
    x: &FieldScalar,
    y: &FieldScalar,
    v0: &FieldScalar,
) -> Result<QuarticCFState> {
    if c.v.is_zero() {
        return Err(Error::ZeroV);
    }
    if v0.is_zero() {
        return Err(Error::ZeroNormalization);
    }
    if !c.contains(x, y) {
        return Err(Error::PointNotOnCurve);
    }
    let half = x.small(2).inverse()?;
    let a_at_x = &(x * x) + &c.f;
    let e0 = &(y - &a_at_x) * &half;
    let e1 = &(&y.neg_ref() - &a_at_x) * &half;
    let s = QuarticCFState { h: 0, w_h: x.clone(), v_h: v0.clone(), e_h: e0, e_next: e1 };
    s.validate(c)?;
    Ok(s)
}

/// Advance one line. Fails on e_{h+1} = 0 (the singular configuration).
pub fn step_forward(s: &QuarticCFState, c: &QuarticCurve) -> Result<QuarticCFState> {
    if c.v.is_zero() {
        return Err(Error::ZeroV);
    }
    if s.e_next.is_zero() {
        return Err(Error::SingularStep { h: s.h + 1 });
    }
    let w_next = &c.v.checked_div(&s.e_next)? - &s.w_h;
    let v_next = (&s.w_h.small(4) * &s.e_next).neg_ref().checked_div(&s.v_h)?;
    let e_after = &(&c.f.neg_ref() - &(&w_next * &w_next)) - &s.e_next;
    let next = QuarticCFState {
        h: s.h + 1,
        w_h: w_next,
        v_h: v_next,
        e_h: s.e_next.clone(),
        e_next: e_after,
    };
    next.validate(c)?;
    Ok(next)
}

/// Retreat one line. Fails on e_h = 0.
pub fn step_backward(s: &QuarticCFState, c: &QuarticCurve) -> Result<QuarticCFState> {
    if c.v.is_zero() {
        return Err(Error::ZeroV);
    }
    if s.e_h.is_zero() {
        return Err(Error::SingularStep { h: s.h });
    }
    let w_prev = &c.v.checked_div(&s.e_h)? - &s.w_h;
    let e_prev = &(&c.f.neg_ref() - &(&w_prev * &w_prev)) - &s.e_h;
    let v_prev = (&s.w_h.small(4) * &s.e_h).neg_ref().checked_div(&s.v_h)?;
    let prev = QuarticCFState {
        h: s.h - 1,
        w_h: w_prev,
        v_h: v_prev,
        e_h: e_prev,
        e_next: s.e_h.clone(),
    };
    prev.validate(c)?;
    Ok(prev)
}

/// The expansion of Y itself, entered at line 1 where e_1 = 0.
///
/// This is the seed of the divisibility sequence: the e-stream it
/// produces is independent of any base point.
pub fn singular_start(c: &QuarticCurve) -> Result<QuarticCFState> {
    if c.v.is_zero() {
        return Err(Error::ZeroV);
    }
    let w = c.w()?;
    let fw2 = &c.f + &(&w * &w);
    if fw2.is_zero() {
        // e_2 would vanish too: the divisor at infinity has order 3.
        return Err(Error::TorsionDegenerate { m: 3 });
    }
    let s = QuarticCFState {
        h: 1,
        w_h: w.clone(),
        v_h: &w.small(4) * &c.v,
        e_h: w.small(0),
        e_next: fw2.neg_ref(),
    };
    s.validate(c)?;
    Ok(s)
}

/// Walk `n` steps forward collecting states (including the start).
pub fn run_forward(start: &QuarticCFState, c: &QuarticCurve, n: usize) -> Result<Vec<QuarticCFState>> {
    let mut out = vec![start.clone()];
    for _ in 0..n {
        let next = step_forward(out.last().unwrap(), c)?;
        out.push(next);
    }
    Ok(out)
}

/// Walk `n` steps backward collecting states (start first, then h-1, h-2, ...).
pub fn run_backward(start: &QuarticCFState, c: &QuarticCurve, n: usize) -> Result<Vec<QuarticCFState>> {
    let mut out = vec![start.clone()];
    for _ in 0..n {
        let prev = step_backward(out.last().unwrap(), c)?;
        out.push(prev);
    }
    Ok(out)
}

/// The same expansion handed to the generic engine: (Y + A + 2e_h) / (v_h(X - w_h)).
pub fn general_surd(c: &QuarticCurve, s: &QuarticCFState) -> Result<QuadraticSurd> {
    QuadraticSurd::new(
        c.d_poly(),
        Polynomial::zero(c.field()),
        s.line_p(c),
        s.line_q(),
    )
}

/// Agreement report from [`cross_check_general`].
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    /// Indices of the lines compared, relative to the start line.
    pub lines_checked: usize,
}

/// Run the scalar recursion and the generic engine side by side for `n`
/// steps and insist every line agrees verbatim: same P, same Q, same
/// partial quotient. Both store the raw recursion values, so no sign
/// normalization separates them.
pub fn cross_check_general(
    c: &QuarticCurve,
    start: &QuarticCFState,
    n: usize,
) -> Result<CrossCheckReport> {
    let surd = general_surd(c, start)?;
    let mut gline = crate::cf_general::start_line(&surd)?;
    let mut state = start.clone();
    for step in 0..=n {
        let (p, q, a) = (state.line_p(c), state.line_q(), state.partial_quotient()?);
        if p != gline.p || q != gline.q || a != gline.a {
            return Err(Error::Mismatch(format!(
                "engines disagree {step} lines past h = {}: scalar form gives P = {p}, Q = {q}, a = {a}; generic engine gives P = {}, Q = {}, a = {}",
                start.h, gline.p, gline.q, gline.a
            )));
        }
        if step < n {
            state = step_forward(&state, c)?;
            gline = crate::cf_general::cf_step_general(&surd, &gline)?;
        }
    }
    Ok(CrossCheckReport { lines_checked: n + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> FieldScalar {
        Field::Rationals.from_i64(n)
    }

    fn qr(n: i64, d: i64) -> FieldScalar {
        use num_bigint::BigInt;
        FieldScalar::rational(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    fn curve_a() -> QuarticCurve {
        // f = -29, v = -48, u = 240 (w = -5)
        QuarticCurve::new(q(-29), q(-48), q(240)).unwrap()
    }

    fn curve_b() -> QuarticCurve {
        // f = -3, v = 1, u = 2 (w = 2)
        QuarticCurve::new(q(-3), q(1), q(2)).unwrap()
    }

    #[test]
    fn curve_polynomials() {
        assert_eq!(
            curve_b().d_poly(),
            Polynomial::from_coeffs_i64(Field::Rationals, &[1, 4, -6, 0, 1])
        );
        assert_eq!(curve_b().discriminant(), q(9472));
        assert!(!curve_b().is_singular());
        assert_eq!(curve_a().w().unwrap(), q(-5));
    }

    #[test]
    fn init_matches_tableau_start() {
        let s = init_from_point(&curve_a(), &q(-3), &q(-4), &q(8)).unwrap();
        assert_eq!((s.w_h, s.e_h, s.e_next), (q(-3), q(8), q(12)));
        let s = init_from_point(&curve_b(), &q(1), &q(0), &q(1)).unwrap();
        assert_eq!((s.w_h, s.e_h, s.e_next), (q(1), q(1), q(1)));
    }

    #[test]
    fn init_rejects_bad_inputs() {
        assert!(matches!(
            init_from_point(&curve_a(), &q(-3), &q(5), &q(8)),
            Err(Error::PointNotOnCurve)
        ));
        assert!(matches!(
            init_from_point(&curve_a(), &q(-3), &q(-4), &q(0)),
            Err(Error::ZeroNormalization)
        ));
    }

    #[test]
    fn forward_walk_first_curve() {
        let c = curve_a();
        let s0 = init_from_point(&c, &q(-3), &q(-4), &q(8)).unwrap();
        let run = run_forward(&s0, &c, 3).unwrap();
        let e: Vec<_> = run.iter().map(|s| s.e_h.clone()).collect();
        assert_eq!(e, vec![q(8), q(12), q(16), q(9)]);
        let w: Vec<_> = run.iter().map(|s| s.w_h.clone()).collect();
        assert_eq!(w, vec![q(-3), q(-1), q(-2), qr(-10, 3)]);
        let v: Vec<_> = run.iter().map(|s| s.v_h.clone()).collect();
        assert_eq!(v, vec![q(8), q(-6), qr(32, 3), qr(-27, 8)]);
        // printed denominators carry |v_h|
        let dv: Vec<_> = run.iter().map(|s| s.display_v()).collect();
        assert_eq!(dv, vec![q(8), q(6), qr(32, 3), qr(27, 8)]);
    }

    #[test]
    fn backward_walk_is_symmetric_after_scaling() {
        let c = curve_a();
        let s0 = init_from_point(&c, &q(-3), &q(-4), &q(8)).unwrap();
        let back = run_backward(&s0, &c, 3).unwrap();
        let e: Vec<_> = back.iter().map(|s| s.e_h.clone()).collect();
        assert_eq!(e, vec![q(8), q(12), q(16), q(9)]);
        let v: Vec<_> = back.iter().map(|s| s.v_h.clone()).collect();
        assert_eq!(v, vec![q(8), q(-4), q(12), qr(-16, 3)]);
        // e/4 for h = -3..=3 reads (9/4, 4, 3, 2, 3, 4, 9/4)
        let fwd = run_forward(&s0, &c, 3).unwrap();
        let quarter = q(4).inverse().unwrap();
        let mut scaled: Vec<_> = back[1..].iter().rev().map(|s| &s.e_h * &quarter).collect();
        scaled.extend(fwd.iter().map(|s| &s.e_h * &quarter));
        assert_eq!(
            scaled,
            vec![qr(9, 4), q(4), q(3), q(2), q(3), q(4), qr(9, 4)]
        );
    }

    #[test]
    fn forward_walk_second_curve() {
        let c = curve_b();
        let s0 = init_from_point(&c, &q(1), &q(0), &q(1)).unwrap();
        let run = run_forward(&s0, &c, 3).unwrap();
        assert_eq!(run[1].w_h, q(0));
        assert_eq!(run[1].e_next, q(2));
        assert_eq!(run[2].w_h, qr(1, 2));
        assert_eq!(run[2].e_next, qr(3, 4));
        assert_eq!(run[3].w_h, qr(5, 6));
        assert_eq!(run[3].e_next, qr(14, 9));
        // two-sided e-list around the start is ..., 2, 1, 1, 2, ...
        let back = step_backward(&s0, &c).unwrap();
        assert_eq!(back.e_h, q(2));
    }

    #[test]
    fn round_trip_forward_backward() {
        let c = curve_a();
        let mut s = init_from_point(&c, &q(-3), &q(-4), &q(8)).unwrap();
        for _ in 0..5 {
            let fwd = step_forward(&s, &c).unwrap();
            assert_eq!(step_backward(&fwd, &c).unwrap(), s);
            s = fwd;
        }
    }

    #[test]
    fn line_polynomials_match_closed_forms() {
        let c = curve_a();
        let s = init_from_point(&c, &q(-3), &q(-4), &q(8)).unwrap();
        // P_0 = A + 16, Q_0 = 8(X+3), a_0 = (X-3)/4
        assert_eq!(
            s.line_p(&c),
            Polynomial::from_coeffs_i64(Field::Rationals, &[-13, 0, 1])
        );
        assert_eq!(
            s.line_q(),
            Polynomial::from_coeffs_i64(Field::Rationals, &[24, 8])
        );
        let a = s.partial_quotient().unwrap();
        assert_eq!(a, Polynomial::new(Field::Rationals, vec![qr(-3, 4), qr(1, 4)]).unwrap());
    }

    #[test]
    fn singular_start_values() {
        let c = curve_a();
        let s1 = singular_start(&c).unwrap();
        assert_eq!((s1.h, s1.w_h.clone(), s1.v_h.clone()), (1, q(-5), q(-192)));
        assert_eq!((s1.e_h.clone(), s1.e_next.clone()), (q(0), q(4)));
        // x = v/(f+w^2) = 12 here
        let s2 = step_forward(&s1, &c).unwrap();
        assert_eq!(s2.e_next, q(-24)); // e_3 = -x(x+2w)
        // w_2 = -(x+w): the sign is forced by e_2 e_3 = u - v w_2
        assert_eq!(s2.w_h, q(-7));
        assert_eq!(&s2.e_h * &s2.e_next, &c.u - &(&c.v * &s2.w_h));
        // v_2 = 1/x
        assert_eq!(s2.v_h, qr(1, 12));
        let s3 = step_forward(&s2, &c).unwrap();
        assert_eq!(s3.e_next, q(-28)); // e_4 = v(x^2(x+2w) - v)/(x^2(x+2w)^2)
    }

    #[test]
    fn singular_start_torsion_guard() {
        // f + w^2 = 0: divisor at infinity has order 3
        let c = QuarticCurve::from_fvw(q(-1), q(1), q(1)).unwrap();
        assert!(matches!(singular_start(&c), Err(Error::TorsionDegenerate { m: 3 })));
    }

    #[test]
    fn stepping_into_zero_e_is_singular() {
        let c = curve_a();
        let s1 = singular_start(&c).unwrap();
        // e_1 = 0 blocks the backward move out of line 1
        assert!(matches!(step_backward(&s1, &c), Err(Error::SingularStep { h: 1 })));
    }

    #[test]
    fn v_zero_curve_is_representable_but_not_steppable() {
        let c = QuarticCurve::new(q(-3), q(0), q(2)).unwrap();
        assert!(matches!(c.w(), Err(Error::ZeroV)));
        assert!(matches!(singular_start(&c), Err(Error::ZeroV)));
        assert!(matches!(
            QuarticCurve::new(q(-3), q(0), q(0)),
            Err(Error::DegenerateSquare)
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = curve_a();
        assert_eq!(QuarticCurve::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn engines_agree_on_running_curve() {
        let c = curve_b();
        let s0 = init_from_point(&c, &q(1), &q(0), &q(1)).unwrap();
        let report = cross_check_general(&c, &s0, 10).unwrap();
        assert_eq!(report.lines_checked, 11);
    }

    #[test]
    fn engines_agree_on_second_curve() {
        let c = curve_a();
        let s0 = init_from_point(&c, &q(-3), &q(-4), &q(8)).unwrap();
        let report = cross_check_general(&c, &s0, 6).unwrap();
        assert_eq!(report.lines_checked, 7);
    }

    #[test]
    fn engines_agree_over_finite_field() {
        // build the curve around a chosen state so no point search is
        // needed; try a few seeds until one walks 50 lines without a
        // vanishing e
        let field = Field::prime(101).unwrap();
        let mut done = false;
        'outer: for seed in 1..20i64 {
            let w0 = field.from_i64(seed);
            let e0 = field.from_i64(seed + 2);
            let e1 = field.from_i64(2 * seed + 5);
            let v = field.from_i64(seed + 7);
            let f = (&(&e0 + &e1).neg_ref() - &(&w0 * &w0)).clone();
            let u = &(&e0 * &e1) + &(&v * &w0);
            let Ok(c) = QuarticCurve::new(f, v, u) else { continue };
            let s0 = QuarticCFState {
                h: 0,
                w_h: w0,
                v_h: field.one(),
                e_h: e0,
                e_next: e1,
            };
            if s0.validate(&c).is_err() {
                continue;
            }
            let mut probe = s0.clone();
            for _ in 0..50 {
                match step_forward(&probe, &c) {
                    Ok(next) => probe = next,
                    Err(_) => continue 'outer,
                }
            }
            let report = cross_check_general(&c, &s0, 50).unwrap();
            assert_eq!(report.lines_checked, 51);
            done = true;
            break;
        }
        assert!(done, "no candidate state walked 50 lines");
    }
}
