//! The golden check suite: every worked example and property sweep the
//! project promises, packaged as functions that either return a short
//! summary or the first exact mismatch. The acceptance tests and the CLI
//! `examples` subcommand both run these.

use crate::cf_general::{detect_periodicity, schmidt_verify, Expansion, Periodicity, QuadraticSurd};
use crate::cf_quartic::{
    cross_check_general, init_from_point, run_backward, run_forward, step_backward, step_forward,
    QuarticCFState, QuarticCurve,
};
use crate::curves::{model_transform, verify_adams_razar, TransformKind};
use crate::error::{Error, Result};
use crate::field::{as_integer, Field, FieldScalar};
use crate::poly::Polynomial;
use crate::sampling::Sampler;
use crate::sequences::{
    curve_e_stream, curve_to_somos_coefficients, denominator_check, eds_generate,
    integer_renormalize, sequence_from_e, torsion_detect, verify_relation, ward_checks,
    IndexedSequence, SomosRelation,
};
use num_bigint::BigInt;
use num_integer::Integer;

fn q(n: i64) -> FieldScalar {
    Field::Rationals.from_i64(n)
}

fn qr(n: i64, d: i64) -> FieldScalar {
    FieldScalar::rational(BigInt::from(n), BigInt::from(d)).unwrap()
}

/// First worked curve: Y^2 = (X^2 - 3)^2 + 4(X - 2).
fn running_curve() -> Result<QuarticCurve> {
    QuarticCurve::new(q(-3), q(1), q(2))
}

/// Second worked curve: Y^2 = (X^2 - 29)^2 - 192(X + 5).
fn second_curve() -> Result<QuarticCurve> {
    QuarticCurve::new(q(-29), q(-48), q(240))
}

fn running_sequence(lo: i64, hi: i64) -> Result<IndexedSequence> {
    let c = running_curve()?;
    let start = init_from_point(&c, &q(1), &q(0), &q(1))?;
    let e = curve_e_stream(&c, &start, lo - 1, hi - 1)?;
    sequence_from_e(&e, &q(1), &q(1), lo, hi)
}

fn expect(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Mismatch(what.to_string()))
    }
}

pub struct GoldenOutcome {
    pub name: &'static str,
    pub outcome: Result<String>,
}

/// One golden check: the seed offsets the random draws in the sampled
/// checks and is ignored by the fixed-value ones.
pub type GoldenCheck = fn(u64) -> Result<String>;

/// Every check by name, in presentation order.
pub fn checks() -> [(&'static str, GoldenCheck); 10] {
    [
        ("tableau expansion", |_| tableau_expansion()),
        ("normalized window", |_| normalized_window()),
        ("running example window", |_| running_example_window()),
        ("higher gap relations", |_| higher_gap_relations()),
        ("step addition correspondence", step_addition_correspondence),
        ("invariant sweep", invariant_sweep),
        ("divisibility sequence checks", divisibility_sequence_checks),
        ("torsion detection", |_| torsion_detection()),
        ("family normalization", family_normalization),
        ("general engine checks", general_engine_checks),
    ]
}

/// Run every golden check in order. `seed` offsets the random draws in the
/// sampled checks; 0 keeps the built-in draws.
pub fn run_all(seed: u64) -> Vec<GoldenOutcome> {
    checks()
        .iter()
        .map(|(name, f)| GoldenOutcome { name, outcome: f(seed) })
        .collect()
}

/// Expansion of the second curve from (-3, -4) with v_0 = 8: e-values
/// 8, 12, 16, 9 forward and mirrored backward, w-values -3, -1, -2, -10/3,
/// |v_h| = 8, 6, 32/3, 27/8, and the quarter-scaled e-list
/// ..., 9/4, 4, 3, 2, 3, 4, 9/4, ...
pub fn tableau_expansion() -> Result<String> {
    let c = second_curve()?;
    let start = init_from_point(&c, &q(-3), &q(-4), &q(8))?;
    let fwd = run_forward(&start, &c, 3)?;
    let back = run_backward(&start, &c, 3)?;
    let want_e = [q(8), q(12), q(16), q(9)];
    let want_w = [q(-3), q(-1), q(-2), qr(-10, 3)];
    let want_v = [q(8), q(-6), qr(32, 3), qr(-27, 8)];
    for (i, s) in fwd.iter().enumerate() {
        expect(s.h == i as i64, "forward line numbering")?;
        expect(s.e_h == want_e[i], "forward e-value")?;
        expect(s.w_h == want_w[i], "forward w-value")?;
        expect(s.v_h == want_v[i] || s.v_h == want_v[i].neg_ref(), "forward |v_h|")?;
        expect(s.v_h == want_v[i], "forward v_h sign")?;
    }
    for (i, s) in back.iter().enumerate().skip(1) {
        expect(s.h == -(i as i64), "backward line numbering")?;
        expect(s.e_h == want_e[i], "backward e-value mirror")?;
    }
    let quarter = qr(1, 4);
    let scaled: Vec<FieldScalar> = (-3..=3)
        .map(|h| {
            let e = if h >= 0 { &fwd[h as usize].e_h } else { &back[(-h) as usize].e_h };
            e * &quarter
        })
        .collect();
    let want_scaled =
        [qr(9, 4), q(4), q(3), q(2), q(3), q(4), qr(9, 4)];
    expect(scaled == want_scaled, "quarter-scaled e-list")?;
    Ok("lines -3..=3 match: e = (9,16,12,8,12,16,9), w = (-3,-1,-2,-10/3), |v| = (8,6,32/3,27/8)".into())
}

/// The quarter-scaled model's translation sequence: A_2 = 3, A_3 = 36,
/// A_4 = 972; its renormalization by (c_0, c_1) = (2, 3) is the integer
/// gap-5 window ..., 3, 2, 1, 1, 1, 1, 1, 2, 3, 5, 11, 37, 83, ...; and
/// 6^3 divides A_{h-2} A_{h+3} for |h| <= 8.
pub fn normalized_window() -> Result<String> {
    let c = second_curve()?;
    let model = model_transform(&c, TransformKind::QuarterScale)?;
    let cq = model
        .quartic
        .clone()
        .ok_or_else(|| Error::InvariantBroken("scaled model left the completed-square shape".into()))?;
    expect(cq.f == qr(-29, 4) && cq.v == q(-6) && cq.u == q(15), "scaled curve data")?;
    let (x, y) = model.apply_point(&q(-3), &q(-4));
    expect(x == qr(-3, 2) && y == q(-1), "scaled base point")?;
    let v0 = &q(8) * &model.e_scale();
    let start = init_from_point(&cq, &x, &y, &v0)?;
    let e = curve_e_stream(&cq, &start, -12, 12)?;
    let a = sequence_from_e(&e, &q(1), &q(1), -11, 12)?;
    expect(a.get(2) == Some(&q(3)), "A_2")?;
    expect(a.get(3) == Some(&q(36)), "A_3")?;
    expect(a.get(4) == Some(&q(972)), "A_4")?;
    let target = SomosRelation::new(5, q(1), q(1))?;
    let rep = integer_renormalize(&a, &target)?;
    expect(rep.c0 == q(2) && rep.c1 == q(3), "normalizing pair (2, 3)")?;
    expect(rep.fitted.kappa == q(36) && rep.fitted.lambda == q(216), "fitted gap-5 coefficients")?;
    let want: Vec<FieldScalar> = [3, 2, 1, 1, 1, 1, 1, 2, 3, 5, 11, 37, 83]
        .iter()
        .map(|&n| q(n))
        .collect();
    expect(rep.b.window(-4, 8).as_deref() == Some(&want[..]), "renormalized window")?;
    let cube = BigInt::from(216);
    for h in -8..=8i64 {
        let prod = a.get(h - 2).unwrap() * a.get(h + 3).unwrap();
        let n = as_integer(&prod)
            .ok_or_else(|| Error::Mismatch(format!("nonintegral product at {h}")))?;
        expect(n.is_multiple_of(&cube), "216 divides the gap-5 product")?;
    }
    Ok("A_2..A_4 = 3, 36, 972; window renormalizes to ones by (2, 3); 216 divides all gap products".into())
}

/// Running example: e-list 2, 1, 1, 2, 3/4, 14/9 around the start, the
/// window ..., 2, 1, 1, 1, 1, 2, 3, 7, 23, 59, ..., and the gap-4
/// relation with coefficients (1, 1) on |h| <= 10.
pub fn running_example_window() -> Result<String> {
    let c = running_curve()?;
    let start = init_from_point(&c, &q(1), &q(0), &q(1))?;
    let e = curve_e_stream(&c, &start, -13, 13)?;
    let want_e = [q(2), q(1), q(1), q(2), qr(3, 4), qr(14, 9)];
    expect(e.window(-1, 4).as_deref() == Some(&want_e[..]), "e-list around the start")?;
    let a = sequence_from_e(&e, &q(1), &q(1), -12, 13)?;
    let want: Vec<FieldScalar> =
        [2, 1, 1, 1, 1, 2, 3, 7, 23, 59].iter().map(|&n| q(n)).collect();
    expect(a.window(-2, 7).as_deref() == Some(&want[..]), "sequence window")?;
    let rel = SomosRelation::new(4, q(1), q(1))?;
    let rep = verify_relation(&a, &rel, -10, 10);
    expect(rep.holds && rep.checked == 21, "gap-4 relation on |h| <= 10")?;
    Ok("e-list and window match; gap-4 (1, 1) holds at all 21 offsets".into())
}

/// The same sequence satisfies gap-5 (-1, 5), gap-6 (1, 5), gap-8 (25, -4)
/// on |h| <= 10, and those coefficients come straight from the curve.
pub fn higher_gap_relations() -> Result<String> {
    let a = running_sequence(-15, 15)?;
    let wanted = [(5i64, q(-1), q(5)), (6, q(1), q(5)), (8, q(25), q(-4))];
    for (gap, kappa, lambda) in wanted {
        let rel = SomosRelation::new(gap, kappa, lambda)?;
        let rep = verify_relation(&a, &rel, -10, 10);
        expect(rep.holds && rep.checked == 21, "higher gap relation on |h| <= 10")?;
    }
    let rels = curve_to_somos_coefficients(&running_curve()?)?;
    expect(rels.somos4.kappa == q(1) && rels.somos4.lambda == q(1), "curve gap-4 coefficients")?;
    expect(rels.somos5.kappa == q(-1) && rels.somos5.lambda == q(5), "curve gap-5 coefficients")?;
    expect(rels.somos6.kappa == q(1) && rels.somos6.lambda == q(5), "curve gap-6 coefficients")?;
    expect(rels.somos8.kappa == q(25) && rels.somos8.lambda == q(-4), "curve gap-8 coefficients")?;
    Ok("gaps 5, 6, 8 hold with (-1,5), (1,5), (25,-4), reproduced from the curve data".into())
}

/// One CF line = adding the class of S - O: checked for |h| <= 20 on both
/// worked curves and on 25 random nonsingular curves with random small
/// base points.
pub fn step_addition_correspondence(seed: u64) -> Result<String> {
    let c1 = running_curve()?;
    let s1 = init_from_point(&c1, &q(1), &q(0), &q(1))?;
    verify_adams_razar(&c1, &s1, 20)?;
    let c2 = second_curve()?;
    let s2 = init_from_point(&c2, &q(-3), &q(-4), &q(8))?;
    verify_adams_razar(&c2, &s2, 20)?;
    let mut sampler = Sampler::new(Field::Rationals, 17u64.wrapping_add(seed));
    let mut done = 0;
    let mut attempts = 0;
    while done < 25 {
        attempts += 1;
        if attempts > 200 {
            return Err(Error::Mismatch("too few generic samples in 200 draws".into()));
        }
        let (c, state) = sampler.curve_with_state();
        match verify_adams_razar(&c, &state, 20) {
            Ok(_) => done += 1,
            // The walk collided with a short orbit; draw another curve.
            Err(Error::SingularStep { .. }) | Err(Error::MapUndefined) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(format!("41-line ladders verified on both worked curves and 25 random curves ({attempts} draws)"))
}

fn check_e_identities(
    c: &QuarticCurve,
    e: &[FieldScalar],
) -> Result<usize> {
    let w = c.w()?;
    let s_const = &c.f + &(&w * &w);
    let v2 = &c.v * &c.v;
    let two_vw = &(&c.v.small(2) * &c.v) * &w;
    let mut checked = 0;
    for i in 0..e.len().saturating_sub(1) {
        let (e0, e1) = (&e[i], &e[i + 1]);
        let prod = e0 * e1;
        let residual = &(&(&(&two_vw * &prod) - &(&v2 * &(e0 + e1))) - &(&prod * &prod))
            - &(&v2 * &s_const);
        expect(residual.is_zero(), "adjacent-pair constraint")?;
        checked += 1;
    }
    for i in 1..e.len().saturating_sub(1) {
        let lhs = &(&e[i - 1] * &(&e[i] * &e[i])) * &e[i + 1];
        let rhs = &v2 * &(&e[i] + &s_const);
        expect(lhs == rhs, "triple product identity")?;
        checked += 1;
    }
    for i in 1..e.len().saturating_sub(2) {
        let mid = &(&e[i] * &e[i]) * &(&e[i + 1] * &e[i + 1]);
        let lhs = &(&e[i - 1] * &mid) * &e[i + 2];
        let inner = &(&v2 - &(&s_const * &(&e[i] * &e[i + 1]))) + &(&two_vw * &s_const);
        let rhs = &v2 * &inner;
        expect(lhs == rhs, "quadruple product identity")?;
        checked += 1;
    }
    Ok(checked)
}

fn sweep_instance(
    c: &QuarticCurve,
    start: &QuarticCFState,
    half_span: usize,
    cross_depth: usize,
) -> Result<usize> {
    let mut checked = 0;
    let mut e_back: Vec<FieldScalar> = Vec::new();
    let mut s = start.clone();
    for _ in 0..half_span {
        let prev = step_backward(&s, c)?;
        let redo = step_forward(&prev, c)?;
        expect(redo == s, "backward/forward round trip")?;
        expect(&prev.v_h * &s.v_h == &s.e_h.small(-4) * &s.e_h, "product of v across a line")?;
        let x0 = &(&c.f + &s.e_h) + &c.u.checked_div(&s.e_h)?;
        expect(x0 == &prev.w_h * &s.w_h, "constant-coefficient identity")?;
        prev.validate(c)?;
        e_back.push(prev.e_h.clone());
        s = prev;
        checked += 3;
    }
    let mut e_all: Vec<FieldScalar> = e_back.into_iter().rev().collect();
    e_all.push(start.e_h.clone());
    e_all.push(start.e_next.clone());
    s = start.clone();
    for _ in 0..half_span {
        let next = step_forward(&s, c)?;
        let undo = step_backward(&next, c)?;
        expect(undo == s, "forward/backward round trip")?;
        expect(&s.v_h * &next.v_h == &next.e_h.small(-4) * &next.e_h, "product of v across a line")?;
        let x0 = &(&c.f + &next.e_h) + &c.u.checked_div(&next.e_h)?;
        expect(x0 == &s.w_h * &next.w_h, "constant-coefficient identity")?;
        next.validate(c)?;
        e_all.push(next.e_next.clone());
        s = next;
        checked += 3;
    }
    checked += check_e_identities(c, &e_all)?;
    let report = cross_check_general(c, start, cross_depth)?;
    checked += report.lines_checked;
    Ok(checked)
}

/// 100 random (curve, point, v_0) instances over Q and 100 over F_101,
/// walked 30 lines each way: line constraints, coefficient identities,
/// round trips, the e-stream product identities, and agreement with the
/// general engine. Zero failures allowed.
pub fn invariant_sweep(seed: u64) -> Result<String> {
    let mut total_checked = 0;
    for (field, cross_depth) in [(Field::Rationals, 10usize), (Field::prime(101)?, 40)] {
        let mut sampler = Sampler::new(field, 23u64.wrapping_add(seed));
        let mut done = 0;
        let mut attempts = 0;
        while done < 100 {
            attempts += 1;
            if attempts > 1500 {
                return Err(Error::Mismatch("too few generic instances in 1500 draws".into()));
            }
            let (c, start) = sampler.curve_with_state();
            match sweep_instance(&c, &start, 30, cross_depth) {
                Ok(n) => {
                    total_checked += n;
                    done += 1;
                }
                // A vanishing e within the walk: not a generic instance.
                Err(Error::SingularStep { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(format!("200 instances, 60 lines each, {total_checked} identity checks, zero failures"))
}

/// Divisibility machinery: the recursion agrees with the closed forms and
/// the stream route on 100 random curves; the classical identity battery
/// passes with 50 random index triples; denominators of the multiples of
/// S on the running curve are the exact predicted squares for h <= 15.
pub fn divisibility_sequence_checks(seed: u64) -> Result<String> {
    let mut sampler = Sampler::new(Field::Rationals, 31u64.wrapping_add(seed));
    for _ in 0..100 {
        let (c, _) = sampler.curve_with_state();
        // Internally compares the recursion, the closed forms, and the
        // expansion route, and fails on any disagreement.
        eds_generate(&c, 7)?;
    }
    let w = eds_generate(&running_curve()?, 14)?;
    let mut triples = Vec::with_capacity(50);
    for _ in 0..50 {
        let h = sampler.index(3, 7);
        let m = sampler.index(2, h - 1);
        let n = sampler.index(1, m - 1);
        triples.push((h, m, n));
    }
    let report = ward_checks(&w, 6, &triples);
    expect(report.all_ok(), "divisibility-sequence identity battery")?;
    expect(report.redundant_checked == 50, "all sampled triples in range")?;
    expect(report.gcd_applicable, "gcd refinement applies to the running curve")?;
    let den = denominator_check(&running_curve()?, 15)?;
    expect(den.checked == 15, "denominator ladder length")?;
    Ok(format!(
        "100 random curves agree on all routes; {} identity instances pass; 15 denominators exact",
        report.general_checked + report.redundant_checked + report.divisibility_checked + report.gcd_checked
    ))
}

/// Constructed torsion: f + w^2 = 0 gives order 3 with quasi-period 2;
/// x + 2w = 0 gives order 4 with quasi-period 3 and full period 6. Both
/// the vanishing-term detector and the period detector agree, and the
/// period rule (m - 1 or 2m - 2) is confirmed.
pub fn torsion_detection() -> Result<String> {
    let c3 = QuarticCurve::from_fvw(q(-1), q(1), q(1))?;
    expect((&c3.f + &q(1)).is_zero(), "order-3 construction has f + w^2 = 0")?;
    let r3 = torsion_detect(&c3, 24)?;
    expect(r3.zero_index == Some(3) && r3.quasi_period == Some(2), "order 3, quasi-period 2")?;
    expect(r3.period_rule_ok == Some(true), "order-3 period rule")?;
    expect(eds_generate(&c3, 8)?.zero_at() == Some(3), "independent vanishing index 3")?;

    let c4 = QuarticCurve::from_fvw(q(0), q(-2), q(1))?;
    let s4 = &c4.f + &q(1);
    let x = c4.v.checked_div(&s4)?;
    expect((&x + &q(2)).is_zero(), "order-4 construction has x + 2w = 0")?;
    let r4 = torsion_detect(&c4, 24)?;
    expect(r4.zero_index == Some(4) && r4.quasi_period == Some(3), "order 4, quasi-period 3")?;
    expect(r4.full_period == Some(6), "order-4 full period 6")?;
    expect(r4.period_rule_ok == Some(true), "order-4 period rule")?;
    expect(eds_generate(&c4, 8)?.zero_at() == Some(4), "independent vanishing index 4")?;
    Ok("orders (3, 4) found with quasi-periods (2, 3), full periods (2, 6), rule confirmed".into())
}

/// The all-ones family: k = -2 recovers the second curve and its exact
/// tableau; for 20 random k the defining identities k^2 = -(f + w^2),
/// 2w = 5k, v = 6k^3 hold symbolically.
pub fn family_normalization(seed: u64) -> Result<String> {
    let sol = crate::sequences::reprise_solve(&q(-2))?;
    expect(sol.curve.v == q(-48), "family v at k = -2")?;
    expect(sol.curve.f == q(-29), "family f at k = -2")?;
    expect(sol.curve.w()? == q(-5), "family w at k = -2")?;
    expect(sol.state.w_h == q(-3), "family base x at k = -2")?;
    let c2 = second_curve()?;
    let s2 = init_from_point(&c2, &q(-3), &q(-4), &q(8))?;
    expect(sol.state == s2, "family start line equals the tableau start")?;
    expect(run_forward(&sol.state, &sol.curve, 3)? == run_forward(&s2, &c2, 3)?, "forward tableau")?;
    expect(run_backward(&sol.state, &sol.curve, 3)? == run_backward(&s2, &c2, 3)?, "backward tableau")?;
    let mut sampler = Sampler::new(Field::Rationals, 41u64.wrapping_add(seed));
    for _ in 0..20 {
        let num = sampler.nonzero(12);
        let den = sampler.nonzero(5);
        let k = num.checked_div(&den)?;
        let sol = crate::sequences::reprise_solve(&k)?;
        let w = sol.curve.w()?;
        expect(&k * &k == (&sol.curve.f + &(&w * &w)).neg_ref(), "k^2 = -(f + w^2)")?;
        expect(&w + &w == &k.small(5) * &k, "2w = 5k")?;
        expect(sol.curve.v == &k.small(6) * &(&(&k * &k) * &k), "v = 6k^3")?;
    }
    Ok("k = -2 reproduces the tableau; 20 random k satisfy the family identities".into())
}

/// General engine: the norm identity and the distance/series agreement for
/// ten steps on three distinct quartics; the quotient-scaling identity on
/// 20 random streams; and periodicity detection for every random surd
/// over F_101 within the scan budget.
pub fn general_engine_checks(seed: u64) -> Result<String> {
    let third = QuarticCurve::from_fvw(q(2), q(3), q(1))?;
    expect(!third.is_singular(), "third quartic nonsingular")?;
    for c in [running_curve()?, second_curve()?, third] {
        let surd =
            QuadraticSurd::sqrt_like(c.d_poly(), Polynomial::zero(Field::Rationals))?;
        let mut exp = Expansion::new(surd)?;
        for _ in 0..10 {
            exp.step()?;
            exp.check_norm_identity()?;
            exp.distance()?;
        }
    }
    let mut sampler = Sampler::new(Field::Rationals, 53u64.wrapping_add(seed));
    for _ in 0..20 {
        let len = sampler.index(3, 5);
        let quotients: Vec<Polynomial> = (0..len)
            .map(|_| {
                let deg = sampler.index(1, 2) as usize;
                sampler.poly(deg, 3)
            })
            .collect();
        let b = sampler.nonzero(6);
        let c = sampler.nonzero(6);
        schmidt_verify(&quotients, &b, &c)?;
    }
    let mut fp = Sampler::new(Field::prime(101)?, 61u64.wrapping_add(seed));
    for _ in 0..12 {
        let surd = fp.surd();
        match detect_periodicity(&surd, 4096)? {
            Periodicity::Periodic(_) => {}
            Periodicity::AperiodicSoFar { steps_scanned } => {
                return Err(Error::Mismatch(format!(
                    "no period within {steps_scanned} steps over F_101"
                )));
            }
        }
    }
    Ok("norm and distance agree for 10 steps on 3 quartics; 20 scaled streams match; 12 surds periodic".into())
}
