//! Two-sided sequences attached to a quartic expansion: the recursion
//! A_{h+1} = e_h A_h^2 / A_{h-1} driven by an e-stream, Somos three-term
//! relations with curve-derived coefficients, elliptic divisibility
//! sequences, twist and renormalization transforms, and torsion detection.
//!
//! Values outside a sequence's defined range are absent, never implicitly
//! zero; generation stores a computed zero and then stops extending in
//! that direction, since the recursions divide by earlier terms.

use crate::cf_general::{detect_periodicity, Periodicity, QuadraticSurd};
use crate::cf_quartic::{
    singular_start, step_backward, step_forward, QuarticCFState, QuarticCurve,
};
use crate::curves::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::field::{as_i64, as_integer, Field, FieldScalar};
use crate::poly::Polynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A contiguous block of values A_h for origin <= h <= origin + len - 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedSequence {
    field: Field,
    origin: i64,
    values: Vec<FieldScalar>,
}

impl IndexedSequence {
    pub fn from_values(field: Field, origin: i64, values: Vec<FieldScalar>) -> Result<IndexedSequence> {
        if values.is_empty() {
            return Err(Error::PreconditionFailed("empty sequence".into()));
        }
        if values.iter().any(|v| v.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(IndexedSequence { field, origin, values })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn min_index(&self) -> i64 {
        self.origin
    }

    pub fn max_index(&self) -> i64 {
        self.origin + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, h: i64) -> Option<&FieldScalar> {
        if h < self.origin {
            return None;
        }
        self.values.get((h - self.origin) as usize)
    }

    pub fn push_back(&mut self, v: FieldScalar) {
        self.values.push(v);
    }

    pub fn push_front(&mut self, v: FieldScalar) {
        self.values.insert(0, v);
        self.origin -= 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FieldScalar)> + '_ {
        let origin = self.origin;
        self.values.iter().enumerate().map(move |(i, v)| (origin + i as i64, v))
    }

    /// The values on lo..=hi, when the whole window is defined.
    pub fn window(&self, lo: i64, hi: i64) -> Option<Vec<FieldScalar>> {
        if lo > hi || lo < self.origin || hi > self.max_index() {
            return None;
        }
        Some((lo..=hi).map(|h| self.get(h).unwrap().clone()).collect())
    }

    /// True over Q when every value is an integer.
    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| as_integer(v).is_some())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "origin": self.origin,
            "values": self.values.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<IndexedSequence> {
        let bad = || Error::Parse("sequence json".into());
        let origin = v.get("origin").and_then(|o| o.as_i64()).ok_or_else(bad)?;
        let arr = v.get("values").and_then(|a| a.as_array()).ok_or_else(bad)?;
        let values = arr.iter().map(FieldScalar::from_json).collect::<Result<Vec<_>>>()?;
        let field = values.first().ok_or_else(bad)?.field();
        IndexedSequence::from_values(field, origin, values)
    }
}

/// The quotient stream e_h = A_{h-1} A_{h+1} / A_h^2 on the interior of A.
///
/// Interior values of A are nonzero for generated sequences (zeros only
/// appear at the ends of the defined range); an interior zero stops the
/// stream at that point.
pub fn e_stream(a: &IndexedSequence) -> Result<IndexedSequence> {
    if a.len() < 3 {
        return Err(Error::PreconditionFailed("need at least three values".into()));
    }
    let mut out: Option<IndexedSequence> = None;
    for h in a.min_index() + 1..a.max_index() {
        let mid = a.get(h).unwrap();
        if mid.is_zero() {
            break;
        }
        let num = a.get(h - 1).unwrap() * a.get(h + 1).unwrap();
        let e = num.checked_div(&(mid * mid))?;
        match out.as_mut() {
            None => out = Some(IndexedSequence::from_values(a.field(), h, vec![e])?),
            Some(seq) => seq.push_back(e),
        }
    }
    out.ok_or_else(|| Error::PreconditionFailed("sequence vanishes at an interior index".into()))
}

/// A three-term Somos relation. Even gap 2m relates A_{h-m} A_{h+m} to
/// kappa A_{h-1} A_{h+1} + lambda A_h^2; odd gap 2m+1 relates
/// A_{h-m} A_{h+m+1} to kappa A_{h-1} A_{h+2} + lambda A_h A_{h+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SomosRelation {
    pub gap: i64,
    pub kappa: FieldScalar,
    pub lambda: FieldScalar,
}

impl SomosRelation {
    pub fn new(gap: i64, kappa: FieldScalar, lambda: FieldScalar) -> Result<SomosRelation> {
        if gap < 4 {
            return Err(Error::PreconditionFailed(format!("gap {gap} below 4")));
        }
        if kappa.field() != lambda.field() {
            return Err(Error::FieldMismatch);
        }
        if kappa.is_zero() && lambda.is_zero() {
            return Err(Error::PreconditionFailed("kappa and lambda both zero".into()));
        }
        Ok(SomosRelation { gap, kappa, lambda })
    }

    pub fn m(&self) -> i64 {
        self.gap / 2
    }

    pub fn has_even_gap(&self) -> bool {
        self.gap % 2 == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "gap": self.gap,
            "kappa": self.kappa.to_json(),
            "lambda": self.lambda.to_json(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SomosRelation> {
        let bad = || Error::Parse("relation json".into());
        let gap = v.get("gap").and_then(|g| g.as_i64()).ok_or_else(bad)?;
        let kappa = FieldScalar::from_json(v.get("kappa").ok_or_else(bad)?)?;
        let lambda = FieldScalar::from_json(v.get("lambda").ok_or_else(bad)?)?;
        SomosRelation::new(gap, kappa, lambda)
    }
}

/// The three products entering the gap-shaped relation at h:
/// (left side, kappa part, lambda part). None if any index is undefined.
fn instance_parts(
    seq: &IndexedSequence,
    gap: i64,
    h: i64,
) -> Option<(FieldScalar, FieldScalar, FieldScalar)> {
    let m = gap / 2;
    if gap % 2 == 0 {
        let lhs = seq.get(h - m)? * seq.get(h + m)?;
        let kp = seq.get(h - 1)? * seq.get(h + 1)?;
        let mid = seq.get(h)?;
        Some((lhs, kp, mid * mid))
    } else {
        let lhs = seq.get(h - m)? * seq.get(h + m + 1)?;
        let kp = seq.get(h - 1)? * seq.get(h + 2)?;
        let lp = seq.get(h)? * seq.get(h + 1)?;
        Some((lhs, kp, lp))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub holds: bool,
    pub first_failure: Option<i64>,
    pub checked: usize,
    pub skipped: usize,
}

/// Exact check of the relation at every h in lo..=hi where all terms exist.
pub fn verify_relation(seq: &IndexedSequence, rel: &SomosRelation, lo: i64, hi: i64) -> VerifyReport {
    let mut report = VerifyReport { holds: true, first_failure: None, checked: 0, skipped: 0 };
    for h in lo..=hi {
        match instance_parts(seq, rel.gap, h) {
            None => report.skipped += 1,
            Some((lhs, kp, lp)) => {
                report.checked += 1;
                let rhs = &(&rel.kappa * &kp) + &(&rel.lambda * &lp);
                if lhs != rhs {
                    report.holds = false;
                    report.first_failure = Some(h);
                    break;
                }
            }
        }
    }
    report
}

/// Extend `initial` (placed at init_start..) both ways by the three-term
/// rule, stopping where the divisor term vanishes or a zero is produced.
pub fn somos_generate(
    rel: &SomosRelation,
    initial: &[FieldScalar],
    init_start: i64,
    lo: i64,
    hi: i64,
) -> Result<IndexedSequence> {
    let field = rel.kappa.field();
    if initial.len() as i64 != rel.gap {
        return Err(Error::PreconditionFailed(format!("need {} initial values", rel.gap)));
    }
    if initial.iter().any(|v| v.is_zero()) {
        return Err(Error::PreconditionFailed("initial values must be nonzero".into()));
    }
    let mut seq = IndexedSequence::from_values(field, init_start, initial.to_vec())?;
    let m = rel.m();
    // Forward: the new index n sits at h+m (even gap) or h+m+1 (odd gap).
    while seq.max_index() < hi {
        let n = seq.max_index() + 1;
        let h = if rel.has_even_gap() { n - m } else { n - m - 1 };
        let divisor = seq.get(n - rel.gap).unwrap().clone();
        if divisor.is_zero() {
            break;
        }
        let (kp, lp) = forward_parts(&seq, rel, h);
        let val = (&(&rel.kappa * &kp) + &(&rel.lambda * &lp)).checked_div(&divisor)?;
        let stop = val.is_zero();
        seq.push_back(val);
        if stop {
            break;
        }
    }
    // Backward: the new index n sits at h-m.
    while seq.min_index() > lo {
        let n = seq.min_index() - 1;
        let h = n + m;
        let divisor = seq.get(n + rel.gap).unwrap().clone();
        if divisor.is_zero() {
            break;
        }
        let (kp, lp) = forward_parts(&seq, rel, h);
        let val = (&(&rel.kappa * &kp) + &(&rel.lambda * &lp)).checked_div(&divisor)?;
        let stop = val.is_zero();
        seq.push_front(val);
        if stop {
            break;
        }
    }
    Ok(seq)
}

/// kappa and lambda parts at h, all indices strictly inside the block.
fn forward_parts(seq: &IndexedSequence, rel: &SomosRelation, h: i64) -> (FieldScalar, FieldScalar) {
    if rel.has_even_gap() {
        let kp = seq.get(h - 1).unwrap() * seq.get(h + 1).unwrap();
        let mid = seq.get(h).unwrap();
        (kp, mid * mid)
    } else {
        let kp = seq.get(h - 1).unwrap() * seq.get(h + 2).unwrap();
        let lp = seq.get(h).unwrap() * seq.get(h + 1).unwrap();
        (kp, lp)
    }
}

/// Build A from seeds A_0, A_1 and the stream: A_{h+1} = e_h A_h^2 / A_{h-1}
/// forward, A_{h-1} = e_h A_h^2 / A_{h+1} backward. Stops where the stream
/// runs out or a zero is produced.
pub fn sequence_from_e(
    e: &IndexedSequence,
    a0: &FieldScalar,
    a1: &FieldScalar,
    lo: i64,
    hi: i64,
) -> Result<IndexedSequence> {
    if a0.is_zero() {
        return Err(Error::ZeroDivision { index: 0 });
    }
    if a1.is_zero() {
        return Err(Error::ZeroDivision { index: 1 });
    }
    if a0.field() != e.field() || a1.field() != e.field() {
        return Err(Error::FieldMismatch);
    }
    if lo > 0 || hi < 1 {
        return Err(Error::PreconditionFailed("range must cover indices 0 and 1".into()));
    }
    let mut seq = IndexedSequence::from_values(e.field(), 0, vec![a0.clone(), a1.clone()])?;
    while seq.max_index() < hi {
        let n = seq.max_index() + 1;
        let eh = match e.get(n - 1) {
            Some(v) => v,
            None => break,
        };
        let prev = seq.get(n - 1).unwrap();
        let prev2 = seq.get(n - 2).unwrap().clone();
        if prev2.is_zero() {
            break;
        }
        let val = (eh * &(prev * prev)).checked_div(&prev2)?;
        let stop = val.is_zero();
        seq.push_back(val);
        if stop {
            break;
        }
    }
    while seq.min_index() > lo {
        let n = seq.min_index() - 1;
        let eh = match e.get(n + 1) {
            Some(v) => v,
            None => break,
        };
        let next = seq.get(n + 1).unwrap();
        let next2 = seq.get(n + 2).unwrap().clone();
        if next2.is_zero() {
            break;
        }
        let val = (eh * &(next * next)).checked_div(&next2)?;
        let stop = val.is_zero();
        seq.push_front(val);
        if stop {
            break;
        }
    }
    Ok(seq)
}

/// The e_h values of the expansion through `start`, indexed by line number,
/// truncated where a singular configuration blocks a step.
pub fn curve_e_stream(
    c: &QuarticCurve,
    start: &QuarticCFState,
    lo: i64,
    hi: i64,
) -> Result<IndexedSequence> {
    if lo > start.h || hi < start.h + 1 {
        return Err(Error::PreconditionFailed("range must cover the start line".into()));
    }
    let mut seq = IndexedSequence::from_values(
        c.field(),
        start.h,
        vec![start.e_h.clone(), start.e_next.clone()],
    )?;
    let mut s = start.clone();
    while s.h + 1 < hi {
        match step_forward(&s, c) {
            Ok(next) => {
                seq.push_back(next.e_next.clone());
                s = next;
            }
            Err(Error::SingularStep { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    s = start.clone();
    while s.h > lo {
        match step_backward(&s, c) {
            Ok(prev) => {
                seq.push_front(prev.e_h.clone());
                s = prev;
            }
            Err(Error::SingularStep { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(seq)
}

/// W_0..W_5 of the divisibility sequence in closed form.
fn w_closed_forms(c: &QuarticCurve) -> Result<[FieldScalar; 6]> {
    let w = c.w()?;
    let v = &c.v;
    let s = &c.f + &(&w * &w);
    let v2 = v * v;
    let v4 = &v2 * &v2;
    let tail = v + &(&(&w.small(2) * &w) * &s);
    let w3 = (&v2 * &s).neg_ref();
    let w4 = (&v4 * &tail).neg_ref();
    let w5 = (&(&v4 * &v2) * &(&(v * &tail) - &(&(&s * &s) * &s))).neg_ref();
    Ok([c.f.small(0), c.f.small(1), v.clone(), w3, w4, w5])
}

/// Somos relations a curve's translation sequences satisfy, one per gap.
#[derive(Debug, Clone)]
pub struct CurveSomos {
    pub somos4: SomosRelation,
    pub somos5: SomosRelation,
    pub somos6: SomosRelation,
    pub somos8: SomosRelation,
}

/// Coefficients for gaps 4, 5, 6, 8 in terms of the curve data.
pub fn curve_to_somos_coefficients(c: &QuarticCurve) -> Result<CurveSomos> {
    let w = c.w()?;
    let v = &c.v;
    let s = &c.f + &(&w * &w);
    let v2 = v * v;
    let v3 = &v2 * v;
    let tail = v + &(&(&w.small(2) * &w) * &s);
    let forms = w_closed_forms(c)?;
    let somos4 = SomosRelation::new(4, v2.clone(), &v2 * &s)?;
    let somos5 = SomosRelation::new(5, (&v2 * &s).neg_ref(), &v3 * &tail)?;
    let somos6 = SomosRelation::new(
        6,
        &(&v2 * &v2) * &(&s * &s),
        &(&v3 * &v2) * &tail,
    )?;
    let somos8 = SomosRelation::new(
        8,
        &forms[4] * &forms[4],
        (&forms[3] * &forms[5]).neg_ref(),
    )?;
    Ok(CurveSomos { somos4, somos5, somos6, somos8 })
}

/// The antisymmetric divisibility sequence of a curve: W_0 = 0, W_1 = 1,
/// W_2 = v, with W_{-h} = -W_h. A vanishing W_m ends the defined range.
#[derive(Debug, Clone)]
pub struct EDSequence {
    seq: IndexedSequence,
    zero_at: Option<i64>,
}

impl EDSequence {
    pub fn values(&self) -> &IndexedSequence {
        &self.seq
    }

    pub fn w(&self, h: i64) -> Option<&FieldScalar> {
        self.seq.get(h)
    }

    /// Least positive index whose value is zero, when one was reached.
    pub fn zero_at(&self) -> Option<i64> {
        self.zero_at
    }
}

/// Generate W_{-N}..W_N, N <= hmax, from the closed forms and the gap-4
/// recursion W_n = (W_2^2 W_{n-3} W_{n-1} - W_3 W_{n-2}^2) / W_{n-4}.
///
/// The stream of the expansion of Y itself (entered at its singular line)
/// regenerates the same values through W_{h+1} = e_h W_h^2 / W_{h-1}; the
/// two routes are compared wherever the expansion can step.
pub fn eds_generate(c: &QuarticCurve, hmax: i64) -> Result<EDSequence> {
    if c.v.is_zero() {
        return Err(Error::ZeroV);
    }
    if hmax < 1 {
        return Err(Error::PreconditionFailed("hmax must be at least 1".into()));
    }
    let field = c.field();
    let forms = w_closed_forms(c)?;
    let v2 = &c.v * &c.v;
    let mut pos: Vec<FieldScalar> = vec![field.zero(), field.one()];
    let mut zero_at = None;
    for n in 2..=hmax as usize {
        let val = if n <= 4 {
            forms[n].clone()
        } else {
            let divisor = pos[n - 4].clone();
            if divisor.is_zero() {
                break;
            }
            let kp = &pos[n - 3] * &pos[n - 1];
            let sq = &pos[n - 2] * &pos[n - 2];
            (&(&v2 * &kp) - &(&forms[3] * &sq)).checked_div(&divisor)?
        };
        if n == 5 && val != forms[5] {
            return Err(Error::Mismatch("recursion disagrees with the closed form at 5".into()));
        }
        let stop = val.is_zero();
        if stop {
            zero_at = Some(n as i64);
        }
        pos.push(val);
        if stop {
            break;
        }
    }
    let top = pos.len() - 1;
    cross_check_singular_stream(c, &pos, top as i64)?;
    let mut values: Vec<FieldScalar> = Vec::with_capacity(2 * top + 1);
    for i in (1..=top).rev() {
        values.push(pos[i].neg_ref());
    }
    values.extend(pos.iter().cloned());
    let seq = IndexedSequence::from_values(field, -(top as i64), values)?;
    Ok(EDSequence { seq, zero_at })
}

fn cross_check_singular_stream(c: &QuarticCurve, pos: &[FieldScalar], top: i64) -> Result<()> {
    let mut s = match singular_start(c) {
        Ok(s) => s,
        // Order-3 degeneracy: the singular entry line does not exist, and
        // the closed forms already carry W_3 = 0.
        Err(Error::TorsionDegenerate { .. }) => return Ok(()),
        Err(e) => return Err(e),
    };
    loop {
        let idx = s.h + 1;
        let target = idx + 1;
        if target > top {
            return Ok(());
        }
        let below = &pos[(idx - 1) as usize];
        if below.is_zero() {
            return Ok(());
        }
        let wi = &pos[idx as usize];
        let predicted = (&s.e_next * &(wi * wi)).checked_div(below)?;
        if predicted != pos[target as usize] {
            return Err(Error::Mismatch(format!(
                "stream route disagrees with the recursion at index {target}"
            )));
        }
        match step_forward(&s, c) {
            Ok(next) => s = next,
            Err(Error::SingularStep { .. }) => return Ok(()),
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct WardReport {
    pub general_checked: usize,
    pub general_failures: Vec<(i64, i64)>,
    pub redundant_checked: usize,
    pub redundant_skipped: usize,
    pub redundant_failures: Vec<(i64, i64, i64)>,
    pub divisibility_checked: usize,
    pub divisibility_failures: Vec<(i64, i64)>,
    pub gcd_applicable: bool,
    pub gcd_checked: usize,
    pub gcd_failures: Vec<(i64, i64)>,
}

impl WardReport {
    pub fn all_ok(&self) -> bool {
        self.general_failures.is_empty()
            && self.redundant_failures.is_empty()
            && self.divisibility_failures.is_empty()
            && self.gcd_failures.is_empty()
    }
}

/// Verify the classical divisibility-sequence laws on W:
/// W_{h-m} W_{h+m} = W_m^2 W_{h-1} W_{h+1} - W_{m-1} W_{m+1} W_h^2 for
/// 2 <= m <= m_max; the three-index form
/// W_{h-m} W_{h+m} W_n^2 = W_{h-n} W_{h+n} W_m^2 - W_{m-n} W_{m+n} W_h^2
/// on the supplied (h, m, n) triples; and over integer values the laws
/// a | b => W_a | W_b, with gcd(W_a, W_b) = |W_gcd(a,b)| once
/// gcd(W_3, W_4) = 1.
pub fn ward_checks(w: &EDSequence, m_max: i64, triples: &[(i64, i64, i64)]) -> WardReport {
    let seq = w.values();
    let mut report = WardReport::default();
    for m in 2..=m_max {
        let (wm1, wm, wp1) = match (seq.get(m - 1), seq.get(m), seq.get(m + 1)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => continue,
        };
        let coeff = wm1 * wp1;
        let wm2 = wm * wm;
        for h in seq.min_index()..=seq.max_index() {
            let (lo_val, hi_val) = match (seq.get(h - m), seq.get(h + m)) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            let (h1, h2, hm) =
                match (seq.get(h - 1), seq.get(h + 1), seq.get(h)) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => continue,
                };
            report.general_checked += 1;
            let lhs = lo_val * hi_val;
            let rhs = &(&wm2 * &(h1 * h2)) - &(&coeff * &(hm * hm));
            if lhs != rhs {
                report.general_failures.push((m, h));
            }
        }
    }
    for &(h, m, n) in triples {
        let needed = [h - m, h + m, n, h - n, h + n, m, m - n, m + n, h];
        if needed.iter().any(|&i| seq.get(i).is_none()) {
            report.redundant_skipped += 1;
            continue;
        }
        report.redundant_checked += 1;
        let g = |i: i64| seq.get(i).unwrap();
        let lhs = &(g(h - m) * g(h + m)) * &(g(n) * g(n));
        let rhs = &(&(g(h - n) * g(h + n)) * &(g(m) * g(m)))
            - &(&(g(m - n) * g(m + n)) * &(g(h) * g(h)));
        if lhs != rhs {
            report.redundant_failures.push((h, m, n));
        }
    }
    let top = seq.max_index();
    let ints: Option<Vec<BigInt>> =
        (1..=top).map(|h| seq.get(h).and_then(as_integer)).collect();
    if let Some(ints) = ints {
        let at = |h: i64| &ints[(h - 1) as usize];
        for a in 1..=top {
            for b in (2 * a..=top).step_by(a as usize) {
                report.divisibility_checked += 1;
                let ok = if at(a).is_zero() {
                    at(b).is_zero()
                } else {
                    at(b).is_multiple_of(at(a))
                };
                if !ok {
                    report.divisibility_failures.push((a, b));
                }
            }
        }
        if top >= 4 && at(3).gcd(at(4)).is_one() {
            report.gcd_applicable = true;
            for a in 1..=top {
                for b in a + 1..=top {
                    report.gcd_checked += 1;
                    if at(a).gcd(at(b)) != at(a.gcd(&b)).abs() {
                        report.gcd_failures.push((a, b));
                    }
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone)]
pub struct DenominatorReport {
    pub checked: usize,
}

/// For h = 1..hmax write hS = (U_h / W_h^2, V_h / W_h^3) on the cubic model
/// and check the denominators are exactly those powers, that
/// gcd(U_h, V_h) = |W_{h-1}|, and that W_{h-1} W_{h+1} = -U_h.
///
/// Needs integer curve data with gcd(v, u) = 1; a common factor spoils the
/// exact-denominator property.
pub fn denominator_check(c: &QuarticCurve, hmax: i64) -> Result<DenominatorReport> {
    if c.field() != Field::Rationals {
        return Err(Error::PreconditionFailed("rational curve data required".into()));
    }
    let (vi, ui) = match (as_integer(&c.v), as_integer(&c.u)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::PreconditionFailed("integer curve data required".into())),
    };
    if as_integer(&c.f).is_none() {
        return Err(Error::PreconditionFailed("integer curve data required".into()));
    }
    let g = vi.gcd(&ui);
    if !g.is_one() {
        return Err(Error::PreconditionFailed(format!("gcd(v, u) = {g} is not 1")));
    }
    let eds = eds_generate(c, hmax + 1)?;
    let wc = WeierstrassCurve::from_quartic(c);
    let zero = c.field().zero();
    let s_pt = CurvePoint::Affine(zero.clone(), zero);
    let mut p = s_pt.clone();
    let mut checked = 0;
    for h in 1..=hmax {
        let (wm1, wh, wp1) = match (eds.w(h - 1), eds.w(h), eds.w(h + 1)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => break,
        };
        let (uc, vc) = match p.affine() {
            Some((a, b)) => (a.clone(), b.clone()),
            None => break,
        };
        let b = as_integer(wh)
            .ok_or_else(|| Error::Mismatch(format!("nonintegral divisibility value at {h}")))?;
        let b2 = &b * &b;
        let b3 = (&b2 * &b).abs();
        let ur = uc.as_rational().unwrap();
        if ur.denom() != &b2 {
            return Err(Error::Mismatch(format!(
                "denominator of the first coordinate at {h}: {} vs {}",
                ur.denom(),
                b2
            )));
        }
        let vr = vc.as_rational().unwrap();
        if vr.denom() != &b3 {
            return Err(Error::Mismatch(format!(
                "denominator of the second coordinate at {h}: {} vs {}",
                vr.denom(),
                b3
            )));
        }
        let wh2 = wh * wh;
        let u_scalar = &uc * &wh2;
        let v_scalar = &vc * &(&wh2 * wh);
        let u_int = as_integer(&u_scalar).unwrap();
        let v_int = as_integer(&v_scalar).unwrap();
        let wm1_int = as_integer(wm1)
            .ok_or_else(|| Error::Mismatch(format!("nonintegral divisibility value at {}", h - 1)))?;
        if u_int.gcd(&v_int) != wm1_int.abs() {
            return Err(Error::Mismatch(format!("coordinate gcd at {h} is not |W_{}|", h - 1)));
        }
        if wm1 * wp1 != u_scalar.neg_ref() {
            return Err(Error::Mismatch(format!(
                "W_{} W_{} differs from -U_{h}",
                h - 1,
                h + 1
            )));
        }
        checked += 1;
        p = wc.add(&p, &s_pt)?;
    }
    Ok(DenominatorReport { checked })
}

/// Outcome of scanning for a vanishing divisibility term and, in parallel,
/// for periodicity of the expansion of (Y + A)/2.
#[derive(Debug, Clone)]
pub struct TorsionReport {
    pub zero_index: Option<i64>,
    pub quasi_period: Option<i64>,
    pub full_period: Option<i64>,
    pub period_rule_ok: Option<bool>,
    pub scanned: i64,
}

/// The divisor class at infinity has finite order m exactly when W_m = 0
/// with m minimal, and the expansion then has minimal quasi-period m - 1.
/// The full period is m - 1 or 2m - 2 for even m, and m - 1 for odd m.
pub fn torsion_detect(c: &QuarticCurve, budget: i64) -> Result<TorsionReport> {
    let field = c.field();
    let surd = QuadraticSurd::new(
        c.d_poly(),
        Polynomial::zero(field),
        c.a_poly(),
        Polynomial::constant(field.from_i64(2)),
    )?;
    let periodicity = detect_periodicity(&surd, budget)?;
    let zero_index = if c.v.is_zero() {
        // W_2 = v vanishes: the class of S itself has order 2.
        Some(2)
    } else {
        eds_generate(c, budget + 1)?.zero_at()
    };
    match (zero_index, periodicity) {
        (Some(m), Periodicity::Periodic(pd)) => {
            if pd.r_quasi != m - 1 {
                return Err(Error::Mismatch(format!(
                    "quasi-period {} next to vanishing index {m}",
                    pd.r_quasi
                )));
            }
            let rule_ok = pd.r_full.map(|full| {
                if m % 2 == 0 {
                    full == m - 1 || full == 2 * (m - 1)
                } else {
                    full == m - 1
                }
            });
            if rule_ok == Some(false) {
                return Err(Error::Mismatch(format!(
                    "full period {:?} breaks the m = {m} rule",
                    pd.r_full
                )));
            }
            Ok(TorsionReport {
                zero_index: Some(m),
                quasi_period: Some(pd.r_quasi),
                full_period: pd.r_full,
                period_rule_ok: rule_ok,
                scanned: budget,
            })
        }
        (Some(m), Periodicity::AperiodicSoFar { .. }) => Err(Error::Mismatch(format!(
            "vanishing index {m} without a quasi-period in budget"
        ))),
        (None, Periodicity::Periodic(_)) => Err(Error::Mismatch(
            "quasi-period without a vanishing term in budget".into(),
        )),
        (None, Periodicity::AperiodicSoFar { steps_scanned }) => Ok(TorsionReport {
            zero_index: None,
            quasi_period: None,
            full_period: None,
            period_rule_ok: None,
            scanned: steps_scanned,
        }),
    }
}

/// B_h = kappa^{h(h+1)/2} A_h. Scales the e-stream by kappa and turns a
/// gap-4 relation (k4, l4) into (kappa^3 k4, kappa^4 l4).
pub fn twist_transform(a: &IndexedSequence, kappa: &FieldScalar) -> Result<IndexedSequence> {
    if kappa.is_zero() {
        return Err(Error::PreconditionFailed("twist scalar must be nonzero".into()));
    }
    if kappa.field() != a.field() {
        return Err(Error::FieldMismatch);
    }
    let mut values = Vec::with_capacity(a.len());
    for (h, val) in a.iter() {
        let exp = h * (h + 1) / 2;
        values.push(&kappa.pow_i64(exp)? * val);
    }
    IndexedSequence::from_values(a.field(), a.min_index(), values)
}

/// Recover (kappa, lambda) for the given gap from two independent relation
/// instances, then insist the whole defined range agrees.
pub fn fit_relation(seq: &IndexedSequence, gap: i64) -> Result<SomosRelation> {
    let mut instances = Vec::new();
    for h in seq.min_index()..=seq.max_index() {
        if let Some(parts) = instance_parts(seq, gap, h) {
            instances.push(parts);
        }
    }
    for i in 0..instances.len() {
        for j in i + 1..instances.len() {
            let (l1, k1, p1) = &instances[i];
            let (l2, k2, p2) = &instances[j];
            let det = &(k1 * p2) - &(k2 * p1);
            if det.is_zero() {
                continue;
            }
            let kappa = (&(l1 * p2) - &(l2 * p1)).checked_div(&det)?;
            let lambda = (&(k1 * l2) - &(k2 * l1)).checked_div(&det)?;
            if kappa.is_zero() && lambda.is_zero() {
                continue;
            }
            let rel = SomosRelation::new(gap, kappa, lambda)?;
            let report = verify_relation(seq, &rel, seq.min_index(), seq.max_index());
            if report.holds {
                return Ok(rel);
            }
            return Err(Error::Mismatch("no consistent relation coefficients".into()));
        }
    }
    Err(Error::PreconditionFailed("relation coefficients underdetermined".into()))
}

/// The one-parameter family of curves whose renormalized expansion repeats
/// an all-ones gap-5 window: v = 6k^3, 4f = -29k^2, 2w = 5k.
#[derive(Debug, Clone)]
pub struct RepriseSolution {
    pub curve: QuarticCurve,
    pub state: QuarticCFState,
    pub c0: FieldScalar,
    pub c1: FieldScalar,
}

/// Solve the constant-product normalization c_h c_{h+1} = kv for the curve
/// and start line it forces, with c_0 = e_0 = 2k^2 and c_1 = e_1 = 3k^2.
pub fn reprise_solve(k: &FieldScalar) -> Result<RepriseSolution> {
    if k.is_zero() {
        return Err(Error::PreconditionFailed("k must be nonzero".into()));
    }
    let k2 = k * k;
    let k3 = &k2 * k;
    let v = &k.small(6) * &k3;
    let f = (&k.small(-29) * &k2).checked_div(&k.small(4))?;
    let w = (&k.small(5) * k).checked_div(&k.small(2))?;
    let u = &v * &w;
    let curve = QuarticCurve::new(f.clone(), v.clone(), u)?;
    let w0 = (&k.small(3) * k).checked_div(&k.small(2))?;
    let e0 = &k.small(2) * &k2;
    let e1 = &k.small(3) * &k2;
    let state = QuarticCFState {
        h: 0,
        w_h: w0,
        v_h: e0.clone(),
        e_h: e0.clone(),
        e_next: e1.clone(),
    };
    state.validate(&curve)?;
    // k^2 = -(f + w^2) and k^3 + 2wk^2 - v = 0 pin the family.
    if k2 != (&f + &(&w * &w)).neg_ref() {
        return Err(Error::InvariantBroken("k^2 != -(f + w^2)".into()));
    }
    if !(&(&k3 + &(&(&w.small(2) * &w) * &k2)) - &v).is_zero() {
        return Err(Error::InvariantBroken("k^3 + 2wk^2 - v != 0".into()));
    }
    if &e0 * &e1 != &v * k {
        return Err(Error::InvariantBroken("e_0 e_1 != vk".into()));
    }
    let next = step_forward(&state, &curve)?;
    if &e1 * &next.e_next != &(&v * k).small(2) * &(&v * k) {
        return Err(Error::InvariantBroken("e_1 e_2 != 2vk".into()));
    }
    Ok(RepriseSolution { curve, state, c0: e0, c1: e1 })
}

/// Gap-8 coefficients derived from the divisibility values, plus the two
/// auxiliary identities the derivation leans on.
#[derive(Debug, Clone)]
pub struct Somos8Report {
    pub relation: SomosRelation,
    pub cube_identity_ok: bool,
    pub constant_identity_ok: bool,
}

/// (kappa, lambda) = (W_4^2, -W_3 W_5), with W_3^4 = W_2^3 W_3 W_4 - W_3 W_5
/// and W_2^5 + W_4 = -2 v^4 w (f + w^2) as checkable side identities.
pub fn derive_somos8_coefficients(c: &QuarticCurve) -> Result<Somos8Report> {
    let forms = w_closed_forms(c)?;
    let relation = SomosRelation::new(8, &forms[4] * &forms[4], (&forms[3] * &forms[5]).neg_ref())?;
    let w3sq = &forms[3] * &forms[3];
    let cube_lhs = &w3sq * &w3sq;
    let w2cub = &(&forms[2] * &forms[2]) * &forms[2];
    let cube_rhs = &(&w2cub * &(&forms[3] * &forms[4])) - &(&forms[3] * &forms[5]);
    let w = c.w()?;
    let s = &c.f + &(&w * &w);
    let v2 = &c.v * &c.v;
    let w2_5 = &(&w2cub * &forms[2]) * &forms[2];
    let const_lhs = &w2_5 + &forms[4];
    let const_rhs = (&(&(&v2 * &v2) * &(&w.small(2) * &w)) * &s).neg_ref();
    Ok(Somos8Report {
        relation,
        cube_identity_ok: cube_lhs == cube_rhs,
        constant_identity_ok: const_lhs == const_rhs,
    })
}

/// 2vw e_h e_{h+1} - v^2 (e_h + e_{h+1}) - (e_h e_{h+1})^2 - v^2 (f + w^2);
/// zero along the e-stream of any expansion on the curve.
pub fn adjacent_e_residual(
    c: &QuarticCurve,
    e0: &FieldScalar,
    e1: &FieldScalar,
) -> Result<FieldScalar> {
    let w = c.w()?;
    let s = &c.f + &(&w * &w);
    let v2 = &c.v * &c.v;
    let prod = e0 * e1;
    let total = &(&(&(&c.v.small(2) * &c.v) * &w) * &prod)
        - &(&v2 * &(e0 + e1));
    Ok(&(&total - &(&prod * &prod)) - &(&v2 * &s))
}

/// Result of removing a constant factor from a sequence's relation by a
/// two-periodic division of its e-stream.
#[derive(Debug, Clone)]
pub struct RenormalizeReport {
    pub b: IndexedSequence,
    pub c0: FieldScalar,
    pub c1: FieldScalar,
    pub gamma: FieldScalar,
    pub fitted: SomosRelation,
}

/// Divide the e-stream of A by an alternating pair (c_0, c_1) so the
/// reseeded sequence satisfies `target`. For an odd gap the product
/// gamma = c_0 c_1 must satisfy gamma^2 = kappa_A / kappa_T and
/// gamma^3 = lambda_A / lambda_T; splits of an integer gamma are searched
/// for one that keeps the values integral. For an even gap the divisor is
/// forced constant, with c^3 and c^4 carrying the two ratios.
pub fn integer_renormalize(
    a: &IndexedSequence,
    target: &SomosRelation,
) -> Result<RenormalizeReport> {
    let fitted = fit_relation(a, target.gap)?;
    let stream = e_stream(a)?;
    let ratio_k = fitted
        .kappa
        .checked_div(&target.kappa)
        .map_err(|_| Error::NoNormalization)?;
    let ratio_l = fitted
        .lambda
        .checked_div(&target.lambda)
        .map_err(|_| Error::NoNormalization)?;
    let candidates: Vec<(FieldScalar, FieldScalar)> = if target.has_even_gap() {
        let c = ratio_l.checked_div(&ratio_k).map_err(|_| Error::NoNormalization)?;
        let c3 = &(&c * &c) * &c;
        if c3 != ratio_k || &c3 * &c != ratio_l {
            return Err(Error::NoNormalization);
        }
        vec![(c.clone(), c)]
    } else {
        let gamma = ratio_l.checked_div(&ratio_k).map_err(|_| Error::NoNormalization)?;
        if &gamma * &gamma != ratio_k || &(&gamma * &gamma) * &gamma != ratio_l {
            return Err(Error::NoNormalization);
        }
        let mut list = Vec::new();
        if a.field() == Field::Rationals {
            if let Some(g) = as_i64(&gamma) {
                let ga = g.abs();
                if g != 0 && ga <= 10_000 {
                    for d in 1..=ga {
                        if ga % d == 0 {
                            let c0 = gamma.small(d);
                            let c1 = gamma.checked_div(&c0)?;
                            let pair_neg = (c0.neg_ref(), c1.neg_ref());
                            list.push((c0, c1));
                            list.push(pair_neg);
                        }
                    }
                }
            }
        }
        list.push((gamma.small(1), gamma.clone()));
        list
    };
    let one = a.field().one();
    let mut fallback: Option<(IndexedSequence, FieldScalar, FieldScalar)> = None;
    for (c0, c1) in candidates {
        let mut divided: Option<IndexedSequence> = None;
        let mut ok = true;
        for (h, e) in stream.iter() {
            let c = if h.rem_euclid(2) == 0 { &c0 } else { &c1 };
            let val = match e.checked_div(c) {
                Ok(v) => v,
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            match divided.as_mut() {
                None => divided = Some(IndexedSequence::from_values(a.field(), h, vec![val])?),
                Some(seq) => seq.push_back(val),
            }
        }
        let divided = match (ok, divided) {
            (true, Some(d)) => d,
            _ => continue,
        };
        let b = sequence_from_e(&divided, &one, &one, a.min_index(), a.max_index())?;
        let integral = a.field() == Field::Rationals && b.is_integer_valued();
        if fallback.is_none() {
            fallback = Some((b.clone(), c0.clone(), c1.clone()));
        }
        if integral {
            fallback = Some((b, c0, c1));
            break;
        }
    }
    let (b, c0, c1) = fallback.ok_or(Error::NoNormalization)?;
    let report = verify_relation(&b, target, b.min_index(), b.max_index());
    if !report.holds {
        return Err(Error::Mismatch("renormalized sequence fails the target relation".into()));
    }
    let gamma = &c0 * &c1;
    Ok(RenormalizeReport { b, c0, c1, gamma, fitted })
}
