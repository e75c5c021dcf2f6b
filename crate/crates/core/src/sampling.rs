//! Seeded random generators for property sweeps. Sampling is state-first:
//! the line data (w_0, e_0, e_1, v, v_0) is drawn and (f, u) are solved
//! from the line constraints, so every sample carries a valid start line
//! and a rational point by construction.

use crate::cf_general::QuadraticSurd;
use crate::cf_quartic::{general_surd, QuarticCFState, QuarticCurve};
use crate::field::{Field, FieldScalar};
use crate::poly::Polynomial;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
    field: Field,
}

impl Sampler {
    pub fn new(field: Field, seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), field }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Scalar with numerator drawn uniformly from [-bound, bound].
    pub fn scalar(&mut self, bound: i64) -> FieldScalar {
        self.field.from_i64(self.rng.gen_range(-bound..=bound))
    }

    /// Like `scalar`, but rejected until nonzero in the field.
    pub fn nonzero(&mut self, bound: i64) -> FieldScalar {
        loop {
            let s = self.scalar(bound);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn index(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Nonsingular curve together with a valid line-0 state on it. The
    /// state's base point is (w_0, e_0 - e_1). Coefficients stay tiny:
    /// heights along an expansion grow quadratically with the line
    /// number, so sweeps over many lines need small starting data.
    pub fn curve_with_state(&mut self) -> (QuarticCurve, QuarticCFState) {
        loop {
            let w0 = self.scalar(2);
            let e0 = self.nonzero(3);
            let e1 = self.nonzero(3);
            let v = self.nonzero(3);
            let v0 = self.nonzero(3);
            let f = &(&e0.neg_ref() - &e1) - &(&w0 * &w0);
            let u = &(&e0 * &e1) + &(&v * &w0);
            let c = match QuarticCurve::new(f, v, u) {
                Ok(c) => c,
                Err(_) => continue,
            };
            if c.is_singular() {
                continue;
            }
            let state = QuarticCFState {
                h: 0,
                w_h: w0,
                v_h: v0,
                e_h: e0,
                e_next: e1,
            };
            if state.validate(&c).is_err() {
                continue;
            }
            return (c, state);
        }
    }

    /// A valid quadratic surd: the complete quotient of a sampled line.
    pub fn surd(&mut self) -> QuadraticSurd {
        loop {
            let (c, state) = self.curve_with_state();
            if let Ok(s) = general_surd(&c, &state) {
                return s;
            }
        }
    }

    /// Polynomial of the exact degree with small coefficients.
    pub fn poly(&mut self, degree: usize, bound: i64) -> Polynomial {
        let mut coeffs: Vec<FieldScalar> =
            (0..degree).map(|_| self.scalar(bound)).collect();
        coeffs.push(self.nonzero(bound));
        Polynomial::new(self.field, coeffs).unwrap()
    }
}

/// The affine point a sampled line sits over.
pub fn base_point(state: &QuarticCFState) -> (FieldScalar, FieldScalar) {
    (state.w_h.clone(), &state.e_h - &state.e_next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Degree;

    #[test]
    fn samples_are_valid_and_deterministic() {
        for field in [Field::Rationals, Field::prime(101).unwrap()] {
            let mut s1 = Sampler::new(field, 7);
            let mut s2 = Sampler::new(field, 7);
            for _ in 0..25 {
                let (c, state) = s1.curve_with_state();
                let (c2, state2) = s2.curve_with_state();
                assert_eq!(c, c2);
                assert_eq!(state, state2);
                state.validate(&c).unwrap();
                let (x, y) = base_point(&state);
                assert!(c.contains(&x, &y));
                assert!(!c.is_singular());
            }
        }
    }

    #[test]
    fn sampled_surds_and_polys_are_well_formed() {
        let mut s = Sampler::new(Field::Rationals, 3);
        for _ in 0..10 {
            let surd = s.surd();
            assert_eq!(surd.genus(), 1);
        }
        for d in 1..=3 {
            let p = s.poly(d, 4);
            assert_eq!(p.degree(), Degree::Finite(d as i64));
        }
    }
}
