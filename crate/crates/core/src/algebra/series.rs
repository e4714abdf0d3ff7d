use std::fmt;

use num_traits::Zero;

use super::poly::MultiPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A multivariate power series known up to total exponent `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    body: MultiPoly,
    order: u32,
}

impl TruncSeries {
    /// Truncates `body` to `order`.
    pub fn new(body: MultiPoly, order: u32) -> Self {
        TruncSeries {
            body: body.truncate(order),
            order,
        }
    }

    pub fn body(&self) -> &MultiPoly {
        &self.body
    }

    pub fn into_body(self) -> MultiPoly {
        self.body
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The homogeneous piece of total exponent `e`; zero beyond the order.
    pub fn piece(&self, e: u32) -> MultiPoly {
        self.body.homogeneous_part(e)
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let order = self.order.min(other.order);
        TruncSeries {
            body: self.body.mul_truncated(&other.body, order),
            order,
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.body, self.order + 1)
    }
}

/// Multiplicative inverse of `p` modulo terms of total exponent above
/// `order`.
///
/// Solved degree by degree: with `c = p(0)`, the piece of degree `e > 0` is
/// `-(1/c)·Σ_{i=1..e} p_i·q_{e-i}`.
pub fn series_invert(p: &MultiPoly, order: u32) -> Result<TruncSeries> {
    let c = p.constant_term();
    if c.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let n = p.nvars();
    let inv_c: Rational = c.recip();
    let p_parts: Vec<MultiPoly> = (0..=order).map(|e| p.homogeneous_part(e)).collect();
    let mut q_parts: Vec<MultiPoly> = vec![MultiPoly::constant(n, inv_c.clone())];
    for e in 1..=order as usize {
        let mut acc = MultiPoly::zero(n);
        for i in 1..=e {
            if p_parts[i].is_zero() || q_parts[e - i].is_zero() {
                continue;
            }
            acc += &(&p_parts[i] * &q_parts[e - i]);
        }
        q_parts.push(acc.scale(&-inv_c.clone()));
    }
    let mut body = MultiPoly::zero(n);
    for part in &q_parts {
        body += part;
    }
    Ok(TruncSeries { body, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    #[test]
    fn geometric_series() {
        let u = MultiPoly::var(1, 0);
        let p = &MultiPoly::one(1) - &u;
        let q = series_invert(&p, 3).unwrap();
        let expect = &(&(&MultiPoly::one(1) + &u) + &u.pow(2)) + &u.pow(3);
        assert_eq!(q.body(), &expect);
    }

    #[test]
    fn constant_inverse() {
        let p = MultiPoly::constant(1, rat(-1, 1));
        assert_eq!(series_invert(&p, 5).unwrap().body(), &p);
    }

    #[test]
    fn two_variable_first_order() {
        let u1 = MultiPoly::var(2, 0);
        let u2 = MultiPoly::var(2, 1);
        let p = &(&MultiPoly::constant(2, rat(2, 1)) + &u1) + &u2;
        let q = series_invert(&p, 1).unwrap();
        let expect = &(&MultiPoly::constant(2, rat(1, 2)) - &u1.scale(&rat(1, 4))) - &u2.scale(&rat(1, 4));
        assert_eq!(q.body(), &expect);
        // multiply back
        assert_eq!(p.mul_truncated(q.body(), 1), MultiPoly::one(2));
    }

    #[test]
    fn zero_constant_term_rejected() {
        let u = MultiPoly::var(1, 0);
        assert_eq!(series_invert(&u, 2), Err(Error::ZeroConstantTerm));
    }

    proptest! {
        #[test]
        fn inverse_times_input_is_one(
            c in prop_oneof![-5i64..=-1, 1i64..=5],
            rest in prop::collection::vec((prop::collection::vec(0u32..3, 2), -4i64..5, 1i64..3), 0..5),
            order in 0u32..=8,
        ) {
            let mut p = MultiPoly::from_terms(2, rest.into_iter()
                .filter(|(e, _, _)| e.iter().sum::<u32>() > 0)
                .map(|(e, n, d)| (e, rat(n, d)))).unwrap();
            p += &MultiPoly::constant(2, rat(c, 1));
            let q = series_invert(&p, order).unwrap();
            prop_assert_eq!(p.mul_truncated(q.body(), order), MultiPoly::one(2));
        }
    }
}
