use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Exponent vector of a monomial; its length is the variable count.
pub type Exponents = Vec<u32>;

/// Sparse polynomial over ℚ in a fixed number of variables.
///
/// Zero coefficients are never stored, and every exponent vector has length
/// [`MultiPoly::nvars`]. Binary operators panic when the variable counts of
/// the operands disagree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The variable `u_{index+1}` (zero based `index`).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: Exponents, coeff: Rational) -> Self {
        let mut p = Self::zero(exponents.len());
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    /// Linear form `Σ coeffs[i]·u_{i+1}`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, Rational::from_integer(BigInt::from(c)));
            }
        }
        p
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// The value of a polynomial with no nonconstant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.keys().all(|e| e.iter().all(|&x| x == 0)) {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Largest total exponent, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// `Some(e)` if every term has total exponent `e`; the zero polynomial
    /// is not considered homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Sum of the terms of total exponent exactly `e`.
    pub fn homogeneous_part(&self, e: u32) -> MultiPoly {
        self.filter_terms(|x| x.iter().sum::<u32>() == e)
    }

    /// Drops every term of total exponent greater than `order`.
    pub fn truncate(&self, order: u32) -> MultiPoly {
        self.filter_terms(|x| x.iter().sum::<u32>() <= order)
    }

    fn filter_terms(&self, keep: impl Fn(&Exponents) -> bool) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> MultiPoly {
        if factor.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> MultiPoly {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Product of `self` and `other`, keeping only terms of total exponent at
    /// most `order`.
    pub fn mul_truncated(&self, other: &MultiPoly, order: u32) -> MultiPoly {
        self.check_same(other);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            if da > order {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + eb.iter().sum::<u32>() > order {
                    continue;
                }
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Ring homomorphism sending `u_j` to `Σ_i basis[i][j]·u'_i`.
    ///
    /// `basis` must hold `nvars` integer vectors of length `nvars`.
    pub fn linear_substitute(&self, basis: &[Vec<i64>]) -> Result<MultiPoly> {
        let d = self.nvars;
        if basis.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: basis.len(),
            });
        }
        if let Some(row) = basis.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: row.len(),
            });
        }
        if let Some(perm) = signed_permutation(basis) {
            // u_j ↦ ±u'_{i}: permute exponents and fix the sign.
            let mut out = MultiPoly::zero(d);
            for (e, c) in &self.terms {
                let mut exps = vec![0; d];
                let mut negative = false;
                for (j, &k) in e.iter().enumerate() {
                    let (i, sign) = perm[j];
                    exps[i] = k;
                    negative ^= sign < 0 && k % 2 == 1;
                }
                out.terms.insert(exps, if negative { -c.clone() } else { c.clone() });
            }
            return Ok(out);
        }
        let images: Vec<MultiPoly> = (0..d)
            .map(|j| MultiPoly::linear(&basis.iter().map(|row| row[j]).collect::<Vec<_>>()))
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|l| vec![MultiPoly::one(d), l.clone()]).collect();
        let mut out = MultiPoly::zero(d);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(d, c.clone());
            for (j, &k) in e.iter().enumerate() {
                let cache = &mut powers[j];
                while cache.len() <= k as usize {
                    let next = &cache[cache.len() - 1] * &images[j];
                    cache.push(next);
                }
                if k > 0 {
                    term = &term * &cache[k as usize];
                }
            }
            out += &term;
        }
        Ok(out)
    }

    /// Decomposes `Σ_j a_j·u_1^j` with each `a_j` in the remaining
    /// `nvars - 1` variables.
    pub fn split_first_variable(&self) -> BTreeMap<u32, MultiPoly> {
        assert!(self.nvars > 0, "cannot split a polynomial in zero variables");
        let mut parts: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts
                .entry(e[0])
                .or_insert_with(|| MultiPoly::zero(self.nvars - 1))
                .add_term(e[1..].to_vec(), c.clone());
        }
        parts
    }

    /// Reinterprets the polynomial in `nvars + extra` variables, the new ones
    /// appended after the existing ones.
    pub fn append_variables(&self, extra: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(self.nvars + extra, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Evaluates at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Default variable names: `u` for a single variable, `u1..ud` otherwise.
    pub fn default_names(nvars: usize) -> Vec<String> {
        if nvars == 1 {
            vec!["u".to_string()]
        } else {
            (1..=nvars).map(|i| format!("u{i}")).collect()
        }
    }

    /// Terms in canonical order: descending total exponent, then descending
    /// lexicographic exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    /// Formats with the given variable names in canonical monomial order.
    pub fn display_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            if vars.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }

    fn check_same(&self, other: &MultiPoly) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials in different variable counts"
        );
    }
}

/// For a basis that is a signed permutation matrix, the image `(i, ±1)` of
/// each variable `u_j`.
fn signed_permutation(basis: &[Vec<i64>]) -> Option<Vec<(usize, i64)>> {
    let d = basis.len();
    let mut out = Vec::with_capacity(d);
    let mut used = vec![false; d];
    for j in 0..d {
        let mut hit = None;
        for (i, row) in basis.iter().enumerate() {
            match row[j] {
                0 => {}
                s @ (1 | -1) if hit.is_none() && !used[i] => hit = Some((i, s)),
                _ => return None,
            }
        }
        let (i, s) = hit?;
        used[i] = true;
        out.push((i, s));
    }
    Some(out)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.nvars)))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        self.check_same(rhs);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_same(rhs);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    fn u(i: usize, n: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn c(n: usize, v: i64) -> MultiPoly {
        MultiPoly::constant(n, rat(v, 1))
    }

    #[test]
    fn substitute_examples() {
        let basis = vec![vec![0, 1], vec![-1, 0]];
        let u1 = u(0, 2);
        let u2 = u(1, 2);
        assert_eq!(u1.linear_substitute(&basis).unwrap(), -&u2);
        assert_eq!((&u1 * &u2).linear_substitute(&basis).unwrap(), -(&u1 * &u2));
        let p = &(&u1.pow(3) + &c(2, 5)) - &(&u2 * &u1).scale(&rat(2, 7));
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(p.linear_substitute(&id).unwrap(), p);
        assert!(p.linear_substitute(&[vec![1, 0]]).is_err());
        assert!(p.linear_substitute(&[vec![1, 0], vec![1]]).is_err());
    }

    #[test]
    fn homogeneous_part_examples() {
        let x = u(0, 1);
        let p = (&c(1, 1) + &x).pow(3);
        assert_eq!(p.homogeneous_part(2), x.pow(2).scale(&rat(3, 1)));
        let u1 = u(0, 2);
        let u2 = u(1, 2);
        let q = &u1.pow(2) + &u2;
        assert!(q.homogeneous_part(5).is_zero());
        let r = &(&u1 * &u2) + &u1.scale(&rat(2, 1));
        assert_eq!(r.homogeneous_part(1), u1.scale(&rat(2, 1)));
    }

    #[test]
    fn display_is_canonical() {
        let u1 = u(0, 2);
        let u2 = u(1, 2);
        let p = &(&(&u1 * &u2).scale(&rat(-1, 2)) + &u2.pow(2)) + &c(2, 3);
        assert_eq!(p.to_string(), "-1/2*u1*u2 + u2^2 + 3");
        assert_eq!(MultiPoly::zero(1).to_string(), "0");
        assert_eq!((&c(1, 1) - &u(0, 1)).to_string(), "-u + 1");
    }

    #[test]
    fn split_and_append() {
        let u1 = u(0, 2);
        let u2 = u(1, 2);
        let p = &(&u1.pow(2) * &u2) + &u2.scale(&rat(3, 1));
        let parts = p.split_first_variable();
        assert_eq!(parts[&2], MultiPoly::var(1, 0));
        assert_eq!(parts[&0], MultiPoly::var(1, 0).scale(&rat(3, 1)));
        assert_eq!(MultiPoly::var(1, 0).append_variables(1), u1);
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..4, nvars), -5i64..6, 1i64..4),
            0..6,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(nvars, ts.into_iter().map(|(e, n, d)| (e, rat(n, d)))).unwrap()
        })
    }

    fn arb_basis() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-3i64..4, 2), 2)
    }

    proptest! {
        #[test]
        fn substitution_is_a_ring_homomorphism(p in arb_poly(2), q in arb_poly(2), b in arb_basis()) {
            let s = |x: &MultiPoly| x.linear_substitute(&b).unwrap();
            prop_assert_eq!(s(&(&p + &q)), &s(&p) + &s(&q));
            prop_assert_eq!(s(&(&p * &q)), &s(&p) * &s(&q));
        }

        #[test]
        fn substitution_matches_evaluation(
            p in arb_poly(3),
            general in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3),
            perm in prop::sample::select(vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]),
            signs in prop::collection::vec(prop::bool::ANY, 3),
            x in prop::collection::vec(-4i64..5, 3),
        ) {
            let mut signed = vec![vec![0i64; 3]; 3];
            for (i, &j) in perm.iter().enumerate() {
                signed[i][j] = if signs[i] { -1 } else { 1 };
            }
            let point: Vec<Rational> = x.iter().map(|&v| rat(v, 1)).collect();
            for b in [general, signed] {
                let image: Vec<Rational> = (0..3)
                    .map(|j| (0..3).map(|i| rat(b[i][j] * x[i], 1)).sum())
                    .collect();
                prop_assert_eq!(p.linear_substitute(&b).unwrap().evaluate(&point), p.evaluate(&image));
            }
        }

        #[test]
        fn homogeneous_parts_sum_to_whole(p in arb_poly(3)) {
            let top = p.total_degree().unwrap_or(0);
            let mut sum = MultiPoly::zero(3);
            for e in 0..=top {
                sum += &p.homogeneous_part(e);
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn truncated_product_agrees(p in arb_poly(2), q in arb_poly(2), order in 0u32..8) {
            prop_assert_eq!(p.mul_truncated(&q, order), (&p * &q).truncate(order));
        }
    }
}
