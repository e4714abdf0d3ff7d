//! Weighted Chern and Segre classes of circle representations.
//!
//! A [`WeightedSpace`] is a complex vector space split into lines, each with
//! a nonzero circle weight and a residual weight for a complementary torus
//! of rank `r`. Classes live in `ℚ[u_1..u_r]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::algebra::{series_invert, MultiPoly, Rational, TruncSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedLine {
    pub circle_weight: i64,
    pub residual: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedSpace {
    lines: Vec<WeightedLine>,
    residual_count: usize,
}

impl WeightedSpace {
    pub fn new(residual_count: usize, lines: Vec<WeightedLine>) -> Result<Self> {
        for line in &lines {
            if line.circle_weight == 0 {
                return Err(Error::InvalidSpace(
                    "circle weight 0: the circle must act freely off the origin".into(),
                ));
            }
            if line.residual.len() != residual_count {
                return Err(Error::DimensionMismatch {
                    expected: residual_count,
                    found: line.residual.len(),
                });
            }
        }
        Ok(WeightedSpace {
            lines,
            residual_count,
        })
    }

    /// Lines with the given circle weights and zero residual weights.
    pub fn from_circle_weights(residual_count: usize, weights: &[i64]) -> Result<Self> {
        let lines = weights
            .iter()
            .map(|&w| WeightedLine {
                circle_weight: w,
                residual: vec![0; residual_count],
            })
            .collect();
        Self::new(residual_count, lines)
    }

    pub fn lines(&self) -> &[WeightedLine] {
        &self.lines
    }

    pub fn residual_count(&self) -> usize {
        self.residual_count
    }

    /// Complex rank (number of lines).
    pub fn rank(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn direct_sum(&self, other: &WeightedSpace) -> Result<WeightedSpace> {
        if self.residual_count != other.residual_count {
            return Err(Error::DimensionMismatch {
                expected: self.residual_count,
                found: other.residual_count,
            });
        }
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        Ok(WeightedSpace {
            lines,
            residual_count: self.residual_count,
        })
    }
}

impl FromStr for WeightedSpace {
    type Err = Error;

    /// Parses `"w:r1,r2;w:r1,r2"`; the residual part may be omitted when
    /// there are no residual variables (`"1;1;-1"`).
    fn from_str(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Format(format!("weighted space `{text}`: {msg}"));
        let mut lines = Vec::new();
        let mut residual_count = None;
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (w, rest) = match item.split_once(':') {
                Some((w, rest)) => (w.trim(), rest.trim()),
                None => (item, ""),
            };
            let circle_weight: i64 = w.parse().map_err(|_| bad(format!("bad weight `{w}`")))?;
            let residual = if rest.is_empty() {
                Vec::new()
            } else {
                rest.split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|_| bad(format!("bad component `{c}`"))))
                    .collect::<Result<Vec<_>>>()?
            };
            match residual_count {
                None => residual_count = Some(residual.len()),
                Some(r) if r != residual.len() => {
                    return Err(bad("lines have different residual lengths".into()))
                }
                _ => {}
            }
            lines.push(WeightedLine {
                circle_weight,
                residual,
            });
        }
        if lines.is_empty() {
            return Err(bad("no lines".into()));
        }
        WeightedSpace::new(residual_count.unwrap_or(0), lines)
    }
}

impl fmt::Display for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lines
            .iter()
            .map(|l| {
                if l.residual.is_empty() {
                    l.circle_weight.to_string()
                } else {
                    let r: Vec<String> = l.residual.iter().map(|x| x.to_string()).collect();
                    format!("{}:{}", l.circle_weight, r.join(","))
                }
            })
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// `∏ (w + ⟨residual, u⟩)` over the lines; its piece of exponent `i` is
/// `c_i^w(V)`.
pub fn weighted_chern(v: &WeightedSpace) -> MultiPoly {
    let r = v.residual_count;
    let mut out = MultiPoly::one(r);
    for line in &v.lines {
        let factor = &MultiPoly::linear(&line.residual)
            + &MultiPoly::constant(r, Rational::from_integer(BigInt::from(line.circle_weight)));
        out = &out * &factor;
    }
    out
}

/// The inverse series of [`weighted_chern`] up to exponent `order`.
pub fn weighted_segre(v: &WeightedSpace, order: u32) -> TruncSeries {
    series_invert(&weighted_chern(v), order).expect("circle weights are nonzero")
}

/// gcd of the absolute circle weights; 1 for the zero space.
pub fn weight_gcd(v: &WeightedSpace) -> u64 {
    let g = v
        .lines
        .iter()
        .fold(0i64, |g, l| g.gcd(&l.circle_weight))
        .unsigned_abs();
    if g == 0 {
        1
    } else {
        g
    }
}

/// The relation `Σ_i c_i^w(V)·h^{rank-i}` presenting the cohomology of
/// the weighted projectivisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingRelation {
    coefficients: Vec<MultiPoly>,
}

impl RingRelation {
    /// `c_0^w .. c_rank^w`; entry `i` multiplies `h^{rank-i}`.
    pub fn coefficients(&self) -> &[MultiPoly] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// The relation as one polynomial with `h` as the first variable.
    pub fn to_poly(&self) -> MultiPoly {
        let r = self.degree() as u32;
        let nvars = self.coefficients[0].nvars() + 1;
        let mut terms = Vec::new();
        for (i, c) in self.coefficients.iter().enumerate() {
            for (e, q) in c.terms() {
                let mut exps = Vec::with_capacity(nvars);
                exps.push(r - i as u32);
                exps.extend_from_slice(e);
                terms.push((exps, q.clone()));
            }
        }
        MultiPoly::from_terms(nvars, terms).expect("exponent lengths agree")
    }

    pub fn variable_names(&self) -> Vec<String> {
        let mut names = vec!["h".to_string()];
        names.extend(MultiPoly::default_names(self.coefficients[0].nvars()));
        names
    }
}

impl fmt::Display for RingRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly().display_with(&self.variable_names()))
    }
}

pub fn ring_relation(v: &WeightedSpace) -> RingRelation {
    let c = weighted_chern(v);
    RingRelation {
        coefficients: (0..=v.rank() as u32).map(|i| c.homogeneous_part(i)).collect(),
    }
}

/// `∏ (w·u_0 + ⟨residual, u⟩)`, the circle variable `u_0` appended after
/// the residual variables.
pub fn equivariant_euler(v: &WeightedSpace) -> MultiPoly {
    let r = v.residual_count;
    let mut out = MultiPoly::one(r + 1);
    for line in &v.lines {
        let mut coeffs = line.residual.clone();
        coeffs.push(line.circle_weight);
        out = &out * &MultiPoly::linear(&coeffs);
    }
    out
}

/// Push-forward of `h^i` along the weighted projectivisation of `V`:
/// zero below `rank - 1`, otherwise `gcd · s^w_{i-rank+1}(V)`.
pub fn fiber_integrate_power(v: &WeightedSpace, i: u32) -> MultiPoly {
    let r = v.rank() as u32;
    if i + 1 < r {
        return MultiPoly::zero(v.residual_count);
    }
    let m = i + 1 - r;
    let k = Rational::from_integer(BigInt::from(weight_gcd(v)));
    weighted_segre(v, m).piece(m).scale(&k)
}
