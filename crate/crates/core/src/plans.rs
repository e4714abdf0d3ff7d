//! Plan generation: rank-one transverse paths, the `(ℂP²)ⁿ` two-flag
//! recipes, and an independent convolution oracle for sphere products.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{format_rational, Rational};
use crate::error::{Error, Result};
use crate::localization::{OrientedFlag, Plan, PlanTerm};
use crate::model::{cp_assignment, cp_point_id, TorusModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub value: Rational,
    pub fixed_point_ids: Vec<String>,
}

/// Fixed points grouped by `⟨μ(F), ξ⟩`, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallList {
    pub walls: Vec<Wall>,
}

impl WallList {
    pub fn contains(&self, value: &Rational) -> bool {
        self.walls.iter().any(|w| &w.value == value)
    }
}

impl fmt::Display for WallList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.walls {
            writeln!(f, "{}: {}", format_rational(&w.value), w.fixed_point_ids.join(" "))?;
        }
        Ok(())
    }
}

/// Walls of the moment image seen along the direction `ξ`.
pub fn walls(model: &TorusModel, xi: &[i64]) -> Result<WallList> {
    if xi.len() != model.rank() {
        return Err(Error::DimensionMismatch {
            expected: model.rank(),
            found: xi.len(),
        });
    }
    let mut groups: BTreeMap<Rational, Vec<String>> = BTreeMap::new();
    for fp in model.fixed_points() {
        let value = fp
            .moment
            .iter()
            .zip(xi)
            .fold(Rational::zero(), |acc, (m, &x)| acc + m * Rational::from_integer(BigInt::from(x)));
        groups.entry(value).or_default().push(fp.id.clone());
    }
    Ok(WallList {
        walls: groups
            .into_iter()
            .map(|(value, fixed_point_ids)| Wall {
                value,
                fixed_point_ids,
            })
            .collect(),
    })
}

/// Direction of a rank-one path leaving `p0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "up" => Ok(Direction::Up),
            "-" | "-1" | "down" => Ok(Direction::Down),
            other => Err(Error::Format(format!("direction `{other}` is not + or -"))),
        }
    }
}

/// Plan for the path from `p0` out of the moment image in `direction`:
/// every fixed point beyond `p0` contributes with the flag `[±1]`.
pub fn rank1_plan(model: &TorusModel, p0: &Rational, direction: Direction) -> Result<Plan> {
    if model.rank() != 1 {
        return Err(Error::Unsupported(format!(
            "rank-one paths need a rank-one model, got rank {}",
            model.rank()
        )));
    }
    let flag = OrientedFlag::new(vec![vec![direction.sign()]])?;
    let mut terms = Vec::new();
    for fp in model.fixed_points() {
        let m = &fp.moment[0];
        if m == p0 {
            return Err(Error::NotRegular { value: p0.clone() });
        }
        let beyond = match direction {
            Direction::Up => m > p0,
            Direction::Down => m < p0,
        };
        if beyond {
            terms.push(PlanTerm {
                coefficient: 1,
                fixed_point: fp.id.clone(),
                flag: flag.clone(),
            });
        }
    }
    Ok(Plan::new(terms))
}

/// Which flag goes with which region in the `(ℂP²)ⁿ` recipe.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Cp2Rule {
    /// `Θ₁` on `{i₁>n/3, i₃>n/3}`, `Θ₂` on `{i₂<n/3, i₃<n/3}`.
    #[default]
    General,
    /// The same regions with the flags exchanged.
    Exchanged,
    /// `Θ₁` on `{i₁>n/3, i₃>n/3}`, `Θ₂` on `{i₁<n/3, i₂<n/3}`.
    Display,
}

/// A [`Cp2Rule`], optionally reflected through `I₁ ↔ I₂`, `e₁ ↔ e₂`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cp2Variant {
    pub rule: Cp2Rule,
    pub mirrored: bool,
}

impl Cp2Variant {
    pub const ALL: [Cp2Variant; 6] = [
        Cp2Variant { rule: Cp2Rule::General, mirrored: false },
        Cp2Variant { rule: Cp2Rule::General, mirrored: true },
        Cp2Variant { rule: Cp2Rule::Exchanged, mirrored: false },
        Cp2Variant { rule: Cp2Rule::Exchanged, mirrored: true },
        Cp2Variant { rule: Cp2Rule::Display, mirrored: false },
        Cp2Variant { rule: Cp2Rule::Display, mirrored: true },
    ];

    pub fn mirror(self) -> Self {
        Cp2Variant {
            mirrored: !self.mirrored,
            ..self
        }
    }
}

impl FromStr for Cp2Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (base, mirrored) = match s.strip_suffix("-mirrored") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let rule = match base {
            "general" => Cp2Rule::General,
            "exchanged" => Cp2Rule::Exchanged,
            "display" => Cp2Rule::Display,
            _ => {
                return Err(Error::Format(format!(
                    "unknown recipe `{s}` (general, exchanged, display, optionally -mirrored)"
                )))
            }
        };
        Ok(Cp2Variant { rule, mirrored })
    }
}

impl fmt::Display for Cp2Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.rule {
            Cp2Rule::General => "general",
            Cp2Rule::Exchanged => "exchanged",
            Cp2Rule::Display => "display",
        };
        write!(f, "{base}{}", if self.mirrored { "-mirrored" } else { "" })
    }
}

/// `Θ₁ = [(0,1), (-1,0)]`.
pub fn theta1() -> OrientedFlag {
    OrientedFlag::new(vec![vec![0, 1], vec![-1, 0]]).expect("unimodular")
}

/// `Θ₂ = [(-1,0), (0,1)]`.
pub fn theta2() -> OrientedFlag {
    OrientedFlag::new(vec![vec![-1, 0], vec![0, 1]]).expect("unimodular")
}

fn swap_coordinates(flag: &OrientedFlag) -> OrientedFlag {
    OrientedFlag::new(flag.stages().iter().map(|r| vec![r[1], r[0]]).collect())
        .expect("coordinate swap keeps unimodularity")
}

/// Plan for `[Θ, 0]` on `(ℂP²)ⁿ`, one term per fixed point in either
/// region of the chosen recipe.
pub fn cp2_plan(n: usize, variant: Cp2Variant) -> Result<Plan> {
    if n % 3 == 0 {
        return Err(Error::NotRegular {
            value: Rational::zero(),
        });
    }
    let third = |i: usize| (3 * i).cmp(&n);
    use std::cmp::Ordering::{Greater, Less};
    let r1 = |i: [usize; 3]| third(i[0]) == Greater && third(i[2]) == Greater;
    let r2 = |i: [usize; 3]| third(i[1]) == Less && third(i[2]) == Less;
    let r2_display = |i: [usize; 3]| third(i[0]) == Less && third(i[1]) == Less;
    let (t1, t2) = (theta1(), theta2());
    let (first, second) = match variant.rule {
        Cp2Rule::General | Cp2Rule::Display => (t1, t2),
        Cp2Rule::Exchanged => (t2, t1),
    };
    let (first, second) = if variant.mirrored {
        (swap_coordinates(&first), swap_coordinates(&second))
    } else {
        (first, second)
    };
    let total = 3usize.checked_pow(n as u32).expect("n too large");
    let mut terms = Vec::new();
    for idx in 0..total {
        let a = cp_assignment(3, n, idx);
        let mut counts = [0usize; 3];
        for &j in &a {
            counts[j - 1] += 1;
        }
        if variant.mirrored {
            counts.swap(0, 1);
        }
        let in_second = match variant.rule {
            Cp2Rule::Display => r2_display(counts),
            _ => r2(counts),
        };
        let flag = if r1(counts) {
            &first
        } else if in_second {
            &second
        } else {
            continue;
        };
        terms.push(PlanTerm {
            coefficient: 1,
            fixed_point: cp_point_id(&a),
            flag: flag.clone(),
        });
    }
    Ok(Plan::new(terms))
}

/// Univariate polynomial, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct UPoly(Vec<Rational>);

impl UPoly {
    fn constant(c: Rational) -> Self {
        UPoly(vec![c])
    }

    fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Antiderivative vanishing at `x = a`.
    fn integral_from(&self, a: &Rational) -> UPoly {
        let mut out = vec![Rational::zero()];
        for (i, c) in self.0.iter().enumerate() {
            out.push(c / Rational::from_integer(BigInt::from(i + 1)));
        }
        let mut p = UPoly(out);
        let at = p.eval(a);
        p.0[0] -= at;
        p
    }

    /// `x ↦ p(x + c)`.
    fn shift(&self, c: &Rational) -> UPoly {
        // Horner with polynomial arithmetic: p(x+c) = (...(a_n)(x+c) + a_{n-1})...
        let mut acc: Vec<Rational> = Vec::new();
        for coef in self.0.iter().rev() {
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += a * c;
            }
            next[0] += coef;
            acc = next;
        }
        UPoly(acc)
    }

    fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    a - b
                })
                .collect(),
        )
    }

    fn scale(&self, c: &Rational) -> UPoly {
        UPoly(self.0.iter().map(|x| x * c).collect())
    }
}

/// A function that is polynomial on each `[start + k, start + k + 1]`.
struct Piecewise {
    start: i64,
    pieces: Vec<UPoly>,
}

impl Piecewise {
    fn end(&self) -> i64 {
        self.start + self.pieces.len() as i64
    }

    /// The cumulative integral `F(x) = ∫_{-∞}^x f`, one piece per unit
    /// interval over the support.
    fn cumulative(&self) -> Piecewise {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut acc = Rational::zero();
        for (k, p) in self.pieces.iter().enumerate() {
            let a = Rational::from_integer(BigInt::from(self.start + k as i64));
            let mut q = p.integral_from(&a);
            q.0[0] += &acc;
            acc = q.eval(&(a + Rational::one()));
            pieces.push(q);
        }
        Piecewise {
            start: self.start,
            pieces,
        }
    }

    /// The piece of a cumulative function valid on `[m, m+1]`.
    fn cumulative_piece(&self, m: i64, total: &Rational) -> UPoly {
        if m < self.start {
            UPoly::constant(Rational::zero())
        } else if m >= self.end() {
            UPoly::constant(total.clone())
        } else {
            self.pieces[(m - self.start) as usize].clone()
        }
    }

    /// Convolution with the uniform density on `[-1, 1]`:
    /// `h(x) = (F(x+1) - F(x-1)) / 2`.
    fn convolve_uniform(&self) -> Piecewise {
        let f = self.cumulative();
        let total = f.pieces.last().map(|p| p.eval(&Rational::from_integer(BigInt::from(f.end()))))
            .unwrap_or_else(Rational::zero);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let one = Rational::one();
        let start = self.start - 1;
        let end = self.end() + 1;
        let pieces = (start..end)
            .map(|m| {
                let plus = f.cumulative_piece(m + 1, &total).shift(&one);
                let minus = f.cumulative_piece(m - 1, &total).shift(&-one.clone());
                plus.sub(&minus).scale(&half)
            })
            .collect();
        Piecewise { start, pieces }
    }

    fn piece_at(&self, m: i64) -> Option<&UPoly> {
        if m < self.start || m >= self.end() {
            None
        } else {
            Some(&self.pieces[(m - self.start) as usize])
        }
    }
}

/// Density at 0 of the sum of `n` independent uniform variables on
/// `[-1, 1]`, by exact repeated convolution.
pub fn uniform_sum_density_at_zero(n: usize) -> Rational {
    assert!(n >= 1, "need at least one summand");
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut f = Piecewise {
        start: -1,
        pieces: vec![UPoly::constant(half.clone()), UPoly::constant(half)],
    };
    for _ in 1..n {
        f = f.convolve_uniform();
    }
    let zero = Rational::zero();
    let left = f.piece_at(-1).map(|p| p.eval(&zero)).unwrap_or_default();
    let right = f.piece_at(0).map(|p| p.eval(&zero)).unwrap_or_default();
    assert_eq!(left, right, "density is discontinuous at 0");
    right
}
