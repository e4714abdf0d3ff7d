//! Hamiltonian torus spaces described by their isolated fixed points.
//!
//! A [`TorusModel`] of rank `d` stores, for every fixed point `F`, the moment
//! image `μ(F) ∈ t*` and the tangent weights of the isotropy representation.
//! Equivariant classes are stored through their restrictions to the fixed
//! points, one polynomial in `u_1..u_d` per point.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, parse_rational, MultiPoly, Rational};
use crate::error::{Error, Result};

/// An element of the weight lattice of the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(components: Vec<i64>) -> Self {
        Weight(components)
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `⟨α, ξ⟩` for a cocharacter `ξ`.
    pub fn pair(&self, xi: &[i64]) -> i64 {
        self.0.iter().zip(xi).map(|(a, b)| a * b).sum()
    }

    /// The linear form `α·u`.
    pub fn linear_form(&self) -> MultiPoly {
        MultiPoly::linear(&self.0)
    }
}

impl std::ops::Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub id: String,
    pub moment: Vec<Rational>,
    pub weights: Vec<Weight>,
}

/// Where a model came from; built-in families enable extra generators and
/// regularity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `(S²)ⁿ` with the diagonal circle action.
    Spheres { n: usize },
    /// `(ℂP^{k-1})ⁿ` with the maximal torus of `PU(k)`.
    ProjectiveProduct { k: usize, n: usize },
    Custom,
}

#[derive(Clone, Debug)]
pub struct TorusModel {
    rank: usize,
    fixed_points: Vec<FixedPoint>,
    roots: Option<Vec<Weight>>,
    weyl_order: Option<u64>,
    global_stabilizer_order: u64,
    kind: ModelKind,
    index: HashMap<String, usize>,
}

impl TorusModel {
    /// Builds a model, checking every invariant and reporting the first
    /// violation.
    pub fn new(
        rank: usize,
        fixed_points: Vec<FixedPoint>,
        roots: Option<Vec<Weight>>,
        weyl_order: Option<u64>,
        global_stabilizer_order: u64,
    ) -> Result<Self> {
        let invalid = |id: Option<&str>, reason: String| Error::InvalidModel {
            id: id.map(str::to_string),
            reason,
        };
        if rank == 0 {
            return Err(invalid(None, "rank must be positive".into()));
        }
        if fixed_points.is_empty() {
            return Err(invalid(None, "model has no fixed points".into()));
        }
        let weight_count = fixed_points[0].weights.len();
        let mut index = HashMap::with_capacity(fixed_points.len());
        for (i, fp) in fixed_points.iter().enumerate() {
            let id = Some(fp.id.as_str());
            if index.insert(fp.id.clone(), i).is_some() {
                return Err(invalid(id, "duplicate fixed point id".into()));
            }
            if fp.moment.len() != rank {
                return Err(invalid(
                    id,
                    format!("moment has {} components, rank is {rank}", fp.moment.len()),
                ));
            }
            if fp.weights.len() != weight_count {
                return Err(invalid(
                    id,
                    format!("{} weights, expected {weight_count}", fp.weights.len()),
                ));
            }
            for w in &fp.weights {
                if w.len() != rank {
                    return Err(invalid(id, format!("weight {w} has wrong length")));
                }
                if w.is_zero() {
                    return Err(invalid(
                        id,
                        "zero tangent weight (fixed point is not isolated)".into(),
                    ));
                }
            }
        }
        if let Some(roots) = &roots {
            if roots.len() % 2 != 0 {
                return Err(invalid(None, "root list has odd length".into()));
            }
            let mut counts: BTreeMap<&Weight, i64> = BTreeMap::new();
            for r in roots {
                if r.len() != rank || r.is_zero() {
                    return Err(invalid(None, format!("bad root {r}")));
                }
                *counts.entry(r).or_default() += 1;
            }
            for r in roots {
                if counts.get(&-r).copied().unwrap_or(0) != counts[r] {
                    return Err(invalid(None, format!("root list not closed under negation at {r}")));
                }
            }
        }
        if weyl_order == Some(0) {
            return Err(invalid(None, "weyl_order must be positive".into()));
        }
        if global_stabilizer_order == 0 {
            return Err(invalid(None, "global_stabilizer_order must be positive".into()));
        }
        Ok(TorusModel {
            rank,
            fixed_points,
            roots,
            weyl_order,
            global_stabilizer_order,
            kind: ModelKind::Custom,
            index,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn fixed_points(&self) -> &[FixedPoint] {
        &self.fixed_points
    }

    pub fn fixed_point(&self, id: &str) -> Result<&FixedPoint> {
        self.index
            .get(id)
            .map(|&i| &self.fixed_points[i])
            .ok_or_else(|| Error::UnknownFixedPoint(id.to_string()))
    }

    pub fn roots(&self) -> Option<&[Weight]> {
        self.roots.as_deref()
    }

    pub fn weyl_order(&self) -> Option<u64> {
        self.weyl_order
    }

    pub fn global_stabilizer_order(&self) -> u64 {
        self.global_stabilizer_order
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Number of tangent weights per fixed point (half the real dimension).
    pub fn complex_dimension(&self) -> usize {
        self.fixed_points[0].weights.len()
    }

    /// Complex dimension of the torus quotient, i.e. the exponent of a
    /// top-degree class.
    pub fn quotient_dimension(&self) -> usize {
        self.complex_dimension().saturating_sub(self.rank)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let fixed_points = file
            .fixed_points
            .into_iter()
            .map(|fp| {
                let moment = fp
                    .moment
                    .iter()
                    .map(RationalRepr::to_rational)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::InvalidModel {
                        id: Some(fp.id.clone()),
                        reason: e.to_string(),
                    })?;
                Ok(FixedPoint {
                    id: fp.id,
                    moment,
                    weights: fp.weights.into_iter().map(Weight).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TorusModel::new(
            file.rank,
            fixed_points,
            file.roots.map(|r| r.into_iter().map(Weight).collect()),
            file.weyl_order,
            file.global_stabilizer_order.unwrap_or(1),
        )
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            rank: self.rank,
            fixed_points: self
                .fixed_points
                .iter()
                .map(|fp| FixedPointFile {
                    id: fp.id.clone(),
                    moment: fp
                        .moment
                        .iter()
                        .map(|q| RationalRepr::Text(format_rational(q)))
                        .collect(),
                    weights: fp.weights.iter().map(|w| w.0.clone()).collect(),
                })
                .collect(),
            roots: self
                .roots
                .as_ref()
                .map(|r| r.iter().map(|w| w.0.clone()).collect()),
            weyl_order: self.weyl_order,
            global_stabilizer_order: Some(self.global_stabilizer_order),
        };
        serde_json::to_string_pretty(&file).expect("model serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    rank: usize,
    fixed_points: Vec<FixedPointFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weyl_order: Option<u64>,
    #[serde(default)]
    global_stabilizer_order: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixedPointFile {
    id: String,
    moment: Vec<RationalRepr>,
    weights: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Text(String),
}

impl RationalRepr {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalRepr::Int(i) => Ok(Rational::from_integer(BigInt::from(*i))),
            RationalRepr::Text(s) => parse_rational(s),
        }
    }
}

/// Id of the sphere-product fixed point `f_I`, e.g. `f{}` or `f{1,3}`.
pub fn sphere_point_id(subset: &[usize]) -> String {
    let parts: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    format!("f{{{}}}", parts.join(","))
}

/// Id of the fixed point of `(ℂP^{k-1})ⁿ` whose `i`-th factor sits at
/// `F_{assignment[i]}` (one-based), e.g. `F1123`.
pub fn cp_point_id(assignment: &[usize]) -> String {
    let sep = if assignment.iter().any(|&j| j > 9) { "," } else { "" };
    let parts: Vec<String> = assignment.iter().map(|j| j.to_string()).collect();
    format!("F{}", parts.join(sep))
}

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `(S²)ⁿ` with the diagonal rotation action.
///
/// Fixed points are indexed by subsets `I ⊆ {1..n}` (factors at the south
/// pole), enumerated by bitmask; `μ(f_I) = n - 2|I|` and the tangent
/// weights are `n - |I|` copies of `+1` and `|I|` copies of `-1`. The
/// `SO(3)` roots `±1` with Weyl order 2 are attached.
pub fn build_sphere_product(n: usize) -> TorusModel {
    assert!(n >= 1, "need at least one sphere");
    assert!(n < 63, "sphere product too large");
    let mut points = Vec::with_capacity(1 << n);
    for mask in 0u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let k = subset.len();
        let weights = (0..n)
            .map(|i| Weight(vec![if mask >> i & 1 == 1 { -1 } else { 1 }]))
            .collect();
        points.push(FixedPoint {
            id: sphere_point_id(&subset),
            moment: vec![int(n as i64 - 2 * k as i64)],
            weights,
        });
    }
    let mut model = TorusModel::new(
        1,
        points,
        Some(vec![Weight(vec![1]), Weight(vec![-1])]),
        Some(2),
        1,
    )
    .expect("sphere model is valid");
    model.kind = ModelKind::Spheres { n };
    model
}

fn unit(d: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// Tangent weights of `ℂP^{k-1}` at `F_j` (one-based `j`).
fn cp_factor_weights(k: usize, j: usize) -> Vec<Vec<i64>> {
    let d = k - 1;
    if j == k {
        (0..d).map(|i| unit(d, i)).collect()
    } else {
        let mut out: Vec<Vec<i64>> = (0..d)
            .filter(|&i| i != j - 1)
            .map(|i| {
                let mut v = unit(d, i);
                v[j - 1] -= 1;
                v
            })
            .collect();
        let mut last = vec![0; d];
        last[j - 1] = -1;
        out.push(last);
        out
    }
}

/// `μ(F_j)` on `ℂP^{k-1}`.
fn cp_factor_moment(k: usize, j: usize) -> Vec<i64> {
    let d = k - 1;
    let mut m = vec![1; d];
    if j < k {
        m[j - 1] -= k as i64;
    }
    m
}

/// Decodes fixed point `index` of `(ℂP^{k-1})ⁿ` into its factor assignment
/// (one-based, first factor most significant).
pub fn cp_assignment(k: usize, n: usize, mut index: usize) -> Vec<usize> {
    let mut a = vec![0; n];
    for slot in a.iter_mut().rev() {
        *slot = index % k + 1;
        index /= k;
    }
    a
}

/// `(ℂP^{k-1})ⁿ` with the diagonal action of the maximal torus of `PU(k)`.
///
/// Fixed points are assignments of each factor to one of `F_1..F_k`.
/// Roots `±e_i` and `±(e_i - e_j)` of `PU(k)` are attached with Weyl order
/// `k!`.
pub fn build_cp_product(k: usize, n: usize) -> TorusModel {
    assert!(k >= 2, "need k >= 2");
    assert!(n >= 1, "need at least one factor");
    let d = k - 1;
    let count = k.checked_pow(n as u32).expect("model too large");
    let factor_weights: Vec<Vec<Vec<i64>>> = (1..=k).map(|j| cp_factor_weights(k, j)).collect();
    let factor_moments: Vec<Vec<i64>> = (1..=k).map(|j| cp_factor_moment(k, j)).collect();
    let mut points = Vec::with_capacity(count);
    for idx in 0..count {
        let a = cp_assignment(k, n, idx);
        let mut moment = vec![0i64; d];
        let mut weights = Vec::with_capacity(n * d);
        for &j in &a {
            for (m, x) in moment.iter_mut().zip(&factor_moments[j - 1]) {
                *m += x;
            }
            weights.extend(factor_weights[j - 1].iter().cloned().map(Weight));
        }
        points.push(FixedPoint {
            id: cp_point_id(&a),
            moment: moment.into_iter().map(int).collect(),
            weights,
        });
    }
    let mut roots = Vec::new();
    for i in 0..d {
        roots.push(Weight(unit(d, i)));
        roots.push(-&Weight(unit(d, i)));
        for j in i + 1..d {
            let mut v = unit(d, i);
            v[j] = -1;
            let w = Weight(v);
            roots.push(-&w);
            roots.push(w);
        }
    }
    let weyl: u64 = (1..=k as u64).product();
    let mut model = TorusModel::new(d, points, Some(roots), Some(weyl), 1)
        .expect("projective product model is valid");
    model.kind = ModelKind::ProjectiveProduct { k, n };
    model
}

/// Generators of the equivariant cohomology used to build classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `c_1` of the prequantum line bundle: `⟨μ(F), u⟩` at each `F`.
    Prequantum,
    /// The sphere-product class `v_i` (one-based).
    V(usize),
    /// `c_1` of the trivial bundle with weight `α`: `α·u` everywhere.
    Line(Weight),
}

impl Generator {
    /// Parses `L`/`prequantum`, `v3`/`v(3)` or `line(1,-1)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let unknown = || Error::UnknownGenerator(t.to_string());
        if t == "L" || t == "prequantum" {
            return Ok(Generator::Prequantum);
        }
        if let Some(rest) = t.strip_prefix("line(").and_then(|r| r.strip_suffix(')')) {
            let comps = rest
                .split(',')
                .map(|s| s.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| unknown())?;
            return Ok(Generator::Line(Weight(comps)));
        }
        if let Some(rest) = t.strip_prefix('v') {
            let rest = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(rest);
            return rest.parse().map(Generator::V).map_err(|_| unknown());
        }
        Err(unknown())
    }
}

/// A `T`-equivariant class stored by its restrictions to the fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    nvars: usize,
    restrictions: BTreeMap<String, MultiPoly>,
}

impl EquivariantClass {
    /// Builds a class from one restriction per fixed point of `model`.
    pub fn from_restrictions(
        model: &TorusModel,
        restrictions: BTreeMap<String, MultiPoly>,
    ) -> Result<Self> {
        for fp in model.fixed_points() {
            match restrictions.get(&fp.id) {
                None => {
                    return Err(Error::InvalidModel {
                        id: Some(fp.id.clone()),
                        reason: "class has no restriction here".into(),
                    })
                }
                Some(p) if p.nvars() != model.rank() => {
                    return Err(Error::DimensionMismatch {
                        expected: model.rank(),
                        found: p.nvars(),
                    })
                }
                _ => {}
            }
        }
        if restrictions.len() != model.fixed_points().len() {
            let extra = restrictions
                .keys()
                .find(|k| model.fixed_point(k).is_err())
                .cloned()
                .unwrap_or_default();
            return Err(Error::UnknownFixedPoint(extra));
        }
        Ok(EquivariantClass {
            nvars: model.rank(),
            restrictions,
        })
    }

    fn from_fn(model: &TorusModel, f: impl Fn(usize, &FixedPoint) -> MultiPoly) -> Self {
        EquivariantClass {
            nvars: model.rank(),
            restrictions: model
                .fixed_points()
                .iter()
                .enumerate()
                .map(|(i, fp)| (fp.id.clone(), f(i, fp)))
                .collect(),
        }
    }

    pub fn constant(model: &TorusModel, c: Rational) -> Self {
        Self::from_fn(model, |_, _| MultiPoly::constant(model.rank(), c.clone()))
    }

    pub fn restriction(&self, id: &str) -> Result<&MultiPoly> {
        self.restrictions
            .get(id)
            .ok_or_else(|| Error::UnknownFixedPoint(id.to_string()))
    }

    pub fn restrictions(&self) -> impl Iterator<Item = (&String, &MultiPoly)> {
        self.restrictions.iter()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Common total exponent of all restrictions, if the class is
    /// homogeneous. Zero restrictions are ignored; the zero class has none.
    pub fn homogeneous_exponent(&self) -> Option<u32> {
        let mut exp = None;
        for p in self.restrictions.values() {
            if p.is_zero() {
                continue;
            }
            let e = p.homogeneous_degree()?;
            match exp {
                None => exp = Some(e),
                Some(x) if x != e => return None,
                _ => {}
            }
        }
        exp
    }

    pub fn map(&self, f: impl Fn(&str, &MultiPoly) -> MultiPoly) -> Self {
        EquivariantClass {
            nvars: self.nvars,
            restrictions: self
                .restrictions
                .iter()
                .map(|(k, p)| (k.clone(), f(k, p)))
                .collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&MultiPoly, &MultiPoly) -> MultiPoly) -> Self {
        assert_eq!(self.restrictions.len(), other.restrictions.len(), "classes on different models");
        self.map(|k, p| f(p, &other.restrictions[k]))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|_, p| p.scale(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        self.map(|_, p| p.pow(e))
    }
}

/// The class of `kind` on `model`.
pub fn class_generator(model: &TorusModel, kind: &Generator) -> Result<EquivariantClass> {
    match kind {
        Generator::Prequantum => Ok(EquivariantClass::from_fn(model, |_, fp| {
            let mut p = MultiPoly::zero(model.rank());
            for (i, m) in fp.moment.iter().enumerate() {
                p += &MultiPoly::var(model.rank(), i).scale(m);
            }
            p
        })),
        Generator::V(i) => {
            let n = match model.kind() {
                ModelKind::Spheres { n } => n,
                _ => {
                    return Err(Error::Unsupported(
                        "v(i) classes exist only on sphere-product models".into(),
                    ))
                }
            };
            if *i == 0 || *i > n {
                return Err(Error::IndexOutOfRange { index: *i, max: n });
            }
            let bit = i - 1;
            Ok(EquivariantClass::from_fn(model, |idx, _| {
                let sign = if idx >> bit & 1 == 1 { -1 } else { 1 };
                MultiPoly::linear(&[sign])
            }))
        }
        Generator::Line(alpha) => {
            if alpha.len() != model.rank() {
                return Err(Error::DimensionMismatch {
                    expected: model.rank(),
                    found: alpha.len(),
                });
            }
            Ok(EquivariantClass::from_fn(model, |_, _| alpha.linear_form()))
        }
    }
}

/// Whether `p0` is a regular value of the moment map.
///
/// Rank-one models compare against every fixed-point moment. For the
/// built-in `(ℂP²)ⁿ` model the origin is regular iff `3 ∤ n`. Anything else
/// is [`Error::Unsupported`].
pub fn check_regular(model: &TorusModel, p0: &[Rational]) -> Result<bool> {
    if p0.len() != model.rank() {
        return Err(Error::DimensionMismatch {
            expected: model.rank(),
            found: p0.len(),
        });
    }
    if model.rank() == 1 {
        return Ok(model.fixed_points().iter().all(|fp| fp.moment[0] != p0[0]));
    }
    match model.kind() {
        ModelKind::ProjectiveProduct { k: 3, n } if p0.iter().all(Zero::is_zero) => Ok(n % 3 != 0),
        _ => Err(Error::Unsupported(
            "regularity test for rank >= 2 is only available for (CP^2)^n at the origin".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn sphere_fixed_points() {
        let m = build_sphere_product(3);
        assert_eq!(m.fixed_points().len(), 8);
        let f0 = m.fixed_point("f{}").unwrap();
        assert_eq!(f0.moment, vec![rat(3, 1)]);
        assert_eq!(f0.weights, vec![w(&[1]); 3]);
        let f12 = m.fixed_point("f{1,2}").unwrap();
        assert_eq!(f12.moment, vec![rat(-1, 1)]);
        assert_eq!(f12.weights, vec![w(&[-1]), w(&[-1]), w(&[1])]);
    }

    #[test]
    fn sphere_moments_are_antisymmetric() {
        let n = 5;
        let m = build_sphere_product(n);
        let full = (1u64 << n) - 1;
        for (mask, fp) in m.fixed_points().iter().enumerate() {
            let other = &m.fixed_points()[(full ^ mask as u64) as usize];
            assert_eq!(fp.moment[0], -other.moment[0].clone());
        }
    }

    #[test]
    fn cp_fixed_points() {
        let m = build_cp_product(3, 1);
        let f3 = m.fixed_point("F3").unwrap();
        assert_eq!(f3.moment, vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(f3.weights, vec![w(&[1, 0]), w(&[0, 1])]);
        let f1 = m.fixed_point("F1").unwrap();
        assert_eq!(f1.moment, vec![rat(-2, 1), rat(1, 1)]);
        assert_eq!(f1.weights, vec![w(&[-1, 1]), w(&[-1, 0])]);
        assert_eq!(build_cp_product(3, 2).fixed_points().len(), 9);
    }

    #[test]
    fn cp_moment_formula() {
        let m = build_cp_product(3, 4);
        for fp in m.fixed_points() {
            let digits: Vec<usize> = fp.id[1..].chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
            let i: Vec<i64> = (1..=3).map(|j| digits.iter().filter(|&&x| x == j).count() as i64).collect();
            assert_eq!(fp.moment, vec![rat(-2 * i[0] + i[1] + i[2], 1), rat(i[0] - 2 * i[1] + i[2], 1)]);
            assert_eq!(fp.weights.len(), 8);
        }
    }

    #[test]
    fn cp_moments_invariant_under_permutations() {
        // S3 permutes F1, F2, F3; on t* it acts through the reflections
        // swapping e1 <-> e2 and F_j <-> F_3.
        for n in 1..=3 {
            let m = build_cp_product(3, n);
            let moments: Vec<(Rational, Rational)> = m
                .fixed_points()
                .iter()
                .map(|f| (f.moment[0].clone(), f.moment[1].clone()))
                .collect();
            let mut orig = moments.clone();
            orig.sort();
            // F1 <-> F2 swaps the two coordinates
            let mut swapped: Vec<_> = moments.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
            swapped.sort();
            assert_eq!(orig, swapped);
            // F1 <-> F3: (a, b) -> (-a - b, b)
            let mut refl: Vec<_> = moments
                .iter()
                .map(|(a, b)| (-a - b, b.clone()))
                .collect();
            refl.sort();
            assert_eq!(orig, refl);
        }
    }

    #[test]
    fn built_in_models_have_nonzero_equal_length_weights() {
        for m in [build_sphere_product(4), build_cp_product(3, 3), build_cp_product(4, 2)] {
            let count = m.complex_dimension();
            for fp in m.fixed_points() {
                assert_eq!(fp.weights.len(), count);
                assert!(fp.weights.iter().all(|w| !w.is_zero()));
            }
        }
    }

    #[test]
    fn generators() {
        let m = build_sphere_product(3);
        let l = class_generator(&m, &Generator::Prequantum).unwrap();
        assert_eq!(l.restriction("f{}").unwrap(), &MultiPoly::linear(&[3]));
        let v1 = class_generator(&m, &Generator::V(1)).unwrap();
        assert_eq!(v1.restriction("f{1}").unwrap(), &MultiPoly::linear(&[-1]));
        assert_eq!(v1.restriction("f{2}").unwrap(), &MultiPoly::linear(&[1]));
        assert_eq!(
            class_generator(&m, &Generator::V(4)),
            Err(Error::IndexOutOfRange { index: 4, max: 3 })
        );
        let cp = build_cp_product(3, 1);
        let l = class_generator(&cp, &Generator::Prequantum).unwrap();
        assert_eq!(l.restriction("F3").unwrap(), &MultiPoly::linear(&[1, 1]));
        assert!(class_generator(&cp, &Generator::V(1)).is_err());
        let line = class_generator(&cp, &Generator::Line(w(&[1, -1]))).unwrap();
        assert_eq!(line.restriction("F2").unwrap(), &MultiPoly::linear(&[1, -1]));
        assert!(matches!(Generator::parse("foo"), Err(Error::UnknownGenerator(_))));
        assert_eq!(Generator::parse("v12").unwrap(), Generator::V(12));
        assert_eq!(Generator::parse("line(2,-1)").unwrap(), Generator::Line(w(&[2, -1])));
    }

    #[test]
    fn regularity() {
        assert!(!check_regular(&build_sphere_product(4), &[rat(0, 1)]).unwrap());
        assert!(check_regular(&build_sphere_product(5), &[rat(0, 1)]).unwrap());
        assert!(!check_regular(&build_sphere_product(5), &[rat(1, 1)]).unwrap());
        assert!(!check_regular(&build_cp_product(3, 6), &[rat(0, 1), rat(0, 1)]).unwrap());
        assert!(check_regular(&build_cp_product(3, 4), &[rat(0, 1), rat(0, 1)]).unwrap());
        assert!(matches!(
            check_regular(&build_cp_product(3, 4), &[rat(1, 1), rat(0, 1)]),
            Err(Error::Unsupported(_))
        ));
        assert!(check_regular(&build_sphere_product(3), &[]).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = build_cp_product(3, 2);
        let back = TorusModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back.fixed_points(), m.fixed_points());
        assert_eq!(back.roots(), m.roots());
        assert_eq!(back.weyl_order(), Some(6));

        let text = r#"{"rank":1,"fixed_points":[
            {"id":"a","moment":["1/2"],"weights":[[1]]},
            {"id":"b","moment":[-1],"weights":[[0]]}]}"#;
        match TorusModel::from_json(text) {
            Err(Error::InvalidModel { id, .. }) => assert_eq!(id.as_deref(), Some("b")),
            other => panic!("unexpected {other:?}"),
        }
        let dup = r#"{"rank":1,"fixed_points":[
            {"id":"a","moment":[1],"weights":[[1]]},
            {"id":"a","moment":[-1],"weights":[[-1]]}]}"#;
        assert!(matches!(TorusModel::from_json(dup), Err(Error::InvalidModel { .. })));
        let roots = r#"{"rank":1,"fixed_points":[{"id":"a","moment":[1],"weights":[[1]]}],
            "roots":[[1],[1]]}"#;
        assert!(matches!(TorusModel::from_json(roots), Err(Error::InvalidModel { .. })));
        let ok = r#"{"rank":1,"fixed_points":[{"id":"a","moment":["3/4"],"weights":[[2]]}],
            "global_stabilizer_order":2}"#;
        let m = TorusModel::from_json(ok).unwrap();
        assert_eq!(m.global_stabilizer_order(), 2);
        assert_eq!(m.fixed_points()[0].moment, vec![rat(3, 4)]);
    }
}
