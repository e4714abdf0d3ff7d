//! Localization of equivariant classes to fixed points along oriented flags
//! of circle subgroups, and evaluation of plans built from them.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::model::{EquivariantClass, FixedPoint, TorusModel};
use crate::weighted::{weight_gcd, weighted_segre, WeightedLine, WeightedSpace};

/// A signed lattice basis `ξ_1..ξ_d`; `ξ_i` spans and orients the circle
/// `H_i/H_{i-1}` of the flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct OrientedFlag {
    stages: Vec<Vec<i64>>,
}

impl OrientedFlag {
    pub fn new(stages: Vec<Vec<i64>>) -> Result<Self> {
        let d = stages.len();
        if d == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(row) = stages.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: row.len(),
            });
        }
        let det = determinant(&stages);
        if det.abs() != 1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(OrientedFlag { stages })
    }

    pub fn rank(&self) -> usize {
        self.stages.len()
    }

    pub fn stages(&self) -> &[Vec<i64>] {
        &self.stages
    }

    /// The same flag with the orientation of stage `i` reversed.
    pub fn reverse_stage(&self, i: usize) -> OrientedFlag {
        let mut stages = self.stages.clone();
        for x in &mut stages[i] {
            *x = -*x;
        }
        OrientedFlag { stages }
    }
}

impl TryFrom<Vec<Vec<i64>>> for OrientedFlag {
    type Error = Error;
    fn try_from(v: Vec<Vec<i64>>) -> Result<Self> {
        OrientedFlag::new(v)
    }
}

impl From<OrientedFlag> for Vec<Vec<i64>> {
    fn from(f: OrientedFlag) -> Self {
        f.stages
    }
}

/// Fraction-free Gaussian elimination (Bareiss).
fn determinant(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanTerm {
    pub coefficient: i64,
    pub fixed_point: String,
    pub flag: OrientedFlag,
}

/// A formal integer combination of `(fixed point, flag)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Plan {
    terms: Vec<PlanTerm>,
}

impl Plan {
    pub fn new(terms: Vec<PlanTerm>) -> Self {
        Plan { terms }
    }

    pub fn terms(&self) -> &[PlanTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks that every term names a fixed point of `model` and carries a
    /// flag of the model's rank.
    pub fn validate(&self, model: &TorusModel) -> Result<()> {
        for t in &self.terms {
            model.fixed_point(&t.fixed_point)?;
            if t.flag.rank() != model.rank() {
                return Err(Error::InvalidPlan(format!(
                    "flag of rank {} at `{}` on a rank {} model",
                    t.flag.rank(),
                    t.fixed_point,
                    model.rank()
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidPlan(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

/// The tangent space at a fixed point split along a flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSplit {
    /// Stage `j` (zero based) has `d - j - 1` residual variables.
    pub stages: Vec<WeightedSpace>,
    /// Rows `ξ_i` for [`MultiPoly::linear_substitute`].
    pub basis: Vec<Vec<i64>>,
}

impl FlagSplit {
    pub fn is_admissible(&self) -> bool {
        self.stages.iter().all(|s| !s.is_empty())
    }
}

/// Splits the tangent weights of `fp` into the successive quotients of the
/// flag. A weight `α` with coordinates `α'_i = ⟨α, ξ_i⟩` goes to the first
/// stage `j` with `α'_j ≠ 0`, with circle weight `α'_j` and residual
/// `(α'_{j+1}, …, α'_d)`.
pub fn flag_split(fp: &FixedPoint, flag: &OrientedFlag) -> Result<FlagSplit> {
    let d = flag.rank();
    let mut groups: Vec<Vec<WeightedLine>> = vec![Vec::new(); d];
    for w in &fp.weights {
        if w.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: w.len(),
            });
        }
        let coords: Vec<i64> = flag.stages().iter().map(|xi| w.pair(xi)).collect();
        let j = coords
            .iter()
            .position(|&c| c != 0)
            .expect("unimodular flag maps nonzero weights to nonzero coordinates");
        groups[j].push(WeightedLine {
            circle_weight: coords[j],
            residual: coords[j + 1..].to_vec(),
        });
    }
    let stages = groups
        .into_iter()
        .enumerate()
        .map(|(j, lines)| WeightedSpace::new(d - j - 1, lines))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlagSplit {
        stages,
        basis: flag.stages().to_vec(),
    })
}

/// One localization stage: writes `p = Σ_j a_j·x^j` in the stage variable
/// `x` (the first variable) and returns `k·Σ_{j ≥ r-1} a_j·s^w_{j-r+1}(V)`
/// with `r = rank V` and `k` the weight gcd of `V`.
pub fn stage_map(p: &MultiPoly, v: &WeightedSpace) -> Result<MultiPoly> {
    if v.is_empty() {
        return Err(Error::EmptyStage { stage: 1 });
    }
    if p.nvars() != v.residual_count() + 1 {
        return Err(Error::DimensionMismatch {
            expected: v.residual_count() + 1,
            found: p.nvars(),
        });
    }
    let r = v.rank() as u32;
    let parts = p.split_first_variable();
    let top = match parts.keys().next_back() {
        Some(&j) if j + 1 >= r => j + 1 - r,
        _ => return Ok(MultiPoly::zero(v.residual_count())),
    };
    let segre = weighted_segre(v, top);
    let mut out = MultiPoly::zero(v.residual_count());
    for (j, a) in parts.range(r.saturating_sub(1)..) {
        let s = segre.piece(j + 1 - r);
        if !s.is_zero() {
            out += &(a * &s);
        }
    }
    let k = Rational::from_integer(BigInt::from(weight_gcd(v)));
    Ok(out.scale(&k))
}

/// The localization `λ_Θ(a)` at fixed point `fp_id` for the flag `Θ`.
///
/// Inadmissible pairs (some stage empty) contribute zero.
pub fn lambda_flag(
    model: &TorusModel,
    fp_id: &str,
    flag: &OrientedFlag,
    a: &EquivariantClass,
) -> Result<Rational> {
    let fp = model.fixed_point(fp_id)?;
    if flag.rank() != model.rank() {
        return Err(Error::DimensionMismatch {
            expected: model.rank(),
            found: flag.rank(),
        });
    }
    let split = flag_split(fp, flag)?;
    if !split.is_admissible() {
        return Ok(Rational::zero());
    }
    let mut p = a.restriction(fp_id)?.linear_substitute(&split.basis)?;
    for stage in &split.stages {
        if p.is_zero() {
            return Ok(Rational::zero());
        }
        p = stage_map(&p, stage)?;
    }
    let value = p.constant_term();
    Ok(value * Rational::from_integer(BigInt::from(model.global_stabilizer_order())))
}

/// `Σ coefficient·λ_Θ(a)` over the plan terms, evaluated in parallel.
pub fn evaluate_plan(model: &TorusModel, plan: &Plan, a: &EquivariantClass) -> Result<Rational> {
    plan.validate(model)?;
    plan.terms()
        .par_iter()
        .map(|t| {
            lambda_flag(model, &t.fixed_point, &t.flag, a)
                .map(|v| v * Rational::from_integer(BigInt::from(t.coefficient)))
        })
        .try_reduce(Rational::zero, |x, y| Ok(x + y))
}

/// Multiplies every restriction by `∏_{α ∈ Δ} ⟨α, u⟩ / |W|`.
pub fn weyl_correct(model: &TorusModel, a: &EquivariantClass) -> Result<EquivariantClass> {
    let (roots, order) = match (model.roots(), model.weyl_order()) {
        (Some(r), Some(w)) => (r, w),
        _ => return Err(Error::NoRootData),
    };
    let mut factor = MultiPoly::one(model.rank());
    for root in roots {
        factor = &factor * &root.linear_form();
    }
    let factor = factor.scale(&Rational::new(BigInt::one(), BigInt::from(order)));
    Ok(a.map(|_, p| p * &factor))
}
