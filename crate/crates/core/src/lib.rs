//! Exact wall-crossing and fixed-point localization for symplectic
//! quotients of Hamiltonian torus actions.
//!
//! Pairings `∫_{X//T(p)} κ(a)` are computed from fixed-point data alone: a
//! [`Plan`] lists `(fixed point, oriented flag)` pairs, and each pair turns
//! the restriction of `a` into a rational number through weighted Segre
//! classes of the tangent representation.

pub mod algebra;
pub mod error;
pub mod localization;
pub mod model;
pub mod plans;
pub mod weighted;

pub use algebra::{format_rational, parse_rational, rat, series_invert, MultiPoly, Rational, TruncSeries};
pub use error::{Error, Result};
pub use localization::{
    evaluate_plan, flag_split, lambda_flag, stage_map, weyl_correct, FlagSplit, OrientedFlag, Plan, PlanTerm,
};
pub use model::{
    build_cp_product, build_sphere_product, check_regular, class_generator, EquivariantClass, FixedPoint,
    Generator, ModelKind, TorusModel, Weight,
};
pub use plans::{
    cp2_plan, rank1_plan, uniform_sum_density_at_zero, walls, Cp2Rule, Cp2Variant, Direction, WallList,
};
pub use weighted::{
    equivariant_euler, fiber_integrate_power, ring_relation, weight_gcd, weighted_chern, weighted_segre,
    RingRelation, WeightedLine, WeightedSpace,
};
