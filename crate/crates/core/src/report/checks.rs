//! The table of checks, their reference anchors, comparisons and default tolerances.

use serde::{Serialize, Serializer};

use super::config::{BaseKind, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Base,
    Bundle,
    Structures,
    Sphere,
    Theorem7,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Base, Suite::Bundle, Suite::Structures, Suite::Sphere, Suite::Theorem7];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Base => "base",
            Suite::Bundle => "bundle",
            Suite::Structures => "structures",
            Suite::Sphere => "sphere",
            Suite::Theorem7 => "theorem7",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Stream id for per-sample generators.
    pub fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl Serialize for Suite {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// pass iff residual < tolerance; aggregated by maximum
    Below,
    /// pass iff residual > tolerance; aggregated by minimum
    Above,
    /// the stated identity does not hold numerically: pass iff the residual stays above the
    /// tolerance, aggregated by minimum
    Refuted,
    /// recorded discrepancy, always passes; aggregated by maximum
    Info,
}

impl Comparison {
    pub fn label(self) -> &'static str {
        match self {
            Comparison::Below => "lt",
            Comparison::Above => "gt",
            Comparison::Refuted => "refuted",
            Comparison::Info => "info",
        }
    }

    pub fn passes(self, residual: f64, tol: f64) -> bool {
        match self {
            Comparison::Below => residual < tol,
            Comparison::Above | Comparison::Refuted => residual > tol,
            Comparison::Info => true,
        }
    }

    fn by_min(self) -> bool {
        matches!(self, Comparison::Above | Comparison::Refuted)
    }

    /// Folds per-sample residuals; any NaN poisons the aggregate.
    pub fn aggregate(self, values: &[f64]) -> f64 {
        if values.iter().any(|v| v.is_nan()) || values.is_empty() {
            return f64::NAN;
        }
        if self.by_min() {
            values.iter().copied().fold(f64::INFINITY, f64::min)
        } else {
            values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// When a check applies beyond its suite being selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applies {
    Always,
    FlatBase,
    PositiveCurvatureBase,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckSpec {
    pub name: &'static str,
    pub suite: Suite,
    pub reference: &'static str,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub applies: Applies,
    pub note: Option<&'static str>,
}

/// Reference anchors a check may cite, with a one-line description.
pub const ANCHORS: &[(&str, &str)] = &[
    ("base-jets", "metric jets, Christoffel symbols and curvature of the base chart"),
    ("bundle-koszul-oracle", "Levi-Civita connection of the lifted metric from the Koszul formula"),
    ("bundle-metric-inverse", "closed-form inverse of the lifted metric in the adapted frame"),
    ("bundle-connection-table", "closed-form connection table of the lifted metric"),
    ("almost-product", "almost product structure P and its metric compatibility"),
    ("framed-structure", "framed f(3,-1) structure p, xi_k, eta^k"),
    ("framed-expansion", "expansion of p^2 for general coefficients"),
    ("metrical-framed-structure", "metric compatibility of the framed structure"),
    ("sphere-lifts", "tangential lift and induced metric of the sphere bundle"),
    ("sphere-connection-table", "brackets and connection table of the sphere bundle"),
    ("sphere-paracontact", "almost paracontact structure induced on the sphere bundle"),
    ("sphere-curvature-blocks", "closed-form curvature blocks of the sphere bundle"),
    ("space-form-obstruction", "the sphere bundle never has constant sectional curvature"),
    ("tensor-independence", "linear independence of the four tensors in the tangential block"),
];

const PRINTED: Option<&str> = Some("printed index reading; discrepancy with the oracle is expected and recorded");
const NOT_NORMAL: Option<&str> =
    Some("the vertical field E x E~ has a nonzero tangential component, so this identity fails on the sphere");

macro_rules! check {
    ($name:expr, $suite:ident, $reference:expr, $cmp:ident, $tol:expr) => {
        check!($name, $suite, $reference, $cmp, $tol, Always, None)
    };
    ($name:expr, $suite:ident, $reference:expr, $cmp:ident, $tol:expr, $applies:ident, $note:expr) => {
        CheckSpec {
            name: $name,
            suite: Suite::$suite,
            reference: $reference,
            comparison: Comparison::$cmp,
            tolerance: $tol,
            applies: Applies::$applies,
            note: $note,
        }
    };
}

pub fn check_specs() -> Vec<CheckSpec> {
    vec![
        check!("base.christoffel_vs_finite_difference", Base, "base-jets", Below, 1e-6),
        check!("base.curvature_symmetries", Base, "base-jets", Below, 1e-10),
        check!("base.space_form_sectional", Base, "base-jets", Below, 1e-9),
        check!("bundle.oracle_torsion", Bundle, "bundle-koszul-oracle", Below, 1e-8),
        check!("bundle.oracle_metric", Bundle, "bundle-koszul-oracle", Below, 1e-8),
        check!("bundle.metric_inverse", Bundle, "bundle-metric-inverse", Below, 1e-10),
        check!("bundle.connection_closed", Bundle, "bundle-connection-table", Below, 1e-8),
        check!("bundle.connection_printed", Bundle, "bundle-connection-table", Info, 1e-8, Always, PRINTED),
        check!("structures.product", Structures, "almost-product", Below, 1e-10),
        check!("structures.isometry", Structures, "almost-product", Below, 1e-9),
        check!("structures.perturbed_product", Structures, "almost-product", Above, 1e-4),
        check!("structures.perturbed_isometry", Structures, "almost-product", Above, 1e-4),
        check!("structures.p_cubed", Structures, "framed-structure", Below, 1e-9),
        check!("structures.p_squared", Structures, "framed-structure", Below, 1e-9),
        check!("structures.duality", Structures, "framed-structure", Below, 1e-10),
        check!("structures.annihilation", Structures, "framed-structure", Below, 1e-9),
        check!("structures.corank", Structures, "framed-structure", Below, 0.5),
        check!("structures.local_expression", Structures, "framed-structure", Below, 1e-10),
        check!("structures.general_expansion", Structures, "framed-expansion", Below, 1e-9),
        check!("structures.scaling", Structures, "framed-expansion", Below, 1e-9),
        check!("structures.metricity", Structures, "metrical-framed-structure", Below, 1e-9),
        check!("structures.metric_expansion", Structures, "metrical-framed-structure", Below, 1e-9),
        check!("structures.perturbed_lambda_metricity", Structures, "metrical-framed-structure", Above, 1e-3),
        check!("structures.perturbed_lambda_p_cubed", Structures, "metrical-framed-structure", Below, 1e-9),
        check!("sphere.radial_annihilation", Sphere, "sphere-lifts", Below, 1e-10),
        check!("sphere.induced_metric_b_independence", Sphere, "sphere-lifts", Below, 1e-10),
        check!("sphere.oracle_torsion", Sphere, "sphere-connection-table", Below, 1e-8),
        check!("sphere.oracle_metric", Sphere, "sphere-connection-table", Below, 1e-8),
        check!("sphere.bracket_closed", Sphere, "sphere-connection-table", Below, 1e-8),
        check!("sphere.connection_closed", Sphere, "sphere-connection-table", Below, 1e-8),
        check!("sphere.curvature_antisymmetry", Sphere, "sphere-curvature-blocks", Below, 1e-6),
        check!("sphere.curvature_pair_symmetry", Sphere, "sphere-curvature-blocks", Below, 1e-6),
        check!("sphere.blocks_closed", Sphere, "sphere-curvature-blocks", Below, 1e-6),
        check!("sphere.blocks_printed", Sphere, "sphere-curvature-blocks", Info, 1e-6, Always, PRINTED),
        check!("sphere.sectional_rebasing", Sphere, "sphere-curvature-blocks", Below, 1e-8),
        check!("sphere.xi3_normality", Sphere, "sphere-paracontact", Below, 1e-10),
        check!("sphere.paracontact_annihilation", Sphere, "sphere-paracontact", Below, 1e-9),
        check!("sphere.xi2_normality", Sphere, "sphere-paracontact", Refuted, 1e-3, Always, NOT_NORMAL),
        check!("sphere.paracontact_square", Sphere, "sphere-paracontact", Refuted, 1e-3, Always, NOT_NORMAL),
        check!("sphere.paracontact_metric", Sphere, "sphere-paracontact", Refuted, 1e-3, Always, NOT_NORMAL),
        check!("theorem7.min_defect", Theorem7, "space-form-obstruction", Above, 1e-3),
        check!("theorem7.sasaki_min_defect", Theorem7, "space-form-obstruction", Above, 1e-3),
        check!("theorem7.model_tangential_defect", Theorem7, "space-form-obstruction", Below, 1e-9),
        check!("theorem7.flat_vertical_sectional", Theorem7, "space-form-obstruction", Below, 1e-8, FlatBase, None),
        check!("theorem7.flat_horizontal_sectional", Theorem7, "space-form-obstruction", Below, 1e-8, FlatBase, None),
        check!("theorem7.flat_mixed_sectional", Theorem7, "space-form-obstruction", Below, 1e-8, FlatBase, None),
        check!(
            "theorem7.terminal_identity",
            Theorem7,
            "space-form-obstruction",
            Above,
            1e-3,
            PositiveCurvatureBase,
            None
        ),
        check!("theorem7.independence_rank", Theorem7, "tensor-independence", Below, 0.5),
    ]
}

impl CheckSpec {
    pub fn applies_to(&self, cfg: &RunConfig) -> bool {
        cfg.suites.contains(&self.suite)
            && match self.applies {
                Applies::Always => true,
                Applies::FlatBase => cfg.base == BaseKind::Euclidean || cfg.k == 0.0,
                Applies::PositiveCurvatureBase => cfg.base == BaseKind::ConstantCurvature && cfg.k > 0.0,
            }
    }
}

/// Checks expected in a report for this configuration, in table order.
pub fn expected_checks(cfg: &RunConfig) -> Vec<CheckSpec> {
    check_specs().into_iter().filter(|c| c.applies_to(cfg)).collect()
}
