//! Compact RBF-FD (Hermite) differentiation formulas with Gaussian and
//! multiquadric kernels: exact series weights in the shape parameter, numeric
//! weights, local truncation errors and optimal shape parameters.

pub mod analysis;
pub mod dd;
pub mod error;
pub mod formulas;
pub mod jets;
pub mod kernels;
pub mod series;

pub use analysis::{
    apply_formula, compare_kernels, convergence, exact_operator, flat_limit_report, lte_numeric, lte_numeric_with,
    lte_poly_derived, lte_poly_template, optimal_eps, sweep, sweep_argmin, LteEvaluator, LtePoly, LteResult, Mechanism,
    OptimalEpsResult, Point,
};
pub use error::{Error, Result};
pub use formulas::{
    assemble_numeric, assemble_series, catalog, weights_auto, weights_auto_with, weights_flat, weights_numeric,
    weights_series, AutoConfig, FlatWeights, FormulaId, Route, SeriesWeightSet, StencilSpec, WeightSet,
};
pub use jets::{testfn_jet1, testfn_jet2, Jet1, Jet2, TestFunctionId};
pub use kernels::{BlockRole, KernelKind, Offset, OperatorKind};
pub use series::{Rational, TruncatedSeries};
