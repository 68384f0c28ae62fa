//! Distances between measures and between spaces.

use serde::{Deserialize, Serialize};

pub mod boxdist;
pub mod dp_diam;
mod flow;
pub mod me;
pub mod measurement;
pub mod prokhorov;
mod rational;

pub use boxdist::{box_upper, BoxConfig, BoxReport};
pub use dp_diam::{check_dp_diam, prokhorov_line, DpDiamReport};
pub use me::{me_distance, me_from_gaps};
pub use measurement::{
    dconc_lower_estimate, hausdorff, measurement_sample, prokhorov_points, prokhorov_up_to_shift,
    rho_r_estimate, Estimate, MeasurementSample, PointMeasure,
};
pub use prokhorov::{prokhorov, prokhorov_with, ProkhorovMethod};

/// What a reported number certifies about the quantity it estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    LowerBound,
    UpperBound,
    Estimate,
}
