//! Desk-scale statistical harnesses. Every harness derives per-sample seeds
//! from the configured seed and collects results in sample order, so reports
//! do not depend on the number of worker threads.

pub mod decorr;
pub mod distribution;
pub mod exponent;
pub mod pasep_decorr;
pub mod png;
pub mod projection;
pub mod stats;

pub use decorr::{
    model_source, run_decorrelation, run_decorrelation_with, run_off_characteristic_control,
    run_polymer_decorrelation, DecorrConfig, DecorrReport, TailRow,
};
pub use distribution::{
    run_distribution_test, DistributionConfig, DistributionReport, ReferenceChoice,
};
pub use exponent::{run_exponent_fit, ExponentConfig, ExponentFit};
pub use pasep_decorr::{run_pasep_decorrelation, PasepDecorrConfig, PasepReport};
pub use png::{run_png_lis, PngConfig, PngReport};
pub use projection::{run_projection_experiment, ProjectionConfig, ProjectionReport};
