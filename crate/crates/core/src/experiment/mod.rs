//! Iterated sweeps over projection settings, the utility/privacy
//! performance criterion, and trade-off tables and charts.

mod config;
mod output;
mod svg;
mod sweep;
pub mod synthetic;

pub use config::{ExperimentConfig, MethodGrid, PrivacyScoring};
pub use output::{emit_tradeoff_curve, read_tradeoff_csv, tradeoff_csv, weights_label};
pub use svg::tradeoff_svg;
pub use sweep::{cell_seed, mean_std, run_sweep, CellStatus, DataBundle, TaskData, TradeoffPoint};

/// `acc_u + β·(1 − acc_p)` on accuracy fractions. Larger `β` prices privacy
/// higher; `β = 0` scores utility alone.
pub fn performance(acc_u: f64, acc_p: f64, beta: f64) -> f64 {
    acc_u + beta * (1.0 - acc_p)
}
