//! Averages over a distribution of misalignment angles, sweeps over the
//! total cycle time and the search for maximum power.

mod disorder;
mod maximize;
pub mod quadrature;
mod sweep;

pub use disorder::{disorder_average, disorder_average_many, DisorderKind, DisorderSpec, DEFAULT_NODES, MIN_NODES};
pub use maximize::{
    golden_section_max, max_positive_work_time, maximize_power, work_sign_changes, MaxPowerResult,
};
pub use sweep::{
    average_cycle, geomspace, linspace, power_efficiency_curve, sweep_total_time, Averages, CycleTemplate, PvPoint,
    SweepRow, SweepSpec,
};
