//! Certified interval arithmetic.

mod elementary;
mod interval;
mod perron;

pub use elementary::{exp_enclosure, exp_interval, log_enclosure, log_interval};
pub use interval::RationalInterval;
pub use perron::{perron_enclosure, PerronEnclosure, WeightedMatrix};
