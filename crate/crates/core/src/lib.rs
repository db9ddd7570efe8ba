//! Certified enclosures of topological entropy and pressure for shifts of
//! finite type, Sofic shifts and coded shifts.

pub mod coded;
pub mod enclosure;
pub mod error;
pub mod families;
mod graph;
pub mod language;
pub mod potential;
pub mod pressure;
pub mod rational;
pub mod sft;
pub mod sofic;
pub mod witness;
pub mod word;

pub use coded::{coded_pressure, sardinas_patterson, sofic_approximation, CodedShift, DriverBudget, GeneratorStream};
pub use enclosure::{perron_enclosure, RationalInterval, WeightedMatrix};
pub use error::{Error, Result};
pub use families::{BetaNumber, BetaShift, SSet};
pub use language::{FullShift, Language, WordSet};
pub use potential::{LocallyConstantPotential, PotentialOracle};
pub use pressure::{sft_pressure, sofic_pressure, PressureEnclosure, Status, TraceEntry};
pub use rational::Rational;
pub use sft::VertexShift;
pub use sofic::{LabeledGraph, bouquet};
pub use witness::{build_witness, WitnessConfig, WitnessReport};
pub use word::{Alphabet, Word};
