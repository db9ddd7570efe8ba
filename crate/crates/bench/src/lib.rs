//! Fixtures shared by the benchmarks.

use symdyn_core::families::s_gap_shift;
use symdyn_core::word::w;
use symdyn_core::{Alphabet, CodedShift, SSet, VertexShift, WeightedMatrix};

pub fn golden() -> VertexShift {
    VertexShift::sft_from_forbidden(Alphabet::binary(), &[w("11")]).expect("golden mean shift")
}

pub fn even_gaps() -> CodedShift {
    s_gap_shift(SSet::evens()).expect("S-gap shift")
}

/// Dense `dim × dim` matrix with entries `(i + 2j) mod 4`, irreducible for
/// `dim ≥ 2`.
pub fn dense_matrix(dim: usize) -> WeightedMatrix {
    let rows: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| ((i + 2 * j) % 4) as i64 + 1).collect())
        .collect();
    WeightedMatrix::from_integers(&rows).expect("positive matrix")
}
