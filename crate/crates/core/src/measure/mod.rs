//! Exact Haar measures of resonant neighbourhoods and related sets.
//!
//! Every set handled here is a finite union of cylinders, so its measure is a
//! count of digit strings. The counts are obtained by linear algebra over
//! `F_k`; [`brute`] recounts them by enumerating points of `U`.

pub mod brute;
mod counting;
mod geometry;
mod kadic;
mod resonant;

pub use counting::{count_n, linearly_dependent, CountReport};
pub use geometry::{check_inclusion, check_shrunk_inclusion, dist_to_h, scale_measure_check, Cylinder, InclusionReport, ScaleReport};
pub use kadic::KadicMeasure;
pub use resonant::{
    contains, frac_rows, measure_b, measure_b_dprime, measure_b_prime, measure_intersection, measure_set, poly_rows,
    required_precision, ResonantSet, SetKind, MAX_IMAGE_BITS,
};
