//! Iterative half-GCD for big integers: the accelerated Euclidean algorithm
//! (AEA) with its half-size extended Euclid primitive (ILE), a matrix ladder
//! that updates only the leading limbs it needs, and classical baselines
//! (Euclid, Lehmer, binary) to validate it against.

pub mod aea;
pub mod error;
pub mod gcd;
pub mod ile;
pub mod limb_view;
pub mod mat2;

pub use aea::{
    aea, aea_streaming, contract_bits, prefix_violations, replay, AeaConfig, AeaStats,
    HalfGcdResult, TraceEvent, TraceKind,
};
pub use error::{AeaError, IleError, LimbError};
pub use gcd::{
    binary_gcd, euclid_gcd, ext_euclid, gcd_aea, gcd_aea_with, lehmer_gcd, verify_transform,
    Algorithm, GcdConfig, GcdOutcome, GcdStats,
};
pub use ile::{ile, ile_bounded, stop_threshold, IleResult};
pub use limb_view::{bit_length, decompose, recompose, LimbBase, LimbPair};
pub use mat2::Mat2;
