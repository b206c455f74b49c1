use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimbError {
    #[error("{kind} limb width {width} out of range")]
    BadWidth { kind: &'static str, width: u32 },
    #[error("limb vectors differ in length ({u} vs {v})")]
    LengthMismatch { u: usize, v: usize },
    #[error("window X[{i}..{j}] out of range for {len} limbs")]
    WindowOutOfRange { i: usize, j: usize, len: usize },
    #[error("pair is not ordered: U < V")]
    Unordered,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IleError {
    #[error("ILE needs u0 >= u1 >= 0")]
    BadInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AeaError {
    #[error("half-gcd needs u >= v > 2")]
    BadPair,
    #[error("half-gcd needs l(u) >= {needed} bits for this word size, got {got}")]
    TooSmall { needed: u64, got: u64 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
