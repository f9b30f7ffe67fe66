use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("mapping table is not a mutual inverse pair: {0}")]
    NotAnAutomorphism(String),

    #[error("automorphism is not IA: generator x{index} has nontrivial abelianized image")]
    NotIa { index: usize },

    #[error("word is not in the subgroup: x1-exponent sum is {residue} mod {modulus}")]
    NotInSubgroup { residue: i64, modulus: usize },

    #[error("automorphism is not in the kernel of the Magnus representation")]
    NotInKernel,

    #[error("degree {degree} exceeds the supported cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("desk-scale cap exceeded: {0}")]
    CapExceeded(String),

    #[error("tensor is not a Lie element (Dynkin check failed)")]
    NotLieElement,

    #[error("unknown lemma id: {0}")]
    UnknownLemma(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
