//! Exact computational tools for automorphism groups of free groups.
//!
//! The crate provides, over arbitrary finite rank:
//!
//! - freely reduced words and automorphisms given by generator-image tables
//!   ([`word`]);
//! - the group ring Z[F_n], the Laurent ring Z[H] of the abelianization, and
//!   matrices over it ([`groupring`]);
//! - Fox derivations, the Magnus representation, and membership tests for its
//!   kernel via the metabelian 2×2 embedding ([`fox`]);
//! - truncated noncommutative (Magnus) expansions, Lyndon words, and exact
//!   free-Lie-algebra decomposition ([`series`]);
//! - Johnson filtration depth and Johnson homomorphisms, with τ₁ written in
//!   the Magnus-generator basis ([`johnson`]);
//! - Reidemeister–Schreier data for the kernels W_{n,d} of the maps onto a
//!   cyclic group of order d, and restriction of IA automorphisms to them
//!   ([`schreier`]);
//! - the explicit detecting elements, the composite map into IA(W)^{ab},
//!   exact integer rank, and a verification suite ([`detect`]).
//!
//! All arithmetic is exact; coefficient types are arbitrary precision.

pub mod detect;
pub mod error;
pub mod fox;
pub mod groupring;
pub mod johnson;
pub mod sample;
pub mod schreier;
pub mod series;
pub mod word;

pub use error::{Error, Result};
pub use word::{parse_word, Automorphism, Word};
