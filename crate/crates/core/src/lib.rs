//! Composition multiplicities `[M_lambda : L_nu]` of simple modules in Verma
//! modules over truncated current Lie algebras `g_n = g (x) C[t]/(t^{n+1})`.
//!
//! The [`engine`] reduces a level-`n` multiplicity to level `n - 1` over a
//! standard Levi subalgebra (after transporting the block by a Weyl group
//! element) and bottoms out in Kazhdan-Lusztig polynomials ([`kl`]). The
//! [`oracle`] builds truncated Verma modules explicitly and extracts the same
//! numbers by exact linear algebra.

pub mod cartan;
pub mod characters;
pub mod chevalley;
pub mod engine;
pub mod error;
pub mod kl;
pub mod linalg;
pub mod oracle;
pub mod parse;
pub mod rational;
pub mod root_datum;
pub mod trunc_weights;
pub mod weyl;

pub use cartan::CartanType;
pub use characters::{FormalCharacter, PartitionCache};
pub use engine::{Engine, MultiplicityQuery, MultiplicityTrace, Transport};
pub use error::{Error, Result};
pub use kl::{KLPolynomial, KlCache};
pub use rational::Q;
pub use root_datum::{LeviDatum, RootDatum, Weight, WeylElement};
pub use trunc_weights::{BlockLabel, TruncatedWeight};
