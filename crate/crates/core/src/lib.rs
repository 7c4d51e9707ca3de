//! Exact-arithmetic toolkit for the odd contact Lie superalgebras `m(n)`
//! and their special subalgebras `sm(n; kappa)` over prime fields `F_p`
//! with `p > 3`.
//!
//! The crate builds the algebras from scratch (divided power superalgebra,
//! distinguished superderivations, contact vector fields), verifies their
//! structural identities exhaustively at desk scale, classifies p-characters
//! (nonsingular, Delta-invertible, regular semisimple), constructs reduced
//! Kac modules by PBW straightening, and certifies module irreducibility
//! with a seeded MeatAxe.
//!
//! Everything is exact: scalars are canonical residues mod `p`, sparse maps
//! iterate in a fixed lexicographic order, and every randomized routine is
//! driven by an explicit seed.

pub mod chars;
pub mod contact;
pub mod dps;
pub mod field;
pub mod linalg;
pub mod lsa;
pub mod poly;
pub mod theorems;
pub mod repn;

pub use chars::{AutMode, CharMatrix, CharTarget, DeltaVerdict, SearchOutcome};
pub use contact::{ContactAlgebra, ContactKind};
pub use dps::{MultiIndex, Parity, Shape, SuperElement, VectorField};
pub use field::{Fp, PrimeField};
pub use linalg::{Mat, RowSpace};
pub use lsa::{GradingAut, Lsa, PChar};
pub use repn::{GModule, MeataxeOutcome, SubAlgebra};

/// Errors surfaced by fallible toolkit operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("not a prime > 3 in the supported range: {0}")]
    BadPrime(u64),
    #[error("division by zero in F_p")]
    DivisionByZero,
    #[error("direction {0} out of range 1..={1}")]
    DirectionOutOfRange(usize, usize),
    #[error("operand is not parity-homogeneous")]
    NotHomogeneous,
    #[error("p-power requires an even vector field")]
    OddPPower,
    #[error("height precondition violated: need {need}, got {got}")]
    HeightPrecondition { need: String, got: i64 },
    #[error("graded piece at degree {0} is empty")]
    EmptyGradedPiece(i64),
    #[error("inconsistent weight/character pair: {0}")]
    InconsistentWeight(String),
    #[error("module failed verification: {0}")]
    InvalidModule(String),
    #[error("no support satisfies the construction at this (n, p, h): {0}")]
    Unrealizable(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Worker count requested through `CARTAN_ODD_THREADS` (defaults to 1).
pub fn worker_threads() -> usize {
    std::env::var("CARTAN_ODD_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(1)
}
