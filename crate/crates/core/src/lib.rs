//! Exact arithmetic for truncated Witt vectors and Galois rings, Teichmüller
//! boxes in Z_q^n, exhaustive zero counting for congruence systems over those
//! boxes, and the p-adic divisibility bounds that the counts must satisfy.

pub mod bounds;
pub mod boxes;
pub mod counting;
pub mod error;
pub mod expr;
pub mod fq;
pub mod galois;
pub mod poly;
mod residue;
pub mod ring;
pub mod sampling;
pub mod selftest;
pub mod witt;

pub use bounds::{BoundOptions, BoundReport, DegreeReading, Status};
pub use boxes::{BoxPoint, BoxSpec, Closeness};
pub use counting::{CountConfig, CountReport, ProblemInstance};
pub use error::{Error, Result};
pub use fq::{FieldParams, Fq, FqElem};
pub use galois::{DigitVec, GRElem, GaloisRing, Valuation};
pub use poly::{Monomial, MultiPoly, Vars};
pub use ring::{Integers, Ring};
pub use witt::{WittGenRequest, WittOp};
