//! Zero localization for differential compositions of complex polynomials.
//!
//! Given polynomials `f` and `g`, the differential composition `h = f(D) g`
//! substitutes the differentiation operator for the variable of `f` and
//! applies the result to `g`. Unless `h` vanishes identically, its zeros lie
//! in an explicit convex region built from the convex hull of the zeros of
//! `g` and the inverted nonzero zeros of `f`. This crate computes `h`, finds
//! its zeros, constructs the region, and checks containment with per-zero
//! certificates.

pub mod error;
pub mod json;
pub mod poly;
pub mod region;
pub mod roots;
pub mod svg;
pub mod theorem;
pub mod verify;

pub use error::Error;
pub use poly::Polynomial;
pub use region::{ConvexRegion, Segment};
pub use roots::RootMultiset;
pub use theorem::{Certificate, TakagiInstance};

pub type Result<T> = std::result::Result<T, Error>;
