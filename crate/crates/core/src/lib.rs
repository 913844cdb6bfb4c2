//! Balanced triangles modulo `m` generated by the Steinhaus rule and its
//! negated variant.
//!
//! The crate covers the whole pipeline from a first row to a certified
//! balanced triangle: residue arithmetic ([`modring`]), triangles and their
//! dihedral symmetries ([`triangle`]), interlaced arithmetic progressions and
//! their periodic orbits ([`iap`], [`idap`]), the binomial-sum matrices that
//! govern those orbits ([`binommat`]), linear algebra over `Z/pZ` and
//! `Z/p^uZ` ([`modlinalg`]), arithmetic triangles ([`arithtri`]), the explicit
//! 24-periodic families of solutions ([`families`]), exhaustive and lifting
//! searches ([`search`]) and the reproduction checks ([`certify`]).

pub mod arithtri;
pub mod binommat;
pub mod budget;
pub mod certify;
pub mod error;
pub mod families;
pub mod iap;
pub mod idap;
pub mod matrix;
pub mod modlinalg;
pub mod modring;
pub mod search;
pub mod triangle;

pub use budget::Budget;
pub use error::{Error, Result};
pub use matrix::{IntMatrix, ModMatrix};
pub use modring::{ModTuple, Modulus, MultiplicityMap};
pub use triangle::{LocalRule, Triangle};
