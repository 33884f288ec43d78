//! Construction, verification and classification of *-representations of the
//! algebras attached to a planar affine map.
//!
//! Two algebras are associated to an affine map `L(x) = A x + u` on the plane:
//! `A_L`, generated by `S, T, E, Ẽ`, and `C_{L,a}`, generated by `W, V` subject
//! to the cubic relations
//!
//! ```text
//! W²V = aW − (det A) VW² + (tr A) WVW
//! WV² = aV − (det A) V²W + (tr A) VWV
//! ```
//!
//! Finite-dimensional *-representations of `C_{L,a}` are governed by the
//! dynamics of `L̂(x, y) = ((tr A) x − (det A) y + a, x)` on the eigenvalue
//! pairs of `WV` and `VW`. This crate builds those representations
//! ([`rep`]), studies the conic on which the eigenvalue pairs live
//! ([`curve`]), links algebra parameters with the quartic surfaces they
//! quantize ([`bridge`], [`classify`], [`existence`]) and handles the
//! companion algebra `A_L` ([`al`]).

pub mod al;
pub mod bridge;
pub mod classify;
pub mod curve;
pub mod dynamics;
mod error;
pub mod existence;
pub mod export;
pub mod linalg;
mod params;
pub mod rep;
pub mod tolerance;

pub use error::{Error, Result};
pub use params::{AlgebraParams, RotationAngle};

pub use dynamics::{AffineMap2, OrbitKind, OrbitSegment, Point};
pub use tolerance::Tolerances;
