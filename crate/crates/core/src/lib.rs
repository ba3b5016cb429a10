//! Quasicrystal potentials as finitely represented measures on the line.
//!
//! * [`exact`]: exact lengths over a declared basis of reals.
//! * [`measure`]: pieces, windows, colored Delone sets and their calculus.
//! * [`flc`]: window-level decision procedures for the finite local
//!   complexity hierarchy, recodings and eventual-periodicity detection.
//! * [`symbolic`]: substitution, circle-map and Bernoulli words, continued
//!   fractions, Gordon block statistics and suspensions.
//! * [`spectral`]: transfer matrices for `-u'' + mu u = E u`, Floquet bands,
//!   Lyapunov exponents, Dirichlet eigenvalue counting and the Fibonacci
//!   trace map.

pub mod exact;
pub mod flc;
pub mod measure;
pub mod spectral;
pub mod symbolic;

pub use exact::{Basis, ExactLength, Rational};
pub use measure::{ColoredDeloneSet, MeasureWindow, Piece, PieceContent};
