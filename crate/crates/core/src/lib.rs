//! Truncated p-adic models for the triple-product p-adic L-function of
//! quaternionic modular forms over totally real fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: `Z/p^N`, unramified extensions, Iwasawa series, characters.
//! * [`weights`]: weight spaces, the weight map and unbalanced triples.
//! * [`distributions`]: locally analytic functions and distributions on residue
//!   disks with the Iwahori action, `U_𝔭`, BGG maps and the dual pairing.
//! * [`serre_tate`]: q-expansions in the monomial model with `U`, `V`, `Θ`.
//! * [`nearly_ovc`]: the jet model of nearly overconvergent forms and the
//!   trilinear product.
//! * [`hecke_euler`]: spherical test vectors, Petersson recursions and Euler factors.
//! * [`spectral`]: characteristic series, Newton polygons, slope projectors.
//! * [`lfunction`]: assembly of the interpolation pipeline and reports.
//! * [`cli`]: the `ptriple` command-line front end.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod hecke_euler;
pub mod lfunction;
pub mod matrix;
pub mod nearly_ovc;
pub mod padic;
pub mod spectral;
pub mod suites;
pub mod ring;
pub mod serre_tate;
pub mod symbolic;
pub mod weights;

pub use error::{Error, Result};
