//! p-adic arithmetic: truncated scalars, unramified extensions, Iwasawa
//! series and characters.

pub mod character;
pub mod scalar;
pub mod series;
pub mod unramified;

pub use character::{char_eval, CharEval, CharValue, Character, LocalPoint, LocalStructure, PrimeComponent, UniversalCharacter};
pub use scalar::{PadicContext, PadicRing, PadicScalar};
pub use series::IwasawaSeries;
pub use unramified::{UnramifiedContext, UnramifiedScalar};

/// `log(x)` for `x ≡ 1 mod p`.
pub fn padic_log(x: &PadicScalar) -> crate::Result<PadicScalar> {
    x.log()
}

/// `exp(x)` for `p | x`.
pub fn padic_exp(x: &PadicScalar) -> crate::Result<PadicScalar> {
    x.exp()
}
