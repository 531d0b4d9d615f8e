//! Symmetric chain decomposition of the Boolean cube and bi-Lipschitz
//! bijections from `{0,1}^n` onto the Hamming ball
//! `{z ∈ {0,1}^{n+1} : |z| > n/2}`.
//!
//! ```
//! use cubeball::{bits::BitVector, bijections::psi, chains::chain_code};
//!
//! let x: BitVector = "01100110".parse().unwrap();
//! assert_eq!(chain_code(&x).to_string(), "_1100_10");
//!
//! let z = psi(&"0000".parse().unwrap()).unwrap();
//! assert_eq!(z.to_string(), "00111");
//! ```
//!
//! The guide under `book/` walks through each module; its code samples are
//! compiled as doctests of this crate.

pub mod analysis;
pub mod bijections;
pub mod bits;
pub mod chains;
pub mod cli;
pub mod error;
pub mod metrics;
pub mod selftest;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cube.md")]
    mod cube {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/bijections.md")]
    mod bijections {}
    #[doc = include_str!("../../../book/src/stretch.md")]
    mod stretch {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
