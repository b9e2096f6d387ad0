//! Exact combinatorics for Langlands parameters of classical and similitude
//! groups over characters of order two.
//!
//! ```
//! use lpcomb::compgroup::{component_group, Variant};
//! use lpcomb::gf2::Gf2Vec;
//! use lpcomb::params::{GroupSpec, Parameter, SimpleParam};
//!
//! # fn main() -> lpcomb::Result<()> {
//! let ch = |s: &str| Gf2Vec::parse(s).unwrap();
//! let phi = Parameter::simple(
//!     GroupSpec::sp(1, 2),
//!     vec![
//!         (SimpleParam::character("e1", ch("10")), 1),
//!         (SimpleParam::character("e2", ch("01")), 1),
//!         (SimpleParam::character("e3", ch("11")), 1),
//!     ],
//! )?;
//! assert_eq!(component_group(&phi, Variant::Sbar).order(), 4);
//! # Ok(())
//! # }
//! ```

pub mod catalog;
pub mod charfield;
pub mod cli;
pub mod compgroup;
pub mod endoscopy;
pub mod error;
pub mod gf2;
pub mod ledger;
pub mod params;
pub mod rational;
pub mod smo;
pub mod spec;
pub mod weylconst;

pub use error::{Error, Result};
