//! Finite categories enriched in the free quantaloid `Q_B` on a finite
//! category `B`.
//!
//! A `Q_B`-category is the same thing as a faithful functor `p : E → B`:
//! objects carry an extent in `B` and `E(x, y)` is a subset of
//! `B(|x|, |y|)`. The crate decides topologicity of `p` (existence of all
//! final liftings) and totality of `E` (existence of all weighted
//! colimits), which coincide, and computes MacNeille completions as
//! fixpoints of the Isbell adjunction.
//!
//! ```
//! use qbcat::{fixtures, limits, presheaf::DEFAULT_CAP, topological};
//!
//! let chain = fixtures::e_ch();
//! assert!(topological::is_topological(&chain, DEFAULT_CAP).unwrap().holds());
//! assert!(limits::is_total(&chain, DEFAULT_CAP).unwrap().holds());
//!
//! let antichain = fixtures::e_ac();
//! let m = qbcat::macneille::macneille(&antichain, DEFAULT_CAP).unwrap();
//! assert_eq!(qbcat::QCat::size(&m.completion), 4);
//! ```

pub mod base;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod io;
pub mod limits;
pub mod macneille;
pub mod presheaf;
pub mod qcategory;
pub mod quantaloid;
pub mod report;
pub mod topological;

pub use base::{CategoryData, FinCategory};
pub use error::{Error, Result};
pub use presheaf::{Copresheaf, Presheaf};
pub use qcategory::{QCat, QCategory, QFunctor};
pub use quantaloid::QHom;
pub use report::{Decision, ValidationReport};
