//! Exact invariants of closed oriented 3-manifolds presented by Heegaard
//! gluing matrices: homology, torsion linking forms, U(1) Chern–Simons and
//! BF partition functions, and Wilson-loop expectation values.
//!
//! All results are exact. Gauss sums come back as [`cyclo::CyclotomicSum`]s
//! whose vanishing is certified by reduction modulo cyclotomic polynomials.
//!
//! ```
//! use heegaard::{gluing::GluingData, invariants};
//!
//! let l52 = GluingData::lens(5, 2).unwrap();
//! let h = heegaard::homology::h1(&l52);
//! assert_eq!(h.invariant_factors(), vec![5.into()]);
//!
//! // Z_CS of L(2,1) at level 1 is exactly zero
//! let z = invariants::z_cs(&GluingData::lens(2, 1).unwrap(), 1).unwrap();
//! assert!(z.is_zero());
//! ```

pub mod cli;
pub mod cyclo;
pub mod exactalg;
pub mod gluing;
pub mod homology;
pub mod invariants;

pub use cyclo::{CyclotomicSum, RationalMod1};
pub use exactalg::{IntMatrix, RationalVector, SmithDecomposition};
pub use gluing::GluingData;
pub use homology::HomologyStructure;
pub use invariants::{ExpectationResult, Framing, LinkPresentation};
