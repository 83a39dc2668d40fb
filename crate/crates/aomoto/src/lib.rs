//! Exact computation of rank-1 twisted cohomology on complements of
//! projective line arrangements.
//!
//! The library works entirely over cyclotomic fields `Q(zeta_N)` with
//! arbitrary-precision rational coefficients; there is no floating point
//! anywhere. The main pipeline is:
//!
//! * [`cyclo`] — scalars: exact rationals and cyclotomic numbers, plus the
//!   literal grammar used by every file format.
//! * [`linalg`] — dense exact linear algebra (rank, kernel, multi-solve).
//! * [`arrangement`] — hyperplane arrangements in the projective plane and
//!   3-space, their incidence combinatorics, Betti numbers and generic
//!   plane sections.
//! * [`twisted`] — the Orlik–Solomon algebra in degrees 0..2, the Aomoto
//!   complex of a residue assignment, the ESV/STV admissibility check and
//!   Milnor-fiber eigenspace reports.
//! * [`conditions`] — the extended applicability criterion for arrangements
//!   where the ESV condition fails at isolated points, with witnesses, and
//!   a pruned search for admissible residue subsets.
//! * [`polefilt`] — an independent route to `dim H^1` through the pole-order
//!   filtration on logarithmic forms; used as a cross-check oracle.
//! * [`g31`] — the degree-60 reflection arrangement of type G31: generator,
//!   pair classification, census tables and the residue data for its first
//!   Milnor cohomology.
//! * [`report`] — JSON/text documents for the command-line surface.

pub mod arrangement;
pub mod conditions;
pub mod cyclo;
pub mod g31;
pub mod linalg;
pub mod polefilt;
pub mod report;
pub mod twisted;

pub use cyclo::{CycloField, CycloNum, Rational};
