//! Exact state-sum invariants of cut cellular surfaces for finite groups.
//!
//! * [`group`]: finite groups as Cayley tables.
//! * [`ccs`]: cut cellular surfaces, their moves, gluing and symmetries.
//! * [`colouring`]: exact counts of flat G-colourings.
//! * [`tqft`]: normalized invariants and invariant matrices.
//! * [`dcp`]: the functions D, C, P and the identities they satisfy.

pub mod ccs;
pub mod group;
pub mod colouring;
pub mod tqft;
pub mod dcp;
