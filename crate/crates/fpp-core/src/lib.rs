//! Invariants of finitely presented groups: coset enumeration, low-index
//! subgroups, rewriting, abelianization, and finite-quotient censuses.

pub mod abelian;
pub mod catalog;
pub mod census;
pub mod classify;
pub mod coset;
pub mod error;
pub mod facts;
pub mod group;
pub mod lowindex;
pub mod perm;
pub mod presentation;
pub mod register;
pub mod rewrite;
pub mod snf;
pub mod store;
pub mod word;
