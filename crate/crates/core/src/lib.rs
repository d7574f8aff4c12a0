//! Tetravalent graphs with half-arc-transitive group actions: alternating
//! cycles, attachment structure, quotients and isomorphism testing.

pub mod alternating;
pub mod autsearch;
pub mod constructions;
pub mod formats;
pub mod graph;
pub mod harness;
pub mod perm;
pub mod quotients;
