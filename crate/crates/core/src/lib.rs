//! Stable matchings that survive small changes to the preferences.
//!
//! The crate covers a single instance (deferred acceptance, rotations, the
//! rotation poset and its closed sets), families of nearby instances (compound
//! and multi-room deferred acceptance, hybrid decompositions, compressions of
//! the rotation poset) and an exact LP relaxation with θ-rounding. Everything
//! at small `n` can be cross-checked against the brute-force oracle in
//! [`lattice`].

pub mod compound;
pub mod da;
pub mod fixtures;
pub mod instance;
pub mod lattice;
pub mod lp;
pub mod multiroom;
pub mod random;
pub mod verify;

pub use da::{firm_da, worker_da, DaTrace};
pub use instance::{
    blocking_pairs, diff_pq, is_stable, join, meet, parse_instance, FirmId, Instance,
    InstanceError, Matching, PQDelta, PreferenceList, WorkerId,
};
pub use lattice::{build_rotation_poset, LatticeError, MetaRotationPoset, Rotation, RotationPoset};
