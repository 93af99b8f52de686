//! The lattice of stable matchings: brute-force oracle, rotations and their
//! poset, closed-set enumeration, compressions for sublattices, and the
//! hybrid-instance decompositions of nearby instances.

mod closure;
mod compression;
mod hybrid;
mod oracle;
mod order;
mod poset;
mod rotation;

pub use closure::{
    check_semisublattice, check_sublattice, ClosureVerdict, ClosureWitness, LatticeOp,
};
pub use compression::{
    compression_from_edges, compression_from_membership, union_edge_sets, EdgeSet,
    MetaRotationPoset, Node,
};
pub use hybrid::{hybrid_instances_one_side, hybrid_instances_two_side};
pub use oracle::{
    all_matchings, enumerate_stable_bruteforce, enumerate_stable_capped, firm_optimal_of,
    oracle_cap_from_env, stable_under_all, worker_optimal_of, DEFAULT_ORACLE_CAP, ORACLE_CAP_ENV,
};
pub use order::{Ideals, StrictOrder};
pub use poset::{build_rotation_poset, RotationPoset};
pub use rotation::{eliminate, exposed_rotations, Rotation};

use thiserror::Error;

use crate::instance::{InstanceError, Matching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("n = {n} exceeds the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("rotation {rotation} is not exposed in {matching}")]
    NotExposed {
        rotation: String,
        matching: Matching,
    },
    #[error("member set is not a sublattice: {0}")]
    NotASublattice(Box<ClosureWitness>),
    #[error("expected a (0,·) pair, found p = {p}")]
    NotZeroN { p: usize },
    #[error("expected a (1,·) pair, found p = {p}")]
    NotOneN { p: usize },
    #[error("edge set refers to rotation {index}, poset has {len}")]
    UnknownRotation { index: usize, len: usize },
}
