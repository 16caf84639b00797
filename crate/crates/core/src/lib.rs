//! A symbolic tree-algebra engine for morphosyntax.
//!
//! The engine implements, over non-planar binary rooted trees:
//!
//! - the free non-associative commutative magmas of syntactic and
//!   morphological objects ([`syntax`], [`morph`]);
//! - workspace coproducts that extract accessible terms, with the Merge
//!   action on syntactic workspaces ([`syntax`]) and the unary-keeping
//!   coproduct with its comodule structure on morphological workspaces
//!   ([`morph`]);
//! - the Merge operad, its algebra actions, and the colored correspondence
//!   that inserts morphological trees at syntactic leaves ([`operad`]);
//! - morphosyntactic trees, the assembly operators, and the four
//!   Distributed Morphology rewrites with their commutative-diagram laws
//!   ([`morphosyntax`]);
//! - machine-checkable law suites with seeded, reproducible sampling
//!   ([`verify`]).

pub mod config;
pub mod label;
pub mod morph;
pub mod morphosyntax;
pub mod notation;
pub mod operad;
pub mod sum;
pub mod syntax;
pub mod tree;
pub mod verify;

pub use label::{Feature, FeatureBundle, SynAtom, Valuation};
pub use sum::{FormalSum, Tensor, TensorSum, WorkspaceSum};
pub use tree::{Forest, Tree, VertexId};
