//! Learn grounded STRIPS action models from binary state-transition data,
//! analyze the cube-like graph structure such models induce, emit and parse
//! grounded PDDL, and plan in the learned models with domain-independent
//! heuristics validated against ground-truth simulators.
//!
//! The crate is organized around the pipeline:
//!
//! 1. [`envs`] simulates the puzzle environments, encodes their states into
//!    bit vectors, and samples transition datasets.
//! 2. [`ama`] clusters the transitions into actions and extracts STRIPS
//!    effects and static-bit preconditions.
//! 3. [`pddl`] emits the learned model as grounded PDDL and parses it back.
//! 4. [`search`] plans over the model with blind, goal-count,
//!    delete-relaxation, and landmark-cut heuristics.
//! 5. [`cubegraph`] analyzes the graph theory behind the representation:
//!    difference families, edge colorings, and optimal bit assignments.
//! 6. [`btl`] provides the monotone-logit apply operator that justifies
//!    reading effects directly off clustered transitions.
//!
//! The runnable `examples/` directory walks through each capability; the
//! `cubeplan` binary drives the same pipeline from the command line.

pub mod ama;
pub mod bits;
pub mod btl;
pub mod cubegraph;
pub mod envs;
pub mod pddl;
pub mod pipeline;
pub mod search;
pub mod strips;

pub use bits::BitState;
pub use strips::{ActionSchema, Condition, GroundTask, Literal, Plan};
