//! Exact slice rank, tensor rank and matrix rank decompositions of dense tensors
//! over prime fields `F_p` (`p <= 251`), with the tools to transform, certify,
//! merge and count them.
//!
//! Everything is exact integer arithmetic and exhaustive search, sized for
//! small tensors. The modules, bottom up:
//!
//! - [`linalg`]: field arithmetic, elimination, dual families, subspaces.
//! - [`tensor`]: dense tensors, outer products, contractions.
//! - [`decomposition`]: slice decompositions and rank-one decompositions.
//! - [`transforms`]: rewrites that keep the assembled tensor.
//! - [`rank`]: slice rank and tensor rank searches, target-space membership.
//! - [`zero_form`]: certificates for decompositions that sum to zero.
//! - [`sunflower`]: merging families of decompositions that share a center.
//! - [`enumeration`]: exhaustive censuses and their closed forms.
//! - [`format`](mod@format) and [`cli`]: JSON files and the `slicerank` command line.
//!
//! Runnable examples, one per area:
//!
//! ```text
//! cargo run --example field_linalg
//! cargo run --example tensors
//! cargo run --example transforms
//! cargo run --release --example slice_rank
//! cargo run --release --example tensor_rank
//! cargo run --example zero_form
//! cargo run --example sunflower
//! cargo run --release --example census
//! cargo run --example files -- /tmp/slicerank-demo
//! ```
//!
//! Indices are 0-based in the library and 1-based in files and on the command line.

pub mod cli;
pub mod decomposition;
pub mod enumeration;
pub mod error;
pub mod format;
pub mod linalg;
pub mod rank;
pub mod sample;
pub mod sunflower;
pub mod tensor;
pub mod transforms;
pub mod zero_form;

pub use error::{Error, Result};
