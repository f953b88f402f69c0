//! Quasiperiodic point sets from predefined covering clusters.
//!
//! The pipeline starts from a finite union of orbits of a dihedral or
//! icosahedral group (a G-cluster with k antipodal point pairs), embeds the
//! physical plane or 3-space into the superspace R^k, and selects the
//! integer lattice points whose internal projection falls inside the shadow
//! of the unit hypercube. Selected points project back onto a discrete
//! quasiperiodic set for which the starting cluster is a covering cluster:
//! every lattice neighbour of a selected point lands on a translated copy
//! of the cluster.
//!
//! All window geometry is reduced to (n+1) x (n+1) determinants: each facet
//! family of the window contributes one linear functional (precomputed
//! cofactors) and one half-width, so membership costs a handful of
//! multiply-adds per facet family regardless of k.
//!
//! ```
//! use quasistrip::cluster::{build_cluster, GroupSpec};
//! use quasistrip::embedding::build_embedding;
//! use quasistrip::strip::StripSpec;
//! use quasistrip::generator::{generate, GenerationConfig};
//!
//! let spec = GroupSpec::dihedral(4, &[[1.0, 0.0]]).unwrap();
//! let cluster = build_cluster(&spec).unwrap();
//! let embedding = build_embedding(&cluster).unwrap();
//! let strip = StripSpec::build(&cluster, &embedding).unwrap();
//! let patch = generate(&cluster, &embedding, &strip, &GenerationConfig::new(4.0)).unwrap();
//! assert!(patch.len() > 1);
//! ```

pub mod analysis;
pub mod cli;
pub mod cluster;
pub mod embedding;
pub mod error;
pub mod generator;
pub mod io;
pub mod oracle;
mod spatial;
pub mod strip;

pub use cluster::{build_cluster, Cluster, GroupKind, GroupSpec};
pub use embedding::{build_embedding, Embedding};
pub use error::{Error, Result};
pub use generator::{generate, GenerationConfig, QuasiPoint, QuasiSet};
pub use strip::StripSpec;
