//! Exact verification toolkit for a vertices-to-faces discharging argument
//! on planar subcubic graphs, together with the exhaustive 2-distance
//! list-coloring searches that back its reducibility claims.
//!
//! The crate is organized along the pipeline:
//!
//! * [`plane_graph`] — rotation systems, face tracing, girth, distance-2
//!   closure;
//! * [`words`] — circular face encodings (number-words and full-words),
//!   their enumeration and canonical forms;
//! * [`pattern`] — forbidden-subword matching with wildcard rewriting and
//!   mirror reading;
//! * [`charge`] — exact charge arithmetic in twelfth units: the Euler
//!   identity, the vertex-to-vertex discharging round, and the word-level
//!   charge dictionary;
//! * [`filter`] — the generate/filter/score loop that reports the
//!   surviving face words;
//! * [`coloring`] — an exact list-coloring solver over graph squares and
//!   the forall-over-assignments lemma checks;
//! * [`gadgets`] — builders and verifiers for the terminal-linking
//!   constructions.

pub mod charge;
pub mod coloring;
pub mod error;
pub mod filter;
pub mod fingerprint;
pub mod gadgets;
pub mod pattern;
pub mod plane_graph;
pub mod words;

pub use error::{Error, Result};
