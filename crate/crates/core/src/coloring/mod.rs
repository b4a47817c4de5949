//! Exact 2-distance list-coloring: the solver over graph squares, and the
//! exhaustive forall-over-list-assignments lemma checks.

pub mod canonical;
pub mod catalog;
pub mod lemmas;
pub mod solver;

use std::time::Duration;

use crate::error::{Error, Result};
use crate::plane_graph::PlaneGraph;

pub use canonical::{CanonicalSpace, PaletteSymmetry};
pub use catalog::{catalog, configuration, Configuration, COLORABLE_LABELS};
pub use lemmas::{
    forall_lists_colorable, noncolorable_family, verify_pendant_cycle, wiggle_property,
    AssignmentText, FamilyReport, ForallReport, PendantCycleReport, WiggleReport,
};
pub use solver::{naive_solve, solve, ConflictGraph, SearchLimits, SolveOutcome};

/// Budget knobs shared by the exhaustive checks.
#[derive(Debug, Clone)]
pub struct CheckLimits {
    pub palette: usize,
    /// Refuse above this many estimated canonical assignments.
    pub budget: u128,
    pub threads: usize,
    pub timeout: Option<Duration>,
}

impl Default for CheckLimits {
    fn default() -> Self {
        CheckLimits {
            palette: 6,
            budget: 1_000_000_000,
            threads: 1,
            timeout: None,
        }
    }
}

/// Per-vertex admissible color sets over a fixed palette.
#[derive(Debug, Clone)]
pub struct ListAssignment {
    pub masks: Vec<u32>,
}

impl ListAssignment {
    /// Parses lines `v: abc` giving each vertex its color letters.
    /// Every vertex of the graph must receive a nonempty list within the
    /// palette `a..`.
    pub fn parse(g: &PlaneGraph, text: &str, palette: usize) -> Result<Self> {
        let mut masks: Vec<Option<u32>> = vec![None; g.vertex_count()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let (name, colors) = line
                .split_once(':')
                .ok_or_else(|| parse_err("expected `vertex: colors`".into()))?;
            let v = g
                .id_of(name.trim())
                .ok_or_else(|| parse_err(format!("unknown vertex {:?}", name.trim())))?;
            let mut mask = 0u32;
            for ch in colors.trim().bytes() {
                if !(b'a'..b'a' + palette as u8).contains(&ch) {
                    return Err(parse_err(format!(
                        "color {:?} outside the palette a..{}",
                        ch as char,
                        (b'a' + palette as u8 - 1) as char
                    )));
                }
                mask |= 1 << (ch - b'a');
            }
            if mask == 0 {
                return Err(parse_err(format!("empty list for {}", name.trim())));
            }
            if masks[v].is_some() {
                return Err(parse_err(format!("two lists for {}", name.trim())));
            }
            masks[v] = Some(mask);
        }
        let masks = masks
            .into_iter()
            .enumerate()
            .map(|(v, m)| {
                m.ok_or_else(|| Error::Input(format!("no list for vertex {}", g.name(v))))
            })
            .collect::<Result<_>>()?;
        Ok(ListAssignment { masks })
    }
}
