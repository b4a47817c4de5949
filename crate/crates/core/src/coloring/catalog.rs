//! Built-in configurations: small graphs with exact list-size profiles,
//! checked exhaustively by the lemma drivers. Conflicts inside a
//! configuration are always those of its own square.

use crate::error::{Error, Result};
use crate::plane_graph::PlaneGraph;

/// Predicate deciding whether an assignment belongs to a configuration's
/// declared uncolorable family.
pub type FamilyPredicate = fn(&Configuration, &[u32], usize) -> bool;

/// A graph with a per-vertex exact list-size profile.
pub struct Configuration {
    pub label: &'static str,
    pub graph: PlaneGraph,
    /// Required list size per vertex id.
    pub profile: Vec<u8>,
    /// For the forced-list configurations: the declared uncolorable
    /// family as a predicate over per-vertex color masks.
    pub family: Option<FamilyPredicate>,
}

impl Configuration {
    pub fn vertex(&self, name: &str) -> usize {
        self.graph
            .id_of(name)
            .unwrap_or_else(|| panic!("{}: no vertex {name}", self.label))
    }

    pub fn mask_of(&self, masks: &[u32], name: &str) -> u32 {
        masks[self.vertex(name)]
    }

    /// Renders the profile in the lists-file style: `v: k`.
    pub fn dump_profile(&self) -> String {
        let mut out = String::new();
        for v in 0..self.graph.vertex_count() {
            out.push_str(&format!("{}: {}\n", self.graph.name(v), self.profile[v]));
        }
        out
    }
}

fn build(
    label: &'static str,
    vertices: &[(&str, u8)],
    edges: &[(&str, &str)],
    family: Option<FamilyPredicate>,
) -> Configuration {
    let mut rotations: Vec<(String, Vec<String>)> = vertices
        .iter()
        .map(|&(name, _)| (name.to_string(), Vec::new()))
        .collect();
    let index = |name: &str| {
        vertices
            .iter()
            .position(|&(n, _)| n == name)
            .unwrap_or_else(|| panic!("{label}: unknown vertex {name}"))
    };
    for &(a, b) in edges {
        let (ia, ib) = (index(a), index(b));
        rotations[ia].1.push(b.to_string());
        rotations[ib].1.push(a.to_string());
    }
    let graph =
        PlaneGraph::from_named_rotations(rotations).unwrap_or_else(|e| panic!("{label}: {e}"));
    // Interning order follows first appearance, not the declaration
    // order; route the profile through the graph's ids.
    let mut profile = vec![0u8; graph.vertex_count()];
    for &(name, size) in vertices {
        profile[graph.id_of(name).expect("declared vertex")] = size;
    }
    Configuration {
        label,
        graph,
        profile,
        family,
    }
}

fn path_edges(names: &[&'static str]) -> Vec<(&'static str, &'static str)> {
    names.windows(2).map(|w| (w[0], w[1])).collect()
}

/// All built-in configurations, in catalog order.
pub fn catalog() -> Vec<Configuration> {
    let mut out = Vec::new();

    // The sixteen always-colorable configurations.
    out.push(build(
        "config1",
        &[("v1", 2), ("v2", 3), ("v3", 2), ("v4", 2)],
        &path_edges(&["v1", "v2", "v3", "v4"]),
        None,
    ));
    out.push(build(
        "config2",
        &[("v1", 2), ("v2", 3), ("v3", 3), ("v4", 2), ("v5", 2)],
        &path_edges(&["v1", "v2", "v3", "v4", "v5"]),
        None,
    ));
    out.push(build(
        "config3",
        &[
            ("v1", 2),
            ("v2", 3),
            ("v3", 2),
            ("v4", 3),
            ("v5", 3),
            ("v6", 2),
        ],
        &path_edges(&["v1", "v2", "v3", "v4", "v5", "v6"]),
        None,
    ));
    out.push(build(
        "config4",
        &[("v1", 2), ("v2", 4), ("v3", 2), ("v4", 2), ("v3p", 3)],
        &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v3", "v3p")],
        None,
    ));
    out.push(build(
        "config5",
        &[("v1", 2), ("v2", 2), ("v3", 4), ("v4", 2), ("v3p", 3)],
        &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v3", "v3p")],
        None,
    ));
    out.push(build(
        "config6",
        &[
            ("v1", 2),
            ("v2", 2),
            ("v3", 4),
            ("v4", 3),
            ("v5", 2),
            ("v3p", 3),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v3", "v3p"),
        ],
        None,
    ));
    out.push(build(
        "config7",
        &[
            ("v1", 2),
            ("v2", 4),
            ("v3", 3),
            ("v4", 2),
            ("v2p", 3),
            ("v3p", 3),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v2", "v2p"),
            ("v3", "v3p"),
        ],
        None,
    ));
    out.push(build(
        "config8",
        &[
            ("v1", 2),
            ("v2", 4),
            ("v3", 4),
            ("v4", 2),
            ("v5", 2),
            ("v2p", 3),
            ("v3p", 3),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v2", "v2p"),
            ("v3", "v3p"),
        ],
        None,
    ));
    out.push(build(
        "config9",
        &[
            ("v1", 2),
            ("v2", 3),
            ("v3", 4),
            ("v4", 4),
            ("v5", 2),
            ("v6", 2),
            ("v3p", 3),
            ("v4p", 3),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v5", "v6"),
            ("v3", "v3p"),
            ("v4", "v4p"),
        ],
        None,
    ));
    out.push(build(
        "config10",
        &[
            ("v1", 2),
            ("v2", 3),
            ("v3", 5),
            ("v4", 4),
            ("v5", 2),
            ("v3p", 2),
            ("v3pp", 2),
            ("v4p", 3),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v3", "v3p"),
            ("v3p", "v3pp"),
            ("v4", "v4p"),
        ],
        None,
    ));
    out.push(build(
        "config11",
        &[
            ("v1", 2),
            ("v2", 2),
            ("v3", 5),
            ("v4", 4),
            ("v5", 2),
            ("v6", 2),
            ("v4p", 2),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v5", "v6"),
            ("v4", "v4p"),
        ],
        None,
    ));
    out.push(build(
        "config12",
        &[
            ("v1", 2),
            ("v2", 2),
            ("v3", 4),
            ("v4", 4),
            ("v5", 2),
            ("v6", 2),
            ("v4p", 3),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v5", "v6"),
            ("v4", "v4p"),
        ],
        None,
    ));
    out.push(build(
        "config13",
        &[
            ("v1", 2),
            ("v2", 2),
            ("v3", 3),
            ("v4", 4),
            ("v5", 2),
            ("v6", 2),
        ],
        &path_edges(&["v1", "v2", "v3", "v4", "v5", "v6"]),
        None,
    ));
    out.push(build(
        "config14",
        &[
            ("v1", 2),
            ("v2", 2),
            ("v3", 3),
            ("v4", 3),
            ("v5", 3),
            ("v6", 3),
            ("v7", 2),
        ],
        &path_edges(&["v1", "v2", "v3", "v4", "v5", "v6", "v7"]),
        None,
    ));
    out.push(build(
        "config15",
        &[
            ("v1", 2),
            ("v2", 2),
            ("v3", 4),
            ("v4", 3),
            ("v5", 3),
            ("v6", 2),
            ("v7", 2),
        ],
        &path_edges(&["v1", "v2", "v3", "v4", "v5", "v6", "v7"]),
        None,
    ));
    out.push(build(
        "config16",
        &[
            ("v1", 2),
            ("v2", 4),
            ("v3", 6),
            ("v4", 4),
            ("v5", 2),
            ("v6", 2),
            ("v2p", 3),
            ("v3p", 4),
            ("v3pp", 2),
            ("v3ppp", 3),
            ("v4p", 3),
        ],
        &[
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v5", "v6"),
            ("v2", "v2p"),
            ("v3", "v3p"),
            ("v3p", "v3pp"),
            ("v3p", "v3ppp"),
            ("v4", "v4p"),
        ],
        None,
    ));

    // Forced-list configurations: uncolorable exactly on the declared
    // families.
    out.push(build(
        "forced-path3-a",
        &[("v1", 1), ("v2", 2), ("v3", 2)],
        &path_edges(&["v1", "v2", "v3"]),
        Some(|cfg, masks, _| {
            let t = cfg.mask_of(masks, "v2");
            cfg.mask_of(masks, "v3") == t && cfg.mask_of(masks, "v1") & !t == 0
        }),
    ));
    out.push(build(
        "forced-path3-b",
        &[("v1", 2), ("v2", 1), ("v3", 2)],
        &path_edges(&["v1", "v2", "v3"]),
        Some(|cfg, masks, _| {
            let t = cfg.mask_of(masks, "v1");
            cfg.mask_of(masks, "v3") == t && cfg.mask_of(masks, "v2") & !t == 0
        }),
    ));
    out.push(build(
        "forced-claw",
        &[("v1", 2), ("v2", 3), ("v3", 2), ("v4", 3)],
        &[("v1", "v3"), ("v2", "v3"), ("v3", "v4")],
        Some(|cfg, masks, _| {
            let t = cfg.mask_of(masks, "v2");
            cfg.mask_of(masks, "v4") == t
                && cfg.mask_of(masks, "v1") & !t == 0
                && cfg.mask_of(masks, "v3") & !t == 0
        }),
    ));
    out.push(build(
        "forced-clawpath",
        &[("v1", 2), ("v2", 3), ("v3", 3), ("v4", 2), ("v5", 2)],
        &[("v1", "v3"), ("v2", "v3"), ("v3", "v4"), ("v4", "v5")],
        Some(|cfg, masks, _| {
            let t = cfg.mask_of(masks, "v2");
            cfg.mask_of(masks, "v3") == t
                && cfg.mask_of(masks, "v1") & !t == 0
                && cfg.mask_of(masks, "v4") & !t == 0
            // v5 is unconstrained.
        }),
    ));
    out.push(build(
        "forced-path5",
        &[("v1", 2), ("v2", 2), ("v3", 4), ("v4", 2), ("v5", 2)],
        &path_edges(&["v1", "v2", "v3", "v4", "v5"]),
        Some(|cfg, masks, _| {
            let a = cfg.mask_of(masks, "v1");
            let b = cfg.mask_of(masks, "v5");
            a == cfg.mask_of(masks, "v2")
                && b == cfg.mask_of(masks, "v4")
                && a & b == 0
                && cfg.mask_of(masks, "v3") == a | b
        }),
    ));

    // The 8-cycle with one pendant 2-vertex: the configuration behind the
    // surviving word.
    out.push(build(
        "pendant-cycle",
        &[
            ("v0", 5),
            ("v1", 5),
            ("v2", 5),
            ("v3", 2),
            ("v4", 2),
            ("v5", 4),
            ("v6", 2),
            ("v7", 2),
            ("v1p", 3),
        ],
        &[
            ("v0", "v1"),
            ("v1", "v2"),
            ("v2", "v3"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v5", "v6"),
            ("v6", "v7"),
            ("v7", "v0"),
            ("v1", "v1p"),
        ],
        None,
    ));

    out
}

/// Looks up one configuration by label.
pub fn configuration(label: &str) -> Result<Configuration> {
    catalog()
        .into_iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::Input(format!("no built-in configuration named {label:?}")))
}

/// The labels of the sixteen always-colorable configurations.
pub const COLORABLE_LABELS: [&str; 16] = [
    "config1", "config2", "config3", "config4", "config5", "config6", "config7", "config8",
    "config9", "config10", "config11", "config12", "config13", "config14", "config15", "config16",
];
