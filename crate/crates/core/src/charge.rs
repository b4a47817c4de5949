//! Exact charge arithmetic in twelfth units.
//!
//! Vertices start at `42 d(v) - 108` and faces at `12 d(f) - 108`
//! twelfths, so a connected sphere embedding always totals `-216`. The
//! vertex-to-vertex round then moves charge along three rules: a 3-vertex
//! pays 12 to each 2-neighbor, 6 to each (1,1,0)-neighbor, and 6 to each
//! (1,1,1)-vertex at distance two. The word-level dictionary encodes the
//! worst-case amount each 3-vertex still forwards to an incident 8-face,
//! keyed by an odd-length window of the face word around the vertex.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plane_graph::{PlaneGraph, VertexId};
use crate::words::FullWord;

/// An exact charge in twelfth units. All arithmetic is integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Charge(pub i64);

impl Charge {
    pub const ZERO: Charge = Charge(0);
    /// The discharge target: one unit, i.e. twelve twelfths.
    pub const TARGET: Charge = Charge(12);
}

impl Add for Charge {
    type Output = Charge;
    fn add(self, rhs: Charge) -> Charge {
        Charge(self.0 + rhs.0)
    }
}

impl Sub for Charge {
    type Output = Charge;
    fn sub(self, rhs: Charge) -> Charge {
        Charge(self.0 - rhs.0)
    }
}

impl AddAssign for Charge {
    fn add_assign(&mut self, rhs: Charge) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Charge {
    fn sub_assign(&mut self, rhs: Charge) {
        self.0 -= rhs.0;
    }
}

impl Neg for Charge {
    type Output = Charge;
    fn neg(self) -> Charge {
        Charge(-self.0)
    }
}

impl Sum for Charge {
    fn sum<I: Iterator<Item = Charge>>(iter: I) -> Charge {
        Charge(iter.map(|c| c.0).sum())
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The sorted path profile of a 3-vertex: the number of internal
/// 2-vertices on each of its three incident paths, largest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexKind {
    paths: [u8; 3],
}

impl VertexKind {
    pub fn new(a: u8, b: u8, c: u8) -> VertexKind {
        let mut paths = [a, b, c];
        paths.sort_unstable_by(|x, y| y.cmp(x));
        VertexKind { paths }
    }

    pub fn paths(&self) -> [u8; 3] {
        self.paths
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.paths[0], self.paths[1], self.paths[2])
    }
}

/// Classification of a 3-vertex together with the neighborhood flags the
/// charge table depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub kind: VertexKind,
    /// Number of (1,1,0)-vertices among the 3-neighbors.
    pub neighbors_110: u8,
    /// Whether some (1,1,1)-vertex sits at distance exactly 2.
    pub sees_111: bool,
}

fn path_lengths(g: &PlaneGraph, v: VertexId) -> Result<[u8; 3]> {
    if g.degree(v) != 3 {
        return Err(Error::Contract(format!(
            "classify_vertex requires a 3-vertex, {} has degree {}",
            g.name(v),
            g.degree(v)
        )));
    }
    let mut lens = [0u8; 3];
    for (i, &u) in g.neighbors(v).iter().enumerate() {
        lens[i] = match g.degree(u) {
            3 => 0,
            2 => {
                let &w = g
                    .neighbors(u)
                    .iter()
                    .find(|&&w| w != v)
                    .expect("2-vertex has a second neighbor");
                if g.degree(w) == 2 {
                    return Err(Error::Structural(format!(
                        "2-vertices {} and {} are adjacent: no k-path with k >= 2 may occur",
                        g.name(u),
                        g.name(w)
                    )));
                }
                1
            }
            d => {
                return Err(Error::Structural(format!(
                    "vertex {} has degree {d}, outside the subcubic minimum-degree-2 regime",
                    g.name(u)
                )))
            }
        };
    }
    Ok(lens)
}

/// The (k1,k2,k3) kind of a 3-vertex, without neighborhood flags.
pub fn vertex_kind(g: &PlaneGraph, v: VertexId) -> Result<VertexKind> {
    let [a, b, c] = path_lengths(g, v)?;
    Ok(VertexKind::new(a, b, c))
}

/// Vertices at distance exactly 2 from `v`.
fn distance_two(g: &PlaneGraph, v: VertexId) -> Vec<VertexId> {
    let mut out = Vec::new();
    for &u in g.neighbors(v) {
        for &w in g.neighbors(u) {
            if w != v && !g.is_adjacent(v, w) && !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

/// Classifies a 3-vertex and computes the flags used by the charge table.
pub fn classify_vertex(g: &PlaneGraph, v: VertexId) -> Result<Classification> {
    let kind = vertex_kind(g, v)?;
    let mut neighbors_110 = 0;
    for &u in g.neighbors(v) {
        if g.degree(u) == 3 && vertex_kind(g, u)? == VertexKind::new(1, 1, 0) {
            neighbors_110 += 1;
        }
    }
    let mut sees_111 = false;
    for w in distance_two(g, v) {
        if g.degree(w) == 3 && vertex_kind(g, w)? == VertexKind::new(1, 1, 1) {
            sees_111 = true;
            break;
        }
    }
    Ok(Classification {
        kind,
        neighbors_110,
        sees_111,
    })
}

/// Initial vertex charge, `42 d(v) - 108` twelfths.
pub fn vertex_charge(degree: usize) -> Charge {
    Charge(42 * degree as i64 - 108)
}

/// Initial face charge, `12 d(f) - 108` twelfths.
pub fn face_charge(len: usize) -> Charge {
    Charge(12 * len as i64 - 108)
}

/// Sums the initial charges of a connected plane graph. The rewritten
/// Euler identity makes this `-216` twelfths for every sphere embedding.
pub fn euler_charge_total(g: &PlaneGraph) -> Result<Charge> {
    if !g.is_connected() {
        return Err(Error::Input(
            "Euler identity requires a connected graph; this input is disconnected".into(),
        ));
    }
    let vertices: Charge = (0..g.vertex_count())
        .map(|v| vertex_charge(g.degree(v)))
        .sum();
    let faces: Charge = g.trace_faces().iter().map(|f| face_charge(f.len())).sum();
    Ok(vertices + faces)
}

/// The charge left on a 3-vertex after the vertex-to-vertex round, per
/// kind and flags. `None` when the combination is reducible and has no
/// table value.
pub fn table_value(c: &Classification) -> Option<Charge> {
    let k = c.kind.paths();
    match (k, c.neighbors_110, c.sees_111) {
        ([1, 1, 1], 0, _) => Some(Charge(0)),
        ([1, 1, 0], 0, false) => Some(Charge(0)),
        ([1, 0, 0], 0, false) => Some(Charge(6)),
        ([1, 0, 0], 1, false) | ([1, 0, 0], 0, true) => Some(Charge(0)),
        ([0, 0, 0], n, false) if n <= 2 => Some(Charge(18 - 6 * n as i64)),
        _ => None,
    }
}

/// Applies the vertex-to-vertex discharging round and returns the
/// resulting charge of every vertex.
///
/// Requires a subcubic graph of minimum degree 2 with no 2-paths. When a
/// reducible local configuration makes a vertex fall below its table
/// value, the round aborts with a diagnostic naming the violated
/// assumption instead of reporting a silent negative.
pub fn first_round(g: &PlaneGraph) -> Result<BTreeMap<VertexId, Charge>> {
    for v in 0..g.vertex_count() {
        match g.degree(v) {
            2 | 3 => {}
            d => {
                return Err(Error::Contract(format!(
                    "first_round requires degrees 2 or 3, {} has degree {d}",
                    g.name(v)
                )))
            }
        }
    }
    let mut class: BTreeMap<VertexId, Classification> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        if g.degree(v) == 3 {
            class.insert(v, classify_vertex(g, v)?);
        } else {
            // Surfaces the 2-path diagnostic for 2-vertices too.
            let &u = g.neighbors(v).first().expect("degree 2");
            if g.degree(u) == 2 {
                return Err(Error::Structural(format!(
                    "2-vertices {} and {} are adjacent: no k-path with k >= 2 may occur",
                    g.name(v),
                    g.name(u)
                )));
            }
        }
    }

    // Reducible local configurations that would drive some vertex below
    // its table value; each names the catalog pattern that forbids it.
    for (&v, c) in &class {
        let k = c.kind.paths();
        if (k == [1, 1, 1] || k == [1, 1, 0]) && c.sees_111 {
            return Err(Error::Structural(format!(
                "{} is a {} -vertex at distance 2 from a (1,1,1)-vertex; reducible (patterns 1c1a1, 1c1c)",
                g.name(v),
                c.kind
            )));
        }
        if k == [1, 1, 1] && c.neighbors_110 > 0 {
            // Unreachable for simple graphs ((1,1,1) has no 3-neighbor),
            // kept so the table lookup below never sees the combination.
            return Err(Error::Structural(format!(
                "{} is a (1,1,1)-vertex with a (1,1,0)-neighbor",
                g.name(v)
            )));
        }
        if k == [1, 1, 0] && c.neighbors_110 > 0 {
            return Err(Error::Structural(format!(
                "{} is a (1,1,0)-vertex with a (1,1,0)-neighbor; reducible (pattern 1b1)",
                g.name(v)
            )));
        }
        if k == [1, 0, 0] && c.neighbors_110 >= 2 {
            return Err(Error::Structural(format!(
                "{} is a (1,0,0)-vertex with two (1,1,0)-neighbors; reducible (patterns 1c0c0a1, 1c0c0c, 1a0b1, 1b0c)",
                g.name(v)
            )));
        }
        if k == [1, 0, 0] && c.neighbors_110 >= 1 && c.sees_111 {
            return Err(Error::Structural(format!(
                "{} is a (1,0,0)-vertex with a (1,1,0)-neighbor that also sees a (1,1,1)-vertex; reducible (patterns 1a1a0c1, c1a0c1, 1a1b, c1b)",
                g.name(v)
            )));
        }
        if k == [0, 0, 0] && c.neighbors_110 >= 3 {
            return Err(Error::Structural(format!(
                "{} is a (0,0,0)-vertex with three (1,1,0)-neighbors; reducible (pattern 1c0b0c1)",
                g.name(v)
            )));
        }
    }

    let mut mu: BTreeMap<VertexId, Charge> = (0..g.vertex_count())
        .map(|v| (v, vertex_charge(g.degree(v))))
        .collect();
    for &v in class.keys() {
        for &u in g.neighbors(v) {
            if g.degree(u) == 2 {
                *mu.get_mut(&v).unwrap() -= Charge(12);
                *mu.get_mut(&u).unwrap() += Charge(12);
            } else if class[&u].kind == VertexKind::new(1, 1, 0) {
                *mu.get_mut(&v).unwrap() -= Charge(6);
                *mu.get_mut(&u).unwrap() += Charge(6);
            }
        }
        for w in distance_two(g, v) {
            if g.degree(w) == 3 && class[&w].kind == VertexKind::new(1, 1, 1) {
                *mu.get_mut(&v).unwrap() -= Charge(6);
                *mu.get_mut(&w).unwrap() += Charge(6);
            }
        }
    }

    // Integrity: the mechanics must land exactly on the table.
    for (v, &charge) in &mu {
        let expected = match class.get(v) {
            Some(c) => table_value(c).ok_or_else(|| {
                Error::Structural(format!(
                    "{} has kind {} with flags outside the charge table",
                    g.name(*v),
                    c.kind
                ))
            })?,
            None => Charge(0),
        };
        if charge != expected {
            return Err(Error::Structural(format!(
                "charge accounting mismatch at {}: got {charge}, table says {expected}; \
                 a reducible configuration outside the named checks is present",
                g.name(*v)
            )));
        }
    }
    Ok(mu)
}

/// One token of a dictionary entry window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Digit(u8),
    Letter(u8),
}

/// One dictionary entry: an odd-length alternating window starting and
/// ending with a digit, and the charge its holder vertex contributes.
#[derive(Debug, Clone)]
pub struct DictEntry {
    text: String,
    tokens: Vec<Tok>,
    pub charge: Charge,
    has_wildcard: bool,
}

impl DictEntry {
    pub fn text(&self) -> &str {
        &self.text
    }

    fn len(&self) -> usize {
        self.tokens.len()
    }
}

/// The dictionary of charges: window length 7, then 5, then 3, each read
/// in both directions.
#[derive(Debug, Clone)]
pub struct ChargeDictionary {
    entries: Vec<DictEntry>,
    source: String,
}

/// Which reading direction matched a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Mirror,
}

/// One step of a charge trace: the entry that fired for a letter position.
#[derive(Debug, Clone, Serialize)]
pub struct TraceItem {
    pub position: usize,
    pub entry: String,
    pub charge: Charge,
    pub direction: Direction,
    pub window_len: usize,
}

impl fmt::Display for TraceItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.entry, self.charge)?;
        if self.direction == Direction::Mirror {
            write!(f, " (mirror)")?;
        }
        Ok(())
    }
}

/// Holder token index for an entry of token length `len`: the middle
/// letter for lengths 3 and 7, the second symbol (first letter) for 5.
fn holder_index(len: usize) -> usize {
    match len {
        3 => 1,
        5 => 1,
        7 => 3,
        _ => unreachable!("entry lengths validated at parse"),
    }
}

impl ChargeDictionary {
    /// Parses `PATTERN:CHARGE` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let (pattern, charge) = line
                .split_once(':')
                .ok_or_else(|| parse_err("expected PATTERN:CHARGE".into()))?;
            let charge: i64 = charge
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad charge {:?}", charge.trim())))?;
            let mut tokens = Vec::new();
            let mut has_wildcard = false;
            for (i, ch) in pattern.trim().chars().enumerate() {
                let tok =
                    if i % 2 == 0 {
                        Tok::Digit(ch.to_digit(10).ok_or_else(|| {
                            parse_err(format!("expected digit at {i} in {pattern:?}"))
                        })? as u8)
                    } else if ch.is_ascii_lowercase() {
                        if ch == 'a' {
                            has_wildcard = true;
                        }
                        Tok::Letter(ch as u8)
                    } else {
                        return Err(parse_err(format!("expected letter at {i} in {pattern:?}")));
                    };
                tokens.push(tok);
            }
            if !matches!(tokens.len(), 3 | 5 | 7) {
                return Err(parse_err(format!(
                    "entry {:?} must have length 3, 5 or 7",
                    pattern.trim()
                )));
            }
            entries.push(DictEntry {
                text: pattern.trim().to_string(),
                tokens,
                charge: Charge(charge),
                has_wildcard,
            });
        }
        if entries.is_empty() {
            return Err(Error::Input("empty charge dictionary".into()));
        }
        Ok(ChargeDictionary {
            entries,
            source: text.to_string(),
        })
    }

    /// The bundled dictionary.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_CHARGES).expect("bundled dictionary parses")
    }

    pub fn entries(&self) -> impl Iterator<Item = &DictEntry> {
        self.entries.iter()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Raw text of the bundled charge dictionary.
pub const BUNDLED_CHARGES: &str = include_str!("../data/charges.txt");

/// Computes the total charge a face with word `fw` receives from its
/// 3-vertices, with a per-position trace.
///
/// Around each letter the longest matching window wins (7, then 5, then
/// 3), each read forward and mirrored; at equal length an exact entry
/// beats a wildcard one, and surviving matches must agree on the charge
/// or the dictionary is reported ambiguous. A position no entry covers is
/// a "dictionary not exhaustive" error; the dictionary only guarantees
/// coverage on words that survive the forbidden catalog.
pub fn compute_charge(fw: &FullWord, dict: &ChargeDictionary) -> Result<(Charge, Vec<TraceItem>)> {
    let n = fw.letter_count();
    let period = 2 * n;
    let mut total = Charge::ZERO;
    let mut trace = Vec::with_capacity(n);
    for p in 0..n {
        let holder_pos = 2 * p + 1;
        let mut found = None;
        for len in [7usize, 5, 3] {
            let h = holder_index(len);
            // (direction, entry index, charge)
            let mut matches: Vec<(Direction, usize)> = Vec::new();
            for (idx, entry) in dict.entries.iter().enumerate() {
                if entry.len() != len {
                    continue;
                }
                let fwd = (0..len).all(|t| {
                    let pos = (holder_pos + period + t) - h;
                    token_matches(entry.tokens[t], fw.symbol_at(pos % period))
                });
                if fwd {
                    matches.push((Direction::Forward, idx));
                }
                let bwd = (0..len).all(|t| {
                    let pos = (holder_pos + period + h) - t;
                    token_matches(entry.tokens[t], fw.symbol_at(pos % period))
                });
                if bwd {
                    matches.push((Direction::Mirror, idx));
                }
            }
            if matches.is_empty() {
                continue;
            }
            let any_exact = matches.iter().any(|&(_, i)| !dict.entries[i].has_wildcard);
            let survivors: Vec<(Direction, usize)> = matches
                .into_iter()
                .filter(|&(_, i)| !any_exact || !dict.entries[i].has_wildcard)
                .collect();
            let first = survivors[0];
            if survivors
                .iter()
                .any(|&(_, i)| dict.entries[i].charge != dict.entries[first.1].charge)
            {
                let names: Vec<&str> = survivors
                    .iter()
                    .map(|&(_, i)| dict.entries[i].text())
                    .collect();
                return Err(Error::AmbiguousDictionary(format!(
                    "word {fw}, letter position {p}: entries {} disagree on the charge",
                    names.join(", ")
                )));
            }
            found = Some(TraceItem {
                position: p,
                entry: dict.entries[first.1].text.clone(),
                charge: dict.entries[first.1].charge,
                direction: first.0,
                window_len: len,
            });
            break;
        }
        match found {
            Some(item) => {
                total += item.charge;
                trace.push(item);
            }
            None => {
                return Err(Error::DictionaryIncomplete {
                    word: fw.to_string(),
                    position: p,
                })
            }
        }
    }
    Ok((total, trace))
}

fn token_matches(tok: Tok, symbol: u8) -> bool {
    match tok {
        Tok::Digit(d) => symbol == d,
        Tok::Letter(b'a') => symbol.is_ascii_lowercase(),
        Tok::Letter(l) => symbol == l,
    }
}

/// The eight vertex-to-vertex round fixtures: small closed graphs whose
/// center realizes one row of the charge table. Returns
/// `(label, graph, center name, expected charge)`.
pub fn local_instances() -> Vec<(&'static str, PlaneGraph, &'static str, Charge)> {
    vec![
        (
            "111",
            prism_with(14, &[("c13", "c0"), ("c0", "c1"), ("c0", "d0")]),
            "c0",
            Charge(0),
        ),
        (
            "110",
            prism_with(14, &[("c0", "c1"), ("c0", "d0")]),
            "c0",
            Charge(0),
        ),
        ("100_half", prism_with(14, &[("c0", "d0")]), "c0", Charge(6)),
        (
            "100_zero_neighbor",
            prism_with(14, &[("c0", "d0"), ("c1", "c2"), ("c1", "d1")]),
            "c0",
            Charge(0),
        ),
        (
            "100_zero_distance2",
            prism_with(14, &[("c0", "d0"), ("d0", "d13"), ("d0", "d1")]),
            "c0",
            Charge(0),
        ),
        ("000_free", prism_with(14, &[]), "c0", Charge(18)),
        (
            "000_one",
            prism_with(14, &[("c1", "c2"), ("c1", "d1")]),
            "c0",
            Charge(12),
        ),
        (
            "000_two",
            prism_with(
                14,
                &[("c1", "c2"), ("c1", "d1"), ("d0", "d13"), ("d0", "d1")],
            ),
            "c0",
            Charge(6),
        ),
    ]
}

/// A prism over an `m`-cycle (vertices `c0..`, `d0..`, rungs `ci -- di`)
/// with the listed edges subdivided by one fresh 2-vertex each.
pub fn prism_with(m: usize, subdivided: &[(&str, &str)]) -> PlaneGraph {
    use std::collections::HashMap;
    let mut adj: HashMap<String, Vec<String>> = HashMap::new();
    let add_edge = |adj: &mut HashMap<String, Vec<String>>, a: &str, b: &str| {
        adj.entry(a.to_string()).or_default().push(b.to_string());
        adj.entry(b.to_string()).or_default().push(a.to_string());
    };
    for i in 0..m {
        let j = (i + 1) % m;
        add_edge(&mut adj, &format!("c{i}"), &format!("c{j}"));
        add_edge(&mut adj, &format!("d{i}"), &format!("d{j}"));
        add_edge(&mut adj, &format!("c{i}"), &format!("d{i}"));
    }
    for (k, &(a, b)) in subdivided.iter().enumerate() {
        let z = format!("z{k}");
        let ia = adj[a].iter().position(|x| x == b).expect("edge exists");
        adj.get_mut(a).unwrap()[ia] = z.clone();
        let ib = adj[b].iter().position(|x| x == a).expect("edge exists");
        adj.get_mut(b).unwrap()[ib] = z.clone();
        adj.insert(z, vec![a.to_string(), b.to_string()]);
    }
    let mut lines: Vec<(String, Vec<String>)> = adj.into_iter().collect();
    lines.sort();
    PlaneGraph::from_named_rotations(lines).expect("prism is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::random_plane_graph;
    use crate::words::Alphabet;

    fn cycle(n: usize) -> PlaneGraph {
        let rotations = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
        PlaneGraph::from_rotations(rotations).unwrap()
    }

    #[test]
    fn euler_total_on_fixed_graphs() {
        // 8-cycle: 8 * (84 - 108) + 2 * (96 - 108) = -192 - 24.
        assert_eq!(euler_charge_total(&cycle(8)).unwrap(), Charge(-216));
        // Triangle: 3 * (-24) + 2 * (36 - 108) = -72 - 144.
        assert_eq!(euler_charge_total(&cycle(3)).unwrap(), Charge(-216));
        // Cube: 8 * 18 + 6 * (48 - 108) = 144 - 360.
        let cube = PlaneGraph::from_rotations(vec![
            vec![1, 3, 4],
            vec![2, 0, 5],
            vec![3, 1, 6],
            vec![0, 2, 7],
            vec![0, 7, 5],
            vec![1, 4, 6],
            vec![2, 5, 7],
            vec![3, 6, 4],
        ])
        .unwrap();
        assert_eq!(euler_charge_total(&cube).unwrap(), Charge(-216));
    }

    #[test]
    fn euler_total_on_generated_embeddings() {
        for seed in 100..125u64 {
            let g = random_plane_graph(seed, 35);
            assert_eq!(euler_charge_total(&g).unwrap(), Charge(-216), "seed {seed}");
        }
    }

    #[test]
    fn euler_rejects_disconnected() {
        let g = PlaneGraph::from_rotations(vec![vec![1], vec![0], vec![3], vec![2]]).unwrap();
        assert!(matches!(euler_charge_total(&g), Err(Error::Input(_))));
    }

    #[test]
    fn classification_of_local_instances() {
        let g = prism_with(14, &[("c13", "c0"), ("c0", "c1"), ("c0", "d0")]);
        let v = g.id_of("c0").unwrap();
        let c = classify_vertex(&g, v).unwrap();
        assert_eq!(c.kind, VertexKind::new(1, 1, 1));
        assert_eq!(c.neighbors_110, 0);
        assert!(!c.sees_111);

        let g = prism_with(14, &[("c0", "d0")]);
        let v = g.id_of("c0").unwrap();
        let c = classify_vertex(&g, v).unwrap();
        assert_eq!(c.kind, VertexKind::new(1, 0, 0));
        assert_eq!(c.neighbors_110, 0);
        assert!(!c.sees_111);

        let g = prism_with(14, &[]);
        let c = classify_vertex(&g, g.id_of("c0").unwrap()).unwrap();
        assert_eq!(c.kind, VertexKind::new(0, 0, 0));
    }

    #[test]
    fn classify_rejects_two_paths_and_wrong_degrees() {
        // Path with two internal 2-vertices.
        let g = PlaneGraph::parse("a: b z\nz: a y\nb: a c d\nc: b\nd: b\ny: z\n").unwrap();
        let b = g.id_of("b").unwrap();
        assert!(matches!(classify_vertex(&g, b), Err(Error::Structural(_))));

        let g = cycle(4);
        assert!(matches!(classify_vertex(&g, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn first_round_matches_table_on_local_instances() {
        for (label, g, center, expected) in local_instances() {
            let mu = first_round(&g).unwrap_or_else(|e| panic!("{label}: {e}"));
            let v = g.id_of(center).unwrap();
            assert_eq!(mu[&v], expected, "{label}");
            // Conservation: the round only moves charge.
            let total: Charge = mu.values().copied().sum();
            let initial: Charge = (0..g.vertex_count())
                .map(|v| vertex_charge(g.degree(v)))
                .sum();
            assert_eq!(total, initial, "{label}");
            // Every 2-vertex ends at zero.
            for v in 0..g.vertex_count() {
                if g.degree(v) == 2 {
                    assert_eq!(mu[&v], Charge(0), "{label} vertex {}", g.name(v));
                }
            }
        }
    }

    #[test]
    fn first_round_rejects_reducible_neighborhoods() {
        // A (1,0,0)-vertex with two (1,1,0)-neighbors.
        let g = prism_with(
            14,
            &[
                ("c0", "d0"),
                ("c1", "c2"),
                ("c1", "d1"),
                ("c13", "c12"),
                ("c13", "d13"),
            ],
        );
        let err = first_round(&g).unwrap_err();
        assert!(err.to_string().contains("two (1,1,0)-neighbors"), "{err}");

        // Two adjacent (1,1,0)-vertices.
        let g = prism_with(
            14,
            &[("c0", "d0"), ("c0", "c13"), ("c1", "d1"), ("c1", "c2")],
        );
        let err = first_round(&g).unwrap_err();
        assert!(err.to_string().contains("1b1"), "{err}");
    }

    #[test]
    fn bundled_dictionary_parses() {
        let dict = ChargeDictionary::bundled();
        assert_eq!(dict.entries().count(), 13);
    }

    #[test]
    fn charge_of_uniform_words() {
        let dict = ChargeDictionary::bundled();
        let fw = FullWord::parse("0a0a0a0a0a0a0a0a").unwrap();
        let (total, trace) = compute_charge(&fw, &dict).unwrap();
        assert_eq!(total, Charge(48));
        assert_eq!(trace.len(), 8);
        assert!(trace
            .iter()
            .all(|t| t.entry == "0a0" && t.charge == Charge(6)));

        let fw = FullWord::parse("1c1c1c1c").unwrap();
        let (total, trace) = compute_charge(&fw, &dict).unwrap();
        assert_eq!(total, Charge(0));
        assert!(trace.iter().all(|t| t.entry == "1c1"));
    }

    #[test]
    fn charge_trace_of_surviving_word() {
        let dict = ChargeDictionary::bundled();
        let fw = FullWord::parse("1c1a0a1a0a").unwrap();
        let (total, trace) = compute_charge(&fw, &dict).unwrap();
        assert_eq!(total, Charge(6));
        let mut fired: Vec<(String, i64)> = trace
            .iter()
            .map(|t| (t.entry.clone(), t.charge.0))
            .collect();
        fired.sort();
        assert_eq!(
            fired,
            vec![
                ("0a1c1".to_string(), 0),
                ("0a1c1".to_string(), 0),
                ("1a0".to_string(), 3),
                ("1a0".to_string(), 3),
                ("1c1".to_string(), 0),
            ]
        );
    }

    #[test]
    fn charge_is_rotation_and_mirror_invariant() {
        let dict = ChargeDictionary::bundled();
        for text in ["1c1a0a1a0a", "0a0a0a0a0a0a0a0a", "1a0a0c1c0a0a", "1b1a0a0a"] {
            let fw = FullWord::parse(text).unwrap();
            let (total, _) = compute_charge(&fw, &dict).unwrap();
            for k in 0..fw.letter_count() {
                let (t2, _) = compute_charge(&fw.rotation(k), &dict).unwrap();
                assert_eq!(t2, total, "{text} rotation {k}");
            }
            let (t3, _) = compute_charge(&fw.mirror(), &dict).unwrap();
            assert_eq!(t3, total, "{text} mirror");
        }
    }

    #[test]
    fn exact_entries_beat_wildcards() {
        let dict = ChargeDictionary::bundled();
        // 1b0 must win over the wildcard 1a0 (0 vs 3).
        let fw = FullWord::parse("1b0a0a0a").unwrap();
        let (_, trace) = compute_charge(&fw, &dict).unwrap();
        assert_eq!(trace[0].entry, "1b0");
        assert_eq!(trace[0].charge, Charge(0));
        // 1c0 likewise.
        let fw = FullWord::parse("1c0a0a0a").unwrap();
        let (_, trace) = compute_charge(&fw, &dict).unwrap();
        assert_eq!(trace[0].entry, "1c0");
    }

    #[test]
    fn dictionary_covers_every_window_over_the_regime_alphabet() {
        // With the wildcard convention every letter with digits in {0,1}
        // matches some entry; the 1b1 case (a forbidden context that the
        // filter never scores) falls back to the wildcard 1a1.
        let dict = ChargeDictionary::bundled();
        let abc = Alphabet::abc();
        for &d1 in &[0u8, 1] {
            for &d2 in &[0u8, 1] {
                for &l in abc.letters() {
                    let fw = FullWord::new(vec![d1, d2, 0, 0], vec![l, b'a', b'a', b'a']).unwrap();
                    let (_, trace) = compute_charge(&fw, &dict)
                        .unwrap_or_else(|e| panic!("window {d1}{}{d2}: {e}", l as char));
                    if (d1, d2, l) == (1, 1, b'b') {
                        assert_eq!(trace[0].entry, "1a1");
                        assert_eq!(trace[0].charge, Charge(0));
                    }
                }
            }
        }
    }
}
