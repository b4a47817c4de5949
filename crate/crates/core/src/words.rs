//! Circular face encodings.
//!
//! A face of the girth-8 regime is encoded by its *number-word* (the cyclic
//! sequence of 2-vertex gap counts between consecutive 3-vertices, read
//! clockwise) interlaced with a *letter-word* classifying each 3-vertex's
//! neighbor outside the face: `c` for a 2-vertex, `b` for a 3-vertex with
//! two pendant 1-paths, `a` for any other 3-vertex.
//!
//! Canonical forms fix the starting point of the circular reading: digits
//! compare with larger values first (so `1` precedes `0`), and among the
//! rotations realizing the canonical digit sequence the alphabetically
//! least letter sequence wins. Mirror images are *not* identified here;
//! the pattern matcher checks both reading directions instead.

use std::fmt;

use crate::charge::{classify_vertex, VertexKind};
use crate::error::{Error, Result};
use crate::plane_graph::{Face, PlaneGraph, VertexId};

/// Cyclic digit sequence of 2-vertex gap counts. Nonempty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumberWord {
    digits: Vec<u8>,
}

impl NumberWord {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::Input("empty number-word".into()));
        }
        if digits.iter().any(|&d| d > 9) {
            return Err(Error::Input(
                "number-word digits above 9 are not representable".into(),
            ));
        }
        Ok(NumberWord { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    fn rotation(&self, k: usize) -> Vec<u8> {
        let n = self.digits.len();
        (0..n).map(|i| self.digits[(i + k) % n]).collect()
    }

    /// The lexicographically least rotation where larger digits sort first.
    pub fn canonicalize(&self) -> NumberWord {
        let mut best = self.digits.clone();
        for k in 1..self.digits.len() {
            let cand = self.rotation(k);
            if digit_lt(&cand, &best) {
                best = cand;
            }
        }
        NumberWord { digits: best }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().digits == self.digits
    }

    /// Rotation offsets whose reading yields the canonical digit sequence.
    fn canonical_starts(&self) -> Vec<usize> {
        let canon = self.canonicalize();
        (0..self.digits.len())
            .filter(|&k| self.rotation(k) == canon.digits)
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let digits = text
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Input(format!("bad digit {c:?} in number-word {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        NumberWord::new(digits)
    }
}

impl fmt::Display for NumberWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Compares digit sequences with the order where larger digits come first.
fn digit_lt(a: &[u8], b: &[u8]) -> bool {
    for (&x, &y) in a.iter().zip(b) {
        if x != y {
            return x > y;
        }
    }
    false
}

/// Total order key for the larger-digits-first comparison, usable for
/// sorting.
pub fn number_word_sort_key(nw: &NumberWord) -> (usize, Vec<u8>) {
    (
        nw.len(),
        nw.digits().iter().map(|&d| 255 - d).collect::<Vec<u8>>(),
    )
}

/// Enumerates the canonical number-words of faces of size `face_size` in
/// the regime where at most `max_gap` consecutive 2-vertices occur: all
/// cyclic sequences of `n` digits in `0..=max_gap` summing to
/// `face_size - n`, one canonical representative per rotation class,
/// sorted by length then canonical digit order.
pub fn enumerate_number_words(face_size: usize, max_gap: u8) -> Result<Vec<NumberWord>> {
    if face_size == 0 {
        return Err(Error::Input("face size must be positive".into()));
    }
    if max_gap > 9 {
        return Err(Error::Input("max gap above 9 is not representable".into()));
    }
    let mut out = Vec::new();
    for n in 1..=face_size {
        let s = face_size - n;
        if s > n * max_gap as usize {
            continue;
        }
        let mut prefix = Vec::with_capacity(n);
        collect_canonical(n, s, max_gap, &mut prefix, &mut out);
    }
    out.sort_by_key(number_word_sort_key);
    Ok(out)
}

fn collect_canonical(
    n: usize,
    remaining: usize,
    max_gap: u8,
    prefix: &mut Vec<u8>,
    out: &mut Vec<NumberWord>,
) {
    if prefix.len() == n {
        if remaining == 0 {
            let word = NumberWord {
                digits: prefix.clone(),
            };
            if word.is_canonical() {
                out.push(word);
            }
        }
        return;
    }
    let slots_left = n - prefix.len() - 1;
    for d in 0..=max_gap {
        let d_usize = d as usize;
        if d_usize > remaining || remaining - d_usize > slots_left * max_gap as usize {
            continue;
        }
        prefix.push(d);
        collect_canonical(n, remaining - d_usize, max_gap, prefix, out);
        prefix.pop();
    }
}

/// Letter alphabet for the outside-neighbor classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<u8>,
}

impl Alphabet {
    pub fn new(letters: &str) -> Result<Self> {
        let mut bytes: Vec<u8> = letters.bytes().collect();
        if bytes.is_empty() {
            return Err(Error::Input("empty alphabet".into()));
        }
        if !bytes.iter().all(|b| b.is_ascii_lowercase()) {
            return Err(Error::Input(format!("bad alphabet {letters:?}")));
        }
        bytes.sort_unstable();
        bytes.dedup();
        Ok(Alphabet { letters: bytes })
    }

    pub fn abc() -> Self {
        Alphabet {
            letters: vec![b'a', b'b', b'c'],
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.letters.contains(&letter)
    }
}

/// Alternating digit/letter encoding of a face neighborhood: equal counts
/// of digits and letters, read cyclically starting with a digit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullWord {
    digits: Vec<u8>,
    letters: Vec<u8>,
}

impl FullWord {
    pub fn new(digits: Vec<u8>, letters: Vec<u8>) -> Result<Self> {
        if digits.len() != letters.len() || digits.is_empty() {
            return Err(Error::Input(
                "full-word needs equally many digits and letters, at least one each".into(),
            ));
        }
        if digits.iter().any(|&d| d > 9) {
            return Err(Error::Input("full-word digit above 9".into()));
        }
        if !letters.iter().all(|l| l.is_ascii_lowercase()) {
            return Err(Error::Input("full-word letters must be a-z".into()));
        }
        Ok(FullWord { digits, letters })
    }

    pub fn from_parts(nw: &NumberWord, letters: &[u8]) -> Result<Self> {
        FullWord::new(nw.digits().to_vec(), letters.to_vec())
    }

    /// Number of letters (equivalently digits).
    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn number_word(&self) -> NumberWord {
        NumberWord {
            digits: self.digits.clone(),
        }
    }

    /// Flat circular view: position `2i` is digit `i`, position `2i + 1`
    /// is letter `i`. Length `2 * letter_count()`.
    pub fn symbol_at(&self, pos: usize) -> u8 {
        let n = self.letters.len();
        let p = pos % (2 * n);
        if p.is_multiple_of(2) {
            self.digits[p / 2]
        } else {
            self.letters[p / 2]
        }
    }

    /// Rotates by whole digit/letter pairs.
    pub fn rotation(&self, k: usize) -> FullWord {
        let n = self.letters.len();
        FullWord {
            digits: (0..n).map(|i| self.digits[(i + k) % n]).collect(),
            letters: (0..n).map(|i| self.letters[(i + k) % n]).collect(),
        }
    }

    /// The word read counterclockwise, re-aligned to start with a digit.
    pub fn mirror(&self) -> FullWord {
        let n = self.letters.len();
        FullWord {
            digits: (0..n).map(|i| self.digits[(n - i) % n]).collect(),
            letters: (0..n).map(|i| self.letters[n - 1 - i]).collect(),
        }
    }

    /// The rotation whose digit reading is canonical and whose letter
    /// reading is alphabetically least among those. Idempotent.
    pub fn canonicalize(&self) -> FullWord {
        let starts = self.number_word().canonical_starts();
        let mut best: Option<FullWord> = None;
        for k in starts {
            let cand = self.rotation(k);
            match &best {
                Some(b) if b.letters <= cand.letters => {}
                _ => best = Some(cand),
            }
        }
        best.expect("number-word has at least one canonical start")
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bytes: Vec<u8> = text.bytes().collect();
        if bytes.is_empty() || !bytes.len().is_multiple_of(2) {
            return Err(Error::Input(format!(
                "full-word {text:?} must alternate digit/letter with equal counts"
            )));
        }
        let mut digits = Vec::new();
        let mut letters = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if i % 2 == 0 {
                if !b.is_ascii_digit() {
                    return Err(Error::Input(format!(
                        "full-word {text:?}: expected digit at position {i}"
                    )));
                }
                digits.push(b - b'0');
            } else {
                if !b.is_ascii_lowercase() {
                    return Err(Error::Input(format!(
                        "full-word {text:?}: expected letter at position {i}"
                    )));
                }
                letters.push(b);
            }
        }
        FullWord::new(digits, letters)
    }
}

impl fmt::Display for FullWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.letters.len() {
            write!(f, "{}{}", self.digits[i], self.letters[i] as char)?;
        }
        Ok(())
    }
}

/// Number of full-words interlacing `nw` with letters from `alphabet`.
pub fn full_word_count(nw: &NumberWord, alphabet: &Alphabet) -> u128 {
    (alphabet.len() as u128).pow(nw.len() as u32)
}

/// The `index`-th full-word over `nw` in mixed-radix order (last letter
/// varies fastest). Lets callers partition the space across workers.
pub fn full_word_at(nw: &NumberWord, alphabet: &Alphabet, index: u128) -> FullWord {
    let n = nw.len();
    let base = alphabet.len() as u128;
    let mut letters = vec![0u8; n];
    let mut rest = index;
    for i in (0..n).rev() {
        letters[i] = alphabet.letters()[(rest % base) as usize];
        rest /= base;
    }
    FullWord {
        digits: nw.digits().to_vec(),
        letters,
    }
}

/// Streams every full-word interlacing `nw` with letters from `alphabet`.
/// Duplicates describing the same face are permitted by construction.
pub fn enumerate_full_words<'a>(
    nw: &'a NumberWord,
    alphabet: &'a Alphabet,
) -> impl Iterator<Item = FullWord> + 'a {
    let total = full_word_count(nw, alphabet);
    (0..total).map(move |i| full_word_at(nw, alphabet, i))
}

/// Encodes a face of a subcubic plane graph as its canonical full-word.
pub fn encode_face(g: &PlaneGraph, face: &Face) -> Result<FullWord> {
    if !g.is_subcubic() {
        return Err(Error::Contract(
            "encode_face requires a subcubic graph".into(),
        ));
    }
    let verts = &face.vertices;
    let len = verts.len();
    {
        let mut sorted = verts.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != len {
            return Err(Error::Structural(
                "face traversal visits a vertex twice (bridge); encoding undefined".into(),
            ));
        }
    }
    let threes: Vec<usize> = (0..len).filter(|&i| g.degree(verts[i]) == 3).collect();
    if threes.is_empty() {
        return Err(Error::Structural(
            "face has no 3-vertex; encoding undefined".into(),
        ));
    }
    for i in 0..len {
        let j = (i + 1) % len;
        if g.degree(verts[i]) == 2 && g.degree(verts[j]) == 2 {
            return Err(Error::Structural(format!(
                "face has adjacent 2-vertices {} and {}: a 2-path is outside the regime",
                g.name(verts[i]),
                g.name(verts[j])
            )));
        }
    }
    let t = threes.len();
    let mut digits = Vec::with_capacity(t);
    let mut letters = Vec::with_capacity(t);
    for j in 0..t {
        let prev_pos = threes[(j + t - 1) % t];
        let gap = (threes[j] + len - prev_pos - 1) % len;
        digits.push(gap as u8);
        let v = verts[threes[j]];
        let before = verts[(threes[j] + len - 1) % len];
        let after = verts[(threes[j] + 1) % len];
        let outside: Vec<VertexId> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| u != before && u != after)
            .collect();
        let [u] = outside[..] else {
            return Err(Error::Structural(format!(
                "3-vertex {} does not have exactly one neighbor outside the face",
                g.name(v)
            )));
        };
        let letter = if g.degree(u) == 2 {
            b'c'
        } else if classify_vertex(g, u)?.kind == VertexKind::new(1, 1, 0) {
            b'b'
        } else {
            b'a'
        };
        letters.push(letter);
    }
    Ok(FullWord { digits, letters }.canonicalize())
}

/// Deduplicates words that are rotations of one another, keeping one
/// canonical representative each, sorted. Enumeration tolerates duplicate
/// readings of a face; reports go through this.
pub fn dedup_by_canonical(words: impl IntoIterator<Item = FullWord>) -> Vec<FullWord> {
    let set: std::collections::BTreeSet<FullWord> =
        words.into_iter().map(|w| w.canonicalize()).collect();
    set.into_iter().collect()
}

/// Parses a one-word-per-line file (`#` starts a comment).
pub fn parse_number_word_file(text: &str) -> Result<Vec<NumberWord>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(NumberWord::parse(line).map_err(|e| Error::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Parses a one-full-word-per-line file (`#` starts a comment).
pub fn parse_full_word_file(text: &str) -> Result<Vec<FullWord>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(FullWord::parse(line).map_err(|e| Error::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}
