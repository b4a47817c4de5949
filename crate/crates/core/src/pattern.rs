//! Forbidden-subword matching.
//!
//! A pattern is an alternating digit/letter string that may start and end
//! with either kind. A circular face word contains a pattern when some
//! contiguous run, read forward or mirrored, aligns with it symbol by
//! symbol: digits must be equal, the pattern letter `a` matches any
//! letter, `b` and `c` match only themselves. A word containing any
//! catalog pattern certifies a reducible configuration and is dropped by
//! the filter.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::FullWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Digit(u8),
    Letter(u8),
}

/// One forbidden subword, with the catalog label it came from.
#[derive(Debug, Clone)]
pub struct Pattern {
    text: String,
    label: String,
    tokens: Vec<Tok>,
}

impl Pattern {
    pub fn parse(text: &str, label: &str) -> Result<Pattern> {
        if text.is_empty() {
            return Err(Error::Input("empty pattern".into()));
        }
        let mut tokens = Vec::with_capacity(text.len());
        let mut want_digit = match text.as_bytes()[0] {
            b'0'..=b'9' => true,
            b'a'..=b'c' => false,
            other => {
                return Err(Error::Input(format!(
                    "pattern {text:?}: unexpected symbol {:?}",
                    other as char
                )))
            }
        };
        for ch in text.bytes() {
            let tok = match ch {
                b'0'..=b'9' if want_digit => Tok::Digit(ch - b'0'),
                b'a'..=b'c' if !want_digit => Tok::Letter(ch),
                _ => {
                    return Err(Error::Input(format!(
                        "pattern {text:?} does not alternate digits and letters"
                    )))
                }
            };
            tokens.push(tok);
            want_digit = !want_digit;
        }
        Ok(Pattern {
            text: text.to_string(),
            label: label.to_string(),
            tokens,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

/// Reading direction of a match within the circular word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanDirection {
    Forward,
    Reversed,
}

/// Where a pattern matched: the flat symbol index the alignment starts at
/// (digits sit at even, letters at odd indices) and the direction read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchWitness {
    pub start: usize,
    pub direction: ScanDirection,
}

/// Tests whether `p` occurs in the circular word `fw`, forward or
/// mirrored. A pattern longer than the doubled word cannot match.
pub fn matches(fw: &FullWord, p: &Pattern) -> Option<MatchWitness> {
    let period = 2 * fw.letter_count();
    if p.len() > period {
        return None;
    }
    for start in 0..period {
        let fwd =
            (0..p.len()).all(|t| token_matches(p.tokens[t], fw.symbol_at((start + t) % period)));
        if fwd {
            return Some(MatchWitness {
                start,
                direction: ScanDirection::Forward,
            });
        }
        let rev = (0..p.len())
            .all(|t| token_matches(p.tokens[t], fw.symbol_at((start + period - t) % period)));
        if rev {
            return Some(MatchWitness {
                start,
                direction: ScanDirection::Reversed,
            });
        }
    }
    None
}

fn token_matches(tok: Tok, symbol: u8) -> bool {
    match tok {
        Tok::Digit(d) => symbol == d,
        Tok::Letter(b'a') => symbol.is_ascii_lowercase(),
        Tok::Letter(l) => symbol == l,
    }
}

/// A catalog of forbidden subwords.
#[derive(Debug, Clone)]
pub struct PatternGrammar {
    patterns: Vec<Pattern>,
    source: String,
}

impl PatternGrammar {
    /// Parses one pattern per line with an optional trailing `# label`
    /// comment. A line-level `#` starts a comment; duplicates are
    /// rejected. An empty file is the empty grammar.
    pub fn parse(text: &str) -> Result<Self> {
        let mut patterns: Vec<Pattern> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let (body, comment) = match raw.split_once('#') {
                Some((b, c)) => (b.trim(), c.trim()),
                None => (raw.trim(), ""),
            };
            if body.is_empty() {
                continue;
            }
            let label = if comment.is_empty() {
                format!("line {}", lineno + 1)
            } else {
                comment.to_string()
            };
            let p = Pattern::parse(body, &label).map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            if patterns.iter().any(|q| q.tokens == p.tokens) {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("duplicate pattern {body}"),
                });
            }
            patterns.push(p);
        }
        Ok(PatternGrammar {
            patterns,
            source: text.to_string(),
        })
    }

    /// The bundled reducible-configuration catalog.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_PATTERNS).expect("bundled catalog parses")
    }

    pub fn empty() -> Self {
        PatternGrammar {
            patterns: Vec::new(),
            source: String::new(),
        }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Raw text of the bundled forbidden-subword catalog.
pub const BUNDLED_PATTERNS: &str = include_str!("../data/patterns.txt");

/// Returns the first catalog pattern occurring in `fw`, if any.
pub fn is_forbidden<'g>(
    fw: &FullWord,
    grammar: &'g PatternGrammar,
) -> Option<(&'g Pattern, MatchWitness)> {
    grammar
        .patterns
        .iter()
        .find_map(|p| matches(fw, p).map(|w| (p, w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(text: &str) -> FullWord {
        FullWord::parse(text).unwrap()
    }

    fn pat(text: &str) -> Pattern {
        Pattern::parse(text, "test").unwrap()
    }

    #[test]
    fn scan_examples() {
        assert!(matches(&word("1c1a0a1a0a"), &pat("1c1a1")).is_none());

        let hit = matches(&word("1c1a1a0a0a"), &pat("1c1a1")).unwrap();
        assert_eq!(hit.start, 0);
        assert_eq!(hit.direction, ScanDirection::Forward);

        // Wildcard: pattern letter `a` matches `b`.
        assert!(matches(&word("1b1a0a0a"), &pat("1a1")).is_some());
        // But `b` and `c` stay exact.
        assert!(matches(&word("1c1a0a0a"), &pat("1b1")).is_none());
    }

    #[test]
    fn matching_wraps_and_reverses() {
        // 1c1 occurs in 0a1c1a only across the wrap or mirrored.
        assert!(matches(&word("0a1c1a"), &pat("1c1")).is_some());
        // c1b reads backwards as b1c.
        assert!(matches(&word("1b1c0a0a"), &pat("c1b")).is_some());
    }

    #[test]
    fn pattern_longer_than_word_never_matches() {
        assert!(matches(&word("1a0a"), &pat("1a1a1a0a0a")).is_none());
    }

    #[test]
    fn bundled_catalog_shape() {
        let g = PatternGrammar::bundled();
        assert_eq!(g.len(), 70);
        assert!(g.patterns().iter().all(|p| p.text() != "1c1a0a1a0a"));
        // Spot-check labels carried through.
        assert!(g
            .patterns()
            .iter()
            .any(|p| p.text() == "1c1a1" && p.label() == "p1"));
        assert!(g
            .patterns()
            .iter()
            .any(|p| p.text() == "c1b" && p.label() == "p4"));
    }

    #[test]
    fn survivor_is_not_forbidden() {
        let g = PatternGrammar::bundled();
        assert!(is_forbidden(&word("1c1a0a1a0a"), &g).is_none());
    }

    #[test]
    fn reducible_cycle_is_forbidden() {
        let g = PatternGrammar::bundled();
        let (p, _) = is_forbidden(&word("1a1a1a0a0a"), &g).unwrap();
        assert_eq!(p.text(), "1a1a1a0a0a");
        // And a weaker instance of it, with concrete letters.
        let (p, _) = is_forbidden(&word("1b1c1a0a0a"), &g).unwrap();
        assert!(!p.is_empty());
    }

    #[test]
    fn empty_grammar_forbids_nothing() {
        let g = PatternGrammar::empty();
        assert!(is_forbidden(&word("1a1a1a0a0a"), &g).is_none());
    }

    #[test]
    fn parse_pattern_files() {
        let g = PatternGrammar::parse("1c1a1\n1c1c\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.patterns()[0].label(), "line 1");

        let g = PatternGrammar::parse("# comment\nc1b\n").unwrap();
        assert_eq!(g.len(), 1);

        assert!(matches!(
            PatternGrammar::parse("1cc1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(PatternGrammar::parse("1c1\n1c1\n").is_err());
    }

    #[test]
    fn matcher_is_rotation_and_mirror_invariant() {
        let g = PatternGrammar::bundled();
        for text in ["1a1a1a0a0a", "1c1a0a1a0a", "1b0b0a1a0a0a"] {
            let fw = word(text);
            let baseline = is_forbidden(&fw, &g).is_some();
            for k in 0..fw.letter_count() {
                assert_eq!(
                    is_forbidden(&fw.rotation(k), &g).is_some(),
                    baseline,
                    "{text}@{k}"
                );
            }
            assert_eq!(
                is_forbidden(&fw.mirror(), &g).is_some(),
                baseline,
                "{text} mirror"
            );
        }
    }
}
