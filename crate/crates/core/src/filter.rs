//! The generate/filter/score loop over face words.
//!
//! For every number-word, all interlacings with the letter alphabet are
//! generated; words containing a forbidden subword are dropped, the rest
//! are scored against the charge dictionary, and the words whose charge
//! stays below the target are reported as survivors, deduplicated by
//! canonical form. Duplicate readings of one face may be generated and
//! tested repeatedly; that costs time, never correctness.

use std::collections::BTreeMap;
use std::thread;

use serde::Serialize;

use crate::charge::{compute_charge, Charge, ChargeDictionary, TraceItem};
use crate::error::{Error, Result};
use crate::fingerprint::fnv1a;
use crate::pattern::{is_forbidden, PatternGrammar};
use crate::words::{full_word_at, full_word_count, Alphabet, NumberWord};

/// One surviving word: canonical form, charge, and per-position trace.
#[derive(Debug, Clone, Serialize)]
pub struct Survivor {
    pub word: String,
    pub charge: Charge,
    pub trace: Vec<TraceItem>,
}

/// Outcome of a filter run.
#[derive(Debug, Clone, Serialize)]
pub struct FilterReport {
    /// Words enumerated, including duplicate readings of one face.
    pub generated: u64,
    /// Words dropped for containing a forbidden subword.
    pub forbidden: u64,
    /// Words whose charge reached the target.
    pub dischargeable: u64,
    /// Words below target, before canonical deduplication.
    pub surviving: u64,
    /// Distinct survivors by canonical form, sorted lexicographically.
    pub survivors: Vec<Survivor>,
    /// FNV-1a fingerprints of the catalog inputs, for reproducibility.
    pub grammar_fingerprint: u64,
    pub dictionary_fingerprint: u64,
    pub number_words: Vec<String>,
    pub alphabet: String,
    pub target: Charge,
}

impl FilterReport {
    /// Plain-text rendering: `##` summary lines, then `WORD CHARGE` per
    /// survivor.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "## number-words: {}\n## alphabet: {}  target: {}\n",
            self.number_words.join(" "),
            self.alphabet,
            self.target
        ));
        out.push_str(&format!(
            "## fingerprints: forbidden=0x{:016x} charges=0x{:016x}\n",
            self.grammar_fingerprint, self.dictionary_fingerprint
        ));
        out.push_str(&format!(
            "## generated: {}  forbidden: {}  dischargeable: {}  surviving: {}  distinct: {}\n",
            self.generated,
            self.forbidden,
            self.dischargeable,
            self.surviving,
            self.survivors.len()
        ));
        for s in &self.survivors {
            out.push_str(&format!("{} {}\n", s.word, s.charge));
        }
        out
    }
}

/// Runs the filter. `threads` partitions the per-number-word letter space;
/// the report is byte-identical for every worker count.
pub fn run_filter(
    number_words: &[NumberWord],
    alphabet: &Alphabet,
    grammar: &PatternGrammar,
    dictionary: &ChargeDictionary,
    target: Charge,
    threads: usize,
) -> Result<FilterReport> {
    if target <= Charge::ZERO {
        return Err(Error::Input("target charge must be positive".into()));
    }
    let threads = threads.max(1);
    let mut generated: u64 = 0;
    let mut forbidden: u64 = 0;
    let mut dischargeable: u64 = 0;
    let mut surviving: u64 = 0;
    let mut survivors: BTreeMap<String, Survivor> = BTreeMap::new();

    for nw in number_words {
        let total = full_word_count(nw, alphabet);
        if total > u64::MAX as u128 {
            return Err(Error::Input(format!(
                "letter space of number-word {nw} does not fit in 64 bits"
            )));
        }
        let total = total as u64;
        generated += total;
        let chunk = total.div_ceil(threads as u64).max(1);
        let partials: Vec<Result<Partial>> =
            thread::scope(|scope| {
                let mut handles = Vec::new();
                for w in 0..threads {
                    let lo = chunk.saturating_mul(w as u64).min(total);
                    let hi = lo.saturating_add(chunk).min(total);
                    handles.push(scope.spawn(move || {
                        scan_range(nw, alphabet, grammar, dictionary, target, lo, hi)
                    }));
                }
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            });
        for partial in partials {
            let partial = partial?;
            forbidden += partial.forbidden;
            dischargeable += partial.dischargeable;
            surviving += partial.surviving;
            for s in partial.survivors {
                survivors.entry(s.word.clone()).or_insert(s);
            }
        }
    }

    Ok(FilterReport {
        generated,
        forbidden,
        dischargeable,
        surviving,
        survivors: survivors.into_values().collect(),
        grammar_fingerprint: fnv1a(grammar.source().as_bytes()),
        dictionary_fingerprint: fnv1a(dictionary.source().as_bytes()),
        number_words: number_words.iter().map(|w| w.to_string()).collect(),
        alphabet: alphabet.letters().iter().map(|&b| b as char).collect(),
        target,
    })
}

struct Partial {
    forbidden: u64,
    dischargeable: u64,
    surviving: u64,
    survivors: Vec<Survivor>,
}

fn scan_range(
    nw: &NumberWord,
    alphabet: &Alphabet,
    grammar: &PatternGrammar,
    dictionary: &ChargeDictionary,
    target: Charge,
    lo: u64,
    hi: u64,
) -> Result<Partial> {
    let mut partial = Partial {
        forbidden: 0,
        dischargeable: 0,
        surviving: 0,
        survivors: Vec::new(),
    };
    for index in lo..hi {
        let fw = full_word_at(nw, alphabet, index as u128);
        if is_forbidden(&fw, grammar).is_some() {
            partial.forbidden += 1;
            continue;
        }
        // Exhaustiveness failures abort the run: the scoring loop is only
        // meaningful if every unforbidden word is covered.
        let (charge, _) = compute_charge(&fw, dictionary)?;
        if charge >= target {
            partial.dischargeable += 1;
        } else {
            partial.surviving += 1;
            let canonical = fw.canonicalize();
            let (charge, trace) = compute_charge(&canonical, dictionary)?;
            partial.survivors.push(Survivor {
                word: canonical.to_string(),
                charge,
                trace,
            });
        }
    }
    Ok(partial)
}

/// Convenience wrapper: the zero-configuration run over the bundled
/// catalogs and the number-words of 8-faces with gap bound 1.
pub fn headline_run(threads: usize) -> Result<FilterReport> {
    let number_words = crate::words::enumerate_number_words(8, 1)?;
    run_filter(
        &number_words,
        &Alphabet::abc(),
        &PatternGrammar::bundled(),
        &ChargeDictionary::bundled(),
        Charge::TARGET,
        threads,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::enumerate_number_words;

    #[test]
    fn headline_survivor_set() {
        let report = headline_run(1).unwrap();
        assert_eq!(report.generated, 11502);
        let words: Vec<&str> = report.survivors.iter().map(|s| s.word.as_str()).collect();
        assert_eq!(words, vec!["1c1a0a1a0a"]);
        assert_eq!(report.survivors[0].charge, Charge(6));
        assert_eq!(
            report.generated,
            report.forbidden + report.dischargeable + report.surviving
        );
    }

    #[test]
    fn forbidding_the_survivor_empties_the_report() {
        let number_words = enumerate_number_words(8, 1).unwrap();
        let mut source = crate::pattern::BUNDLED_PATTERNS.to_string();
        source.push_str("1c1a0a1a0a # extra\n");
        let grammar = PatternGrammar::parse(&source).unwrap();
        let report = run_filter(
            &number_words,
            &Alphabet::abc(),
            &grammar,
            &ChargeDictionary::bundled(),
            Charge::TARGET,
            1,
        )
        .unwrap();
        assert!(report.survivors.is_empty());
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let one = headline_run(1).unwrap();
        let four = headline_run(4).unwrap();
        assert_eq!(one.render_text(), four.render_text());
    }

    #[test]
    fn grammar_growth_is_monotone() {
        // Adding patterns never enlarges the survivor set.
        let number_words = enumerate_number_words(8, 1).unwrap();
        let small = PatternGrammar::parse("1b1\n").unwrap();
        let large = PatternGrammar::parse("1b1\n1c1c\n1c1a1\n").unwrap();
        let dict = ChargeDictionary::bundled();
        let report_small = run_filter(
            &number_words,
            &Alphabet::abc(),
            &small,
            &dict,
            Charge::TARGET,
            1,
        )
        .unwrap();
        let report_large = run_filter(
            &number_words,
            &Alphabet::abc(),
            &large,
            &dict,
            Charge::TARGET,
            1,
        )
        .unwrap();
        let small_set: std::collections::BTreeSet<&str> = report_small
            .survivors
            .iter()
            .map(|s| s.word.as_str())
            .collect();
        for s in &report_large.survivors {
            assert!(small_set.contains(s.word.as_str()));
        }
    }

    #[test]
    fn raising_the_target_is_monotone() {
        let number_words = enumerate_number_words(8, 1).unwrap();
        let dict = ChargeDictionary::bundled();
        let grammar = PatternGrammar::bundled();
        let low = run_filter(
            &number_words,
            &Alphabet::abc(),
            &grammar,
            &dict,
            Charge(12),
            1,
        )
        .unwrap();
        let high = run_filter(
            &number_words,
            &Alphabet::abc(),
            &grammar,
            &dict,
            Charge(24),
            1,
        )
        .unwrap();
        let high_set: std::collections::BTreeSet<&str> =
            high.survivors.iter().map(|s| s.word.as_str()).collect();
        for s in &low.survivors {
            assert!(high_set.contains(s.word.as_str()));
        }
    }

    /// Independent rescoring of a whole number-word class: expand the
    /// grammar wildcard by hand and search doubled strings, and rescore
    /// every position by trying each dictionary entry at each alignment.
    mod naive {
        use super::*;
        use crate::charge::{Charge, ChargeDictionary};
        use crate::words::FullWord;

        fn flat(fw: &FullWord) -> Vec<u8> {
            (0..2 * fw.letter_count())
                .map(|i| fw.symbol_at(i))
                .collect()
        }

        pub fn forbidden(fw: &FullWord, grammar: &PatternGrammar) -> bool {
            let f = flat(fw);
            let mut doubled = f.clone();
            doubled.extend_from_slice(&f);
            let mut reversed = doubled.clone();
            reversed.reverse();
            for p in grammar.patterns() {
                for expansion in expand(p.text()) {
                    if contains(&doubled, &expansion) || contains(&reversed, &expansion) {
                        return true;
                    }
                }
            }
            false
        }

        fn contains(haystack: &[u8], needle: &[u8]) -> bool {
            haystack.windows(needle.len()).any(|w| w == needle)
        }

        fn expand(pattern: &str) -> Vec<Vec<u8>> {
            let mut out = vec![Vec::new()];
            for ch in pattern.bytes() {
                let options: Vec<u8> = if ch == b'a' {
                    vec![b'a', b'b', b'c']
                } else if ch.is_ascii_digit() {
                    vec![ch - b'0']
                } else {
                    vec![ch]
                };
                let mut next = Vec::new();
                for prefix in &out {
                    for &o in &options {
                        let mut p = prefix.clone();
                        p.push(o);
                        next.push(p);
                    }
                }
                out = next;
            }
            out
        }

        pub fn charge(fw: &FullWord, dict: &ChargeDictionary) -> Option<Charge> {
            let period = 2 * fw.letter_count();
            let mut total = 0i64;
            for p in 0..fw.letter_count() {
                let mut found: Option<i64> = None;
                for len in [7usize, 5, 3] {
                    let h = match len {
                        5 => 1,
                        3 => 1,
                        _ => 3,
                    };
                    let mut charges = Vec::new();
                    for entry in dict.entries() {
                        let text: Vec<u8> = entry.text().bytes().collect();
                        if text.len() != len {
                            continue;
                        }
                        for rev in [false, true] {
                            let ok = (0..len).all(|t| {
                                let pos = if rev {
                                    (2 * p + 1 + period + h - t) % period
                                } else {
                                    (2 * p + 1 + period + t - h) % period
                                };
                                let sym = fw.symbol_at(pos);
                                let e = text[t];
                                if e.is_ascii_digit() {
                                    sym == e - b'0'
                                } else if e == b'a' {
                                    sym.is_ascii_lowercase()
                                } else {
                                    sym == e
                                }
                            });
                            if ok {
                                charges.push((entry.text().contains('a'), entry.charge.0));
                            }
                        }
                    }
                    if !charges.is_empty() {
                        let exact = charges.iter().any(|&(wild, _)| !wild);
                        let c = charges
                            .iter()
                            .filter(|&&(wild, _)| !exact || !wild)
                            .map(|&(_, c)| c)
                            .next()
                            .unwrap();
                        found = Some(c);
                        break;
                    }
                }
                total += found?;
            }
            Some(Charge(total))
        }
    }

    #[test]
    fn survivors_match_naive_rescoring() {
        // Every number-word with at most six letters, scanned both ways.
        let number_words: Vec<NumberWord> = enumerate_number_words(8, 1)
            .unwrap()
            .into_iter()
            .filter(|nw| nw.len() <= 6)
            .collect();
        let abc = Alphabet::abc();
        let grammar = PatternGrammar::bundled();
        let dict = ChargeDictionary::bundled();
        let report = run_filter(&number_words, &abc, &grammar, &dict, Charge::TARGET, 2).unwrap();
        let mut expected = std::collections::BTreeSet::new();
        for nw in &number_words {
            for index in 0..full_word_count(nw, &abc) {
                let fw = full_word_at(nw, &abc, index);
                if naive::forbidden(&fw, &grammar) {
                    continue;
                }
                let charge = naive::charge(&fw, &dict).expect("dictionary covers survivors");
                if charge < Charge::TARGET {
                    expected.insert(fw.canonicalize().to_string());
                }
            }
        }
        let got: std::collections::BTreeSet<String> =
            report.survivors.iter().map(|s| s.word.clone()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn all_unforbidden_words_are_scoreable() {
        // Dictionary exhaustiveness over the full headline space.
        let number_words = enumerate_number_words(8, 1).unwrap();
        let abc = Alphabet::abc();
        let grammar = PatternGrammar::bundled();
        let dict = ChargeDictionary::bundled();
        for nw in &number_words {
            for index in 0..full_word_count(nw, &abc) {
                let fw = full_word_at(nw, &abc, index);
                if is_forbidden(&fw, &grammar).is_none() {
                    assert!(compute_charge(&fw, &dict).is_ok(), "{fw}");
                }
            }
        }
    }

    #[test]
    fn survivor_in_empty_grammar_world_matches_direct_rescan() {
        // With no forbidden patterns, the all-zero number-word admits
        // exactly the words of charge below target.
        let nw = NumberWord::parse("00000000").unwrap();
        let abc = Alphabet::abc();
        let dict = ChargeDictionary::bundled();
        let grammar = PatternGrammar::empty();
        let report = run_filter(
            std::slice::from_ref(&nw),
            &abc,
            &grammar,
            &dict,
            Charge::TARGET,
            1,
        )
        .unwrap();
        let mut expected = std::collections::BTreeSet::new();
        for index in 0..full_word_count(&nw, &abc) {
            let fw = full_word_at(&nw, &abc, index);
            let c = naive::charge(&fw, &dict).unwrap();
            if c < Charge::TARGET {
                expected.insert(fw.canonicalize().to_string());
            }
        }
        let got: std::collections::BTreeSet<String> =
            report.survivors.iter().map(|s| s.word.clone()).collect();
        assert_eq!(got, expected);
        assert_eq!(report.generated, 6561);
    }
}
