//! Randomized property suites, runnable standalone:
//! `cargo test -p discharge-core --test properties`.

use proptest::collection::vec;
use proptest::prelude::*;

use discharge_core::charge::{compute_charge, ChargeDictionary};
use discharge_core::coloring::canonical::PaletteSymmetry;
use discharge_core::coloring::{naive_solve, solve, ConflictGraph, SearchLimits};
use discharge_core::pattern::{matches, Pattern, PatternGrammar};
use discharge_core::plane_graph::PlaneGraph;
use discharge_core::words::{FullWord, NumberWord};

fn full_word() -> impl Strategy<Value = FullWord> {
    (1usize..=8).prop_flat_map(|n| {
        (
            vec(0u8..=1, n),
            vec(prop::sample::select(vec![b'a', b'b', b'c']), n),
        )
            .prop_map(|(digits, letters)| FullWord::new(digits, letters).unwrap())
    })
}

/// Random alternating pattern text of length 1..=7, starting with either
/// symbol kind.
fn pattern() -> impl Strategy<Value = Pattern> {
    (any::<bool>(), 1usize..=7).prop_flat_map(|(digit_first, len)| {
        vec((0u8..=1, prop::sample::select(vec![b'a', b'b', b'c'])), len).prop_map(move |pairs| {
            let mut text = String::new();
            for (i, (d, l)) in pairs.iter().take(len).enumerate() {
                let digit_turn = (i % 2 == 0) == digit_first;
                if digit_turn {
                    text.push((b'0' + d) as char);
                } else {
                    text.push(*l as char);
                }
            }
            Pattern::parse(&text, "prop").unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1100))]

    #[test]
    fn matcher_is_rotation_invariant(fw in full_word(), p in pattern(), k in 0usize..8) {
        let baseline = matches(&fw, &p).is_some();
        let rotated = fw.rotation(k % fw.letter_count());
        prop_assert_eq!(matches(&rotated, &p).is_some(), baseline);
    }

    #[test]
    fn matcher_is_mirror_invariant(fw in full_word(), p in pattern()) {
        let baseline = matches(&fw, &p).is_some();
        prop_assert_eq!(matches(&fw.mirror(), &p).is_some(), baseline);
    }

    #[test]
    fn wildcard_weakening_is_monotone(fw in full_word(), p in pattern(), flips in vec(any::<bool>(), 7)) {
        // Replace some concrete letters by the wildcard: every match of
        // the stronger pattern stays a match of the weaker one.
        let weakened: String = p
            .text()
            .bytes()
            .enumerate()
            .map(|(i, b)| {
                if (b == b'b' || b == b'c') && flips[i % flips.len()] {
                    'a'
                } else {
                    b as char
                }
            })
            .collect();
        let weaker = Pattern::parse(&weakened, "weaker").unwrap();
        if matches(&fw, &p).is_some() {
            prop_assert!(matches(&fw, &weaker).is_some());
        }
    }

    #[test]
    fn solver_agrees_with_brute_force(
        n in 2usize..=8,
        edge_bits in any::<u64>(),
        list_bits in vec(1u32..16, 8),
    ) {
        let mut cg = ConflictGraph::new(n);
        let mut bit = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if edge_bits & (1 << (bit % 64)) != 0 {
                    cg.add_conflict(u, v);
                }
                bit += 1;
            }
        }
        let lists: Vec<u32> = (0..n).map(|v| list_bits[v]).collect();
        let fast = solve(&cg, &lists, &SearchLimits::default());
        let slow = naive_solve(&cg, &lists);
        prop_assert_eq!(fast.is_sat(), slow.is_some());
    }

    #[test]
    fn assignment_canonicalization_is_idempotent_and_invariant(
        masks in vec(1u32..64, 1..=7),
        perm_index in 0usize..720,
    ) {
        let sym = PaletteSymmetry::new(6).unwrap();
        let canon = sym.canonical_form(&masks);
        prop_assert_eq!(sym.canonical_form(&canon), canon.clone());
        // Any permuted image canonicalizes to the same representative.
        let image = sym.apply(perm_index, &masks);
        prop_assert_eq!(sym.canonical_form(&image), canon);
    }

    #[test]
    fn full_word_canonicalization_is_idempotent(fw in full_word()) {
        let canon = fw.canonicalize();
        prop_assert_eq!(canon.canonicalize(), canon.clone());
        // Every rotation lands on the same canonical form.
        for k in 0..fw.letter_count() {
            prop_assert_eq!(fw.rotation(k).canonicalize(), canon.clone());
        }
        // The digit reading of the canonical form is itself canonical.
        prop_assert!(canon.number_word().is_canonical());
    }

    #[test]
    fn number_word_canonicalization_is_idempotent(digits in vec(0u8..=3, 1..=9)) {
        let nw = NumberWord::new(digits).unwrap();
        let canon = nw.canonicalize();
        prop_assert!(canon.is_canonical());
        prop_assert_eq!(canon.canonicalize(), canon);
    }

    #[test]
    fn adding_a_color_never_turns_sat_into_unsat(
        n in 2usize..=7,
        edge_bits in any::<u64>(),
        list_bits in vec(1u32..16, 7),
        extra in (0usize..7, 0u8..4),
    ) {
        let mut cg = ConflictGraph::new(n);
        let mut bit = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if edge_bits & (1 << (bit % 64)) != 0 {
                    cg.add_conflict(u, v);
                }
                bit += 1;
            }
        }
        let lists: Vec<u32> = (0..n).map(|v| list_bits[v]).collect();
        if solve(&cg, &lists, &SearchLimits::default()).is_sat() {
            let mut wider = lists.clone();
            wider[extra.0 % n] |= 1 << extra.1;
            prop_assert!(solve(&cg, &wider, &SearchLimits::default()).is_sat());
        }
    }

    #[test]
    fn charge_is_rotation_and_mirror_invariant(fw in full_word()) {
        let dict = ChargeDictionary::bundled();
        if let Ok((total, _)) = compute_charge(&fw, &dict) {
            for k in 0..fw.letter_count() {
                let (t, _) = compute_charge(&fw.rotation(k), &dict).unwrap();
                prop_assert_eq!(t, total);
            }
            let (t, _) = compute_charge(&fw.mirror(), &dict).unwrap();
            prop_assert_eq!(t, total);
        }
    }

    #[test]
    fn parsers_never_panic_on_arbitrary_text(text in ".{0,200}") {
        let _ = PlaneGraph::parse(&text);
        let _ = PatternGrammar::parse(&text);
        let _ = ChargeDictionary::parse(&text);
        let _ = FullWord::parse(&text);
        let _ = NumberWord::parse(&text);
    }
}
