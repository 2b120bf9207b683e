mod common;

use std::collections::BTreeMap;

use cliquelab::dyck::{dyck_alignment, dyck_bruteforce, dyck_distance};
use cliquelab::folding::{expand_weighted, lcs_via_rna, rna_bruteforce, rna_fold, wrna_fold, WeightedSequence};
use cliquelab::grammars::{to_cnf, Grammar};
use cliquelab::recognition::{
    bmm_four_russians, bmm_naive, bmm_packed, cyk, cyk_table, valiant_recognize, valiant_recognize_with_cutoff,
    BoolMatrix, Kernel,
};
use cliquelab::reductions::{prime, reverse};
use cliquelab::tokens::{BracketAlphabet, MatchedAlphabet, TokenSequence};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seq(s: &str) -> TokenSequence {
    TokenSequence::parse(s)
}

fn fold(s: &TokenSequence) -> u64 {
    rna_fold(s, &MatchedAlphabet::infer(s)).unwrap().score
}

fn dyck(s: &TokenSequence) -> u64 {
    dyck_distance(s, &BracketAlphabet::infer(s)).unwrap()
}

fn weighted(s: &str, w: &[(&str, u64)]) -> WeightedSequence {
    let map: BTreeMap<String, u64> = w.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    WeightedSequence::inferred(seq(s), &map).unwrap()
}

fn random_tokens(rng: &mut impl Rng, letters: &[&str], max: usize) -> TokenSequence {
    let len = rng.gen_range(0..=max);
    TokenSequence::from_tokens((0..len).map(|_| letters[rng.gen_range(0..letters.len())]))
}

#[test]
fn folding_examples() {
    assert_eq!(fold(&seq("a a'")), 1);
    assert_eq!(fold(&seq("")), 0);
    assert_eq!(fold(&seq("a b a' b'")), 1);
    assert_eq!(wrna_fold(&weighted("a a'", &[("a", 7)])).unwrap().score, 7);
    assert_eq!(wrna_fold(&weighted("a b a' b'", &[("a", 1), ("b", 5)])).unwrap().score, 5);
    assert_eq!(rna_bruteforce(&seq("a a' a a'")).unwrap(), 2);
    assert_eq!(rna_bruteforce(&seq("a a")).unwrap(), 0);
    assert!(rna_bruteforce(&TokenSequence::parse(&"a ".repeat(17))).is_err());
    assert_eq!(expand_weighted(&weighted("a a'", &[("a", 3)])), seq("a a a a' a' a'"));
    assert_eq!(lcs_via_rna(&seq("a b c"), &seq("a b c")).unwrap(), 3);
    assert_eq!(lcs_via_rna(&seq("a b"), &seq("b a")).unwrap(), 1);
    assert!(lcs_via_rna(&seq("a'"), &seq("a")).is_err());
}

#[test]
fn rna_matches_bruteforce_exhaustively() {
    for s in common::all_strings(&["a", "a'", "b", "b'"], 6).iter().chain(&common::all_strings(&["a", "a'"], 10)) {
        let t = TokenSequence::from_tokens(s.iter().cloned());
        assert_eq!(fold(&t), rna_bruteforce(&t).unwrap(), "{t}");
    }
}

#[test]
fn unit_weights_reduce_to_plain_folding() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let letters = ["a", "a'", "b", "b'", "c", "c'"];
    for _ in 0..100 {
        let s = random_tokens(&mut rng, &letters, 20);
        let ones: BTreeMap<String, u64> = ["a", "b", "c"].iter().map(|x| (x.to_string(), 1)).collect();
        let alpha = MatchedAlphabet::primed(["a", "b", "c"]).unwrap();
        let ws = WeightedSequence::new(s.clone(), alpha, &ones).unwrap();
        assert_eq!(wrna_fold(&ws).unwrap().score, fold(&s));
        assert_eq!(expand_weighted(&ws), s);
    }
}

#[test]
fn dyck_examples() {
    assert_eq!(dyck(&seq("( )")), 0);
    assert_eq!(dyck(&seq("(")), 1);
    assert_eq!(dyck(&seq(") (")), 1);
    assert_eq!(dyck_bruteforce(&seq("( ( ) )")).unwrap(), 0);
    assert_eq!(dyck_bruteforce(&seq("( ]")).unwrap(), 1);
}

#[test]
fn dyck_matches_bruteforce_on_one_bracket_type() {
    for s in common::all_strings(&["(", ")"], 8) {
        let t = TokenSequence::from_tokens(s.iter().cloned());
        let d = dyck(&t);
        assert_eq!(d, dyck_bruteforce(&t).unwrap(), "{t}");
        assert_eq!(d == 0, common::balanced(&s), "{t}");
    }
}

#[test]
fn dyck_alignment_witnesses_the_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let s = random_tokens(&mut rng, &["(", ")", "[", "]"], 30);
        let alpha = BracketAlphabet::from_pairs([("(", ")"), ("[", "]")]).unwrap();
        let (cost, a) = dyck_alignment(&s, &alpha).unwrap();
        assert_eq!(cost, dyck_distance(&s, &alpha).unwrap());
        assert_eq!(a.cost(&s, &alpha).unwrap().total() as u64, cost);
    }
}

#[test]
fn recognition_examples() {
    let g = to_cnf(&Grammar::parse("start: S\nS -> ( S ) S\nS -> eps\n").unwrap());
    assert!(cyk(&g, &seq("( )")).unwrap());
    assert!(!cyk(&g, &seq(") (")).unwrap());
    assert!(cyk(&g, &TokenSequence::new()).unwrap());
    assert!(valiant_recognize(&g, &TokenSequence::new(), Kernel::Packed).unwrap());
    assert!(cyk(&g, &seq("( x")).is_err());
}

#[test]
fn table_cells_satisfy_the_closure_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let g = to_cnf(&common::random_grammar(&mut rng));
        let s = random_tokens(&mut rng, &["a", "b"], 30);
        if s.is_empty() {
            continue;
        }
        let t = cyk_table(&g, &s).unwrap();
        let n = s.len();
        let binary: Vec<_> = g.binary_rules().collect();
        let terminal: Vec<_> = g.terminal_rules().collect();
        let id = |x: &str| g.terminals().iter().position(|y| y == x).unwrap() as u32;
        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len - 1;
                for a in 0..g.nonterminals().len() as u32 {
                    let expected = if len == 1 {
                        terminal.contains(&(a, id(&s.as_slice()[i])))
                    } else {
                        binary.iter().any(|&(h, b, c)| {
                            h == a && (i..j).any(|k| t.contains(i, k, b) && t.contains(k + 1, j, c))
                        })
                    };
                    assert_eq!(t.contains(i, j, a), expected);
                }
            }
        }
    }
}

#[test]
fn bmm_kernels_agree_up_to_256() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for round in 0..200 {
        let n = if round < 150 { 32 } else { rng.gen_range(1..=256) };
        let density = rng.gen_range(0.0..0.3);
        let a = BoolMatrix::from_fn(n, n, |_, _| rng.gen_bool(density));
        let b = BoolMatrix::from_fn(n, n, |_, _| rng.gen_bool(density));
        let want = bmm_naive(&a, &b).unwrap();
        assert_eq!(bmm_packed(&a, &b).unwrap(), want);
        assert_eq!(bmm_four_russians(&a, &b).unwrap(), want);
    }
    assert!(bmm_packed(&BoolMatrix::zeros(2, 3), &BoolMatrix::zeros(2, 3)).is_err());
    let i = BoolMatrix::identity(5);
    let m = BoolMatrix::from_fn(5, 5, |r, c| (r * c) % 3 == 1);
    assert_eq!(bmm_packed(&i, &m).unwrap(), m);
}

#[test]
fn valiant_agrees_with_cyk_for_every_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let g = to_cnf(&common::random_grammar(&mut rng));
        let s = random_tokens(&mut rng, &["a", "b"], 40);
        let want = cyk(&g, &s).unwrap();
        for k in [Kernel::Naive, Kernel::Packed, Kernel::FourRussians] {
            assert_eq!(valiant_recognize(&g, &s, k).unwrap(), want);
            assert_eq!(valiant_recognize_with_cutoff(&g, &s, k, 1).unwrap(), want);
        }
    }
}

#[test]
fn lcs_bridge_matches_classic_dp() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..200 {
        let x = random_tokens(&mut rng, &["a", "b", "c"], 15);
        let y = random_tokens(&mut rng, &["a", "b", "c"], 15);
        assert_eq!(lcs_via_rna(&x, &y).unwrap(), common::lcs(x.as_slice(), y.as_slice()));
    }
}

fn matched_letters() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["a", "a'", "b", "b'", "c", "c'"]), 0..14)
}

fn brackets() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["(", ")", "[", "]"]), 0..12)
}

proptest! {
    #[test]
    fn rna_matches_bruteforce(s in matched_letters()) {
        let t = TokenSequence::from_tokens(s);
        prop_assert_eq!(fold(&t), rna_bruteforce(&t).unwrap());
    }

    #[test]
    fn rna_is_invariant_under_primed_reversal(s in matched_letters()) {
        let t = TokenSequence::from_tokens(s);
        let alpha = MatchedAlphabet::primed(["a", "b", "c"]).unwrap();
        let flipped = prime(&reverse(&t));
        prop_assert_eq!(rna_fold(&t, &alpha).unwrap().score, rna_fold(&flipped, &alpha).unwrap().score);
        prop_assert_eq!(prime(&prime(&t)), t.clone());
        prop_assert_eq!(reverse(&reverse(&t)), t);
    }

    #[test]
    fn rna_is_monotone_under_appending(s in matched_letters(), extra in matched_letters()) {
        let alpha = MatchedAlphabet::primed(["a", "b", "c"]).unwrap();
        let t = TokenSequence::from_tokens(s.clone());
        let longer = TokenSequence::from_tokens(s.into_iter().chain(extra));
        prop_assert!(rna_fold(&longer, &alpha).unwrap().score >= rna_fold(&t, &alpha).unwrap().score);
    }

    #[test]
    fn weighted_folding_equals_expanded_folding(
        s in prop::collection::vec(prop::sample::select(vec!["a", "a'", "b", "b'", "c", "c'"]), 0..=12),
        w in prop::collection::vec(1u64..=4, 3),
    ) {
        let map: BTreeMap<String, u64> = ["a", "b", "c"].iter().zip(&w).map(|(k, &v)| (k.to_string(), v)).collect();
        let alpha = MatchedAlphabet::primed(["a", "b", "c"]).unwrap();
        let ws = WeightedSequence::new(TokenSequence::from_tokens(s), alpha.clone(), &map).unwrap();
        let expanded = expand_weighted(&ws);
        prop_assert!(expanded.len() as u64 <= 4 * ws.tokens.len() as u64);
        prop_assert_eq!(wrna_fold(&ws).unwrap().score, rna_fold(&expanded, &alpha).unwrap().score);
    }

    #[test]
    fn dyck_matches_bruteforce(s in brackets()) {
        let t = TokenSequence::from_tokens(s);
        prop_assert_eq!(dyck(&t), dyck_bruteforce(&t).unwrap());
    }

    #[test]
    fn dyck_bounds(s in brackets(), extra in brackets()) {
        let alpha = BracketAlphabet::from_pairs([("(", ")"), ("[", "]")]).unwrap();
        let t = TokenSequence::from_tokens(s.clone());
        let u = TokenSequence::from_tokens(extra.clone());
        let d = dyck_distance(&t, &alpha).unwrap();
        prop_assert!(d <= t.len() as u64);
        // every letter whose partner count falls short is deleted or mismatched
        let surplus: i64 = [("(", ")"), ("[", "]")]
            .iter()
            .map(|(o, c)| {
                let opens = s.iter().filter(|x| *x == o).count() as i64;
                let closes = s.iter().filter(|x| *x == c).count() as i64;
                (opens - closes).abs()
            })
            .sum();
        prop_assert!(2 * d as i64 >= surplus);
        let st = TokenSequence::from_tokens(s.into_iter().chain(extra));
        prop_assert!(dyck_distance(&st, &alpha).unwrap() <= d + dyck_distance(&u, &alpha).unwrap());
        prop_assert_eq!(d == 0, common::balanced(t.as_slice()));
    }
}
