mod common;

use cliquelab::grammars::{clique_grammar, to_cnf, Grammar, CLIQUE_TERMINALS};
use cliquelab::recognition::{chart_recognize, cyk, valiant_recognize, Kernel};
use cliquelab::tokens::TokenSequence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seq(s: &[String]) -> TokenSequence {
    TokenSequence::from_tokens(s.iter().cloned())
}

#[test]
fn epsilon_only_grammar() {
    let g = Grammar::parse("start: S\nS -> eps\n").unwrap();
    let c = to_cnf(&g);
    assert!(c.rules().is_empty());
    assert!(c.start_derives_empty());
    assert!(cyk(&c, &TokenSequence::new()).unwrap());
}

#[test]
fn two_letter_body_lifts_terminals() {
    let g = Grammar::parse("start: S\nS -> a b\n").unwrap();
    let c = to_cnf(&g);
    // start, and one lifted nonterminal per terminal
    assert_eq!(c.rules().len(), 3);
    assert_eq!(c.binary_rules().count(), 1);
    assert_eq!(c.terminal_rules().count(), 2);
    assert!(!c.start_derives_empty());
    assert!(cyk(&c, &TokenSequence::parse("a b")).unwrap());
    assert!(!cyk(&c, &TokenSequence::parse("b a")).unwrap());
}

#[test]
fn normalization_is_deterministic() {
    let g = clique_grammar();
    assert_eq!(to_cnf(&g), to_cnf(&g));
    assert_eq!(to_cnf(&g).digest(), to_cnf(&Grammar::parse(&g.to_text()).unwrap()).digest());
}

#[test]
fn clique_grammar_rejects_every_short_string() {
    // The shortest member needs all nine markers, so nothing of length < 9
    // is derivable; checked against the fixpoint oracle up to length 3 and
    // with the recognizer up to length 4.
    let g = clique_grammar();
    let c = to_cnf(&g);
    for s in common::all_strings(&CLIQUE_TERMINALS, 4) {
        let t = seq(&s);
        assert!(!chart_recognize(&c, &t).unwrap(), "{t}");
        if s.len() <= 3 {
            assert!(!common::derives(&g, &s));
        }
    }
    let shortest = "a_start a_mid a_end b_start b_mid b_end c_start c_mid c_end";
    let s: Vec<String> = shortest.split(' ').map(String::from).collect();
    assert!(common::derives(&g, &s));
    assert!(cyk(&c, &TokenSequence::parse(shortest)).unwrap());
}

#[test]
fn clique_grammar_cnf_agrees_with_derivations() {
    let g = clique_grammar();
    let c = to_cnf(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut positives = 0;
    for round in 0..150 {
        let member = common::sample_member(&g, 24, &mut rng).unwrap();
        assert!(cyk(&c, &seq(&member)).unwrap(), "sampled member rejected: {member:?}");
        assert!(chart_recognize(&c, &seq(&member)).unwrap());
        positives += 1;
        // single-token mutation, judged by the fixpoint oracle
        let mut mutant = member.clone();
        let at = rng.gen_range(0..mutant.len());
        mutant[at] = CLIQUE_TERMINALS[rng.gen_range(0..CLIQUE_TERMINALS.len())].to_owned();
        if round % 3 == 0 {
            mutant.remove(rng.gen_range(0..mutant.len()));
        }
        let expected = common::derives(&g, &mutant);
        assert_eq!(cyk(&c, &seq(&mutant)).unwrap(), expected, "{mutant:?}");
        assert_eq!(chart_recognize(&c, &seq(&mutant)).unwrap(), expected);
        assert_eq!(valiant_recognize(&c, &seq(&mutant), Kernel::Packed).unwrap(), expected);
    }
    assert_eq!(positives, 150);
}

#[test]
fn random_grammars_agree_with_fixpoint_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let strings = common::all_strings(&["a", "b"], 5);
    for _ in 0..50 {
        let g = common::random_grammar(&mut rng);
        let c = to_cnf(&g);
        for s in &strings {
            let expected = common::derives(&g, s);
            let t = seq(s);
            assert_eq!(cyk(&c, &t).unwrap(), expected, "{}\n{t}", g.to_text());
            assert_eq!(chart_recognize(&c, &t).unwrap(), expected, "{}\n{t}", g.to_text());
        }
    }
}

#[test]
fn grammar_file_round_trip() {
    let g = clique_grammar();
    assert_eq!(Grammar::parse(&g.to_text()).unwrap().to_text(), g.to_text());
    let c = to_cnf(&g).to_grammar();
    assert_eq!(Grammar::parse(&c.to_text()).unwrap(), c);
}
