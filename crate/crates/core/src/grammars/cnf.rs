use std::collections::{HashMap, HashSet, VecDeque};

use sha2::{Digest, Sha256};

use super::{index_of, nullable_set, Grammar, Rule, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CnfRule {
    /// `A -> B C`
    Binary(u32, u32, u32),
    /// `A -> σ` with σ a terminal index
    Terminal(u32, u32),
}

/// Grammar in Chomsky normal form over indexed symbols.
///
/// The empty word is never derived by a rule; `start_derives_empty`
/// records whether it belongs to the language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar {
    nonterminals: Vec<String>,
    terminals: Vec<String>,
    start: u32,
    rules: Vec<CnfRule>,
    start_derives_empty: bool,
    terminal_ids: HashMap<String, u32>,
}

impl CnfGrammar {
    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn rules(&self) -> &[CnfRule] {
        &self.rules
    }

    pub fn start_derives_empty(&self) -> bool {
        self.start_derives_empty
    }

    pub fn terminal_id(&self, name: &str) -> Option<u32> {
        self.terminal_ids.get(name).copied()
    }

    pub fn binary_rules(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.rules.iter().filter_map(|r| match *r {
            CnfRule::Binary(a, b, c) => Some((a, b, c)),
            CnfRule::Terminal(..) => None,
        })
    }

    pub fn terminal_rules(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.rules.iter().filter_map(|r| match *r {
            CnfRule::Terminal(a, t) => Some((a, t)),
            CnfRule::Binary(..) => None,
        })
    }

    /// Back to a general grammar; adds `start -> eps` when the flag is set.
    pub fn to_grammar(&self) -> Grammar {
        let n = |i: u32| Symbol::N(self.nonterminals[i as usize].clone());
        let mut rules: Vec<Rule> = self
            .rules
            .iter()
            .map(|r| match *r {
                CnfRule::Binary(a, b, c) => {
                    Rule::new(self.nonterminals[a as usize].clone(), vec![n(b), n(c)])
                }
                CnfRule::Terminal(a, t) => Rule::new(
                    self.nonterminals[a as usize].clone(),
                    vec![Symbol::T(self.terminals[t as usize].clone())],
                ),
            })
            .collect();
        if self.start_derives_empty {
            rules.push(Rule::new(self.nonterminals[self.start as usize].clone(), vec![]));
        }
        Grammar::new(
            self.terminals.clone(),
            self.nonterminals.clone(),
            self.nonterminals[self.start as usize].clone(),
            rules,
        )
        .expect("CNF image is well formed")
    }

    /// Hex SHA-256 of the exported text form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_grammar().to_text().as_bytes()))
    }
}

fn fresh(base: String, taken: &mut HashSet<String>) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('%');
    }
    taken.insert(name.clone());
    name
}

fn dedup(rules: Vec<Rule>) -> Vec<Rule> {
    let mut seen = HashSet::new();
    rules.into_iter().filter(|r| seen.insert(r.clone())).collect()
}

/// Chomsky normal form of `g`, equivalent on non-empty words.
pub fn to_cnf(g: &Grammar) -> CnfGrammar {
    let mut taken: HashSet<String> =
        g.terminals().iter().chain(g.nonterminals()).cloned().collect();
    let start = fresh(format!("{}%start", g.start()), &mut taken);
    let mut order: Vec<String> = vec![start.clone()];
    order.extend(g.nonterminals().iter().cloned());

    let mut rules = vec![Rule::new(start.clone(), vec![Symbol::N(g.start().to_owned())])];
    rules.extend(g.rules().iter().cloned());

    // epsilon elimination
    let nullable = nullable_set(&rules);
    let start_derives_empty = nullable.contains(&start);
    let mut expanded = Vec::new();
    for r in &rules {
        let optional: Vec<usize> = r
            .body
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Symbol::N(a) if nullable.contains(a)))
            .map(|(i, _)| i)
            .collect();
        for mask in 0u64..1 << optional.len() {
            let body: Vec<Symbol> = r
                .body
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    optional.iter().position(|o| o == i).map_or(true, |bit| mask >> bit & 1 == 0)
                })
                .map(|(_, s)| s.clone())
                .collect();
            if !body.is_empty() {
                expanded.push(Rule::new(r.head.clone(), body));
            }
        }
    }
    let rules = dedup(expanded);

    // unit elimination through the transitive closure of A -> B
    let mut unit_edges: HashMap<&str, Vec<&str>> = HashMap::new();
    for r in &rules {
        if let [Symbol::N(b)] = r.body.as_slice() {
            unit_edges.entry(r.head.as_str()).or_default().push(b.as_str());
        }
    }
    let mut closed = Vec::new();
    for a in &order {
        let mut reach: HashSet<&str> = HashSet::from([a.as_str()]);
        let mut queue = VecDeque::from([a.as_str()]);
        while let Some(x) = queue.pop_front() {
            for &y in unit_edges.get(x).into_iter().flatten() {
                if reach.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        for r in &rules {
            let is_unit = matches!(r.body.as_slice(), [Symbol::N(_)]);
            if !is_unit && reach.contains(r.head.as_str()) {
                closed.push(Rule::new(a.clone(), r.body.clone()));
            }
        }
    }
    let rules = remove_useless(dedup(closed), &start);

    // terminal lifting inside long bodies
    let mut lifted_names: HashMap<String, String> = HashMap::new();
    let mut lifted_rules = Vec::new();
    let mut rules: Vec<Rule> = rules
        .into_iter()
        .map(|mut r| {
            if r.body.len() >= 2 {
                for s in r.body.iter_mut() {
                    if let Symbol::T(t) = s {
                        let name = lifted_names.entry(t.clone()).or_insert_with(|| {
                            let name = fresh(format!("T%{t}"), &mut taken);
                            order.push(name.clone());
                            lifted_rules.push(Rule::new(name.clone(), vec![Symbol::T(t.clone())]));
                            name
                        });
                        *s = Symbol::N(name.clone());
                    }
                }
            }
            r
        })
        .collect();
    rules.extend(lifted_rules);

    // left-to-right binarization
    let mut binary = Vec::new();
    for (idx, r) in rules.into_iter().enumerate() {
        if r.body.len() <= 2 {
            binary.push(r);
            continue;
        }
        let m = r.body.len();
        let mut head = r.head.clone();
        for pos in 1..m - 1 {
            let next = fresh(format!("{}%{idx}%{pos}", r.head), &mut taken);
            order.push(next.clone());
            binary.push(Rule::new(head, vec![r.body[pos - 1].clone(), Symbol::N(next.clone())]));
            head = next;
        }
        binary.push(Rule::new(head, r.body[m - 2..].to_vec()));
    }

    let used: HashSet<&str> = binary
        .iter()
        .flat_map(|r| {
            std::iter::once(r.head.as_str()).chain(r.body.iter().filter_map(|s| match s {
                Symbol::N(a) => Some(a.as_str()),
                Symbol::T(_) => None,
            }))
        })
        .collect();
    let nonterminals: Vec<String> =
        order.iter().filter(|a| **a == start || used.contains(a.as_str())).cloned().collect();
    let nid = index_of(&nonterminals);
    let terminals = g.terminals().to_vec();
    let tid = index_of(&terminals);
    let cnf_rules = binary
        .iter()
        .map(|r| {
            let a = nid[r.head.as_str()];
            match r.body.as_slice() {
                [Symbol::N(b), Symbol::N(c)] => CnfRule::Binary(a, nid[b.as_str()], nid[c.as_str()]),
                [Symbol::T(t)] => CnfRule::Terminal(a, tid[t.as_str()]),
                other => unreachable!("non-CNF body {other:?}"),
            }
        })
        .collect();
    let terminal_ids = terminals.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
    CnfGrammar {
        start: nid[start.as_str()],
        nonterminals,
        terminals,
        rules: cnf_rules,
        start_derives_empty,
        terminal_ids,
    }
}

/// Drops rules mentioning non-generating or unreachable nonterminals.
fn remove_useless(rules: Vec<Rule>, start: &str) -> Vec<Rule> {
    let mut generating: HashSet<String> = HashSet::new();
    loop {
        let before = generating.len();
        for r in &rules {
            if r.body.iter().all(|s| match s {
                Symbol::T(_) => true,
                Symbol::N(a) => generating.contains(a),
            }) {
                generating.insert(r.head.clone());
            }
        }
        if generating.len() == before {
            break;
        }
    }
    let rules: Vec<Rule> = rules
        .into_iter()
        .filter(|r| {
            generating.contains(&r.head)
                && r.body.iter().all(|s| !matches!(s, Symbol::N(a) if !generating.contains(a)))
        })
        .collect();
    let mut reachable: HashSet<&str> = HashSet::from([start]);
    loop {
        let before = reachable.len();
        for r in &rules {
            if reachable.contains(r.head.as_str()) {
                for s in &r.body {
                    if let Symbol::N(a) = s {
                        reachable.insert(a.as_str());
                    }
                }
            }
        }
        if reachable.len() == before {
            break;
        }
    }
    let keep: HashSet<String> = reachable.into_iter().map(str::to_owned).collect();
    rules.into_iter().filter(|r| keep.contains(&r.head)).collect()
}
