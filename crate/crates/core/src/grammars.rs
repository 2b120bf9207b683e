//! Context-free grammars, the clique-detecting grammar and CNF conversion.

mod cnf;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use cnf::{to_cnf, CnfGrammar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("start symbol `{0}` is not a nonterminal")]
    BadStart(String),
    #[error("`{0}` is declared both as terminal and nonterminal")]
    Overlap(String),
    #[error("symbol `{0}` is not declared")]
    UnknownSymbol(String),
    #[error("rule head `{0}` is not a nonterminal")]
    BadHead(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(String),
    N(String),
}

impl Symbol {
    pub fn name(&self) -> &str {
        match self {
            Symbol::T(s) | Symbol::N(s) => s,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::T(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: String,
    pub body: Vec<Symbol>,
}

impl Rule {
    pub fn new(head: impl Into<String>, body: Vec<Symbol>) -> Self {
        Self { head: head.into(), body }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.head)?;
        if self.body.is_empty() {
            return write!(f, " eps");
        }
        for s in &self.body {
            write!(f, " {}", s.name())?;
        }
        Ok(())
    }
}

/// A general context-free grammar; bodies may be empty or long.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    start: String,
    rules: Vec<Rule>,
}

impl Grammar {
    pub fn new(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        start: impl Into<String>,
        rules: Vec<Rule>,
    ) -> Result<Self, GrammarError> {
        let start = start.into();
        let ts: HashSet<&str> = terminals.iter().map(String::as_str).collect();
        let ns: HashSet<&str> = nonterminals.iter().map(String::as_str).collect();
        if let Some(x) = ts.intersection(&ns).next() {
            return Err(GrammarError::Overlap(x.to_string()));
        }
        if !ns.contains(start.as_str()) {
            return Err(GrammarError::BadStart(start));
        }
        for r in &rules {
            if !ns.contains(r.head.as_str()) {
                return Err(GrammarError::BadHead(r.head.clone()));
            }
            for s in &r.body {
                let known = match s {
                    Symbol::T(t) => ts.contains(t.as_str()),
                    Symbol::N(a) => ns.contains(a.as_str()),
                };
                if !known {
                    return Err(GrammarError::UnknownSymbol(s.name().to_owned()));
                }
            }
        }
        Ok(Self { terminals, nonterminals, start, rules })
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Sum over rules of one (the head) plus the body length.
    pub fn size(&self) -> usize {
        self.rules.iter().map(|r| 1 + r.body.len()).sum()
    }

    /// Same grammar with a different start symbol.
    pub fn with_start(&self, start: &str) -> Result<Self, GrammarError> {
        Self::new(self.terminals.clone(), self.nonterminals.clone(), start, self.rules.clone())
    }

    /// Text form: headers followed by one rule per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("start: {}\n", self.start);
        out.push_str(&format!("terminals: {}\n", self.terminals.join(" ")));
        out.push_str(&format!("nonterminals: {}\n", self.nonterminals.join(" ")));
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the text form. The `terminals:` and `nonterminals:` headers
    /// are optional; without them every rule head is a nonterminal and
    /// every other body symbol a terminal, in order of first appearance.
    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        let mut start: Option<String> = None;
        let mut declared_t: Option<Vec<String>> = None;
        let mut declared_n: Option<Vec<String>> = None;
        let mut raw_rules: Vec<(usize, String, Vec<String>)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| GrammarError::Parse { line, message };
            if let Some(rest) = trimmed.strip_prefix("start:") {
                let name = rest.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(err(format!("bad start header `{trimmed}`")));
                }
                start = Some(name.to_owned());
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("terminals:") {
                declared_t = Some(rest.split_whitespace().map(str::to_owned).collect());
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("nonterminals:") {
                declared_n = Some(rest.split_whitespace().map(str::to_owned).collect());
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let head = parts.next().unwrap_or_default().to_owned();
            if parts.next() != Some("->") {
                return Err(err(format!("expected `Head -> body`, found `{trimmed}`")));
            }
            let mut body: Vec<String> = parts.map(str::to_owned).collect();
            if body == ["eps"] {
                body.clear();
            } else if body.is_empty() {
                return Err(err("empty body; write `eps`".into()));
            }
            raw_rules.push((line, head, body));
        }

        let start = start.ok_or(GrammarError::Parse { line: 1, message: "missing `start:` header".into() })?;
        let nonterminals = declared_n.unwrap_or_else(|| {
            let mut seen = HashSet::new();
            std::iter::once(&start)
                .chain(raw_rules.iter().map(|(_, h, _)| h))
                .filter(|h| seen.insert(h.as_str()))
                .cloned()
                .collect()
        });
        let nset: HashSet<&str> = nonterminals.iter().map(String::as_str).collect();
        let terminals = declared_t.unwrap_or_else(|| {
            let mut seen = HashSet::new();
            raw_rules
                .iter()
                .flat_map(|(_, _, b)| b.iter())
                .filter(|s| !nset.contains(s.as_str()) && seen.insert(s.as_str()))
                .cloned()
                .collect()
        });
        let tset: HashSet<&str> = terminals.iter().map(String::as_str).collect();

        let mut rules = Vec::with_capacity(raw_rules.len());
        for (line, head, body) in raw_rules {
            if !nset.contains(head.as_str()) {
                return Err(GrammarError::Parse { line, message: format!("`{head}` is not a nonterminal") });
            }
            let mut symbols = Vec::with_capacity(body.len());
            for s in body {
                if nset.contains(s.as_str()) {
                    symbols.push(Symbol::N(s));
                } else if tset.contains(s.as_str()) {
                    symbols.push(Symbol::T(s));
                } else {
                    return Err(GrammarError::Parse { line, message: format!("unknown symbol `{s}`") });
                }
            }
            rules.push(Rule::new(head, symbols));
        }
        Self::new(terminals, nonterminals, start, rules)
    }
}

/// Terminal names of the clique-detecting grammar.
pub const CLIQUE_TERMINALS: [&str; 13] = [
    "0", "1", "$", "#", "a_start", "a_mid", "a_end", "b_start", "b_mid", "b_end", "c_start",
    "c_mid", "c_end",
];

/// The clique-detecting grammar with its 13 terminals and 13 nonterminals.
pub fn clique_grammar() -> Grammar {
    let t = |s: &str| Symbol::T(s.to_owned());
    let n = |s: &str| Symbol::N(s.to_owned());
    let marks = ["ab", "ag", "bg"];

    let mut nonterminals = vec!["S".to_owned()];
    for prefix in ["S", "S*", "N"] {
        for m in marks {
            nonterminals.push(format!("{prefix}_{m}"));
        }
    }
    nonterminals.extend(["W", "W'", "V"].map(String::from));

    let mut rules = vec![
        Rule::new("S", vec![n("W"), t("a_start"), n("S_ag"), t("c_end"), n("W")]),
        Rule::new("S*_ag", vec![t("a_mid"), n("S_ab"), t("b_mid"), n("S_bg"), t("c_mid")]),
        Rule::new("S*_ab", vec![t("a_end"), n("W"), t("b_start")]),
        Rule::new("S*_bg", vec![t("b_end"), n("W"), t("c_start")]),
    ];
    for m in marks {
        let s = format!("S_{m}");
        let star = format!("S*_{m}");
        let nn = format!("N_{m}");
        rules.push(Rule::new(&s, vec![n(&star)]));
        rules.push(Rule::new(&s, vec![t("#"), n(&nn), t("$"), n("V"), t("#")]));
        rules.push(Rule::new(&nn, vec![t("#"), n(&s), t("#"), n("V"), t("$")]));
        for bit in ["0", "1"] {
            rules.push(Rule::new(&nn, vec![t(bit), n(&nn), t(bit)]));
        }
    }
    rules.push(Rule::new("W", vec![]));
    for sigma in CLIQUE_TERMINALS {
        rules.push(Rule::new("W", vec![t(sigma), n("W")]));
    }
    rules.push(Rule::new("W'", vec![]));
    for bit in ["0", "1"] {
        rules.push(Rule::new("W'", vec![t(bit), n("W'")]));
    }
    rules.push(Rule::new("V", vec![]));
    rules.push(Rule::new("V", vec![t("$"), n("W'"), t("$"), n("V")]));

    Grammar::new(
        CLIQUE_TERMINALS.iter().map(|s| s.to_string()).collect(),
        nonterminals,
        "S",
        rules,
    )
    .expect("clique grammar is well formed")
}

/// Nullable nonterminals of `g`.
pub(crate) fn nullable_set(rules: &[Rule]) -> HashSet<String> {
    let mut nullable = HashSet::new();
    loop {
        let before = nullable.len();
        for r in rules {
            if !nullable.contains(&r.head)
                && r.body.iter().all(|s| matches!(s, Symbol::N(a) if nullable.contains(a)))
            {
                nullable.insert(r.head.clone());
            }
        }
        if nullable.len() == before {
            return nullable;
        }
    }
}

pub(crate) fn index_of(names: &[String]) -> HashMap<&str, u32> {
    names.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_grammar_shape() {
        let g = clique_grammar();
        assert_eq!(g.terminals().len(), 13);
        assert_eq!(g.nonterminals().len(), 13);
        assert_eq!(g.rules().len(), 38);
        assert_eq!(g.start(), "S");
        assert!(g.rules().contains(&Rule::new("W", vec![])));
        let body: usize = g.rules().iter().map(|r| r.body.len()).sum();
        assert_eq!(body, 101);
        assert_eq!(g.size(), 139);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let g = clique_grammar();
        let text = g.to_text();
        let back = Grammar::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_infers_symbol_sets() {
        let g = Grammar::parse("# parens\nstart: S\nS -> ( S ) S\nS -> eps\n").unwrap();
        assert_eq!(g.nonterminals(), ["S"]);
        assert_eq!(g.terminals(), ["(", ")"]);
        assert_eq!(g.rules()[1].body, vec![]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Grammar::parse("S -> a"), Err(GrammarError::Parse { .. })));
        assert!(matches!(
            Grammar::parse("start: S\nS a b"),
            Err(GrammarError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Grammar::parse("start: S\nterminals: a\nS -> b"),
            Err(GrammarError::Parse { line: 3, .. })
        ));
        assert!(matches!(Grammar::parse("start: X\nnonterminals: S\nS -> a"), Err(GrammarError::BadStart(_))));
    }
}
