//! Partially-ordered two-way DFA.
//!
//! States carry a polarity: `L` states are entered from the left (the head
//! moves right on entry and on else-loops), `R` states from the right, and
//! the two terminals `t`/`r` absorb without moving. Progress transitions
//! form a DAG; every letter without a progress transition takes the
//! default self-loop. The automaton scans the extended word `> w <` with
//! the markers at positions `0` and `len + 1`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Letter, Word, enumerate_words};
use crate::sexpr::SExpr;

/// A letter of the extended alphabet: a plain letter or an end-marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtLetter {
    /// `>` — the marker before position 1.
    Start,
    /// `<` — the marker after the last position.
    End,
    Sym(Letter),
}

impl ExtLetter {
    pub fn letter(self) -> Option<Letter> {
        match self {
            ExtLetter::Sym(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for ExtLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtLetter::Start => write!(f, ">"),
            ExtLetter::End => write!(f, "<"),
            ExtLetter::Sym(l) => write!(f, "{l}"),
        }
    }
}

/// Letter of the extended word at 1-based position `pos` in `0..=len+1`.
pub fn ext_at(w: &Word, pos: usize) -> ExtLetter {
    if pos == 0 {
        ExtLetter::Start
    } else if pos == w.len() + 1 {
        ExtLetter::End
    } else {
        ExtLetter::Sym(w.at(pos).expect("position in extended domain"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    L,
    R,
    Accept,
    Reject,
}

impl Polarity {
    pub fn is_terminal(self) -> bool {
        matches!(self, Polarity::Accept | Polarity::Reject)
    }
}

pub type StateId = usize;

#[derive(Debug, Clone)]
pub struct Po2Dfa {
    pub alphabet: Alphabet,
    names: Vec<String>,
    polarity: Vec<Polarity>,
    init: StateId,
    delta: Vec<BTreeMap<ExtLetter, StateId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

/// Full run of the automaton: the configuration sequence and the outcome.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub steps: Vec<(StateId, usize)>,
    pub verdict: Verdict,
    pub final_pos: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("run exceeded the step budget of {budget}; invariant violation in the automaton")]
    NonTermination { budget: usize },
    #[error("start position {pos} outside 0..={max}")]
    BadStart { pos: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotExactlyOneAccept(usize),
    NotExactlyOneReject(usize),
    TerminalHasTransition(String),
    ProgressCycle(Vec<String>),
    MissingEndMarker(String, ExtLetter),
    EndTargetPolarity {
        state: String,
        marker: ExtLetter,
        target: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotExactlyOneAccept(n) => write!(f, "expected exactly one accept state, found {n}"),
            Violation::NotExactlyOneReject(n) => write!(f, "expected exactly one reject state, found {n}"),
            Violation::TerminalHasTransition(q) => write!(f, "terminal state {q} has outgoing transitions"),
            Violation::ProgressCycle(qs) => write!(f, "progress transitions cycle through {}", qs.join(" -> ")),
            Violation::MissingEndMarker(q, m) => write!(f, "state {q} has no progress transition on {m}"),
            Violation::EndTargetPolarity { state, marker, target } => write!(
                f,
                "transition {state} --{marker}--> {target} would move the head off the word"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness {
    NonEmpty(Word),
    EmptyUpTo(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("enumeration budget of {budget} words exceeded at bound {bound}")]
pub struct BudgetExceeded {
    pub budget: u64,
    pub bound: usize,
}

pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

impl Po2Dfa {
    pub fn new(
        alphabet: Alphabet,
        names: Vec<String>,
        polarity: Vec<Polarity>,
        init: StateId,
        delta: Vec<BTreeMap<ExtLetter, StateId>>,
    ) -> Po2Dfa {
        assert_eq!(names.len(), polarity.len());
        assert_eq!(names.len(), delta.len());
        Po2Dfa {
            alphabet,
            names,
            polarity,
            init,
            delta,
        }
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn polarity(&self, q: StateId) -> Polarity {
        self.polarity[q]
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn transitions(&self, q: StateId) -> &BTreeMap<ExtLetter, StateId> {
        &self.delta[q]
    }

    pub fn accept_state(&self) -> Option<StateId> {
        (0..self.state_count()).find(|&q| self.polarity[q] == Polarity::Accept)
    }

    pub fn reject_state(&self) -> Option<StateId> {
        (0..self.state_count()).find(|&q| self.polarity[q] == Polarity::Reject)
    }

    /// The else-set: letters of the alphabet with no progress transition.
    pub fn else_set(&self, q: StateId) -> Vec<Letter> {
        self.alphabet
            .iter()
            .filter(|&l| !self.delta[q].contains_key(&ExtLetter::Sym(l)))
            .collect()
    }

    /// Letters of the alphabet with a progress transition out of `q`.
    pub fn progress_letters(&self, q: StateId) -> Vec<Letter> {
        self.alphabet
            .iter()
            .filter(|&l| self.delta[q].contains_key(&ExtLetter::Sym(l)))
            .collect()
    }

    /// Checks every structural invariant and returns all violations.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let accepts = self.polarity.iter().filter(|p| **p == Polarity::Accept).count();
        let rejects = self.polarity.iter().filter(|p| **p == Polarity::Reject).count();
        if accepts != 1 {
            out.push(Violation::NotExactlyOneAccept(accepts));
        }
        if rejects != 1 {
            out.push(Violation::NotExactlyOneReject(rejects));
        }
        for q in 0..self.state_count() {
            if self.polarity[q].is_terminal() {
                if !self.delta[q].is_empty() {
                    out.push(Violation::TerminalHasTransition(self.names[q].clone()));
                }
                continue;
            }
            for marker in [ExtLetter::Start, ExtLetter::End] {
                match self.delta[q].get(&marker) {
                    None => out.push(Violation::MissingEndMarker(self.names[q].clone(), marker)),
                    Some(&tgt) => {
                        let bad = match marker {
                            ExtLetter::Start => self.polarity[tgt] == Polarity::R,
                            ExtLetter::End => self.polarity[tgt] == Polarity::L,
                            _ => unreachable!(),
                        };
                        if bad {
                            out.push(Violation::EndTargetPolarity {
                                state: self.names[q].clone(),
                                marker,
                                target: self.names[tgt].clone(),
                            });
                        }
                    }
                }
            }
        }
        // Acyclicity of progress transitions among non-terminal states.
        if let Some(cycle) = self.find_cycle() {
            out.push(Violation::ProgressCycle(
                cycle.into_iter().map(|q| self.names[q].clone()).collect(),
            ));
        }
        out
    }

    fn find_cycle(&self) -> Option<Vec<StateId>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        let mut mark = vec![Mark::White; self.state_count()];
        let mut stack: Vec<StateId> = Vec::new();
        fn dfs(
            m: &Po2Dfa,
            q: StateId,
            mark: &mut [Mark],
            stack: &mut Vec<StateId>,
        ) -> Option<Vec<StateId>> {
            mark[q] = Mark::Grey;
            stack.push(q);
            for (&_, &tgt) in &m.delta[q] {
                if m.polarity[tgt].is_terminal() {
                    continue;
                }
                match mark[tgt] {
                    Mark::Grey => {
                        let start = stack.iter().position(|&s| s == tgt).unwrap();
                        let mut cycle = stack[start..].to_vec();
                        cycle.push(tgt);
                        return Some(cycle);
                    }
                    Mark::White => {
                        if let Some(c) = dfs(m, tgt, mark, stack) {
                            return Some(c);
                        }
                    }
                    Mark::Black => {}
                }
            }
            stack.pop();
            mark[q] = Mark::Black;
            None
        }
        for q in 0..self.state_count() {
            if !self.polarity[q].is_terminal() && mark[q] == Mark::White {
                if let Some(c) = dfs(self, q, &mut mark, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Simulates the run from head position `p0` in the extended domain.
    pub fn run(&self, w: &Word, p0: usize) -> Result<RunTrace, RunError> {
        let max = w.len() + 1;
        if p0 > max {
            return Err(RunError::BadStart { pos: p0, max });
        }
        let budget = self.state_count() * (w.len() + 2) + 1;
        let mut q = self.init;
        let mut p = p0;
        let mut steps = vec![(q, p)];
        while !self.polarity[q].is_terminal() {
            if steps.len() > budget {
                return Err(RunError::NonTermination { budget });
            }
            let x = ext_at(w, p);
            match self.delta[q].get(&x) {
                Some(&q2) => {
                    p = match self.polarity[q2] {
                        Polarity::L => p + 1,
                        Polarity::R => p - 1,
                        _ => p,
                    };
                    q = q2;
                }
                None => {
                    // Else self-loop; only alphabet letters can reach here
                    // on a validated automaton.
                    debug_assert!(matches!(x, ExtLetter::Sym(_)));
                    p = match self.polarity[q] {
                        Polarity::L => p + 1,
                        Polarity::R => p - 1,
                        _ => unreachable!(),
                    };
                }
            }
            steps.push((q, p));
        }
        let verdict = if self.polarity[q] == Polarity::Accept {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        Ok(RunTrace {
            final_pos: p,
            steps,
            verdict,
        })
    }

    /// Language membership: the run from position 1. For the empty word
    /// position 1 holds the end-marker `<`.
    pub fn member(&self, w: &Word) -> bool {
        matches!(
            self.run(w, 1).expect("validated automaton terminates").verdict,
            Verdict::Accept
        )
    }

    /// Complement: swap the two terminal states.
    pub fn negate(&self) -> Po2Dfa {
        let mut out = self.clone();
        for p in &mut out.polarity {
            *p = match *p {
                Polarity::Accept => Polarity::Reject,
                Polarity::Reject => Polarity::Accept,
                other => other,
            };
        }
        out
    }

    pub fn conjoin(&self, other: &Po2Dfa) -> Po2Dfa {
        combine(self, other, BoolOp::And)
    }

    pub fn disjoin(&self, other: &Po2Dfa) -> Po2Dfa {
        combine(self, other, BoolOp::Or)
    }

    /// Exhaustive bounded emptiness check in length-lexicographic order.
    /// The default bound is the state count (the small-model radius with
    /// constant 1). The budget caps the number of words tested.
    pub fn emptiness(&self, bound: Option<usize>, budget: u64) -> Result<Emptiness, BudgetExceeded> {
        let bound = bound.unwrap_or(self.state_count());
        let mut tested: u64 = 0;
        for w in enumerate_words(&self.alphabet, bound) {
            tested += 1;
            if tested > budget {
                return Err(BudgetExceeded { budget, bound });
            }
            if self.member(&w) {
                return Ok(Emptiness::NonEmpty(w));
            }
        }
        Ok(Emptiness::EmptyUpTo(bound))
    }

    /// GraphViz rendering. `L` states carry an arrow to the right, `R`
    /// states to the left; else-loops are dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        s.push_str("digraph po2dfa {\n  rankdir=LR;\n");
        for q in 0..self.state_count() {
            let deco = match self.polarity[q] {
                Polarity::L => " \\u2192",
                Polarity::R => " \\u2190",
                Polarity::Accept => " (acc)",
                Polarity::Reject => " (rej)",
            };
            let shape = if self.polarity[q] == Polarity::Accept {
                ", peripheries=2"
            } else {
                ""
            };
            s.push_str(&format!(
                "  \"{}\" [label=\"{}{}\"{}];\n",
                self.names[q], self.names[q], deco, shape
            ));
        }
        s.push_str(&format!("  __init [shape=none, label=\"\"];\n  __init -> \"{}\";\n", self.names[self.init]));
        for q in 0..self.state_count() {
            let mut grouped: BTreeMap<StateId, Vec<String>> = BTreeMap::new();
            for (&x, &tgt) in &self.delta[q] {
                grouped.entry(tgt).or_default().push(x.to_string());
            }
            for (tgt, labels) in grouped {
                s.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    self.names[q],
                    self.names[tgt],
                    labels.join(",")
                ));
            }
            if !self.polarity[q].is_terminal() {
                let elses = self.else_set(q);
                if !elses.is_empty() {
                    let labels: Vec<String> = elses.iter().map(|l| l.to_string()).collect();
                    s.push_str(&format!(
                        "  \"{}\" -> \"{}\" [style=dashed, label=\"{}\"];\n",
                        self.names[q],
                        self.names[q],
                        labels.join(",")
                    ));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_sexpr(&self) -> SExpr {
        let mut states = vec![SExpr::atom("states")];
        for q in 0..self.state_count() {
            let tag = match self.polarity[q] {
                Polarity::L => "L",
                Polarity::R => "R",
                Polarity::Accept => "acc",
                Polarity::Reject => "rej",
            };
            states.push(SExpr::list(vec![
                SExpr::atom(self.names[q].clone()),
                SExpr::atom(tag),
            ]));
        }
        let mut delta = vec![SExpr::atom("delta")];
        for q in 0..self.state_count() {
            for (&x, &tgt) in &self.delta[q] {
                delta.push(SExpr::list(vec![
                    SExpr::atom(self.names[q].clone()),
                    SExpr::atom(x.to_string()),
                    SExpr::atom(self.names[tgt].clone()),
                ]));
            }
        }
        SExpr::list(vec![
            SExpr::atom("po2dfa"),
            SExpr::list(states),
            SExpr::list(vec![SExpr::atom("init"), SExpr::atom(self.names[self.init].clone())]),
            SExpr::list(delta),
        ])
    }

    pub fn from_sexpr(body: &SExpr, alphabet: &Alphabet) -> Result<Po2Dfa, String> {
        let items = body.as_list().ok_or("po2dfa body must be a list")?;
        if items.first().and_then(SExpr::as_atom) != Some("po2dfa") {
            return Err("expected (po2dfa ...)".into());
        }
        let mut names = Vec::new();
        let mut polarity = Vec::new();
        let mut init = None;
        let mut entries: Vec<(String, ExtLetter, String)> = Vec::new();
        for section in &items[1..] {
            let sec = section.as_list().ok_or("po2dfa sections must be lists")?;
            match sec.first().and_then(SExpr::as_atom) {
                Some("states") => {
                    for st in &sec[1..] {
                        let pair = st.as_list().ok_or("state entries are (name tag)")?;
                        if pair.len() != 2 {
                            return Err(format!("bad state entry {st}"));
                        }
                        let name = pair[0].as_atom().ok_or("state name must be an atom")?;
                        if names.contains(&name.to_string()) {
                            return Err(format!("duplicate state {name}"));
                        }
                        let tag = match pair[1].as_atom() {
                            Some("L") => Polarity::L,
                            Some("R") => Polarity::R,
                            Some("acc") => Polarity::Accept,
                            Some("rej") => Polarity::Reject,
                            other => return Err(format!("bad polarity tag {other:?}")),
                        };
                        names.push(name.to_string());
                        polarity.push(tag);
                    }
                }
                Some("init") => {
                    if sec.len() != 2 {
                        return Err("init takes one state".into());
                    }
                    init = Some(sec[1].as_atom().ok_or("init state must be an atom")?.to_string());
                }
                Some("delta") => {
                    for tr in &sec[1..] {
                        let triple = tr.as_list().ok_or("delta entries are (from letter to)")?;
                        if triple.len() != 3 {
                            return Err(format!("bad delta entry {tr}"));
                        }
                        let from = triple[0].as_atom().ok_or("delta: from must be an atom")?;
                        let lab = triple[1].as_atom().ok_or("delta: letter must be an atom")?;
                        let to = triple[2].as_atom().ok_or("delta: to must be an atom")?;
                        let x = parse_ext_letter(lab, alphabet)?;
                        entries.push((from.to_string(), x, to.to_string()));
                    }
                }
                other => return Err(format!("unknown po2dfa section {other:?}")),
            }
        }
        let init = init.ok_or("missing (init ...)")?;
        let lookup = |name: &str| -> Result<StateId, String> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| format!("unknown state {name}"))
        };
        let init = lookup(&init)?;
        let mut delta = vec![BTreeMap::new(); names.len()];
        for (from, x, to) in entries {
            let from = lookup(&from)?;
            let to = lookup(&to)?;
            if delta[from].insert(x, to).is_some() {
                return Err(format!("duplicate delta entry for ({} {x})", names[from]));
            }
        }
        Ok(Po2Dfa::new(alphabet.clone(), names, polarity, init, delta))
    }
}

pub fn parse_ext_letter(tok: &str, alphabet: &Alphabet) -> Result<ExtLetter, String> {
    match tok {
        ">" => Ok(ExtLetter::Start),
        "<" => Ok(ExtLetter::End),
        _ => {
            let mut chars = tok.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    let l = Letter::new(c).map_err(|e| e.to_string())?;
                    if !alphabet.contains(l) {
                        return Err(format!("letter {l} not in alphabet"));
                    }
                    Ok(ExtLetter::Sym(l))
                }
                _ => Err(format!("letter token must be a single character, got {tok:?}")),
            }
        }
    }
}

enum BoolOp {
    And,
    Or,
}

/// Conditional composition `m1 ? continue : continue` with an explicit
/// reset (seek `>`, step right) before the second operand, so nothing is
/// assumed about where `m1`'s run ends.
fn combine(m1: &Po2Dfa, m2: &Po2Dfa, op: BoolOp) -> Po2Dfa {
    assert_eq!(m1.alphabet, m2.alphabet, "operands share an alphabet");
    let alphabet = m1.alphabet.clone();
    let mut names = vec!["t".to_string(), "r".to_string()];
    let mut polarity = vec![Polarity::Accept, Polarity::Reject];
    let mut delta: Vec<BTreeMap<ExtLetter, StateId>> = vec![BTreeMap::new(), BTreeMap::new()];
    let t = 0;
    let r = 1;

    let mut fresh = |names: &mut Vec<String>, polarity: &mut Vec<Polarity>, delta: &mut Vec<BTreeMap<ExtLetter, StateId>>, pol: Polarity| {
        let id = names.len();
        names.push(format!("q{id}"));
        polarity.push(pol);
        delta.push(BTreeMap::new());
        id
    };
    let _ = &mut fresh;

    // Copy m2, normalizing its start into a dispatch state with no else
    // transitions so it can be entered from the `>` marker.
    let m2_t = m2.accept_state().expect("m2 has an accept state");
    let m2_r = m2.reject_state().expect("m2 has a reject state");
    let mut m2_map = vec![usize::MAX; m2.state_count()];
    m2_map[m2_t] = t;
    m2_map[m2_r] = r;
    for q in 0..m2.state_count() {
        if q == m2_t || q == m2_r {
            continue;
        }
        let id = names.len();
        names.push(format!("b{q}"));
        polarity.push(m2.polarity[q]);
        delta.push(BTreeMap::new());
        m2_map[q] = id;
    }
    for q in 0..m2.state_count() {
        if q == m2_t || q == m2_r {
            continue;
        }
        for (&x, &tgt) in &m2.delta[q] {
            delta[m2_map[q]].insert(x, m2_map[tgt]);
        }
    }
    // Entry state for m2 runnable from the marker: reads the current cell
    // and mirrors the start state's behaviour (progress or else move).
    let s2_entry = if m2.polarity[m2.init].is_terminal() {
        m2_map[m2.init]
    } else {
        let needs_dispatch = !m2.else_set(m2.init).is_empty() || m2.polarity[m2.init] != Polarity::L;
        if needs_dispatch {
            let id = names.len();
            names.push("b_start".into());
            polarity.push(Polarity::L);
            delta.push(BTreeMap::new());
            for l in alphabet.iter() {
                let x = ExtLetter::Sym(l);
                let tgt = match m2.delta[m2.init].get(&x) {
                    Some(&q2) => m2_map[q2],
                    None => m2_map[m2.init],
                };
                delta[id].insert(x, tgt);
            }
            for marker in [ExtLetter::Start, ExtLetter::End] {
                let tgt = m2_map[m2.delta[m2.init][&marker]];
                delta[id].insert(marker, tgt);
            }
            id
        } else {
            m2_map[m2.init]
        }
    };

    // Reset gadget: scan left to `>`, then enter m2's dispatch (which moves
    // the head right to position 1 and takes over).
    let g2 = names.len();
    names.push("g2".into());
    polarity.push(Polarity::R);
    delta.push(BTreeMap::new());
    delta[g2].insert(ExtLetter::Start, s2_entry);
    delta[g2].insert(ExtLetter::End, r); // unreachable
    let g = names.len();
    names.push("g".into());
    polarity.push(Polarity::R);
    delta.push(BTreeMap::new());
    delta[g].insert(ExtLetter::Start, s2_entry);
    delta[g].insert(ExtLetter::End, g2);

    // Copy m1, redirecting its terminals into the continuations.
    let m1_t = m1.accept_state().expect("m1 has an accept state");
    let m1_r = m1.reject_state().expect("m1 has a reject state");
    let redirect = |x: ExtLetter, into_second: bool| -> StateId {
        if into_second {
            if x == ExtLetter::Start {
                s2_entry
            } else {
                g
            }
        } else {
            match op {
                BoolOp::And => r,
                BoolOp::Or => t,
            }
        }
    };
    // For And: accept of m1 continues into m2, reject goes to r.
    // For Or: reject of m1 continues into m2, accept goes to t.
    let mut m1_map = vec![usize::MAX; m1.state_count()];
    for q in 0..m1.state_count() {
        if q == m1_t || q == m1_r {
            continue;
        }
        let id = names.len();
        names.push(format!("a{q}"));
        polarity.push(m1.polarity[q]);
        delta.push(BTreeMap::new());
        m1_map[q] = id;
    }
    for q in 0..m1.state_count() {
        if q == m1_t || q == m1_r {
            continue;
        }
        for (&x, &tgt) in &m1.delta[q] {
            let new_tgt = if tgt == m1_t {
                match op {
                    BoolOp::And => redirect(x, true),
                    BoolOp::Or => redirect(x, false),
                }
            } else if tgt == m1_r {
                match op {
                    BoolOp::And => redirect(x, false),
                    BoolOp::Or => redirect(x, true),
                }
            } else {
                m1_map[tgt]
            };
            delta[m1_map[q]].insert(x, new_tgt);
        }
    }
    let init = if m1.init == m1_t {
        match op {
            BoolOp::And => g,
            BoolOp::Or => t,
        }
    } else if m1.init == m1_r {
        match op {
            BoolOp::And => r,
            BoolOp::Or => g,
        }
    } else {
        m1_map[m1.init]
    };
    Po2Dfa::new(alphabet, names, polarity, init, delta)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alphabet::parse_word;

    pub(crate) fn fig2() -> Po2Dfa {
        let sigma = Alphabet::from_chars("abcd").unwrap();
        let text = "(po2dfa \
            (states (s L) (A R) (B L) (t acc) (r rej)) \
            (init s) \
            (delta (s < A) (s > r) (A a B) (A > r) (A < r) (B b r) (B d t) (B < r) (B > r)))";
        let body = crate::sexpr::parse_sexpr(text).unwrap();
        Po2Dfa::from_sexpr(&body, &sigma).unwrap()
    }

    #[test]
    fn fig2_validates() {
        assert!(fig2().validate().is_empty());
    }

    #[test]
    fn invalid_automata_report_violations() {
        let m = fig2();
        // Progress self-loop.
        let mut bad = m.clone();
        bad.delta[0].insert(ExtLetter::Sym(Letter::new('a').unwrap()), 0);
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::ProgressCycle(_))));
        // Missing end-marker transition.
        let mut bad = m.clone();
        bad.delta[0].remove(&ExtLetter::End);
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::MissingEndMarker(_, ExtLetter::End))));
        // L-state as target of `<`.
        let mut bad = m;
        bad.delta[0].insert(ExtLetter::End, 2); // B is an L state
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::EndTargetPolarity { .. })));
    }

    #[test]
    fn fig2_run_trace_on_acdb() {
        let m = fig2();
        let sigma = m.alphabet.clone();
        let w = parse_word("acdb", &sigma).unwrap();
        let trace = m.run(&w, 1).unwrap();
        assert_eq!(trace.verdict, Verdict::Accept);
        // s scans right to `<`, A scans back to the last a, B scans right
        // to the d. State ids: s=0, A=1, B=2, t=3, r=4.
        let expect = vec![
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 4),
            (1, 3),
            (1, 2),
            (1, 1),
            (2, 2),
            (2, 3),
            (3, 3),
        ];
        assert_eq!(trace.steps, expect);
        assert_eq!(trace.final_pos, 3);
        // Step budget holds.
        assert!(trace.steps.len() <= m.state_count() * (w.len() + 2));
    }

    #[test]
    fn fig2_membership() {
        let m = fig2();
        let sigma = m.alphabet.clone();
        for (w, expect) in [
            ("acdb", true),
            ("ad", true),
            ("abd", false),
            ("cc", false),
            ("ada", false),
            ("", false),
        ] {
            let w = parse_word(w, &sigma).unwrap();
            assert_eq!(m.member(&w), expect, "word {w}");
        }
    }

    #[test]
    fn trace_positions_move_by_one() {
        let m = fig2();
        let w = parse_word("bacd", &m.alphabet).unwrap();
        let trace = m.run(&w, 1).unwrap();
        for pair in trace.steps.windows(2) {
            let (q1, p1) = pair[0];
            let (q2, p2) = pair[1];
            if m.polarity(q2).is_terminal() && q1 != q2 {
                assert_eq!(p1, p2);
            } else {
                assert_eq!(p1.abs_diff(p2), 1);
            }
        }
    }

    #[test]
    fn boolean_closure_on_fig2() {
        let m = fig2();
        let sigma = m.alphabet.clone();
        let neg = m.negate();
        let w = parse_word("abd", &sigma).unwrap();
        assert!(neg.member(&w));
        let both = m.conjoin(&m);
        let either = m.disjoin(&neg);
        for w in enumerate_words(&sigma, 4) {
            assert_eq!(both.member(&w), m.member(&w), "conjoin idempotent on {w}");
            assert!(either.member(&w), "excluded middle on {w}");
        }
        // Linear blow-up.
        assert!(both.state_count() <= 2 * m.state_count() + 2);
    }

    #[test]
    fn emptiness_finds_shortest_witness() {
        let m = fig2();
        match m.emptiness(None, DEFAULT_ENUM_BUDGET).unwrap() {
            Emptiness::NonEmpty(w) => assert_eq!(w.to_string(), "ad"),
            other => panic!("expected witness, got {other:?}"),
        }
        let nothing = m.conjoin(&m.negate());
        match nothing.emptiness(Some(4), DEFAULT_ENUM_BUDGET).unwrap() {
            Emptiness::EmptyUpTo(4) => {}
            other => panic!("expected empty, got {other:?}"),
        }
    }

    #[test]
    fn budget_is_enforced() {
        let m = fig2().conjoin(&fig2().negate());
        assert!(matches!(m.emptiness(Some(10), 100), Err(BudgetExceeded { .. })));
    }

    #[test]
    fn dot_output_shape() {
        let dot = fig2().to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches(" [label=").count() >= 5, true);
        assert!(dot.contains("style=dashed"));
        assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    }

    #[test]
    fn sexpr_roundtrip() {
        let m = fig2();
        let body = m.to_sexpr();
        let m2 = Po2Dfa::from_sexpr(&body, &m.alphabet).unwrap();
        assert_eq!(m2.to_sexpr().to_string(), body.to_string());
        for w in enumerate_words(&m.alphabet, 3) {
            assert_eq!(m.member(&w), m2.member(&w));
        }
    }
}
