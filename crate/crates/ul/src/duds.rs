//! Deterministic until/since logic.
//!
//! `U(A, b, f)` holds when the first strictly-future `b` satisfies `f`
//! and every letter in between lies in `A`; `S` is the past dual.
//! Formulas are hash-consed DAGs so that the automaton translation stays
//! linear in the automaton size. Language membership is anchored: a
//! formula is evaluated at position 1, at the last position, or at the
//! virtual position one past the end (where only since-formulas and
//! booleans can hold).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::po2dfa::{ExtLetter, Po2Dfa, Polarity, StateId, Violation};
use crate::sexpr::SExpr;
use crate::uitlpm::{uand, unot, uor, uor_all, CeilKind, Uitl};

pub type LetterSet = BTreeSet<Letter>;
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Top,
    Atom(Letter),
    U(LetterSet, Letter, NodeId),
    S(LetterSet, Letter, NodeId),
    Or(NodeId, NodeId),
    And(NodeId, NodeId),
    Not(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    End,
    Postend,
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anchor::Start => write!(f, "start"),
            Anchor::End => write!(f, "end"),
            Anchor::Postend => write!(f, "postend"),
        }
    }
}

/// A formula as a hash-consed node table plus the root and its anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Duds {
    nodes: Vec<Node>,
    pub root: NodeId,
    pub anchor: Anchor,
}

/// Shared-subterm builder: structurally equal nodes intern to one id.
#[derive(Default)]
pub struct Builder {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder::default()
    }

    pub fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.index.insert(n, id);
        id
    }

    pub fn top(&mut self) -> NodeId {
        self.intern(Node::Top)
    }

    pub fn bottom(&mut self) -> NodeId {
        let t = self.top();
        self.intern(Node::Not(t))
    }

    pub fn atom(&mut self, a: Letter) -> NodeId {
        self.intern(Node::Atom(a))
    }

    pub fn until(&mut self, set: LetterSet, b: Letter, f: NodeId) -> NodeId {
        self.intern(Node::U(set, b, f))
    }

    pub fn since(&mut self, set: LetterSet, b: Letter, f: NodeId) -> NodeId {
        self.intern(Node::S(set, b, f))
    }

    pub fn not(&mut self, x: NodeId) -> NodeId {
        if let Node::Not(inner) = self.nodes[x] {
            return inner;
        }
        self.intern(Node::Not(x))
    }

    pub fn or2(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let top = self.top();
        let bottom = self.bottom();
        if a == top || b == top {
            return top;
        }
        if a == bottom {
            return b;
        }
        if b == bottom {
            return a;
        }
        self.intern(Node::Or(a, b))
    }

    pub fn and2(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let top = self.top();
        let bottom = self.bottom();
        if a == bottom || b == bottom {
            return bottom;
        }
        if a == top {
            return b;
        }
        if b == top {
            return a;
        }
        self.intern(Node::And(a, b))
    }

    pub fn or_all(&mut self, items: Vec<NodeId>) -> NodeId {
        let mut acc = self.bottom();
        for item in items {
            acc = self.or2(acc, item);
        }
        acc
    }

    pub fn and_all(&mut self, items: Vec<NodeId>) -> NodeId {
        let mut acc = self.top();
        for item in items {
            acc = self.and2(acc, item);
        }
        acc
    }

    pub fn finish(self, root: NodeId, anchor: Anchor) -> Duds {
        Duds {
            nodes: self.nodes,
            root,
            anchor,
        }
    }
}

impl Duds {
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    /// DAG size: the number of interned nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Evaluation at position `i` in `1..=len+1`; atoms and until-formulas
    /// are false at the virtual position past the end.
    pub fn eval(&self, id: NodeId, w: &Word, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= w.len() + 1);
        match &self.nodes[id] {
            Node::Top => true,
            Node::Atom(a) => w.at(i) == Some(*a),
            Node::U(set, b, f) => {
                for j in i + 1..=w.len() {
                    let c = w.at(j).unwrap();
                    if c == *b {
                        return self.eval(*f, w, j);
                    }
                    if !set.contains(&c) {
                        return false;
                    }
                }
                false
            }
            Node::S(set, b, f) => {
                for j in (1..i).rev() {
                    let c = w.at(j).unwrap();
                    if c == *b {
                        return self.eval(*f, w, j);
                    }
                    if !set.contains(&c) {
                        return false;
                    }
                }
                false
            }
            Node::Or(a, b) => self.eval(*a, w, i) || self.eval(*b, w, i),
            Node::And(a, b) => self.eval(*a, w, i) && self.eval(*b, w, i),
            Node::Not(c) => !self.eval(*c, w, i),
        }
    }

    /// Language membership at the anchor position. Empty words are
    /// rejected under every anchor.
    pub fn member(&self, w: &Word) -> bool {
        if w.is_empty() {
            return false;
        }
        let i = match self.anchor {
            Anchor::Start => 1,
            Anchor::End => w.len(),
            Anchor::Postend => w.len() + 1,
        };
        self.eval(self.root, w, i)
    }

    pub fn to_sexpr(&self) -> SExpr {
        SExpr::list(vec![
            SExpr::atom("duds"),
            SExpr::list(vec![SExpr::atom("anchor"), SExpr::atom(self.anchor.to_string())]),
            self.node_to_sexpr(self.root),
        ])
    }

    fn node_to_sexpr(&self, id: NodeId) -> SExpr {
        fn set_to_sexpr(s: &LetterSet) -> SExpr {
            SExpr::list(s.iter().map(|l| SExpr::atom(l.to_string())).collect())
        }
        match &self.nodes[id] {
            Node::Top => SExpr::list(vec![SExpr::atom("top")]),
            Node::Atom(a) => SExpr::list(vec![SExpr::atom("atom"), SExpr::atom(a.to_string())]),
            Node::U(set, b, f) => SExpr::list(vec![
                SExpr::atom("u"),
                set_to_sexpr(set),
                SExpr::atom(b.to_string()),
                self.node_to_sexpr(*f),
            ]),
            Node::S(set, b, f) => SExpr::list(vec![
                SExpr::atom("s"),
                set_to_sexpr(set),
                SExpr::atom(b.to_string()),
                self.node_to_sexpr(*f),
            ]),
            Node::Or(a, b) => SExpr::list(vec![
                SExpr::atom("or"),
                self.node_to_sexpr(*a),
                self.node_to_sexpr(*b),
            ]),
            Node::And(a, b) => SExpr::list(vec![
                SExpr::atom("and"),
                self.node_to_sexpr(*a),
                self.node_to_sexpr(*b),
            ]),
            Node::Not(c) => SExpr::list(vec![SExpr::atom("not"), self.node_to_sexpr(*c)]),
        }
    }

    pub fn from_sexpr(e: &SExpr, sg: &Alphabet) -> Result<Duds, String> {
        let items = e.as_list().ok_or("duds body must be a list")?;
        if items.first().and_then(SExpr::as_atom) != Some("duds") || items.len() != 3 {
            return Err("expected (duds (anchor ...) <body>)".into());
        }
        let anchor_form = items[1].as_list().ok_or("expected (anchor ...)")?;
        if anchor_form.first().and_then(SExpr::as_atom) != Some("anchor") || anchor_form.len() != 2 {
            return Err("expected (anchor start|end|postend)".into());
        }
        let anchor = match anchor_form[1].as_atom() {
            Some("start") => Anchor::Start,
            Some("end") => Anchor::End,
            Some("postend") => Anchor::Postend,
            other => return Err(format!("bad anchor {other:?}")),
        };
        let mut b = Builder::new();
        let root = parse_node(&items[2], sg, &mut b)?;
        Ok(b.finish(root, anchor))
    }
}

fn parse_node(e: &SExpr, sg: &Alphabet, b: &mut Builder) -> Result<NodeId, String> {
    let items = e.as_list().ok_or("formula must be a list")?;
    let head = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or("formula needs a head")?;
    match head {
        "top" => Ok(b.top()),
        "atom" => {
            if items.len() != 2 {
                return Err("atom takes one letter".into());
            }
            let a = crate::tlxy::parse_letter(&items[1], sg)?;
            Ok(b.atom(a))
        }
        "u" | "s" => {
            if items.len() != 4 {
                return Err(format!("{head} takes a letter set, a letter and a subformula"));
            }
            let set_items = items[1].as_list().ok_or("letter set must be a list")?;
            let mut set = LetterSet::new();
            for item in set_items {
                set.insert(crate::tlxy::parse_letter(item, sg)?);
            }
            let letter = crate::tlxy::parse_letter(&items[2], sg)?;
            let f = parse_node(&items[3], sg, b)?;
            Ok(if head == "u" {
                b.until(set, letter, f)
            } else {
                b.since(set, letter, f)
            })
        }
        "or" | "and" => {
            if items.len() != 3 {
                return Err(format!("{head} takes two subformulas"));
            }
            let x = parse_node(&items[1], sg, b)?;
            let y = parse_node(&items[2], sg, b)?;
            Ok(if head == "or" {
                b.intern(Node::Or(x, y))
            } else {
                b.intern(Node::And(x, y))
            })
        }
        "not" => {
            if items.len() != 2 {
                return Err("not takes one subformula".into());
            }
            let x = parse_node(&items[1], sg, b)?;
            Ok(b.intern(Node::Not(x)))
        }
        other => Err(format!("unknown duds form {other}")),
    }
}

// ---------------------------------------------------------------------
// po2dfa -> duds
// ---------------------------------------------------------------------

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("automaton does not validate: {0:?}")]
    Invalid(Vec<Violation>),
    #[error(
        "end-marker bounce {from} --{marker}--> {to} re-enters the corridor: \
         the scan-back can progress inside the region the forward scan just \
         crossed, which no position-local formula can name"
    )]
    BounceNotLocal {
        from: String,
        marker: ExtLetter,
        to: String,
    },
}

struct FormCtx<'a> {
    m: &'a Po2Dfa,
    b: Builder,
    form: HashMap<StateId, NodeId>,
    top_form: HashMap<StateId, NodeId>,
}

impl<'a> FormCtx<'a> {
    fn else_letters(&self, q: StateId) -> LetterSet {
        self.m.else_set(q).into_iter().collect()
    }

    fn progress(&self, q: StateId) -> Vec<(Letter, StateId)> {
        self.m
            .progress_letters(q)
            .into_iter()
            .map(|l| (l, self.m.transitions(q)[&ExtLetter::Sym(l)]))
            .collect()
    }

    /// Acceptance from state `q` entered by a transition that read
    /// position `x`: the formula holds at `x` iff the run accepts.
    fn form(&mut self, q: StateId) -> Result<NodeId, TranslateError> {
        if let Some(&id) = self.form.get(&q) {
            return Ok(id);
        }
        let id = match self.m.polarity(q) {
            Polarity::Accept => self.b.top(),
            Polarity::Reject => self.b.bottom(),
            Polarity::L => self.form_scan(q, true)?,
            Polarity::R => self.form_scan(q, false)?,
        };
        self.form.insert(q, id);
        Ok(id)
    }

    fn form_scan(&mut self, q: StateId, rightward: bool) -> Result<NodeId, TranslateError> {
        let loop_set = self.else_letters(q);
        let progress = self.progress(q);
        let mut disjuncts = Vec::new();
        for (b_letter, target) in &progress {
            let f = self.form(*target)?;
            let node = if rightward {
                self.b.until(loop_set.clone(), *b_letter, f)
            } else {
                self.b.since(loop_set.clone(), *b_letter, f)
            };
            disjuncts.push(node);
        }
        // The scan can also sail to the end-marker: no progress letter is
        // reachable through the loop set.
        let marker = if rightward { ExtLetter::End } else { ExtLetter::Start };
        let bounce_target = self.m.transitions(q)[&marker];
        let bounce = self.bounce(q, marker, bounce_target)?;
        let bottom = self.b.bottom();
        if bounce != bottom {
            let mut fails = Vec::new();
            for (b_letter, _) in &progress {
                let mut widened = loop_set.clone();
                widened.insert(*b_letter);
                let t = self.b.top();
                let node = if rightward {
                    self.b.until(widened, *b_letter, t)
                } else {
                    self.b.since(widened, *b_letter, t)
                };
                fails.push(node);
            }
            let any_progress = self.b.or_all(fails);
            let guard = self.b.not(any_progress);
            let guarded = self.b.and2(guard, bounce);
            disjuncts.push(guarded);
        }
        Ok(self.b.or_all(disjuncts))
    }

    /// The continuation after bouncing off an end-marker, expressed at
    /// the position `x` the bouncing state was entered on. Requires that
    /// the scan-back cannot progress strictly inside the corridor the
    /// forward scan crossed.
    fn bounce(
        &mut self,
        q: StateId,
        marker: ExtLetter,
        target: StateId,
    ) -> Result<NodeId, TranslateError> {
        match self.m.polarity(target) {
            Polarity::Accept => Ok(self.b.top()),
            Polarity::Reject => Ok(self.b.bottom()),
            _ => {
                let corridor = self.else_letters(q);
                let back_progress = self.progress(target);
                if back_progress.iter().any(|(c, _)| corridor.contains(c)) {
                    return Err(TranslateError::BounceNotLocal {
                        from: self.m.name(q).to_string(),
                        marker,
                        to: self.m.name(target).to_string(),
                    });
                }
                // The scan-back crosses the corridor untouched and reads
                // position x next: either a progress letter of the target
                // fires there, or the target keeps scanning past x.
                let mut cases = Vec::new();
                let mut progress_atoms = Vec::new();
                for (c, t) in &back_progress {
                    let atom = self.b.atom(*c);
                    progress_atoms.push(atom);
                    let f = self.form(*t)?;
                    let case = self.b.and2(atom, f);
                    cases.push(case);
                }
                let continue_form = self.form(target)?;
                let any = self.b.or_all(progress_atoms);
                let none = self.b.not(any);
                let keep_going = self.b.and2(none, continue_form);
                cases.push(keep_going);
                Ok(self.b.or_all(cases))
            }
        }
    }

    /// Acceptance from state `q` about to read position 1 moving right
    /// (the situation at the start of the run and after bounces off the
    /// left end-marker).
    fn top_form(&mut self, q: StateId) -> Result<NodeId, TranslateError> {
        if let Some(&id) = self.top_form.get(&q) {
            return Ok(id);
        }
        let id = match self.m.polarity(q) {
            Polarity::Accept => self.b.top(),
            Polarity::Reject => self.b.bottom(),
            pol => {
                let loop_set = self.else_letters(q);
                let progress = self.progress(q);
                let mut disjuncts = Vec::new();
                // Progress on the very first letter.
                for (c, target) in &progress {
                    let atom = self.b.atom(*c);
                    let f = self.form(*target)?;
                    let node = self.b.and2(atom, f);
                    disjuncts.push(node);
                }
                // Otherwise the first letter loops.
                let loop_atoms: Vec<NodeId> =
                    loop_set.iter().map(|&l| self.b.atom(l)).collect();
                let first_loops = self.b.or_all(loop_atoms);
                let bottom = self.b.bottom();
                if first_loops != bottom {
                    let rest = if pol == Polarity::L {
                        // Continue scanning right from position 1.
                        let mut inner = Vec::new();
                        for (b_letter, target) in &progress {
                            let f = self.form(*target)?;
                            let node = self.b.until(loop_set.clone(), *b_letter, f);
                            inner.push(node);
                        }
                        let sail = self.sail_top(q, &loop_set, &progress)?;
                        if sail != bottom {
                            inner.push(sail);
                        }
                        self.b.or_all(inner)
                    } else {
                        // An R state moves left onto the start marker.
                        let target = self.m.transitions(q)[&ExtLetter::Start];
                        self.top_form(target)?
                    };
                    let node = self.b.and2(first_loops, rest);
                    disjuncts.push(node);
                }
                self.b.or_all(disjuncts)
            }
        };
        self.top_form.insert(q, id);
        Ok(id)
    }

    /// The whole word loops in `q`; the run bounces off the right marker
    /// and, when the scan-back is compatible, off the left marker too.
    fn sail_top(
        &mut self,
        q: StateId,
        loop_set: &LetterSet,
        progress: &[(Letter, StateId)],
    ) -> Result<NodeId, TranslateError> {
        let mut fails = Vec::new();
        for (b_letter, _) in progress {
            let mut widened = loop_set.clone();
            widened.insert(*b_letter);
            let t = self.b.top();
            let node = self.b.until(widened, *b_letter, t);
            fails.push(node);
        }
        let any_progress = self.b.or_all(fails);
        let guard = self.b.not(any_progress);
        let target = self.m.transitions(q)[&ExtLetter::End];
        let back = match self.m.polarity(target) {
            Polarity::Accept => self.b.top(),
            Polarity::Reject => self.b.bottom(),
            _ => {
                let back_progress = self.progress(target);
                if back_progress.iter().any(|(c, _)| loop_set.contains(c)) {
                    return Err(TranslateError::BounceNotLocal {
                        from: self.m.name(q).to_string(),
                        marker: ExtLetter::End,
                        to: self.m.name(target).to_string(),
                    });
                }
                // The whole word is inside the corridor, so the scan-back
                // sails to the left marker and bounces again.
                let next = self.m.transitions(target)[&ExtLetter::Start];
                self.top_form(next)?
            }
        };
        Ok(self.b.and2(guard, back))
    }
}

/// Per-state acceptance formulas folded into a single anchored formula
/// equivalent to the automaton on non-empty words.
pub fn from_po2dfa(m: &Po2Dfa) -> Result<Duds, TranslateError> {
    let violations = m.validate();
    if !violations.is_empty() {
        return Err(TranslateError::Invalid(violations));
    }
    let mut ctx = FormCtx {
        m,
        b: Builder::new(),
        form: HashMap::new(),
        top_form: HashMap::new(),
    };
    let init = m.init();
    // A left-moving run that loops on every letter reaches the right
    // marker on any input; its acceptance is a pure scan-back property,
    // evaluated at the virtual position past the end.
    let unconditional_sail = m.polarity(init) == Polarity::L && m.progress_letters(init).is_empty();
    if unconditional_sail {
        let target = m.transitions(init)[&ExtLetter::End];
        let root = match m.polarity(target) {
            Polarity::Accept => ctx.b.top(),
            Polarity::Reject => ctx.b.bottom(),
            _ => ctx.form(target)?,
        };
        return Ok(ctx.b.finish(root, Anchor::Postend));
    }
    let root = ctx.top_form(init)?;
    Ok(ctx.b.finish(root, Anchor::Start))
}

// ---------------------------------------------------------------------
// duds -> uitlpm
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Mode {
    /// Truth at the left end of the interval.
    B,
    /// Truth at the right end.
    E,
    /// Truth at the virtual position past the word's end, for formulas
    /// anchored there.
    P,
}

/// Interval-logic translation: the result holds on `[i, j]` iff the
/// formula holds at `i` (anchor start) or `j` (anchor end); the postend
/// anchor translates by scanning back from the last position inclusive.
pub fn to_uitlpm(d: &Duds, alphabet: &Alphabet) -> Uitl {
    let mode = match d.anchor {
        Anchor::Start => Mode::B,
        Anchor::End => Mode::E,
        Anchor::Postend => Mode::P,
    };
    let mut memo: HashMap<(NodeId, Mode), Uitl> = HashMap::new();
    trans(d, d.root, mode, alphabet, &mut memo)
}

fn trans(
    d: &Duds,
    id: NodeId,
    mode: Mode,
    sg: &Alphabet,
    memo: &mut HashMap<(NodeId, Mode), Uitl>,
) -> Uitl {
    if let Some(u) = memo.get(&(id, mode)) {
        return u.clone();
    }
    let out = match (d.node(id), mode) {
        (Node::Top, _) => Uitl::Top,
        (Node::Or(a, b), _) => uor(trans(d, *a, mode, sg, memo), trans(d, *b, mode, sg, memo)),
        (Node::And(a, b), _) => uand(trans(d, *a, mode, sg, memo), trans(d, *b, mode, sg, memo)),
        (Node::Not(c), _) => unot(trans(d, *c, mode, sg, memo)),
        (Node::Atom(a), Mode::B) => Uitl::Bp(Box::new(Uitl::First(
            *a,
            Box::new(Uitl::Pt),
            Box::new(Uitl::Top),
        ))),
        (Node::Atom(a), Mode::E) => Uitl::Ep(Box::new(Uitl::Last(
            *a,
            Box::new(Uitl::Top),
            Box::new(Uitl::Pt),
        ))),
        // Nothing holds at the virtual position except booleans of
        // since-formulas.
        (Node::Atom(_), Mode::P) | (Node::U(..), Mode::P) => uor_all(vec![]),
        (Node::U(set, b, f), m @ (Mode::B | Mode::E)) => {
            let tail = trans(d, *f, Mode::E, sg, memo);
            let chop = Uitl::FirstP(
                *b,
                Box::new(crate::uitlpm::ceiling(set, CeilKind::Co, sg)),
                Box::new(tail),
            );
            let body = Uitl::ExtendR(Box::new(Uitl::ShrinkL(Box::new(chop))));
            if m == Mode::B {
                Uitl::Bp(Box::new(body))
            } else {
                Uitl::Ep(Box::new(body))
            }
        }
        (Node::S(set, b, f), m) => {
            let tail = trans(d, *f, Mode::B, sg, memo);
            let chop = Uitl::LastM(
                *b,
                Box::new(crate::uitlpm::ceiling(set, CeilKind::Oc, sg)),
                Box::new(tail),
            );
            match m {
                Mode::B => {
                    Uitl::Bp(Box::new(Uitl::ExtendL(Box::new(Uitl::ShrinkR(Box::new(chop))))))
                }
                Mode::E => {
                    Uitl::Ep(Box::new(Uitl::ExtendL(Box::new(Uitl::ShrinkR(Box::new(chop))))))
                }
                // From past the end, the last position itself is the
                // first candidate of the backward scan.
                Mode::P => Uitl::Ep(Box::new(chop)),
            }
        }
    };
    memo.insert((id, mode), out.clone());
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alphabet::{enumerate_words, parse_word};
    use crate::tlxy::tests::l;

    fn sigma4() -> Alphabet {
        Alphabet::from_chars("abcd").unwrap()
    }

    /// The running language as a since/until formula anchored past the
    /// end: scan back to the last a, then forward to a d crossing no b.
    pub(crate) fn example5() -> Duds {
        let mut b = Builder::new();
        let t = b.top();
        let inner_set: LetterSet = [l('a'), l('c'), l('d')].into_iter().collect();
        let u = b.until(inner_set, l('d'), t);
        let outer_set: LetterSet = [l('a'), l('b'), l('c'), l('d')].into_iter().collect();
        let root = b.since(outer_set, l('a'), u);
        b.finish(root, Anchor::Postend)
    }

    #[test]
    fn eval_example5() {
        let sg = sigma4();
        let d = example5();
        let w = parse_word("acdb", &sg).unwrap();
        assert!(d.eval(d.root, &w, 5));
        let w = parse_word("ada", &sg).unwrap();
        assert!(!d.eval(d.root, &w, 4));
    }

    #[test]
    fn until_has_no_strict_future_at_the_end() {
        let sg = sigma4();
        let mut b = Builder::new();
        let t = b.top();
        let set: LetterSet = sg.iter().collect();
        let root = b.until(set, l('a'), t);
        let d = b.finish(root, Anchor::Start);
        for w in enumerate_words(&sg, 3).filter(|w| !w.is_empty()) {
            assert!(!d.eval(d.root, &w, w.len()), "{w}");
        }
    }

    #[test]
    fn member_anchor_examples() {
        let sg = sigma4();
        let mut b = Builder::new();
        let root = b.atom(l('a'));
        let d = b.finish(root, Anchor::Start);
        assert!(d.member(&parse_word("ab", &sg).unwrap()));
        let mut b = Builder::new();
        let root = b.atom(l('b'));
        let d = b.finish(root, Anchor::End);
        assert!(d.member(&parse_word("ab", &sg).unwrap()));
        assert!(!d.member(&Word::empty()));
    }

    #[test]
    fn example5_matches_fig2_bounded() {
        let sg = sigma4();
        let d = example5();
        let fig2 = crate::po2dfa::tests::fig2();
        for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
            assert_eq!(d.member(&w), fig2.member(&w), "{w}");
        }
    }

    #[test]
    fn from_po2dfa_fig2_is_postend_and_equivalent() {
        let fig2 = crate::po2dfa::tests::fig2();
        let d = from_po2dfa(&fig2).unwrap();
        assert_eq!(d.anchor, Anchor::Postend);
        for w in enumerate_words(&fig2.alphabet, 6).filter(|w| !w.is_empty()) {
            assert_eq!(d.member(&w), fig2.member(&w), "{w}");
        }
    }

    #[test]
    fn from_po2dfa_immediate_accept() {
        // Progress on every letter from the initial state straight to t.
        let sg = Alphabet::from_chars("ab").unwrap();
        let text = "(po2dfa (states (s L) (t acc) (r rej)) (init s) \
                    (delta (s a t) (s b t) (s < r) (s > r)))";
        let m = Po2Dfa::from_sexpr(&crate::sexpr::parse_sexpr(text).unwrap(), &sg).unwrap();
        let d = from_po2dfa(&m).unwrap();
        assert_eq!(d.anchor, Anchor::Start);
        for w in enumerate_words(&sg, 4).filter(|w| !w.is_empty()) {
            assert!(d.member(&w), "{w}");
        }
    }

    #[test]
    fn dag_is_canonical() {
        let fig2 = crate::po2dfa::tests::fig2();
        let d1 = from_po2dfa(&fig2).unwrap();
        let d2 = from_po2dfa(&fig2).unwrap();
        assert_eq!(d1, d2);
        // Sharing keeps the table linear in states times alphabet.
        assert!(d1.node_count() <= 8 * fig2.state_count() * fig2.alphabet.len());
    }

    #[test]
    fn incompatible_bounce_is_reported() {
        let sg = Alphabet::from_chars("ab").unwrap();
        // The canonical incompatible shape: q loops on both letters and
        // bounces into p, whose progress letter a lies in q's loop set.
        let text2 = "(po2dfa (states (q L) (p R) (t acc) (r rej)) (init q) \
                     (delta (q < p) (q > r) (p a t) (p > r) (p < r)))";
        let m2 = Po2Dfa::from_sexpr(&crate::sexpr::parse_sexpr(text2).unwrap(), &sg).unwrap();
        assert!(m2.validate().is_empty());
        // q loops on {a, b}; p progresses on a, which q's corridor
        // contains — but q is the initial state with a full loop set, so
        // the postend anchor applies and the translation succeeds.
        let d2 = from_po2dfa(&m2).unwrap();
        assert_eq!(d2.anchor, Anchor::Postend);
        for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
            assert_eq!(d2.member(&w), m2.member(&w), "{w}");
        }
        // Now force the same shape one level down, where no anchor can
        // absorb it: reach q from a progress step first.
        let text3 = "(po2dfa (states (s0 L) (q L) (p R) (t acc) (r rej)) (init s0) \
                     (delta (s0 b q) (s0 < r) (s0 > r) \
                            (q < p) (q > r) (p a t) (p > r) (p < r)))";
        let m3 = Po2Dfa::from_sexpr(&crate::sexpr::parse_sexpr(text3).unwrap(), &sg).unwrap();
        assert!(m3.validate().is_empty());
        match from_po2dfa(&m3) {
            Err(TranslateError::BounceNotLocal { .. }) => {}
            other => panic!("expected a bounce error, got {other:?}"),
        }
    }

    #[test]
    fn compatible_nested_bounce_translates() {
        // The bounce target's progress letters are disjoint from the
        // corridor: q loops only on a, p progresses only on b.
        let sg = Alphabet::from_chars("ab").unwrap();
        let text = "(po2dfa (states (s0 L) (q L) (p R) (t acc) (r rej)) (init s0) \
                    (delta (s0 b q) (s0 < r) (s0 > r) \
                           (q b r) (q < p) (q > r) \
                           (p b t) (p > r) (p < r)))";
        let m = Po2Dfa::from_sexpr(&crate::sexpr::parse_sexpr(text).unwrap(), &sg).unwrap();
        assert!(m.validate().is_empty());
        let d = from_po2dfa(&m).unwrap();
        for w in enumerate_words(&sg, 6).filter(|w| !w.is_empty()) {
            assert_eq!(d.member(&w), m.member(&w), "{w}");
        }
    }

    #[test]
    fn to_uitlpm_btrans_atom() {
        let sg = sigma4();
        let mut b = Builder::new();
        let root = b.atom(l('a'));
        let d = b.finish(root, Anchor::Start);
        let u = to_uitlpm(&d, &sg);
        for w in enumerate_words(&sg, 3).filter(|w| !w.is_empty()) {
            for i in w.positions() {
                for j in i..=w.len() {
                    assert_eq!(
                        crate::uitlpm::eval(&u, &w, i, j),
                        w.at(i) == Some(l('a')),
                        "{w} [{i},{j}]"
                    );
                }
            }
        }
    }

    #[test]
    fn to_uitlpm_member_agreement() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let cases: Vec<Duds> = {
            let mut out = Vec::new();
            // until at the start
            let mut b = Builder::new();
            let t = b.top();
            let set: LetterSet = [l('a')].into_iter().collect();
            let u = b.until(set, l('b'), t);
            out.push(b.finish(u, Anchor::Start));
            // nested since/until at the end
            let mut b = Builder::new();
            let t = b.top();
            let all: LetterSet = sg.iter().collect();
            let u = b.until(all.clone(), l('a'), t);
            let s = b.since(all.clone(), l('b'), u);
            out.push(b.finish(s, Anchor::End));
            // boolean top at postend
            let mut b = Builder::new();
            let t = b.top();
            let s1 = b.since(all.clone(), l('a'), t);
            let not_s1 = b.not(s1);
            let s2 = b.since([l('b')].into_iter().collect(), l('a'), t);
            let root = b.or2(not_s1, s2);
            out.push(b.finish(root, Anchor::Postend));
            out
        };
        for d in &cases {
            let u = to_uitlpm(d, &sg);
            for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
                assert_eq!(crate::uitlpm::member(&u, &w), d.member(&w), "{d:?} on {w}");
            }
        }
        // Top translates to top.
        let mut b = Builder::new();
        let t = b.top();
        let d = b.finish(t, Anchor::Start);
        assert_eq!(to_uitlpm(&d, &sg), Uitl::Top);
    }

    #[test]
    fn example5_to_uitlpm_keeps_the_language() {
        let sg = sigma4();
        let d = example5();
        let u = to_uitlpm(&d, &sg);
        for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
            assert_eq!(crate::uitlpm::member(&u, &w), d.member(&w), "{w}");
        }
    }

    #[test]
    fn sexpr_roundtrip() {
        let sg = sigma4();
        let d = example5();
        let text = d.to_sexpr().to_string();
        let parsed = Duds::from_sexpr(&crate::sexpr::parse_sexpr(&text).unwrap(), &sg).unwrap();
        assert_eq!(parsed.anchor, d.anchor);
        for w in enumerate_words(&sg, 4).filter(|w| !w.is_empty()) {
            assert_eq!(parsed.member(&w), d.member(&w));
        }
    }
}
