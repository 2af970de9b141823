//! The deterministic temporal logic of rankers: next-`a`/previous-`a`
//! modalities (strict, weak and unit-step), the start/end jumps, and
//! boolean operators.
//!
//! Everything downstream leans on three properties implemented here:
//! unique parsing ([`pos`]), ranker directionality ([`directionality`]),
//! and the POS/EVAL expression construction that compiles a formula to a
//! po2dfa with polynomially many states ([`to_po2dfa`]).

use thiserror::Error;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::ete::{seq, sigma_ext, sigma_only, Ete, ExtSet};
use crate::po2dfa::{BudgetExceeded, Emptiness, ExtLetter, Po2Dfa};
use crate::sexpr::SExpr;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tlxy {
    Top,
    Atom(Letter),
    Sp(Box<Tlxy>),
    Ep(Box<Tlxy>),
    X(Letter, Box<Tlxy>),
    Y(Letter, Box<Tlxy>),
    Wx(Letter, Box<Tlxy>),
    Wy(Letter, Box<Tlxy>),
    X1(Box<Tlxy>),
    Y1(Box<Tlxy>),
    Or(Box<Tlxy>, Box<Tlxy>),
    And(Box<Tlxy>, Box<Tlxy>),
    Not(Box<Tlxy>),
}

pub fn top() -> Tlxy {
    Tlxy::Top
}

pub fn bottom() -> Tlxy {
    Tlxy::Not(Box::new(Tlxy::Top))
}

pub fn or_(a: Tlxy, b: Tlxy) -> Tlxy {
    Tlxy::Or(Box::new(a), Box::new(b))
}

pub fn and_(a: Tlxy, b: Tlxy) -> Tlxy {
    Tlxy::And(Box::new(a), Box::new(b))
}

pub fn not_(a: Tlxy) -> Tlxy {
    Tlxy::Not(Box::new(a))
}

pub fn or_all(mut items: Vec<Tlxy>) -> Tlxy {
    match items.len() {
        0 => bottom(),
        1 => items.pop().unwrap(),
        _ => {
            let mut acc = items.remove(0);
            for item in items {
                acc = or_(acc, item);
            }
            acc
        }
    }
}

pub fn and_all(mut items: Vec<Tlxy>) -> Tlxy {
    match items.len() {
        0 => top(),
        1 => items.pop().unwrap(),
        _ => {
            let mut acc = items.remove(0);
            for item in items {
                acc = and_(acc, item);
            }
            acc
        }
    }
}

/// `Atfirst`: true exactly at the first position of any word.
pub fn atfirst(alphabet: &Alphabet) -> Tlxy {
    not_(or_all(
        alphabet.iter().map(|a| Tlxy::Y(a, Box::new(top()))).collect(),
    ))
}

/// `Atlast`: true exactly at the last position.
pub fn atlast(alphabet: &Alphabet) -> Tlxy {
    not_(or_all(
        alphabet.iter().map(|a| Tlxy::X(a, Box::new(top()))).collect(),
    ))
}

/// Derived atom: no `a` strictly in the future.
pub fn gbar(a: Letter) -> Tlxy {
    not_(Tlxy::X(a, Box::new(top())))
}

/// Derived atom: no `a` strictly in the past.
pub fn hbar(a: Letter) -> Tlxy {
    not_(Tlxy::Y(a, Box::new(top())))
}

pub fn size(f: &Tlxy) -> usize {
    match f {
        Tlxy::Top | Tlxy::Atom(_) => 1,
        Tlxy::Sp(c) | Tlxy::Ep(c) | Tlxy::X(_, c) | Tlxy::Y(_, c) | Tlxy::Wx(_, c)
        | Tlxy::Wy(_, c) | Tlxy::X1(c) | Tlxy::Y1(c) | Tlxy::Not(c) => 1 + size(c),
        Tlxy::Or(a, b) | Tlxy::And(a, b) => 1 + size(a) + size(b),
    }
}

pub fn has_weak_or_unit(f: &Tlxy) -> bool {
    match f {
        Tlxy::Wx(_, c) | Tlxy::Wy(_, c) | Tlxy::X1(c) | Tlxy::Y1(c) => {
            let _ = c;
            true
        }
        Tlxy::Top | Tlxy::Atom(_) => false,
        Tlxy::Sp(c) | Tlxy::Ep(c) | Tlxy::X(_, c) | Tlxy::Y(_, c) | Tlxy::Not(c) => {
            has_weak_or_unit(c)
        }
        Tlxy::Or(a, b) | Tlxy::And(a, b) => has_weak_or_unit(a) || has_weak_or_unit(b),
    }
}

fn first_after(w: &Word, i: usize, a: Letter) -> Option<usize> {
    (i + 1..=w.len()).find(|&j| w.at(j) == Some(a))
}

fn last_before(w: &Word, i: usize, a: Letter) -> Option<usize> {
    (1..i).rev().find(|&j| w.at(j) == Some(a))
}

/// Direct semantics. Requires a non-empty word and `1 <= i <= len`.
pub fn eval(f: &Tlxy, w: &Word, i: usize) -> bool {
    debug_assert!(!w.is_empty() && i >= 1 && i <= w.len());
    match f {
        Tlxy::Top => true,
        Tlxy::Atom(a) => w.at(i) == Some(*a),
        Tlxy::Sp(c) => eval(c, w, 1),
        Tlxy::Ep(c) => eval(c, w, w.len()),
        Tlxy::X(a, c) => first_after(w, i, *a).is_some_and(|j| eval(c, w, j)),
        Tlxy::Y(a, c) => last_before(w, i, *a).is_some_and(|j| eval(c, w, j)),
        Tlxy::Wx(a, c) => {
            let j = if w.at(i) == Some(*a) { Some(i) } else { first_after(w, i, *a) };
            j.is_some_and(|j| eval(c, w, j))
        }
        Tlxy::Wy(a, c) => {
            let j = if w.at(i) == Some(*a) { Some(i) } else { last_before(w, i, *a) };
            j.is_some_and(|j| eval(c, w, j))
        }
        Tlxy::X1(c) => i < w.len() && eval(c, w, i + 1),
        Tlxy::Y1(c) => i > 1 && eval(c, w, i - 1),
        Tlxy::Or(a, b) => eval(a, w, i) || eval(b, w, i),
        Tlxy::And(a, b) => eval(a, w, i) && eval(b, w, i),
        Tlxy::Not(c) => !eval(c, w, i),
    }
}

/// Language membership: truth at position 1; the empty word belongs to no
/// language of this logic.
pub fn member(f: &Tlxy, w: &Word) -> bool {
    !w.is_empty() && eval(f, w, 1)
}

pub fn child(f: &Tlxy, idx: usize) -> Option<&Tlxy> {
    match (f, idx) {
        (Tlxy::Sp(c), 0)
        | (Tlxy::Ep(c), 0)
        | (Tlxy::X(_, c), 0)
        | (Tlxy::Y(_, c), 0)
        | (Tlxy::Wx(_, c), 0)
        | (Tlxy::Wy(_, c), 0)
        | (Tlxy::X1(c), 0)
        | (Tlxy::Y1(c), 0)
        | (Tlxy::Not(c), 0) => Some(c),
        (Tlxy::Or(a, _), 0) | (Tlxy::And(a, _), 0) => Some(a),
        (Tlxy::Or(_, b), 1) | (Tlxy::And(_, b), 1) => Some(b),
        _ => None,
    }
}

pub fn node_at<'a>(root: &'a Tlxy, path: &[usize]) -> Option<&'a Tlxy> {
    let mut cur = root;
    for &i in path {
        cur = child(cur, i)?;
    }
    Some(cur)
}

/// `Pos_w` of the node reached by `path`, by the unique-parsing induction.
/// The root sits at position 1; an undefined landing is `None` and
/// propagates downward.
pub fn pos(root: &Tlxy, path: &[usize], w: &Word) -> Option<usize> {
    debug_assert!(!w.is_empty());
    let mut cur = root;
    let mut p = Some(1usize);
    for &idx in path {
        p = match (cur, p) {
            (_, None) => None,
            (Tlxy::Sp(_), Some(_)) => Some(1),
            (Tlxy::Ep(_), Some(_)) => Some(w.len()),
            (Tlxy::X(a, _), Some(i)) => first_after(w, i, *a),
            (Tlxy::Y(a, _), Some(i)) => last_before(w, i, *a),
            (Tlxy::Wx(a, _), Some(i)) => {
                if w.at(i) == Some(*a) {
                    Some(i)
                } else {
                    first_after(w, i, *a)
                }
            }
            (Tlxy::Wy(a, _), Some(i)) => {
                if w.at(i) == Some(*a) {
                    Some(i)
                } else {
                    last_before(w, i, *a)
                }
            }
            (Tlxy::X1(_), Some(i)) => {
                if i < w.len() {
                    Some(i + 1)
                } else {
                    None
                }
            }
            (Tlxy::Y1(_), Some(i)) => {
                if i > 1 {
                    Some(i - 1)
                } else {
                    None
                }
            }
            (Tlxy::Or(..), p) | (Tlxy::And(..), p) | (Tlxy::Not(_), p) => p,
            (Tlxy::Top, _) | (Tlxy::Atom(_), _) => None, // leaves have no children
        };
        cur = child(cur, idx).expect("path is valid in the tree");
    }
    p
}

// ---------------------------------------------------------------------
// Ranker formulas
// ---------------------------------------------------------------------

/// One navigation step of a ranker formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RStep {
    Sp,
    Ep,
    X(Letter),
    Y(Letter),
    Wx(Letter),
    Wy(Letter),
    X1,
    Y1,
}

/// A boolean-free navigation formula: a path of steps over a `true` leaf.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ranker(pub Vec<RStep>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankerError {
    #[error("formula is not a ranker: {0}")]
    NotARanker(String),
    #[error("ranker does not begin with sp or ep")]
    Unanchored,
}

impl Ranker {
    pub fn new(steps: Vec<RStep>) -> Ranker {
        Ranker(steps)
    }

    pub fn is_anchored(&self) -> bool {
        matches!(self.0.first(), Some(RStep::Sp) | Some(RStep::Ep))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, step: RStep) -> Ranker {
        let mut steps = self.0.clone();
        steps.push(step);
        Ranker(steps)
    }

    /// Sequential composition of two rankers is again a ranker.
    pub fn compose(&self, other: &Ranker) -> Ranker {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        Ranker(steps)
    }

    /// Replace the leaf by `f`.
    pub fn compose_formula(&self, f: Tlxy) -> Tlxy {
        let mut out = f;
        for step in self.0.iter().rev() {
            out = match *step {
                RStep::Sp => Tlxy::Sp(Box::new(out)),
                RStep::Ep => Tlxy::Ep(Box::new(out)),
                RStep::X(a) => Tlxy::X(a, Box::new(out)),
                RStep::Y(a) => Tlxy::Y(a, Box::new(out)),
                RStep::Wx(a) => Tlxy::Wx(a, Box::new(out)),
                RStep::Wy(a) => Tlxy::Wy(a, Box::new(out)),
                RStep::X1 => Tlxy::X1(Box::new(out)),
                RStep::Y1 => Tlxy::Y1(Box::new(out)),
            };
        }
        out
    }

    pub fn to_formula(&self) -> Tlxy {
        self.compose_formula(top())
    }

    pub fn try_from_formula(f: &Tlxy) -> Result<Ranker, RankerError> {
        let mut steps = Vec::new();
        let mut cur = f;
        loop {
            match cur {
                Tlxy::Top => return Ok(Ranker(steps)),
                Tlxy::Sp(c) => {
                    steps.push(RStep::Sp);
                    cur = c;
                }
                Tlxy::Ep(c) => {
                    steps.push(RStep::Ep);
                    cur = c;
                }
                Tlxy::X(a, c) => {
                    steps.push(RStep::X(*a));
                    cur = c;
                }
                Tlxy::Y(a, c) => {
                    steps.push(RStep::Y(*a));
                    cur = c;
                }
                Tlxy::Wx(a, c) => {
                    steps.push(RStep::Wx(*a));
                    cur = c;
                }
                Tlxy::Wy(a, c) => {
                    steps.push(RStep::Wy(*a));
                    cur = c;
                }
                Tlxy::X1(c) => {
                    steps.push(RStep::X1);
                    cur = c;
                }
                Tlxy::Y1(c) => {
                    steps.push(RStep::Y1);
                    cur = c;
                }
                other => return Err(RankerError::NotARanker(format!("{other:?}"))),
            }
        }
    }

    /// The landing position of the leaf, `Pos_w` applied along the path.
    pub fn lpos(&self, w: &Word) -> Option<usize> {
        debug_assert!(!w.is_empty());
        let mut p = 1usize;
        for step in &self.0 {
            p = match *step {
                RStep::Sp => 1,
                RStep::Ep => w.len(),
                RStep::X(a) => first_after(w, p, a)?,
                RStep::Y(a) => last_before(w, p, a)?,
                RStep::Wx(a) => {
                    if w.at(p) == Some(a) {
                        p
                    } else {
                        first_after(w, p, a)?
                    }
                }
                RStep::Wy(a) => {
                    if w.at(p) == Some(a) {
                        p
                    } else {
                        last_before(w, p, a)?
                    }
                }
                RStep::X1 => {
                    if p < w.len() {
                        p + 1
                    } else {
                        return None;
                    }
                }
                RStep::Y1 => {
                    if p > 1 {
                        p - 1
                    } else {
                        return None;
                    }
                }
            };
        }
        Some(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn holds(self, i: usize, l: usize) -> bool {
        match self {
            Rel::Lt => i < l,
            Rel::Le => i <= l,
            Rel::Gt => i > l,
            Rel::Ge => i >= l,
        }
    }
}

/// Ranker directionality: a formula true exactly at the positions in the
/// given relation to the ranker's landing, whenever the landing exists.
pub fn directionality(r: &Ranker, rel: Rel, alphabet: &Alphabet) -> Result<Tlxy, RankerError> {
    if !r.is_anchored() {
        return Err(RankerError::Unanchored);
    }
    Ok(p_rel(&r.0, rel, alphabet))
}

fn p_rel(steps: &[RStep], rel: Rel, sg: &Alphabet) -> Tlxy {
    let last = *steps.last().expect("anchored rankers are non-empty");
    let prefix = &steps[..steps.len() - 1];
    match last {
        RStep::Sp => match rel {
            Rel::Lt => bottom(),
            Rel::Le => atfirst(sg),
            Rel::Gt => not_(atfirst(sg)),
            Rel::Ge => top(),
        },
        RStep::Ep => match rel {
            Rel::Lt => not_(atlast(sg)),
            Rel::Le => top(),
            Rel::Gt => bottom(),
            Rel::Ge => atlast(sg),
        },
        RStep::Wx(a) => match rel {
            Rel::Lt => Tlxy::X(a, Box::new(p_rel(steps, Rel::Le, sg))),
            Rel::Le => or_(hbar(a), Tlxy::Y(a, Box::new(p_rel(prefix, Rel::Lt, sg)))),
            Rel::Gt => Tlxy::Y(a, Box::new(p_rel(prefix, Rel::Ge, sg))),
            Rel::Ge => or_(gbar(a), Tlxy::X(a, Box::new(p_rel(steps, Rel::Gt, sg)))),
        },
        RStep::X(a) => match rel {
            Rel::Lt => Tlxy::X(a, Box::new(p_rel(steps, Rel::Le, sg))),
            Rel::Le => or_(hbar(a), Tlxy::Y(a, Box::new(p_rel(prefix, Rel::Le, sg)))),
            Rel::Gt => Tlxy::Y(a, Box::new(p_rel(prefix, Rel::Gt, sg))),
            Rel::Ge => or_(gbar(a), Tlxy::X(a, Box::new(p_rel(steps, Rel::Gt, sg)))),
        },
        RStep::Wy(a) => match rel {
            Rel::Lt => Tlxy::X(a, Box::new(p_rel(prefix, Rel::Le, sg))),
            Rel::Le => or_(hbar(a), Tlxy::Y(a, Box::new(p_rel(steps, Rel::Lt, sg)))),
            Rel::Gt => Tlxy::Y(a, Box::new(p_rel(steps, Rel::Ge, sg))),
            Rel::Ge => or_(gbar(a), Tlxy::X(a, Box::new(p_rel(prefix, Rel::Gt, sg)))),
        },
        RStep::Y(a) => match rel {
            Rel::Lt => Tlxy::X(a, Box::new(p_rel(prefix, Rel::Lt, sg))),
            Rel::Le => or_(hbar(a), Tlxy::Y(a, Box::new(p_rel(steps, Rel::Lt, sg)))),
            Rel::Gt => Tlxy::Y(a, Box::new(p_rel(steps, Rel::Ge, sg))),
            Rel::Ge => or_(gbar(a), Tlxy::X(a, Box::new(p_rel(prefix, Rel::Ge, sg)))),
        },
        RStep::X1 => match rel {
            Rel::Lt => p_rel(prefix, Rel::Le, sg),
            Rel::Le => or_(atfirst(sg), Tlxy::Y1(Box::new(p_rel(prefix, Rel::Le, sg)))),
            Rel::Gt => Tlxy::Y1(Box::new(p_rel(prefix, Rel::Gt, sg))),
            Rel::Ge => p_rel(prefix, Rel::Gt, sg),
        },
        RStep::Y1 => match rel {
            Rel::Lt => Tlxy::X1(Box::new(p_rel(prefix, Rel::Lt, sg))),
            Rel::Le => p_rel(prefix, Rel::Lt, sg),
            Rel::Gt => p_rel(prefix, Rel::Ge, sg),
            Rel::Ge => or_(atlast(sg), Tlxy::X1(Box::new(p_rel(prefix, Rel::Ge, sg)))),
        },
    }
}

/// True exactly at `lpos + 1` (false everywhere when the landing or the
/// successor does not exist).
pub fn next_of(r: &Ranker, alphabet: &Alphabet) -> Result<Tlxy, RankerError> {
    let gt = directionality(r, Rel::Gt, alphabet)?;
    let no_later = not_(or_all(
        alphabet
            .iter()
            .map(|b| Tlxy::Y(b, Box::new(gt.clone())))
            .collect(),
    ));
    Ok(and_(gt, no_later))
}

/// True exactly at `lpos - 1`.
pub fn prev_of(r: &Ranker, alphabet: &Alphabet) -> Result<Tlxy, RankerError> {
    let lt = directionality(r, Rel::Lt, alphabet)?;
    let no_earlier = not_(or_all(
        alphabet
            .iter()
            .map(|b| Tlxy::X(b, Box::new(lt.clone())))
            .collect(),
    ));
    Ok(and_(lt, no_earlier))
}

/// Sequential composition per the ranker definition: graft `f` onto the
/// leaf of `r`.
pub fn seq_compose(r: &Ranker, f: &Tlxy) -> Tlxy {
    r.compose_formula(f.clone())
}

// ---------------------------------------------------------------------
// Boolean pull-out
// ---------------------------------------------------------------------

/// Boolean combination with ranker or atom leaves; atoms stand for the
/// letter at position 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolCombo {
    Const(bool),
    Atom(Letter),
    Ranker(Ranker),
    Not(Box<BoolCombo>),
    Or(Box<BoolCombo>, Box<BoolCombo>),
    And(Box<BoolCombo>, Box<BoolCombo>),
}

impl BoolCombo {
    pub fn to_formula(&self) -> Tlxy {
        match self {
            BoolCombo::Const(true) => top(),
            BoolCombo::Const(false) => bottom(),
            BoolCombo::Atom(a) => Tlxy::Atom(*a),
            BoolCombo::Ranker(r) => r.to_formula(),
            BoolCombo::Not(c) => not_(c.to_formula()),
            BoolCombo::Or(a, b) => or_(a.to_formula(), b.to_formula()),
            BoolCombo::And(a, b) => and_(a.to_formula(), b.to_formula()),
        }
    }

    pub fn leaves(&self) -> Vec<&BoolCombo> {
        match self {
            BoolCombo::Const(_) | BoolCombo::Atom(_) | BoolCombo::Ranker(_) => vec![self],
            BoolCombo::Not(c) => c.leaves(),
            BoolCombo::Or(a, b) | BoolCombo::And(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }
}

/// Rewrites a formula into a boolean combination of anchored rankers and
/// atoms, language-equivalent to the input at position 1.
pub fn pull_booleans(f: &Tlxy, alphabet: &Alphabet) -> BoolCombo {
    let prefix = match f {
        Tlxy::Sp(_) | Tlxy::Ep(_) => Ranker::default(),
        _ => Ranker(vec![RStep::Sp]),
    };
    pull(&prefix, f, alphabet)
}

fn pull(prefix: &Ranker, f: &Tlxy, sg: &Alphabet) -> BoolCombo {
    match f {
        Tlxy::Top => {
            if prefix.is_empty() {
                BoolCombo::Const(true)
            } else {
                BoolCombo::Ranker(prefix.clone())
            }
        }
        Tlxy::Atom(a) => pull_atom(prefix, *a, sg),
        Tlxy::Or(x, y) => BoolCombo::Or(
            Box::new(pull(prefix, x, sg)),
            Box::new(pull(prefix, y, sg)),
        ),
        Tlxy::And(x, y) => BoolCombo::And(
            Box::new(pull(prefix, x, sg)),
            Box::new(pull(prefix, y, sg)),
        ),
        Tlxy::Not(x) => {
            let inner = BoolCombo::Not(Box::new(pull(prefix, x, sg)));
            if prefix.is_empty() || prefix.0 == [RStep::Sp] {
                // Position 1 always exists; no landing condition needed.
                inner
            } else {
                BoolCombo::And(Box::new(inner), Box::new(BoolCombo::Ranker(prefix.clone())))
            }
        }
        Tlxy::Sp(c) => pull(&prefix.push(RStep::Sp), c, sg),
        Tlxy::Ep(c) => pull(&prefix.push(RStep::Ep), c, sg),
        Tlxy::X(a, c) => pull(&prefix.push(RStep::X(*a)), c, sg),
        Tlxy::Y(a, c) => pull(&prefix.push(RStep::Y(*a)), c, sg),
        Tlxy::Wx(a, c) => pull(&prefix.push(RStep::Wx(*a)), c, sg),
        Tlxy::Wy(a, c) => pull(&prefix.push(RStep::Wy(*a)), c, sg),
        Tlxy::X1(c) => pull(&prefix.push(RStep::X1), c, sg),
        Tlxy::Y1(c) => pull(&prefix.push(RStep::Y1), c, sg),
    }
}

fn pull_atom(prefix: &Ranker, a: Letter, sg: &Alphabet) -> BoolCombo {
    match prefix.0.last() {
        // At position 1 the atom is a legitimate leaf.
        None | Some(RStep::Sp) => BoolCombo::Atom(a),
        Some(RStep::X(b)) | Some(RStep::Wx(b)) | Some(RStep::Y(b)) | Some(RStep::Wy(b)) => {
            if *b == a {
                BoolCombo::Ranker(prefix.clone())
            } else {
                BoolCombo::Const(false)
            }
        }
        Some(RStep::Ep) => {
            // Letter at the last position: either the word has a single
            // position (atom at 1), or stepping back once and taking the
            // strict next `a` lands at the end again.
            let single = BoolCombo::And(
                Box::new(pull(prefix, &atfirst(sg), sg)),
                Box::new(BoolCombo::Atom(a)),
            );
            let shifted = prefix.push(RStep::Y1).push(RStep::X(a));
            let back_at_end = pull(&shifted, &atlast(sg), sg);
            BoolCombo::Or(Box::new(single), Box::new(back_at_end))
        }
        Some(RStep::X1) => {
            let parent = Ranker(prefix.0[..prefix.len() - 1].to_vec());
            let next = next_of(&parent, sg).expect("prefixes are anchored");
            pull(&parent.push(RStep::X(a)), &next, sg)
        }
        Some(RStep::Y1) => {
            let parent = Ranker(prefix.0[..prefix.len() - 1].to_vec());
            let prev = prev_of(&parent, sg).expect("prefixes are anchored");
            pull(&parent.push(RStep::Y(a)), &prev, sg)
        }
    }
}

// ---------------------------------------------------------------------
// Weak / unit elimination
// ---------------------------------------------------------------------

/// Language-equivalent formula using only strict modalities, the anchors
/// and booleans. A formula already free of weak and unit modalities is
/// returned unchanged.
pub fn eliminate_weak_unit(f: &Tlxy, alphabet: &Alphabet) -> Tlxy {
    if !has_weak_or_unit(f) {
        return f.clone();
    }
    let mut combo = pull_booleans(f, alphabet);
    loop {
        let (next, changed) = expand_one(combo, alphabet);
        combo = next;
        if !changed {
            break;
        }
    }
    combo.to_formula()
}

fn expand_one(combo: BoolCombo, sg: &Alphabet) -> (BoolCombo, bool) {
    match combo {
        BoolCombo::Ranker(r) => match fix_ranker(&r, sg) {
            Some(replacement) => (replacement, true),
            None => (BoolCombo::Ranker(r), false),
        },
        BoolCombo::Not(c) => {
            let (c, ch) = expand_one(*c, sg);
            (BoolCombo::Not(Box::new(c)), ch)
        }
        BoolCombo::Or(a, b) => {
            let (a, ca) = expand_one(*a, sg);
            let (b, cb) = expand_one(*b, sg);
            (BoolCombo::Or(Box::new(a), Box::new(b)), ca || cb)
        }
        BoolCombo::And(a, b) => {
            let (a, ca) = expand_one(*a, sg);
            let (b, cb) = expand_one(*b, sg);
            (BoolCombo::And(Box::new(a), Box::new(b)), ca || cb)
        }
        leaf => (leaf, false),
    }
}

/// Rewrites the leftmost weak or unit step of a ranker leaf, if any.
fn fix_ranker(r: &Ranker, sg: &Alphabet) -> Option<BoolCombo> {
    let k = r
        .0
        .iter()
        .position(|s| matches!(s, RStep::Wx(_) | RStep::Wy(_) | RStep::X1 | RStep::Y1))?;
    let parent = Ranker(r.0[..k].to_vec());
    let rest = Ranker(r.0[k + 1..].to_vec());
    let rest_f = rest.to_formula();
    let replacement = match r.0[k] {
        RStep::X1 => {
            let next = next_of(&parent, sg).expect("prefix is anchored");
            or_all(
                sg.iter()
                    .map(|a| Tlxy::X(a, Box::new(and_(next.clone(), rest_f.clone()))))
                    .collect(),
            )
        }
        RStep::Y1 => {
            let prev = prev_of(&parent, sg).expect("prefix is anchored");
            or_all(
                sg.iter()
                    .map(|a| Tlxy::Y(a, Box::new(and_(prev.clone(), rest_f.clone()))))
                    .collect(),
            )
        }
        RStep::Wx(a) => or_(
            and_(Tlxy::Atom(a), rest_f.clone()),
            and_(not_(Tlxy::Atom(a)), Tlxy::X(a, Box::new(rest_f))),
        ),
        RStep::Wy(a) => or_(
            and_(Tlxy::Atom(a), rest_f.clone()),
            and_(not_(Tlxy::Atom(a)), Tlxy::Y(a, Box::new(rest_f))),
        ),
        _ => unreachable!(),
    };
    Some(pull(&parent, &replacement, sg))
}

// ---------------------------------------------------------------------
// Compilation to po2dfa via POS / EVAL expressions
// ---------------------------------------------------------------------

fn start_marker_set() -> ExtSet {
    [ExtLetter::Start].into_iter().collect()
}

fn end_marker_set() -> ExtSet {
    [ExtLetter::End].into_iter().collect()
}

fn seek_first(sg: &Alphabet) -> Ete {
    seq(
        Ete::BScan(sigma_ext(sg), start_marker_set()),
        Ete::FUnit(start_marker_set()),
    )
}

fn seek_last(sg: &Alphabet) -> Ete {
    seq(
        Ete::FScan(sigma_ext(sg), end_marker_set()),
        Ete::BUnit(end_marker_set()),
    )
}

fn letter_set(a: Letter) -> ExtSet {
    [ExtLetter::Sym(a)].into_iter().collect()
}

/// The navigation expression for one modal step, run from the parent's
/// position.
fn step_ete(f: &Tlxy, sg: &Alphabet) -> Option<Ete> {
    Some(match f {
        Tlxy::Sp(_) => seek_first(sg),
        Tlxy::Ep(_) => seek_last(sg),
        Tlxy::X(a, _) => Ete::FScan(sigma_ext(sg), letter_set(*a)),
        Tlxy::Y(a, _) => Ete::BScan(sigma_ext(sg), letter_set(*a)),
        Tlxy::Wx(a, _) => seq(
            Ete::BUnit(sigma_ext(sg)),
            Ete::FScan(sigma_ext(sg), letter_set(*a)),
        ),
        Tlxy::Wy(a, _) => seq(
            Ete::FUnit(sigma_ext(sg)),
            Ete::BScan(sigma_ext(sg), letter_set(*a)),
        ),
        Tlxy::X1(_) => Ete::Cond(
            Box::new(seq(Ete::FUnit(sigma_only(sg)), Ete::BUnit(end_marker_set()))),
            Box::new(Ete::Rej),
            Box::new(Ete::Acc),
        ),
        Tlxy::Y1(_) => Ete::Cond(
            Box::new(seq(Ete::BUnit(sigma_only(sg)), Ete::FUnit(start_marker_set()))),
            Box::new(Ete::Rej),
            Box::new(Ete::Acc),
        ),
        _ => return None,
    })
}

/// POS: an expression that, run from anywhere, accepts exactly at the
/// unique evaluation position of the node at `path`, and rejects when
/// that position is undefined.
pub fn pos_ete(root: &Tlxy, path: &[usize], sg: &Alphabet) -> Ete {
    let mut e = seek_first(sg);
    let mut cur = root;
    for &idx in path {
        if let Some(step) = step_ete(cur, sg) {
            e = seq(e, step);
        }
        cur = child(cur, idx).expect("path is valid in the tree");
    }
    e
}

/// EVAL: accepts from anywhere iff the node's position is defined and the
/// subformula holds there.
pub fn eval_ete_formula(root: &Tlxy, path: &[usize], sg: &Alphabet) -> Ete {
    let node = node_at(root, path).expect("path is valid in the tree");
    match node {
        Tlxy::Top => seq(pos_ete(root, path, sg), Ete::Acc),
        Tlxy::Atom(a) => seq(pos_ete(root, path, sg), Ete::FUnit(letter_set(*a))),
        Tlxy::Not(_) => {
            let mut p = path.to_vec();
            p.push(0);
            // Guard with POS: a negation at an undefined position is
            // false, not true.
            seq(
                pos_ete(root, path, sg),
                Ete::Cond(
                    Box::new(eval_ete_formula(root, &p, sg)),
                    Box::new(Ete::Rej),
                    Box::new(Ete::Acc),
                ),
            )
        }
        Tlxy::Or(..) => {
            let mut p0 = path.to_vec();
            p0.push(0);
            let mut p1 = path.to_vec();
            p1.push(1);
            Ete::Cond(
                Box::new(eval_ete_formula(root, &p0, sg)),
                Box::new(Ete::Acc),
                Box::new(eval_ete_formula(root, &p1, sg)),
            )
        }
        Tlxy::And(..) => {
            let mut p0 = path.to_vec();
            p0.push(0);
            let mut p1 = path.to_vec();
            p1.push(1);
            Ete::Cond(
                Box::new(eval_ete_formula(root, &p0, sg)),
                Box::new(eval_ete_formula(root, &p1, sg)),
                Box::new(Ete::Rej),
            )
        }
        _ => {
            let mut p = path.to_vec();
            p.push(0);
            eval_ete_formula(root, &p, sg)
        }
    }
}

/// Language-equivalent po2dfa. A leading guard rejects the empty word,
/// matching the `Sigma^+` semantics of the logic.
pub fn to_po2dfa(f: &Tlxy, sg: &Alphabet) -> Po2Dfa {
    let body = eval_ete_formula(f, &[], sg);
    let guarded = Ete::Cond(
        Box::new(Ete::FUnit(sigma_only(sg))),
        Box::new(body),
        Box::new(Ete::Rej),
    );
    crate::ete::compile_ete(&guarded, sg)
}

/// Satisfiability through compilation and bounded emptiness.
pub fn sat(
    f: &Tlxy,
    sg: &Alphabet,
    bound: Option<usize>,
    budget: u64,
) -> Result<Emptiness, BudgetExceeded> {
    to_po2dfa(f, sg).emptiness(bound, budget)
}

// ---------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------

pub fn to_sexpr(f: &Tlxy) -> SExpr {
    fn a(s: &str) -> SExpr {
        SExpr::atom(s)
    }
    fn letter(l: &Letter) -> SExpr {
        SExpr::atom(l.to_string())
    }
    match f {
        Tlxy::Top => SExpr::list(vec![a("top")]),
        Tlxy::Atom(l) => SExpr::list(vec![a("atom"), letter(l)]),
        Tlxy::Sp(c) => SExpr::list(vec![a("sp"), to_sexpr(c)]),
        Tlxy::Ep(c) => SExpr::list(vec![a("ep"), to_sexpr(c)]),
        Tlxy::X(l, c) => SExpr::list(vec![a("x"), letter(l), to_sexpr(c)]),
        Tlxy::Y(l, c) => SExpr::list(vec![a("y"), letter(l), to_sexpr(c)]),
        Tlxy::Wx(l, c) => SExpr::list(vec![a("wx"), letter(l), to_sexpr(c)]),
        Tlxy::Wy(l, c) => SExpr::list(vec![a("wy"), letter(l), to_sexpr(c)]),
        Tlxy::X1(c) => SExpr::list(vec![a("x1"), to_sexpr(c)]),
        Tlxy::Y1(c) => SExpr::list(vec![a("y1"), to_sexpr(c)]),
        Tlxy::Or(x, y) => SExpr::list(vec![a("or"), to_sexpr(x), to_sexpr(y)]),
        Tlxy::And(x, y) => SExpr::list(vec![a("and"), to_sexpr(x), to_sexpr(y)]),
        Tlxy::Not(c) => SExpr::list(vec![a("not"), to_sexpr(c)]),
    }
}

pub(crate) fn parse_letter(e: &SExpr, sg: &Alphabet) -> Result<Letter, String> {
    let tok = e.as_atom().ok_or("expected a letter atom")?;
    let mut chars = tok.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => {
            let l = Letter::new(c).map_err(|e| e.to_string())?;
            if !sg.contains(l) {
                return Err(format!("letter {l} not in alphabet"));
            }
            Ok(l)
        }
        _ => Err(format!("letters are single characters, got {tok:?}")),
    }
}

pub fn from_sexpr(e: &SExpr, sg: &Alphabet) -> Result<Tlxy, String> {
    let items = e.as_list().ok_or("formula must be a list")?;
    let head = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or("formula needs a head")?;
    let unary = |items: &[SExpr]| -> Result<Box<Tlxy>, String> {
        if items.len() != 2 {
            return Err(format!("{head} takes one subformula"));
        }
        Ok(Box::new(from_sexpr(&items[1], sg)?))
    };
    let lettered = |items: &[SExpr]| -> Result<(Letter, Box<Tlxy>), String> {
        if items.len() != 3 {
            return Err(format!("{head} takes a letter and a subformula"));
        }
        Ok((parse_letter(&items[1], sg)?, Box::new(from_sexpr(&items[2], sg)?)))
    };
    match head {
        "top" => Ok(Tlxy::Top),
        "atom" => {
            if items.len() != 2 {
                return Err("atom takes one letter".into());
            }
            Ok(Tlxy::Atom(parse_letter(&items[1], sg)?))
        }
        "sp" => Ok(Tlxy::Sp(unary(items)?)),
        "ep" => Ok(Tlxy::Ep(unary(items)?)),
        "x1" => Ok(Tlxy::X1(unary(items)?)),
        "y1" => Ok(Tlxy::Y1(unary(items)?)),
        "not" => Ok(Tlxy::Not(unary(items)?)),
        "x" => lettered(items).map(|(l, c)| Tlxy::X(l, c)),
        "y" => lettered(items).map(|(l, c)| Tlxy::Y(l, c)),
        "wx" => lettered(items).map(|(l, c)| Tlxy::Wx(l, c)),
        "wy" => lettered(items).map(|(l, c)| Tlxy::Wy(l, c)),
        // Derived atoms expand at parse time.
        "gbar" => {
            if items.len() != 2 {
                return Err("gbar takes one letter".into());
            }
            Ok(gbar(parse_letter(&items[1], sg)?))
        }
        "hbar" => {
            if items.len() != 2 {
                return Err("hbar takes one letter".into());
            }
            Ok(hbar(parse_letter(&items[1], sg)?))
        }
        "or" | "and" => {
            if items.len() != 3 {
                return Err(format!("{head} takes two subformulas"));
            }
            let x = Box::new(from_sexpr(&items[1], sg)?);
            let y = Box::new(from_sexpr(&items[2], sg)?);
            Ok(if head == "or" {
                Tlxy::Or(x, y)
            } else {
                Tlxy::And(x, y)
            })
        }
        other => Err(format!("unknown tlxy form {other}")),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alphabet::{enumerate_words, parse_word};

    pub(crate) fn sigma4() -> Alphabet {
        Alphabet::from_chars("abcd").unwrap()
    }

    pub(crate) fn l(c: char) -> Letter {
        Letter::new(c).unwrap()
    }

    /// The worked formula: at the end, weak-previous a, next d, then
    /// either no b before or that b has a later a.
    pub(crate) fn example2() -> Tlxy {
        Tlxy::Ep(Box::new(Tlxy::Wy(
            l('a'),
            Box::new(Tlxy::X(
                l('d'),
                Box::new(or_(
                    not_(Tlxy::Y(l('b'), Box::new(top()))),
                    Tlxy::Y(l('b'), Box::new(Tlxy::X(l('a'), Box::new(top())))),
                )),
            )),
        )))
    }

    #[test]
    fn eval_example2() {
        let sg = sigma4();
        let f = example2();
        assert!(eval(&f, &parse_word("acdb", &sg).unwrap(), 1));
        assert!(!eval(&f, &parse_word("ada", &sg).unwrap(), 1));
        let g = Tlxy::X(l('a'), Box::new(top()));
        assert!(eval(&g, &parse_word("ba", &sg).unwrap(), 1));
        assert!(!eval(&g, &parse_word("ab", &sg).unwrap(), 1));
    }

    #[test]
    fn pos_examples() {
        let sg = sigma4();
        let f = example2();
        let w = parse_word("acdb", &sg).unwrap();
        assert_eq!(pos(&f, &[], &w), Some(1));
        assert_eq!(pos(&f, &[0], &w), Some(4)); // under Ep: last position
        assert_eq!(pos(&f, &[0, 0], &w), Some(1)); // under Wy_a: the last a
        assert_eq!(pos(&f, &[0, 0, 0], &w), Some(3)); // under X_d: first d after it
        let g = Tlxy::X(l('a'), Box::new(top()));
        let w = parse_word("bbb", &sg).unwrap();
        assert_eq!(pos(&g, &[0], &w), None);
    }

    #[test]
    fn lpos_examples() {
        let sg = sigma4();
        let r = Ranker(vec![RStep::Sp, RStep::X(l('a'))]);
        assert_eq!(r.lpos(&parse_word("ba", &sg).unwrap()), Some(2));
        let r = Ranker(vec![RStep::Sp, RStep::Ep]);
        for w in enumerate_words(&sg, 3).filter(|w| !w.is_empty()) {
            assert_eq!(r.lpos(&w), Some(w.len()));
        }
        let r = Ranker(vec![RStep::Sp, RStep::X(l('a')), RStep::X(l('a'))]);
        assert_eq!(r.lpos(&parse_word("ab", &sg).unwrap()), None);
    }

    #[test]
    fn directionality_base_rows() {
        let sg = sigma4();
        let sp = Ranker(vec![RStep::Sp]);
        assert_eq!(directionality(&sp, Rel::Lt, &sg).unwrap(), bottom());
        assert_eq!(directionality(&sp, Rel::Le, &sg).unwrap(), atfirst(&sg));
        let ep = Ranker(vec![RStep::Ep]);
        assert_eq!(directionality(&ep, Rel::Gt, &sg).unwrap(), bottom());
        let free = Ranker(vec![RStep::X(l('a'))]);
        assert_eq!(directionality(&free, Rel::Lt, &sg), Err(RankerError::Unanchored));
    }

    #[test]
    fn directionality_matches_lpos_oracle() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let rankers = vec![
            Ranker(vec![RStep::Sp]),
            Ranker(vec![RStep::Ep]),
            Ranker(vec![RStep::Sp, RStep::X(l('a'))]),
            Ranker(vec![RStep::Ep, RStep::Y(l('b'))]),
            Ranker(vec![RStep::Sp, RStep::Wx(l('b')), RStep::X1]),
            Ranker(vec![RStep::Ep, RStep::Wy(l('a')), RStep::Y1]),
            Ranker(vec![RStep::Sp, RStep::X(l('a')), RStep::Y(l('b')), RStep::X1]),
            Ranker(vec![RStep::Sp, RStep::Ep, RStep::Y1, RStep::Y1]),
        ];
        for r in &rankers {
            for rel in [Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge] {
                let f = directionality(r, rel, &sg).unwrap();
                for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
                    if let Some(lp) = r.lpos(&w) {
                        for i in w.positions() {
                            assert_eq!(
                                eval(&f, &w, i),
                                rel.holds(i, lp),
                                "{r:?} {rel:?} on {w} at {i}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn next_prev_exact_positions() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let sp = Ranker(vec![RStep::Sp]);
        let f = next_of(&sp, &sg).unwrap();
        for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
            for i in w.positions() {
                assert_eq!(eval(&f, &w, i), i == 2, "{w} at {i}");
            }
        }
        let spep = Ranker(vec![RStep::Sp, RStep::Ep]);
        let f = prev_of(&spep, &sg).unwrap();
        for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
            for i in w.positions() {
                assert_eq!(eval(&f, &w, i), i + 1 == w.len(), "{w} at {i}");
            }
        }
    }

    #[test]
    fn convexity_of_rankers() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let rankers = vec![
            Ranker(vec![RStep::Sp, RStep::X(l('a'))]),
            Ranker(vec![RStep::Ep, RStep::Wy(l('b')), RStep::Y1]),
            Ranker(vec![RStep::Sp, RStep::Wx(l('a')), RStep::X(l('b'))]),
        ];
        for r in &rankers {
            let f = r.to_formula();
            for w in enumerate_words(&sg, 6).filter(|w| !w.is_empty()) {
                let sat: Vec<usize> = w.positions().filter(|&i| eval(&f, &w, i)).collect();
                for pair in sat.windows(2) {
                    assert!(pair[1] == pair[0] + 1, "{r:?} not convex on {w}: {sat:?}");
                }
            }
        }
    }

    #[test]
    fn seq_compose_examples() {
        let r = Ranker(vec![RStep::Sp]);
        let composed = seq_compose(&r, &Tlxy::X(l('a'), Box::new(top())));
        assert_eq!(composed, Tlxy::Sp(Box::new(Tlxy::X(l('a'), Box::new(top())))));
        let r2 = Ranker(vec![RStep::Sp, RStep::X(l('a'))]);
        assert_eq!(seq_compose(&r2, &top()), r2.to_formula());
        // Composition truth at 1 equals child truth at the landing.
        let sg = Alphabet::from_chars("ab").unwrap();
        let f = Tlxy::Y(l('b'), Box::new(top()));
        let composed = seq_compose(&r2, &f);
        for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
            let expect = r2.lpos(&w).map(|p| eval(&f, &w, p)).unwrap_or(false);
            assert_eq!(eval(&composed, &w, 1), expect, "{w}");
        }
    }

    #[test]
    fn pull_booleans_example3_shape() {
        let sg = sigma4();
        // EP wy_a X_d (not (Y_b X_a top) and Y_c top)
        let f = Tlxy::Ep(Box::new(Tlxy::Wy(
            l('a'),
            Box::new(Tlxy::X(
                l('d'),
                Box::new(and_(
                    not_(Tlxy::Y(l('b'), Box::new(Tlxy::X(l('a'), Box::new(top()))))),
                    Tlxy::Y(l('c'), Box::new(top())),
                )),
            )),
        )));
        let combo = pull_booleans(&f, &sg);
        let pre = vec![RStep::Ep, RStep::Wy(l('a')), RStep::X(l('d'))];
        let mut with_yb = pre.clone();
        with_yb.extend([RStep::Y(l('b')), RStep::X(l('a'))]);
        let mut with_yc = pre.clone();
        with_yc.push(RStep::Y(l('c')));
        let expect = BoolCombo::And(
            Box::new(BoolCombo::And(
                Box::new(BoolCombo::Not(Box::new(BoolCombo::Ranker(Ranker(with_yb))))),
                Box::new(BoolCombo::Ranker(Ranker(pre))),
            )),
            Box::new(BoolCombo::Ranker(Ranker(with_yc))),
        );
        assert_eq!(combo, expect);
    }

    #[test]
    fn pull_booleans_is_language_equivalent() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let cases = vec![
            example2(),
            Tlxy::X(l('a'), Box::new(Tlxy::Atom(l('b')))),
            Tlxy::Ep(Box::new(Tlxy::Atom(l('a')))),
            and_(Tlxy::Atom(l('a')), not_(Tlxy::X1(Box::new(Tlxy::Atom(l('b')))))),
            Tlxy::Sp(Box::new(Tlxy::X1(Box::new(Tlxy::Atom(l('a')))))),
            Tlxy::Wx(l('a'), Box::new(not_(Tlxy::Atom(l('a'))))),
        ];
        for f in cases {
            let combo = pull_booleans(&f, &sg);
            for leaf in combo.leaves() {
                if let BoolCombo::Ranker(r) = leaf {
                    assert!(r.is_anchored(), "unanchored leaf in {combo:?}");
                }
            }
            let g = combo.to_formula();
            for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
                assert_eq!(eval(&f, &w, 1), eval(&g, &w, 1), "{f:?} on {w}");
            }
        }
    }

    #[test]
    fn ranker_leaves_stay_linear() {
        let sg = sigma4();
        let f = example2();
        let n = size(&f);
        let combo = pull_booleans(&f, &sg);
        for leaf in combo.leaves() {
            if let BoolCombo::Ranker(r) = leaf {
                assert!(r.len() <= n, "leaf {r:?} larger than the input");
            }
        }
    }

    #[test]
    fn eliminate_weak_unit_examples() {
        let sg = Alphabet::from_chars("ab").unwrap();
        // Fixed point on clean formulas.
        let clean = and_(
            Tlxy::X(l('a'), Box::new(top())),
            not_(Tlxy::Ep(Box::new(Tlxy::Y(l('b'), Box::new(top()))))),
        );
        assert_eq!(eliminate_weak_unit(&clean, &sg), clean);
        // The rewrite of a weak modality agrees with the expansion rule.
        let weak = Tlxy::Wx(l('a'), Box::new(top()));
        let expanded = or_(
            and_(Tlxy::Atom(l('a')), top()),
            and_(not_(Tlxy::Atom(l('a'))), Tlxy::X(l('a'), Box::new(top()))),
        );
        let g = eliminate_weak_unit(&weak, &sg);
        assert!(!has_weak_or_unit(&g));
        for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
            assert_eq!(eval(&g, &w, 1), eval(&expanded, &w, 1), "{w}");
            assert_eq!(eval(&g, &w, 1), eval(&weak, &w, 1), "{w}");
        }
        // Units and weaks in combination, including under EP.
        let cases = vec![
            Tlxy::Sp(Box::new(Tlxy::X1(Box::new(Tlxy::X1(Box::new(top())))))),
            Tlxy::Ep(Box::new(Tlxy::Wy(l('a'), Box::new(Tlxy::Y1(Box::new(top())))))),
            Tlxy::Ep(Box::new(Tlxy::Atom(l('a')))),
            or_(
                Tlxy::Wx(l('b'), Box::new(Tlxy::X1(Box::new(top())))),
                Tlxy::Y1(Box::new(top())),
            ),
        ];
        for f in cases {
            let g = eliminate_weak_unit(&f, &sg);
            assert!(!has_weak_or_unit(&g), "{f:?} -> {g:?}");
            for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
                assert_eq!(eval(&f, &w, 1), eval(&g, &w, 1), "{f:?} on {w}");
            }
        }
    }

    #[test]
    fn pos_ete_matches_pos_oracle() {
        let sg = sigma4();
        let f = example2();
        let paths: Vec<Vec<usize>> = vec![vec![], vec![0], vec![0, 0], vec![0, 0, 0]];
        for path in &paths {
            let e = pos_ete(&f, path, &sg);
            for w in enumerate_words(&sg, 4).filter(|w| !w.is_empty()) {
                let (v, j) = crate::ete::eval_ete(&e, &w, 1);
                match pos(&f, path, &w) {
                    Some(p) => {
                        assert!(v, "path {path:?} on {w}");
                        assert_eq!(j, p, "path {path:?} on {w}");
                    }
                    None => assert!(!v, "path {path:?} on {w}"),
                }
            }
        }
        // A node whose position is undefined rejects.
        let g = Tlxy::X(l('a'), Box::new(top()));
        let e = pos_ete(&g, &[0], &sg);
        let w = parse_word("bbb", &sg).unwrap();
        assert!(!crate::ete::eval_ete(&e, &w, 1).0);
    }

    #[test]
    fn eval_ete_matches_eval_oracle() {
        let sg = sigma4();
        let f = example2();
        let e = eval_ete_formula(&f, &[], &sg);
        for w in enumerate_words(&sg, 4).filter(|w| !w.is_empty()) {
            let (v, _) = crate::ete::eval_ete(&e, &w, 1);
            assert_eq!(v, eval(&f, &w, 1), "{w}");
        }
        let neg = not_(top());
        let e = eval_ete_formula(&neg, &[], &sg);
        let w = parse_word("a", &sg).unwrap();
        assert!(!crate::ete::eval_ete(&e, &w, 1).0);
    }

    #[test]
    fn compile_example2_equals_fig2() {
        let sg = sigma4();
        let m = to_po2dfa(&example2(), &sg);
        assert!(m.validate().is_empty());
        let fig2 = crate::po2dfa::tests::fig2();
        for w in enumerate_words(&sg, 6) {
            assert_eq!(m.member(&w), fig2.member(&w), "{w}");
        }
    }

    #[test]
    fn compile_top_and_bottom() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let all = to_po2dfa(&top(), &sg);
        let none = to_po2dfa(&bottom(), &sg);
        for w in enumerate_words(&sg, 4) {
            assert_eq!(all.member(&w), !w.is_empty(), "{w}");
            assert!(!none.member(&w), "{w}");
        }
        match none.emptiness(Some(3), 10_000).unwrap() {
            Emptiness::EmptyUpTo(3) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sat_examples() {
        let sg = sigma4();
        match sat(&example2(), &sg, None, 1_000_000).unwrap() {
            Emptiness::NonEmpty(w) => assert_eq!(w.to_string(), "ad"),
            other => panic!("{other:?}"),
        }
        let sg2 = Alphabet::from_chars("ab").unwrap();
        let contradiction = and_(Tlxy::Atom(l('a')), not_(Tlxy::Atom(l('a'))));
        match sat(&contradiction, &sg2, Some(4), 1_000_000).unwrap() {
            Emptiness::EmptyUpTo(4) => {}
            other => panic!("{other:?}"),
        }
        let two_as = Tlxy::Sp(Box::new(Tlxy::X(
            l('a'),
            Box::new(Tlxy::X(l('a'), Box::new(top()))),
        )));
        match sat(&two_as, &sg2, None, 1_000_000).unwrap() {
            Emptiness::NonEmpty(w) => assert_eq!(w.to_string(), "aaa"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compiled_membership_equals_eval_small_fuzz() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let cases = vec![
            Tlxy::Atom(l('a')),
            Tlxy::Wx(l('b'), Box::new(Tlxy::Atom(l('b')))),
            or_(
                Tlxy::X1(Box::new(Tlxy::Atom(l('a')))),
                Tlxy::Ep(Box::new(Tlxy::Y(l('a'), Box::new(top())))),
            ),
            not_(Tlxy::Y1(Box::new(top()))),
        ];
        for f in cases {
            let m = to_po2dfa(&f, &sg);
            for w in enumerate_words(&sg, 5) {
                assert_eq!(m.member(&w), member(&f, &w), "{f:?} on {w}");
            }
        }
    }

    #[test]
    fn sexpr_roundtrip() {
        let sg = sigma4();
        let f = example2();
        let text = to_sexpr(&f).to_string();
        let parsed = from_sexpr(&crate::sexpr::parse_sexpr(&text).unwrap(), &sg).unwrap();
        assert_eq!(parsed, f);
        let g = from_sexpr(&crate::sexpr::parse_sexpr("(gbar a)").unwrap(), &sg).unwrap();
        assert_eq!(g, gbar(l('a')));
    }
}
