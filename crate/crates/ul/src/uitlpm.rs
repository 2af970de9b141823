//! Unambiguous interval temporal logic with expanding chops.
//!
//! Formulas are evaluated on intervals `[i, j]` of a word. The chop
//! modalities split deterministically at the first or last occurrence of
//! a letter; the expanding variants may move an endpoint beyond the
//! interval. The translation to the ranker logic goes through the
//! `LIntv`/`RIntv` rankers that name the endpoints of every subformula's
//! unique evaluation interval.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::sexpr::SExpr;
use crate::tlxy::{
    and_, directionality, not_, or_, top, Ranker, Rel, RStep, Tlxy,
};

pub type LetterSet = BTreeSet<Letter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Uitl {
    Top,
    Atom(Letter),
    Pt,
    Unit,
    Bp(Box<Uitl>),
    Ep(Box<Uitl>),
    First(Letter, Box<Uitl>, Box<Uitl>),
    Last(Letter, Box<Uitl>, Box<Uitl>),
    FirstP(Letter, Box<Uitl>, Box<Uitl>),
    LastM(Letter, Box<Uitl>, Box<Uitl>),
    ShrinkL(Box<Uitl>),
    ShrinkR(Box<Uitl>),
    ExtendR(Box<Uitl>),
    ExtendL(Box<Uitl>),
    Or(Box<Uitl>, Box<Uitl>),
    And(Box<Uitl>, Box<Uitl>),
    Not(Box<Uitl>),
}

pub fn usize_of(d: &Uitl) -> usize {
    match d {
        Uitl::Top | Uitl::Atom(_) | Uitl::Pt | Uitl::Unit => 1,
        Uitl::Bp(c) | Uitl::Ep(c) | Uitl::ShrinkL(c) | Uitl::ShrinkR(c) | Uitl::ExtendR(c)
        | Uitl::ExtendL(c) | Uitl::Not(c) => 1 + usize_of(c),
        Uitl::First(_, a, b) | Uitl::Last(_, a, b) | Uitl::FirstP(_, a, b)
        | Uitl::LastM(_, a, b) | Uitl::Or(a, b) | Uitl::And(a, b) => 1 + usize_of(a) + usize_of(b),
    }
}

pub fn utop() -> Uitl {
    Uitl::Top
}

pub fn ubottom() -> Uitl {
    Uitl::Not(Box::new(Uitl::Top))
}

pub fn uor(a: Uitl, b: Uitl) -> Uitl {
    match (&a, &b) {
        (Uitl::Top, _) | (_, Uitl::Top) => Uitl::Top,
        _ if a == ubottom() => b,
        _ if b == ubottom() => a,
        _ => Uitl::Or(Box::new(a), Box::new(b)),
    }
}

pub fn uand(a: Uitl, b: Uitl) -> Uitl {
    match (&a, &b) {
        (Uitl::Top, _) => b,
        (_, Uitl::Top) => a,
        _ if a == ubottom() || b == ubottom() => ubottom(),
        _ => Uitl::And(Box::new(a), Box::new(b)),
    }
}

pub fn unot(a: Uitl) -> Uitl {
    match a {
        Uitl::Not(inner) => *inner,
        other => Uitl::Not(Box::new(other)),
    }
}

pub fn uor_all(items: Vec<Uitl>) -> Uitl {
    items.into_iter().fold(ubottom(), uor)
}

fn first_at_or_after(w: &Word, i: usize, a: Letter) -> Option<usize> {
    (i..=w.len()).find(|&k| w.at(k) == Some(a))
}

fn last_at_or_before(w: &Word, j: usize, a: Letter) -> Option<usize> {
    (1..=j.min(w.len())).rev().find(|&k| w.at(k) == Some(a))
}

/// Interval semantics on `[i, j]` with `1 <= i <= j <= len`.
pub fn eval(d: &Uitl, w: &Word, i: usize, j: usize) -> bool {
    debug_assert!(1 <= i && i <= j && j <= w.len());
    match d {
        Uitl::Top => true,
        Uitl::Atom(a) => w.at(i) == Some(*a),
        Uitl::Pt => i == j,
        Uitl::Unit => j == i + 1,
        Uitl::Bp(c) => eval(c, w, i, i),
        Uitl::Ep(c) => eval(c, w, j, j),
        Uitl::First(a, d1, d2) => match first_at_or_after(w, i, *a) {
            Some(k) if k <= j => eval(d1, w, i, k) && eval(d2, w, k, j),
            _ => false,
        },
        Uitl::Last(a, d1, d2) => match last_at_or_before(w, j, *a) {
            Some(k) if k >= i => eval(d1, w, i, k) && eval(d2, w, k, j),
            _ => false,
        },
        Uitl::FirstP(a, d1, d2) => match first_at_or_after(w, i, *a) {
            Some(k) if k >= j => eval(d1, w, i, k) && eval(d2, w, j, k),
            _ => false,
        },
        Uitl::LastM(a, d1, d2) => match last_at_or_before(w, j, *a) {
            Some(k) if k <= i => eval(d1, w, k, i) && eval(d2, w, k, j),
            _ => false,
        },
        Uitl::ShrinkL(c) => i < j && eval(c, w, i + 1, j),
        Uitl::ShrinkR(c) => i < j && eval(c, w, i, j - 1),
        Uitl::ExtendR(c) => j < w.len() && eval(c, w, i, j + 1),
        Uitl::ExtendL(c) => i > 1 && eval(c, w, i - 1, j),
        Uitl::Or(a, b) => eval(a, w, i, j) || eval(b, w, i, j),
        Uitl::And(a, b) => eval(a, w, i, j) && eval(b, w, i, j),
        Uitl::Not(c) => !eval(c, w, i, j),
    }
}

/// Language membership: evaluation on the whole-word interval.
pub fn member(d: &Uitl, w: &Word) -> bool {
    !w.is_empty() && eval(d, w, 1, w.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeilKind {
    /// open-open: interior positions only
    Oo,
    /// open-closed
    Oc,
    /// closed-open
    Co,
    /// closed-closed
    Cc,
}

/// The derived invariance operators, expanded as formula macros.
pub fn ceiling(set: &LetterSet, kind: CeilKind, alphabet: &Alphabet) -> Uitl {
    let outside: Vec<Letter> = alphabet.iter().filter(|l| !set.contains(l)).collect();
    let occurs = |b: Letter| Uitl::First(b, Box::new(utop()), Box::new(utop()));
    let violation = |wrap: &dyn Fn(Uitl) -> Uitl| {
        uor_all(outside.iter().map(|&b| wrap(occurs(b))).collect())
    };
    match kind {
        CeilKind::Oo => uor(
            uor(Uitl::Pt, Uitl::Unit),
            unot(violation(&|d| Uitl::ShrinkL(Box::new(Uitl::ShrinkR(Box::new(d)))))),
        ),
        CeilKind::Oc => uor(
            Uitl::Pt,
            unot(violation(&|d| Uitl::ShrinkL(Box::new(d)))),
        ),
        CeilKind::Co => uor(
            Uitl::Pt,
            unot(violation(&|d| Uitl::ShrinkR(Box::new(d)))),
        ),
        CeilKind::Cc => unot(violation(&|d| d)),
    }
}

// ---------------------------------------------------------------------
// Endpoint rankers and the translation to the ranker logic
// ---------------------------------------------------------------------

pub fn child_count(d: &Uitl) -> usize {
    match d {
        Uitl::Top | Uitl::Atom(_) | Uitl::Pt | Uitl::Unit => 0,
        Uitl::First(..) | Uitl::Last(..) | Uitl::FirstP(..) | Uitl::LastM(..) | Uitl::Or(..)
        | Uitl::And(..) => 2,
        _ => 1,
    }
}

pub fn child(d: &Uitl, idx: usize) -> Option<&Uitl> {
    match (d, idx) {
        (Uitl::Bp(c), 0)
        | (Uitl::Ep(c), 0)
        | (Uitl::ShrinkL(c), 0)
        | (Uitl::ShrinkR(c), 0)
        | (Uitl::ExtendR(c), 0)
        | (Uitl::ExtendL(c), 0)
        | (Uitl::Not(c), 0) => Some(c),
        (Uitl::First(_, a, _), 0)
        | (Uitl::Last(_, a, _), 0)
        | (Uitl::FirstP(_, a, _), 0)
        | (Uitl::LastM(_, a, _), 0)
        | (Uitl::Or(a, _), 0)
        | (Uitl::And(a, _), 0) => Some(a),
        (Uitl::First(_, _, b), 1)
        | (Uitl::Last(_, _, b), 1)
        | (Uitl::FirstP(_, _, b), 1)
        | (Uitl::LastM(_, _, b), 1)
        | (Uitl::Or(_, b), 1)
        | (Uitl::And(_, b), 1) => Some(b),
        _ => None,
    }
}

/// The endpoint rankers of the node reached by `path`: rankers whose
/// landings are the left and right ends of the node's unique evaluation
/// interval, whenever that interval and the chops above it are defined.
pub fn intv_rankers(root: &Uitl, path: &[usize]) -> (Ranker, Ranker) {
    let mut l = Ranker(vec![RStep::Sp]);
    let mut r = Ranker(vec![RStep::Ep]);
    let mut cur = root;
    for &idx in path {
        let (nl, nr) = match cur {
            Uitl::Bp(_) => (l.clone(), l.clone()),
            Uitl::Ep(_) => (r.clone(), r.clone()),
            Uitl::First(a, ..) => {
                let c = l.push(RStep::Wx(*a));
                if idx == 0 {
                    (l.clone(), c)
                } else {
                    (c, r.clone())
                }
            }
            Uitl::Last(a, ..) => {
                let c = r.push(RStep::Wy(*a));
                if idx == 0 {
                    (l.clone(), c)
                } else {
                    (c, r.clone())
                }
            }
            Uitl::FirstP(a, ..) => {
                let c = r.push(RStep::Wx(*a));
                if idx == 0 {
                    (l.clone(), c)
                } else {
                    (r.clone(), c)
                }
            }
            Uitl::LastM(a, ..) => {
                let c = l.push(RStep::Wy(*a));
                if idx == 0 {
                    (c, l.clone())
                } else {
                    (c, r.clone())
                }
            }
            Uitl::ShrinkL(_) => (l.push(RStep::X1), r.clone()),
            Uitl::ShrinkR(_) => (l.clone(), r.push(RStep::Y1)),
            Uitl::ExtendR(_) => (l.clone(), r.push(RStep::X1)),
            Uitl::ExtendL(_) => (l.push(RStep::Y1), r.clone()),
            Uitl::Or(..) | Uitl::And(..) | Uitl::Not(_) => (l.clone(), r.clone()),
            Uitl::Top | Uitl::Atom(_) | Uitl::Pt | Uitl::Unit => (l.clone(), r.clone()),
        };
        l = nl;
        r = nr;
        cur = child(cur, idx).expect("path is valid in the tree");
    }
    (l, r)
}

pub fn lintv(root: &Uitl, path: &[usize]) -> Ranker {
    intv_rankers(root, path).0
}

pub fn rintv(root: &Uitl, path: &[usize]) -> Ranker {
    intv_rankers(root, path).1
}

/// Language-preserving translation to the ranker logic, built from the
/// endpoint rankers, sequential composition and directionality.
pub fn to_tlxy(d: &Uitl, alphabet: &Alphabet) -> Tlxy {
    let l = Ranker(vec![RStep::Sp]);
    let r = Ranker(vec![RStep::Ep]);
    trans(d, &l, &r, alphabet)
}

fn p_of(r: &Ranker, rel: Rel, sg: &Alphabet) -> Tlxy {
    directionality(r, rel, sg).expect("interval rankers are anchored")
}

fn trans(d: &Uitl, l: &Ranker, r: &Ranker, sg: &Alphabet) -> Tlxy {
    match d {
        Uitl::Top => top(),
        Uitl::Atom(a) => {
            // Letter at the left endpoint, via the point chop.
            let synthetic = Uitl::Bp(Box::new(Uitl::First(
                *a,
                Box::new(Uitl::Pt),
                Box::new(Uitl::Top),
            )));
            trans(&synthetic, l, r, sg)
        }
        Uitl::Pt => and_(
            l.compose_formula(p_of(r, Rel::Ge, sg)),
            l.compose_formula(p_of(r, Rel::Le, sg)),
        ),
        Uitl::Unit => {
            let lx = l.push(RStep::X1);
            and_(
                lx.compose_formula(p_of(r, Rel::Ge, sg)),
                lx.compose_formula(p_of(r, Rel::Le, sg)),
            )
        }
        Uitl::Bp(c) => trans(c, l, l, sg),
        Uitl::Ep(c) => trans(c, r, r, sg),
        Uitl::First(a, d1, d2) => {
            let c = l.push(RStep::Wx(*a));
            let guard = c.compose_formula(p_of(r, Rel::Le, sg));
            and_(guard, and_(trans(d1, l, &c, sg), trans(d2, &c, r, sg)))
        }
        Uitl::Last(a, d1, d2) => {
            let c = r.push(RStep::Wy(*a));
            let guard = c.compose_formula(p_of(l, Rel::Ge, sg));
            and_(guard, and_(trans(d1, l, &c, sg), trans(d2, &c, r, sg)))
        }
        Uitl::FirstP(a, d1, d2) => {
            let seek = l.push(RStep::Wx(*a));
            let guard = seek.compose_formula(p_of(r, Rel::Ge, sg));
            let c = r.push(RStep::Wx(*a));
            and_(guard, and_(trans(d1, l, &c, sg), trans(d2, r, &c, sg)))
        }
        Uitl::LastM(a, d1, d2) => {
            let seek = r.push(RStep::Wy(*a));
            let guard = seek.compose_formula(p_of(l, Rel::Le, sg));
            let c = l.push(RStep::Wy(*a));
            and_(guard, and_(trans(d1, &c, l, sg), trans(d2, &c, r, sg)))
        }
        Uitl::ShrinkL(c) => {
            let nl = l.push(RStep::X1);
            let guard = nl.compose_formula(p_of(r, Rel::Le, sg));
            and_(guard, trans(c, &nl, r, sg))
        }
        Uitl::ShrinkR(c) => {
            let nr = r.push(RStep::Y1);
            let guard = nr.compose_formula(p_of(l, Rel::Ge, sg));
            and_(guard, trans(c, l, &nr, sg))
        }
        Uitl::ExtendR(c) => {
            let nr = r.push(RStep::X1);
            let guard = nr.to_formula();
            and_(guard, trans(c, l, &nr, sg))
        }
        Uitl::ExtendL(c) => {
            let nl = l.push(RStep::Y1);
            let guard = nl.to_formula();
            and_(guard, trans(c, &nl, r, sg))
        }
        Uitl::Or(a, b) => or_(trans(a, l, r, sg), trans(b, l, r, sg)),
        Uitl::And(a, b) => and_(trans(a, l, r, sg), trans(b, l, r, sg)),
        Uitl::Not(c) => not_(trans(c, l, r, sg)),
    }
}

// ---------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------

pub fn to_sexpr(d: &Uitl) -> SExpr {
    fn a(s: &str) -> SExpr {
        SExpr::atom(s)
    }
    fn letter(l: &Letter) -> SExpr {
        SExpr::atom(l.to_string())
    }
    match d {
        Uitl::Top => SExpr::list(vec![a("top")]),
        Uitl::Atom(l) => SExpr::list(vec![a("atom"), letter(l)]),
        Uitl::Pt => SExpr::list(vec![a("pt")]),
        Uitl::Unit => SExpr::list(vec![a("unit")]),
        Uitl::Bp(c) => SExpr::list(vec![a("bp"), to_sexpr(c)]),
        Uitl::Ep(c) => SExpr::list(vec![a("ep"), to_sexpr(c)]),
        Uitl::First(l, x, y) => SExpr::list(vec![a("first"), letter(l), to_sexpr(x), to_sexpr(y)]),
        Uitl::Last(l, x, y) => SExpr::list(vec![a("last"), letter(l), to_sexpr(x), to_sexpr(y)]),
        Uitl::FirstP(l, x, y) => SExpr::list(vec![a("firstp"), letter(l), to_sexpr(x), to_sexpr(y)]),
        Uitl::LastM(l, x, y) => SExpr::list(vec![a("lastm"), letter(l), to_sexpr(x), to_sexpr(y)]),
        Uitl::ShrinkL(c) => SExpr::list(vec![a("shrinkl"), to_sexpr(c)]),
        Uitl::ShrinkR(c) => SExpr::list(vec![a("shrinkr"), to_sexpr(c)]),
        Uitl::ExtendR(c) => SExpr::list(vec![a("extendr"), to_sexpr(c)]),
        Uitl::ExtendL(c) => SExpr::list(vec![a("extendl"), to_sexpr(c)]),
        Uitl::Or(x, y) => SExpr::list(vec![a("or"), to_sexpr(x), to_sexpr(y)]),
        Uitl::And(x, y) => SExpr::list(vec![a("and"), to_sexpr(x), to_sexpr(y)]),
        Uitl::Not(c) => SExpr::list(vec![a("not"), to_sexpr(c)]),
    }
}

fn parse_letter_set(e: &SExpr, sg: &Alphabet) -> Result<LetterSet, String> {
    let items = e.as_list().ok_or("letter set must be a list")?;
    let mut out = LetterSet::new();
    for item in items {
        out.insert(crate::tlxy::parse_letter(item, sg)?);
    }
    Ok(out)
}

pub fn from_sexpr(e: &SExpr, sg: &Alphabet) -> Result<Uitl, String> {
    let items = e.as_list().ok_or("formula must be a list")?;
    let head = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or("formula needs a head")?;
    let unary = |items: &[SExpr]| -> Result<Box<Uitl>, String> {
        if items.len() != 2 {
            return Err(format!("{head} takes one subformula"));
        }
        Ok(Box::new(from_sexpr(&items[1], sg)?))
    };
    let chop = |items: &[SExpr]| -> Result<(Letter, Box<Uitl>, Box<Uitl>), String> {
        if items.len() != 4 {
            return Err(format!("{head} takes a letter and two subformulas"));
        }
        Ok((
            crate::tlxy::parse_letter(&items[1], sg)?,
            Box::new(from_sexpr(&items[2], sg)?),
            Box::new(from_sexpr(&items[3], sg)?),
        ))
    };
    let ceil = |items: &[SExpr], kind: CeilKind| -> Result<Uitl, String> {
        if items.len() != 2 {
            return Err(format!("{head} takes one letter set"));
        }
        Ok(ceiling(&parse_letter_set(&items[1], sg)?, kind, sg))
    };
    match head {
        "top" => Ok(Uitl::Top),
        "pt" => Ok(Uitl::Pt),
        "unit" => Ok(Uitl::Unit),
        "atom" => {
            if items.len() != 2 {
                return Err("atom takes one letter".into());
            }
            Ok(Uitl::Atom(crate::tlxy::parse_letter(&items[1], sg)?))
        }
        "bp" => Ok(Uitl::Bp(unary(items)?)),
        "ep" => Ok(Uitl::Ep(unary(items)?)),
        "shrinkl" => Ok(Uitl::ShrinkL(unary(items)?)),
        "shrinkr" => Ok(Uitl::ShrinkR(unary(items)?)),
        "extendr" => Ok(Uitl::ExtendR(unary(items)?)),
        "extendl" => Ok(Uitl::ExtendL(unary(items)?)),
        "not" => Ok(Uitl::Not(unary(items)?)),
        "first" => chop(items).map(|(l, x, y)| Uitl::First(l, x, y)),
        "last" => chop(items).map(|(l, x, y)| Uitl::Last(l, x, y)),
        "firstp" => chop(items).map(|(l, x, y)| Uitl::FirstP(l, x, y)),
        "lastm" => chop(items).map(|(l, x, y)| Uitl::LastM(l, x, y)),
        "ceil-oo" => ceil(items, CeilKind::Oo),
        "ceil-oc" => ceil(items, CeilKind::Oc),
        "ceil-co" => ceil(items, CeilKind::Co),
        "ceil-cc" => ceil(items, CeilKind::Cc),
        "or" | "and" => {
            if items.len() != 3 {
                return Err(format!("{head} takes two subformulas"));
            }
            let x = Box::new(from_sexpr(&items[1], sg)?);
            let y = Box::new(from_sexpr(&items[2], sg)?);
            Ok(if head == "or" {
                Uitl::Or(x, y)
            } else {
                Uitl::And(x, y)
            })
        }
        other => Err(format!("unknown uitlpm form {other}")),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alphabet::{enumerate_words, parse_word};
    use crate::tlxy::tests::l;

    fn sigma4() -> Alphabet {
        Alphabet::from_chars("abcd").unwrap()
    }

    /// The worked interval formula for the running language: chop at the
    /// last a, then inside a b-free interior find the first d.
    pub(crate) fn example6() -> Uitl {
        let sg = sigma4();
        let interior: LetterSet = [l('a'), l('c'), l('d')].into_iter().collect();
        Uitl::Last(
            l('a'),
            Box::new(Uitl::Top),
            Box::new(Uitl::First(
                l('d'),
                Box::new(ceiling(&interior, CeilKind::Oo, &sg)),
                Box::new(Uitl::Top),
            )),
        )
    }

    #[test]
    fn eval_example6() {
        let sg = sigma4();
        let w = parse_word("acdb", &sg).unwrap();
        assert!(eval(&example6(), &w, 1, 4));
        let w = parse_word("ada", &sg).unwrap();
        assert!(!eval(&example6(), &w, 1, 3));
    }

    #[test]
    fn point_and_unit() {
        let sg = sigma4();
        let w = parse_word("ab", &sg).unwrap();
        assert!(eval(&Uitl::Pt, &w, 2, 2));
        assert!(!eval(&Uitl::Pt, &w, 1, 2));
        assert!(eval(&Uitl::Unit, &w, 1, 2));
    }

    #[test]
    fn ceiling_examples() {
        let sg = sigma4();
        let only_a: LetterSet = [l('a')].into_iter().collect();
        let oo = ceiling(&only_a, CeilKind::Oo, &sg);
        let w = parse_word("aba", &sg).unwrap();
        assert!(!eval(&oo, &w, 1, 3)); // interior position holds a b
        // Point intervals satisfy every open-open ceiling.
        for set in [&only_a, &LetterSet::new()] {
            let c = ceiling(set, CeilKind::Oo, &sg);
            assert!(eval(&c, &w, 2, 2));
        }
        let cc = ceiling(&only_a, CeilKind::Cc, &sg);
        let w = parse_word("aa", &sg).unwrap();
        assert!(eval(&cc, &w, 1, 2));
    }

    /// Direct top-down interval computation, used as the oracle for the
    /// endpoint rankers.
    pub(crate) fn intv_of(root: &Uitl, path: &[usize], w: &Word) -> Option<(usize, usize)> {
        let mut cur = root;
        let mut iv = (1usize, w.len());
        for &idx in path {
            let (i, j) = iv;
            iv = match cur {
                Uitl::Bp(_) => (i, i),
                Uitl::Ep(_) => (j, j),
                Uitl::First(a, ..) => {
                    let k = first_at_or_after(w, i, *a).filter(|&k| k <= j)?;
                    if idx == 0 {
                        (i, k)
                    } else {
                        (k, j)
                    }
                }
                Uitl::Last(a, ..) => {
                    let k = last_at_or_before(w, j, *a).filter(|&k| k >= i)?;
                    if idx == 0 {
                        (i, k)
                    } else {
                        (k, j)
                    }
                }
                Uitl::FirstP(a, ..) => {
                    let k = first_at_or_after(w, i, *a).filter(|&k| k >= j)?;
                    if idx == 0 {
                        (i, k)
                    } else {
                        (j, k)
                    }
                }
                Uitl::LastM(a, ..) => {
                    let k = last_at_or_before(w, j, *a).filter(|&k| k <= i)?;
                    if idx == 0 {
                        (k, i)
                    } else {
                        (k, j)
                    }
                }
                Uitl::ShrinkL(_) => {
                    if i < j {
                        (i + 1, j)
                    } else {
                        return None;
                    }
                }
                Uitl::ShrinkR(_) => {
                    if i < j {
                        (i, j - 1)
                    } else {
                        return None;
                    }
                }
                Uitl::ExtendR(_) => {
                    if j < w.len() {
                        (i, j + 1)
                    } else {
                        return None;
                    }
                }
                Uitl::ExtendL(_) => {
                    if i > 1 {
                        (i - 1, j)
                    } else {
                        return None;
                    }
                }
                _ => (i, j),
            };
            cur = child(cur, idx)?;
        }
        Some(iv)
    }

    #[test]
    fn intv_rankers_root_and_first() {
        let d = example6();
        let (sp, ep) = intv_rankers(&d, &[]);
        assert_eq!(sp, Ranker(vec![RStep::Sp]));
        assert_eq!(ep, Ranker(vec![RStep::Ep]));
        // Second operand of a First chop at the root.
        let d = Uitl::First(l('a'), Box::new(Uitl::Top), Box::new(Uitl::Top));
        let (li, _) = intv_rankers(&d, &[1]);
        assert_eq!(li, Ranker(vec![RStep::Sp, RStep::Wx(l('a'))]));
    }

    fn all_paths(d: &Uitl) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for idx in 0..child_count(d) {
            for mut sub in all_paths(child(d, idx).unwrap()) {
                sub.insert(0, idx);
                out.push(sub);
            }
        }
        out
    }

    #[test]
    fn endpoint_rankers_match_interval_walker() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let cases = vec![
            Uitl::First(l('a'), Box::new(Uitl::Pt), Box::new(Uitl::Top)),
            Uitl::Last(
                l('b'),
                Box::new(Uitl::ShrinkL(Box::new(Uitl::Top))),
                Box::new(Uitl::Ep(Box::new(Uitl::Atom(l('b'))))),
            ),
            Uitl::FirstP(l('a'), Box::new(Uitl::Top), Box::new(Uitl::Unit)),
            Uitl::LastM(l('b'), Box::new(Uitl::Top), Box::new(Uitl::Top)),
            Uitl::ExtendR(Box::new(Uitl::ShrinkR(Box::new(Uitl::Pt)))),
            Uitl::Bp(Box::new(Uitl::ExtendL(Box::new(Uitl::Top)))),
        ];
        for d in &cases {
            for path in all_paths(d) {
                let (lr, rr) = intv_rankers(d, &path);
                for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
                    if let Some((i, j)) = intv_of(d, &path, &w) {
                        assert_eq!(lr.lpos(&w), Some(i), "{d:?} {path:?} on {w}");
                        assert_eq!(rr.lpos(&w), Some(j), "{d:?} {path:?} on {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn to_tlxy_trivial() {
        let sg = sigma4();
        assert_eq!(to_tlxy(&Uitl::Top, &sg), top());
    }

    #[test]
    fn to_tlxy_agrees_with_interval_eval() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let interior: LetterSet = [l('a')].into_iter().collect();
        let cases = vec![
            Uitl::Atom(l('a')),
            Uitl::Pt,
            Uitl::First(l('a'), Box::new(Uitl::Pt), Box::new(Uitl::Top)),
            Uitl::Last(l('b'), Box::new(Uitl::Top), Box::new(Uitl::Pt)),
            Uitl::FirstP(l('b'), Box::new(Uitl::Top), Box::new(Uitl::Top)),
            Uitl::LastM(l('a'), Box::new(Uitl::Atom(l('a'))), Box::new(Uitl::Top)),
            Uitl::ShrinkL(Box::new(Uitl::Atom(l('b')))),
            Uitl::ExtendR(Box::new(Uitl::Ep(Box::new(Uitl::Atom(l('a')))))),
            unot(Uitl::First(l('a'), Box::new(Uitl::Top), Box::new(Uitl::Unit))),
            ceiling(&interior, CeilKind::Oo, &sg),
            example6_over_ab(),
        ];
        for d in &cases {
            let f = to_tlxy(d, &sg);
            for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
                assert_eq!(
                    member(d, &w),
                    crate::tlxy::eval(&f, &w, 1),
                    "{d:?} on {w}"
                );
            }
        }
    }

    fn example6_over_ab() -> Uitl {
        let sg = Alphabet::from_chars("ab").unwrap();
        let interior: LetterSet = [l('a')].into_iter().collect();
        Uitl::Last(
            l('a'),
            Box::new(Uitl::Top),
            Box::new(Uitl::First(
                l('b'),
                Box::new(ceiling(&interior, CeilKind::Oo, &sg)),
                Box::new(Uitl::Top),
            )),
        )
    }

    #[test]
    fn sexpr_roundtrip() {
        let sg = sigma4();
        let d = Uitl::First(
            l('a'),
            Box::new(Uitl::Pt),
            Box::new(Uitl::ExtendR(Box::new(Uitl::Unit))),
        );
        let text = to_sexpr(&d).to_string();
        let parsed = from_sexpr(&crate::sexpr::parse_sexpr(&text).unwrap(), &sg).unwrap();
        assert_eq!(parsed, d);
        // Ceiling forms expand at parse time.
        let c = from_sexpr(&crate::sexpr::parse_sexpr("(ceil-cc (a b))").unwrap(), &sg).unwrap();
        let set: LetterSet = [l('a'), l('b')].into_iter().collect();
        assert_eq!(c, ceiling(&set, CeilKind::Cc, &sg));
    }
}
