//! Recursive rankers: next/previous modalities parametrized by formulas.
//!
//! The syntax is two-layered. The ranker layer (`RecPhi`) is boolean-free
//! navigation whose satisfaction sets are convex; the parameter layer
//! (`RecPsi`) is a boolean combination of atoms and rankers and may be
//! arbitrary. Both translations with the unary future/past logic live
//! here.

use crate::alphabet::{Alphabet, Letter, Word};
use crate::sexpr::SExpr;
use crate::tlfp::{fp_and, fp_not, fp_or, f_, p_, Tlfp};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecPsi {
    Atom(Letter),
    Ref(Box<RecPhi>),
    Or(Box<RecPsi>, Box<RecPsi>),
    And(Box<RecPsi>, Box<RecPsi>),
    Not(Box<RecPsi>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecPhi {
    Top,
    Sp(Box<RecPhi>),
    Ep(Box<RecPhi>),
    X(Box<RecPsi>, Box<RecPhi>),
    Y(Box<RecPsi>, Box<RecPhi>),
}

pub fn eval_psi(f: &RecPsi, w: &Word, i: usize) -> bool {
    debug_assert!(!w.is_empty() && i >= 1 && i <= w.len());
    match f {
        RecPsi::Atom(a) => w.at(i) == Some(*a),
        RecPsi::Ref(phi) => eval_phi(phi, w, i),
        RecPsi::Or(a, b) => eval_psi(a, w, i) || eval_psi(b, w, i),
        RecPsi::And(a, b) => eval_psi(a, w, i) && eval_psi(b, w, i),
        RecPsi::Not(c) => !eval_psi(c, w, i),
    }
}

pub fn eval_phi(f: &RecPhi, w: &Word, i: usize) -> bool {
    debug_assert!(!w.is_empty() && i >= 1 && i <= w.len());
    match f {
        RecPhi::Top => true,
        RecPhi::Sp(c) => eval_phi(c, w, 1),
        RecPhi::Ep(c) => eval_phi(c, w, w.len()),
        RecPhi::X(param, cont) => (i + 1..=w.len())
            .find(|&j| eval_psi(param, w, j))
            .is_some_and(|j| eval_phi(cont, w, j)),
        RecPhi::Y(param, cont) => (1..i)
            .rev()
            .find(|&j| eval_psi(param, w, j))
            .is_some_and(|j| eval_phi(cont, w, j)),
    }
}

pub fn member(f: &RecPsi, w: &Word) -> bool {
    !w.is_empty() && eval_psi(f, w, 1)
}

/// Maximum recursion level over all subformulas: modality parameters sit
/// one level above their host, continuations stay level.
pub fn rlevel(f: &RecPsi) -> usize {
    fn psi(f: &RecPsi, level: usize) -> usize {
        match f {
            RecPsi::Atom(_) => level,
            RecPsi::Ref(p) => phi(p, level),
            RecPsi::Or(a, b) | RecPsi::And(a, b) => psi(a, level).max(psi(b, level)),
            RecPsi::Not(c) => psi(c, level),
        }
    }
    fn phi(f: &RecPhi, level: usize) -> usize {
        match f {
            RecPhi::Top => level,
            RecPhi::Sp(c) | RecPhi::Ep(c) => phi(c, level),
            RecPhi::X(param, cont) | RecPhi::Y(param, cont) => {
                psi(param, level + 1).max(phi(cont, level))
            }
        }
    }
    psi(f, 0)
}

pub fn psi_size(f: &RecPsi) -> usize {
    match f {
        RecPsi::Atom(_) => 1,
        RecPsi::Ref(p) => phi_size(p),
        RecPsi::Or(a, b) | RecPsi::And(a, b) => 1 + psi_size(a) + psi_size(b),
        RecPsi::Not(c) => 1 + psi_size(c),
    }
}

pub fn phi_size(f: &RecPhi) -> usize {
    match f {
        RecPhi::Top => 0,
        RecPhi::Sp(c) | RecPhi::Ep(c) => 1 + phi_size(c),
        RecPhi::X(param, cont) | RecPhi::Y(param, cont) => {
            1 + psi_size(param) + phi_size(cont)
        }
    }
}

/// Structural embedding of the unary logic: `F` becomes a next step to
/// the first position where the body holds.
pub fn from_tlfp(f: &Tlfp) -> RecPsi {
    match f {
        Tlfp::Atom(a) => RecPsi::Atom(*a),
        Tlfp::Or(a, b) => RecPsi::Or(Box::new(from_tlfp(a)), Box::new(from_tlfp(b))),
        Tlfp::And(a, b) => RecPsi::And(Box::new(from_tlfp(a)), Box::new(from_tlfp(b))),
        Tlfp::Not(c) => RecPsi::Not(Box::new(from_tlfp(c))),
        Tlfp::F(c) => RecPsi::Ref(Box::new(RecPhi::X(
            Box::new(from_tlfp(c)),
            Box::new(RecPhi::Top),
        ))),
        Tlfp::P(c) => RecPsi::Ref(Box::new(RecPhi::Y(
            Box::new(from_tlfp(c)),
            Box::new(RecPhi::Top),
        ))),
    }
}

fn fp_top(sg: &Alphabet) -> Tlfp {
    let a = sg.first();
    fp_or(Tlfp::Atom(a), fp_not(Tlfp::Atom(a)))
}

fn at_first(sg: &Alphabet) -> Tlfp {
    fp_not(p_(fp_top(sg)))
}

fn at_last(sg: &Alphabet) -> Tlfp {
    fp_not(f_(fp_top(sg)))
}

/// Pointwise translation into the unary logic. Correctness of the step
/// cases rests on the convexity of recursive rankers: the first
/// parameter position satisfying the continuation is the step's landing
/// exactly when no earlier parameter position breaks it.
pub fn to_tlfp(f: &RecPsi, sg: &Alphabet) -> Tlfp {
    match f {
        RecPsi::Atom(a) => Tlfp::Atom(*a),
        RecPsi::Ref(p) => phi_to_tlfp(p, sg),
        RecPsi::Or(a, b) => fp_or(to_tlfp(a, sg), to_tlfp(b, sg)),
        RecPsi::And(a, b) => fp_and(to_tlfp(a, sg), to_tlfp(b, sg)),
        RecPsi::Not(c) => fp_not(to_tlfp(c, sg)),
    }
}

fn phi_to_tlfp(f: &RecPhi, sg: &Alphabet) -> Tlfp {
    match f {
        RecPhi::Top => fp_top(sg),
        RecPhi::Sp(c) => {
            // Truth of the continuation at position 1, independent of the
            // current position.
            let at_one = fp_and(at_first(sg), phi_to_tlfp(c, sg));
            fp_or(at_one.clone(), fp_or(p_(at_one.clone()), f_(at_one)))
        }
        RecPhi::Ep(c) => {
            let at_end = fp_and(at_last(sg), phi_to_tlfp(c, sg));
            fp_or(at_end.clone(), fp_or(f_(at_end.clone()), p_(at_end)))
        }
        RecPhi::X(param, cont) => {
            let p1 = to_tlfp(param, sg);
            let c = phi_to_tlfp(cont, sg);
            fp_and(
                f_(fp_and(p1.clone(), c.clone())),
                fp_not(f_(fp_and(p1, fp_and(fp_not(c.clone()), f_(c))))),
            )
        }
        RecPhi::Y(param, cont) => {
            let p1 = to_tlfp(param, sg);
            let c = phi_to_tlfp(cont, sg);
            fp_and(
                p_(fp_and(p1.clone(), c.clone())),
                fp_not(p_(fp_and(p1, fp_and(fp_not(c.clone()), p_(c))))),
            )
        }
    }
}

// ---------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------

pub fn to_sexpr(f: &RecPsi) -> SExpr {
    fn a(s: &str) -> SExpr {
        SExpr::atom(s)
    }
    match f {
        RecPsi::Atom(l) => SExpr::list(vec![a("atom"), SExpr::atom(l.to_string())]),
        RecPsi::Ref(p) => SExpr::list(vec![a("ref"), phi_to_sexpr(p)]),
        RecPsi::Or(x, y) => SExpr::list(vec![a("or"), to_sexpr(x), to_sexpr(y)]),
        RecPsi::And(x, y) => SExpr::list(vec![a("and"), to_sexpr(x), to_sexpr(y)]),
        RecPsi::Not(c) => SExpr::list(vec![a("not"), to_sexpr(c)]),
    }
}

fn phi_to_sexpr(f: &RecPhi) -> SExpr {
    fn a(s: &str) -> SExpr {
        SExpr::atom(s)
    }
    match f {
        RecPhi::Top => SExpr::list(vec![a("top")]),
        RecPhi::Sp(c) => SExpr::list(vec![a("sp"), phi_to_sexpr(c)]),
        RecPhi::Ep(c) => SExpr::list(vec![a("ep"), phi_to_sexpr(c)]),
        RecPhi::X(p, c) => SExpr::list(vec![a("xr"), to_sexpr(p), phi_to_sexpr(c)]),
        RecPhi::Y(p, c) => SExpr::list(vec![a("yr"), to_sexpr(p), phi_to_sexpr(c)]),
    }
}

pub fn from_sexpr(e: &SExpr, sg: &Alphabet) -> Result<RecPsi, String> {
    let items = e.as_list().ok_or("formula must be a list")?;
    let head = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or("formula needs a head")?;
    match head {
        "atom" => {
            if items.len() != 2 {
                return Err("atom takes one letter".into());
            }
            Ok(RecPsi::Atom(crate::tlxy::parse_letter(&items[1], sg)?))
        }
        "ref" => {
            if items.len() != 2 {
                return Err("ref takes one ranker".into());
            }
            Ok(RecPsi::Ref(Box::new(phi_from_sexpr(&items[1], sg)?)))
        }
        "not" => {
            if items.len() != 2 {
                return Err("not takes one subformula".into());
            }
            Ok(RecPsi::Not(Box::new(from_sexpr(&items[1], sg)?)))
        }
        "or" | "and" => {
            if items.len() != 3 {
                return Err(format!("{head} takes two subformulas"));
            }
            let x = Box::new(from_sexpr(&items[1], sg)?);
            let y = Box::new(from_sexpr(&items[2], sg)?);
            Ok(if head == "or" {
                RecPsi::Or(x, y)
            } else {
                RecPsi::And(x, y)
            })
        }
        other => Err(format!("unknown tlrec form {other}")),
    }
}

fn phi_from_sexpr(e: &SExpr, sg: &Alphabet) -> Result<RecPhi, String> {
    let items = e.as_list().ok_or("ranker must be a list")?;
    let head = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or("ranker needs a head")?;
    match head {
        "top" => Ok(RecPhi::Top),
        "sp" | "ep" => {
            if items.len() != 2 {
                return Err(format!("{head} takes one ranker"));
            }
            let c = Box::new(phi_from_sexpr(&items[1], sg)?);
            Ok(if head == "sp" {
                RecPhi::Sp(c)
            } else {
                RecPhi::Ep(c)
            })
        }
        "xr" | "yr" => {
            if items.len() != 3 {
                return Err(format!("{head} takes a parameter and a ranker"));
            }
            let p = Box::new(from_sexpr(&items[1], sg)?);
            let c = Box::new(phi_from_sexpr(&items[2], sg)?);
            Ok(if head == "xr" {
                RecPhi::X(p, c)
            } else {
                RecPhi::Y(p, c)
            })
        }
        other => Err(format!("unknown tlrec ranker form {other}")),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alphabet::{enumerate_words, parse_word};
    use crate::tlxy::tests::l;

    fn atom(c: char) -> RecPsi {
        RecPsi::Atom(l(c))
    }

    fn xref(p: RecPsi, c: RecPhi) -> RecPhi {
        RecPhi::X(Box::new(p), Box::new(c))
    }

    fn yref(p: RecPsi, c: RecPhi) -> RecPhi {
        RecPhi::Y(Box::new(p), Box::new(c))
    }

    /// The worked example: jump to the first position that is an `a`
    /// with a `b` before and a `c` after, then back to the last position
    /// from which some `c` ahead still has no `b` anywhere before it.
    pub(crate) fn running_example() -> RecPsi {
        let psi1 = RecPsi::And(
            Box::new(atom('a')),
            Box::new(RecPsi::And(
                Box::new(RecPsi::Ref(Box::new(yref(atom('b'), RecPhi::Top)))),
                Box::new(RecPsi::Ref(Box::new(xref(atom('c'), RecPhi::Top)))),
            )),
        );
        let psi2 = RecPsi::Ref(Box::new(xref(
            RecPsi::And(
                Box::new(atom('c')),
                Box::new(RecPsi::Not(Box::new(RecPsi::Ref(Box::new(yref(
                    atom('b'),
                    RecPhi::Top,
                )))))),
            ),
            RecPhi::Top,
        )));
        RecPsi::Ref(Box::new(xref(psi1, yref(psi2, RecPhi::Top))))
    }

    pub(crate) fn running_word(sg: &Alphabet) -> Word {
        parse_word("ccaccbccabbcacc", sg).unwrap()
    }

    #[test]
    fn running_example_accepts() {
        let sg = Alphabet::from_chars("abc").unwrap();
        let w = running_word(&sg);
        let f = running_example();
        // The navigation lands on position 9 and then back on 4.
        if let RecPsi::Ref(phi) = &f {
            if let RecPhi::X(psi1, cont) = phi.as_ref() {
                let first = (2..=w.len()).find(|&j| eval_psi(psi1, &w, j));
                assert_eq!(first, Some(9));
                if let RecPhi::Y(psi2, _) = cont.as_ref() {
                    let back = (1..9).rev().find(|&j| eval_psi(psi2, &w, j));
                    assert_eq!(back, Some(4));
                }
            }
        }
        assert!(member(&f, &w));
    }

    #[test]
    fn strictness_and_jumps() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let w = parse_word("ab", &sg).unwrap();
        // Strict future: nothing beyond the last position.
        let f = RecPsi::Ref(Box::new(xref(atom('a'), RecPhi::Top)));
        assert!(!eval_psi(&f, &w, 2));
        // The start jump holds everywhere.
        let sp = RecPsi::Ref(Box::new(RecPhi::Sp(Box::new(RecPhi::Top))));
        for i in w.positions() {
            assert!(eval_psi(&sp, &w, i));
        }
    }

    #[test]
    fn rlevel_examples() {
        assert_eq!(rlevel(&RecPsi::Ref(Box::new(RecPhi::Top))), 0);
        let xa = RecPsi::Ref(Box::new(xref(atom('a'), RecPhi::Top)));
        assert_eq!(rlevel(&xa), 1);
        // The worked example nests a ranker inside the second parameter,
        // whose own atom parameter sits three levels down.
        assert_eq!(rlevel(&running_example()), 3);
    }

    #[test]
    fn from_tlfp_shape_and_size() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let f = f_(Tlfp::Atom(l('a')));
        let t = from_tlfp(&f);
        assert_eq!(
            t,
            RecPsi::Ref(Box::new(xref(atom('a'), RecPhi::Top)))
        );
        assert_eq!(from_tlfp(&Tlfp::Atom(l('a'))), atom('a'));
        for phi in crate::tlfp::tests::corpus() {
            let t = from_tlfp(&phi);
            assert!(psi_size(&t) <= crate::tlfp::size(&phi));
            for w in enumerate_words(&sg, 6).filter(|w| !w.is_empty()) {
                for i in w.positions() {
                    assert_eq!(
                        eval_psi(&t, &w, i),
                        crate::tlfp::eval(&phi, &w, i),
                        "{phi:?} at {i} of {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn to_tlfp_pointwise_agreement() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let cases = vec![
            RecPsi::Ref(Box::new(RecPhi::Top)),
            RecPsi::Ref(Box::new(xref(atom('a'), RecPhi::Top))),
            RecPsi::Ref(Box::new(xref(
                RecPsi::And(
                    Box::new(atom('a')),
                    Box::new(RecPsi::Ref(Box::new(xref(atom('b'), RecPhi::Top)))),
                ),
                yref(atom('b'), RecPhi::Top),
            ))),
            RecPsi::Ref(Box::new(RecPhi::Sp(Box::new(xref(atom('b'), RecPhi::Top))))),
            RecPsi::Ref(Box::new(RecPhi::Ep(Box::new(yref(atom('a'), RecPhi::Top))))),
            RecPsi::Not(Box::new(RecPsi::Ref(Box::new(yref(
                RecPsi::Or(Box::new(atom('a')), Box::new(atom('b'))),
                xref(atom('a'), RecPhi::Top),
            ))))),
        ];
        for f in &cases {
            let t = to_tlfp(f, &sg);
            for w in enumerate_words(&sg, 6).filter(|w| !w.is_empty()) {
                for i in w.positions() {
                    assert_eq!(
                        crate::tlfp::eval(&t, &w, i),
                        eval_psi(f, &w, i),
                        "{f:?} at {i} of {w}"
                    );
                }
            }
        }
        assert_eq!(to_tlfp(&RecPsi::Ref(Box::new(RecPhi::Top)), &sg), fp_top(&sg));
    }

    #[test]
    fn running_example_through_at() {
        let sg = Alphabet::from_chars("abc").unwrap();
        let f = running_example();
        let t = to_tlfp(&f, &sg);
        let w = running_word(&sg);
        assert!(crate::tlfp::eval(&t, &w, 1));
        for w in enumerate_words(&sg, 4).filter(|w| !w.is_empty()) {
            for i in w.positions() {
                assert_eq!(crate::tlfp::eval(&t, &w, i), eval_psi(&f, &w, i), "{w} at {i}");
            }
        }
    }

    #[test]
    fn roundtrip_through_tlfp() {
        let sg = Alphabet::from_chars("ab").unwrap();
        for phi in crate::tlfp::tests::corpus() {
            let back = to_tlfp(&from_tlfp(&phi), &sg);
            for w in enumerate_words(&sg, 5).filter(|w| !w.is_empty()) {
                for i in w.positions() {
                    assert_eq!(
                        crate::tlfp::eval(&back, &w, i),
                        crate::tlfp::eval(&phi, &w, i),
                        "{phi:?} at {i} of {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn ranker_layer_is_convex() {
        let sg = Alphabet::from_chars("ab").unwrap();
        let rankers = vec![
            xref(atom('a'), RecPhi::Top),
            yref(
                RecPsi::Or(Box::new(atom('a')), Box::new(atom('b'))),
                xref(atom('a'), RecPhi::Top),
            ),
            xref(
                RecPsi::And(
                    Box::new(atom('b')),
                    Box::new(RecPsi::Ref(Box::new(yref(atom('a'), RecPhi::Top)))),
                ),
                yref(atom('b'), RecPhi::Top),
            ),
        ];
        for phi in &rankers {
            for w in enumerate_words(&sg, 6).filter(|w| !w.is_empty()) {
                let sat: Vec<usize> = w.positions().filter(|&i| eval_phi(phi, &w, i)).collect();
                for pair in sat.windows(2) {
                    assert_eq!(pair[1], pair[0] + 1, "{phi:?} not convex on {w}: {sat:?}");
                }
            }
        }
    }

    #[test]
    fn sexpr_roundtrip() {
        let sg = Alphabet::from_chars("abc").unwrap();
        let f = running_example();
        let text = to_sexpr(&f).to_string();
        let parsed = from_sexpr(&crate::sexpr::parse_sexpr(&text).unwrap(), &sg).unwrap();
        assert_eq!(parsed, f);
    }
}
