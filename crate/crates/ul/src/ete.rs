//! Extended Turtle Expressions.
//!
//! ETEs are the compositional notation the automaton constructions work
//! in: accept/reject, one-step moves guarded by a letter set, directional
//! scans, and a conditional. [`eval_ete`] is the reference semantics;
//! [`compile_ete`] produces a po2dfa with the same verdict and final
//! position from every start, with state count linear in the ETE size.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::alphabet::{Alphabet, Word};
use crate::po2dfa::{parse_ext_letter, ExtLetter, Po2Dfa, Polarity, StateId};
use crate::sexpr::SExpr;

pub type ExtSet = BTreeSet<ExtLetter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ete {
    Acc,
    Rej,
    /// Accept one step right if the current letter is in the set.
    FUnit(ExtSet),
    /// Accept one step left if the current letter is in the set.
    BUnit(ExtSet),
    /// Scan strictly right for the first letter of `B`, intermediates in
    /// `A \ B`; rejects where the constraint breaks or at the `<` marker.
    FScan(ExtSet, ExtSet),
    /// Leftward dual of `FScan`.
    BScan(ExtSet, ExtSet),
    /// Run the guard; continue with the second operand from where it
    /// accepted, or with the third from where it rejected.
    Cond(Box<Ete>, Box<Ete>, Box<Ete>),
}

impl Ete {
    pub fn size(&self) -> usize {
        match self {
            Ete::Acc | Ete::Rej | Ete::FUnit(_) | Ete::BUnit(_) | Ete::FScan(..) | Ete::BScan(..) => 1,
            Ete::Cond(a, b, c) => 1 + a.size() + b.size() + c.size(),
        }
    }
}

/// `e1 ; e2` — run `e2` from where `e1` accepted.
pub fn seq(e1: Ete, e2: Ete) -> Ete {
    Ete::Cond(Box::new(e1), Box::new(e2), Box::new(Ete::Rej))
}

/// The full extended alphabet as a set.
pub fn sigma_ext(alphabet: &Alphabet) -> ExtSet {
    let mut s: ExtSet = alphabet.iter().map(ExtLetter::Sym).collect();
    s.insert(ExtLetter::Start);
    s.insert(ExtLetter::End);
    s
}

/// Only the plain letters.
pub fn sigma_only(alphabet: &Alphabet) -> ExtSet {
    alphabet.iter().map(ExtLetter::Sym).collect()
}

/// Direct recursive evaluation from head position `pos` in `0..=len+1`.
/// Returns the verdict and the final head position.
pub fn eval_ete(e: &Ete, w: &Word, pos: usize) -> (bool, usize) {
    let last = w.len() + 1;
    debug_assert!(pos <= last);
    match e {
        Ete::Acc => (true, pos),
        Ete::Rej => (false, pos),
        Ete::FUnit(set) => {
            if pos < last && set.contains(&crate::po2dfa::ext_at(w, pos)) {
                (true, pos + 1)
            } else {
                (false, pos)
            }
        }
        Ete::BUnit(set) => {
            if pos > 0 && set.contains(&crate::po2dfa::ext_at(w, pos)) {
                (true, pos - 1)
            } else {
                (false, pos)
            }
        }
        Ete::FScan(a, b) => {
            for j in pos + 1..=last {
                let x = crate::po2dfa::ext_at(w, j);
                if b.contains(&x) {
                    return (true, j);
                }
                if !a.contains(&x) {
                    return (false, j);
                }
            }
            (false, last)
        }
        Ete::BScan(a, b) => {
            for j in (0..pos).rev() {
                let x = crate::po2dfa::ext_at(w, j);
                if b.contains(&x) {
                    return (true, j);
                }
                if !a.contains(&x) {
                    return (false, j);
                }
            }
            (false, 0)
        }
        Ete::Cond(e1, e2, e3) => {
            let (v, j) = eval_ete(e1, w, pos);
            if v {
                eval_ete(e2, w, j)
            } else {
                eval_ete(e3, w, j)
            }
        }
    }
}

/// Per-letter entry point of a compiled fragment: given the letter read by
/// the transition that hands over control, the state to enter.
type Entry = Rc<dyn Fn(ExtLetter) -> StateId>;

struct Builder {
    alphabet: Alphabet,
    names: Vec<String>,
    polarity: Vec<Polarity>,
    delta: Vec<BTreeMap<ExtLetter, StateId>>,
}

const T: StateId = 0;
const R: StateId = 1;

impl Builder {
    fn new(alphabet: &Alphabet) -> Builder {
        Builder {
            alphabet: alphabet.clone(),
            names: vec!["t".into(), "r".into()],
            polarity: vec![Polarity::Accept, Polarity::Reject],
            delta: vec![BTreeMap::new(), BTreeMap::new()],
        }
    }

    fn fresh(&mut self, pol: Polarity) -> StateId {
        let id = self.names.len();
        self.names.push(format!("q{id}"));
        self.polarity.push(pol);
        self.delta.push(BTreeMap::new());
        id
    }

    fn set(&mut self, q: StateId, x: ExtLetter, tgt: StateId) {
        // End-marker targets must keep the head on the word.
        debug_assert!(x != ExtLetter::End || self.polarity[tgt] != Polarity::L);
        debug_assert!(x != ExtLetter::Start || self.polarity[tgt] != Polarity::R);
        self.delta[q].insert(x, tgt);
    }

    fn emit(&mut self, e: &Ete, acc: Entry, rej: Entry) -> Entry {
        match e {
            Ete::Acc => acc,
            Ete::Rej => rej,
            Ete::FScan(a, b) => {
                let q = self.fresh(Polarity::L);
                for l in self.alphabet.clone().iter() {
                    let x = ExtLetter::Sym(l);
                    if b.contains(&x) {
                        let tgt = acc(x);
                        self.set(q, x, tgt);
                    } else if !a.contains(&x) {
                        let tgt = rej(x);
                        self.set(q, x, tgt);
                    }
                }
                let end_tgt = if b.contains(&ExtLetter::End) {
                    acc(ExtLetter::End)
                } else {
                    rej(ExtLetter::End)
                };
                self.set(q, ExtLetter::End, end_tgt);
                self.set(q, ExtLetter::Start, R); // unreachable for an L state
                let rej_end = rej.clone();
                Rc::new(move |x| if x == ExtLetter::End { rej_end(x) } else { q })
            }
            Ete::BScan(a, b) => {
                let q = self.fresh(Polarity::R);
                for l in self.alphabet.clone().iter() {
                    let x = ExtLetter::Sym(l);
                    if b.contains(&x) {
                        let tgt = acc(x);
                        self.set(q, x, tgt);
                    } else if !a.contains(&x) {
                        let tgt = rej(x);
                        self.set(q, x, tgt);
                    }
                }
                let start_tgt = if b.contains(&ExtLetter::Start) {
                    acc(ExtLetter::Start)
                } else {
                    rej(ExtLetter::Start)
                };
                self.set(q, ExtLetter::Start, start_tgt);
                self.set(q, ExtLetter::End, R); // unreachable for an R state
                let rej_start = rej.clone();
                Rc::new(move |x| if x == ExtLetter::Start { rej_start(x) } else { q })
            }
            Ete::FUnit(set) => {
                let movable: Vec<ExtLetter> = set
                    .iter()
                    .copied()
                    .filter(|x| *x != ExtLetter::End)
                    .collect();
                let fwd = if movable.is_empty() {
                    None
                } else {
                    let u = self.fresh(Polarity::L);
                    for l in self.alphabet.clone().iter() {
                        let x = ExtLetter::Sym(l);
                        let tgt = acc(x);
                        self.set(u, x, tgt);
                    }
                    let tgt = acc(ExtLetter::End);
                    self.set(u, ExtLetter::End, tgt);
                    self.set(u, ExtLetter::Start, R); // unreachable
                    Some(u)
                };
                let set = set.clone();
                Rc::new(move |x| match fwd {
                    Some(u) if x != ExtLetter::End && set.contains(&x) => u,
                    _ => rej(x),
                })
            }
            Ete::BUnit(set) => {
                let movable: Vec<ExtLetter> = set
                    .iter()
                    .copied()
                    .filter(|x| *x != ExtLetter::Start)
                    .collect();
                let bwd = if movable.is_empty() {
                    None
                } else {
                    let v = self.fresh(Polarity::R);
                    for l in self.alphabet.clone().iter() {
                        let x = ExtLetter::Sym(l);
                        let tgt = acc(x);
                        self.set(v, x, tgt);
                    }
                    let tgt = acc(ExtLetter::Start);
                    self.set(v, ExtLetter::Start, tgt);
                    self.set(v, ExtLetter::End, R); // unreachable
                    Some(v)
                };
                let set = set.clone();
                Rc::new(move |x| match bwd {
                    Some(v) if x != ExtLetter::Start && set.contains(&x) => v,
                    _ => rej(x),
                })
            }
            Ete::Cond(e1, e2, e3) => {
                let entry3 = self.emit(e3, acc.clone(), rej.clone());
                let entry2 = self.emit(e2, acc, rej);
                self.emit(e1, entry2, entry3)
            }
        }
    }
}

/// Extra states the compilation may add beyond one per scan/unit node.
pub const COMPILE_STATE_SLACK: usize = 3;

/// Compiles an ETE into a po2dfa that, from any start position, halts with
/// the same verdict at the same position as [`eval_ete`]. The state count
/// is at most `size + COMPILE_STATE_SLACK`.
pub fn compile_ete(e: &Ete, alphabet: &Alphabet) -> Po2Dfa {
    let mut b = Builder::new(alphabet);
    match e {
        Ete::Acc => {
            return Po2Dfa::new(alphabet.clone(), b.names, b.polarity, T, b.delta);
        }
        Ete::Rej => {
            return Po2Dfa::new(alphabet.clone(), b.names, b.polarity, R, b.delta);
        }
        _ => {}
    }
    let entry = b.emit(e, Rc::new(|_| T), Rc::new(|_| R));
    let init = b.fresh(Polarity::L);
    for l in alphabet.iter() {
        let x = ExtLetter::Sym(l);
        let tgt = entry(x);
        b.set(init, x, tgt);
    }
    let tgt = entry(ExtLetter::Start);
    b.set(init, ExtLetter::Start, tgt);
    let tgt = entry(ExtLetter::End);
    b.set(init, ExtLetter::End, tgt);
    let m = Po2Dfa::new(alphabet.clone(), b.names, b.polarity, init, b.delta);
    debug_assert!(m.state_count() <= e.size() + COMPILE_STATE_SLACK);
    debug_assert!(m.validate().is_empty(), "compiled automaton validates");
    m
}

fn set_to_sexpr(s: &ExtSet) -> SExpr {
    SExpr::list(s.iter().map(|x| SExpr::atom(x.to_string())).collect())
}

pub fn to_sexpr(e: &Ete) -> SExpr {
    match e {
        Ete::Acc => SExpr::list(vec![SExpr::atom("acc")]),
        Ete::Rej => SExpr::list(vec![SExpr::atom("rej")]),
        Ete::FUnit(s) => SExpr::list(vec![SExpr::atom("funit"), set_to_sexpr(s)]),
        Ete::BUnit(s) => SExpr::list(vec![SExpr::atom("bunit"), set_to_sexpr(s)]),
        Ete::FScan(a, b) => SExpr::list(vec![SExpr::atom("fscan"), set_to_sexpr(a), set_to_sexpr(b)]),
        Ete::BScan(a, b) => SExpr::list(vec![SExpr::atom("bscan"), set_to_sexpr(a), set_to_sexpr(b)]),
        Ete::Cond(e1, e2, e3) => SExpr::list(vec![
            SExpr::atom("cond"),
            to_sexpr(e1),
            to_sexpr(e2),
            to_sexpr(e3),
        ]),
    }
}

fn parse_set(e: &SExpr, alphabet: &Alphabet) -> Result<ExtSet, String> {
    let items = e.as_list().ok_or("letter set must be a list")?;
    let mut out = ExtSet::new();
    for item in items {
        let tok = item.as_atom().ok_or("letter set entries must be atoms")?;
        out.insert(parse_ext_letter(tok, alphabet)?);
    }
    Ok(out)
}

pub fn from_sexpr(e: &SExpr, alphabet: &Alphabet) -> Result<Ete, String> {
    let items = e.as_list().ok_or("ete form must be a list")?;
    let head = items.first().and_then(SExpr::as_atom).ok_or("ete form needs a head")?;
    match (head, items.len()) {
        ("acc", 1) => Ok(Ete::Acc),
        ("rej", 1) => Ok(Ete::Rej),
        ("funit", 2) => Ok(Ete::FUnit(parse_set(&items[1], alphabet)?)),
        ("bunit", 2) => Ok(Ete::BUnit(parse_set(&items[1], alphabet)?)),
        ("fscan", 3) => {
            let b = parse_set(&items[2], alphabet)?;
            if b.is_empty() {
                return Err("fscan target set must be non-empty".into());
            }
            Ok(Ete::FScan(parse_set(&items[1], alphabet)?, b))
        }
        ("bscan", 3) => {
            let b = parse_set(&items[2], alphabet)?;
            if b.is_empty() {
                return Err("bscan target set must be non-empty".into());
            }
            Ok(Ete::BScan(parse_set(&items[1], alphabet)?, b))
        }
        ("cond", 4) => Ok(Ete::Cond(
            Box::new(from_sexpr(&items[1], alphabet)?),
            Box::new(from_sexpr(&items[2], alphabet)?),
            Box::new(from_sexpr(&items[3], alphabet)?),
        )),
        _ => Err(format!("unknown ete form {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{enumerate_words, parse_word};
    use crate::po2dfa::Verdict;

    fn sigma() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn set(alphabet: &Alphabet, spec: &str) -> ExtSet {
        spec.split_whitespace()
            .map(|t| parse_ext_letter(t, alphabet).unwrap())
            .collect()
    }

    #[test]
    fn eval_basics() {
        let s = sigma();
        let w = parse_word("ab", &s).unwrap();
        assert_eq!(eval_ete(&Ete::Acc, &w, 2), (true, 2));
        let cond = Ete::Cond(Box::new(Ete::Rej), Box::new(Ete::Acc), Box::new(Ete::Acc));
        assert_eq!(eval_ete(&cond, &w, 1), (true, 1));
    }

    #[test]
    fn fscan_rejects_at_intervening_letter() {
        let s = Alphabet::from_chars("abcd").unwrap();
        let w = parse_word("acbd", &s).unwrap();
        let e = Ete::FScan(set(&s, "a c"), set(&s, "d"));
        assert_eq!(eval_ete(&e, &w, 1), (false, 3));
    }

    #[test]
    fn compiled_matches_eval_exhaustively() {
        let s = sigma();
        let a = set(&s, "a");
        let all = sigma_ext(&s);
        let candidates = vec![
            Ete::FScan(all.clone(), a.clone()),
            Ete::BScan(all.clone(), a.clone()),
            Ete::FUnit(sigma_only(&s)),
            Ete::BUnit(set(&s, "a <")),
            seq(Ete::FScan(all.clone(), set(&s, "<")), Ete::BScan(all.clone(), a.clone())),
            Ete::Cond(
                Box::new(Ete::FScan(all.clone(), set(&s, "b"))),
                Box::new(Ete::BUnit(sigma_only(&s))),
                Box::new(Ete::FUnit(set(&s, "<"))),
            ),
        ];
        for e in candidates {
            let m = compile_ete(&e, &s);
            assert!(m.validate().is_empty(), "{e:?}");
            for w in enumerate_words(&s, 5) {
                for p0 in 0..=w.len() + 1 {
                    let (v, j) = eval_ete(&e, &w, p0);
                    let trace = m.run(&w, p0).unwrap();
                    assert_eq!(trace.verdict == Verdict::Accept, v, "{e:?} on {w} from {p0}");
                    assert_eq!(trace.final_pos, j, "{e:?} on {w} from {p0}");
                }
            }
        }
    }

    #[test]
    fn fscan_compiles_to_contains_a_after_start() {
        let s = sigma();
        let e = Ete::FScan(sigma_ext(&s), set(&s, "a"));
        let m = compile_ete(&e, &s);
        for w in enumerate_words(&s, 5) {
            for p0 in 0..=w.len() + 1 {
                let expect = (p0 + 1..=w.len()).any(|j| w.at(j).unwrap().ch() == 'a');
                let got = m.run(&w, p0).unwrap().verdict == Verdict::Accept;
                assert_eq!(got, expect, "{w} from {p0}");
            }
        }
    }

    #[test]
    fn acc_compiles_to_single_live_state() {
        let s = sigma();
        let m = compile_ete(&Ete::Acc, &s);
        assert_eq!(m.state_count(), 2);
        for w in enumerate_words(&s, 3) {
            for p0 in 0..=w.len() + 1 {
                let t = m.run(&w, p0).unwrap();
                assert_eq!(t.verdict, Verdict::Accept);
                assert_eq!(t.final_pos, p0);
            }
        }
    }

    #[test]
    fn example1_ete_agrees_with_fig2() {
        let s = Alphabet::from_chars("abcd").unwrap();
        // Seek the right end, back-scan to the last a, then scan right for
        // a d crossing only c's.
        let e = seq(
            seq(
                Ete::FScan(sigma_ext(&s), set(&s, "<")),
                Ete::BScan(sigma_ext(&s), set(&s, "a")),
            ),
            Ete::FScan(set(&s, "c d"), set(&s, "d")),
        );
        let m = compile_ete(&e, &s);
        let fig2 = crate::po2dfa::tests::fig2();
        for w in enumerate_words(&s, 6) {
            assert_eq!(m.member(&w), fig2.member(&w), "{w}");
        }
    }

    #[test]
    fn sexpr_roundtrip() {
        let s = sigma();
        let e = Ete::Cond(
            Box::new(Ete::FScan(sigma_ext(&s), set(&s, "a"))),
            Box::new(Ete::Acc),
            Box::new(Ete::BUnit(set(&s, "b >"))),
        );
        let text = to_sexpr(&e).to_string();
        assert_eq!(from_sexpr(&crate::sexpr::parse_sexpr(&text).unwrap(), &s).unwrap(), e);
    }
}
