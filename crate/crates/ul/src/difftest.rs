//! Brute-force oracles, seeded generators and bounded language
//! equivalence.
//!
//! Everything here is deterministic per seed, so that any counterexample
//! reproduces from the command line with the same inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{enumerate_words, Alphabet, Letter, Word};
use crate::duds::{Anchor, Builder as DudsBuilder, Duds};
use crate::po2dfa::{ExtLetter, Po2Dfa, Polarity};
use crate::tlfp::Tlfp;
use crate::tlrec::{RecPhi, RecPsi};
use crate::tlxy::{Ranker, RStep, Tlxy};
use crate::uitlpm::Uitl;

/// A labelled total word predicate.
pub struct LanguagePredicate<'a> {
    pub label: String,
    pub f: Box<dyn Fn(&Word) -> bool + 'a>,
}

impl<'a> LanguagePredicate<'a> {
    pub fn new(label: impl Into<String>, f: impl Fn(&Word) -> bool + 'a) -> LanguagePredicate<'a> {
        LanguagePredicate {
            label: label.into(),
            f: Box::new(f),
        }
    }

    pub fn test(&self, w: &Word) -> bool {
        (self.f)(w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    Equivalent,
    Counterexample { word: Word, lhs: bool, rhs: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivReport {
    pub checked: u64,
    pub bound: usize,
    pub verdict: EquivVerdict,
}

/// Exhaustive comparison over all words up to the bound, in
/// length-lexicographic order, so a counterexample is the shortest one.
pub fn equiv_bounded(
    p: &LanguagePredicate<'_>,
    q: &LanguagePredicate<'_>,
    alphabet: &Alphabet,
    max_len: usize,
) -> EquivReport {
    let mut checked = 0u64;
    for w in enumerate_words(alphabet, max_len) {
        checked += 1;
        let lhs = p.test(&w);
        let rhs = q.test(&w);
        if lhs != rhs {
            // Counterexamples must re-verify before being reported.
            assert_eq!(p.test(&w), lhs);
            assert_eq!(q.test(&w), rhs);
            return EquivReport {
                checked,
                bound: max_len,
                verdict: EquivVerdict::Counterexample { word: w, lhs, rhs },
            };
        }
    }
    EquivReport {
        checked,
        bound: max_len,
        verdict: EquivVerdict::Equivalent,
    }
}

/// The running example's language by direct scan: some `a`, followed
/// (beyond later letters in `c`) by a `d`, with no `b` in between.
pub fn regex_oracle_example1(alphabet: &Alphabet) -> LanguagePredicate<'static> {
    let a = Letter::new('a').unwrap();
    let b = Letter::new('b').unwrap();
    let d = Letter::new('d').unwrap();
    assert!(alphabet.contains(a) && alphabet.contains(b) && alphabet.contains(d));
    LanguagePredicate::new("Sigma* a c* d {b,c,d}*", move |w: &Word| {
        let Some(last_a) = (1..=w.len()).rev().find(|&i| w.at(i) == Some(a)) else {
            return false;
        };
        for j in last_a + 1..=w.len() {
            let c = w.at(j).unwrap();
            if c == d {
                return true;
            }
            if c == b {
                return false;
            }
        }
        false
    })
}

pub type Seed = u64;

pub fn rng_from_seed(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_letter(rng: &mut ChaCha8Rng, sg: &Alphabet) -> Letter {
    let i = rng.gen_range(0..sg.len());
    sg.letters()[i]
}

pub fn gen_word(rng: &mut ChaCha8Rng, sg: &Alphabet, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| pick_letter(rng, sg)).collect())
}

// ---------------------------------------------------------------------
// Formula generators
// ---------------------------------------------------------------------

pub fn gen_tlxy(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize) -> Tlxy {
    if budget <= 1 {
        return if rng.gen_bool(0.4) {
            Tlxy::Top
        } else {
            Tlxy::Atom(pick_letter(rng, sg))
        };
    }
    let rest = budget - 1;
    match rng.gen_range(0..12) {
        0 => Tlxy::Sp(Box::new(gen_tlxy(rng, sg, rest))),
        1 => Tlxy::Ep(Box::new(gen_tlxy(rng, sg, rest))),
        2 => Tlxy::X(pick_letter(rng, sg), Box::new(gen_tlxy(rng, sg, rest))),
        3 => Tlxy::Y(pick_letter(rng, sg), Box::new(gen_tlxy(rng, sg, rest))),
        4 => Tlxy::Wx(pick_letter(rng, sg), Box::new(gen_tlxy(rng, sg, rest))),
        5 => Tlxy::Wy(pick_letter(rng, sg), Box::new(gen_tlxy(rng, sg, rest))),
        6 => Tlxy::X1(Box::new(gen_tlxy(rng, sg, rest))),
        7 => Tlxy::Y1(Box::new(gen_tlxy(rng, sg, rest))),
        8 => Tlxy::Not(Box::new(gen_tlxy(rng, sg, rest))),
        9 | 10 => {
            let left = rest / 2 + 1;
            let right = rest.saturating_sub(left).max(1);
            let a = gen_tlxy(rng, sg, left);
            let b = gen_tlxy(rng, sg, right);
            if rng.gen_bool(0.5) {
                Tlxy::Or(Box::new(a), Box::new(b))
            } else {
                Tlxy::And(Box::new(a), Box::new(b))
            }
        }
        _ => Tlxy::Atom(pick_letter(rng, sg)),
    }
}

/// Random anchored ranker of exactly `len` steps after the anchor.
pub fn gen_ranker(rng: &mut ChaCha8Rng, sg: &Alphabet, len: usize) -> Ranker {
    let mut steps = vec![if rng.gen_bool(0.5) { RStep::Sp } else { RStep::Ep }];
    for _ in 0..len {
        steps.push(match rng.gen_range(0..8) {
            0 => RStep::Sp,
            1 => RStep::Ep,
            2 => RStep::X(pick_letter(rng, sg)),
            3 => RStep::Y(pick_letter(rng, sg)),
            4 => RStep::Wx(pick_letter(rng, sg)),
            5 => RStep::Wy(pick_letter(rng, sg)),
            6 => RStep::X1,
            _ => RStep::Y1,
        });
    }
    Ranker(steps)
}

pub fn gen_duds(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize) -> Duds {
    let mut b = DudsBuilder::new();
    let root = gen_duds_node(rng, sg, budget, &mut b);
    let anchor = match rng.gen_range(0..3) {
        0 => Anchor::Start,
        1 => Anchor::End,
        _ => Anchor::Postend,
    };
    b.finish(root, anchor)
}

fn gen_letter_set(rng: &mut ChaCha8Rng, sg: &Alphabet) -> std::collections::BTreeSet<Letter> {
    sg.iter().filter(|_| rng.gen_bool(0.6)).collect()
}

fn gen_duds_node(
    rng: &mut ChaCha8Rng,
    sg: &Alphabet,
    budget: usize,
    b: &mut DudsBuilder,
) -> usize {
    if budget <= 1 {
        return if rng.gen_bool(0.3) {
            b.top()
        } else {
            b.atom(pick_letter(rng, sg))
        };
    }
    let rest = budget - 1;
    match rng.gen_range(0..6) {
        0 | 1 => {
            let f = gen_duds_node(rng, sg, rest, b);
            let set = gen_letter_set(rng, sg);
            let letter = pick_letter(rng, sg);
            if rng.gen_bool(0.5) {
                b.until(set, letter, f)
            } else {
                b.since(set, letter, f)
            }
        }
        2 => {
            let f = gen_duds_node(rng, sg, rest, b);
            b.not(f)
        }
        3 | 4 => {
            let left = rest / 2 + 1;
            let right = rest.saturating_sub(left).max(1);
            let x = gen_duds_node(rng, sg, left, b);
            let y = gen_duds_node(rng, sg, right, b);
            if rng.gen_bool(0.5) {
                b.or2(x, y)
            } else {
                b.and2(x, y)
            }
        }
        _ => b.atom(pick_letter(rng, sg)),
    }
}

pub fn gen_uitl(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize) -> Uitl {
    if budget <= 1 {
        return match rng.gen_range(0..4) {
            0 => Uitl::Top,
            1 => Uitl::Pt,
            2 => Uitl::Unit,
            _ => Uitl::Atom(pick_letter(rng, sg)),
        };
    }
    let rest = budget - 1;
    match rng.gen_range(0..12) {
        0 => Uitl::Bp(Box::new(gen_uitl(rng, sg, rest))),
        1 => Uitl::Ep(Box::new(gen_uitl(rng, sg, rest))),
        2 | 3 => {
            let left = rest / 2 + 1;
            let right = rest.saturating_sub(left).max(1);
            let d1 = Box::new(gen_uitl(rng, sg, left));
            let d2 = Box::new(gen_uitl(rng, sg, right));
            let a = pick_letter(rng, sg);
            match rng.gen_range(0..4) {
                0 => Uitl::First(a, d1, d2),
                1 => Uitl::Last(a, d1, d2),
                2 => Uitl::FirstP(a, d1, d2),
                _ => Uitl::LastM(a, d1, d2),
            }
        }
        4 => Uitl::ShrinkL(Box::new(gen_uitl(rng, sg, rest))),
        5 => Uitl::ShrinkR(Box::new(gen_uitl(rng, sg, rest))),
        6 => Uitl::ExtendR(Box::new(gen_uitl(rng, sg, rest))),
        7 => Uitl::ExtendL(Box::new(gen_uitl(rng, sg, rest))),
        8 => Uitl::Not(Box::new(gen_uitl(rng, sg, rest))),
        9 | 10 => {
            let left = rest / 2 + 1;
            let right = rest.saturating_sub(left).max(1);
            let x = Box::new(gen_uitl(rng, sg, left));
            let y = Box::new(gen_uitl(rng, sg, right));
            if rng.gen_bool(0.5) {
                Uitl::Or(x, y)
            } else {
                Uitl::And(x, y)
            }
        }
        _ => Uitl::Atom(pick_letter(rng, sg)),
    }
}

/// Random formula with at most `max_modals` distinct modal subformulas
/// (regenerates until the bound holds).
pub fn gen_tlfp(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize, max_modals: usize) -> Tlfp {
    loop {
        let f = gen_tlfp_raw(rng, sg, budget);
        if crate::tlfp::sform(&f).len() <= max_modals {
            return f;
        }
    }
}

fn gen_tlfp_raw(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize) -> Tlfp {
    if budget <= 1 {
        return Tlfp::Atom(pick_letter(rng, sg));
    }
    let rest = budget - 1;
    match rng.gen_range(0..6) {
        0 => Tlfp::F(Box::new(gen_tlfp_raw(rng, sg, rest))),
        1 => Tlfp::P(Box::new(gen_tlfp_raw(rng, sg, rest))),
        2 => Tlfp::Not(Box::new(gen_tlfp_raw(rng, sg, rest))),
        3 | 4 => {
            let left = rest / 2 + 1;
            let right = rest.saturating_sub(left).max(1);
            let x = Box::new(gen_tlfp_raw(rng, sg, left));
            let y = Box::new(gen_tlfp_raw(rng, sg, right));
            if rng.gen_bool(0.5) {
                Tlfp::Or(x, y)
            } else {
                Tlfp::And(x, y)
            }
        }
        _ => Tlfp::Atom(pick_letter(rng, sg)),
    }
}

/// Random two-layer formula with recursion level at most `max_rlevel`.
pub fn gen_tlrec(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize, max_rlevel: usize) -> RecPsi {
    gen_rec_psi(rng, sg, budget, max_rlevel)
}

fn gen_rec_psi(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize, depth: usize) -> RecPsi {
    if budget <= 1 {
        return RecPsi::Atom(pick_letter(rng, sg));
    }
    let rest = budget - 1;
    match rng.gen_range(0..6) {
        0 | 1 => RecPsi::Ref(Box::new(gen_rec_phi(rng, sg, rest, depth))),
        2 => RecPsi::Not(Box::new(gen_rec_psi(rng, sg, rest, depth))),
        3 | 4 => {
            let left = rest / 2 + 1;
            let right = rest.saturating_sub(left).max(1);
            let x = Box::new(gen_rec_psi(rng, sg, left, depth));
            let y = Box::new(gen_rec_psi(rng, sg, right, depth));
            if rng.gen_bool(0.5) {
                RecPsi::Or(x, y)
            } else {
                RecPsi::And(x, y)
            }
        }
        _ => RecPsi::Atom(pick_letter(rng, sg)),
    }
}

fn gen_rec_phi(rng: &mut ChaCha8Rng, sg: &Alphabet, budget: usize, depth: usize) -> RecPhi {
    if budget <= 1 || depth == 0 {
        return RecPhi::Top;
    }
    let rest = budget - 1;
    match rng.gen_range(0..6) {
        0 => RecPhi::Sp(Box::new(gen_rec_phi(rng, sg, rest, depth))),
        1 => RecPhi::Ep(Box::new(gen_rec_phi(rng, sg, rest, depth))),
        2 | 3 | 4 => {
            let left = rest / 2 + 1;
            let right = rest.saturating_sub(left).max(1);
            let param = if depth == 1 {
                RecPsi::Atom(pick_letter(rng, sg))
            } else {
                gen_rec_psi(rng, sg, left, depth - 1)
            };
            let cont = gen_rec_phi(rng, sg, right, depth);
            if rng.gen_bool(0.5) {
                RecPhi::X(Box::new(param), Box::new(cont))
            } else {
                RecPhi::Y(Box::new(param), Box::new(cont))
            }
        }
        _ => RecPhi::Top,
    }
}

// ---------------------------------------------------------------------
// Automaton generator
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BounceMode {
    /// End-marker transitions go to the terminals only.
    TerminalOnly,
    /// End-marker transitions may also target states whose progress
    /// letters avoid the bouncing state's loop set, the class the
    /// formula translation covers.
    Compatible,
}

/// Random validated automaton: topologically ordered states, random
/// polarities, progress edges pointing strictly downward, end-marker
/// totality enforced.
pub fn gen_po2dfa(
    rng: &mut ChaCha8Rng,
    sg: &Alphabet,
    n_states: usize,
    mode: BounceMode,
) -> Po2Dfa {
    assert!(n_states >= 3, "need at least init plus the two terminals");
    let n = n_states;
    // ids: 0 = accept, 1 = reject, 2.. ascending, init = n-1.
    let mut names = vec!["t".to_string(), "r".to_string()];
    let mut polarity = vec![Polarity::Accept, Polarity::Reject];
    for q in 2..n {
        names.push(format!("s{q}"));
        polarity.push(if rng.gen_bool(0.5) {
            Polarity::L
        } else {
            Polarity::R
        });
    }
    let mut delta: Vec<std::collections::BTreeMap<ExtLetter, usize>> =
        vec![std::collections::BTreeMap::new(); n];
    // Progress on letters, strictly downward.
    for q in 2..n {
        for l in sg.iter() {
            if rng.gen_bool(0.45) {
                let tgt = rng.gen_range(0..q);
                delta[q].insert(ExtLetter::Sym(l), tgt);
            }
        }
    }
    // End markers. A right-marker transition must not enter an L state, a
    // left-marker transition must not enter an R state.
    for q in 2..n {
        let loop_set: Vec<Letter> = sg
            .iter()
            .filter(|l| !delta[q].contains_key(&ExtLetter::Sym(*l)))
            .collect();
        let compatible = |tgt: usize, delta: &Vec<std::collections::BTreeMap<ExtLetter, usize>>| {
            loop_set
                .iter()
                .all(|l| !delta[tgt].contains_key(&ExtLetter::Sym(*l)))
        };
        let end_candidates: Vec<usize> = match mode {
            BounceMode::TerminalOnly => vec![0, 1],
            BounceMode::Compatible => {
                let mut v = vec![0, 1];
                for tgt in 2..q {
                    if polarity[tgt] == Polarity::R && compatible(tgt, &delta) {
                        v.push(tgt);
                    }
                }
                // The initial state's unconditional sail is handled at
                // the anchor, so any backward scanner is fine there.
                if q == n - 1 && polarity[q] == Polarity::L && loop_set.len() == sg.len() {
                    for tgt in 2..q {
                        if polarity[tgt] == Polarity::R && !v.contains(&tgt) {
                            v.push(tgt);
                        }
                    }
                }
                v
            }
        };
        let start_candidates: Vec<usize> = match mode {
            BounceMode::TerminalOnly => vec![0, 1],
            BounceMode::Compatible => {
                let mut v = vec![0, 1];
                for tgt in 2..q {
                    if polarity[tgt] == Polarity::L && compatible(tgt, &delta) {
                        v.push(tgt);
                    }
                }
                v
            }
        };
        let pick = |rng: &mut ChaCha8Rng, cands: &[usize]| -> usize {
            if cands.len() > 2 && rng.gen_bool(0.4) {
                cands[rng.gen_range(2..cands.len())]
            } else {
                cands[rng.gen_range(0..2)]
            }
        };
        let end_tgt = pick(rng, &end_candidates);
        let start_tgt = pick(rng, &start_candidates);
        delta[q].insert(ExtLetter::End, end_tgt);
        delta[q].insert(ExtLetter::Start, start_tgt);
    }
    let m = Po2Dfa::new(sg.clone(), names, polarity, n - 1, delta);
    debug_assert!(m.validate().is_empty(), "generated automaton validates");
    m
}

/// One formula of the requested logic; deterministic per seed.
#[derive(Debug, Clone)]
pub enum GenFormula {
    Tlxy(Tlxy),
    Ranker(Ranker),
    Duds(Duds),
    Uitl(Uitl),
    Tlfp(Tlfp),
    Tlrec(RecPsi),
}

pub fn gen_formula(logic: &str, budget: usize, sg: &Alphabet, seed: Seed) -> Option<GenFormula> {
    let mut rng = rng_from_seed(seed);
    Some(match logic {
        "tlxy" => GenFormula::Tlxy(gen_tlxy(&mut rng, sg, budget)),
        "ranker" => GenFormula::Ranker(gen_ranker(&mut rng, sg, budget)),
        "duds" => GenFormula::Duds(gen_duds(&mut rng, sg, budget)),
        "uitlpm" => GenFormula::Uitl(gen_uitl(&mut rng, sg, budget)),
        "tlfp" => GenFormula::Tlfp(gen_tlfp(&mut rng, sg, budget, 3)),
        "tlrec" => GenFormula::Tlrec(gen_tlrec(&mut rng, sg, budget, 2)),
        _ => return None,
    })
}
