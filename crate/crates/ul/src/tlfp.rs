//! The unary future/past logic and its translation to the ranker logic.
//!
//! The translation guesses, per word class, which modal subformulas are
//! defined and how their defining positions interleave with the letters
//! between them (the region template). For each guess the construction
//! emits one disjunct: validity formulas pinning the guess, plus the
//! top-level boolean shape with every modal subformula replaced by its
//! synthesized ranker. A word then satisfies exactly the disjunct of the
//! parameters it conforms to.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::alphabet::{enumerate_words, Alphabet, Letter, Word};
use crate::po2dfa::{BudgetExceeded, Emptiness};
use crate::sexpr::SExpr;
use crate::tlxy::{
    and_all, directionality, not_, or_all, Ranker, RankerError, Rel, RStep, Tlxy,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tlfp {
    Atom(Letter),
    F(Box<Tlfp>),
    P(Box<Tlfp>),
    Or(Box<Tlfp>, Box<Tlfp>),
    And(Box<Tlfp>, Box<Tlfp>),
    Not(Box<Tlfp>),
}

pub fn f_(x: Tlfp) -> Tlfp {
    Tlfp::F(Box::new(x))
}

pub fn p_(x: Tlfp) -> Tlfp {
    Tlfp::P(Box::new(x))
}

pub fn fp_or(a: Tlfp, b: Tlfp) -> Tlfp {
    Tlfp::Or(Box::new(a), Box::new(b))
}

pub fn fp_and(a: Tlfp, b: Tlfp) -> Tlfp {
    Tlfp::And(Box::new(a), Box::new(b))
}

pub fn fp_not(a: Tlfp) -> Tlfp {
    Tlfp::Not(Box::new(a))
}

pub fn size(f: &Tlfp) -> usize {
    match f {
        Tlfp::Atom(_) => 1,
        Tlfp::F(c) | Tlfp::P(c) | Tlfp::Not(c) => 1 + size(c),
        Tlfp::Or(a, b) | Tlfp::And(a, b) => 1 + size(a) + size(b),
    }
}

pub fn is_modal(f: &Tlfp) -> bool {
    matches!(f, Tlfp::F(_) | Tlfp::P(_))
}

fn modal_body(f: &Tlfp) -> &Tlfp {
    match f {
        Tlfp::F(c) | Tlfp::P(c) => c,
        _ => unreachable!("modal_body on a non-modal formula"),
    }
}

/// Direct semantics at `1 <= i <= len` of a non-empty word.
pub fn eval(f: &Tlfp, w: &Word, i: usize) -> bool {
    debug_assert!(!w.is_empty() && i >= 1 && i <= w.len());
    match f {
        Tlfp::Atom(a) => w.at(i) == Some(*a),
        Tlfp::F(c) => (i + 1..=w.len()).any(|j| eval(c, w, j)),
        Tlfp::P(c) => (1..i).any(|j| eval(c, w, j)),
        Tlfp::Or(a, b) => eval(a, w, i) || eval(b, w, i),
        Tlfp::And(a, b) => eval(a, w, i) && eval(b, w, i),
        Tlfp::Not(c) => !eval(c, w, i),
    }
}

pub fn member(f: &Tlfp, w: &Word) -> bool {
    !w.is_empty() && eval(f, w, 1)
}

/// All modal subformulas strictly inside `f` (structural identity; equal
/// subtrees count once).
pub fn sform(f: &Tlfp) -> BTreeSet<Tlfp> {
    let mut out = BTreeSet::new();
    fn walk(f: &Tlfp, out: &mut BTreeSet<Tlfp>) {
        match f {
            Tlfp::Atom(_) => {}
            Tlfp::F(c) | Tlfp::P(c) => {
                out.insert(f.clone());
                walk(c, out);
            }
            Tlfp::Or(a, b) | Tlfp::And(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Tlfp::Not(c) => walk(c, out),
        }
    }
    match f {
        Tlfp::F(c) | Tlfp::P(c) => walk(c, &mut out),
        other => walk(other, &mut out),
    }
    out
}

/// Immediate modal subformulas: the maximal modal nodes reachable through
/// booleans only.
pub fn iform(f: &Tlfp) -> BTreeSet<Tlfp> {
    let mut out = BTreeSet::new();
    fn walk(f: &Tlfp, out: &mut BTreeSet<Tlfp>) {
        match f {
            Tlfp::Atom(_) => {}
            Tlfp::F(_) | Tlfp::P(_) => {
                out.insert(f.clone());
            }
            Tlfp::Or(a, b) | Tlfp::And(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Tlfp::Not(c) => walk(c, out),
        }
    }
    match f {
        Tlfp::F(c) | Tlfp::P(c) => walk(c, &mut out),
        other => walk(other, &mut out),
    }
    out
}

/// The defining position: the last (future-type) or first (past-type)
/// position where the modal subformula holds, by direct scan.
pub fn dpos(psi: &Tlfp, w: &Word) -> Option<usize> {
    debug_assert!(is_modal(psi));
    let holds: Vec<usize> = w.positions().filter(|&i| eval(psi, w, i)).collect();
    match psi {
        Tlfp::F(_) => holds.last().copied(),
        Tlfp::P(_) => holds.first().copied(),
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------
// Region templates
// ---------------------------------------------------------------------

/// Letters of a segment with their first-appearance orders from the left
/// and from the right.
pub fn region_orders(seg: &[Letter]) -> (BTreeSet<Letter>, Vec<Letter>, Vec<Letter>) {
    let set: BTreeSet<Letter> = seg.iter().copied().collect();
    let mut lord = Vec::new();
    for &l in seg {
        if !lord.contains(&l) {
            lord.push(l);
        }
    }
    let mut rord = Vec::new();
    for &l in seg.iter().rev() {
        if !rord.contains(&l) {
            rord.push(l);
        }
    }
    (set, lord, rord)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Region {
    pub is_f: bool,
    /// Modal subformulas defined at this position; empty for I-regions.
    pub tau: BTreeSet<Tlfp>,
    pub alpha: BTreeSet<Letter>,
    pub lord: Vec<Letter>,
    pub rord: Vec<Letter>,
}

impl Region {
    fn f_region(tau: BTreeSet<Tlfp>, letter: Letter) -> Region {
        Region {
            is_f: true,
            tau,
            alpha: [letter].into_iter().collect(),
            lord: vec![letter],
            rord: vec![letter],
        }
    }

    fn i_region(seg: &[Letter]) -> Region {
        let (alpha, lord, rord) = region_orders(seg);
        Region {
            is_f: false,
            tau: BTreeSet::new(),
            alpha,
            lord,
            rord,
        }
    }
}

/// Alternating I/F regions in word order. Border I-regions are present
/// only when non-empty; middle I-regions are always present (possibly
/// with an empty letter set).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionTemplate {
    pub regions: Vec<Region>,
}

impl RegionTemplate {
    pub fn f_indices(&self) -> Vec<usize> {
        (0..self.regions.len()).filter(|&i| self.regions[i].is_f).collect()
    }

    fn reg_of(&self, zeta: &Tlfp) -> Option<usize> {
        (0..self.regions.len()).find(|&i| self.regions[i].tau.contains(zeta))
    }
}

/// The unique region template of `w` for the set `kappa` of modal
/// subformulas, all of which must be defined in `w`.
pub fn template_of(w: &Word, kappa: &BTreeSet<Tlfp>) -> RegionTemplate {
    let mut by_pos: BTreeMap<usize, BTreeSet<Tlfp>> = BTreeMap::new();
    for psi in kappa {
        let p = dpos(psi, w).expect("every formula in kappa is defined in w");
        by_pos.entry(p).or_default().insert(psi.clone());
    }
    let seg = |from: usize, to: usize| -> Vec<Letter> {
        (from..=to).filter_map(|i| w.at(i)).collect()
    };
    let mut regions = Vec::new();
    if by_pos.is_empty() {
        regions.push(Region::i_region(&seg(1, w.len())));
        return RegionTemplate { regions };
    }
    let positions: Vec<usize> = by_pos.keys().copied().collect();
    if positions[0] > 1 {
        regions.push(Region::i_region(&seg(1, positions[0] - 1)));
    }
    for (k, &p) in positions.iter().enumerate() {
        regions.push(Region::f_region(by_pos[&p].clone(), w.at(p).unwrap()));
        if k + 1 < positions.len() {
            regions.push(Region::i_region(&seg(p + 1, positions[k + 1] - 1)));
        }
    }
    let last = *positions.last().unwrap();
    if last < w.len() {
        regions.push(Region::i_region(&seg(last + 1, w.len())));
    }
    RegionTemplate { regions }
}

/// The guessed parameters: which modal subformulas are defined, and one
/// region template per distinct immediate-subformula set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Params {
    pub delta: BTreeSet<Tlfp>,
    pub theta: BTreeMap<BTreeSet<Tlfp>, RegionTemplate>,
}

impl Params {
    /// The template governing a host formula (the top level or a modal
    /// subformula).
    pub fn template_for(&self, kappa: &BTreeSet<Tlfp>) -> Option<&RegionTemplate> {
        self.theta.get(kappa)
    }
}

fn kappa_of(host: &Tlfp, delta: &BTreeSet<Tlfp>) -> BTreeSet<Tlfp> {
    iform(host).intersection(delta).cloned().collect()
}

fn all_kappas(phi: &Tlfp, delta: &BTreeSet<Tlfp>) -> BTreeSet<BTreeSet<Tlfp>> {
    let mut out = BTreeSet::new();
    out.insert(kappa_of(phi, delta));
    for psi in sform(phi) {
        out.insert(kappa_of(&psi, delta));
    }
    out
}

/// The unique parameters `w` conforms to.
pub fn extract_params(phi: &Tlfp, w: &Word) -> Params {
    let delta: BTreeSet<Tlfp> = sform(phi)
        .into_iter()
        .filter(|psi| dpos(psi, w).is_some())
        .collect();
    let mut theta = BTreeMap::new();
    for kappa in all_kappas(phi, &delta) {
        let t = template_of(w, &kappa);
        theta.insert(kappa, t);
    }
    Params { delta, theta }
}

/// Conformance is structural equality with the extracted parameters;
/// uniqueness of the template makes this a function.
pub fn conforms(phi: &Tlfp, w: &Word, params: &Params) -> bool {
    extract_params(phi, w) == *params
}

// ---------------------------------------------------------------------
// Def sets
// ---------------------------------------------------------------------

/// Per-region letter sets marking exactly where a boolean subformula
/// holds on conforming words.
pub fn def_set(
    phi: &Tlfp,
    delta: &BTreeSet<Tlfp>,
    template: &RegionTemplate,
) -> Vec<(usize, BTreeSet<Letter>)> {
    def_map(phi, delta, template)
        .into_iter()
        .enumerate()
        .filter(|(_, set)| !set.is_empty())
        .collect()
}

fn def_map(phi: &Tlfp, delta: &BTreeSet<Tlfp>, template: &RegionTemplate) -> Vec<BTreeSet<Letter>> {
    let n = template.regions.len();
    match phi {
        Tlfp::Atom(a) => template
            .regions
            .iter()
            .map(|r| {
                if r.alpha.contains(a) {
                    [*a].into_iter().collect()
                } else {
                    BTreeSet::new()
                }
            })
            .collect(),
        Tlfp::And(x, y) => {
            let dx = def_map(x, delta, template);
            let dy = def_map(y, delta, template);
            dx.into_iter()
                .zip(dy)
                .map(|(a, b)| a.intersection(&b).copied().collect())
                .collect()
        }
        Tlfp::Or(x, y) => {
            let dx = def_map(x, delta, template);
            let dy = def_map(y, delta, template);
            dx.into_iter()
                .zip(dy)
                .map(|(a, b)| a.union(&b).copied().collect())
                .collect()
        }
        Tlfp::Not(x) => {
            let dx = def_map(x, delta, template);
            template
                .regions
                .iter()
                .zip(dx)
                .map(|(r, a)| r.alpha.difference(&a).copied().collect())
                .collect()
        }
        zeta @ (Tlfp::F(_) | Tlfp::P(_)) => {
            if !delta.contains(zeta) {
                return vec![BTreeSet::new(); n];
            }
            let Some(reg) = template.reg_of(zeta) else {
                // A template that does not place the subformula cannot be
                // conformed to; nothing holds.
                return vec![BTreeSet::new(); n];
            };
            (0..n)
                .map(|i| {
                    let inside = match zeta {
                        Tlfp::F(_) => i <= reg,
                        Tlfp::P(_) => i >= reg,
                        _ => unreachable!(),
                    };
                    if inside {
                        template.regions[i].alpha.clone()
                    } else {
                        BTreeSet::new()
                    }
                })
                .collect()
        }
    }
}

// ---------------------------------------------------------------------
// Ranker synthesis and the validity formulas
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankerOrNever {
    /// A navigation that accepts on no word.
    Never,
    R(Ranker),
}

/// Shared state for one (formula, parameters) translation.
pub struct TransCtx<'a> {
    pub phi: &'a Tlfp,
    pub sg: &'a Alphabet,
    pub params: &'a Params,
    rankers: RefCell<HashMap<Tlfp, RankerOrNever>>,
}

impl<'a> TransCtx<'a> {
    pub fn new(phi: &'a Tlfp, sg: &'a Alphabet, params: &'a Params) -> TransCtx<'a> {
        TransCtx {
            phi,
            sg,
            params,
            rankers: RefCell::new(HashMap::new()),
        }
    }

    fn bottom(&self) -> Tlxy {
        crate::tlxy::bottom()
    }

    /// The contradiction ranker stand-in for `Never` in formula contexts.
    fn never_formula(&self) -> Tlxy {
        let a = self.sg.first();
        Tlxy::Sp(Box::new(crate::tlxy::and_(
            Tlxy::X(a, Box::new(crate::tlxy::top())),
            not_(Tlxy::X(a, Box::new(crate::tlxy::top()))),
        )))
    }

    pub fn ranker_formula(&self, r: &RankerOrNever) -> Tlxy {
        match r {
            RankerOrNever::Never => self.never_formula(),
            RankerOrNever::R(r) => r.to_formula(),
        }
    }

    fn seq_f(&self, r: &RankerOrNever, f: Tlxy) -> Tlxy {
        match r {
            RankerOrNever::Never => self.bottom(),
            RankerOrNever::R(r) => r.compose_formula(f),
        }
    }

    fn p_of(&self, r: &RankerOrNever, rel: Rel) -> Result<Tlxy, RankerError> {
        match r {
            RankerOrNever::Never => Ok(self.bottom()),
            RankerOrNever::R(r) => directionality(r, rel, self.sg),
        }
    }

    /// The defining-position ranker of a modal subformula under the
    /// guessed parameters.
    pub fn ranker(&self, psi: &Tlfp) -> RankerOrNever {
        if let Some(r) = self.rankers.borrow().get(psi) {
            return r.clone();
        }
        let r = self.build_ranker(psi);
        self.rankers.borrow_mut().insert(psi.clone(), r.clone());
        r
    }

    fn build_ranker(&self, psi: &Tlfp) -> RankerOrNever {
        let kappa = kappa_of(psi, &self.params.delta);
        let Some(template) = self.params.template_for(&kappa) else {
            return RankerOrNever::Never;
        };
        let pairs = def_set(modal_body(psi), &self.params.delta, template);
        if pairs.is_empty() {
            return RankerOrNever::Never;
        }
        let future = matches!(psi, Tlfp::F(_));
        let (idx, set) = if future {
            pairs.last().unwrap().clone()
        } else {
            pairs.first().unwrap().clone()
        };
        let region = &template.regions[idx];
        if region.is_f {
            let zeta = region.tau.iter().next().expect("F-regions carry a witness");
            return match self.ranker(zeta) {
                RankerOrNever::Never => RankerOrNever::Never,
                RankerOrNever::R(r) => {
                    RankerOrNever::R(r.push(if future { RStep::Y1 } else { RStep::X1 }))
                }
            };
        }
        if future {
            // The letter whose last occurrence in the region comes last.
            let p = *region
                .rord
                .iter()
                .find(|l| set.contains(l))
                .expect("def letters lie in the region alphabet");
            if idx == template.regions.len() - 1 {
                RankerOrNever::R(Ranker(vec![RStep::Ep, RStep::Wy(p), RStep::Y1]))
            } else {
                let zeta = template.regions[idx + 1]
                    .tau
                    .iter()
                    .next()
                    .expect("regions alternate, so an F-region follows");
                match self.ranker(zeta) {
                    RankerOrNever::Never => RankerOrNever::Never,
                    RankerOrNever::R(r) => {
                        RankerOrNever::R(r.push(RStep::Y(p)).push(RStep::Y1))
                    }
                }
            }
        } else {
            let p = *region
                .lord
                .iter()
                .find(|l| set.contains(l))
                .expect("def letters lie in the region alphabet");
            if idx == 0 {
                RankerOrNever::R(Ranker(vec![RStep::Sp, RStep::Wx(p), RStep::X1]))
            } else {
                let zeta = template.regions[idx - 1]
                    .tau
                    .iter()
                    .next()
                    .expect("regions alternate, so an F-region precedes");
                match self.ranker(zeta) {
                    RankerOrNever::Never => RankerOrNever::Never,
                    RankerOrNever::R(r) => {
                        RankerOrNever::R(r.push(RStep::X(p)).push(RStep::X1))
                    }
                }
            }
        }
    }

    /// The guessed set of defined subformulas holds: each ranker in the
    /// set lands, each outside fails.
    pub fn dvalid(&self) -> Tlxy {
        let mut conjuncts = Vec::new();
        for psi in sform(self.phi) {
            let r = self.ranker(&psi);
            let f = self.ranker_formula(&r);
            if self.params.delta.contains(&psi) {
                conjuncts.push(f);
            } else {
                conjuncts.push(not_(f));
            }
        }
        and_all(conjuncts)
    }

    /// Every guessed region template matches the word: co-located
    /// rankers, region order, letter content and first/last-appearance
    /// orders.
    pub fn tvalid(&self) -> Tlxy {
        let mut conjuncts = Vec::new();
        for template in self.params.theta.values() {
            conjuncts.push(self.rvalid(template));
            conjuncts.push(self.avalid(template));
            conjuncts.push(self.bvalid(template));
        }
        and_all(conjuncts)
    }

    fn rvalid(&self, t: &RegionTemplate) -> Tlxy {
        let mut conjuncts = Vec::new();
        let fs = t.f_indices();
        for &i in &fs {
            let members: Vec<&Tlfp> = t.regions[i].tau.iter().collect();
            for pair in members.windows(2) {
                let a = self.ranker(pair[0]);
                let b = self.ranker(pair[1]);
                let pa = self.p_of(&a, Rel::Le).expect("rankers are anchored");
                let pb = self.p_of(&b, Rel::Le).expect("rankers are anchored");
                conjuncts.push(self.seq_f(&a, pb));
                conjuncts.push(self.seq_f(&b, pa));
            }
        }
        for pair in fs.windows(2) {
            let zeta = t.regions[pair[0]].tau.iter().next().unwrap();
            let xi = t.regions[pair[1]].tau.iter().next().unwrap();
            let rz = self.ranker(zeta);
            let rx = self.ranker(xi);
            let lt = self.p_of(&rx, Rel::Lt).expect("rankers are anchored");
            conjuncts.push(self.seq_f(&rz, lt));
        }
        and_all(conjuncts)
    }

    /// Ranker reaching into an I-region from its left edge: the strict
    /// next occurrence after the left F-region, or the weak first
    /// occurrence from the word start.
    fn from_left(&self, t: &RegionTemplate, idx: usize, a: Letter) -> RankerOrNever {
        if idx == 0 {
            RankerOrNever::R(Ranker(vec![RStep::Sp, RStep::Wx(a)]))
        } else {
            let zeta = t.regions[idx - 1].tau.iter().next().unwrap();
            match self.ranker(zeta) {
                RankerOrNever::Never => RankerOrNever::Never,
                RankerOrNever::R(r) => RankerOrNever::R(r.push(RStep::X(a))),
            }
        }
    }

    fn from_right(&self, t: &RegionTemplate, idx: usize, a: Letter) -> RankerOrNever {
        if idx == t.regions.len() - 1 {
            RankerOrNever::R(Ranker(vec![RStep::Ep, RStep::Wy(a)]))
        } else {
            let xi = t.regions[idx + 1].tau.iter().next().unwrap();
            match self.ranker(xi) {
                RankerOrNever::Never => RankerOrNever::Never,
                RankerOrNever::R(r) => RankerOrNever::R(r.push(RStep::Y(a))),
            }
        }
    }

    /// Occurrence test for a letter inside an I-region: land on it from
    /// the left and stay before the right boundary.
    fn occurs_in(&self, t: &RegionTemplate, idx: usize, a: Letter) -> Tlxy {
        let reach = self.from_left(t, idx, a);
        if idx == t.regions.len() - 1 {
            // The region extends to the end of the word.
            self.ranker_formula(&reach)
        } else {
            let xi = t.regions[idx + 1].tau.iter().next().unwrap();
            let bound = self
                .p_of(&self.ranker(xi), Rel::Lt)
                .expect("rankers are anchored");
            self.seq_f(&reach, bound)
        }
    }

    fn avalid(&self, t: &RegionTemplate) -> Tlxy {
        let mut conjuncts = Vec::new();
        for (idx, region) in t.regions.iter().enumerate() {
            if region.is_f {
                let zeta = region.tau.iter().next().unwrap();
                let c = *region.alpha.iter().next().unwrap();
                let r = self.ranker(zeta);
                conjuncts.push(self.seq_f(&r, Tlxy::Atom(c)));
            } else {
                for a in self.sg.iter() {
                    let test = self.occurs_in(t, idx, a);
                    if region.alpha.contains(&a) {
                        conjuncts.push(test);
                    } else {
                        conjuncts.push(not_(test));
                    }
                }
            }
        }
        // Absent border I-regions pin the first/last defining positions
        // to the word ends.
        if let Some(first) = t.regions.first() {
            if first.is_f {
                let zeta = first.tau.iter().next().unwrap();
                let r = self.ranker(zeta);
                conjuncts.push(self.seq_f(&r, crate::tlxy::atfirst(self.sg)));
            }
        }
        if let Some(last) = t.regions.last() {
            if last.is_f {
                let zeta = last.tau.iter().next().unwrap();
                let r = self.ranker(zeta);
                conjuncts.push(self.seq_f(&r, crate::tlxy::atlast(self.sg)));
            }
        }
        and_all(conjuncts)
    }

    fn bvalid(&self, t: &RegionTemplate) -> Tlxy {
        let mut conjuncts = Vec::new();
        for (idx, region) in t.regions.iter().enumerate() {
            if region.is_f || region.alpha.len() < 2 {
                continue;
            }
            for pair in region.lord.windows(2) {
                let first = self.from_left(t, idx, pair[0]);
                let second = self.from_left(t, idx, pair[1]);
                match second {
                    RankerOrNever::Never => conjuncts.push(self.bottom()),
                    RankerOrNever::R(second) => {
                        let lt = directionality(&second, Rel::Lt, self.sg)
                            .expect("rankers are anchored");
                        conjuncts.push(self.seq_f(&first, lt));
                    }
                }
            }
            for pair in region.rord.windows(2) {
                let first = self.from_right(t, idx, pair[0]);
                let second = self.from_right(t, idx, pair[1]);
                match second {
                    RankerOrNever::Never => conjuncts.push(self.bottom()),
                    RankerOrNever::R(second) => {
                        let gt = directionality(&second, Rel::Gt, self.sg)
                            .expect("rankers are anchored");
                        conjuncts.push(self.seq_f(&first, gt));
                    }
                }
            }
        }
        and_all(conjuncts)
    }

    /// One disjunct of the full translation: the validity formulas plus
    /// the top-level boolean shape over synthesized rankers.
    pub fn disjunct(&self) -> Tlxy {
        let shape = self.subst(self.phi);
        and_all(vec![self.dvalid(), self.tvalid(), shape])
    }

    fn subst(&self, f: &Tlfp) -> Tlxy {
        match f {
            Tlfp::Atom(a) => Tlxy::Atom(*a),
            Tlfp::Or(a, b) => crate::tlxy::or_(self.subst(a), self.subst(b)),
            Tlfp::And(a, b) => crate::tlxy::and_(self.subst(a), self.subst(b)),
            Tlfp::Not(c) => not_(self.subst(c)),
            psi @ Tlfp::F(_) => {
                // A future formula holds at position 1 iff it is defined
                // at all: its positions form a prefix.
                let r = self.ranker(psi);
                self.ranker_formula(&r)
            }
            psi @ Tlfp::P(_) => {
                // A past formula holds at position 1 iff its defining
                // position is 1: the ranker must land on the first
                // position.
                let r = self.ranker(psi);
                self.seq_f(&r, crate::tlxy::atfirst(self.sg))
            }
        }
    }
}

pub fn dvalid(phi: &Tlfp, params: &Params, sg: &Alphabet) -> Tlxy {
    TransCtx::new(phi, sg, params).dvalid()
}

pub fn tvalid(phi: &Tlfp, params: &Params, sg: &Alphabet) -> Tlxy {
    TransCtx::new(phi, sg, params).tvalid()
}

pub fn trans_disjunct(phi: &Tlfp, params: &Params, sg: &Alphabet) -> Tlxy {
    TransCtx::new(phi, sg, params).disjunct()
}

// ---------------------------------------------------------------------
// Parameter enumeration and the full translation
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_modals: usize,
    /// Cap on the number of enumerated parameter candidates.
    pub max_params: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_modals: 3,
            max_params: 20_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parameter space {counted} exceeds the configured limit {limit}")]
pub struct LimitExceeded {
    pub counted: u64,
    pub limit: u64,
}

/// One letter-content choice for an I-region.
#[derive(Clone)]
struct IContent {
    alpha: BTreeSet<Letter>,
    lord: Vec<Letter>,
    rord: Vec<Letter>,
}

fn permutations(items: &[Letter]) -> Vec<Vec<Letter>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn i_contents(sg: &Alphabet, allow_empty: bool) -> Vec<IContent> {
    let letters = sg.letters();
    let mut out = Vec::new();
    for mask in 0..(1usize << letters.len()) {
        let alpha: Vec<Letter> = (0..letters.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| letters[i])
            .collect();
        if alpha.is_empty() && !allow_empty {
            continue;
        }
        for lord in permutations(&alpha) {
            for rord in permutations(&alpha) {
                out.push(IContent {
                    alpha: alpha.iter().copied().collect(),
                    lord: lord.clone(),
                    rord,
                });
            }
        }
    }
    out
}

/// Ordered set partitions of `items` (order of groups matters, members
/// within a group form a set).
fn ordered_set_partitions(items: &[Tlfp]) -> Vec<Vec<BTreeSet<Tlfp>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0].clone();
    let rest = ordered_set_partitions(&items[1..]);
    let mut out = Vec::new();
    for partition in rest {
        // Insert into an existing group or as a new singleton group at
        // every position.
        for g in 0..partition.len() {
            let mut p = partition.clone();
            p[g].insert(first.clone());
            out.push(p);
        }
        for pos in 0..=partition.len() {
            let mut p = partition.clone();
            p.insert(pos, [first.clone()].into_iter().collect());
            out.push(p);
        }
    }
    out
}

/// Region templates over the full guessed set, which project onto every
/// host's template.
fn enumerate_full_templates(delta: &BTreeSet<Tlfp>, sg: &Alphabet) -> Vec<RegionTemplate> {
    let items: Vec<Tlfp> = delta.iter().cloned().collect();
    let border_choices = {
        let mut v: Vec<Option<IContent>> = i_contents(sg, false).into_iter().map(Some).collect();
        v.push(None);
        v
    };
    let middle_choices = i_contents(sg, true);
    let mut out = Vec::new();
    if delta.is_empty() {
        for c in i_contents(sg, false) {
            out.push(RegionTemplate {
                regions: vec![Region {
                    is_f: false,
                    tau: BTreeSet::new(),
                    alpha: c.alpha,
                    lord: c.lord,
                    rord: c.rord,
                }],
            });
        }
        return out;
    }
    for partition in ordered_set_partitions(&items) {
        let m = partition.len();
        // Letters on the F-regions.
        let mut letter_choice = vec![0usize; m];
        loop {
            // Middle contents.
            let mut middle_idx = vec![0usize; m.saturating_sub(1)];
            loop {
                for left in &border_choices {
                    for right in &border_choices {
                        let mut regions = Vec::new();
                        if let Some(c) = left {
                            regions.push(Region {
                                is_f: false,
                                tau: BTreeSet::new(),
                                alpha: c.alpha.clone(),
                                lord: c.lord.clone(),
                                rord: c.rord.clone(),
                            });
                        }
                        for k in 0..m {
                            regions.push(Region::f_region(
                                partition[k].clone(),
                                sg.letters()[letter_choice[k]],
                            ));
                            if k + 1 < m {
                                let c = &middle_choices[middle_idx[k]];
                                regions.push(Region {
                                    is_f: false,
                                    tau: BTreeSet::new(),
                                    alpha: c.alpha.clone(),
                                    lord: c.lord.clone(),
                                    rord: c.rord.clone(),
                                });
                            }
                        }
                        if let Some(c) = right {
                            regions.push(Region {
                                is_f: false,
                                tau: BTreeSet::new(),
                                alpha: c.alpha.clone(),
                                lord: c.lord.clone(),
                                rord: c.rord.clone(),
                            });
                        }
                        out.push(RegionTemplate { regions });
                    }
                }
                // Advance middle contents.
                let mut k = 0;
                loop {
                    if k == middle_idx.len() {
                        break;
                    }
                    middle_idx[k] += 1;
                    if middle_idx[k] < middle_choices.len() {
                        break;
                    }
                    middle_idx[k] = 0;
                    k += 1;
                }
                if middle_idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
            // Advance F letters.
            let mut k = 0;
            loop {
                if k == m {
                    break;
                }
                letter_choice[k] += 1;
                if letter_choice[k] < sg.len() {
                    break;
                }
                letter_choice[k] = 0;
                k += 1;
            }
            if letter_choice.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    out
}

/// Projection of a full template onto a subset of its formulas: dropped
/// defining positions dissolve into the surrounding I-region.
fn project_template(t: &RegionTemplate, kappa: &BTreeSet<Tlfp>) -> RegionTemplate {
    #[derive(Clone)]
    enum Piece {
        Keep(Region),
        Segment(BTreeSet<Letter>, Vec<Letter>, Vec<Letter>),
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for r in &t.regions {
        if r.is_f {
            let tau: BTreeSet<Tlfp> = r.tau.intersection(kappa).cloned().collect();
            if tau.is_empty() {
                pieces.push(Piece::Segment(r.alpha.clone(), r.lord.clone(), r.rord.clone()));
            } else {
                let mut kept = r.clone();
                kept.tau = tau;
                pieces.push(Piece::Keep(kept));
            }
        } else {
            pieces.push(Piece::Segment(r.alpha.clone(), r.lord.clone(), r.rord.clone()));
        }
    }
    // Merge maximal runs of segments.
    let mut regions: Vec<Region> = Vec::new();
    let mut run: Vec<(BTreeSet<Letter>, Vec<Letter>, Vec<Letter>)> = Vec::new();
    let mut boundary_count = 0usize; // F-regions emitted so far
    let total_f = pieces
        .iter()
        .filter(|p| matches!(p, Piece::Keep(_)))
        .count();
    let flush = |run: &mut Vec<(BTreeSet<Letter>, Vec<Letter>, Vec<Letter>)>,
                 regions: &mut Vec<Region>,
                 at_border: bool| {
        if run.is_empty() {
            if !at_border {
                regions.push(Region::i_region(&[]));
            }
            return;
        }
        let mut alpha = BTreeSet::new();
        let mut lord: Vec<Letter> = Vec::new();
        for (a, lo, _) in run.iter() {
            alpha.extend(a.iter().copied());
            for &l in lo {
                if !lord.contains(&l) {
                    lord.push(l);
                }
            }
        }
        let mut rord: Vec<Letter> = Vec::new();
        for (_, _, ro) in run.iter().rev() {
            for &l in ro {
                if !rord.contains(&l) {
                    rord.push(l);
                }
            }
        }
        if at_border && alpha.is_empty() {
            run.clear();
            return;
        }
        regions.push(Region {
            is_f: false,
            tau: BTreeSet::new(),
            alpha,
            lord,
            rord,
        });
        run.clear();
    };
    for piece in pieces {
        match piece {
            Piece::Segment(a, lo, ro) => run.push((a, lo, ro)),
            Piece::Keep(r) => {
                let at_left_border = boundary_count == 0;
                flush(&mut run, &mut regions, at_left_border);
                regions.push(r);
                boundary_count += 1;
            }
        }
    }
    let _ = total_f;
    flush(&mut run, &mut regions, true);
    RegionTemplate { regions }
}

/// All candidate parameters within the limits, deduplicated after
/// projection. Candidates no word conforms to are harmless: their
/// validity formulas are unsatisfiable.
pub fn enumerate_params(
    phi: &Tlfp,
    sg: &Alphabet,
    limits: &Limits,
) -> Result<Vec<Params>, LimitExceeded> {
    let all = sform(phi);
    if all.len() > limits.max_modals {
        return Err(LimitExceeded {
            counted: all.len() as u64,
            limit: limits.max_modals as u64,
        });
    }
    let deltas = subsets(&all);
    let mut out = Vec::new();
    let mut seen: HashSet<Params> = HashSet::new();
    let mut counted: u64 = 0;
    for delta in deltas {
        let kappas = all_kappas(phi, &delta);
        for full in enumerate_full_templates(&delta, sg) {
            counted += 1;
            if counted > limits.max_params {
                return Err(LimitExceeded {
                    counted,
                    limit: limits.max_params,
                });
            }
            let mut theta = BTreeMap::new();
            for kappa in &kappas {
                theta.insert(kappa.clone(), project_template(&full, kappa));
            }
            let params = Params {
                delta: delta.clone(),
                theta,
            };
            if seen.insert(params.clone()) {
                out.push(params);
            }
        }
    }
    Ok(out)
}

fn subsets(items: &BTreeSet<Tlfp>) -> Vec<BTreeSet<Tlfp>> {
    let v: Vec<Tlfp> = items.iter().cloned().collect();
    (0..(1usize << v.len()))
        .map(|mask| {
            (0..v.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| v[i].clone())
                .collect()
        })
        .collect()
}

/// The full translation: the disjunction of all per-parameter disjuncts.
pub fn trans_full(phi: &Tlfp, sg: &Alphabet, limits: &Limits) -> Result<Tlxy, LimitExceeded> {
    let params = enumerate_params(phi, sg, limits)?;
    Ok(or_all(
        params
            .iter()
            .map(|p| trans_disjunct(phi, p, sg))
            .collect(),
    ))
}

/// Evaluation through the translation without materializing the full
/// disjunction: only the disjunct of the word's own parameters can hold.
pub fn eval_via_translation(phi: &Tlfp, w: &Word, sg: &Alphabet) -> bool {
    if w.is_empty() {
        return false;
    }
    let params = extract_params(phi, w);
    crate::tlxy::eval(&trans_disjunct(phi, &params, sg), w, 1)
}

// ---------------------------------------------------------------------
// Satisfiability
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Enumerate parameters, translate each disjunct and run the ranker
    /// logic's emptiness check.
    Enumerate,
    /// Enumerate words up to a bound and evaluate directly.
    BoundedModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatOutcome {
    pub strategy: Strategy,
    pub result: Emptiness,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error(transparent)]
    Limit(#[from] LimitExceeded),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Default word bound for the bounded-model strategy.
pub fn default_word_bound(phi: &Tlfp) -> usize {
    2 * sform(phi).len() + 2
}

pub fn sat(
    phi: &Tlfp,
    sg: &Alphabet,
    strategy: Strategy,
    limits: &Limits,
    word_bound: Option<usize>,
    budget: u64,
) -> Result<SatOutcome, SatError> {
    let bound = word_bound.unwrap_or_else(|| default_word_bound(phi));
    match strategy {
        Strategy::BoundedModel => {
            let mut tested = 0u64;
            for w in enumerate_words(sg, bound) {
                tested += 1;
                if tested > budget {
                    return Err(SatError::Budget(BudgetExceeded { budget, bound }));
                }
                if member(phi, &w) {
                    return Ok(SatOutcome {
                        strategy,
                        result: Emptiness::NonEmpty(w),
                    });
                }
            }
            Ok(SatOutcome {
                strategy,
                result: Emptiness::EmptyUpTo(bound),
            })
        }
        Strategy::Enumerate => {
            let mut params = enumerate_params(phi, sg, limits)?;
            // Small guesses first: they translate to small disjuncts.
            params.sort_by_key(|p| {
                (
                    p.delta.len(),
                    p.theta.values().map(|t| t.regions.len()).sum::<usize>(),
                    p.theta
                        .values()
                        .flat_map(|t| t.regions.iter())
                        .map(|r| r.alpha.len())
                        .sum::<usize>(),
                )
            });
            for p in &params {
                let disjunct = trans_disjunct(phi, p, sg);
                match crate::tlxy::sat(&disjunct, sg, Some(bound), budget)? {
                    Emptiness::NonEmpty(w) => {
                        debug_assert!(member(phi, &w), "witness re-verifies");
                        return Ok(SatOutcome {
                            strategy,
                            result: Emptiness::NonEmpty(w),
                        });
                    }
                    Emptiness::EmptyUpTo(_) => {}
                }
            }
            Ok(SatOutcome {
                strategy,
                result: Emptiness::EmptyUpTo(bound),
            })
        }
    }
}

// ---------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------

pub fn to_sexpr(f: &Tlfp) -> SExpr {
    fn a(s: &str) -> SExpr {
        SExpr::atom(s)
    }
    match f {
        Tlfp::Atom(l) => SExpr::list(vec![a("atom"), SExpr::atom(l.to_string())]),
        Tlfp::F(c) => SExpr::list(vec![a("f"), to_sexpr(c)]),
        Tlfp::P(c) => SExpr::list(vec![a("p"), to_sexpr(c)]),
        Tlfp::Or(x, y) => SExpr::list(vec![a("or"), to_sexpr(x), to_sexpr(y)]),
        Tlfp::And(x, y) => SExpr::list(vec![a("and"), to_sexpr(x), to_sexpr(y)]),
        Tlfp::Not(c) => SExpr::list(vec![a("not"), to_sexpr(c)]),
    }
}

pub fn from_sexpr(e: &SExpr, sg: &Alphabet) -> Result<Tlfp, String> {
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
            Ok(Tlfp::Atom(crate::tlxy::parse_letter(&items[1], sg)?))
        }
        "f" | "p" | "not" => {
            if items.len() != 2 {
                return Err(format!("{head} takes one subformula"));
            }
            let c = Box::new(from_sexpr(&items[1], sg)?);
            Ok(match head {
                "f" => Tlfp::F(c),
                "p" => Tlfp::P(c),
                _ => Tlfp::Not(c),
            })
        }
        "or" | "and" => {
            if items.len() != 3 {
                return Err(format!("{head} takes two subformulas"));
            }
            let x = Box::new(from_sexpr(&items[1], sg)?);
            let y = Box::new(from_sexpr(&items[2], sg)?);
            Ok(if head == "or" {
                Tlfp::Or(x, y)
            } else {
                Tlfp::And(x, y)
            })
        }
        other => Err(format!("unknown tlfp form {other}")),
    }
}
