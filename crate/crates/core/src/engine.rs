//! The fixed-point engine.
//!
//! An instance supplies a finite meet-semilattice, a family `f_a` closed under
//! a group Γ, an index-valued distance `delta(s, a)` and an increment map
//! `(s, a) ↦ s^a`. The engine computes the down-set `m(s)` of realized distances,
//! finds a *strong* element (one whose `m(s)` is minimal among meets of family
//! members), forms `A(s)`, the indices where `delta(s, a)` is maximal in that
//! down-set, and `n(s) = ⋀ { s^a : a ∈ A(s) }`. The greatest `n(s)` over strong
//! elements is fixed by every automorphism preserving the data.
//!
//! Two routes produce that element. The full-meet route takes the meet of the
//! whole family, which is strong and lies below every other strong element,
//! so its `n` is the largest. The proof route starts from some strong element
//! and keeps absorbing strong elements whose `n` is not yet below the current
//! one. [`solve`] runs either or both and reports whether they agree.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::{downset_of, maximal_in, strictly_below, DownSet, IndexValue};

/// The data of a Γ-close-knit family over a finite meet-semilattice.
///
/// Implementations must keep `family()` closed under every generator in the
/// sense that `act(g, f_a) == f_{act_index(g, a)}`.
pub trait CloseKnitInstance {
    type Elem: Clone + Eq + Hash + Debug;

    fn family(&self) -> &[Self::Elem];

    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.meet(x, y) == *x
    }

    fn delta(&self, s: &Self::Elem, a: usize) -> IndexValue;

    fn increment(&self, s: &Self::Elem, a: usize) -> Self::Elem;

    fn gamma_len(&self) -> usize;

    fn act(&self, g: usize, x: &Self::Elem) -> Self::Elem;

    fn act_index(&self, g: usize, a: usize) -> usize;

    /// How far `x` is from being contained in `y` (difference, index, codimension, …).
    fn measure(&self, x: &Self::Elem, y: &Self::Elem) -> u64;

    /// The least element above every family member, when the lattice has one.
    fn join_span(&self) -> Option<Self::Elem>;

    /// Every lattice element, for instances small enough to list them.
    fn all_elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// A random element below `x`; used by sampled condition checks.
    fn random_sub_element(&self, x: &Self::Elem, _rng: &mut ChaCha8Rng) -> Self::Elem {
        x.clone()
    }
}

/// A family closed under Γ, with the induced action on its indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFamily<E> {
    pub members: Vec<E>,
    /// `action[g][a]` is the index of `γ_g · f_a`.
    pub action: Vec<Vec<usize>>,
}

/// Smallest family containing `seeds` and closed under the `generators` actions.
pub fn orbit_closure<E, F>(seeds: &[E], generators: usize, act: F, cap: usize) -> Result<ClosedFamily<E>>
where
    E: Clone + Eq + Hash,
    F: Fn(usize, &E) -> E,
{
    if seeds.is_empty() {
        return Err(Error::Empty("orbit closure needs at least one seed"));
    }
    if cap < seeds.len() {
        return Err(Error::Contract(format!(
            "orbit cap {cap} is below the {} seeds",
            seeds.len()
        )));
    }
    let mut members: Vec<E> = Vec::new();
    let mut index: HashMap<E, usize> = HashMap::new();
    for s in seeds {
        if !index.contains_key(s) {
            index.insert(s.clone(), members.len());
            members.push(s.clone());
        }
    }
    let mut action: Vec<Vec<usize>> = vec![Vec::new(); generators];
    let mut next = 0;
    while next < members.len() {
        for (g, row) in action.iter_mut().enumerate() {
            let image = act(g, &members[next]);
            let j = match index.get(&image) {
                Some(&j) => j,
                None => {
                    if members.len() == cap {
                        return Err(Error::OrbitCapExceeded { cap });
                    }
                    index.insert(image.clone(), members.len());
                    members.push(image);
                    members.len() - 1
                }
            };
            row.push(j);
        }
        next += 1;
    }
    Ok(ClosedFamily { members, action })
}

/// A concrete ambient lattice of sub-objects with a commensurability measure.
pub trait Ambient {
    type Elem: Clone + Eq + Hash + Debug;
    type Action: Clone + Debug;

    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// Commensurable-containment measure of `x` in `y`.
    fn measure(&self, x: &Self::Elem, y: &Self::Elem) -> u64;
    fn increment(&self, s: &Self::Elem, f: &Self::Elem) -> Self::Elem;
    fn act(&self, g: &Self::Action, x: &Self::Elem) -> Self::Elem;
    /// Upper bound for every measure value.
    fn level_cap(&self) -> u64;
    fn random_sub_element(&self, x: &Self::Elem, rng: &mut ChaCha8Rng) -> Self::Elem;
}

/// An orbit-closed family inside a concrete ambient lattice. The distance is
/// the single-coordinate level `measure(s, f_a)`.
#[derive(Clone, Debug)]
pub struct Closed<A: Ambient> {
    ambient: A,
    gamma: Vec<A::Action>,
    family: ClosedFamily<A::Elem>,
}

impl<A: Ambient> Closed<A> {
    pub fn new(ambient: A, seeds: &[A::Elem], gamma: Vec<A::Action>, max_orbit: usize) -> Result<Self> {
        let family = orbit_closure(seeds, gamma.len(), |g, x| ambient.act(&gamma[g], x), max_orbit)?;
        Ok(Closed { ambient, gamma, family })
    }

    pub fn ambient(&self) -> &A {
        &self.ambient
    }

    pub fn gamma(&self) -> &[A::Action] {
        &self.gamma
    }

    pub fn closed_family(&self) -> &ClosedFamily<A::Elem> {
        &self.family
    }
}

impl<A: Ambient> CloseKnitInstance for Closed<A> {
    type Elem = A::Elem;

    fn family(&self) -> &[A::Elem] {
        &self.family.members
    }

    fn meet(&self, x: &A::Elem, y: &A::Elem) -> A::Elem {
        self.ambient.meet(x, y)
    }

    fn delta(&self, s: &A::Elem, a: usize) -> IndexValue {
        let cap = self.ambient.level_cap();
        IndexValue::level(self.ambient.measure(s, &self.family.members[a]), cap)
    }

    fn increment(&self, s: &A::Elem, a: usize) -> A::Elem {
        self.ambient.increment(s, &self.family.members[a])
    }

    fn gamma_len(&self) -> usize {
        self.gamma.len()
    }

    fn act(&self, g: usize, x: &A::Elem) -> A::Elem {
        self.ambient.act(&self.gamma[g], x)
    }

    fn act_index(&self, g: usize, a: usize) -> usize {
        self.family.action[g][a]
    }

    fn measure(&self, x: &A::Elem, y: &A::Elem) -> u64 {
        self.ambient.measure(x, y)
    }

    fn join_span(&self) -> Option<A::Elem> {
        let mut it = self.family.members.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, f| self.ambient.join(&acc, f)))
    }

    fn random_sub_element(&self, x: &A::Elem, rng: &mut ChaCha8Rng) -> A::Elem {
        self.ambient.random_sub_element(x, rng)
    }
}

/// `m(s)`: the down-set generated by `delta(s, a)` over the family.
pub fn compute_m<I: CloseKnitInstance>(inst: &I, s: &I::Elem) -> Result<DownSet> {
    let deltas: Vec<IndexValue> = (0..inst.family().len()).map(|a| inst.delta(s, a)).collect();
    downset_of(&deltas)
}

pub fn full_meet<I: CloseKnitInstance>(inst: &I) -> Result<I::Elem> {
    let mut it = inst.family().iter();
    let first = it.next().ok_or(Error::Empty("family is empty"))?.clone();
    Ok(it.fold(first, |acc, f| inst.meet(&acc, f)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrongMode {
    FullMeet,
    Greedy,
}

/// All finite meets of family members, family members first, in breadth-first order.
pub fn meet_closure<I: CloseKnitInstance>(inst: &I, cap: usize) -> Result<Vec<I::Elem>> {
    let mut out: Vec<I::Elem> = Vec::new();
    let mut seen: HashSet<I::Elem> = HashSet::new();
    let mut queue = VecDeque::new();
    for f in inst.family() {
        if seen.insert(f.clone()) {
            out.push(f.clone());
            queue.push_back(f.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        for f in inst.family() {
            let y = inst.meet(&x, f);
            if !seen.contains(&y) {
                if out.len() >= cap {
                    return Err(Error::StrongSearchExhausted { explored: out.len() });
                }
                seen.insert(y.clone());
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// An element `s` with `m(s)` equal to the minimal down-set over meets of the family.
pub fn find_strong<I: CloseKnitInstance>(inst: &I, mode: StrongMode, max_meets: usize) -> Result<I::Elem> {
    let meet = full_meet(inst)?;
    match mode {
        StrongMode::FullMeet => Ok(meet),
        StrongMode::Greedy => {
            let family = inst.family();
            let mut s = family[0].clone();
            let mut m_s = compute_m(inst, &s)?;
            'descend: loop {
                for f in family {
                    let t = inst.meet(&s, f);
                    if t == s {
                        continue;
                    }
                    let m_t = compute_m(inst, &t)?;
                    if strictly_below(&m_t, &m_s)? || inst.leq(&t, &s) {
                        s = t;
                        m_s = m_t;
                        continue 'descend;
                    }
                }
                break;
            }
            let target = compute_m(inst, &meet)?;
            if m_s == target {
                return Ok(s);
            }
            // Greedy descent could not certify minimality: search the meets.
            for x in meet_closure(inst, max_meets)? {
                if compute_m(inst, &x)? == target {
                    return Ok(x);
                }
            }
            Err(Error::StrongSearchExhausted { explored: max_meets })
        }
    }
}

/// `A(s)`: indices whose distance is maximal in `m(s)`.
pub fn argmax_set<I: CloseKnitInstance>(inst: &I, s: &I::Elem) -> Result<Vec<usize>> {
    let deltas: Vec<IndexValue> = (0..inst.family().len()).map(|a| inst.delta(s, a)).collect();
    let m = downset_of(&deltas)?;
    let out = maximal_in(&m, &deltas)?;
    if out.is_empty() {
        return Err(Error::Internal("empty argmax set".into()));
    }
    Ok(out)
}

/// `n(s) = ⋀ { s^a : a ∈ A(s) }`.
pub fn n_of<I: CloseKnitInstance>(inst: &I, s: &I::Elem) -> Result<I::Elem> {
    let args = argmax_set(inst, s)?;
    let mut it = args.iter().map(|&a| inst.increment(s, a));
    let first = it.next().expect("argmax set is non-empty");
    Ok(it.fold(first, |acc, x| inst.meet(&acc, &x)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep<E> {
    Start {
        strong: E,
        n: E,
    },
    /// `with` was strong and its `n` was not below the current one.
    Absorb {
        with: E,
        n_with: E,
        strong: E,
        n: E,
    },
}

#[derive(Clone, Debug)]
pub struct ProofRun<E> {
    pub strong: E,
    pub n: E,
    pub strong_count: usize,
    pub trace: Vec<TraceStep<E>>,
}

/// The greatest `n(s)` over strong elements, reached by repeated absorption.
pub fn greatest_n<I: CloseKnitInstance>(inst: &I, max_meets: usize) -> Result<ProofRun<I::Elem>> {
    let closure = meet_closure(inst, max_meets)?;
    let m = compute_m(inst, &full_meet(inst)?)?;
    let mut strong: Vec<(I::Elem, I::Elem)> = Vec::new();
    for x in closure {
        if compute_m(inst, &x)? == m {
            let n = n_of(inst, &x)?;
            strong.push((x, n));
        }
    }
    let (mut s, mut n_s) = strong
        .first()
        .cloned()
        .ok_or_else(|| Error::Internal("no strong element among meets".into()))?;
    let mut trace = vec![TraceStep::Start {
        strong: s.clone(),
        n: n_s.clone(),
    }];
    while let Some((t, n_t)) = strong.iter().find(|(_, n_t)| !inst.leq(n_t, &n_s)) {
        let next = inst.meet(&s, t);
        if compute_m(inst, &next)? != m {
            return Err(Error::Internal("meet of strong elements is not strong".into()));
        }
        let n_next = n_of(inst, &next)?;
        if !(inst.leq(&n_s, &n_next) && inst.leq(n_t, &n_next)) || n_next == n_s {
            return Err(Error::Internal("n did not increase along the absorption chain".into()));
        }
        trace.push(TraceStep::Absorb {
            with: t.clone(),
            n_with: n_t.clone(),
            strong: next.clone(),
            n: n_next.clone(),
        });
        s = next;
        n_s = n_next;
    }
    Ok(ProofRun {
        strong: s,
        n: n_s,
        strong_count: strong.len(),
        trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Full,
    Proof,
    Both,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub mode: SolveMode,
    pub trace: bool,
    /// Cap on the number of distinct meets the proof route may enumerate.
    pub max_meets: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: SolveMode::Both,
            trace: false,
            max_meets: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measure {
    /// Measure of the invariant element in `f_a`.
    pub forward: u64,
    /// Measure of `f_a` in the invariant element.
    pub backward: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<E> {
    pub invariant_element: E,
    pub gamma_fixed: bool,
    pub measures: Vec<Measure>,
    pub orbit_size: usize,
    pub strong_element: E,
    pub argmax_indices: Vec<usize>,
    pub m_generators: DownSet,
    pub mode_agreement: Option<bool>,
    pub trace: Option<Vec<TraceStep<E>>>,
    /// `⋀ family ≤ N ≤ join-span(family)`; the upper half is skipped when no join exists.
    pub sandwich: bool,
    /// Largest forward or backward measure.
    pub bound: u64,
}

pub fn is_gamma_fixed<I: CloseKnitInstance>(inst: &I, x: &I::Elem) -> bool {
    (0..inst.gamma_len()).all(|g| inst.act(g, x) == *x)
}

pub fn measures_of<I: CloseKnitInstance>(inst: &I, n: &I::Elem) -> Vec<Measure> {
    inst.family()
        .iter()
        .map(|f| Measure {
            forward: inst.measure(n, f),
            backward: inst.measure(f, n),
        })
        .collect()
}

pub fn sandwich_holds<I: CloseKnitInstance>(inst: &I, n: &I::Elem) -> Result<bool> {
    let lower = inst.leq(&full_meet(inst)?, n);
    let upper = inst.join_span().is_none_or(|j| inst.leq(n, &j));
    Ok(lower && upper)
}

fn bound_of(measures: &[Measure]) -> u64 {
    measures.iter().map(|m| m.forward.max(m.backward)).max().unwrap_or(0)
}

/// Computes the invariant element and the certificate witnessing it.
pub fn solve<I: CloseKnitInstance>(inst: &I, opts: &SolveOptions) -> Result<Certificate<I::Elem>> {
    let full = || -> Result<(I::Elem, I::Elem)> {
        let strong = find_strong(inst, StrongMode::FullMeet, opts.max_meets)?;
        let n = n_of(inst, &strong)?;
        Ok((strong, n))
    };
    let (strong, n, trace, agreement) = match opts.mode {
        SolveMode::Full => {
            let (strong, n) = full()?;
            let trace = vec![TraceStep::Start {
                strong: strong.clone(),
                n: n.clone(),
            }];
            (strong, n, trace, None)
        }
        SolveMode::Proof => {
            let run = greatest_n(inst, opts.max_meets)?;
            (run.strong, run.n, run.trace, None)
        }
        SolveMode::Both => {
            let (_, n_full) = full()?;
            let run = greatest_n(inst, opts.max_meets)?;
            let agree = run.n == n_full;
            (run.strong, run.n, run.trace, Some(agree))
        }
    };
    if !is_gamma_fixed(inst, &n) {
        return Err(Error::Internal(format!("output {n:?} is not fixed by gamma")));
    }
    let measures = measures_of(inst, &n);
    let m = compute_m(inst, &strong)?;
    let argmax = argmax_set(inst, &strong)?;
    let sandwich = sandwich_holds(inst, &n)?;
    Ok(Certificate {
        bound: bound_of(&measures),
        invariant_element: n,
        gamma_fixed: true,
        measures,
        orbit_size: inst.family().len(),
        strong_element: strong,
        argmax_indices: argmax,
        m_generators: m,
        mode_agreement: agreement,
        trace: opts.trace.then_some(trace),
        sandwich,
    })
}

/// Recomputes invariance, measures and the sandwich bound of `cert`.
pub fn verify_certificate<I: CloseKnitInstance>(inst: &I, cert: &Certificate<I::Elem>) -> bool {
    let n = &cert.invariant_element;
    let measures = measures_of(inst, n);
    cert.gamma_fixed
        && is_gamma_fixed(inst, n)
        && cert.orbit_size == inst.family().len()
        && cert.measures == measures
        && cert.bound == bound_of(&measures)
        && cert.sandwich
        && sandwich_holds(inst, n).unwrap_or(false)
        && cert.mode_agreement != Some(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Associativity,
    Monotonicity,
    Increment,
    Equivariance,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::Associativity => "AssociativityViolation",
            ViolationKind::Monotonicity => "MonotonicityViolation",
            ViolationKind::Increment => "IncrementViolation",
            ViolationKind::Equivariance => "EquivarianceViolation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    pub fn into_error(self) -> Error {
        match self.kind {
            ViolationKind::Associativity => Error::AssociativityViolation(self.detail),
            ViolationKind::Monotonicity => Error::MonotonicityViolation(self.detail),
            ViolationKind::Increment => Error::IncrementViolation(self.detail),
            ViolationKind::Equivariance => Error::EquivarianceViolation(self.detail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks one pair `t ≤ s` at index `a`: monotone distance, `s ≤ s^a`, and
/// equal distances forcing equal increments.
fn check_pair<I: CloseKnitInstance>(inst: &I, t: &I::Elem, s: &I::Elem, a: usize, out: &mut Vec<Violation>) {
    let (dt, ds) = (inst.delta(t, a), inst.delta(s, a));
    match dt.leq(&ds) {
        Ok(true) => {}
        Ok(false) => out.push(Violation {
            kind: ViolationKind::Monotonicity,
            detail: format!("delta({t:?},{a}) = {dt} is not below delta({s:?},{a}) = {ds}"),
        }),
        Err(e) => out.push(Violation {
            kind: ViolationKind::Monotonicity,
            detail: e.to_string(),
        }),
    }
    let (it, is) = (inst.increment(t, a), inst.increment(s, a));
    if !inst.leq(s, &is) {
        out.push(Violation {
            kind: ViolationKind::Increment,
            detail: format!("{s:?} is not below its increment {is:?} at {a}"),
        });
    }
    if dt == ds && it != is {
        out.push(Violation {
            kind: ViolationKind::Increment,
            detail: format!("{t:?} <= {s:?} with equal delta {ds} at {a} but increments {it:?} and {is:?} differ"),
        });
    }
}

fn check_equivariance<I: CloseKnitInstance>(inst: &I, s: &I::Elem, g: usize, a: usize, out: &mut Vec<Violation>) {
    let gs = inst.act(g, s);
    let ga = inst.act_index(g, a);
    if inst.delta(&gs, ga) != inst.delta(s, a) {
        out.push(Violation {
            kind: ViolationKind::Equivariance,
            detail: format!("delta changes under generator {g} at ({s:?}, {a})"),
        });
    }
    if inst.increment(&gs, ga) != inst.act(g, &inst.increment(s, a)) {
        out.push(Violation {
            kind: ViolationKind::Equivariance,
            detail: format!("increment does not commute with generator {g} at ({s:?}, {a})"),
        });
    }
    if inst.act(g, &inst.family()[a]) != inst.family()[ga] {
        out.push(Violation {
            kind: ViolationKind::Equivariance,
            detail: format!("generator {g} does not carry f_{a} to f_{ga}"),
        });
    }
}

const NOTE_COMPACTNESS: &str = "condition (2) holds automatically: the index set is finite";
const NOTE_CHAINS: &str = "condition (4) holds trivially: every chain in the lattice is finite";

/// Checks the close-knit conditions. Small instances that list their elements
/// are checked exhaustively; otherwise `samples` random pairs `t ≤ s` are drawn
/// from meets of family members and their sub-elements.
pub fn validate_conditions<I: CloseKnitInstance>(inst: &I, samples: usize, seed: u64) -> ValidationReport {
    let mut violations = Vec::new();
    let k = inst.family().len();
    let mut pairs = 0;
    let exhaustive = if let Some(all) = inst.all_elements() {
        for s in &all {
            for t in &all {
                if !inst.leq(t, s) {
                    continue;
                }
                pairs += 1;
                for a in 0..k {
                    check_pair(inst, t, s, a, &mut violations);
                }
            }
            for g in 0..inst.gamma_len() {
                for a in 0..k {
                    check_equivariance(inst, s, g, a, &mut violations);
                }
            }
        }
        true
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_meet = |rng: &mut ChaCha8Rng| -> I::Elem {
            let fam = inst.family();
            let mut s = fam.choose(rng).expect("non-empty family").clone();
            for f in fam {
                if rng.gen_bool(0.5) {
                    s = inst.meet(&s, f);
                }
            }
            s
        };
        let probe = k.min(16);
        for _ in 0..samples {
            let s = random_meet(&mut rng);
            let t = if rng.gen_bool(0.5) {
                inst.meet(&s, &random_meet(&mut rng))
            } else {
                inst.random_sub_element(&s, &mut rng)
            };
            if !inst.leq(&t, &s) {
                violations.push(Violation {
                    kind: ViolationKind::Associativity,
                    detail: format!("sampled sub-element {t:?} is not below {s:?}"),
                });
                continue;
            }
            pairs += 1;
            for _ in 0..probe {
                let a = rng.gen_range(0..k);
                check_pair(inst, &t, &s, a, &mut violations);
                if inst.gamma_len() > 0 {
                    let g = rng.gen_range(0..inst.gamma_len());
                    check_equivariance(inst, &s, g, a, &mut violations);
                }
            }
        }
        false
    };
    ValidationReport {
        pairs_checked: pairs,
        exhaustive,
        violations,
        notes: vec![NOTE_COMPACTNESS.to_string(), NOTE_CHAINS.to_string()],
    }
}
