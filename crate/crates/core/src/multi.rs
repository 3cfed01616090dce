//! Multivalued maps on line windows: graph posets, the Vietoris-like
//! condition, Lefschetz numbers, periodic orbits, admissible orbits and
//! invariant-set classification.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::homology::{induced_matrices, is_acyclic_within, PosetHomology};
use crate::linalg::{self, Field, SmallRational};
use crate::line::{label, line_leq, LineWindow};
use crate::matrix::Matrix;
use crate::poset::{is_order_preserving, Poset, PosetMap};
use crate::single::SelfMap;

/// A multivalued self-map of a window. Value sets are non-empty, sorted and
/// inside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    window: LineWindow,
    values: Vec<Vec<i64>>,
}

impl MultiMap {
    pub fn new(window: LineWindow, values: Vec<Vec<i64>>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::InvalidMultiMap(format!(
                "{} value sets for a window of {} elements",
                values.len(),
                window.len()
            )));
        }
        let mut clean = Vec::with_capacity(values.len());
        for (x, mut set) in window.indices().zip(values) {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::InvalidMultiMap(format!("F({}) is empty", label(x))));
            }
            if let Some(&y) = set.iter().find(|&&y| !window.contains(y)) {
                return Err(Error::OutOfWindow {
                    point: x,
                    image: y,
                    lo: window.lo(),
                    hi: window.hi(),
                });
            }
            clean.push(set);
        }
        Ok(MultiMap {
            window,
            values: clean,
        })
    }

    pub fn from_fn(window: LineWindow, f: impl Fn(i64) -> Vec<i64>) -> Result<Self> {
        let values = window.indices().map(f).collect();
        Self::new(window, values)
    }

    /// Interval values `[a(x), b(x)]` in either orientation.
    pub fn from_intervals(window: LineWindow, f: impl Fn(i64) -> (i64, i64)) -> Result<Self> {
        Self::from_fn(window, |x| {
            let (a, b) = f(x);
            (a.min(b)..=a.max(b)).collect()
        })
    }

    /// The singleton-valued map `x -> {f(x)}`; every image must be in the window.
    pub fn from_selfmap(f: &SelfMap) -> Result<Self> {
        let window = LineWindow::new(f.window().lo(), f.window().hi())?;
        Self::new(window, f.values().iter().map(|&y| vec![y]).collect())
    }

    pub fn window(&self) -> &LineWindow {
        &self.window
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn value(&self, x: i64) -> Result<&[i64]> {
        Ok(&self.values[self.window.pos(x)?])
    }

    fn at(&self, x: i64) -> &[i64] {
        &self.values[(x - self.window.lo()) as usize]
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        self.window.contains(x) && self.at(x).binary_search(&y).is_ok()
    }

    /// `x -> -F(-x)` on the mirrored window.
    pub fn mirrored(&self) -> MultiMap {
        let window = self.window.mirrored();
        let values = window
            .indices()
            .map(|x| {
                let mut v: Vec<i64> = self.at(-x).iter().map(|&y| -y).collect();
                v.reverse();
                v
            })
            .collect();
        MultiMap { window, values }
    }
}

/// `Γ(F)` with the product order. Element `k` is `pairs[k]`; pairs are
/// sorted by first then second coordinate.
#[derive(Clone, Debug)]
pub struct GraphPoset {
    pub poset: Poset,
    pub pairs: Vec<(i64, i64)>,
    pub proj_p: PosetMap,
    pub proj_q: PosetMap,
}

pub fn graph_poset(f: &MultiMap) -> GraphPoset {
    let lo = f.window.lo();
    let pairs: Vec<(i64, i64)> = f
        .window
        .indices()
        .flat_map(|x| f.at(x).iter().map(move |&y| (x, y)))
        .collect();
    let labels = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", label(x), label(y)))
        .collect();
    let poset = Poset::from_leq_trusted(labels, |s, t| {
        line_leq(pairs[s].0, pairs[t].0) && line_leq(pairs[s].1, pairs[t].1)
    });
    let proj_p = PosetMap::new(pairs.iter().map(|&(x, _)| (x - lo) as usize).collect());
    let proj_q = PosetMap::new(pairs.iter().map(|&(_, y)| (y - lo) as usize).collect());
    GraphPoset {
        poset,
        pairs,
        proj_p,
        proj_q,
    }
}

/// Outcome of the Vietoris-like test: the first chain of the codomain whose
/// preimage union is not acyclic, with that preimage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VietorisVerdict<C, P = C> {
    pub vietoris: bool,
    pub witness_chain: Option<Vec<C>>,
    pub witness_preimage: Option<Vec<P>>,
}

/// Tests every non-empty chain of `y`, shortest first, for an acyclic
/// preimage union under `f`.
pub fn is_vietoris_like_map(x: &Poset, y: &Poset, f: &PosetMap) -> Result<VietorisVerdict<usize>> {
    if let Some(v) = is_order_preserving(x, y, f)? {
        return Err(Error::InvalidMap(format!(
            "{} <= {} but their images are not ordered",
            x.label(v.lower),
            x.label(v.upper)
        )));
    }
    Ok(vietoris_with_chains(x, y.len(), &y.chains(), f))
}

fn vietoris_with_chains(
    x: &Poset,
    y_len: usize,
    chains: &[Vec<usize>],
    f: &PosetMap,
) -> VietorisVerdict<usize> {
    let mut fibers = vec![FixedBitSet::with_capacity(x.len()); y_len];
    for (a, &b) in f.images.iter().enumerate() {
        fibers[b].insert(a);
    }
    for chain in chains {
        let mut union = FixedBitSet::with_capacity(x.len());
        for &c in chain {
            union.union_with(&fibers[c]);
        }
        if !is_acyclic_within(x, &union) {
            return VietorisVerdict {
                vietoris: false,
                witness_chain: Some(chain.clone()),
                witness_preimage: Some(union.ones().collect()),
            };
        }
    }
    VietorisVerdict {
        vietoris: true,
        witness_chain: None,
        witness_preimage: None,
    }
}

/// Chains of a window poset, computed once and reused across many maps on
/// that window.
#[derive(Clone, Debug)]
pub struct WindowChains {
    len: usize,
    chains: Vec<Vec<usize>>,
}

impl WindowChains {
    pub fn new(window: &LineWindow) -> Self {
        WindowChains {
            len: window.len(),
            chains: window.poset().chains(),
        }
    }
}

/// The Vietoris-like test for `p : Γ(F) -> X`. Chains are reported as
/// window indices and preimages as graph pairs.
pub fn is_vietoris_like_multimap(f: &MultiMap) -> VietorisVerdict<i64, (i64, i64)> {
    let g = graph_poset(f);
    vietoris_of_graph(f, &g, &WindowChains::new(&f.window))
}

fn vietoris_of_graph(
    f: &MultiMap,
    g: &GraphPoset,
    chains: &WindowChains,
) -> VietorisVerdict<i64, (i64, i64)> {
    let v = vietoris_with_chains(&g.poset, chains.len, &chains.chains, &g.proj_p);
    let lo = f.window.lo();
    VietorisVerdict {
        vietoris: v.vietoris,
        witness_chain: v
            .witness_chain
            .map(|c| c.into_iter().map(|i| i as i64 + lo).collect()),
        witness_preimage: v
            .witness_preimage
            .map(|s| s.into_iter().map(|k| g.pairs[k]).collect()),
    }
}

fn rationals_as_strings<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn rational_as_string<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzResult {
    #[serde(serialize_with = "rationals_as_strings")]
    pub traces: Vec<BigRational>,
    #[serde(serialize_with = "rational_as_string")]
    pub lambda: BigRational,
    pub fixed_point_predicted: bool,
}

/// `Λ(F)` from `F_* = q_* ∘ (p_*)^{-1}` on rational homology.
pub fn lefschetz_number(f: &MultiMap) -> Result<LefschetzResult> {
    lefschetz_with(f, &WindowChains::new(&f.window))
}

/// [`lefschetz_number`] reusing precomputed window chains.
pub fn lefschetz_with(f: &MultiMap, chains: &WindowChains) -> Result<LefschetzResult> {
    let g = graph_poset(f);
    let verdict = vietoris_of_graph(f, &g, chains);
    if !verdict.vietoris {
        return Err(Error::NotVietoris(format!(
            "preimage of chain {:?} is not acyclic",
            verdict
                .witness_chain
                .unwrap_or_default()
                .into_iter()
                .map(label)
                .collect::<Vec<_>>()
        )));
    }
    let x = f.window.poset();
    let traces = match traces_on_cores::<SmallRational>(&g, x) {
        Some(t) => t?,
        None => traces_on_cores::<BigRational>(&g, x).expect("big rationals do not overflow")?,
    };
    let mut lambda = BigRational::zero();
    for (d, t) in traces.iter().enumerate() {
        if d % 2 == 0 {
            lambda += t;
        } else {
            lambda -= t;
        }
    }
    let fixed_point_predicted = !lambda.is_zero();
    Ok(LefschetzResult {
        traces,
        lambda,
        fixed_point_predicted,
    })
}

/// Traces of `q_* ∘ (p_*)^{-1}` computed on beat-point cores of `Γ(F)` and
/// `X`. The inclusion of a core and the retraction onto it are homotopy
/// inverse, so the induced maps agree with those of the full spaces.
/// `None` reports arithmetic overflow in `F`.
fn traces_on_cores<F: Field>(g: &GraphPoset, x: &Poset) -> Option<Result<Vec<BigRational>>> {
    let gamma_core = g.poset.core();
    let x_core = x.core();
    let mut x_pos = vec![usize::MAX; x.len()];
    for (i, &e) in x_core.elements.iter().enumerate() {
        x_pos[e] = i;
    }
    let restrict = |proj: &PosetMap| {
        PosetMap::new(
            gamma_core
                .elements
                .iter()
                .map(|&e| x_pos[x_core.retraction[proj.apply(e)]])
                .collect(),
        )
    };
    let (p, q) = (restrict(&g.proj_p), restrict(&g.proj_q));
    let hg = PosetHomology::<F>::new(&g.poset.induced(&gamma_core.elements))?;
    let hx = PosetHomology::<F>::new(&x.induced(&x_core.elements))?;
    let degrees = hg.degrees().max(hx.degrees());
    let ps = induced_matrices(&hg, &hx, &p, degrees)?;
    let qs = induced_matrices(&hg, &hx, &q, degrees)?;
    let mut traces = Vec::with_capacity(degrees);
    for (d, (pm, qm)) in ps.iter().zip(&qs).enumerate() {
        if pm.rows() != pm.cols() {
            return Some(Err(Error::Internal(format!(
                "p_* in degree {d} is {}x{}, not invertible",
                pm.rows(),
                pm.cols()
            ))));
        }
        let Some(inv) = linalg::inverse(pm)? else {
            return Some(Err(Error::Internal(format!("p_* in degree {d} is singular"))));
        };
        let fd: Matrix<F> = linalg::mat_mul(qm, &inv)?;
        traces.push(linalg::trace(&fd)?.to_big());
    }
    Some(Ok(traces))
}

/// `{x : x ∈ F(x)}`.
pub fn fixed_points(f: &MultiMap) -> BTreeSet<i64> {
    f.window.indices().filter(|&x| f.contains(x, x)).collect()
}

/// Edges `x -> y` for `y ∈ F(x)`, by window position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionGraph {
    pub nodes: Vec<i64>,
    pub edges: Vec<Vec<usize>>,
    /// `x ∈ F(x)` with `|F(x)| >= 2`: staying is allowed only finitely often.
    pub self_loop_multi: Vec<bool>,
}

impl TransitionGraph {
    pub fn of(f: &MultiMap) -> Self {
        let lo = f.window.lo();
        let nodes: Vec<i64> = f.window.indices().collect();
        let edges = f
            .values
            .iter()
            .map(|v| v.iter().map(|&y| (y - lo) as usize).collect())
            .collect();
        let self_loop_multi = nodes
            .iter()
            .map(|&x| f.at(x).len() >= 2 && f.contains(x, x))
            .collect();
        TransitionGraph {
            nodes,
            edges,
            self_loop_multi,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

/// Simple cycles by length. Each cycle starts at its least index and lists
/// distinct points; lengths without cycles are absent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PeriodTable {
    pub spectrum: BTreeSet<usize>,
    pub orbits: BTreeMap<usize, Vec<Vec<i64>>>,
    /// Some length hit `per_period_limit`, so its list is incomplete.
    pub truncated: bool,
}

/// Simple cycles of length at most `max_period` (clamped to the window
/// size), keeping at most `per_period_limit` per length. The search stops
/// early once every length is full.
pub fn periodic_orbits(f: &MultiMap, max_period: usize, per_period_limit: usize) -> PeriodTable {
    let g = TransitionGraph::of(f);
    let max_period = max_period.min(g.nodes.len());
    let mut table = PeriodTable::default();
    let mut search = CycleSearch {
        g: &g,
        max_period,
        limit: per_period_limit,
        table: &mut table,
        full: 0,
        on_path: vec![false; g.nodes.len()],
        path: Vec::new(),
    };
    search.run();
    table
}

/// The set of lengths `n <= max_period` with a simple cycle, stopping as
/// soon as all of them are found.
pub fn period_spectrum(f: &MultiMap, max_period: usize) -> BTreeSet<usize> {
    periodic_orbits(f, max_period, 1).spectrum
}

struct CycleSearch<'a> {
    g: &'a TransitionGraph,
    max_period: usize,
    limit: usize,
    table: &'a mut PeriodTable,
    full: usize,
    on_path: Vec<bool>,
    path: Vec<usize>,
}

impl CycleSearch<'_> {
    fn done(&self) -> bool {
        self.full >= self.max_period
    }

    fn record(&mut self) {
        let len = self.path.len();
        let list = self.table.orbits.entry(len).or_default();
        if list.len() >= self.limit {
            self.table.truncated = true;
            return;
        }
        list.push(self.path.iter().map(|&k| self.g.nodes[k]).collect());
        self.table.spectrum.insert(len);
        if list.len() == self.limit {
            self.full += 1;
        }
    }

    fn run(&mut self) {
        if self.limit == 0 {
            return;
        }
        for s in 0..self.g.nodes.len() {
            if self.done() {
                return;
            }
            self.path.push(s);
            self.on_path[s] = true;
            self.extend(s);
            self.on_path[s] = false;
            self.path.pop();
        }
    }

    fn extend(&mut self, start: usize) {
        let last = *self.path.last().expect("non-empty path");
        for &next in &self.g.edges[last] {
            if self.done() {
                return;
            }
            if next == start {
                self.record();
            } else if next > start && !self.on_path[next] && self.path.len() < self.max_period {
                self.path.push(next);
                self.on_path[next] = true;
                self.extend(start);
                self.on_path[next] = false;
                self.path.pop();
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionPolicy {
    LeastIndex,
    Seeded(u64),
}

/// An admissible orbit prefix of `max_steps` steps. At a node with
/// `|F(x)| >= 2` the orbit may stay at most `stall_bound - 1` extra times
/// in a row, so with the default bound of 1 it always moves on.
pub fn orbit_stream(
    f: &MultiMap,
    start: i64,
    policy: SelectionPolicy,
    stall_bound: usize,
    max_steps: usize,
) -> Result<Vec<i64>> {
    f.window.pos(start)?;
    let mut rng = match policy {
        SelectionPolicy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        SelectionPolicy::LeastIndex => None,
    };
    let mut orbit = vec![start];
    let mut run = 1;
    for _ in 0..max_steps {
        let x = *orbit.last().expect("non-empty");
        let image = f.at(x);
        let may_stay = image.len() == 1 || run < stall_bound.max(1);
        let choices: Vec<i64> = image.iter().copied().filter(|&y| y != x || may_stay).collect();
        let next = match rng.as_mut() {
            Some(r) => choices[r.gen_range(0..choices.len())],
            None => choices[0],
        };
        run = if next == x { run + 1 } else { 1 };
        orbit.push(next);
    }
    Ok(orbit)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantClass {
    Attractor,
    Repeller,
    Saddle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideKind {
    Attracting,
    Repelling,
    Boundary,
    /// Some paths from the side reach the set and some do not.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSet {
    pub points: Vec<i64>,
    pub lo: i64,
    pub hi: i64,
    pub left: SideKind,
    pub right: SideKind,
    pub class: Option<InvariantClass>,
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSetReport {
    pub sets: Vec<InvariantSet>,
}

impl InvariantSetReport {
    pub fn classified(&self) -> impl Iterator<Item = &InvariantSet> {
        self.sets.iter().filter(|s| s.class.is_some())
    }
}

/// Strongly connected components (Tarjan), as lists of node positions.
fn strongly_connected(g: &TransitionGraph) -> Vec<Vec<usize>> {
    struct Tarjan<'a> {
        g: &'a TransitionGraph,
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    impl Tarjan<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = self.next;
            self.low[v] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            for &w in &self.g.edges[v] {
                if self.index[w] == usize::MAX {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                } else if self.on_stack[w] {
                    self.low[v] = self.low[v].min(self.index[w]);
                }
            }
            if self.low[v] == self.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = self.stack.pop().expect("tarjan stack");
                    self.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                self.out.push(comp);
            }
        }
    }
    let n = g.nodes.len();
    let mut t = Tarjan {
        g,
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if t.index[v] == usize::MAX {
            t.visit(v);
        }
    }
    t.out
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Invariant sets are built from stationary points (`F(x) = {x}`) and
/// non-trivial strongly connected components; adjacent stationary points
/// and members of one component are merged. Each side of a set is judged
/// from its adjacent point: attracting when every fair path from it enters
/// the set, repelling when no path does.
pub fn classify_invariant_sets(f: &MultiMap) -> InvariantSetReport {
    let g = TransitionGraph::of(f);
    let n = g.nodes.len();
    let mut recurrent = vec![false; n];
    let mut parent: Vec<usize> = (0..n).collect();
    for (v, e) in g.edges.iter().enumerate() {
        if e.as_slice() == [v] {
            recurrent[v] = true;
        }
    }
    for comp in strongly_connected(&g) {
        if comp.len() >= 2 {
            for &v in &comp {
                recurrent[v] = true;
                union(&mut parent, comp[0], v);
            }
        }
    }
    for v in 1..n {
        if recurrent[v] && recurrent[v - 1] {
            union(&mut parent, v - 1, v);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in (0..n).filter(|&v| recurrent[v]) {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }

    let mut sets = Vec::new();
    for members in groups.into_values() {
        let mut in_set = vec![false; n];
        for &v in &members {
            in_set[v] = true;
        }
        let (first, last) = (members[0], *members.last().expect("non-empty"));
        let left = if first == 0 {
            SideKind::Boundary
        } else {
            side_kind(&g, &in_set, first - 1)
        };
        let right = if last + 1 == n {
            SideKind::Boundary
        } else {
            side_kind(&g, &in_set, last + 1)
        };
        let class = match (left, right) {
            (SideKind::Attracting, SideKind::Attracting) => Some(InvariantClass::Attractor),
            (SideKind::Repelling, SideKind::Repelling) => Some(InvariantClass::Repeller),
            (SideKind::Attracting, SideKind::Repelling) | (SideKind::Repelling, SideKind::Attracting) => {
                Some(InvariantClass::Saddle)
            }
            _ => None,
        };
        let diagnostic = class.is_none().then(|| {
            let which = |s: SideKind| match s {
                SideKind::Boundary => "meets the window boundary",
                SideKind::Mixed => "is mixed-side",
                _ => "is decided",
            };
            format!("left side {}, right side {}", which(left), which(right))
        });
        sets.push(InvariantSet {
            points: members.iter().map(|&v| g.nodes[v]).collect(),
            lo: g.nodes[first],
            hi: g.nodes[last],
            left,
            right,
            class,
            diagnostic,
        });
    }
    InvariantSetReport { sets }
}

fn side_kind(g: &TransitionGraph, in_set: &[bool], a: usize) -> SideKind {
    if inevitably_reaches(g, in_set)[a] {
        SideKind::Attracting
    } else if reachable_from(g, a).iter().zip(in_set).any(|(&r, &s)| r && s) {
        SideKind::Mixed
    } else {
        SideKind::Repelling
    }
}

/// Least fixpoint: a node is in when it is in the target, or when it must
/// leave itself (a stalling self-loop does not count) and every other
/// successor is in.
fn inevitably_reaches(g: &TransitionGraph, target: &[bool]) -> Vec<bool> {
    let mut inev = target.to_vec();
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..g.nodes.len() {
            if inev[v] {
                continue;
            }
            let mut moves = g.edges[v].iter().filter(|&&w| w != v).peekable();
            if moves.peek().is_none() {
                continue;
            }
            if moves.all(|&w| inev[w]) {
                inev[v] = true;
                changed = true;
            }
        }
    }
    inev
}

fn reachable_from(g: &TransitionGraph, a: usize) -> Vec<bool> {
    let mut seen = vec![false; g.nodes.len()];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(v) = stack.pop() {
        for &w in &g.edges[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// All interval-valued multimaps on a window, addressable by a code in
/// `0..len()`. Codes enumerate the value intervals per point in
/// lexicographic order of (left end, right end), first point most
/// significant.
#[derive(Clone, Debug)]
pub struct IntervalMultimaps {
    window: LineWindow,
    intervals: Vec<Vec<i64>>,
    len: u64,
}

impl IntervalMultimaps {
    pub fn new(window: &LineWindow) -> Self {
        let intervals: Vec<Vec<i64>> = window
            .indices()
            .flat_map(|a| {
                window
                    .indices()
                    .filter(move |&b| b >= a)
                    .map(move |b| (a..=b).collect())
            })
            .collect();
        let len = (intervals.len() as u64)
            .checked_pow(window.len() as u32)
            .expect("interval multimap count fits in u64");
        IntervalMultimaps {
            window: window.clone(),
            intervals,
            len,
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, mut code: u64) -> MultiMap {
        assert!(code < self.len, "code out of range");
        let k = self.intervals.len() as u64;
        let mut values = vec![Vec::new(); self.window.len()];
        for slot in values.iter_mut().rev() {
            *slot = self.intervals[(code % k) as usize].clone();
            code /= k;
        }
        MultiMap {
            window: self.window.clone(),
            values,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiMap> + '_ {
        (0..self.len).map(|c| self.get(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::reduced_homology_of_poset;

    fn w(lo: i64, hi: i64) -> LineWindow {
        LineWindow::new(lo, hi).unwrap()
    }

    fn full_interval(window: LineWindow) -> MultiMap {
        MultiMap::from_fn(window, |_| vec![1, 2, 3]).unwrap()
    }

    fn antichain() -> MultiMap {
        MultiMap::from_fn(LineWindow::symmetric(2), |x| {
            if x == 0 {
                vec![-1, 1]
            } else {
                vec![x]
            }
        })
        .unwrap()
    }

    #[test]
    fn value_sets_are_validated() {
        assert!(matches!(
            MultiMap::new(w(0, 1), vec![vec![0], vec![]]),
            Err(Error::InvalidMultiMap(_))
        ));
        assert!(matches!(
            MultiMap::new(w(0, 1), vec![vec![0], vec![2]]),
            Err(Error::OutOfWindow { .. })
        ));
        let f = MultiMap::new(w(0, 1), vec![vec![1, 0, 1], vec![1]]).unwrap();
        assert_eq!(f.values()[0], vec![0, 1]);
    }

    #[test]
    fn identity_graph_is_the_window() {
        let win = LineWindow::symmetric(2);
        let f = MultiMap::from_fn(win.clone(), |x| vec![x]).unwrap();
        let g = graph_poset(&f);
        assert_eq!(g.poset.len(), 5);
        assert_eq!(g.poset.covers().len(), win.poset().covers().len());
        assert_eq!(g.proj_p, g.proj_q);
    }

    #[test]
    fn full_interval_graph() {
        let f = full_interval(w(1, 3));
        let g = graph_poset(&f);
        assert_eq!(g.poset.len(), 9);
        for x in 0..3 {
            let fiber = g.proj_p.preimage(&[x]);
            let sub = g.poset.subposet(&fiber).unwrap();
            assert_eq!(sub.covers().len(), 2);
        }
        assert!(is_vietoris_like_multimap(&f).vietoris);
    }

    #[test]
    fn antichain_counterexample() {
        let f = antichain();
        let g = graph_poset(&f);
        let fiber = g.proj_p.preimage(&[2]);
        assert_eq!(g.poset.subposet(&fiber).unwrap().covers().len(), 0);
        let v = is_vietoris_like_multimap(&f);
        assert!(!v.vietoris);
        assert_eq!(v.witness_chain, Some(vec![0]));
        assert_eq!(v.witness_preimage, Some(vec![(0, -1), (0, 1)]));
        let pos: Vec<usize> = fiber;
        let h = reduced_homology_of_poset(&g.poset.subposet(&pos).unwrap());
        assert_eq!(h.betti(0), 1);
        assert!(matches!(lefschetz_number(&f), Err(Error::NotVietoris(_))));
    }

    #[test]
    fn lefschetz_examples() {
        let id = MultiMap::from_fn(LineWindow::symmetric(3), |x| vec![x]).unwrap();
        assert_eq!(
            lefschetz_number(&id).unwrap().lambda,
            BigRational::from_integer(1.into())
        );
        let r = lefschetz_number(&full_interval(w(1, 3))).unwrap();
        assert_eq!(r.lambda, BigRational::from_integer(1.into()));
        assert!(r.fixed_point_predicted);
        let mirror = MultiMap::from_fn(LineWindow::symmetric(3), |x| vec![-x]).unwrap();
        assert_eq!(
            lefschetz_number(&mirror).unwrap().lambda,
            BigRational::from_integer(1.into())
        );
        assert_eq!(fixed_points(&mirror), BTreeSet::from([0]));
    }

    #[test]
    fn full_interval_periods() {
        let f = full_interval(w(1, 3));
        let t = periodic_orbits(&f, 3, usize::MAX);
        assert_eq!(t.spectrum, BTreeSet::from([1, 2, 3]));
        assert!(t.orbits[&3].contains(&vec![1, 2, 3]));
        assert_eq!(t.orbits[&3].len(), 2);
        assert!(!t.truncated);
        assert_eq!(fixed_points(&f), BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn period_limit_truncates() {
        let f = full_interval(w(1, 3));
        let t = periodic_orbits(&f, 3, 1);
        assert!(t.orbits.values().all(|v| v.len() == 1));
        assert_eq!(t.spectrum, BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn identity_orbits_stay() {
        let f = MultiMap::from_fn(LineWindow::symmetric(1), |x| vec![x]).unwrap();
        assert_eq!(
            orbit_stream(&f, 1, SelectionPolicy::LeastIndex, 1, 4).unwrap(),
            vec![1; 5]
        );
        assert_eq!(periodic_orbits(&f, 3, 10).spectrum, BTreeSet::from([1]));
    }

    #[test]
    fn stall_bound_forces_movement() {
        let f = MultiMap::from_intervals(w(0, 3), |x| (x, (x + 1).min(3))).unwrap();
        let o = orbit_stream(&f, 0, SelectionPolicy::LeastIndex, 1, 4).unwrap();
        assert_eq!(o, vec![0, 1, 2, 3, 3]);
        let o = orbit_stream(&f, 0, SelectionPolicy::LeastIndex, 2, 4).unwrap();
        assert_eq!(o, vec![0, 0, 1, 1, 2]);
    }

    #[test]
    fn seeded_orbits_are_reproducible() {
        let f = full_interval(w(1, 3));
        let a = orbit_stream(&f, 1, SelectionPolicy::Seeded(7), 1, 50).unwrap();
        let b = orbit_stream(&f, 1, SelectionPolicy::Seeded(7), 1, 50).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|p| f.contains(p[0], p[1]) && p[0] != p[1]));
    }

    #[test]
    fn scc_invariant_set() {
        let r = classify_invariant_sets(&full_interval(w(1, 3)));
        assert_eq!(r.sets.len(), 1);
        assert_eq!(r.sets[0].points, vec![1, 2, 3]);
        assert_eq!(r.sets[0].class, None);
    }

    #[test]
    fn interval_multimap_count() {
        assert_eq!(IntervalMultimaps::new(&w(0, 1)).iter().count(), 9);
        let all = IntervalMultimaps::new(&w(0, 2));
        assert_eq!(all.len(), 216);
        assert_eq!(all.get(0).values(), &[vec![0], vec![0], vec![0]]);
        assert_eq!(all.get(215).values(), &[vec![2], vec![2], vec![2]]);
        let distinct: BTreeSet<Vec<Vec<i64>>> = all.iter().map(|m| m.values().to_vec()).collect();
        assert_eq!(distinct.len(), 216);
    }

    #[test]
    fn mirrored_multimap() {
        let f = MultiMap::from_intervals(w(0, 2), |x| (x, 2)).unwrap();
        let m = f.mirrored();
        assert_eq!((m.window().lo(), m.window().hi()), (-2, 0));
        assert_eq!(m.values(), &[vec![-2], vec![-2, -1], vec![-2, -1, 0]]);
        assert_eq!(m.mirrored(), f);
    }
}
