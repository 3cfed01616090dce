//! Finite posets stored through their Hasse diagram.
//!
//! Elements are the positions `0..len()`. Every constructor reduces its input
//! to the irredundant cover relation and keeps the reflexive-transitive
//! closure as one bitset row per element, so order queries are O(1).

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    // up[a] contains b iff a <= b
    up: Vec<FixedBitSet>,
    // down[b] contains a iff a <= b
    down: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
}

/// A pair `lower <= upper` whose images are not comparable in the same way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OrderViolation<T> {
    pub lower: T,
    pub upper: T,
}

impl Poset {
    /// Builds a poset from strict relations `a < b`. The relation may be
    /// redundant; it is closed transitively and reduced to covers.
    pub fn from_relation<I>(labels: Vec<String>, less_than: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (a, b) in less_than {
            if a >= n || b >= n {
                return Err(Error::NotFound(format!("relation pair ({a}, {b})")));
            }
            if a == b {
                return Err(Error::NotPartialOrder(format!(
                    "strict relation contains {} < {}",
                    labels[a], labels[a]
                )));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }

        // Kahn's algorithm; leftovers mean a directed cycle.
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::NotPartialOrder(
                "relation contains a cycle (antisymmetry fails)".into(),
            ));
        }

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &v in order.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(v);
            for &w in &succ[v] {
                row.union_with(&up[w]);
            }
            up[v] = row;
        }
        Ok(Self::from_closure(labels, up))
    }

    /// Builds a poset from a full order predicate. The predicate is validated
    /// as a partial order.
    pub fn from_leq<F>(labels: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if leq(a, b) {
                    row.insert(b);
                }
            }
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(Error::NotPartialOrder(format!(
                    "{} <= {} fails (reflexivity)",
                    labels[a], labels[a]
                )));
            }
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(Error::NotPartialOrder(format!(
                        "{} and {} are mutually below each other (antisymmetry)",
                        labels[a], labels[b]
                    )));
                }
                if !up[b].is_subset(&up[a]) {
                    return Err(Error::NotPartialOrder(format!(
                        "transitivity fails above {} <= {}",
                        labels[a], labels[b]
                    )));
                }
            }
        }
        Ok(Self::from_closure(labels, up))
    }

    fn from_closure(labels: Vec<String>, up: Vec<FixedBitSet>) -> Self {
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        let mut covers = Vec::new();
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for a in 0..n {
            for b in up[a].ones() {
                if a == b {
                    continue;
                }
                // a < b is a cover iff nothing lies strictly between them.
                let between = up[a].intersection(&down[b]).filter(|&c| c != a && c != b).count();
                if between == 0 {
                    covers.push((a, b));
                    upper_covers[a].push(b);
                    lower_covers[b].push(a);
                }
            }
        }
        Poset {
            labels,
            up,
            down,
            covers,
            upper_covers,
            lower_covers,
        }
    }

    pub fn singleton(label: impl Into<String>) -> Self {
        Self::from_relation(vec![label.into()], []).expect("singleton is a poset")
    }

    pub fn empty() -> Self {
        Self::from_relation(Vec::new(), []).expect("empty poset")
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("c{i}")).collect();
        Self::from_relation(labels, (1..n).map(|i| (i - 1, i))).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("a{i}")).collect();
        Self::from_relation(labels, []).expect("antichain is a poset")
    }

    /// Two minima `a`, `b` each below two maxima `c`, `d`: the smallest
    /// poset whose order complex is a circle.
    pub fn minimal_circle() -> Self {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        Self::from_relation(labels, [(0, 2), (0, 3), (1, 2), (1, 3)]).expect("minimal circle is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Position of the element carrying `label`.
    pub fn find(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::NotFound(label.to_string()))
    }

    fn check(&self, a: usize) -> Result<()> {
        if a < self.len() {
            Ok(())
        } else {
            Err(Error::NotFound(format!("element #{a}")))
        }
    }

    /// `a <= b`. Panics when either position is out of range; see [`Poset::leq`].
    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn leq(&self, a: usize, b: usize) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.le(a, b))
    }

    /// Cover pairs `(a, b)` with `a < b`, sorted lexicographically.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper_covers[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower_covers[a]
    }

    /// The minimal open set `U_x`: everything below `x`, `x` included.
    pub fn minimal_open(&self, x: usize) -> Result<Vec<usize>> {
        self.check(x)?;
        Ok(self.down[x].ones().collect())
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// Longest chain ending at each element, minus one.
    fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for &v in &self.topological_order() {
            for &w in &self.upper_covers[v] {
                h[w] = h[w].max(h[v] + 1);
            }
        }
        h
    }

    pub fn height(&self, x: usize) -> Result<usize> {
        self.check(x)?;
        Ok(self.heights()[x])
    }

    /// Height of the whole poset; 0 for the empty poset.
    pub fn height_of(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// A linear extension; ties are broken by position.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.lower_covers[v].len()).collect();
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &w in &self.upper_covers[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        order
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.lower_covers[v].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.upper_covers[v].is_empty())
            .collect()
    }

    /// The greatest element, if there is one.
    pub fn maximum(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [m] if self.down[*m].count_ones(..) == self.len() => Some(*m),
            _ => None,
        }
    }

    /// The least element, if there is one.
    pub fn minimum(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [m] if self.up[*m].count_ones(..) == self.len() => Some(*m),
            _ => None,
        }
    }

    /// Connected components of the comparability graph, each sorted, in
    /// order of their smallest element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in self.upper_covers[v].iter().chain(&self.lower_covers[v]) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// All non-empty chains, each listed bottom-up, ordered by length and
    /// then lexicographically.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        for s in 0..self.len() {
            current.push(s);
            self.extend_chains(&mut current, &mut out);
            current.pop();
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn extend_chains(&self, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(current.clone());
        let last = *current.last().expect("non-empty chain");
        for next in self.up[last].ones() {
            if next != last {
                current.push(next);
                self.extend_chains(current, out);
                current.pop();
            }
        }
    }

    /// The induced subposet on `elements`, kept in the given order.
    pub fn subposet(&self, elements: &[usize]) -> Result<Poset> {
        let mut seen = FixedBitSet::with_capacity(self.len());
        for &e in elements {
            self.check(e)?;
            if seen.put(e) {
                return Err(Error::InvalidMap(format!("{} listed twice", self.labels[e])));
            }
        }
        Ok(self.induced(elements))
    }

    /// Like [`Poset::subposet`] for elements already known to be valid and
    /// distinct; skips re-validating the order.
    pub(crate) fn induced(&self, elements: &[usize]) -> Poset {
        let n = elements.len();
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        let up = elements
            .iter()
            .map(|&a| {
                let mut row = FixedBitSet::with_capacity(n);
                for (j, &b) in elements.iter().enumerate() {
                    if self.up[a].contains(b) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Poset::from_closure(labels, up)
    }

    /// Builds a poset from an order predicate the caller guarantees to be a
    /// partial order.
    pub(crate) fn from_leq_trusted<F>(labels: Vec<String>, leq: F) -> Poset
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = labels.len();
        let up = (0..n)
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(n);
                for b in 0..n {
                    if leq(a, b) {
                        row.insert(b);
                    }
                }
                row
            })
            .collect();
        Poset::from_closure(labels, up)
    }

    /// Repeatedly removes beat points (an element whose strict down-set has
    /// a maximum, or whose strict up-set has a minimum) from `within`.
    /// Each removal is a strong deformation retraction, so the remaining
    /// core has the homotopy type of `within`.
    pub fn core_within(&self, within: &FixedBitSet) -> Core {
        let n = self.len();
        let mut alive = within.clone();
        alive.grow(n);
        let mut next = vec![usize::MAX; n];
        let mut changed = true;
        while changed {
            changed = false;
            let members: Vec<usize> = alive.ones().collect();
            for x in members {
                let target = self
                    .beat_target(&alive, x, &self.down)
                    .or_else(|| self.beat_target(&alive, x, &self.up));
                if let Some(t) = target {
                    next[x] = t;
                    alive.set(x, false);
                    changed = true;
                }
            }
        }
        let mut retraction = vec![usize::MAX; n];
        for x in within.ones() {
            let mut y = x;
            while next[y] != usize::MAX {
                y = next[y];
            }
            retraction[x] = y;
        }
        Core {
            elements: alive.ones().collect(),
            retraction,
        }
    }

    /// The nearest element of `rows[x] ∩ alive` minus `x` if it is comparable
    /// with all the others (the maximum of the strict down-set when `rows` is
    /// `down`, the minimum of the strict up-set when it is `up`).
    fn beat_target(&self, alive: &FixedBitSet, x: usize, rows: &[FixedBitSet]) -> Option<usize> {
        let mut strict = rows[x].clone();
        strict.intersect_with(alive);
        strict.set(x, false);
        strict.ones().find(|&m| strict.is_subset(&rows[m]))
    }

    pub fn core(&self) -> Core {
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        self.core_within(&all)
    }

    /// The product poset; the pair `(a, b)` sits at position `a * q.len() + b`.
    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.len();
        let labels = (0..self.len() * m)
            .map(|k| format!("({},{})", self.labels[k / m], other.labels[k % m]))
            .collect();
        Poset::from_leq(labels, |s, t| self.le(s / m, t / m) && other.le(s % m, t % m))
            .expect("product of posets is a poset")
    }

    /// Adds a new greatest element.
    pub fn with_cone_point(&self, label: impl Into<String>) -> Poset {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push(label.into());
        Poset::from_leq(labels, |a, b| b == n || (a < n && b < n && self.le(a, b)))
            .expect("cone of a poset is a poset")
    }
}

/// Result of beat-point reduction: the surviving elements (ascending) and a
/// retraction sending each reduced element to one of them. Elements outside
/// the reduced set map to `usize::MAX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Core {
    pub elements: Vec<usize>,
    pub retraction: Vec<usize>,
}

/// A map between finite posets, given by the image position of every
/// domain element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosetMap {
    pub images: Vec<usize>,
}

impl PosetMap {
    pub fn new(images: Vec<usize>) -> Self {
        PosetMap { images }
    }

    pub fn identity(n: usize) -> Self {
        PosetMap {
            images: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, target: usize) -> Self {
        PosetMap {
            images: vec![target; n],
        }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PosetMap) -> PosetMap {
        PosetMap {
            images: self.images.iter().map(|&a| other.images[a]).collect(),
        }
    }

    /// Elements of the domain mapped into `targets`.
    pub fn preimage(&self, targets: &[usize]) -> Vec<usize> {
        (0..self.images.len())
            .filter(|&a| targets.contains(&self.images[a]))
            .collect()
    }
}

/// Checks `a <= b => f(a) <= f(b)`. Returns the first offending cover pair
/// of the domain, or `None` when `f` is order-preserving (equivalently,
/// continuous).
pub fn is_order_preserving(
    domain: &Poset,
    codomain: &Poset,
    f: &PosetMap,
) -> Result<Option<OrderViolation<usize>>> {
    if f.images.len() != domain.len() {
        return Err(Error::InvalidMap(format!(
            "map has {} images for a domain of {} elements",
            f.images.len(),
            domain.len()
        )));
    }
    if let Some(&bad) = f.images.iter().find(|&&y| y >= codomain.len()) {
        return Err(Error::NotFound(format!("image #{bad} in codomain")));
    }
    Ok(domain
        .covers()
        .iter()
        .find(|&&(a, b)| !codomain.le(f.apply(a), f.apply(b)))
        .map(|&(lower, upper)| OrderViolation { lower, upper }))
}
