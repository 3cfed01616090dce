//! Continuous self-maps of line windows: orbits, periodic points, the
//! interval image lemma, exhaustive enumeration and classification.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::complex::{induced_poset_map, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::line::{
    is_minimal_index, line_leq, tends_to, Direction, EventualSequence, Interval, LineWindow, Side, TailRule,
};
use crate::poset::OrderViolation;

/// Windows above this many elements are refused by the enumerator unless forced.
pub const ENUMERATION_LIMIT: usize = 13;

/// A self-map of `L` given explicitly on a window and by tail rules outside.
/// Window images may leave the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfMap {
    window: LineWindow,
    values: Vec<i64>,
}

impl SelfMap {
    pub fn new(window: LineWindow, values: Vec<i64>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::InvalidMap(format!(
                "{} values for a window of {} elements",
                values.len(),
                window.len()
            )));
        }
        window.left_tail.validate()?;
        window.right_tail.validate()?;
        Ok(SelfMap { window, values })
    }

    pub fn from_fn(window: LineWindow, f: impl Fn(i64) -> i64) -> Self {
        let values = window.indices().map(f).collect();
        SelfMap { window, values }
    }

    pub fn identity(window: LineWindow) -> Self {
        Self::from_fn(window, |i| i)
    }

    /// `x_i -> x_{-i}`.
    pub fn mirror(window: LineWindow) -> Self {
        Self::from_fn(window, |i| -i)
    }

    /// `x_i -> x_{i+offset}`.
    pub fn shift(window: LineWindow, offset: i64) -> Self {
        Self::from_fn(window, move |i| i + offset)
    }

    pub fn constant(window: LineWindow, target: i64) -> Self {
        Self::from_fn(window, move |_| target)
    }

    pub fn window(&self) -> &LineWindow {
        &self.window
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Image of a window point.
    pub fn image(&self, i: i64) -> Result<i64> {
        Ok(self.values[self.window.pos(i)?])
    }

    /// Image of any point of `L`; `None` where a `None` tail leaves it undefined.
    pub fn apply(&self, i: i64) -> Option<i64> {
        match self.window.side_of(i) {
            None => Some(self.values[(i - self.window.lo()) as usize]),
            Some(side) => self.window.tail(side).apply(i),
        }
    }

    /// Whether every window image lies in the window.
    pub fn is_window_selfmap(&self) -> bool {
        self.values.iter().all(|&v| self.window.contains(v))
    }

    /// `x_i -> f(x_i)` conjugated by the mirror `x_i -> x_{-i}`.
    pub fn conjugate_by_mirror(&self) -> SelfMap {
        let window = self.window.mirrored();
        let values = window
            .indices()
            .map(|i| -self.values[(-i - self.window.lo()) as usize])
            .collect();
        SelfMap { window, values }
    }

    /// `other ∘ self` on window points; both maps must share the window and
    /// `self` must map the window into itself.
    pub fn then(&self, other: &SelfMap) -> Result<SelfMap> {
        let values = self
            .values
            .iter()
            .map(|&v| other.image(v))
            .collect::<Result<Vec<_>>>()?;
        SelfMap::new(other.window.clone(), values)
    }
}

/// Order-preservation on the window and across both seams.
pub fn is_order_preserving_line(f: &SelfMap) -> Result<Option<OrderViolation<i64>>> {
    let w = &f.window;
    w.left_tail.validate()?;
    w.right_tail.validate()?;
    let lo = if w.left_tail == TailRule::None {
        w.lo()
    } else {
        w.lo() - 1
    };
    let hi = if w.right_tail == TailRule::None {
        w.hi()
    } else {
        w.hi() + 1
    };
    for i in lo..hi {
        let (lower, upper) = if is_minimal_index(i) {
            (i, i + 1)
        } else {
            (i + 1, i)
        };
        let (fl, fu) = (
            f.apply(lower).expect("defined near the window"),
            f.apply(upper).expect("defined near the window"),
        );
        if !line_leq(fl, fu) {
            return Ok(Some(OrderViolation { lower, upper }));
        }
    }
    Ok(None)
}

/// Continuity of `f`, with the first offending pair on failure.
pub fn check_continuity(f: &SelfMap) -> Option<OrderViolation<i64>> {
    is_order_preserving_line(f).expect("SelfMap tails are validated at construction")
}

pub fn is_continuous(f: &SelfMap) -> bool {
    check_continuity(f).is_none()
}

/// `f([a, b])`; every image must stay inside the window.
pub fn image_of_interval(f: &SelfMap, a: i64, b: i64) -> Result<BTreeSet<i64>> {
    let interval = f.window.interval(a, b)?;
    let w = &f.window;
    interval
        .points
        .iter()
        .map(|&x| {
            let y = f.image(x)?;
            if w.contains(y) {
                Ok(y)
            } else {
                Err(Error::OutOfWindow {
                    point: x,
                    image: y,
                    lo: w.lo(),
                    hi: w.hi(),
                })
            }
        })
        .collect()
}

/// `[f(a), f(b)] ⊆ f([a, b])`.
pub fn contains_interval_check(f: &SelfMap, a: i64, b: i64) -> Result<bool> {
    let image = image_of_interval(f, a, b)?;
    let target = Interval::new(f.image(a)?, f.image(b)?);
    Ok(target.points.iter().all(|p| image.contains(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OrbitStatus {
    Periodic { period: usize, preperiod: usize },
    LeftWindow { direction: Direction },
    Inconclusive,
}

/// A forward orbit. When periodic, `points` ends with the first repeated
/// point, so `points[preperiod + period] == points[preperiod]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub start: i64,
    pub points: Vec<i64>,
    pub status: OrbitStatus,
}

impl OrbitRecord {
    /// The cycle the orbit ends in, if periodic.
    pub fn cycle(&self) -> Option<&[i64]> {
        match self.status {
            OrbitStatus::Periodic { period, preperiod } => Some(&self.points[preperiod..preperiod + period]),
            _ => None,
        }
    }
}

/// Iterates `f` from `x` until a point repeats, the orbit leaves the window
/// for good (or where the map is undefined), or `max_steps` applications.
pub fn iterate(f: &SelfMap, x: i64, max_steps: usize) -> Result<OrbitRecord> {
    f.window.pos(x)?;
    Ok(iterate_from(f, x, max_steps))
}

fn iterate_from(f: &SelfMap, x: i64, max_steps: usize) -> OrbitRecord {
    let mut points = vec![x];
    let mut seen: HashMap<i64, usize> = HashMap::from([(x, 0)]);
    let mut cur = x;
    let mut steps = 0;
    loop {
        if let Some(side) = f.window.side_of(cur) {
            let tail = f.window.tail(side);
            let outward = matches!(
                (side, tail),
                (Side::Right, TailRule::Shift { offset }) if offset > 0
            ) || matches!(
                (side, tail),
                (Side::Left, TailRule::Shift { offset }) if offset < 0
            );
            if tail == TailRule::None || outward {
                let direction = tends_to(&EventualSequence {
                    prefix: points.clone(),
                    continuation: tail,
                });
                return OrbitRecord {
                    start: x,
                    points,
                    status: OrbitStatus::LeftWindow { direction },
                };
            }
        }
        if steps == max_steps {
            return OrbitRecord {
                start: x,
                points,
                status: OrbitStatus::Inconclusive,
            };
        }
        cur = f.apply(cur).expect("defined: None tails handled above");
        steps += 1;
        points.push(cur);
        if let Some(&first) = seen.get(&cur) {
            return OrbitRecord {
                start: x,
                points,
                status: OrbitStatus::Periodic {
                    period: steps - first,
                    preperiod: first,
                },
            };
        }
        seen.insert(cur, steps);
    }
}

/// Window points that are periodic with minimal period at most `max_period`,
/// grouped by period.
pub fn periodic_points(f: &SelfMap, max_period: usize) -> BTreeMap<usize, BTreeSet<i64>> {
    let out = periodic_table(f, max_period);
    debug_assert!(
        !is_continuous(f) || out.keys().all(|&p| p <= 2),
        "continuous map with a periodic point of period >= 3: {:?}",
        f.values
    );
    out
}

/// [`periodic_points`] without the debug check, for callers that count
/// violations themselves.
pub(crate) fn periodic_table(f: &SelfMap, max_period: usize) -> BTreeMap<usize, BTreeSet<i64>> {
    let mut out: BTreeMap<usize, BTreeSet<i64>> = BTreeMap::new();
    for x in f.window.indices() {
        let rec = iterate_from(f, x, max_period);
        if let OrbitStatus::Periodic { period, preperiod: 0 } = rec.status {
            out.entry(period).or_default().insert(x);
        }
    }
    out
}

/// Streams every order-preserving self-map of a window (tails `None`), in
/// ascending lexicographic order of the image vector.
#[derive(Clone, Debug)]
pub struct ContinuousMaps {
    window: LineWindow,
    choices: Vec<Vec<i64>>,
    cursor: Vec<usize>,
    values: Vec<i64>,
}

impl ContinuousMaps {
    fn start(window: LineWindow, first: Vec<i64>) -> Self {
        ContinuousMaps {
            window,
            choices: vec![first],
            cursor: vec![0],
            values: Vec::new(),
        }
    }

    /// Images allowed for position `pos` given the image of `pos - 1`.
    fn candidates(&self, pos: usize, prev: i64) -> Vec<i64> {
        let w = &self.window;
        let prev_is_lower = is_minimal_index(w.index(pos - 1));
        [prev - 1, prev, prev + 1]
            .into_iter()
            .filter(|&c| w.contains(c))
            .filter(|&c| {
                if prev_is_lower {
                    line_leq(prev, c)
                } else {
                    line_leq(c, prev)
                }
            })
            .collect()
    }
}

impl Iterator for ContinuousMaps {
    type Item = SelfMap;

    fn next(&mut self) -> Option<SelfMap> {
        let n = self.window.len();
        loop {
            let top = self.cursor.len().checked_sub(1)?;
            if self.cursor[top] >= self.choices[top].len() {
                self.cursor.pop();
                self.choices.pop();
                continue;
            }
            let c = self.choices[top][self.cursor[top]];
            self.cursor[top] += 1;
            self.values.truncate(top);
            self.values.push(c);
            if self.values.len() == n {
                return Some(SelfMap {
                    window: self.window.clone(),
                    values: self.values.clone(),
                });
            }
            let next = self.candidates(top + 1, c);
            self.choices.push(next);
            self.cursor.push(0);
        }
    }
}

fn guard(window: &LineWindow, force: bool) -> Result<()> {
    if window.len() > ENUMERATION_LIMIT && !force {
        return Err(Error::WindowTooLarge {
            size: window.len(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// All continuous self-maps of `window` with images inside it.
pub fn enumerate_continuous_selfmaps(window: &LineWindow, force: bool) -> Result<ContinuousMaps> {
    guard(window, force)?;
    let w = LineWindow::new(window.lo(), window.hi())?;
    let first = w.indices().collect();
    Ok(ContinuousMaps::start(w, first))
}

/// The part of the enumeration whose first window point maps to `image`.
pub fn enumerate_partition(window: &LineWindow, image: i64, force: bool) -> Result<ContinuousMaps> {
    guard(window, force)?;
    let w = LineWindow::new(window.lo(), window.hi())?;
    w.pos(image)?;
    Ok(ContinuousMaps::start(w, vec![image]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum DynamicsTag {
    Identity,
    EventuallyFixedInterval { z: i64, w: i64 },
    PeriodTwoHomeomorphism { fixed: i64 },
    PeriodTwoAttractor { fixed: i64, lo: i64, hi: i64 },
    DriftRight,
    DriftLeft,
}

impl DynamicsTag {
    /// Tag name without data, for comparisons across relabellings.
    pub fn name(&self) -> &'static str {
        match self {
            DynamicsTag::Identity => "identity",
            DynamicsTag::EventuallyFixedInterval { .. } => "eventually-fixed-interval",
            DynamicsTag::PeriodTwoHomeomorphism { .. } => "period-two-homeomorphism",
            DynamicsTag::PeriodTwoAttractor { .. } => "period-two-attractor",
            DynamicsTag::DriftRight => "drift-right",
            DynamicsTag::DriftLeft => "drift-left",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicsClass {
    pub tag: DynamicsTag,
    pub witnesses: Vec<i64>,
}

const CLASSIFY_STEPS: usize = 100_000;

fn contiguous(set: &BTreeSet<i64>) -> bool {
    match (set.first(), set.last()) {
        (Some(&a), Some(&b)) => (b - a + 1) as usize == set.len(),
        _ => false,
    }
}

/// Classifies the dynamics of a continuous map. Orbits of all window
/// points and of two probe points beyond each seam with a tail rule are
/// followed; any orbit that cannot be decided makes the result inconclusive.
pub fn classify_dynamics(f: &SelfMap) -> Result<DynamicsClass> {
    if let Some(v) = check_continuity(f) {
        return Err(Error::InvalidMap(format!(
            "not continuous: x{} <= x{} is not preserved",
            v.lower, v.upper
        )));
    }
    let w = &f.window;
    let mut starts: Vec<i64> = w.indices().collect();
    if w.left_tail != TailRule::None {
        starts.extend([w.lo() - 2, w.lo() - 1]);
    }
    if w.right_tail != TailRule::None {
        starts.extend([w.hi() + 1, w.hi() + 2]);
    }

    let mut fixed = BTreeSet::new();
    let mut period_two = BTreeSet::new();
    let mut drift = BTreeSet::new();
    let mut lo_orbit = Vec::new();
    for &x in &starts {
        let rec = iterate_from(f, x, CLASSIFY_STEPS);
        if x == w.lo() {
            lo_orbit = rec.points.clone();
        }
        match rec.status {
            OrbitStatus::Periodic { period, .. } => {
                let cycle = rec.cycle().expect("periodic");
                match period {
                    1 => {
                        fixed.insert(cycle[0]);
                    }
                    2 => period_two.extend(cycle.iter().copied()),
                    p => {
                        return Err(Error::Internal(format!(
                            "continuous map with a cycle of period {p}: {cycle:?}"
                        )))
                    }
                }
            }
            OrbitStatus::LeftWindow {
                direction: Direction::Neither,
            } => {
                return Err(Error::Inconclusive(format!(
                    "orbit of x{x} leaves the window where no tail rule is given"
                )))
            }
            OrbitStatus::LeftWindow { direction } => {
                drift.insert(direction);
            }
            OrbitStatus::Inconclusive => {
                return Err(Error::Inconclusive(format!(
                    "orbit of x{x} undecided after {CLASSIFY_STEPS} steps"
                )))
            }
        }
    }

    if !drift.is_empty() {
        if !fixed.is_empty() || !period_two.is_empty() || drift.len() > 1 {
            return Err(Error::Internal(
                "drifting orbits coexist with periodic orbits or opposite drift".into(),
            ));
        }
        let tag = if drift.contains(&Direction::PlusInfinity) {
            DynamicsTag::DriftRight
        } else {
            DynamicsTag::DriftLeft
        };
        return Ok(DynamicsClass {
            tag,
            witnesses: lo_orbit,
        });
    }

    if !period_two.is_empty() {
        if fixed.len() != 1 {
            return Err(Error::Internal(format!(
                "period-two dynamics with fixed set {fixed:?}"
            )));
        }
        let z = *fixed.first().expect("one fixed point");
        let mut p2 = period_two.clone();
        p2.insert(z);
        if !contiguous(&p2) {
            return Err(Error::Internal(format!("P(2) = {p2:?} is not an interval")));
        }
        let covers_window = w.indices().all(|i| p2.contains(&i));
        let tails_keep = [w.left_tail, w.right_tail]
            .iter()
            .all(|t| matches!(t, TailRule::None | TailRule::Mirror));
        let tag = if covers_window && tails_keep {
            DynamicsTag::PeriodTwoHomeomorphism { fixed: z }
        } else {
            DynamicsTag::PeriodTwoAttractor {
                fixed: z,
                lo: *p2.first().expect("non-empty"),
                hi: *p2.last().expect("non-empty"),
            }
        };
        return Ok(DynamicsClass {
            tag,
            witnesses: p2.into_iter().collect(),
        });
    }

    if fixed.is_empty() {
        return Err(Error::Internal("no periodic orbit and no drift".into()));
    }
    if !contiguous(&fixed) {
        return Err(Error::Internal(format!("fixed set {fixed:?} is not an interval")));
    }
    let identity_tails = [w.left_tail, w.right_tail]
        .iter()
        .all(|t| matches!(t, TailRule::None | TailRule::Shift { offset: 0 }));
    let tag = if w.indices().all(|i| fixed.contains(&i)) && identity_tails {
        DynamicsTag::Identity
    } else {
        DynamicsTag::EventuallyFixedInterval {
            z: *fixed.first().expect("non-empty"),
            w: *fixed.last().expect("non-empty"),
        }
    };
    Ok(DynamicsClass {
        tag,
        witnesses: fixed.into_iter().collect(),
    })
}

/// `P(2)`: the period-two window points together with the fixed point.
pub fn p2_set(f: &SelfMap) -> Result<Interval> {
    let periods = periodic_points(f, 2);
    let Some(two) = periods.get(&2) else {
        return Err(Error::EmptyResult("map has no point of period 2".into()));
    };
    let mut set = two.clone();
    match periods
        .get(&1)
        .map(|s| s.iter().copied().collect::<Vec<_>>())
        .as_deref()
    {
        Some([z]) => {
            set.insert(*z);
        }
        other => {
            return Err(Error::Internal(format!(
                "expected exactly one fixed point next to period two, found {other:?}"
            )))
        }
    }
    if !contiguous(&set) {
        return Err(Error::Internal(format!("P(2) = {set:?} is not an interval")));
    }
    Ok(Interval::new(
        *set.first().expect("non-empty"),
        *set.last().expect("non-empty"),
    ))
}

/// The window `[1, 2n + 1]` modelling a triangulated interval with `n`
/// edges: vertex `v_k` is `x_{2k+1}` and edge `{v_{k-1}, v_k}` is `x_{2k}`.
pub fn triangulation_window(n: usize) -> LineWindow {
    LineWindow::new(1, 2 * n as i64 + 1).expect("non-empty window")
}

/// Position of each simplex of `interval_triangulation(n)`, in
/// `all_simplices` order, on [`triangulation_window`].
pub fn triangulation_labels(n: usize) -> Vec<i64> {
    let k = SimplicialComplex::interval_triangulation(n);
    k.all_simplices()
        .iter()
        .map(|s| match s.as_slice() {
            [v] => 2 * *v as i64 + 1,
            [_, b] => 2 * *b as i64,
            _ => unreachable!("interval triangulations are one-dimensional"),
        })
        .collect()
}

/// `X(g)` for a simplicial self-map of an interval triangulation, viewed as
/// a self-map of [`triangulation_window`].
pub fn selfmap_of_simplicial(n: usize, g: &SimplicialMap) -> Result<SelfMap> {
    let k = SimplicialComplex::interval_triangulation(n);
    let face_map = induced_poset_map(&k, &k, g)?;
    let labels = triangulation_labels(n);
    let window = triangulation_window(n);
    let mut values = vec![0; window.len()];
    for (pos, &img) in face_map.images.iter().enumerate() {
        values[(labels[pos] - 1) as usize] = labels[img];
    }
    SelfMap::new(window, values)
}

/// A simplicial self-map of the triangulation of `[0, 1]` with vertices
/// `k / n` that follows `f` as closely as adjacency allows: each vertex
/// goes to the vertex nearest `f(k / n)`, clamped to stay within one step
/// of the previous vertex's image.
pub fn tracking_simplicial_map(f: impl Fn(f64) -> f64, n: usize) -> SimplicialMap {
    let nearest = |x: f64| ((x.clamp(0.0, 1.0) * n as f64).round() as i64).clamp(0, n as i64);
    let mut images = Vec::with_capacity(n + 1);
    let mut prev = nearest(f(0.0));
    images.push(prev as usize);
    for k in 1..=n {
        let target = nearest(f(k as f64 / n as f64));
        prev = target.clamp(prev - 1, prev + 1);
        images.push(prev as usize);
    }
    SimplicialMap {
        vertex_images: images,
    }
}
