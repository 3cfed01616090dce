//! Acceptance suite: one PASS/FAIL line per criterion. Each criterion runs
//! the library and, where feasible, an independent brute-force oracle.
//! Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linedyn::complex::{face_poset, order_complex, SimplicialComplex};
use linedyn::format::parse_multimap;
use linedyn::homology::{homology, lefschetz_number_of_map, reduced_homology_of_poset};
use linedyn::linalg::{from_int, rank};
use linedyn::line::LineWindow;
use linedyn::matrix::Matrix;
use linedyn::multi::{
    classify_invariant_sets, fixed_points, graph_poset, is_vietoris_like_multimap, lefschetz_number,
    period_spectrum, IntervalMultimaps, InvariantClass, MultiMap,
};
use linedyn::poset::{Poset, PosetMap};
use linedyn::single::{
    enumerate_continuous_selfmaps, is_continuous, periodic_points, selfmap_of_simplicial,
    tracking_simplicial_map, SelfMap,
};
use linedyn::snf::smith_normal_form;
use linedyn::verify::{run_suite, windows_up_to, SuiteReport, Theorem};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name]
        .iter()
        .collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn suite(theorem: Theorem, windows: &[LineWindow]) -> Result<SuiteReport, String> {
    let r = run_suite(theorem, windows, false).map_err(|e| e.to_string())?;
    ensure!(
        r.passed(),
        "{theorem}: {} violations, first {:?}",
        r.total.violation_count,
        r.total.violations.first()
    );
    Ok(r)
}

// ---- single-valued oracle -------------------------------------------------

fn odd(a: i64) -> bool {
    a.rem_euclid(2) == 1
}

fn leq(a: i64, b: i64) -> bool {
    a == b || (odd(a) && (a - b).abs() == 1)
}

/// A window map as its value list; `values[i]` is the image of `lo + i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Map {
    lo: i64,
    values: Vec<i64>,
}

impl Map {
    fn at(&self, x: i64) -> i64 {
        self.values[(x - self.lo) as usize]
    }

    fn points(&self) -> std::ops::Range<i64> {
        self.lo..self.lo + self.values.len() as i64
    }

    fn continuous(&self) -> bool {
        self.points()
            .all(|a| self.points().all(|b| !leq(a, b) || leq(self.at(a), self.at(b))))
    }

    fn minimal_period(&self, x: i64) -> Option<usize> {
        let mut y = x;
        for p in 1..=self.values.len() {
            y = self.at(y);
            if y == x {
                return Some(p);
            }
        }
        None
    }
}

/// All `n^n` functions on the window, filtered by the pairwise order test.
fn brute_force(lo: i64, hi: i64) -> Vec<Map> {
    let n = (hi - lo + 1) as u32;
    let total = (n as u64).pow(n);
    (0..total)
        .map(|mut code| {
            let values = (0..n)
                .map(|_| {
                    let v = lo + (code % n as u64) as i64;
                    code /= n as u64;
                    v
                })
                .collect();
            Map { lo, values }
        })
        .filter(Map::continuous)
        .collect()
}

/// Backtracking over all values, checking each new point against its left
/// neighbour in both orders.
fn backtrack(lo: i64, hi: i64) -> Vec<Map> {
    fn go(lo: i64, hi: i64, values: &mut Vec<i64>, out: &mut Vec<Map>) {
        let x = lo + values.len() as i64;
        if x > hi {
            out.push(Map {
                lo,
                values: values.clone(),
            });
            return;
        }
        for v in lo..=hi {
            if let Some(&u) = values.last() {
                let ok = (!leq(x - 1, x) || leq(u, v)) && (!leq(x, x - 1) || leq(v, u));
                if !ok {
                    continue;
                }
            }
            values.push(v);
            go(lo, hi, values, out);
            values.pop();
        }
    }
    let mut out = Vec::new();
    go(lo, hi, &mut Vec::new(), &mut out);
    out
}

fn corpus() -> Vec<(LineWindow, Vec<Map>)> {
    (1..=4)
        .map(|n| {
            let w = LineWindow::symmetric(n);
            let maps = backtrack(w.lo(), w.hi());
            (w, maps)
        })
        .collect()
}

// ---- criteria --------------------------------------------------------------

fn no_period_three(corpus: &[(LineWindow, Vec<Map>)]) -> Outcome {
    const PINNED: [u64; 4] = [11, 99, 811, 6187];
    let mut timings = Vec::new();
    for ((w, oracle), pinned) in corpus.iter().zip(PINNED) {
        let started = Instant::now();
        let r = suite(Theorem::NoPeriod3, std::slice::from_ref(w))?;
        let elapsed = started.elapsed();
        timings.push(format!("{}: {:.2?}", w.len(), elapsed));
        ensure!(
            elapsed < Duration::from_secs(60),
            "{}-element window took {elapsed:.1?}",
            w.len()
        );
        ensure!(
            r.total.corpus_size == pinned,
            "{} maps on {} elements, pinned {pinned}",
            r.total.corpus_size,
            w.len()
        );
        ensure!(
            oracle.len() as u64 == pinned,
            "oracle counts {} maps on {} elements",
            oracle.len(),
            w.len()
        );

        let library: BTreeSet<Map> = enumerate_continuous_selfmaps(w, false)
            .map_err(|e| e.to_string())?
            .map(|f| Map {
                lo: w.lo(),
                values: f.values().to_vec(),
            })
            .collect();
        ensure!(
            library == oracle.iter().cloned().collect(),
            "enumeration differs from oracle on {} elements",
            w.len()
        );
        if w.len() <= 5 {
            let brute = brute_force(w.lo(), w.hi());
            ensure!(
                library == brute.into_iter().collect(),
                "enumeration differs from n^n filter on {} elements",
                w.len()
            );
        }
        for m in oracle {
            for x in m.points() {
                let p = m.minimal_period(x);
                ensure!(
                    p.is_none_or(|p| p <= 2),
                    "oracle finds period {p:?} at x{x} of {m:?}"
                );
            }
        }
    }
    Ok(format!(
        "counts 11/99/811/6187 match oracle; no period >= 3; times {}",
        timings.join(", ")
    ))
}

fn period_two_structure(corpus: &[(LineWindow, Vec<Map>)]) -> Outcome {
    let windows: Vec<LineWindow> = corpus.iter().map(|(w, _)| w.clone()).collect();
    let r = suite(Theorem::Period2Structure, &windows)?;
    let mut with_two = 0;
    for (_, maps) in corpus {
        for m in maps {
            let n = m.values.len();
            let fixed: Vec<i64> = m.points().filter(|&x| m.at(x) == x).collect();
            let p2: Vec<i64> = m.points().filter(|&x| m.at(m.at(x)) == x).collect();
            if p2.len() == fixed.len() {
                continue;
            }
            with_two += 1;
            ensure!(fixed.len() == 1, "{m:?} has fixed points {fixed:?}");
            ensure!(
                p2.windows(2).all(|w| w[1] == w[0] + 1),
                "{m:?}: P(2) = {p2:?} is not an interval"
            );
            ensure!(p2.contains(&fixed[0]), "{m:?}: P(2) misses the fixed point");
            for x in m.points() {
                let mut y = x;
                let steps = (0..=n).find(|_| {
                    let inside = p2.contains(&y);
                    y = m.at(y);
                    inside
                });
                ensure!(steps.is_some(), "{m:?}: x{x} never enters P(2)");
            }
        }
    }
    Ok(format!(
        "{with_two} maps with period 2 (oracle), {} library checks",
        r.total.checks
    ))
}

fn interval_lemma(corpus: &[(LineWindow, Vec<Map>)]) -> Outcome {
    let windows: Vec<LineWindow> = corpus.iter().map(|(w, _)| w.clone()).collect();
    let r = suite(Theorem::IntervalLemma, &windows)?;
    let mut checks = 0u64;
    for (_, maps) in corpus {
        for m in maps {
            for a in m.points() {
                for b in a..m.lo + m.values.len() as i64 {
                    let image: BTreeSet<i64> = (a..=b).map(|x| m.at(x)).collect();
                    let (fa, fb) = (m.at(a), m.at(b));
                    let (lo, hi) = (fa.min(fb), fa.max(fb));
                    ensure!(
                        (lo..=hi).all(|y| image.contains(&y)),
                        "{m:?}: [f(a),f(b)] not inside f([a,b]) for {a}, {b}"
                    );
                    let sizes = ((b - a + 1) as usize, image.len(), (hi - lo + 1) as usize);
                    ensure!(
                        sizes.0 >= sizes.1 && sizes.1 >= sizes.2,
                        "{m:?}: cardinalities {sizes:?} on [{a},{b}]"
                    );
                    checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checks} oracle pairs, {} library checks",
        r.total.checks
    ))
}

/// Fraction-free determinant.
fn determinant(m: &Matrix<BigInt>) -> BigInt {
    let n = m.rows();
    let mut a = m.to_rows();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let n = rng.gen_range(1..=7);
    let facets: Vec<Vec<usize>> = (0..rng.gen_range(0..=5))
        .map(|_| {
            let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).take(4).collect();
            if s.is_empty() {
                s.push(rng.gen_range(0..n));
            }
            s
        })
        .collect();
    SimplicialComplex::from_simplices((0..n).map(|v| format!("v{v}")).collect(), facets)
        .expect("valid facets")
}

fn homology_engine() -> Outcome {
    let started = Instant::now();
    let mut windows = 0;
    for lo in -3..=3 {
        for len in 1..=12 {
            let w = LineWindow::new(lo, lo + len - 1).map_err(|e| e.to_string())?;
            ensure!(
                reduced_homology_of_poset(w.poset()).is_trivial(),
                "[{lo}, {}] has homology",
                w.hi()
            );
            windows += 1;
        }
    }
    let circle = reduced_homology_of_poset(&Poset::minimal_circle());
    ensure!(
        circle.betti(0) == 0 && circle.betti(1) == 1,
        "minimal circle: {circle:?}"
    );
    ensure!(
        circle.groups.iter().all(|g| g.torsion.is_empty()),
        "minimal circle has torsion"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let k = random_complex(&mut rng);
        let c = k.chain_complex();
        ensure!(
            c.is_valid(),
            "chain complex of {:?} fails dd = 0",
            k.all_simplices()
        );
        for d in 2..=c.top_dim().unwrap_or(0) {
            ensure!(
                c.boundary(d - 1).mul(&c.boundary(d)).is_zero(),
                "dd != 0 in degree {d}"
            );
        }
    }
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m = Matrix::from_fn(r, c, |_, _| rng.gen_range(-9i64..=9));
        let big = m.to_bigint();
        let s = smith_normal_form(&big);
        ensure!(s.u.mul(&big).mul(&s.v) == s.d, "U M V != D for {m:?}");
        ensure!(
            determinant(&s.u).abs().is_one() && determinant(&s.v).abs().is_one(),
            "U or V not unimodular for {m:?}"
        );
        for i in 0..r {
            for j in 0..c {
                ensure!(i == j || s.d[(i, j)].is_zero(), "D not diagonal for {m:?}");
            }
        }
        let factors = s.invariant_factors();
        ensure!(
            factors.iter().all(|f| f.is_positive()),
            "negative invariant factor for {m:?}"
        );
        ensure!(
            factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()),
            "divisibility fails: {factors:?}"
        );
        ensure!(
            rank(&from_int::<BigRational>(&m)) == Some(factors.len()),
            "rank disagrees with rational rank"
        );
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:.1?}");
    Ok(format!(
        "{windows} windows acyclic, circle b1 = 1, 1000 SNFs, 200 chain complexes in {elapsed:.2?}"
    ))
}

fn growing_intervals(n: i64) -> MultiMap {
    let top = 2 * n;
    let w = LineWindow::new(0, top).expect("window");
    MultiMap::from_intervals(w, |i| {
        let hi = if i <= 0 {
            2
        } else if odd(i) {
            i + 1
        } else {
            i + 2
        };
        (0, hi.min(top))
    })
    .expect("growing intervals")
}

fn full_interval(lo: i64, hi: i64) -> MultiMap {
    MultiMap::from_fn(LineWindow::new(lo, hi).expect("window"), |_| vec![1, 2, 3]).expect("full interval")
}

fn parsed(name: &str) -> Result<MultiMap, String> {
    parse_multimap(&spec(name)).map_err(|e| format!("{name}: {e}"))
}

fn vietoris_validation() -> Outcome {
    ensure!(
        parsed("growing_intervals.json")? == growing_intervals(6),
        "growing_intervals.json differs from the rule set"
    );
    ensure!(parsed("full_interval.json")? == full_interval(1, 3), "full_interval.json differs");
    ensure!(
        parsed("full_interval_embedded.json")? == full_interval(-2, 6),
        "full_interval_embedded.json differs"
    );
    for name in ["growing_intervals.json", "full_interval.json", "full_interval_embedded.json", "invariant_sets.json"] {
        let v = is_vietoris_like_multimap(&parsed(name)?);
        ensure!(v.vietoris, "{name} rejected at chain {:?}", v.witness_chain);
    }
    for n in [5, 8] {
        ensure!(
            is_vietoris_like_multimap(&growing_intervals(n)).vietoris,
            "growing intervals with n = {n} rejected"
        );
    }
    let bad = parsed("antichain.json")?;
    let v = is_vietoris_like_multimap(&bad);
    ensure!(!v.vietoris, "antichain-valued map accepted");
    let preimage = v.witness_preimage.ok_or("no witness preimage")?;
    let g = graph_poset(&bad);
    let members: Vec<usize> = preimage
        .iter()
        .map(|pair| {
            g.pairs
                .iter()
                .position(|p| p == pair)
                .ok_or(format!("{pair:?} not in graph"))
        })
        .collect::<Result<_, _>>()?;
    let sub = g.poset.subposet(&members).map_err(|e| e.to_string())?;
    let h = reduced_homology_of_poset(&sub);
    ensure!(h.betti(0) > 0, "witness preimage has trivial H0: {h:?}");
    Ok(format!(
        "4 examples valid; counterexample witness {:?} with reduced b0 = {}",
        v.witness_chain.unwrap_or_default(),
        h.betti(0)
    ))
}

/// Existence of a cycle of `p` distinct points, by plain DFS.
fn oracle_has_cycle(f: &MultiMap, p: usize) -> bool {
    fn extend(f: &MultiMap, path: &mut Vec<i64>, p: usize) -> bool {
        let last = *path.last().expect("non-empty");
        let next = f.value(last).expect("in window");
        if path.len() == p {
            return next.contains(&path[0]);
        }
        for &y in next {
            if y > path[0] && !path.contains(&y) {
                path.push(y);
                if extend(f, path, p) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    f.window().indices().any(|x| extend(f, &mut vec![x], p))
}

fn period_spectra() -> Outcome {
    for (lo, hi) in [(1, 3), (-2, 6)] {
        let f = full_interval(lo, hi);
        let spectrum = period_spectrum(&f, 2 * f.window().len());
        ensure!(
            spectrum == BTreeSet::from([1, 2, 3]),
            "full interval on [{lo}, {hi}]: {spectrum:?}"
        );
        let oracle: BTreeSet<usize> = (1..=f.window().len())
            .filter(|&p| oracle_has_cycle(&f, p))
            .collect();
        ensure!(oracle == spectrum, "oracle spectrum {oracle:?}");
    }
    for n in [5usize, 8] {
        let f = growing_intervals(n as i64);
        let spectrum = period_spectrum(&f, n);
        ensure!(
            (1..=n).all(|p| spectrum.contains(&p)),
            "growing intervals with n = {n}: {spectrum:?}"
        );
        ensure!(
            (1..=n).all(|p| oracle_has_cycle(&f, p)),
            "oracle misses a period for n = {n}"
        );
    }
    Ok("full interval spectrum {1, 2, 3} on both windows; growing intervals contain 1..=n for n = 5, 8".into())
}

/// Vietoris test through full homology of each chain preimage.
fn oracle_vietoris(f: &MultiMap) -> bool {
    let w = f.window();
    let mut chains: Vec<Vec<i64>> = w.indices().map(|x| vec![x]).collect();
    chains.extend(w.indices().filter(|&x| w.contains(x + 1)).map(|x| vec![x, x + 1]));
    chains.iter().all(|chain| {
        let pairs: Vec<(i64, i64)> = chain
            .iter()
            .flat_map(|&x| f.value(x).expect("in window").iter().map(move |&y| (x, y)))
            .collect();
        let labels = pairs.iter().map(|p| format!("{p:?}")).collect();
        let p = Poset::from_leq(labels, |a, b| {
            leq(pairs[a].0, pairs[b].0) && leq(pairs[a].1, pairs[b].1)
        })
        .expect("product order");
        homology(&order_complex(&p), true).is_trivial()
    })
}

fn lefschetz() -> Outcome {
    let f = full_interval(1, 3);
    let r = lefschetz_number(&f).map_err(|e| e.to_string())?;
    ensure!(r.lambda.is_one(), "full interval lambda = {}", r.lambda);
    ensure!(!fixed_points(&f).is_empty(), "full interval has no fixed point");

    let mut agreed = 0;
    for w in windows_up_to(4, 0) {
        for m in IntervalMultimaps::new(&w).iter() {
            let lib = is_vietoris_like_multimap(&m).vietoris;
            ensure!(
                lib == oracle_vietoris(&m),
                "Vietoris verdicts differ on {:?}",
                m.values()
            );
            agreed += 1;
        }
    }

    let started = Instant::now();
    let windows = windows_up_to(5, 0);
    let r = suite(Theorem::Lefschetz, &windows)?;
    let elapsed = started.elapsed();
    ensure!(
        elapsed < Duration::from_secs(120),
        "exhaustive run took {elapsed:.1?}"
    );
    let stat = |k: &str| r.total.stats.get(k).copied().unwrap_or(0);
    // Windows are acyclic, so every Vietoris-like map has lambda = 1.
    ensure!(stat("lambda=1") == stat("vietoris"), "stats {:?}", r.total.stats);
    Ok(format!(
        "full-interval lambda = 1; {} maps, {} Vietoris-like, 0 violations in {elapsed:.1?}; {agreed} verdicts match oracle",
        r.total.corpus_size,
        stat("vietoris")
    ))
}

fn invariant_sets() -> Outcome {
    let report = classify_invariant_sets(&parsed("invariant_sets.json")?);
    let got: Vec<(i64, i64, InvariantClass)> = report
        .classified()
        .map(|s| (s.lo, s.hi, s.class.expect("classified")))
        .collect();
    let want = vec![
        (-7, -5, InvariantClass::Saddle),
        (-1, 1, InvariantClass::Attractor),
        (5, 7, InvariantClass::Repeller),
    ];
    ensure!(got == want, "classified sets {got:?}");
    Ok(format!("{got:?}"))
}

/// Poset isomorphism by backtracking, pruned by height and cover degrees.
fn isomorphic(a: &Poset, b: &Poset) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let sig = |p: &Poset, x: usize| {
        (
            p.height(x).unwrap(),
            p.upper_covers(x).len(),
            p.lower_covers(x).len(),
        )
    };
    fn go(
        a: &Poset,
        b: &Poset,
        map: &mut Vec<usize>,
        used: &mut [bool],
        sig: &dyn Fn(&Poset, usize) -> (usize, usize, usize),
    ) -> bool {
        let x = map.len();
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used[y] || sig(a, x) != sig(b, y) {
                continue;
            }
            if (0..x).any(|u| a.le(u, x) != b.le(map[u], y) || a.le(x, u) != b.le(y, map[u])) {
                continue;
            }
            used[y] = true;
            map.push(y);
            if go(a, b, map, used, sig) {
                return true;
            }
            map.pop();
            used[y] = false;
        }
        false
    }
    go(a, b, &mut Vec::new(), &mut vec![false; b.len()], &sig)
}

fn functor_round_trip() -> Outcome {
    for n in 1..=6usize {
        let faces = face_poset(&SimplicialComplex::interval_triangulation(n)).poset;
        let window = LineWindow::new(1, 2 * n as i64 + 1).map_err(|e| e.to_string())?;
        ensure!(
            isomorphic(&faces, window.poset()),
            "n = {n}: face poset not isomorphic to the window"
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut complexes = vec![
        SimplicialComplex::interval_triangulation(3),
        SimplicialComplex::from_simplices(
            vec!["a".into(), "b".into(), "c".into()],
            [vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .map_err(|e| e.to_string())?,
        SimplicialComplex::from_simplices((0..4).map(|v| v.to_string()).collect(), [vec![0, 1, 2, 3]])
            .map_err(|e| e.to_string())?,
    ];
    while complexes.len() < 20 {
        complexes.push(random_complex(&mut rng));
    }
    for k in &complexes {
        let oc = order_complex(&face_poset(k).poset);
        ensure!(
            oc.vertex_count() == k.len(),
            "{} vertices for {} simplices",
            oc.vertex_count(),
            k.len()
        );
    }
    Ok("face posets of n = 1..6 interval triangulations match windows; 20 complexes subdivide".into())
}

fn singleton_consistency(corpus: &[(LineWindow, Vec<Map>)]) -> Outcome {
    let windows: Vec<LineWindow> = corpus.iter().map(|(w, _)| w.clone()).collect();
    let r = suite(Theorem::SingletonConsistency, &windows)?;
    let mut checked = 0;
    for (w, maps) in &corpus[..3] {
        for m in maps {
            let f = SelfMap::new(w.clone(), m.values.clone()).map_err(|e| e.to_string())?;
            let multi = MultiMap::from_selfmap(&f).map_err(|e| e.to_string())?;
            let fixed: BTreeSet<i64> = m.points().filter(|&x| m.at(x) == x).collect();
            ensure!(fixed_points(&multi) == fixed, "fixed sets differ for {m:?}");
            let periods: BTreeSet<usize> = m.points().filter_map(|x| m.minimal_period(x)).collect();
            let spectrum = period_spectrum(&multi, w.len());
            ensure!(
                spectrum == periods && spectrum.iter().all(|&p| p <= 2),
                "{m:?}: spectrum {spectrum:?}"
            );
            let poset_map = PosetMap::new(m.values.iter().map(|&v| (v - w.lo()) as usize).collect());
            let single = lefschetz_number_of_map(w.poset(), &poset_map).map_err(|e| e.to_string())?;
            let multi_lambda = lefschetz_number(&multi).map_err(|e| e.to_string())?.lambda;
            ensure!(single == multi_lambda, "{m:?}: lambda {single} vs {multi_lambda}");
            checked += 1;
        }
    }
    let tent = |x: f64| 1.0f64.min(1.0 - 2.0 * (x - 0.5).abs());
    for n in [2, 3, 4, 7, 14] {
        let f = selfmap_of_simplicial(n, &tracking_simplicial_map(tent, n)).map_err(|e| e.to_string())?;
        ensure!(is_continuous(&f), "tent shadow with {n} edges is not continuous");
        let periods = periodic_points(&f, f.window().len());
        ensure!(
            periods.keys().all(|&p| p <= 2),
            "tent shadow with {n} edges: {periods:?}"
        );
        let multi = MultiMap::from_selfmap(&f).map_err(|e| e.to_string())?;
        let spectrum = period_spectrum(&multi, f.window().len());
        ensure!(
            spectrum == periods.keys().copied().collect(),
            "tent shadow spectra differ for n = {n}"
        );
    }
    Ok(format!(
        "{} library checks, {checked} oracle maps agree; tent shadows only have periods 1, 2",
        r.total.checks
    ))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "no period >= 3 on continuous window maps",
            Box::new(|| no_period_three(&corpus)),
        ),
        ("period-2 structure", Box::new(|| period_two_structure(&corpus))),
        (
            "interval lemma and cardinality chain",
            Box::new(|| interval_lemma(&corpus)),
        ),
        ("homology engine", Box::new(homology_engine)),
        ("Vietoris-like validation", Box::new(vietoris_validation)),
        ("multivalued period spectra", Box::new(period_spectra)),
        ("Lefschetz fixed points", Box::new(lefschetz)),
        ("invariant-set classification", Box::new(invariant_sets)),
        (
            "face poset and order complex round trip",
            Box::new(functor_round_trip),
        ),
        (
            "single/multi consistency",
            Box::new(|| singleton_consistency(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = started.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name} ({elapsed:.2?}): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name} ({elapsed:.2?}): {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
