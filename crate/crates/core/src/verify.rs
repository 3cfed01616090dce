//! Exhaustive verification suites over small windows.
//!
//! Each suite walks a complete corpus (every continuous self-map, or every
//! interval-valued multimap) and counts checks and violations. Corpora are
//! split into independent partitions and folded in parallel; results do not
//! depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::lefschetz_number_of_map;
use crate::line::LineWindow;
use crate::multi::{
    fixed_points, lefschetz_number, lefschetz_with, period_spectrum, IntervalMultimaps, MultiMap,
    WindowChains,
};
use crate::poset::PosetMap;
use crate::single::{
    contains_interval_check, enumerate_partition, image_of_interval, iterate, p2_set, periodic_table, SelfMap,
};

/// Windows above this many elements are refused by the Lefschetz suite
/// unless forced.
pub const LEFSCHETZ_LIMIT: usize = 5;

/// Violations kept verbatim in a report; the rest are only counted.
pub const MAX_REPORTED: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    #[serde(rename = "no-period-3")]
    NoPeriod3,
    #[serde(rename = "period-2-structure")]
    Period2Structure,
    IntervalLemma,
    Lefschetz,
    SingletonConsistency,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::NoPeriod3,
        Theorem::Period2Structure,
        Theorem::IntervalLemma,
        Theorem::Lefschetz,
        Theorem::SingletonConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::NoPeriod3 => "no-period-3",
            Theorem::Period2Structure => "period-2-structure",
            Theorem::IntervalLemma => "interval-lemma",
            Theorem::Lefschetz => "lefschetz",
            Theorem::SingletonConsistency => "singleton-consistency",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub window: [i64; 2],
    /// Window images (single-valued) or value sets (multivalued).
    pub map: serde_json::Value,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub corpus_size: u64,
    pub checks: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub stats: BTreeMap<String, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.corpus_size += other.corpus_size;
        self.checks += other.checks;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_REPORTED {
                self.violations.push(v);
            }
        }
        for (k, n) in other.stats {
            *self.stats.entry(k).or_default() += n;
        }
        self
    }

    fn bump(&mut self, key: &str) {
        *self.stats.entry(key.to_string()).or_default() += 1;
    }

    fn violate(&mut self, window: &LineWindow, map: serde_json::Value, detail: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_REPORTED {
            self.violations.push(Violation {
                window: [window.lo(), window.hi()],
                map,
                detail,
            });
        }
    }

    /// Records one check; `detail` describes the failure when it is `Some`.
    fn check(&mut self, window: &LineWindow, map: impl Fn() -> serde_json::Value, failure: Option<String>) {
        self.checks += 1;
        if let Some(detail) = failure {
            self.violate(window, map(), detail);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowTally {
    pub lo: i64,
    pub hi: i64,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub theorem: Theorem,
    pub windows: Vec<WindowTally>,
    #[serde(flatten)]
    pub total: Tally,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.total.violation_count == 0
    }
}

/// Runs `theorem` on each window.
pub fn run_suite(theorem: Theorem, windows: &[LineWindow], force: bool) -> Result<SuiteReport> {
    let check: fn(&SelfMap, &mut Tally) = match theorem {
        Theorem::Lefschetz => return lefschetz_suite(windows, force),
        Theorem::NoPeriod3 => check_no_period_3,
        Theorem::Period2Structure => check_period_2,
        Theorem::IntervalLemma => check_interval_lemma,
        Theorem::SingletonConsistency => check_singleton_consistency,
    };
    let mut per_window = Vec::new();
    for w in windows {
        // Surface the guard before spawning work.
        enumerate_partition(w, w.lo(), force)?;
        let tally = w
            .indices()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|first| {
                let mut t = Tally::default();
                for f in enumerate_partition(w, first, force).expect("guard checked") {
                    t.corpus_size += 1;
                    check(&f, &mut t);
                }
                t
            })
            .reduce(Tally::default, Tally::merge);
        per_window.push(WindowTally {
            lo: w.lo(),
            hi: w.hi(),
            tally,
        });
    }
    Ok(finish(theorem, per_window))
}

fn finish(theorem: Theorem, windows: Vec<WindowTally>) -> SuiteReport {
    let total = windows
        .iter()
        .fold(Tally::default(), |acc, w| acc.merge(w.tally.clone()));
    SuiteReport {
        theorem,
        windows,
        total,
    }
}

fn single_json(f: &SelfMap) -> serde_json::Value {
    serde_json::json!(f.values())
}

fn check_no_period_3(f: &SelfMap, t: &mut Tally) {
    let table = periodic_table(f, f.window().len());
    for &p in table.keys() {
        t.bump(&format!("maps-with-period-{p}"));
    }
    let bad = table.iter().find(|(&p, _)| p >= 3);
    t.check(
        f.window(),
        || single_json(f),
        bad.map(|(p, pts)| format!("period {p} at {pts:?}")),
    );
}

fn check_period_2(f: &SelfMap, t: &mut Tally) {
    let table = periodic_table(f, 2);
    if !table.contains_key(&2) {
        return;
    }
    t.bump("maps-with-period-2");
    let fixed = table.get(&1).cloned().unwrap_or_default();
    t.check(
        f.window(),
        || single_json(f),
        (fixed.len() != 1).then(|| format!("{} fixed points: {fixed:?}", fixed.len())),
    );
    let p2 = match p2_set(f) {
        Ok(p2) => p2,
        Err(e) => {
            t.check(f.window(), || single_json(f), Some(format!("P(2): {e}")));
            return;
        }
    };
    t.check(
        f.window(),
        || single_json(f),
        fixed
            .iter()
            .any(|&z| !p2.contains(z))
            .then(|| "P(2) misses the fixed point".to_string()),
    );
    let n = f.window().len();
    for x in f.window().indices() {
        let enters = iterate(f, x, n)
            .map(|rec| rec.points.iter().take(n + 1).any(|&p| p2.contains(p)))
            .unwrap_or(false);
        t.check(
            f.window(),
            || single_json(f),
            (!enters).then(|| format!("x{x} does not enter P(2) within {n} steps")),
        );
    }
}

fn check_interval_lemma(f: &SelfMap, t: &mut Tally) {
    let w = f.window();
    for a in w.indices() {
        for b in w.indices().filter(|&b| b >= a) {
            let outcome = (|| -> Result<Option<String>> {
                let image = image_of_interval(f, a, b)?;
                if !contains_interval_check(f, a, b)? {
                    return Ok(Some(format!("[f(x{a}), f(x{b})] not inside f([x{a}, x{b}])")));
                }
                let (fa, fb) = (f.image(a)?, f.image(b)?);
                let span = (b - a + 1) as usize;
                let inner = (fa - fb).unsigned_abs() as usize + 1;
                if !(span >= image.len() && image.len() >= inner) {
                    return Ok(Some(format!(
                        "cardinalities {span} >= {} >= {inner} fail on [x{a}, x{b}]",
                        image.len()
                    )));
                }
                Ok(None)
            })();
            let failure = outcome.unwrap_or_else(|e| Some(e.to_string()));
            t.check(w, || single_json(f), failure);
        }
    }
}

fn check_singleton_consistency(f: &SelfMap, t: &mut Tally) {
    let w = f.window();
    let m = match MultiMap::from_selfmap(f) {
        Ok(m) => m,
        Err(e) => return t.check(w, || single_json(f), Some(e.to_string())),
    };
    let table = periodic_table(f, 1);
    let single_fixed = table.get(&1).cloned().unwrap_or_default();
    let multi_fixed = fixed_points(&m);
    t.check(
        w,
        || single_json(f),
        (single_fixed != multi_fixed)
            .then(|| format!("fixed sets differ: {single_fixed:?} vs {multi_fixed:?}")),
    );

    let spectrum = period_spectrum(&m, w.len());
    t.check(
        w,
        || single_json(f),
        spectrum
            .iter()
            .any(|&p| p > 2)
            .then(|| format!("multivalued spectrum {spectrum:?}")),
    );

    let images = PosetMap::new(f.values().iter().map(|&y| (y - w.lo()) as usize).collect());
    let single = lefschetz_number_of_map(w.poset(), &images);
    let multi = lefschetz_number(&m);
    let failure = match (single, multi) {
        (Ok(a), Ok(b)) if a == b.lambda => None,
        (Ok(a), Ok(b)) => Some(format!("Lefschetz numbers differ: {a} vs {}", b.lambda)),
        (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
    };
    t.check(w, || single_json(f), failure);
}

const LEFSCHETZ_CHUNK: u64 = 4096;

fn lefschetz_suite(windows: &[LineWindow], force: bool) -> Result<SuiteReport> {
    let mut per_window = Vec::new();
    for w in windows {
        if w.len() > LEFSCHETZ_LIMIT && !force {
            return Err(Error::WindowTooLarge {
                size: w.len(),
                limit: LEFSCHETZ_LIMIT,
            });
        }
        let corpus = IntervalMultimaps::new(w);
        let chains = WindowChains::new(w);
        let chunks = corpus.len().div_ceil(LEFSCHETZ_CHUNK);
        let tally = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut t = Tally::default();
                let end = ((c + 1) * LEFSCHETZ_CHUNK).min(corpus.len());
                for code in c * LEFSCHETZ_CHUNK..end {
                    t.corpus_size += 1;
                    check_lefschetz(&corpus.get(code), &chains, &mut t);
                }
                t
            })
            .reduce(Tally::default, Tally::merge);
        per_window.push(WindowTally {
            lo: w.lo(),
            hi: w.hi(),
            tally,
        });
    }
    Ok(finish(Theorem::Lefschetz, per_window))
}

fn check_lefschetz(m: &MultiMap, chains: &WindowChains, t: &mut Tally) {
    let json = || serde_json::json!(m.values());
    match lefschetz_with(m, chains) {
        Err(Error::NotVietoris(_)) => t.bump("not-vietoris"),
        Err(e) => {
            t.bump("vietoris");
            t.check(m.window(), json, Some(e.to_string()));
        }
        Ok(r) => {
            t.bump("vietoris");
            t.bump(&format!("lambda={}", r.lambda));
            if r.lambda.is_zero() {
                return;
            }
            t.bump("lambda-nonzero");
            let fixed = fixed_points(m);
            t.check(
                m.window(),
                json,
                fixed
                    .is_empty()
                    .then(|| format!("lambda = {} but no fixed point", r.lambda)),
            );
        }
    }
}

/// Windows `[lo, lo + k - 1]` for every size `1..=max_len` and both parities
/// of `lo` (starting at `base` and `base + 1`).
pub fn windows_up_to(max_len: usize, base: i64) -> Vec<LineWindow> {
    let mut out = Vec::new();
    for k in 1..=max_len as i64 {
        for lo in [base, base + 1] {
            out.push(LineWindow::new(lo, lo + k - 1).expect("non-empty"));
        }
    }
    out
}
