//! The combinatorial line `L = {x_i}`: odd-indexed points are minimal,
//! even-indexed points are maximal, and `x_i` is comparable only to
//! `x_{i-1}` and `x_{i+1}`. Finite windows of `L` carry tail rules that
//! describe a map outside the window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

#[inline]
pub fn is_minimal_index(i: i64) -> bool {
    i.rem_euclid(2) == 1
}

/// `x_a <= x_b` in `L`.
#[inline]
pub fn line_leq(a: i64, b: i64) -> bool {
    a == b || (is_minimal_index(a) && (a - b).abs() == 1)
}

#[inline]
pub fn line_comparable(a: i64, b: i64) -> bool {
    line_leq(a, b) || line_leq(b, a)
}

pub fn label(i: i64) -> String {
    format!("x{i}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// How a self-map behaves outside its window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TailRule {
    /// Undefined outside the window.
    #[default]
    None,
    /// `x_i -> x_{i+offset}`; the offset must be even.
    Shift { offset: i64 },
    /// `x_i -> target`.
    Collapse { target: i64 },
    /// `x_i -> x_{-i}`.
    Mirror,
}

impl TailRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TailRule::Shift { offset } if offset.rem_euclid(2) != 0 => Err(Error::InvalidTail(format!(
                "shift offset {offset} is odd and breaks the cover pattern"
            ))),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, i: i64) -> Option<i64> {
        match *self {
            TailRule::None => None,
            TailRule::Shift { offset } => Some(i + offset),
            TailRule::Collapse { target } => Some(target),
            TailRule::Mirror => Some(-i),
        }
    }

    /// The rule seen through the relabelling `x_i -> x_{-i}`.
    pub fn mirrored(&self) -> TailRule {
        match *self {
            TailRule::None => TailRule::None,
            TailRule::Shift { offset } => TailRule::Shift { offset: -offset },
            TailRule::Collapse { target } => TailRule::Collapse { target: -target },
            TailRule::Mirror => TailRule::Mirror,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    PlusInfinity,
    MinusInfinity,
    Neither,
}

impl Direction {
    pub fn mirrored(self) -> Direction {
        match self {
            Direction::PlusInfinity => Direction::MinusInfinity,
            Direction::MinusInfinity => Direction::PlusInfinity,
            Direction::Neither => Direction::Neither,
        }
    }
}

/// A sequence in `L` given by a finite prefix continued by repeatedly
/// applying a tail rule to its last term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualSequence {
    pub prefix: Vec<i64>,
    pub continuation: TailRule,
}

/// Decides symbolically whether the indices eventually exceed every bound.
pub fn tends_to(seq: &EventualSequence) -> Direction {
    match seq.continuation {
        TailRule::Shift { offset } if offset > 0 => Direction::PlusInfinity,
        TailRule::Shift { offset } if offset < 0 => Direction::MinusInfinity,
        _ => Direction::Neither,
    }
}

/// The fence `[a, b]` of `L`, listed from `a` to `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub a: i64,
    pub b: i64,
    pub points: Vec<i64>,
}

impl Interval {
    /// `[a, b]` in the infinite line.
    pub fn new(a: i64, b: i64) -> Self {
        let points = if a <= b {
            (a..=b).collect()
        } else {
            (b..=a).rev().collect()
        };
        Interval { a, b, points }
    }

    pub fn lo(&self) -> i64 {
        self.a.min(self.b)
    }

    pub fn hi(&self) -> i64 {
        self.a.max(self.b)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo() <= i && i <= self.hi()
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo() <= self.lo() && self.hi() <= other.hi()
    }

    /// Points in ascending index order.
    pub fn sorted_points(&self) -> Vec<i64> {
        (self.lo()..=self.hi()).collect()
    }
}

/// The finite fragment `{x_lo, ..., x_hi}` of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineWindow {
    lo: i64,
    hi: i64,
    poset: Poset,
    pub left_tail: TailRule,
    pub right_tail: TailRule,
}

impl LineWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        let labels = (lo..=hi).map(label).collect();
        let covers = (lo..hi).map(|i| {
            let (a, b) = ((i - lo) as usize, (i + 1 - lo) as usize);
            if is_minimal_index(i) {
                (a, b)
            } else {
                (b, a)
            }
        });
        let poset = Poset::from_relation(labels, covers).expect("window covers are acyclic");
        Ok(LineWindow {
            lo,
            hi,
            poset,
            left_tail: TailRule::None,
            right_tail: TailRule::None,
        })
    }

    /// Window `[-n, n]`.
    pub fn symmetric(n: u32) -> Self {
        Self::new(-(n as i64), n as i64).expect("symmetric window is non-empty")
    }

    pub fn with_tails(mut self, left: TailRule, right: TailRule) -> Result<Self> {
        left.validate()?;
        right.validate()?;
        self.left_tail = left;
        self.right_tail = right;
        Ok(self)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    #[inline]
    pub fn contains(&self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn pos(&self, i: i64) -> Result<usize> {
        if self.contains(i) {
            Ok((i - self.lo) as usize)
        } else {
            Err(Error::NotFound(format!(
                "{} outside window [{}, {}]",
                label(i),
                self.lo,
                self.hi
            )))
        }
    }

    #[inline]
    pub fn index(&self, pos: usize) -> i64 {
        self.lo + pos as i64
    }

    pub fn tail(&self, side: Side) -> TailRule {
        match side {
            Side::Left => self.left_tail,
            Side::Right => self.right_tail,
        }
    }

    /// Which side of the window `i` lies on, if outside.
    pub fn side_of(&self, i: i64) -> Option<Side> {
        if i < self.lo {
            Some(Side::Left)
        } else if i > self.hi {
            Some(Side::Right)
        } else {
            None
        }
    }

    pub fn leq(&self, a: i64, b: i64) -> Result<bool> {
        self.pos(a)?;
        self.pos(b)?;
        Ok(line_leq(a, b))
    }

    pub fn minimal_open(&self, x: i64) -> Result<Vec<i64>> {
        let p = self.pos(x)?;
        Ok(self
            .poset
            .minimal_open(p)?
            .into_iter()
            .map(|q| self.index(q))
            .collect())
    }

    pub fn height(&self, x: i64) -> Result<usize> {
        self.poset.height(self.pos(x)?)
    }

    pub fn height_of(&self) -> usize {
        self.poset.height_of()
    }

    /// `[a, b]` by index range; both endpoints must lie in the window.
    pub fn interval(&self, a: i64, b: i64) -> Result<Interval> {
        self.pos(a)?;
        self.pos(b)?;
        Ok(Interval::new(a, b))
    }

    /// The same window relabelled by `x_i -> x_{-i}`, tails swapped.
    pub fn mirrored(&self) -> LineWindow {
        let mut w = LineWindow::new(-self.hi, -self.lo).expect("mirror of a window");
        w.left_tail = self.right_tail.mirrored();
        w.right_tail = self.left_tail.mirrored();
        w
    }
}
