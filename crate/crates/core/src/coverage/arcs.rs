//! Union of arcs on a circle of arbitrary period, with open/closed endpoint
//! semantics. A point covered only by touching open endpoints is a gap.

use std::f64::consts::PI;

/// Arc `[start, start + length]` on a circle with period `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    /// Normalized into `[0, P)`.
    pub start: f64,
    /// In `(0, P]`.
    pub length: f64,
    pub closed: bool,
}

impl Arc {
    pub fn new(start: f64, length: f64, closed: bool, period: f64) -> Self {
        Arc {
            start: start.rem_euclid(period),
            length: length.min(period),
            closed,
        }
    }
}

/// A maximal uncovered stretch. `length == 0` marks an isolated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub start: f64,
    pub length: f64,
}

impl Gap {
    pub fn midpoint(&self, period: f64) -> f64 {
        (self.start + 0.5 * self.length).rem_euclid(period)
    }
}

/// Arc set on a circle: either everything, or a list of arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet {
    pub period: f64,
    pub full: bool,
    pub arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn new(period: f64) -> Self {
        ArcSet {
            period,
            full: false,
            arcs: Vec::new(),
        }
    }

    pub fn push(&mut self, arc: Arc) {
        if arc.length <= 0.0 {
            return;
        }
        if arc.closed && arc.length >= self.period {
            self.full = true;
        }
        self.arcs.push(arc);
    }

    pub fn push_full(&mut self) {
        self.full = true;
    }

    /// Uncovered parts of the circle in increasing order of start, with a
    /// gap straddling the origin reported once.
    pub fn gaps(&self) -> Vec<Gap> {
        if self.full {
            return Vec::new();
        }
        let p = self.period;
        if self.arcs.is_empty() {
            return vec![Gap { start: 0.0, length: p }];
        }

        // (start, end, start_closed, end_closed) on [0, p]
        let mut pieces: Vec<(f64, f64, bool, bool)> = Vec::with_capacity(self.arcs.len() + 4);
        for a in &self.arcs {
            let end = a.start + a.length;
            if end < p {
                pieces.push((a.start, end, a.closed, a.closed));
            } else {
                // The wrap point is interior unless the arc ends exactly on it.
                pieces.push((a.start, p, a.closed, true));
                let rest = end - p;
                if rest > 0.0 {
                    pieces.push((0.0, rest.min(a.start), true, a.closed));
                } else if a.closed {
                    pieces.push((0.0, 0.0, true, true));
                }
            }
        }
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.2.cmp(&a.2)));

        let mut gaps = Vec::new();
        let mut reach = 0.0;
        let mut reach_covered = false;
        for &(s, e, sc, ec) in &pieces {
            if s > reach || (s == reach && !reach_covered && !sc) {
                gaps.push(Gap {
                    start: reach,
                    length: s - reach,
                });
            }
            if s == reach && sc {
                reach_covered = true;
            }
            if e > reach {
                reach = e;
                reach_covered = ec;
            } else if e == reach {
                reach_covered |= ec;
            }
        }
        if reach < p {
            let tail = Gap {
                start: reach,
                length: p - reach,
            };
            match gaps.first_mut() {
                Some(head) if head.start == 0.0 => {
                    head.start = tail.start;
                    head.length += tail.length;
                }
                _ => gaps.push(tail),
            }
        }
        gaps
    }

    pub fn covers(&self) -> bool {
        self.gaps().is_empty()
    }

    /// Largest gap, if any. Ties go to the first.
    pub fn largest_gap(&self) -> Option<Gap> {
        self.gaps().into_iter().fold(None, |best: Option<Gap>, g| match best {
            Some(b) if b.length >= g.length => Some(b),
            _ => Some(g),
        })
    }
}

/// Result of solving `a cos t + b sin t > c` (or `>=`) over one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trig {
    Empty,
    Full,
    /// Centered at `center`, half-width `half` in `(0, π]`.
    Arc {
        center: f64,
        half: f64,
    },
}

/// Solves `a cos t + b sin t > c`. The closed variant `>= c` differs only in
/// its endpoints, which callers encode in the arc's closedness.
pub fn solve_trig(a: f64, b: f64, c: f64) -> Trig {
    let r = a.hypot(b);
    if r <= 1e-300 {
        return if c < 0.0 { Trig::Full } else { Trig::Empty };
    }
    let q = c / r;
    if q >= 1.0 {
        Trig::Empty
    } else if q < -1.0 {
        Trig::Full
    } else {
        Trig::Arc {
            center: b.atan2(a),
            half: q.acos().min(PI),
        }
    }
}

impl Trig {
    pub fn push_into(self, set: &mut ArcSet, closed: bool) {
        match self {
            Trig::Empty => {}
            Trig::Full => set.push_full(),
            Trig::Arc { center, half } => set.push(Arc::new(center - half, 2.0 * half, closed, set.period)),
        }
    }
}
