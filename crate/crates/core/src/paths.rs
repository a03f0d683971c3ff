//! Greedy extremal information paths through a landscape.
//!
//! A path is a variable ordering read as a chain of nested prefixes. Starting
//! from one variable, each step appends the unused variable whose prefix has
//! the extremal `I_{k+1}`. The slope `I_{k+1} − I_k` equals minus the mutual
//! information of the prefix conditioned on the appended variable; a path
//! stops at its first extremum, i.e. before the first step whose slope has the
//! opposite sign of the running direction.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::info::IDENTITY_TOLERANCE;
use crate::lattice::Landscape;
use crate::mask::SubsetMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximal,
    Minimal,
}

impl Direction {
    /// `Ordering::Greater` when `a` is the better value.
    fn compare(self, a: f64, b: f64) -> Ordering {
        match self {
            Direction::Maximal => a.total_cmp(&b),
            Direction::Minimal => b.total_cmp(&a),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Maximal => "maximal",
            Direction::Minimal => "minimal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The next step would reverse the sign of the slope.
    SlopeSignChange,
    /// The length limit (normally the undersampling dimension) was reached.
    ReachedLimit,
    ExhaustedVariables,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::SlopeSignChange => "slope-sign-change",
            StopReason::ReachedLimit => "reached-k_u",
            StopReason::ExhaustedVariables => "exhausted-variables",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoPath {
    pub variables: Vec<usize>,
    /// `I_k` of each prefix, `k = 1..=len`.
    pub values: Vec<f64>,
    /// `values[k] − values[k-1]`.
    pub slopes: Vec<f64>,
    pub direction: Direction,
    pub stop_reason: StopReason,
}

impl InfoPath {
    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn terminal_value(&self) -> f64 {
        *self.values.last().expect("paths have at least one step")
    }

    /// Mask of the first `k` variables.
    pub fn prefix(&self, k: usize) -> SubsetMask {
        self.variables[..k].iter().fold(SubsetMask::EMPTY, |m, &v| m.with(v))
    }
}

fn sign(x: f64) -> i8 {
    if x > IDENTITY_TOLERANCE {
        1
    } else if x < -IDENTITY_TOLERANCE {
        -1
    } else {
        0
    }
}

/// Greedy path from a fixed first variable, at most `k_stop` long.
pub fn greedy_path(l: &Landscape, start: usize, direction: Direction, k_stop: usize) -> InfoPath {
    let n = l.n();
    let limit = k_stop.clamp(1, l.k_max());
    let mut mask = SubsetMask::singleton(start);
    let mut path = InfoPath {
        variables: alloc::vec![start],
        values: alloc::vec![l.information(mask)],
        slopes: Vec::new(),
        direction,
        stop_reason: StopReason::ExhaustedVariables,
    };
    let mut running = 0i8;
    loop {
        if path.len() == n {
            path.stop_reason = StopReason::ExhaustedVariables;
            break;
        }
        if path.len() >= limit {
            path.stop_reason = StopReason::ReachedLimit;
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for v in (0..n).filter(|&v| !mask.contains(v)) {
            let value = l.information(mask.with(v));
            if best.is_none_or(|(_, b)| direction.compare(value, b) == Ordering::Greater) {
                best = Some((v, value));
            }
        }
        let (v, value) = best.expect("an unused variable remains");
        let slope = value - path.terminal_value();
        let s = sign(slope);
        if running != 0 && s != 0 && s != running {
            path.stop_reason = StopReason::SlopeSignChange;
            break;
        }
        if s != 0 {
            running = s;
        }
        mask = mask.with(v);
        path.variables.push(v);
        path.values.push(value);
        path.slopes.push(slope);
    }
    path
}

/// The `count` best greedy paths over all starting variables, ranked by length,
/// then by extremal terminal value, then by extremal first value, then by
/// starting index. Identical orderings are reported once.
pub fn extremal_paths(l: &Landscape, direction: Direction, k_stop: usize, count: usize) -> Vec<InfoPath> {
    let mut paths: Vec<InfoPath> = (0..l.n()).map(|s| greedy_path(l, s, direction, k_stop)).collect();
    paths.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| direction.compare(b.terminal_value(), a.terminal_value()))
            .then_with(|| direction.compare(b.values[0], a.values[0]))
            .then_with(|| a.variables[0].cmp(&b.variables[0]))
    });
    let mut out: Vec<InfoPath> = Vec::new();
    for p in paths {
        if out.len() == count {
            break;
        }
        if !out.iter().any(|q| q.variables == p.variables) {
            out.push(p);
        }
    }
    out
}

/// Index of the variable with extremal `I_1` (lowest index on ties).
pub fn extremal_start(l: &Landscape, direction: Direction) -> usize {
    (0..l.n())
        .fold(None, |best: Option<(usize, f64)>, v| {
            let h = l.information(SubsetMask::singleton(v));
            match best {
                Some((_, b)) if direction.compare(h, b) != Ordering::Greater => best,
                _ => Some((v, h)),
            }
        })
        .map_or(0, |(v, _)| v)
}
