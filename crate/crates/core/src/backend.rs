//! Reachability engines for a 0/1 weight lattice under single-vertex updates.
//!
//! A path starts at `(0, 0)`, ends at `(width - 1, height - 1)`, visits only
//! weight-1 vertices, and steps right, up, or diagonally up-right.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    width: usize,
    height: usize,
    /// `cells[x * height + y]`.
    cells: Vec<u8>,
}

impl Lattice {
    pub fn new(width: usize, height: usize, fill: u8) -> Self {
        assert!(width > 0 && height > 0, "lattice must be non-empty");
        Lattice {
            width,
            height,
            cells: vec![fill; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.cells[x * self.height + y]
    }

    pub fn set(&mut self, x: usize, y: usize, w: u8) {
        self.cells[x * self.height + y] = w;
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Column `x` as a slice over `y`.
    pub fn column(&self, x: usize) -> &[u8] {
        &self.cells[x * self.height..(x + 1) * self.height]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightUpdate {
    pub x: usize,
    pub y: usize,
    pub w: u8,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendStats {
    /// `set_weight` calls.
    pub updates: u64,
    /// Calls that changed a stored weight.
    pub effective_updates: u64,
    pub queries: u64,
    /// Lattice vertices evaluated across all queries.
    pub cells_visited: u64,
}

pub trait ReachabilityBackend: Send {
    fn name(&self) -> &'static str;
    fn init(&mut self, lattice: &Lattice);
    fn set_weight(&mut self, x: usize, y: usize, w: u8);
    fn query(&mut self) -> bool;
    fn stats(&self) -> BackendStats;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum BackendKind {
    #[default]
    Baseline,
    Blocked,
}

impl std::str::FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(BackendKind::Baseline),
            "blocked" => Ok(BackendKind::Blocked),
            other => Err(Error::InvalidArgument(format!("unknown backend '{other}'"))),
        }
    }
}

pub fn make_backend(kind: BackendKind) -> Box<dyn ReachabilityBackend> {
    match kind {
        BackendKind::Baseline => Box::new(BaselineBackend::default()),
        BackendKind::Blocked => Box::new(BlockedBackend::default()),
    }
}

/// Answer after the initial lattice, then after each update.
pub fn offline_process(
    backend: &mut dyn ReachabilityBackend,
    initial: &Lattice,
    updates: &[WeightUpdate],
) -> Vec<bool> {
    backend.init(initial);
    let mut out = Vec::with_capacity(updates.len() + 1);
    out.push(backend.query());
    for u in updates {
        backend.set_weight(u.x, u.y, u.w);
        out.push(backend.query());
    }
    out
}

/// One column step of the DP: `next[y]` from `prev` (column `x - 1`, or `None` at `x = 0`).
fn dp_column(prev: Option<&[bool]>, weights: &[u8], next: &mut [bool]) {
    for y in 0..weights.len() {
        let from = match prev {
            None => y == 0 || next[y - 1],
            Some(p) => p[y] || (y > 0 && (next[y - 1] || p[y - 1])),
        };
        next[y] = from && weights[y] == 1;
    }
}

fn record_update(stats: &mut BackendStats, lattice: &mut Lattice, x: usize, y: usize, w: u8) -> bool {
    stats.updates += 1;
    if lattice.get(x, y) == w {
        return false;
    }
    lattice.set(x, y, w);
    stats.effective_updates += 1;
    true
}

/// Full monotone DP on every query.
#[derive(Debug, Clone)]
pub struct BaselineBackend {
    lattice: Lattice,
    stats: BackendStats,
}

impl Default for BaselineBackend {
    fn default() -> Self {
        BaselineBackend {
            lattice: Lattice::new(1, 1, 1),
            stats: BackendStats::default(),
        }
    }
}

impl ReachabilityBackend for BaselineBackend {
    fn name(&self) -> &'static str {
        "baseline"
    }

    fn init(&mut self, lattice: &Lattice) {
        self.lattice = lattice.clone();
        self.stats = BackendStats::default();
    }

    fn set_weight(&mut self, x: usize, y: usize, w: u8) {
        record_update(&mut self.stats, &mut self.lattice, x, y, w);
    }

    fn query(&mut self) -> bool {
        self.stats.queries += 1;
        let h = self.lattice.height();
        let mut prev = vec![false; h];
        let mut next = vec![false; h];
        for x in 0..self.lattice.width() {
            dp_column((x > 0).then_some(&prev[..]), self.lattice.column(x), &mut next);
            std::mem::swap(&mut prev, &mut next);
        }
        self.stats.cells_visited += (self.lattice.width() * h) as u64;
        prev[h - 1]
    }

    fn stats(&self) -> BackendStats {
        self.stats
    }
}

/// Columns grouped into bands of about `sqrt(width)`. The reachable set on the
/// last column of each band is cached; a query recomputes from the first band
/// touched since the last query and stops early once a recomputed frontier
/// matches the cached one with no dirty band ahead.
#[derive(Debug, Clone)]
pub struct BlockedBackend {
    lattice: Lattice,
    band: usize,
    frontiers: Vec<Vec<bool>>,
    /// Lowest band with an update since the last query.
    dirty_from: Option<usize>,
    dirty: Vec<bool>,
    answer: bool,
    stats: BackendStats,
}

impl Default for BlockedBackend {
    fn default() -> Self {
        BlockedBackend {
            lattice: Lattice::new(1, 1, 1),
            band: 1,
            frontiers: Vec::new(),
            dirty_from: Some(0),
            dirty: vec![true],
            answer: false,
            stats: BackendStats::default(),
        }
    }
}

impl BlockedBackend {
    fn bands(&self) -> usize {
        self.lattice.width().div_ceil(self.band)
    }
}

impl ReachabilityBackend for BlockedBackend {
    fn name(&self) -> &'static str {
        "blocked"
    }

    fn init(&mut self, lattice: &Lattice) {
        self.lattice = lattice.clone();
        self.band = ((lattice.width() as f64).sqrt().ceil() as usize).max(1);
        let bands = self.bands();
        self.frontiers = vec![vec![false; lattice.height()]; bands];
        self.dirty = vec![true; bands];
        self.dirty_from = Some(0);
        self.answer = false;
        self.stats = BackendStats::default();
    }

    fn set_weight(&mut self, x: usize, y: usize, w: u8) {
        if record_update(&mut self.stats, &mut self.lattice, x, y, w) {
            let b = x / self.band;
            self.dirty[b] = true;
            self.dirty_from = Some(self.dirty_from.map_or(b, |d| d.min(b)));
        }
    }

    fn query(&mut self) -> bool {
        self.stats.queries += 1;
        let Some(start) = self.dirty_from.take() else {
            return self.answer;
        };
        let h = self.lattice.height();
        let bands = self.bands();
        let mut prev = vec![false; h];
        let mut next = vec![false; h];
        let mut have_prev = start > 0;
        if have_prev {
            prev.copy_from_slice(&self.frontiers[start - 1]);
        }
        for b in start..bands {
            let lo = b * self.band;
            let hi = (lo + self.band).min(self.lattice.width());
            for x in lo..hi {
                dp_column(have_prev.then_some(&prev[..]), self.lattice.column(x), &mut next);
                std::mem::swap(&mut prev, &mut next);
                have_prev = true;
            }
            self.stats.cells_visited += ((hi - lo) * h) as u64;
            self.dirty[b] = false;
            let unchanged = self.frontiers[b] == prev;
            self.frontiers[b].copy_from_slice(&prev);
            if unchanged && !self.dirty[b + 1..].iter().any(|&d| d) {
                break;
            }
        }
        self.answer = self.frontiers[bands - 1][h - 1];
        self.answer
    }

    fn stats(&self) -> BackendStats {
        self.stats
    }
}
