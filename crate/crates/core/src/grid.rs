//! Fixed-size grid graph with placeholder slots.
//!
//! Every row strip of the diagram owns `2·n_π` lattice rows and every column
//! strip owns `2·n_σ` lattice columns. The lowest slots of a strip hold the
//! strip's actual grid lines in geometric order; the remaining slots are
//! placeholders. Row placeholders on `l(π_i)` copy the corner directly above,
//! column placeholders on `l(σ_j)` copy the corner directly to the right, and
//! every vertex off the FSD boundaries has weight 1. Grid-line births, deaths
//! and reorderings therefore become a bounded number of weight writes on the
//! boundary columns and rows.

use std::collections::HashMap;

use serde::Serialize;

use crate::backend::Lattice;
use crate::error::{Error, Result};
use crate::freespace::{interval_critical_ends, BoundaryId, End, FreeSpaceSkeleton, Orientation};
use crate::fsg::{GridLineId, LineOrigin, RefinedFsg};
use crate::geom::Interval;

/// Strip family: row strips hold horizontal grid lines, column strips vertical ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    Row,
    Col,
}

/// Role of one lattice row or column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlotRole {
    /// An FSD boundary `l(π_i)` / `l(σ_j)`.
    Boundary(usize),
    /// Slot `slot` of strip `strip` holding an actual grid line.
    Line { strip: usize, slot: usize },
    /// Slot `slot` of strip `strip` in the placeholder registry.
    Placeholder { strip: usize, slot: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightChange {
    pub col: usize,
    pub row: usize,
    pub weight: u8,
}

/// An actual grid line occupying a slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripLine {
    pub id: GridLineId,
    /// The boundary whose free interval ends here.
    pub boundary: BoundaryId,
    pub end: End,
    /// Local parameter in the strip.
    pub param: f64,
}

impl StripLine {
    fn key(&self) -> (BoundaryId, End) {
        (self.boundary, self.end)
    }
}

#[derive(Debug, Clone)]
pub struct PlaceholderGrid {
    n_pi: usize,
    n_sigma: usize,
    lattice: Lattice,
    row_lines: Vec<Vec<StripLine>>,
    col_lines: Vec<Vec<StripLine>>,
    next_seq: u64,
    tie_eps: f64,
}

/// `(N_v, N_h)` for curves with `n_pi` and `n_sigma` vertices.
pub fn grid_dimensions(n_pi: usize, n_sigma: usize) -> (usize, usize) {
    (n_pi + (n_pi - 1) * 2 * n_sigma, n_sigma + (n_sigma - 1) * 2 * n_pi)
}

fn contains(iv: Option<Interval>, t: f64, slack: f64) -> bool {
    iv.is_some_and(|iv| iv.contains(t, slack))
}

/// Geometric order within a strip: positions closer than `eps` form one
/// cluster (chained), ordered among themselves by creation sequence.
fn sort_strip(lines: &mut [StripLine], eps: f64) {
    lines.sort_by(|a, b| a.param.total_cmp(&b.param).then(a.id.seq.cmp(&b.id.seq)));
    let mut start = 0;
    for k in 1..=lines.len() {
        if k == lines.len() || lines[k].param - lines[k - 1].param > eps {
            lines[start..k].sort_by_key(|l| l.id.seq);
            start = k;
        }
    }
}

impl PlaceholderGrid {
    pub fn n_pi(&self) -> usize {
        self.n_pi
    }

    pub fn n_sigma(&self) -> usize {
        self.n_sigma
    }

    /// `(N_v, N_h)`: lattice columns and rows.
    pub fn dimensions(&self) -> (usize, usize) {
        (self.lattice.width(), self.lattice.height())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn weight(&self, col: usize, row: usize) -> u8 {
        self.lattice.get(col, row)
    }

    pub fn capacity(&self, axis: Axis) -> usize {
        match axis {
            Axis::Row => 2 * self.n_pi,
            Axis::Col => 2 * self.n_sigma,
        }
    }

    fn n_boundaries(&self, axis: Axis) -> usize {
        match axis {
            Axis::Row => self.n_pi,
            Axis::Col => self.n_sigma,
        }
    }

    pub fn lines(&self, axis: Axis, strip: usize) -> &[StripLine] {
        match axis {
            Axis::Row => &self.row_lines[strip],
            Axis::Col => &self.col_lines[strip],
        }
    }

    fn lines_mut(&mut self, axis: Axis, strip: usize) -> &mut Vec<StripLine> {
        match axis {
            Axis::Row => &mut self.row_lines[strip],
            Axis::Col => &mut self.col_lines[strip],
        }
    }

    /// `|H_strip|` for the given strip family.
    pub fn placeholder_count(&self, axis: Axis, strip: usize) -> usize {
        self.capacity(axis) - self.lines(axis, strip).len()
    }

    pub fn col_of_boundary(&self, i: usize) -> usize {
        i * (1 + 2 * self.n_sigma)
    }

    pub fn row_of_boundary(&self, j: usize) -> usize {
        j * (1 + 2 * self.n_pi)
    }

    pub fn col_of_slot(&self, strip: usize, slot: usize) -> usize {
        self.col_of_boundary(strip) + 1 + slot
    }

    pub fn row_of_slot(&self, strip: usize, slot: usize) -> usize {
        self.row_of_boundary(strip) + 1 + slot
    }

    fn role(&self, axis: Axis, index: usize) -> SlotRole {
        let period = 1 + self.capacity(axis);
        let (strip, r) = (index / period, index % period);
        if r == 0 {
            return SlotRole::Boundary(strip);
        }
        let slot = r - 1;
        if slot < self.lines(axis, strip).len() {
            SlotRole::Line { strip, slot }
        } else {
            SlotRole::Placeholder { strip, slot }
        }
    }

    pub fn col_role(&self, col: usize) -> SlotRole {
        self.role(Axis::Col, col)
    }

    pub fn row_role(&self, row: usize) -> SlotRole {
        self.role(Axis::Row, row)
    }

    /// Lattice vertex where boundary `b` crosses slot `slot` of `strip`.
    fn strip_vertex(&self, axis: Axis, strip: usize, slot: usize, b: usize) -> (usize, usize) {
        match axis {
            Axis::Row => (self.col_of_boundary(b), self.row_of_slot(strip, slot)),
            Axis::Col => (self.col_of_slot(strip, slot), self.row_of_boundary(b)),
        }
    }

    /// Corner on boundary `b` at the low (`high = false`) or high end of `strip`.
    fn strip_corner(&self, axis: Axis, strip: usize, b: usize, high: bool) -> (usize, usize) {
        let s = strip + usize::from(high);
        match axis {
            Axis::Row => (self.col_of_boundary(b), self.row_of_boundary(s)),
            Axis::Col => (self.col_of_boundary(s), self.row_of_boundary(b)),
        }
    }

    pub fn corner_weight(&self, i: usize, j: usize) -> u8 {
        self.weight(self.col_of_boundary(i), self.row_of_boundary(j))
    }

    fn set(&mut self, col: usize, row: usize, w: u8, changes: &mut Vec<WeightChange>) {
        if self.lattice.get(col, row) != w {
            self.lattice.set(col, row, w);
            changes.push(WeightChange { col, row, weight: w });
        }
    }

    fn next_id(&mut self, origin: LineOrigin) -> GridLineId {
        let seq = self.next_seq;
        self.next_seq += 1;
        GridLineId { origin, seq }
    }

    /// Weight every vertex should carry given the skeleton and the current slot assignment.
    pub fn desired_weight(&self, sk: &FreeSpaceSkeleton, col: usize, row: usize) -> u8 {
        let slack = sk.tolerance().eps;
        let w = match (self.col_role(col), self.row_role(row)) {
            (SlotRole::Boundary(i), SlotRole::Boundary(j)) => sk.corner(i, j),
            (SlotRole::Boundary(i), SlotRole::Line { strip, slot }) => {
                contains(sk.vertical(i, strip), self.row_lines[strip][slot].param, slack)
            }
            (SlotRole::Boundary(i), SlotRole::Placeholder { strip, .. }) => sk.corner(i, strip + 1),
            (SlotRole::Line { strip, slot }, SlotRole::Boundary(j)) => {
                contains(sk.horizontal(j, strip), self.col_lines[strip][slot].param, slack)
            }
            (SlotRole::Placeholder { strip, .. }, SlotRole::Boundary(j)) => sk.corner(strip + 1, j),
            _ => true,
        };
        u8::from(w)
    }

    /// Checks capacity, slot order, and that every weight equals [`Self::desired_weight`].
    pub fn audit(&self, sk: &FreeSpaceSkeleton) -> Result<()> {
        for axis in [Axis::Row, Axis::Col] {
            let strips = match axis {
                Axis::Row => self.n_sigma - 1,
                Axis::Col => self.n_pi - 1,
            };
            for s in 0..strips {
                let lines = self.lines(axis, s);
                if lines.len() > self.capacity(axis) {
                    return Err(Error::InvariantViolation(format!("{axis:?} strip {s} over capacity")));
                }
                if lines.windows(2).any(|w| w[1].param < w[0].param - self.tie_eps) {
                    return Err(Error::InvariantViolation(format!("{axis:?} strip {s} out of order")));
                }
            }
        }
        let (nv, nh) = self.dimensions();
        for col in 0..nv {
            for row in 0..nh {
                let want = self.desired_weight(sk, col, row);
                if self.weight(col, row) != want {
                    return Err(Error::InvariantViolation(format!(
                        "weight at ({col}, {row}) is {} but should be {want} ({:?}, {:?})",
                        self.weight(col, row),
                        self.col_role(col),
                        self.row_role(row)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sets corner `(i, j)` and mirrors it onto the row placeholders below it
    /// on `l(π_i)` and the column placeholders left of it on `l(σ_j)`.
    pub fn apply_corner_op(&mut self, i: usize, j: usize, w: u8) -> Result<Vec<WeightChange>> {
        if i >= self.n_pi || j >= self.n_sigma {
            return Err(Error::InvalidArgument(format!("corner ({i}, {j}) out of range")));
        }
        let mut changes = Vec::new();
        let (c, r) = (self.col_of_boundary(i), self.row_of_boundary(j));
        self.set(c, r, w, &mut changes);
        if j > 0 {
            for slot in self.row_lines[j - 1].len()..self.capacity(Axis::Row) {
                let row = self.row_of_slot(j - 1, slot);
                self.set(c, row, w, &mut changes);
            }
        }
        if i > 0 {
            for slot in self.col_lines[i - 1].len()..self.capacity(Axis::Col) {
                let col = self.col_of_slot(i - 1, slot);
                self.set(col, r, w, &mut changes);
            }
        }
        Ok(changes)
    }

    /// Sets one boundary (non-corner, non-interior) vertex.
    pub fn apply_boundary_vertex_op(&mut self, col: usize, row: usize, w: u8) -> Result<Vec<WeightChange>> {
        let (nv, nh) = self.dimensions();
        if col >= nv || row >= nh {
            return Err(Error::InvalidArgument(format!("vertex ({col}, {row}) out of range")));
        }
        let on_col = matches!(self.col_role(col), SlotRole::Boundary(_));
        let on_row = matches!(self.row_role(row), SlotRole::Boundary(_));
        match (on_col, on_row) {
            (true, true) => Err(Error::InvalidArgument(format!("({col}, {row}) is a corner vertex"))),
            (false, false) => Err(Error::InvalidArgument(format!("({col}, {row}) is an interior vertex"))),
            _ => {
                let mut changes = Vec::new();
                self.set(col, row, w, &mut changes);
                Ok(changes)
            }
        }
    }

    /// Inserts `line` at rank `rank` of its strip. Lines at and above `rank`
    /// move up one slot; the new slot gets weight 1 on the owning boundary and
    /// the AND of its two neighbours' weights elsewhere.
    pub fn apply_insert(
        &mut self,
        axis: Axis,
        strip: usize,
        rank: usize,
        line: StripLine,
    ) -> Result<Vec<WeightChange>> {
        let len = self.lines(axis, strip).len();
        if len >= self.capacity(axis) {
            return Err(Error::InvariantViolation(format!(
                "{axis:?} strip {strip} has no free placeholder"
            )));
        }
        if rank > len {
            return Err(Error::InvalidArgument(format!("rank {rank} beyond {len} lines")));
        }
        let spawn = line.boundary.boundary;
        let mut changes = Vec::new();
        for b in 0..self.n_boundaries(axis) {
            let below = if rank == 0 {
                self.strip_corner(axis, strip, b, false)
            } else {
                self.strip_vertex(axis, strip, rank - 1, b)
            };
            let above = if rank < len {
                self.strip_vertex(axis, strip, rank, b)
            } else {
                self.strip_corner(axis, strip, b, true)
            };
            let and = self.weight(below.0, below.1) & self.weight(above.0, above.1);
            for slot in (rank + 1..=len).rev() {
                let (sc, sr) = self.strip_vertex(axis, strip, slot - 1, b);
                let w = self.weight(sc, sr);
                let (tc, tr) = self.strip_vertex(axis, strip, slot, b);
                self.set(tc, tr, w, &mut changes);
            }
            let (nc, nr) = self.strip_vertex(axis, strip, rank, b);
            self.set(nc, nr, if b == spawn { 1 } else { and }, &mut changes);
        }
        self.lines_mut(axis, strip).insert(rank, line);
        Ok(changes)
    }

    /// Removes the line at rank `rank`. Higher lines move down one slot and
    /// the freed top slot becomes a placeholder copying the far corner.
    pub fn apply_delete(&mut self, axis: Axis, strip: usize, rank: usize) -> Result<Vec<WeightChange>> {
        let len = self.lines(axis, strip).len();
        if rank >= len {
            return Err(Error::InvariantViolation(format!(
                "{axis:?} strip {strip} has no line at rank {rank}"
            )));
        }
        let mut changes = Vec::new();
        for b in 0..self.n_boundaries(axis) {
            for slot in rank..len - 1 {
                let (sc, sr) = self.strip_vertex(axis, strip, slot + 1, b);
                let w = self.weight(sc, sr);
                let (tc, tr) = self.strip_vertex(axis, strip, slot, b);
                self.set(tc, tr, w, &mut changes);
            }
            let (cc, cr) = self.strip_corner(axis, strip, b, true);
            let w = self.weight(cc, cr);
            let (tc, tr) = self.strip_vertex(axis, strip, len - 1, b);
            self.set(tc, tr, w, &mut changes);
        }
        self.lines_mut(axis, strip).remove(rank);
        Ok(changes)
    }

    pub fn apply_row_insert(&mut self, row: usize, rank: usize, line: StripLine) -> Result<Vec<WeightChange>> {
        self.apply_insert(Axis::Row, row, rank, line)
    }

    pub fn apply_row_delete(&mut self, row: usize, rank: usize) -> Result<Vec<WeightChange>> {
        self.apply_delete(Axis::Row, row, rank)
    }

    pub fn apply_col_insert(&mut self, column: usize, rank: usize, line: StripLine) -> Result<Vec<WeightChange>> {
        self.apply_insert(Axis::Col, column, rank, line)
    }

    pub fn apply_col_delete(&mut self, column: usize, rank: usize) -> Result<Vec<WeightChange>> {
        self.apply_delete(Axis::Col, column, rank)
    }

    /// New line for the critical end `end` of `boundary` at `param`.
    pub fn new_line(&mut self, boundary: BoundaryId, end: End, param: f64) -> StripLine {
        StripLine {
            id: self.next_id(LineOrigin::Critical { boundary, end }),
            boundary,
            end,
            param,
        }
    }

    /// Brings one strip in line with the skeleton: deletes vanished lines,
    /// reorders survivors, inserts new lines, then rewrites any boundary
    /// vertex of the strip whose weight disagrees with the skeleton.
    pub fn sync_strip(&mut self, axis: Axis, strip: usize, sk: &FreeSpaceSkeleton) -> Result<Vec<WeightChange>> {
        let mut wanted: HashMap<(BoundaryId, End), f64> = HashMap::new();
        for b in 0..self.n_boundaries(axis) {
            let id = match axis {
                Axis::Row => BoundaryId::vertical(b, strip),
                Axis::Col => BoundaryId::horizontal(b, strip),
            };
            if let Some(iv) = sk.interval(id) {
                for (end, t) in interval_critical_ends(&iv) {
                    wanted.insert((id, end), t);
                }
            }
        }
        let mut changes = Vec::new();

        let mut rank = self.lines(axis, strip).len();
        while rank > 0 {
            rank -= 1;
            let key = self.lines(axis, strip)[rank].key();
            if !wanted.contains_key(&key) {
                changes.extend(self.apply_delete(axis, strip, rank)?);
            }
        }

        let eps = self.tie_eps;
        let lines = self.lines_mut(axis, strip);
        for l in lines.iter_mut() {
            l.param = wanted[&l.key()];
        }
        sort_strip(lines, eps);
        let present: Vec<(BoundaryId, End)> = lines.iter().map(StripLine::key).collect();

        let mut fresh: Vec<(BoundaryId, End, f64)> = wanted
            .iter()
            .filter(|(k, _)| !present.contains(k))
            .map(|(&(b, e), &t)| (b, e, t))
            .collect();
        fresh.sort_by_key(|f| (f.0, f.1));
        let fresh: Vec<StripLine> = fresh.into_iter().map(|(b, e, t)| self.new_line(b, e, t)).collect();
        let mut target: Vec<StripLine> = self.lines(axis, strip).to_vec();
        target.extend(fresh.iter().copied());
        sort_strip(&mut target, eps);
        for (pos, line) in target.iter().enumerate() {
            if fresh.iter().any(|f| f.id == line.id) {
                changes.extend(self.apply_insert(axis, strip, pos, *line)?);
            }
        }

        for b in 0..self.n_boundaries(axis) {
            for slot in 0..self.capacity(axis) {
                let (c, r) = self.strip_vertex(axis, strip, slot, b);
                let want = self.desired_weight(sk, c, r);
                if self.weight(c, r) != want {
                    changes.extend(self.apply_boundary_vertex_op(c, r, want)?);
                }
            }
        }
        Ok(changes)
    }

    /// Portable bitmap of the lattice, top row first; blocked vertices are black.
    pub fn to_pbm(&self) -> String {
        let (nv, nh) = self.dimensions();
        let mut out = format!("P1\n{nv} {nh}\n");
        for row in (0..nh).rev() {
            let line: Vec<&str> = (0..nv)
                .map(|c| if self.weight(c, row) == 1 { "0" } else { "1" })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Lays the lines of `fsg` into slots and fills in every weight.
pub fn build_grid(fsg: &RefinedFsg, sk: &FreeSpaceSkeleton) -> PlaceholderGrid {
    let (n_pi, n_sigma) = (sk.n_pi(), sk.n_sigma());
    let (nv, nh) = grid_dimensions(n_pi, n_sigma);
    let mut row_lines = vec![Vec::new(); n_sigma - 1];
    let mut col_lines = vec![Vec::new(); n_pi - 1];
    let mut next_seq = 0;
    let all = fsg
        .horizontal
        .iter()
        .map(|l| (Axis::Row, l))
        .chain(fsg.vertical.iter().map(|l| (Axis::Col, l)));
    for (axis, l) in all {
        next_seq = next_seq.max(l.id.seq + 1);
        if let LineOrigin::Critical { boundary, end } = l.id.origin {
            let line = StripLine {
                id: l.id,
                boundary,
                end,
                param: l.pos - boundary.strip as f64,
            };
            debug_assert_eq!(
                boundary.orientation,
                if axis == Axis::Row {
                    Orientation::Vertical
                } else {
                    Orientation::Horizontal
                }
            );
            match axis {
                Axis::Row => row_lines[boundary.strip].push(line),
                Axis::Col => col_lines[boundary.strip].push(line),
            }
        }
    }
    let mut g = PlaceholderGrid {
        n_pi,
        n_sigma,
        lattice: Lattice::new(nv, nh, 1),
        row_lines,
        col_lines,
        next_seq,
        tie_eps: sk.tolerance().eps,
    };
    for col in 0..nv {
        for row in 0..nh {
            let w = g.desired_weight(sk, col, row);
            g.lattice.set(col, row, w);
        }
    }
    g
}

/// Grid for a skeleton, built through its refined free-space graph.
pub fn grid_from_skeleton(sk: &FreeSpaceSkeleton) -> PlaceholderGrid {
    build_grid(&crate::fsg::build_fsg(sk), sk)
}
