//! Uniform-grid bucketing for fixed-radius neighbour queries.
//!
//! Items are bucketed by a representative point. Items with spatial extent (segments) are
//! found by padding the query box with the largest item half-extent.

use crate::geometry::Point;

const MAX_CELLS: usize = 1 << 22;

pub(crate) struct Grid {
    origin: [f64; 3],
    cell: f64,
    dims: [usize; 3],
    /// CSR layout: items of cell `c` are `items[offsets[c]..offsets[c + 1]]`.
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl Grid {
    /// Buckets `points` (item `k` at `points[k]`) into cells of side at least `cell`.
    pub(crate) fn build(points: &[Point], cell: f64) -> Grid {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in points {
            for k in 0..3 {
                lo[k] = lo[k].min(p.raw()[k]);
                hi[k] = hi[k].max(p.raw()[k]);
            }
        }
        if points.is_empty() {
            lo = [0.0; 3];
            hi = [0.0; 3];
        }
        let mut cell = if cell.is_finite() && cell > 0.0 { cell } else { 1.0 };
        let dims = loop {
            let d = [0, 1, 2].map(|k| (((hi[k] - lo[k]) / cell).floor() as usize) + 1);
            if d[0].saturating_mul(d[1]).saturating_mul(d[2]) <= MAX_CELLS {
                break d;
            }
            cell *= 2.0;
        };
        let mut grid = Grid { origin: lo, cell, dims, offsets: Vec::new(), items: Vec::new() };
        let ncell = dims[0] * dims[1] * dims[2];
        let keys: Vec<usize> = points.iter().map(|p| grid.key(p)).collect();
        let mut counts = vec![0u32; ncell + 1];
        for &k in &keys {
            counts[k + 1] += 1;
        }
        for c in 0..ncell {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        let mut items = vec![0u32; points.len()];
        for (idx, &k) in keys.iter().enumerate() {
            items[fill[k] as usize] = idx as u32;
            fill[k] += 1;
        }
        grid.offsets = counts;
        grid.items = items;
        grid
    }

    fn coord(&self, x: f64, axis: usize) -> usize {
        let c = ((x - self.origin[axis]) / self.cell).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(self.dims[axis] - 1)
        }
    }

    fn key(&self, p: &Point) -> usize {
        let r = p.raw();
        let (i, j, k) = (self.coord(r[0], 0), self.coord(r[1], 1), self.coord(r[2], 2));
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    /// Calls `f` for every item whose representative point may lie within `radius` of
    /// `center` (a superset; callers filter exactly).
    pub(crate) fn for_each_near(&self, center: &Point, radius: f64, mut f: impl FnMut(usize)) {
        self.for_each_slot_range(center, radius, |range| {
            for &it in &self.items[range] {
                f(it as usize);
            }
        });
    }

    /// Like [`Grid::for_each_near`], but hands out contiguous ranges of slots. Slot `s`
    /// holds item `order()[s]`.
    pub(crate) fn for_each_slot_range(&self, center: &Point, radius: f64, mut f: impl FnMut(std::ops::Range<usize>)) {
        let r = center.raw();
        let lo = [0, 1, 2].map(|a| self.coord(r[a] - radius, a));
        let hi = [0, 1, 2].map(|a| self.coord(r[a] + radius, a));
        for k in lo[2]..=hi[2] {
            for j in lo[1]..=hi[1] {
                let row = (k * self.dims[1] + j) * self.dims[0];
                let start = self.offsets[row + lo[0]] as usize;
                let end = self.offsets[row + hi[0] + 1] as usize;
                f(start..end);
            }
        }
    }

    /// Item stored in each slot.
    pub(crate) fn order(&self) -> &[u32] {
        &self.items
    }
}

/// Flattened segments of a curve collection, bucketed by midpoint.
pub(crate) struct SegmentIndex {
    pub(crate) starts: Vec<Point>,
    pub(crate) ends: Vec<Point>,
    pub(crate) lengths: Vec<f64>,
    half_extent: f64,
    grid: Grid,
}

impl SegmentIndex {
    pub(crate) fn build<'a>(
        curves: impl IntoIterator<Item = &'a crate::geometry::Polyline>,
        cell: f64,
    ) -> SegmentIndex {
        let (mut starts, mut ends, mut lengths, mut mids) = (vec![], vec![], vec![], vec![]);
        let mut half_extent: f64 = 0.0;
        for c in curves {
            for (k, (a, b)) in c.segments().enumerate() {
                starts.push(*a);
                ends.push(*b);
                let len = c.segment_length(k);
                lengths.push(len);
                mids.push(a.lerp(b, 0.5));
                half_extent = half_extent.max(0.5 * len);
            }
        }
        let grid = Grid::build(&mids, cell.max(half_extent));
        SegmentIndex { starts, ends, lengths, half_extent, grid }
    }

    /// Candidate segments that may come within `radius` of `center`.
    pub(crate) fn for_each_near(&self, center: &Point, radius: f64, f: impl FnMut(usize)) {
        self.grid.for_each_near(center, radius + self.half_extent * (1.0 + 1e-12), f)
    }
}
