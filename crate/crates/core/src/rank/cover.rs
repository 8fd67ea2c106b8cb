use crate::decomposition::{SliceDecomposition, SliceTerm};
use crate::error::Result;
use crate::tensor::{DenseArray, Tensor};

/// A minimum set of axis-aligned slices `(axis, index)` covering the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCover {
    pub count: usize,
    /// Sorted by axis, then index.
    pub slices: Vec<(usize, usize)>,
}

struct Search<'a> {
    points: &'a [Vec<usize>],
    // slice id -> covered point ids
    members: Vec<Vec<usize>>,
    slice_of: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    best: Vec<usize>,
    max_cover: usize,
}

impl Search<'_> {
    fn slice_id(&self, axis: usize, index: usize) -> usize {
        self.offsets[axis] + index
    }

    fn run(&mut self, covered: &mut [u32], chosen: &mut Vec<usize>, uncovered: usize) {
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let lower = uncovered.div_ceil(self.max_cover.max(1));
        if chosen.len() + lower >= self.best.len() {
            return;
        }
        let first = covered.iter().position(|&c| c == 0).expect("something uncovered");
        let d = self.points[first].len();
        for axis in 0..d {
            let id = self.slice_id(axis, self.points[first][axis]);
            let mut newly = 0;
            for &pt in &self.members[id] {
                if covered[pt] == 0 {
                    newly += 1;
                }
                covered[pt] += 1;
            }
            chosen.push(id);
            self.run(covered, chosen, uncovered - newly);
            chosen.pop();
            for &pt in &self.members[id] {
                covered[pt] -= 1;
            }
        }
    }
}

/// Exact minimum slice cover by branch and bound: branch on the d slices
/// through the first uncovered support point.
pub fn min_slice_cover(t: &Tensor) -> SliceCover {
    let (points, _) = t.support_and_antichain();
    let shape = t.shape();
    let mut offsets = Vec::with_capacity(shape.len());
    let mut slice_of = Vec::new();
    for (axis, &n) in shape.iter().enumerate() {
        offsets.push(slice_of.len());
        slice_of.extend((0..n).map(|i| (axis, i)));
    }
    let mut members = vec![Vec::new(); slice_of.len()];
    for (pid, pt) in points.iter().enumerate() {
        for (axis, &x) in pt.iter().enumerate() {
            members[offsets[axis] + x].push(pid);
        }
    }
    // initial incumbent: all occupied slices of the best single axis
    let best = (0..shape.len())
        .map(|axis| {
            (0..shape[axis])
                .map(|i| offsets[axis] + i)
                .filter(|&id| !members[id].is_empty())
                .collect::<Vec<_>>()
        })
        .min_by_key(Vec::len)
        .unwrap_or_default();
    let max_cover = members.iter().map(Vec::len).max().unwrap_or(0);
    let mut search = Search {
        points: &points,
        members,
        slice_of,
        offsets,
        best,
        max_cover,
    };
    let mut covered = vec![0u32; points.len()];
    search.run(&mut covered, &mut Vec::new(), points.len());
    let mut slices: Vec<(usize, usize)> = search.best.iter().map(|&id| search.slice_of[id]).collect();
    slices.sort_unstable();
    SliceCover {
        count: slices.len(),
        slices,
    }
}

/// One term per slice of the cover; each support point goes to the first slice
/// (in cover order) that contains it.
pub fn cover_decomposition(t: &Tensor, cover: &SliceCover) -> Result<SliceDecomposition> {
    let f = t.field();
    let shape = t.shape();
    let mut remaining = t.as_array().clone();
    let mut terms = Vec::with_capacity(cover.count);
    for &(axis, index) in &cover.slices {
        let mut other = shape.to_vec();
        other.remove(axis);
        let mut v = DenseArray::zeros(f, other);
        let idxs: Vec<Vec<usize>> = remaining.indices().filter(|i| i[axis] == index).collect();
        for idx in idxs {
            let val = remaining.get(&idx);
            if val == 0 {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(axis);
            v.set(&rest, val);
            remaining.set(&idx, 0);
        }
        let mut u = vec![0u32; shape[axis]];
        u[index] = 1;
        terms.push(SliceTerm::new(axis, u, v));
    }
    debug_assert!(remaining.is_zero());
    SliceDecomposition::new(f, shape.to_vec(), terms)
}
