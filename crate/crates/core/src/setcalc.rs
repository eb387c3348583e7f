//! Maximum sets, zero sets and the open unit balls `D(f)` on the sphere.
//!
//! `D(f) = { h on the sphere : ‖h − f‖ < 1 }`. Besides the metric definition
//! there is a purely set-theoretic description: `h ∈ D(f)` exactly when
//! `M(h) ∩ Z(f) = ∅ = Z(h) ∩ M(f)`. Both are implemented independently so
//! the equivalence can be checked exhaustively.

use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{self, GridSpec, GridSphere, SpaceModel, SphereFn};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// A subset of a space, members kept as sorted point indices.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    space: SpaceModel,
    members: Vec<usize>,
}

impl PointSet {
    pub fn from_indices(space: &SpaceModel, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = indices.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i >= space.len()) {
            return Err(Error::UnknownPoint(alloc::format!("#{bad}")));
        }
        members.sort_unstable();
        members.dedup();
        Ok(PointSet { space: space.clone(), members })
    }

    pub fn from_labels<'a>(space: &SpaceModel, labels: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let indices = labels.into_iter().map(|l| space.index_of(l)).collect::<Result<Vec<_>>>()?;
        PointSet::from_indices(space, indices)
    }

    pub fn empty(space: &SpaceModel) -> Self {
        PointSet { space: space.clone(), members: Vec::new() }
    }

    pub fn full(space: &SpaceModel) -> Self {
        PointSet { space: space.clone(), members: (0..space.len()).collect() }
    }

    fn where_value(f: &SphereFn, pred: impl Fn(&Rational) -> bool) -> Self {
        let members = f.values().iter().enumerate().filter(|(_, v)| pred(v)).map(|(i, _)| i).collect();
        PointSet { space: f.space().clone(), members }
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|&i| self.space.label(i))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let members = self.members.iter().copied().filter(|&i| other.contains(i)).collect();
        PointSet { space: self.space.clone(), members }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let members = self.members.iter().copied().filter(|&i| !other.contains(i)).collect();
        PointSet { space: self.space.clone(), members }
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        !self.members.iter().any(|&i| other.contains(i))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

/// `M(f)`: the points where `f` equals 1. Never empty.
pub fn max_set(f: &SphereFn) -> PointSet {
    PointSet::where_value(f, |v| *v == rational::one())
}

/// `Z(f)`: the points where `f` vanishes.
pub fn zero_set(f: &SphereFn) -> PointSet {
    PointSet::where_value(f, |v| *v == rational::zero())
}

/// `h ∈ D(f)` by the metric definition `‖h − f‖ < 1`.
pub fn in_d_by_distance(f: &SphereFn, h: &SphereFn) -> Result<bool> {
    Ok(lattice::sup_distance(h, f)? < rational::one())
}

/// `h ∈ D(f)` by the set criterion `M(h) ∩ Z(f) = ∅ = Z(h) ∩ M(f)`.
pub fn in_d_by_sets(f: &SphereFn, h: &SphereFn) -> Result<bool> {
    if f.space() != h.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(max_set(h).is_disjoint(&zero_set(f)) && zero_set(h).is_disjoint(&max_set(f)))
}

/// Decides `D(f) ⊆ D(g)` restricted to the grid sphere at `grid`.
pub fn d_subset_on_grid(f: &SphereFn, g: &SphereFn, grid: GridSpec) -> Result<bool> {
    if f.space() != g.space() {
        return Err(Error::SpaceMismatch);
    }
    let sphere = GridSphere::new(f.space(), grid);
    d_subset_within(f, g, &sphere)
}

/// As [`d_subset_on_grid`], reusing an already enumerated grid sphere.
pub fn d_subset_within(f: &SphereFn, g: &SphereFn, sphere: &GridSphere) -> Result<bool> {
    for h in sphere.functions() {
        if in_d_by_distance(f, h)? && !in_d_by_distance(g, h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A function in `D(f)` but not in `D(g)`, available whenever
/// `M(g) ⊄ M(f)`.
///
/// Takes the first `y0 ∈ M(g) \ M(f)`, sets `v0 = 1` everywhere except
/// `v0(y0) = 0`, and returns `w = v0·f`. Then `M(w) = M(f)` and
/// `y0 ∈ Z(w) ∩ M(g)`.
pub fn d_separating_witness(f: &SphereFn, g: &SphereFn) -> Result<SphereFn> {
    if f.space() != g.space() {
        return Err(Error::SpaceMismatch);
    }
    let candidates = max_set(g).difference(&max_set(f));
    let y0 = *candidates.indices().first().ok_or(Error::NoWitness)?;
    let mut v0 = SphereFn::constant_one(f.space()).into_values();
    v0[y0] = rational::zero();
    // v0 = 1 on M(f) because y0 ∉ M(f), so the product stays on the sphere
    let v0 = SphereFn::new(f.space(), v0)?;
    lattice::pointwise_product(&v0, f)
}
