//! Exhaustive census of the self-isometries of a small grid sphere.
//!
//! Every distance-preserving bijection of the grid sphere is found by a
//! backtracking search and then classified: either it is the composition
//! operator of some point permutation, or it is exotic. Exotic members are
//! data, not errors; the grid sphere is only a finite sample of the full
//! sphere.

use alloc::vec::Vec;

use crate::extraction::{composition_operator, PointMap, SphereMap};
use crate::lattice::{raw_distance, GridSpec, GridSphere, SpaceModel};
use crate::perm;
use crate::rational::Rational;
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tag {
    /// `f ↦ f∘σ` for the given `σ` on the space.
    Induced(PointMap),
    Exotic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    /// Image index of each grid function, in canonical enumeration order.
    pub perm: Vec<usize>,
    pub tag: Tag,
}

#[derive(Clone, Debug)]
pub struct IsometryCensus {
    pub sphere: GridSphere,
    pub entries: Vec<CensusEntry>,
}

impl IsometryCensus {
    pub fn space(&self) -> &SpaceModel {
        self.sphere.space()
    }

    pub fn grid(&self) -> GridSpec {
        self.sphere.grid()
    }

    pub fn sphere_size(&self) -> usize {
        self.sphere.len()
    }

    pub fn induced_count(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e.tag, Tag::Induced(_))).count()
    }

    pub fn exotic_count(&self) -> usize {
        self.entries.len() - self.induced_count()
    }

    /// The census member as an oracle table.
    pub fn table(&self, entry: &CensusEntry) -> SphereMap {
        let images = entry.perm.iter().map(|&j| self.sphere.get(j).clone()).collect();
        SphereMap::from_images(self.space(), self.space(), self.grid(), images).expect("census tables are total")
    }

    /// Re-checks every pairwise distance of every member.
    pub fn members_preserve_distances(&self) -> bool {
        self.entries.iter().all(|e| preserves_distances(&self.sphere, &e.perm))
    }
}

pub fn preserves_distances(sphere: &GridSphere, perm: &[usize]) -> bool {
    let fns = sphere.functions();
    (0..fns.len()).all(|i| {
        (i + 1..fns.len()).all(|j| {
            raw_distance(fns[i].values(), fns[j].values()) == raw_distance(fns[perm[i]].values(), fns[perm[j]].values())
        })
    })
}

/// Backtracking search for distance-preserving bijections.
///
/// Distances are interned to small integers. A candidate image for a point
/// must carry the same multiset of distances to the whole sphere and the
/// same distances to every point assigned so far.
pub struct IsometrySearch {
    sphere: GridSphere,
    dist: Vec<Vec<u32>>,
    profile: Vec<Vec<u32>>,
}

impl IsometrySearch {
    pub fn new(space: &SpaceModel, grid: GridSpec, cap: usize) -> Result<Self> {
        let size = grid.sphere_size(space.len()).unwrap_or(usize::MAX);
        if size > cap {
            return Err(Error::InstanceTooLarge { size, cap });
        }
        let sphere = GridSphere::new(space, grid);
        let fns = sphere.functions();
        let raw: Vec<Vec<Rational>> =
            fns.iter().map(|f| fns.iter().map(|g| raw_distance(f.values(), g.values())).collect()).collect();
        let mut levels: Vec<Rational> = raw.iter().flatten().copied().collect();
        levels.sort();
        levels.dedup();
        let dist: Vec<Vec<u32>> = raw
            .iter()
            .map(|row| row.iter().map(|d| levels.binary_search(d).expect("interned") as u32).collect())
            .collect();
        let profile = dist
            .iter()
            .map(|row| {
                let mut p = row.clone();
                p.sort_unstable();
                p
            })
            .collect();
        Ok(IsometrySearch { sphere, dist, profile })
    }

    pub fn sphere(&self) -> &GridSphere {
        &self.sphere
    }

    /// Admissible images of the first grid function, ascending. The search
    /// tree splits cleanly at this level.
    pub fn first_level_candidates(&self) -> Vec<usize> {
        if self.sphere.is_empty() {
            return Vec::new();
        }
        (0..self.sphere.len()).filter(|&c| self.profile[c] == self.profile[0]).collect()
    }

    /// Every isometry sending function 0 to `first`, in lexicographic order.
    pub fn search_from(&self, first: usize) -> Vec<Vec<usize>> {
        let n = self.sphere.len();
        let mut found = Vec::new();
        if first >= n || self.profile[first] != self.profile[0] {
            return found;
        }
        let mut image = alloc::vec![usize::MAX; n];
        let mut used = alloc::vec![false; n];
        image[0] = first;
        used[first] = true;
        self.extend(1, &mut image, &mut used, &mut found);
        found
    }

    fn extend(&self, depth: usize, image: &mut Vec<usize>, used: &mut Vec<bool>, found: &mut Vec<Vec<usize>>) {
        let n = self.sphere.len();
        if depth == n {
            found.push(image.clone());
            return;
        }
        for c in 0..n {
            if used[c] || self.profile[c] != self.profile[depth] {
                continue;
            }
            if (0..depth).any(|k| self.dist[c][image[k]] != self.dist[depth][k]) {
                continue;
            }
            image[depth] = c;
            used[c] = true;
            self.extend(depth + 1, image, used, found);
            used[c] = false;
        }
        image[depth] = usize::MAX;
    }

    pub fn all(&self) -> Vec<Vec<usize>> {
        self.first_level_candidates().into_iter().flat_map(|c| self.search_from(c)).collect()
    }
}

/// Finds the point permutation inducing `perm`, if any.
pub fn classify(perm: &[usize], sphere: &GridSphere) -> Tag {
    let space = sphere.space();
    for candidate in perm::permutations(space.len()) {
        let sigma = PointMap::new(space, space, candidate).expect("permutation");
        let induced = sphere
            .functions()
            .iter()
            .enumerate()
            .all(|(i, f)| sphere.position_of_values(&sigma.pull_back(f.values())) == Some(perm[i]));
        if induced {
            return Tag::Induced(sigma);
        }
    }
    Tag::Exotic
}

/// Builds a census from isometries found by [`IsometrySearch`], classifying
/// each.
pub fn assemble_census(sphere: GridSphere, perms: Vec<Vec<usize>>) -> IsometryCensus {
    let entries = perms
        .into_iter()
        .map(|perm| {
            let tag = classify(&perm, &sphere);
            CensusEntry { perm, tag }
        })
        .collect();
    IsometryCensus { sphere, entries }
}

pub fn enumerate_self_isometries(space: &SpaceModel, grid: GridSpec, cap: usize) -> Result<IsometryCensus> {
    let search = IsometrySearch::new(space, grid, cap)?;
    let perms = search.all();
    Ok(assemble_census(search.sphere, perms))
}

/// The composition operator of `sigma` with the images of the listed table
/// entries exchanged, in order.
pub fn perturbed_oracle(sigma: &PointMap, grid: GridSpec, swaps: &[(usize, usize)]) -> Result<SphereMap> {
    let mut table = composition_operator(sigma, grid);
    for &(a, b) in swaps {
        table = table.with_swapped_images(a, b)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::check_isometry;
    use crate::Status;

    fn space(n: usize) -> SpaceModel {
        SpaceModel::numbered("p", n).unwrap()
    }

    fn grid(m: u32) -> GridSpec {
        GridSpec::new(m).unwrap()
    }

    #[test]
    fn five_point_sphere() {
        let census = enumerate_self_isometries(&space(2), grid(2), DEFAULT_CAP).unwrap();
        assert_eq!(census.sphere_size(), 5);
        assert_eq!(census.entries.len(), 2);
        assert_eq!(census.induced_count(), 2);
        assert_eq!(census.entries[0].perm, [0, 1, 2, 3, 4]);
        // reversal (0,1)↔(1,0), (1/2,1)↔(1,1/2), (1,1) fixed
        assert_eq!(census.entries[1].perm, [2, 3, 0, 1, 4]);
        let Tag::Induced(sigma) = &census.entries[1].tag else { panic!() };
        assert_eq!(sigma.assignment(), [1, 0]);
    }

    #[test]
    fn singleton_space() {
        for m in 1..=5 {
            let census = enumerate_self_isometries(&space(1), grid(m), DEFAULT_CAP).unwrap();
            assert_eq!(census.entries.len(), 1);
            assert_eq!(census.induced_count(), 1);
        }
    }

    #[test]
    fn three_point_sphere_has_exotic_members() {
        let census = enumerate_self_isometries(&space(2), grid(1), DEFAULT_CAP).unwrap();
        assert_eq!(census.entries.len(), 6);
        assert_eq!(census.induced_count(), 2);
        assert_eq!(census.exotic_count(), 4);
        assert!(census.members_preserve_distances());
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_self_isometries(&space(3), grid(2), DEFAULT_CAP).unwrap_err();
        assert_eq!(err, Error::InstanceTooLarge { size: 19, cap: 12 });
    }

    #[test]
    fn classify_identity() {
        let sphere = GridSphere::new(&space(3), grid(1));
        let id: Vec<usize> = (0..sphere.len()).collect();
        assert_eq!(classify(&id, &sphere), Tag::Induced(PointMap::identity(&space(3))));
    }

    #[test]
    fn perturbed_oracles() {
        let s = space(2);
        let sigma = PointMap::identity(&s);
        let g = grid(2);
        assert_eq!(perturbed_oracle(&sigma, g, &[]).unwrap().images(), composition_operator(&sigma, g).images());
        // (1,0) and (1,1/2) sit at distance 1/2 but their distances to (0,1) differ
        let bad = perturbed_oracle(&sigma, g, &[(2, 3)]).unwrap();
        assert_eq!(check_isometry(&bad).checks[0].status, Status::Fail);
        assert!(perturbed_oracle(&sigma, g, &[(0, 9)]).is_err());
    }
}
