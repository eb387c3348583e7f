//! Peak families `P(t) = { h : h(t) = 1 }` restricted to a grid.

use alloc::vec::Vec;

use crate::lattice::{enumerate_grid_sphere, GridSpec, SpaceModel, SphereFn};
use crate::rational;
use crate::setcalc::{max_set, PointSet};
use crate::{Error, Result};

/// Grid sphere functions peaking at `point`, in canonical order.
/// There are `(m+1)^(n−1)` of them.
pub fn peak_family(space: &SpaceModel, point: usize, grid: GridSpec) -> Result<Vec<SphereFn>> {
    check_point(space, point)?;
    Ok(enumerate_grid_sphere(space, grid).into_iter().filter(|f| *f.value(point) == rational::one()).collect())
}

/// Whether `P(t0) ⊆ P(t1)` on the grid. Holds only for `t0 = t1`, since the
/// two-valued function `1` at `t0` and `0` elsewhere is always a grid point.
pub fn peak_separation_check(space: &SpaceModel, t0: usize, t1: usize, grid: GridSpec) -> Result<bool> {
    check_point(space, t1)?;
    Ok(peak_family(space, t0, grid)?.iter().all(|f| *f.value(t1) == rational::one()))
}

/// `⋂ M(f)` over a nonempty family.
pub fn intersect_max_sets(fns: &[SphereFn]) -> Result<PointSet> {
    let (first, rest) = fns.split_first().ok_or(Error::EmptyInput)?;
    let mut acc = max_set(first);
    for f in rest {
        if f.space() != first.space() {
            return Err(Error::SpaceMismatch);
        }
        acc = acc.intersection(&max_set(f));
    }
    Ok(acc)
}

fn check_point(space: &SpaceModel, point: usize) -> Result<()> {
    if point < space.len() {
        Ok(())
    } else {
        Err(Error::UnknownPoint(alloc::format!("#{point}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> SpaceModel {
        SpaceModel::numbered("p", n).unwrap()
    }

    fn grid(m: u32) -> GridSpec {
        GridSpec::new(m).unwrap()
    }

    fn sf(s: &SpaceModel, v: &[(i64, i64)]) -> SphereFn {
        SphereFn::from_ratios(s, v).unwrap()
    }

    #[test]
    fn family_examples() {
        let s = space(2);
        assert_eq!(peak_family(&s, 0, grid(1)).unwrap(), [sf(&s, &[(1, 1), (0, 1)]), sf(&s, &[(1, 1), (1, 1)])]);
        let one = space(1);
        assert_eq!(peak_family(&one, 0, grid(4)).unwrap(), [SphereFn::constant_one(&one)]);
        assert_eq!(
            peak_family(&s, 0, grid(2)).unwrap(),
            [sf(&s, &[(1, 1), (0, 1)]), sf(&s, &[(1, 1), (1, 2)]), sf(&s, &[(1, 1), (1, 1)])]
        );
        assert!(peak_family(&s, 2, grid(1)).is_err());
    }

    #[test]
    fn family_counts() {
        for n in 1..=4usize {
            let s = space(n);
            for m in 1..=3u32 {
                let expected = (m as usize + 1).pow(n as u32 - 1);
                for t in 0..n {
                    assert_eq!(peak_family(&s, t, grid(m)).unwrap().len(), expected);
                }
            }
        }
    }

    #[test]
    fn separation_examples() {
        let s2 = space(2);
        assert!(peak_separation_check(&s2, 1, 1, grid(1)).unwrap());
        assert!(!peak_separation_check(&s2, 0, 1, grid(1)).unwrap());
        assert!(!peak_separation_check(&space(3), 0, 2, grid(2)).unwrap());
        assert!(peak_separation_check(&s2, 0, 5, grid(1)).is_err());
    }

    #[test]
    fn intersection_examples() {
        let s = space(2);
        let a = sf(&s, &[(1, 1), (1, 2)]);
        let got = intersect_max_sets(&[a.clone(), SphereFn::constant_one(&s)]).unwrap();
        assert_eq!(got.indices(), [0]);
        let got = intersect_max_sets(&[sf(&s, &[(1, 1), (0, 1)]), sf(&s, &[(0, 1), (1, 1)])]).unwrap();
        assert!(got.is_empty());
        assert_eq!(intersect_max_sets(core::slice::from_ref(&a)).unwrap(), max_set(&a));
        assert_eq!(intersect_max_sets(&[]), Err(Error::EmptyInput));
    }
}
