//! The peak-lifting witness and phase-isometry checks.
//!
//! Given `v` on the sphere and a point `y0` with `v(y0) < 1`, put
//! `r = 1 − v(y0)` and sort the other points by their deviation
//! `|v(y) − v(y0)|`: the outer set `Y0` (deviation at least `r/4`), the
//! closed dyadic bands `Yn` (deviation in `[r/2^(n+2), r/2^(n+1)]`) and the
//! residual where `v` equals `v(y0)`. With `un = 1` except `un = 0` on
//! `Y0 ∪ Yn`, the series `u0 = Σ un/2^n` peaks at `y0` and
//! `w = v + r·u0` stays on the sphere with `w(y0) = 1`.
//!
//! On a finite space only finitely many bands are nonempty, so every `un`
//! past the last nonempty band is the same function and the tail of the
//! series collapses to a single exact term.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::extraction::SphereMap;
use crate::lattice::{self, sup_norm, SpaceModel, SphereFn};
use crate::rational::{self, inv_pow2, Rational};
use crate::report::{Check, Evidence, VerificationReport};
use crate::setcalc::PointSet;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPartition {
    pub base: usize,
    /// `r = 1 − v(y0) > 0`.
    pub radius: Rational,
    /// `Y0`: deviation at least `r/4`.
    pub outer: PointSet,
    /// Nonempty bands `(n, Yn)`, increasing in `n`. Adjacent bands share
    /// their boundary deviation `r/2^(n+1)`.
    pub bands: Vec<(u32, PointSet)>,
    /// Points with zero deviation, `y0` included.
    pub residual: PointSet,
}

impl LevelPartition {
    /// Index of the last nonempty band, 0 if there is none.
    pub fn last_band(&self) -> u32 {
        self.bands.last().map_or(0, |(n, _)| *n)
    }

    pub fn band(&self, n: u32) -> Option<&PointSet> {
        self.bands.iter().find(|(k, _)| *k == n).map(|(_, s)| s)
    }
}

fn check_point(space: &SpaceModel, y0: usize) -> Result<()> {
    if y0 < space.len() {
        Ok(())
    } else {
        Err(Error::UnknownPoint(alloc::format!("#{y0}")))
    }
}

pub fn partition_levels(v: &SphereFn, y0: usize) -> Result<LevelPartition> {
    let space = v.space();
    check_point(space, y0)?;
    let base = *v.value(y0);
    let r = rational::one() - base;
    if r == rational::zero() {
        return Err(Error::AlreadyPeaks(space.label(y0).into()));
    }
    let quarter = r * inv_pow2(2);
    let mut outer = Vec::new();
    let mut residual = Vec::new();
    let mut bands: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (y, value) in v.values().iter().enumerate() {
        let d = rational::abs(&(value - base));
        if d == rational::zero() {
            residual.push(y);
            continue;
        }
        if d >= quarter {
            outer.push(y);
        }
        // upper bound r/2^(n+1) shrinks with n, lower bound r/2^(n+2) too
        let mut n = 1;
        while r * inv_pow2(n + 1) >= d {
            if r * inv_pow2(n + 2) <= d {
                bands.entry(n).or_default().push(y);
            }
            n += 1;
        }
    }
    let set = |idx: Vec<usize>| PointSet::from_indices(space, idx).expect("indices from the space");
    Ok(LevelPartition {
        base: y0,
        radius: r,
        outer: set(outer),
        bands: bands.into_iter().map(|(n, idx)| (n, set(idx))).collect(),
        residual: set(residual),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeakLift {
    pub partition: LevelPartition,
    /// Peaks at `y0` with sup norm 1 and vanishes on `Y0`.
    pub u0: SphereFn,
    /// `v + r·u0`, raw values.
    pub w: Vec<Rational>,
}

/// Builds `u0` and the lifted `w = v + r·u0` for `v(y0) < 1`.
pub fn peak_lift(v: &SphereFn, y0: usize) -> Result<PeakLift> {
    let partition = partition_levels(v, y0)?;
    let space = v.space();
    let last = partition.last_band();
    let component = |n: Option<u32>| -> Vec<Rational> {
        (0..space.len())
            .map(|y| {
                let zeroed =
                    partition.outer.contains(y) || n.is_some_and(|n| partition.band(n).is_some_and(|b| b.contains(y)));
                if zeroed {
                    rational::zero()
                } else {
                    rational::one()
                }
            })
            .collect()
    };
    // Σ_{n>last} 2^-n = 2^-last
    let mut u0: Vec<Rational> = component(None).into_iter().map(|t| t * inv_pow2(last)).collect();
    for n in 1..=last {
        let weight = inv_pow2(n);
        for (acc, t) in u0.iter_mut().zip(component(Some(n))) {
            *acc += t * weight;
        }
    }
    let u0 = SphereFn::new(space, u0)?;
    let w = lattice::affine_lift(v, &partition.radius, &u0)?;
    Ok(PeakLift { partition, u0, w })
}

fn sum_norm(a: &[Rational], b: &[Rational]) -> Rational {
    sup_norm(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
}

fn diff_norm(a: &[Rational], b: &[Rational]) -> Rational {
    sup_norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

fn norm_pair(a: &[Rational], b: &[Rational]) -> [Rational; 2] {
    let mut pair = [sum_norm(a, b), diff_norm(a, b)];
    pair.sort();
    pair
}

/// `{‖T(f)+T(g)‖, ‖T(f)−T(g)‖} = {‖f+g‖, ‖f−g‖}`.
pub fn phase_condition_check(t: &SphereMap, f: &SphereFn, g: &SphereFn) -> Result<bool> {
    let (tf, tg) = (t.image(f)?, t.image(g)?);
    Ok(norm_pair(tf.values(), tg.values()) == norm_pair(f.values(), g.values()))
}

fn phase_holds_at(t: &SphereMap, i: usize, j: usize) -> bool {
    let (f, g) = (t.domain().get(i), t.domain().get(j));
    let (tf, tg) = (t.image_at(i), t.image_at(j));
    norm_pair(tf.values(), tg.values()) == norm_pair(f.values(), g.values())
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

fn first_phase_violation(t: &SphereMap) -> Option<(usize, usize)> {
    all_pairs(t.len()).find(|&(i, j)| !phase_holds_at(t, i, j))
}

fn pair_evidence(t: &SphereMap, i: usize, j: usize) -> Evidence {
    let (f, g) = (t.domain().get(i), t.domain().get(j));
    let (tf, tg) = (t.image_at(i), t.image_at(j));
    Evidence::record([
        ("f", Evidence::Function(f.clone())),
        ("g", Evidence::Function(g.clone())),
        ("t_f", Evidence::Function(tf.clone())),
        ("t_g", Evidence::Function(tg.clone())),
        ("norm_sum", Evidence::Number(sum_norm(f.values(), g.values()))),
        ("norm_diff", Evidence::Number(diff_norm(f.values(), g.values()))),
        ("image_norm_sum", Evidence::Number(sum_norm(tf.values(), tg.values()))),
        ("image_norm_diff", Evidence::Number(diff_norm(tf.values(), tg.values()))),
    ])
}

pub const PHASE_CONDITION: &str = "phase-condition";
pub const PHASE_POSITIVITY: &str = "phase-positivity";
pub const PHASE_ISOMETRY: &str = "phase-implies-isometry";
pub const PHASE_MIN_IDENTITY: &str = "phase-min-identity";

/// The phase condition over every pair of grid functions; fails with the
/// first violating pair in canonical order.
pub fn check_phase_condition(t: &SphereMap) -> Check {
    Check::from_violation(PHASE_CONDITION, first_phase_violation(t).map(|(i, j)| pair_evidence(t, i, j)))
}

/// Three exhaustive sub-checks:
///
/// * positivity: `‖f−g‖ ≤ ‖f+g‖` for all pairs, in the domain and among
///   the images;
/// * if the phase condition holds on every pair, `T` preserves distances;
/// * under the same hypothesis,
///   `‖T(f)−T(g)‖ = min{‖f+g‖, ‖f−g‖} = ‖f−g‖`.
///
/// The last two are skipped when the hypothesis fails.
pub fn phase_implies_isometry_check(t: &SphereMap) -> VerificationReport {
    let mut report = VerificationReport::new();
    let n = t.len();

    let positivity = all_pairs(n).find_map(|(i, j)| {
        let (f, g) = (t.domain().get(i), t.domain().get(j));
        if diff_norm(f.values(), g.values()) > sum_norm(f.values(), g.values()) {
            return Some(pair_evidence(t, i, j));
        }
        let (tf, tg) = (t.image_at(i), t.image_at(j));
        if diff_norm(tf.values(), tg.values()) > sum_norm(tf.values(), tg.values()) {
            return Some(pair_evidence(t, i, j));
        }
        None
    });
    report.push(Check::from_violation(PHASE_POSITIVITY, positivity));

    if let Some((i, j)) = first_phase_violation(t) {
        let reason = alloc::format!("phase condition fails for {} and {}", t.domain().get(i), t.domain().get(j));
        report.push(Check::skipped(PHASE_ISOMETRY, reason.clone()));
        report.push(Check::skipped(PHASE_MIN_IDENTITY, reason));
        return report;
    }

    let isometry = all_pairs(n).find_map(|(i, j)| {
        let (f, g) = (t.domain().get(i), t.domain().get(j));
        let (tf, tg) = (t.image_at(i), t.image_at(j));
        (diff_norm(tf.values(), tg.values()) != diff_norm(f.values(), g.values())).then(|| pair_evidence(t, i, j))
    });
    report.push(Check::from_violation(PHASE_ISOMETRY, isometry));

    let min_identity = all_pairs(n).find_map(|(i, j)| {
        let (f, g) = (t.domain().get(i), t.domain().get(j));
        let (tf, tg) = (t.image_at(i), t.image_at(j));
        let lhs = diff_norm(tf.values(), tg.values());
        let middle = core::cmp::min(sum_norm(f.values(), g.values()), diff_norm(f.values(), g.values()));
        let rhs = diff_norm(f.values(), g.values());
        (lhs != middle || middle != rhs).then(|| pair_evidence(t, i, j))
    });
    report.push(Check::from_violation(PHASE_MIN_IDENTITY, min_identity));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::{composition_operator, PointMap};
    use crate::lattice::GridSpec;
    use crate::rational::{int, ratio};
    use crate::Status;

    fn space(n: usize) -> SpaceModel {
        SpaceModel::numbered("p", n).unwrap()
    }

    fn sf(s: &SpaceModel, v: &[(i64, i64)]) -> SphereFn {
        SphereFn::from_ratios(s, v).unwrap()
    }

    fn labels(p: &PointSet) -> Vec<&str> {
        p.labels().collect()
    }

    #[test]
    fn partition_examples() {
        let s2 = space(2);
        let p = partition_levels(&sf(&s2, &[(1, 2), (1, 1)]), 0).unwrap();
        assert_eq!(p.radius, ratio(1, 2));
        assert_eq!(labels(&p.outer), ["p2"]);
        assert!(p.bands.is_empty());

        let s3 = space(3);
        let p = partition_levels(&sf(&s3, &[(7, 8), (1, 1), (13, 16)]), 0).unwrap();
        assert_eq!(p.radius, ratio(1, 8));
        assert_eq!(labels(&p.outer), ["p2", "p3"]);
        assert!(p.bands.is_empty());

        let p = partition_levels(&sf(&s2, &[(31, 32), (1, 1)]), 0).unwrap();
        assert_eq!(p.radius, ratio(1, 32));
        assert_eq!(labels(&p.outer), ["p2"]);
        assert_eq!(labels(&p.residual), ["p1"]);
    }

    #[test]
    fn boundary_deviation_sits_in_two_bands() {
        // r = 1/2, deviation 1/16 = r/8 is the shared edge of Y1 and Y2
        let s3 = space(3);
        let p = partition_levels(&sf(&s3, &[(1, 2), (1, 1), (9, 16)]), 0).unwrap();
        assert_eq!(p.bands.iter().map(|(n, _)| *n).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(labels(p.band(1).unwrap()), ["p3"]);
        assert_eq!(labels(p.band(2).unwrap()), ["p3"]);
        assert_eq!(p.last_band(), 2);
    }

    #[test]
    fn partition_rejects_peak_point() {
        let s2 = space(2);
        let v = sf(&s2, &[(1, 2), (1, 1)]);
        assert_eq!(partition_levels(&v, 1), Err(Error::AlreadyPeaks("p2".into())));
        assert!(peak_lift(&v, 1).is_err());
        assert!(peak_lift(&v, 7).is_err());
    }

    #[test]
    fn lift_examples() {
        let s2 = space(2);
        let lift = peak_lift(&sf(&s2, &[(1, 2), (1, 1)]), 0).unwrap();
        assert_eq!(lift.u0, sf(&s2, &[(1, 1), (0, 1)]));
        assert_eq!(lift.w, [int(1), int(1)]);

        let s3 = space(3);
        let lift = peak_lift(&sf(&s3, &[(1, 2), (1, 1), (1, 2)]), 0).unwrap();
        assert_eq!(lift.u0, sf(&s3, &[(1, 1), (0, 1), (1, 1)]));
        assert_eq!(lift.w, [int(1), int(1), int(1)]);

        // bands 1 and 2 at p3: u0(p3) = 0/2 + 0/4 + 1/4
        let lift = peak_lift(&sf(&s3, &[(1, 2), (1, 1), (9, 16)]), 0).unwrap();
        assert_eq!(lift.u0, sf(&s3, &[(1, 1), (0, 1), (1, 4)]));
        assert_eq!(lift.w, [int(1), int(1), ratio(11, 16)]);
    }

    fn phase_violator() -> SphereMap {
        let s = space(2);
        let g = GridSpec::new(1).unwrap();
        let entries = alloc::vec![
            (sf(&s, &[(1, 1), (0, 1)]), sf(&s, &[(1, 1), (0, 1)])),
            (sf(&s, &[(0, 1), (1, 1)]), sf(&s, &[(1, 1), (1, 1)])),
            (sf(&s, &[(1, 1), (1, 1)]), sf(&s, &[(0, 1), (1, 1)])),
        ];
        SphereMap::from_entries(&s, &s, g, entries).unwrap()
    }

    #[test]
    fn phase_condition_examples() {
        let s = space(2);
        let g = GridSpec::new(2).unwrap();
        let id = SphereMap::identity(&s, g);
        let fns = id.domain().functions().to_vec();
        let sigma = PointMap::new(&s, &s, alloc::vec![1, 0]).unwrap();
        let comp = composition_operator(&sigma, g);
        for f in &fns {
            for h in &fns {
                assert!(phase_condition_check(&id, f, h).unwrap());
                assert!(phase_condition_check(&comp, f, h).unwrap());
            }
        }

        let t = phase_violator();
        let f = sf(&s, &[(1, 1), (0, 1)]);
        let h = sf(&s, &[(0, 1), (1, 1)]);
        assert!(!phase_condition_check(&t, &f, &h).unwrap());
        assert!(phase_condition_check(&t, &f, &sf(&s, &[(1, 1), (1, 2)])).is_err());
    }

    #[test]
    fn phase_violator_counterexample() {
        let t = phase_violator();
        let check = check_phase_condition(&t);
        assert_eq!(check.status, Status::Fail);
        let Some(Evidence::Record(fields)) = &check.counterexample else { panic!() };
        let s = space(2);
        assert_eq!(fields[0].1, Evidence::Function(sf(&s, &[(0, 1), (1, 1)])));
        assert_eq!(fields[1].1, Evidence::Function(sf(&s, &[(1, 1), (0, 1)])));

        let report = phase_implies_isometry_check(&t);
        assert_eq!(report.check(PHASE_POSITIVITY).unwrap().status, Status::Pass);
        assert_eq!(report.check(PHASE_ISOMETRY).unwrap().status, Status::Skipped);
        assert_eq!(report.check(PHASE_MIN_IDENTITY).unwrap().status, Status::Skipped);
    }

    #[test]
    fn phase_suite_passes_for_composition() {
        let s = space(3);
        let g = GridSpec::new(2).unwrap();
        let sigma = PointMap::new(&s, &s, alloc::vec![2, 0, 1]).unwrap();
        let report = phase_implies_isometry_check(&composition_operator(&sigma, g));
        assert_eq!(report.summary().pass, 3, "{report:?}");
    }
}
