//! Finite spaces, exact sphere functions and the sup metric.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::{self, format_rational, Rational};
use crate::{Error, Result};

/// A finite discrete point set. The label order fixed at construction is the
/// canonical order used for iteration, enumeration and serialization.
#[derive(Clone)]
pub struct SpaceModel {
    points: Arc<[String]>,
}

impl SpaceModel {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = labels.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::InvalidSpace("a space needs at least one point".into()));
        }
        let mut seen = points.clone();
        seen.sort();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpace(alloc::format!("duplicate label {:?}", w[0])));
        }
        Ok(SpaceModel { points: points.into() })
    }

    /// `n` points labelled with `prefix` followed by `1..=n`.
    pub fn numbered(prefix: &str, n: usize) -> Result<Self> {
        SpaceModel::new((1..=n).map(|i| alloc::format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, index: usize) -> &str {
        &self.points[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points.iter().position(|p| p == label).ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }
}

impl PartialEq for SpaceModel {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}

impl Eq for SpaceModel {}

impl fmt::Debug for SpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points.iter()).finish()
    }
}

/// Grid resolution `m`: grid values are `k/m` for `0 ≤ k ≤ m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    resolution: u32,
}

impl GridSpec {
    pub fn new(resolution: u32) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidGrid);
        }
        Ok(GridSpec { resolution })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn value(&self, k: u32) -> Rational {
        Rational::new(k as i128, self.resolution as i128)
    }

    pub fn contains(&self, q: &Rational) -> bool {
        let scaled = q * Rational::from_integer(self.resolution as i128);
        scaled.is_integer() && *scaled.numer() >= 0 && *scaled.numer() <= self.resolution as i128
    }

    /// `(m+1)^n − m^n`, the number of grid sphere functions on `n` points.
    /// `None` on overflow.
    pub fn sphere_size(&self, n: usize) -> Option<usize> {
        let n = u32::try_from(n).ok()?;
        let m = self.resolution as usize;
        let all = (m + 1).checked_pow(n)?;
        let below = m.checked_pow(n)?;
        Some(all - below)
    }
}

/// `true` iff every value lies in `[0, 1]` and the maximum is exactly `1`.
pub fn is_sphere_member(space: &SpaceModel, values: &[Rational]) -> bool {
    values.len() == space.len()
        && values.iter().all(|v| *v >= rational::zero() && *v <= rational::one())
        && values.iter().any(|v| *v == rational::one())
}

/// An element of the positive unit sphere: `[0, 1]`-valued with sup norm 1.
#[derive(Clone, PartialEq, Eq)]
pub struct SphereFn {
    space: SpaceModel,
    values: Vec<Rational>,
}

impl SphereFn {
    pub fn new(space: &SpaceModel, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        if !is_sphere_member(space, &values) {
            return Err(Error::NotOnSphere);
        }
        Ok(SphereFn { space: space.clone(), values })
    }

    /// Builds from `(numerator, denominator)` pairs; handy in tests.
    pub fn from_ratios(space: &SpaceModel, values: &[(i64, i64)]) -> Result<Self> {
        SphereFn::new(space, values.iter().map(|&(n, d)| rational::ratio(n, d)).collect())
    }

    /// The constant function `1`.
    pub fn constant_one(space: &SpaceModel) -> Self {
        SphereFn { space: space.clone(), values: vec![rational::one(); space.len()] }
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn value_at(&self, label: &str) -> Result<&Rational> {
        Ok(&self.values[self.space.index_of(label)?])
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    fn same_space(&self, other: &SphereFn) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl fmt::Debug for SphereFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SphereFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if v.is_integer() {
                write!(f, "{}", v.numer())?;
            } else {
                f.write_str(&format_rational(v))?;
            }
        }
        f.write_str(")")
    }
}

/// Sup norm of a raw rational-valued function.
pub fn sup_norm(values: &[Rational]) -> Rational {
    values.iter().map(rational::abs).max().unwrap_or_else(rational::zero)
}

/// `max_t |f(t) − g(t)|`, exact.
pub fn sup_distance(f: &SphereFn, g: &SphereFn) -> Result<Rational> {
    f.same_space(g)?;
    Ok(raw_distance(&f.values, &g.values))
}

pub(crate) fn raw_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| rational::abs(&(x - y))).max().unwrap_or_else(rational::zero)
}

/// Every function with values in `{k/m}` and maximum `1`, in lexicographic
/// order over the canonical point order (first point most significant).
pub fn enumerate_grid_sphere(space: &SpaceModel, grid: GridSpec) -> Vec<SphereFn> {
    let n = space.len();
    let m = grid.resolution();
    let levels: Vec<Rational> = (0..=m).map(|k| grid.value(k)).collect();
    let mut digits = vec![0u32; n];
    let mut out = Vec::new();
    loop {
        if digits.contains(&m) {
            out.push(SphereFn { space: space.clone(), values: digits.iter().map(|&k| levels[k as usize]).collect() });
        }
        // odometer, last point fastest
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if digits[i] < m {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
    }
}

/// The grid sphere together with an index from values to enumeration
/// position.
#[derive(Clone, Debug)]
pub struct GridSphere {
    space: SpaceModel,
    grid: GridSpec,
    fns: Vec<SphereFn>,
    index: BTreeMap<Vec<Rational>, usize>,
}

impl GridSphere {
    pub fn new(space: &SpaceModel, grid: GridSpec) -> Self {
        let fns = enumerate_grid_sphere(space, grid);
        let index = fns.iter().enumerate().map(|(i, f)| (f.values.clone(), i)).collect();
        GridSphere { space: space.clone(), grid, fns, index }
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.fns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fns.is_empty()
    }

    pub fn functions(&self) -> &[SphereFn] {
        &self.fns
    }

    pub fn get(&self, index: usize) -> &SphereFn {
        &self.fns[index]
    }

    pub fn position(&self, f: &SphereFn) -> Option<usize> {
        if f.space != self.space {
            return None;
        }
        self.position_of_values(&f.values)
    }

    pub fn position_of_values(&self, values: &[Rational]) -> Option<usize> {
        self.index.get(values).copied()
    }
}

/// Pointwise mean. The inputs must share a maximum point, otherwise the mean
/// falls below the sphere and `NotOnSphere` is returned.
pub fn average_functions(fs: &[SphereFn]) -> Result<SphereFn> {
    let first = fs.first().ok_or(Error::EmptyInput)?;
    for f in &fs[1..] {
        first.same_space(f)?;
    }
    let count = Rational::from_integer(fs.len() as i128);
    let values = (0..first.space.len()).map(|t| fs.iter().map(|f| f.values[t]).sum::<Rational>() / count).collect();
    SphereFn::new(&first.space, values)
}

/// Pointwise product, rejected when the factors have no common peak.
pub fn pointwise_product(f: &SphereFn, g: &SphereFn) -> Result<SphereFn> {
    f.same_space(g)?;
    let values = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    SphereFn::new(&f.space, values)
}

/// Raw values `v + r·u`. Sphere membership of the result is not asserted.
pub fn affine_lift(v: &SphereFn, r: &Rational, u: &SphereFn) -> Result<Vec<Rational>> {
    v.same_space(u)?;
    Ok(v.values.iter().zip(&u.values).map(|(a, b)| a + r * b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn two() -> SpaceModel {
        SpaceModel::numbered("p", 2).unwrap()
    }

    fn sf(space: &SpaceModel, v: &[(i64, i64)]) -> SphereFn {
        SphereFn::from_ratios(space, v).unwrap()
    }

    #[test]
    fn space_rejects_empty_and_duplicates() {
        assert!(SpaceModel::new(Vec::<String>::new()).is_err());
        assert!(SpaceModel::new(["a", "b", "a"]).is_err());
        assert_eq!(SpaceModel::new(["b", "a"]).unwrap().labels(), ["b", "a"]);
    }

    #[test]
    fn sup_distance_examples() {
        let s = two();
        assert_eq!(sup_distance(&sf(&s, &[(1, 1), (0, 1)]), &sf(&s, &[(0, 1), (1, 1)])).unwrap(), int(1));
        let f = sf(&s, &[(1, 1), (1, 2)]);
        assert_eq!(sup_distance(&f, &f).unwrap(), int(0));
        assert_eq!(sup_distance(&f, &sf(&s, &[(1, 2), (1, 1)])).unwrap(), ratio(1, 2));
    }

    #[test]
    fn sup_distance_space_mismatch() {
        let a = SphereFn::constant_one(&two());
        let b = SphereFn::constant_one(&SpaceModel::numbered("q", 2).unwrap());
        assert_eq!(sup_distance(&a, &b), Err(Error::SpaceMismatch));
    }

    #[test]
    fn sphere_membership() {
        let s = two();
        assert!(is_sphere_member(&s, &[int(1), ratio(1, 2)]));
        assert!(!is_sphere_member(&s, &[ratio(1, 2), ratio(1, 2)]));
        assert!(!is_sphere_member(&s, &[int(1), ratio(3, 2)]));
        assert!(!is_sphere_member(&s, &[int(1), ratio(-1, 2)]));
        assert!(!is_sphere_member(&s, &[int(1)]));
    }

    #[test]
    fn grid_enumeration_small_cases() {
        let one = SpaceModel::numbered("p", 1).unwrap();
        let fs = enumerate_grid_sphere(&one, GridSpec::new(3).unwrap());
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0], SphereFn::constant_one(&one));

        let s = two();
        let m1 = enumerate_grid_sphere(&s, GridSpec::new(1).unwrap());
        assert_eq!(m1, [sf(&s, &[(0, 1), (1, 1)]), sf(&s, &[(1, 1), (0, 1)]), sf(&s, &[(1, 1), (1, 1)])]);

        let m2 = enumerate_grid_sphere(&s, GridSpec::new(2).unwrap());
        let expected = [
            sf(&s, &[(0, 1), (1, 1)]),
            sf(&s, &[(1, 2), (1, 1)]),
            sf(&s, &[(1, 1), (0, 1)]),
            sf(&s, &[(1, 1), (1, 2)]),
            sf(&s, &[(1, 1), (1, 1)]),
        ];
        assert_eq!(m2, expected);
    }

    #[test]
    fn grid_count_formula() {
        for n in 1..=4 {
            let s = SpaceModel::numbered("p", n).unwrap();
            for m in 1..=4 {
                let g = GridSpec::new(m).unwrap();
                assert_eq!(enumerate_grid_sphere(&s, g).len(), g.sphere_size(n).unwrap());
            }
        }
        assert!(GridSpec::new(0).is_err());
    }

    #[test]
    fn grid_membership() {
        let g = GridSpec::new(4).unwrap();
        assert!(g.contains(&ratio(1, 2)));
        assert!(!g.contains(&ratio(1, 3)));
        assert!(!g.contains(&ratio(5, 4)));
        assert!(!g.contains(&ratio(-1, 4)));
    }

    #[test]
    fn average_examples() {
        let s = two();
        let avg = average_functions(&[sf(&s, &[(1, 1), (0, 1)]), sf(&s, &[(1, 1), (1, 1)])]).unwrap();
        assert_eq!(avg, sf(&s, &[(1, 1), (1, 2)]));
        let f = sf(&s, &[(1, 1), (1, 2)]);
        assert_eq!(average_functions(core::slice::from_ref(&f)).unwrap(), f);

        let s3 = SpaceModel::numbered("p", 3).unwrap();
        let avg = average_functions(&[sf(&s3, &[(1, 1), (1, 2), (0, 1)]), sf(&s3, &[(1, 1), (0, 1), (1, 2)])]).unwrap();
        assert_eq!(avg, sf(&s3, &[(1, 1), (1, 4), (1, 4)]));
    }

    #[test]
    fn average_rejects_disjoint_peaks() {
        let s = two();
        let r = average_functions(&[sf(&s, &[(1, 1), (0, 1)]), sf(&s, &[(0, 1), (1, 1)])]);
        assert_eq!(r, Err(Error::NotOnSphere));
        assert_eq!(average_functions(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn product_examples() {
        let s = two();
        let f = sf(&s, &[(1, 1), (1, 2)]);
        assert_eq!(pointwise_product(&f, &SphereFn::constant_one(&s)).unwrap(), f);
        assert_eq!(pointwise_product(&f, &sf(&s, &[(1, 1), (0, 1)])).unwrap(), sf(&s, &[(1, 1), (0, 1)]));
        let s3 = SpaceModel::numbered("p", 3).unwrap();
        let p = pointwise_product(&sf(&s3, &[(1, 1), (1, 2), (1, 2)]), &sf(&s3, &[(1, 1), (0, 1), (1, 1)])).unwrap();
        assert_eq!(p, sf(&s3, &[(1, 1), (0, 1), (1, 2)]));
        let bad = pointwise_product(&sf(&s, &[(1, 1), (0, 1)]), &sf(&s, &[(0, 1), (1, 1)]));
        assert_eq!(bad, Err(Error::NotOnSphere));
    }

    #[test]
    fn affine_lift_examples() {
        let s = two();
        let u = sf(&s, &[(1, 1), (0, 1)]);
        let v = sf(&s, &[(1, 2), (1, 1)]);
        assert_eq!(affine_lift(&v, &ratio(1, 2), &u).unwrap(), [int(1), int(1)]);
        assert_eq!(affine_lift(&v, &int(0), &u).unwrap(), v.values());
        let v = sf(&s, &[(1, 4), (1, 1)]);
        assert_eq!(affine_lift(&v, &ratio(3, 4), &u).unwrap(), [int(1), int(1)]);
    }

    #[test]
    fn display_is_compact() {
        let s = two();
        assert_eq!(alloc::format!("{}", sf(&s, &[(1, 1), (1, 2)])), "(1, 1/2)");
    }
}
