//! Recovering the inducing point map from a black-box sphere isometry.
//!
//! Oracles are explicit finite tables over a grid sphere. For each domain
//! point `x` the images of the peak family `P(x)` are intersected through
//! their maximum sets; for a surjective isometry this leaves exactly one
//! point `τ(x)` of the codomain. The map `σ = τ⁻¹ : Y → X` then satisfies
//! `Φ(f)(y) = f(σ(y))` for every `f`, which is verified exhaustively.
//!
//! Direction convention: `σ` maps the codomain space `Y` to the domain
//! space `X`, and the composition operator of `σ` sends `f` on `X` to
//! `f∘σ` on `Y`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::lattice::{self, raw_distance, GridSpec, GridSphere, SpaceModel, SphereFn};
use crate::perm;
use crate::rational::{self, Rational};
use crate::report::{Check, Evidence, VerificationReport};
use crate::setcalc::{self, max_set, PointSet};
use crate::witness;
use crate::{Error, Result};

/// A bijection between the points of two spaces.
#[derive(Clone, PartialEq, Eq)]
pub struct PointMap {
    from: SpaceModel,
    to: SpaceModel,
    assignment: Vec<usize>,
}

impl PointMap {
    pub fn new(from: &SpaceModel, to: &SpaceModel, assignment: Vec<usize>) -> Result<Self> {
        if from.len() != to.len() || assignment.len() != from.len() {
            return Err(Error::NotABijection("spaces differ in size".into()));
        }
        if !perm::is_permutation(&assignment) {
            return Err(Error::NotABijection("assignment is not one-to-one".into()));
        }
        Ok(PointMap { from: from.clone(), to: to.clone(), assignment })
    }

    pub fn from_labels<'a>(
        from: &SpaceModel,
        to: &SpaceModel,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut assignment = alloc::vec![usize::MAX; from.len()];
        for (a, b) in pairs {
            let i = from.index_of(a)?;
            if assignment[i] != usize::MAX {
                return Err(Error::NotABijection(alloc::format!("{a:?} assigned twice")));
            }
            assignment[i] = to.index_of(b)?;
        }
        if let Some(i) = assignment.iter().position(|&j| j == usize::MAX) {
            return Err(Error::NotABijection(alloc::format!("{:?} unassigned", from.label(i))));
        }
        PointMap::new(from, to, assignment)
    }

    pub fn identity(space: &SpaceModel) -> Self {
        PointMap { from: space.clone(), to: space.clone(), assignment: (0..space.len()).collect() }
    }

    pub fn from_space(&self) -> &SpaceModel {
        &self.from
    }

    pub fn to_space(&self) -> &SpaceModel {
        &self.to
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, index: usize) -> usize {
        self.assignment[index]
    }

    pub fn apply_label(&self, label: &str) -> Result<&str> {
        Ok(self.to.label(self.assignment[self.from.index_of(label)?]))
    }

    pub fn inverse(&self) -> PointMap {
        PointMap { from: self.to.clone(), to: self.from.clone(), assignment: perm::inverse(&self.assignment) }
    }

    /// `(from label, to label)` pairs in the canonical order of `from`.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.assignment.iter().enumerate().map(|(i, &j)| (self.from.label(i), self.to.label(j)))
    }

    /// Pulls a function on `to` back to `from`: `(f∘self)(t) = f(self(t))`.
    pub fn pull_back(&self, values: &[Rational]) -> Vec<Rational> {
        self.assignment.iter().map(|&j| values[j]).collect()
    }
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// A finite oracle for a sphere map: one image per domain grid function.
#[derive(Clone, Debug)]
pub struct SphereMap {
    domain: GridSphere,
    codomain: GridSphere,
    images: Vec<SphereFn>,
    /// For bijective tables, the domain index of each codomain grid function.
    preimages: Option<Vec<usize>>,
}

impl SphereMap {
    /// Builds from images listed in the canonical order of the domain grid
    /// sphere.
    pub fn from_images(
        domain: &SpaceModel,
        codomain: &SpaceModel,
        grid: GridSpec,
        images: Vec<SphereFn>,
    ) -> Result<Self> {
        let domain = GridSphere::new(domain, grid);
        let codomain = GridSphere::new(codomain, grid);
        if images.len() != domain.len() {
            return Err(Error::InvalidTable(alloc::format!("expected {} images, got {}", domain.len(), images.len())));
        }
        if images.iter().any(|u| u.space() != codomain.space()) {
            return Err(Error::InvalidTable("image on the wrong space".into()));
        }
        let preimages = bijection_inverse(&codomain, &images);
        Ok(SphereMap { domain, codomain, images, preimages })
    }

    /// Builds from `(argument, image)` entries in any order. The table must
    /// be total on the domain grid sphere and list each argument once.
    pub fn from_entries(
        domain: &SpaceModel,
        codomain: &SpaceModel,
        grid: GridSpec,
        entries: Vec<(SphereFn, SphereFn)>,
    ) -> Result<Self> {
        let sphere = GridSphere::new(domain, grid);
        let mut slots: Vec<Option<SphereFn>> = alloc::vec![None; sphere.len()];
        for (f, u) in entries {
            let i = sphere
                .position(&f)
                .ok_or_else(|| Error::InvalidTable(alloc::format!("argument {f} is not a grid sphere function")))?;
            if slots[i].replace(u).is_some() {
                return Err(Error::InvalidTable(alloc::format!("argument {f} listed twice")));
            }
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(i, u)| u.ok_or_else(|| Error::InvalidTable(alloc::format!("no image for {}", sphere.get(i)))))
            .collect::<Result<Vec<_>>>()?;
        SphereMap::from_images(domain, codomain, grid, images)
    }

    pub fn identity(space: &SpaceModel, grid: GridSpec) -> Self {
        let images = lattice::enumerate_grid_sphere(space, grid);
        SphereMap::from_images(space, space, grid, images).expect("identity table is total")
    }

    pub fn domain(&self) -> &GridSphere {
        &self.domain
    }

    pub fn codomain(&self) -> &GridSphere {
        &self.codomain
    }

    pub fn domain_space(&self) -> &SpaceModel {
        self.domain.space()
    }

    pub fn codomain_space(&self) -> &SpaceModel {
        self.codomain.space()
    }

    pub fn grid(&self) -> GridSpec {
        self.domain.grid()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[SphereFn] {
        &self.images
    }

    pub fn image_at(&self, index: usize) -> &SphereFn {
        &self.images[index]
    }

    pub fn image(&self, f: &SphereFn) -> Result<&SphereFn> {
        let i = self.domain.position(f).ok_or_else(|| Error::OutsideDomain(f.clone()))?;
        Ok(&self.images[i])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&SphereFn, &SphereFn)> {
        self.domain.functions().iter().zip(&self.images)
    }

    /// Injective with image exactly the codomain grid sphere.
    pub fn is_bijective(&self) -> bool {
        self.preimages.is_some()
    }

    pub fn inverse(&self) -> Result<SphereMap> {
        let pre = self
            .preimages
            .as_ref()
            .ok_or_else(|| Error::NotABijection("table is not a bijection onto the codomain grid sphere".into()))?;
        let images = pre.iter().map(|&i| self.domain.get(i).clone()).collect();
        SphereMap::from_images(self.codomain.space(), self.domain.space(), self.grid(), images)
    }

    /// Exchanges the images of two table entries.
    pub fn with_swapped_images(&self, a: usize, b: usize) -> Result<SphereMap> {
        let size = self.images.len();
        for index in [a, b] {
            if index >= size {
                return Err(Error::InvalidSwap { index, size });
            }
        }
        let mut images = self.images.clone();
        images.swap(a, b);
        SphereMap::from_images(self.domain.space(), self.codomain.space(), self.grid(), images)
    }
}

fn bijection_inverse(codomain: &GridSphere, images: &[SphereFn]) -> Option<Vec<usize>> {
    if images.len() != codomain.len() {
        return None;
    }
    let mut pre = alloc::vec![usize::MAX; codomain.len()];
    for (i, u) in images.iter().enumerate() {
        let j = codomain.position(u)?;
        if pre[j] != usize::MAX {
            return None;
        }
        pre[j] = i;
    }
    Some(pre)
}

/// First pair `(i, j)`, `i < j`, with `i` in `rows`, whose distance the map
/// does not preserve.
pub fn find_isometry_violation(phi: &SphereMap, rows: Range<usize>) -> Option<(usize, usize)> {
    let dom = phi.domain.functions();
    let img = &phi.images;
    for i in rows {
        for j in i + 1..dom.len() {
            if raw_distance(dom[i].values(), dom[j].values()) != raw_distance(img[i].values(), img[j].values()) {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn isometry_counterexample(phi: &SphereMap, i: usize, j: usize) -> Evidence {
    let (f, g) = (phi.domain.get(i), phi.domain.get(j));
    let (u, v) = (&phi.images[i], &phi.images[j]);
    Evidence::record([
        ("f", Evidence::Function(f.clone())),
        ("g", Evidence::Function(g.clone())),
        ("phi_f", Evidence::Function(u.clone())),
        ("phi_g", Evidence::Function(v.clone())),
        ("distance", Evidence::Number(raw_distance(f.values(), g.values()))),
        ("image_distance", Evidence::Number(raw_distance(u.values(), v.values()))),
    ])
}

pub const ISOMETRY: &str = "isometry";

/// Passes iff every pair of grid functions keeps its sup distance.
pub fn check_isometry(phi: &SphereMap) -> VerificationReport {
    VerificationReport::single(isometry_check_from(phi, find_isometry_violation(phi, 0..phi.len())))
}

pub fn isometry_check_from(phi: &SphereMap, violation: Option<(usize, usize)>) -> Check {
    Check::from_violation(ISOMETRY, violation.map(|(i, j)| isometry_counterexample(phi, i, j)))
}

pub const D_PRESERVATION: &str = "d-set-preservation";

fn d_preservation_gate(phi: &SphereMap) -> Option<String> {
    if !phi.is_bijective() {
        Some("oracle is not a bijection onto the codomain grid sphere".into())
    } else if find_isometry_violation(phi, 0..phi.len()).is_some() {
        Some("oracle is not an isometry".into())
    } else {
        None
    }
}

fn d_preservation_violation(phi: &SphereMap, index: usize) -> Option<Evidence> {
    let f = phi.domain.get(index);
    let phi_f = &phi.images[index];
    // bijective, so the image of the domain grid is the whole codomain grid
    for (h, u) in phi.entries() {
        let in_domain_ball = setcalc::in_d_by_distance(f, h).expect("same space");
        let in_image_ball = setcalc::in_d_by_distance(phi_f, u).expect("same space");
        if in_domain_ball != in_image_ball {
            return Some(Evidence::record([
                ("f", Evidence::Function(f.clone())),
                ("h", Evidence::Function(h.clone())),
                ("phi_h", Evidence::Function(u.clone())),
                ("h_in_d_f", Evidence::text(if in_domain_ball { "true" } else { "false" })),
                ("phi_h_in_d_phi_f", Evidence::text(if in_image_ball { "true" } else { "false" })),
            ]));
        }
    }
    None
}

/// `Φ(D(f)) = D(Φ(f))` as sets of grid functions. Skipped unless the
/// oracle is a bijective isometry.
pub fn check_d_preservation(phi: &SphereMap, f: &SphereFn) -> VerificationReport {
    if let Some(reason) = d_preservation_gate(phi) {
        return VerificationReport::single(Check::skipped(D_PRESERVATION, reason));
    }
    let check = match phi.domain.position(f) {
        None => Check::skipped(D_PRESERVATION, alloc::format!("{f} is outside the table domain")),
        Some(i) => Check::from_violation(D_PRESERVATION, d_preservation_violation(phi, i)),
    };
    VerificationReport::single(check)
}

/// [`check_d_preservation`] for every grid function, reporting the first
/// failure.
pub fn check_d_preservation_all(phi: &SphereMap) -> Check {
    if let Some(reason) = d_preservation_gate(phi) {
        return Check::skipped(D_PRESERVATION, reason);
    }
    Check::from_violation(D_PRESERVATION, (0..phi.len()).find_map(|i| d_preservation_violation(phi, i)))
}

/// The table of `f ↦ f∘σ` with `σ : Y → X`. The domain is `X`
/// (`sigma.to_space()`), the codomain `Y` (`sigma.from_space()`).
pub fn composition_operator(sigma: &PointMap, grid: GridSpec) -> SphereMap {
    let domain = sigma.to_space();
    let codomain = sigma.from_space();
    let images = lattice::enumerate_grid_sphere(domain, grid)
        .iter()
        .map(|f| SphereFn::new(codomain, sigma.pull_back(f.values())).expect("permuted sphere function"))
        .collect();
    SphereMap::from_images(domain, codomain, grid, images).expect("composition table is total")
}

/// Per-point record of how the peak-family intersection converged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeakDiagnostics {
    pub point: usize,
    pub family_size: usize,
    /// Length of the shortest canonical prefix of the family whose
    /// intersection is already a single point.
    pub prefix_needed: Option<usize>,
    /// Whether the `{0, 1}`-valued peak functions alone give the same point.
    pub binary_family_agrees: bool,
}

#[derive(Clone, Debug)]
pub struct Extraction {
    /// `σ : Y → X`.
    pub sigma: PointMap,
    /// `τ : X → Y`, computed from the forward table.
    pub tau: PointMap,
    pub diagnostics: Vec<PeakDiagnostics>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtractionError {
    NotBijective,
    EmptyIntersection {
        point: String,
    },
    NonSingleton {
        point: String,
        candidates: PointSet,
    },
    /// Two domain points share their peak image point.
    NotInjective {
        first: String,
        second: String,
        image: String,
    },
    /// The map recovered from the inverse table is not `τ⁻¹`.
    InverseMismatch {
        point: String,
        forward: String,
        backward: String,
    },
    CompositionViolated {
        f: Box<SphereFn>,
        point: String,
        expected: Rational,
        actual: Rational,
    },
}

impl fmt::Display for ExtractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractionError::NotBijective => f.write_str("oracle is not a bijection onto the codomain grid sphere"),
            ExtractionError::EmptyIntersection { point } => write!(f, "empty intersection at {point}"),
            ExtractionError::NonSingleton { point, candidates } => {
                write!(f, "non-singleton intersection at {point}: {candidates:?}")
            }
            ExtractionError::NotInjective { first, second, image } => {
                write!(f, "points {first} and {second} both peak at {image}")
            }
            ExtractionError::InverseMismatch { point, forward, backward } => {
                write!(f, "inverse table sends {point} to {backward}, forward table to {forward}")
            }
            ExtractionError::CompositionViolated { f: g, point, expected, actual } => write!(
                f,
                "composition equality violated for {g} at {point}: expected {}, got {}",
                rational::format_rational(expected),
                rational::format_rational(actual)
            ),
        }
    }
}

impl ExtractionError {
    pub fn to_evidence(&self) -> Evidence {
        let message = ("error", Evidence::text(self.to_string()));
        match self {
            ExtractionError::NotBijective => Evidence::record([message]),
            ExtractionError::EmptyIntersection { point } => {
                Evidence::record([message, ("point", Evidence::Point(point.clone()))])
            }
            ExtractionError::NonSingleton { point, candidates } => Evidence::record([
                message,
                ("point", Evidence::Point(point.clone())),
                ("candidates", Evidence::List(candidates.labels().map(|l| Evidence::Point(l.into())).collect())),
            ]),
            ExtractionError::NotInjective { first, second, image } => Evidence::record([
                message,
                ("first", Evidence::Point(first.clone())),
                ("second", Evidence::Point(second.clone())),
                ("image", Evidence::Point(image.clone())),
            ]),
            ExtractionError::InverseMismatch { point, forward, backward } => Evidence::record([
                message,
                ("point", Evidence::Point(point.clone())),
                ("forward", Evidence::Point(forward.clone())),
                ("backward", Evidence::Point(backward.clone())),
            ]),
            ExtractionError::CompositionViolated { f, point, expected, actual } => Evidence::record([
                message,
                ("f", Evidence::Function((**f).clone())),
                ("y", Evidence::Point(point.clone())),
                ("expected", Evidence::Number(*expected)),
                ("actual", Evidence::Number(*actual)),
            ]),
        }
    }
}

/// For every domain point, the unique codomain point where all images of
/// its peak family peak.
fn locate_peak_images(phi: &SphereMap) -> Result<(Vec<usize>, Vec<PeakDiagnostics>), ExtractionError> {
    let space = phi.domain_space();
    let one = rational::one();
    let mut targets = Vec::with_capacity(space.len());
    let mut diagnostics = Vec::with_capacity(space.len());
    for x in 0..space.len() {
        let mut running = PointSet::full(phi.codomain_space());
        let mut binary = running.clone();
        let mut family_size = 0;
        let mut prefix_needed = None;
        for (f, u) in phi.entries().filter(|(f, _)| *f.value(x) == one) {
            family_size += 1;
            let peaks = max_set(u);
            running = running.intersection(&peaks);
            if f.values().iter().all(|v| *v == one || *v == rational::zero()) {
                binary = binary.intersection(&peaks);
            }
            if prefix_needed.is_none() && running.len() == 1 {
                prefix_needed = Some(family_size);
            }
        }
        let point = space.label(x).to_string();
        match running.indices() {
            [] => return Err(ExtractionError::EmptyIntersection { point }),
            [y] => targets.push(*y),
            _ => return Err(ExtractionError::NonSingleton { point, candidates: running }),
        }
        diagnostics.push(PeakDiagnostics {
            point: x,
            family_size,
            prefix_needed,
            binary_family_agrees: binary == running,
        });
    }
    Ok((targets, diagnostics))
}

fn injective_point_map(phi: &SphereMap, targets: Vec<usize>) -> Result<PointMap, ExtractionError> {
    let (from, to) = (phi.domain_space(), phi.codomain_space());
    let mut owner = alloc::vec![usize::MAX; to.len()];
    for (x, &y) in targets.iter().enumerate() {
        if owner[y] != usize::MAX {
            return Err(ExtractionError::NotInjective {
                first: from.label(owner[y]).into(),
                second: from.label(x).into(),
                image: to.label(y).into(),
            });
        }
        owner[y] = x;
    }
    // bijective tables force |X| = |Y|, so an injective τ is onto
    Ok(PointMap::new(from, to, targets).expect("injective map between equal-size spaces"))
}

/// Recovers `σ : Y → X` with `Φ(f) = f∘σ` from a bijective isometric table.
///
/// `τ` comes from the forward table and `σ` independently from the inverse
/// table; the two must be mutually inverse. Finally `Φ(f)(y) = f(σ(y))` is
/// checked for every grid `f` and every `y`.
pub fn extract_point_map(phi: &SphereMap) -> Result<Extraction, ExtractionError> {
    if !phi.is_bijective() {
        return Err(ExtractionError::NotBijective);
    }
    let (targets, diagnostics) = locate_peak_images(phi)?;
    let tau = injective_point_map(phi, targets)?;

    let inverse = phi.inverse().map_err(|_| ExtractionError::NotBijective)?;
    let (back_targets, _) = locate_peak_images(&inverse)?;
    let sigma = injective_point_map(&inverse, back_targets)?;
    let (x_space, y_space) = (phi.domain_space(), phi.codomain_space());
    for x in 0..x_space.len() {
        let y = tau.apply(x);
        if sigma.apply(y) != x {
            return Err(ExtractionError::InverseMismatch {
                point: y_space.label(y).into(),
                forward: x_space.label(x).into(),
                backward: x_space.label(sigma.apply(y)).into(),
            });
        }
    }

    for (f, u) in phi.entries() {
        for y in 0..y_space.len() {
            let expected = *f.value(sigma.apply(y));
            if *u.value(y) != expected {
                return Err(ExtractionError::CompositionViolated {
                    f: Box::new(f.clone()),
                    point: y_space.label(y).into(),
                    expected,
                    actual: *u.value(y),
                });
            }
        }
    }
    Ok(Extraction { sigma, tau, diagnostics })
}

pub const PEAK_LIFT_INEQUALITY: &str = "peak-lift-inequality";

/// Replays the one-sided bound `Φ(f)(y0) ≤ f(σ(y0))` through the peak-lift
/// witness `w = Φ(f) + r·u0`: `Φ⁻¹(w)` must peak at `σ(y0)` and sit at
/// distance `r` from `f`.
///
/// The lifted `w` usually has off-grid values and then lies outside the
/// table; such instances are counted and skipped. The check itself is
/// skipped when no instance lands on the grid.
pub fn check_peak_lift_inequality(phi: &SphereMap, sigma: &PointMap) -> Check {
    let Ok(inverse) = phi.inverse() else {
        return Check::skipped(PEAK_LIFT_INEQUALITY, "oracle is not bijective");
    };
    let (mut evaluated, mut total) = (0u64, 0u64);
    for (f, v) in phi.entries() {
        for y0 in 0..phi.codomain_space().len() {
            if *v.value(y0) == rational::one() {
                continue;
            }
            total += 1;
            let lift = witness::peak_lift(v, y0).expect("v(y0) < 1");
            let Some(j) = phi.codomain().position_of_values(&lift.w) else {
                continue;
            };
            evaluated += 1;
            let h = inverse.image_at(j);
            let x0 = sigma.apply(y0);
            let r = rational::one() - v.value(y0);
            let ok = *h.value(x0) == rational::one()
                && raw_distance(h.values(), f.values()) == r
                && v.value(y0) <= f.value(x0);
            if !ok {
                return Check::fail(
                    PEAK_LIFT_INEQUALITY,
                    Evidence::record([
                        ("f", Evidence::Function(f.clone())),
                        ("y0", Evidence::Point(phi.codomain_space().label(y0).into())),
                        ("w", Evidence::Function(phi.codomain().get(j).clone())),
                        ("phi_inverse_w", Evidence::Function(h.clone())),
                    ]),
                );
            }
        }
    }
    if evaluated == 0 {
        Check::skipped(
            PEAK_LIFT_INEQUALITY,
            alloc::format!("all {total} lifted functions have off-grid values outside the table domain"),
        )
    } else {
        Check::pass(PEAK_LIFT_INEQUALITY)
            .with_note(alloc::format!("evaluated {evaluated} of {total} instances; the rest lift off the grid"))
    }
}

pub const POINT_MAP: &str = "point-map-extraction";
pub const BINARY_FAMILY: &str = "binary-peak-family-agreement";

/// Outcome of the full verification pipeline for one oracle.
#[derive(Clone, Debug)]
pub struct OracleVerdict {
    pub report: VerificationReport,
    pub extraction: Option<Extraction>,
}

/// Isometry (supplied by the caller, who may have computed it in
/// parallel), set preservation, extraction of `σ` with the composition
/// equality, resolution cross-check and the peak-lift bound.
pub fn verify_oracle(phi: &SphereMap, isometry: Check) -> OracleVerdict {
    let mut report = VerificationReport::new();
    let isometric = isometry.status == crate::Status::Pass;
    report.push(isometry);
    report.push(if isometric {
        check_d_preservation_all(phi)
    } else {
        Check::skipped(D_PRESERVATION, "oracle is not an isometry")
    });
    match extract_point_map(phi) {
        Ok(extraction) => {
            report.push(Check::pass(POINT_MAP));
            let disagreeing: Vec<Evidence> = extraction
                .diagnostics
                .iter()
                .filter(|d| !d.binary_family_agrees)
                .map(|d| Evidence::Point(phi.domain_space().label(d.point).into()))
                .collect();
            report.push(if disagreeing.is_empty() {
                Check::pass(BINARY_FAMILY)
            } else {
                Check::fail(BINARY_FAMILY, Evidence::record([("points", Evidence::List(disagreeing))]))
            });
            report.push(check_peak_lift_inequality(phi, &extraction.sigma));
            OracleVerdict { report, extraction: Some(extraction) }
        }
        Err(e) => {
            report.push(Check::fail(POINT_MAP, e.to_evidence()));
            OracleVerdict { report, extraction: None }
        }
    }
}

/// Linear extension `f ↦ f∘σ` to all rational-valued functions on `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearExtension {
    sigma: PointMap,
}

pub fn extend_linear(sigma: &PointMap) -> LinearExtension {
    LinearExtension { sigma: sigma.clone() }
}

impl LinearExtension {
    /// The coordinate permutation: output `y` reads input `permutation()[y]`.
    pub fn permutation(&self) -> &[usize] {
        self.sigma.assignment()
    }

    pub fn sigma(&self) -> &PointMap {
        &self.sigma
    }

    /// Evaluates on arbitrary values indexed by the domain space `X`.
    pub fn apply(&self, values: &[Rational]) -> Result<Vec<Rational>> {
        if values.len() != self.sigma.to_space().len() {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.sigma.pull_back(values))
    }

    /// The inverse `g ↦ g∘σ⁻¹`, indexed by the codomain space `Y`.
    pub fn apply_inverse(&self, values: &[Rational]) -> Result<Vec<Rational>> {
        if values.len() != self.sigma.from_space().len() {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.sigma.inverse().pull_back(values))
    }
}

pub const UNIQUENESS: &str = "uniqueness";

/// Passes iff no bijection `τ ≠ σ` reproduces `f∘σ` on every grid sphere
/// function.
pub fn check_uniqueness(sigma: &PointMap, grid: GridSpec) -> VerificationReport {
    let fns = lattice::enumerate_grid_sphere(sigma.to_space(), grid);
    let targets: Vec<Vec<Rational>> = fns.iter().map(|f| sigma.pull_back(f.values())).collect();
    for candidate in perm::permutations(sigma.from_space().len()) {
        if candidate == sigma.assignment() {
            continue;
        }
        let agrees = fns.iter().zip(&targets).all(|(f, t)| candidate.iter().zip(t).all(|(&j, v)| f.value(j) == v));
        if agrees {
            let tau = PointMap::new(sigma.from_space(), sigma.to_space(), candidate).expect("permutation");
            let pairs = tau.pairs().map(|(a, b)| (String::from(a), Evidence::Point(b.into()))).collect();
            return VerificationReport::single(Check::fail(
                UNIQUENESS,
                Evidence::record([("tau", Evidence::Record(pairs))]),
            ));
        }
    }
    VerificationReport::single(Check::pass(UNIQUENESS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::Status;

    fn space(prefix: &str, n: usize) -> SpaceModel {
        SpaceModel::numbered(prefix, n).unwrap()
    }

    fn grid(m: u32) -> GridSpec {
        GridSpec::new(m).unwrap()
    }

    fn sf(s: &SpaceModel, v: &[(i64, i64)]) -> SphereFn {
        SphereFn::from_ratios(s, v).unwrap()
    }

    fn swap(y: &SpaceModel, x: &SpaceModel) -> PointMap {
        PointMap::new(y, x, alloc::vec![1, 0]).unwrap()
    }

    #[test]
    fn point_map_validation() {
        let a = space("p", 2);
        let b = space("q", 3);
        assert!(PointMap::new(&a, &b, alloc::vec![0, 1]).is_err());
        assert!(PointMap::new(&a, &a, alloc::vec![1, 1]).is_err());
        assert!(PointMap::from_labels(&a, &a, [("p1", "p2")]).is_err());
        let m = PointMap::from_labels(&a, &a, [("p1", "p2"), ("p2", "p1")]).unwrap();
        assert_eq!(m.assignment(), [1, 0]);
        assert_eq!(m.apply_label("p1").unwrap(), "p2");
    }

    #[test]
    fn composition_examples() {
        let x = space("p", 2);
        let y = space("q", 2);
        let g = grid(2);
        let id = composition_operator(&PointMap::identity(&x), g);
        assert_eq!(id.images(), SphereMap::identity(&x, g).images());

        let phi = composition_operator(&swap(&y, &x), g);
        let f = sf(&x, &[(1, 1), (1, 2)]);
        assert_eq!(phi.image(&f).unwrap(), &sf(&y, &[(1, 2), (1, 1)]));

        let x3 = space("p", 3);
        let y3 = space("q", 3);
        let cycle = PointMap::new(&y3, &x3, alloc::vec![1, 2, 0]).unwrap();
        let phi = composition_operator(&cycle, g);
        let f = sf(&x3, &[(1, 1), (1, 2), (0, 1)]);
        // (f∘σ)(q1) = f(p2), (f∘σ)(q2) = f(p3), (f∘σ)(q3) = f(p1)
        assert_eq!(phi.image(&f).unwrap(), &sf(&y3, &[(1, 2), (0, 1), (1, 1)]));
        assert!(phi.is_bijective());
        assert!(check_isometry(&phi).passed());
    }

    #[test]
    fn isometry_rejects_swapped_images() {
        let x = space("p", 2);
        let g = grid(2);
        let id = SphereMap::identity(&x, g);
        assert_eq!(check_isometry(&id).checks[0].status, Status::Pass);
        let a = id.domain().position(&sf(&x, &[(1, 1), (0, 1)])).unwrap();
        let b = id.domain().position(&sf(&x, &[(1, 1), (1, 2)])).unwrap();
        let bad = id.with_swapped_images(a, b).unwrap();
        assert!(bad.is_bijective());
        let report = check_isometry(&bad);
        let check = &report.checks[0];
        assert_eq!(check.status, Status::Fail);
        assert!(check.counterexample.is_some());
    }

    #[test]
    fn every_bijection_of_the_three_point_sphere_is_isometric() {
        // all pairwise distances of (0,1), (1,0), (1,1) equal 1
        let x = space("p", 2);
        let id = SphereMap::identity(&x, grid(1));
        assert!(check_isometry(&id.with_swapped_images(1, 2).unwrap()).passed());
    }

    #[test]
    fn d_preservation_examples() {
        let x = space("p", 2);
        let g = grid(2);
        let id = SphereMap::identity(&x, g);
        let f = sf(&x, &[(1, 1), (1, 2)]);
        assert!(check_d_preservation(&id, &f).passed());
        let phi = composition_operator(&swap(&space("q", 2), &x), g);
        assert_eq!(check_d_preservation(&phi, &f).checks[0].status, Status::Pass);
        let bad = id.with_swapped_images(2, 3).unwrap();
        let report = check_d_preservation(&bad, &f);
        assert_eq!(report.checks[0].status, Status::Skipped);
        assert!(report.checks[0].note.is_some());
    }

    #[test]
    fn extraction_of_swap_at_resolution_two() {
        let x = space("p", 2);
        let y = space("q", 2);
        let sigma = swap(&y, &x);
        let phi = composition_operator(&sigma, grid(2));
        let ex = extract_point_map(&phi).unwrap();
        assert_eq!(ex.sigma, sigma);
        assert_eq!(ex.tau, sigma.inverse());
        // three peak functions at p1 whose images all peak at q2
        assert_eq!(ex.diagnostics[0].family_size, 3);
        assert_eq!(ex.tau.apply_label("p1").unwrap(), "q2");
        assert!(ex.diagnostics.iter().all(|d| d.binary_family_agrees));
    }

    #[test]
    fn extraction_of_identity() {
        let x = space("p", 3);
        let ex = extract_point_map(&SphereMap::identity(&x, grid(2))).unwrap();
        assert_eq!(ex.sigma, PointMap::identity(&x));
    }

    #[test]
    fn extraction_rejects_exotic_three_point_isometry() {
        let x = space("p", 2);
        let exotic = SphereMap::identity(&x, grid(1)).with_swapped_images(1, 2).unwrap();
        assert!(check_isometry(&exotic).passed());
        let err = extract_point_map(&exotic).unwrap_err();
        assert!(matches!(err, ExtractionError::EmptyIntersection { .. }), "{err}");
    }

    #[test]
    fn extraction_rejects_non_bijective_table() {
        let x = space("p", 2);
        let one = SphereFn::constant_one(&x);
        let phi = SphereMap::from_images(&x, &x, grid(1), alloc::vec![one.clone(), one.clone(), one]).unwrap();
        assert!(!phi.is_bijective());
        assert_eq!(extract_point_map(&phi).unwrap_err(), ExtractionError::NotBijective);
    }

    #[test]
    fn table_validation() {
        let x = space("p", 2);
        let g = grid(1);
        assert!(SphereMap::from_entries(&x, &x, g, alloc::vec![]).is_err());
        let f = SphereFn::constant_one(&x);
        let twice = alloc::vec![(f.clone(), f.clone()), (f.clone(), f.clone())];
        assert!(SphereMap::from_entries(&x, &x, g, twice).is_err());
        let off_grid = sf(&x, &[(1, 1), (1, 2)]);
        assert!(SphereMap::from_entries(&x, &x, g, alloc::vec![(off_grid, f)]).is_err());
        assert!(SphereMap::identity(&x, g).with_swapped_images(0, 3).is_err());
    }

    #[test]
    fn linear_extension_examples() {
        let x = space("p", 2);
        let id = extend_linear(&PointMap::identity(&x));
        assert_eq!(id.apply(&[int(-1), int(2)]).unwrap(), [int(-1), int(2)]);
        let sw = extend_linear(&swap(&space("q", 2), &x));
        assert_eq!(sw.apply(&[int(3), ratio(-1, 2)]).unwrap(), [ratio(-1, 2), int(3)]);
        assert_eq!(sw.apply_inverse(&sw.apply(&[int(3), int(5)]).unwrap()).unwrap(), [int(3), int(5)]);
        assert!(sw.apply(&[int(1)]).is_err());
    }

    #[test]
    fn uniqueness_examples() {
        let x = space("p", 2);
        assert!(check_uniqueness(&swap(&space("q", 2), &x), grid(1)).passed());
        assert!(check_uniqueness(&PointMap::identity(&space("p", 1)), grid(1)).passed());
        let x3 = space("p", 3);
        let cycle = PointMap::new(&space("q", 3), &x3, alloc::vec![1, 2, 0]).unwrap();
        assert!(check_uniqueness(&cycle, grid(1)).passed());
    }

    #[test]
    fn verdict_for_composition_oracle() {
        let x = space("p", 2);
        let phi = composition_operator(&swap(&space("q", 2), &x), grid(2));
        let verdict = verify_oracle(&phi, check_isometry(&phi).checks.remove(0));
        assert!(verdict.report.passed(), "{:?}", verdict.report);
        assert!(verdict.extraction.is_some());
    }
}
