//! The four subcommands. Each returns an [`Outcome`]: the report text, an
//! exit code and, on failure, a one-line message.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde_json::{json, Value};
use sphere_rigidity_core::census::{self, Tag};
use sphere_rigidity_core::extraction::{self, composition_operator, extend_linear, PointMap, SphereMap};
use sphere_rigidity_core::lattice::{average_functions, sup_norm};
use sphere_rigidity_core::peaks::{intersect_max_sets, peak_family, peak_separation_check};
use sphere_rigidity_core::rational::{self, Rational};
use sphere_rigidity_core::setcalc::{
    d_separating_witness, d_subset_within, in_d_by_distance, in_d_by_sets, max_set, zero_set,
};
use sphere_rigidity_core::witness::{self, peak_lift};
use sphere_rigidity_core::{perm, Check, Evidence, GridSpec, GridSphere, SpaceModel, Status, VerificationReport};

use crate::{json as forms, parallel, CliError, CAP_ENV};

pub const DEFAULT_LEMMA_CAP: usize = 200;
pub const LINEAR_SAMPLES: usize = 1000;
/// Largest space for which suites that range over every point permutation run.
pub const MAX_PERMUTED_POINTS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyLemmas { n: usize, m: u32 },
    Extract { oracle: PathBuf },
    Bruteforce { n: usize, m: u32, allow_exotic: bool },
    PhaseCheck { oracle: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// Explicit `--cap`; otherwise the environment override or the command
    /// default applies.
    pub cap: Option<usize>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// Report text; empty when the command failed before producing one.
    pub output: String,
    pub error: Option<String>,
}

impl Outcome {
    fn finished(report: &Value, failure: Option<String>) -> Self {
        Outcome { code: if failure.is_some() { 1 } else { 0 }, output: forms::to_text(report), error: failure }
    }

    pub fn from_error(err: &CliError) -> Self {
        Outcome { code: err.exit_code(), output: String::new(), error: Some(err.to_string()) }
    }
}

impl RunConfig {
    fn effective_cap(&self, default: usize) -> Result<usize, CliError> {
        let cap = match self.cap {
            Some(cap) => cap,
            None => match std::env::var(CAP_ENV) {
                Ok(text) => text
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{CAP_ENV} must be a positive integer, got {text:?}")))?,
                Err(_) => default,
            },
        };
        if cap == 0 {
            return Err(CliError::Usage("cap must be positive".into()));
        }
        Ok(cap)
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    let result = match &config.command {
        Command::VerifyLemmas { n, m } => verify_lemmas(config, *n, *m),
        Command::Extract { oracle } => extract(config, oracle),
        Command::Bruteforce { n, m, allow_exotic } => bruteforce(config, *n, *m, *allow_exotic),
        Command::PhaseCheck { oracle } => phase_check(config, oracle),
    };
    result.unwrap_or_else(|e| Outcome::from_error(&e))
}

fn space_and_grid(n: usize, m: u32) -> Result<(SpaceModel, GridSpec), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    Ok((SpaceModel::numbered("p", n)?, GridSpec::new(m)?))
}

fn check_size(n: usize, grid: GridSpec, cap: usize) -> Result<(), CliError> {
    match grid.sphere_size(n) {
        Some(size) if size <= cap => Ok(()),
        size => Err(sphere_rigidity_core::Error::InstanceTooLarge { size: size.unwrap_or(usize::MAX), cap }.into()),
    }
}

fn load_oracle(path: &PathBuf) -> Result<SphereMap, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let value: Value = serde_json::from_str(&text)?;
    forms::sphere_map_from_json(&value)
}

fn first_failure(report: &VerificationReport) -> Option<String> {
    report.checks.iter().find(|c| c.status == Status::Fail).map(|c| {
        let detail = c.counterexample.as_ref().map(|e| forms::evidence_to_json(e).to_string()).unwrap_or_default();
        format!("check {} failed: {detail}", c.name)
    })
}

// ---------------------------------------------------------------------------
// verify-lemmas

type Suite<'a> = (&'static str, Box<dyn Fn() -> Check + Send + Sync + 'a>);

fn pair_record(a: &sphere_rigidity_core::SphereFn, b: &sphere_rigidity_core::SphereFn) -> Evidence {
    Evidence::record([("f", Evidence::Function(a.clone())), ("g", Evidence::Function(b.clone()))])
}

fn suite_sphere_count(sphere: &GridSphere) -> Check {
    let expected = sphere.grid().sphere_size(sphere.space().len());
    if expected == Some(sphere.len()) {
        Check::pass("sphere-count")
    } else {
        Check::fail(
            "sphere-count",
            Evidence::record([
                ("enumerated", Evidence::Count(sphere.len() as u64)),
                ("formula", Evidence::Count(expected.unwrap_or(0) as u64)),
            ]),
        )
    }
}

fn suite_metric(sphere: &GridSphere) -> Check {
    let fns = sphere.functions();
    let n = fns.len();
    let d: Vec<Vec<Rational>> = fns
        .iter()
        .map(|f| fns.iter().map(|g| sphere_rigidity_core::lattice::sup_distance(f, g).expect("same space")).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            if d[i][j] < rational::zero() || d[i][j] != d[j][i] || (d[i][j] == rational::zero()) != (i == j) {
                return Check::fail("sup-metric-axioms", pair_record(&fns[i], &fns[j]));
            }
            for k in 0..n {
                if d[i][k] > d[i][j] + d[j][k] {
                    return Check::fail(
                        "sup-metric-axioms",
                        Evidence::List(vec![
                            Evidence::Function(fns[i].clone()),
                            Evidence::Function(fns[j].clone()),
                            Evidence::Function(fns[k].clone()),
                        ]),
                    );
                }
            }
        }
    }
    Check::pass("sup-metric-axioms")
}

fn suite_max_zero(sphere: &GridSphere) -> Check {
    let bad = sphere.functions().iter().find(|f| max_set(f).is_empty() || !max_set(f).is_disjoint(&zero_set(f)));
    Check::from_violation("max-zero-disjoint", bad.map(|f| Evidence::Function(f.clone())))
}

fn suite_d_equivalence(sphere: &GridSphere) -> Check {
    let fns = sphere.functions();
    let bad = fns.iter().find_map(|f| {
        fns.iter()
            .find(|h| in_d_by_distance(f, h).expect("same space") != in_d_by_sets(f, h).expect("same space"))
            .map(|h| pair_record(f, h))
    });
    Check::from_violation("d-membership-equivalence", bad)
}

fn suite_separation(sphere: &GridSphere) -> Check {
    let n = sphere.space().len();
    for t0 in 0..n {
        for t1 in 0..n {
            if peak_separation_check(sphere.space(), t0, t1, sphere.grid()).expect("points in range") != (t0 == t1) {
                return Check::fail(
                    "peak-separation",
                    Evidence::record([
                        ("t0", Evidence::Point(sphere.space().label(t0).into())),
                        ("t1", Evidence::Point(sphere.space().label(t1).into())),
                    ]),
                );
            }
        }
    }
    Check::pass("peak-separation")
}

fn suite_d_inclusion_forward(sphere: &GridSphere) -> Check {
    let fns = sphere.functions();
    let bad = fns.iter().find_map(|f| {
        fns.iter()
            .find(|g| {
                max_set(g).is_subset(&max_set(f))
                    && zero_set(g).is_subset(&zero_set(f))
                    && !d_subset_within(f, g, sphere).expect("same space")
            })
            .map(|g| pair_record(f, g))
    });
    Check::from_violation("d-inclusion-forward", bad)
}

fn suite_d_inclusion_witness(sphere: &GridSphere) -> Check {
    let fns = sphere.functions();
    let bad = fns.iter().find_map(|f| {
        fns.iter().filter(|g| !max_set(g).is_subset(&max_set(f))).find_map(|g| match d_separating_witness(f, g) {
            Ok(w) if in_d_by_sets(f, &w).unwrap_or(false) && !in_d_by_sets(g, &w).unwrap_or(true) => None,
            _ => Some(pair_record(f, g)),
        })
    });
    Check::from_violation("d-inclusion-witness", bad)
}

fn suite_average(sphere: &GridSphere) -> Check {
    let space = sphere.space();
    for t in 0..space.len() {
        let family = peak_family(space, t, sphere.grid()).expect("point in range");
        let mut groups = vec![family.clone()];
        for (i, a) in family.iter().enumerate() {
            for b in &family[i..] {
                groups.push(vec![a.clone(), b.clone()]);
            }
        }
        for group in groups {
            let Ok(avg) = average_functions(&group) else {
                return Check::fail(
                    "average-max-zero-intersection",
                    Evidence::List(group.into_iter().map(Evidence::Function).collect()),
                );
            };
            let (mut m, mut z) = (max_set(&group[0]), zero_set(&group[0]));
            for f in &group[1..] {
                m = m.intersection(&max_set(f));
                z = z.intersection(&zero_set(f));
            }
            if max_set(&avg) != m || zero_set(&avg) != z {
                return Check::fail(
                    "average-max-zero-intersection",
                    Evidence::List(group.into_iter().map(Evidence::Function).collect()),
                );
            }
        }
    }
    Check::pass("average-max-zero-intersection")
}

fn all_point_maps(space: &SpaceModel) -> Vec<PointMap> {
    perm::permutations(space.len()).map(|p| PointMap::new(space, space, p).expect("permutation")).collect()
}

fn suite_peak_images(sphere: &GridSphere) -> Check {
    const NAME: &str = "peak-image-intersection";
    let space = sphere.space();
    if space.len() > MAX_PERMUTED_POINTS {
        return Check::skipped(NAME, format!("more than {MAX_PERMUTED_POINTS} points"));
    }
    for sigma in all_point_maps(space) {
        let phi = composition_operator(&sigma, sphere.grid());
        for x in 0..space.len() {
            let images: Vec<_> = peak_family(space, x, sphere.grid())
                .expect("point in range")
                .iter()
                .map(|f| phi.image(f).expect("grid function").clone())
                .collect();
            let full = intersect_max_sets(&images).expect("nonempty family");
            let pairs_ok = images.iter().enumerate().all(|(i, a)| {
                images[i..].iter().all(|b| !intersect_max_sets(&[a.clone(), b.clone()]).expect("nonempty").is_empty())
            });
            if !pairs_ok || full.indices() != [sigma.inverse().apply(x)] {
                return Check::fail(
                    NAME,
                    Evidence::record([
                        (
                            "sigma",
                            Evidence::Record(
                                sigma.pairs().map(|(a, b)| (a.to_owned(), Evidence::Point(b.into()))).collect(),
                            ),
                        ),
                        ("x", Evidence::Point(space.label(x).into())),
                    ]),
                );
            }
        }
    }
    Check::pass(NAME)
}

fn suite_peak_lift(sphere: &GridSphere) -> Check {
    const NAME: &str = "peak-lift-witness";
    let one = rational::one();
    for v in sphere.functions() {
        for y0 in 0..sphere.space().len() {
            if *v.value(y0) == one {
                continue;
            }
            let fail = || {
                Check::fail(
                    NAME,
                    Evidence::record([
                        ("v", Evidence::Function(v.clone())),
                        ("y0", Evidence::Point(sphere.space().label(y0).into())),
                    ]),
                )
            };
            let Ok(lift) = peak_lift(v, y0) else { return fail() };
            let p = &lift.partition;
            let bands_ok = p.bands.iter().all(|(n, band)| {
                let bound = one - p.radius * rational::inv_pow2(n + 1);
                band.indices().iter().all(|&y| lift.w[y] <= bound && lift.w[y] < one)
            });
            let ok = *lift.u0.value(y0) == one
                && sup_norm(lift.u0.values()) == one
                && p.outer.indices().iter().all(|&y| *lift.u0.value(y) == rational::zero())
                && lift.w.iter().all(|w| *w >= rational::zero() && *w <= one)
                && lift.w[y0] == one
                && bands_ok;
            if !ok {
                return fail();
            }
        }
    }
    Check::pass(NAME)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-100..=100), rng.random_range(1..=20))
}

fn suite_linear_extension(space: &SpaceModel, seed: u64) -> Check {
    const NAME: &str = "linear-extension";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps: Vec<PointMap> = perm::permutations(space.len())
        .take(120)
        .map(|p| PointMap::new(space, space, p).expect("permutation"))
        .collect();
    let n = space.len();
    for k in 0..LINEAR_SAMPLES {
        let ext = extend_linear(&maps[k % maps.len()]);
        let a = random_rational(&mut rng);
        let f: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
        let g: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
        let combo: Vec<Rational> = f.iter().zip(&g).map(|(x, y)| a * x + y).collect();
        let (ef, eg) = (ext.apply(&f).expect("sized"), ext.apply(&g).expect("sized"));
        let linear =
            ext.apply(&combo).expect("sized") == ef.iter().zip(&eg).map(|(x, y)| a * x + y).collect::<Vec<_>>();
        if !linear || sup_norm(&ef) != sup_norm(&f) {
            return Check::fail(
                NAME,
                Evidence::record([
                    ("sample", Evidence::Count(k as u64)),
                    ("a", Evidence::Number(a)),
                    ("f", Evidence::Values(space.labels().to_vec(), f)),
                    ("g", Evidence::Values(space.labels().to_vec(), g)),
                ]),
            );
        }
    }
    Check::pass(NAME).with_note(format!("{LINEAR_SAMPLES} seeded samples, seed {seed}"))
}

fn suite_uniqueness(sphere: &GridSphere) -> Check {
    const NAME: &str = "extension-uniqueness";
    if sphere.space().len() > MAX_PERMUTED_POINTS {
        return Check::skipped(NAME, format!("more than {MAX_PERMUTED_POINTS} points"));
    }
    for sigma in all_point_maps(sphere.space()) {
        let report = extraction::check_uniqueness(&sigma, sphere.grid());
        if !report.passed() {
            let mut check = report.checks.into_iter().next().expect("one check");
            check.name = NAME.into();
            return check;
        }
    }
    Check::pass(NAME)
}

fn verify_lemmas(config: &RunConfig, n: usize, m: u32) -> Result<Outcome, CliError> {
    let (space, grid) = space_and_grid(n, m)?;
    check_size(n, grid, config.effective_cap(DEFAULT_LEMMA_CAP)?)?;
    let sphere = GridSphere::new(&space, grid);
    let sphere = &sphere;
    let seed = config.seed;
    let suites: Vec<Suite> = vec![
        ("sphere-count", Box::new(move || suite_sphere_count(sphere))),
        ("sup-metric-axioms", Box::new(move || suite_metric(sphere))),
        ("max-zero-disjoint", Box::new(move || suite_max_zero(sphere))),
        ("d-membership-equivalence", Box::new(move || suite_d_equivalence(sphere))),
        ("peak-separation", Box::new(move || suite_separation(sphere))),
        ("d-inclusion-forward", Box::new(move || suite_d_inclusion_forward(sphere))),
        ("d-inclusion-witness", Box::new(move || suite_d_inclusion_witness(sphere))),
        ("average-max-zero-intersection", Box::new(move || suite_average(sphere))),
        ("peak-image-intersection", Box::new(move || suite_peak_images(sphere))),
        ("peak-lift-witness", Box::new(move || suite_peak_lift(sphere))),
        ("linear-extension", Box::new(move || suite_linear_extension(sphere.space(), seed))),
        ("extension-uniqueness", Box::new(move || suite_uniqueness(sphere))),
    ];
    let pool = parallel::pool(config.jobs);
    let checks: Vec<Check> = pool.install(|| suites.par_iter().map(|(_, run)| run()).collect());
    let report = VerificationReport { checks };
    let value = json!({
        "n": n,
        "m": m,
        "sphere_size": sphere.len(),
        "report": forms::report_to_json(&report),
    });
    Ok(Outcome::finished(&value, first_failure(&report)))
}

// ---------------------------------------------------------------------------
// extract and phase-check

fn oracle_output(phi: &SphereMap, report: &VerificationReport, extraction: Option<&extraction::Extraction>) -> Value {
    json!({
        "domain": forms::space_to_json(phi.domain_space()),
        "codomain": forms::space_to_json(phi.codomain_space()),
        "m": phi.grid().resolution(),
        "sigma": extraction.map_or(Value::Null, |e| forms::point_map_to_json(&e.sigma)),
        "diagnostics": extraction.map_or(Value::Null, |e| forms::diagnostics_to_json(phi.domain_space(), &e.diagnostics)),
        "report": forms::report_to_json(report),
    })
}

fn verify_with_pool(phi: &SphereMap, pool: &ThreadPool) -> extraction::OracleVerdict {
    extraction::verify_oracle(phi, parallel::check_isometry(phi, pool))
}

fn extract(config: &RunConfig, path: &PathBuf) -> Result<Outcome, CliError> {
    let phi = load_oracle(path)?;
    let pool = parallel::pool(config.jobs);
    let verdict = verify_with_pool(&phi, &pool);
    let value = oracle_output(&phi, &verdict.report, verdict.extraction.as_ref());
    Ok(Outcome::finished(&value, first_failure(&verdict.report)))
}

fn phase_check(config: &RunConfig, path: &PathBuf) -> Result<Outcome, CliError> {
    let phi = load_oracle(path)?;
    let pool = parallel::pool(config.jobs);
    let mut report = VerificationReport::new();
    report.push(witness::check_phase_condition(&phi));
    report.extend(witness::phase_implies_isometry_check(&phi));
    let verdict = verify_with_pool(&phi, &pool);
    report.extend(verdict.report);
    let value = oracle_output(&phi, &report, verdict.extraction.as_ref());
    Ok(Outcome::finished(&value, first_failure(&report)))
}

// ---------------------------------------------------------------------------
// bruteforce

fn bruteforce(config: &RunConfig, n: usize, m: u32, allow_exotic: bool) -> Result<Outcome, CliError> {
    let (space, grid) = space_and_grid(n, m)?;
    let cap = config.effective_cap(census::DEFAULT_CAP)?;
    let pool = parallel::pool(config.jobs);
    let census = parallel::census(&space, grid, cap, &pool)?;
    let exotic = census.entries.iter().filter(|e| e.tag == Tag::Exotic).count();
    let failure = (exotic > 0 && !allow_exotic).then(|| {
        format!("{exotic} exotic isometries found among {} (use --allow-exotic to accept)", census.entries.len())
    });
    Ok(Outcome::finished(&forms::census_to_json(&census), failure))
}
