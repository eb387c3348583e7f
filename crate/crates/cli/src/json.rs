//! JSON forms for sphere functions, point sets, oracles, reports and
//! censuses.
//!
//! Rationals are always written as `"p/q"` strings in lowest terms with a
//! positive denominator. Objects keep their keys in canonical point order,
//! so encoding is deterministic and byte-stable.

use serde_json::{json, Map, Value};
use sphere_rigidity_core::census::{IsometryCensus, Tag};
use sphere_rigidity_core::extraction::{composition_operator, PeakDiagnostics, PointMap, SphereMap};
use sphere_rigidity_core::rational::{format_rational, parse_rational, Rational};
use sphere_rigidity_core::{Evidence, GridSpec, PointSet, SpaceModel, SphereFn, VerificationReport};

use crate::CliError;

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

pub fn space_to_json(space: &SpaceModel) -> Value {
    Value::Array(space.labels().iter().map(|l| Value::String(l.clone())).collect())
}

pub fn space_from_json(value: &Value) -> Result<SpaceModel, CliError> {
    let labels = value
        .as_array()
        .ok_or_else(|| malformed("space must be an array of labels"))?
        .iter()
        .map(|v| v.as_str().map(str::to_owned).ok_or_else(|| malformed("space labels must be strings")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpaceModel::new(labels)?)
}

fn values_object(labels: &[String], values: &[Rational]) -> Value {
    let mut map = Map::new();
    for (label, v) in labels.iter().zip(values) {
        map.insert(label.clone(), Value::String(format_rational(v)));
    }
    Value::Object(map)
}

pub fn sphere_fn_to_json(f: &SphereFn) -> Value {
    json!({
        "space": space_to_json(f.space()),
        "values": values_object(f.space().labels(), f.values()),
    })
}

fn rational_from_json(value: &Value) -> Result<Rational, CliError> {
    let text = value.as_str().ok_or_else(|| malformed("rationals must be \"p/q\" strings"))?;
    Ok(parse_rational(text)?)
}

/// Reads a function on `space` given either as the object form (whose
/// `"space"` must equal `space`) or as an array of rationals in canonical
/// point order.
pub fn values_on(space: &SpaceModel, value: &Value) -> Result<Vec<Rational>, CliError> {
    match value {
        Value::Array(items) => {
            if items.len() != space.len() {
                return Err(malformed(format!("expected {} values, got {}", space.len(), items.len())));
            }
            items.iter().map(rational_from_json).collect()
        }
        Value::Object(obj) => {
            if let Some(s) = obj.get("space") {
                if space_from_json(s)? != *space {
                    return Err(malformed("function space does not match"));
                }
            }
            let values = obj
                .get("values")
                .and_then(Value::as_object)
                .ok_or_else(|| malformed("function needs a \"values\" object"))?;
            if values.len() != space.len() {
                return Err(malformed("function must assign every point exactly once"));
            }
            space
                .labels()
                .iter()
                .map(|l| {
                    values.get(l).ok_or_else(|| malformed(format!("no value for {l:?}"))).and_then(rational_from_json)
                })
                .collect()
        }
        _ => Err(malformed("function must be an object or an array")),
    }
}

pub fn sphere_fn_from_json(value: &Value) -> Result<SphereFn, CliError> {
    let space = space_from_json(value.get("space").ok_or_else(|| malformed("function needs a \"space\""))?)?;
    let values = values_on(&space, value)?;
    Ok(SphereFn::new(&space, values)?)
}

pub fn point_set_to_json(set: &PointSet) -> Value {
    json!({
        "space": space_to_json(set.space()),
        "members": set.labels().collect::<Vec<_>>(),
    })
}

pub fn point_set_from_json(value: &Value) -> Result<PointSet, CliError> {
    let space = space_from_json(value.get("space").ok_or_else(|| malformed("point set needs a \"space\""))?)?;
    let members = value
        .get("members")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("point set needs a \"members\" array"))?
        .iter()
        .map(|v| v.as_str().ok_or_else(|| malformed("members must be labels")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PointSet::from_labels(&space, members)?)
}

/// `{"y": "x", ...}` in the canonical order of the source space.
pub fn point_map_to_json(map: &PointMap) -> Value {
    let mut obj = Map::new();
    for (a, b) in map.pairs() {
        obj.insert(a.to_owned(), Value::String(b.to_owned()));
    }
    Value::Object(obj)
}

fn grid_from_json(value: &Value) -> Result<GridSpec, CliError> {
    let m = value.get("m").and_then(Value::as_u64).ok_or_else(|| malformed("oracle needs a positive integer \"m\""))?;
    let m = u32::try_from(m).map_err(|_| malformed("\"m\" is too large"))?;
    Ok(GridSpec::new(m)?)
}

/// Loads either oracle form:
///
/// * `{"type": "table", "domain": [...], "codomain": [...], "m": 2, "map": [[f, u], ...]}`
/// * `{"type": "composition", "sigma": {"q1": "p2", ...}, "m": 2}`, expanded
///   to the full table. The codomain takes the key order of `"sigma"`, the
///   domain the sorted target labels, unless `"domain"`/`"codomain"` are given.
pub fn sphere_map_from_json(value: &Value) -> Result<SphereMap, CliError> {
    let kind = value.get("type").and_then(Value::as_str).ok_or_else(|| malformed("oracle needs a \"type\""))?;
    let grid = grid_from_json(value)?;
    match kind {
        "table" => {
            let domain = space_from_json(value.get("domain").ok_or_else(|| malformed("table needs \"domain\""))?)?;
            let codomain =
                space_from_json(value.get("codomain").ok_or_else(|| malformed("table needs \"codomain\""))?)?;
            let rows =
                value.get("map").and_then(Value::as_array).ok_or_else(|| malformed("table needs a \"map\" array"))?;
            if rows.is_empty() {
                return Err(malformed("table is empty"));
            }
            let entries = rows
                .iter()
                .map(|row| {
                    let pair = row
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| malformed("map rows are [argument, image] pairs"))?;
                    let f = SphereFn::new(&domain, values_on(&domain, &pair[0])?)?;
                    let u = SphereFn::new(&codomain, values_on(&codomain, &pair[1])?)?;
                    Ok((f, u))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(SphereMap::from_entries(&domain, &codomain, grid, entries)?)
        }
        "composition" => {
            let sigma = value
                .get("sigma")
                .and_then(Value::as_object)
                .ok_or_else(|| malformed("composition needs a \"sigma\" object"))?;
            let mut pairs = Vec::with_capacity(sigma.len());
            for (y, x) in sigma {
                pairs.push((y.as_str(), x.as_str().ok_or_else(|| malformed("sigma targets must be labels"))?));
            }
            let codomain = match value.get("codomain") {
                Some(v) => space_from_json(v)?,
                None => SpaceModel::new(pairs.iter().map(|(y, _)| *y))?,
            };
            let domain = match value.get("domain") {
                Some(v) => space_from_json(v)?,
                None => {
                    let mut xs: Vec<&str> = pairs.iter().map(|(_, x)| *x).collect();
                    xs.sort_unstable();
                    SpaceModel::new(xs)?
                }
            };
            let sigma = PointMap::from_labels(&codomain, &domain, pairs)?;
            Ok(composition_operator(&sigma, grid))
        }
        other => Err(malformed(format!("unknown oracle type {other:?}"))),
    }
}

pub fn sphere_map_to_json(phi: &SphereMap) -> Value {
    let rows: Vec<Value> = phi.entries().map(|(f, u)| json!([sphere_fn_to_json(f), sphere_fn_to_json(u)])).collect();
    json!({
        "type": "table",
        "domain": space_to_json(phi.domain_space()),
        "codomain": space_to_json(phi.codomain_space()),
        "m": phi.grid().resolution(),
        "map": rows,
    })
}

pub fn evidence_to_json(e: &Evidence) -> Value {
    match e {
        Evidence::Function(f) => sphere_fn_to_json(f),
        Evidence::Values(labels, values) => json!({
            "space": labels,
            "values": values_object(labels, values),
        }),
        Evidence::Number(q) => Value::String(format_rational(q)),
        Evidence::Count(n) => json!(n),
        Evidence::Point(p) | Evidence::Text(p) => Value::String(p.clone()),
        Evidence::List(items) => Value::Array(items.iter().map(evidence_to_json).collect()),
        Evidence::Record(fields) => {
            Value::Object(fields.iter().map(|(k, v)| (k.clone(), evidence_to_json(v))).collect())
        }
    }
}

pub fn report_to_json(report: &VerificationReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut obj = Map::new();
            obj.insert("name".into(), Value::String(c.name.clone()));
            obj.insert("status".into(), Value::String(c.status.as_str().into()));
            obj.insert("counterexample".into(), c.counterexample.as_ref().map_or(Value::Null, evidence_to_json));
            if let Some(note) = &c.note {
                obj.insert("note".into(), Value::String(note.clone()));
            }
            Value::Object(obj)
        })
        .collect();
    let s = report.summary();
    json!({
        "checks": checks,
        "summary": {"pass": s.pass, "fail": s.fail, "skipped": s.skipped},
    })
}

pub fn diagnostics_to_json(space: &SpaceModel, diagnostics: &[PeakDiagnostics]) -> Value {
    Value::Array(
        diagnostics
            .iter()
            .map(|d| {
                json!({
                    "point": space.label(d.point),
                    "family_size": d.family_size,
                    "prefix_needed": d.prefix_needed,
                    "binary_family_agrees": d.binary_family_agrees,
                })
            })
            .collect(),
    )
}

pub fn census_to_json(census: &IsometryCensus) -> Value {
    let isometries: Vec<Value> = census
        .entries
        .iter()
        .map(|e| match &e.tag {
            Tag::Induced(sigma) => json!({
                "perm": e.perm,
                "tag": "induced",
                "sigma": point_map_to_json(sigma),
            }),
            Tag::Exotic => {
                let mapping: Vec<Value> = e
                    .perm
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| {
                        json!([sphere_fn_to_json(census.sphere.get(i)), sphere_fn_to_json(census.sphere.get(j))])
                    })
                    .collect();
                json!({
                    "perm": e.perm,
                    "tag": "exotic",
                    "mapping": mapping,
                })
            }
        })
        .collect();
    json!({
        "space": space_to_json(census.space()),
        "m": census.grid().resolution(),
        "sphere_size": census.sphere_size(),
        "isometries": isometries,
        "summary": {"induced": census.induced_count(), "exotic": census.exotic_count()},
    })
}

/// Pretty-printed with a trailing newline.
pub fn to_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
