//! Decision procedure mapping group parameters to the complete list of
//! totally umbilical surface families, with numerical evidence attached.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::{
    branch_eq, branch_zero, identify_unimodular_group, invariant_scalars, NonUnimodularParams,
    StructureConstants,
};
use crate::construct::{
    geodesic_distributions_nonunimodular, geodesic_distributions_unimodular,
};
use crate::error::{Error, Result};

/// Case tag: constant-curvature unimodular groups (classical umbilics).
pub const CASE_CONSTANT_CURVATURE: &str = "constant-curvature";
/// Case tag: only the two totally geodesic families exist.
pub const CASE_GEODESIC_PAIR: &str = "totally-geodesic-pair";
/// Case tag: Sol3 — geodesic families plus the invariant umbilic profile.
pub const CASE_GEODESIC_PAIR_AND_PROFILE: &str = "totally-geodesic-pair-and-umbilic-profile";
/// Case tag: hyperbolic 3-space.
pub const CASE_HYPERBOLIC_SPACE: &str = "hyperbolic-space";
/// Case tag: the product H^2 x R.
pub const CASE_H2_X_R: &str = "h2-x-r";
/// Case tag: b = 0 groups with two geodesic and two umbilic profile families.
pub const CASE_GEODESIC_AND_PROFILE_FAMILIES: &str = "geodesic-and-profile-families";
/// Case tag: no totally umbilical surfaces exist.
pub const CASE_NONE: &str = "no-totally-umbilical-surfaces";

/// One family of totally umbilical surfaces in a classification report.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceFamily {
    pub kind: String,
    pub descriptor: String,
}

pub const KIND_GEODESIC_DISTRIBUTION: &str = "totally-geodesic-distribution";
pub const KIND_UMBILIC_PROFILE: &str = "invariant-umbilic-profile";
pub const KIND_CLASSICAL: &str = "constant-curvature-classical";

/// Outcome of the classification. Serializes with the field order fixed
/// as declared; `evidence` keys are sorted alphabetically.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub family: String,
    pub params: Vec<f64>,
    pub group_label: String,
    pub case: String,
    pub surfaces: Vec<SurfaceFamily>,
    pub evidence: Map<String, Value>,
    pub lcf: bool,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}

fn num(x: f64) -> Value {
    json!(x)
}

fn scalar_evidence(inv: &crate::algebra::InvariantScalars) -> Map<String, Value> {
    let mut ev = Map::new();
    ev.insert("beta1".into(), num(inv.beta1));
    ev.insert("beta2".into(), num(inv.beta2));
    ev.insert("beta3".into(), num(inv.beta3));
    ev.insert("delta".into(), num(inv.delta));
    ev.insert("rho".into(), num(inv.rho));
    ev.insert(
        "grad_bound_a".into(),
        inv.grad_bound_a.map_or(Value::Null, num),
    );
    ev
}

/// Diagnostic record naming the non-existence (or existence) criterion that
/// applies to a unimodular group.
pub fn nonexistence_evidence_unimodular(c: &StructureConstants) -> Map<String, Value> {
    let n = c.normalize().constants;
    let scale = c.scale();
    let inv = invariant_scalars(&n);
    let mut ev = scalar_evidence(&inv);

    let constant_curvature = (branch_eq(n.c1, n.c2, scale) && branch_eq(n.c2, n.c3, scale))
        || (branch_eq(n.c1, n.c2, scale) && branch_zero(n.c3, scale));
    let case2 = n.c3 < 0.0
        && n.c1 > 0.0
        && !branch_zero(n.c1, scale)
        && !branch_zero(n.c3, scale)
        && branch_eq(n.c2, n.c1 + n.c3, scale);

    let criterion = if constant_curvature || case2 {
        "existence-case"
    } else if inv.rho > 0.0 && !branch_zero(inv.rho, scale * scale) {
        // rho > 0 forces the gradient bound constant below zero, so the
        // umbilicity function has nowhere to live.
        "positive-scalar-curvature"
    } else if branch_zero(inv.delta, scale.powi(4)) && inv.beta_norm_sq() > 0.0 {
        "degenerate-system"
    } else {
        "polynomial-obstruction"
    };
    ev.insert("criterion".into(), json!(criterion));
    ev
}

fn geodesic_family_entries(c: &StructureConstants) -> Vec<SurfaceFamily> {
    geodesic_distributions_unimodular(c)
        .iter()
        .map(|d| {
            let s = d.span[0];
            SurfaceFamily {
                kind: KIND_GEODESIC_DISTRIBUTION.into(),
                descriptor: format!(
                    "span{{{:.6} E1 {:+.6} E3, E2}}",
                    s.e1, s.e3
                ),
            }
        })
        .collect()
}

/// Classifies the totally umbilical surfaces of the unimodular group with
/// structure constants `c` (normalized internally).
pub fn classify_unimodular(c: &StructureConstants) -> ClassificationReport {
    let normalized = c.normalize();
    let n = normalized.constants;
    let scale = c.scale();
    let group = identify_unimodular_group(c);
    let evidence = nonexistence_evidence_unimodular(c);

    let constant_curvature = (branch_eq(n.c1, n.c2, scale) && branch_eq(n.c2, n.c3, scale))
        || (branch_eq(n.c1, n.c2, scale) && branch_zero(n.c3, scale));
    let case2 = n.c3 < 0.0
        && n.c1 > 0.0
        && !branch_zero(n.c1, scale)
        && !branch_zero(n.c3, scale)
        && branch_eq(n.c2, n.c1 + n.c3, scale);

    let (case, surfaces, lcf) = if constant_curvature {
        (
            CASE_CONSTANT_CURVATURE,
            vec![SurfaceFamily {
                kind: KIND_CLASSICAL.into(),
                descriptor: "totally geodesic planes and geodesic spheres of the space form"
                    .into(),
            }],
            true,
        )
    } else if case2 {
        let mut surfaces = geodesic_family_entries(&n);
        if branch_zero(n.c2, scale) {
            surfaces.push(SurfaceFamily {
                kind: KIND_UMBILIC_PROFILE.into(),
                descriptor: format!(
                    "shooting profile in the diag(1,-1) model, metric scale {}",
                    n.c1
                ),
            });
            (CASE_GEODESIC_PAIR_AND_PROFILE, surfaces, false)
        } else {
            (CASE_GEODESIC_PAIR, surfaces, false)
        }
    } else {
        (CASE_NONE, Vec::new(), false)
    };

    ClassificationReport {
        family: "unimodular".into(),
        params: n.to_array().to_vec(),
        group_label: group.to_string(),
        case: case.into(),
        surfaces,
        evidence,
        lcf,
    }
}

/// Classifies the totally umbilical surfaces of the non-unimodular group
/// `R^2 x|_{A(a,b)} R`.
pub fn classify_nonunimodular(p: &NonUnimodularParams) -> ClassificationReport {
    let scale = p.scale();
    let a_zero = branch_zero(p.a, scale);
    let b_zero = branch_zero(p.b, scale);
    let a_one = branch_eq(p.a, 1.0, scale);

    let mut evidence = Map::new();
    evidence.insert("a".into(), num(p.a));
    evidence.insert("b".into(), num(p.b));

    let (group_label, case, surfaces, lcf): (String, &str, Vec<SurfaceFamily>, bool) = if a_zero {
        evidence.insert("sectional_curvature".into(), num(-1.0));
        (
            "H^3".into(),
            CASE_HYPERBOLIC_SPACE,
            vec![SurfaceFamily {
                kind: KIND_CLASSICAL.into(),
                descriptor: "totally geodesic planes, geodesic spheres, horospheres, and \
                             equidistant surfaces of hyperbolic space"
                    .into(),
            }],
            true,
        )
    } else if a_one && b_zero {
        (
            "H^2 x R".into(),
            CASE_H2_X_R,
            vec![SurfaceFamily {
                kind: KIND_CLASSICAL.into(),
                descriptor: "vertical planes over geodesics and horizontal slices of H^2 x R"
                    .into(),
            }],
            true,
        )
    } else if b_zero {
        let mut surfaces: Vec<SurfaceFamily> = geodesic_distributions_nonunimodular(p)
            .iter()
            .map(|d| SurfaceFamily {
                kind: KIND_GEODESIC_DISTRIBUTION.into(),
                descriptor: if d.normal.e2 != 0.0 {
                    "span{E1, E3}".into()
                } else {
                    "span{E2, E3}".into()
                },
            })
            .collect();
        surfaces.push(SurfaceFamily {
            kind: KIND_UMBILIC_PROFILE.into(),
            descriptor: format!("x-invariant graph z = z(y) of the closed profile, a = {}", p.a),
        });
        surfaces.push(SurfaceFamily {
            kind: KIND_UMBILIC_PROFILE.into(),
            descriptor: format!("y-invariant graph z = z(x) of the closed profile, a = {}", p.a),
        });
        (
            format!("R^2 x|_A({}, 0) R", p.a),
            CASE_GEODESIC_AND_PROFILE_FAMILIES,
            surfaces,
            false,
        )
    } else if a_one {
        // Isometric to a homogeneous space with 4-dimensional isometry group
        // and nonzero bundle curvature; non-existence holds there on external
        // authority, so no local evidence is computed.
        evidence.insert("criterion".into(), json!("bundle-curvature-external"));
        (
            "E~(kappa, tau)".into(),
            CASE_NONE,
            Vec::new(),
            false,
        )
    } else {
        let solutions = gauss_locus(p, 400).expect("parameters checked in this branch");
        let min_violation = solutions
            .iter()
            .map(|s| constant_angle_violation(p, s))
            .fold(f64::INFINITY, f64::min);
        evidence.insert("criterion".into(), json!("isolated-gauss-locus"));
        evidence.insert("gauss_locus_count".into(), json!(solutions.len()));
        evidence.insert(
            "min_constant_angle_violation".into(),
            if solutions.is_empty() {
                Value::Null
            } else {
                num(min_violation)
            },
        );
        (
            format!("R^2 x|_A({}, {}) R", p.a, p.b),
            CASE_NONE,
            Vec::new(),
            false,
        )
    };

    ClassificationReport {
        family: "non-unimodular".into(),
        params: vec![p.a, p.b],
        group_label,
        case: case.into(),
        surfaces,
        evidence,
        lcf,
    }
}

/// Detects inputs whose branch conditions hold only up to the relative
/// tolerance: with exact semantics requested, such inputs are ambiguous and
/// must be rejected rather than silently snapped to a branch.
pub fn exact_branch_conflict_unimodular(c: &StructureConstants) -> Option<String> {
    let n = c.normalize().constants;
    let scale = c.scale();
    let near = |x: f64, what: &str| -> Option<String> {
        if x != 0.0 && branch_zero(x, scale) {
            Some(format!(
                "{what} is within tolerance of zero but not exactly zero ({x:e})"
            ))
        } else {
            None
        }
    };
    near(n.c1 - n.c2, "c1 - c2")
        .or_else(|| near(n.c2 - n.c3, "c2 - c3"))
        .or_else(|| near(n.c2, "c2"))
        .or_else(|| near(n.c3, "c3"))
        .or_else(|| near(n.c2 - (n.c1 + n.c3), "c2 - (c1 + c3)"))
}

/// Exact-branch guard for the non-unimodular parameters.
pub fn exact_branch_conflict_nonunimodular(p: &NonUnimodularParams) -> Option<String> {
    let scale = p.scale();
    let near = |x: f64, what: &str| -> Option<String> {
        if x != 0.0 && branch_zero(x, scale) {
            Some(format!(
                "{what} is within tolerance of zero but not exactly zero ({x:e})"
            ))
        } else {
            None
        }
    };
    near(p.a, "a")
        .or_else(|| near(p.b, "b"))
        .or_else(|| near(p.a - 1.0, "a - 1"))
}

/// A polished common zero of the Gauss-map polynomials on the unit disc.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussLocusSolution {
    pub x: f64,
    pub y: f64,
    pub p_residual: f64,
    pub q_residual: f64,
}

/// The two polynomials whose common zeros confine the Gauss map of a
/// candidate umbilical surface when `b != 0`.
pub fn gauss_polynomials(p: &NonUnimodularParams, x: f64, y: f64) -> (f64, f64) {
    let (a, b) = (p.a, p.b);
    let pv = ((a + 1.0) * (a + 2.0) * y * y - (a - 1.0) * (a - 2.0) * x * x - 2.0 * a) * b
        + 2.0 * (a * a - 1.0) * x * y;
    let u = (1.0 - a) * x * x - (1.0 + a) * y * y + 2.0 * a;
    let w = 1.0 - x * x - y * y;
    let qv = 4.0 * b * x * x * y * y + a * b * u * w;
    (pv, qv)
}

fn gauss_jacobian(p: &NonUnimodularParams, x: f64, y: f64) -> [[f64; 2]; 2] {
    let (a, b) = (p.a, p.b);
    let px = -2.0 * b * (a - 1.0) * (a - 2.0) * x + 2.0 * (a * a - 1.0) * y;
    let py = 2.0 * b * (a + 1.0) * (a + 2.0) * y + 2.0 * (a * a - 1.0) * x;
    let u = (1.0 - a) * x * x - (1.0 + a) * y * y + 2.0 * a;
    let w = 1.0 - x * x - y * y;
    let qx = 8.0 * b * x * y * y + a * b * (2.0 * (1.0 - a) * x * w - 2.0 * x * u);
    let qy = 8.0 * b * x * x * y + a * b * (-2.0 * (1.0 + a) * y * w - 2.0 * y * u);
    [[px, py], [qx, qy]]
}

/// Deviation of a locus point from the constant-angle equations; a common
/// zero of P and Q yields an actual surface only when this vanishes.
pub fn constant_angle_violation(p: &NonUnimodularParams, s: &GaussLocusSolution) -> f64 {
    let nu3_sq = (1.0 - s.x * s.x - s.y * s.y).max(0.0);
    let v1 = ((p.a * nu3_sq - s.y * s.y) * p.b).abs();
    let v2 = ((p.a * nu3_sq + s.x * s.x) * p.b).abs();
    v1.max(v2)
}

fn newton_polish(p: &NonUnimodularParams, mut x: f64, mut y: f64) -> Option<(f64, f64)> {
    let (mut pv, mut qv) = gauss_polynomials(p, x, y);
    let mut fnorm = pv.hypot(qv);
    for _ in 0..60 {
        if fnorm < 1e-13 {
            return Some((x, y));
        }
        let j = gauss_jacobian(p, x, y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            return None;
        }
        let dx = (j[0][1] * qv - j[1][1] * pv) / det;
        let dy = (j[1][0] * pv - j[0][0] * qv) / det;
        // damped step: halve until the residual actually drops
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..25 {
            let (nx, ny) = (x + t * dx, y + t * dy);
            let (np, nq) = gauss_polynomials(p, nx, ny);
            if np.hypot(nq) < fnorm {
                x = nx;
                y = ny;
                pv = np;
                qv = nq;
                fnorm = np.hypot(nq);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if fnorm < 1e-10 {
        Some((x, y))
    } else {
        None
    }
}

/// Finds all isolated common zeros of the Gauss-map polynomials on the
/// square `[-1, 1]^2` by a sign-change grid scan followed by damped Newton
/// polish. Zeros may fall slightly outside the unit disc; the violation
/// check clamps `nu3^2` at zero for those.
/// The finiteness of the result is the numerical face of the isolated-locus
/// argument behind the non-existence case.
pub fn gauss_locus(p: &NonUnimodularParams, resolution: usize) -> Result<Vec<GaussLocusSolution>> {
    let scale = p.scale();
    if branch_zero(p.a, scale) || branch_eq(p.a, 1.0, scale) || branch_zero(p.b, scale) {
        return Err(Error::ParameterOutOfRange(format!(
            "gauss_locus requires a not in {{0, 1}} and b != 0, got a = {}, b = {}",
            p.a, p.b
        )));
    }
    let n = resolution.max(8);
    let h = 2.0 / n as f64;
    let coord = |i: usize| -1.0 + h * i as f64;

    // cache one row of P values at a time to avoid recomputation
    let mut solutions: Vec<(f64, f64)> = Vec::new();
    let eval_p = |x: f64, y: f64| gauss_polynomials(p, x, y).0;
    let eval_q = |x: f64, y: f64| gauss_polynomials(p, x, y).1;
    for i in 0..n {
        for j in 0..n {
            let (x0, x1) = (coord(i), coord(i + 1));
            let (y0, y1) = (coord(j), coord(j + 1));
            let pc = [
                eval_p(x0, y0),
                eval_p(x1, y0),
                eval_p(x0, y1),
                eval_p(x1, y1),
            ];
            let qc = [
                eval_q(x0, y0),
                eval_q(x1, y0),
                eval_q(x0, y1),
                eval_q(x1, y1),
            ];
            let sign_change = |v: &[f64; 4]| {
                let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.0 && hi >= 0.0
            };
            if sign_change(&pc) && sign_change(&qc) {
                if let Some((x, y)) = newton_polish(p, 0.5 * (x0 + x1), 0.5 * (y0 + y1)) {
                    if x.abs() <= 1.0 + 1e-9 && y.abs() <= 1.0 + 1e-9 {
                        solutions.push((x, y));
                    }
                }
            }
        }
    }

    solutions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut deduped: Vec<(f64, f64)> = Vec::new();
    for (x, y) in solutions {
        if !deduped
            .iter()
            .any(|&(dx, dy)| (x - dx).hypot(y - dy) < 1e-6)
        {
            deduped.push((x, y));
        }
    }

    Ok(deduped
        .into_iter()
        .map(|(x, y)| {
            let (pv, qv) = gauss_polynomials(p, x, y);
            GaussLocusSolution {
                x,
                y,
                p_residual: pv.abs(),
                q_residual: qv.abs(),
            }
        })
        .collect())
}

/// Validates a serialized classification report against the stable schema:
/// exact key set, value types, known tags, and the emptiness invariant tying
/// the surface list to the non-existence case.
pub fn validate_report_json(v: &Value) -> std::result::Result<(), String> {
    let obj = v.as_object().ok_or("report must be a JSON object")?;
    let expected = ["family", "params", "group_label", "case", "surfaces", "evidence", "lcf"];
    for key in expected {
        if !obj.contains_key(key) {
            return Err(format!("missing field {key:?}"));
        }
    }
    if obj.len() != expected.len() {
        return Err("unexpected extra fields".into());
    }

    let family = obj["family"].as_str().ok_or("family must be a string")?;
    let params = obj["params"].as_array().ok_or("params must be an array")?;
    let arity = match family {
        "unimodular" => 3,
        "non-unimodular" => 2,
        other => return Err(format!("unknown family {other:?}")),
    };
    if params.len() != arity || params.iter().any(|p| !p.is_number()) {
        return Err(format!("params must be {arity} numbers"));
    }
    obj["group_label"].as_str().ok_or("group_label must be a string")?;

    let case = obj["case"].as_str().ok_or("case must be a string")?;
    let known_cases = [
        CASE_CONSTANT_CURVATURE,
        CASE_GEODESIC_PAIR,
        CASE_GEODESIC_PAIR_AND_PROFILE,
        CASE_HYPERBOLIC_SPACE,
        CASE_H2_X_R,
        CASE_GEODESIC_AND_PROFILE_FAMILIES,
        CASE_NONE,
    ];
    if !known_cases.contains(&case) {
        return Err(format!("unknown case tag {case:?}"));
    }

    let surfaces = obj["surfaces"].as_array().ok_or("surfaces must be an array")?;
    let known_kinds = [
        KIND_GEODESIC_DISTRIBUTION,
        KIND_UMBILIC_PROFILE,
        KIND_CLASSICAL,
    ];
    for s in surfaces {
        let s = s.as_object().ok_or("surface entry must be an object")?;
        let kind = s
            .get("kind")
            .and_then(Value::as_str)
            .ok_or("surface kind must be a string")?;
        if !known_kinds.contains(&kind) {
            return Err(format!("unknown surface kind {kind:?}"));
        }
        s.get("descriptor")
            .and_then(Value::as_str)
            .ok_or("surface descriptor must be a string")?;
        if s.len() != 2 {
            return Err("surface entry must have exactly kind and descriptor".into());
        }
    }

    if (case == CASE_NONE) != surfaces.is_empty() {
        return Err("surfaces must be empty exactly in the non-existence case".into());
    }

    let evidence = obj["evidence"].as_object().ok_or("evidence must be an object")?;
    for (k, val) in evidence {
        if !(val.is_number() || val.is_string() || val.is_null()) {
            return Err(format!("evidence value {k:?} must be a scalar or null"));
        }
    }
    obj["lcf"].as_bool().ok_or("lcf must be a boolean")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(c1: f64, c2: f64, c3: f64) -> ClassificationReport {
        classify_unimodular(&StructureConstants::new(c1, c2, c3))
    }

    fn nonuni(a: f64, b: f64) -> ClassificationReport {
        classify_nonunimodular(&NonUnimodularParams::new(a, b).unwrap())
    }

    #[test]
    fn unimodular_case_tags() {
        let r = uni(1.0, 1.0, 1.0);
        assert_eq!(r.case, CASE_CONSTANT_CURVATURE);
        assert_eq!(r.group_label, "SU(2)");
        assert!(r.lcf);

        let r = uni(2.0, 1.0, -1.0);
        assert_eq!(r.case, CASE_GEODESIC_PAIR);
        assert_eq!(r.surfaces.len(), 2);
        assert!(!r.lcf);

        let r = uni(1.0, 0.0, -1.0);
        assert_eq!(r.case, CASE_GEODESIC_PAIR_AND_PROFILE);
        assert_eq!(r.group_label, "Sol3");
        assert_eq!(r.surfaces.len(), 3);
        assert!(!r.lcf);
    }

    #[test]
    fn nonunimodular_case_tags() {
        let r = nonuni(0.0, 0.7);
        assert_eq!(r.case, CASE_HYPERBOLIC_SPACE);
        assert!(r.lcf);

        let r = nonuni(1.0, 0.0);
        assert_eq!(r.case, CASE_H2_X_R);
        assert!(r.lcf);

        let r = nonuni(0.5, 0.0);
        assert_eq!(r.case, CASE_GEODESIC_AND_PROFILE_FAMILIES);
        assert_eq!(r.surfaces.len(), 4);
        assert!(!r.lcf);

        let r = nonuni(0.5, 1.0);
        assert_eq!(r.case, CASE_NONE);
        assert!(r.surfaces.is_empty());

        let r = nonuni(1.0, 0.5);
        assert_eq!(r.case, CASE_NONE);
        assert_eq!(r.group_label, "E~(kappa, tau)");
    }

    #[test]
    fn nonexistence_evidence_criteria() {
        let ev = nonexistence_evidence_unimodular(&StructureConstants::new(1.0, 1.0, 2.0));
        assert_eq!(ev["criterion"], "positive-scalar-curvature");
        assert!(ev["rho"].as_f64().unwrap() > 0.0);

        let ev = nonexistence_evidence_unimodular(&StructureConstants::new(2.0, 1.0, -1.0));
        assert_eq!(ev["criterion"], "existence-case");

        let ev = nonexistence_evidence_unimodular(&StructureConstants::new(3.0, 1.0, -1.0));
        assert_eq!(ev["criterion"], "polynomial-obstruction");
        assert!(ev["delta"].as_f64().unwrap().abs() > 1.0);
    }

    #[test]
    fn classification_invariant_under_sign_and_permutation() {
        let base = uni(1.0, 0.0, -1.0);
        for c in [
            StructureConstants::new(-1.0, 0.0, 1.0),
            StructureConstants::new(0.0, -1.0, 1.0),
            StructureConstants::new(1.0, -1.0, 0.0),
            StructureConstants::new(0.0, 1.0, -1.0),
        ] {
            let r = classify_unimodular(&c);
            assert_eq!(r.case, base.case, "constants {:?}", c.to_array());
            assert_eq!(r.group_label, base.group_label);
            assert_eq!(r.params, base.params);
        }
    }

    #[test]
    fn gauss_locus_anchor() {
        let p = NonUnimodularParams::new(2.0, 1.0).unwrap();
        // P(0, y) vanishes exactly at y = +-sqrt(2a)/sqrt(a^2+3a+2)
        let y1 = (2.0 * p.a).sqrt() / (p.a * p.a + 3.0 * p.a + 2.0).sqrt();
        let (pv, _) = gauss_polynomials(&p, 0.0, y1);
        assert!(pv.abs() < 1e-12, "P(0, y1) = {pv}");
        let expected_q = 2.0 * p.a * p.a * p.b * (p.a * p.a + p.a + 2.0) / (p.a + 2.0).powi(2);
        let (_, qv) = gauss_polynomials(&p, 0.0, y1);
        assert!((qv - expected_q).abs() < 1e-12, "Q(0, y1) = {qv}");
        assert!((expected_q - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_locus_solutions_violate_constant_angle() {
        let p = NonUnimodularParams::new(2.0, 1.0).unwrap();
        let sols = gauss_locus(&p, 400).unwrap();
        // for a = 2, b = 1 the locus is the antipodal pair near (0.98, 0.38)
        assert_eq!(sols.len(), 2, "expected the antipodal zero pair");
        for s in &sols {
            assert!(s.p_residual < 1e-9 && s.q_residual < 1e-9);
            assert!(s.x.abs() <= 1.0 && s.y.abs() <= 1.0);
            assert!(
                constant_angle_violation(&p, s) >= 1e-3,
                "solution ({}, {}) nearly satisfies the constant-angle equations",
                s.x,
                s.y
            );
        }
        // deterministic ordering
        let again = gauss_locus(&p, 400).unwrap();
        assert_eq!(sols.len(), again.len());
        for (a, b) in sols.iter().zip(&again) {
            assert_eq!(a.x, b.x);
            assert_eq!(a.y, b.y);
        }
    }

    #[test]
    fn gauss_locus_rejects_degenerate_parameters() {
        for (a, b) in [(0.0, 1.0), (1.0, 1.0), (2.0, 0.0)] {
            let p = NonUnimodularParams::new(a, b).unwrap();
            assert!(gauss_locus(&p, 100).is_err(), "a = {a}, b = {b}");
        }
    }

    #[test]
    fn reports_satisfy_schema() {
        let reports = [
            uni(1.0, 1.0, 1.0),
            uni(2.0, 1.0, -1.0),
            uni(1.0, 0.0, -1.0),
            uni(3.0, 1.0, -1.0),
            nonuni(0.0, 0.7),
            nonuni(1.0, 0.0),
            nonuni(0.5, 0.0),
            nonuni(0.5, 1.0),
            nonuni(1.0, 0.5),
        ];
        for r in &reports {
            let v = r.to_json();
            validate_report_json(&v).unwrap_or_else(|e| panic!("{e}: {v}"));
            // round-trip through text keeps validity
            let text = serde_json::to_string(r).unwrap();
            let parsed: Value = serde_json::from_str(&text).unwrap();
            validate_report_json(&parsed).unwrap();
        }
    }

    #[test]
    fn serialized_field_order_is_stable() {
        let text = serde_json::to_string(&uni(1.0, 0.0, -1.0)).unwrap();
        let order = ["\"family\"", "\"params\"", "\"group_label\"", "\"case\"", "\"surfaces\"", "\"evidence\"", "\"lcf\""];
        let positions: Vec<usize> = order.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
    }
}
