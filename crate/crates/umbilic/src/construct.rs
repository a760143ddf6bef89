//! Constructions of the classified surfaces: totally geodesic distributions
//! verified at the algebra level, umbilic profile curves (closed-form ODE
//! and residual shooting), the invariant surfaces they generate, and the
//! congruence isometries between profiles.

use std::io::Write;

use crate::algebra::{
    branch_eq, branch_zero, AlgebraVector, ConnectionTable, NonUnimodularParams,
    StructureConstants,
};
use crate::error::{Error, Result};
use crate::semidirect::{GroupPoint, Matrix2, PointMap};
use crate::surface::{Domain, SurfacePatch};

/// Profile integration halts once `(z')^2` exceeds this cap: the solutions
/// escape to infinity in finite time whenever the leading exponent is
/// positive, and beyond this speed the fixed-step integrator can no longer
/// hold the first integral to the required drift.
pub const PROFILE_SPEED_CAP_SQ: f64 = 4.0;

/// Tolerance of the shooting root-finder on the curvature difference.
pub const SHOOTING_TOL: f64 = 1e-10;

/// A plane distribution in the Lie algebra whose integral surfaces are
/// candidates for totally geodesic surfaces.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicDistribution {
    pub normal: AlgebraVector,
    pub span: [AlgebraVector; 2],
}

impl GeodesicDistribution {
    /// Max violation of the defining invariants: span orthogonal to the
    /// normal, and the bracket of the spanning pair staying inside the span
    /// (subalgebra closure).
    pub fn invariant_violation<F>(&self, bracket: F) -> f64
    where
        F: Fn(&AlgebraVector, &AlgebraVector) -> AlgebraVector,
    {
        let mut max = 0.0f64;
        for s in &self.span {
            max = max.max(s.dot(&self.normal).abs());
        }
        let br = bracket(&self.span[0], &self.span[1]);
        max.max(br.dot(&self.normal).abs() / self.normal.norm())
    }
}

/// The two candidate distributions of the unimodular existence case:
/// `span{sqrt(c1) E1 +- sqrt(-c3) E3, E2}`, returned when `c3 < 0 < c1` and
/// `c2 = c1 + c3` hold for the normalized constants, otherwise empty.
pub fn geodesic_distributions_unimodular(c: &StructureConstants) -> Vec<GeodesicDistribution> {
    let n = c.normalize().constants;
    let scale = c.scale();
    let case2 = n.c3 < 0.0
        && n.c1 > 0.0
        && !branch_zero(n.c1, scale)
        && !branch_zero(n.c3, scale)
        && branch_eq(n.c2, n.c1 + n.c3, scale);
    if !case2 {
        return Vec::new();
    }
    let (p, q) = (n.c1.sqrt(), (-n.c3).sqrt());
    let norm = (n.c1 - n.c3).sqrt();
    [1.0, -1.0]
        .iter()
        .map(|&sgn| GeodesicDistribution {
            span: [
                AlgebraVector::new(p, 0.0, sgn * q),
                AlgebraVector::basis(1),
            ],
            normal: AlgebraVector::new(-sgn * q / norm, 0.0, p / norm),
        })
        .collect()
}

/// The coordinate-plane distributions `{E1, E3}` and `{E2, E3}` of the
/// non-unimodular family; totally geodesic exactly when `b = 0`.
pub fn geodesic_distributions_nonunimodular(p: &NonUnimodularParams) -> Vec<GeodesicDistribution> {
    if !branch_zero(p.b, p.scale()) {
        return Vec::new();
    }
    vec![
        GeodesicDistribution {
            span: [AlgebraVector::basis(0), AlgebraVector::basis(2)],
            normal: AlgebraVector::basis(1),
        },
        GeodesicDistribution {
            span: [AlgebraVector::basis(1), AlgebraVector::basis(2)],
            normal: AlgebraVector::basis(0),
        },
    ]
}

/// Second fundamental form of a left-invariant distribution, evaluated
/// purely at the algebra level: `II_ij = <nabla_{S_i} S_j, N>`.
pub fn algebraic_second_form(
    table: &ConnectionTable,
    d: &GeodesicDistribution,
) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = table.derivative(&d.span[i], &d.span[j]).dot(&d.normal);
        }
    }
    out
}

/// Which diagonal semidirect model a profile curve lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileModel {
    /// `diag(1 + a, 1 - a)`; the graph direction is `y` and the sign of `a`
    /// records whether the curve is the standard (`a > 0`) or the mirrored
    /// (`a < 0`, graph over `x`) representative.
    NonUnimodular { a: f64 },
    /// `diag(1, c)` with the graph over `y`.
    Diag { c: f64 },
}

impl ProfileModel {
    pub fn model_matrix(&self) -> Matrix2 {
        match self {
            ProfileModel::NonUnimodular { a } => Matrix2::diag(1.0 + a, 1.0 - a),
            ProfileModel::Diag { c } => Matrix2::diag(1.0, *c),
        }
    }
}

/// One integration knot of a profile curve, with the stored second
/// derivative used by the quintic interpolant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub y: f64,
    pub z: f64,
    pub zprime: f64,
    pub zsecond: f64,
}

/// A numerically integrated umbilic profile curve.
#[derive(Debug, Clone)]
pub struct UmbilicProfile {
    pub model: ProfileModel,
    /// The first-integral constant `Lambda`.
    pub lambda_param: f64,
    /// Initial height `z(0)`.
    pub theta: f64,
    /// Knots ordered by increasing `y`, symmetric about `0`.
    pub samples: Vec<ProfileSample>,
    pub step: f64,
}

impl UmbilicProfile {
    /// Half-width of the integrated `y` range.
    pub fn y_end(&self) -> f64 {
        self.samples.last().map(|s| s.y).unwrap_or(0.0)
    }

    /// First-integral defect `(z')^2 - Lambda^2 e^{p z} + e^{q z}` with the
    /// model's exponents, the integration-quality monitor.
    pub fn first_integral_drift(&self, s: &ProfileSample) -> f64 {
        let (p, q) = self.integral_exponents();
        let l2 = self.lambda_param * self.lambda_param;
        s.zprime * s.zprime - l2 * (p * s.z).exp() + (q * s.z).exp()
    }

    fn integral_exponents(&self) -> (f64, f64) {
        match self.model {
            ProfileModel::NonUnimodular { a } => (2.0 * (3.0 * a - 1.0), 2.0 * (a - 1.0)),
            ProfileModel::Diag { c } => (2.0 * (1.0 - 2.0 * c), -2.0 * c),
        }
    }

    pub fn max_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| self.first_integral_drift(s).abs())
            .fold(0.0, f64::max)
    }

    /// Quintic Hermite evaluation of `(z, z')` at an arbitrary `y` inside
    /// the integrated range. Uses the stored `(z, z', z'')` at the two
    /// bracketing knots, so the interpolant is accurate enough to feed the
    /// finite-difference surface machinery.
    pub fn evaluate(&self, y: f64) -> Result<(f64, f64)> {
        let n = self.samples.len();
        if n < 2 || y < self.samples[0].y || y > self.samples[n - 1].y {
            return Err(Error::ParameterOutOfRange(format!(
                "profile evaluated outside its integrated range: y = {y}"
            )));
        }
        let idx = self
            .samples
            .partition_point(|s| s.y <= y)
            .clamp(1, n - 1)
            - 1;
        let (s0, s1) = (&self.samples[idx], &self.samples[idx + 1]);
        let h = s1.y - s0.y;
        let t = (y - s0.y) / h;
        let (p0, m0, a0) = (s0.z, h * s0.zprime, h * h * s0.zsecond);
        let (p1, m1, a1) = (s1.z, h * s1.zprime, h * h * s1.zsecond);
        let (t2, t3, t4, t5) = (t * t, t * t * t, t * t * t * t, t * t * t * t * t);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 0.5 * t3 - t4 + 0.5 * t5;
        let z = p0 * h0 + m0 * h1 + a0 * h2 + p1 * h3 + m1 * h4 + a1 * h5;
        let d0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let d1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let d2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
        let d3 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
        let d4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let d5 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
        let zp = (p0 * d0 + m0 * d1 + a0 * d2 + p1 * d3 + m1 * d4 + a1 * d5) / h;
        Ok((z, zp))
    }

    /// Writes the profile as CSV rows `y, z, zprime, first_integral_drift`.
    pub fn export_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "y,z,zprime,first_integral_drift")
            .map_err(|e| Error::ParameterOutOfRange(format!("write failed: {e}")))?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.12e},{:.12e},{:.12e},{:.12e}",
                s.y,
                s.z,
                s.zprime,
                self.first_integral_drift(s)
            )
            .map_err(|e| Error::ParameterOutOfRange(format!("write failed: {e}")))?;
        }
        Ok(())
    }
}

/// Integrates `z'' = rhs(z)` from `(theta, 0)` by classical RK4, mirroring
/// the forward half onto negative `y`, truncating once the speed cap or the
/// requested range is reached.
fn integrate_even_profile<F>(theta: f64, y_max: f64, step: f64, rhs: F) -> Vec<ProfileSample>
where
    F: Fn(f64) -> f64,
{
    let mut forward = vec![ProfileSample {
        y: 0.0,
        z: theta,
        zprime: 0.0,
        zsecond: rhs(theta),
    }];
    let (mut z, mut w, mut y) = (theta, 0.0f64, 0.0f64);
    let n = (y_max / step).round() as usize;
    for _ in 0..n {
        // RK4 on (z, w)
        let k1 = (w, rhs(z));
        let k2 = (w + 0.5 * step * k1.1, rhs(z + 0.5 * step * k1.0));
        let k3 = (w + 0.5 * step * k2.1, rhs(z + 0.5 * step * k2.0));
        let k4 = (w + step * k3.1, rhs(z + step * k3.0));
        let z_new = z + step / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        let w_new = w + step / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !z_new.is_finite() || w_new * w_new > PROFILE_SPEED_CAP_SQ {
            break;
        }
        z = z_new;
        w = w_new;
        y += step;
        forward.push(ProfileSample {
            y,
            z,
            zprime: w,
            zsecond: rhs(z),
        });
    }
    let mut samples: Vec<ProfileSample> = forward
        .iter()
        .skip(1)
        .rev()
        .map(|s| ProfileSample {
            y: -s.y,
            z: s.z,
            zprime: -s.zprime,
            zsecond: s.zsecond,
        })
        .collect();
    samples.extend(forward);
    samples
}

/// Internal closed-form solver without the sign restriction on `a`, so the
/// mirrored (`a -> -a`) representative of the second invariant family can
/// reuse it.
fn solve_profile_closed_raw(a: f64, lambda: f64, y_max: f64, step: f64) -> UmbilicProfile {
    let theta = -0.5 / a * lambda.ln();
    let l2 = lambda * lambda;
    let rhs = move |z: f64| {
        (3.0 * a - 1.0) * l2 * (2.0 * (3.0 * a - 1.0) * z).exp()
            - (a - 1.0) * (2.0 * (a - 1.0) * z).exp()
    };
    UmbilicProfile {
        model: ProfileModel::NonUnimodular { a },
        lambda_param: lambda,
        theta,
        samples: integrate_even_profile(theta, y_max, step, rhs),
        step,
    }
}

/// The closed-form umbilic profile ODE of the `b = 0` non-unimodular model,
/// integrated for the normalized representative `z(0) = -log(Lambda)/(2a)`,
/// `z'(0) = 0`.
pub fn solve_profile_closed(a: f64, lambda: f64, y_max: f64, step: f64) -> Result<UmbilicProfile> {
    if a <= 0.0 || (a - 1.0).abs() < 1e-12 || lambda <= 0.0 || step <= 0.0 {
        return Err(Error::ParameterOutOfRange(format!(
            "profile requires a > 0, a != 1, Lambda > 0, step > 0; got a = {a}, Lambda = {lambda}, step = {step}"
        )));
    }
    Ok(solve_profile_closed_raw(a, lambda, y_max, step))
}

/// Curvature-difference function of the `diag(1, c)` graph `z(y)`: the
/// shape operator is umbilical exactly when this vanishes; affine in `z''`.
fn shooting_gap(c: f64, z: f64, zp: f64, zpp: f64) -> f64 {
    let e = (-c * z).exp();
    let d = (zp * zp + e * e).sqrt();
    let dprime = (zp * zpp - c * zp * e * e) / d;
    let nu2_prime = -(zpp * d - zp * dprime) / (d * d);
    let nu3 = e / d;
    nu2_prime + (1.0 - c) * e * nu3
}

/// Finds the `z''` equalizing the two principal curvatures by bisection
/// with bracket expansion.
fn shoot_zsecond(c: f64, z: f64, zp: f64) -> Result<f64> {
    let gap = |zpp: f64| shooting_gap(c, z, zp, zpp);
    let (mut lo, mut hi) = (-1.0e4, 1.0e4);
    let (mut flo, mut fhi) = (gap(lo), gap(hi));
    let mut expand = 0;
    while flo * fhi > 0.0 {
        lo *= 4.0;
        hi *= 4.0;
        flo = gap(lo);
        fhi = gap(hi);
        expand += 1;
        if expand > 16 {
            return Err(Error::RootFindingFailure(format!(
                "no curvature-equalizing acceleration bracketed at z = {z}, z' = {zp}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = gap(mid);
        if fm.abs() < SHOOTING_TOL || hi - lo < 1e-13 * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Residual-shooting profile solver in the `diag(1, c)` model: at every
/// integrator stage the acceleration is chosen so the invariant graph
/// surface is umbilical. Covers the Sol3 surface at `c = -1` without
/// importing any closed form.
pub fn solve_profile_shooting(c: f64, z0: f64, step: f64, y_max: f64) -> Result<UmbilicProfile> {
    if !(-1.0..1.0).contains(&c) || step <= 0.0 {
        return Err(Error::ParameterOutOfRange(format!(
            "shooting requires c in [-1, 1) and step > 0; got c = {c}, step = {step}"
        )));
    }
    let mut forward = vec![ProfileSample {
        y: 0.0,
        z: z0,
        zprime: 0.0,
        zsecond: shoot_zsecond(c, z0, 0.0)?,
    }];
    let (mut z, mut w, mut y) = (z0, 0.0f64, 0.0f64);
    let n = (y_max / step).round() as usize;
    'outer: for _ in 0..n {
        let f = |z: f64, w: f64| shoot_zsecond(c, z, w);
        let k1 = (w, f(z, w)?);
        let k2 = (
            w + 0.5 * step * k1.1,
            f(z + 0.5 * step * k1.0, w + 0.5 * step * k1.1)?,
        );
        let k3 = (
            w + 0.5 * step * k2.1,
            f(z + 0.5 * step * k2.0, w + 0.5 * step * k2.1)?,
        );
        let k4 = (w + step * k3.1, f(z + step * k3.0, w + step * k3.1)?);
        let z_new = z + step / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        let w_new = w + step / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !z_new.is_finite() || w_new * w_new > PROFILE_SPEED_CAP_SQ {
            break 'outer;
        }
        z = z_new;
        w = w_new;
        y += step;
        forward.push(ProfileSample {
            y,
            z,
            zprime: w,
            zsecond: shoot_zsecond(c, z, w)?,
        });
    }
    let mut samples: Vec<ProfileSample> = forward
        .iter()
        .skip(1)
        .rev()
        .map(|s| ProfileSample {
            y: -s.y,
            z: s.z,
            zprime: -s.zprime,
            zsecond: s.zsecond,
        })
        .collect();
    samples.extend(forward);
    // Lambda of the diag-model first integral, fixed by z'(0) = 0
    let lambda_param = (-(1.0 - c) * z0).exp();
    Ok(UmbilicProfile {
        model: ProfileModel::Diag { c },
        lambda_param,
        theta: z0,
        samples,
        step,
    })
}

/// Which coordinate direction the invariant surface is ruled along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceDirection {
    XInvariant,
    YInvariant,
}

/// Builds the invariant surface generated by a profile: the graph
/// `(x, y) -> (x, y, z(y))` for the x-invariant family, or the mirrored
/// graph over `x` for the y-invariant family.
///
/// For a `NonUnimodular { a }` profile the y-invariant surface is produced
/// by re-solving the mirrored (`a -> -a`) representative of the same
/// `Lambda`, which is the profile of the curve `(x, 0, z(x))`.
pub fn build_invariant_surface(
    profile: &UmbilicProfile,
    direction: InvarianceDirection,
) -> Result<SurfacePatch> {
    let (model, effective) = match (profile.model, direction) {
        (ProfileModel::NonUnimodular { a }, InvarianceDirection::XInvariant) => {
            (Matrix2::diag(1.0 + a, 1.0 - a), profile.clone())
        }
        (ProfileModel::NonUnimodular { a }, InvarianceDirection::YInvariant) => (
            Matrix2::diag(1.0 + a, 1.0 - a),
            solve_profile_closed_raw(-a, profile.lambda_param, profile.y_end() + 1.0, profile.step),
        ),
        (ProfileModel::Diag { c }, InvarianceDirection::XInvariant) => {
            (Matrix2::diag(1.0, c), profile.clone())
        }
        (ProfileModel::Diag { .. }, InvarianceDirection::YInvariant) => {
            return Err(Error::ParameterOutOfRange(
                "the diag-model shooting profile only generates the x-invariant graph".into(),
            ));
        }
    };
    let margin = 10.0 * effective.step;
    let half = (effective.y_end() - margin).max(effective.step);
    let domain = match direction {
        InvarianceDirection::XInvariant => Domain::new(-1.0, 1.0, -half, half),
        InvarianceDirection::YInvariant => Domain::new(-half, half, -1.0, 1.0),
    };
    let chart = move |u: f64, v: f64| {
        let t = match direction {
            InvarianceDirection::XInvariant => v,
            InvarianceDirection::YInvariant => u,
        };
        let (z, _) = effective.evaluate(t).unwrap_or((f64::NAN, f64::NAN));
        GroupPoint::new(u, v, z)
    };
    Ok(SurfacePatch::new(model, chart, domain))
}

/// The ambient isometry `(x, y, z) -> (x e^{(1+a)w}, y e^{(1-a)w}, z + w)`
/// of the `b = 0` model, which identifies profiles with different `Lambda`.
pub fn congruence_map(a: f64, w: f64) -> PointMap {
    PointMap {
        linear: [
            [((1.0 + a) * w).exp(), 0.0, 0.0],
            [0.0, ((1.0 - a) * w).exp(), 0.0],
            [0.0, 0.0, 1.0],
        ],
        offset: [0.0, 0.0, w],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bracket_nonunimodular, bracket_unimodular, GroupFamily};

    #[test]
    fn unimodular_distributions_case2() {
        let c = StructureConstants::new(2.0, 1.0, -1.0);
        let ds = geodesic_distributions_unimodular(&c);
        assert_eq!(ds.len(), 2);
        let s = ds[0].span[0];
        assert!((s.e1 - 2.0f64.sqrt()).abs() < 1e-15 && (s.e3.abs() - 1.0).abs() < 1e-15);
        for d in &ds {
            assert!(d.invariant_violation(|x, y| bracket_unimodular(&c, x, y)) < 1e-12);
            let table = GroupFamily::Unimodular(c).connection();
            let ii = algebraic_second_form(&table, d);
            for row in ii {
                for x in row {
                    assert!(x.abs() < 1e-12, "II entry {x}");
                }
            }
        }
        // Sol3
        let sol3 = StructureConstants::new(1.0, 0.0, -1.0);
        let ds = geodesic_distributions_unimodular(&sol3);
        assert_eq!(ds.len(), 2);
        // round sphere: no distributions
        assert!(geodesic_distributions_unimodular(&StructureConstants::new(1.0, 1.0, 1.0)).is_empty());
    }

    #[test]
    fn nonunimodular_distributions() {
        let p = NonUnimodularParams::new(0.5, 0.0).unwrap();
        let ds = geodesic_distributions_nonunimodular(&p);
        assert_eq!(ds.len(), 2);
        let table = GroupFamily::NonUnimodular(p).connection();
        for d in &ds {
            assert!(d.invariant_violation(|x, y| bracket_nonunimodular(&p, x, y)) < 1e-12);
            let ii = algebraic_second_form(&table, d);
            for row in ii {
                for x in row {
                    assert!(x.abs() < 1e-12);
                }
            }
        }
        assert!(geodesic_distributions_nonunimodular(
            &NonUnimodularParams::new(0.5, 1.0).unwrap()
        )
        .is_empty());
    }

    #[test]
    fn non_geodesic_distribution_detected() {
        let c = StructureConstants::new(1.0, 1.0, 1.0);
        let d = GeodesicDistribution {
            span: [AlgebraVector::basis(0), AlgebraVector::basis(1)],
            normal: AlgebraVector::basis(2),
        };
        let table = GroupFamily::Unimodular(c).connection();
        let ii = algebraic_second_form(&table, &d);
        // off-diagonal entry is mu1 = 1/2
        assert!((ii[0][1].abs() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_profile_anchors() {
        let p = solve_profile_closed(2.0, 1.0, 5.0, 1e-3).unwrap();
        assert_eq!(p.theta, 0.0);
        let s0 = p.samples.iter().find(|s| s.y == 0.0).unwrap();
        assert_eq!(s0.zprime, 0.0);
        assert!((s0.zsecond - 4.0).abs() < 1e-10, "z''(0) = {}", s0.zsecond);
        assert!(p.max_drift() < 1e-6, "drift {}", p.max_drift());
        // evenness and lower bound
        for s in &p.samples {
            let (z, _) = p.evaluate(-s.y).unwrap();
            assert!((z - s.z).abs() < 1e-8);
            assert!(s.z >= p.theta - 1e-12);
        }
    }

    #[test]
    fn profile_drift_is_fourth_order() {
        let coarse = solve_profile_closed(2.0, 1.0, 5.0, 1e-3).unwrap();
        let fine = solve_profile_closed(2.0, 1.0, 5.0, 2.5e-4).unwrap();
        // compare over the overlapping resolvable range
        let y = coarse.y_end().min(fine.y_end()) - 0.01;
        let dc = coarse
            .samples
            .iter()
            .filter(|s| s.y.abs() <= y)
            .map(|s| coarse.first_integral_drift(s).abs())
            .fold(0.0, f64::max);
        let df = fine
            .samples
            .iter()
            .filter(|s| s.y.abs() <= y)
            .map(|s| fine.first_integral_drift(s).abs())
            .fold(0.0, f64::max);
        assert!(dc >= 100.0 * df, "coarse {dc:e} vs fine {df:e}");
    }

    #[test]
    fn profile_rejects_bad_parameters() {
        assert!(solve_profile_closed(-0.5, 1.0, 5.0, 1e-3).is_err());
        assert!(solve_profile_closed(1.0, 1.0, 5.0, 1e-3).is_err());
        assert!(solve_profile_closed(2.0, 0.0, 5.0, 1e-3).is_err());
        assert!(solve_profile_shooting(1.0, 0.0, 1e-3, 5.0).is_err());
    }

    #[test]
    fn quintic_interpolant_matches_knots_and_midpoints() {
        let p = solve_profile_closed(0.5, 1.0, 2.0, 1e-2).unwrap();
        let mid = p.samples[p.samples.len() / 2 + 3];
        let (z, zp) = p.evaluate(mid.y).unwrap();
        assert!((z - mid.z).abs() < 1e-14);
        assert!((zp - mid.zprime).abs() < 1e-12);
        // off-knot: check against a finer integration
        let fine = solve_profile_closed(0.5, 1.0, 2.0, 1e-3).unwrap();
        let y = mid.y + 0.5e-2;
        let (zc, zpc) = p.evaluate(y).unwrap();
        let (zf, zpf) = fine.evaluate(y).unwrap();
        assert!((zc - zf).abs() < 1e-8, "{zc} vs {zf}");
        assert!((zpc - zpf).abs() < 1e-7);
    }

    #[test]
    fn shooting_sol3_initial_acceleration() {
        // for c = -1, z0 = 0: the first integral (z')^2 = e^{6z} - e^{2z}
        // forces z''(0) = 3 e^{0} - e^{0} = 2
        let zpp = shoot_zsecond(-1.0, 0.0, 0.0).unwrap();
        assert!((zpp - 2.0).abs() < 1e-8, "z''(0) = {zpp}");
    }

    #[test]
    fn shooting_profile_satisfies_derived_first_integral() {
        let p = solve_profile_shooting(-1.0, 0.0, 1e-3, 5.0).unwrap();
        assert!(p.samples.len() > 100);
        assert!(p.max_drift() < 1e-6, "drift {}", p.max_drift());
    }

    #[test]
    fn shooting_matches_closed_form_through_homothety() {
        // the homothety (x, y, z) -> (s x, s y, s z), s = 1 + a, carries the
        // a-model onto the diag(1, c) model with c = (1 - a)/(1 + a); the
        // closed profile z_a maps to eta -> s * z_a(eta / s)
        let a = 2.0;
        let s = 1.0 + a;
        let c = (1.0 - a) / (1.0 + a);
        let closed = solve_profile_closed(a, 1.0, 5.0, 1e-3).unwrap();
        let shot = solve_profile_shooting(c, 0.0, 1e-3, 5.0).unwrap();
        let y_max = (s * closed.y_end()).min(shot.y_end()) - 0.01;
        let mut worst = 0.0f64;
        let mut eta = -y_max;
        while eta <= y_max {
            let (zc, _) = closed.evaluate(eta / s).unwrap();
            let (zs, _) = shot.evaluate(eta).unwrap();
            worst = worst.max((s * zc - zs).abs());
            eta += 0.05;
        }
        assert!(worst < 1e-4, "max profile mismatch {worst:e}");
    }

    #[test]
    fn congruence_map_is_isometry_and_matches_profiles() {
        let a = 2.0;
        let map = congruence_map(a, 1.0);
        let model = Matrix2::diag(1.0 + a, 1.0 - a);
        for q in [
            GroupPoint::IDENTITY,
            GroupPoint::new(0.5, -0.7, 0.3),
            GroupPoint::new(-1.0, 0.2, -0.8),
        ] {
            assert!(map.isometry_residual(&model, &q) < 1e-10);
        }
        assert_eq!(congruence_map(a, 0.0), PointMap::identity());

        // w = (log L1 - log L2) / (2a) carries the L1 profile onto the L2 one
        let l2 = (4.0f64).exp();
        let w = (0.0 - 4.0) / (2.0 * a);
        let map = congruence_map(a, w);
        let p1 = solve_profile_closed(a, 1.0, 5.0, 1e-3).unwrap();
        let p2 = solve_profile_closed(a, l2, 5.0, 1e-3).unwrap();
        let mut worst = 0.0f64;
        for s in p1.samples.iter().filter(|s| s.y.abs() < p1.y_end() - 0.01) {
            let image = map.apply(&GroupPoint::new(0.0, s.y, s.z));
            if image.y.abs() < p2.y_end() {
                let (z2, _) = p2.evaluate(image.y).unwrap();
                worst = worst.max((image.z - z2).abs());
            }
        }
        assert!(worst < 1e-6, "mapped profile mismatch {worst:e}");
    }

    #[test]
    fn csv_export_shape() {
        let p = solve_profile_closed(2.0, 1.0, 0.1, 1e-2).unwrap();
        let mut buf = Vec::new();
        p.export_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("y,z,zprime,first_integral_drift\n"));
        assert_eq!(text.lines().count(), p.samples.len() + 1);
    }
}
