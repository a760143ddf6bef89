//! Algebraic layer for 3-dimensional metric Lie groups.
//!
//! Both families are handled at the Lie-algebra level: structure constants
//! and brackets, Levi-Civita connection tables in the left-invariant
//! orthonormal frame, the curvature tensor (closed-form decomposition and an
//! independent brute-force evaluator), and the scalar invariants that drive
//! the umbilical-surface classification.

use serde::Serialize;

/// Relative tolerance for discrete classification branches (`c_i = c_j`,
/// `c_2 = c_1 + c_3`, `mu_i = 0`, ...). Exact-zero inputs compare exactly.
pub const BRANCH_TOL: f64 = 1e-9;

/// A vector in the Lie algebra, expressed in the left-invariant orthonormal
/// frame `{E1, E2, E3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct AlgebraVector {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl AlgebraVector {
    pub const ZERO: Self = Self {
        e1: 0.0,
        e2: 0.0,
        e3: 0.0,
    };

    pub fn new(e1: f64, e2: f64, e3: f64) -> Self {
        Self { e1, e2, e3 }
    }

    /// Frame vector `E_{i+1}` for `i` in `0..3`.
    pub fn basis(i: usize) -> Self {
        let mut v = Self::ZERO;
        match i {
            0 => v.e1 = 1.0,
            1 => v.e2 = 1.0,
            2 => v.e3 = 1.0,
            _ => panic!("frame index out of range: {i}"),
        }
        v
    }

    pub fn comp(&self, i: usize) -> f64 {
        match i {
            0 => self.e1,
            1 => self.e2,
            2 => self.e3,
            _ => panic!("frame index out of range: {i}"),
        }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.e1, self.e2, self.e3]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.e1 * other.e1 + self.e2 * other.e2 + self.e3 * other.e3
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.e2 * other.e3 - self.e3 * other.e2,
            self.e3 * other.e1 - self.e1 * other.e3,
            self.e1 * other.e2 - self.e2 * other.e1,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.e1 * s, self.e2 * s, self.e3 * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.e1 + other.e1, self.e2 + other.e2, self.e3 + other.e3)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.e1 - other.e1, self.e2 - other.e2, self.e3 - other.e3)
    }

    pub fn normalized(&self) -> Self {
        self.scale(1.0 / self.norm())
    }
}

/// Structure constants of a unimodular group in its diagonalizing frame:
/// `[E1,E2] = c3 E3`, `[E2,E3] = c1 E1`, `[E3,E1] = c2 E2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// The linear transform of the structure constants in which the connection
/// table is diagonal-simple: `mu1 = (-c1 + c2 + c3) / 2` and cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuTriple {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
}

impl MuTriple {
    pub fn get(&self, i: usize) -> f64 {
        match i {
            0 => self.mu1,
            1 => self.mu2,
            2 => self.mu3,
            _ => panic!("mu index out of range: {i}"),
        }
    }

    /// Inverse of [`StructureConstants::mu`]: `c1 = mu2 + mu3` and cyclic.
    pub fn to_structure_constants(&self) -> StructureConstants {
        StructureConstants {
            c1: self.mu2 + self.mu3,
            c2: self.mu1 + self.mu3,
            c3: self.mu1 + self.mu2,
        }
    }
}

/// Record of how raw structure constants were brought to the canonical
/// ordering `c3 <= c2 <= c1`. The permutation maps canonical frame index
/// `i` to the original index `permutation[i]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedStructure {
    pub constants: StructureConstants,
    pub sign_flipped: bool,
    pub permutation: [usize; 3],
}

impl StructureConstants {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn get(&self, i: usize) -> f64 {
        match i {
            0 => self.c1,
            1 => self.c2,
            2 => self.c3,
            _ => panic!("structure constant index out of range: {i}"),
        }
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Magnitude scale used by the relative branch tolerance.
    pub fn scale(&self) -> f64 {
        1.0f64.max(self.c1.abs()).max(self.c2.abs()).max(self.c3.abs())
    }

    pub fn mu(&self) -> MuTriple {
        MuTriple {
            mu1: 0.5 * (-self.c1 + self.c2 + self.c3),
            mu2: 0.5 * (self.c1 - self.c2 + self.c3),
            mu3: 0.5 * (self.c1 + self.c2 - self.c3),
        }
    }

    /// Canonical form `c3 <= c2 <= c1`, applying a global sign flip when the
    /// sign pattern would otherwise fall outside the standard table. The
    /// sign choice with more positive entries wins (this is what keeps at
    /// most one entry negative); ties break toward the lexicographically
    /// larger sorted triple.
    pub fn normalize(&self) -> NormalizedStructure {
        let scale = self.scale();
        let sort = |sign: f64| -> ([f64; 3], [usize; 3]) {
            let mut idx = [0usize, 1, 2];
            let vals = [sign * self.c1, sign * self.c2, sign * self.c3];
            idx.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
            ([vals[idx[0]], vals[idx[1]], vals[idx[2]]], idx)
        };
        let positives = |v: &[f64; 3]| {
            v.iter()
                .filter(|&&x| x > 0.0 && !branch_zero(x, scale))
                .count()
        };
        let (plus, plus_idx) = sort(1.0);
        let (minus, minus_idx) = sort(-1.0);
        let flip = (positives(&minus), minus) > (positives(&plus), plus);
        let (vals, idx) = if flip { (minus, minus_idx) } else { (plus, plus_idx) };
        NormalizedStructure {
            constants: StructureConstants::new(vals[0], vals[1], vals[2]),
            sign_flipped: flip,
            permutation: idx,
        }
    }
}

/// Parameters `(a, b)` of the non-unimodular family `R^2 x|_{A(a,b)} R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonUnimodularParams {
    pub a: f64,
    pub b: f64,
}

impl NonUnimodularParams {
    pub fn new(a: f64, b: f64) -> crate::error::Result<Self> {
        if a < 0.0 || b < 0.0 {
            return Err(crate::error::Error::ParameterOutOfRange(format!(
                "non-unimodular parameters must satisfy a >= 0 and b >= 0, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn scale(&self) -> f64 {
        1.0f64.max(self.a.abs()).max(self.b.abs())
    }
}

/// Comparison helpers shared by the classification branches. Exact zeros
/// short-circuit so symbolic-intent integer inputs branch exactly.
pub fn branch_eq(x: f64, y: f64, scale: f64) -> bool {
    x == y || (x - y).abs() <= BRANCH_TOL * scale
}

pub fn branch_zero(x: f64, scale: f64) -> bool {
    x == 0.0 || x.abs() <= BRANCH_TOL * scale
}

/// Bracket of the unimodular family: `[X, Y] = L(X ^ Y)` with
/// `L = diag(c1, c2, c3)` in the frame.
pub fn bracket_unimodular(c: &StructureConstants, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    let w = x.cross(y);
    AlgebraVector::new(c.c1 * w.e1, c.c2 * w.e2, c.c3 * w.e3)
}

/// Bracket of the non-unimodular family: bilinear extension of
/// `[E1,E2] = 0`, `[E2,E3] = (1-a)b E1 - (1-a) E2`,
/// `[E3,E1] = (1+a) E1 + (1+a)b E2`.
pub fn bracket_nonunimodular(
    p: &NonUnimodularParams,
    x: &AlgebraVector,
    y: &AlgebraVector,
) -> AlgebraVector {
    let (a, b) = (p.a, p.b);
    let e23 = AlgebraVector::new((1.0 - a) * b, -(1.0 - a), 0.0);
    let e31 = AlgebraVector::new(1.0 + a, (1.0 + a) * b, 0.0);
    // coefficients of x ^ y on (E2^E3, E3^E1, E1^E2)
    let w = x.cross(y);
    e23.scale(w.e1).add(&e31.scale(w.e2))
}

/// All 27 coefficients `gamma[i][j][k] = <nabla_{E_i} E_j, E_k>` of the
/// Levi-Civita connection in the left-invariant frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionTable {
    pub gamma: [[[f64; 3]; 3]; 3],
}

impl ConnectionTable {
    pub fn zero() -> Self {
        Self {
            gamma: [[[0.0; 3]; 3]; 3],
        }
    }

    /// Unimodular table: `nabla_{E1} E2 = mu1 E3` and the cyclic pattern.
    pub fn unimodular(c: &StructureConstants) -> Self {
        let mu = c.mu();
        let mut t = Self::zero();
        t.gamma[0][1][2] = mu.mu1;
        t.gamma[0][2][1] = -mu.mu1;
        t.gamma[1][0][2] = -mu.mu2;
        t.gamma[1][2][0] = mu.mu2;
        t.gamma[2][0][1] = mu.mu3;
        t.gamma[2][1][0] = -mu.mu3;
        t
    }

    /// Non-unimodular table, entry by entry.
    pub fn nonunimodular(p: &NonUnimodularParams) -> Self {
        let (a, b) = (p.a, p.b);
        let mut t = Self::zero();
        t.gamma[0][0][2] = 1.0 + a;
        t.gamma[0][1][2] = a * b;
        t.gamma[0][2][0] = -(1.0 + a);
        t.gamma[0][2][1] = -a * b;
        t.gamma[1][0][2] = a * b;
        t.gamma[1][1][2] = 1.0 - a;
        t.gamma[1][2][0] = -a * b;
        t.gamma[1][2][1] = -(1.0 - a);
        t.gamma[2][0][1] = b;
        t.gamma[2][1][0] = -b;
        t
    }

    /// Koszul formula applied to an arbitrary left-invariant bracket on an
    /// orthonormal frame. Used for the general semidirect models.
    pub fn from_bracket<F>(bracket: F) -> Self
    where
        F: Fn(&AlgebraVector, &AlgebraVector) -> AlgebraVector,
    {
        let e = |i: usize| AlgebraVector::basis(i);
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let term1 = bracket(&e(i), &e(j)).comp(k);
                    let term2 = bracket(&e(j), &e(k)).comp(i);
                    let term3 = bracket(&e(k), &e(i)).comp(j);
                    t.gamma[i][j][k] = 0.5 * (term1 - term2 + term3);
                }
            }
        }
        t
    }

    /// `nabla_{E_i} E_j` as a frame vector.
    pub fn nabla(&self, i: usize, j: usize) -> AlgebraVector {
        AlgebraVector::from_array(self.gamma[i][j])
    }

    /// Covariant derivative `nabla_X Y` of left-invariant fields with
    /// constant frame coefficients.
    pub fn derivative(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        let mut out = AlgebraVector::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out = out.add(&self.nabla(i, j).scale(x.comp(i) * y.comp(j)));
            }
        }
        out
    }
}

/// Outcome of checking a connection table against its defining identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionCheck {
    /// Max over `i,j,k` of `|gamma[i][j][k] + gamma[i][k][j]|`.
    pub max_metric_violation: f64,
    /// Max over `i,j,k` of `|gamma[i][j][k] - gamma[j][i][k] - <[E_i,E_j], E_k>|`.
    pub max_torsion_violation: f64,
}

impl ConnectionCheck {
    pub fn max_violation(&self) -> f64 {
        self.max_metric_violation.max(self.max_torsion_violation)
    }
}

/// Checks metric compatibility and torsion-freeness of a table against a
/// bracket evaluator.
pub fn verify_connection<F>(t: &ConnectionTable, bracket: F) -> ConnectionCheck
where
    F: Fn(&AlgebraVector, &AlgebraVector) -> AlgebraVector,
{
    let mut metric: f64 = 0.0;
    let mut torsion: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let br = bracket(&AlgebraVector::basis(i), &AlgebraVector::basis(j));
            for k in 0..3 {
                metric = metric.max((t.gamma[i][j][k] + t.gamma[i][k][j]).abs());
                torsion = torsion.max((t.gamma[i][j][k] - t.gamma[j][i][k] - br.comp(k)).abs());
            }
        }
    }
    ConnectionCheck {
        max_metric_violation: metric,
        max_torsion_violation: torsion,
    }
}

/// The two families, bundled where an operation works uniformly on both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupFamily {
    Unimodular(StructureConstants),
    NonUnimodular(NonUnimodularParams),
}

impl GroupFamily {
    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        match self {
            GroupFamily::Unimodular(c) => bracket_unimodular(c, x, y),
            GroupFamily::NonUnimodular(p) => bracket_nonunimodular(p, x, y),
        }
    }

    pub fn connection(&self) -> ConnectionTable {
        match self {
            GroupFamily::Unimodular(c) => ConnectionTable::unimodular(c),
            GroupFamily::NonUnimodular(p) => ConnectionTable::nonunimodular(p),
        }
    }

    /// Coefficients of the curvature decomposition `R = k1 R1 + k2 R2 + k3 R3`.
    pub fn curvature_coefficients(&self) -> [f64; 3] {
        match self {
            GroupFamily::Unimodular(c) => {
                let m = c.mu();
                [
                    m.mu2 * m.mu3 - c.c1 * m.mu1,
                    m.mu1 * m.mu3 - c.c2 * m.mu2,
                    m.mu1 * m.mu2 - c.c3 * m.mu3,
                ]
            }
            GroupFamily::NonUnimodular(p) => {
                let (a, b) = (p.a, p.b);
                let bb = 1.0 + b * b;
                [
                    (1.0 - a) * (1.0 - a) * bb - b * b,
                    (1.0 + a) * (1.0 + a) * bb - b * b,
                    (1.0 - a * a) * bb - b * b,
                ]
            }
        }
    }
}

/// The elementary tensor `R_i(X, Y) Z` appearing in the curvature
/// decomposition lemmas.
fn elementary_curvature(i: usize, x: &AlgebraVector, y: &AlgebraVector, z: &AlgebraVector) -> AlgebraVector {
    let ei = AlgebraVector::basis(i);
    let (xe, ye, ze) = (x.comp(i), y.comp(i), z.comp(i));
    y.scale(x.dot(z))
        .sub(&x.scale(y.dot(z)))
        .sub(&y.scale(ze * xe))
        .add(&x.scale(ze * ye))
        .sub(&ei.scale(ye * x.dot(z)))
        .add(&ei.scale(xe * y.dot(z)))
}

/// Curvature tensor via the closed-form decomposition. This path never
/// touches the connection table, so it can be checked against
/// [`curvature_oracle`] without sharing intermediates.
pub fn curvature(
    family: &GroupFamily,
    x: &AlgebraVector,
    y: &AlgebraVector,
    z: &AlgebraVector,
) -> AlgebraVector {
    let k = family.curvature_coefficients();
    let mut out = AlgebraVector::ZERO;
    for i in 0..3 {
        out = out.add(&elementary_curvature(i, x, y, z).scale(k[i]));
    }
    out
}

/// Brute-force curvature from the connection table and bracket:
/// `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z`
/// on left-invariant fields.
pub fn curvature_oracle<F>(
    table: &ConnectionTable,
    bracket: F,
    x: &AlgebraVector,
    y: &AlgebraVector,
    z: &AlgebraVector,
) -> AlgebraVector
where
    F: Fn(&AlgebraVector, &AlgebraVector) -> AlgebraVector,
{
    let first = table.derivative(x, &table.derivative(y, z));
    let second = table.derivative(y, &table.derivative(x, z));
    let third = table.derivative(&bracket(x, y), z);
    first.sub(&second).sub(&third)
}

/// Sectional curvature `<R(X,Y)Y, X> / (|X|^2 |Y|^2 - <X,Y>^2)` via the
/// decomposition path.
pub fn sectional_curvature(family: &GroupFamily, x: &AlgebraVector, y: &AlgebraVector) -> f64 {
    let num = curvature(family, x, y, y).dot(x);
    let den = x.dot(x) * y.dot(y) - x.dot(y) * x.dot(y);
    num / den
}

/// Scalar curvature from the decomposition: double trace over the frame.
pub fn scalar_curvature_trace(family: &GroupFamily) -> f64 {
    let mut rho = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let ei = AlgebraVector::basis(i);
            let ej = AlgebraVector::basis(j);
            rho += curvature(family, &ei, &ej, &ej).dot(&ei);
        }
    }
    rho
}

/// The scalar invariants that drive the unimodular classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantScalars {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// `(mu1-mu2)(mu2-mu3)(mu3-mu1)(mu1 mu2 + mu2 mu3 + mu1 mu3)`.
    pub delta: f64,
    /// Scalar curvature `2(mu1 mu2 + mu1 mu3 + mu2 mu3)`.
    pub rho: f64,
    /// The gradient-bound constant in `|grad lambda|^2 = 4 lambda^2 (a - lambda^2)`;
    /// undefined when `mu1 mu2 + mu2 mu3 + mu1 mu3 = 0`.
    pub grad_bound_a: Option<f64>,
}

impl InvariantScalars {
    pub fn beta(&self) -> [f64; 3] {
        [self.beta1, self.beta2, self.beta3]
    }

    pub fn beta_norm_sq(&self) -> f64 {
        self.beta1 * self.beta1 + self.beta2 * self.beta2 + self.beta3 * self.beta3
    }
}

/// Evaluates the beta invariants, the system determinant, the scalar
/// curvature, and the gradient bound for a unimodular group.
pub fn invariant_scalars(c: &StructureConstants) -> InvariantScalars {
    let m = c.mu();
    let (m1, m2, m3) = (m.mu1, m.mu2, m.mu3);
    let beta1 = m2 * m2 * (m1 - m3) + m3 * m3 * (m1 - m2);
    let beta2 = m3 * m3 * (m2 - m1) + m1 * m1 * (m2 - m3);
    let beta3 = m1 * m1 * (m3 - m2) + m2 * m2 * (m3 - m1);
    let sigma2 = m1 * m2 + m2 * m3 + m1 * m3;
    let delta = (m1 - m2) * (m2 - m3) * (m3 - m1) * sigma2;
    let rho = 2.0 * sigma2;
    let grad_bound_a = if branch_zero(sigma2, c.scale() * c.scale()) {
        None
    } else {
        Some(-(m1 * m1 * m2 * m2 + m2 * m2 * m3 * m3 + m1 * m1 * m3 * m3) / sigma2)
    };
    InvariantScalars {
        beta1,
        beta2,
        beta3,
        delta,
        rho,
        grad_bound_a,
    }
}

/// The six simply-connected unimodular groups, keyed by the signs of the
/// normalized structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnimodularGroup {
    #[serde(rename = "SU(2)")]
    Su2,
    #[serde(rename = "SL~2(R)")]
    Sl2Tilde,
    #[serde(rename = "E~(2)")]
    E2Tilde,
    #[serde(rename = "Sol3")]
    Sol3,
    #[serde(rename = "Nil3")]
    Nil3,
    #[serde(rename = "R^3")]
    R3,
}

impl std::fmt::Display for UnimodularGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            UnimodularGroup::Su2 => "SU(2)",
            UnimodularGroup::Sl2Tilde => "SL~2(R)",
            UnimodularGroup::E2Tilde => "E~(2)",
            UnimodularGroup::Sol3 => "Sol3",
            UnimodularGroup::Nil3 => "Nil3",
            UnimodularGroup::R3 => "R^3",
        };
        f.write_str(s)
    }
}

/// Sign-table lookup, invariant under global sign flip and index
/// permutation of the structure constants.
pub fn identify_unimodular_group(c: &StructureConstants) -> UnimodularGroup {
    let n = c.normalize().constants;
    let scale = c.scale();
    let sign = |x: f64| -> i8 {
        if branch_zero(x, scale) {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    match (sign(n.c1), sign(n.c2), sign(n.c3)) {
        (1, 1, 1) => UnimodularGroup::Su2,
        (1, 1, -1) => UnimodularGroup::Sl2Tilde,
        (1, 1, 0) => UnimodularGroup::E2Tilde,
        (1, 0, -1) => UnimodularGroup::Sol3,
        (1, 0, 0) => UnimodularGroup::Nil3,
        (0, 0, 0) => UnimodularGroup::R3,
        other => unreachable!("sign pattern {other:?} cannot occur after normalization"),
    }
}

/// When exactly two structure constants coincide and the remaining one is
/// nonzero, the metric belongs to the two-parameter homogeneous family; the
/// parameters are recovered from `c_eq = kappa/(2 tau)`, `c_rest = 2 tau`.
/// Returns `(kappa, tau)`.
pub fn detect_ektau(c: &StructureConstants) -> Option<(f64, f64)> {
    let scale = c.scale();
    let v = c.to_array();
    for rest in 0..3 {
        let (i, j) = match rest {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if branch_eq(v[i], v[j], scale) && !branch_eq(v[i], v[rest], scale) {
            if branch_zero(v[rest], scale) {
                // flat case: isometric to the abelian geometry, no (kappa, tau)
                return None;
            }
            let tau = 0.5 * v[rest];
            let kappa = 2.0 * tau * v[i];
            return Some((kappa, tau));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {a} ~ {b} within {tol}");
    }

    fn assert_vec_close(a: &AlgebraVector, b: &AlgebraVector, tol: f64) {
        assert!(a.sub(b).norm() <= tol, "expected {a:?} ~ {b:?} within {tol}");
    }

    #[test]
    fn mu_from_c_examples() {
        let zero = StructureConstants::new(0.0, 0.0, 0.0).mu();
        assert_eq!((zero.mu1, zero.mu2, zero.mu3), (0.0, 0.0, 0.0));

        let ones = StructureConstants::new(1.0, 1.0, 1.0).mu();
        assert_eq!((ones.mu1, ones.mu2, ones.mu3), (0.5, 0.5, 0.5));

        let sol3 = StructureConstants::new(1.0, 0.0, -1.0).mu();
        assert_eq!((sol3.mu1, sol3.mu2, sol3.mu3), (-1.0, 0.0, 1.0));
    }

    #[test]
    fn mu_round_trips() {
        let c = StructureConstants::new(1.75, -0.5, 0.25);
        let back = c.mu().to_structure_constants();
        assert_close(back.c1, c.c1, 1e-15);
        assert_close(back.c2, c.c2, 1e-15);
        assert_close(back.c3, c.c3, 1e-15);
    }

    #[test]
    fn mu_ordering_anticorresponds() {
        let c = StructureConstants::new(2.0, 1.0, -1.0);
        let m = c.mu();
        // c3 <= c2 <= c1 forces mu1 <= mu2 <= mu3
        assert!(m.mu1 <= m.mu2 && m.mu2 <= m.mu3);
    }

    #[test]
    fn bracket_unimodular_examples() {
        let sol3 = StructureConstants::new(1.0, 0.0, -1.0);
        let e1 = AlgebraVector::basis(0);
        let e2 = AlgebraVector::basis(1);
        let e3 = AlgebraVector::basis(2);
        assert_vec_close(&bracket_unimodular(&sol3, &e1, &e2), &e3.scale(-1.0), 0.0);

        let x = AlgebraVector::new(0.3, -1.2, 0.7);
        assert_vec_close(
            &bracket_unimodular(&sol3, &x, &x),
            &AlgebraVector::ZERO,
            0.0,
        );

        let su2 = StructureConstants::new(1.0, 1.0, 1.0);
        assert_vec_close(&bracket_unimodular(&su2, &e2, &e3), &e1, 0.0);
    }

    #[test]
    fn bracket_nonunimodular_examples() {
        let p = NonUnimodularParams::new(0.7, 1.3).unwrap();
        let e1 = AlgebraVector::basis(0);
        let e2 = AlgebraVector::basis(1);
        let e3 = AlgebraVector::basis(2);
        assert_vec_close(&bracket_nonunimodular(&p, &e1, &e2), &AlgebraVector::ZERO, 0.0);
        let expected = AlgebraVector::new(1.7, 1.7 * 1.3, 0.0);
        assert_vec_close(&bracket_nonunimodular(&p, &e3, &e1), &expected, 1e-15);
        assert_vec_close(&bracket_nonunimodular(&p, &e3, &e3), &AlgebraVector::ZERO, 0.0);
    }

    #[test]
    fn nonunimodular_ad_e3_trace() {
        // trace of ad_{E3} is the non-unimodularity witness: always 2
        let p = NonUnimodularParams::new(1.9, 0.4).unwrap();
        let mut trace = 0.0;
        for i in 0..3 {
            let ei = AlgebraVector::basis(i);
            trace += bracket_nonunimodular(&p, &AlgebraVector::basis(2), &ei).comp(i);
        }
        assert_close(trace, 2.0, 1e-14);
    }

    #[test]
    fn connection_unimodular_examples() {
        let abelian = ConnectionTable::unimodular(&StructureConstants::new(0.0, 0.0, 0.0));
        assert_eq!(abelian, ConnectionTable::zero());

        let sol3 = ConnectionTable::unimodular(&StructureConstants::new(1.0, 0.0, -1.0));
        assert_eq!(sol3.gamma[0][1][2], -1.0);
        assert_eq!(sol3.gamma[1][2][0], 0.0);
        assert_eq!(sol3.gamma[2][0][1], 1.0);

        let su2 = ConnectionTable::unimodular(&StructureConstants::new(1.0, 1.0, 1.0));
        for i in 0..3 {
            for k in 0..3 {
                assert_eq!(su2.gamma[i][i][k], 0.0);
            }
        }
    }

    #[test]
    fn connection_nonunimodular_examples() {
        let h3 = ConnectionTable::nonunimodular(&NonUnimodularParams::new(0.0, 0.0).unwrap());
        assert_eq!(h3.gamma[0][0][2], 1.0);
        assert_eq!(h3.gamma[1][1][2], 1.0);
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(h3.gamma[2][j][k], 0.0);
            }
        }

        let p = NonUnimodularParams::new(0.8, 0.6).unwrap();
        let t = ConnectionTable::nonunimodular(&p);
        assert_eq!(t.gamma[2][0][1], 0.6);

        let edge = ConnectionTable::nonunimodular(&NonUnimodularParams::new(1.0, 0.0).unwrap());
        assert_eq!(edge.gamma[1][1][2], 0.0);
    }

    #[test]
    fn verify_connection_exact_for_both_families() {
        let c = StructureConstants::new(1.0, 0.0, -1.0);
        let check = verify_connection(&ConnectionTable::unimodular(&c), |x, y| {
            bracket_unimodular(&c, x, y)
        });
        assert_eq!(check.max_metric_violation, 0.0);
        assert_eq!(check.max_torsion_violation, 0.0);

        let p = NonUnimodularParams::new(0.5, 0.7).unwrap();
        let check = verify_connection(&ConnectionTable::nonunimodular(&p), |x, y| {
            bracket_nonunimodular(&p, x, y)
        });
        assert!(check.max_violation() < 1e-14);
    }

    #[test]
    fn verify_connection_detects_corruption() {
        let c = StructureConstants::new(1.0, 0.0, -1.0);
        let mut t = ConnectionTable::unimodular(&c);
        t.gamma[0][1][2] += 1e-3;
        let check = verify_connection(&t, |x, y| bracket_unimodular(&c, x, y));
        assert!(check.max_violation() >= 1e-3);
    }

    #[test]
    fn koszul_reproduces_closed_form_tables() {
        let c = StructureConstants::new(1.7, -0.9, 0.3);
        let koszul = ConnectionTable::from_bracket(|x, y| bracket_unimodular(&c, x, y));
        let closed = ConnectionTable::unimodular(&c);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_close(koszul.gamma[i][j][k], closed.gamma[i][j][k], 1e-15);
                }
            }
        }

        let p = NonUnimodularParams::new(1.4, 2.1).unwrap();
        let koszul = ConnectionTable::from_bracket(|x, y| bracket_nonunimodular(&p, x, y));
        let closed = ConnectionTable::nonunimodular(&p);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_close(koszul.gamma[i][j][k], closed.gamma[i][j][k], 1e-14);
                }
            }
        }
    }

    #[test]
    fn curvature_examples() {
        let sol3 = GroupFamily::Unimodular(StructureConstants::new(1.0, 0.0, -1.0));
        let e1 = AlgebraVector::basis(0);
        let e2 = AlgebraVector::basis(1);
        let r = curvature(&sol3, &e1, &e2, &e2);
        assert_vec_close(&r, &e1.scale(-1.0), 1e-14);

        let x = AlgebraVector::new(0.2, -0.4, 1.1);
        let z = AlgebraVector::new(1.0, 2.0, 3.0);
        assert_vec_close(&curvature(&sol3, &x, &x, &z), &AlgebraVector::ZERO, 1e-13);
    }

    #[test]
    fn hyperbolic_sectional_curvature() {
        let p = NonUnimodularParams::new(0.0, 0.8).unwrap();
        let fam = GroupFamily::NonUnimodular(p);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let k = sectional_curvature(&fam, &AlgebraVector::basis(i), &AlgebraVector::basis(j));
            assert_close(k, -1.0, 1e-12);
        }
    }

    #[test]
    fn curvature_matches_oracle_on_frame() {
        let c = StructureConstants::new(2.3, -0.4, 1.1);
        let fam = GroupFamily::Unimodular(c);
        let table = fam.connection();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let ei = AlgebraVector::basis(i);
                    let ej = AlgebraVector::basis(j);
                    let ek = AlgebraVector::basis(k);
                    let dec = curvature(&fam, &ei, &ej, &ek);
                    let orc = curvature_oracle(
                        &table,
                        |x, y| fam.bracket(x, y),
                        &ei,
                        &ej,
                        &ek,
                    );
                    assert_vec_close(&dec, &orc, 1e-12);
                }
            }
        }
    }

    #[test]
    fn invariant_scalars_examples() {
        let sol3 = invariant_scalars(&StructureConstants::new(1.0, 0.0, -1.0));
        assert_eq!(sol3.beta(), [-1.0, 0.0, 1.0]);
        assert_eq!(sol3.delta, -2.0);
        assert_eq!(sol3.rho, -2.0);
        assert_eq!(sol3.grad_bound_a, Some(1.0));

        let round = invariant_scalars(&StructureConstants::new(1.0, 1.0, 1.0));
        assert_eq!(round.beta(), [0.0, 0.0, 0.0]);

        let s = invariant_scalars(&StructureConstants::new(2.0, 1.0, -1.0));
        assert_eq!(s.beta(), [-4.0, 2.0, 2.0]);
        assert_eq!(s.delta, -12.0);
        assert_eq!(s.rho, -4.0);
    }

    #[test]
    fn grad_bound_undefined_when_denominator_vanishes() {
        // mu = (1, 1, -1/2): sigma2 = 1 - 1/2 - 1/2 = 0
        let c = MuTriple {
            mu1: 1.0,
            mu2: 1.0,
            mu3: -0.5,
        }
        .to_structure_constants();
        assert_eq!(invariant_scalars(&c).grad_bound_a, None);
    }

    #[test]
    fn rho_matches_double_trace() {
        let c = StructureConstants::new(1.3, -2.2, 0.9);
        let fam = GroupFamily::Unimodular(c);
        let s = invariant_scalars(&c);
        assert_close(s.rho, scalar_curvature_trace(&fam), 1e-12);
    }

    #[test]
    fn group_identification_table() {
        use UnimodularGroup::*;
        let cases = [
            ((1.0, 1.0, 1.0), Su2),
            ((1.0, 1.0, -1.0), Sl2Tilde),
            ((1.0, 1.0, 0.0), E2Tilde),
            ((1.0, 0.0, -1.0), Sol3),
            ((1.0, 0.0, 0.0), Nil3),
            ((0.0, 0.0, 0.0), R3),
        ];
        for ((c1, c2, c3), expect) in cases {
            let c = StructureConstants::new(c1, c2, c3);
            assert_eq!(identify_unimodular_group(&c), expect, "{c:?}");
            // invariance under global sign flip and permutation
            let flipped = StructureConstants::new(-c1, -c2, -c3);
            assert_eq!(identify_unimodular_group(&flipped), expect, "flip {c:?}");
            let permuted = StructureConstants::new(c3, c1, c2);
            assert_eq!(identify_unimodular_group(&permuted), expect, "perm {c:?}");
        }
    }

    #[test]
    fn normalize_sorts_and_flips() {
        let n = StructureConstants::new(-1.0, -1.0, -1.0).normalize();
        assert_eq!(n.constants, StructureConstants::new(1.0, 1.0, 1.0));
        assert!(n.sign_flipped);

        let n = StructureConstants::new(0.0, 1.0, -1.0).normalize();
        assert_eq!(n.constants, StructureConstants::new(1.0, 0.0, -1.0));

        let n = StructureConstants::new(1.0, -1.0, -1.0).normalize();
        assert_eq!(n.constants, StructureConstants::new(1.0, 1.0, -1.0));
        assert!(n.sign_flipped);
    }

    #[test]
    fn ektau_detection() {
        let kt = detect_ektau(&StructureConstants::new(1.0, 1.0, 2.0)).unwrap();
        assert_close(kt.1, 1.0, 1e-15); // tau
        assert_close(kt.0, 2.0, 1e-15); // kappa

        assert_eq!(detect_ektau(&StructureConstants::new(1.0, 0.0, -1.0)), None);
        assert_eq!(detect_ektau(&StructureConstants::new(1.0, 1.0, 0.0)), None);
        // Nil3 sits in the family with kappa = 0
        let kt = detect_ektau(&StructureConstants::new(0.0, 0.0, 1.0)).unwrap();
        assert_close(kt.0, 0.0, 1e-15);
        assert_close(kt.1, 0.5, 1e-15);
    }

    #[test]
    fn beta_sum_always_zero() {
        let grid = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
        for &c1 in &grid {
            for &c2 in &grid {
                for &c3 in &grid {
                    let s = invariant_scalars(&StructureConstants::new(c1, c2, c3));
                    assert!((s.beta1 + s.beta2 + s.beta3).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn beta_vanishing_characterization() {
        // all beta vanish iff mu1 = mu2 = mu3 or two of the mu vanish
        let grid = [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0];
        for &m1 in &grid {
            for &m2 in &grid {
                for &m3 in &grid {
                    let c = MuTriple {
                        mu1: m1,
                        mu2: m2,
                        mu3: m3,
                    }
                    .to_structure_constants();
                    let s = invariant_scalars(&c);
                    let zeros = [m1, m2, m3].iter().filter(|&&m| m == 0.0).count();
                    let expect = (m1 == m2 && m2 == m3) || zeros >= 2;
                    assert_eq!(
                        s.beta_norm_sq() < 1e-24,
                        expect,
                        "mu = ({m1}, {m2}, {m3})"
                    );
                }
            }
        }
    }
}
