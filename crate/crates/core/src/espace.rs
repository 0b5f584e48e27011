//! The real span `E3 = {x i1 + y i2 + z i3}` with `i1 = 1`, `i2 = a1 e1 + a2 e2`,
//! `i3 = b1 e1 + b2 e2`, and the lines of non-invertible elements inside it.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::{complex_pair, Biquat, Complex};
use crate::error::{Error, Result};

/// Rank tolerance for the 2×3 line systems.
pub const LINE_RANK_TOL: f64 = 1e-10;
/// Relative tolerance of the independence check on `i1, i2, i3`.
pub const INDEPENDENCE_TOL: f64 = 1e-10;

/// The constants `(a1, a2, b1, b2)` fixing `i2` and `i3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraParams {
    #[serde(with = "complex_pair")]
    pub a1: Complex,
    #[serde(with = "complex_pair")]
    pub a2: Complex,
    #[serde(with = "complex_pair")]
    pub b1: Complex,
    #[serde(with = "complex_pair")]
    pub b2: Complex,
}

/// Outcome of [`AlgebraParams::validate`]. Both checks are reported separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    /// `i1, i2, i3` are linearly independent over the reals.
    pub independent: bool,
    /// `f1(E3) = f2(E3) = C`: each of the pairs `(a1, b1)`, `(a2, b2)` holds a non-real number.
    pub surjective: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.independent && self.surjective
    }
}

impl AlgebraParams {
    pub fn new(a1: Complex, a2: Complex, b1: Complex, b2: Complex) -> Self {
        AlgebraParams { a1, a2, b1, b2 }
    }

    /// `i2` and `i3` as diagonal elements.
    pub fn i2(&self) -> Biquat {
        Biquat::diag(self.a1, self.a2)
    }

    pub fn i3(&self) -> Biquat {
        Biquat::diag(self.b1, self.b2)
    }

    pub fn validate(&self) -> ValidityReport {
        let as_real = |u: Complex, v: Complex| [u.re, u.im, v.re, v.im];
        let one = Complex::new(1.0, 0.0);
        let vectors = [as_real(one, one), as_real(self.a1, self.a2), as_real(self.b1, self.b2)];
        ValidityReport {
            independent: real_rank(&vectors, INDEPENDENCE_TOL) == 3,
            surjective: (self.a1.im != 0.0 || self.b1.im != 0.0)
                && (self.a2.im != 0.0 || self.b2.im != 0.0),
        }
    }

    /// Returns the params back if both validity checks pass.
    pub fn checked(self) -> Result<Self> {
        let report = self.validate();
        if !report.independent {
            return Err(Error::InvalidParams(
                "i1, i2, i3 are linearly dependent over R (rank of real 4-tuples < 3)".into(),
            ));
        }
        if !report.surjective {
            return Err(Error::InvalidParams(
                "f1(E3) = f2(E3) = C requires a non-real number in each of (a1, b1) and (a2, b2)"
                    .into(),
            ));
        }
        Ok(self)
    }
}

/// Gram-Schmidt rank with a tolerance relative to each vector's length.
fn real_rank<const N: usize>(vectors: &[[f64; N]], tol: f64) -> usize {
    let mut basis: Vec<[f64; N]> = Vec::new();
    for v in vectors {
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        let mut w = *v;
        for b in &basis {
            let dot: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let rest = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rest > tol * len {
            basis.push(w.map(|x| x / rest));
        }
    }
    basis.len()
}

/// Point `(x, y, z)` of R³, identified with `ζ = x i1 + y i2 + z i3`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct E3Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl E3Point {
    pub const ORIGIN: E3Point = E3Point { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        E3Point { x, y, z }
    }

    pub fn from_array([x, y, z]: [f64; 3]) -> Self {
        E3Point { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn euclid_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl Add for E3Point {
    type Output = E3Point;
    fn add(self, o: E3Point) -> E3Point {
        E3Point::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for E3Point {
    type Output = E3Point;
    fn sub(self, o: E3Point) -> E3Point {
        E3Point::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for E3Point {
    type Output = E3Point;
    fn mul(self, s: f64) -> E3Point {
        E3Point::new(self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Display for E3Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// `ξ1 = x + y a1 + z b1`, `ξ2 = x + y a2 + z b2` without validating `params`.
pub fn xi_pair(p: E3Point, params: &AlgebraParams) -> (Complex, Complex) {
    let xi1 = p.x + params.a1 * p.y + params.b1 * p.z;
    let xi2 = p.x + params.a2 * p.y + params.b2 * p.z;
    (xi1, xi2)
}

/// `ζ = ξ1 e1 + ξ2 e2`.
pub fn embed(p: E3Point, params: &AlgebraParams) -> Result<Biquat> {
    params.checked()?;
    let (xi1, xi2) = xi_pair(p, params);
    Ok(Biquat::diag(xi1, xi2))
}

/// `(f1(q), f2(q)) = (c1 + c3, c2 + c4)`.
pub fn functionals(q: &Biquat) -> (Complex, Complex) {
    (q.c[0] + q.c[2], q.c[1] + q.c[3])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LineLabel {
    L1,
    L2,
}

impl LineLabel {
    /// 0 for `ξ1`, 1 for `ξ2`.
    pub fn xi_index(self) -> usize {
        match self {
            LineLabel::L1 => 0,
            LineLabel::L2 => 1,
        }
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineLabel::L1 => "L1",
            LineLabel::L2 => "L2",
        })
    }
}

/// A line `point + t·direction` in R³ (equivalently, in E3).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineR3 {
    pub label: LineLabel,
    pub point: E3Point,
    pub direction: [f64; 3],
}

impl LineR3 {
    pub fn at(&self, t: f64) -> E3Point {
        let [dx, dy, dz] = self.direction;
        self.point + E3Point::new(dx, dy, dz) * t
    }

    /// The same line shifted to pass through `origin + point`.
    pub fn through(&self, origin: E3Point) -> LineR3 {
        LineR3 { point: origin + self.point, ..*self }
    }
}

/// `L1` (where `ξ1 = 0`) and `L2` (where `ξ2 = 0`).
///
/// `Lk`: `x + y Re(a) + z Re(b) = 0`, `y Im(a) + z Im(b) = 0` with `(a, b) = (ak, bk)`.
pub fn singular_lines(params: &AlgebraParams) -> Result<(LineR3, LineR3)> {
    if !params.validate().independent {
        return Err(Error::InvalidParams(
            "i1, i2, i3 are linearly dependent over R (rank of real 4-tuples < 3)".into(),
        ));
    }
    let l1 = solve_line(LineLabel::L1, params.a1, params.b1)?;
    let l2 = solve_line(LineLabel::L2, params.a2, params.b2)?;
    Ok((l1, l2))
}

fn solve_line(label: LineLabel, a: Complex, b: Complex) -> Result<LineR3> {
    let r1 = [1.0, a.re, b.re];
    let r2 = [0.0, a.im, b.im];
    let cross = [
        r1[1] * r2[2] - r1[2] * r2[1],
        r1[2] * r2[0] - r1[0] * r2[2],
        r1[0] * r2[1] - r1[1] * r2[0],
    ];
    let scale = norm3(r1) * norm3(r2);
    let len = norm3(cross);
    if scale == 0.0 || len <= LINE_RANK_TOL * scale {
        return Err(Error::DegenerateLine { label: label.to_string() });
    }
    let mut dir = cross.map(|v| v / len);
    if let Some(first) = dir.iter().copied().find(|v| v.abs() > LINE_RANK_TOL) {
        if first < 0.0 {
            dir = dir.map(|v| -v);
        }
    }
    // The system is homogeneous, so every line passes through the origin.
    Ok(LineR3 { label, point: E3Point::ORIGIN, direction: dir.map(|v| v + 0.0) })
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
