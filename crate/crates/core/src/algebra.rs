//! Complex quaternions H(C) stored in the idempotent basis `{e1, e2, e3, e4}`.
//!
//! The basis relates to the classical `{1, I, J, K}` by
//!
//! ```text
//! e1 = (1 + iI)/2    e2 = (1 - iI)/2    e3 = (iJ - K)/2    e4 = (iJ + K)/2
//! ```
//!
//! and multiplies according to
//!
//! ```text
//!  ·  | e1  e2  e3  e4
//! ----+----------------
//!  e1 | e1  0   e3  0
//!  e2 | 0   e2  0   e4
//!  e3 | 0   e3  0   e1
//!  e4 | e4  0   e2  0
//! ```
//!
//! so that `1 = e1 + e2`. The element `c1 e1 + c2 e2 + c3 e3 + c4 e4` acts as the
//! 2×2 complex matrix `[[c1, c3], [c4, c2]]`; products, determinants and inverses
//! are read off that representation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar field of the algebra.
pub type Complex = Complex64;

/// Default relative tolerance for singularity checks.
pub const SINGULAR_TOL: f64 = 1e-12;

const ZERO_C: Complex = Complex::new(0.0, 0.0);
const ONE_C: Complex = Complex::new(1.0, 0.0);

/// Builds a complex number, rejecting NaN and infinities.
pub fn finite_complex(re: f64, im: f64) -> Result<Complex> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex::new(re, im))
    } else {
        Err(Error::NonFinite(format!("({re}, {im})")))
    }
}

/// Element of H(C) as coordinates in `{e1, e2, e3, e4}`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Biquat {
    pub c: [Complex; 4],
}

/// Coordinates of an element in the `{1, I, J, K}` basis.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct IjkCoords {
    pub one: Complex,
    pub i: Complex,
    pub j: Complex,
    pub k: Complex,
}

/// Which coordinates the norm is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    /// `sqrt(Σ|c_k|²)` over the idempotent-basis coordinates.
    EBasis,
    /// The same formula over `{1, I, J, K}` coordinates.
    IJKBasis,
}

impl Biquat {
    pub const ZERO: Biquat = Biquat { c: [ZERO_C; 4] };
    pub const ONE: Biquat = Biquat { c: [ONE_C, ONE_C, ZERO_C, ZERO_C] };
    pub const E1: Biquat = Biquat { c: [ONE_C, ZERO_C, ZERO_C, ZERO_C] };
    pub const E2: Biquat = Biquat { c: [ZERO_C, ONE_C, ZERO_C, ZERO_C] };
    pub const E3: Biquat = Biquat { c: [ZERO_C, ZERO_C, ONE_C, ZERO_C] };
    pub const E4: Biquat = Biquat { c: [ZERO_C, ZERO_C, ZERO_C, ONE_C] };

    pub const fn new(c1: Complex, c2: Complex, c3: Complex, c4: Complex) -> Self {
        Biquat { c: [c1, c2, c3, c4] }
    }

    /// Like [`Biquat::new`], but rejects non-finite coordinates.
    pub fn try_new(c: [Complex; 4]) -> Result<Self> {
        for z in &c {
            finite_complex(z.re, z.im)?;
        }
        Ok(Biquat { c })
    }

    /// The basis vector `e_k` for `k` in `1..=4`.
    pub fn basis(k: usize) -> Self {
        match k {
            1 => Self::E1,
            2 => Self::E2,
            3 => Self::E3,
            4 => Self::E4,
            _ => panic!("basis index {k} outside 1..=4"),
        }
    }

    /// Scalar multiple of the unit, `t·1 = t e1 + t e2`.
    pub fn scalar(t: Complex) -> Self {
        Biquat::new(t, t, ZERO_C, ZERO_C)
    }

    /// Diagonal element `ξ1 e1 + ξ2 e2`.
    pub fn diag(xi1: Complex, xi2: Complex) -> Self {
        Biquat::new(xi1, xi2, ZERO_C, ZERO_C)
    }

    pub fn scale(self, s: Complex) -> Self {
        Biquat { c: self.c.map(|z| z * s) }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// True when `c3 = c4 = 0` exactly.
    pub fn is_diagonal(&self) -> bool {
        self.c[2] == ZERO_C && self.c[3] == ZERO_C
    }

    /// Determinant of the 2×2 representation, `c1 c2 - c3 c4`.
    pub fn det(&self) -> Complex {
        self.c[0] * self.c[1] - self.c[2] * self.c[3]
    }

    pub fn to_ijk(&self) -> IjkCoords {
        let [c1, c2, c3, c4] = self.c;
        let half = 0.5;
        IjkCoords {
            one: (c1 + c2) * half,
            i: Complex::i() * (c1 - c2) * half,
            j: Complex::i() * (c3 + c4) * half,
            k: (c4 - c3) * half,
        }
    }

    pub fn from_ijk(q: IjkCoords) -> Self {
        let i = Complex::i();
        Biquat::new(q.one - i * q.i, q.one + i * q.i, -i * q.j - q.k, -i * q.j + q.k)
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::EBasis => self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            NormKind::IJKBasis => self.to_ijk().norm(),
        }
    }

    /// Norm over e-basis coordinates (the algebra's norm).
    pub fn norm_e(&self) -> f64 {
        self.norm(NormKind::EBasis)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_tol(SINGULAR_TOL)
    }

    /// Inverse through the 2×2 representation:
    /// `[[c1, c3], [c4, c2]]⁻¹ = [[c2, -c3], [-c4, c1]] / d`.
    pub fn inverse_with_tol(&self, singular_tol: f64) -> Result<Self> {
        let d = self.det();
        let scale = self.norm_e().powi(2);
        if scale == 0.0 || !(d.norm() > singular_tol * scale) {
            return Err(Error::SingularElement(format!(
                "|det| = {:e} for element of norm {:e}",
                d.norm(),
                scale.sqrt()
            )));
        }
        let [c1, c2, c3, c4] = self.c;
        let inv_d = d.inv();
        Ok(Biquat::new(c2 * inv_d, c1 * inv_d, -c3 * inv_d, -c4 * inv_d))
    }

    /// Integer power; negative exponents go through [`Biquat::inverse`].
    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Biquat::ONE;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq;
            }
            sq = sq * sq;
            e >>= 1;
        }
        Ok(acc)
    }
}

impl IjkCoords {
    pub fn norm(&self) -> f64 {
        (self.one.norm_sqr() + self.i.norm_sqr() + self.j.norm_sqr() + self.k.norm_sqr()).sqrt()
    }
}

/// Resolvent `(t - ζ)⁻¹ = (t - ξ1)⁻¹ e1 + (t - ξ2)⁻¹ e2` for diagonal `ζ = ξ1 e1 + ξ2 e2`.
pub fn resolvent(t: Complex, zeta: &Biquat) -> Result<Biquat> {
    resolvent_with_tol(t, zeta, SINGULAR_TOL)
}

pub fn resolvent_with_tol(t: Complex, zeta: &Biquat, singular_tol: f64) -> Result<Biquat> {
    if !zeta.is_diagonal() {
        return Err(Error::InvalidArgument(
            "resolvent requires c3 = c4 = 0 (element of the form ξ1 e1 + ξ2 e2)".into(),
        ));
    }
    let mut out = [ZERO_C; 2];
    for (k, slot) in out.iter_mut().enumerate() {
        let xi = zeta.c[k];
        let gap = t - xi;
        let scale = t.norm().max(xi.norm()).max(1.0);
        if !(gap.norm() > singular_tol * scale) {
            return Err(Error::SingularElement(format!(
                "t = {t} coincides with xi{} = {xi}",
                k + 1
            )));
        }
        *slot = gap.inv();
    }
    Ok(Biquat::diag(out[0], out[1]))
}

impl Add for Biquat {
    type Output = Biquat;
    fn add(self, rhs: Biquat) -> Biquat {
        Biquat {
            c: [
                self.c[0] + rhs.c[0],
                self.c[1] + rhs.c[1],
                self.c[2] + rhs.c[2],
                self.c[3] + rhs.c[3],
            ],
        }
    }
}

impl AddAssign for Biquat {
    fn add_assign(&mut self, rhs: Biquat) {
        *self = *self + rhs;
    }
}

impl Sub for Biquat {
    type Output = Biquat;
    fn sub(self, rhs: Biquat) -> Biquat {
        self + (-rhs)
    }
}

impl Neg for Biquat {
    type Output = Biquat;
    fn neg(self) -> Biquat {
        Biquat { c: self.c.map(|z| -z) }
    }
}

impl Mul for Biquat {
    type Output = Biquat;

    fn mul(self, b: Biquat) -> Biquat {
        let [a1, a2, a3, a4] = self.c;
        let [b1, b2, b3, b4] = b.c;
        // [[a1, a3], [a4, a2]] · [[b1, b3], [b4, b2]]
        Biquat::new(
            a1 * b1 + a3 * b4,
            a4 * b3 + a2 * b2,
            a1 * b3 + a3 * b2,
            a4 * b1 + a2 * b4,
        )
    }
}

impl Mul<Complex> for Biquat {
    type Output = Biquat;
    fn mul(self, s: Complex) -> Biquat {
        self.scale(s)
    }
}

impl fmt::Display for Biquat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, z) in self.c.iter().enumerate() {
            if k > 0 {
                write!(f, "  ")?;
            }
            write!(f, "e{}: {}", k + 1, fmt_complex(*z))?;
        }
        Ok(())
    }
}

impl fmt::Display for IjkCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "1: {}  I: {}  J: {}  K: {}",
            fmt_complex(self.one),
            fmt_complex(self.i),
            fmt_complex(self.j),
            fmt_complex(self.k)
        )
    }
}

/// Formats a real number like C's `%.17g`.
pub fn fmt_g17(x: f64) -> String {
    const DIGITS: i32 = 17;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `a+bi` with 17 significant digits per part.
pub fn fmt_complex(z: Complex) -> String {
    let im = fmt_g17(z.im.abs());
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_g17(z.re), sign, im)
}

/// Serde helpers for `[re, im]` pairs.
pub mod complex_pair {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        finite_complex(re, im).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Complex], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for z in v {
                seq.serialize_element(&[z.re, z.im])?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Complex>, D::Error> {
            let raw = Vec::<[f64; 2]>::deserialize(d)?;
            raw.into_iter()
                .map(|[re, im]| finite_complex(re, im).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EBasisRepr {
    #[serde(with = "complex_pair")]
    e1: Complex,
    #[serde(with = "complex_pair")]
    e2: Complex,
    #[serde(with = "complex_pair")]
    e3: Complex,
    #[serde(with = "complex_pair")]
    e4: Complex,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IjkRepr {
    #[serde(with = "complex_pair")]
    one: Complex,
    #[serde(rename = "I", with = "complex_pair")]
    i: Complex,
    #[serde(rename = "J", with = "complex_pair")]
    j: Complex,
    #[serde(rename = "K", with = "complex_pair")]
    k: Complex,
}

impl Serialize for Biquat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [e1, e2, e3, e4] = self.c;
        EBasisRepr { e1, e2, e3, e4 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Biquat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EBasisRepr::deserialize(d)?;
        Ok(Biquat::new(r.e1, r.e2, r.e3, r.e4))
    }
}

impl Serialize for IjkCoords {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IjkRepr { one: self.one, i: self.i, j: self.j, k: self.k }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IjkCoords {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IjkRepr::deserialize(d)?;
        Ok(IjkCoords { one: r.one, i: r.i, j: r.j, k: r.k })
    }
}

/// A biquaternion read from JSON in either basis.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AnyBasis {
    E(Biquat),
    Ijk(IjkCoords),
}

impl AnyBasis {
    pub fn to_biquat(self) -> Biquat {
        match self {
            AnyBasis::E(b) => b,
            AnyBasis::Ijk(q) => Biquat::from_ijk(q),
        }
    }
}
