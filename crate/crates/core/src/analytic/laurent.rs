//! Holomorphic component functions and coefficient extraction on circles.

use std::f64::consts::PI;
use std::fmt;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::expr::{Expr, EVAL_SINGULAR_EPS};
use super::parser::parse;
use crate::algebra::{complex_pair, Complex};
use crate::error::{Error, Result};

pub const DEFAULT_NODES: usize = 256;
/// Coefficient noise floor relative to the largest sample magnitude.
pub const NOISE_REL: f64 = 1e-13;
/// Fraction of the extraction radius inside which a truncated series is trusted.
pub const TRUST_FRACTION: f64 = 0.5;

/// Finite window `Σ_{n=lo}^{hi} coeffs[n - lo] (z - center)^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentSeries1D {
    #[serde(with = "complex_pair")]
    pub center: Complex,
    pub lo: i32,
    #[serde(with = "complex_pair::vec")]
    pub coeffs: Vec<Complex>,
    /// Radius around `center` where evaluating the truncation is meaningful.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trust_radius: Option<f64>,
}

impl LaurentSeries1D {
    pub fn new(center: Complex, lo: i32, coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("series window must hold at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("series coefficient".into()));
        }
        Ok(LaurentSeries1D { center, lo, coeffs, trust_radius: None })
    }

    /// Series with a single nonzero term `value (z - center)^n`.
    pub fn monomial(center: Complex, n: i32, value: Complex) -> Self {
        LaurentSeries1D { center, lo: n, coeffs: vec![value], trust_radius: None }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    /// Coefficient at index `n`, zero outside the window.
    pub fn coeff(&self, n: i32) -> Complex {
        if n < self.lo || n > self.hi() {
            Complex::new(0.0, 0.0)
        } else {
            self.coeffs[(n - self.lo) as usize]
        }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        let u = z - self.center;
        if let Some(r) = self.trust_radius {
            if u.norm() > r {
                log::warn!(
                    "evaluating truncated series at |z - center| = {} beyond trust radius {r}",
                    u.norm()
                );
            }
        }
        let zero = Complex::new(0.0, 0.0);
        let mut regular = zero;
        for n in (0.max(self.lo)..=self.hi()).rev() {
            regular = regular * u + self.coeff(n);
        }
        if self.lo > 0 {
            regular *= u.powi(self.lo);
        }
        let mut principal = zero;
        if self.lo < 0 {
            if !(u.norm() >= EVAL_SINGULAR_EPS) {
                return Err(Error::EvalSingular(format!("principal part evaluated at its center {z}")));
            }
            let w = u.inv();
            for n in self.lo..=self.hi().min(-1) {
                principal = (principal + self.coeff(n)) * w;
            }
            if self.hi() < -1 {
                principal *= w.powi(-1 - self.hi());
            }
        }
        Ok(regular + principal)
    }

    /// Term-wise derivative: `n c_n` moves to index `n - 1`.
    pub fn derivative(&self) -> Self {
        let (lo, hi) = (self.lo, self.hi());
        let first = if lo == 0 { 1 } else { lo };
        if first > hi {
            return LaurentSeries1D {
                center: self.center,
                lo: 0,
                coeffs: vec![Complex::new(0.0, 0.0)],
                trust_radius: self.trust_radius,
            };
        }
        let coeffs = (first..=hi).map(|n| self.coeff(n) * n as f64).collect();
        LaurentSeries1D { center: self.center, lo: first - 1, coeffs, trust_radius: self.trust_radius }
    }
}

/// One holomorphic function of a complex variable.
#[derive(Clone, Debug, PartialEq)]
pub enum ComponentFn {
    Expr(Expr),
    Series(LaurentSeries1D),
}

impl ComponentFn {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(ComponentFn::Expr(parse(text)?))
    }

    pub fn zero() -> Self {
        ComponentFn::Expr(Expr::zero())
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        match self {
            ComponentFn::Expr(e) => e.eval(z),
            ComponentFn::Series(s) => s.eval(z),
        }
    }

    pub fn derivative(&self) -> Self {
        match self {
            ComponentFn::Expr(e) => ComponentFn::Expr(e.derivative()),
            ComponentFn::Series(s) => ComponentFn::Series(s.derivative()),
        }
    }

    /// True for the literal zero expression or an all-zero series.
    pub fn is_zero(&self) -> bool {
        match self {
            ComponentFn::Expr(Expr::Const(c)) => *c == Complex::new(0.0, 0.0),
            ComponentFn::Expr(_) => false,
            ComponentFn::Series(s) => s.coeffs.iter().all(|c| *c == Complex::new(0.0, 0.0)),
        }
    }
}

impl fmt::Display for ComponentFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentFn::Expr(e) => write!(f, "{e}"),
            ComponentFn::Series(s) => write!(f, "series[{}..{}] at {}", s.lo, s.hi(), s.center),
        }
    }
}

impl From<Expr> for ComponentFn {
    fn from(e: Expr) -> Self {
        ComponentFn::Expr(e)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ComponentRepr {
    Text(String),
    Series { series: LaurentSeries1D },
}

impl Serialize for ComponentFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ComponentFn::Expr(e) => ComponentRepr::Text(e.to_string()).serialize(s),
            ComponentFn::Series(series) => ComponentRepr::Series { series: series.clone() }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ComponentFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ComponentRepr::deserialize(d)? {
            ComponentRepr::Text(t) => parse(&t).map(ComponentFn::Expr).map_err(serde::de::Error::custom),
            ComponentRepr::Series { series } => Ok(ComponentFn::Series(series)),
        }
    }
}

/// Coefficients extracted on one circle, with the sample scale that fixes the noise floor.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub series: LaurentSeries1D,
    pub rho: f64,
    pub nodes: usize,
    pub sample_max: f64,
}

impl Extraction {
    /// Absolute noise floor `NOISE_REL · max|sample|`.
    pub fn noise_floor(&self) -> f64 {
        NOISE_REL * self.sample_max
    }

    /// `|c_n| ρ^n`: the size of term `n` on the extraction circle.
    pub fn scaled_magnitude(&self, n: i32) -> f64 {
        self.series.coeff(n).norm() * self.rho.powi(n)
    }
}

/// Trapezoidal rule on `|ξ - center| = rho` for
/// `c_n = (1/2πi) ∮ f(ξ) (ξ - center)^{-n-1} dξ`, `n = lo..=hi`.
pub fn laurent_coeffs(
    f: &ComponentFn,
    center: Complex,
    rho: f64,
    lo: i32,
    hi: i32,
    nodes: usize,
) -> Result<LaurentSeries1D> {
    Ok(extract(f, center, rho, lo, hi, nodes)?.series)
}

pub fn extract(
    f: &ComponentFn,
    center: Complex,
    rho: f64,
    lo: i32,
    hi: i32,
    nodes: usize,
) -> Result<Extraction> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidArgument(format!("extraction radius must be positive, got {rho}")));
    }
    if nodes < 16 || !nodes.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("nodes must be a power of two >= 16, got {nodes}")));
    }
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty index window [{lo}, {hi}]")));
    }
    let width = (hi as i64 - lo as i64 + 1) as usize;
    if width > nodes {
        return Err(Error::InvalidArgument(format!(
            "window of {width} coefficients exceeds {nodes} nodes (indices would alias)"
        )));
    }

    let mut samples = Vec::with_capacity(nodes);
    let mut sample_max = 0.0f64;
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let xi = center + Complex::from_polar(rho, theta);
        let v = f.eval(xi).map_err(|e| {
            Error::NumericalBreakdown(format!("sample {j} at {xi} failed: {e}"))
        })?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NumericalBreakdown(format!("non-finite sample {v} at {xi}")));
        }
        sample_max = sample_max.max(v.norm());
        samples.push(v);
    }

    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(nodes).process(&mut samples);

    let scale = 1.0 / nodes as f64;
    let coeffs = (lo..=hi)
        .map(|n| {
            let k = (n as i64).rem_euclid(nodes as i64) as usize;
            samples[k] * scale * rho.powi(-n)
        })
        .collect();
    let series = LaurentSeries1D { center, lo, coeffs, trust_radius: Some(TRUST_FRACTION * rho) };
    Ok(Extraction { series, rho, nodes, sample_max })
}
