//! Right- and left-G-monogenic mappings in component form.
//!
//! Right: `Φ(ζ) = F1(ξ1) e1 + F2(ξ2) e2 + F3(ξ1) e3 + F4(ξ2) e4`.
//! Left:  `Φ̂(ζ) = F1(ξ1) e1 + F2(ξ2) e2 + F3(ξ2) e3 + F4(ξ1) e4`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Biquat, Complex};
use crate::analytic::ComponentFn;
use crate::espace::{embed, xi_pair, AlgebraParams, E3Point, LineLabel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    /// Which of `ξ1` (0) / `ξ2` (1) feeds the component attached to `e_{k+1}`.
    pub const fn xi_index(self, k: usize) -> usize {
        match (self, k) {
            (_, 0) | (Side::Right, 2) | (Side::Left, 3) => 0,
            _ => 1,
        }
    }

    /// The line on which the argument of component `k` vanishes relative to the center.
    pub fn line_of(self, k: usize) -> LineLabel {
        if self.xi_index(k) == 0 {
            LineLabel::L1
        } else {
            LineLabel::L2
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }

    /// `h·d` for Right, `d·h` for Left.
    pub fn apply_direction(self, h: Biquat, d: Biquat) -> Biquat {
        match self {
            Side::Right => h * d,
            Side::Left => d * h,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GMonogenicMap {
    pub side: Side,
    /// `F1..F4`, attached to `e1..e4`.
    pub components: [ComponentFn; 4],
    pub params: AlgebraParams,
}

impl GMonogenicMap {
    pub fn new(side: Side, components: [ComponentFn; 4], params: AlgebraParams) -> Result<Self> {
        Ok(GMonogenicMap { side, components, params: params.checked()? })
    }

    /// Builds a map from four expression strings.
    pub fn from_exprs(side: Side, exprs: [&str; 4], params: AlgebraParams) -> Result<Self> {
        let mut comps = Vec::with_capacity(4);
        for e in exprs {
            comps.push(ComponentFn::parse(e)?);
        }
        let components: [ComponentFn; 4] = comps.try_into().expect("four components");
        Self::new(side, components, params)
    }

    /// `Φ(ζ) = ζ`: `F1 = F2 = z`, `F3 = F4 = 0`.
    pub fn identity(side: Side, params: AlgebraParams) -> Result<Self> {
        Self::from_exprs(side, ["z", "z", "0", "0"], params)
    }

    pub fn with_side(&self, side: Side) -> Self {
        GMonogenicMap { side, ..self.clone() }
    }

    /// Evaluates from the pair `(ξ1, ξ2)` directly.
    pub fn eval_xi(&self, xi1: Complex, xi2: Complex) -> Result<Biquat> {
        let xi = [xi1, xi2];
        let mut c = [Complex::new(0.0, 0.0); 4];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = self.components[k].eval(xi[self.side.xi_index(k)])?;
        }
        Ok(Biquat { c })
    }

    pub fn eval(&self, p: E3Point) -> Result<Biquat> {
        let (xi1, xi2) = xi_pair(p, &self.params);
        self.eval_xi(xi1, xi2)
    }

    pub fn gateaux_derivative(&self) -> GMonogenicMap {
        GMonogenicMap {
            side: self.side,
            components: self.components.clone().map(|f| f.derivative()),
            params: self.params,
        }
    }
}

pub fn eval_map(m: &GMonogenicMap, p: E3Point) -> Result<Biquat> {
    m.eval(p)
}

pub fn gateaux_derivative(m: &GMonogenicMap) -> GMonogenicMap {
    m.gateaux_derivative()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateauxSample {
    pub eps: f64,
    pub residual: f64,
}

/// Residuals of the defining difference quotient against `h Φ'(ζ)` or `Φ̂'(ζ) h`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateauxReport {
    pub side: Side,
    /// Multiplication order actually used for `h` and `Φ'`.
    pub order_side: Side,
    pub samples: Vec<GateauxSample>,
    /// Least-squares slope of `log residual` against `log ε`, when at least two
    /// residuals are positive.
    pub convergence_order: Option<f64>,
}

impl GateauxReport {
    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    /// Ratio `residual(eps[i]) / residual(eps[i + 1])`.
    pub fn ratio(&self, i: usize) -> Option<f64> {
        let a = self.samples.get(i)?.residual;
        let b = self.samples.get(i + 1)?.residual;
        (b > 0.0).then(|| a / b)
    }
}

/// Checks the Gateaux limit using the side-correct product order.
pub fn check_monogenic(
    m: &GMonogenicMap,
    p: E3Point,
    h: E3Point,
    eps_list: &[f64],
) -> Result<GateauxReport> {
    check_with_order(m, p, h, eps_list, m.side)
}

/// Like [`check_monogenic`] with an explicit product order; `order_side != m.side`
/// is the deliberately wrong ordering.
pub fn check_with_order(
    m: &GMonogenicMap,
    p: E3Point,
    h: E3Point,
    eps_list: &[f64],
    order_side: Side,
) -> Result<GateauxReport> {
    if eps_list.is_empty() {
        return Err(Error::InvalidArgument("eps list is empty".into()));
    }
    if let Some(e) = eps_list.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {e}")));
    }
    let h_q = embed(h, &m.params)?;
    let base = m.eval(p)?;
    let expected = order_side.apply_direction(h_q, m.gateaux_derivative().eval(p)?);
    let mut samples = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let moved = m.eval(p + h * eps)?;
        let quotient = (moved - base).scale(Complex::new(1.0 / eps, 0.0));
        samples.push(GateauxSample { eps, residual: (quotient - expected).norm_e() });
    }
    let convergence_order = loglog_slope(samples.iter().map(|s| (s.eps, s.residual)));
    Ok(GateauxReport { side: m.side, order_side, samples, convergence_order })
}

/// Least-squares slope of `log y` against `log x` over pairs with both positive and finite.
pub fn loglog_slope(points: impl IntoIterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Mapping spec file: `{"side", "params", "components": {"F1": ..., ...}}`.
/// Missing components default to zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub side: Side,
    pub params: AlgebraParams,
    pub components: ComponentsSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentsSpec {
    #[serde(rename = "F1", default = "ComponentFn::zero")]
    pub f1: ComponentFn,
    #[serde(rename = "F2", default = "ComponentFn::zero")]
    pub f2: ComponentFn,
    #[serde(rename = "F3", default = "ComponentFn::zero")]
    pub f3: ComponentFn,
    #[serde(rename = "F4", default = "ComponentFn::zero")]
    pub f4: ComponentFn,
}

impl MapSpec {
    pub fn into_map(self) -> Result<GMonogenicMap> {
        let c = self.components;
        GMonogenicMap::new(self.side, [c.f1, c.f2, c.f3, c.f4], self.params)
    }
}

impl From<&GMonogenicMap> for MapSpec {
    fn from(m: &GMonogenicMap) -> Self {
        let [f1, f2, f3, f4] = m.components.clone();
        MapSpec { side: m.side, params: m.params, components: ComponentsSpec { f1, f2, f3, f4 } }
    }
}
