//! Quaternionic Taylor and Laurent series of G-monogenic mappings.
//!
//! Component coefficients `a_n, b_n, c_n, d_n` assemble into
//! `p_n = a_n e1 + b_n e2 + c_n e3 + d_n e4`. Right series are `Σ (ζ - ζ0)^n p_n`,
//! left series are `Σ p̂_n (ζ - ζ0)^n`. Since `(ζ - ζ0)^n = (ξ1 - ξ10)^n e1 + (ξ2 - ξ20)^n e2`,
//! each quaternionic term reduces to component-wise complex powers.

use serde::{Deserialize, Serialize};

use crate::algebra::{Biquat, Complex};
use crate::analytic::{extract, Extraction};
use crate::espace::{xi_pair, AlgebraParams, E3Point};
use crate::error::{Error, Result};
use crate::monogenic::{GMonogenicMap, Side};

/// Tail terms must fall below this before round-trip tolerances apply.
pub const TAIL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuatLaurentSeries {
    pub side: Side,
    pub center: E3Point,
    pub params: AlgebraParams,
    pub lo: i32,
    /// `p_n` (or `p̂_n`) for `n = lo..=hi`. Empty only for a split-off part.
    pub coeffs: Vec<Biquat>,
}

/// A series together with the four per-component extractions it came from.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub series: QuatLaurentSeries,
    pub components: [Extraction; 4],
}

impl QuatLaurentSeries {
    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_taylor(&self) -> bool {
        self.lo >= 0
    }

    /// `(ξ10, ξ20)`.
    pub fn xi_center(&self) -> (Complex, Complex) {
        xi_pair(self.center, &self.params)
    }

    pub fn coeff(&self, n: i32) -> Biquat {
        if self.coeffs.is_empty() || n < self.lo || n > self.hi() {
            Biquat::ZERO
        } else {
            self.coeffs[(n - self.lo) as usize]
        }
    }

    /// `ζ - ζ0` for the point `p`.
    pub fn offset(&self, p: E3Point) -> Biquat {
        let (u1, u2) = xi_pair(p - self.center, &self.params);
        Biquat::diag(u1, u2)
    }

    fn term(&self, u: &Biquat, n: i32) -> Result<Biquat> {
        let pw = power(u, n)?;
        let c = self.coeff(n);
        Ok(match self.side {
            Side::Right => pw * c,
            Side::Left => c * pw,
        })
    }

    pub fn eval(&self, p: E3Point) -> Result<Biquat> {
        let u = self.offset(p);
        let mut regular = Biquat::ZERO;
        let mut principal = Biquat::ZERO;
        if self.coeffs.is_empty() {
            return Ok(regular);
        }
        for n in self.lo.max(0)..=self.hi() {
            regular += self.term(&u, n)?;
        }
        for n in (self.lo..=self.hi().min(-1)).rev() {
            principal += self.term(&u, n)?;
        }
        Ok(principal + regular)
    }

    /// Size of the two outermost terms at each end of the window, evaluated at `p`.
    pub fn tail_bound(&self, p: E3Point) -> Result<f64> {
        let u = self.offset(p);
        let mut bound = 0.0f64;
        if self.coeffs.is_empty() {
            return Ok(bound);
        }
        let (lo, hi) = (self.lo, self.hi());
        for n in [hi, hi - 1] {
            if n >= lo.max(0) {
                bound = bound.max(self.term(&u, n)?.norm_e());
            }
        }
        if lo < 0 {
            for n in [lo, lo + 1] {
                if n <= hi.min(-1) {
                    bound = bound.max(self.term(&u, n)?.norm_e());
                }
            }
        }
        Ok(bound)
    }

    /// Principal (`n < 0`) and regular (`n >= 0`) parts.
    pub fn split_parts(&self) -> (QuatLaurentSeries, QuatLaurentSeries) {
        let cut = (0 - self.lo).clamp(0, self.coeffs.len() as i32) as usize;
        let principal = QuatLaurentSeries {
            lo: self.lo.min(0),
            coeffs: self.coeffs[..cut].to_vec(),
            ..self.clone()
        };
        let regular = QuatLaurentSeries {
            lo: self.lo.max(0),
            coeffs: self.coeffs[cut..].to_vec(),
            ..self.clone()
        };
        (principal, regular)
    }

    /// Inverse of [`QuatLaurentSeries::split_parts`].
    pub fn merge(principal: &QuatLaurentSeries, regular: &QuatLaurentSeries) -> Result<QuatLaurentSeries> {
        if principal.side != regular.side
            || principal.center != regular.center
            || principal.params != regular.params
        {
            return Err(Error::InvalidArgument("parts belong to different series".into()));
        }
        if principal.is_empty() {
            return Ok(regular.clone());
        }
        if regular.is_empty() {
            return Ok(principal.clone());
        }
        if principal.hi() + 1 != regular.lo {
            return Err(Error::InvalidArgument(format!(
                "windows [{}, {}] and [{}, {}] are not adjacent",
                principal.lo,
                principal.hi(),
                regular.lo,
                regular.hi()
            )));
        }
        let mut coeffs = principal.coeffs.clone();
        coeffs.extend_from_slice(&regular.coeffs);
        Ok(QuatLaurentSeries { lo: principal.lo, coeffs, ..principal.clone() })
    }
}

/// `(ζ - ζ0)^n` for diagonal `ζ - ζ0 = u1 e1 + u2 e2`, as `u1^n e1 + u2^n e2`.
pub fn power(zeta_minus_center: &Biquat, n: i32) -> Result<Biquat> {
    let u = zeta_minus_center;
    if !u.is_diagonal() {
        return Err(Error::InvalidArgument(
            "power expects an element of E3 (c3 = c4 = 0)".into(),
        ));
    }
    if n < 0 {
        // same invertibility criterion as the general inverse
        u.inverse()?;
    }
    Ok(Biquat::diag(u.c[0].powi(n), u.c[1].powi(n)))
}

/// Component `k` (0-based) is expanded around `ξ10` or `ξ20` according to the side.
fn component_center(side: Side, k: usize, xi0: (Complex, Complex), rho: (f64, f64)) -> (Complex, f64) {
    if side.xi_index(k) == 0 {
        (xi0.0, rho.0)
    } else {
        (xi0.1, rho.1)
    }
}

pub fn expand(
    m: &GMonogenicMap,
    center: E3Point,
    rho1: f64,
    rho2: f64,
    lo: i32,
    hi: i32,
    nodes: usize,
) -> Result<QuatLaurentSeries> {
    Ok(expand_detailed(m, center, rho1, rho2, lo, hi, nodes)?.series)
}

pub fn expand_detailed(
    m: &GMonogenicMap,
    center: E3Point,
    rho1: f64,
    rho2: f64,
    lo: i32,
    hi: i32,
    nodes: usize,
) -> Result<Expansion> {
    if !(lo <= 0 && 0 <= hi) {
        return Err(Error::InvalidArgument(format!("window [{lo}, {hi}] must satisfy lo <= 0 <= hi")));
    }
    if !center.is_finite() {
        return Err(Error::NonFinite(format!("center {center}")));
    }
    let params = m.params.checked()?;
    let xi0 = xi_pair(center, &params);
    let mut extractions = Vec::with_capacity(4);
    for (k, f) in m.components.iter().enumerate() {
        let (c, rho) = component_center(m.side, k, xi0, (rho1, rho2));
        extractions.push(extract(f, c, rho, lo, hi, nodes)?);
    }
    let components: [Extraction; 4] = extractions.try_into().expect("four components");
    let coeffs = (lo..=hi)
        .map(|n| Biquat { c: std::array::from_fn(|k| components[k].series.coeff(n)) })
        .collect();
    let series = QuatLaurentSeries { side: m.side, center, params, lo, coeffs };
    Ok(Expansion { series, components })
}

pub fn eval_series(s: &QuatLaurentSeries, p: E3Point) -> Result<Biquat> {
    s.eval(p)
}

pub fn split_parts(s: &QuatLaurentSeries) -> (QuatLaurentSeries, QuatLaurentSeries) {
    s.split_parts()
}
