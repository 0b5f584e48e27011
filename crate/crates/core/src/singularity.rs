//! Classification of the point `ζ0` for a G-monogenic mapping.
//!
//! Each component's Laurent window `[-depth, depth]` is extracted on its circle and
//! reduced to a [`ComponentVerdict`]. The mapping has a removable point when every
//! component is regular, a pole when some component has a pole and none is
//! essential, and an essential point otherwise. A non-regular component attached
//! to `ξ1` (resp. `ξ2`) makes every point of `ζ0 + L1` (resp. `ζ0 + L2`) singular.
//!
//! Decision rule for one component, with `s_k = |c_{-k}| ρ^{-k}`, noise floor
//! `N = 1e-13 · max|sample|` and threshold `T = 1e3 · N`:
//!
//! * `m` is the deepest `k <= depth` with `s_k > T` (0 when none);
//! * `m = depth` is essential (the pattern reaches the window edge);
//! * if every `s_k` with `k > m` is at or below `N` the pattern terminates:
//!   regular for `m = 0`, a pole of order `m` otherwise;
//! * otherwise coefficients decay through the band `(N, T]` without terminating:
//!   essential when `2m >= depth`, inconclusive below that.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::algebra::{Biquat, Complex};
use crate::analytic::{extract, Extraction};
use crate::espace::{singular_lines, xi_pair, AlgebraParams, E3Point, LineLabel};
use crate::error::{Error, Result};
use crate::monogenic::{loglog_slope, GMonogenicMap};

pub const SIGNIFICANCE_FACTOR: f64 = 1e3;
pub const DEFAULT_DEPTH: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Regular,
    Pole { order: u32 },
    Essential,
}

impl ComponentKind {
    pub fn is_regular(&self) -> bool {
        matches!(self, ComponentKind::Regular)
    }

    fn label(&self) -> &'static str {
        match self {
            ComponentKind::Regular => "Regular",
            ComponentKind::Pole { .. } => "Pole",
            ComponentKind::Essential => "Essential",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentVerdict {
    pub kind: ComponentKind,
    /// Deepest significant negative index, e.g. `-3` for a third-order pole.
    pub max_sig_neg_index: Option<i32>,
    /// `s_k` for `k = 1..=depth`.
    pub magnitudes: Vec<f64>,
    pub noise_floor: f64,
    pub threshold: f64,
}

impl Serialize for ComponentVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            kind: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            order: Option<u32>,
            max_sig_neg_index: Option<i32>,
            noise_floor: f64,
            magnitudes: &'a [f64],
        }
        let order = match self.kind {
            ComponentKind::Pole { order } => Some(order),
            _ => None,
        };
        Repr {
            kind: self.kind.label(),
            order,
            max_sig_neg_index: self.max_sig_neg_index,
            noise_floor: self.noise_floor,
            magnitudes: &self.magnitudes,
        }
        .serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Overall {
    RemovablePoint,
    Pole,
    EssentialPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityReport {
    pub overall: Overall,
    pub per_component: [ComponentVerdict; 4],
    pub affected_lines: Vec<LineLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeRecord>,
}

/// Applies the decision rule to one extracted window. `Err` carries the reason
/// the pattern is threshold-ambiguous.
pub fn classify_component(ex: &Extraction, depth: usize) -> std::result::Result<ComponentVerdict, String> {
    let noise = ex.noise_floor();
    let threshold = SIGNIFICANCE_FACTOR * noise;
    let magnitudes: Vec<f64> = (1..=depth as i32).map(|k| ex.scaled_magnitude(-k)).collect();
    let m = magnitudes.iter().rposition(|&s| s > threshold).map_or(0, |i| i + 1);
    let tail = magnitudes[m..].iter().copied().fold(0.0, f64::max);

    let kind = if depth > 0 && m == depth {
        ComponentKind::Essential
    } else if tail <= noise {
        if m == 0 {
            ComponentKind::Regular
        } else {
            ComponentKind::Pole { order: m as u32 }
        }
    } else if 2 * m >= depth && m > 0 {
        ComponentKind::Essential
    } else {
        return Err(format!(
            "deepest significant index -{m}, but coefficients beyond it reach {tail:e}, \
             between the noise floor {noise:e} and the significance threshold {threshold:e}"
        ));
    };
    Ok(ComponentVerdict {
        kind,
        max_sig_neg_index: (m > 0).then(|| -(m as i32)),
        magnitudes,
        noise_floor: noise,
        threshold,
    })
}

/// Classifies `center` using circles of radius `rho1` around `ξ10` and `rho2` around `ξ20`.
pub fn classify(
    m: &GMonogenicMap,
    center: E3Point,
    rho1: f64,
    rho2: f64,
    depth: usize,
    nodes: usize,
) -> Result<SingularityReport> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be positive".into()));
    }
    let depth_i = i32::try_from(depth).map_err(|_| Error::InvalidArgument("depth too large".into()))?;
    let params = m.params.checked()?;
    let (xi10, xi20) = xi_pair(center, &params);
    let mut verdicts = Vec::with_capacity(4);
    for (k, f) in m.components.iter().enumerate() {
        let (c, rho) = if m.side.xi_index(k) == 0 { (xi10, rho1) } else { (xi20, rho2) };
        let ex = extract(f, c, rho, -depth_i, depth_i, nodes)?;
        verdicts.push(classify_component(&ex, depth).map_err(|why| (k, why)));
    }

    let any_essential = verdicts
        .iter()
        .any(|v| matches!(v, Ok(ComponentVerdict { kind: ComponentKind::Essential, .. })));
    let mut resolved = Vec::with_capacity(4);
    for v in verdicts {
        match v {
            Ok(v) => resolved.push(v),
            Err((k, why)) => {
                let note = if any_essential { " (another component is essential)" } else { "" };
                return Err(Error::Inconclusive(format!("component F{}: {why}{note}", k + 1)));
            }
        }
    }
    let per_component: [ComponentVerdict; 4] = resolved.try_into().expect("four verdicts");

    let overall = if any_essential {
        Overall::EssentialPoint
    } else if per_component.iter().any(|v| matches!(v.kind, ComponentKind::Pole { .. })) {
        Overall::Pole
    } else {
        Overall::RemovablePoint
    };
    let affected_lines: BTreeSet<LineLabel> = per_component
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.kind.is_regular())
        .map(|(k, _)| m.side.line_of(k))
        .collect();
    Ok(SingularityReport {
        overall,
        per_component,
        affected_lines: affected_lines.into_iter().collect(),
        probe: None,
    })
}

/// Where the probe approaches: `ζ0` itself or a point `ζ0 + t·u` on `ζ0 + Lk`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ProbeTarget {
    Center,
    OnLine { line: LineLabel, offset: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeOptions {
    /// Number of antipodal direction pairs.
    pub direction_pairs: usize,
    pub seed: u64,
    /// Directions with `|f_k(d)|` below this fraction of its maximum are rejected.
    pub line_margin: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { direction_pairs: 4, seed: 42, line_margin: 0.05 }
    }
}

/// Default probe radii `1e-1, 1e-2, ..., 1e-6`.
pub fn default_radii() -> Vec<f64> {
    (1..=6).map(|k| 10f64.powi(-k)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Trend {
    Converging(Biquat),
    Diverging,
    /// Mixed trend across directions with final norms spread by more than 10×.
    Oscillating,
    /// Neither monotone nor spread by 10×.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRecord {
    pub target: ProbeTarget,
    pub base: E3Point,
    pub radii: Vec<f64>,
    pub directions: Vec<[f64; 3]>,
    /// `norms[d][r]` = `‖Φ(base + radii[r]·directions[d])‖`, infinite when evaluation blew up.
    pub norms: Vec<Vec<f64>>,
    pub trend: Trend,
    /// Median log-log slope of `‖Φ‖` against the radius.
    pub slope: Option<f64>,
    /// Ratio of the largest to the smallest final norm across directions.
    pub spread: f64,
}

impl ProbeRecord {
    pub fn value(&self) -> Option<Biquat> {
        match self.trend {
            Trend::Converging(v) => Some(v),
            _ => None,
        }
    }
}

impl Serialize for ProbeRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            trend: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            slope: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            value: Option<Biquat>,
            #[serde(skip_serializing_if = "Option::is_none")]
            spread: Option<f64>,
            target: ProbeTarget,
            radii: Vec<f64>,
        }
        let trend = match self.trend {
            Trend::Converging(_) => "Converging",
            Trend::Diverging => "Diverging",
            Trend::Oscillating => "Oscillating",
            Trend::Indeterminate => "Indeterminate",
        };
        Repr {
            trend,
            slope: self.slope,
            value: self.value(),
            spread: self.spread.is_finite().then_some(self.spread),
            target: self.target,
            radii: self.radii.clone(),
        }
        .serialize(s)
    }
}

/// Samples `‖Φ‖` along shrinking radii on random directions away from `L1 ∪ L2`.
pub fn probe_limit(
    m: &GMonogenicMap,
    center: E3Point,
    target: ProbeTarget,
    radii: &[f64],
    opts: ProbeOptions,
) -> Result<ProbeRecord> {
    if radii.len() < 2 {
        return Err(Error::InvalidArgument("probe needs at least two radii".into()));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("probe radii must be positive and strictly decreasing".into()));
    }
    if opts.direction_pairs == 0 {
        return Err(Error::InvalidArgument("probe needs at least one direction pair".into()));
    }
    let params = m.params.checked()?;
    let base = match target {
        ProbeTarget::Center => center,
        ProbeTarget::OnLine { line, offset } => {
            let (l1, l2) = singular_lines(&params)?;
            let l = if line == LineLabel::L1 { l1 } else { l2 };
            l.through(center).at(offset)
        }
    };
    let directions = sample_directions(&params, opts);

    let mut norms = Vec::with_capacity(directions.len());
    let mut values = Vec::with_capacity(directions.len());
    for d in &directions {
        let dir = E3Point::from_array(*d);
        let row: Vec<Option<Biquat>> = radii
            .iter()
            .map(|&r| m.eval(base + dir * r).ok().filter(Biquat::is_finite))
            .collect();
        norms.push(row.iter().map(|v| v.map_or(f64::INFINITY, |q| q.norm_e())).collect::<Vec<_>>());
        values.push(row);
    }

    let growing = norms.iter().all(|row| {
        row.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9)) && row[row.len() - 1] >= 10.0 * row[0]
    });
    let last = radii.len() - 1;
    let settled: Option<Vec<Biquat>> = values
        .iter()
        .map(|row| {
            let (prev, cur) = (row[last - 1]?, row[last]?);
            let step = (cur - prev).norm_e();
            (step <= 1e-3 * cur.norm_e().max(1.0)).then(|| {
                // linear extrapolation to radius 0
                let (r0, r1) = (radii[last - 1], radii[last]);
                (cur.scale(Complex::new(r0, 0.0)) - prev.scale(Complex::new(r1, 0.0)))
                    .scale(Complex::new(1.0 / (r0 - r1), 0.0))
            })
        })
        .collect();

    let finals: Vec<f64> = norms.iter().map(|row| row[last]).collect();
    let max_final = finals.iter().copied().fold(0.0, f64::max);
    let min_final = finals.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if min_final > 0.0 { max_final / min_final } else { f64::INFINITY };

    let mut slopes: Vec<f64> = norms
        .iter()
        .filter_map(|row| loglog_slope(radii.iter().copied().zip(row.iter().copied())))
        .collect();
    slopes.sort_by(|a, b| a.total_cmp(b));
    let slope = (!slopes.is_empty()).then(|| {
        let n = slopes.len();
        if n % 2 == 1 {
            slopes[n / 2]
        } else {
            0.5 * (slopes[n / 2 - 1] + slopes[n / 2])
        }
    });

    let converged = settled.and_then(|vals| {
        let n = vals.len() as f64;
        let mean = vals.iter().fold(Biquat::ZERO, |acc, v| acc + *v).scale(Complex::new(1.0 / n, 0.0));
        let dev = vals.iter().map(|v| (*v - mean).norm_e()).fold(0.0, f64::max);
        (dev <= 1e-3 * mean.norm_e().max(1.0)).then_some(mean)
    });

    let trend = if growing {
        Trend::Diverging
    } else if let Some(v) = converged {
        Trend::Converging(v)
    } else if spread > 10.0 {
        Trend::Oscillating
    } else {
        Trend::Indeterminate
    };
    Ok(ProbeRecord { target, base, radii: radii.to_vec(), directions, norms, trend, slope, spread })
}

/// Antipodal pairs of unit directions with `|f1(d)|` and `|f2(d)|` bounded away from zero.
fn sample_directions(params: &AlgebraParams, opts: ProbeOptions) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let bound = |a: Complex, b: Complex| (1.0 + a.norm_sqr() + b.norm_sqr()).sqrt();
    let (m1, m2) = (bound(params.a1, params.b1), bound(params.a2, params.b2));
    let mut out = Vec::with_capacity(2 * opts.direction_pairs);
    while out.len() < 2 * opts.direction_pairs {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(0.1..=1.0).contains(&len) {
            continue;
        }
        let d = v.map(|x| x / len);
        let (f1, f2) = xi_pair(E3Point::from_array(d), params);
        if f1.norm() < opts.line_margin * m1 || f2.norm() < opts.line_margin * m2 {
            continue;
        }
        out.push(d);
        out.push(d.map(|x| -x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::DEFAULT_NODES;
    use crate::monogenic::Side;

    fn params() -> AlgebraParams {
        AlgebraParams::new(Complex::new(0.0, 1.0), Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 1.0))
    }

    fn run(side: Side, exprs: [&str; 4]) -> Result<SingularityReport> {
        let m = GMonogenicMap::from_exprs(side, exprs, params()).unwrap();
        classify(&m, E3Point::ORIGIN, 1.0, 1.0, DEFAULT_DEPTH, DEFAULT_NODES)
    }

    #[test]
    fn polynomial_is_removable() {
        let r = run(Side::Right, ["z^2 + 1", "3*z", "z^3", "2"]).unwrap();
        assert_eq!(r.overall, Overall::RemovablePoint);
        assert!(r.affected_lines.is_empty());
    }

    #[test]
    fn third_order_pole() {
        let r = run(Side::Right, ["1/z^3", "exp(z)", "0", "sin(z)"]).unwrap();
        assert_eq!(r.overall, Overall::Pole);
        assert_eq!(r.per_component[0].kind, ComponentKind::Pole { order: 3 });
        assert_eq!(r.per_component[0].max_sig_neg_index, Some(-3));
        assert_eq!(r.affected_lines, vec![LineLabel::L1]);
    }

    #[test]
    fn essential_in_second_component() {
        let r = run(Side::Right, ["0", "exp(1/z)", "0", "0"]).unwrap();
        assert_eq!(r.overall, Overall::EssentialPoint);
        assert_eq!(r.per_component[1].kind, ComponentKind::Essential);
        assert_eq!(r.affected_lines, vec![LineLabel::L2]);
    }

    #[test]
    fn left_f3_affects_l2() {
        let r = run(Side::Left, ["0", "0", "exp(1/z)", "0"]).unwrap();
        assert_eq!(r.affected_lines, vec![LineLabel::L2]);
        let r = run(Side::Right, ["0", "0", "exp(1/z)", "0"]).unwrap();
        assert_eq!(r.affected_lines, vec![LineLabel::L1]);
    }

    #[test]
    fn high_order_pole_is_not_mistaken_for_essential() {
        let r = run(Side::Right, ["z^-14", "0", "0", "0"]).unwrap();
        assert_eq!(r.per_component[0].kind, ComponentKind::Pole { order: 14 });
    }

    #[test]
    fn gradual_tail_below_half_window_is_inconclusive() {
        // exp(1/z) seen through a wide circle: coefficients fade out before index -12
        let m = GMonogenicMap::from_exprs(Side::Right, ["exp(1/z)", "0", "0", "0"], params()).unwrap();
        let r = classify(&m, E3Point::ORIGIN, 2.0, 1.0, DEFAULT_DEPTH, DEFAULT_NODES);
        assert!(matches!(r, Err(Error::Inconclusive(_))), "{r:?}");
    }

    #[test]
    fn pole_probe_diverges_with_slope() {
        let m = GMonogenicMap::from_exprs(Side::Right, ["1/z^3", "0", "0", "0"], params()).unwrap();
        let radii = [1e-2, 1e-3, 1e-4, 1e-5];
        let p = probe_limit(&m, E3Point::ORIGIN, ProbeTarget::Center, &radii, ProbeOptions::default()).unwrap();
        assert_eq!(p.trend, Trend::Diverging);
        assert!((p.slope.unwrap() + 3.0).abs() < 0.2);
    }

    #[test]
    fn probe_on_line_point() {
        // F1 = 1/z is singular along all of ζ0 + L1
        let m = GMonogenicMap::from_exprs(Side::Right, ["1/z", "exp(z)", "0", "0"], params()).unwrap();
        let target = ProbeTarget::OnLine { line: LineLabel::L1, offset: 0.7 };
        let p = probe_limit(&m, E3Point::ORIGIN, target, &default_radii(), ProbeOptions::default()).unwrap();
        assert_eq!(p.trend, Trend::Diverging);
        let (xi1, xi2) = xi_pair(p.base, &params());
        assert!(xi1.norm() < 1e-15 && xi2.norm() > 0.1);
    }

    #[test]
    fn probe_rejects_bad_radii() {
        let m = GMonogenicMap::identity(Side::Right, params()).unwrap();
        let r = probe_limit(&m, E3Point::ORIGIN, ProbeTarget::Center, &[1e-3, 1e-2], ProbeOptions::default());
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn directions_avoid_lines_and_are_deterministic() {
        let opts = ProbeOptions::default();
        let a = sample_directions(&params(), opts);
        assert_eq!(a, sample_directions(&params(), opts));
        assert_eq!(a.len(), 8);
        for d in &a {
            let (f1, f2) = xi_pair(E3Point::from_array(*d), &params());
            assert!(f1.norm() > 0.05 && f2.norm() > 0.05);
        }
    }
}
