#![allow(dead_code)]

use biquat::{AlgebraParams, Biquat, Complex, E3Point, GMonogenicMap, LineLabel, Overall, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `a1 = i, a2 = 1, b1 = 1, b2 = i`.
pub fn params() -> AlgebraParams {
    AlgebraParams::new(c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_complex(r: &mut impl Rng, scale: f64) -> Complex {
    c(r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

pub fn rand_biquat(r: &mut impl Rng, scale: f64) -> Biquat {
    Biquat { c: std::array::from_fn(|_| rand_complex(r, scale)) }
}

pub fn rand_point(r: &mut impl Rng, scale: f64) -> E3Point {
    E3Point::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

/// Uniform point in the Euclidean ball of `ζ - ζ0` with E-norm at most `radius`.
pub fn point_in_ball(r: &mut impl Rng, center: E3Point, radius: f64, p: &AlgebraParams) -> E3Point {
    loop {
        let d = rand_point(r, 1.0);
        let q = biquat::embed(d, p).unwrap();
        let n = q.norm_e();
        if n < 1e-3 {
            continue;
        }
        let t = radius * r.gen_range(0.0..1.0f64).cbrt() / n;
        return center + d * t;
    }
}

pub fn map(side: Side, exprs: [&str; 4]) -> GMonogenicMap {
    GMonogenicMap::from_exprs(side, exprs, params()).unwrap()
}

/// `F1 = exp, F2 = sin, F3 = z^2, F4 = 1/(z - 5)`.
pub fn catalog_map(side: Side) -> GMonogenicMap {
    map(side, ["exp(z)", "sin(z)", "z^2", "1/(z-5)"])
}

pub const CORPUS: [&str; 30] = [
    "z",
    "1",
    "-z",
    "z + 1",
    "z - 2.5",
    "2*z",
    "z*z*z",
    "z^2",
    "z^-3",
    "-z^2",
    "(z - 1)^3 + 4*z",
    "1/z",
    "1/(z - 5)",
    "1/z + z",
    "z/(z + 2)",
    "exp(z)",
    "sin(z)",
    "cos(z)",
    "exp(1/z)",
    "exp(-z^2)",
    "sin(z)*cos(z)",
    "exp(sin(z))",
    "cos(2*z + 1)^2",
    "i*z",
    "(1 + 2*i)*z^2 - i",
    "3e-2*z^4 + 1.5e1",
    "z^2 - 2*z + 1",
    "(z + i)/(z - i)",
    "exp(i*z) - cos(z) - i*sin(z)",
    "2^-1*z - z/4",
];

pub struct Case {
    pub name: &'static str,
    pub side: Side,
    pub exprs: [&'static str; 4],
    pub overall: Overall,
    pub orders: [Option<u32>; 4],
    pub lines: &'static [LineLabel],
}

/// Nine singularity cases at the origin with `rho = 1`.
pub const CATALOG: [Case; 9] = [
    Case { name: "polynomial", side: Side::Right, exprs: ["z^2 + 1", "z^3 - z", "2*z", "0"], overall: Overall::RemovablePoint, orders: [None; 4], lines: &[] },
    Case { name: "entire", side: Side::Right, exprs: ["exp(z)", "sin(z)", "cos(z)", "exp(-z^2)"], overall: Overall::RemovablePoint, orders: [None; 4], lines: &[] },
    Case { name: "rational regular", side: Side::Left, exprs: ["1/(z-5)", "(z+1)/(z-3)", "0", "z/(z+2)"], overall: Overall::RemovablePoint, orders: [None; 4], lines: &[] },
    Case { name: "simple pole", side: Side::Right, exprs: ["1/z", "0", "0", "0"], overall: Overall::Pole, orders: [Some(1), None, None, None], lines: &[LineLabel::L1] },
    Case { name: "triple pole", side: Side::Right, exprs: ["0", "z^-3", "0", "0"], overall: Overall::Pole, orders: [None, Some(3), None, None], lines: &[LineLabel::L2] },
    Case { name: "pole plus entire", side: Side::Left, exprs: ["exp(z)", "z", "1/z^2 + sin(z)", "cos(z)"], overall: Overall::Pole, orders: [None, None, Some(2), None], lines: &[LineLabel::L2] },
    Case { name: "essential F1", side: Side::Right, exprs: ["exp(1/z)", "0", "0", "0"], overall: Overall::EssentialPoint, orders: [None; 4], lines: &[LineLabel::L1] },
    Case { name: "essential F2", side: Side::Right, exprs: ["0", "exp(1/z)", "0", "0"], overall: Overall::EssentialPoint, orders: [None; 4], lines: &[LineLabel::L2] },
    Case { name: "essential F3 left", side: Side::Left, exprs: ["0", "0", "exp(1/z)", "0"], overall: Overall::EssentialPoint, orders: [None; 4], lines: &[LineLabel::L2] },
];
