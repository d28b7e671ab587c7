#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::Rng;
use realbundle::cohomology::GradedMod2Poly;
use realbundle::curve::{DivisorPoint, RealDivisor, WeierstrassSet};
use realbundle::input::InputSpec;
use realbundle::{Gaussian, Rational};

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn re(p: i64) -> Gaussian {
    Complex::new(q(p, 1), q(0, 1))
}

pub fn cx(a: Rational, b: Rational) -> Gaussian {
    Complex::new(a, b)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn load(name: &str) -> InputSpec {
    InputSpec::from_path(&fixture(name)).expect("fixture parses")
}

/// The five genus-2 configurations with their `(n, k)` labels.
pub const CONFIGS: [(&str, (usize, usize)); 5] = [
    ("config_0_1.json", (0, 1)),
    ("config_1_1.json", (1, 1)),
    ("config_2_1.json", (2, 1)),
    ("config_3_1.json", (3, 1)),
    ("config_3_3.json", (3, 3)),
];

/// A random valid curve and divisor of genus 2 to 4.
///
/// Real Weierstrass points are integers and real divisor points are half
/// integers, so the two never collide. Divisor points inside the
/// `tau∘iota`-locus get even multiplicity.
pub fn random_config<R: Rng>(rng: &mut R) -> (WeierstrassSet<Rational>, RealDivisor<Rational>) {
    let g = rng.random_range(2..=4usize);
    let n = rng.random_range(0..=g + 1);
    let s = g + 1 - n;
    let mut pool: Vec<i64> = (-12..=12).collect();
    pool.shuffle(rng);
    let mut reals: Vec<i64> = pool[..2 * n].to_vec();
    reals.sort();
    let mut points: Vec<Gaussian> = reals.iter().map(|&x| re(x)).collect();
    let mut pairs = Vec::new();
    while pairs.len() < s {
        let p = (rng.random_range(-6..=6i64), rng.random_range(1..=4i64));
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    for &(a, b) in &pairs {
        points.push(cx(q(a, 1), q(b, 1)));
        points.push(cx(q(a, 1), q(-b, 1)));
    }
    let w = WeierstrassSet::new(g, points).expect("generated set is valid");

    let mut entries = Vec::new();
    let mut used: Vec<i64> = Vec::new();
    let mut total = 0i64;
    for _ in 0..rng.random_range(0..=3) {
        let x = rng.random_range(-14..=13i64);
        if used.contains(&x) {
            continue;
        }
        used.push(x);
        let t = q(2 * x + 1, 2);
        let mut m = rng.random_range(1..=3i64) * if rng.random_bool(0.5) { 1 } else { -1 };
        if w.sign_at(&t) < 0 && m % 2 != 0 {
            m *= 2;
        }
        total += m;
        entries.push(DivisorPoint {
            point: cx(t, q(0, 1)),
            mult: m,
        });
    }
    if rng.random_bool(0.3) {
        let (a, b) = (rng.random_range(-6..=6i64), rng.random_range(1..=4i64));
        let m = rng.random_range(1..=2i64) * if rng.random_bool(0.5) { 1 } else { -1 };
        entries.push(DivisorPoint {
            point: cx(q(2 * a + 1, 2), q(b, 1)),
            mult: m,
        });
        entries.push(DivisorPoint {
            point: cx(q(2 * a + 1, 2), q(-b, 1)),
            mult: m,
        });
        total += 2 * m;
    }
    let last = -(2 * g as i64 + 1) - total;
    if last != 0 {
        // right of every real point used so far, hence on the tau side
        entries.push(DivisorPoint {
            point: cx(q(2 * 15 + 1, 2), q(0, 1)),
            mult: last,
        });
    }
    let d = RealDivisor::new(g, entries).expect("generated divisor is valid");
    d.validate_against(&w)
        .expect("divisor avoids the Weierstrass points");
    (w, d)
}

/// Maximal runs of points between antipodes, read around the circle.
pub fn run_oracle(pts: &[(i64, i64)]) -> Vec<usize> {
    if pts.is_empty() {
        return Vec::new();
    }
    let mut dirs: Vec<(f64, bool)> = Vec::new();
    for &(x, y) in pts {
        let a = (y as f64).atan2(x as f64);
        dirs.push((a.rem_euclid(2.0 * PI), true));
        dirs.push(((a + PI).rem_euclid(2.0 * PI), false));
    }
    dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let start = dirs.iter().position(|d| !d.1).expect("antipodes exist");
    let mut runs = Vec::new();
    let mut cur = 0;
    for i in 1..=dirs.len() {
        let (_, is_point) = dirs[(start + i) % dirs.len()];
        if is_point {
            cur += 1;
        } else if cur > 0 {
            runs.push(cur);
            cur = 0;
        }
    }
    runs
}

/// Polynomial in `k` formal roots over the two-element field, as a set of monomials.
pub type RootPoly = HashMap<Vec<u32>, u8>;

pub fn root_mul(a: &RootPoly, b: &RootPoly, d_max: u32) -> RootPoly {
    let mut out: RootPoly = HashMap::new();
    for (ma, _) in a.iter().filter(|(_, c)| **c == 1) {
        for (mb, _) in b.iter().filter(|(_, c)| **c == 1) {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            if m.iter().sum::<u32>() <= d_max {
                *out.entry(m).or_insert(0) ^= 1;
            }
        }
    }
    out.retain(|_, c| *c == 1);
    out
}

pub fn root_one(k: usize) -> RootPoly {
    HashMap::from([(vec![0; k], 1)])
}

pub fn root_linear(k: usize, idx: &[usize]) -> RootPoly {
    let mut p = root_one(k);
    for &i in idx {
        let mut m = vec![0; k];
        m[i] = 1;
        *p.entry(m).or_insert(0) ^= 1;
    }
    p
}

/// `e_j` by subset enumeration.
pub fn root_elementary(k: usize, j: usize) -> RootPoly {
    let mut p = HashMap::new();
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize == j {
            p.insert((0..k).map(|i| mask >> i & 1).collect(), 1);
        }
    }
    p
}

/// Substitutes `w_j = e_j` into a class.
pub fn expand_in_roots(c: &GradedMod2Poly, d_max: u32) -> RootPoly {
    let k = c.k();
    let mut out: RootPoly = HashMap::new();
    for m in c.terms() {
        let mut term = root_one(k);
        for (j, &e) in m.iter().enumerate() {
            for _ in 0..e {
                term = root_mul(&term, &root_elementary(k, j + 1), d_max);
            }
        }
        for (mono, _) in term {
            *out.entry(mono).or_insert(0) ^= 1;
        }
    }
    out.retain(|_, c| *c == 1);
    out
}

pub fn brute_pair_product(k: usize, squared: bool, d_max: u32) -> RootPoly {
    let mut p = root_one(k);
    for i in 0..k {
        for j in 0..k {
            if i < j || (squared && i != j) {
                p = root_mul(&p, &root_linear(k, &[i, j]), d_max);
            }
        }
    }
    p
}
