//! Mod-2 characteristic classes on the Grassmannian of `(g-1)`-planes in `R^{2g+2}`.
//!
//! Classes live in `Z/2[w_1, ..., w_k]` (with `deg w_i = i`) truncated at a
//! fixed degree, and are reduced modulo the ideal generated by the dual classes
//! `wbar_j`, `j = n-k+1, ..., n`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::CohomologyError;

/// Exponent vector over `w_1, ..., w_k`.
pub type Monomial = Vec<u32>;

pub fn weighted_degree(m: &[u32]) -> usize {
    m.iter()
        .enumerate()
        .map(|(i, &e)| (i + 1) * e as usize)
        .sum()
}

fn monomial_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Display order: by degree, then lexicographically decreasing exponents.
fn display_cmp(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    weighted_degree(a)
        .cmp(&weighted_degree(b))
        .then_with(|| b.cmp(a))
}

pub fn format_monomial(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("w{}", i + 1)
            } else {
                format!("w{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// All monomials of weighted degree `d` in `k` generators, in display order.
pub fn monomials_of_degree(k: usize, d: usize) -> Vec<Monomial> {
    fn rec(i: usize, k: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = i + 1;
        for e in 0..=left / w {
            cur[i] = e as u32;
            rec(i + 1, k, left - e * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if k == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, k, d, &mut vec![0; k], &mut out);
    out.sort_by(display_cmp);
    out
}

/// Sparse polynomial over the two-element field, truncated above `d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMod2Poly {
    k: usize,
    d_max: usize,
    terms: BTreeSet<Monomial>,
}

impl GradedMod2Poly {
    pub fn zero(k: usize, d_max: usize) -> Self {
        Self {
            k,
            d_max,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(k: usize, d_max: usize) -> Self {
        Self::from_monomials(k, d_max, [vec![0; k]])
    }

    /// The generator `w_i`, `1 <= i <= k`.
    pub fn generator(k: usize, d_max: usize, i: usize) -> Self {
        assert!((1..=k).contains(&i), "generator index out of range");
        let mut m = vec![0; k];
        m[i - 1] = 1;
        Self::from_monomials(k, d_max, [m])
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(
        k: usize,
        d_max: usize,
        monomials: impl IntoIterator<Item = Monomial>,
    ) -> Self {
        let mut p = Self::zero(k, d_max);
        for m in monomials {
            assert_eq!(m.len(), k, "monomial has the wrong number of exponents");
            p.toggle(m);
        }
        p
    }

    fn toggle(&mut self, m: Monomial) {
        if weighted_degree(&m) <= self.d_max && !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        self.terms.contains(m)
    }

    pub fn has_unit_constant(&self) -> bool {
        self.terms.contains(&vec![0; self.k])
    }

    pub fn degree_part(&self, d: usize) -> Self {
        Self {
            k: self.k,
            d_max: self.d_max,
            terms: self
                .terms
                .iter()
                .filter(|m| weighted_degree(m) == d)
                .cloned()
                .collect(),
        }
    }

    /// Monomials in display order.
    pub fn sorted_monomials(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self.terms.iter().cloned().collect();
        v.sort_by(display_cmp);
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "generator count mismatch");
        let mut out = Self {
            k: self.k,
            d_max: self.d_max.min(other.d_max),
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        };
        out.terms.retain(|m| weighted_degree(m) <= out.d_max);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "generator count mismatch");
        let d_max = self.d_max.min(other.d_max);
        let mut out = Self::zero(self.k, d_max);
        for a in &self.terms {
            let da = weighted_degree(a);
            for b in &other.terms {
                if da + weighted_degree(b) <= d_max {
                    out.toggle(monomial_mul(a, b));
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.k, self.d_max);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Truncated geometric series; requires constant term 1.
    pub fn inverse(&self) -> Result<Self, CohomologyError> {
        if !self.has_unit_constant() {
            return Err(CohomologyError::NotInvertible);
        }
        let one = Self::one(self.k, self.d_max);
        let x = self.add(&one);
        let mut result = one.clone();
        let mut term = one;
        for _ in 0..self.d_max {
            term = term.mul(&x);
            if term.is_zero() {
                break;
            }
            result = result.add(&term);
        }
        Ok(result)
    }
}

impl fmt::Display for GradedMod2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_monomials()
            .iter()
            .map(|m| format_monomial(m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for GradedMod2Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self
            .sorted_monomials()
            .iter()
            .map(|m| format_monomial(m))
            .collect();
        v.serialize(s)
    }
}

/// `1 + w_1 + ... + w_k`, the total class of the tautological bundle.
pub fn tautological_class(k: usize, d_max: usize) -> GradedMod2Poly {
    let mut p = GradedMod2Poly::one(k, d_max);
    for i in 1..=k {
        p = p.add(&GradedMod2Poly::generator(k, d_max, i));
    }
    p
}

/// `1 + wbar_1 + wbar_2 + ...`, the inverse of the tautological class.
pub fn dual_class(k: usize, d_max: usize) -> GradedMod2Poly {
    tautological_class(k, d_max)
        .inverse()
        .expect("tautological class has constant term 1")
}

#[derive(Clone, Debug)]
struct Level {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Fully reduced echelon rows `(pivot, bits)`.
    rows: Vec<(usize, Vec<u64>)>,
}

fn bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
}

impl Level {
    fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Self {
            monomials,
            index,
            rows: Vec::new(),
        }
    }

    fn words(&self) -> usize {
        self.monomials.len().div_ceil(64).max(1)
    }

    fn vector<'a>(&self, terms: impl Iterator<Item = &'a Monomial>) -> Vec<u64> {
        let mut v = vec![0u64; self.words()];
        for m in terms {
            let i = self.index[m];
            v[i / 64] ^= 1 << (i % 64);
        }
        v
    }

    fn reduce_vec(&self, v: &mut [u64]) {
        for (pivot, row) in &self.rows {
            if bit(v, *pivot) {
                xor_into(v, row);
            }
        }
    }

    fn insert(&mut self, mut v: Vec<u64>) {
        self.reduce_vec(&mut v);
        let Some(p) = first_bit(&v) else {
            return;
        };
        for (_, row) in self.rows.iter_mut() {
            if bit(row, p) {
                xor_into(row, &v);
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
    }
}

/// Mod-2 cohomology of the Grassmannian of `k`-planes in `R^n`, `k = g-1`,
/// `n = 2g+2`, through degree `d_max`.
#[derive(Clone, Debug)]
pub struct GrassmannRing {
    g: usize,
    k: usize,
    n: usize,
    d_max: usize,
    levels: Vec<Level>,
}

pub fn default_d_max(g: usize) -> usize {
    ((g - 1) * (g + 3)).min(12)
}

pub fn ring_setup(g: usize, d_max: Option<usize>) -> Result<GrassmannRing, CohomologyError> {
    if g < 2 {
        return Err(CohomologyError::GenusTooSmall(g));
    }
    let (k, n) = (g - 1, 2 * g + 2);
    let limit = k * (n - k);
    let d_max = d_max.unwrap_or_else(|| default_d_max(g));
    if d_max == 0 || d_max > limit {
        return Err(CohomologyError::DegreeOutOfRange { d_max, limit });
    }
    let mut levels: Vec<Level> = (0..=d_max)
        .map(|d| Level::new(monomials_of_degree(k, d)))
        .collect();
    let dual = dual_class(k, d_max);
    for j in (n - k + 1)..=n.min(d_max) {
        let rel = dual.degree_part(j);
        for (d, level) in levels.iter_mut().enumerate().skip(j) {
            for m in monomials_of_degree(k, d - j) {
                let multiple = GradedMod2Poly::from_monomials(k, d_max, [m]).mul(&rel);
                let v = level.vector(multiple.terms());
                level.insert(v);
            }
        }
    }
    Ok(GrassmannRing {
        g,
        k,
        n,
        d_max,
        levels,
    })
}

impl GrassmannRing {
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Dimension of the quotient in degree `d`.
    pub fn quotient_rank(&self, d: usize) -> usize {
        let level = &self.levels[d];
        level.monomials.len() - level.rows.len()
    }

    pub fn one(&self) -> GradedMod2Poly {
        GradedMod2Poly::one(self.k, self.d_max)
    }

    pub fn generator(&self, i: usize) -> GradedMod2Poly {
        GradedMod2Poly::generator(self.k, self.d_max, i)
    }

    /// Canonical representative: no term lies on a pivot monomial.
    pub fn reduce(&self, p: &GradedMod2Poly) -> Result<GradedMod2Poly, CohomologyError> {
        if p.k != self.k {
            return Err(CohomologyError::GeneratorMismatch(p.k, self.k));
        }
        let mut out = GradedMod2Poly::zero(self.k, self.d_max);
        for (d, level) in self.levels.iter().enumerate() {
            let part: Vec<&Monomial> = p.terms.iter().filter(|m| weighted_degree(m) == d).collect();
            if part.is_empty() {
                continue;
            }
            let mut v = level.vector(part.into_iter());
            level.reduce_vec(&mut v);
            for (i, m) in level.monomials.iter().enumerate() {
                if bit(&v, i) {
                    out.terms.insert(m.clone());
                }
            }
        }
        Ok(out)
    }

    /// Product followed by reduction.
    pub fn mul(
        &self,
        a: &GradedMod2Poly,
        b: &GradedMod2Poly,
    ) -> Result<GradedMod2Poly, CohomologyError> {
        self.reduce(&a.mul(b))
    }
}

/// Polynomial in formal roots `x_1, ..., x_k` (all of degree one).
#[derive(Clone, Debug, PartialEq, Eq)]
struct RootPoly {
    d_max: usize,
    terms: BTreeSet<Monomial>,
}

impl RootPoly {
    fn one(k: usize, d_max: usize) -> Self {
        Self {
            d_max,
            terms: BTreeSet::from([vec![0; k]]),
        }
    }

    fn toggle(&mut self, m: Monomial) {
        let deg: u32 = m.iter().sum();
        if deg as usize <= self.d_max && !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self {
            d_max: self.d_max,
            terms: BTreeSet::new(),
        };
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(monomial_mul(a, b));
            }
        }
        out
    }

    fn xor(&mut self, other: &Self) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    /// `1 + sum_{i in idx} x_i` to the given power.
    fn linear(k: usize, d_max: usize, idx: &[usize]) -> Self {
        let mut p = Self::one(k, d_max);
        for &i in idx {
            let mut m = vec![0; k];
            m[i] = 1;
            p.toggle(m);
        }
        p
    }
}

fn elementary(k: usize, i: usize, d_max: usize) -> RootPoly {
    let mut p = RootPoly {
        d_max,
        terms: BTreeSet::new(),
    };
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize == i {
            p.toggle((0..k).map(|j| mask >> j & 1).collect());
        }
    }
    p
}

/// Rewrites a symmetric polynomial in roots in terms of `w_i = e_i`.
fn to_elementary(mut p: RootPoly, k: usize) -> Result<GradedMod2Poly, CohomologyError> {
    let d_max = p.d_max;
    let mut out = GradedMod2Poly::zero(k, d_max);
    let mut cache: HashMap<Monomial, RootPoly> = HashMap::new();
    let es: Vec<RootPoly> = (1..=k).map(|i| elementary(k, i, d_max)).collect();
    while let Some(lead) = p.terms.last().cloned() {
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return Err(CohomologyError::NotSymmetric);
        }
        let c: Monomial = (0..k)
            .map(|i| lead[i] - lead.get(i + 1).copied().unwrap_or(0))
            .collect();
        let expansion = e_monomial(&c, &es, &mut cache, d_max);
        p.xor(&expansion);
        out.toggle(c);
    }
    Ok(out)
}

fn e_monomial(
    c: &Monomial,
    es: &[RootPoly],
    cache: &mut HashMap<Monomial, RootPoly>,
    d_max: usize,
) -> RootPoly {
    if let Some(hit) = cache.get(c) {
        return hit.clone();
    }
    let result = match c.iter().position(|&e| e > 0) {
        None => RootPoly::one(c.len(), d_max),
        Some(i) => {
            let mut rest = c.clone();
            rest[i] -= 1;
            e_monomial(&rest, es, cache, d_max).mul(&es[i])
        }
    };
    cache.insert(c.clone(), result.clone());
    result
}

fn pair_product(k: usize, d_max: usize, squared: bool) -> RootPoly {
    let mut p = RootPoly::one(k, d_max);
    for i in 0..k {
        for j in i + 1..k {
            let f = RootPoly::linear(k, d_max, &[i, j]);
            p = p.mul(&f);
            if squared {
                p = p.mul(&f);
            }
        }
    }
    p
}

/// Total class of `V ⊗ V` for a rank-`k` bundle: `prod_{i<j} (1 + x_i + x_j)^2`.
pub fn tensor_class(k: usize, d_max: usize) -> GradedMod2Poly {
    to_elementary(pair_product(k, d_max, true), k).expect("product over pairs is symmetric")
}

/// Total class of `Sym^2 V`: `prod_{i<j} (1 + x_i + x_j)`.
pub fn sym2_class(k: usize, d_max: usize) -> GradedMod2Poly {
    to_elementary(pair_product(k, d_max, false), k).expect("product over pairs is symmetric")
}

/// `w(V)^{2g+2} w(V ⊗ V)^{-1} w(Sym^2 V)^{-2}`, reduced in the ring.
pub fn tangent_class(ring: &GrassmannRing) -> Result<GradedMod2Poly, CohomologyError> {
    let (k, d) = (ring.k(), ring.d_max());
    let w = ring.reduce(&tautological_class(k, d).pow(ring.n() as u32))?;
    let t = ring.reduce(&tensor_class(k, d).inverse()?)?;
    let s = ring.reduce(&sym2_class(k, d).inverse()?.pow(2))?;
    ring.mul(&ring.mul(&w, &t)?, &s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SWReport {
    pub genus: usize,
    pub d_max: usize,
    pub total: GradedMod2Poly,
    pub w1: GradedMod2Poly,
    pub w2: GradedMod2Poly,
    pub orientable: bool,
    pub spin: bool,
    pub relatively_spin: bool,
}

impl Serialize for SWReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SWReport", 8)?;
        st.serialize_field("genus", &self.genus)?;
        st.serialize_field("d_max", &self.d_max)?;
        st.serialize_field("total", &self.total)?;
        st.serialize_field("w1", &self.w1.to_string())?;
        st.serialize_field("w2", &self.w2.to_string())?;
        st.serialize_field("orientable", &self.orientable)?;
        st.serialize_field("spin", &self.spin)?;
        st.serialize_field("relatively_spin", &self.relatively_spin)?;
        st.end()
    }
}

impl fmt::Display for SWReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "genus {} (through degree {})", self.genus, self.d_max)?;
        writeln!(f, "w(TN) = {}", self.total)?;
        writeln!(f, "w1 = {}", self.w1)?;
        writeln!(f, "w2 = {}", self.w2)?;
        writeln!(f, "orientable: {}", yn(self.orientable))?;
        writeln!(f, "spin: {}", yn(self.spin))?;
        write!(f, "relatively spin: {}", yn(self.relatively_spin))
    }
}

pub fn sw_report(g: usize, d_max: Option<usize>) -> Result<SWReport, CohomologyError> {
    let ring = ring_setup(g, d_max)?;
    let total = tangent_class(&ring)?;
    let w1 = total.degree_part(1);
    let w2 = total.degree_part(2);
    let w1_squared = ring.reduce(&ring.generator(1).pow(2))?;
    let orientable = w1.is_zero();
    let spin = orientable && w2.is_zero();
    let relatively_spin = orientable && (w2.is_zero() || w2 == w1_squared);
    Ok(SWReport {
        genus: g,
        d_max: ring.d_max(),
        total,
        w1,
        w2,
        orientable,
        spin,
        relatively_spin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(k: usize, d: usize, ms: &[&[u32]]) -> GradedMod2Poly {
        GradedMod2Poly::from_monomials(k, d, ms.iter().map(|m| m.to_vec()))
    }

    /// Number of partitions of `d` with at most `rows` parts, each at most `cols`.
    fn box_partitions(d: usize, rows: usize, cols: usize) -> usize {
        if d == 0 {
            return 1;
        }
        if rows == 0 || cols == 0 {
            return 0;
        }
        (0..=d.min(cols))
            .map(|first| {
                if first == 0 {
                    0
                } else {
                    box_partitions(d - first, rows - 1, first)
                }
            })
            .sum()
    }

    #[test]
    fn formatting() {
        assert_eq!(format_monomial(&[2, 0, 1]), "w1^2 w3");
        assert_eq!(format_monomial(&[0, 0]), "1");
        let p = poly(2, 6, &[&[0, 1], &[0, 0], &[2, 0]]);
        assert_eq!(p.to_string(), "1 + w1^2 + w2");
        assert_eq!(GradedMod2Poly::zero(1, 3).to_string(), "0");
    }

    #[test]
    fn addition_cancels() {
        let p = poly(1, 5, &[&[1], &[1]]);
        assert!(p.is_zero());
        let a = poly(1, 5, &[&[0], &[1]]);
        assert!(a.add(&a).is_zero());
    }

    #[test]
    fn truncation() {
        let p = poly(1, 3, &[&[4], &[1]]);
        assert_eq!(p.len(), 1);
        let q = poly(1, 3, &[&[2]]);
        assert!(q.mul(&q).is_zero());
    }

    #[test]
    fn geometric_series() {
        let c = poly(1, 6, &[&[0], &[1]]);
        let inv = c.inverse().unwrap();
        assert_eq!(inv.len(), 7);
        assert_eq!(c.mul(&inv), GradedMod2Poly::one(1, 6));
        assert_eq!(
            GradedMod2Poly::one(2, 4).inverse().unwrap(),
            GradedMod2Poly::one(2, 4)
        );
        assert_eq!(
            poly(1, 4, &[&[1]]).inverse(),
            Err(CohomologyError::NotInvertible)
        );
    }

    #[test]
    fn duality_recursion() {
        for k in 1..=5 {
            let t = tautological_class(k, 12);
            assert_eq!(t.mul(&dual_class(k, 12)), GradedMod2Poly::one(k, 12));
        }
        // for k = 1 the dual classes are the powers of w1
        let d = dual_class(1, 6);
        assert!((0..=6).all(|j| d.contains(&[j])));
    }

    #[test]
    fn projective_space_ring() {
        let r = ring_setup(2, None).unwrap();
        assert_eq!((r.k(), r.n(), r.d_max()), (1, 6, 5));
        for d in 0..=5 {
            assert_eq!(r.quotient_rank(d), 1);
        }
        let w = r.generator(1).pow(5);
        assert_eq!(r.reduce(&w).unwrap(), w);
    }

    #[test]
    fn quotient_ranks_match_box_count() {
        for g in 2..=5 {
            let r = ring_setup(g, None).unwrap();
            for d in 0..=r.d_max() {
                assert_eq!(
                    r.quotient_rank(d),
                    box_partitions(d, r.k(), r.n() - r.k()),
                    "g={g} d={d}"
                );
            }
        }
        let r = ring_setup(3, None).unwrap();
        assert_eq!(r.quotient_rank(3), 2);
    }

    #[test]
    fn full_dimension_top_degree() {
        let r = ring_setup(3, Some(12)).unwrap();
        assert_eq!(r.quotient_rank(12), 1);
        assert_eq!(r.quotient_rank(10), 2);
        assert_eq!(
            ring_setup(3, Some(13)).unwrap_err(),
            CohomologyError::DegreeOutOfRange {
                d_max: 13,
                limit: 12
            }
        );
        assert!(ring_setup(2, Some(0)).is_err());
        assert_eq!(
            ring_setup(1, None).unwrap_err(),
            CohomologyError::GenusTooSmall(1)
        );
    }

    #[test]
    fn reduce_one_and_mismatch() {
        for g in 2..=6 {
            let r = ring_setup(g, None).unwrap();
            assert_eq!(r.reduce(&r.one()).unwrap(), r.one());
        }
        let r = ring_setup(3, None).unwrap();
        assert_eq!(
            r.reduce(&GradedMod2Poly::one(1, 5)),
            Err(CohomologyError::GeneratorMismatch(1, 2))
        );
    }

    #[test]
    fn relations_vanish() {
        let r = ring_setup(3, None).unwrap();
        let dual = dual_class(2, r.d_max());
        for j in 7..=8 {
            assert!(r.reduce(&dual.degree_part(j)).unwrap().is_zero());
        }
        assert!(!r.reduce(&dual.degree_part(6)).unwrap().is_zero());
    }

    #[test]
    fn symmetric_class_values() {
        assert_eq!(sym2_class(1, 12), GradedMod2Poly::one(1, 12));
        assert_eq!(tensor_class(1, 12), GradedMod2Poly::one(1, 12));
        assert_eq!(sym2_class(2, 12).to_string(), "1 + w1");
        assert_eq!(tensor_class(2, 12).to_string(), "1 + w1^2");
        assert_eq!(sym2_class(3, 12).to_string(), "1 + w1^2 + w2 + w1 w2 + w3");
        assert_eq!(
            tensor_class(3, 12).to_string(),
            "1 + w1^4 + w2^2 + w1^2 w2^2 + w3^2"
        );
    }

    #[test]
    fn low_degree_coefficients_of_symmetric_classes() {
        for g in 2..=6 {
            let k = g - 1;
            let w1sq = poly(
                k,
                12,
                &[&{
                    let mut m = vec![0; k];
                    m[0] = 2;
                    m
                }],
            );
            let expected = if g % 2 == 1 {
                w1sq.clone()
            } else {
                GradedMod2Poly::zero(k, 12)
            };
            assert_eq!(tensor_class(k, 12).degree_part(2), expected, "g={g}");
            assert_eq!(sym2_class(k, 12).pow(2).degree_part(2), expected, "g={g}");
        }
    }

    #[test]
    fn genus_two_tangent_class() {
        let r = ring_setup(2, None).unwrap();
        assert_eq!(tangent_class(&r).unwrap().to_string(), "1 + w1^2 + w1^4");
    }

    #[test]
    fn sw_verdicts() {
        for g in 2..=6 {
            let rep = sw_report(g, None).unwrap();
            assert!(rep.orientable && rep.relatively_spin);
            assert_eq!(rep.spin, g % 2 == 1, "g={g}");
            assert!(rep.w1.is_zero());
        }
        let rep = sw_report(2, None).unwrap();
        assert_eq!(rep.w2.to_string(), "w1^2");
    }

    #[test]
    fn sw_serializes_sorted_terms() {
        let rep = sw_report(2, None).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["total"], serde_json::json!(["1", "w1^2", "w1^4"]));
        assert_eq!(v["w2"], "w1^2");
        assert_eq!(v["spin"], false);
    }
}
