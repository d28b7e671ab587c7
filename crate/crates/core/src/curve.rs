//! Real hyperelliptic curves, described by their Weierstrass configurations.
//!
//! The curve is `y^2 = P(t)` with `P(t) = prod_w (t - t_w)`, real structure
//! `tau(t, y) = (conj t, conj y)` and hyperelliptic involution `iota(t, y) = (t, -y)`.
//! Over a real `t` the fibre is fixed pointwise by `tau` when `P(t) > 0` and by
//! `tau∘iota` when `P(t) < 0`. `P` is monic of even degree, so infinity always
//! lies in the image of the `tau`-locus.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::CurveError;
use crate::scalar::{cmp_complex, cmp_scalar, is_real, real, Scalar};

/// The `2g + 2` branch points of a real hyperelliptic curve of genus `g`.
///
/// Stored in canonical order (lexicographic in `(re, im)`).
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassSet<T> {
    genus: usize,
    points: Vec<Complex<T>>,
}

impl<T: Scalar> WeierstrassSet<T> {
    pub fn new(genus: usize, mut points: Vec<Complex<T>>) -> Result<Self, CurveError> {
        if genus < 2 {
            return Err(CurveError::GenusTooSmall(genus));
        }
        let expected = 2 * genus + 2;
        if points.len() != expected {
            return Err(CurveError::WrongPointCount {
                genus,
                expected,
                found: points.len(),
            });
        }
        points.sort_by(cmp_complex);
        if let Some(pair) = points.windows(2).find(|p| p[0] == p[1]) {
            return Err(CurveError::DuplicatePoint(pair[0].to_string()));
        }
        if let Some(p) = points.iter().find(|p| !points.contains(&p.conj())) {
            return Err(CurveError::NotConjugationSymmetric(p.to_string()));
        }
        Ok(Self { genus, points })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    /// Real Weierstrass points in increasing order.
    pub fn real_points(&self) -> Vec<T> {
        let mut r: Vec<T> = self
            .points
            .iter()
            .filter(|p| is_real(p))
            .map(|p| p.re.clone())
            .collect();
        r.sort_by(cmp_scalar);
        r
    }

    /// Points with positive imaginary part, in canonical order.
    pub fn upper_points(&self) -> Vec<Complex<T>> {
        self.points
            .iter()
            .filter(|p| p.im.is_positive())
            .cloned()
            .collect()
    }

    /// Half the number of real Weierstrass points.
    pub fn n(&self) -> usize {
        self.points.iter().filter(|p| is_real(p)).count() / 2
    }

    pub fn contains(&self, z: &Complex<T>) -> bool {
        self.points.contains(z)
    }

    /// Sign of `P(t)` at a real `t`: `1`, `-1`, or `0` at a real Weierstrass point.
    /// Non-real points come in conjugate pairs and contribute `|t - w|^2 > 0`.
    pub fn sign_at(&self, t: &T) -> i8 {
        let mut sign = 1i8;
        for r in self.real_points() {
            match cmp_scalar(t, &r) {
                Ordering::Equal => return 0,
                Ordering::Less => sign = -sign,
                Ordering::Greater => {}
            }
        }
        sign
    }
}

/// `W = W0 ∪ W+ ∪ W-` split by the sign of the imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassPartition<T> {
    /// Real points, strictly increasing.
    pub real: Vec<T>,
    pub upper: Vec<Complex<T>>,
    /// `lower[j]` is the conjugate of `upper[j]`.
    pub lower: Vec<Complex<T>>,
}

impl<T> WeierstrassPartition<T> {
    pub fn n(&self) -> usize {
        self.real.len() / 2
    }
}

pub fn partition_weierstrass<T: Scalar>(w: &WeierstrassSet<T>) -> WeierstrassPartition<T> {
    let upper = w.upper_points();
    let lower = upper.iter().map(|p| p.conj()).collect();
    WeierstrassPartition {
        real: w.real_points(),
        upper,
        lower,
    }
}

/// Topological type of the two real structures `tau` and `tau∘iota`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveTopology {
    pub n: usize,
    pub components_tau: usize,
    pub components_tau_iota: usize,
    pub dividing_tau: bool,
    pub dividing_tau_iota: bool,
}

pub fn classify_topology<T: Scalar>(w: &WeierstrassSet<T>) -> CurveTopology {
    let n = w.n();
    let g = w.genus();
    let (components_tau, components_tau_iota) = if n == 0 { (1, 0) } else { (n, n) };
    let (dividing_tau, dividing_tau_iota) = if n == 0 {
        (true, false)
    } else if n == g + 1 {
        (true, true)
    } else {
        (false, false)
    };
    CurveTopology {
        n,
        components_tau,
        components_tau_iota,
        dividing_tau,
        dividing_tau_iota,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Locus {
    Tau,
    TauIota,
}

/// A closed interval of the real line; `None` endpoints are infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct RealInterval<T> {
    pub lo: Option<T>,
    pub hi: Option<T>,
    pub locus: Locus,
}

impl<T: Scalar> RealInterval<T> {
    pub fn contains_interior(&self, t: &T) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo < t) && self.hi.as_ref().is_none_or(|hi| t < hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }
}

impl<T: std::fmt::Display> std::fmt::Display for RealInterval<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.lo {
            Some(lo) => write!(f, "[{lo}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.hi {
            Some(hi) => write!(f, "{hi}]"),
            None => write!(f, "+inf)"),
        }
    }
}

/// Images of the two real loci in the real line.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLocus<T> {
    pub tau: Vec<RealInterval<T>>,
    pub tau_iota: Vec<RealInterval<T>>,
}

impl<T: Scalar> RealLocus<T> {
    /// All pieces ordered left to right.
    pub fn ordered(&self) -> Vec<RealInterval<T>> {
        let mut all: Vec<_> = self.tau.iter().chain(&self.tau_iota).cloned().collect();
        all.sort_by(|a, b| match (&a.lo, &b.lo) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => cmp_scalar(x, y),
        });
        all
    }
}

/// The `tau`-locus is the closure of `{P > 0}`, the `tau∘iota`-locus that of `{P < 0}`.
pub fn real_locus_intervals<T: Scalar>(w: &WeierstrassSet<T>) -> RealLocus<T> {
    let r = w.real_points();
    if r.is_empty() {
        return RealLocus {
            tau: vec![RealInterval {
                lo: None,
                hi: None,
                locus: Locus::Tau,
            }],
            tau_iota: Vec::new(),
        };
    }
    let mut tau = vec![RealInterval {
        lo: None,
        hi: Some(r[0].clone()),
        locus: Locus::Tau,
    }];
    let mut tau_iota = Vec::new();
    for pair in r.chunks(2) {
        tau_iota.push(RealInterval {
            lo: Some(pair[0].clone()),
            hi: Some(pair[1].clone()),
            locus: Locus::TauIota,
        });
    }
    for i in (1..r.len() - 1).step_by(2) {
        tau.push(RealInterval {
            lo: Some(r[i].clone()),
            hi: Some(r[i + 1].clone()),
            locus: Locus::Tau,
        });
    }
    tau.push(RealInterval {
        lo: Some(r[r.len() - 1].clone()),
        hi: None,
        locus: Locus::Tau,
    });
    RealLocus { tau, tau_iota }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorPoint<T> {
    pub point: Complex<T>,
    pub mult: i64,
}

/// Image `pi(D) = sum m_i alpha_i` of the divisor of a real meromorphic section.
///
/// Multiplicities sum to `-(2g + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealDivisor<T> {
    genus: usize,
    entries: Vec<DivisorPoint<T>>,
}

impl<T: Scalar> RealDivisor<T> {
    pub fn new(genus: usize, mut entries: Vec<DivisorPoint<T>>) -> Result<Self, CurveError> {
        entries.sort_by(|a, b| cmp_complex(&a.point, &b.point));
        if let Some(e) = entries.iter().find(|e| e.mult == 0) {
            return Err(CurveError::ZeroMultiplicity(e.point.to_string()));
        }
        if let Some(pair) = entries.windows(2).find(|p| p[0].point == p[1].point) {
            return Err(CurveError::DuplicateDivisorPoint(pair[0].point.to_string()));
        }
        for e in &entries {
            let conj = e.point.conj();
            if !entries.iter().any(|o| o.point == conj && o.mult == e.mult) {
                return Err(CurveError::DivisorNotSymmetric(e.point.to_string()));
            }
        }
        let expected = -(2 * genus as i64 + 1);
        let found: i64 = entries.iter().map(|e| e.mult).sum();
        if found != expected {
            return Err(CurveError::WrongDivisorDegree { expected, found });
        }
        Ok(Self { genus, entries })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn entries(&self) -> &[DivisorPoint<T>] {
        &self.entries
    }

    /// Checks the conditions that depend on the curve: no divisor point on a
    /// Weierstrass point, and even multiplicity inside the `tau∘iota`-locus
    /// (the two preimages of such a point are exchanged by `tau`).
    pub fn validate_against(&self, w: &WeierstrassSet<T>) -> Result<(), CurveError> {
        for e in &self.entries {
            if w.contains(&e.point) {
                return Err(CurveError::DivisorOnWeierstrassPoint(e.point.to_string()));
            }
            if is_real(&e.point) && w.sign_at(&e.point.re) < 0 && e.mult % 2 != 0 {
                return Err(CurveError::OddMultiplicityOffRealCircle {
                    point: e.point.re.to_string(),
                    mult: e.mult,
                });
            }
        }
        Ok(())
    }

    pub fn real_entries(&self) -> impl Iterator<Item = (&T, i64)> {
        self.entries
            .iter()
            .filter(|e| is_real(&e.point))
            .map(|e| (&e.point.re, e.mult))
    }

    /// Sum of multiplicities of real points strictly greater than `t`.
    pub fn real_mass_above(&self, t: &T) -> i64 {
        self.real_entries()
            .filter(|(a, _)| *a > t)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn mass_in(&self, interval: &RealInterval<T>) -> i64 {
        self.real_entries()
            .filter(|(a, _)| interval.contains_interior(a))
            .map(|(_, m)| m)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfiledInterval<T> {
    pub interval: RealInterval<T>,
    /// Sum of divisor multiplicities inside the interval.
    pub mass: i64,
}

impl<T> ProfiledInterval<T> {
    pub fn is_odd(&self) -> bool {
        self.mass.rem_euclid(2) == 1
    }
}

/// Parities of the real intervals with respect to a divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalProfile<T> {
    /// All pieces of both loci, left to right.
    pub intervals: Vec<ProfiledInterval<T>>,
    /// Parity of the real circle through infinity (the two half-infinite
    /// pieces glued at infinity, or the whole line when `n = 0`).
    pub infinity_circle_odd: bool,
    /// Number of odd real circles of `tau`.
    pub k: usize,
}

impl<T: Scalar> IntervalProfile<T> {
    pub fn tau(&self) -> impl Iterator<Item = &ProfiledInterval<T>> {
        self.intervals
            .iter()
            .filter(|p| p.interval.locus == Locus::Tau)
    }

    pub fn odd_tau_intervals(&self) -> Vec<&RealInterval<T>> {
        self.tau()
            .filter(|p| p.is_odd())
            .map(|p| &p.interval)
            .collect()
    }

    /// True when there are no real Weierstrass points or the piece `(-inf, r1]` is even.
    pub fn negative_half_even(&self) -> bool {
        match self.intervals.first() {
            Some(p) if p.interval.lo.is_none() && p.interval.hi.is_some() => !p.is_odd(),
            _ => true,
        }
    }

    /// Number of odd `tau`-intervals lying to the right of `t`.
    pub fn odd_intervals_right_of(&self, t: &T) -> usize {
        self.tau()
            .filter(|p| p.is_odd() && p.interval.lo.as_ref().is_some_and(|lo| lo > t))
            .count()
    }
}

pub fn interval_parities<T: Scalar>(
    w: &WeierstrassSet<T>,
    d: &RealDivisor<T>,
) -> Result<IntervalProfile<T>, CurveError> {
    d.validate_against(w)?;
    let intervals: Vec<ProfiledInterval<T>> = real_locus_intervals(w)
        .ordered()
        .into_iter()
        .map(|interval| {
            let mass = d.mass_in(&interval);
            ProfiledInterval { interval, mass }
        })
        .collect();
    let infinity_mass: i64 = intervals
        .iter()
        .filter(|p| !p.interval.is_bounded())
        .map(|p| p.mass)
        .sum();
    let infinity_circle_odd = infinity_mass.rem_euclid(2) == 1;
    let bounded_odd = intervals
        .iter()
        .filter(|p| p.interval.locus == Locus::Tau && p.interval.is_bounded() && p.is_odd())
        .count();
    let k = bounded_odd + usize::from(infinity_circle_odd);
    Ok(IntervalProfile {
        intervals,
        infinity_circle_odd,
        k,
    })
}

/// Real Möbius transformation `t -> (a t + b) / (c t + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusMap<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> MobiusMap<T> {
    pub fn identity() -> Self {
        Self {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    /// `t -> -t`
    pub fn negate() -> Self {
        Self {
            a: -T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    /// `t -> t + c`
    pub fn shift(c: T) -> Self {
        Self {
            a: T::one(),
            b: c,
            c: T::zero(),
            d: T::one(),
        }
    }

    /// `t -> 1 / (c - t)`, sending `c` to infinity.
    pub fn invert_at(c: T) -> Self {
        Self {
            a: T::zero(),
            b: T::one(),
            c: -T::one(),
            d: c,
        }
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Self) -> Self {
        Self {
            a: self.a.clone() * inner.a.clone() + self.b.clone() * inner.c.clone(),
            b: self.a.clone() * inner.b.clone() + self.b.clone() * inner.d.clone(),
            c: self.c.clone() * inner.a.clone() + self.d.clone() * inner.c.clone(),
            d: self.c.clone() * inner.b.clone() + self.d.clone() * inner.d.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// The finite point sent to infinity, if any.
    pub fn pole(&self) -> Option<T> {
        (!self.c.is_zero()).then(|| -self.d.clone() / self.c.clone())
    }

    /// Image of `z`, or `None` when `z` is the pole.
    pub fn apply(&self, z: &Complex<T>) -> Option<Complex<T>> {
        let den = real(self.c.clone()) * z.clone() + real(self.d.clone());
        if den.is_zero() {
            return None;
        }
        Some((real(self.a.clone()) * z.clone() + real(self.b.clone())) / den)
    }
}

impl<T: std::fmt::Display> std::fmt::Display for MobiusMap<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "t -> ({} t + {}) / ({} t + {})",
            self.a, self.b, self.c, self.d
        )
    }
}

/// Curve and divisor re-expressed in a chart where the negative half-infinite
/// `tau`-interval is even.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedChart<T> {
    pub weierstrass: WeierstrassSet<T>,
    pub divisor: RealDivisor<T>,
    pub transform: MobiusMap<T>,
}

fn apply_chart<T: Scalar>(
    map: &MobiusMap<T>,
    w: &WeierstrassSet<T>,
    d: &RealDivisor<T>,
) -> Option<(WeierstrassSet<T>, RealDivisor<T>)> {
    // The new point at infinity must stay on the tau side, otherwise the chart
    // change would exchange the roles of tau and tau∘iota.
    if let Some(pole) = map.pole() {
        if w.sign_at(&pole) <= 0 {
            return None;
        }
    }
    let points = w
        .points()
        .iter()
        .map(|p| map.apply(p))
        .collect::<Option<Vec<_>>>()?;
    let entries = d
        .entries()
        .iter()
        .map(|e| {
            map.apply(&e.point).map(|point| DivisorPoint {
                point,
                mult: e.mult,
            })
        })
        .collect::<Option<Vec<_>>>()?;
    let w2 = WeierstrassSet::new(w.genus(), points).ok()?;
    let d2 = RealDivisor::new(d.genus(), entries).ok()?;
    d2.validate_against(&w2).ok()?;
    Some((w2, d2))
}

/// Candidate poles: midpoints of consecutive special real points, plus one
/// point beyond each end, restricted to the interior of the `tau`-locus.
fn pole_candidates<T: Scalar>(w: &WeierstrassSet<T>, d: &RealDivisor<T>) -> Vec<T> {
    let mut special: Vec<T> = w.real_points();
    special.extend(d.real_entries().map(|(a, _)| a.clone()));
    special.sort_by(cmp_scalar);
    special.dedup();
    let mut out = Vec::new();
    if let (Some(first), Some(last)) = (special.first(), special.last()) {
        out.push(first.clone() - T::one());
        out.extend(special.windows(2).map(|p| p[0].midpoint(&p[1])));
        out.push(last.clone() + T::one());
    }
    out.retain(|c| w.sign_at(c) > 0);
    out
}

/// Moves to a chart in which the negative half-infinite `tau`-interval is even.
///
/// Candidates are tried in a fixed order: identity, `t -> -t`, then
/// `t -> 1/(c - t)` and `t -> -1/(c - t)` for each candidate pole `c`.
pub fn normalize_chart<T: Scalar>(
    w: &WeierstrassSet<T>,
    d: &RealDivisor<T>,
) -> Result<NormalizedChart<T>, CurveError> {
    d.validate_against(w)?;
    if w.n() == 0 {
        return Ok(NormalizedChart {
            weierstrass: w.clone(),
            divisor: d.clone(),
            transform: MobiusMap::identity(),
        });
    }
    let mut maps = vec![MobiusMap::identity(), MobiusMap::negate()];
    for c in pole_candidates(w, d) {
        let inv = MobiusMap::invert_at(c);
        maps.push(MobiusMap::negate().compose(&inv));
        maps.push(inv);
    }
    for map in maps {
        let Some((w2, d2)) = apply_chart(&map, w, d) else {
            continue;
        };
        if interval_parities(&w2, &d2)?.negative_half_even() {
            return Ok(NormalizedChart {
                weierstrass: w2,
                divisor: d2,
                transform: map,
            });
        }
    }
    Err(CurveError::ChartSearchExhausted)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Signed;

    pub(crate) fn q(p: i64, d: i64) -> Rational {
        Rational::ratio(p, d)
    }

    pub(crate) fn re(p: i64) -> Complex<Rational> {
        Complex::new(q(p, 1), q(0, 1))
    }

    pub(crate) fn cx(a: i64, b: i64) -> Complex<Rational> {
        Complex::new(q(a, 1), q(b, 1))
    }

    pub(crate) fn ws(points: Vec<Complex<Rational>>) -> WeierstrassSet<Rational> {
        let g = points.len() / 2 - 1;
        WeierstrassSet::new(g, points).unwrap()
    }

    pub(crate) fn div(g: usize, e: &[(Complex<Rational>, i64)]) -> RealDivisor<Rational> {
        RealDivisor::new(
            g,
            e.iter()
                .map(|(p, m)| DivisorPoint {
                    point: p.clone(),
                    mult: *m,
                })
                .collect(),
        )
        .unwrap()
    }

    pub(crate) fn w_real6() -> WeierstrassSet<Rational> {
        ws((0..6).map(re).collect())
    }

    pub(crate) fn w_mixed() -> WeierstrassSet<Rational> {
        ws(vec![re(0), re(1), re(2), re(3), cx(0, 1), cx(0, -1)])
    }

    pub(crate) fn w_complex() -> WeierstrassSet<Rational> {
        ws(vec![
            cx(0, 1),
            cx(0, -1),
            cx(1, 1),
            cx(1, -1),
            cx(2, 1),
            cx(2, -1),
        ])
    }

    fn iv(lo: Option<i64>, hi: Option<i64>, locus: Locus) -> RealInterval<Rational> {
        RealInterval {
            lo: lo.map(|x| q(x, 1)),
            hi: hi.map(|x| q(x, 1)),
            locus,
        }
    }

    #[test]
    fn partition_examples() {
        let p = partition_weierstrass(&w_real6());
        assert_eq!(p.real, (0..6).map(|i| q(i, 1)).collect::<Vec<_>>());
        assert_eq!(p.n(), 3);
        assert!(p.upper.is_empty());

        let p = partition_weierstrass(&w_complex());
        assert!(p.real.is_empty());
        assert_eq!(p.upper, vec![cx(0, 1), cx(1, 1), cx(2, 1)]);
        assert_eq!(p.lower, vec![cx(0, -1), cx(1, -1), cx(2, -1)]);

        let p = partition_weierstrass(&w_mixed());
        assert_eq!(p.n(), 2);
        assert_eq!(p.upper, vec![cx(0, 1)]);
    }

    #[test]
    fn rejects_bad_sets() {
        let dup = WeierstrassSet::new(2, vec![re(0), re(0), re(2), re(3), re(4), re(5)]);
        assert!(matches!(dup, Err(CurveError::DuplicatePoint(_))));
        let asym = WeierstrassSet::new(2, vec![re(0), re(1), re(2), re(3), cx(0, 1), cx(1, -1)]);
        assert!(matches!(asym, Err(CurveError::NotConjugationSymmetric(_))));
        let short = WeierstrassSet::new(2, vec![re(0), re(1)]);
        assert!(matches!(short, Err(CurveError::WrongPointCount { .. })));
        assert!(matches!(
            WeierstrassSet::<Rational>::new(1, vec![]),
            Err(CurveError::GenusTooSmall(1))
        ));
    }

    #[test]
    fn topology_table() {
        let t = classify_topology(&w_real6());
        assert_eq!((t.components_tau, t.components_tau_iota), (3, 3));
        assert!(t.dividing_tau && t.dividing_tau_iota);

        let t = classify_topology(&w_complex());
        assert_eq!((t.components_tau, t.components_tau_iota), (1, 0));
        assert!(t.dividing_tau && !t.dividing_tau_iota);

        let t = classify_topology(&w_mixed());
        assert_eq!((t.components_tau, t.components_tau_iota), (2, 2));
        assert!(!t.dividing_tau && !t.dividing_tau_iota);
    }

    /// Sign oracle: evaluate P directly at a sample point of each gap.
    fn sign_by_product(w: &WeierstrassSet<Rational>, t: &Rational) -> i8 {
        let v = w
            .points()
            .iter()
            .fold(Complex::new(q(1, 1), q(0, 1)), |acc, p| {
                acc * (real(t.clone()) - p.clone())
            });
        assert!(v.im.is_zero());
        if v.re.is_positive() {
            1
        } else {
            -1
        }
    }

    #[test]
    fn real_locus_matches_sign_oracle() {
        let w = w_real6();
        let locus = real_locus_intervals(&w);
        assert_eq!(
            locus.tau,
            vec![
                iv(None, Some(0), Locus::Tau),
                iv(Some(1), Some(2), Locus::Tau),
                iv(Some(3), Some(4), Locus::Tau),
                iv(Some(5), None, Locus::Tau),
            ]
        );
        assert_eq!(
            locus.tau_iota,
            vec![
                iv(Some(0), Some(1), Locus::TauIota),
                iv(Some(2), Some(3), Locus::TauIota),
                iv(Some(4), Some(5), Locus::TauIota),
            ]
        );
        for w in [w_real6(), w_mixed()] {
            let locus = real_locus_intervals(&w);
            for x in -3..=12 {
                let t = q(2 * x + 1, 4);
                let s = sign_by_product(&w, &t);
                assert_eq!(s, w.sign_at(&t));
                let in_tau = locus.tau.iter().any(|i| i.contains_interior(&t));
                let in_ti = locus.tau_iota.iter().any(|i| i.contains_interior(&t));
                assert_eq!(in_tau, s > 0);
                assert_eq!(in_ti, s < 0);
            }
        }
        let locus = real_locus_intervals(&w_mixed());
        assert_eq!(
            locus.tau,
            vec![
                iv(None, Some(0), Locus::Tau),
                iv(Some(1), Some(2), Locus::Tau),
                iv(Some(3), None, Locus::Tau),
            ]
        );
        let locus = real_locus_intervals(&w_complex());
        assert_eq!(locus.tau, vec![iv(None, None, Locus::Tau)]);
        assert!(locus.tau_iota.is_empty());
    }

    #[test]
    fn parity_examples() {
        let w = w_real6();
        let d = div(
            2,
            &[
                (Complex::new(q(3, 2), q(0, 1)), -1),
                (Complex::new(q(7, 2), q(0, 1)), -1),
                (re(6), -3),
            ],
        );
        let p = interval_parities(&w, &d).unwrap();
        let odd: Vec<_> = p.odd_tau_intervals().into_iter().cloned().collect();
        assert_eq!(
            odd,
            vec![
                iv(Some(1), Some(2), Locus::Tau),
                iv(Some(3), Some(4), Locus::Tau),
                iv(Some(5), None, Locus::Tau),
            ]
        );
        assert!(p.infinity_circle_odd);
        assert_eq!(p.k, 3);

        let d = div(2, &[(re(6), -5)]);
        let p = interval_parities(&w, &d).unwrap();
        assert!(p.infinity_circle_odd);
        assert_eq!(p.k, 1);
        assert_eq!(p.tau().count(), 4);
    }

    #[test]
    fn divisor_validation() {
        assert!(matches!(
            RealDivisor::new(
                2,
                vec![DivisorPoint {
                    point: re(6),
                    mult: -4
                }]
            ),
            Err(CurveError::WrongDivisorDegree {
                expected: -5,
                found: -4
            })
        ));
        assert!(matches!(
            RealDivisor::new(
                2,
                vec![
                    DivisorPoint {
                        point: cx(9, 1),
                        mult: -2
                    },
                    DivisorPoint {
                        point: re(6),
                        mult: -1
                    }
                ]
            ),
            Err(CurveError::DivisorNotSymmetric(_))
        ));
        let d = div(2, &[(re(3), -5)]);
        assert!(matches!(
            d.validate_against(&w_real6()),
            Err(CurveError::DivisorOnWeierstrassPoint(_))
        ));
        // 1/2 lies inside the tau∘iota interval [0, 1].
        let d = div(2, &[(Complex::new(q(1, 2), q(0, 1)), -5)]);
        assert!(matches!(
            d.validate_against(&w_real6()),
            Err(CurveError::OddMultiplicityOffRealCircle { .. })
        ));
        let d = div(2, &[(Complex::new(q(1, 2), q(0, 1)), -6), (re(7), 1)]);
        assert!(d.validate_against(&w_real6()).is_ok());
    }

    #[test]
    fn normalize_identity_when_already_even() {
        let w = w_real6();
        let d = div(2, &[(re(6), -5)]);
        let chart = normalize_chart(&w, &d).unwrap();
        assert!(chart.transform.is_identity());
        assert_eq!(chart.weierstrass, w);

        let w = w_complex();
        let d = div(2, &[(re(0), -5)]);
        assert!(normalize_chart(&w, &d).unwrap().transform.is_identity());
    }

    #[test]
    fn normalize_flips_odd_negative_half() {
        let w = w_real6();
        let d = div(2, &[(re(-1), -5)]);
        assert!(!interval_parities(&w, &d).unwrap().negative_half_even());
        let chart = normalize_chart(&w, &d).unwrap();
        assert_eq!(chart.transform, MobiusMap::negate());
        let p = interval_parities(&chart.weierstrass, &chart.divisor).unwrap();
        assert!(p.negative_half_even());
        assert_eq!(p.k, 1);
    }

    #[test]
    fn normalize_moves_infinity_when_both_halves_odd() {
        // Both half-infinite pieces odd, the infinity circle is even; needs a
        // new point at infinity.
        let w = w_real6();
        let d = div(
            2,
            &[
                (re(-1), -3),
                (re(7), -3),
                (Complex::new(q(3, 2), q(0, 1)), 1),
            ],
        );
        let p = interval_parities(&w, &d).unwrap();
        assert!(!p.negative_half_even());
        let chart = normalize_chart(&w, &d).unwrap();
        assert!(chart.transform.pole().is_some());
        let p2 = interval_parities(&chart.weierstrass, &chart.divisor).unwrap();
        assert!(p2.negative_half_even());
        assert_eq!(p2.k, p.k);
        assert_eq!(classify_topology(&chart.weierstrass), classify_topology(&w));
    }

    #[test]
    fn mobius_compose_and_apply() {
        let m = MobiusMap::invert_at(q(2, 1));
        assert_eq!(m.pole(), Some(q(2, 1)));
        assert_eq!(m.apply(&re(2)), None);
        assert_eq!(m.apply(&re(3)), Some(re(-1)));
        let id = MobiusMap::<Rational>::negate().compose(&MobiusMap::negate());
        assert!(id.is_identity());
        let s = MobiusMap::shift(q(1, 1)).compose(&MobiusMap::shift(q(2, 1)));
        assert_eq!(s.apply(&re(0)), Some(re(3)));
    }

    #[test]
    fn float_scalars_work() {
        let w =
            WeierstrassSet::<f64>::new(2, (0..6).map(|i| Complex::new(i as f64, 0.0)).collect())
                .unwrap();
        let d = RealDivisor::new(
            2,
            vec![DivisorPoint {
                point: Complex::new(6.0, 0.0),
                mult: -5,
            }],
        )
        .unwrap();
        assert_eq!(interval_parities(&w, &d).unwrap().k, 1);
    }
}
