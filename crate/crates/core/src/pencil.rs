//! The diagonal pencil of quadrics attached to a curve and a divisor, and its
//! real normal form.
//!
//! In the basis `{u_w}` of sections at the Weierstrass points the pencil is
//! diagonal with
//!
//! ```text
//! Q0(u_w^2) = prod_i (t_w - alpha_i)^{m_i} * prod_{w' != w} (t_w - t_w')
//! Q1(u_w^2) = t_w * Q0(u_w^2)
//! ```
//!
//! These values are computed exactly. The change to a conjugation-fixed basis
//! needs square roots and is carried out in floating point ([`BasisChange`]).

use num_complex::Complex;
use num_traits::{Float, FloatConst, One, Zero};
use serde::{Serialize, Serializer};

use crate::curve::{interval_parities, IntervalProfile, RealDivisor, WeierstrassSet};
use crate::error::PencilError;
use crate::scalar::{is_real, powi, real, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^n`
    pub fn from_parity(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of<T: Scalar>(x: &T) -> Option<Self> {
        if x.is_positive() {
            Some(Sign::Plus)
        } else if x.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilEntry<T> {
    pub t: Complex<T>,
    /// `Q0(u_w^2)`, never zero.
    pub q0: Complex<T>,
    /// Index of the conjugate Weierstrass point.
    pub partner: usize,
}

impl<T: Scalar> PencilEntry<T> {
    pub fn q1(&self) -> Complex<T> {
        self.t.clone() * self.q0.clone()
    }
}

/// Diagonal pencil in the basis `{u_w}`.
///
/// Entries are ordered: real points increasing, then the points of `W+`, then
/// their conjugates in the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalPencil<T> {
    genus: usize,
    entries: Vec<PencilEntry<T>>,
    real_count: usize,
}

impl<T: Scalar> DiagonalPencil<T> {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn entries(&self) -> &[PencilEntry<T>] {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    /// Number of real Weierstrass points, `2n`.
    pub fn real_count(&self) -> usize {
        self.real_count
    }

    pub fn pair_count(&self) -> usize {
        (self.entries.len() - self.real_count) / 2
    }

    /// Polar form `R_w e^{i theta_w}` of `Q0(u_w^2)` with `theta_w` in `[0, 2 pi)`.
    pub fn polar<F: Float + FloatConst>(&self, index: usize) -> (F, F) {
        let q = &self.entries[index].q0;
        let z = Complex::new(to_float::<F, T>(&q.re), to_float::<F, T>(&q.im));
        let mut theta = z.arg();
        if theta < F::zero() {
            theta = theta + F::TAU();
        }
        (z.norm(), theta)
    }

    /// `e^{i theta_w}` at each real point, read off the exact values.
    pub fn real_signs(&self) -> Vec<Sign> {
        self.entries[..self.real_count]
            .iter()
            .map(|e| Sign::of(&e.q0.re).expect("Q0 is nonzero"))
            .collect()
    }

    /// The pencil for the section `c * u`: every value is multiplied by `c^2`.
    pub fn scaled(&self, c: &T) -> Self {
        let factor = real(c.clone() * c.clone());
        let entries = self
            .entries
            .iter()
            .map(|e| PencilEntry {
                t: e.t.clone(),
                q0: e.q0.clone() * factor.clone(),
                partner: e.partner,
            })
            .collect();
        Self {
            genus: self.genus,
            entries,
            real_count: self.real_count,
        }
    }
}

pub(crate) fn to_float<F: Float, T: Scalar>(x: &T) -> F {
    F::from(x.to_f64_lossy()).unwrap_or_else(F::nan)
}

pub fn build_pencil<T: Scalar>(
    w: &WeierstrassSet<T>,
    d: &RealDivisor<T>,
) -> Result<DiagonalPencil<T>, PencilError> {
    d.validate_against(w)?;
    let real_pts = w.real_points();
    let upper = w.upper_points();
    let s = upper.len();
    let mut order: Vec<Complex<T>> = real_pts.iter().cloned().map(real).collect();
    order.extend(upper.iter().cloned());
    order.extend(upper.iter().map(|z| z.conj()));
    let real_count = real_pts.len();

    let mut entries = Vec::with_capacity(order.len());
    for (i, tw) in order.iter().enumerate() {
        let mut q0 = Complex::<T>::one();
        for e in d.entries() {
            q0 = q0 * powi(&(tw.clone() - e.point.clone()), e.mult);
        }
        for (j, other) in order.iter().enumerate() {
            if i != j {
                q0 = q0 * (tw.clone() - other.clone());
            }
        }
        if q0.is_zero() {
            return Err(PencilError::VanishingValue(tw.to_string()));
        }
        let partner = if i < real_count {
            i
        } else if i < real_count + s {
            i + s
        } else {
            i - s
        };
        entries.push(PencilEntry {
            t: tw.clone(),
            q0,
            partner,
        });
    }
    Ok(DiagonalPencil {
        genus: w.genus(),
        entries,
        real_count,
    })
}

/// True iff all points are distinct, so the pencil has `2g + 2` distinct eigenvalues.
pub fn genericity_check<T: Scalar>(points: &[Complex<T>]) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, p)| points[i + 1..].iter().all(|q| q != p))
}

/// `e^{i theta_w}` at a real point `t`, as `(-1)^N` with
/// `N = #{real w' > t} + sum_{real alpha > t} m`.
pub fn theta_sign<T: Scalar>(d: &RealDivisor<T>, real_points: &[T], t: &T) -> Sign {
    let above = real_points.iter().filter(|r| *r > t).count() as i64;
    Sign::from_parity(above + d.real_mass_above(t))
}

/// `epsilon_i = (-1)^{N_i + 1}` with `N_i` the number of odd intervals right of `r_{2i-1}`.
pub fn epsilon_signs_by_intervals<T: Scalar>(
    profile: &IntervalProfile<T>,
    real_points: &[T],
) -> Vec<Sign> {
    real_points
        .iter()
        .step_by(2)
        .map(|r| Sign::from_parity(profile.odd_intervals_right_of(r) as i64 + 1))
        .collect()
}

/// `epsilon_i = e^{i theta_w}` at `w = r_{2i-1}`, from the sign count.
pub fn epsilon_signs_by_count<T: Scalar>(d: &RealDivisor<T>, real_points: &[T]) -> Vec<Sign> {
    real_points
        .iter()
        .step_by(2)
        .map(|r| theta_sign(d, real_points, r))
        .collect()
}

/// Normal-form signs. The sign count is primary; the interval count and the
/// sign at each `r_{2i}` (which must be `-epsilon_i`) are checked against it.
pub fn epsilon_signs<T: Scalar>(
    profile: &IntervalProfile<T>,
    d: &RealDivisor<T>,
    real_points: &[T],
) -> Result<Vec<Sign>, PencilError> {
    if !profile.negative_half_even() {
        return Err(PencilError::NotNormalized);
    }
    let primary = epsilon_signs_by_count(d, real_points);
    let check = epsilon_signs_by_intervals(profile, real_points);
    for (i, (p, c)) in primary.iter().zip(&check).enumerate() {
        let second = theta_sign(d, real_points, &real_points[2 * i + 1]);
        if p != c || second != p.flip() {
            return Err(PencilError::EpsilonMismatch {
                index: i,
                expected: p.value(),
                found: c.value(),
            });
        }
    }
    if primary.first() == Some(&Sign::Minus) {
        return Err(PencilError::NotNormalized);
    }
    Ok(primary)
}

/// Real normal form of the pencil:
///
/// ```text
/// q0 = sum_i eps_i (x_{2i-1}^2 - x_{2i}^2) + sum_j (z_j^2 - w_j^2)
/// q1 = sum_i eps_i (r_{2i-1} x_{2i-1}^2 - r_{2i} x_{2i}^2) + sum_j (a_j (z_j^2 - w_j^2) + 2 b_j z_j w_j)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct RealNormalForm<T> {
    pub genus: usize,
    pub eps: Vec<Sign>,
    /// `r_1 < ... < r_{2n}`.
    pub real_eigs: Vec<T>,
    /// `(a_j, b_j)` with `b_j > 0`.
    pub complex_pairs: Vec<(T, T)>,
}

impl<T: Scalar> RealNormalForm<T> {
    pub fn n(&self) -> usize {
        self.eps.len()
    }

    pub fn s(&self) -> usize {
        self.complex_pairs.len()
    }

    pub fn dimension(&self) -> usize {
        2 * self.n() + 2 * self.s()
    }

    /// Normal form read directly off the signs of the pencil values.
    pub fn from_pencil(pencil: &DiagonalPencil<T>) -> Result<Self, PencilError> {
        let signs = pencil.real_signs();
        let mut eps = Vec::with_capacity(signs.len() / 2);
        for (i, pair) in signs.chunks(2).enumerate() {
            if pair[1] != pair[0].flip() {
                return Err(PencilError::EpsilonMismatch {
                    index: i,
                    expected: pair[0].flip().value(),
                    found: pair[1].value(),
                });
            }
            eps.push(pair[0]);
        }
        if eps.first() == Some(&Sign::Minus) {
            return Err(PencilError::NotNormalized);
        }
        let entries = pencil.entries();
        let rc = pencil.real_count();
        Ok(Self {
            genus: pencil.genus(),
            eps,
            real_eigs: entries[..rc].iter().map(|e| e.t.re.clone()).collect(),
            complex_pairs: entries[rc..rc + pencil.pair_count()]
                .iter()
                .map(|e| (e.t.re.clone(), e.t.im.clone()))
                .collect(),
        })
    }

    /// Symmetric Gram matrices `(A, B)` of `q0` and `q1` in the coordinates
    /// `x_1, ..., x_{2n}, z_1, w_1, ..., z_s, w_s`.
    pub fn gram_matrices(&self) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
        let dim = self.dimension();
        let mut a = vec![vec![T::zero(); dim]; dim];
        let mut b = vec![vec![T::zero(); dim]; dim];
        for (i, e) in self.eps.iter().enumerate() {
            let (p, q) = (2 * i, 2 * i + 1);
            a[p][p] = e.apply(T::one());
            a[q][q] = e.flip().apply(T::one());
            b[p][p] = e.apply(self.real_eigs[p].clone());
            b[q][q] = e.flip().apply(self.real_eigs[q].clone());
        }
        let off = 2 * self.n();
        for (j, (re, im)) in self.complex_pairs.iter().enumerate() {
            let (z, w) = (off + 2 * j, off + 2 * j + 1);
            a[z][z] = T::one();
            a[w][w] = -T::one();
            b[z][z] = re.clone();
            b[w][w] = -re.clone();
            b[z][w] = im.clone();
            b[w][z] = im.clone();
        }
        (a, b)
    }
}

/// `c1 m1 + c2 m2 - ...` with zero terms dropped and unit coefficients elided.
fn format_terms<T: Scalar>(terms: &[(T, String)]) -> String {
    let mut out = String::new();
    for (c, m) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let negative = c.is_negative();
        let magnitude = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if magnitude.is_one() {
            out.push_str(m);
        } else {
            out.push_str(&format!("{magnitude} {m}"));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

impl<T: Scalar> RealNormalForm<T> {
    /// Expanded terms of `q0` and `q1`.
    pub fn polynomials(&self) -> (String, String) {
        let mut q0 = Vec::new();
        let mut q1 = Vec::new();
        for (i, e) in self.eps.iter().enumerate() {
            let (p, q) = (2 * i, 2 * i + 1);
            let (xp, xq) = (format!("x{}^2", p + 1), format!("x{}^2", q + 1));
            q0.push((e.apply(T::one()), xp.clone()));
            q0.push((e.flip().apply(T::one()), xq.clone()));
            q1.push((e.apply(self.real_eigs[p].clone()), xp));
            q1.push((e.flip().apply(self.real_eigs[q].clone()), xq));
        }
        for (j, (a, b)) in self.complex_pairs.iter().enumerate() {
            let j = j + 1;
            q0.push((T::one(), format!("z{j}^2")));
            q0.push((-T::one(), format!("w{j}^2")));
            q1.push((a.clone(), format!("z{j}^2")));
            q1.push((-a.clone(), format!("w{j}^2")));
            q1.push((T::from_int(2) * b.clone(), format!("z{j} w{j}")));
        }
        (format_terms(&q0), format_terms(&q1))
    }
}

impl<T: Scalar> std::fmt::Display for RealNormalForm<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (q0, q1) = self.polynomials();
        writeln!(f, "q0 = {q0}")?;
        write!(f, "q1 = {q1}")
    }
}

pub fn real_normal_form<T: Scalar>(
    w: &WeierstrassSet<T>,
    d: &RealDivisor<T>,
) -> Result<RealNormalForm<T>, PencilError> {
    let profile = interval_parities(w, d)?;
    let real_eigs = w.real_points();
    let eps = epsilon_signs(&profile, d, &real_eigs)?;
    let complex_pairs = w.upper_points().into_iter().map(|z| (z.re, z.im)).collect();
    Ok(RealNormalForm {
        genus: w.genus(),
        eps,
        real_eigs,
        complex_pairs,
    })
}

/// Change of basis from `{u_w}` to the conjugation-fixed basis
/// `{v_w} ∪ {v'_w, v''_w}`; column `j` holds the `u`-coordinates of the `j`-th
/// new basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange<F> {
    pub matrix: Vec<Vec<Complex<F>>>,
    partner: Vec<usize>,
}

pub fn basis_change<F, T>(pencil: &DiagonalPencil<T>) -> BasisChange<F>
where
    F: Float + FloatConst,
    T: Scalar,
{
    let dim = pencil.dimension();
    let rc = pencil.real_count();
    let s = pencil.pair_count();
    let mut m = vec![vec![Complex::new(F::zero(), F::zero()); dim]; dim];
    for i in 0..rc {
        let (r, _) = pencil.polar::<F>(i);
        m[i][i] = Complex::new(r.sqrt().recip(), F::zero());
    }
    let two = F::one() + F::one();
    for j in 0..s {
        let w = rc + j;
        let nu = w + s;
        let (r, theta) = pencil.polar::<F>(w);
        let scale = (two * r).sqrt().recip();
        let minus = Complex::from_polar(scale, -theta / two);
        let plus = Complex::from_polar(scale, theta / two);
        let i = Complex::<F>::i();
        let (c1, c2) = (rc + 2 * j, rc + 2 * j + 1);
        m[w][c1] = minus;
        m[nu][c1] = plus;
        m[w][c2] = -i * minus;
        m[nu][c2] = i * plus;
    }
    BasisChange {
        matrix: m,
        partner: pencil.entries().iter().map(|e| e.partner).collect(),
    }
}

impl<F: Float> BasisChange<F> {
    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    /// `P^T diag(values) P`, the Gram matrix of a diagonal bilinear form in the new basis.
    pub fn congruence(&self, diag: &[Complex<F>]) -> Vec<Vec<Complex<F>>> {
        let n = self.dimension();
        let zero = Complex::new(F::zero(), F::zero());
        let mut out = vec![vec![zero; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..n).fold(zero, |acc, w| {
                    acc + self.matrix[w][i] * diag[w] * self.matrix[w][j]
                });
            }
        }
        out
    }

    /// Largest `|P[nu(w)][c] - conj(P[w][c])|`; zero iff every column is fixed
    /// by the induced conjugation.
    pub fn conjugation_defect(&self) -> F {
        let mut worst = F::zero();
        for (w, row) in self.matrix.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let d = (self.matrix[self.partner[w]][c] - v.conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn inverse(&self) -> Option<Vec<Vec<Complex<F>>>> {
        invert(&self.matrix)
    }

    /// Maps the transformed Gram matrix back with `P^{-1}` and returns the
    /// largest deviation from the original diagonal, relative to its largest entry.
    pub fn round_trip_defect(&self, diag: &[Complex<F>]) -> Option<F> {
        let forward = self.congruence(diag);
        let inv = self.inverse()?;
        let n = self.dimension();
        let zero = Complex::new(F::zero(), F::zero());
        let scale = diag.iter().fold(F::one(), |m, z| m.max(z.norm()));
        let mut worst = F::zero();
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero;
                for a in 0..n {
                    for b in 0..n {
                        acc = acc + inv[a][i] * forward[a][b] * inv[b][j];
                    }
                }
                let expected = if i == j { diag[i] } else { zero };
                worst = worst.max((acc - expected).norm() / scale);
            }
        }
        Some(worst)
    }
}

fn invert<F: Float>(m: &[Vec<Complex<F>>]) -> Option<Vec<Vec<Complex<F>>>> {
    let n = m.len();
    let zero = Complex::new(F::zero(), F::zero());
    let one = Complex::new(F::one(), F::zero());
    let mut a: Vec<Vec<Complex<F>>> = m.to_vec();
    let mut inv: Vec<Vec<Complex<F>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| {
            a[x][col]
                .norm()
                .partial_cmp(&a[y][col].norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].norm() <= F::epsilon() {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] = a[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != zero {
                    for j in 0..n {
                        a[r][j] = a[r][j] - f * a[col][j];
                        inv[r][j] = inv[r][j] - f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceReport {
    pub dimension: usize,
    /// Largest `|Re(P^T G P) - normal form|` over both forms.
    pub max_deviation: f64,
    /// Largest `|Im(P^T G P)|` over both forms.
    pub max_imaginary: f64,
}

/// Checks that the basis change carries the diagonal pencil onto the normal form.
pub fn verify_normal_form<F, T>(
    pencil: &DiagonalPencil<T>,
    basis: &BasisChange<F>,
    nf: &RealNormalForm<T>,
    tol: f64,
) -> Result<CongruenceReport, PencilError>
where
    F: Float,
    T: Scalar,
{
    let dim = pencil.dimension();
    if basis.dimension() != dim || nf.dimension() != dim {
        return Err(PencilError::DimensionMismatch(format!(
            "pencil {dim}, basis {}, normal form {}",
            basis.dimension(),
            nf.dimension()
        )));
    }
    let cf = |z: &Complex<T>| Complex::new(to_float::<F, T>(&z.re), to_float::<F, T>(&z.im));
    let d0: Vec<_> = pencil.entries().iter().map(|e| cf(&e.q0)).collect();
    let d1: Vec<_> = pencil.entries().iter().map(|e| cf(&e.q1())).collect();
    let (a, b) = nf.gram_matrices();
    let mut report = CongruenceReport {
        dimension: dim,
        max_deviation: 0.0,
        max_imaginary: 0.0,
    };
    let mut worst: Option<(usize, usize, usize, f64, f64)> = None;
    for (form, (diag, expected)) in [(d0, a), (d1, b)].into_iter().enumerate() {
        let got = basis.congruence(&diag);
        for i in 0..dim {
            for j in 0..dim {
                let dev = (got[i][j].re.to_f64().unwrap_or(f64::NAN)
                    - expected[i][j].to_f64_lossy())
                .abs();
                let imag = got[i][j].im.to_f64().unwrap_or(f64::NAN).abs();
                report.max_deviation = report.max_deviation.max(dev);
                report.max_imaginary = report.max_imaginary.max(imag);
                let bad = !(dev <= tol && imag <= tol);
                if bad && worst.is_none_or(|w| dev.max(imag) > w.3.max(w.4)) {
                    worst = Some((form, i, j, dev, imag));
                }
            }
        }
    }
    match worst {
        Some((form, row, col, deviation, imaginary)) => Err(PencilError::CongruenceFailure {
            form,
            row,
            col,
            deviation,
            imaginary,
        }),
        None => Ok(report),
    }
}

#[allow(dead_code)]
fn assert_real_points_first<T: Scalar>(p: &DiagonalPencil<T>) -> bool {
    p.entries()
        .iter()
        .enumerate()
        .all(|(i, e)| is_real(&e.t) == (i < p.real_count()))
}
