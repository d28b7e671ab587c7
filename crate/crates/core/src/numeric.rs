//! Floating-point sampling of the real intersection of two quadrics on the unit sphere.

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::NumericError;
use crate::pencil::{to_float, RealNormalForm};
use crate::scalar::Scalar;
use crate::union_find::UnionFind;

pub const MAX_ITERATIONS: usize = 100;
pub const NEWTON_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const RANK_TOL: f64 = 1e-6;
pub const MIN_CLOUD: usize = 100;

/// Scalars the sampler runs on.
pub trait Real: Float + Send + Sync + std::fmt::Debug + std::fmt::Display + 'static {}

impl Real for f32 {}
impl Real for f64 {}

fn newton_tol<F: Real>() -> F {
    F::from(NEWTON_TOL.max(10.0 * F::epsilon().to_f64().unwrap_or(0.0))).unwrap()
}

fn residual_tol<F: Real>() -> F {
    F::from(RESIDUAL_TOL.max(100.0 * F::epsilon().to_f64().unwrap_or(0.0))).unwrap()
}

fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + *x * *y)
}

fn mat_vec<F: Real>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn normalize<F: Real>(v: &mut [F]) -> bool {
    let n = dot(v, v).sqrt();
    if !(n > F::zero()) || !n.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x = *x / n);
    true
}

/// Symmetric Gram matrices of `q0` and `q1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricPair<F> {
    pub a: Vec<Vec<F>>,
    pub b: Vec<Vec<F>>,
}

impl<F: Real> QuadricPair<F> {
    pub fn new(a: Vec<Vec<F>>, b: Vec<Vec<F>>) -> Result<Self, NumericError> {
        let n = a.len();
        let square = |m: &Vec<Vec<F>>| m.len() == n && m.iter().all(|r| r.len() == n);
        let symmetric = |m: &Vec<Vec<F>>| (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]));
        if n == 0 || !square(&a) || !square(&b) || !symmetric(&a) || !symmetric(&b) {
            return Err(NumericError::BadMatrices);
        }
        Ok(Self { a, b })
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    /// `(q0(v), q1(v))`.
    pub fn eval(&self, v: &[F]) -> (F, F) {
        (dot(v, &mat_vec(&self.a, v)), dot(v, &mat_vec(&self.b, v)))
    }

    pub fn residual(&self, v: &[F]) -> F {
        let (p, q) = self.eval(v);
        p.abs().max(q.abs())
    }

    /// Gradients of `q0` and `q1` projected onto the tangent space of the sphere at `v`.
    pub fn tangent_jacobian(&self, v: &[F]) -> [Vec<F>; 2] {
        let two = F::one() + F::one();
        let project = |m: &[Vec<F>]| {
            let g: Vec<F> = mat_vec(m, v).into_iter().map(|x| two * x).collect();
            let c = dot(&g, v);
            g.iter()
                .zip(v)
                .map(|(gi, vi)| *gi - c * *vi)
                .collect::<Vec<F>>()
        };
        [project(&self.a), project(&self.b)]
    }

    /// Singular values `(sigma1, sigma2)`, largest first, of the projected Jacobian.
    pub fn singular_values(&self, v: &[F]) -> (F, F) {
        let [r0, r1] = self.tangent_jacobian(v);
        let (p, q, s) = (dot(&r0, &r0), dot(&r1, &r1), dot(&r0, &r1));
        let two = F::one() + F::one();
        let half_trace = (p + q) / two;
        let disc = (((p - q) / two).powi(2) + s * s).sqrt();
        let l1 = half_trace + disc;
        let l2 = (p * q - s * s) / l1;
        (l1.max(F::zero()).sqrt(), l2.max(F::zero()).sqrt())
    }

    /// Newton projection from `start` onto `q0 = q1 = 0` on the unit sphere.
    pub fn project(&self, start: &[F]) -> Option<(Vec<F>, F)> {
        let mut v = start.to_vec();
        if !normalize(&mut v) {
            return None;
        }
        let tol = newton_tol::<F>();
        let mut res = self.residual(&v);
        for _ in 0..MAX_ITERATIONS {
            if res <= tol {
                break;
            }
            let step = self.newton_step(&v)?;
            let mut t = F::one();
            let mut accepted = None;
            for _ in 0..30 {
                let mut cand: Vec<F> = v.iter().zip(&step).map(|(x, d)| *x - t * *d).collect();
                if normalize(&mut cand) {
                    let r = self.residual(&cand);
                    if r < res {
                        accepted = Some((cand, r));
                        break;
                    }
                }
                t = t / (F::one() + F::one());
            }
            let (cand, r) = accepted?;
            v = cand;
            res = r;
        }
        (res <= residual_tol::<F>()).then_some((v, res))
    }

    /// Minimum-norm solution of `J delta = (q0, q1, |v|^2 - 1)`.
    fn newton_step(&self, v: &[F]) -> Option<Vec<F>> {
        let two = F::one() + F::one();
        let av = mat_vec(&self.a, v);
        let bv = mat_vec(&self.b, v);
        let rows: [Vec<F>; 3] = [
            av.iter().map(|x| two * *x).collect(),
            bv.iter().map(|x| two * *x).collect(),
            v.iter().map(|x| two * *x).collect(),
        ];
        let f = [dot(v, &av), dot(v, &bv), dot(v, v) - F::one()];
        let mut g = [[F::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = dot(&rows[i], &rows[j]);
            }
        }
        let y = solve3(g, f)?;
        Some(
            (0..v.len())
                .map(|k| rows[0][k] * y[0] + rows[1][k] * y[1] + rows[2][k] * y[2])
                .collect(),
        )
    }
}

fn solve3<F: Real>(mut m: [[F; 3]; 3], mut b: [F; 3]) -> Option<[F; 3]> {
    let scale = m
        .iter()
        .flatten()
        .fold(F::zero(), |acc, x| acc.max(x.abs()));
    if !(scale > F::zero()) {
        return None;
    }
    for col in 0..3 {
        let p = (col..3).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[p][col].abs() <= scale * F::epsilon() * F::from(64.0).unwrap() {
            return None;
        }
        m.swap(col, p);
        b.swap(col, p);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for c in col..3 {
                m[r][c] = m[r][c] - f * m[col][c];
            }
            b[r] = b[r] - f * b[col];
        }
    }
    let mut x = [F::zero(); 3];
    for i in (0..3).rev() {
        let s = (i + 1..3).fold(b[i], |acc, j| acc - m[i][j] * x[j]);
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Gram matrices of the normal form, in the same coordinates.
pub fn quadric_matrices<F: Real, T: Scalar>(nf: &RealNormalForm<T>) -> QuadricPair<F> {
    let (a, b) = nf.gram_matrices();
    let conv = |m: Vec<Vec<T>>| -> Vec<Vec<F>> {
        m.iter()
            .map(|r| r.iter().map(|x| to_float::<F, T>(x)).collect())
            .collect()
    };
    QuadricPair {
        a: conv(a),
        b: conv(b),
    }
}

/// Points on the intersection together with their residuals and Jacobian
/// singular values.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud<F> {
    pub points: Vec<Vec<F>>,
    pub residuals: Vec<F>,
    pub singular_values: Vec<(F, F)>,
    pub seed: u64,
    pub attempted: usize,
}

impl<F: Real> SampleCloud<F> {
    /// Cloud from given points, e.g. constructed analytically.
    pub fn from_points(qp: &QuadricPair<F>, points: Vec<Vec<F>>, seed: u64) -> Self {
        let residuals = points.iter().map(|p| qp.residual(p)).collect();
        let singular_values = points.iter().map(|p| qp.singular_values(p)).collect();
        let attempted = points.len();
        Self {
            points,
            residuals,
            singular_values,
            seed,
            attempted,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn success_ratio(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.len() as f64 / self.attempted as f64
        }
    }

    pub fn max_residual(&self) -> F {
        self.residuals.iter().fold(F::zero(), |m, r| m.max(*r))
    }

    /// One line per point, coordinates separated by spaces.
    pub fn to_rows(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Runs Newton projection from `count` seeded Gaussian starts in parallel.
///
/// Start `i` draws from its own stream of a generator seeded by `seed`, so the
/// result does not depend on scheduling.
pub fn sample<F: Real>(
    qp: &QuadricPair<F>,
    count: usize,
    seed: u64,
) -> Result<SampleCloud<F>, NumericError>
where
    StandardNormal: Distribution<F>,
{
    let dim = qp.dimension();
    let results: Vec<Option<(Vec<F>, F)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let start: Vec<F> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            qp.project(&start)
        })
        .collect();
    let (points, residuals): (Vec<_>, Vec<_>) = results.into_iter().flatten().unzip();
    if points.len() * 10 < count {
        return Err(NumericError::SamplingFailed {
            converged: points.len(),
            attempted: count,
        });
    }
    let singular_values = points.iter().map(|p| qp.singular_values(p)).collect();
    Ok(SampleCloud {
        points,
        residuals,
        singular_values,
        seed,
        attempted: count,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub points: usize,
    pub min_sigma: f64,
    /// Dimension of the intersection on the sphere.
    pub cover_dimension: usize,
    /// Dimension of its image in projective space.
    pub projective_dimension: usize,
}

/// Checks residuals and that the projected Jacobian has rank two at every point.
pub fn smoothness<F: Real>(cloud: &SampleCloud<F>) -> Result<SmoothnessReport, NumericError> {
    let first = cloud.points.first().ok_or(NumericError::EmptyCloud)?;
    let tol = residual_tol::<F>();
    let mut min_sigma = f64::INFINITY;
    for (i, p) in cloud.points.iter().enumerate() {
        let res = cloud.residuals[i];
        if !(res <= tol) {
            return Err(NumericError::OffVariety {
                index: i,
                residual: res.to_f64().unwrap_or(f64::NAN),
            });
        }
        let sigma = cloud.singular_values[i].1.to_f64().unwrap_or(f64::NAN);
        if !(sigma >= RANK_TOL) {
            return Err(NumericError::RankDeficient {
                index: i,
                sigma,
                point: p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            });
        }
        min_sigma = min_sigma.min(sigma);
    }
    let dim = first.len() - 3;
    Ok(SmoothnessReport {
        points: cloud.len(),
        min_sigma,
        cover_dimension: dim,
        projective_dimension: dim,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentEstimate {
    pub count: usize,
    pub radius: f64,
    pub singletons: usize,
    /// Isolated points dominate, so the count says little.
    pub inconclusive: bool,
}

fn distance<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y))
        .sqrt()
}

/// Connected components of the graph joining points closer than `radius`.
pub fn proximity_components<F: Real>(points: &[Vec<F>], radius: F) -> ComponentEstimate {
    let n = points.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if distance(&points[i], &points[j]) < radius {
                uf.union(i, j);
            }
        }
    }
    let sizes = uf.class_sizes();
    let singletons = sizes.iter().filter(|&&s| s == 1).count();
    ComponentEstimate {
        count: sizes.len(),
        radius: radius.to_f64().unwrap_or(f64::NAN),
        singletons,
        inconclusive: n > 0 && 2 * singletons > n,
    }
}

/// Median distance from a point to its nearest neighbour.
pub fn median_nearest_neighbor<F: Real>(points: &[Vec<F>]) -> Option<F> {
    if points.len() < 2 {
        return None;
    }
    let mut nn: Vec<F> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| distance(p, q))
                .fold(F::infinity(), F::min)
        })
        .collect();
    nn.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Some(nn[nn.len() / 2])
}

/// Component estimate with radius `3 x` the median nearest-neighbour distance
/// unless one is given.
pub fn components<F: Real>(
    cloud: &SampleCloud<F>,
    radius: Option<F>,
) -> Result<ComponentEstimate, NumericError> {
    if cloud.len() < MIN_CLOUD {
        return Err(NumericError::TooFewPoints(cloud.len(), MIN_CLOUD));
    }
    let radius = match radius {
        Some(r) => r,
        None => {
            let three = F::from(3.0).unwrap();
            three * median_nearest_neighbor(&cloud.points).ok_or(NumericError::EmptyCloud)?
        }
    };
    Ok(proximity_components(&cloud.points, radius))
}

/// Summary of a full numeric run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericReport {
    pub seed: u64,
    pub attempted: usize,
    pub converged: usize,
    pub success_ratio: f64,
    pub max_residual: f64,
    pub smoothness: SmoothnessReport,
    pub components: ComponentEstimate,
}

pub fn verify<F: Real>(
    qp: &QuadricPair<F>,
    count: usize,
    seed: u64,
) -> Result<(NumericReport, SampleCloud<F>), NumericError>
where
    StandardNormal: Distribution<F>,
{
    let cloud = sample(qp, count, seed)?;
    let smooth = smoothness(&cloud)?;
    let comps = components(&cloud, None)?;
    let report = NumericReport {
        seed,
        attempted: cloud.attempted,
        converged: cloud.len(),
        success_ratio: cloud.success_ratio(),
        max_residual: cloud.max_residual().to_f64().unwrap_or(f64::NAN),
        smoothness: smooth,
        components: comps,
    };
    Ok((report, cloud))
}
