//! Reduction of the planar eigenvalue configuration to its deformation invariant.
//!
//! Each real pair of the normal form contributes two points
//! `(eps_i, eps_i r_{2i-1})` and `(-eps_i, -eps_i r_{2i})` of `R^2`. Points
//! are grouped by direction; adjacent groups merge when the arc between them
//! contains no antipode of a group. The surviving group sizes, read
//! cyclically, form the invariant.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::GlError;
use crate::pencil::RealNormalForm;
use crate::scalar::Scalar;

/// Closer than this, an antipode is treated as coinciding with a group.
pub const SEPARATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaConfig<T> {
    pub points: Vec<(T, T)>,
    /// Number of complex-conjugate pairs, carried through to the invariant.
    pub s: usize,
}

impl<T: Scalar> LambdaConfig<T> {
    pub fn new(points: Vec<(T, T)>, s: usize) -> Self {
        Self { points, s }
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }
}

pub fn lambda_config<T: Scalar>(nf: &RealNormalForm<T>) -> LambdaConfig<T> {
    let mut points = Vec::with_capacity(2 * nf.n());
    for (i, e) in nf.eps.iter().enumerate() {
        let (lo, hi) = (&nf.real_eigs[2 * i], &nf.real_eigs[2 * i + 1]);
        points.push((e.apply(T::one()), e.apply(lo.clone())));
        points.push((e.flip().apply(T::one()), e.flip().apply(hi.clone())));
    }
    LambdaConfig::new(points, nf.s())
}

fn cross<T: Scalar>(a: &(T, T), b: &(T, T)) -> T {
    a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone()
}

fn dot<T: Scalar>(a: &(T, T), b: &(T, T)) -> T {
    a.0.clone() * b.0.clone() + a.1.clone() * b.1.clone()
}

/// No point at the origin and no two points on opposite rays.
pub fn check_generic<T: Scalar>(cfg: &LambdaConfig<T>) -> Result<(), GlError> {
    let pts = &cfg.points;
    if pts.iter().any(|p| p.0.is_zero() && p.1.is_zero()) {
        return Err(GlError::NotGeneric);
    }
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if cross(a, b).is_zero() && dot(a, b).is_negative() {
                return Err(GlError::NotGeneric);
            }
        }
    }
    Ok(())
}

/// Exact angular order starting from the positive x-axis.
fn angular_cmp<T: Scalar>(a: &(T, T), b: &(T, T)) -> Ordering {
    let half = |p: &(T, T)| {
        if p.1.is_positive() || (p.1.is_zero() && p.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

#[derive(Clone, Debug)]
struct Group {
    angle: f64,
    weight: usize,
    mask: u64,
}

fn initial_groups<T: Scalar>(cfg: &LambdaConfig<T>) -> Vec<Group> {
    let mut pts = cfg.points.clone();
    pts.sort_by(angular_cmp);
    let mut groups: Vec<(usize, (T, T))> = Vec::new();
    for p in pts {
        match groups.last_mut() {
            Some((w, q)) if angular_cmp(q, &p) == Ordering::Equal => *w += 1,
            _ => groups.push((1, p)),
        }
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(i, (weight, p))| Group {
            angle: p.1.to_f64_lossy().atan2(p.0.to_f64_lossy()).rem_euclid(TAU),
            weight,
            mask: 1 << i,
        })
        .collect()
}

fn ccw(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TAU)
}

fn check_separation(groups: &[Group]) -> Result<(), GlError> {
    for g in groups {
        let anti = (g.angle + PI).rem_euclid(TAU);
        for h in groups {
            let d = ccw(anti, h.angle);
            let gap = d.min(TAU - d);
            if gap < SEPARATION_TOL {
                return Err(GlError::NumericalSeparation(gap));
            }
        }
    }
    Ok(())
}

/// Groups `i` and `i + 1` may merge iff the open arc between them contains no antipode.
fn can_merge(groups: &[Group], i: usize) -> bool {
    let m = groups.len();
    if m < 2 {
        return false;
    }
    let (a, b) = (&groups[i], &groups[(i + 1) % m]);
    let arc = ccw(a.angle, b.angle);
    groups.iter().all(|g| {
        let d = ccw(a.angle, (g.angle + PI).rem_euclid(TAU));
        !(d > 0.0 && d < arc)
    })
}

fn merged(groups: &[Group], i: usize) -> Vec<Group> {
    let m = groups.len();
    let j = (i + 1) % m;
    let (a, b) = (&groups[i], &groups[j]);
    let arc = ccw(a.angle, b.angle);
    let weight = a.weight + b.weight;
    let g = Group {
        angle: (a.angle + arc * b.weight as f64 / weight as f64).rem_euclid(TAU),
        weight,
        mask: a.mask | b.mask,
    };
    let mut out: Vec<Group> = groups
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i && *k != j)
        .map(|(_, g)| g.clone())
        .collect();
    out.push(g);
    out.sort_by(|x, y| x.angle.total_cmp(&y.angle));
    out
}

/// Invariant of a configuration: the number of conjugate pairs and the cyclic
/// sequence of surviving group sizes in canonical position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GLInvariant {
    pub s: usize,
    pub l: usize,
    pub partition: Vec<usize>,
}

impl GLInvariant {
    pub fn partition_string(&self) -> String {
        if self.partition.is_empty() {
            "0".to_string()
        } else {
            self.partition
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join("+")
        }
    }

    pub fn r(&self) -> usize {
        self.partition.iter().sum()
    }
}

impl fmt::Display for GLInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={} l={} [{}]", self.s, self.l, self.partition_string())
    }
}

/// Lexicographically least rotation of the sequence or of its reverse.
pub fn canonical_cyclic(seq: &[usize]) -> Vec<usize> {
    let mut best = seq.to_vec();
    let rev: Vec<usize> = seq.iter().rev().copied().collect();
    for base in [seq, &rev[..]] {
        for k in 0..base.len() {
            let cand: Vec<usize> = base[k..].iter().chain(&base[..k]).copied().collect();
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

fn finish(groups: &[Group], s: usize) -> Result<GLInvariant, GlError> {
    let l = groups.len();
    if l.is_multiple_of(2) {
        return Err(GlError::EvenTerminalCount(l));
    }
    let weights: Vec<usize> = groups.iter().map(|g| g.weight).collect();
    Ok(GLInvariant {
        s,
        l,
        partition: canonical_cyclic(&weights),
    })
}

fn start<T: Scalar>(cfg: &LambdaConfig<T>) -> Result<Option<Vec<Group>>, GlError> {
    check_generic(cfg)?;
    if cfg.points.is_empty() {
        return Ok(None);
    }
    let groups = initial_groups(cfg);
    check_separation(&groups)?;
    Ok(Some(groups))
}

fn empty(s: usize) -> GLInvariant {
    GLInvariant {
        s,
        l: 0,
        partition: Vec::new(),
    }
}

/// Merges the first admissible pair until none is left.
pub fn reduce_greedy<T: Scalar>(cfg: &LambdaConfig<T>) -> Result<GLInvariant, GlError> {
    let Some(mut groups) = start(cfg)? else {
        return Ok(empty(cfg.s));
    };
    while let Some(i) = (0..groups.len()).find(|&i| can_merge(&groups, i)) {
        groups = merged(&groups, i);
        check_separation(&groups)?;
    }
    finish(&groups, cfg.s)
}

/// Explores every merge order and keeps a terminal state with the fewest groups.
pub fn reduce<T: Scalar>(cfg: &LambdaConfig<T>) -> Result<GLInvariant, GlError> {
    let Some(groups) = start(cfg)? else {
        return Ok(empty(cfg.s));
    };
    let mut memo = HashMap::new();
    let best = search(groups, &mut memo)?;
    finish(&best, cfg.s)
}

fn search(
    groups: Vec<Group>,
    memo: &mut HashMap<Vec<u64>, Vec<Group>>,
) -> Result<Vec<Group>, GlError> {
    let mut key: Vec<u64> = groups.iter().map(|g| g.mask).collect();
    key.sort_unstable();
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let mut best: Option<Vec<Group>> = None;
    for i in 0..groups.len() {
        if !can_merge(&groups, i) {
            continue;
        }
        let next = merged(&groups, i);
        check_separation(&next)?;
        let terminal = search(next, memo)?;
        if best.as_ref().is_none_or(|b| terminal.len() < b.len()) {
            best = Some(terminal);
        }
    }
    let best = best.unwrap_or(groups);
    memo.insert(key, best.clone());
    Ok(best)
}

/// Closed 3-manifolds appearing in genus two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Manifold3 {
    ProjectiveSpace,
    Lens(u32, u32),
    S1xS2,
    /// Connected sum of `k` copies of `S^1 x S^2`.
    SumS1xS2(u32),
    Torus3,
}

impl Manifold3 {
    /// Plain-text name.
    pub fn ascii(&self) -> String {
        match self {
            Manifold3::ProjectiveSpace => "RP3".into(),
            Manifold3::Lens(p, q) => format!("L({p},{q})"),
            Manifold3::S1xS2 => "S1xS2".into(),
            Manifold3::SumS1xS2(k) => format!("#{k}(S1xS2)"),
            Manifold3::Torus3 => "T3".into(),
        }
    }
}

fn subscript(n: u32) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap_or(0)).unwrap_or(c))
        .collect()
}

impl fmt::Display for Manifold3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold3::ProjectiveSpace => write!(f, "ℝP³"),
            Manifold3::Lens(p, q) => write!(f, "L({p},{q})"),
            Manifold3::S1xS2 => write!(f, "S¹×S²"),
            Manifold3::SumS1xS2(k) => write!(f, "#{}(S¹×S²)", subscript(*k)),
            Manifold3::Torus3 => write!(f, "T³"),
        }
    }
}

impl Serialize for Manifold3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Diffeomorphism type of the cover and of its quotient by the free involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiffeoType {
    pub cover: Manifold3,
    pub base: Manifold3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Genus2Type {
    Classified(DiffeoType),
    Unclassified,
}

/// Diffeomorphism types for genus two, keyed by `(s, partition)`.
pub fn genus2_lookup(inv: &GLInvariant) -> Result<Genus2Type, GlError> {
    let r = inv.r();
    if r + 2 * inv.s != 6 {
        return Err(GlError::NotGenusTwo { r, s: inv.s });
    }
    use Manifold3::*;
    let found = match (inv.s, inv.partition.as_slice()) {
        (3, []) => Some((ProjectiveSpace, Lens(4, 1))),
        (2, [2]) => Some((S1xS2, S1xS2)),
        (1, [1, 1, 2]) => Some((SumS1xS2(3), SumS1xS2(2))),
        (0, [1, 1, 1, 1, 2]) => Some((SumS1xS2(5), SumS1xS2(3))),
        (0, [2, 2, 2]) => Some((Torus3, Torus3)),
        _ => None,
    };
    Ok(match found {
        Some((cover, base)) => Genus2Type::Classified(DiffeoType { cover, base }),
        None => Genus2Type::Unclassified,
    })
}
