//! End-to-end runs: chart normalization, topology, pencil and normal form,
//! invariant and lookup, characteristic classes, and numeric verification.
//!
//! Every stage returns a serializable record. Failures carry the stage name and
//! whether they stem from the input or from a failed check.

use std::fmt::{self, Write as _};

use num_complex::Complex;
use serde::Serialize;

use crate::cohomology::{sw_report, SWReport};
use crate::curve::{
    classify_topology, interval_parities, normalize_chart, CurveTopology, IntervalProfile, Locus,
    NormalizedChart,
};
use crate::error::{CohomologyError, Error};
use crate::glreduce::{genus2_lookup, lambda_config, reduce, GLInvariant, Genus2Type};
use crate::input::{complex_json, InputOptions, InputSpec};
use crate::numeric::{quadric_matrices, verify, NumericReport, QuadricPair, SampleCloud};
use crate::pencil::{
    basis_change, build_pencil, epsilon_signs_by_count, epsilon_signs_by_intervals,
    real_normal_form, verify_normal_form, CongruenceReport, DiagonalPencil, RealNormalForm, Sign,
};
use crate::scalar::Scalar;
use crate::Rational;

pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_SEED: u64 = 7;
pub const CONGRUENCE_TOL: f64 = 1e-9;
pub const ROUND_TRIP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Input,
    Normalize,
    Topology,
    Pencil,
    NormalForm,
    Congruence,
    GlReduce,
    Lookup,
    Consistency,
    Cohomology,
    Numeric,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("stage serializes");
        write!(f, "{}", s.as_str().unwrap_or("unknown"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The input is malformed or violates a precondition.
    Input,
    /// A computed check did not hold, or sampling was inconclusive.
    Verification,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageError {
    pub stage: Stage,
    pub kind: FailureKind,
    pub message: String,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

impl StageError {
    fn input(stage: Stage, e: impl fmt::Display) -> Self {
        Self {
            stage,
            kind: FailureKind::Input,
            message: e.to_string(),
        }
    }

    fn check(stage: Stage, e: impl fmt::Display) -> Self {
        Self {
            stage,
            kind: FailureKind::Verification,
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            FailureKind::Input => 1,
            FailureKind::Verification => 2,
        }
    }
}

impl From<Error> for StageError {
    fn from(e: Error) -> Self {
        let stage = match &e {
            Error::Parse(_) | Error::Curve(_) => Stage::Input,
            Error::Pencil(_) => Stage::Pencil,
            Error::Gl(_) => Stage::GlReduce,
            Error::Cohomology(_) => Stage::Cohomology,
            Error::Numeric(_) => Stage::Numeric,
        };
        match stage {
            Stage::Input => Self::input(stage, e),
            _ => Self::check(stage, e),
        }
    }
}

/// Resolved run options.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOptions {
    pub d_max: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub skip_numeric: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            d_max: None,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            skip_numeric: false,
        }
    }
}

impl RunOptions {
    pub fn from_input(o: &InputOptions) -> Self {
        let d = Self::default();
        Self {
            d_max: o.d_max,
            samples: o.sample_count.unwrap_or(d.samples),
            seed: o.seed.unwrap_or(d.seed),
            skip_numeric: o.skip_numeric.unwrap_or(false),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalRecord {
    pub lo: Option<String>,
    pub hi: Option<String>,
    pub locus: Locus,
    pub mass: i64,
    pub odd: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorRecord {
    pub point: serde_json::Value,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveInfo {
    pub genus: usize,
    pub chart_transform: String,
    pub chart_changed: bool,
    pub weierstrass: Vec<serde_json::Value>,
    pub divisor: Vec<DivisorRecord>,
    pub topology: CurveTopology,
    pub intervals: Vec<IntervalRecord>,
    pub infinity_circle_odd: bool,
    pub k: usize,
}

/// Normalized chart, interval profile and their record.
pub struct CurveStage {
    pub chart: NormalizedChart<Rational>,
    pub profile: IntervalProfile<Rational>,
    pub info: CurveInfo,
}

pub fn run_curve(spec: &InputSpec) -> Result<CurveStage, StageError> {
    let chart = normalize_chart(&spec.weierstrass, &spec.divisor)
        .map_err(|e| StageError::input(Stage::Normalize, e))?;
    let profile = interval_parities(&chart.weierstrass, &chart.divisor)
        .map_err(|e| StageError::input(Stage::Topology, e))?;
    if profile.k % 2 == 0 {
        return Err(StageError::check(
            Stage::Topology,
            format!("number of odd circles k = {} is even", profile.k),
        ));
    }
    let intervals = profile
        .intervals
        .iter()
        .map(|p| IntervalRecord {
            lo: p.interval.lo.as_ref().map(|x| x.to_string()),
            hi: p.interval.hi.as_ref().map(|x| x.to_string()),
            locus: p.interval.locus,
            mass: p.mass,
            odd: p.is_odd(),
        })
        .collect();
    let info = CurveInfo {
        genus: spec.genus,
        chart_transform: chart.transform.to_string(),
        chart_changed: !chart.transform.is_identity(),
        weierstrass: chart
            .weierstrass
            .points()
            .iter()
            .map(complex_json)
            .collect(),
        divisor: chart
            .divisor
            .entries()
            .iter()
            .map(|e| DivisorRecord {
                point: complex_json(&e.point),
                mult: e.mult,
            })
            .collect(),
        topology: classify_topology(&chart.weierstrass),
        intervals,
        infinity_circle_odd: profile.infinity_circle_odd,
        k: profile.k,
    };
    Ok(CurveStage {
        chart,
        profile,
        info,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonCheck {
    pub by_count: Vec<Sign>,
    pub by_intervals: Vec<Sign>,
    pub from_pencil: Vec<Sign>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalFormRecord {
    pub n: usize,
    pub s: usize,
    pub eps: Vec<Sign>,
    pub real_eigenvalues: Vec<String>,
    pub complex_pairs: Vec<serde_json::Value>,
    pub q0: String,
    pub q1: String,
    pub epsilon_check: EpsilonCheck,
    pub congruence: CongruenceReport,
    pub round_trip_defect: f64,
    pub conjugation_defect: f64,
}

pub struct NormalFormStage {
    pub pencil: DiagonalPencil<Rational>,
    pub normal_form: RealNormalForm<Rational>,
    pub record: NormalFormRecord,
}

pub fn run_normal_form(curve: &CurveStage) -> Result<NormalFormStage, StageError> {
    let (w, d) = (&curve.chart.weierstrass, &curve.chart.divisor);
    let pencil = build_pencil(w, d).map_err(|e| StageError::check(Stage::Pencil, e))?;
    let nf = real_normal_form(w, d).map_err(|e| StageError::check(Stage::NormalForm, e))?;
    let real = w.real_points();
    let by_count = epsilon_signs_by_count(d, &real);
    let by_intervals = epsilon_signs_by_intervals(&curve.profile, &real);
    let from_pencil = RealNormalForm::from_pencil(&pencil)
        .map_err(|e| StageError::check(Stage::NormalForm, e))?
        .eps;
    let agree = by_count == by_intervals && by_count == from_pencil && by_count == nf.eps;
    if !agree {
        return Err(StageError::check(
            Stage::NormalForm,
            format!(
                "epsilon routes disagree: count {:?}, intervals {:?}, pencil {:?}",
                by_count, by_intervals, from_pencil
            ),
        ));
    }
    let basis = basis_change::<f64, _>(&pencil);
    let congruence = verify_normal_form(&pencil, &basis, &nf, CONGRUENCE_TOL)
        .map_err(|e| StageError::check(Stage::Congruence, e))?;
    let diag: Vec<Complex<f64>> = pencil
        .entries()
        .iter()
        .map(|e| Complex::new(e.q0.re.to_f64_lossy(), e.q0.im.to_f64_lossy()))
        .collect();
    let round_trip_defect = basis
        .round_trip_defect(&diag)
        .ok_or_else(|| StageError::check(Stage::Congruence, "basis change is singular"))?;
    if !(round_trip_defect <= ROUND_TRIP_TOL) {
        return Err(StageError::check(
            Stage::Congruence,
            format!("round trip defect {round_trip_defect:e} exceeds {ROUND_TRIP_TOL:e}"),
        ));
    }
    let conjugation_defect = basis.conjugation_defect();
    if !(conjugation_defect <= ROUND_TRIP_TOL) {
        return Err(StageError::check(
            Stage::Congruence,
            format!("basis is not conjugation-fixed (defect {conjugation_defect:e})"),
        ));
    }
    let (q0, q1) = nf.polynomials();
    let record = NormalFormRecord {
        n: nf.n(),
        s: nf.s(),
        eps: nf.eps.clone(),
        real_eigenvalues: nf.real_eigs.iter().map(|x| x.to_string()).collect(),
        complex_pairs: nf
            .complex_pairs
            .iter()
            .map(|(a, b)| complex_json(&Complex::new(a.clone(), b.clone())))
            .collect(),
        q0,
        q1,
        epsilon_check: EpsilonCheck {
            by_count,
            by_intervals,
            from_pencil,
            agree,
        },
        congruence,
        round_trip_defect,
        conjugation_defect,
    };
    Ok(NormalFormStage {
        pencil,
        normal_form: nf,
        record,
    })
}

/// Expected `(s, partition)` for a genus-2 configuration with `n` real pairs and
/// `k` odd circles.
pub fn expected_genus2_row(n: usize, k: usize) -> Option<(usize, Vec<usize>)> {
    match (n, k) {
        (0, 1) => Some((3, vec![])),
        (1, 1) => Some((2, vec![2])),
        (2, 1) => Some((1, vec![1, 1, 2])),
        (3, 1) => Some((0, vec![1, 1, 1, 1, 2])),
        (3, 3) => Some((0, vec![2, 2, 2])),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRowCheck {
    pub n: usize,
    pub k: usize,
    pub expected_s: usize,
    pub expected_partition: String,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyRecord {
    pub lambda_points: Vec<[String; 2]>,
    pub invariant: GLInvariant,
    pub partition: String,
    pub genus2_type: Option<Genus2Type>,
    pub table_row: Option<TableRowCheck>,
}

pub fn run_classify(
    curve: &CurveStage,
    nf: &NormalFormStage,
) -> Result<ClassifyRecord, StageError> {
    let cfg = lambda_config(&nf.normal_form);
    let invariant = reduce(&cfg).map_err(|e| StageError::check(Stage::GlReduce, e))?;
    let (genus2_type, table_row) = if curve.info.genus == 2 {
        let t = genus2_lookup(&invariant).map_err(|e| StageError::check(Stage::Lookup, e))?;
        let (n, k) = (curve.info.topology.n, curve.info.k);
        let row = expected_genus2_row(n, k).map(|(s, p)| TableRowCheck {
            n,
            k,
            expected_s: s,
            consistent: s == invariant.s && p == invariant.partition,
            expected_partition: GLInvariant {
                s,
                l: 0,
                partition: p,
            }
            .partition_string(),
        });
        if let Some(r) = &row {
            if !r.consistent {
                return Err(StageError::check(
                    Stage::Consistency,
                    format!(
                        "(n, k) = ({n}, {k}) expects s = {}, partition {}, computed {}",
                        r.expected_s, r.expected_partition, invariant
                    ),
                ));
            }
        }
        (Some(t), row)
    } else {
        (None, None)
    };
    Ok(ClassifyRecord {
        lambda_points: cfg
            .points
            .iter()
            .map(|(x, y)| [x.to_string(), y.to_string()])
            .collect(),
        partition: invariant.partition_string(),
        invariant,
        genus2_type,
        table_row,
    })
}

pub fn run_sw(g: usize, d_max: Option<usize>) -> Result<SWReport, StageError> {
    sw_report(g, d_max).map_err(|e| match e {
        CohomologyError::GenusTooSmall(_) | CohomologyError::DegreeOutOfRange { .. } => {
            StageError::input(Stage::Cohomology, e)
        }
        _ => StageError::check(Stage::Cohomology, e),
    })
}

/// Quadrics for the numeric stage: the override from the input if present,
/// otherwise those of the normal form.
pub fn quadrics_for(
    spec: &InputSpec,
    nf: Option<&RealNormalForm<Rational>>,
) -> Result<QuadricPair<f64>, StageError> {
    match (&spec.quadrics, nf) {
        (Some((a, b)), _) => {
            QuadricPair::new(a.clone(), b.clone()).map_err(|e| StageError::input(Stage::Input, e))
        }
        (None, Some(nf)) => Ok(quadric_matrices(nf)),
        (None, None) => Err(StageError::input(Stage::Numeric, "no quadrics available")),
    }
}

pub fn run_numeric(
    qp: &QuadricPair<f64>,
    samples: usize,
    seed: u64,
) -> Result<(NumericReport, SampleCloud<f64>), StageError> {
    verify(qp, samples, seed).map_err(|e| StageError::check(Stage::Numeric, e))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum NumericSection {
    Skipped,
    Completed(NumericReport),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub curve: CurveInfo,
    pub normal_form: NormalFormRecord,
    pub classification: ClassifyRecord,
    pub sw: SWReport,
    pub numeric: NumericSection,
}

/// Full pipeline. The sample cloud is returned when the numeric stage ran.
pub fn run_report(
    spec: &InputSpec,
    opts: &RunOptions,
) -> Result<(Report, Option<SampleCloud<f64>>), StageError> {
    let curve = run_curve(spec)?;
    let nf = run_normal_form(&curve)?;
    let classification = run_classify(&curve, &nf)?;
    let sw = run_sw(spec.genus, opts.d_max)?;
    let (numeric, cloud) = if opts.skip_numeric {
        (NumericSection::Skipped, None)
    } else {
        let qp = quadrics_for(spec, Some(&nf.normal_form))?;
        let (rep, cloud) = run_numeric(&qp, opts.samples, opts.seed)?;
        if classification.genus2_type.is_some()
            && !rep.components.inconclusive
            && rep.components.count != 1
        {
            return Err(StageError::check(
                Stage::Consistency,
                format!(
                    "component estimate {} but every genus-2 type is connected",
                    rep.components.count
                ),
            ));
        }
        (NumericSection::Completed(rep), Some(cloud))
    };
    Ok((
        Report {
            curve: curve.info,
            normal_form: nf.record,
            classification,
            sw,
            numeric,
        },
        cloud,
    ))
}

/// Numeric verification alone.
pub fn run_verify(
    spec: &InputSpec,
    opts: &RunOptions,
) -> Result<(NumericReport, SampleCloud<f64>), StageError> {
    let qp = if spec.quadrics.is_some() {
        quadrics_for(spec, None)?
    } else {
        let curve = run_curve(spec)?;
        let nf = run_normal_form(&curve)?;
        quadrics_for(spec, Some(&nf.normal_form))?
    };
    run_numeric(&qp, opts.samples, opts.seed)
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl CurveInfo {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let t = &self.topology;
        let _ = writeln!(s, "genus: {}", self.genus);
        if self.chart_changed {
            let _ = writeln!(s, "chart: {}", self.chart_transform);
        } else {
            let _ = writeln!(s, "chart: unchanged");
        }
        let _ = writeln!(
            s,
            "real circles: tau {}, tau∘iota {} (n = {})",
            t.components_tau, t.components_tau_iota, t.n
        );
        let _ = writeln!(
            s,
            "dividing: tau {}, tau∘iota {}",
            yn(t.dividing_tau),
            yn(t.dividing_tau_iota)
        );
        let _ = writeln!(s, "intervals:");
        for iv in &self.intervals {
            let lo = iv
                .lo
                .clone()
                .map_or("(-inf".to_string(), |x| format!("[{x}"));
            let hi = iv
                .hi
                .clone()
                .map_or("+inf)".to_string(), |x| format!("{x}]"));
            let locus = match iv.locus {
                Locus::Tau => "tau",
                Locus::TauIota => "tau∘iota",
            };
            let _ = writeln!(
                s,
                "  {lo}, {hi}  {locus:<9} mass {:>3}  {}",
                iv.mass,
                if iv.odd { "odd" } else { "even" }
            );
        }
        let _ = writeln!(
            s,
            "circle through infinity odd: {}",
            yn(self.infinity_circle_odd)
        );
        let _ = write!(s, "odd circles k = {}", self.k);
        s
    }
}

impl NormalFormRecord {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let eps: Vec<String> = self
            .eps
            .iter()
            .map(|e| format!("{:+}", e.value()))
            .collect();
        let _ = writeln!(s, "n = {}, s = {}", self.n, self.s);
        let _ = writeln!(s, "eps = ({})", eps.join(", "));
        let _ = writeln!(s, "q0 = {}", self.q0);
        let _ = writeln!(s, "q1 = {}", self.q1);
        let _ = write!(
            s,
            "congruence deviation {:.2e}, imaginary {:.2e}, round trip {:.2e}",
            self.congruence.max_deviation, self.congruence.max_imaginary, self.round_trip_defect
        );
        s
    }
}

impl ClassifyRecord {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "invariant: s = {}, l = {}, partition {}",
            self.invariant.s, self.invariant.l, self.partition
        );
        match &self.genus2_type {
            Some(Genus2Type::Classified(t)) => {
                let _ = writeln!(s, "cover: {}", t.cover);
                let _ = writeln!(s, "base: {}", t.base);
            }
            Some(Genus2Type::Unclassified) => {
                let _ = writeln!(s, "type: unclassified");
            }
            None => {
                let _ = writeln!(s, "type: lookup available in genus 2 only");
            }
        }
        s.trim_end().to_string()
    }
}

impl NumericSection {
    pub fn to_text(&self) -> String {
        match self {
            NumericSection::Skipped => "numeric: skipped".to_string(),
            NumericSection::Completed(r) => numeric_text(r),
        }
    }
}

pub fn numeric_text(r: &NumericReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "samples: {} of {} converged (seed {})",
        r.converged, r.attempted, r.seed
    );
    let _ = writeln!(s, "max residual: {:.2e}", r.max_residual);
    let _ = writeln!(
        s,
        "smooth: yes (min second singular value {:.3e}), dimension {} on the sphere, {} projectively",
        r.smoothness.min_sigma, r.smoothness.cover_dimension, r.smoothness.projective_dimension
    );
    let _ = write!(
        s,
        "components: {}{} (radius {:.3e})",
        r.components.count,
        if r.components.inconclusive {
            " (inconclusive)"
        } else {
            ""
        },
        r.components.radius
    );
    s
}

impl Report {
    pub fn to_text(&self) -> String {
        [
            "== curve ==".to_string(),
            self.curve.to_text(),
            "== normal form ==".to_string(),
            self.normal_form.to_text(),
            "== classification ==".to_string(),
            self.classification.to_text(),
            "== Stiefel-Whitney classes ==".to_string(),
            self.sw.to_string(),
            "== numeric ==".to_string(),
            self.numeric.to_text(),
        ]
        .join("\n")
    }
}
