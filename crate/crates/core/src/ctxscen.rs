//! Measurement scenarios: pentagram construction for a qutrit, empirical
//! models, incidence matrices, and the JSON document format for models.
//!
//! The pentagram consists of five dichotomic observables `B_i = 1 - 2P_i`
//! with rank-1 projectors onto real vectors
//! `v_i = (sin α_i cos θ_i, cos α_i, sin α_i sin θ_i)` in the basis
//! (|1⟩, |0⟩, |-1⟩); context pairs {(0,2), (0,3), (1,3), (1,4), (2,4)}
//! commute, all other pairs must not.

use crate::matcore::{expect, ComplexMatrix};
use crate::numkernel::Complex64;

const PI: f64 = std::f64::consts::PI;

/// The pentagram context edges, in row order of every empirical model.
pub const PENTAGRAM_CONTEXTS: [(usize, usize); 5] = [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)];

/// Outcome order of each context row.
pub const OUTCOME_ORDER: [(i8, i8); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

#[derive(Debug, Clone, thiserror::Error)]
pub enum ScenarioError {
    #[error("angle solve failed: {0}")]
    Domain(&'static str),
    #[error("scenario constraint violated: {0}")]
    Constraint(String),
    #[error("invalid empirical model: {0}")]
    InvalidModel(String),
    #[error("document parse error: {0}")]
    Document(String),
}

/// Angles of a pentagram solution; `thetas` are derived from `theta0` and
/// the commutation chain.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSet {
    pub theta0: f64,
    pub alphas: [f64; 5],
    pub thetas: [f64; 5],
}

/// A pentagram measurement scenario with its projectors.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub n_measurements: usize,
    pub contexts: Vec<(usize, usize)>,
    pub projectors: Vec<ComplexMatrix>,
    pub angles: Option<AngleSet>,
}

/// One of the three built-in angle solutions, or a custom set.
#[derive(Debug, Clone)]
pub enum PentagramSet {
    Set1,
    Set2,
    Set3,
    Custom(AngleSet),
}

impl PentagramSet {
    pub fn from_id(id: u8) -> Result<PentagramSet, ScenarioError> {
        match id {
            1 => Ok(PentagramSet::Set1),
            2 => Ok(PentagramSet::Set2),
            3 => Ok(PentagramSet::Set3),
            _ => Err(ScenarioError::Domain("angle set id must be 1, 2 or 3")),
        }
    }
}

/// Rank-1 real projector onto `(sin α cos θ, cos α, sin α sin θ)`.
pub fn projector_from_angles(alpha: f64, theta: f64) -> ComplexMatrix {
    let v = [
        alpha.sin() * theta.cos(),
        alpha.cos(),
        alpha.sin() * theta.sin(),
    ];
    ComplexMatrix::projector_from_real_vec(&v)
}

fn phi(alpha_i: f64, alpha_j: f64) -> Result<f64, ScenarioError> {
    let arg = -1.0 / (alpha_i.tan() * alpha_j.tan());
    if !(-1.0..=1.0).contains(&arg) {
        return Err(ScenarioError::Domain("arccos argument outside [-1, 1]"));
    }
    Ok(arg.acos())
}

/// Solve for α₃ from the closure condition `φ₀₃ + φ₁₃ = φ₀₂ + φ₂₄ - φ₁₄`.
///
/// The projector built from α₃ only involves even trig products, so the
/// arccot branch is immaterial; the returned value lies in (0, π).
pub fn solve_alpha3(
    alpha0: f64,
    alpha1: f64,
    phi24: f64,
    phi02: f64,
    phi14: f64,
) -> Result<f64, ScenarioError> {
    let gamma = phi24 + phi02 - phi14;
    let (t0, t1) = (alpha0.tan(), alpha1.tan());
    let radicand = t1 * t1 + t0 * t0 - 2.0 * t1 * t0 * gamma.cos();
    if !(radicand > 0.0) {
        return Err(ScenarioError::Domain("square root argument must be positive"));
    }
    let cot3 = t0 * t1 * gamma.sin() / radicand.sqrt();
    let alpha3 = 1.0f64.atan2(cot3);

    // Consistency: the closure condition itself must hold.
    let phi03 = phi(alpha0, alpha3)?;
    let phi13 = phi(alpha1, alpha3)?;
    if (phi03 + phi13 - gamma).abs() > 1e-9 {
        return Err(ScenarioError::Domain("closure condition not satisfied"));
    }
    Ok(alpha3)
}

/// Derive the full angle set from θ₀ and the four free α's.
pub fn derive_angle_set(theta0: f64, alphas_0124: [f64; 4]) -> Result<AngleSet, ScenarioError> {
    let [a0, a1, a2, a4] = alphas_0124;
    let phi02 = phi(a0, a2)?;
    let phi24 = phi(a2, a4)?;
    let phi14 = phi(a1, a4)?;
    let a3 = solve_alpha3(a0, a1, phi24, phi02, phi14)?;
    let phi03 = phi(a0, a3)?;
    let phi13 = phi(a1, a3)?;
    let alphas = [a0, a1, a2, a3, a4];
    let thetas = [
        theta0,
        theta0 - phi03 - phi13,
        theta0 - phi02,
        theta0 - phi03,
        theta0 - phi24 - phi02,
    ];
    Ok(AngleSet {
        theta0,
        alphas,
        thetas,
    })
}

/// The three built-in angle solutions.
pub fn builtin_angle_set(set: &PentagramSet) -> Result<AngleSet, ScenarioError> {
    match set {
        PentagramSet::Set1 => derive_angle_set(
            0.75 * PI,
            [0.9 * PI, 2.9 * PI, 0.5 * PI, 0.54722012035572493 * PI],
        ),
        PentagramSet::Set2 => derive_angle_set(
            0.71549033656902731395587677242763007306802049110217 * PI,
            [0.9 * PI, 2.83737665013 * PI, 0.5 * PI, 0.54722012035572493 * PI],
        ),
        PentagramSet::Set3 => derive_angle_set(
            0.85 * PI,
            [0.83999268322 * PI, 0.75 * PI, 0.5 * PI, 0.5 * PI],
        ),
        PentagramSet::Custom(a) => Ok(a.clone()),
    }
}

/// Constraint report for one angle set.
#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub max_context_commutator: f64,
    pub min_noncontext_commutator: f64,
    pub max_idempotency_deviation: f64,
    /// Σ sin²α_i sin²θ_i (must be γ = 2).
    pub ground_overlap_sum: f64,
    /// Σ sin²α_i sin(2θ_i)/2 (must be <= 0 up to tolerance).
    pub cross_term_sum: f64,
    /// α's reduced to [0, 2π) for reference (some solutions wind past 2π).
    pub reduced_alphas: [f64; 5],
}

impl ScenarioReport {
    pub fn check(&self) -> Result<(), ScenarioError> {
        if self.max_idempotency_deviation > 1e-10 {
            return Err(ScenarioError::Constraint(format!(
                "projector idempotency deviation {:e}",
                self.max_idempotency_deviation
            )));
        }
        if self.max_context_commutator > 1e-9 {
            return Err(ScenarioError::Constraint(format!(
                "context commutator {:e} exceeds 1e-9",
                self.max_context_commutator
            )));
        }
        if self.min_noncontext_commutator < 1e-3 {
            return Err(ScenarioError::Constraint(format!(
                "non-context commutator {:e} below 1e-3",
                self.min_noncontext_commutator
            )));
        }
        if (self.ground_overlap_sum - 2.0).abs() > 1e-6 {
            return Err(ScenarioError::Constraint(format!(
                "ground overlap sum {} differs from 2",
                self.ground_overlap_sum
            )));
        }
        if self.cross_term_sum > 1e-9 {
            return Err(ScenarioError::Constraint(format!(
                "cross-term sum {} must be non-positive",
                self.cross_term_sum
            )));
        }
        Ok(())
    }
}

pub fn scenario_report(angles: &AngleSet) -> ScenarioReport {
    let projectors: Vec<ComplexMatrix> = (0..5)
        .map(|i| projector_from_angles(angles.alphas[i], angles.thetas[i]))
        .collect();
    let b: Vec<ComplexMatrix> = projectors
        .iter()
        .map(|p| {
            ComplexMatrix::identity(3)
                .sub(&p.scale(Complex64::new(2.0, 0.0)))
                .unwrap()
        })
        .collect();
    let mut max_ctx = 0.0f64;
    let mut min_non = f64::INFINITY;
    for i in 0..5 {
        for j in (i + 1)..5 {
            let comm = b[i].commutator(&b[j]).unwrap().max_abs();
            if PENTAGRAM_CONTEXTS.contains(&(i, j)) {
                max_ctx = max_ctx.max(comm);
            } else {
                min_non = min_non.min(comm);
            }
        }
    }
    let max_idem = projectors
        .iter()
        .map(|p| p.mul(p).unwrap().sub(p).unwrap().max_abs())
        .fold(0.0f64, f64::max);
    let ground_overlap_sum = (0..5)
        .map(|i| (angles.alphas[i].sin() * angles.thetas[i].sin()).powi(2))
        .sum();
    let cross_term_sum = (0..5)
        .map(|i| angles.alphas[i].sin().powi(2) * (2.0 * angles.thetas[i]).sin() / 2.0)
        .sum();
    let reduced_alphas =
        std::array::from_fn(|i| angles.alphas[i].rem_euclid(2.0 * PI));
    ScenarioReport {
        max_context_commutator: max_ctx,
        min_noncontext_commutator: min_non,
        max_idempotency_deviation: max_idem,
        ground_overlap_sum,
        cross_term_sum,
        reduced_alphas,
    }
}

/// Build and validate a pentagram scenario.
pub fn build_pentagram(set: PentagramSet) -> Result<Scenario, ScenarioError> {
    let angles = builtin_angle_set(&set)?;
    scenario_report(&angles).check()?;
    let projectors = (0..5)
        .map(|i| projector_from_angles(angles.alphas[i], angles.thetas[i]))
        .collect();
    Ok(Scenario {
        n_measurements: 5,
        contexts: PENTAGRAM_CONTEXTS.to_vec(),
        projectors,
        angles: Some(angles),
    })
}

/// Per-context joint outcome probabilities of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalModel {
    pub n_measurements: usize,
    pub contexts: Vec<(usize, usize)>,
    /// One row per context in `OUTCOME_ORDER`.
    pub rows: Vec<[f64; 4]>,
}

/// Evaluate the empirical model of `rho` in a scenario; measurement operators
/// are the fixed projectors (the measured quantities are invariant under the
/// free evolution when state and projectors rotate together).
pub fn empirical_model(
    rho: &ComplexMatrix,
    scen: &Scenario,
) -> Result<EmpiricalModel, ScenarioError> {
    let id = ComplexMatrix::identity(rho.rows());
    let mut rows = Vec::with_capacity(scen.contexts.len());
    for &(i, j) in &scen.contexts {
        let pi = &scen.projectors[i];
        let pj = &scen.projectors[j];
        let qi = id.sub(pi).unwrap();
        let qj = id.sub(pj).unwrap();
        let mut row = [0.0f64; 4];
        for (k, (a, b)) in OUTCOME_ORDER.iter().enumerate() {
            let oa = if *a == -1 { pi } else { &qi };
            let ob = if *b == -1 { pj } else { &qj };
            let p = expect(rho, &oa.mul(ob).unwrap())
                .map_err(|e| ScenarioError::InvalidModel(e.to_string()))?;
            if p.re < -1e-10 {
                return Err(ScenarioError::InvalidModel(format!(
                    "negative probability {p} for context ({i},{j})"
                )));
            }
            row[k] = p.re;
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(ScenarioError::InvalidModel(format!(
                "context ({i},{j}) row sums to {sum}"
            )));
        }
        for v in &mut row {
            *v /= sum;
        }
        rows.push(row);
    }
    Ok(EmpiricalModel {
        n_measurements: scen.n_measurements,
        contexts: scen.contexts.clone(),
        rows,
    })
}

/// 0/1 restriction matrix between global assignments (columns) and local
/// (context, outcome-pair) assignments (rows).
///
/// Global assignment `g` is indexed over `[0, 2^n)`; bit `i` of `g` clear
/// means outcome -1 for measurement `i`.  Rows follow the context list, then
/// `OUTCOME_ORDER`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceMatrix {
    pub rows: usize,
    pub cols: usize,
    bits: Vec<bool>,
}

impl IncidenceMatrix {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        if self.get(row, col) {
            1.0
        } else {
            0.0
        }
    }
}

pub fn incidence(scen_contexts: &[(usize, usize)], n_measurements: usize) -> IncidenceMatrix {
    let rows = 4 * scen_contexts.len();
    let cols = 1usize << n_measurements;
    let mut bits = vec![false; rows * cols];
    for (c_idx, &(i, j)) in scen_contexts.iter().enumerate() {
        for (o_idx, (a, b)) in OUTCOME_ORDER.iter().enumerate() {
            let row = c_idx * 4 + o_idx;
            for g in 0..cols {
                let gi = if (g >> i) & 1 == 0 { -1 } else { 1 };
                let gj = if (g >> j) & 1 == 0 { -1 } else { 1 };
                if gi == *a && gj == *b {
                    bits[row * cols + g] = true;
                }
            }
        }
    }
    IncidenceMatrix { rows, cols, bits }
}

/// Validation report for an empirical model (report-only, never fails).
#[derive(Debug, Clone)]
pub struct ModelReport {
    pub row_sums: Vec<f64>,
    pub max_row_sum_deviation: f64,
    pub min_entry: f64,
    /// Worst disagreement of a shared measurement's marginal across contexts.
    pub max_marginal_deviation: f64,
    pub normalization_ok: bool,
    pub no_signalling_ok: bool,
    pub nonnegative_ok: bool,
}

/// Marginal p(m_i = -1) of measurement `i` within row `r` of context `(a, b)`.
fn marginal(row: &[f64; 4], first_slot: bool) -> f64 {
    if first_slot {
        row[0] + row[1]
    } else {
        row[0] + row[2]
    }
}

pub fn validate_model(model: &EmpiricalModel) -> ModelReport {
    let row_sums: Vec<f64> = model.rows.iter().map(|r| r.iter().sum()).collect();
    let max_row_sum_deviation = row_sums
        .iter()
        .map(|s| (s - 1.0).abs())
        .fold(0.0f64, f64::max);
    let min_entry = model
        .rows
        .iter()
        .flat_map(|r| r.iter().copied())
        .fold(f64::INFINITY, f64::min);

    let mut max_marginal_deviation = 0.0f64;
    for m in 0..model.n_measurements {
        let mut seen: Option<f64> = None;
        for (c, &(i, j)) in model.contexts.iter().enumerate() {
            let p = if i == m {
                Some(marginal(&model.rows[c], true))
            } else if j == m {
                Some(marginal(&model.rows[c], false))
            } else {
                None
            };
            if let Some(p) = p {
                if let Some(prev) = seen {
                    max_marginal_deviation = max_marginal_deviation.max((p - prev).abs());
                } else {
                    seen = Some(p);
                }
            }
        }
    }
    ModelReport {
        normalization_ok: max_row_sum_deviation <= 1e-10,
        no_signalling_ok: max_marginal_deviation <= 1e-9,
        nonnegative_ok: min_entry >= -1e-12,
        row_sums,
        max_row_sum_deviation,
        min_entry,
        max_marginal_deviation,
    }
}

// ---------------------------------------------------------------------------
// JSON document format
// ---------------------------------------------------------------------------

/// Parse a probability that is either a JSON number or an "a/b" rational.
fn parse_prob(v: &serde_json::Value) -> Result<f64, ScenarioError> {
    let value = match v {
        serde_json::Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| ScenarioError::Document("unrepresentable number".into()))?,
        serde_json::Value::String(s) => parse_rational(s)?,
        _ => {
            return Err(ScenarioError::Document(format!(
                "probability must be a number or \"a/b\" string, got {v}"
            )))
        }
    };
    if !value.is_finite() {
        return Err(ScenarioError::Document("probability must be finite".into()));
    }
    Ok(value)
}

/// Parse `"a/b"` or a plain decimal string.
pub fn parse_rational(s: &str) -> Result<f64, ScenarioError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| ScenarioError::Document(format!("bad numerator in {s:?}")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| ScenarioError::Document(format!("bad denominator in {s:?}")))?;
        if d == 0.0 || !n.is_finite() || !d.is_finite() || !(n / d).is_finite() {
            return Err(ScenarioError::Document(format!("bad rational {s:?}")));
        }
        Ok(n / d)
    } else {
        let v: f64 = s
            .parse()
            .map_err(|_| ScenarioError::Document(format!("bad decimal {s:?}")))?;
        if !v.is_finite() {
            return Err(ScenarioError::Document(format!("non-finite value {s:?}")));
        }
        Ok(v)
    }
}

/// Parse a model document:
/// `{"measurements": n, "contexts": [[i,j],...], "rows": [[p,p,p,p],...]}`.
pub fn model_from_json(text: &str) -> Result<EmpiricalModel, ScenarioError> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ScenarioError::Document(format!("invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| ScenarioError::Document("top level must be an object".into()))?;
    let n = obj
        .get("measurements")
        .and_then(|m| m.as_u64())
        .ok_or_else(|| ScenarioError::Document("missing integer \"measurements\"".into()))?
        as usize;
    if n == 0 || n > 24 {
        return Err(ScenarioError::Document(
            "measurements must be between 1 and 24".into(),
        ));
    }
    let contexts_v = obj
        .get("contexts")
        .and_then(|c| c.as_array())
        .ok_or_else(|| ScenarioError::Document("missing array \"contexts\"".into()))?;
    let mut contexts = Vec::with_capacity(contexts_v.len());
    for c in contexts_v {
        let pair = c
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| ScenarioError::Document("each context must be a pair".into()))?;
        let i = pair[0]
            .as_u64()
            .ok_or_else(|| ScenarioError::Document("context indices must be integers".into()))?
            as usize;
        let j = pair[1]
            .as_u64()
            .ok_or_else(|| ScenarioError::Document("context indices must be integers".into()))?
            as usize;
        if i >= n || j >= n || i == j {
            return Err(ScenarioError::Document(format!(
                "context ({i},{j}) out of range for {n} measurements"
            )));
        }
        contexts.push((i, j));
    }
    let rows_v = obj
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or_else(|| ScenarioError::Document("missing array \"rows\"".into()))?;
    if rows_v.len() != contexts.len() {
        return Err(ScenarioError::Document(format!(
            "{} rows for {} contexts",
            rows_v.len(),
            contexts.len()
        )));
    }
    let mut rows = Vec::with_capacity(rows_v.len());
    for r in rows_v {
        let cells = r
            .as_array()
            .filter(|c| c.len() == 4)
            .ok_or_else(|| ScenarioError::Document("each row needs 4 probabilities".into()))?;
        let mut row = [0.0f64; 4];
        for (k, cell) in cells.iter().enumerate() {
            row[k] = parse_prob(cell)?;
        }
        rows.push(row);
    }
    Ok(EmpiricalModel {
        n_measurements: n,
        contexts,
        rows,
    })
}

pub fn model_to_json(model: &EmpiricalModel) -> String {
    let contexts: Vec<Vec<usize>> = model.contexts.iter().map(|&(i, j)| vec![i, j]).collect();
    let rows: Vec<Vec<f64>> = model.rows.iter().map(|r| r.to_vec()).collect();
    serde_json::json!({
        "measurements": model.n_measurements,
        "contexts": contexts,
        "rows": rows,
    })
    .to_string()
}

/// The five-context cyclic model of the introduction's probability table
/// (ninths and thirds), on the cycle contexts (0,1)...(4,0).
pub fn kcbs_table_model() -> EmpiricalModel {
    let third = 1.0 / 3.0;
    let ninth = 1.0 / 9.0;
    EmpiricalModel {
        n_measurements: 5,
        contexts: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
        rows: vec![
            [0.0, ninth, 2.0 * third, 2.0 * ninth],
            [0.0, 2.0 * third, third, 0.0],
            [0.0, third, third, third],
            [0.0, third, 2.0 * third, 0.0],
            [0.0, 2.0 * third, ninth, 2.0 * ninth],
        ],
    }
}
