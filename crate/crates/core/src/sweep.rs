//! Configuration-driven parameter sweeps producing tabular data: the
//! contextual fraction difference, mana, negativity, and the
//! genuine-harvesting diagnostics over an energy-gap grid.

use crate::ctxscen::{build_pentagram, empirical_model, PentagramSet, Scenario};
use crate::fieldprop::{self, DetectorParams, SignPair};
use crate::lpcf::contextual_fraction;
use crate::matcore::ComplexMatrix;
use crate::measures;
use crate::udwstate::{
    assemble_qubit_qutrit, assemble_single_qutrit, ground_state, reduce_qutrit, UdwSystem,
};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SweepError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setup {
    SingleQutrit,
    QubitQutrit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

/// Parse "MIN:MAX:COUNT" into a grid.
pub fn parse_grid(s: &str) -> Result<GridSpec, SweepError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(SweepError::Config(format!(
            "grid must be MIN:MAX:COUNT, got {s:?}"
        )));
    }
    let min: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| SweepError::Config(format!("bad grid minimum {:?}", parts[0])))?;
    let max: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| SweepError::Config(format!("bad grid maximum {:?}", parts[1])))?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| SweepError::Config(format!("bad grid count {:?}", parts[2])))?;
    if !min.is_finite() || !max.is_finite() || max < min {
        return Err(SweepError::Config(format!("bad grid range {s:?}")));
    }
    Ok(GridSpec { min, max, count })
}

/// Parse a comma-separated list of reals.
pub fn parse_list(s: &str) -> Result<Vec<f64>, SweepError> {
    s.split(',')
        .map(|p| {
            let v: f64 = p
                .trim()
                .parse()
                .map_err(|_| SweepError::Config(format!("bad list entry {p:?}")))?;
            if !v.is_finite() {
                return Err(SweepError::Config(format!("non-finite list entry {p:?}")));
            }
            Ok(v)
        })
        .collect()
}

fn default_threads() -> usize {
    1
}
fn default_threshold() -> f64 {
    measures::DEFAULT_RATIO_THRESHOLD
}
fn default_lambda() -> f64 {
    1e-4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub setup: Setup,
    pub angle_set: u8,
    pub omega_grid: GridSpec,
    pub temporal_widths: Vec<f64>,
    pub alpha_invsqrt: Vec<f64>,
    /// Detector separations; qubit-qutrit only.
    #[serde(default)]
    pub separations: Vec<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub tbar: f64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.omega_grid.count < 2 {
            return Err(SweepError::Config("omega grid needs at least 2 points".into()));
        }
        if self.omega_grid.count > 1_000_000 {
            return Err(SweepError::Config("omega grid count is capped at 1e6".into()));
        }
        if !self.omega_grid.min.is_finite()
            || !self.omega_grid.max.is_finite()
            || self.omega_grid.max < self.omega_grid.min
            || self.omega_grid.min < 0.0
        {
            return Err(SweepError::Config(
                "omega grid bounds must be finite, ordered, and non-negative".into(),
            ));
        }
        if !self.tbar.is_finite() {
            return Err(SweepError::Config("temporal centre must be finite".into()));
        }
        if self.temporal_widths.is_empty() || self.temporal_widths.iter().any(|&t| !(t > 0.0)) {
            return Err(SweepError::Config("temporal widths must be positive".into()));
        }
        if self.alpha_invsqrt.is_empty() || self.alpha_invsqrt.iter().any(|&a| !(a > 0.0)) {
            return Err(SweepError::Config("spatial widths must be positive".into()));
        }
        if self.setup == Setup::QubitQutrit
            && (self.separations.is_empty() || self.separations.iter().any(|&l| !(l > 0.0)))
        {
            return Err(SweepError::Config(
                "qubit-qutrit sweeps need positive separations".into(),
            ));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(SweepError::Config("coupling must be a finite non-negative".into()));
        }
        if !(self.threshold > 0.0) {
            return Err(SweepError::Config("ratio threshold must be positive".into()));
        }
        if self.threads == 0 {
            return Err(SweepError::Config("threads must be at least 1".into()));
        }
        PentagramSet::from_id(self.angle_set)
            .map_err(|e| SweepError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<SweepConfig, SweepError> {
        let cfg: SweepConfig = serde_json::from_str(text)
            .map_err(|e| SweepError::Config(format!("invalid config JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Named preset configurations for the two bundled sweep setups; the
/// temporal-width list spans the qualitative harvesting regimes.
pub fn preset(name: &str) -> Result<SweepConfig, SweepError> {
    let base = SweepConfig {
        setup: Setup::SingleQutrit,
        angle_set: 1,
        // Up to ΩT ~ 12 for the widest temporal width, far past the peak.
        omega_grid: GridSpec { min: 0.0, max: 12.0, count: 81 },
        temporal_widths: vec![1.0 / 30.0, 0.1, 1.0 / 3.0, 1.0],
        alpha_invsqrt: vec![1.0, 0.1],
        separations: vec![],
        lambda: 1e-4,
        tbar: 0.0,
        threshold: measures::DEFAULT_RATIO_THRESHOLD,
        output_path: None,
        threads: 1,
    };
    match name {
        "figure1" => Ok(base),
        "figure2" => Ok(SweepConfig {
            setup: Setup::QubitQutrit,
            separations: vec![0.5, 3.0],
            ..base
        }),
        other => Err(SweepError::Config(format!("unknown preset {other:?}"))),
    }
}

/// One output record of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub omega: f64,
    pub temporal_width: f64,
    pub alpha_invsqrt: f64,
    pub separation: Option<f64>,
    pub delta_cf_over_lambda2: f64,
    pub mana_over_lambda2: f64,
    pub negativity_over_lambda2: Option<f64>,
    pub abs_sym_prop: f64,
    pub abs_hadamard: f64,
    pub ratio: f64,
    pub genuine: bool,
    pub s_c_delta: f64,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(point: &GridPoint, message: String) -> SweepRow {
        SweepRow {
            omega: point.omega,
            temporal_width: point.t,
            alpha_invsqrt: point.alpha_invsqrt,
            separation: point.separation,
            delta_cf_over_lambda2: f64::NAN,
            mana_over_lambda2: f64::NAN,
            negativity_over_lambda2: point.separation.map(|_| f64::NAN),
            abs_sym_prop: f64::NAN,
            abs_hadamard: f64::NAN,
            ratio: f64::NAN,
            genuine: false,
            s_c_delta: f64::NAN,
            error: Some(message),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    omega: f64,
    t: f64,
    alpha_invsqrt: f64,
    separation: Option<f64>,
}

struct SweepContext {
    scenario: Scenario,
    ground: ComplexMatrix,
    cf_ground: f64,
    lambda: f64,
    tbar: f64,
    threshold: f64,
}

fn eval_point(ctx: &SweepContext, p: &GridPoint) -> Result<SweepRow, String> {
    let alpha = p.alpha_invsqrt.powi(-2);
    let lam2 = (ctx.lambda * ctx.lambda).max(f64::MIN_POSITIVE);
    let err = |e: &dyn std::fmt::Display| e.to_string();

    let qutrit = DetectorParams::qutrit(p.omega, p.t, alpha, ctx.lambda).at_time(ctx.tbar);

    let (rho_qutrit, negativity, sym, had) = match p.separation {
        None => {
            let sys = UdwSystem::single_qutrit(qutrit.clone()).map_err(|e| err(&e))?;
            let bundle = assemble_single_qutrit(&sys).map_err(|e| err(&e))?;
            let sym = fieldprop::symmetric(&qutrit, &qutrit, SignPair::PP, true)
                .map_err(|e| err(&e))?
                .value
                .norm();
            let had = fieldprop::hadamard(&qutrit, &qutrit, SignPair::PP, true)
                .map_err(|e| err(&e))?
                .value
                .norm();
            (bundle.rho, None, sym, had)
        }
        Some(l) => {
            let qubit = DetectorParams::qubit(p.omega, p.t, alpha, ctx.lambda).at_time(ctx.tbar);
            let qutrit = qutrit.at_position([l, 0.0, 0.0]);
            let sys = UdwSystem::qubit_qutrit(qubit.clone(), qutrit.clone())
                .map_err(|e| err(&e))?;
            let bundle = assemble_qubit_qutrit(&sys).map_err(|e| err(&e))?;
            let neg = measures::negativity_closed_second_order(&bundle.props)
                .map_err(|e| err(&e))?;
            let reduced = reduce_qutrit(&bundle).map_err(|e| err(&e))?;
            let sym = fieldprop::symmetric(&qubit, &qutrit, SignPair::PP, false)
                .map_err(|e| err(&e))?
                .value
                .norm();
            let had = fieldprop::hadamard(&qubit, &qutrit, SignPair::PP, false)
                .map_err(|e| err(&e))?
                .value
                .norm();
            (reduced.rho, Some(neg), sym, had)
        }
    };

    let model = empirical_model(&rho_qutrit, &ctx.scenario).map_err(|e| err(&e))?;
    let cf = contextual_fraction(&model).map_err(|e| err(&e))?;
    let delta_cf = cf - ctx.cf_ground;
    let mana = measures::mana(&rho_qutrit).map_err(|e| err(&e))?;
    let s_c_delta = measures::s_c_difference(&rho_qutrit, &ctx.ground, &ctx.scenario);
    let ratio = if had < 1e-300 { f64::INFINITY } else { sym / had };
    let genuine = ratio <= ctx.threshold && delta_cf > 0.0;

    Ok(SweepRow {
        omega: p.omega,
        temporal_width: p.t,
        alpha_invsqrt: p.alpha_invsqrt,
        separation: p.separation,
        delta_cf_over_lambda2: delta_cf / lam2,
        mana_over_lambda2: mana / lam2,
        negativity_over_lambda2: negativity.map(|n| n / lam2),
        abs_sym_prop: sym,
        abs_hadamard: had,
        ratio,
        genuine,
        s_c_delta,
        error: None,
    })
}

/// Run the Cartesian sweep; rows are omega-major deterministic, individual
/// failures become error records without aborting the sweep.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    cfg.validate()?;
    let set = PentagramSet::from_id(cfg.angle_set)
        .map_err(|e| SweepError::Config(e.to_string()))?;
    let scenario = build_pentagram(set).map_err(|e| SweepError::Config(e.to_string()))?;
    let ground = ground_state(3);
    let ground_model =
        empirical_model(&ground, &scenario).map_err(|e| SweepError::Config(e.to_string()))?;
    let cf_ground = contextual_fraction(&ground_model)
        .map_err(|e| SweepError::Config(e.to_string()))?;
    let ctx = SweepContext {
        scenario,
        ground,
        cf_ground,
        lambda: cfg.lambda,
        tbar: cfg.tbar,
        threshold: cfg.threshold,
    };

    let separations: Vec<Option<f64>> = match cfg.setup {
        Setup::SingleQutrit => vec![None],
        Setup::QubitQutrit => cfg.separations.iter().copied().map(Some).collect(),
    };
    let mut points = Vec::new();
    for omega in cfg.omega_grid.values() {
        for &t in &cfg.temporal_widths {
            for &alpha_invsqrt in &cfg.alpha_invsqrt {
                for &separation in &separations {
                    points.push(GridPoint {
                        omega,
                        t,
                        alpha_invsqrt,
                        separation,
                    });
                }
            }
        }
    }

    let eval = |p: &GridPoint| eval_point(&ctx, p).unwrap_or_else(|msg| SweepRow::failed(p, msg));

    let rows = if cfg.threads <= 1 {
        points.iter().map(eval).collect()
    } else {
        // Fan out in order-preserving chunks; aggregation restores ordering
        // by construction, so the output is identical to the serial run.
        let chunk = points.len().div_ceil(cfg.threads);
        let mut rows = vec![None; points.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (ci, slice) in points.chunks(chunk).enumerate() {
                let ctx = &ctx;
                handles.push((
                    ci * chunk,
                    scope.spawn(move || {
                        slice
                            .iter()
                            .map(|p| eval_point(ctx, p).unwrap_or_else(|m| SweepRow::failed(p, m)))
                            .collect::<Vec<_>>()
                    }),
                ));
            }
            for (offset, h) in handles {
                for (i, row) in h.join().expect("sweep worker panicked").into_iter().enumerate() {
                    rows[offset + i] = Some(row);
                }
            }
        });
        rows.into_iter().map(Option::unwrap).collect()
    };
    Ok(rows)
}

/// CSV column order (matches `SweepRow`).
pub const CSV_HEADER: &str = "omega,temporal_width,alpha_invsqrt,separation,\
delta_cf_over_lambda2,mana_over_lambda2,negativity_over_lambda2,\
abs_sym_prop,abs_hadamard,ratio,genuine,s_c_delta,error";

fn fmt_f64(v: f64) -> String {
    // 17 significant digits: round-trippable full double precision.
    format!("{v:.16e}")
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.omega),
            fmt_f64(r.temporal_width),
            fmt_f64(r.alpha_invsqrt),
            opt(r.separation),
            fmt_f64(r.delta_cf_over_lambda2),
            fmt_f64(r.mana_over_lambda2),
            opt(r.negativity_over_lambda2),
            fmt_f64(r.abs_sym_prop),
            fmt_f64(r.abs_hadamard),
            fmt_f64(r.ratio),
            r.genuine,
            fmt_f64(r.s_c_delta),
            r.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
        ));
    }
    out
}

/// Write the table atomically (temporary file then rename).
pub fn emit_csv(rows: &[SweepRow], path: &str) -> Result<(), SweepError> {
    let io_err = |e: std::io::Error| SweepError::Io {
        path: path.to_string(),
        message: e.to_string(),
    };
    let tmp = format!("{path}.tmp");
    {
        let mut f = std::fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(rows_to_csv(rows).as_bytes()).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
    }
    std::fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}
