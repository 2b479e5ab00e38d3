//! The contextual fraction linear program.
//!
//! `NCF(e) = max 1·b` subject to `M b <= v^e`, `b >= 0`, over global-assignment
//! weights `b`; `CF = 1 - NCF`.  Solved by a dense primal simplex with Bland's
//! anti-cycling rule: at 20 constraints by 32 variables determinism and
//! auditability beat sophistication.

use crate::ctxscen::{
    empirical_model, incidence, validate_model, EmpiricalModel, IncidenceMatrix, Scenario,
};
use crate::matcore::ComplexMatrix;

#[derive(Debug, Clone, thiserror::Error)]
pub enum LpError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("numerical trouble in simplex: {0}")]
    NumericalTrouble(String),
    #[error("scenario error: {0}")]
    Scenario(#[from] crate::ctxscen::ScenarioError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    /// Unreachable for this program class (b = 0 is always feasible); part
    /// of the solver interface nonetheless.
    Infeasible,
    NumericalTrouble,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Optimal sub-probability weights over global assignments.
    pub b_star: Vec<f64>,
    /// `1 · b*` = non-contextual fraction.
    pub objective_value: f64,
    pub status: LpStatus,
    /// Dual certificate `y >= 0` with `yᵀM >= 1`.
    pub dual: Vec<f64>,
    /// `|y·v - 1·b*|`.
    pub duality_gap: f64,
}

const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-12;

/// Maximize `1·b` subject to `M b <= v`, `b >= 0`.
// Index-based row operations express simplex pivots more clearly than
// iterator chains over two rows of the same tableau.
#[allow(clippy::needless_range_loop)]
pub fn solve_ncf(m: &IncidenceMatrix, v: &[f64]) -> Result<LpSolution, LpError> {
    if v.len() != m.rows {
        return Err(LpError::InvalidModel(format!(
            "rhs length {} does not match {} rows",
            v.len(),
            m.rows
        )));
    }
    for &x in v {
        if !(-1e-12..=1.0 + 1e-12).contains(&x) {
            return Err(LpError::InvalidModel(format!(
                "rhs entry {x} outside [0, 1]"
            )));
        }
    }
    let (rows, cols) = (m.rows, m.cols);
    let total = cols + rows; // structural + slack variables

    // Canonical tableau with slack basis; columns n..n+m are the slacks.
    let mut t = vec![vec![0.0f64; total + 1]; rows];
    for i in 0..rows {
        for j in 0..cols {
            t[i][j] = m.entry(i, j);
        }
        t[i][cols + i] = 1.0;
        t[i][total] = v[i].max(0.0);
    }
    let mut basis: Vec<usize> = (cols..total).collect();
    // Objective row holds reduced costs (maximization).
    let mut obj = vec![0.0f64; total + 1];
    for j in 0..cols {
        obj[j] = 1.0;
    }

    let max_iter = 50_000usize;
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > max_iter {
            return Err(LpError::NumericalTrouble(
                "pivot limit exceeded (anti-cycling exhausted)".into(),
            ));
        }
        // Bland: lowest-index column with positive reduced cost.
        let entering = (0..total).find(|&j| obj[j] > PIVOT_TOL);
        let Some(e) = entering else { break };

        // Ratio test; Bland tie-break on the lowest basis variable index.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if t[i][e] > PIVOT_TOL {
                let ratio = t[i][total] / t[i][e];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-15
                            || ((ratio - lr).abs() <= 1e-15 && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            return Err(LpError::NumericalTrouble(
                "unbounded direction in a bounded program".into(),
            ));
        };

        // Pivot on (l, e).
        let piv = t[l][e];
        for x in t[l].iter_mut() {
            *x /= piv;
        }
        for i in 0..rows {
            if i != l && t[i][e].abs() > 0.0 {
                let f = t[i][e];
                for j in 0..=total {
                    t[i][j] -= f * t[l][j];
                }
                t[i][e] = 0.0;
            }
        }
        let f = obj[e];
        for j in 0..=total {
            obj[j] -= f * t[l][j];
        }
        obj[e] = 0.0;
        basis[l] = e;
    }

    let mut b_star = vec![0.0f64; cols];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < cols {
            b_star[bi] = t[i][total];
        }
    }
    let objective_value: f64 = b_star.iter().sum();
    // Dual variables from the slack reduced costs: y_i = -obj[n + i].
    let dual: Vec<f64> = (0..rows).map(|i| -obj[cols + i]).collect();
    let y_dot_v: f64 = dual.iter().zip(v).map(|(y, x)| y * x.max(0.0)).sum();
    let duality_gap = (y_dot_v - objective_value).abs();

    // Certify the solution.
    let mut status = LpStatus::Optimal;
    for &b in &b_star {
        if b < -1e-12 {
            status = LpStatus::NumericalTrouble;
        }
    }
    for i in 0..rows {
        let row_val: f64 = (0..cols).map(|j| m.entry(i, j) * b_star[j]).sum();
        if row_val > v[i].max(0.0) + FEAS_TOL {
            status = LpStatus::NumericalTrouble;
        }
        if dual[i] < -1e-11 {
            status = LpStatus::NumericalTrouble;
        }
    }
    for j in 0..cols {
        let y_col: f64 = (0..rows).map(|i| dual[i] * m.entry(i, j)).sum();
        if y_col < 1.0 - FEAS_TOL {
            status = LpStatus::NumericalTrouble;
        }
    }
    if duality_gap > FEAS_TOL {
        status = LpStatus::NumericalTrouble;
    }
    if status == LpStatus::NumericalTrouble {
        return Err(LpError::NumericalTrouble(format!(
            "certificate failed (gap {duality_gap:e})"
        )));
    }

    Ok(LpSolution {
        b_star,
        objective_value,
        status,
        dual,
        duality_gap,
    })
}

/// Flatten an empirical model into the LP right-hand side.
pub fn vectorize(model: &EmpiricalModel) -> Vec<f64> {
    model.rows.iter().flat_map(|r| r.iter().copied()).collect()
}

/// Contextual fraction `CF = 1 - NCF` of a validated model.
///
/// Values are reported as computed, never clamped, so coupling-squared-scale
/// signals survive.
pub fn contextual_fraction(model: &EmpiricalModel) -> Result<f64, LpError> {
    let report = validate_model(model);
    if !report.normalization_ok || !report.nonnegative_ok {
        return Err(LpError::InvalidModel(format!(
            "normalization deviation {:e}, min entry {:e}",
            report.max_row_sum_deviation, report.min_entry
        )));
    }
    if !report.no_signalling_ok {
        return Err(LpError::InvalidModel(format!(
            "no-signalling violated by {:e}",
            report.max_marginal_deviation
        )));
    }
    let m = incidence(&model.contexts, model.n_measurements);
    let sol = solve_ncf(&m, &vectorize(model))?;
    Ok(1.0 - sol.objective_value)
}

/// `ΔCF = CF(model(ρ_t)) - CF(model(ρ_0))`.
pub fn delta_cf(
    rho_t: &ComplexMatrix,
    rho_0: &ComplexMatrix,
    scen: &Scenario,
) -> Result<f64, LpError> {
    let cf_t = contextual_fraction(&empirical_model(rho_t, scen)?)?;
    let cf_0 = contextual_fraction(&empirical_model(rho_0, scen)?)?;
    Ok(cf_t - cf_0)
}

/// Largest independent set of the context graph (the non-contextual bound γ).
fn independence_number(n: usize, contexts: &[(usize, usize)]) -> usize {
    let mut best = 0usize;
    for mask in 0u32..(1u32 << n) {
        let mut ok = true;
        for &(i, j) in contexts {
            if mask >> i & 1 == 1 && mask >> j & 1 == 1 {
                ok = false;
                break;
            }
        }
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

/// Normalized violation `max(0, S - γ)/(S_max - γ)` of the inequality
/// `S = Σ_i p_i(-1) <= γ`, with `S_max = n` the algebraic maximum over global
/// assignments.  A lower bound on the contextual fraction.
pub fn normalized_violation(model: &EmpiricalModel, scen: &Scenario) -> Result<f64, LpError> {
    if scen.n_measurements != model.n_measurements {
        return Err(LpError::InvalidModel(
            "model and scenario measurement counts differ".into(),
        ));
    }
    // S from the model's marginals, averaging over the contexts containing i.
    let mut s = 0.0;
    for i in 0..model.n_measurements {
        let mut acc = 0.0;
        let mut count = 0usize;
        for (c, &(a, b)) in model.contexts.iter().enumerate() {
            if a == i {
                acc += model.rows[c][0] + model.rows[c][1];
                count += 1;
            } else if b == i {
                acc += model.rows[c][0] + model.rows[c][2];
                count += 1;
            }
        }
        if count > 0 {
            s += acc / count as f64;
        }
    }
    let gamma = independence_number(model.n_measurements, &model.contexts) as f64;
    let s_max = model.n_measurements as f64;
    Ok((s - gamma).max(0.0) / (s_max - gamma))
}

/// The strongly contextual anti-correlated odd-cycle model on given contexts.
pub fn anticorrelated_cycle_model(n: usize, contexts: &[(usize, usize)]) -> EmpiricalModel {
    EmpiricalModel {
        n_measurements: n,
        contexts: contexts.to_vec(),
        rows: vec![[0.0, 0.5, 0.5, 0.0]; contexts.len()],
    }
}

/// The deterministic model of a single global assignment.
pub fn deterministic_model(
    n: usize,
    contexts: &[(usize, usize)],
    g: usize,
) -> EmpiricalModel {
    let rows = contexts
        .iter()
        .map(|&(i, j)| {
            let gi = (g >> i) & 1;
            let gj = (g >> j) & 1;
            let mut row = [0.0; 4];
            row[2 * gi + gj] = 1.0;
            row
        })
        .collect();
    EmpiricalModel {
        n_measurements: n,
        contexts: contexts.to_vec(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctxscen::{build_pentagram, kcbs_table_model, PentagramSet, PENTAGRAM_CONTEXTS};
    use crate::udwstate::ground_state;

    #[test]
    fn deterministic_models_are_noncontextual() {
        for g in 0..32 {
            let model = deterministic_model(5, &PENTAGRAM_CONTEXTS, g);
            let cf = contextual_fraction(&model).unwrap();
            assert_eq!(cf, 0.0, "assignment {g}");
        }
    }

    #[test]
    fn anticorrelated_odd_cycle_is_strongly_contextual() {
        let model = anticorrelated_cycle_model(5, &PENTAGRAM_CONTEXTS);
        let cf = contextual_fraction(&model).unwrap();
        assert!((cf - 1.0).abs() <= 1e-12, "CF = {cf}");

        // And on the 5-cycle contexts of the table model.
        let model = anticorrelated_cycle_model(5, &kcbs_table_model().contexts);
        let cf = contextual_fraction(&model).unwrap();
        assert!((cf - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ground_state_sits_on_the_boundary() {
        for set in [PentagramSet::Set1, PentagramSet::Set2, PentagramSet::Set3] {
            let scen = build_pentagram(set).unwrap();
            let model = empirical_model(&ground_state(3), &scen).unwrap();
            let cf = contextual_fraction(&model).unwrap();
            assert!(cf.abs() <= 1e-9, "CF = {cf}");
        }
    }

    #[test]
    fn kcbs_table_fraction_and_violation() {
        let model = kcbs_table_model();
        let cf = contextual_fraction(&model).unwrap();
        assert!(cf > 0.0 && cf <= 1.0, "CF = {cf}");
        // NV needs a scenario for the measurement count; synthesize one.
        let scen = build_pentagram(PentagramSet::Set1).unwrap();
        let nv = normalized_violation(&model, &scen).unwrap();
        assert!(nv <= cf + 1e-9, "NV {nv} > CF {cf}");
    }

    #[test]
    fn dual_certificate_holds() {
        let model = kcbs_table_model();
        let m = incidence(&model.contexts, 5);
        let sol = solve_ncf(&m, &vectorize(&model)).unwrap();
        assert!(sol.duality_gap <= 1e-9);
        assert!(sol.dual.iter().all(|&y| y >= -1e-11));
        assert_eq!(sol.status, LpStatus::Optimal);
    }

    #[test]
    fn rejects_unvalidatable_models() {
        let mut model = kcbs_table_model();
        model.rows[0][3] += 0.2;
        assert!(matches!(
            contextual_fraction(&model),
            Err(LpError::InvalidModel(_))
        ));
    }

    #[test]
    fn delta_cf_basics() {
        use crate::fieldprop::DetectorParams;
        use crate::udwstate::{assemble_single_qutrit, UdwSystem};

        let scen = build_pentagram(PentagramSet::Set1).unwrap();
        let g = ground_state(3);
        // Identical states: exactly zero (the two solves are byte-identical).
        assert_eq!(delta_cf(&g, &g, &scen).unwrap(), 0.0);

        // Gapless set-1 point harvests.
        let sys = UdwSystem::single_qutrit(DetectorParams::qutrit(0.0, 1.0 / 3.0, 1.0, 1e-4))
            .unwrap();
        let rho = assemble_single_qutrit(&sys).unwrap().rho;
        let d = delta_cf(&rho, &g, &scen).unwrap();
        assert!(d > 0.0, "ΔCF = {d}");

        // The same point on set 2 stays at zero.
        let scen2 = build_pentagram(PentagramSet::Set2).unwrap();
        let d2 = delta_cf(&rho, &g, &scen2).unwrap();
        assert!(d2.abs() <= 1e-9, "ΔCF = {d2}");
    }

    #[test]
    fn normalized_violation_of_anticorrelated_cycle() {
        let scen = build_pentagram(PentagramSet::Set1).unwrap();
        let model = anticorrelated_cycle_model(5, &PENTAGRAM_CONTEXTS);
        let nv = normalized_violation(&model, &scen).unwrap();
        // S = 5/2, γ = 2, S_max = 5: NV = 1/6, below CF = 1.
        assert!((nv - (0.5 / 3.0)).abs() < 1e-12);
    }
}
