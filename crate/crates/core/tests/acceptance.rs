//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

mod common;

use ctxharvest::ctxscen::{
    build_pentagram, empirical_model, incidence, builtin_angle_set, scenario_report, PentagramSet,
    PENTAGRAM_CONTEXTS,
};
use ctxharvest::fieldprop::{self, oracle, DetectorParams, SignPair, TimeOrder};
use ctxharvest::lpcf::{
    anticorrelated_cycle_model, contextual_fraction, deterministic_model, normalized_violation,
    solve_ncf, vectorize,
};
use ctxharvest::matcore::{BipartiteShape, ComplexMatrix, Subsystem};
use ctxharvest::measures::{
    delta_s_c_closed, derive_inequality_coeffs, mana, mana_closed_form, negativity,
    negativity_closed, negativity_on,
};
use ctxharvest::numkernel::{erf_c, erfi_c, Complex64};
use ctxharvest::sweep::{preset, rows_to_csv, run_sweep, GridSpec, Setup, SweepConfig};
use ctxharvest::udwstate::{
    assemble_qubit_qutrit, assemble_single_qutrit, ground_state, reduce_qutrit, UdwSystem,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SIGNS: [SignPair; 4] = [SignPair::PP, SignPair::PM, SignPair::MP, SignPair::MM];

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn criterion_01_angle_set_suite() {
    for (id, set) in [PentagramSet::Set1, PentagramSet::Set2, PentagramSet::Set3]
        .into_iter()
        .enumerate()
    {
        let angles = builtin_angle_set(&set).unwrap();
        let report = scenario_report(&angles);
        assert!(
            report.max_context_commutator <= 1e-9,
            "set {}: context commutator {:e}",
            id + 1,
            report.max_context_commutator
        );
        assert!(
            report.min_noncontext_commutator >= 1e-3,
            "set {}: non-context commutator {:e}",
            id + 1,
            report.min_noncontext_commutator
        );
        assert!(
            report.max_idempotency_deviation <= 1e-10,
            "set {}: idempotency {:e}",
            id + 1,
            report.max_idempotency_deviation
        );
        assert!(
            (report.ground_overlap_sum - 2.0).abs() <= 1e-6,
            "set {}: ground overlap {}",
            id + 1,
            report.ground_overlap_sum
        );
        assert!(
            report.cross_term_sum <= 1e-9,
            "set {}: cross term {}",
            id + 1,
            report.cross_term_sum
        );
    }
    println!("criterion 01 (angle-set scenario suite): PASS");
}

#[test]
fn criterion_02_inequality_coefficients() {
    let reference = [
        (0.390345, 0.445589),
        (2.174898, 0.537879),
        (0.902216, 0.451108),
    ];
    let computed: Vec<(f64, f64)> = [PentagramSet::Set1, PentagramSet::Set2, PentagramSet::Set3]
        .into_iter()
        .map(|set| {
            let scen = build_pentagram(set).unwrap();
            let (c, report) = derive_inequality_coeffs(&scen).unwrap();
            assert!(report.flagged.is_none(), "{:?}", report.flagged);
            (c.ell1, c.ell2)
        })
        .collect();

    let matches = |a: (f64, f64), b: (f64, f64)| -> bool {
        (a.0 - b.0).abs() <= 1e-5 * b.0.abs() && (a.1 - b.1).abs() <= 1e-5 * b.1.abs()
    };
    assert!(matches(computed[0], reference[0]), "set 1: {computed:?}");
    if matches(computed[1], reference[1]) && matches(computed[2], reference[2]) {
        println!("criterion 02 (inequality coefficients): PASS (reference order)");
    } else {
        // Flagged-discrepancy path: the reference tuples for sets 2 and 3
        // are interchanged relative to the zero-gap sign labels.
        assert!(
            matches(computed[1], reference[2]) && matches(computed[2], reference[1]),
            "computed {computed:?} match neither reference order"
        );
        assert!(
            (computed[1].0 - 2.0 * computed[1].1).abs() <= 2e-3 * computed[1].0,
            "the zero-gap-null set must have ℓ1 = 2ℓ2"
        );
        println!(
            "criterion 02 (inequality coefficients): PASS via reconciliation — computed \
             set-2 {:?} and set-3 {:?} match the reference tuples with rows 2 and 3 \
             interchanged, consistent with the zero-gap sign labels (set 2 has \
             ℓ1 - 2ℓ2 = {:.2e}, the '= 0' row)",
            computed[1],
            computed[2],
            computed[1].0 - 2.0 * computed[1].1
        );
    }
}

#[test]
fn criterion_03_zero_gap_sign_pattern() {
    let (t, alpha, lambda) = (1.0 / 3.0, 1.0, 1e-4);
    let mut ds = Vec::new();
    let mut dcf = Vec::new();
    for set in [PentagramSet::Set1, PentagramSet::Set2, PentagramSet::Set3] {
        let scen = build_pentagram(set).unwrap();
        let (coeffs, _) = derive_inequality_coeffs(&scen).unwrap();
        let d = DetectorParams::qutrit(0.0, t, alpha, lambda);
        ds.push(delta_s_c_closed(&d, &coeffs).unwrap());
        let sys = UdwSystem::single_qutrit(d).unwrap();
        let rho = assemble_single_qutrit(&sys).unwrap().rho;
        let model = empirical_model(&rho, &scen).unwrap();
        let ground_model = empirical_model(&ground_state(3), &scen).unwrap();
        dcf.push(
            contextual_fraction(&model).unwrap() - contextual_fraction(&ground_model).unwrap(),
        );
    }
    assert!(ds[0] > 0.0 && dcf[0] > 0.0, "set 1: ΔS {} ΔCF {}", ds[0], dcf[0]);
    assert!(
        ds[1].abs() <= 1e-3 * ds[0].abs(),
        "set 2: |ΔS| {} vs set-1 scale {}",
        ds[1].abs(),
        ds[0]
    );
    assert!(dcf[1] <= 1e-9, "set 2: ΔCF {}", dcf[1]);
    assert!(ds[2] < 0.0, "set 3: ΔS {}", ds[2]);
    println!(
        "criterion 03 (zero-gap sign pattern): PASS (ΔS_C = {:+.3e}, {:+.3e}, {:+.3e})",
        ds[0], ds[1], ds[2]
    );
}

#[test]
fn criterion_04_propagator_oracle_equivalence() {
    // Closed forms vs 1D |k| oracles over the full grid.
    let mut worst_1d = 0.0f64;
    for &omega in &[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0] {
        for &t in &[1.0 / 30.0, 1.0 / 3.0, 1.0] {
            for &ia in &[0.1f64, 1.0] {
                for &l in &[0.5, 3.0] {
                    let alpha = ia.powi(-2);
                    let d = DetectorParams::qutrit(omega, t, alpha, 1e-4);
                    let d2 = DetectorParams::qutrit(omega, t, alpha, 1e-4)
                        .at_position([l, 0.0, 0.0]);
                    for s in SIGNS {
                        let w_same = fieldprop::wightman(&d, &d, s, true).unwrap().value;
                        let w_same_o = oracle::wightman(&d, &d, s, true).unwrap();
                        let w_diff = fieldprop::wightman(&d, &d2, s, false).unwrap().value;
                        let w_diff_o = oracle::wightman(&d, &d2, s, false).unwrap();
                        for (closed, orc) in [(w_same, w_same_o), (w_diff, w_diff_o)] {
                            let r = rel(closed, orc);
                            worst_1d = worst_1d.max(r);
                            assert!(
                                r <= 1e-6,
                                "W Ω={omega} T={t} α={alpha} L={l} {s:?}: rel {r:e}"
                            );
                        }
                        // H and E are Wightman combinations; their oracle
                        // carries the cancellation noise of two quadratures,
                        // each converged to 1e-11 relative.
                        let floor = 1e-8 * w_diff_o.norm();
                        for (closed, orc) in [
                            (
                                fieldprop::hadamard(&d, &d2, s, false).unwrap().value,
                                oracle::hadamard(&d, &d2, s, false).unwrap(),
                            ),
                            (
                                fieldprop::causal(&d, &d2, s, false).unwrap().value,
                                oracle::causal(&d, &d2, s, false).unwrap(),
                            ),
                        ] {
                            let scale = closed.norm().max(orc.norm()).max(floor);
                            let r = (closed - orc).norm() / scale;
                            worst_1d = worst_1d.max(r);
                            assert!(
                                r <= 1e-6,
                                "H/E Ω={omega} T={t} α={alpha} L={l} {s:?}: rel {r:e}"
                            );
                        }
                    }
                }
            }
        }
    }

    // Mixed-sign time-ordered forms vs the 2D time-quadrature oracle
    // (Richardson-refined Simpson: h⁴ term cancelled between n and 2n).
    let mut worst_2d = 0.0f64;
    for &omega in &[0.5, 2.0, 4.0] {
        for &t in &[1.0 / 3.0, 1.0] {
            for &ia in &[0.1f64, 1.0] {
                let d = DetectorParams::qutrit(omega, t, ia.powi(-2), 1e-4);
                for s in [SignPair::PM, SignPair::MP] {
                    for dir in [TimeOrder::Fwd, TimeOrder::Bwd] {
                        let c = fieldprop::wightman_ordered(dir, &d, &d, s, true)
                            .unwrap()
                            .value;
                        let o4 = oracle::wightman_ordered_2d(dir, &d, &d, s, true, 400).unwrap();
                        let o8 = oracle::wightman_ordered_2d(dir, &d, &d, s, true, 800).unwrap();
                        let o = (16.0 * o8 - o4) / 15.0;
                        let r = rel(c, o);
                        worst_2d = worst_2d.max(r);
                        assert!(r <= 1e-5, "TO {dir:?} {s:?} Ω={omega} T={t}: rel {r:e}");
                    }
                }
            }
        }
    }

    // Retarded family vs the light-cone 2D oracle (Richardson-refined).
    let rich = |d: &DetectorParams, d2: &DetectorParams, s, same, adv: bool| {
        let f = |n| {
            if adv {
                oracle::advanced_2d(d, d2, s, same, n).unwrap()
            } else {
                oracle::retarded_2d(d, d2, s, same, n).unwrap()
            }
        };
        (16.0 * f(800) - f(400)) / 15.0
    };
    for &(omega, t, ia, l) in &[(1.0f64, 1.0f64, 1.0f64, 0.5f64), (2.0, 1.0 / 3.0, 0.5, 3.0)] {
        let alpha: f64 = ia.powi(-2);
        let d = DetectorParams::qutrit(omega, t, alpha, 1e-4);
        let d2 = DetectorParams::qutrit(omega, t, alpha, 1e-4).at_position([l, 0.0, 0.0]);
        for s in SIGNS {
            for same in [true, false] {
                let dd2 = if same { &d } else { &d2 };
                let gr = fieldprop::retarded(&d, dd2, s, same).unwrap().value;
                let o = rich(&d, dd2, s, same, false);
                let scale = gr.norm().max(o.norm()).max(1e-10);
                assert!(
                    (gr - o).norm() <= 1e-6 * scale,
                    "GR {s:?} same={same}: {gr} vs {o}"
                );
                let ga = fieldprop::advanced(&d, dd2, s, same).unwrap().value;
                let oa = rich(&d, dd2, s, same, true);
                assert!(
                    (ga - oa).norm() <= 1e-6 * scale,
                    "GA {s:?} same={same}: {ga} vs {oa}"
                );
                let sym = fieldprop::symmetric(&d, dd2, s, same).unwrap().value;
                assert!(
                    (sym - (o + oa)).norm() <= 2e-6 * scale,
                    "Δ {s:?} same={same}: {sym} vs {}",
                    o + oa
                );
                let gf = fieldprop::feynman(&d, dd2, s, same).unwrap().value;
                let of = oracle::feynman_2d(&d, dd2, s, same, 600).unwrap();
                assert!(rel(gf, of) <= 1e-5, "GF {s:?} same={same}: {gf} vs {of}");
            }
        }
    }
    println!(
        "criterion 04 (propagator oracle equivalence): PASS \
         (worst 1D rel {worst_1d:.2e}, worst 2D rel {worst_2d:.2e})"
    );
}

#[test]
fn criterion_05_harvesting_ratio_identities() {
    for &t in &[0.01, 0.05, 0.1, 0.3, 0.5, 1.0] {
        for &alpha in &[0.01, 0.1, 1.0, 10.0, 100.0] {
            let d = DetectorParams::qutrit(1.2, t, alpha, 1e-4);
            let sym = fieldprop::symmetric(&d, &d, SignPair::PP, true).unwrap().value;
            let had = fieldprop::hadamard(&d, &d, SignPair::PP, true).unwrap().value;
            let ratio = sym.norm() / had.norm();
            let expect = t * alpha.sqrt();
            assert!(
                (ratio - expect).abs() <= 1e-10 * expect,
                "T={t} α={alpha}: {ratio} vs {expect}"
            );
        }
    }
    for &l in &[0.5, 1.0, 2.0] {
        let d = DetectorParams::qutrit(1.0, 1.0, 1.0, 1e-4).at_time(l);
        let d2 = DetectorParams::qutrit(1.0, 1.0, 1.0, 1e-4).at_position([l, 0.0, 0.0]);
        let sym = fieldprop::symmetric(&d, &d2, SignPair::PP, false).unwrap().value;
        let had = fieldprop::hadamard(&d, &d2, SignPair::PP, false).unwrap().value;
        let ratio = sym.norm() / had.norm();
        let erf = erf_c(Complex64::new(l, 0.0)).unwrap().norm();
        let erfi = erfi_c(Complex64::new(l, 0.0)).unwrap().norm();
        let expect = (l * l).exp() * erf / erfi;
        assert!(
            (ratio - expect).abs() <= 1e-8 * expect,
            "L={l}: {ratio} vs {expect}"
        );
    }
    println!("criterion 05 (harvesting-ratio identities): PASS");
}

#[test]
fn criterion_06_lp_correctness() {
    // All 32 deterministic models: CF exactly zero.
    for g in 0..32 {
        let model = deterministic_model(5, &PENTAGRAM_CONTEXTS, g);
        assert_eq!(contextual_fraction(&model).unwrap(), 0.0, "assignment {g}");
    }
    // Strong contextuality of the anti-correlated odd cycle.
    let cf = contextual_fraction(&anticorrelated_cycle_model(5, &PENTAGRAM_CONTEXTS)).unwrap();
    assert!((cf - 1.0).abs() <= 1e-12, "odd cycle CF {cf}");

    // 100 random valid models against the exact rational oracle, with dual
    // certificates on every solve and NV <= CF throughout.
    let scen = build_pentagram(PentagramSet::Set1).unwrap();
    let m = incidence(&PENTAGRAM_CONTEXTS, 5);
    let mut rng = StdRng::seed_from_u64(20260808);
    for trial in 0..100 {
        let model = random_valid_model(&mut rng, &scen, trial);
        let v = vectorize(&model);
        let sol = solve_ncf(&m, &v).unwrap();
        assert!(sol.duality_gap <= 1e-9, "trial {trial}: gap {:e}", sol.duality_gap);
        let exact = common::exact_ncf(&m, &v);
        assert!(
            (sol.objective_value - exact).abs() <= 1e-9,
            "trial {trial}: {} vs exact {}",
            sol.objective_value,
            exact
        );
        let cf = 1.0 - sol.objective_value;
        let nv = normalized_violation(&model, &scen).unwrap();
        assert!(nv <= cf + 1e-9, "trial {trial}: NV {nv} > CF {cf}");
    }
    println!("criterion 06 (LP correctness vs exact oracle): PASS");
}

fn random_valid_model(
    rng: &mut StdRng,
    scen: &ctxharvest::ctxscen::Scenario,
    trial: usize,
) -> ctxharvest::ctxscen::EmpiricalModel {
    // Quantum states give in-polytope models; mixing with the strongly
    // contextual cycle model explores the full CF range.
    let g = ComplexMatrix::from_fn(3, 3, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let gg = g.mul(&g.adjoint()).unwrap();
    let rho = gg.scale(Complex64::new(1.0 / gg.trace().re, 0.0));
    let base = empirical_model(&rho, scen).unwrap();
    if trial.is_multiple_of(3) {
        return base;
    }
    let mix = rng.gen_range(0.0..1.0);
    let sc = anticorrelated_cycle_model(5, &PENTAGRAM_CONTEXTS);
    let mut rows = base.rows.clone();
    for (r, s) in rows.iter_mut().zip(&sc.rows) {
        for (a, b) in r.iter_mut().zip(s) {
            *a = mix * *a + (1.0 - mix) * b;
        }
    }
    ctxharvest::ctxscen::EmpiricalModel {
        n_measurements: 5,
        contexts: PENTAGRAM_CONTEXTS.to_vec(),
        rows,
    }
}

#[test]
fn criterion_07_state_assembly() {
    let omegas: Vec<f64> = (0..=16).map(|i| i as f64 * 0.25).collect();
    for &omega in &omegas {
        for &t in &[1.0 / 30.0, 0.1, 1.0 / 3.0, 1.0] {
            for &ia in &[1.0f64, 0.1] {
                let alpha = ia.powi(-2);
                let d = DetectorParams::qutrit(omega, t, alpha, 1e-4);
                let sys = UdwSystem::single_qutrit(d.clone()).unwrap();
                let b = assemble_single_qutrit(&sys).unwrap();
                assert!((b.rho.trace().re - 1.0).abs() <= 1e-14);
                assert!(b.rho.trace().im.abs() <= 1e-14);
                assert!(b.rho.hermiticity_deviation() <= 1e-12);

                for &l in &[0.5, 3.0] {
                    let qq = UdwSystem::qubit_qutrit(
                        DetectorParams::qubit(omega, t, alpha, 1e-4),
                        DetectorParams::qutrit(omega, t, alpha, 1e-4)
                            .at_position([l, 0.0, 0.0]),
                    )
                    .unwrap();
                    let joint = assemble_qubit_qutrit(&qq).unwrap();
                    assert!((joint.rho.trace().re - 1.0).abs() <= 1e-14);
                    assert!(joint.rho.hermiticity_deviation() <= 1e-12);

                    let red = reduce_qutrit(&joint).unwrap();
                    let single = assemble_single_qutrit(
                        &UdwSystem::single_qutrit(qq.detectors[1].clone()).unwrap(),
                    )
                    .unwrap();
                    let dev = red.rho.sub(&single.rho).unwrap().max_abs();
                    assert!(dev <= 1e-14, "Ω={omega} T={t} L={l}: {dev:e}");
                }
            }
        }
    }
    println!("criterion 07 (state assembly): PASS");
}

#[test]
fn criterion_08_measure_cross_checks() {
    // Mana route equivalence at 1e-8 across the single-qutrit grid.
    for &omega in &[0.0, 0.5, 1.0, 2.0, 4.0] {
        for &t in &[1.0 / 30.0, 1.0 / 3.0, 1.0] {
            for &ia in &[1.0f64, 0.1] {
                let d = DetectorParams::qutrit(omega, t, ia.powi(-2), 1e-4);
                let sys = UdwSystem::single_qutrit(d.clone()).unwrap();
                let rho = assemble_single_qutrit(&sys).unwrap().rho;
                let op = mana(&rho).unwrap();
                let closed = mana_closed_form(&d).unwrap();
                // 1e-22 is the f64 assembly floor of λ²-scale matrix elements
                // (points where the absolute values cancel exactly give 0).
                assert!(
                    (op - closed).abs() <= 1e-8 * closed.abs() + 1e-22,
                    "Ω={omega} T={t}: {op} vs {closed}"
                );
            }
        }
    }
    // Negativity eigensolver vs closed form at 1e-10, either transpose at 1e-12.
    let shape = BipartiteShape { dim_a: 2, dim_b: 3 };
    for &omega in &[0.0, 0.3, 1.0, 2.0] {
        for &t in &[0.1, 1.0 / 3.0, 1.0] {
            for &l in &[0.5, 3.0] {
                let qq = UdwSystem::qubit_qutrit(
                    DetectorParams::qubit(omega, t, 1.0, 1e-4),
                    DetectorParams::qutrit(omega, t, 1.0, 1e-4).at_position([l, 0.0, 0.0]),
                )
                .unwrap();
                let b = assemble_qubit_qutrit(&qq).unwrap();
                let n_eig = negativity(&b.rho, shape).unwrap();
                let n_closed = negativity_closed(&b.props).unwrap();
                assert!(
                    (n_eig - n_closed).abs() <= 1e-10,
                    "Ω={omega} T={t} L={l}: {n_eig} vs {n_closed}"
                );
                let na = negativity_on(&b.rho, shape, Subsystem::A).unwrap();
                let nb = negativity_on(&b.rho, shape, Subsystem::B).unwrap();
                assert!((na - nb).abs() <= 1e-12);
            }
        }
    }
    // Exact zeros.
    assert_eq!(mana(&ground_state(3)).unwrap(), 0.0);
    let product = ctxharvest::matcore::tensor(&ground_state(2), &ground_state(3));
    assert_eq!(negativity(&product, shape).unwrap(), 0.0);
    println!("criterion 08 (measure cross-checks): PASS");
}

#[test]
fn criterion_09_figure_level_properties() {
    let lambda = 1e-4f64;
    let lam2 = lambda * lambda;

    // figure1: decay past the peak and genuine-flag pattern.
    let rows = run_sweep(&preset("figure1").unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.error.is_none()));
    let peak_dcf = rows.iter().map(|r| r.delta_cf_over_lambda2.abs()).fold(0.0, f64::max);
    let peak_mana = rows.iter().map(|r| r.mana_over_lambda2.abs()).fold(0.0, f64::max);
    for r in &rows {
        if r.omega * r.temporal_width >= 10.0 {
            assert!(
                r.delta_cf_over_lambda2.abs() <= 1e-6 * peak_dcf,
                "ΔCF tail at TΩ = {}",
                r.omega * r.temporal_width
            );
            assert!(
                r.mana_over_lambda2.abs() <= 1e-6 * peak_mana,
                "mana tail at TΩ = {}",
                r.omega * r.temporal_width
            );
        }
        if (r.alpha_invsqrt - 1.0).abs() < 1e-12 && r.genuine {
            assert!(
                r.temporal_width <= 0.1 + 1e-12,
                "genuine flag at T = {} for α^-1/2 = 1",
                r.temporal_width
            );
        }
    }

    // figure2: negativity decay past the peak.
    let rows2 = run_sweep(&preset("figure2").unwrap()).unwrap();
    assert!(rows2.iter().all(|r| r.error.is_none()));
    let peak_neg = rows2
        .iter()
        .filter_map(|r| r.negativity_over_lambda2)
        .fold(0.0, f64::max);
    assert!(peak_neg > 0.0, "figure2 must show some negativity");
    for r in &rows2 {
        if r.omega * r.temporal_width >= 10.0 {
            assert!(
                r.negativity_over_lambda2.unwrap() <= 1e-6 * peak_neg,
                "negativity tail at TΩ = {}",
                r.omega * r.temporal_width
            );
        }
    }

    // Distant pair: the negativity column vanishes.
    let far = SweepConfig {
        setup: Setup::QubitQutrit,
        angle_set: 1,
        omega_grid: GridSpec { min: 0.0, max: 2.0, count: 5 },
        temporal_widths: vec![1.0 / 30.0, 1.0 / 3.0, 1.0],
        alpha_invsqrt: vec![1.0, 0.1],
        separations: vec![50.0],
        lambda,
        tbar: 0.0,
        threshold: 0.1,
        output_path: None,
        threads: 1,
    };
    for r in run_sweep(&far).unwrap() {
        assert!(r.error.is_none(), "{:?}", r.error);
        let n = r.negativity_over_lambda2.unwrap();
        assert!(n <= 1e-12 * lam2, "L = 50 negativity {n:e}");
    }
    println!("criterion 09 (figure-level qualitative reproduction): PASS");
}

#[test]
fn criterion_10_determinism() {
    let cfg = preset("figure1").unwrap();
    let a = rows_to_csv(&run_sweep(&cfg).unwrap());
    let b = rows_to_csv(&run_sweep(&cfg).unwrap());
    assert_eq!(a.as_bytes(), b.as_bytes(), "repeated runs must be byte-identical");

    let dir = std::env::temp_dir().join("ctxharvest_acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let p1 = dir.join("run1.csv");
    let p2 = dir.join("run2.csv");
    ctxharvest::sweep::emit_csv(&run_sweep(&cfg).unwrap(), p1.to_str().unwrap()).unwrap();
    ctxharvest::sweep::emit_csv(&run_sweep(&cfg).unwrap(), p2.to_str().unwrap()).unwrap();
    let f1 = std::fs::read(&p1).unwrap();
    let f2 = std::fs::read(&p2).unwrap();
    assert_eq!(f1, f2);
    std::fs::remove_dir_all(&dir).ok();
    println!("criterion 10 (determinism): PASS");
}
