//! Perturbative final detector states: the single-qutrit and qubit-qutrit
//! density matrices to second order in the couplings, assembled from smeared
//! propagator values.
//!
//! Matrix elements follow the ladder-operator pairing of the Dyson expansion,
//! `Ĵ_p ρ₀ Ĵ_q · W(Λ^q_{d'}, Λ^p_d)`: the excitation populations carry
//! `W(Λ⁻, Λ⁺)` (which decays as e^{-(ΩT)²/2}/Ω² for large gaps, as a vacuum
//! excitation must), the two-step coherences carry the forward time-ordered
//! `W_Δt(Λ⁺, Λ⁺)`, and the cross-detector coherence carries the Feynman
//! propagator.

use crate::fieldprop::{self, DetectorParams, FieldError, SignPair, TimeOrder};
use crate::matcore::ComplexMatrix;
use crate::numkernel::Complex64;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, thiserror::Error)]
pub enum StateError {
    #[error("invalid system: {0}")]
    InvalidSystem(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("propagator inconsistency: {0}")]
    Inconsistent(String),
}

/// One or two detectors; for two, the first is the qubit.
#[derive(Debug, Clone)]
pub struct UdwSystem {
    pub detectors: Vec<DetectorParams>,
    /// Strong-support constant η (validity window |t - t̄| < ηT).
    pub eta: f64,
}

impl UdwSystem {
    pub fn single_qutrit(detector: DetectorParams) -> Result<Self, StateError> {
        let sys = UdwSystem {
            detectors: vec![detector],
            eta: fieldprop::DEFAULT_ETA,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn qubit_qutrit(qubit: DetectorParams, qutrit: DetectorParams) -> Result<Self, StateError> {
        let sys = UdwSystem {
            detectors: vec![qubit, qutrit],
            eta: fieldprop::DEFAULT_ETA,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// Equal-parameter qubit-qutrit preset with λ₁ = √2 λ₂, the point where
    /// the closed negativity reduces to its simplified form.
    pub fn sqrt2_coupling_preset(
        omega: f64,
        temporal_width: f64,
        alpha: f64,
        separation: f64,
        lambda2: f64,
    ) -> Result<Self, StateError> {
        let qubit = DetectorParams::qubit(omega, temporal_width, alpha, SQRT_2 * lambda2);
        let qutrit = DetectorParams::qutrit(omega, temporal_width, alpha, lambda2)
            .at_position([separation, 0.0, 0.0]);
        Self::qubit_qutrit(qubit, qutrit)
    }

    pub fn validate(&self) -> Result<(), StateError> {
        match self.detectors.len() {
            1 => {
                if self.detectors[0].dim != 3 {
                    return Err(StateError::InvalidSystem("single detector must be a qutrit"));
                }
            }
            2 => {
                if self.detectors[0].dim != 2 || self.detectors[1].dim != 3 {
                    return Err(StateError::InvalidSystem(
                        "two-detector systems must be (qubit, qutrit)",
                    ));
                }
            }
            _ => return Err(StateError::InvalidSystem("one or two detectors supported")),
        }
        for d in &self.detectors {
            d.validate()?;
        }
        Ok(())
    }

    /// Physical-validity warnings (never fatal).
    pub fn warnings(&self) -> Vec<String> {
        self.detectors
            .iter()
            .filter_map(|d| fieldprop::strong_support_warning_with_eta(d, self.eta))
            .collect()
    }
}

/// The propagator scalars entering a state, with coupling factors applied.
///
/// Index 1 is the first detector (the qubit when two are present), 2 the
/// second; cross entries are `None` for single-detector states.
#[derive(Debug, Clone, Default)]
pub struct PropagatorSet {
    /// λ²W(Λ⁻₁, Λ⁺₁) — excitation weight of detector 1.
    pub w_pm_11: Complex64,
    /// λ²W(Λ⁻₂, Λ⁺₂).
    pub w_pm_22: Option<Complex64>,
    /// λ₁λ₂ W(Λ⁻₁, Λ⁺₂).
    pub w_pm_12: Option<Complex64>,
    /// λ₂λ₁ W(Λ⁻₂, Λ⁺₁).
    pub w_pm_21: Option<Complex64>,
    /// λ² W_Δt(Λ⁺₁, Λ⁺₁).
    pub wbar_pp_11: Complex64,
    /// λ² W_Δt(Λ⁺₂, Λ⁺₂).
    pub wbar_pp_22: Option<Complex64>,
    /// λ₁λ₂ G_F(Λ⁺₁, Λ⁺₂).
    pub gf_pp_12: Option<Complex64>,
}

impl PropagatorSet {
    /// r₄₆ = -2 W̄⁺⁺₂₂.
    pub fn r46(&self) -> Option<Complex64> {
        self.wbar_pp_22.map(|w| -2.0 * w)
    }

    /// r₆₂ = -√2 (G_F⁺⁺₁₂)*.
    pub fn r62(&self) -> Option<Complex64> {
        self.gf_pp_12.map(|g| -SQRT_2 * g.conj())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateOrder {
    Initial,
    SecondOrder,
}

#[derive(Debug, Clone)]
pub struct StateBundle {
    pub rho: ComplexMatrix,
    pub order: StateOrder,
    pub props: PropagatorSet,
}

fn check_population(name: &str, v: Complex64) -> Result<f64, StateError> {
    if v.im.abs() > 1e-12 * v.norm().max(1.0) {
        return Err(StateError::Inconsistent(format!(
            "{name} should be real, got {v}"
        )));
    }
    if v.re < -1e-15 {
        return Err(StateError::Inconsistent(format!(
            "{name} should be non-negative, got {v}"
        )));
    }
    Ok(v.re)
}

/// Final single-qutrit state:
/// ρ₂₂ = 2W⁺⁻₁₁, ρ₁₃ = -2W̄⁺⁺₁₁, ρ₃₃ = 1 - 2W⁺⁻₁₁, everything else zero.
pub fn assemble_single_qutrit(sys: &UdwSystem) -> Result<StateBundle, StateError> {
    sys.validate()?;
    if sys.detectors.len() != 1 {
        return Err(StateError::InvalidSystem("expected one detector"));
    }
    let d = &sys.detectors[0];
    let lam2 = d.coupling * d.coupling;

    let (a, b) = if d.coupling == 0.0 {
        (Complex64::default(), Complex64::default())
    } else {
        let w_mp = fieldprop::wightman(d, d, SignPair::MP, true)?.value;
        let wbar = fieldprop::wightman_ordered(TimeOrder::Fwd, d, d, SignPair::PP, true)?.value;
        (lam2 * w_mp, lam2 * wbar)
    };
    let pop = check_population("W⁺⁻₁₁", a)?;

    let mut rho = ComplexMatrix::zeros(3, 3);
    rho[(1, 1)] = Complex64::new(2.0 * pop, 0.0);
    rho[(2, 2)] = Complex64::new(1.0 - 2.0 * pop, 0.0);
    rho[(0, 2)] = -2.0 * b;
    rho[(2, 0)] = (-2.0 * b).conj();

    Ok(StateBundle {
        rho,
        order: StateOrder::SecondOrder,
        props: PropagatorSet {
            w_pm_11: a,
            wbar_pp_11: b,
            ..PropagatorSet::default()
        },
    })
}

/// Final qubit-qutrit state in the basis
/// {|½,1⟩, |½,0⟩, |½,-1⟩, |-½,1⟩, |-½,0⟩, |-½,-1⟩}.
pub fn assemble_qubit_qutrit(sys: &UdwSystem) -> Result<StateBundle, StateError> {
    sys.validate()?;
    if sys.detectors.len() != 2 {
        return Err(StateError::InvalidSystem("expected two detectors"));
    }
    let (d1, d2) = (&sys.detectors[0], &sys.detectors[1]);
    let (l1, l2) = (d1.coupling, d2.coupling);

    let props = if l1 == 0.0 && l2 == 0.0 {
        PropagatorSet {
            w_pm_22: Some(Complex64::default()),
            w_pm_12: Some(Complex64::default()),
            w_pm_21: Some(Complex64::default()),
            wbar_pp_22: Some(Complex64::default()),
            gf_pp_12: Some(Complex64::default()),
            ..PropagatorSet::default()
        }
    } else {
        let a1 = l1 * l1 * fieldprop::wightman(d1, d1, SignPair::MP, true)?.value;
        let a2 = l2 * l2 * fieldprop::wightman(d2, d2, SignPair::MP, true)?.value;
        let x12 = l1 * l2 * fieldprop::wightman(d1, d2, SignPair::MP, false)?.value;
        let x21 = l2 * l1 * fieldprop::wightman(d2, d1, SignPair::MP, false)?.value;
        let b2 =
            l2 * l2 * fieldprop::wightman_ordered(TimeOrder::Fwd, d2, d2, SignPair::PP, true)?.value;
        let gf = l1 * l2 * fieldprop::feynman(d1, d2, SignPair::PP, false)?.value;
        PropagatorSet {
            w_pm_11: a1,
            w_pm_22: Some(a2),
            w_pm_12: Some(x12),
            w_pm_21: Some(x21),
            wbar_pp_11: Complex64::default(),
            wbar_pp_22: Some(b2),
            gf_pp_12: Some(gf),
        }
    };

    // Hermiticity demands W⁺⁻₁₂ = (W⁺⁻₂₁)*; a violation is a propagator bug.
    let x12 = props.w_pm_12.unwrap();
    let x21 = props.w_pm_21.unwrap();
    let dev = (x12 - x21.conj()).norm();
    if dev > 1e-10 * x12.norm().max(1e-30) {
        return Err(StateError::Inconsistent(format!(
            "W⁺⁻₁₂ = {x12} vs (W⁺⁻₂₁)* = {}, deviation {dev:e}",
            x21.conj()
        )));
    }

    let a1 = check_population("W⁺⁻₁₁", props.w_pm_11)?;
    let a2 = check_population("W⁺⁻₂₂", props.w_pm_22.unwrap())?;
    let r46 = props.r46().unwrap();
    let r62 = props.r62().unwrap();

    let mut rho = ComplexMatrix::zeros(6, 6);
    rho[(2, 2)] = Complex64::new(a1, 0.0);
    rho[(4, 4)] = Complex64::new(2.0 * a2, 0.0);
    rho[(2, 4)] = SQRT_2 * x21;
    rho[(4, 2)] = SQRT_2 * x12;
    rho[(3, 5)] = r46;
    rho[(5, 3)] = r46.conj();
    rho[(1, 5)] = r62.conj();
    rho[(5, 1)] = r62;
    rho[(5, 5)] = Complex64::new(1.0 - a1 - 2.0 * a2, 0.0);

    Ok(StateBundle {
        rho,
        order: StateOrder::SecondOrder,
        props,
    })
}

/// Partial trace of the qubit-qutrit state over the qubit; reduces to the
/// single-qutrit form with the second detector's scalars.
pub fn reduce_qutrit(bundle: &StateBundle) -> Result<StateBundle, StateError> {
    if bundle.rho.rows() != 6 {
        return Err(StateError::InvalidSystem("expected a 6x6 qubit-qutrit state"));
    }
    let mut rho = ComplexMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            rho[(i, j)] = bundle.rho[(i, j)] + bundle.rho[(3 + i, 3 + j)];
        }
    }
    Ok(StateBundle {
        rho,
        order: bundle.order,
        props: PropagatorSet {
            w_pm_11: bundle.props.w_pm_22.unwrap_or_default(),
            wbar_pp_11: bundle.props.wbar_pp_22.unwrap_or_default(),
            ..PropagatorSet::default()
        },
    })
}

/// Ground state of the given dimension (last basis vector).
pub fn ground_state(dim: usize) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(dim, dim);
    rho[(dim - 1, dim - 1)] = Complex64::new(1.0, 0.0);
    rho
}

/// Conjugation by the free evolution `e^{-iH₀Δt}` with `H₀ = Ω(J_z + j·1)`,
/// i.e. diagonal phases `e^{-iE_k Δt}` with `E = {2Ω, Ω, 0}` (qutrit) or
/// `{Ω, 0}` (qubit).
pub fn free_phase_conjugate(rho: &ComplexMatrix, omegas: &[f64], dt: f64) -> ComplexMatrix {
    let levels: Vec<f64> = match omegas.len() {
        1 => {
            assert_eq!(rho.rows(), 3);
            vec![2.0 * omegas[0], omegas[0], 0.0]
        }
        2 => {
            assert_eq!(rho.rows(), 6);
            let qb = [omegas[0], 0.0];
            let qt = [2.0 * omegas[1], omegas[1], 0.0];
            qb.iter().flat_map(|a| qt.iter().map(move |b| a + b)).collect()
        }
        _ => panic!("one or two detectors"),
    };
    ComplexMatrix::from_fn(rho.rows(), rho.cols(), |i, j| {
        let phase = Complex64::new(0.0, -(levels[i] - levels[j]) * dt).exp();
        phase * rho[(i, j)]
    })
}
