use super::{quadratic_form, PropagatorConfig, Support};
use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupKind};
use crate::noncomm::GroupFunction;
use crate::oracle::{exact_evolve_u1, SpectralTruncation};
use crate::scheme::Scheme;

/// Fourier modes kept by the exact evolution.
const ORACLE_MODES: usize = 64;

/// `‖K_ε ψ0 − e^{−iεĤ} ψ0‖ / ε` on U(1), the exact evolution computed
/// spectrally with the `H_q` constant included. The kernel lives on `ψ0`'s grid.
pub fn schrodinger_residual(config: &PropagatorConfig, psi0: &GroupFunction) -> Result<f64> {
    config.validate()?;
    if config.scheme != Scheme::RealTime {
        return Err(Error::InvalidConfig("the Schrödinger residual needs real time".into()));
    }
    let grid = psi0.grid();
    if grid.chart().group().kind() != GroupKind::U1 {
        return Err(Error::UnsupportedGroup(format!("Schrödinger residual on {}", grid.chart().group().kind())));
    }
    let (a, shift) = quadratic_form(&config.hamiltonian.corrected_kinetic)
        .ok_or_else(|| Error::InvalidConfig("kinetic symbol is not a|X|² + b".into()))?;
    if (a - 0.5).abs() > 1e-8 {
        return Err(Error::InvalidConfig(format!("oracle kinetic term is ½X², got {a}X²")));
    }
    let kernel = Kernel::short_time(config, Support::Group(grid.clone()))?;
    let stepped = kernel.apply(psi0.values())?;
    let potential = config.hamiltonian.base.potential.clone();
    let v = potential.as_ref().map(|p| move |theta: f64| p.value(&GroupElement::angle(theta)));
    let v_ref = v.as_ref().map(|f| f as &dyn Fn(f64) -> f64);
    let trunc = SpectralTruncation::new(ORACLE_MODES).with_shift(shift);
    let exact = exact_evolve_u1(grid, psi0.values(), config.epsilon, Scheme::RealTime, v_ref, &trunc)?;
    let err2: f64 = grid.weights().iter().zip(stepped.iter().zip(&exact)).map(|(w, (s, e))| w * (s - e).norm_sqr()).sum();
    Ok(err2.sqrt() / config.epsilon)
}
