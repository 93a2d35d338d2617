//! Semiconductor gain threshold model and received beam power.

use crate::constants::{LIGHT_SPEED, PLANCK};
use crate::math::{exp, ln, powf};
use crate::ray_optics::{self, ResonatorGeometry};
use crate::{Error, Result};

/// Gain-medium constants plus its geometry. SI units throughout.
///
/// The longitudinal confinement factor is used at its tabulated value (2.0)
/// even though confinement factors are conventionally at most one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainModel {
    /// Small-signal gain coefficient (m⁻¹).
    pub g0: f64,
    /// Transparency carrier density (m⁻³).
    pub n0: f64,
    /// Longitudinal confinement factor Γ.
    pub gamma_conf: f64,
    /// Monomolecular recombination (s⁻¹).
    pub alpha: f64,
    /// Bimolecular recombination (m³/s).
    pub beta: f64,
    /// Auger recombination (m⁶/s).
    pub auger: f64,
    /// Effective gain layer thickness (m).
    pub l: f64,
    /// Effective active cross-section (m²).
    pub a_s: f64,
    /// Gain medium radius (m).
    pub a: f64,
}

impl GainModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g0", self.g0),
            ("n0", self.n0),
            ("gamma_conf", self.gamma_conf),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("auger", self.auger),
            ("l", self.l),
            ("a_s", self.a_s),
            ("a", self.a),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, v, "gain parameter must be finite and > 0"));
            }
        }
        Ok(())
    }
}

/// Pump diode parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpModel {
    /// Electro-optical conversion efficiency.
    pub eta_pc: f64,
    /// Absorption efficiency in the gain medium.
    pub eta_pa: f64,
    /// Pump wavelength (m).
    pub lambda_pump: f64,
}

impl PumpModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta_pc", self.eta_pc), ("eta_pa", self.eta_pa)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(name, v, "efficiency must lie in (0, 1]"));
            }
        }
        if !(self.lambda_pump > 0.0) || !self.lambda_pump.is_finite() {
            return Err(Error::invalid("lambda_pump", self.lambda_pump, "must be > 0"));
        }
        Ok(())
    }

    /// Product `η_pc · η_pa`.
    pub fn efficiency(&self) -> f64 {
        self.eta_pc * self.eta_pa
    }
}

/// Round-trip loss factors; `v = vc · vd`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossModel {
    pub vc: f64,
    pub vd: f64,
    pub v: f64,
}

impl LossModel {
    pub fn new(vc: f64, vd: f64) -> Result<Self> {
        for (name, v) in [("vc", vc), ("vd", vd)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(name, v, "loss factor must lie in (0, 1]"));
            }
        }
        Ok(Self { vc, vd, v: vc * vd })
    }
}

/// Which power of the loss factor enters the slope-efficiency logarithm.
///
/// The slope-efficiency expression carries `ln(R1·R2·V)` while the
/// saturation condition carries `V²`; both are offered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlopeLossExponent {
    /// `ln(R1·R2·V)`.
    #[default]
    Single,
    /// `ln(R1·R2·V²)`.
    Squared,
}

impl SlopeLossExponent {
    pub fn from_power(power: u32) -> Option<Self> {
        match power {
            1 => Some(Self::Single),
            2 => Some(Self::Squared),
            _ => None,
        }
    }

    pub fn power(self) -> u32 {
        match self {
            Self::Single => 1,
            Self::Squared => 2,
        }
    }
}

/// Output of the power model for one cavity and one input power.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerResult {
    /// Beam spot radius on the gain (m).
    pub spot_radius: f64,
    pub loss: LossModel,
    /// Saturation gain (m⁻¹).
    pub g_sat: f64,
    /// Threshold carrier density (m⁻³).
    pub n_th: f64,
    /// Carrier lifetime at threshold (s).
    pub tau: f64,
    /// Threshold power (W).
    pub p_th: f64,
    /// Slope efficiency.
    pub eta_s: f64,
    /// Beam power delivered through M2 (W).
    pub p_beam: f64,
    /// Beam transmission efficiency `p_beam / p_in`.
    pub eta_b: f64,
}

fn round_trip_survival(r1: f64, r2: f64, v: f64) -> Result<f64> {
    for (name, x) in [("r1", r1), ("r2", r2), ("v", v)] {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::invalid(name, x, "must lie in (0, 1]"));
        }
    }
    Ok(r1 * r2 * v * v)
}

/// Gain coefficient balancing one round trip: `g = −ln(R1·R2·V²) / (2Γl)`.
pub fn saturation_gain(r1: f64, r2: f64, v: f64, l: f64, gamma_conf: f64) -> Result<f64> {
    let survival = round_trip_survival(r1, r2, v)?;
    if !(l > 0.0) {
        return Err(Error::invalid("l", l, "must be > 0"));
    }
    if !(gamma_conf > 0.0) {
        return Err(Error::invalid("gamma_conf", gamma_conf, "must be > 0"));
    }
    Ok(-ln(survival) / (2.0 * gamma_conf * l))
}

/// `N_th = N0 · (R1·R2·V²)^(−1/(2·g0·l·Γ))`.
pub fn threshold_carrier_density(gm: &GainModel, r1: f64, r2: f64, v: f64) -> Result<f64> {
    let survival = round_trip_survival(r1, r2, v)?;
    gm.validate()?;
    Ok(gm.n0 * powf(survival, -1.0 / (2.0 * gm.g0 * gm.l * gm.gamma_conf)))
}

/// `τ = 1 / (α + β·n + γ·n²)`.
pub fn carrier_lifetime(n: f64, gm: &GainModel) -> Result<f64> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::invalid("carrier density", n, "must be finite and >= 0"));
    }
    Ok(1.0 / (gm.alpha + gm.beta * n + gm.auger * n * n))
}

/// `P_th = A_s·h·c·l·N_th / (λ_beam·η_pc·η_pa·τ)`.
pub fn threshold_power(
    gm: &GainModel,
    pm: &PumpModel,
    n_th: f64,
    tau: f64,
    lambda_beam: f64,
) -> Result<f64> {
    pm.validate()?;
    if !(tau > 0.0) {
        return Err(Error::invalid("tau", tau, "must be > 0"));
    }
    if !(lambda_beam > 0.0) {
        return Err(Error::invalid("lambda_beam", lambda_beam, "must be > 0"));
    }
    if !(n_th >= 0.0) {
        return Err(Error::invalid("n_th", n_th, "must be >= 0"));
    }
    Ok(gm.a_s * PLANCK * LIGHT_SPEED * gm.l * n_th / (lambda_beam * pm.efficiency() * tau))
}

/// `η_s = η_pc·η_pa·(λ_pump/λ_beam)·ln(R2)/ln(R1·R2·V)` (or `V²`).
pub fn slope_efficiency(
    pm: &PumpModel,
    r1: f64,
    r2: f64,
    v: f64,
    lambda_beam: f64,
    exponent: SlopeLossExponent,
) -> Result<f64> {
    pm.validate()?;
    for (name, x) in [("r1", r1), ("r2", r2), ("v", v)] {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::invalid(name, x, "must lie in (0, 1]"));
        }
    }
    let survival = match exponent {
        SlopeLossExponent::Single => r1 * r2 * v,
        SlopeLossExponent::Squared => r1 * r2 * v * v,
    };
    if survival >= 1.0 {
        return Err(Error::invalid("r1·r2·v", survival, "cavity must have net loss"));
    }
    if !(lambda_beam > 0.0) {
        return Err(Error::invalid("lambda_beam", lambda_beam, "must be > 0"));
    }
    Ok(pm.efficiency() * (pm.lambda_pump / lambda_beam) * ln(r2) / ln(survival))
}

/// `max(0, (P_in − P_th)·η_s)`.
pub fn beam_power(p_in: f64, p_th: f64, eta_s: f64) -> f64 {
    ((p_in - p_th) * eta_s).max(0.0)
}

/// `η_b = η_s·(1 − P_th/P_in)`, clamped at zero below threshold.
pub fn transmission_efficiency(p_in: f64, p_th: f64, eta_s: f64) -> Result<f64> {
    if !(p_in > 0.0) {
        return Err(Error::invalid("p_in", p_in, "must be > 0"));
    }
    Ok((eta_s * (1.0 - p_th / p_in)).max(0.0))
}

/// Evaluates the full power chain with the slope-efficiency loss term as
/// printed (single power of `V`).
pub fn evaluate_link(
    geometry: &ResonatorGeometry,
    gain: &GainModel,
    pump: &PumpModel,
    vc: f64,
    p_in: f64,
) -> Result<PowerResult> {
    evaluate_link_with(geometry, gain, pump, vc, p_in, SlopeLossExponent::Single)
}

/// `ω_g → V_d → V → g → N_th → τ → P_th, η_s → P_beam, η_b`.
///
/// A degenerate zero-size mode is passed through with `V_d = 1`.
pub fn evaluate_link_with(
    geometry: &ResonatorGeometry,
    gain: &GainModel,
    pump: &PumpModel,
    vc: f64,
    p_in: f64,
    exponent: SlopeLossExponent,
) -> Result<PowerResult> {
    gain.validate()?;
    pump.validate()?;
    if !(p_in >= 0.0) || !p_in.is_finite() {
        return Err(Error::invalid("p_in", p_in, "must be finite and >= 0"));
    }
    let cavity = ray_optics::one_trip_matrix(geometry)?;
    let spot_radius = ray_optics::spot_radius_on_gain(&cavity, geometry.lambda_beam)?;
    let vd = if ray_optics::is_degenerate_mode(spot_radius) {
        1.0
    } else {
        ray_optics::diffraction_survival(gain.a, spot_radius)?
    };
    // An aperture far smaller than the mode leaves vd at zero.
    if vd <= 0.0 {
        return Err(Error::invalid("vd", vd, "mode does not overlap the gain"));
    }
    let loss = LossModel::new(vc, vd)?;
    let (r1, r2) = (geometry.r1, geometry.r2);

    let g_sat = saturation_gain(r1, r2, loss.v, gain.l, gain.gamma_conf)?;
    let n_th = threshold_carrier_density(gain, r1, r2, loss.v)?;
    let tau = carrier_lifetime(n_th, gain)?;
    let p_th = threshold_power(gain, pump, n_th, tau, geometry.lambda_beam)?;
    let eta_s = slope_efficiency(pump, r1, r2, loss.v, geometry.lambda_beam, exponent)?;
    let p_beam = beam_power(p_in, p_th, eta_s);
    let eta_b = if p_in > 0.0 {
        transmission_efficiency(p_in, p_th, eta_s)?
    } else {
        0.0
    };
    Ok(PowerResult {
        spot_radius,
        loss,
        g_sat,
        n_th,
        tau,
        p_th,
        eta_s,
        p_beam,
        eta_b,
    })
}

/// `exp(g/g0)` route to the threshold density, kept alongside the closed
/// form so both can be cross-checked.
pub fn threshold_carrier_density_from_gain(gm: &GainModel, g_sat: f64) -> f64 {
    gm.n0 * exp(g_sat / gm.g0)
}
