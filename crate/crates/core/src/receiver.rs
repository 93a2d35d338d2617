//! Receiver side: beam splitter, linear photovoltaic harvester and APD
//! data channel with thermal + shot noise.
//!
//! The PV converter uses a linear fit `η_p·P + P_pth`; nonlinear harvesting
//! models are not covered.

use core::f64::consts::{E, PI};

use crate::constants::{BOLTZMANN, ELECTRON_CHARGE};
use crate::math::log2;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverModel {
    /// Fraction of the beam sent to the PV cell.
    pub mu: f64,
    /// PV slope efficiency.
    pub eta_p: f64,
    /// PV linear-fit intercept (W, usually negative).
    pub p_pth: f64,
    /// APD responsivity (A/W).
    pub nu: f64,
    /// Noise bandwidth (Hz).
    pub b_x: f64,
    /// Background current (A).
    pub i_bg: f64,
    /// Load resistance (Ω).
    pub r_l: f64,
    /// Background temperature (K).
    pub t_bg: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Electron charge (C).
    pub q_e: f64,
}

impl ReceiverModel {
    /// Receiver with the given split ratio and otherwise the reference
    /// PV/APD parameters.
    pub fn reference(mu: f64) -> Self {
        Self {
            mu,
            eta_p: 0.3487,
            p_pth: -1.535,
            nu: 0.6,
            b_x: 811.7e6,
            i_bg: 5100e-6,
            r_l: 10e3,
            t_bg: 300.0,
            k_b: BOLTZMANN,
            q_e: ELECTRON_CHARGE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::invalid("mu", self.mu, "split ratio must lie in [0, 1]"));
        }
        for (name, v) in [
            ("nu", self.nu),
            ("b_x", self.b_x),
            ("r_l", self.r_l),
            ("t_bg", self.t_bg),
            ("k_b", self.k_b),
            ("q_e", self.q_e),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, v, "must be finite and > 0"));
            }
        }
        if !(self.i_bg >= 0.0) {
            return Err(Error::invalid("i_bg", self.i_bg, "must be >= 0"));
        }
        if !self.eta_p.is_finite() || !self.p_pth.is_finite() {
            return Err(Error::invalid("eta_p", self.eta_p, "PV fit must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SwiptResult {
    /// Beam power routed to the PV cell (W).
    pub p_pv_in: f64,
    /// Beam power routed to the APD (W).
    pub p_apd_in: f64,
    /// Linear-fit electrical output, possibly negative (W).
    pub p_e_out_raw: f64,
    /// Delivered electrical power, clamped at zero (W).
    pub p_e_out: f64,
    /// End-to-end efficiency from the raw output.
    pub eta_e: f64,
    /// APD photocurrent (A).
    pub i_d: f64,
    pub n_thermal_sq: f64,
    pub n_shot_sq: f64,
    pub n_total_sq: f64,
    /// Spectral efficiency (bit/s/Hz).
    pub c_tilde: f64,
}

/// `(μ·P, (1−μ)·P)`, with the two shares summing back to `p_beam` exactly
/// in floating point.
///
/// The larger share is taken first and the smaller one recovered as the
/// difference; that subtraction is exact because the operands are within a
/// factor of two of each other.
pub fn split_beam(p_beam: f64, mu: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::invalid("mu", mu, "split ratio must lie in [0, 1]"));
    }
    if !(p_beam >= 0.0) || !p_beam.is_finite() {
        return Err(Error::invalid("p_beam", p_beam, "must be finite and >= 0"));
    }
    let p_pv = mu * p_beam;
    if p_pv >= 0.5 * p_beam {
        Ok((p_pv, p_beam - p_pv))
    } else {
        let p_apd = p_beam - p_pv;
        Ok((p_beam - p_apd, p_apd))
    }
}

/// `(raw, clamped)` with `raw = η_p·P_pv + P_pth`.
pub fn pv_output(p_pv: f64, eta_p: f64, p_pth: f64) -> (f64, f64) {
    let raw = eta_p * p_pv + p_pth;
    (raw, raw.max(0.0))
}

/// `η_E = (η_p·P_pv + P_pth)/P_in`, unclamped.
pub fn end_to_end_efficiency(p_pv: f64, p_in: f64, eta_p: f64, p_pth: f64) -> Result<f64> {
    if !(p_in > 0.0) {
        return Err(Error::invalid("p_in", p_in, "must be > 0"));
    }
    Ok((eta_p * p_pv + p_pth) / p_in)
}

pub fn apd_current(p_apd: f64, nu: f64) -> f64 {
    nu * p_apd
}

/// `4kTB/R_L` with the reference Boltzmann constant.
pub fn thermal_noise_sq(t: f64, b_x: f64, r_l: f64) -> f64 {
    thermal_noise_sq_with(BOLTZMANN, t, b_x, r_l)
}

pub fn thermal_noise_sq_with(k_b: f64, t: f64, b_x: f64, r_l: f64) -> f64 {
    4.0 * k_b * t * b_x / r_l
}

/// `2q(I_D + I_bg)B` with the reference electron charge.
pub fn shot_noise_sq(i_d: f64, i_bg: f64, b_x: f64) -> f64 {
    shot_noise_sq_with(ELECTRON_CHARGE, i_d, i_bg, b_x)
}

pub fn shot_noise_sq_with(q_e: f64, i_d: f64, i_bg: f64, b_x: f64) -> f64 {
    2.0 * q_e * (i_d + i_bg) * b_x
}

/// `½·log₂(1 + I_D² / (2πe·N²))`, `e` being Euler's number.
pub fn spectral_efficiency(i_d: f64, n_total_sq: f64) -> Result<f64> {
    if !(n_total_sq > 0.0) {
        return Err(Error::invalid("noise power", n_total_sq, "must be > 0"));
    }
    Ok(0.5 * log2(1.0 + i_d * i_d / (2.0 * PI * E * n_total_sq)))
}

/// Runs the receiver chain for one delivered beam power.
pub fn evaluate_swipt(rm: &ReceiverModel, p_beam: f64, p_in: f64) -> Result<SwiptResult> {
    rm.validate()?;
    let (p_pv_in, p_apd_in) = split_beam(p_beam, rm.mu)?;
    let (p_e_out_raw, p_e_out) = pv_output(p_pv_in, rm.eta_p, rm.p_pth);
    let eta_e = end_to_end_efficiency(p_pv_in, p_in, rm.eta_p, rm.p_pth)?;
    let i_d = apd_current(p_apd_in, rm.nu);
    let n_thermal_sq = thermal_noise_sq_with(rm.k_b, rm.t_bg, rm.b_x, rm.r_l);
    let n_shot_sq = shot_noise_sq_with(rm.q_e, i_d, rm.i_bg, rm.b_x);
    let n_total_sq = n_shot_sq + n_thermal_sq;
    let c_tilde = spectral_efficiency(i_d, n_total_sq)?;
    Ok(SwiptResult {
        p_pv_in,
        p_apd_in,
        p_e_out_raw,
        p_e_out,
        eta_e,
        i_d,
        n_thermal_sq,
        n_shot_sq,
        n_total_sq,
        c_tilde,
    })
}
