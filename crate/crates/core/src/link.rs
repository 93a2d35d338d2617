//! The composed link: cavity optics → gain/power model → receiver.

use core::fmt;
use core::str::FromStr;

use crate::gain_power::{self, GainModel, PowerResult, PumpModel, SlopeLossExponent};
use crate::params::Parameter;
use crate::ray_optics::{self, ResonatorGeometry};
use crate::receiver::{self, ReceiverModel, SwiptResult};
use crate::{Error, Result};

/// Every input of one link evaluation, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    pub geometry: ResonatorGeometry,
    /// Keep `lt = f1 + f2` whenever a focal length changes.
    pub afocal_tim: bool,
    pub gain: GainModel,
    pub pump: PumpModel,
    /// Electrical input power (W).
    pub p_in: f64,
    /// Constant round-trip loss factor `V_c`.
    pub vc: f64,
    pub slope_loss_exponent: SlopeLossExponent,
    pub receiver: ReceiverModel,
}

impl LinkModel {
    /// Reference parameter set: 980 nm GaAsP quantum-well gain 20 mm from
    /// M1, TIM 20 mm from the gain with a −5 mm L1, 10 m link.
    ///
    /// Assumed values: TIM compression 6, `fr2` = 12 m, and the high-power
    /// operating point `R2` = 0.71, `l` = 1 µm.
    pub fn paper_2022() -> Self {
        let mut geometry = ResonatorGeometry {
            d1: 20e-3,
            d2: 20e-3,
            d3: 10.0,
            lt: 0.0,
            f1: -5e-3,
            f2: 5e-3,
            fr1: f64::INFINITY,
            fr2: 12.0,
            r1: 0.999,
            r2: 0.71,
            lambda_beam: 980e-9,
        };
        geometry.set_compression(6.0, true);
        Self {
            geometry,
            afocal_tim: true,
            gain: GainModel {
                g0: 2e5,
                n0: 1.7e24,
                gamma_conf: 2.0,
                alpha: 1e7,
                beta: 1e-16,
                auger: 6e-42,
                l: 1.0e-6,
                a_s: 3e-8,
                a: 0.2e-3,
            },
            pump: PumpModel {
                eta_pc: 0.6,
                eta_pa: 0.85,
                lambda_pump: 808e-9,
            },
            p_in: 150.0,
            vc: 0.99,
            slope_loss_exponent: SlopeLossExponent::Single,
            receiver: ReceiverModel::reference(0.99),
        }
    }

    pub fn get(&self, p: Parameter) -> f64 {
        let g = &self.geometry;
        let gm = &self.gain;
        let rx = &self.receiver;
        match p {
            Parameter::D1 => g.d1,
            Parameter::D2 => g.d2,
            Parameter::D3 => g.d3,
            Parameter::Lt => g.lt,
            Parameter::F1 => g.f1,
            Parameter::F2 => g.f2,
            Parameter::Compression => g.compression(),
            Parameter::Fr1 => g.fr1,
            Parameter::Fr2 => g.fr2,
            Parameter::R1 => g.r1,
            Parameter::R2 => g.r2,
            Parameter::LambdaBeam => g.lambda_beam,
            Parameter::G0 => gm.g0,
            Parameter::N0 => gm.n0,
            Parameter::GammaConf => gm.gamma_conf,
            Parameter::Alpha => gm.alpha,
            Parameter::Beta => gm.beta,
            Parameter::Auger => gm.auger,
            Parameter::L => gm.l,
            Parameter::As => gm.a_s,
            Parameter::A => gm.a,
            Parameter::EtaPc => self.pump.eta_pc,
            Parameter::EtaPa => self.pump.eta_pa,
            Parameter::LambdaPump => self.pump.lambda_pump,
            Parameter::PIn => self.p_in,
            Parameter::Vc => self.vc,
            Parameter::Mu => rx.mu,
            Parameter::EtaP => rx.eta_p,
            Parameter::PPth => rx.p_pth,
            Parameter::Nu => rx.nu,
            Parameter::Bx => rx.b_x,
            Parameter::IBg => rx.i_bg,
            Parameter::RL => rx.r_l,
            Parameter::TBg => rx.t_bg,
            Parameter::KB => rx.k_b,
            Parameter::QE => rx.q_e,
        }
    }

    /// Sets one parameter. Only NaN is rejected here; domain checks happen
    /// when the model is evaluated so sweeps can record failures per point.
    ///
    /// Setting `lt` explicitly switches off the afocal coupling.
    pub fn set(&mut self, p: Parameter, value: f64) -> Result<()> {
        if value.is_nan() {
            return Err(Error::invalid(p.key(), value, "must not be NaN"));
        }
        let afocal = self.afocal_tim;
        let g = &mut self.geometry;
        match p {
            Parameter::D1 => g.d1 = value,
            Parameter::D2 => g.d2 = value,
            Parameter::D3 => g.d3 = value,
            Parameter::Lt => {
                g.lt = value;
                self.afocal_tim = false;
            }
            Parameter::F1 => {
                g.f1 = value;
                if afocal {
                    g.lt = g.f1 + g.f2;
                }
            }
            Parameter::F2 => {
                g.f2 = value;
                if afocal {
                    g.lt = g.f1 + g.f2;
                }
            }
            Parameter::Compression => g.set_compression(value, afocal),
            Parameter::Fr1 => g.fr1 = value,
            Parameter::Fr2 => g.fr2 = value,
            Parameter::R1 => g.r1 = value,
            Parameter::R2 => g.r2 = value,
            Parameter::LambdaBeam => g.lambda_beam = value,
            Parameter::G0 => self.gain.g0 = value,
            Parameter::N0 => self.gain.n0 = value,
            Parameter::GammaConf => self.gain.gamma_conf = value,
            Parameter::Alpha => self.gain.alpha = value,
            Parameter::Beta => self.gain.beta = value,
            Parameter::Auger => self.gain.auger = value,
            Parameter::L => self.gain.l = value,
            Parameter::As => self.gain.a_s = value,
            Parameter::A => self.gain.a = value,
            Parameter::EtaPc => self.pump.eta_pc = value,
            Parameter::EtaPa => self.pump.eta_pa = value,
            Parameter::LambdaPump => self.pump.lambda_pump = value,
            Parameter::PIn => self.p_in = value,
            Parameter::Vc => self.vc = value,
            Parameter::Mu => self.receiver.mu = value,
            Parameter::EtaP => self.receiver.eta_p = value,
            Parameter::PPth => self.receiver.p_pth = value,
            Parameter::Nu => self.receiver.nu = value,
            Parameter::Bx => self.receiver.b_x = value,
            Parameter::IBg => self.receiver.i_bg = value,
            Parameter::RL => self.receiver.r_l = value,
            Parameter::TBg => self.receiver.t_bg = value,
            Parameter::KB => self.receiver.k_b = value,
            Parameter::QE => self.receiver.q_e = value,
        }
        Ok(())
    }

    pub fn with(mut self, p: Parameter, value: f64) -> Result<Self> {
        self.set(p, value)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.gain.validate()?;
        self.pump.validate()?;
        self.receiver.validate()?;
        if !(self.vc > 0.0 && self.vc <= 1.0) {
            return Err(Error::invalid("vc", self.vc, "loss factor must lie in (0, 1]"));
        }
        if !(self.p_in > 0.0) || !self.p_in.is_finite() {
            return Err(Error::invalid("p_in", self.p_in, "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn evaluate(&self) -> Result<OperatingPoint> {
        self.validate()?;
        let power = gain_power::evaluate_link_with(
            &self.geometry,
            &self.gain,
            &self.pump,
            self.vc,
            self.p_in,
            self.slope_loss_exponent,
        )?;
        let swipt = receiver::evaluate_swipt(&self.receiver, power.p_beam, self.p_in)?;
        Ok(OperatingPoint {
            p_in: self.p_in,
            power,
            swipt,
            degenerate_mode: ray_optics::is_degenerate_mode(power.spot_radius),
        })
    }
}

/// One fully evaluated link state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OperatingPoint {
    pub p_in: f64,
    pub power: PowerResult,
    pub swipt: SwiptResult,
    /// The spot-size expression collapsed to zero (`B·D = 0`).
    pub degenerate_mode: bool,
}

impl OperatingPoint {
    pub fn is_sub_threshold(&self) -> bool {
        self.p_in <= self.power.p_th
    }

    pub fn get(&self, q: Quantity) -> f64 {
        let p = &self.power;
        let s = &self.swipt;
        match q {
            Quantity::SpotRadius => p.spot_radius,
            Quantity::Vd => p.loss.vd,
            Quantity::V => p.loss.v,
            Quantity::GSat => p.g_sat,
            Quantity::NTh => p.n_th,
            Quantity::Tau => p.tau,
            Quantity::PTh => p.p_th,
            Quantity::EtaS => p.eta_s,
            Quantity::PBeam => p.p_beam,
            Quantity::EtaB => p.eta_b,
            Quantity::PPvIn => s.p_pv_in,
            Quantity::PApdIn => s.p_apd_in,
            Quantity::PEOutRaw => s.p_e_out_raw,
            Quantity::PEOut => s.p_e_out,
            Quantity::EtaE => s.eta_e,
            Quantity::ID => s.i_d,
            Quantity::NThermalSq => s.n_thermal_sq,
            Quantity::NShotSq => s.n_shot_sq,
            Quantity::NTotalSq => s.n_total_sq,
            Quantity::CTilde => s.c_tilde,
        }
    }
}

macro_rules! quantities {
    ($($variant:ident => $name:literal, $unit:literal;)*) => {
        /// A named output field of an [`OperatingPoint`].
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Quantity {
            $($variant,)*
        }

        impl Quantity {
            pub const ALL: &'static [Quantity] = &[$(Quantity::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Quantity::$variant => $name,)*
                }
            }

            /// SI unit label, `1` for dimensionless.
            pub fn unit(self) -> &'static str {
                match self {
                    $(Quantity::$variant => $unit,)*
                }
            }
        }
    };
}

quantities! {
    SpotRadius => "omega_g", "m";
    Vd => "v_d", "1";
    V => "v", "1";
    GSat => "g_sat", "m^-1";
    NTh => "n_th", "m^-3";
    Tau => "tau", "s";
    PTh => "p_th", "W";
    EtaS => "eta_s", "1";
    PBeam => "p_beam", "W";
    EtaB => "eta_b", "1";
    PPvIn => "p_pv_in", "W";
    PApdIn => "p_apd_in", "W";
    PEOutRaw => "p_e_out_raw", "W";
    PEOut => "p_e_out", "W";
    EtaE => "eta_e", "1";
    ID => "i_d", "A";
    NThermalSq => "n_thermal_sq", "A^2";
    NShotSq => "n_shot_sq", "A^2";
    NTotalSq => "n_total_sq", "A^2";
    CTilde => "c_tilde", "bit/s/Hz";
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownQuantity;

impl fmt::Display for UnknownQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown quantity")
    }
}

impl core::error::Error for UnknownQuantity {}

impl FromStr for Quantity {
    type Err = UnknownQuantity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL
            .iter()
            .copied()
            .find(|q| q.name().eq_ignore_ascii_case(s.trim()))
            .ok_or(UnknownQuantity)
    }
}
