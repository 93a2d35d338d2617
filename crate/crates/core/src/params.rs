//! Addressable scalar parameters of a [`LinkModel`](crate::LinkModel), used
//! by sweeps, overrides and the configuration layer.

use core::fmt;
use core::str::FromStr;

macro_rules! parameters {
    ($($variant:ident => $path:literal, $doc:literal;)*) => {
        /// A sweepable model parameter, addressed as `section.key`.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Parameter {
            $(#[doc = $doc] $variant,)*
        }

        impl Parameter {
            pub const ALL: &'static [Parameter] = &[$(Parameter::$variant,)*];

            pub fn path(self) -> &'static str {
                match self {
                    $(Parameter::$variant => $path,)*
                }
            }
        }
    };
}

parameters! {
    D1 => "geometry.d1", "M1 to gain spacing (m)";
    D2 => "geometry.d2", "gain to TIM spacing (m)";
    D3 => "geometry.d3", "link distance (m)";
    Lt => "geometry.lt", "TIM lens separation (m); pins the separation";
    F1 => "geometry.f1", "TIM lens L1 focal length (m)";
    F2 => "geometry.f2", "TIM lens L2 focal length (m)";
    Compression => "geometry.m", "TIM compression toward the gain";
    Fr1 => "geometry.fr1", "M1 curvature factor (m)";
    Fr2 => "geometry.fr2", "M2 curvature factor (m)";
    R1 => "geometry.r1", "M1 reflectivity";
    R2 => "geometry.r2", "M2 reflectivity";
    LambdaBeam => "geometry.lambda_beam", "resonant wavelength (m)";
    G0 => "gain.g0", "small-signal gain (1/m)";
    N0 => "gain.n0", "transparency density (1/m^3)";
    GammaConf => "gain.gamma_conf", "confinement factor";
    Alpha => "gain.alpha", "monomolecular recombination (1/s)";
    Beta => "gain.beta", "bimolecular recombination (m^3/s)";
    Auger => "gain.auger", "Auger recombination (m^6/s)";
    L => "gain.l", "gain layer thickness (m)";
    As => "gain.a_s", "active cross-section (m^2)";
    A => "gain.a", "gain radius (m)";
    EtaPc => "pump.eta_pc", "pump conversion efficiency";
    EtaPa => "pump.eta_pa", "pump absorption efficiency";
    LambdaPump => "pump.lambda_pump", "pump wavelength (m)";
    PIn => "pump.p_in", "electrical input power (W)";
    Vc => "losses.vc", "constant loss factor";
    Mu => "receiver.mu", "split ratio to PV";
    EtaP => "receiver.eta_p", "PV slope";
    PPth => "receiver.p_pth", "PV intercept (W)";
    Nu => "receiver.nu", "APD responsivity (A/W)";
    Bx => "receiver.b_x", "noise bandwidth (Hz)";
    IBg => "receiver.i_bg", "background current (A)";
    RL => "receiver.r_l", "load resistance (ohm)";
    TBg => "receiver.t_bg", "background temperature (K)";
    KB => "receiver.k_b", "Boltzmann constant (J/K)";
    QE => "receiver.q_e", "electron charge (C)";
}

impl Parameter {
    pub fn section(self) -> &'static str {
        let path = self.path();
        &path[..path.find('.').unwrap_or(0)]
    }

    pub fn key(self) -> &'static str {
        let path = self.path();
        &path[path.find('.').map_or(0, |i| i + 1)..]
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.path())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownParameter;

impl fmt::Display for UnknownParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown parameter path")
    }
}

impl core::error::Error for UnknownParameter {}

impl FromStr for Parameter {
    type Err = UnknownParameter;

    /// Accepts the full `section.key` path or a bare key (keys are unique
    /// across sections). Case-insensitive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Parameter::ALL
            .iter()
            .copied()
            .find(|p| p.path().eq_ignore_ascii_case(s) || p.key().eq_ignore_ascii_case(s))
            .ok_or(UnknownParameter)
    }
}
