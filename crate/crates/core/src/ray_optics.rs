//! Paraxial ray-transfer (ABCD) optics of the spatially separated resonator.
//!
//! The cavity runs from the transmitter reflector M1, past the gain medium
//! (spacing `d1`), to the telescope internal modulator (TIM, spacing `d2`),
//! through the TIM lenses L1 and L2 (separation `lt`) and across the free
//! space link (`d3`) to the receiver reflector M2.

use core::f64::consts::PI;
use core::ops::Mul;

use crate::math::{exp, sqrt};
use crate::{Error, Result};

/// Transverse ray state `(x, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RayVector {
    /// Position (m).
    pub x: f64,
    /// Paraxial angle (rad).
    pub theta: f64,
}

impl RayVector {
    pub fn new(x: f64, theta: f64) -> Self {
        Self { x, theta }
    }
}

/// 2×2 ray-transfer matrix `[[a, b], [c, d]]` acting on `(x, θ)`.
///
/// Every element used here has unit determinant since all media share one
/// refractive index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayTransferMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RayTransferMatrix {
    pub const IDENTITY: Self = Self::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, ray: RayVector) -> RayVector {
        RayVector {
            x: self.a * ray.x + self.b * ray.theta,
            theta: self.c * ray.x + self.d * ray.theta,
        }
    }

    /// Matrix for traversing the same optical train in the opposite direction.
    pub fn reversed(&self) -> Self {
        Self::new(self.d, self.b, self.c, self.a)
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Product of a train of matrices given in traversal order (first element
    /// met first), i.e. `elements[n-1] · … · elements[0]`.
    pub fn compose(elements: &[RayTransferMatrix]) -> Self {
        elements
            .iter()
            .fold(Self::IDENTITY, |acc, element| *element * acc)
    }
}

impl Mul for RayTransferMatrix {
    type Output = RayTransferMatrix;

    fn mul(self, rhs: RayTransferMatrix) -> RayTransferMatrix {
        RayTransferMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

impl Mul<RayVector> for RayTransferMatrix {
    type Output = RayVector;

    fn mul(self, rhs: RayVector) -> RayVector {
        self.apply(rhs)
    }
}

/// Propagation over `distance` metres. Negative distances are accepted.
pub fn free_space(distance: f64) -> Result<RayTransferMatrix> {
    if !distance.is_finite() {
        return Err(Error::invalid("distance", distance, "must be finite"));
    }
    Ok(RayTransferMatrix::new(1.0, distance, 0.0, 1.0))
}

/// Thin lens of focal length `f`; an infinite focal length is a flat plate.
pub fn thin_lens(f: f64) -> Result<RayTransferMatrix> {
    if f == 0.0 || f.is_nan() {
        return Err(Error::invalid("focal length", f, "must be non-zero"));
    }
    Ok(RayTransferMatrix::new(1.0, 0.0, -1.0 / f, 1.0))
}

/// Effective curvature factor `f_r = f² / (2 (d − f))` of a lens + flat
/// mirror reflector. Infinite when the mirror sits in the focal plane.
pub fn reflector_curvature(f: f64, d: f64) -> Result<f64> {
    if f == 0.0 || !f.is_finite() {
        return Err(Error::invalid("focal length", f, "must be finite and non-zero"));
    }
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::invalid("mirror distance", d, "must be finite and >= 0"));
    }
    if d == f {
        return Ok(f64::INFINITY);
    }
    Ok(f * f / (2.0 * (d - f)))
}

/// Reflector described directly by its effective curvature factor.
pub fn reflector_from_curvature(fr: f64) -> Result<RayTransferMatrix> {
    if fr == 0.0 || fr.is_nan() {
        return Err(Error::invalid("curvature factor", fr, "must be non-zero"));
    }
    Ok(RayTransferMatrix::new(-1.0, 0.0, 1.0 / fr, -1.0))
}

/// Lens (focal length `f`) + flat mirror at distance `d` behind it, folded
/// into a single reflection matrix `[[−1, 0], [1/f_r, −1]]`.
///
/// `d = f` gives the ideal retro-reflector `−I`.
pub fn reflector_matrix(f: f64, d: f64) -> Result<RayTransferMatrix> {
    reflector_from_curvature(reflector_curvature(f, d)?)
}

/// Telescope internal modulator: `L2 · free_space(lt) · L1`.
///
/// With `lt = f1 + f2` this is `[[1/M, lt], [0, M]]`, `M = −f1/f2`.
pub fn tim_matrix(f1: f64, f2: f64, lt: f64) -> Result<RayTransferMatrix> {
    Ok(thin_lens(f2)? * free_space(lt)? * thin_lens(f1)?)
}

/// Element spacings, focal lengths and reflectivities of the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorGeometry {
    /// M1 to gain medium (m).
    pub d1: f64,
    /// Gain medium to TIM lens L1 (m).
    pub d2: f64,
    /// TIM lens L2 to M2, the link distance (m).
    pub d3: f64,
    /// L1–L2 separation (m); may be negative.
    pub lt: f64,
    /// Focal length of L1, the lens facing the gain (m).
    pub f1: f64,
    /// Focal length of L2 (m).
    pub f2: f64,
    /// Effective curvature factor of M1 (m, may be infinite).
    pub fr1: f64,
    /// Effective curvature factor of M2 (m, may be infinite).
    pub fr2: f64,
    /// Power reflectivity of M1.
    pub r1: f64,
    /// Power reflectivity of M2.
    pub r2: f64,
    /// Resonant beam wavelength (m).
    pub lambda_beam: f64,
}

impl ResonatorGeometry {
    /// Beam compression the TIM applies toward the gain medium, `−f2/f1`.
    ///
    /// Note this is the reciprocal of the `M = −f1/f2` appearing in the
    /// closed form of [`tim_matrix`], which describes the M1→M2 direction.
    pub fn compression(&self) -> f64 {
        -self.f2 / self.f1
    }

    /// Sets L2 so the TIM compresses the gain-side beam by `m`, keeping L1.
    /// When `afocal` is set the lens separation follows as `f1 + f2`.
    pub fn set_compression(&mut self, m: f64, afocal: bool) {
        self.f2 = -m * self.f1;
        if afocal {
            self.lt = self.f1 + self.f2;
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("d1", self.d1), ("d2", self.d2), ("d3", self.d3)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, v, "spacing must be finite and > 0"));
            }
        }
        if !self.lt.is_finite() {
            return Err(Error::invalid("lt", self.lt, "must be finite"));
        }
        for (name, v) in [("f1", self.f1), ("f2", self.f2)] {
            if v == 0.0 || !v.is_finite() {
                return Err(Error::invalid(name, v, "focal length must be finite and non-zero"));
            }
        }
        for (name, v) in [("fr1", self.fr1), ("fr2", self.fr2)] {
            if v == 0.0 || v.is_nan() {
                return Err(Error::invalid(name, v, "curvature factor must be non-zero"));
            }
        }
        for (name, v) in [("r1", self.r1), ("r2", self.r2)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(name, v, "reflectivity must lie in (0, 1]"));
            }
        }
        if !(self.lambda_beam > 0.0) || !self.lambda_beam.is_finite() {
            return Err(Error::invalid("lambda_beam", self.lambda_beam, "must be > 0"));
        }
        Ok(())
    }
}

/// One-trip cavity matrix starting at M1:
/// `M_M2 · d3 · L2 · lt · L1 · d2 · d1 · M_M1`.
pub fn one_trip_matrix(g: &ResonatorGeometry) -> Result<RayTransferMatrix> {
    g.validate()?;
    Ok(RayTransferMatrix::compose(&[
        reflector_from_curvature(g.fr1)?,
        free_space(g.d1)?,
        free_space(g.d2)?,
        thin_lens(g.f1)?,
        free_space(g.lt)?,
        thin_lens(g.f2)?,
        free_space(g.d3)?,
        reflector_from_curvature(g.fr2)?,
    ]))
}

/// Beam spot radius on the gain medium,
/// `ω_g = (−λ² B D / (π² A C))^{1/4}`, from the one-trip matrix.
///
/// A zero result (`B·D = 0`) is returned as-is; it is an unphysical mode and
/// callers should treat it as degenerate (see [`is_degenerate_mode`]).
pub fn spot_radius_on_gain(m: &RayTransferMatrix, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("lambda", lambda, "must be > 0"));
    }
    let ac = m.a * m.c;
    if ac == 0.0 || !ac.is_finite() {
        return Err(Error::DegenerateCavity { matrix: *m });
    }
    let radicand = -(lambda * lambda) * m.b * m.d / (PI * PI * ac);
    if radicand < 0.0 || radicand.is_nan() {
        return Err(Error::UnstableResonator { matrix: *m });
    }
    Ok(sqrt(sqrt(radicand)))
}

/// A zero mode size is what the closed form yields for `B·D = 0`.
pub fn is_degenerate_mode(spot_radius: f64) -> bool {
    spot_radius == 0.0
}

/// Fraction of a Gaussian beam of radius `w` passing an aperture of radius
/// `a`: `1 − exp(−2a²/w²)`.
pub fn diffraction_survival(a: f64, w: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::invalid("spot radius", w, "must be > 0"));
    }
    if !(a >= 0.0) {
        return Err(Error::invalid("aperture radius", a, "must be >= 0"));
    }
    Ok(1.0 - exp(-2.0 * a * a / (w * w)))
}
