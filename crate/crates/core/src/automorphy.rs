//! Holomorphic square-root automorphy factors on both half-planes.
//!
//! `phi_plus(gamma, z)` is the factor attached to `[gamma, +1]`. It is built
//! by writing `gamma` as a word in `S`, `S^-1`, `T`, `T^-1`, composing the
//! per-generator factors with the metaplectic product
//! `(a, phi)(b, psi) = (ab, phi(b z) psi(z))`, and correcting by the cover
//! sign the same word picks up. The generators carry `sqrt(z)` (for `S`) and
//! `1` (for `T`).

use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use crate::error::{Error, Result};
use crate::meta_group::{conjugation_sign, word_decompose, Gen, Mat2, Sign};
use crate::C64;

/// Points closer than this to the real axis are rejected.
pub const REAL_AXIS_TOLERANCE: f64 = 1e-12;

/// A point of the double half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint(C64);

impl HalfPlanePoint {
    pub fn new(z: C64) -> Result<Self> {
        if z.im.is_nan() || z.im.abs() <= REAL_AXIS_TOLERANCE || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NearRealAxis { imag: z.im.abs(), min: REAL_AXIS_TOLERANCE });
        }
        Ok(HalfPlanePoint(z))
    }

    /// Image of a valid point under a Mobius map; only requires `Im z != 0`.
    pub(crate) fn image(z: C64) -> Self {
        debug_assert!(z.im != 0.0);
        HalfPlanePoint(z)
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        HalfPlanePoint::new(C64::new(re, im))
    }

    pub fn z(&self) -> C64 {
        self.0
    }

    pub fn is_upper(&self) -> bool {
        self.0.im > 0.0
    }

    /// `-z`, the image under the reflection.
    pub fn reflect(&self) -> HalfPlanePoint {
        HalfPlanePoint(-self.0)
    }

    pub fn conj(&self) -> HalfPlanePoint {
        HalfPlanePoint(self.0.conj())
    }
}

pub(crate) fn wrong_half(z: C64, expected: &'static str) -> Error {
    Error::WrongHalfPlane { re: z.re, im: z.im, expected }
}

fn require_upper(z: C64) -> Result<()> {
    if z.im > 0.0 {
        Ok(())
    } else {
        Err(wrong_half(z, "upper"))
    }
}

/// The default sample grid on the upper half-plane:
/// `x` in `{-0.7, 0, 0.4, 1.3}`, `y` in `{0.3, 0.8, 2.0}`.
pub fn standard_grid_upper() -> Vec<HalfPlanePoint> {
    let mut pts = Vec::with_capacity(12);
    for x in [-0.7, 0.0, 0.4, 1.3] {
        for y in [0.3, 0.8, 2.0] {
            pts.push(HalfPlanePoint(C64::new(x, y)));
        }
    }
    pts
}

/// Grid on the lower half-plane: conjugates of [`standard_grid_upper`].
pub fn standard_grid_lower() -> Vec<HalfPlanePoint> {
    standard_grid_upper().iter().map(HalfPlanePoint::conj).collect()
}

/// Both halves of the grid, upper points first.
pub fn standard_grid() -> Vec<HalfPlanePoint> {
    let mut pts = standard_grid_upper();
    pts.extend(standard_grid_lower());
    pts
}

/// The fourth root of unity `i^e`, with `e` taken mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase4(u8);

impl Phase4 {
    pub const ONE: Phase4 = Phase4(0);
    pub const I: Phase4 = Phase4(1);
    pub const MINUS_ONE: Phase4 = Phase4(2);
    pub const MINUS_I: Phase4 = Phase4(3);
    pub const ALL: [Phase4; 4] = [Phase4::ONE, Phase4::I, Phase4::MINUS_ONE, Phase4::MINUS_I];

    pub fn from_exponent(e: i64) -> Phase4 {
        Phase4(e.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn pow(self, n: i64) -> Phase4 {
        Phase4::from_exponent(self.0 as i64 * n.rem_euclid(4))
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }
}

impl From<Sign> for Phase4 {
    fn from(s: Sign) -> Phase4 {
        match s {
            Sign::Plus => Phase4::ONE,
            Sign::Minus => Phase4::MINUS_ONE,
        }
    }
}

impl Mul for Phase4 {
    type Output = Phase4;
    fn mul(self, o: Phase4) -> Phase4 {
        Phase4((self.0 + o.0) % 4)
    }
}

impl Mul<Sign> for Phase4 {
    type Output = Phase4;
    fn mul(self, o: Sign) -> Phase4 {
        self * Phase4::from(o)
    }
}

impl fmt::Display for Phase4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][self.0 as usize])
    }
}

/// Principal square root with the argument in `(-pi, pi]`; negative reals
/// map to `i sqrt|w|`.
pub fn sqrt_branch(w: C64) -> Result<C64> {
    if w.re == 0.0 && w.im == 0.0 {
        return Err(Error::ZeroSqrt);
    }
    let theta = if w.im == 0.0 && w.re < 0.0 { core::f64::consts::PI } else { w.arg() };
    Ok(C64::from_polar(libm::sqrt(w.norm()), theta / 2.0))
}

fn mobius_raw(m: &Mat2, z: C64) -> C64 {
    (z * m.a as f64 + m.b as f64) / (z * m.c as f64 + m.d as f64)
}

/// Factor of a single lifted generator at `z` (upper half-plane).
/// `S^-1` gets the inverse of the `S` factor, `1 / sqrt(S^-1 z)`.
fn generator_factor(g: Gen, z: C64) -> Result<C64> {
    match g {
        Gen::S => sqrt_branch(z),
        Gen::SInv => Ok(sqrt_branch(mobius_raw(&Mat2::S.inverse(), z))?.inv()),
        Gen::T | Gen::TInv => Ok(C64::new(1.0, 0.0)),
        Gen::R => Err(Error::WrongDeterminant { matrix: Mat2::R, expected: 1, found: -1 }),
    }
}

/// Composed factor of a word together with the cover sign of its lifted
/// product: for `w = g1 ... gn`, the factor is
/// `phi1(g2...gn z) phi2(g3...gn z) ... phin(z)`. Words containing `R` are
/// rejected.
pub fn word_factor(word: &[Gen], z: C64) -> Result<(C64, Sign)> {
    let mut factor = C64::new(1.0, 0.0);
    let mut point = z;
    for g in word.iter().rev() {
        factor *= generator_factor(*g, point)?;
        point = mobius_raw(&g.matrix(), point);
    }
    let sign = word.iter().fold(crate::meta_group::MetaElt::identity(), |acc, g| acc * g.lift()).eps;
    Ok((factor, sign))
}

fn require_det_one(gamma: &Mat2) -> Result<()> {
    let det = gamma.det();
    if det == 1 {
        Ok(())
    } else {
        Err(Error::WrongDeterminant { matrix: *gamma, expected: 1, found: det })
    }
}

/// `phi+_gamma(z)` for `det gamma = 1`, `Im z > 0`, using the canonical
/// word from [`word_decompose`].
pub fn phi_plus(gamma: &Mat2, z: HalfPlanePoint) -> Result<C64> {
    require_det_one(gamma)?;
    require_upper(z.z())?;
    phi_plus_word(&word_decompose(gamma).0, z.z())
}

/// `phi+` computed from an arbitrary word for the matrix.
pub fn phi_plus_word(word: &[Gen], z: C64) -> Result<C64> {
    let (factor, sign) = word_factor(word, z)?;
    Ok(factor * sign.to_f64())
}

/// `phi-_gamma(z) = B(gamma) phi+_{R gamma R}(-z)` for `Im z < 0`.
pub fn phi_minus(gamma: &Mat2, z: HalfPlanePoint) -> Result<C64> {
    require_det_one(gamma)?;
    if z.is_upper() {
        return Err(wrong_half(z.z(), "lower"));
    }
    let b = conjugation_sign(gamma)?;
    Ok(phi_plus(&(Mat2::R * *gamma * Mat2::R), z.reflect())? * b.to_f64())
}

/// Whether `phi+_gamma` equals `+sqrt(cz+d)` or `-sqrt(cz+d)` (principal
/// branch) at every given upper point; `None` if the sign varies.
pub fn principal_branch_sign(gamma: &Mat2, points: &[HalfPlanePoint]) -> Result<Option<Sign>> {
    let mut found = None;
    for p in points {
        let phi = phi_plus(gamma, *p)?;
        let raw = sqrt_branch(p.z() * gamma.c as f64 + gamma.d as f64)?;
        let s = if (phi - raw).norm() <= (phi + raw).norm() { Sign::Plus } else { Sign::Minus };
        match found {
            None => found = Some(s),
            Some(prev) if prev != s => return Ok(None),
            _ => {}
        }
    }
    Ok(found)
}
