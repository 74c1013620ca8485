//! The weight-k right action of the `GL2(Z)` cover on holomorphic functions
//! over the double half-plane.
//!
//! For `x = [gamma, eps]` the action is given by the four-case rule
//!
//! ```text
//! det +1, upper: f+(gz) (eps phi+_g(z))^-2k
//! det +1, lower: f-(gz) (eps B(g) phi+_{RgR}(-z))^-2k
//! det -1, upper: f-(gz) (i eps A(R,g) phi+_{Rg}(z))^-2k
//! det -1, lower: f+(gz) (i eps A(R,g) B(Rg) phi+_{gR}(-z))^-2k
//! ```
//!
//! All unit prefactors are exact fourth roots of unity ([`Phase4`]); the only
//! floating point power is the integral power `w = 2k` of `1/phi`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::automorphy::{phi_plus, wrong_half, HalfPlanePoint, Phase4};
use crate::error::{Error, Result};
use crate::meta_group::{cocycle, conjugation_sign, Mat2, MetaElt};
use crate::C64;

/// Half-integral weight `k`, stored as the integer `w = 2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(i64);

impl Weight {
    pub const fn from_twice(w: i64) -> Self {
        Weight(w)
    }

    /// Integral weight `k`.
    pub const fn integral(k: i64) -> Self {
        Weight(2 * k)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn k(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `i^(2k)`.
    pub fn i_pow(self) -> Phase4 {
        Phase4::I.pow(self.0)
    }

    /// `(-1)^(2k)`.
    pub fn minus_one_pow(self) -> Phase4 {
        Phase4::MINUS_ONE.pow(self.0)
    }

    /// `(-i)^(2k)`.
    pub fn minus_i_pow(self) -> Phase4 {
        Phase4::MINUS_I.pow(self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

pub type Evaluator = Arc<dyn Fn(C64) -> Result<Vec<C64>> + Send + Sync>;

/// A vector-valued function on `H*`, given by its restrictions to the upper
/// and lower half-planes.
#[derive(Clone)]
pub struct HoloFn {
    dim: usize,
    upper: Evaluator,
    lower: Evaluator,
}

impl fmt::Debug for HoloFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HoloFn").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl HoloFn {
    pub fn new<U, L>(dim: usize, upper: U, lower: L) -> Self
    where
        U: Fn(C64) -> Result<Vec<C64>> + Send + Sync + 'static,
        L: Fn(C64) -> Result<Vec<C64>> + Send + Sync + 'static,
    {
        HoloFn { dim, upper: Arc::new(upper), lower: Arc::new(lower) }
    }

    pub fn from_evaluators(dim: usize, upper: Evaluator, lower: Evaluator) -> Self {
        HoloFn { dim, upper, lower }
    }

    /// A function known only on the upper half-plane; evaluating below fails.
    pub fn upper_only<U>(dim: usize, upper: U) -> Self
    where
        U: Fn(C64) -> Result<Vec<C64>> + Send + Sync + 'static,
    {
        HoloFn::new(dim, upper, |z: C64| Err(wrong_half(z, "upper")))
    }

    pub fn zero(dim: usize) -> Self {
        let zeros = move |_: C64| Ok(alloc::vec![C64::new(0.0, 0.0); dim]);
        HoloFn::new(dim, zeros, zeros)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn upper(&self) -> &Evaluator {
        &self.upper
    }

    pub fn lower(&self) -> &Evaluator {
        &self.lower
    }

    pub fn eval(&self, z: HalfPlanePoint) -> Result<Vec<C64>> {
        self.eval_raw(z.z())
    }

    fn eval_raw(&self, z: C64) -> Result<Vec<C64>> {
        let v = if z.im > 0.0 { (self.upper)(z)? } else { (self.lower)(z)? };
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(v)
    }

    /// Same upper evaluator, lower evaluator replaced.
    pub fn with_lower(&self, lower: Evaluator) -> HoloFn {
        HoloFn { dim: self.dim, upper: self.upper.clone(), lower }
    }

    /// `z -> f(-z)`.
    pub fn compose_reflection(&self) -> HoloFn {
        let (u, l) = (self.upper.clone(), self.lower.clone());
        HoloFn::new(self.dim, move |z| l(-z), move |z| u(-z))
    }

    /// Pointwise scalar multiple.
    pub fn scale(&self, s: C64) -> HoloFn {
        let (u, l) = (self.upper.clone(), self.lower.clone());
        let scale = move |v: Vec<C64>| v.into_iter().map(|x| x * s).collect();
        HoloFn::new(self.dim, move |z| u(z).map(scale), move |z| l(z).map(scale))
    }
}

/// `gamma z = (az + b)/(cz + d)`.
pub fn mobius(gamma: &Mat2, z: HalfPlanePoint) -> HalfPlanePoint {
    if *gamma == Mat2::R {
        return z.reflect();
    }
    let w = z.z();
    // Im(gamma z) = det * Im z / |cz+d|^2, never zero
    HalfPlanePoint::image((w * gamma.a as f64 + gamma.b as f64) / (w * gamma.c as f64 + gamma.d as f64))
}

/// `(phase * phi)^(-w)` with the phase power taken exactly.
fn factor_power(phase: Phase4, phi: C64, k: Weight) -> C64 {
    let w = k.twice();
    phase.pow(-w).to_complex() * phi.inv().powi(w as i32)
}

/// Multiplier `(prefactor)^-2k` and source point `gamma z` for `f|_k x` at `z`.
fn slash_factor(k: Weight, x: &MetaElt, z: HalfPlanePoint) -> Result<(C64, HalfPlanePoint)> {
    let g = x.gamma;
    let eps = Phase4::from(x.eps);
    let target = mobius(&g, z);
    let upper = z.is_upper();
    let (phase, phi) = match (g.det() == 1, upper) {
        (true, true) => (eps, phi_plus(&g, z)?),
        (true, false) => (eps * conjugation_sign(&g)?, phi_plus(&(Mat2::R * g * Mat2::R), z.reflect())?),
        (false, true) => (Phase4::I * eps * cocycle(&Mat2::R, &g), phi_plus(&(Mat2::R * g), z)?),
        (false, false) => {
            let rg = Mat2::R * g;
            let phase = Phase4::I * eps * cocycle(&Mat2::R, &g) * conjugation_sign(&rg)?;
            (phase, phi_plus(&(g * Mat2::R), z.reflect())?)
        }
    };
    Ok((factor_power(phase, phi, k), target))
}

/// `f|_k x`. The result samples `f` at `gamma z`, which lies in the other
/// half-plane when `det gamma = -1`.
pub fn slash(f: &HoloFn, k: Weight, x: MetaElt) -> HoloFn {
    let make = |f: HoloFn| {
        move |z: C64| -> Result<Vec<C64>> {
            let (mult, target) = slash_factor(k, &x, HalfPlanePoint::new(z)?)?;
            Ok(f.eval(target)?.into_iter().map(|v| v * mult).collect())
        }
    };
    HoloFn::new(f.dim(), make(f.clone()), make(f.clone()))
}

/// `f|_k x` for `det gamma = -1` computed through the reflection,
/// `i^(2k) (f o R)|_k [R gamma, -A(R, gamma) eps]`.
pub fn slash_via_reflection(f: &HoloFn, k: Weight, x: MetaElt) -> Result<HoloFn> {
    if x.det() != -1 {
        return Err(Error::WrongDeterminant { matrix: x.gamma, expected: -1, found: x.det() });
    }
    let inner = MetaElt::new(Mat2::R * x.gamma, -(cocycle(&Mat2::R, &x.gamma) * x.eps));
    Ok(slash(&f.compose_reflection(), k, inner).scale(k.i_pow().to_complex()))
}

/// Same, in the equivalent form `i^(-2k) (f o R)|_k [R gamma, A(R, gamma) eps]`.
pub fn slash_via_reflection_inverse_phase(f: &HoloFn, k: Weight, x: MetaElt) -> Result<HoloFn> {
    if x.det() != -1 {
        return Err(Error::WrongDeterminant { matrix: x.gamma, expected: -1, found: x.det() });
    }
    let inner = MetaElt::new(Mat2::R * x.gamma, cocycle(&Mat2::R, &x.gamma) * x.eps);
    Ok(slash(&f.compose_reflection(), k, inner).scale(k.i_pow().pow(-1).to_complex()))
}

/// Largest componentwise `|a(z) - b(z)|` over the samples.
pub fn max_difference(a: &HoloFn, b: &HoloFn, samples: &[HalfPlanePoint]) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in samples {
        let (u, v) = (a.eval(*z)?, b.eval(*z)?);
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
        }
        for (p, q) in u.iter().zip(&v) {
            worst = worst.max((p - q).norm());
        }
    }
    Ok(worst)
}

/// `max |((f|x)|y - f|(xy))(z)|` over the samples.
pub fn check_action_composition(
    f: &HoloFn,
    k: Weight,
    x: MetaElt,
    y: MetaElt,
    samples: &[HalfPlanePoint],
) -> Result<f64> {
    let left = slash(&slash(f, k, x), k, y);
    let right = slash(f, k, x * y);
    max_difference(&left, &right, samples)
}

/// The `lambda` among the fourth roots of unity with `lambda^(4k) = (-1)^(2k)`,
/// i.e. the admissible scalars for `f|_k R~ = lambda^(2k) f(-z)`.
pub fn admissible_lambdas(k: Weight) -> Vec<Phase4> {
    let w = k.twice();
    Phase4::ALL.into_iter().filter(|l| l.pow(2 * w) == Phase4::MINUS_ONE.pow(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphy::standard_grid;
    use alloc::string::ToString;
    use crate::meta_group::Sign;

    fn test_fn() -> HoloFn {
        HoloFn::new(
            2,
            |z: C64| Ok(alloc::vec![(z * 0.3).exp(), z * z + 1.0]),
            |z: C64| Ok(alloc::vec![(z * -0.2).exp() * 2.0, z.inv()]),
        )
    }

    #[test]
    fn mobius_examples() {
        let z = HalfPlanePoint::from_parts(0.25, 0.7).unwrap();
        assert_eq!(mobius(&Mat2::T, z).z(), z.z() + 1.0);
        let i = HalfPlanePoint::from_parts(0.0, 1.0).unwrap();
        assert!((mobius(&Mat2::S, i).z() - C64::i()).norm() < 1e-15);
        assert_eq!(mobius(&Mat2::R, z).z(), -z.z());
        let g = Mat2::new(1, 0, 1, -1).unwrap();
        assert!(!mobius(&g, z).is_upper());
    }

    #[test]
    fn central_element_acts_by_sign() {
        let f = test_fn();
        let pts = standard_grid();
        for w in [1, 2, 3, 8] {
            let k = Weight::from_twice(w);
            let g = slash(&f, k, MetaElt::central());
            let expect = f.scale(k.minus_one_pow().to_complex());
            assert_eq!(max_difference(&g, &expect, &pts).unwrap(), 0.0);
        }
    }

    #[test]
    fn reflection_acts_by_i_power() {
        let f = test_fn();
        for w in [1, 2, 3, 8] {
            let k = Weight::from_twice(w);
            let g = slash(&f, k, MetaElt::r());
            let expect = f.compose_reflection().scale(k.i_pow().to_complex());
            assert!(max_difference(&g, &expect, &standard_grid()).unwrap() < 1e-15);
        }
    }

    #[test]
    fn identity_is_exact() {
        let f = test_fn();
        let g = slash(&f, Weight::from_twice(1), MetaElt::identity());
        for z in standard_grid() {
            assert_eq!(f.eval(z).unwrap(), g.eval(z).unwrap());
        }
        assert_eq!(g.dim(), f.dim());
    }

    #[test]
    fn composition_trivial_cases() {
        let f = test_fn();
        let pts = standard_grid();
        let k = Weight::from_twice(1);
        let e = MetaElt::identity();
        assert_eq!(check_action_composition(&f, k, e, e, &pts).unwrap(), 0.0);
        for w in [1, 3, 4] {
            let k = Weight::from_twice(w);
            let r = MetaElt::r();
            assert!(check_action_composition(&f, k, r, r, &pts).unwrap() < 1e-12);
        }
    }

    #[test]
    fn lambda_sets() {
        assert_eq!(admissible_lambdas(Weight::from_twice(1)), [Phase4::I, Phase4::MINUS_I]);
        assert_eq!(admissible_lambdas(Weight::from_twice(2)), Phase4::ALL);
        assert_eq!(admissible_lambdas(Weight::from_twice(3)), [Phase4::I, Phase4::MINUS_I]);
    }

    #[test]
    fn reflection_forms_agree_for_small_elements() {
        let f = test_fn();
        let pts = standard_grid();
        let elems = [
            MetaElt::r(),
            MetaElt::new(Mat2::R, Sign::Minus),
            MetaElt::r() * MetaElt::s(),
            MetaElt::t() * MetaElt::r() * MetaElt::s().inv(),
        ];
        for w in [1, 2, 3] {
            let k = Weight::from_twice(w);
            for x in elems {
                let direct = slash(&f, k, x);
                let a = slash_via_reflection(&f, k, x).unwrap();
                let b = slash_via_reflection_inverse_phase(&f, k, x).unwrap();
                assert!(max_difference(&direct, &a, &pts).unwrap() < 1e-12, "{x}");
                assert!(max_difference(&direct, &b, &pts).unwrap() < 1e-12, "{x}");
            }
        }
    }

    #[test]
    fn weight_display() {
        assert_eq!(Weight::from_twice(1).to_string(), "1/2");
        assert_eq!(Weight::integral(4).to_string(), "4");
    }
}
