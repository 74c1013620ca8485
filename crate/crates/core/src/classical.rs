//! Evaluators for the classical examples: Dedekind eta, the Eisenstein
//! series `E4`, `E6` in lattice-sum normalization, the finite products
//! `Z_N`, and the two-component function `eta-hat` on `H*`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::automorphy::{standard_grid, HalfPlanePoint};
use crate::error::{Error, Result};
use crate::meta_group::MetaElt;
use crate::rep::{ind_form, CoverGroup, Rep, VVForm};
use crate::slash::{slash, Evaluator, HoloFn, Weight};
use crate::C64;

/// Truncation policy for q-series and q-products.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QSeriesConfig {
    /// Bound on the neglected tail.
    pub tail_tolerance: f64,
    pub max_terms: u64,
    /// Evaluation is refused for `Im z` below this.
    pub min_imag: f64,
}

impl Default for QSeriesConfig {
    fn default() -> Self {
        QSeriesConfig { tail_tolerance: 1e-17, max_terms: 1_000_000, min_imag: 0.05 }
    }
}

impl QSeriesConfig {
    /// Configuration for transformation checks, where `gamma z` can sit
    /// much closer to the real axis than any user-supplied point.
    pub fn certification() -> Self {
        QSeriesConfig { min_imag: 1e-4, ..QSeriesConfig::default() }
    }

    fn check_point(&self, z: C64) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NearRealAxis { imag: z.im, min: self.min_imag });
        }
        if z.im <= 0.0 {
            return Err(Error::WrongHalfPlane { re: z.re, im: z.im, expected: "upper" });
        }
        if z.im < self.min_imag {
            return Err(Error::NearRealAxis { imag: z.im, min: self.min_imag });
        }
        Ok(())
    }
}

/// `e^(2 pi i n z)` for `n = 1, 2, ...`, by running products that are
/// refreshed from an exact exponential every 64 steps.
struct QPowers {
    z: C64,
    q: C64,
    current: C64,
    n: u64,
}

impl QPowers {
    fn new(z: C64) -> Self {
        let q = (C64::new(0.0, 2.0 * PI) * z).exp();
        QPowers { z, q, current: C64::new(1.0, 0.0), n: 0 }
    }
}

impl Iterator for QPowers {
    type Item = C64;
    fn next(&mut self) -> Option<C64> {
        self.n += 1;
        self.current = if self.n.is_multiple_of(64) {
            (C64::new(0.0, 2.0 * PI * self.n as f64) * self.z).exp()
        } else {
            self.current * self.q
        };
        Some(self.current)
    }
}

/// Number of factors of `prod (1 - q^n)` needed so that
/// `|q|^(N+1) / (1 - |q|) < tol`.
fn product_terms(r: f64, cfg: &QSeriesConfig) -> Result<u64> {
    // log-space: (N+1) ln r < ln(tol (1 - r))
    let need = libm::log(cfg.tail_tolerance * (1.0 - r)) / libm::log(r) - 1.0;
    let n = if need.is_finite() { libm::ceil(need.max(0.0)) as u64 } else { u64::MAX };
    if n > cfg.max_terms {
        return Err(Error::MaxTermsExceeded { needed: n, cap: cfg.max_terms });
    }
    Ok(n)
}

/// `eta(z) = e^(pi i z / 12) prod_{n >= 1} (1 - e^(2 pi i n z))`.
pub fn eta(z: C64, cfg: &QSeriesConfig) -> Result<C64> {
    cfg.check_point(z)?;
    let r = libm::exp(-2.0 * PI * z.im);
    let terms = product_terms(r, cfg)?;
    let mut prod = C64::new(1.0, 0.0);
    for qn in QPowers::new(z).take(terms as usize) {
        prod *= C64::new(1.0, 0.0) - qn;
    }
    Ok((C64::new(0.0, PI / 12.0) * z).exp() * prod)
}

pub const ZETA_4: f64 = PI * PI * PI * PI / 90.0;
pub const ZETA_6: f64 = PI * PI * PI * PI * PI * PI / 945.0;

/// `sigma_p(n)` for `1 <= n <= len`, index 0 unused.
fn divisor_sums(len: usize, p: i32) -> Vec<f64> {
    let mut sigma = vec![0.0; len + 1];
    for d in 1..=len {
        let dp = libm::pow(d as f64, p as f64);
        for m in (d..=len).step_by(d) {
            sigma[m] += dp;
        }
    }
    sigma
}

/// Terms needed for `sum sigma_{k-1}(n) q^n` with `sigma_{k-1}(n) <= 2 n^(k-1)`.
fn eisenstein_terms(k: i32, r: f64, scale: f64, cfg: &QSeriesConfig) -> Result<u64> {
    let mut n: u64 = 1;
    loop {
        let nf = (n + 1) as f64;
        let ratio = r * libm::pow((nf + 1.0) / nf, (k - 1) as f64);
        if ratio < 1.0 {
            let head = 2.0 * scale * libm::pow(nf, (k - 1) as f64) * libm::pow(r, nf);
            if head / (1.0 - ratio) < cfg.tail_tolerance {
                return Ok(n);
            }
        }
        n = if n < 64 { n + 1 } else { n + n / 8 };
        if n > cfg.max_terms {
            return Err(Error::MaxTermsExceeded { needed: n, cap: cfg.max_terms });
        }
    }
}

/// `E_k(z) = sum_{(m,n) != 0} (mz + n)^-k`, computed as
/// `2 zeta(k) (1 + c_k sum sigma_{k-1}(n) q^n)` with `c_4 = 240`, `c_6 = -504`.
pub fn eisenstein(k: i64, z: C64, cfg: &QSeriesConfig) -> Result<C64> {
    let (zeta, c) = match k {
        4 => (ZETA_4, 240.0),
        6 => (ZETA_6, -504.0),
        _ => return Err(Error::UnsupportedWeight(k)),
    };
    cfg.check_point(z)?;
    let r = libm::exp(-2.0 * PI * z.im);
    let terms = eisenstein_terms(k as i32, r, f64::abs(c), cfg)?;
    let sigma = divisor_sums(terms as usize, (k - 1) as i32);
    let mut sum = C64::new(0.0, 0.0);
    for (n, qn) in QPowers::new(z).take(terms as usize).enumerate() {
        sum += qn * sigma[n + 1];
    }
    Ok((C64::new(1.0, 0.0) + sum * c) * (2.0 * zeta))
}

/// `sum (mz + n)^-k` over `|m|, |n| <= cutoff`, `(m, n) != (0, 0)`.
///
/// The terms for `n` and `-n` are added in pairs, so the result at `-z` is
/// bit-for-bit the result at `z`.
pub fn lattice_sum(k: u32, z: C64, cutoff: u32) -> Result<C64> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::UnsupportedWeight(k as i64));
    }
    let half = (k / 2) as i32;
    let term = |w: C64| (w * w).powi(half).inv();
    let m_max = cutoff as i64;
    let mut total = C64::new(0.0, 0.0);
    for m in -m_max..=m_max {
        let mz = z * m as f64;
        if m != 0 {
            total += term(mz);
        }
        for n in 1..=m_max {
            total += term(mz + n as f64) + term(mz - n as f64);
        }
    }
    Ok(total)
}

/// Extends an upper-half-plane function to `H*` by `f(z) = f(-z)`.
pub fn even_extension(dim: usize, f_upper: Evaluator) -> HoloFn {
    let lower = f_upper.clone();
    HoloFn::from_evaluators(dim, f_upper, Arc::new(move |z: C64| lower(-z)))
}

/// `Z_N(z)` computed directly and in factored form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZnValue {
    /// `prod_{n=1}^N (e^(-pi i n z) - e^(pi i n z))`.
    pub direct: C64,
    /// `e^(-pi i z N(N+1)/2) prod_{n=1}^N (1 - e^(2 pi i n z))`.
    pub factored: C64,
}

pub fn z_n_product(n_max: u32, z: C64) -> ZnValue {
    let one = C64::new(1.0, 0.0);
    let mut direct = one;
    let mut tail = one;
    for n in 1..=n_max {
        let t = PI * n as f64;
        // pi i n z, built so that z -> -z negates it exactly
        let a = C64::new(-t * z.im, t * z.re);
        direct *= (-a).exp() - a.exp();
        tail *= one - (a + a).exp();
    }
    let tri = (n_max as f64) * (n_max as f64 + 1.0) / 2.0;
    let factored = (C64::new(0.0, -PI * tri) * z).exp() * tail;
    ZnValue { direct, factored }
}

/// `eta-hat(z)`: `(eta(z), 0)` above, `(0, i eta(-z))` below.
pub fn eta_hat(z: C64, cfg: &QSeriesConfig) -> Result<[C64; 2]> {
    let zero = C64::new(0.0, 0.0);
    if z.im > 0.0 {
        Ok([eta(z, cfg)?, zero])
    } else if z.im < 0.0 {
        Ok([zero, C64::i() * eta(-z, cfg)?])
    } else {
        Err(Error::NearRealAxis { imag: 0.0, min: cfg.min_imag })
    }
}

/// Nearest `n`-th root of unity `e^(2 pi i j / n)`: returns `(j, root, distance)`.
pub fn snap_to_root_of_unity(v: C64, n: u32) -> (u32, C64, f64) {
    let step = 2.0 * PI / n as f64;
    let j = libm::round(v.arg() / step) as i64;
    let j = j.rem_euclid(n as i64) as u32;
    let root = C64::from_polar(1.0, step * j as f64);
    (j, root, (v - root).norm())
}

/// Raw and snapped values of the eta multiplier on a generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacterValue {
    pub raw: C64,
    /// Exponent `j` of `e^(2 pi i j / 24)`.
    pub exponent: u32,
    pub snapped: C64,
    pub snap_distance: f64,
}

/// The point at which the eta multiplier is read off.
pub const CHARACTER_BASE_POINT: C64 = C64::new(0.1, 1.3);

fn eta_upper_fn(cfg: QSeriesConfig) -> HoloFn {
    HoloFn::upper_only(1, move |z| Ok(vec![eta(z, &cfg)?]))
}

/// `(eta |_{1/2} g)(z0) / eta(z0)` for `g` in `{S~, T~}`, snapped to 24th roots.
pub fn eta_character_at(z0: C64, cfg: &QSeriesConfig) -> Result<[CharacterValue; 2]> {
    let p = HalfPlanePoint::new(z0)?;
    let f = eta_upper_fn(*cfg);
    let base = eta(z0, cfg)?;
    let k = Weight::from_twice(1);
    let mut out = [CharacterValue { raw: base, exponent: 0, snapped: base, snap_distance: 0.0 }; 2];
    for (slot, g) in out.iter_mut().zip([MetaElt::s(), MetaElt::t()]) {
        let raw = slash(&f, k, g).eval(p)?[0] / base;
        let (exponent, snapped, snap_distance) = snap_to_root_of_unity(raw, 24);
        *slot = CharacterValue { raw, exponent, snapped, snap_distance };
    }
    Ok(out)
}

/// Snap distances above this are reported as an error.
pub const SNAP_TOLERANCE: f64 = 1e-10;

/// The multiplier system of eta as a one-dimensional SL-cover representation.
pub fn eta_character() -> Result<Rep> {
    let [s, t] = eta_character_at(CHARACTER_BASE_POINT, &QSeriesConfig::default())?;
    for v in [s, t] {
        if v.snap_distance.is_nan() || v.snap_distance >= SNAP_TOLERANCE {
            return Err(Error::RepMismatch(v.snap_distance));
        }
    }
    Rep::scalar_sl(s.snapped, t.snapped)
}

/// `eta` as a weight-1/2 form for its multiplier system, on the upper half-plane.
pub fn eta_form(cfg: QSeriesConfig) -> Result<VVForm> {
    VVForm::new(eta_upper_fn(cfg), Weight::from_twice(1), eta_character()?)
}

/// `eta^n` with the character `rho_eta^n`, of weight `n/2`.
pub fn eta_power_form(n: u32, cfg: QSeriesConfig) -> Result<VVForm> {
    let [s, t] = eta_character_at(CHARACTER_BASE_POINT, &QSeriesConfig::default())?;
    let root = |j: u32| C64::from_polar(1.0, 2.0 * PI * ((j * n) % 24) as f64 / 24.0);
    let rep = Rep::scalar_sl(root(s.exponent), root(t.exponent))?;
    let f = HoloFn::upper_only(1, move |z| Ok(vec![eta(z, &cfg)?.powi(n as i32)]));
    VVForm::new(f, Weight::from_twice(n as i64), rep)
}

/// Even extension of `E_k` to `H*` with the trivial GL-cover character.
pub fn eisenstein_form(k: i64, cfg: QSeriesConfig) -> Result<VVForm> {
    if k != 4 && k != 6 {
        return Err(Error::UnsupportedWeight(k));
    }
    let upper: Evaluator = Arc::new(move |z| Ok(vec![eisenstein(k, z, &cfg)?]));
    VVForm::new(even_extension(1, upper), Weight::integral(k), Rep::trivial(CoverGroup::Gl))
}

/// `eta-hat = Ind(eta, 0)` with representation `Ind rho_eta`, certified on the
/// standard grid.
pub fn eta_hat_form(cfg: QSeriesConfig) -> Result<VVForm> {
    let f = eta_form(cfg)?;
    let k = f.weight();
    let g = VVForm::new(HoloFn::zero(1), k, f.rep().r_twist()?)?;
    ind_form(&f, &g, k, &standard_grid(), 1e-9)
}

/// The forms reachable by name from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedForm {
    Eta,
    E4,
    E6,
    EtaHat,
    Zn(u32),
}

impl NamedForm {
    /// Natural weight as `w = 2k`; `None` for `Z_N`, which is not modular.
    pub fn default_weight(self) -> Option<Weight> {
        match self {
            NamedForm::Eta | NamedForm::EtaHat => Some(Weight::from_twice(1)),
            NamedForm::E4 => Some(Weight::integral(4)),
            NamedForm::E6 => Some(Weight::integral(6)),
            NamedForm::Zn(_) => None,
        }
    }

    /// The form together with its representation.
    pub fn form(self, cfg: QSeriesConfig) -> Result<VVForm> {
        match self {
            NamedForm::Eta => eta_form(cfg),
            NamedForm::E4 => eisenstein_form(4, cfg),
            NamedForm::E6 => eisenstein_form(6, cfg),
            NamedForm::EtaHat => eta_hat_form(cfg),
            NamedForm::Zn(_) => Err(Error::Parse("zn:N is not a modular form".into())),
        }
    }

    /// Value at `z`; `Z_N` returns its direct product.
    pub fn evaluate(self, z: C64, cfg: &QSeriesConfig) -> Result<Vec<C64>> {
        let upper_or_reflect = |f: &dyn Fn(C64) -> Result<C64>| {
            if z.im.abs() < cfg.min_imag {
                Err(Error::NearRealAxis { imag: z.im.abs(), min: cfg.min_imag })
            } else if z.im > 0.0 {
                f(z)
            } else {
                f(-z)
            }
        };
        match self {
            NamedForm::Eta => {
                cfg.check_point(z)?;
                Ok(vec![eta(z, cfg)?])
            }
            NamedForm::E4 => Ok(vec![upper_or_reflect(&|w| eisenstein(4, w, cfg))?]),
            NamedForm::E6 => Ok(vec![upper_or_reflect(&|w| eisenstein(6, w, cfg))?]),
            NamedForm::EtaHat => {
                if z.im.abs() < cfg.min_imag {
                    return Err(Error::NearRealAxis { imag: z.im.abs(), min: cfg.min_imag });
                }
                Ok(eta_hat(z, cfg)?.to_vec())
            }
            NamedForm::Zn(n) => Ok(vec![z_n_product(n, z).direct]),
        }
    }
}

impl fmt::Display for NamedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedForm::Eta => f.write_str("eta"),
            NamedForm::E4 => f.write_str("e4"),
            NamedForm::E6 => f.write_str("e6"),
            NamedForm::EtaHat => f.write_str("eta-hat"),
            NamedForm::Zn(n) => write!(f, "zn:{n}"),
        }
    }
}

impl FromStr for NamedForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "eta" => Ok(NamedForm::Eta),
            "e4" => Ok(NamedForm::E4),
            "e6" => Ok(NamedForm::E6),
            "eta-hat" => Ok(NamedForm::EtaHat),
            other => other
                .strip_prefix("zn:")
                .and_then(|n| n.parse().ok())
                .map(NamedForm::Zn)
                .ok_or_else(|| Error::Parse(alloc::format!("unknown form {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn eta_at_i() {
        let v = eta(C64::i(), &QSeriesConfig::default()).unwrap();
        assert!((v - C64::new(0.768_225_422_326_056_6, 0.0)).norm() < 1e-14, "{v}");
    }

    #[test]
    fn refuses_points_near_axis() {
        let cfg = QSeriesConfig::default();
        assert!(matches!(eta(C64::new(0.0, 0.01), &cfg), Err(Error::NearRealAxis { .. })));
        assert!(matches!(eta(C64::new(0.0, -1.0), &cfg), Err(Error::WrongHalfPlane { .. })));
        let tight = QSeriesConfig { max_terms: 10, ..cfg };
        assert!(matches!(eta(C64::new(0.0, 0.1), &tight), Err(Error::MaxTermsExceeded { .. })));
    }

    #[test]
    fn eisenstein_rejects_other_weights() {
        let cfg = QSeriesConfig::default();
        assert_eq!(eisenstein(8, C64::i(), &cfg), Err(Error::UnsupportedWeight(8)));
        assert!(lattice_sum(3, C64::i(), 2).is_err());
    }

    #[test]
    fn lattice_sum_hand_case() {
        // (m,n) in {-1,0,1}^2 minus origin at z = i:
        // n = +-1, m = 0: 2; m = +-1, n = 0: 2 (i^-4 = 1); corners (+-i +-1)^-4 = -1/4 each
        let v = lattice_sum(4, C64::i(), 1).unwrap();
        assert!((v - C64::new(3.0, 0.0)).norm() < 1e-15, "{v}");
    }

    #[test]
    fn lattice_sum_is_even() {
        let z = C64::new(0.3, 1.7);
        assert_eq!(lattice_sum(4, z, 30).unwrap(), lattice_sum(4, -z, 30).unwrap());
    }

    #[test]
    fn divisor_sums_small() {
        let s = divisor_sums(6, 3);
        assert_eq!(&s[1..], &[1.0, 9.0, 28.0, 73.0, 126.0, 252.0]);
    }

    #[test]
    fn zn_empty_and_parity() {
        let z = C64::new(0.2, 0.4);
        assert_eq!(z_n_product(0, z).direct, C64::new(1.0, 0.0));
        for n in 1..=12 {
            let a = z_n_product(n, z).direct;
            let b = z_n_product(n, -z).direct;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(b, a * sign);
        }
    }

    #[test]
    fn snapping() {
        let (j, root, d) = snap_to_root_of_unity(C64::from_polar(1.0, -PI / 4.0 + 1e-13), 24);
        assert_eq!(j, 21);
        assert!(d < 1e-12);
        assert!((root - C64::from_polar(1.0, -PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn named_form_round_trip() {
        for s in ["eta", "e4", "e6", "eta-hat", "zn:7"] {
            assert_eq!(s.parse::<NamedForm>().unwrap().to_string(), s);
        }
        assert!("zn:x".parse::<NamedForm>().is_err());
        assert!("theta".parse::<NamedForm>().is_err());
    }
}
