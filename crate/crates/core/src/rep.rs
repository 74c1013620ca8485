//! Finite-dimensional representations of the two covers and vector-valued
//! modular forms on `H*`.
//!
//! A [`Rep`] stores only the images of the lifted generators. The value on
//! any other element is obtained by lift-and-correct: decompose the matrix
//! into a word, multiply the generator images along it, and multiply by the
//! image of `[I,-1]` (which is `rho(S~)^4`) when the word's cover sign differs
//! from the element's.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, DVector};

use crate::automorphy::{wrong_half, HalfPlanePoint};
use crate::error::{Error, Result};
use crate::meta_group::{word_decompose, Gen, MetaElt, Word};
use crate::slash::{slash, Evaluator, HoloFn, Weight};
use crate::C64;

pub type CMat = DMatrix<C64>;

/// Which cover a representation is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverGroup {
    /// The cover of `SL2(Z)`, generated by `S~` and `T~`.
    Sl,
    /// The cover of `GL2(Z)`, generated by `S~`, `T~` and `R~`.
    Gl,
}

impl CoverGroup {
    pub fn name(self) -> &'static str {
        match self {
            CoverGroup::Sl => "SL",
            CoverGroup::Gl => "GL",
        }
    }

    /// Lifted generators of the group.
    pub fn generators(self) -> Vec<MetaElt> {
        match self {
            CoverGroup::Sl => alloc::vec![MetaElt::s(), MetaElt::t()],
            CoverGroup::Gl => alloc::vec![MetaElt::s(), MetaElt::t(), MetaElt::r()],
        }
    }
}

impl fmt::Display for CoverGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn checked_inverse(m: &CMat) -> Result<CMat> {
    let inv = m.clone().try_inverse().ok_or(Error::Singular)?;
    if inv.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
        Ok(inv)
    } else {
        Err(Error::Singular)
    }
}

fn block_matrix(tl: &CMat, tr: &CMat, bl: &CMat, br: &CMat) -> CMat {
    let n = tl.nrows();
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(tl);
    out.view_mut((0, n), (n, n)).copy_from(tr);
    out.view_mut((n, 0), (n, n)).copy_from(bl);
    out.view_mut((n, n), (n, n)).copy_from(br);
    out
}

/// A representation of one of the covers, given by generator images.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep {
    group: CoverGroup,
    dim: usize,
    s: CMat,
    t: CMat,
    r: Option<CMat>,
    s_inv: CMat,
    t_inv: CMat,
}

impl Rep {
    fn build(group: CoverGroup, s: CMat, t: CMat, r: Option<CMat>) -> Result<Rep> {
        let dim = s.nrows();
        for m in [Some(&s), Some(&t), r.as_ref()].into_iter().flatten() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.nrows().max(m.ncols()) });
            }
        }
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(r) = &r {
            checked_inverse(r)?;
        }
        let (s_inv, t_inv) = (checked_inverse(&s)?, checked_inverse(&t)?);
        Ok(Rep { group, dim, s, t, r, s_inv, t_inv })
    }

    pub fn new_sl(s: CMat, t: CMat) -> Result<Rep> {
        Rep::build(CoverGroup::Sl, s, t, None)
    }

    pub fn new_gl(s: CMat, t: CMat, r: CMat) -> Result<Rep> {
        Rep::build(CoverGroup::Gl, s, t, Some(r))
    }

    /// One-dimensional representation from scalar images.
    pub fn scalar_sl(s: C64, t: C64) -> Result<Rep> {
        Rep::new_sl(CMat::from_element(1, 1, s), CMat::from_element(1, 1, t))
    }

    pub fn scalar_gl(s: C64, t: C64, r: C64) -> Result<Rep> {
        Rep::new_gl(CMat::from_element(1, 1, s), CMat::from_element(1, 1, t), CMat::from_element(1, 1, r))
    }

    pub fn trivial(group: CoverGroup) -> Rep {
        let one = CMat::identity(1, 1);
        let r = (group == CoverGroup::Gl).then(|| one.clone());
        Rep::build(group, one.clone(), one, r).expect("identity is invertible")
    }

    pub fn group(&self) -> CoverGroup {
        self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s_image(&self) -> &CMat {
        &self.s
    }

    pub fn t_image(&self) -> &CMat {
        &self.t
    }

    pub fn r_image(&self) -> Option<&CMat> {
        self.r.as_ref()
    }

    fn require(&self, group: CoverGroup) -> Result<()> {
        if self.group == group {
            Ok(())
        } else {
            Err(Error::GroupMismatch { expected: group.name(), found: self.group.name() })
        }
    }

    pub fn generator_image(&self, g: Gen) -> Result<&CMat> {
        match g {
            Gen::S => Ok(&self.s),
            Gen::SInv => Ok(&self.s_inv),
            Gen::T => Ok(&self.t),
            Gen::TInv => Ok(&self.t_inv),
            Gen::R => self.r.as_ref().ok_or(Error::GroupMismatch { expected: "GL", found: "SL" }),
        }
    }

    /// `rho([I,-1]) := rho(S~)^4`.
    pub fn central_image(&self) -> CMat {
        let s2 = &self.s * &self.s;
        &s2 * &s2
    }

    /// Lift-and-correct value on an arbitrary element, using the canonical word.
    pub fn eval(&self, x: &MetaElt) -> Result<CMat> {
        if self.group == CoverGroup::Sl && x.det() != 1 {
            return Err(Error::GroupMismatch { expected: "GL", found: "SL" });
        }
        self.eval_word(&word_decompose(&x.gamma), x)
    }

    /// Lift-and-correct along a caller-supplied word for `x.gamma`.
    pub fn eval_word(&self, word: &Word, x: &MetaElt) -> Result<CMat> {
        debug_assert_eq!(word.matrix(), x.gamma);
        let mut acc = CMat::identity(self.dim, self.dim);
        for g in &word.0 {
            acc *= self.generator_image(*g)?;
        }
        if word.lift().eps != x.eps {
            acc *= self.central_image();
        }
        Ok(acc)
    }

    /// `rho^R(g) := rho(R~ g R~^-1)`.
    pub fn r_twist(&self) -> Result<Rep> {
        self.require(CoverGroup::Sl)?;
        let s = self.eval(&MetaElt::s().conj_by_r())?;
        let t = self.eval(&MetaElt::t().conj_by_r())?;
        Rep::new_sl(s, t)
    }

    /// The induced representation of the GL cover on `V + V`.
    pub fn induce(&self, k: Weight) -> Result<Rep> {
        self.require(CoverGroup::Sl)?;
        let s = induced_value(self, k, &MetaElt::s())?;
        let t = induced_value(self, k, &MetaElt::t())?;
        let r = induced_value(self, k, &MetaElt::r())?;
        Rep::new_gl(s, t, r)
    }

    /// Restriction of a GL-cover representation to the SL cover.
    pub fn restrict(&self) -> Result<Rep> {
        self.require(CoverGroup::Gl)?;
        Rep::new_sl(self.s.clone(), self.t.clone())
    }

    /// Largest entrywise distance between generator images.
    pub fn distance(&self, other: &Rep) -> f64 {
        if self.group != other.group || self.dim != other.dim {
            return f64::INFINITY;
        }
        let mut d = max_abs_diff(&self.s, &other.s).max(max_abs_diff(&self.t, &other.t));
        if let (Some(a), Some(b)) = (&self.r, &other.r) {
            d = d.max(max_abs_diff(a, b));
        }
        d
    }

    /// Residual of the defining relations of the cover:
    /// `S^2 = (ST)^3`, `S^8 = 1`, and for GL also `R^2 = S^4`,
    /// `R S R^-1 = S^-1`, `R T R^-1 = T^-1`.
    pub fn relation_residual(&self) -> f64 {
        let n = self.dim;
        let id = CMat::identity(n, n);
        let s2 = &self.s * &self.s;
        let st = &self.s * &self.t;
        let st3 = &st * &st * &st;
        let s4 = &s2 * &s2;
        let mut worst = max_abs_diff(&s2, &st3).max(max_abs_diff(&(&s4 * &s4), &id));
        if let Some(r) = &self.r {
            let r_inv = checked_inverse(r).expect("checked at construction");
            worst = worst
                .max(max_abs_diff(&(r * r), &s4))
                .max(max_abs_diff(&(r * &self.s * &r_inv), &self.s_inv))
                .max(max_abs_diff(&(r * &self.t * &r_inv), &self.t_inv));
        }
        worst
    }
}

/// `(Ind rho)(x)` read directly off the block rule:
/// `diag(rho(g), rho(R~ g R~^-1))` for `x = g` of determinant one, and
/// `((0, rho(R~ g R~^-1)), ((-1)^2k rho(g), 0))` for `x = R~ g`.
pub fn induced_value(rho: &Rep, k: Weight, x: &MetaElt) -> Result<CMat> {
    rho.require(CoverGroup::Sl)?;
    let n = rho.dim;
    let zero = CMat::zeros(n, n);
    if x.det() == 1 {
        let a = rho.eval(x)?;
        let b = rho.eval(&x.conj_by_r())?;
        Ok(block_matrix(&a, &zero, &zero, &b))
    } else {
        let g = MetaElt::r().inv() * *x;
        let top = rho.eval(&g.conj_by_r())?;
        let bottom = rho.eval(&g)? * k.minus_one_pow().to_complex();
        Ok(block_matrix(&zero, &top, &bottom, &zero))
    }
}

/// A function on `H*` (or on the upper half-plane, for SL-cover forms)
/// together with a weight and a representation.
#[derive(Clone, Debug)]
pub struct VVForm {
    f: HoloFn,
    k: Weight,
    rep: Rep,
}

/// Points a form of the given group is checked on: SL-cover forms live on
/// the upper half-plane only.
fn usable_samples(group: CoverGroup, samples: &[HalfPlanePoint]) -> Vec<HalfPlanePoint> {
    match group {
        CoverGroup::Sl => samples.iter().copied().filter(HalfPlanePoint::is_upper).collect(),
        CoverGroup::Gl => samples.to_vec(),
    }
}

impl VVForm {
    /// Pairs a function with a representation without checking modularity.
    pub fn new(f: HoloFn, k: Weight, rep: Rep) -> Result<VVForm> {
        if f.dim() != rep.dim() {
            return Err(Error::DimensionMismatch { expected: rep.dim(), found: f.dim() });
        }
        Ok(VVForm { f, k, rep })
    }

    /// Like [`VVForm::new`], then requires [`VVForm::certify`] to pass.
    pub fn certified(f: HoloFn, k: Weight, rep: Rep, samples: &[HalfPlanePoint], tol: f64) -> Result<VVForm> {
        let form = VVForm::new(f, k, rep)?;
        form.certify(samples, tol)?;
        Ok(form)
    }

    pub fn function(&self) -> &HoloFn {
        &self.f
    }

    pub fn weight(&self) -> Weight {
        self.k
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    /// `max |(f|_k x)(z) - rho(x) f(z)|` over the samples.
    pub fn modularity_residual(&self, x: &MetaElt, samples: &[HalfPlanePoint]) -> Result<f64> {
        let rho = self.rep.eval(x)?;
        let moved = slash(&self.f, self.k, *x);
        let mut worst = 0.0f64;
        for z in usable_samples(self.rep.group(), samples) {
            let lhs = DVector::from_vec(moved.eval(z)?);
            let rhs = &rho * DVector::from_vec(self.f.eval(z)?);
            worst = worst.max(lhs.iter().zip(rhs.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
        Ok(worst)
    }

    /// Checks the transformation law on the generators of the group; returns
    /// the largest residual.
    pub fn certify(&self, samples: &[HalfPlanePoint], tol: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        for x in self.rep.group().generators() {
            let res = self.modularity_residual(&x, samples)?;
            if res.is_nan() || res > tol {
                return Err(Error::NotModular { generator: x.to_string(), residual: res, tolerance: tol });
            }
            worst = worst.max(res);
        }
        Ok(worst)
    }

    /// Restriction of a GL-cover form to the upper half-plane with `Res rho`.
    /// The upper evaluator is shared, not copied.
    pub fn restrict(&self) -> Result<VVForm> {
        let rep = self.rep.restrict()?;
        let lower: Evaluator = alloc::sync::Arc::new(|z: C64| Err(wrong_half(z, "upper")));
        VVForm::new(HoloFn::from_evaluators(self.f.dim(), self.f.upper().clone(), lower), self.k, rep)
    }

    /// Components `range` of the vector-valued function.
    pub fn project(&self, range: core::ops::Range<usize>) -> HoloFn {
        project(&self.f, range)
    }
}

/// Components `range` of `f`.
pub fn project(f: &HoloFn, range: core::ops::Range<usize>) -> HoloFn {
    let (u, l) = (f.upper().clone(), f.lower().clone());
    let (r1, r2) = (range.clone(), range.clone());
    HoloFn::new(range.len(), move |z| u(z).map(|v| v[r1.clone()].to_vec()), move |z| l(z).map(|v| v[r2.clone()].to_vec()))
}

/// Extends a form on the upper half-plane for `Res rho` to `H*`, with lower
/// restriction `f-(z) = i^(2k) rho(R~)^-1 f+(-z)`.
///
/// Fails if `f_plus` does not transform under `Res rho` on the samples, or
/// if the extension does not certify for `rho` on both half-planes.
pub fn extend_form(
    f_plus: Evaluator,
    dim: usize,
    k: Weight,
    rep: &Rep,
    samples: &[HalfPlanePoint],
    tol: f64,
) -> Result<VVForm> {
    rep.require(CoverGroup::Gl)?;
    let upper = f_plus.clone();
    let upper_form = VVForm::new(HoloFn::upper_only(dim, move |z| upper(z)), k, rep.restrict()?)?;
    upper_form.certify(samples, tol)?;

    let r_inv = checked_inverse(rep.r_image().expect("GL rep"))? * k.i_pow().to_complex();
    let source = f_plus.clone();
    let lower: Evaluator = alloc::sync::Arc::new(move |z: C64| {
        let v = DVector::from_vec(source(-z)?);
        Ok((&r_inv * v).iter().copied().collect())
    });
    VVForm::certified(HoloFn::from_evaluators(dim, f_plus, lower), k, rep.clone(), samples, tol)
}

/// `Ind(f, g)` for `f` modular for `rho` and `g` modular for `rho^R`:
/// upper restriction `(f, g)`, lower restriction
/// `((-i)^(2k) g(-z), i^(2k) f(-z))`, with representation `Ind rho`.
pub fn ind_form(f: &VVForm, g: &VVForm, k: Weight, samples: &[HalfPlanePoint], tol: f64) -> Result<VVForm> {
    f.rep.require(CoverGroup::Sl)?;
    g.rep.require(CoverGroup::Sl)?;
    for w in [f.k, g.k] {
        if w != k {
            return Err(Error::WeightMismatch(w.twice(), k.twice()));
        }
    }
    if f.f.dim() != g.f.dim() {
        return Err(Error::DimensionMismatch { expected: f.f.dim(), found: g.f.dim() });
    }
    let twisted = f.rep.r_twist()?;
    let gap = twisted.distance(&g.rep);
    if gap.is_nan() || gap > tol {
        return Err(Error::RepMismatch(gap));
    }
    let n = f.f.dim();
    let (fu, gu) = (f.f.upper().clone(), g.f.upper().clone());
    let (fl, gl) = (fu.clone(), gu.clone());
    let (a, b) = (k.minus_i_pow().to_complex(), k.i_pow().to_complex());
    let upper = move |z: C64| -> Result<Vec<C64>> {
        let mut v = fu(z)?;
        v.extend(gu(z)?);
        Ok(v)
    };
    let lower = move |z: C64| -> Result<Vec<C64>> {
        let mut v: Vec<C64> = gl(-z)?.into_iter().map(|x| x * a).collect();
        v.extend(fl(-z)?.into_iter().map(|x| x * b));
        Ok(v)
    };
    VVForm::certified(HoloFn::new(2 * n, upper, lower), k, f.rep.induce(k)?, samples, tol)
}
