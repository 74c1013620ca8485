//! `GL2(Z)` and its metaplectic double cover.
//!
//! The cover is realized as pairs `[gamma, eps]` with `eps` in `{+1, -1}` and
//! product `[a, e][b, d] = [ab, A(a, b) e d]`, where `A` is Kubota's twisted
//! 2-cocycle built from the Hilbert symbol at the real place.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Mul, Neg};
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Default cap on the word length accepted by [`enumerate_cover`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// A 2x2 integer matrix with determinant +1 or -1, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new_unchecked(1, 0, 0, 1);
    pub const NEG_IDENTITY: Mat2 = Mat2::new_unchecked(-1, 0, 0, -1);
    pub const S: Mat2 = Mat2::new_unchecked(0, -1, 1, 0);
    pub const T: Mat2 = Mat2::new_unchecked(1, 1, 0, 1);
    /// The reflection `z -> -z`.
    pub const R: Mat2 = Mat2::new_unchecked(-1, 0, 0, 1);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = Mat2 { a, b, c, d };
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc))
            .ok_or(Error::Parse("matrix entries overflow".into()))?;
        if det == 1 || det == -1 {
            Ok(m)
        } else {
            Err(Error::NotInvertible(det))
        }
    }

    /// Caller guarantees `ad - bc = +-1`.
    pub const fn new_unchecked(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn checked_mul(&self, o: &Mat2) -> Option<Mat2> {
        let dot = |x: i64, y: i64, u: i64, v: i64| x.checked_mul(y)?.checked_add(u.checked_mul(v)?);
        Some(Mat2 {
            a: dot(self.a, o.a, self.b, o.c)?,
            b: dot(self.a, o.b, self.b, o.d)?,
            c: dot(self.c, o.a, self.d, o.c)?,
            d: dot(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2 { a: det * self.d, b: -det * self.b, c: -det * self.c, d: det * self.a }
    }

    pub fn pow(&self, n: i64) -> Mat2 {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Mat2::IDENTITY, |acc, _| acc * base)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        self.checked_mul(&o).expect("integer overflow in Mat2 product")
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2 {
    type Err = Error;

    /// Parses `[[a,b],[c,d]]`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(alloc::format!("malformed matrix {s:?}; expected [[a,b],[c,d]]"));
        let compact: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|t| t.strip_suffix("]]"))
            .ok_or_else(bad)?;
        let (top, bottom) = inner.split_once("],[").ok_or_else(bad)?;
        let row = |r: &str| -> Result<(i64, i64)> {
            let (x, y) = r.split_once(',').ok_or_else(bad)?;
            Ok((x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
        };
        let (a, b) = row(top)?;
        let (c, d) = row(bottom)?;
        Mat2::new(a, b, c, d)
    }
}

/// Kubota's function: the lower-left entry if nonzero, else the lower-right one.
/// Never zero for an invertible matrix.
pub fn chi(m: &Mat2) -> i64 {
    if m.c != 0 {
        m.c
    } else {
        m.d
    }
}

/// An element of `{+1, -1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: i64) -> Sign {
        if x < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_i64() as f64
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        if self == o {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::Parse(alloc::format!("malformed sign {other:?}; expected +1 or -1"))),
        }
    }
}

/// Hilbert symbol at the real place: -1 iff both arguments are negative.
pub fn hilbert(a: Ratio<i64>, b: Ratio<i64>) -> Result<Sign> {
    if a == Ratio::from_integer(0) || b == Ratio::from_integer(0) {
        return Err(Error::ZeroArgument);
    }
    Ok(hilbert_of_signs(a.is_negative(), b.is_negative()))
}

fn hilbert_of_signs(a_negative: bool, b_negative: bool) -> Sign {
    if a_negative && b_negative {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

fn hilbert_int(a: i64, b: i64) -> Sign {
    hilbert(Ratio::from_integer(a), Ratio::from_integer(b)).expect("chi is never zero")
}

/// Kubota's twisted 2-cocycle
/// `A(a, b) = (det a, det b) (chi(ab)/chi(a), chi(ab)/(chi(b) det a))`.
///
/// The two ratios are formed as exact rationals before the symbol reads
/// their signs.
pub fn cocycle(alpha: &Mat2, beta: &Mat2) -> Sign {
    let det_a = alpha.det();
    let chi_ab = chi(&(*alpha * *beta));
    let first = hilbert_int(det_a, beta.det());
    let left = Ratio::new(chi_ab, chi(alpha));
    let right = Ratio::new(chi_ab, chi(beta) * det_a);
    first * hilbert(left, right).expect("chi is never zero")
}

/// Sign-only evaluation of [`cocycle`] from precomputed data.
///
/// `det_*` are determinants and `chi_*` values of Kubota's function for
/// `alpha`, `beta` and `alpha * beta`. Used by the exhaustive checks, where
/// forming rationals for every triple dominates the runtime.
#[inline]
pub fn cocycle_from_parts(det_a: i64, det_b: i64, chi_a: i64, chi_b: i64, chi_ab: i64) -> Sign {
    let first = hilbert_of_signs(det_a < 0, det_b < 0);
    let left_negative = (chi_ab < 0) != (chi_a < 0);
    let right_negative = (chi_ab < 0) != ((chi_b < 0) != (det_a < 0));
    first * hilbert_of_signs(left_negative, right_negative)
}

/// `B(gamma) = (chi(gamma), chi(gamma R))`, defined for determinant one.
pub fn conjugation_sign(gamma: &Mat2) -> Result<Sign> {
    let det = gamma.det();
    if det != 1 {
        return Err(Error::WrongDeterminant { matrix: *gamma, expected: 1, found: det });
    }
    Ok(hilbert_int(chi(gamma), chi(&(*gamma * Mat2::R))))
}

/// An element `[gamma, eps]` of the double cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaElt {
    pub gamma: Mat2,
    pub eps: Sign,
}

impl MetaElt {
    pub const fn new(gamma: Mat2, eps: Sign) -> Self {
        MetaElt { gamma, eps }
    }

    pub const fn identity() -> Self {
        MetaElt::new(Mat2::IDENTITY, Sign::Plus)
    }

    /// `[I, -1]`, the unique nontrivial central element.
    pub const fn central() -> Self {
        MetaElt::new(Mat2::IDENTITY, Sign::Minus)
    }

    pub const fn s() -> Self {
        MetaElt::new(Mat2::S, Sign::Plus)
    }

    pub const fn t() -> Self {
        MetaElt::new(Mat2::T, Sign::Plus)
    }

    pub const fn r() -> Self {
        MetaElt::new(Mat2::R, Sign::Plus)
    }

    /// `[-I, 1]`.
    pub const fn z() -> Self {
        MetaElt::new(Mat2::NEG_IDENTITY, Sign::Plus)
    }

    pub fn det(&self) -> i64 {
        self.gamma.det()
    }

    pub fn is_identity(&self) -> bool {
        *self == MetaElt::identity()
    }

    pub fn inv(&self) -> MetaElt {
        let g_inv = self.gamma.inverse();
        MetaElt::new(g_inv, self.eps * cocycle(&self.gamma, &g_inv))
    }

    pub fn pow(&self, n: i64) -> MetaElt {
        let base = if n < 0 { self.inv() } else { *self };
        (0..n.unsigned_abs()).fold(MetaElt::identity(), |acc, _| acc * base)
    }

    /// `R~ x R~^-1`. On determinant one this is `[R gamma R, B(gamma) eps]`.
    pub fn conj_by_r(&self) -> MetaElt {
        match conjugation_sign(&self.gamma) {
            Ok(b) => MetaElt::new(Mat2::R * self.gamma * Mat2::R, b * self.eps),
            Err(_) => MetaElt::r() * *self * MetaElt::r().inv(),
        }
    }
}

impl Mul for MetaElt {
    type Output = MetaElt;
    fn mul(self, o: MetaElt) -> MetaElt {
        MetaElt::new(self.gamma * o.gamma, cocycle(&self.gamma, &o.gamma) * self.eps * o.eps)
    }
}

impl fmt::Display for MetaElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.gamma, self.eps)
    }
}

impl FromStr for MetaElt {
    type Err = Error;
    /// Parses `[[a,b],[c,d]];+1` or `...;-1`.
    fn from_str(s: &str) -> Result<Self> {
        let (m, e) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(alloc::format!("malformed element {s:?}; expected MATRIX;SIGN")))?;
        Ok(MetaElt::new(m.parse()?, e.parse()?))
    }
}

/// Generators of `GL2(Z)` used for words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    S,
    SInv,
    T,
    TInv,
    R,
}

impl Gen {
    pub const ALL: [Gen; 5] = [Gen::S, Gen::SInv, Gen::T, Gen::TInv, Gen::R];

    pub fn matrix(self) -> Mat2 {
        match self {
            Gen::S => Mat2::S,
            Gen::SInv => Mat2::S.inverse(),
            Gen::T => Mat2::T,
            Gen::TInv => Mat2::T.inverse(),
            Gen::R => Mat2::R,
        }
    }

    /// The lifted generator: `S~ = [S,1]`, `T~ = [T,1]`, `R~ = [R,1]`, and
    /// the cover inverses of the first two.
    pub fn lift(self) -> MetaElt {
        match self {
            Gen::S => MetaElt::s(),
            Gen::SInv => MetaElt::s().inv(),
            Gen::T => MetaElt::t(),
            Gen::TInv => MetaElt::t().inv(),
            Gen::R => MetaElt::r(),
        }
    }

    pub fn inverse(self) -> Option<Gen> {
        match self {
            Gen::S => Some(Gen::SInv),
            Gen::SInv => Some(Gen::S),
            Gen::T => Some(Gen::TInv),
            Gen::TInv => Some(Gen::T),
            Gen::R => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Gen::S => "S",
            Gen::SInv => "S^-1",
            Gen::T => "T",
            Gen::TInv => "T^-1",
            Gen::R => "R",
        }
    }
}

impl FromStr for Gen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Gen::ALL
            .into_iter()
            .find(|g| g.token() == s)
            .ok_or_else(|| Error::Parse(alloc::format!("unknown generator {s:?}; expected S, S^-1, T, T^-1 or R")))
    }
}

/// A word in the generators; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matrix(&self) -> Mat2 {
        self.0.iter().fold(Mat2::IDENTITY, |acc, g| acc * g.matrix())
    }

    /// Product of the lifted generators, left to right.
    pub fn lift(&self) -> MetaElt {
        self.0.iter().fold(MetaElt::identity(), |acc, g| acc * g.lift())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(g.token())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(Word)
    }
}

/// Shift `n` minimizing `|d + c n|`; ties prefer a nonnegative exponent,
/// then the smaller `|n|`.
fn best_shift(c: i64, d: i64) -> i64 {
    let lo = (-d).div_euclid(c.abs()) * c.signum();
    let candidates = [lo - 1, lo, lo + 1];
    let mut best = candidates[0];
    for &n in &candidates[1..] {
        let (cur, new) = ((d + c * best).abs(), (d + c * n).abs());
        let better = new < cur
            || (new == cur && ((n >= 0) as u8, -(n.abs())) > ((best >= 0) as u8, -(best.abs())));
        if better {
            best = n;
        }
    }
    best
}

fn push_power(word: &mut Vec<Gen>, g: Gen, n: i64) {
    let g = if n < 0 { g.inverse().expect("invertible generator") } else { g };
    word.extend(core::iter::repeat_n(g, n.unsigned_abs() as usize));
}

fn free_reduce(word: Vec<Gen>) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::with_capacity(word.len());
    for g in word {
        match out.last() {
            Some(&last) if last.inverse() == Some(g) => {
                out.pop();
            }
            _ => out.push(g),
        }
    }
    out
}

/// Writes `m` as a word in `S, S^-1, T, T^-1, R` by Euclidean reduction of
/// the bottom row. A determinant `-1` matrix gets exactly one `R`, leftmost.
pub fn word_decompose(m: &Mat2) -> Word {
    let mut out = Vec::new();
    let mut work = *m;
    if m.det() < 0 {
        out.push(Gen::R);
        work = Mat2::R * work;
    }
    // work * (suffix product) ends with c = 0
    let mut suffix = Vec::new();
    while work.c != 0 {
        let n = best_shift(work.c, work.d);
        work = work * Mat2::T.pow(n);
        push_power(&mut suffix, Gen::T, n);
        work = work * Mat2::S;
        suffix.push(Gen::S);
    }
    // work = +-T^m
    if work.a < 0 {
        out.extend([Gen::S, Gen::S]);
        push_power(&mut out, Gen::T, -work.b);
    } else {
        push_power(&mut out, Gen::T, work.b);
    }
    out.extend(suffix.iter().rev().map(|g| g.inverse().expect("S or T")));
    Word(free_reduce(out))
}

/// A cover element together with a shortest word (in the lifted generators)
/// that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumerated {
    pub elem: MetaElt,
    pub word: Word,
}

/// All products of at most `max_len` lifted generators, deduplicated by
/// `(matrix, sign)`, in breadth-first order.
pub fn enumerate_cover(max_len: usize) -> Result<Vec<Enumerated>> {
    enumerate_cover_bounded(max_len, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_cover_bounded(max_len: usize, bound: usize) -> Result<Vec<Enumerated>> {
    if max_len > bound {
        return Err(Error::ResourceBound { requested: max_len, bound });
    }
    let lifts = Gen::ALL.map(|g| (g, g.lift()));
    let mut seen = BTreeSet::new();
    seen.insert(MetaElt::identity());
    let mut all = alloc::vec![Enumerated { elem: MetaElt::identity(), word: Word::default() }];
    let mut frontier_start = 0;
    for _ in 0..max_len {
        let frontier_end = all.len();
        for idx in frontier_start..frontier_end {
            for (g, lift) in &lifts {
                let elem = all[idx].elem * *lift;
                if seen.insert(elem) {
                    let mut word = all[idx].word.clone();
                    word.0.push(*g);
                    all.push(Enumerated { elem, word });
                }
            }
        }
        frontier_start = frontier_end;
    }
    Ok(all)
}

/// Distinct matrices of an enumeration, in first-seen order.
pub fn distinct_matrices(elems: &[Enumerated]) -> Vec<Mat2> {
    let mut seen = BTreeSet::new();
    elems.iter().map(|e| e.elem.gamma).filter(|m| seen.insert(*m)).collect()
}

impl Enumerated {
    pub fn describe(&self) -> String {
        if self.word.is_empty() {
            "I".to_string()
        } else {
            self.word.to_string()
        }
    }
}
