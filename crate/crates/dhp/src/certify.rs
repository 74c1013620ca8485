//! The certification suite: exact checks over the enumerated cover and
//! numeric checks of the analytic identities on a sample grid.
//!
//! Check ids carry a two-digit prefix, so sorting by id reproduces the run
//! order.

use std::sync::Arc;

use dhp_core::automorphy::{phi_plus, sqrt_branch, standard_grid, HalfPlanePoint, Phase4};
use dhp_core::classical::{
    eisenstein, eisenstein_form, eta, eta_character, eta_character_at, eta_hat, eta_hat_form, eta_power_form,
    lattice_sum, snap_to_root_of_unity, z_n_product, QSeriesConfig, CHARACTER_BASE_POINT,
};
use dhp_core::meta_group::{
    chi, cocycle, cocycle_from_parts, conjugation_sign, enumerate_cover_bounded, hilbert, Enumerated, Mat2, MetaElt,
    Sign, DEFAULT_ENUMERATION_BOUND,
};
use dhp_core::rep::{extend_form, ind_form, max_abs_diff, CMat, CoverGroup, Rep, VVForm};
use dhp_core::slash::{admissible_lambdas, check_action_composition, max_difference, mobius, HoloFn, Weight};
use dhp_core::C64;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::io::format_complex;
use crate::report::{CheckReport, Report, Worst};
use crate::CliError;

pub const DEFAULT_MAX_WORD_LEN: usize = 5;
pub const DEFAULT_PAIRS: usize = 500;
/// Box cutoff for the lattice-sum cross-check run by `certify`.
pub const DEFAULT_LATTICE_CUTOFF: u32 = 400;
/// Pairs for the action law are drawn from words no longer than this.
/// Longer words push `xyz` to within `1e-3` of the real axis, where the
/// weight-4 q-series loses absolute accuracy.
pub const ACTION_DEPTH_CAP: usize = 3;
/// `eta(i)` from a 25-digit reference, rounded to double.
pub const ETA_AT_I: f64 = 0.768_225_422_326_056_6;
const SEED: u64 = 0x5eed_0001;

/// Universe and tolerances shared by all checks.
#[derive(Clone, Debug)]
pub struct Context {
    pub max_word_len: usize,
    pub elements: Vec<Enumerated>,
    pub matrices: Vec<Mat2>,
    pub samples: Vec<HalfPlanePoint>,
    /// Overrides every numeric tolerance when set.
    pub tol: Option<f64>,
    pub pairs: usize,
    pub lattice_cutoff: u32,
}

impl Context {
    /// Enumerates the cover up to `max_word_len`; lengths above the default
    /// bound require `force`.
    pub fn new(max_word_len: usize, force: bool) -> Result<Self, CliError> {
        let bound = if force { max_word_len.max(DEFAULT_ENUMERATION_BOUND) } else { DEFAULT_ENUMERATION_BOUND };
        let elements = enumerate_cover_bounded(max_word_len, bound)?;
        let matrices = dhp_core::meta_group::distinct_matrices(&elements);
        Ok(Context {
            max_word_len,
            elements,
            matrices,
            samples: standard_grid(),
            tol: None,
            pairs: DEFAULT_PAIRS,
            lattice_cutoff: DEFAULT_LATTICE_CUTOFF,
        })
    }

    pub fn with_samples(mut self, samples: Vec<HalfPlanePoint>) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_tol(mut self, tol: Option<f64>) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_pairs(mut self, pairs: usize) -> Self {
        self.pairs = pairs;
        self
    }

    pub fn with_lattice_cutoff(mut self, cutoff: u32) -> Self {
        self.lattice_cutoff = cutoff;
        self
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn upper(&self) -> Vec<HalfPlanePoint> {
        self.samples.iter().copied().filter(HalfPlanePoint::is_upper).collect()
    }

    fn sl_matrices(&self) -> Vec<Mat2> {
        self.matrices.iter().copied().filter(|m| m.det() == 1).collect()
    }

    fn sl_elements(&self) -> Vec<MetaElt> {
        self.elements.iter().map(|e| e.elem).filter(|x| x.det() == 1).collect()
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(SEED ^ salt)
    }

    fn word_universe(&self) -> String {
        format!(
            "word length <= {}: {} elements, {} matrices",
            self.max_word_len,
            self.elements.len(),
            self.matrices.len()
        )
    }

    fn grid_universe(&self, points: usize) -> String {
        format!("{points} sample points")
    }
}

fn label_point(z: HalfPlanePoint) -> String {
    format!("z={}", format_complex(z.z()))
}

/// First failing case, found lazily.
fn first_failure<T>(items: impl IntoIterator<Item = T>, fails: impl Fn(&T) -> Option<String>) -> Option<String> {
    items.into_iter().find_map(|t| fails(&t))
}

fn vec_diff(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn cert_cfg() -> QSeriesConfig {
    QSeriesConfig::certification()
}

pub type Check = fn(&Context) -> Vec<CheckReport>;

/// All checks, in run order.
pub const CHECKS: &[(&str, Check)] = &[
    ("hilbert_chi", hilbert_chi),
    ("cocycle_identity", cocycle_identity),
    ("lemma_minus_b", lemma_minus_b),
    ("lemma_conjugation", lemma_conjugation),
    ("lemma_generator_inversion", lemma_generator_inversion),
    ("lemma_triple_b", lemma_triple_b),
    ("cover_order", cover_order),
    ("inverse_laws", inverse_laws),
    ("section_consistency", section_consistency),
    ("action_composition", action_composition),
    ("lambda_uniqueness", lambda_uniqueness),
    ("central_scalar", central_scalar),
    ("ind_homomorphism", ind_homomorphism),
    ("round_trips", round_trips),
    ("eta", eta_laws),
    ("eisenstein", eisenstein_checks),
    ("zn_parity", zn_parity),
    ("eta_hat", eta_hat_checks),
];

pub fn run(ctx: &Context) -> Report {
    Report::new(CHECKS.iter().flat_map(|(_, check)| check(ctx)).collect())
}

pub fn hilbert_chi(_: &Context) -> Vec<CheckReport> {
    let r = Ratio::from_integer;
    let h = |a: i64, b: i64| hilbert(r(a), r(b)).ok();
    let rtr = Mat2::R * Mat2::T * Mat2::R;
    let cases: Vec<(&str, bool)> = vec![
        ("chi(S) = 1", chi(&Mat2::S) == 1),
        ("chi(T) = 1", chi(&Mat2::T) == 1),
        ("chi(-I) = -1", chi(&Mat2::NEG_IDENTITY) == -1),
        ("(-1,-1) = -1", h(-1, -1) == Some(Sign::Minus)),
        ("(-1,1) = 1", h(-1, 1) == Some(Sign::Plus)),
        ("(3,-5) = 1", h(3, -5) == Some(Sign::Plus)),
        ("(0,1) rejected", h(0, 1).is_none()),
        ("A(T,RTR) = 1", cocycle(&Mat2::T, &rtr) == Sign::Plus),
        ("A(S,-S) = 1", cocycle(&Mat2::S, &-Mat2::S) == Sign::Plus),
        ("A(S,S) = -1", cocycle(&Mat2::S, &Mat2::S) == Sign::Minus),
        ("A(R,R) = -1", cocycle(&Mat2::R, &Mat2::R) == Sign::Minus),
        ("B(S) = 1", conjugation_sign(&Mat2::S) == Ok(Sign::Plus)),
        ("B(T) = 1", conjugation_sign(&Mat2::T) == Ok(Sign::Plus)),
        ("B(-I) = -1", conjugation_sign(&Mat2::NEG_IDENTITY) == Ok(Sign::Minus)),
    ];
    let n = cases.len();
    let fail = first_failure(cases, |(name, ok)| (!ok).then(|| name.to_string()));
    vec![CheckReport::exact("01.hilbert_chi", format!("{n} unit cases"), fail)]
}

pub fn cocycle_identity(ctx: &Context) -> Vec<CheckReport> {
    let m = &ctx.matrices;
    let n = m.len();
    let det: Vec<i64> = m.iter().map(Mat2::det).collect();
    let ch: Vec<i64> = m.iter().map(chi).collect();
    let mut prod = Vec::with_capacity(n * n);
    for a in m {
        for b in m {
            let p = *a * *b;
            prod.push((p, p.det(), chi(&p), cocycle(a, b)));
        }
    }
    let mut fail = None;
    'outer: for i in 0..n {
        for j in 0..n {
            let (pij, dij, cij, aij) = prod[i * n + j];
            for k in 0..n {
                let (_, djk, cjk, ajk) = prod[j * n + k];
                let c_abc = chi(&(pij * m[k]));
                let lhs = aij * cocycle_from_parts(dij, det[k], cij, ch[k], c_abc);
                let rhs = cocycle_from_parts(det[i], djk, ch[i], cjk, c_abc) * ajk;
                if lhs != rhs {
                    fail = Some(format!("alpha={} beta={} gamma={}", m[i], m[j], m[k]));
                    break 'outer;
                }
            }
        }
    }
    let universe = format!("{}; {} triples", ctx.word_universe(), n * n * n);
    vec![CheckReport::exact("02.cocycle_identity", universe, fail).param("triples", (n * n * n) as u64)]
}

pub fn lemma_minus_b(ctx: &Context) -> Vec<CheckReport> {
    let r = Mat2::R;
    let sl = ctx.sl_matrices();
    let fail = first_failure(&sl, |g| {
        let b = conjugation_sign(g).ok()?;
        let first = cocycle(&r, g) * cocycle(&(r * **g), &r);
        let second = cocycle(&r, &(**g * r)) * cocycle(g, &r);
        (first != -b || second != -b).then(|| format!("gamma={g}"))
    });
    vec![CheckReport::exact("03.lemma_minus_b", format!("{} det 1 matrices", sl.len()), fail)]
}

pub fn lemma_conjugation(ctx: &Context) -> Vec<CheckReport> {
    let sl = ctx.sl_matrices();
    let cases: Vec<MetaElt> =
        sl.iter().flat_map(|g| [MetaElt::new(*g, Sign::Plus), MetaElt::new(*g, Sign::Minus)]).collect();
    let fail = first_failure(&cases, |x| {
        let via_product = MetaElt::r() * **x * MetaElt::r().inv();
        (x.conj_by_r() != via_product).then(|| format!("x={x}"))
    });
    vec![CheckReport::exact("04.lemma_conjugation", format!("{} det 1 elements", cases.len()), fail)]
}

pub fn lemma_generator_inversion(_: &Context) -> Vec<CheckReport> {
    let r = MetaElt::r();
    let preimages: Vec<MetaElt> = [Mat2::S, Mat2::T]
        .into_iter()
        .flat_map(|g| [MetaElt::new(g, Sign::Plus), MetaElt::new(g, Sign::Minus)])
        .collect();
    let fail = first_failure(&preimages, |x| (r * **x * r.inv() != x.inv()).then(|| format!("x={x}")));
    vec![CheckReport::exact("05.lemma_generator_inversion", "both preimages of S and T".into(), fail)]
}

pub fn lemma_triple_b(ctx: &Context) -> Vec<CheckReport> {
    let sl = ctx.sl_matrices();
    let conj = |g: &Mat2| Mat2::R * *g * Mat2::R;
    let b = |g: &Mat2| conjugation_sign(g).expect("det 1");
    let mut fail = None;
    'outer: for x in &sl {
        for y in &sl {
            if cocycle(x, y) * cocycle(&conj(x), &conj(y)) != b(x) * b(y) * b(&(*x * *y)) {
                fail = Some(format!("alpha={x} beta={y}"));
                break 'outer;
            }
        }
    }
    let pairs = sl.len() * sl.len();
    vec![CheckReport::exact("06.lemma_triple_b", format!("{pairs} det 1 pairs"), fail)]
}

pub fn cover_order(ctx: &Context) -> Vec<CheckReport> {
    let j = MetaElt::central();
    let (s, z, r) = (MetaElt::s(), MetaElt::z(), MetaElt::r());
    let mut fail = None;
    for (name, ok) in [
        ("S~^4 = [I,-1]", s.pow(4) == j),
        ("Z~^2 = [I,-1]", z * z == j),
        ("R~^2 = [I,-1]", r * r == j),
        ("Z~ R~ != R~ Z~", z * r != r * z),
    ] {
        if !ok && fail.is_none() {
            fail = Some(name.to_string());
        }
    }
    if fail.is_none() {
        fail = first_failure(&ctx.elements, |e| (e.elem * j != j * e.elem).then(|| format!("x={}", e.elem)));
    }
    vec![CheckReport::exact("07.cover_order", ctx.word_universe(), fail)
        .param("s_tilde_squared", s.pow(2).to_string())
        .param("z_tilde", z.to_string())]
}

pub fn inverse_laws(ctx: &Context) -> Vec<CheckReport> {
    let fail = first_failure(&ctx.elements, |e| {
        let x = e.elem;
        let ok = (x * x.inv()).is_identity() && (x.inv() * x).is_identity() && x.inv().inv() == x;
        (!ok).then(|| format!("x={x}"))
    });
    vec![CheckReport::exact("08.inverse_laws", ctx.word_universe(), fail)]
}

fn random_pairs<T: Copy>(pool: &[T], count: usize, rng: &mut ChaCha8Rng) -> Vec<(T, T)> {
    (0..count).map(|_| (*pool.choose(rng).expect("non-empty"), *pool.choose(rng).expect("non-empty"))).collect()
}

pub fn section_consistency(ctx: &Context) -> Vec<CheckReport> {
    let pts = ctx.upper();
    let sl = ctx.sl_matrices();
    let pairs = random_pairs(&sl, ctx.pairs, &mut ctx.rng(9));
    let mut worst = Worst::new();
    for (a, b) in &pairs {
        let sign = cocycle(a, b).to_f64();
        for z in &pts {
            let residual = (|| {
                let lhs = phi_plus(a, mobius(b, *z))? * phi_plus(b, *z)?;
                let rhs = phi_plus(&(*a * *b), *z)? * sign;
                Ok::<_, dhp_core::Error>((lhs - rhs).norm())
            })();
            worst.add_result(residual, || format!("alpha={a} beta={b} {}", label_point(*z)));
        }
    }
    let universe = format!("{} det 1 pairs x {} upper points", pairs.len(), pts.len());
    vec![CheckReport::numeric("09.section_consistency", universe, worst, ctx.tol(1e-10))]
}

/// Pairs cycling through the four determinant combinations; falls back to
/// whatever is available in degenerate universes.
fn det_balanced_pairs(pool: &[MetaElt], count: usize, rng: &mut ChaCha8Rng) -> Vec<(MetaElt, MetaElt)> {
    let (plus, minus): (Vec<MetaElt>, Vec<MetaElt>) = pool.iter().partition(|x| x.det() == 1);
    let pick = |want_minus: bool, rng: &mut ChaCha8Rng| {
        let side = if want_minus && !minus.is_empty() { &minus } else { &plus };
        *side.choose(rng).expect("identity is always present")
    };
    (0..count).map(|i| (pick(i % 2 == 1, rng), pick((i / 2) % 2 == 1, rng))).collect()
}

fn eta_hat_fn(cfg: QSeriesConfig) -> HoloFn {
    let f = move |z: C64| Ok(eta_hat(z, &cfg)?.to_vec());
    HoloFn::new(2, f, f)
}

pub fn action_composition(ctx: &Context) -> Vec<CheckReport> {
    let depth = ctx.max_word_len.min(ACTION_DEPTH_CAP);
    let pool: Vec<MetaElt> = ctx.elements.iter().filter(|e| e.word.len() <= depth).map(|e| e.elem).collect();
    let e4 = eisenstein_form(4, cert_cfg()).expect("weight 4 is supported");
    let cases = [
        ("10.action_composition.eta_hat", eta_hat_fn(cert_cfg()), Weight::from_twice(1)),
        ("10.action_composition.e4", e4.function().clone(), Weight::integral(4)),
    ];
    let mut out = Vec::new();
    for (salt, (id, f, k)) in cases.into_iter().enumerate() {
        let pairs = det_balanced_pairs(&pool, ctx.pairs, &mut ctx.rng(10 + salt as u64));
        let mut combos = [0u64; 4];
        let mut worst = Worst::new();
        for (x, y) in &pairs {
            combos[(x.det() < 0) as usize * 2 + (y.det() < 0) as usize] += 1;
            let res = check_action_composition(&f, k, *x, *y, &ctx.samples);
            worst.add_result(res, || format!("x={x} y={y}"));
        }
        let universe = format!("{} pairs from words <= {depth} x {} points", pairs.len(), ctx.samples.len());
        out.push(
            CheckReport::numeric(id, universe, worst, ctx.tol(1e-9))
                .param("weight_twice", k.twice())
                .param("pairs_by_det", combos.to_vec()),
        );
    }
    out
}

pub fn lambda_uniqueness(_: &Context) -> Vec<CheckReport> {
    let fail = first_failure(-9i64..=9, |w| {
        let got = admissible_lambdas(Weight::from_twice(*w));
        let ok = if w % 2 != 0 { got == [Phase4::I, Phase4::MINUS_I] } else { got == Phase4::ALL };
        (!ok).then(|| format!("w={w}: {got:?}"))
    });
    vec![CheckReport::exact("11.lambda_uniqueness", "2k in -9..=9".into(), fail)]
}

fn eta_rep() -> Rep {
    eta_character().expect("eta multiplier snaps to 24th roots")
}

pub fn central_scalar(ctx: &Context) -> Vec<CheckReport> {
    let half = Weight::from_twice(1);
    let eta12 = eta_power_form(12, cert_cfg()).expect("eta^12");
    let reps: Vec<(&str, Rep, Weight)> = vec![
        ("rho_eta", eta_rep(), half),
        ("Ind rho_eta", eta_rep().induce(half).expect("SL rep"), half),
        ("rho_eta^12", eta12.rep().clone(), eta12.weight()),
        ("1_GL (k=4)", Rep::trivial(CoverGroup::Gl), Weight::integral(4)),
        ("1_GL (k=6)", Rep::trivial(CoverGroup::Gl), Weight::integral(6)),
    ];
    let mut worst = Worst::new();
    for (name, rep, k) in &reps {
        let expect = CMat::identity(rep.dim(), rep.dim()) * k.minus_one_pow().to_complex();
        let res = rep.eval(&MetaElt::central()).map(|m| max_abs_diff(&m, &expect));
        worst.add_result(res, || name.to_string());
    }
    vec![CheckReport::numeric("12.central_scalar", format!("{} representations", reps.len()), worst, ctx.tol(1e-10))]
}

pub fn ind_homomorphism(ctx: &Context) -> Vec<CheckReport> {
    let half = Weight::from_twice(1);
    let rho = eta_rep();
    let ind = rho.induce(half).expect("SL rep");
    let mut worst = Worst::new();
    let all: Vec<MetaElt> = ctx.elements.iter().map(|e| e.elem).collect();
    for (x, y) in random_pairs(&all, ctx.pairs, &mut ctx.rng(13)) {
        let res = (|| Ok::<_, dhp_core::Error>(max_abs_diff(&ind.eval(&(x * y))?, &(ind.eval(&x)? * ind.eval(&y)?))))();
        worst.add_result(res, || format!("Ind rho_eta: x={x} y={y}"));
    }
    let sl = ctx.sl_elements();
    for (x, y) in random_pairs(&sl, ctx.pairs, &mut ctx.rng(14)) {
        let res = (|| Ok::<_, dhp_core::Error>(max_abs_diff(&rho.eval(&(x * y))?, &(rho.eval(&x)? * rho.eval(&y)?))))();
        worst.add_result(res, || format!("rho_eta: x={x} y={y}"));
    }
    for e in &ctx.elements {
        let res = (|| Ok::<_, dhp_core::Error>(max_abs_diff(&ind.eval(&e.elem)?, &ind.eval_word(&e.word, &e.elem)?)))();
        worst.add_result(res, || format!("witness word {}", e.describe()));
    }
    worst.add(ind.relation_residual(), || "defining relations of Ind rho_eta".into());
    let universe = format!("{} pairs each; {}", ctx.pairs, ctx.word_universe());
    vec![CheckReport::numeric("13.ind_homomorphism", universe, worst, ctx.tol(1e-10))]
}

/// `eta^12` and a scalar multiple: weight 6, character `rho_eta^12`.
fn weight_six_pair() -> (VVForm, VVForm) {
    let f = eta_power_form(12, cert_cfg()).expect("eta^12");
    let twisted = f.rep().r_twist().expect("SL rep");
    let g = VVForm::new(f.function().scale(C64::new(0.5, -0.25)), f.weight(), twisted).expect("dims agree");
    (f, g)
}

pub fn round_trips(ctx: &Context) -> Vec<CheckReport> {
    let tol = ctx.tol(1e-10);
    let pts = &ctx.samples;
    let upper = ctx.upper();

    let mut restriction = Worst::new();
    let gl_forms: Vec<(&str, Result<VVForm, dhp_core::Error>)> = vec![
        ("E4", eisenstein_form(4, cert_cfg())),
        ("E6", eisenstein_form(6, cert_cfg())),
        ("eta-hat", eta_hat_form(cert_cfg())),
    ];
    for (name, form) in gl_forms {
        let res = (|| {
            let form = form?;
            let res = form.restrict()?;
            let ext = extend_form(res.function().upper().clone(), form.function().dim(), form.weight(), form.rep(), pts, 1e-9)?;
            let back = ext.restrict()?;
            let same = Arc::ptr_eq(back.function().upper(), res.function().upper());
            let gap = max_difference(ext.function(), form.function(), pts)?;
            Ok::<_, dhp_core::Error>(if same { gap } else { f64::INFINITY })
        })();
        restriction.add_result(res, || name.to_string());
    }

    let half = Weight::from_twice(1);
    let mut projection_fail = None;
    let mut decomposition = Worst::new();
    let inputs = || -> Result<Vec<(&str, VVForm, VVForm)>, dhp_core::Error> {
        let eta_f = dhp_core::classical::eta_form(cert_cfg())?;
        let zero = VVForm::new(HoloFn::zero(1), half, eta_f.rep().r_twist()?)?;
        let (f6, g6) = weight_six_pair();
        Ok(vec![("(eta, 0)", eta_f, zero), ("(eta^12, c eta^12)", f6, g6)])
    };
    match inputs() {
        Ok(list) => {
            for (name, f, g) in list {
                let k = f.weight();
                let res = (|| {
                    let ind = ind_form(&f, &g, k, pts, 1e-9)?;
                    let (p1, p2) = (ind.project(0..1), ind.project(1..2));
                    for z in &upper {
                        if p1.eval(*z)? != f.function().eval(*z)? || p2.eval(*z)? != g.function().eval(*z)? {
                            return Ok(Err(format!("{name}: projection differs at {}", label_point(*z))));
                        }
                    }
                    let f2 = VVForm::new(p1, k, f.rep().clone())?;
                    let g2 = VVForm::new(p2, k, g.rep().clone())?;
                    let again = ind_form(&f2, &g2, k, pts, 1e-9)?;
                    Ok::<_, dhp_core::Error>(Ok(max_difference(again.function(), ind.function(), pts)?))
                })();
                match res {
                    Ok(Ok(gap)) => decomposition.add(gap, || name.to_string()),
                    Ok(Err(msg)) => projection_fail = projection_fail.or(Some(msg)),
                    Err(e) => {
                        projection_fail = projection_fail.or(Some(format!("{name}: {e}")));
                        decomposition.add(f64::INFINITY, || format!("{name}: {e}"));
                    }
                }
            }
        }
        Err(e) => projection_fail = Some(e.to_string()),
    }
    vec![
        CheckReport::numeric("14.restriction_round_trip", format!("E4, E6, eta-hat on {} points", pts.len()), restriction, tol),
        CheckReport::exact("14.induction_projection", format!("2 induced forms on {} upper points", upper.len()), projection_fail),
        CheckReport::numeric("14.induction_decomposition", format!("2 induced forms on {} points", pts.len()), decomposition, tol),
    ]
}

pub fn eta_laws(ctx: &Context) -> Vec<CheckReport> {
    let cfg = QSeriesConfig::default();
    let upper = ctx.upper();
    let universe = ctx.grid_universe(upper.len());

    let mut translation = Worst::new();
    let mut inversion = Worst::new();
    let shift = C64::from_polar(1.0, std::f64::consts::PI / 12.0);
    for p in &upper {
        let z = p.z();
        let res = (|| Ok::<_, dhp_core::Error>((eta(z + 1.0, &cfg)? - shift * eta(z, &cfg)?).norm()))();
        translation.add_result(res, || label_point(*p));
        let res = (|| {
            let lhs = eta(-z.inv(), &cert_cfg())?;
            Ok::<_, dhp_core::Error>((lhs - sqrt_branch(-C64::i() * z)? * eta(z, &cfg)?).norm())
        })();
        inversion.add_result(res, || label_point(*p));
    }

    let mut at_i = Worst::new();
    at_i.add_result(eta(C64::i(), &cfg).map(|v| (v - ETA_AT_I).norm()), || "z=0+1i".into());

    let mut snap = Worst::new();
    match eta_character_at(CHARACTER_BASE_POINT, &cfg) {
        Ok(values) => {
            for v in values {
                snap.add(v.snap_distance, || format!("raw multiplier {}", format_complex(v.raw)));
            }
        }
        Err(e) => snap.add(f64::INFINITY, || e.to_string()),
    }
    let form = dhp_core::classical::eta_form(cert_cfg());
    let mut transformation = Worst::new();
    match &form {
        Ok(form) => {
            for x in ctx.sl_elements() {
                let value = form.rep().eval(&x).map(|m| snap_to_root_of_unity(m[(0, 0)], 24).2);
                snap.add_result(value, || format!("rho_eta({x})"));
                transformation.add_result(form.modularity_residual(&x, &upper), || format!("x={x}"));
            }
        }
        Err(e) => transformation.add(f64::INFINITY, || e.to_string()),
    }
    let sl_universe = format!("{} det 1 elements x {} upper points", ctx.sl_elements().len(), upper.len());
    vec![
        CheckReport::numeric("15.eta.translation", universe.clone(), translation, ctx.tol(1e-12)),
        CheckReport::numeric("15.eta.inversion", universe, inversion, ctx.tol(1e-10)),
        CheckReport::numeric("15.eta.value_at_i", "z = i".into(), at_i, ctx.tol(1e-12)).param("oracle", ETA_AT_I),
        CheckReport::numeric("15.eta.character_snap", format!("{} det 1 elements", ctx.sl_elements().len()), snap, ctx.tol(1e-10)),
        CheckReport::numeric("15.eta.transformation", sl_universe, transformation, ctx.tol(1e-9)),
    ]
}

/// `|E4(z) - lattice sum|` at `2i` and `1+2i`, with the relative gap alongside.
pub fn e4_lattice_gap(cutoff: u32) -> Vec<(C64, f64, f64)> {
    let cfg = QSeriesConfig::default();
    [C64::new(0.0, 2.0), C64::new(1.0, 2.0)]
        .into_iter()
        .map(|z| {
            let e = eisenstein(4, z, &cfg).expect("2i is far from the axis");
            let l = lattice_sum(4, z, cutoff).expect("k = 4");
            (z, (e - l).norm(), (e - l).norm() / e.norm())
        })
        .collect()
}

pub fn e4_lattice_check(cutoff: u32, tol: f64) -> CheckReport {
    let gaps = e4_lattice_gap(cutoff);
    let mut worst = Worst::new();
    for (z, abs, _) in &gaps {
        worst.add(*abs, || format!("z={} cutoff={cutoff}", format_complex(*z)));
    }
    let rel = gaps.iter().map(|g| g.2).fold(0.0, f64::max);
    CheckReport::numeric("16.e4.lattice_sum", "z in {2i, 1+2i}".into(), worst, tol)
        .param("cutoff", cutoff)
        .param("max_relative_gap", rel)
}

pub fn eisenstein_checks(ctx: &Context) -> Vec<CheckReport> {
    let upper = ctx.upper();
    let mut modular = Worst::new();
    for k in [4i64, 6] {
        for p in &upper {
            let z = p.z();
            let res = (|| {
                let e = eisenstein(k, z, &cert_cfg())?;
                let inv = eisenstein(k, -z.inv(), &cert_cfg())?;
                let per = eisenstein(k, z + 1.0, &cert_cfg())?;
                Ok::<_, dhp_core::Error>((inv - z.powi(k as i32) * e).norm().max((per - e).norm()))
            })();
            modular.add_result(res, || format!("k={k} {}", label_point(*p)));
        }
    }
    let mut even = Worst::new();
    for k in [4i64, 6] {
        let res = eisenstein_form(k, cert_cfg()).and_then(|f| {
            let mut w = 0.0f64;
            for x in CoverGroup::Gl.generators() {
                w = w.max(f.modularity_residual(&x, &ctx.samples)?);
            }
            Ok(w)
        });
        even.add_result(res, || format!("E{k} even extension, trivial character"));
    }
    vec![
        e4_lattice_check(ctx.lattice_cutoff, ctx.tol(1e-6)),
        CheckReport::numeric("16.eisenstein.modular", ctx.grid_universe(upper.len()), modular, ctx.tol(1e-9)),
        CheckReport::numeric("16.eisenstein.even_extensions", ctx.grid_universe(ctx.samples.len()), even, ctx.tol(1e-9)),
    ]
}

/// Points for the `Z_N` parity check, both half-planes, `|Im z| <= 1`.
pub const ZN_POINTS: [(f64, f64); 6] = [(0.3, 0.7), (-0.45, 0.2), (1.1, -0.6), (0.0, 1.0), (2.5, -0.05), (-0.8, -1.0)];

pub fn zn_parity(ctx: &Context) -> Vec<CheckReport> {
    let mut worst = Worst::new();
    for (re, im) in ZN_POINTS {
        let z = C64::new(re, im);
        for n in 0..=12u32 {
            let v = z_n_product(n, z);
            let scale = v.direct.norm().max(1.0);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let parity = (z_n_product(n, -z).direct - v.direct * sign).norm() / scale;
            let factored = (v.direct - v.factored).norm() / scale;
            worst.add(parity.max(factored), || format!("N={n} z={}", format_complex(z)));
        }
    }
    vec![CheckReport::numeric("17.zn_parity", "N in 0..=12 at 6 points, relative".into(), worst, ctx.tol(1e-12))]
}

pub fn eta_hat_checks(ctx: &Context) -> Vec<CheckReport> {
    let cfg = cert_cfg();
    let tol = ctx.tol(1e-10);
    let mut reflection = Worst::new();
    for p in &ctx.samples {
        let res = (|| {
            let v = eta_hat(p.z(), &cfg)?;
            let w = eta_hat(-p.z(), &cfg)?;
            let rhs = [-C64::i() * v[1], C64::i() * v[0]];
            Ok::<_, dhp_core::Error>(vec_diff(&w, &rhs))
        })();
        reflection.add_result(res, || label_point(*p));
    }

    let mut r_action = Worst::new();
    let hat = eta_hat_form(cfg);
    let expect_r = CMat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0].map(|x| C64::new(x, 0.0)));
    match &hat {
        Ok(form) => {
            let rep_gap = form.rep().r_image().map_or(f64::INFINITY, |r| max_abs_diff(r, &expect_r));
            r_action.add(rep_gap, || "Ind rho_eta(R~) against (0,1;-1,0)".into());
            r_action.add_result(form.modularity_residual(&MetaElt::r(), &ctx.samples), || "eta-hat | R~".into());
        }
        Err(e) => r_action.add(f64::INFINITY, || e.to_string()),
    }

    let fail = match &hat {
        Ok(form) => first_failure(ctx.samples.iter(), |p| {
            let v = form.function().eval(**p).ok()?;
            let ok = if p.is_upper() {
                eta(p.z(), &cfg).ok() == Some(v[0]) && v[1] == C64::new(0.0, 0.0)
            } else {
                v[0] == C64::new(0.0, 0.0)
            };
            (!ok).then(|| label_point(**p))
        }),
        Err(e) => Some(e.to_string()),
    };
    vec![
        CheckReport::numeric("18.eta_hat.reflection", ctx.grid_universe(ctx.samples.len()), reflection, tol),
        CheckReport::numeric("18.eta_hat.r_action", ctx.grid_universe(ctx.samples.len()), r_action, tol),
        CheckReport::exact("18.eta_hat.projection", ctx.grid_universe(ctx.samples.len()), fail),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_identity_only() {
        let ctx = Context::new(0, false).unwrap();
        assert_eq!(ctx.elements.len(), 1);
        for id in ["02.cocycle_identity", "07.cover_order", "08.inverse_laws"] {
            let report = CHECKS.iter().flat_map(|(_, c)| c(&ctx)).find(|r| r.check_id == id).unwrap();
            assert!(report.pass, "{id}");
        }
    }

    #[test]
    fn resource_bound() {
        assert!(matches!(Context::new(9, false), Err(CliError::Resource(_))));
    }

    #[test]
    fn ids_are_unique_and_ordered() {
        let ctx = Context::new(1, false).unwrap().with_pairs(4);
        let report = run(&ctx);
        let ids: Vec<&str> = report.checks.iter().map(|c| c.check_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
        assert!(ids.len() >= 25);
    }
}
