use std::f64::consts::PI;
use std::sync::Arc;

use dhp_core::automorphy::{standard_grid, standard_grid_upper, HalfPlanePoint};
use dhp_core::classical::{eisenstein, eisenstein_form, eta, eta_character, eta_form, eta_hat_form, eta_power_form, QSeriesConfig};
use dhp_core::meta_group::*;
use dhp_core::rep::*;
use dhp_core::slash::{max_difference, Evaluator, HoloFn, Weight};
use dhp_core::{Error, C64};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const HALF: Weight = Weight::from_twice(1);

fn cis(t: f64) -> C64 {
    C64::from_polar(1.0, t)
}

fn scalar(m: &CMat) -> C64 {
    assert_eq!(m.shape(), (1, 1));
    m[(0, 0)]
}

fn cover(depth: usize, det_one: bool) -> Vec<Enumerated> {
    enumerate_cover(depth).unwrap().into_iter().filter(|e| !det_one || e.elem.det() == 1).collect()
}

fn random_pairs(universe: &[Enumerated], n: usize, seed: u64) -> Vec<(MetaElt, MetaElt)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (universe.choose(&mut rng).unwrap().elem, universe.choose(&mut rng).unwrap().elem))
        .collect()
}

#[test]
fn eta_character_values() {
    let rho = eta_character().unwrap();
    assert!((scalar(&rho.eval(&MetaElt::t()).unwrap()) - cis(PI / 12.0)).norm() < 1e-15);
    assert!((scalar(&rho.eval(&MetaElt::s()).unwrap()) - cis(-PI / 4.0)).norm() < 1e-15);
    let twisted = rho.r_twist().unwrap();
    assert!((scalar(&twisted.eval(&MetaElt::t()).unwrap()) - cis(-PI / 12.0)).norm() < 1e-15);
    assert!(rho.relation_residual() < 1e-14);
    let centre = rho.eval(&MetaElt::central()).unwrap();
    assert!((scalar(&centre) + 1.0).norm() < 1e-14);
}

#[test]
fn double_twist_is_identity() {
    let rho = eta_character().unwrap().induce(HALF).unwrap().restrict().unwrap();
    let back = rho.r_twist().unwrap().r_twist().unwrap();
    assert!(back.distance(&rho) < 1e-14);
}

#[test]
fn homomorphism_sl_cover() {
    let rho = eta_character().unwrap();
    let universe = cover(5, true);
    for (x, y) in random_pairs(&universe, 500, 1) {
        let lhs = rho.eval(&(x * y)).unwrap();
        let rhs = rho.eval(&x).unwrap() * rho.eval(&y).unwrap();
        assert!(max_abs_diff(&lhs, &rhs) < 1e-10, "{x} {y}");
    }
}

#[test]
fn homomorphism_induced_gl_cover() {
    let ind = eta_character().unwrap().induce(HALF).unwrap();
    assert!(ind.relation_residual() < 1e-14);
    let universe = cover(5, false);
    let mut by_det = [0usize; 4];
    for (x, y) in random_pairs(&universe, 500, 2) {
        by_det[((x.det() < 0) as usize) * 2 + (y.det() < 0) as usize] += 1;
        let lhs = ind.eval(&(x * y)).unwrap();
        let rhs = ind.eval(&x).unwrap() * ind.eval(&y).unwrap();
        assert!(max_abs_diff(&lhs, &rhs) < 1e-10, "{x} {y}");
    }
    assert!(by_det.iter().all(|&n| n > 50), "{by_det:?}");
}

#[test]
fn induced_values_match_block_rule() {
    let rho = eta_character().unwrap();
    let ind = rho.induce(HALF).unwrap();
    for e in cover(5, false) {
        let lifted = ind.eval(&e.elem).unwrap();
        let direct = induced_value(&rho, HALF, &e.elem).unwrap();
        assert!(max_abs_diff(&lifted, &direct) < 1e-10, "{}", e.describe());
    }
}

#[test]
fn lift_and_correct_is_word_independent() {
    let ind = eta_character().unwrap().induce(HALF).unwrap();
    for e in cover(6, false) {
        let canonical = ind.eval(&e.elem).unwrap();
        let witness = ind.eval_word(&e.word, &e.elem).unwrap();
        assert!(max_abs_diff(&canonical, &witness) < 1e-10, "{}", e.describe());
    }
}

#[test]
fn induced_eta_generators() {
    let ind = eta_character().unwrap().induce(HALF).unwrap();
    let r = ind.r_image().unwrap();
    let expect = CMat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0].map(|x| C64::new(x, 0.0)));
    assert_eq!(*r, expect);
    let res = ind.restrict().unwrap();
    assert_eq!(res.dim(), 2);
    let t = res.t_image();
    assert!((t[(0, 0)] - cis(PI / 12.0)).norm() < 1e-15);
    assert!((t[(1, 1)] - cis(-PI / 12.0)).norm() < 1e-15);
    assert_eq!(t[(0, 1)], C64::new(0.0, 0.0));
    let centre = ind.eval(&MetaElt::central()).unwrap();
    assert!(max_abs_diff(&centre, &(CMat::identity(2, 2) * C64::new(-1.0, 0.0))) < 1e-14);
}

#[test]
fn trivial_reps() {
    assert_eq!(Rep::trivial(CoverGroup::Gl).restrict().unwrap(), Rep::trivial(CoverGroup::Sl));
    assert_eq!(Rep::trivial(CoverGroup::Sl).r_twist().unwrap(), Rep::trivial(CoverGroup::Sl));
}

fn e4_upper() -> Evaluator {
    let cfg = QSeriesConfig::certification();
    Arc::new(move |z| Ok(vec![eisenstein(4, z, &cfg)?]))
}

#[test]
fn extend_e4_is_even_extension() {
    let pts = standard_grid();
    let one = Rep::trivial(CoverGroup::Gl);
    let ext = extend_form(e4_upper(), 1, Weight::integral(4), &one, &pts, 1e-9).unwrap();
    for z in standard_grid_upper() {
        assert_eq!(ext.function().eval(z.conj()).unwrap(), ext.function().eval(HalfPlanePoint::new(-z.conj().z()).unwrap()).unwrap());
    }
    let even = eisenstein_form(4, QSeriesConfig::certification()).unwrap();
    assert_eq!(max_difference(ext.function(), even.function(), &pts).unwrap(), 0.0);
}

#[test]
fn eta_does_not_extend_one_dimensionally() {
    let cfg = QSeriesConfig::certification();
    let rho = eta_character().unwrap();
    let (s, t) = (scalar(rho.s_image()), scalar(rho.t_image()));
    let f: Evaluator = Arc::new(move |z| Ok(vec![eta(z, &cfg)?]));
    for j in 0..24 {
        let gl = Rep::scalar_gl(s, t, cis(2.0 * PI * j as f64 / 24.0)).unwrap();
        assert!(gl.relation_residual() > 0.1);
        let err = extend_form(f.clone(), 1, HALF, &gl, &standard_grid(), 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotModular { .. }), "{err}");
    }
}

#[test]
fn restriction_round_trips() {
    let pts = standard_grid();
    let cfg = QSeriesConfig::certification();
    let forms = [eisenstein_form(4, cfg).unwrap(), eisenstein_form(6, cfg).unwrap(), eta_hat_form(cfg).unwrap()];
    for form in forms {
        form.certify(&pts, 1e-9).unwrap();
        // restrict then extend recovers the lower restriction
        let res = form.restrict().unwrap();
        let ext = extend_form(res.function().upper().clone(), form.function().dim(), form.weight(), form.rep(), &pts, 1e-9)
            .unwrap();
        assert!(max_difference(ext.function(), form.function(), &pts).unwrap() < 1e-10);
        // extend then restrict keeps the very same evaluator
        let again = ext.restrict().unwrap();
        assert!(Arc::ptr_eq(again.function().upper(), res.function().upper()));
    }
}

const SIX: Weight = Weight::integral(6);

/// `eta^12` and a multiple of it, of weight 6 for the character
/// `rho_eta^12`, which is its own twist.
fn weight_six_pair() -> (VVForm, VVForm) {
    let f = eta_power_form(12, QSeriesConfig::certification()).unwrap();
    let pts = standard_grid_upper();
    f.certify(&pts, 1e-9).unwrap();
    let g = f.function().scale(C64::new(0.5, -0.25));
    let g = VVForm::certified(g, SIX, f.rep().r_twist().unwrap(), &pts, 1e-9).unwrap();
    (f, g)
}

#[test]
fn weight_six_character_is_self_twisted() {
    let (f, g) = weight_six_pair();
    assert!(f.rep().distance(g.rep()) < 1e-14);
    assert!((scalar(f.rep().t_image()) + 1.0).norm() < 1e-14);
}

#[test]
fn induction_round_trip() {
    let pts = standard_grid();
    let (f, g) = weight_six_pair();
    let ind = ind_form(&f, &g, SIX, &pts, 1e-9).unwrap();
    let (p1, p2) = (ind.project(0..1), ind.project(1..2));
    for z in standard_grid_upper() {
        assert_eq!(p1.eval(z).unwrap(), f.function().eval(z).unwrap());
        assert_eq!(p2.eval(z).unwrap(), g.function().eval(z).unwrap());
    }
    // the projections of an induced form induce it again
    let f2 = VVForm::new(p1, SIX, f.rep().clone()).unwrap();
    let g2 = VVForm::new(p2, SIX, g.rep().clone()).unwrap();
    let again = ind_form(&f2, &g2, SIX, &pts, 1e-9).unwrap();
    assert_eq!(max_difference(again.function(), ind.function(), &pts).unwrap(), 0.0);
}

#[test]
fn eta_hat_decomposes_as_induced() {
    let pts = standard_grid();
    let cfg = QSeriesConfig::certification();
    let hat = eta_hat_form(cfg).unwrap();
    let rho = eta_character().unwrap();
    assert!(hat.rep().distance(&rho.induce(HALF).unwrap()) == 0.0);
    let f = VVForm::new(hat.project(0..1), HALF, rho.clone()).unwrap();
    let g = VVForm::new(hat.project(1..2), HALF, rho.r_twist().unwrap()).unwrap();
    let rebuilt = ind_form(&f, &g, HALF, &pts, 1e-9).unwrap();
    assert!(max_difference(rebuilt.function(), hat.function(), &pts).unwrap() < 1e-15);
}

#[test]
fn weight_and_dimension_checks() {
    let pts = standard_grid();
    let f = eta_form(QSeriesConfig::certification()).unwrap();
    let wrong = VVForm::new(HoloFn::zero(1), Weight::from_twice(3), f.rep().r_twist().unwrap()).unwrap();
    assert!(matches!(ind_form(&f, &wrong, HALF, &pts, 1e-9), Err(Error::WeightMismatch(3, 1))));
    assert!(VVForm::certified(HoloFn::zero(1), HALF, f.rep().clone(), &pts, 1e-9).is_ok());
    let bogus = VVForm::new(f.function().clone(), HALF, Rep::trivial(CoverGroup::Sl)).unwrap();
    assert!(matches!(bogus.certify(&pts, 1e-9), Err(Error::NotModular { .. })));
}
