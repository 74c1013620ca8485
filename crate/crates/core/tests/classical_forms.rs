use std::f64::consts::PI;

use dhp_core::automorphy::{sqrt_branch, standard_grid, standard_grid_upper};
use dhp_core::classical::*;
use dhp_core::meta_group::*;
use dhp_core::rep::CMat;
use dhp_core::slash::Weight;
use dhp_core::{Error, C64};

/// Frozen from a 30-digit evaluation of the same product.
const ETA_AT_I: f64 = 0.768_225_422_326_056_6;

fn cfg() -> QSeriesConfig {
    QSeriesConfig::default()
}

#[test]
fn eta_translation() {
    for p in standard_grid_upper() {
        let z = p.z();
        let lhs = eta(z + 1.0, &cfg()).unwrap();
        let rhs = C64::from_polar(1.0, PI / 12.0) * eta(z, &cfg()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12, "{z}");
    }
}

#[test]
fn eta_inversion() {
    for p in standard_grid_upper() {
        let z = p.z();
        let lhs = eta(-z.inv(), &cfg()).unwrap();
        let rhs = sqrt_branch(-C64::i() * z).unwrap() * eta(z, &cfg()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10, "{z}");
    }
}

#[test]
fn eta_at_i_matches_frozen_value() {
    let v = eta(C64::i(), &cfg()).unwrap();
    assert!((v.re - 0.768_225_422_325_18).abs() < 1e-12);
    assert!((v.re - ETA_AT_I).abs() < 1e-15 && v.im.abs() < 1e-15, "{v}");
}

#[test]
fn character_does_not_depend_on_base_point() {
    let base = eta_character_at(CHARACTER_BASE_POINT, &cfg()).unwrap();
    for z0 in [C64::new(-0.3, 0.9), C64::new(0.45, 2.2), C64::new(0.0, 1.0)] {
        let other = eta_character_at(z0, &cfg()).unwrap();
        for (a, b) in base.iter().zip(&other) {
            assert_eq!(a.exponent, b.exponent);
            assert!(b.snap_distance < 1e-12, "{z0}");
        }
    }
    assert_eq!(base[0].exponent, 21);
    assert_eq!(base[1].exponent, 1);
}

#[test]
fn eta_transforms_on_depth_five_universe() {
    let form = eta_form(QSeriesConfig::certification()).unwrap();
    let pts = standard_grid_upper();
    let mut worst = 0.0f64;
    for e in enumerate_cover(5).unwrap().into_iter().filter(|e| e.elem.det() == 1) {
        let value = form.rep().eval(&e.elem).unwrap()[(0, 0)];
        assert!(snap_to_root_of_unity(value, 24).2 < 1e-10);
        worst = worst.max(form.modularity_residual(&e.elem, &pts).unwrap());
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn eisenstein_periodic_and_modular() {
    for k in [4i64, 6] {
        for p in standard_grid_upper() {
            let z = p.z();
            let e = eisenstein(k, z, &QSeriesConfig::certification()).unwrap();
            let shifted = eisenstein(k, z + 1.0, &QSeriesConfig::certification()).unwrap();
            assert!((e - shifted).norm() < 1e-12 * e.norm().max(1.0));
            let inverted = eisenstein(k, -z.inv(), &QSeriesConfig::certification()).unwrap();
            assert!((inverted - z.powi(k as i32) * e).norm() < 1e-9, "k={k} z={z}");
        }
    }
}

#[test]
fn eisenstein_matches_lattice_sum_relative() {
    // absolute gaps at cutoff 200 are 1.33e-6 and 1.04e-6: the truncation
    // error of the box sum itself
    for z in [C64::new(0.0, 2.0), C64::new(1.0, 2.0)] {
        let e = eisenstein(4, z, &cfg()).unwrap();
        let l200 = lattice_sum(4, z, 200).unwrap();
        let l400 = lattice_sum(4, z, 400).unwrap();
        assert!((e - l200).norm() / e.norm() < 1e-6);
        assert!((e - l400).norm() < 5e-7);
        assert!((e - l400).norm() < (e - l200).norm() / 3.0);
    }
    let z = C64::new(0.0, 2.0);
    assert!((lattice_sum(4, z, 200).unwrap() - lattice_sum(4, z, 400).unwrap()).norm() < 1e-6);
}

#[test]
fn even_extensions_are_gl_modular() {
    let pts = standard_grid();
    for k in [4, 6] {
        let form = eisenstein_form(k, QSeriesConfig::certification()).unwrap();
        assert!(form.certify(&pts, 1e-9).unwrap() < 1e-9);
        for p in standard_grid_upper() {
            let up = form.function().eval(p).unwrap();
            let down = form.function().eval(p.reflect()).unwrap();
            assert_eq!(up, down);
        }
    }
    let one = even_extension(1, std::sync::Arc::new(|_| Ok(vec![C64::new(1.0, 0.0)])));
    for p in standard_grid() {
        assert_eq!(one.eval(p).unwrap(), [C64::new(1.0, 0.0)]);
    }
}

fn zn_points() -> [C64; 6] {
    [
        C64::new(0.3, 0.7),
        C64::new(-0.45, 0.2),
        C64::new(1.1, -0.6),
        C64::new(0.0, 1.0),
        C64::new(2.5, -0.05),
        C64::new(-0.8, -1.0),
    ]
}

#[test]
fn zn_parity_and_factorisation() {
    for z in zn_points() {
        assert_eq!(z_n_product(0, z).direct, C64::new(1.0, 0.0));
        for n in 1..=12u32 {
            let v = z_n_product(n, z);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let parity = (z_n_product(n, -z).direct - v.direct * sign).norm() / v.direct.norm().max(1.0);
            assert!(parity < 1e-12);
            assert!((v.direct - v.factored).norm() / v.direct.norm().max(1.0) < 1e-12, "n={n} z={z}");
        }
    }
}

#[test]
fn eta_hat_identities() {
    let cfg = QSeriesConfig::certification();
    let swap = CMat::from_row_slice(2, 2, &[C64::new(0.0, 0.0), -C64::i(), C64::i(), C64::new(0.0, 0.0)]);
    for p in standard_grid() {
        let v = eta_hat(p.z(), &cfg).unwrap();
        let w = eta_hat(-p.z(), &cfg).unwrap();
        let rhs = &swap * nalgebra::DVector::from_column_slice(&v);
        assert!((w[0] - rhs[0]).norm() < 1e-10 && (w[1] - rhs[1]).norm() < 1e-10);
        if p.is_upper() {
            assert_eq!(v[1], C64::new(0.0, 0.0));
        }
    }
    let form = eta_hat_form(cfg).unwrap();
    let pts = standard_grid();
    assert!(form.modularity_residual(&MetaElt::r(), &pts).unwrap() < 1e-10);
    for p in standard_grid() {
        assert_eq!(form.function().eval(p).unwrap(), eta_hat(p.z(), &cfg).unwrap());
    }
}

#[test]
fn named_forms() {
    let i = C64::i();
    let v = NamedForm::Eta.evaluate(i, &cfg()).unwrap();
    assert!((v[0].re - ETA_AT_I).abs() < 1e-14);
    let hat = NamedForm::EtaHat.evaluate(-i, &cfg()).unwrap();
    assert_eq!(hat[0], C64::new(0.0, 0.0));
    assert!((hat[1] - i * ETA_AT_I).norm() < 1e-14);
    assert_eq!(NamedForm::E4.evaluate(-i, &cfg()).unwrap(), NamedForm::E4.evaluate(i, &cfg()).unwrap());
    assert_eq!(NamedForm::E6.default_weight(), Some(Weight::integral(6)));
    assert!(NamedForm::Zn(3).form(cfg()).is_err());
    assert!(matches!(NamedForm::Eta.evaluate(C64::new(0.0, 0.01), &cfg()), Err(Error::NearRealAxis { .. })));
    assert!(matches!(NamedForm::Eta.evaluate(-i, &cfg()), Err(Error::WrongHalfPlane { .. })));
}

/// Finite-difference Cauchy-Riemann residual `|f_x + i f_y|` relative to `|f'|`.
fn cauchy_riemann(f: impl Fn(C64) -> C64, z: C64) -> f64 {
    let h = 1e-5;
    let fx = (f(z + h) - f(z - h)) / (2.0 * h);
    let fy = (f(z + C64::new(0.0, h)) - f(z - C64::new(0.0, h))) / (2.0 * h);
    (fx + C64::i() * fy).norm() / fx.norm().max(1.0)
}

#[test]
fn evaluators_are_holomorphic() {
    let c = cfg();
    for p in standard_grid() {
        let z = p.z();
        assert!(cauchy_riemann(|w| eta_hat(w, &c).unwrap()[if p.is_upper() { 0 } else { 1 }], z) < 1e-6);
        if p.is_upper() {
            assert!(cauchy_riemann(|w| eisenstein(4, w, &c).unwrap(), z) < 1e-6);
            assert!(cauchy_riemann(|w| eisenstein(6, w, &c).unwrap(), z) < 1e-6);
        }
        assert!(cauchy_riemann(|w| z_n_product(5, w).direct, z) < 1e-6);
    }
}
