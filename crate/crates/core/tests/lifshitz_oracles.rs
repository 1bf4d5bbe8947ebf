mod common;

use casimir_core::lifshitz::{ideal_pressure_closed_form, plate_pressure, LifshitzNumerics};
use casimir_core::MaterialModel;
use common::ideal_pressure_image_sum;

const WP: f64 = 2.24e16;
const GAMMA: f64 = 1.24e14;

fn models(t_c: f64) -> [MaterialModel; 4] {
    [
        MaterialModel::IdealMetal,
        MaterialModel::Plasma { omega_p: WP },
        MaterialModel::SuperconductorTwoFluid {
            omega_p: WP,
            gamma: GAMMA,
            t_c,
        },
        MaterialModel::Drude {
            omega_p: WP,
            gamma: GAMMA,
        },
    ]
}

fn pressure(gap: f64, t: f64, m: &MaterialModel) -> f64 {
    plate_pressure(gap, t, m, m, &LifshitzNumerics::default())
        .unwrap()
        .pressure
}

#[test]
fn ideal_matsubara_sum_matches_image_expansion() {
    for (gap, t) in [
        (100e-9, 1.0),
        (100e-9, 0.05),
        (300e-9, 4.0),
        (1e-6, 300.0),
        (2e-6, 1000.0),
    ] {
        let oracle = ideal_pressure_image_sum(gap, t, 20_000);
        let p = pressure(gap, t, &MaterialModel::IdealMetal);
        assert!(
            (p - oracle).abs() < 1e-6 * oracle,
            "a={gap} T={t}: {p} vs {oracle}"
        );
    }
}

#[test]
fn low_temperature_ideal_tends_to_closed_form() {
    let oracle = ideal_pressure_image_sum(100e-9, 0.01, 20_000);
    let closed = ideal_pressure_closed_form(100e-9).unwrap();
    assert!((oracle - closed).abs() < 1e-9 * closed);
    let t0 = pressure(100e-9, 0.0, &MaterialModel::IdealMetal);
    assert!((t0 - closed).abs() < 1e-8 * closed);
}

#[test]
fn model_ordering_on_grid() {
    let t_c = 1.2;
    for gap in [100e-9, 150e-9, 200e-9, 250e-9, 300e-9] {
        for t in [0.01, 0.1, 0.4, 0.8, 1.1] {
            let p: Vec<f64> = models(t_c).iter().map(|m| pressure(gap, t, m)).collect();
            for w in p.windows(2) {
                assert!(w[0] >= w[1], "a={gap} T={t}: {p:?}");
            }
            assert!(p[1] > p[3]);
        }
    }
}

#[test]
fn pressure_decreases_with_gap() {
    for m in models(0.9) {
        for t in [0.0, 0.5, 2.0] {
            let mut last = f64::INFINITY;
            for i in 0..21 {
                let gap = 100e-9 + 10e-9 * i as f64;
                let p = pressure(gap, t, &m);
                assert!(p < last, "{} T={t} a={gap}", m.kind());
                last = p;
            }
        }
    }
}

#[test]
fn tightening_tolerances_changes_little() {
    let coarse = LifshitzNumerics::default();
    let fine = LifshitzNumerics {
        rel_tol_quadrature: coarse.rel_tol_quadrature / 2.0,
        rel_tol_series: coarse.rel_tol_series / 2.0,
        ..coarse
    };
    for m in models(0.9) {
        for (gap, t) in [(100e-9, 0.0), (100e-9, 0.3), (200e-9, 1.5), (150e-9, 300.0)] {
            let a = plate_pressure(gap, t, &m, &m, &coarse).unwrap();
            let b = plate_pressure(gap, t, &m, &m, &fine).unwrap();
            assert!(
                (a.pressure - b.pressure).abs()
                    <= 2.0 * coarse.rel_tol_series * b.pressure + 1e-8 * b.pressure,
                "{} a={gap} T={t}: {} vs {}",
                m.kind(),
                a.pressure,
                b.pressure
            );
            assert!(a.truncation_estimate <= coarse.rel_tol_series * a.pressure);
        }
    }
}
