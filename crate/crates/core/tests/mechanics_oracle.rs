mod common;

use casimir_core::mechanics::{deflection_profile, pressure_to_gap_change, DeviceGeometry};
use common::{max_relative_deviation, string_deflection_fd, SplitMix};

#[test]
fn closed_form_matches_finite_differences() {
    let mut rng = SplitMix(0x5eed);
    for case in 0..20 {
        let length = rng.range(50e-6, 500e-6);
        let tension = rng.range(1e-5, 1e-3);
        let q = rng.range(1e-9, 1e-6);
        let a = rng.range(0.0, 0.9);
        let b = rng.range(a + 0.05, 1.0);
        let (x1, x2) = (a * length, b * length);
        let profile = deflection_profile(q, (x1, x2), length, tension).unwrap();
        let nodes = string_deflection_fd(q, x1, x2, length, tension, 10_000);
        let dev = max_relative_deviation(&nodes, |x| profile.at(x));
        assert!(dev < 1e-6, "case {case}: deviation {dev}");
    }
}

#[test]
fn centered_load_is_symmetric() {
    let mut rng = SplitMix(7);
    for _ in 0..10 {
        let l = rng.range(100e-6, 400e-6);
        let c = rng.range(0.1, 1.0) * l;
        let p = deflection_profile(1e-7, (0.5 * (l - c), 0.5 * (l + c)), l, 3e-4).unwrap();
        for f in [0.01, 0.1, 0.3, 0.45] {
            let (a, b) = (p.at(f * l), p.at((1.0 - f) * l));
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }
}

#[test]
fn gap_change_is_linear() {
    let g = DeviceGeometry::reference_device();
    let one = pressure_to_gap_change(0.37, &g).unwrap();
    let two = pressure_to_gap_change(0.74, &g).unwrap();
    assert!((two - 2.0 * one).abs() <= 1e-15 * two);
}
