use std::time::Instant;

use dirac3t_core::lattice_oracle::{
    assemble_3d_spectrum, build_flux_dirac, landau_check, zero_mode_baseline, LANDAU_BASELINE,
};
use dirac3t_core::spectrum_engine::{enumerate_spectrum, HarmonicForm};
use dirac3t_core::torus_geometry::decompose_spinc;

#[test]
fn zero_modes_match_flux() {
    for h in 1..=4 {
        let n = zero_mode_baseline(h);
        let t = Instant::now();
        let r = landau_check(h, 1.0, n, 0).unwrap();
        eprintln!("h={h} N={n} zero_modes={} iters={} {:?}", r.zero_modes, r.iterations, t.elapsed());
        assert_eq!(r.zero_modes, h as usize);
    }
}

#[test]
fn landau_levels_converge() {
    for h in 1..=3 {
        let t = Instant::now();
        let coarse = landau_check(h, 1.0, LANDAU_BASELINE, 3).unwrap();
        let fine = landau_check(h, 1.0, 2 * LANDAU_BASELINE, 3).unwrap();
        eprintln!(
            "h={h} errors {:?} -> {:?} iters {} {} {:?}",
            coarse.level_errors, fine.level_errors, coarse.iterations, fine.iterations, t.elapsed()
        );
        assert!(coarse.max_rel_error < 0.05);
        assert!(fine.max_rel_error < 0.025);
        for (c, f) in coarse.level_errors.iter().zip(&fine.level_errors) {
            assert!(f <= &(c / 2.0));
        }
        assert_eq!(coarse.doubler_levels.len(), fine.doubler_levels.len());
    }
}

#[test]
fn example_sizes() {
    let d = build_flux_dirac(1, 32, 1.0).unwrap();
    assert_eq!(d.nrows, 2048);
    assert_eq!(landau_check(2, 1.0, 48, 0).unwrap().zero_modes, 2);
    assert!(build_flux_dirac(2, 8, 1.0).is_err());
}

#[test]
fn assembled_spectrum_matches_closed_form() {
    let spinc = decompose_spinc([0, 0, 1]);
    let report = landau_check(1, 1.0, LANDAU_BASELINE, 3).unwrap();
    let form = HarmonicForm::zero();
    let oracle = assemble_3d_spectrum(&spinc, &form, 4.0, &report).unwrap();
    let exact = enumerate_spectrum(&spinc, &form, 4.0).unwrap();
    assert_eq!(oracle.entries.len(), exact.entries.len());
    for (o, e) in oracle.entries.iter().zip(&exact.entries) {
        assert_eq!(o.label, e.label);
        assert_eq!(o.mult, e.mult);
        let rel = (o.value - e.value).abs() / e.value.abs().max(1.0);
        assert!(rel < 0.05, "{o:?} vs {e:?}");
    }
    // the sign-0 branches carry no lattice error at all
    for (o, e) in oracle.entries.iter().zip(&exact.entries) {
        if let dirac3t_core::spectrum_engine::BranchLabel::Nontrivial { n: 0, .. } = o.label {
            assert_eq!(o.value, e.value);
        }
    }
}
