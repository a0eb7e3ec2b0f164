use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use proptest::prelude::*;

use dirac3t_core::flow_index::{sections_exist, spectral_flow_closed_form, spectral_flow_from, spectral_flow_numeric};
use dirac3t_core::spectral_sections::{k_difference, KDifference, SectionDescriptor};
use dirac3t_core::spectrum_engine::{block_matrix, clifford_block, enumerate_spectrum, BlockEigenData, HarmonicForm};
use dirac3t_core::torus_geometry::ivec::{self, content};
use dirac3t_core::torus_geometry::{cup_pairing, decompose_spinc, projected_lattice, saturate_and_cosets, IVec3};

fn ivec3(bound: i64) -> impl Strategy<Value = IVec3> {
    [-bound..=bound, -bound..=bound, -bound..=bound]
}

fn nonzero(bound: i64) -> impl Strategy<Value = IVec3> {
    ivec3(bound).prop_filter("nonzero", |v| *v != [0, 0, 0])
}

fn primitive(bound: i64) -> impl Strategy<Value = IVec3> {
    nonzero(bound).prop_map(|v| {
        let g = content(&v);
        [v[0] / g, v[1] / g, v[2] / g]
    })
}

fn turns() -> impl Strategy<Value = Vector3<f64>> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c)| Vector3::new(a, b, c))
}

fn values(khat: IVec3, form: &HarmonicForm, cutoff: f64) -> Vec<f64> {
    let mut v = enumerate_spectrum(&decompose_spinc(khat), form, cutoff).unwrap().expanded_values();
    v.sort_by(f64::total_cmp);
    v
}

fn dist_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

proptest! {
    #[test]
    fn spinc_recomposes(khat in ivec3(50)) {
        let s = decompose_spinc(khat);
        let recomposed = s.k().map_or([0, 0, 0], |k| ivec::scale(s.h(), &k));
        prop_assert_eq!(recomposed, khat);
    }

    #[test]
    fn projected_area_and_c(k in primitive(10)) {
        let p = projected_lattice(k).unwrap();
        prop_assert!((p.area * p.norm_k() - 1.0).abs() < 1e-9);
        let kr = ivec::to_real(&k);
        for (w, c) in [(p.w1, p.c1), (p.w2, p.c2)] {
            let v = w - kr * c;
            prop_assert!(v.iter().all(|x| dist_to_integer(*x) < 1e-9), "{:?}", v);
        }
    }

    #[test]
    fn trivialize_round_trips(k in primitive(6), x in (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64)) {
        let p = projected_lattice(k).unwrap();
        let x = Vector3::new(x.0, x.1, x.2);
        let t = p.trivialize(p.coordinates(&x));
        let back = p.untrivialize(t.base, t.fiber);
        for i in 0..3 {
            let d = dist_to_integer(back[i] - x[i]);
            prop_assert!(d < 1e-9, "{:?} -> {:?}", x, back);
        }
    }

    #[test]
    fn coset_representatives_are_distinct(gens in prop::collection::vec(nonzero(4), 1..=3)) {
        let Ok(l) = saturate_and_cosets(&gens) else { return Ok(()) };
        prop_assert_eq!(l.cosets().len() as i64, l.index());
        for (i, r) in l.cosets().iter().enumerate() {
            prop_assert!(l.contains_saturated(r));
            prop_assert_eq!(l.coset_of(r).unwrap(), i);
            for s in &l.cosets()[..i] {
                prop_assert!(!l.contains(&ivec::sub(r, s)));
            }
        }
    }

    #[test]
    fn spectrum_is_gauge_periodic(khat in ivec3(4), t in turns(), a in ivec3(3), cutoff in 1.0..12.0f64) {
        let form = HarmonicForm::from_turns(t);
        let (x, y) = (values(khat, &form, cutoff), values(khat, &form.shifted(&a), cutoff));
        prop_assert_eq!(x.len(), y.len());
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_spectrum_is_symmetric(t in turns(), cutoff in 1.0..15.0f64) {
        let v = values([0, 0, 0], &HarmonicForm::from_turns(t), cutoff);
        let negated: Vec<f64> = v.iter().rev().map(|x| -x).collect();
        prop_assert_eq!(v, negated);
    }

    #[test]
    fn nontrivial_spectrum_ignores_parallel_part(khat in nonzero(4), t in turns(), u in turns(), cutoff in 1.0..12.0f64) {
        let kr = ivec::to_real(&khat);
        let perp = u - kr * (u.dot(&kr) / kr.norm_squared());
        let a = values(khat, &HarmonicForm::from_turns(t), cutoff);
        let b = values(khat, &HarmonicForm::from_turns(t + perp), cutoff);
        prop_assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn block_identities(lambda in -50.0..50.0f64, mu in -50.0..50.0f64) {
        let d = BlockEigenData::new(lambda, mu);
        let m = block_matrix(lambda, mu);
        let scale = d.s.max(1.0);
        prop_assert!((m * d.vplus - d.vplus * d.s).norm() <= 1e-10 * scale * d.vplus.norm());
        prop_assert!((m * d.vminus + d.vminus * d.s).norm() <= 1e-10 * scale * d.vminus.norm());
        prop_assert!(d.vplus.dot(&d.vminus).abs() <= 1e-10 * scale * scale);
    }

    #[test]
    fn clifford_relation(b in (-20.0..20.0f64, -20.0..20.0f64, -20.0..20.0f64)) {
        let beta = Vector3::new(b.0, b.1, b.2);
        let c = clifford_block(&beta);
        let defect = c * c - Matrix2::<Complex64>::identity() * Complex64::from(beta.norm_squared());
        prop_assert!(defect.norm() <= 1e-12 * beta.norm_squared().max(1.0));
    }

    #[test]
    fn numeric_flow_matches_closed_form(khat in ivec3(10), a in nonzero(5)) {
        let r = spectral_flow_numeric(&decompose_spinc(khat), &a, 64).unwrap();
        prop_assert_eq!(r.flow, cup_pairing(&khat, &a));
        let dirs: i64 = r.crossings.iter().map(|c| c.dir as i64).sum();
        prop_assert_eq!(dirs, r.flow);
    }

    #[test]
    fn flow_is_additive(khat in ivec3(6), a1 in nonzero(3), a2 in nonzero(3)) {
        let spinc = decompose_spinc(khat);
        let sum = ivec::add(&a1, &a2);
        prop_assert_eq!(
            spectral_flow_closed_form(&spinc, &sum),
            spectral_flow_closed_form(&spinc, &a1) + spectral_flow_closed_form(&spinc, &a2)
        );
        // the second leg starts where the first one ends
        let first = spectral_flow_numeric(&spinc, &a1, 64).unwrap().flow;
        let end = HarmonicForm::from_turns(ivec::to_real(&a1));
        let second = spectral_flow_from(&spinc, &end, &a2, 64).unwrap().flow;
        if sum != [0, 0, 0] {
            prop_assert_eq!(first + second, spectral_flow_numeric(&spinc, &sum, 64).unwrap().flow);
        }
    }

    #[test]
    fn existence_matches_pairings(khat in ivec3(4), gens in prop::collection::vec(nonzero(3), 1..=2)) {
        let Ok(l) = saturate_and_cosets(&gens) else { return Ok(()) };
        let expected = gens.iter().all(|g| cup_pairing(&khat, g) == 0);
        prop_assert_eq!(sections_exist(&decompose_spinc(khat), &l), expected);
    }

    #[test]
    fn k_difference_is_antisymmetric_and_additive(
        g in prop::collection::vec(prop::collection::vec(-3..=3i64, 6), 3),
        r in prop::collection::vec((0..=4i64, -3..=3i64), 3),
    ) {
        let l = saturate_and_cosets(&[[2, 0, 0], [0, 3, 0]]).unwrap();
        let t: Vec<SectionDescriptor> = g.iter().map(|g| SectionDescriptor::trivial(&l, g, 0.5).unwrap()).collect();
        let n: Vec<SectionDescriptor> = r.iter().map(|&(r, c)| SectionDescriptor::nontrivial(r, c, 0.5)).collect();
        for d in [&t, &n] {
            let kd = |i: usize, j: usize| k_difference(&d[i], &d[j]).unwrap();
            prop_assert_eq!(kd(0, 0), KDifference { delta_rank: 0, delta_c1: 0 });
            let (ab, ba) = (kd(0, 1), kd(1, 0));
            prop_assert_eq!((ab.delta_rank, ab.delta_c1), (-ba.delta_rank, -ba.delta_c1));
            let (bc, ac) = (kd(1, 2), kd(0, 2));
            prop_assert_eq!((ab.delta_rank + bc.delta_rank, ab.delta_c1 + bc.delta_c1), (ac.delta_rank, ac.delta_c1));
        }
        prop_assert!(k_difference(&t[0], &n[0]).is_err());
    }
}

#[test]
fn documented_crossings() {
    let r = spectral_flow_numeric(&decompose_spinc([0, 0, 2]), &[0, 0, 1], 256).unwrap();
    assert_eq!(r.flow, 2);
    assert_eq!(r.crossings.len(), 2);
    assert!(r.crossings.iter().all(|c| c.t == 0.0 && c.dir == 1));

    let r = spectral_flow_numeric(&decompose_spinc([0, 0, 1]), &[0, 0, -3], 256).unwrap();
    let mut ts: Vec<f64> = r.crossings.iter().map(|c| c.t).collect();
    ts.sort_by(f64::total_cmp);
    assert_eq!(r.flow, -3);
    for (t, expected) in ts.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
        assert!((t - expected).abs() < 1e-12, "{ts:?}");
    }
}
