use std::collections::BTreeMap;

use hopfkit::catalog::{build_from_presentation, build_named, generator_element, map_from_generator_images, Family};
use hopfkit::companion::*;
use hopfkit::hopf::{is_algebra_morphism, is_hopf_morphism};
use hopfkit::integrals::compute_integrals;
use hopfkit::linalg::{proportionality, scale_vec, Span, Vector};
use hopfkit::{CycloNum, HopfAlgebra, HopfError, LinearMap};
use proptest::prelude::*;

/// Catalog algebra over its companion field, with its presentation.
fn setup(fam: Family) -> (HopfAlgebra, hopfkit::catalog::Presentation) {
    let p = fam.presentation().unwrap();
    let h = with_companion_field(&build_from_presentation(&p).unwrap()).unwrap();
    (h, p)
}

fn elem(h: &HopfAlgebra, p: &hopfkit::catalog::Presentation, words: &[(&str, u32)]) -> Vector {
    words.iter().fold(h.unit().clone(), |acc, (g, e)| {
        h.mul_vec(&acc, &h.power(&generator_element(h, p, g).unwrap(), *e as usize))
    })
}

fn same_span(h: &HopfAlgebra, a: &[Vector], b: &[Vector]) -> bool {
    let sa = Span::from_vectors(h.field(), h.dim(), a);
    let sb = Span::from_vectors(h.field(), h.dim(), b);
    sa.rank() == sb.rank() && b.iter().all(|v| sa.contains(v)) && a.iter().all(|v| sb.contains(v))
}

fn diagonal_on_generators(h: &HopfAlgebra, p: &hopfkit::catalog::Presentation, scalars: &[(&str, CycloNum)]) -> LinearMap {
    let images: BTreeMap<String, Vector> = scalars
        .iter()
        .map(|(n, c)| (n.to_string(), scale_vec(c, &generator_element(h, p, n).unwrap())))
        .collect();
    map_from_generator_images(h, p, &images).unwrap()
}

#[test]
fn generator_images_identity() {
    for fam in [Family::Radford(3), Family::AC2xC2, Family::A1] {
        let (h, p) = setup(fam);
        let id = map_from_generator_images(&h, &p, &BTreeMap::new()).unwrap();
        assert!(id.is_identity(), "{fam}");
    }
}

#[test]
fn eigenspaces_of_small_algebras() {
    let (h, _) = setup(Family::GroupAlgebraCyclic(2));
    let e = eigendecompose_s2(&h).unwrap();
    assert_eq!((e.m, e.exponents.clone()), (1, vec![0]));
    assert_eq!(e.spaces[&0].len(), 2);

    let (h, p) = setup(Family::Sweedler);
    let e = eigendecompose_s2(&h).unwrap();
    assert_eq!(e.m, 2);
    assert!(same_span(&h, &e.spaces[&0], &[h.unit().clone(), elem(&h, &p, &[("g", 1)])]));
    assert!(same_span(&h, &e.spaces[&1], &[elem(&h, &p, &[("x", 1)]), elem(&h, &p, &[("g", 1), ("x", 1)])]));

    let (h, p) = setup(Family::A2C4);
    let e = eigendecompose_s2(&h).unwrap();
    let gs: Vec<Vector> = (0..4).map(|k| elem(&h, &p, &[("g", k)])).collect();
    let gxs: Vec<Vector> = (0..4).map(|k| elem(&h, &p, &[("g", k), ("x", 1)])).collect();
    assert!(same_span(&h, &e.spaces[&0], &gs));
    assert!(same_span(&h, &e.spaces[&1], &gxs));
    assert_eq!(e.eigenvalue(1), h.field().int(-1));
}

#[test]
fn eigendata_invariants() {
    for fam in hopfkit::catalog::catalog_families() {
        let (h, _) = setup(fam);
        let e = eigendecompose_s2(&h).unwrap();
        let total: usize = e.spaces.values().map(Vec::len).sum();
        assert_eq!(total, h.dim());
        for (&i, basis) in &e.spaces {
            for v in basis {
                assert_eq!(e.d.apply(v), scale_vec(&e.eigenvalue(i), v));
            }
        }
        assert_eq!(&e.r * &e.r, e.q);
        let order = e.r.multiplicative_order(1000).unwrap();
        assert_eq!(order, if e.m.is_multiple_of(2) { 2 * e.m } else { e.m }, "{fam}");
    }
}

#[test]
fn small_conductor_is_rejected() {
    let h = build_named(Family::Taft(3)).unwrap();
    let small = h.with_field(&hopfkit::CycloField::new(h.field().conductor())).unwrap();
    // Taft(3) needs z3 only; its natural conductor already contains it
    assert!(eigendecompose_s2(&small).is_ok());
    let sweedler = build_named(Family::Sweedler).unwrap();
    let ok = eigendecompose_s2(&sweedler);
    assert!(ok.is_ok() || matches!(ok, Err(HopfError::ConductorTooSmall { .. })));
}

#[test]
fn odd_order_shortcut() {
    let (h, _) = setup(Family::GroupAlgebraCyclic(3));
    let e = eigendecompose_s2(&h).unwrap();
    assert!(odd_order_companion(&e).unwrap().is_identity());
    for fam in [Family::Radford(3), Family::Taft(3), Family::Taft(5)] {
        let (h, _) = setup(fam);
        let e = eigendecompose_s2(&h).unwrap();
        assert_eq!(e.m % 2, 1);
        let sigma = odd_order_companion(&e).unwrap();
        assert_eq!(sigma, e.d.pow(e.m.div_ceil(2)));
        assert_eq!(sigma.compose(&sigma), h.s2());
        assert!(verify_companion(&h, &sigma).unwrap().passed(), "{fam}");
    }
    for fam in [Family::Sweedler, Family::Taft(4)] {
        let (h, _) = setup(fam);
        assert!(odd_order_companion(&eigendecompose_s2(&h).unwrap()).is_none());
    }
}

#[test]
fn sweedler_square_roots() {
    let (h, p) = setup(Family::Sweedler);
    let e = eigendecompose_s2(&h).unwrap();
    let i = h.field().root_of_unity(4, 1).unwrap();
    let sigma = sqrt_from_splitting(&e, &Splitting::trivial(&e)).unwrap();
    assert_eq!(sigma, diagonal_on_generators(&h, &p, &[("x", i.clone())]));

    let x = elem(&h, &p, &[("x", 1)]);
    let gx = elem(&h, &p, &[("g", 1), ("x", 1)]);
    let mixed = Splitting {
        plus: BTreeMap::from([(0, e.spaces[&0].clone()), (1, vec![gx])]),
        minus: BTreeMap::from([(0, vec![]), (1, vec![x])]),
    };
    let s = sqrt_from_splitting(&e, &mixed).unwrap();
    assert_eq!(s.matrix().mul(s.matrix()), *h.s2().matrix());
    assert!(!is_algebra_morphism(&s, &h, &h).unwrap().passed);

    for c in [i.clone(), -&i] {
        let sigma = diagonal_on_generators(&h, &p, &[("x", c)]);
        assert!(verify_companion(&h, &sigma).unwrap().passed());
    }
    let wrong = diagonal_on_generators(&h, &p, &[("x", h.field().one())]);
    let report = verify_companion(&h, &wrong).unwrap();
    assert!(!report.checks.get("sigma^2 = S^2").unwrap().passed);
}

#[test]
fn group_algebra_all_plus_is_identity() {
    let (h, _) = setup(Family::GroupAlgebraCyclic(2));
    let e = eigendecompose_s2(&h).unwrap();
    assert!(sqrt_from_splitting(&e, &Splitting::trivial(&e)).unwrap().is_identity());
}

#[test]
fn splitting_condition_examples() {
    let (h, _) = setup(Family::Sweedler);
    let e = eigendecompose_s2(&h).unwrap();
    let t = Splitting::trivial(&e);
    assert!(check_splitting_algebra(&h, &e, &t).unwrap().passed);
    assert!(check_splitting_coalgebra(&h, &e, &t).unwrap().passed);
    let swapped = Splitting {
        plus: BTreeMap::from([(0, vec![]), (1, e.spaces[&1].clone())]),
        minus: BTreeMap::from([(0, e.spaces[&0].clone()), (1, vec![])]),
    };
    let c = check_splitting_coalgebra(&h, &e, &swapped).unwrap();
    assert!(!c.passed);
    assert!(c.violation.unwrap().starts_with("eps("));

    let (h, _) = setup(Family::A2C4);
    let e = eigendecompose_s2(&h).unwrap();
    let c = check_splitting_algebra(&h, &e, &Splitting::trivial(&e)).unwrap();
    let v = c.violation.unwrap();
    assert!(v.starts_with("i+j >= m, m even"), "{v}");
    assert!(v.contains("V-,0"), "{v}");

    let (h, _) = setup(Family::Radford(3));
    let e = eigendecompose_s2(&h).unwrap();
    let t = Splitting::trivial(&e);
    assert!(check_splitting_algebra(&h, &e, &t).unwrap().passed);

    let (h, _) = setup(Family::Taft(4));
    let e = eigendecompose_s2(&h).unwrap();
    assert!(check_splitting_coalgebra(&h, &e, &Splitting::trivial(&e)).unwrap().passed);
}

#[test]
fn taft_trivial_splitting_scales_x() {
    for n in 2..=6 {
        let (h, p) = setup(Family::Taft(n));
        let e = eigendecompose_s2(&h).unwrap();
        let sigma = trivial_splitting_companion(&h, &e).unwrap().sigma.expect("Taft companion");
        let x = generator_element(&h, &p, "x").unwrap();
        let g = generator_element(&h, &p, "g").unwrap();
        assert_eq!(sigma.apply(&g), g);
        let nu = proportionality(&sigma.apply(&x), &x).expect("sigma(x) is a multiple of x");
        let s2x = proportionality(&h.s2().apply(&x), &x).unwrap();
        assert_eq!(&nu * &nu, s2x);
        assert!(verify_companion(&h, &sigma).unwrap().passed());
    }
}

#[test]
fn radford_trivial_splitting_fails_on_xy() {
    // xy is fixed by S^2 but sigma(x) sigma(y) = r^2 xy = -xy for the uniform choice
    let (h, _) = setup(Family::Radford(2));
    let e = eigendecompose_s2(&h).unwrap();
    let t = trivial_splitting_companion(&h, &e).unwrap();
    assert!(t.sigma.is_none());
    assert!(!t.algebra.passed);
}

#[test]
fn radford_four_companions() {
    for n in [2, 3] {
        let (h, p) = setup(Family::Radford(n));
        let x = generator_element(&h, &p, "x").unwrap();
        let y = generator_element(&h, &p, "y").unwrap();
        let omega = proportionality(&h.s2().apply(&y), &y).unwrap();
        let omega_x = proportionality(&h.s2().apply(&x), &x).unwrap();
        assert_eq!(&omega * &omega_x, h.field().one());
        let nu = omega.sqrt_of_root_of_unity(100).unwrap()[0].embed(h.field()).unwrap();
        let nu_inv = nu.inv().unwrap();
        for sx in [1, -1] {
            for sy in [1, -1] {
                let sigma = diagonal_on_generators(&h, &p, &[("x", nu_inv.scale_int(sx)), ("y", nu.scale_int(sy))]);
                let report = verify_companion(&h, &sigma).unwrap();
                assert!(report.passed(), "Radford({n}) signs ({sx}, {sy}): {:?}", report.checks.failed());
            }
        }
    }
}

#[test]
fn diagonal_companions_of_dimension_eight() {
    let (h, p) = setup(Family::AC2);
    let i = h.field().root_of_unity(4, 1).unwrap();
    let s = diagonal_on_generators(&h, &p, &[("x", i.clone()), ("y", i.clone())]);
    assert!(verify_companion(&h, &s).unwrap().passed());

    for fam in [Family::A1C4, Family::AC2xC2] {
        let (h, p) = setup(fam);
        let s = diagonal_on_generators(&h, &p, &[("x", i.embed(h.field()).unwrap())]);
        assert!(verify_companion(&h, &s).unwrap().passed(), "{fam}");
    }
    for k in [1, 3] {
        let (h, p) = setup(Family::A3C4(k));
        let omega = h.field().root_of_unity(4, k as i64).unwrap();
        let s = diagonal_on_generators(&h, &p, &[("x", omega)]);
        assert!(verify_companion(&h, &s).unwrap().passed(), "A3_C4({k})");
    }
}

#[test]
fn linear_constraints_force_unique_candidates() {
    for (fam, forced) in [(Family::A2C4, true), (Family::Sweedler, true), (Family::A1, true)] {
        let (h, p) = setup(fam);
        let data = compute_integrals(&h).unwrap();
        let roots = data.alpha_of_a.sqrt_of_root_of_unity(1000).unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            let r = r.embed(h.field()).unwrap();
            let fam_sol = propagate_linear_constraints(&h, &data, &r, &Assignment::identity(&h)).unwrap();
            assert_eq!(fam_sol.directions.is_empty(), forced, "{fam}");
            let x = generator_element(&h, &p, "x").unwrap();
            assert_eq!(fam_sol.particular.apply(&x), scale_vec(&r, &x), "{fam}");
        }
    }
}

#[test]
fn certificates_name_the_violated_relation() {
    for (fam, label) in [(Family::A2C4, "x^2 = g^2 - 1"), (Family::A1, "x^2 = 1 - g^2")] {
        let h = build_named(fam).unwrap();
        match decide_ai(&h).unwrap() {
            AIVerdict::NotAI { certificate, .. } => {
                assert_eq!(certificate.len(), 2);
                let rs: Vec<&str> = certificate.iter().map(|b| b.r_sigma.as_str()).collect();
                assert_ne!(rs[0], rs[1]);
                for b in &certificate {
                    assert_eq!(b.residual_dim, Some(0));
                    assert!(b.outcome.contains(&format!("{label} not preserved")), "{}", b.outcome);
                }
            }
            v => panic!("{fam}: {}", v.tag()),
        }
    }
}

#[test]
fn certificates_are_reproducible() {
    let h = build_named(Family::A1).unwrap();
    let a = serde_json::to_string(&decide_ai(&h).unwrap()).unwrap();
    let b = serde_json::to_string(&decide_ai(&h).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn tiers_agree() {
    for fam in [Family::Taft(3), Family::Taft(5), Family::Radford(3), Family::GroupAlgebraCyclic(4)] {
        let (h, _) = setup(fam);
        let e = eigendecompose_s2(&h).unwrap();
        let t1 = odd_order_companion(&e).unwrap();
        let t2 = trivial_splitting_companion(&h, &e).unwrap().sigma.unwrap();
        assert!(verify_companion(&h, &t1).unwrap().passed());
        assert!(verify_companion(&h, &t2).unwrap().passed());
    }
    for fam in [Family::Sweedler, Family::A0] {
        let (h, _) = setup(fam);
        let e = eigendecompose_s2(&h).unwrap();
        let t2 = trivial_splitting_companion(&h, &e).unwrap().sigma.unwrap();
        let t3 = sign_search_companion(&h, &e).unwrap().unwrap();
        assert!(verify_companion(&h, &t2).unwrap().passed());
        assert!(verify_companion(&h, &t3).unwrap().passed());
    }
}

#[test]
fn tiny_budget_is_inconclusive() {
    let h = build_named(Family::Radford(2)).unwrap();
    let v = decide_ai_with(&h, DecideOptions { branch_budget: 1 }).unwrap();
    assert_eq!(v.tag(), "Inconclusive");
}

#[test]
fn radford_two_is_found_by_sign_search() {
    let h = build_named(Family::Radford(2)).unwrap();
    match decide_ai(&h).unwrap() {
        AIVerdict::Witness { method, sigma, .. } => {
            assert_eq!(method, WitnessMethod::SignSearch);
            let hc = with_companion_field(&h).unwrap();
            assert!(verify_companion(&hc, &sigma).unwrap().passed());
        }
        v => panic!("{}", v.tag()),
    }
}

#[test]
fn trivial_extension_examples() {
    let (h, p) = setup(Family::Sweedler);
    let t = is_trivial_extension_over_fixed_space(&h).unwrap();
    assert!(t.holds && t.counit_vanishes_on_m);
    assert!(same_span(&h, &t.k_basis, &[h.unit().clone(), elem(&h, &p, &[("g", 1)])]));
    assert!(same_span(&h, &t.m_basis, &[elem(&h, &p, &[("x", 1)]), elem(&h, &p, &[("g", 1), ("x", 1)])]));
    assert!(verify_companion(&h, t.companion.as_ref().unwrap()).unwrap().passed());

    for fam in [Family::A1C4, Family::A3C4(1), Family::A3C4(3), Family::AC2xC2, Family::A0, Family::B0, Family::B1(1), Family::B1(5)] {
        let t = is_trivial_extension_over_fixed_space(&build_named(fam).unwrap()).unwrap();
        assert!(t.holds, "{fam}: {:?}", t.violation);
        assert!(t.counit_vanishes_on_m);
    }
    for fam in [Family::A2C4, Family::A1] {
        let t = is_trivial_extension_over_fixed_space(&build_named(fam).unwrap()).unwrap();
        assert!(!t.holds);
        assert!(t.violation.unwrap().starts_with("M^2 = 0"));
    }
}

#[test]
fn witnesses_satisfy_companion_consequences() {
    for fam in hopfkit::catalog::catalog_families() {
        let h = build_named(fam).unwrap();
        let v = decide_ai(&h).unwrap();
        if let Some(sigma) = v.sigma() {
            let hc = with_companion_field(&h).unwrap();
            assert_eq!(sigma.compose(sigma), hc.s2());
            assert_eq!(sigma.compose(hc.antipode()), hc.antipode().compose(sigma));
            assert!(is_hopf_morphism(sigma, &hc, &hc).unwrap().passed);
            let report = verify_companion(&hc, sigma).unwrap();
            assert!(report.passed(), "{fam}: {:?}", report.checks.failed());
        }
    }
}

fn sign_case() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (0usize..6).prop_flat_map(|k| {
        let dim = [4usize, 4, 8, 8, 8, 9][k];
        (Just(k), prop::collection::vec(any::<bool>(), dim))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sign_conditions_match_hopf_property((k, signs) in sign_case()) {
        let fam = [Family::Sweedler, Family::Taft(2), Family::AC2, Family::A2C4, Family::AC2xC2, Family::Taft(3)][k];
        let (h, _) = setup(fam);
        let e = eigendecompose_s2(&h).unwrap();
        let s = Splitting::from_signs(&e, &signs);
        let sigma = sqrt_from_splitting(&e, &s).unwrap();
        prop_assert_eq!(sigma.compose(&sigma), h.s2());
        let conds = check_splitting_algebra(&h, &e, &s).unwrap().passed
            && check_splitting_coalgebra(&h, &e, &s).unwrap().passed;
        prop_assert_eq!(conds, is_hopf_morphism(&sigma, &h, &h).unwrap().passed);
    }
}
