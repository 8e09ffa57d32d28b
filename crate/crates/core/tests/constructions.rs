use hopfkit::catalog::{build_named, catalog_families, Family};
use hopfkit::companion::{decide_ai, verify_companion, with_companion_field};
use hopfkit::constructions::*;
use hopfkit::hopf::map_order;
use hopfkit::HopfAlgebra;

fn companion_of(h: &HopfAlgebra) -> (HopfAlgebra, hopfkit::LinearMap) {
    let hc = with_companion_field(h).unwrap();
    let v = decide_ai(&hc).unwrap();
    (hc, v.sigma().expect("witness").clone())
}

#[test]
fn double_of_sweedler() {
    let (h, sigma) = companion_of(&build_named(Family::Sweedler).unwrap());
    let d = drinfeld_double(&h).unwrap();
    assert_eq!(d.dim(), 16);
    let report = d.verify_axioms();
    assert!(report.all_passed(), "{:?}", report.failed());
    let sd = companion_double(&h, &d, &sigma).unwrap();
    assert!(verify_companion(&d, &sd).unwrap().passed());
    let actions = double_actions(&h).unwrap();
    let a = cop_dual(&h).unwrap();
    let b = bicrossed_product(&a, &h, &actions).unwrap();
    assert_eq!(b.mul_tensor(), d.mul_tensor());
    assert_eq!(b.comul_tensor(), d.comul_tensor());
    assert_eq!(b.antipode(), d.antipode());
    assert_eq!(b.unit(), d.unit());
    assert_eq!(b.counit(), d.counit());
    let sa = companion_cop_dual(&sigma).unwrap();
    let sm = matched_pair_companion(&a, &h, &actions, &sa, &sigma).unwrap();
    assert_eq!(sm, sd);
}

#[test]
fn double_of_group_algebra_is_involutive() {
    let h = build_named(Family::GroupAlgebraCyclic(2)).unwrap();
    let d = drinfeld_double(&h).unwrap();
    assert_eq!(d.dim(), 4);
    assert!(d.verify_axioms().all_passed());
    assert_eq!(map_order(&d.antipode().clone(), 8).unwrap(), 1);
}

#[test]
fn dual_and_tensor_lifts() {
    for fam in [Family::Sweedler, Family::Taft(3)] {
        let (h, sigma) = companion_of(&build_named(fam).unwrap());
        let d = dual_hopf(&h);
        assert!(d.verify_axioms().all_passed());
        assert!(verify_companion(&d, &companion_dual(&sigma)).unwrap().passed());
        let t = tensor_product(&h, &h);
        assert!(t.verify_axioms().all_passed());
        assert!(verify_companion(&t, &companion_tensor(&sigma, &sigma)).unwrap().passed());
    }
}

#[test]
fn dual_verdict_tags_match_on_catalog() {
    for fam in catalog_families() {
        let h = build_named(fam).unwrap();
        let d = dual_hopf(&h);
        assert!(d.verify_axioms().all_passed(), "{fam}");
        assert_eq!(decide_ai(&h).unwrap().tag(), decide_ai(&d).unwrap().tag(), "{fam}");
    }
}

#[test]
fn double_dual_is_the_original() {
    for fam in catalog_families() {
        let h = build_named(fam).unwrap();
        let dd = dual_hopf(&dual_hopf(&h));
        assert_eq!(dd.dim(), h.dim());
        assert_eq!(dd.mul_tensor(), h.mul_tensor(), "{fam}");
        assert_eq!(dd.comul_tensor(), h.comul_tensor(), "{fam}");
        assert_eq!(dd.antipode(), h.antipode(), "{fam}");
        assert_eq!(map_order(&dd.s2(), 64).unwrap(), map_order(&h.s2(), 64).unwrap());
    }
    let sweedler = build_named(Family::Sweedler).unwrap();
    let dd = dual_hopf(&dual_hopf(&sweedler));
    assert_eq!(decide_ai(&dd).unwrap().tag(), "Witness");
}

#[test]
fn small_duals_and_tensors() {
    let c2 = build_named(Family::GroupAlgebraCyclic(2)).unwrap();
    let d = dual_hopf(&c2);
    assert_eq!(d.dim(), 2);
    assert!(d.s2().is_identity());
    let t = tensor_product(&c2, &c2);
    assert_eq!(t.dim(), 4);
    assert!(t.s2().is_identity());

    let (h, sigma) = companion_of(&build_named(Family::Sweedler).unwrap());
    let c2 = c2.with_field(h.field()).unwrap();
    let t = tensor_product(&h, &c2);
    assert_eq!(t.dim(), 8);
    let id = hopfkit::LinearMap::identity(h.field(), 2);
    assert!(verify_companion(&t, &companion_tensor(&sigma, &id)).unwrap().passed());
}

#[test]
fn doubles_have_square_dimension() {
    for fam in catalog_families() {
        let h = build_named(fam).unwrap();
        if h.dim() > 8 {
            continue;
        }
        let d = drinfeld_double(&h).unwrap();
        assert_eq!(d.dim(), h.dim() * h.dim(), "{fam}");
        if h.dim() <= 4 {
            assert!(d.verify_axioms().all_passed(), "{fam}");
        }
    }
}

#[test]
fn double_of_taft_three_two_ways() {
    let (h, sigma) = companion_of(&build_named(Family::Taft(3)).unwrap());
    let d = drinfeld_double(&h).unwrap();
    assert!(d.verify_axioms().all_passed());
    let a = cop_dual(&h).unwrap();
    let b = bicrossed_product(&a, &h, &double_actions(&h).unwrap()).unwrap();
    assert_eq!(b.mul_tensor(), d.mul_tensor());
    assert_eq!(b.comul_tensor(), d.comul_tensor());
    assert_eq!(b.antipode(), d.antipode());
    let sd = companion_double(&h, &d, &sigma).unwrap();
    assert!(verify_companion(&d, &sd).unwrap().passed());
}

#[test]
fn identity_companions_are_rejected_on_sweedler_pair() {
    let h = with_companion_field(&build_named(Family::Sweedler).unwrap()).unwrap();
    let a = cop_dual(&h).unwrap();
    let actions = double_actions(&h).unwrap();
    let ia = hopfkit::LinearMap::identity(h.field(), a.dim());
    let ih = hopfkit::LinearMap::identity(h.field(), h.dim());
    assert!(matched_pair_companion(&a, &h, &actions, &ia, &ih).is_err());
}

#[test]
fn trivial_actions_give_tensor_product() {
    let h = build_named(Family::GroupAlgebraCyclic(2)).unwrap();
    let act = MatchedPairActions::trivial(&h, &h);
    let b = bicrossed_product(&h, &h, &act).unwrap();
    let t = tensor_product(&h, &h);
    assert_eq!(b.mul_tensor(), t.mul_tensor());
    assert_eq!(b.comul_tensor(), t.comul_tensor());
}
