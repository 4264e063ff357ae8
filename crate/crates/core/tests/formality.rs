//! The truncation zig-zag on randomized pure fixtures across several
//! slopes, its monoidality and naturality, the partial-formality boundary,
//! the splitting pipelines, and transport across operads and monoids.

use std::collections::BTreeMap;

use hodge_core::bigraded::{BigradedComplex, BigradedMap};
use hodge_core::fixtures::{
    arrangement_bigraded, associative_operad, exterior_monoid, exterior_operad,
    impure_exterior_operad, mixed_slope_bigraded, pad_operad_with_acyclic,
    punctured_plane_bigraded, random_mhs_complex, random_pure_bigraded, rng, tate_complex,
};
use hodge_core::matrix::Matrix;
use hodge_core::purity::{purity_check, PurityParams};
use hodge_core::scalar::{rat_from_str, rat_pow, Rat, Scalar};
use hodge_core::witness::{
    mhs_pipeline, mhs_purity, monoidality_check, naturality_check, q_formality_witness,
    zigzag_maps, PipelineWitness, SplitRoute,
};

fn params(s: &str) -> PurityParams {
    PurityParams::new(rat_from_str(s).unwrap()).unwrap()
}

const SLOPES: [&str; 5] = ["1", "2", "-2", "4/3", "6/5"];

fn degree_range(alpha: &str) -> std::ops::RangeInclusive<i64> {
    match alpha {
        "6/5" => 0..=5,
        _ => 0..=6,
    }
}

#[test]
fn pure_fixtures_are_formal_for_every_slope() {
    let mut r = rng(113);
    for alpha in SLOPES {
        let p = params(alpha);
        for _ in 0..6 {
            let a = random_pure_bigraded(&mut r, p.alpha(), degree_range(alpha), 2);
            let w = zigzag_maps(&a, &p, None).unwrap();
            assert!(w.purity.is_pure(), "alpha = {alpha}");
            assert!(w.phi_quasi_iso && w.psi_quasi_iso, "alpha = {alpha}");
        }
    }
}

#[test]
fn truncation_is_idempotent_on_truncated_complexes() {
    let mut r = rng(127);
    for alpha in ["1", "4/3", "-2"] {
        let p = params(alpha);
        for _ in 0..5 {
            let a = random_pure_bigraded(&mut r, p.alpha(), degree_range(alpha), 2);
            let once = hodge_core::truncation::tau_truncate(&a, &p).unwrap();
            let twice = hodge_core::truncation::tau_truncate(once.complex(), &p).unwrap();
            assert_eq!(once.complex().dims(), twice.complex().dims());
        }
    }
}

#[test]
fn monoidality_inclusion_holds_for_all_tested_slopes() {
    let mut r = rng(131);
    for alpha in ["1", "2", "-2", "4/3"] {
        let p = params(alpha);
        for _ in 0..3 {
            let a = random_pure_bigraded(&mut r, p.alpha(), degree_range(alpha), 2);
            let b = random_pure_bigraded(&mut r, p.alpha(), degree_range(alpha), 2);
            let report = monoidality_check(&a, &b, &p).unwrap();
            assert!(report.inclusion_holds(), "alpha = {alpha}");
            assert!(report.squares_commute(), "alpha = {alpha}");
        }
    }
}

#[test]
fn monoidality_inclusion_even_on_impure_inputs() {
    // the inclusion tau(A)⊗tau(B) ⊆ tau(A⊗B) needs no purity
    let mut r = rng(137);
    let p = params("1");
    for _ in 0..5 {
        let a = hodge_core::fixtures::random_bigraded(&mut r, 0, 3, &[0, 1, 3], 2);
        let b = hodge_core::fixtures::random_bigraded(&mut r, 0, 3, &[0, 2], 2);
        let report = monoidality_check(&a, &b, &p).unwrap();
        assert!(report.inclusion_holds());
    }
}

#[test]
fn naturality_of_both_legs() {
    let p = params("1");
    // identity, scalar multiple and a null-homotopic style map on a fixture
    let mut dims = BTreeMap::new();
    dims.insert((1, 1), 2);
    dims.insert((2, 1), 2);
    dims.insert((2, 2), 1);
    let mut d = BTreeMap::new();
    d.insert((2, 1), Matrix::<Rat>::from_int_rows(&[&[1, 0], &[0, 0]]));
    let a = BigradedComplex::new(dims, d).unwrap();
    let id = BigradedMap::identity(&a);
    assert!(naturality_check(&id, &p).unwrap());
    // scaling by 3 in every cell is a weight-preserving chain map
    let tripled = BigradedMap::new(
        a.clone(),
        a.clone(),
        a.dims()
            .iter()
            .map(|(&c, &k)| (c, Matrix::identity(k).scale(&Rat::from_int(3))))
            .collect(),
    )
    .unwrap();
    assert!(naturality_check(&tripled, &p).unwrap());
}

#[test]
fn q_formality_boundary_is_sharp() {
    // pure in degrees <= q+1, impure at q+2, for q = 2
    let mut dims = BTreeMap::new();
    dims.insert((1, 1), 1);
    dims.insert((3, 3), 1);
    dims.insert((4, 1), 1);
    let a = BigradedComplex::<Rat>::new(dims, BTreeMap::new()).unwrap();
    let p = params("1");
    let pass = q_formality_witness(&a, &p, 2).unwrap();
    assert_eq!(pass.is_q_formal(), Some(true), "q = 2 passes");
    let fail = q_formality_witness(&a, &p, 3).unwrap();
    assert_eq!(fail.is_q_formal(), Some(false), "q = 3 fails");
}

#[test]
fn named_purity_fixtures() {
    let punctured = punctured_plane_bigraded();
    assert!(purity_check(&punctured, &params("4/3"), None).unwrap().is_pure());
    assert!(!purity_check(&punctured, &params("1"), None).unwrap().is_pure());

    // codimension-d arrangements: 2d/(2d-1)-pure
    assert!(purity_check(&arrangement_bigraded(1, 3), &params("2"), None).unwrap().is_pure());
    assert!(purity_check(&arrangement_bigraded(2, 2), &params("4/3"), None).unwrap().is_pure());

    // mixing two slopes is impure for every candidate slope
    let mixed = mixed_slope_bigraded();
    for alpha in SLOPES {
        let report = purity_check(&mixed, &params(alpha), None).unwrap();
        assert!(!report.is_pure(), "alpha = {alpha}");
    }
    // and the witness legs fail at both constituent slopes
    for alpha in ["1", "4/3"] {
        let w = zigzag_maps(&mixed, &params(alpha), None).unwrap();
        assert!(!w.is_formal(), "alpha = {alpha}");
    }
}

#[test]
fn pipeline_on_tate_complexes_is_formal() {
    // Q(-n) in degree 2n with zero differential: 1-pure
    let mut dims = BTreeMap::new();
    dims.insert(0, 1);
    dims.insert(2, 1);
    dims.insert(4, 1);
    let complex = hodge_core::complex::ChainComplex::new(dims, BTreeMap::new()).unwrap();
    let mut mhs = BTreeMap::new();
    for n in [0i64, 2, 4] {
        mhs.insert(n, hodge_core::mhs::MixedHodgeStructure::tate(n / 2));
    }
    let k = hodge_core::mhc::MhsComplex::new(complex, mhs).unwrap();
    let p = params("1");
    assert!(mhs_purity(&k, &p, None).unwrap().is_pure());
    let witness = mhs_pipeline(&k, &p, &SplitRoute::Deligne).unwrap();
    assert!(witness.is_formal());
}

#[test]
fn pipeline_routes_agree_on_random_fixtures() {
    let mut r = rng(139);
    let alpha = Rat::from_int(2);
    let p = PurityParams::new(alpha.clone()).unwrap();
    for _ in 0..5 {
        let fixture = random_mhs_complex(&mut r, 0, 3, &alpha);
        let deligne = mhs_pipeline(&fixture.complex, &p, &SplitRoute::Deligne).unwrap();
        let auto = mhs_pipeline(
            &fixture.complex,
            &p,
            &SplitRoute::Automorphism(fixture.automorphism.clone()),
        )
        .unwrap();
        // purity is intrinsic, so both routes must agree on the verdict
        assert_eq!(deligne.purity().is_pure(), auto.purity().is_pure());
        assert_eq!(deligne.is_formal(), auto.is_formal());
        // and both agree with the filtration-level purity of homology
        let direct = mhs_purity(&fixture.complex, &p, None).unwrap();
        assert_eq!(direct.is_pure(), deligne.purity().is_pure());
    }
}

#[test]
fn impure_mixed_tate_pipeline_flags_false() {
    // homology Q(0) in degree 0 and Q(-1) in degree 1: impure at alpha = 1
    let mut dims = BTreeMap::new();
    dims.insert(0, 1);
    dims.insert(1, 1);
    let complex = hodge_core::complex::ChainComplex::new(dims, BTreeMap::new()).unwrap();
    let mut mhs = BTreeMap::new();
    mhs.insert(0, hodge_core::mhs::MixedHodgeStructure::tate(0));
    mhs.insert(1, hodge_core::mhs::MixedHodgeStructure::tate(1));
    let k = hodge_core::mhc::MhsComplex::new(complex, mhs).unwrap();
    let p = params("1");
    let report = mhs_purity(&k, &p, None).unwrap();
    assert_eq!(report.violations, vec![(1, 2)]);
    let witness = mhs_pipeline(&k, &p, &SplitRoute::Deligne).unwrap();
    assert!(!witness.is_formal());
}

#[test]
fn shifted_acyclic_pipeline_is_trivially_formal() {
    let mut dims = BTreeMap::new();
    dims.insert(0, 1);
    dims.insert(1, 1);
    let mut d = BTreeMap::new();
    d.insert(1, Matrix::identity(1));
    let complex = hodge_core::complex::ChainComplex::new(dims, d).unwrap();
    let mut mhs = BTreeMap::new();
    mhs.insert(0, hodge_core::mhs::MixedHodgeStructure::tate(1));
    mhs.insert(1, hodge_core::mhs::MixedHodgeStructure::tate(1));
    let k = hodge_core::mhc::MhsComplex::new(complex, mhs).unwrap();
    let witness = mhs_pipeline(&k, &params("1"), &SplitRoute::Deligne).unwrap();
    assert!(witness.is_formal());
    match witness {
        PipelineWitness::Gaussian(w) => assert!(w.purity.homology.is_empty()),
        _ => unreachable!("the Deligne route lands over Q(i)"),
    }
}

#[test]
fn exterior_operad_transport_is_formal() {
    let operad = exterior_operad(4);
    let witness = operad.transport_formality(&params("-2")).unwrap();
    assert!(witness.is_formal(), "exterior operad at alpha = -2");
    for check in &witness.checks {
        assert!(check.passes(), "composition {}", check.label);
    }
}

#[test]
fn impure_arity_is_cited() {
    let operad = impure_exterior_operad(3, 3);
    let witness = operad.transport_formality(&params("-2")).unwrap();
    assert!(!witness.is_formal());
    assert_eq!(witness.impure_components(), vec!["3".to_string()]);
}

#[test]
fn associative_operad_is_formal_for_any_slope() {
    let operad = associative_operad(3);
    for alpha in ["1", "-2", "4/3"] {
        let witness = operad.transport_formality(&params(alpha)).unwrap();
        assert!(witness.is_formal(), "alpha = {alpha}");
    }
}

#[test]
fn padded_operad_homology_matches_transport_endpoint() {
    let operad = pad_operad_with_acyclic(&associative_operad(3)).unwrap();
    let witness = operad.transport_formality(&params("1")).unwrap();
    assert!(witness.is_formal());
    let homology = operad.homology_operad().unwrap();
    assert!(homology.is_valid());
    // the homology structure of the padded operad is the bare associative one
    for (&n, component) in homology.components() {
        assert_eq!(component.total_dim(), 1, "arity {n}");
        assert_eq!(component.dim((0, 0)), 1, "arity {n}");
    }
}

#[test]
fn exterior_monoid_is_formal() {
    let monoid = exterior_monoid(3);
    let witness = monoid.transport_formality(&params("-2")).unwrap();
    assert!(witness.is_formal());
    let homology = monoid.homology_monoid().unwrap();
    assert!(homology.is_valid());
}

#[test]
fn homology_structure_of_homology_is_itself() {
    let operad = exterior_operad(3);
    let h = operad.homology_operad().unwrap();
    assert!(h.is_valid());
    let hh = h.homology_operad().unwrap();
    for (&n, component) in hh.components() {
        assert_eq!(component.dims(), h.components()[&n].dims(), "arity {n}");
    }
}

#[test]
fn tate_twist_scaling_realizes_psi_alpha() {
    // psi_alpha on the weight grading of a Tate complex scales by alpha^{2n}
    let k = tate_complex(0, 1);
    let alpha = rat_from_str("3").unwrap();
    let phis: BTreeMap<i64, Matrix<Rat>> = [(0, Matrix::identity(1).scale(&rat_pow(&alpha, 2)))]
        .into_iter()
        .collect();
    let p = PurityParams::new(alpha).unwrap();
    let witness = mhs_pipeline(&k, &p, &SplitRoute::Automorphism(phis)).unwrap();
    // degree 0, weight 2 is off the line p = alpha n for alpha = 3: impure
    assert!(!witness.purity().is_pure());
}
