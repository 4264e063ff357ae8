//! End-to-end checks of the Hodge-side machinery on randomized fixtures:
//! the two-filtration splitting, its functoriality, tensor/Hom/dual
//! constructions, rational splittings from automorphisms, and the round
//! trip between complexes of mixed Hodge structures and their shifted
//! mixed Hodge complexes.

use std::collections::BTreeMap;

use hodge_core::fixtures::{
    mh1_violating_mhc, random_mhs, random_mhs_complex, random_mhs_map, rng, split_mhs, tate_complex,
    twist_mhs, weight_preserving_automorphism, weight_three_mhs, HodgePiece,
};
use hodge_core::jordan::{is_nilpotent, jordan_chevalley, minimal_polynomial};
use hodge_core::matrix::Matrix;
use hodge_core::mhc::{mhc_dual, mhc_homology_mhs, mhc_tensor, shift_to_mhc, MhsComplex};
use hodge_core::mhs::{
    deligne_splitting, mhs_ops, splitting_functorial, weight_profile, MixedHodgeStructure,
};
use hodge_core::scalar::{rat_from_str, Rat, Scalar};
use hodge_core::splitting::{splitting_from_automorphism, FilteredAutomorphism};
use hodge_core::subspace::Subspace;

#[test]
fn deligne_splitting_is_a_direct_sum_refining_w_on_random_mhs() {
    let mut r = rng(71);
    for _ in 0..25 {
        let v = random_mhs(&mut r, 6);
        // deligne_splitting verifies the direct sum and the W-compatibility
        // before returning; reaching Ok is the assertion
        let split = deligne_splitting(&v).expect("valid MHS splits");
        let total: usize = split.pieces().values().map(Subspace::dim).sum();
        assert_eq!(total, v.dim());
    }
}

#[test]
fn deligne_splitting_respects_every_map() {
    let mut r = rng(73);
    for _ in 0..20 {
        let f = random_mhs_map(&mut r, 3);
        assert!(splitting_functorial(&f).expect("splittings exist"), "I^{{p,q}} functoriality");
    }
}

#[test]
fn tensor_hom_dual_of_random_mhs_validate() {
    let mut r = rng(79);
    for _ in 0..10 {
        let v = random_mhs(&mut r, 3);
        let w = random_mhs(&mut r, 3);
        let ops = mhs_ops(&v, &w).unwrap();
        assert!(ops.tensor.is_valid(), "tensor");
        assert!(ops.hom.is_valid(), "hom");
        assert!(ops.dual_of_first.is_valid(), "dual");
        // hom against the unit is the dual
        let against_unit = mhs_ops(&v, &MixedHodgeStructure::unit()).unwrap();
        assert_eq!(against_unit.hom, against_unit.dual_of_first);
    }
}

#[test]
fn rational_splitting_from_automorphisms() {
    let mut r = rng(83);
    let alpha = Rat::from_int(2);
    for case in 0..12 {
        // a split filtered space with psi_alpha twisted by a weight-preserving
        // change of basis
        let pieces: Vec<HodgePiece> = (0..=(case % 3))
            .map(|i| [HodgePiece::Tate(0), HodgePiece::Tate(1), HodgePiece::ConjugatePair(1, -1)][i])
            .collect();
        let split = split_mhs(&pieces);
        let w = split.weight_filtration().clone();
        let dim = split.dim();
        let mut psi = Matrix::zero(dim, dim);
        let mut offset = 0;
        for piece in &pieces {
            let factor = hodge_core::scalar::rat_pow(&alpha, piece.weight());
            for k in 0..piece.dim() {
                psi.set(offset + k, offset + k, factor.clone());
            }
            offset += piece.dim();
        }
        let g = weight_preserving_automorphism(&mut r, &pieces);
        let phi_matrix = g.mul(&psi).mul(&g.inverse().unwrap());
        let phi = FilteredAutomorphism::new(w.clone(), phi_matrix).unwrap();
        // splitting_from_automorphism verifies W_p = ⊕_{q<=p} V_q exactly
        let grading = splitting_from_automorphism(&phi, &alpha).expect("splitting exists");
        let total: usize = grading.pieces.values().map(Subspace::dim).sum();
        assert_eq!(total, dim, "case {case}");
    }
}

#[test]
fn worked_splitting_example() {
    // W_0 = <e1> ⊂ W_1 = Q³ with an extra weight: weights {0,1,2} on Q³
    let mut levels = BTreeMap::new();
    levels.insert(0, Subspace::span_of(3, &[vec![Rat::from_int(1), Rat::from_int(0), Rat::from_int(0)]]));
    levels.insert(
        1,
        Subspace::span_of(
            3,
            &[
                vec![Rat::from_int(1), Rat::from_int(0), Rat::from_int(0)],
                vec![Rat::from_int(0), Rat::from_int(1), Rat::from_int(0)],
            ],
        ),
    );
    levels.insert(2, Subspace::full(3));
    let w = hodge_core::filtration::Filtration::from_levels(3, levels).unwrap();
    // unipotent perturbation of diag(1, 2, 4)
    let phi = Matrix::from_int_rows(&[&[1, 1, 0], &[0, 2, 3], &[0, 0, 4]]);
    let phi = FilteredAutomorphism::new(w.clone(), phi).unwrap();
    let grading = splitting_from_automorphism(&phi, &Rat::from_int(2)).unwrap();
    assert_eq!(grading.pieces[&0].dim(), 1);
    assert_eq!(grading.pieces[&1].dim(), 1);
    assert_eq!(grading.pieces[&2].dim(), 1);
    let w1 = grading.pieces[&0].sum(&grading.pieces[&1]).unwrap();
    assert_eq!(w1, w.level(1));
}

#[test]
fn jordan_chevalley_on_random_invertibles() {
    let mut r = rng(89);
    for _ in 0..12 {
        let n = 2 + (r.gen_range(0..5usize) % 5);
        let m = hodge_core::fixtures::random_invertible(&mut r, n);
        let jc = jordan_chevalley(&m).unwrap();
        assert_eq!(jc.semisimple.mul(&jc.unipotent), m, "product recovers the input");
        assert_eq!(
            jc.semisimple.mul(&jc.unipotent),
            jc.unipotent.mul(&jc.semisimple),
            "factors commute"
        );
        assert!(
            is_nilpotent(&jc.unipotent.sub(&Matrix::identity(n))),
            "unipotent part minus identity is nilpotent"
        );
        let mp = minimal_polynomial(&jc.semisimple);
        let gcd = mp.gcd(&mp.derivative());
        assert_eq!(gcd.degree(), 0, "squarefree minimal polynomial");
    }
}

use rand::Rng;

#[test]
fn shifted_complexes_pass_all_axioms_and_round_trip() {
    let mut r = rng(97);
    for _ in 0..8 {
        let fixture = random_mhs_complex(&mut r, 0, 3, &Rat::from_int(2));
        let k = &fixture.complex;
        let mhc = shift_to_mhc(k).expect("valid complex shifts");
        let violations = mhc.validate();
        assert!(violations.is_empty(), "axioms: {violations:?}");
        let via_mhc = mhc_homology_mhs(&mhc).unwrap();
        let direct = k.homology_mhs().unwrap();
        assert_eq!(via_mhc, direct, "homology MHS round trip");
    }
}

#[test]
fn mh1_violation_is_flagged_at_its_weight() {
    let mhc = mh1_violating_mhc();
    let violations = mhc.validate();
    assert!(
        violations.iter().any(|v| v.rule == "MH1" && v.locus.get("index") == Some(&0)),
        "{violations:?}"
    );
}

#[test]
fn duality_negates_homology_weights() {
    let mut r = rng(101);
    for _ in 0..6 {
        let fixture = random_mhs_complex(&mut r, 0, 2, &Rat::from_int(2));
        let mhc = shift_to_mhc(&fixture.complex).unwrap();
        let dual = mhc_dual(&mhc).unwrap();
        assert!(dual.is_valid(), "dual axioms");
        let h = mhc_homology_mhs(&mhc).unwrap();
        let hd = mhc_homology_mhs(&dual).unwrap();
        for (n, v) in &h {
            let dual_v = &hd[&(-n)];
            let negated: BTreeMap<i64, usize> =
                weight_profile(v).into_iter().map(|(w, k)| (-w, k)).collect();
            assert_eq!(weight_profile(dual_v), negated, "degree {n}");
        }
        // double dual keeps all page dimensions
        let double = mhc_dual(&dual).unwrap();
        assert_eq!(
            double.rational().complex().dims(),
            mhc.rational().complex().dims()
        );
        for (&n, f) in mhc.rational().filtrations() {
            assert_eq!(
                double.rational().filtration(n).jump_indices(),
                f.jump_indices(),
                "degree {n}"
            );
        }
    }
}

#[test]
fn tensor_of_mixed_hodge_complexes_validates_and_adds_weights() {
    let a = shift_to_mhc(&tate_complex(0, 1)).unwrap();
    let b = shift_to_mhc(&tate_complex(1, 2)).unwrap();
    let t = mhc_tensor(&a, &b).unwrap();
    assert!(t.is_valid());
    let h = mhc_homology_mhs(&t).unwrap();
    assert_eq!(weight_profile(&h[&1]).get(&6), Some(&1));

    // and with a genuinely mixed factor
    let mut r = rng(103);
    let fixture = random_mhs_complex(&mut r, 0, 2, &Rat::from_int(2));
    let c = shift_to_mhc(&fixture.complex).unwrap();
    let tc = mhc_tensor(&a, &c).unwrap();
    assert!(tc.is_valid(), "{:?}", tc.validate());
}

#[test]
fn shift_is_monoidal_at_the_filtration_level() {
    // T(W ⊗ W) = (TW ⊗ TW) on the tensor of two MHS complexes
    let mut r = rng(107);
    for _ in 0..5 {
        let a = random_mhs_complex(&mut r, 0, 2, &Rat::from_int(2)).complex;
        let b = random_mhs_complex(&mut r, 0, 2, &Rat::from_int(2)).complex;
        let tensor_then_shift = {
            let (t, _) = hodge_core::filtration::filtered_tensor(
                &a.weight_filtered(),
                &b.weight_filtered(),
            )
            .unwrap();
            hodge_core::filtration::shift_t(&t)
        };
        let shift_then_tensor = {
            let (t, _) = hodge_core::filtration::filtered_tensor(
                &hodge_core::filtration::shift_t(&a.weight_filtered()),
                &hodge_core::filtration::shift_t(&b.weight_filtered()),
            )
            .unwrap();
            t
        };
        assert_eq!(tensor_then_shift, shift_then_tensor);
    }
}

#[test]
fn cross_slope_maps_have_trivial_homology() {
    // a weight-preserving, Hodge-compatible map from a 4/3-slope class to a
    // 1-slope class must vanish: build both complexes in degree 3
    let x = tate_complex(3, 2); // weight 4 in degree 3
    let y = {
        let complex = hodge_core::complex::ChainComplex::concentrated(3, 2);
        let mut mhs = BTreeMap::new();
        mhs.insert(3, weight_three_mhs()); // pure weight 3 in degree 3
        MhsComplex::new(complex, mhs).unwrap()
    };
    // any candidate with a nonzero component violates the MHS-map axioms
    for candidate in [[1i64, 0], [0, 1], [2, -3]] {
        let f = Matrix::<Rat>::from_int_rows(&[&[candidate[0]], &[candidate[1]]]);
        let attempt = hodge_core::mhs::MhsMap::new(
            x.mhs(3).unwrap().clone(),
            y.mhs(3).unwrap().clone(),
            f,
        );
        assert!(attempt.is_err(), "cross-slope map {candidate:?} must be rejected");
    }
    // the zero map is fine and induces zero on homology
    let zero = hodge_core::mhs::MhsMap::new(
        x.mhs(3).unwrap().clone(),
        y.mhs(3).unwrap().clone(),
        Matrix::zero(2, 1),
    )
    .unwrap();
    assert!(zero.matrix().is_zero());
}

#[test]
fn twisted_structures_agree_with_split_models_on_hodge_numbers() {
    let mut r = rng(109);
    for _ in 0..10 {
        let pieces = [HodgePiece::ConjugatePair(2, 0), HodgePiece::Tate(1)];
        let split = split_mhs(&pieces);
        let g = weight_preserving_automorphism(&mut r, &pieces);
        let twisted = twist_mhs(&split, &g);
        assert_eq!(
            split.hodge_numbers().unwrap(),
            twisted.hodge_numbers().unwrap()
        );
    }
}
