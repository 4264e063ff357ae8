//! Spectral-page consistency on randomized filtered fixtures: page turning,
//! the stable page against the induced filtration on homology, the décalage
//! page shift, and the first-page identity for the degree shift.

use std::collections::BTreeMap;

use hodge_core::filtration::{decalage, decalage_reindex, shift_t};
use hodge_core::fixtures::{random_filtered, rng};
use hodge_core::spectral::{e1_refilter, infinity_dims, spectral_page, stabilization_index};

#[test]
fn page_zero_is_gr_and_page_one_is_gr_homology() {
    let mut r = rng(41);
    for _ in 0..12 {
        let k = random_filtered(&mut r, 0, 4, 2, 3);
        let (gr, _) = k.gr().unwrap();
        let page0 = spectral_page(&k, 0).unwrap();
        let mut gr_dims = BTreeMap::new();
        for (&(n, p), &dim) in gr.dims() {
            gr_dims.insert((p, n - p), dim);
        }
        assert_eq!(page0.dims(), gr_dims, "E^0 = Gr");

        let page1 = spectral_page(&k, 1).unwrap();
        let mut h_dims = BTreeMap::new();
        for (p, h) in gr.column_homology().unwrap() {
            for (n, dim) in h.dims() {
                h_dims.insert((p, n - p), dim);
            }
        }
        assert_eq!(page1.dims(), h_dims, "E^1 = H(Gr)");
    }
}

#[test]
fn turning_pages_matches_recomputed_pages() {
    let mut r = rng(43);
    for _ in 0..12 {
        let k = random_filtered(&mut r, 0, 4, 2, 3);
        let stable = stabilization_index(&k);
        for step in 0..=stable {
            let page = spectral_page(&k, step).unwrap();
            assert!(page.differential_squares_to_zero(), "d^r ∘ d^r = 0 at r = {step}");
            let next = spectral_page(&k, step + 1).unwrap();
            assert_eq!(page.homology_dims(), next.dims(), "turning page {step}");
        }
    }
}

#[test]
fn stable_page_reconstructs_homology() {
    let mut r = rng(47);
    for _ in 0..12 {
        let k = random_filtered(&mut r, 0, 4, 2, 3);
        let stable = stabilization_index(&k);
        let page = spectral_page(&k, stable + 1).unwrap();
        assert_eq!(page.dims(), infinity_dims(&k).unwrap(), "E^∞ = Gr H");
        // and the total over each antidiagonal is dim H_n
        let h = k.complex().homology().unwrap();
        for (n, dim) in h.dims() {
            let total: usize =
                page.dims().iter().filter(|(&(p, q), _)| p + q == n).map(|(_, &d)| d).sum();
            assert_eq!(total, dim, "degree {n}");
        }
    }
}

#[test]
fn decalage_shifts_pages_by_one() {
    let mut r = rng(53);
    for _ in 0..10 {
        let k = random_filtered(&mut r, 0, 4, 2, 3);
        let dec = decalage(&k).unwrap();
        assert!(dec.is_valid());
        for step in [1i64, 2] {
            let lhs = spectral_page(&dec, step).unwrap().dims();
            let shifted = spectral_page(&k, step + 1).unwrap().dims();
            let mut relabeled = BTreeMap::new();
            for (&(p, q), &dim) in &lhs {
                relabeled.insert(decalage_reindex(p, q), dim);
            }
            assert_eq!(relabeled, shifted, "page {step} of Dec vs page {} of W", step + 1);
        }
    }
}

#[test]
fn shift_makes_gr_differential_vanish() {
    let mut r = rng(59);
    for _ in 0..10 {
        let k = random_filtered(&mut r, 0, 4, 2, 3);
        let t = shift_t(&k);
        assert!(t.is_valid());
        let (gr, _) = t.gr().unwrap();
        for (&cell, _) in gr.dims() {
            assert!(gr.d(cell).is_zero(), "gr differential at {cell:?}");
        }
    }
}

#[test]
fn first_page_of_shift_is_page_zero_reindexed() {
    // dim E^1_{-p,q}(K, TW) = dim E^0_{-q,2q-p}(K, W) for all p, q
    let mut r = rng(61);
    for _ in 0..10 {
        let k = random_filtered(&mut r, 0, 4, 2, 3);
        let t = shift_t(&k);
        let lhs = spectral_page(&t, 1).unwrap().dims();
        let rhs = spectral_page(&k, 0).unwrap().dims();
        let mut relabeled = BTreeMap::new();
        for (&(a, q), &dim) in &lhs {
            // a = -p, so p = -a; the matching cell is (-q, 2q - p)
            let p = -a;
            relabeled.insert((-q, 2 * q - p), dim);
        }
        assert_eq!(relabeled, rhs, "shift identity");
    }
}

#[test]
fn e1_refilter_homology_has_second_page_dimensions() {
    let mut r = rng(67);
    for _ in 0..10 {
        let k = random_filtered(&mut r, 0, 4, 2, 3);
        let refiltered = e1_refilter(&k).unwrap();
        assert!(refiltered.is_valid());
        let h = refiltered.complex().homology().unwrap();
        let page2 = spectral_page(&k, 2).unwrap();
        let mut totals: BTreeMap<i64, usize> = BTreeMap::new();
        for (&(p, q), &dim) in &page2.dims() {
            *totals.entry(p + q).or_default() += dim;
        }
        totals.retain(|_, v| *v > 0);
        assert_eq!(h.dims(), totals, "totalized E^1 homology vs E^2");
    }
}
