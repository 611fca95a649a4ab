//! Property-based invariants over randomized inputs: serialization is
//! lossless, field arithmetic obeys the field axioms, girth-4 detection
//! agrees with a direct combinatorial characterization, the exact distance
//! enumerator agrees with a full-space oracle, and decoder convergence flags
//! always mirror the syndrome.

use proptest::prelude::*;
use tree_ldpc::{
    dmin_exact, generator_basis, gf2_rank, make_field, read_alist, write_alist, BinaryMatrix,
    BitRow, DecoderConfig, DecoderVariant, Girth, TannerGraph,
};

/// Random sparse binary matrix: `m` rows over `n` columns, each row holding
/// an arbitrary subset of the columns.
fn arb_matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::btree_set(0..n, 0..=n.min(6)), m)
            .prop_map(move |rows| {
                let supports = rows
                    .into_iter()
                    .map(|set| set.into_iter().collect::<Vec<_>>())
                    .collect();
                BinaryMatrix::new(m, n, supports).expect("sets are sorted and in range")
            })
    })
}

proptest! {
    #[test]
    fn alist_round_trip_is_identity(h in arb_matrix(12, 16)) {
        let mut bytes = Vec::new();
        write_alist(&h, &mut bytes).expect("in-memory write");
        let back = read_alist(bytes.as_slice()).expect("own output parses");
        prop_assert_eq!(h, back);
    }

    #[test]
    fn field_axioms_hold_for_extension_fields(
        field_idx in 0usize..6,
        a_seed in 0u32..64,
        b_seed in 0u32..64,
        c_seed in 0u32..64,
    ) {
        let (p, s) = [(2, 4), (5, 2), (3, 3), (2, 5), (7, 2), (2, 6)][field_idx];
        let field = make_field(p, s).expect("supported field");
        let q = field.order();
        let (a, b, c) = (a_seed % q, b_seed % q, c_seed % q);
        let add = |x, y| field.add(x, y).expect("in range");
        let mul = |x, y| field.mul(x, y).expect("in range");

        prop_assert_eq!(add(a, b), add(b, a));
        prop_assert_eq!(mul(a, b), mul(b, a));
        prop_assert_eq!(add(add(a, b), c), add(a, add(b, c)));
        prop_assert_eq!(mul(mul(a, b), c), mul(a, mul(b, c)));
        prop_assert_eq!(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
        prop_assert_eq!(add(a, 0), a);
        prop_assert_eq!(mul(a, 1), a);
        prop_assert_eq!(mul(a, 0), 0);
        if a != 0 {
            prop_assert!(
                (0..q).any(|x| mul(a, x) == 1),
                "nonzero {} must be invertible in GF({})", a, q
            );
        }
    }

    #[test]
    fn girth_four_iff_two_checks_share_two_columns(h in arb_matrix(10, 14)) {
        let graph = TannerGraph::from_check_matrix(&h);
        let rows = h.row_supports();
        let shares_pair = (0..h.rows()).any(|i| {
            (i + 1..h.rows()).any(|j| {
                rows[i]
                    .iter()
                    .filter(|c| rows[j].binary_search(c).is_ok())
                    .count()
                    >= 2
            })
        });
        prop_assert_eq!(graph.girth() == Girth::Finite(4), shares_pair);
    }

    #[test]
    fn exact_distance_matches_full_space_oracle(h in arb_matrix(8, 12)) {
        let n = h.cols();
        let checks: Vec<u32> = h
            .packed_rows()
            .iter()
            .map(|row| {
                let mut mask = 0u32;
                for c in 0..n {
                    if row.get(c) {
                        mask |= 1 << c;
                    }
                }
                mask
            })
            .collect();
        let mut oracle: Option<usize> = None;
        for word in 1u32..(1u32 << n) {
            if checks.iter().all(|&chk| (word & chk).count_ones() % 2 == 0) {
                let w = word.count_ones() as usize;
                oracle = Some(oracle.map_or(w, |b| b.min(w)));
            }
        }

        let basis = generator_basis(&h);
        prop_assert_eq!(basis.len(), n - gf2_rank(&h));
        let lib = dmin_exact(&basis, n).expect("k <= n <= 12");
        prop_assert_eq!(lib, oracle);
    }

    #[test]
    fn converged_flag_mirrors_the_syndrome(
        h in arb_matrix(8, 12),
        llr_seeds in proptest::collection::vec(-10.0f64..10.0, 12),
        min_sum in proptest::bool::ANY,
    ) {
        let llr: Vec<f64> = llr_seeds.into_iter().take(h.cols()).collect();
        let cfg = DecoderConfig {
            variant: if min_sum { DecoderVariant::MinSum } else { DecoderVariant::SumProduct },
            max_iterations: 8,
            normalization: 0.8,
        };
        let outcome = tree_ldpc::decode(&h, &llr, &cfg).expect("valid config and length");
        let mut word = BitRow::zeros(h.cols());
        for (i, &bit) in outcome.bits.iter().enumerate() {
            word.set(i, bit);
        }
        prop_assert_eq!(outcome.converged, h.checks_satisfied(&word));
    }
}
