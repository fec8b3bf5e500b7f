//! Property tests for the algebraic core: ring identities, differential
//! structure, reduction homomorphisms, change-of-variable functoriality,
//! and the parser round trip.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use dworklab::analysis::intertwining_rank;
use dworklab::parse::{parse_form, print_form};
use dworklab::poly::{euler_identity_holds, Form, Monomial, RationalMatrix};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vectors of total degree exactly `deg` in `n` variables.
fn arb_monomial_of_degree(n: usize, deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=deg, n).prop_map(move |raw| {
        // rescale the raw vector onto the simplex of total degree `deg`
        let total: u32 = raw.iter().sum();
        if total == 0 {
            let mut v = vec![0; n];
            v[0] = deg;
            return v;
        }
        let mut v: Vec<u32> = raw.iter().map(|&e| e * deg / total).collect();
        let mut used: u32 = v.iter().sum();
        let mut i = 0;
        while used < deg {
            v[i % n] += 1;
            used += 1;
            i += 1;
        }
        v
    })
}

fn arb_form(n: usize, max_deg: u32) -> impl Strategy<Value = Form> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_deg, n),
            -1000i64..=1000,
            1i64..=1000,
        ),
        1..6,
    )
    .prop_map(move |terms| {
        let mut f = Form::zero(n);
        for (exps, num, den) in terms {
            let total: u32 = exps.iter().sum();
            if total > max_deg {
                continue;
            }
            f.add_term(Monomial::new(exps), rat(num, den));
        }
        f
    })
}

fn arb_int_form(n: usize, max_deg: u32) -> impl Strategy<Value = Form> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -50i64..=50), 1..6).prop_map(
        move |terms| {
            let mut f = Form::zero(n);
            for (exps, c) in terms {
                let total: u32 = exps.iter().sum();
                if total > max_deg {
                    continue;
                }
                f.add_term(Monomial::new(exps), rat(c, 1));
            }
            f
        },
    )
}

fn arb_homogeneous(n: usize, deg: u32) -> impl Strategy<Value = Form> {
    prop::collection::vec((arb_monomial_of_degree(n, deg), -100i64..=100), 1..6).prop_map(
        move |terms| {
            let mut f = Form::zero(n);
            for (exps, c) in terms {
                f.add_term(Monomial::new(exps), rat(c, 1));
            }
            f
        },
    )
}

fn arb_invertible_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| RationalMatrix::from_i64(n, n, &v))
        .prop_filter("matrix must be invertible", |m| !m.determinant().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_identity(f in (1usize..=4).prop_flat_map(|n| (1u32..=5).prop_flat_map(move |d| arb_homogeneous(n, d)))) {
        prop_assert!(euler_identity_holds(&f));
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(
        f in arb_int_form(3, 4),
        g in arb_int_form(3, 4),
        qi in 0usize..4,
    ) {
        let q = [5u64, 7, 11, 13][qi];
        let sum = f.add(&g).reduce_mod(q).unwrap();
        prop_assert_eq!(sum, f.reduce_mod(q).unwrap().add(&g.reduce_mod(q).unwrap()));
        let prod = f.mul(&g).reduce_mod(q).unwrap();
        prop_assert_eq!(prod, f.reduce_mod(q).unwrap().mul(&g.reduce_mod(q).unwrap()));
    }

    #[test]
    fn mixed_partials_commute(f in arb_form(4, 6), i in 0usize..4, j in 0usize..4) {
        let a = f.partial_derivative(i).partial_derivative(j);
        let b = f.partial_derivative(j).partial_derivative(i);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn specialization_commutes_with_untouched_derivative(
        f in arb_form(3, 5),
        c in -5i64..=5,
    ) {
        // fix x3, differentiate in x1
        let mut assign = BTreeMap::new();
        assign.insert(2usize, rat(c, 1));
        let a = f.specialize(&assign).unwrap().partial_derivative(0);
        let b = f.partial_derivative(0).specialize(&assign).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn change_of_variables_composes(
        f in arb_form(3, 4),
        a in arb_invertible_matrix(3),
        b in arb_invertible_matrix(3),
    ) {
        let lhs = f.change_variables(&a.mul(&b)).unwrap();
        let rhs = f.change_variables(&a).unwrap().change_variables(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn change_of_variables_inverts(
        f in arb_form(3, 4),
        a in arb_invertible_matrix(3),
    ) {
        let inv = a.inverse().unwrap();
        let round = f.change_variables(&a).unwrap().change_variables(&inv).unwrap();
        prop_assert_eq!(round, f);
    }

    #[test]
    fn leading_forms_multiply(
        f in arb_form(3, 5).prop_filter("nonzero", |f| !f.is_zero()),
        g in arb_form(3, 5).prop_filter("nonzero", |g| !g.is_zero()),
    ) {
        let prod = f.mul(&g);
        // over an integral domain the product of nonzero forms is nonzero
        prop_assert!(!prod.is_zero());
        prop_assert_eq!(
            prod.leading_form().unwrap(),
            f.leading_form().unwrap().mul(&g.leading_form().unwrap())
        );
    }

    #[test]
    fn parser_round_trip(f in (1usize..=5).prop_flat_map(|n| arb_form(n, 6))) {
        let text = print_form(&f);
        let back = parse_form(&text, Some(f.nvars())).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn parser_ignores_whitespace(f in (1usize..=4).prop_flat_map(|n| arb_form(n, 5))) {
        let text = print_form(&f);
        let spaced = text
            .replace('+', "  +  ")
            .replace('*', " * ")
            .replace('^', " ^ ");
        let a = parse_form(&text, Some(f.nvars())).unwrap();
        let b = parse_form(&spaced, Some(f.nvars())).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rank_is_permutation_equivariant(
        f in (2usize..=4).prop_flat_map(|n| (2u32..=4).prop_flat_map(move |d| arb_homogeneous(n, d))),
        seed in 0u64..24,
    ) {
        prop_assume!(!f.is_zero());
        let n = f.nvars();
        // a deterministic permutation from the seed
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
        }
        let permuted = f.permute_vars(&perm);
        let orig = intertwining_rank(&f).unwrap();
        let moved = intertwining_rank(&permuted).unwrap();
        prop_assert_eq!(orig.rank, moved.rank);
        // per-variable ranks transport along the permutation
        for (new, &old) in perm.iter().enumerate() {
            prop_assert_eq!(orig.per_variable_rank[old], moved.per_variable_rank[new]);
        }
    }
}
