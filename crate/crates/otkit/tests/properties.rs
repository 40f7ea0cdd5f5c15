use otkit::closures::{wf_part_mask, FiniteRelation};
use otkit::coefficients::{kdelta, pd};
use otkit::gen::{generate, irreducible_vector, random_eterm, rng, strongly_irreducible_vector, GenSpec};
use otkit::lambda_cnf::{nat_sum, o_assign, LambdaCnf};
use otkit::order::{le, lt, lt_lx};
use otkit::suites::wf_naive;
use otkit::validity::{is_irreducible, is_strongly_irreducible};
use otkit::{compare, ecmp, parse_term, Config, Term};
use proptest::prelude::*;
use std::cmp::Ordering;

fn terms(seed: u64, n: usize, levels: usize) -> Vec<Term> {
    let spec = GenSpec { seed, count: n, max_len: 14, cfg: Config::new(levels), ..GenSpec::default() };
    generate(&spec).unwrap()
}

fn cnf(seed: u64) -> LambdaCnf {
    LambdaCnf::from_eterm(&random_eterm(&mut rng(seed), 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn compare_is_antisymmetric(seed in any::<u64>()) {
        let ts = terms(seed, 3, 3);
        for x in &ts {
            prop_assert_eq!(compare(x, x), Ordering::Equal);
            for y in &ts {
                prop_assert_eq!(compare(x, y), compare(y, x).reverse());
                prop_assert_eq!(compare(x, y) == Ordering::Equal, x == y);
            }
        }
    }

    #[test]
    fn compare_is_transitive(seed in any::<u64>()) {
        let mut ts = terms(seed, 3, 4);
        ts.sort_by(compare);
        prop_assert!(le(&ts[0], &ts[1]) && le(&ts[1], &ts[2]) && le(&ts[0], &ts[2]));
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), levels in 3usize..6) {
        let cfg = Config::new(levels);
        for t in terms(seed, 4, levels) {
            prop_assert_eq!(parse_term(&t.to_string(), cfg).unwrap(), t);
        }
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        prop_assert_eq!(terms(seed, 5, 3), terms(seed, 5, 3));
    }

    #[test]
    fn predecessor_is_shorter(seed in any::<u64>()) {
        for t in terms(seed, 5, 4) {
            if let Some(p) = pd(&t) {
                prop_assert!(p.len() < t.len());
            }
        }
    }

    #[test]
    fn kdelta_is_antitone_in_delta(seed in any::<u64>()) {
        let ts = terms(seed, 3, 3);
        let (a, b) = if le(&ts[0], &ts[1]) { (&ts[0], &ts[1]) } else { (&ts[1], &ts[0]) };
        let big = kdelta(b, &ts[2]);
        let small = kdelta(a, &ts[2]);
        prop_assert!(big.iter().all(|x| small.contains(x)));
    }

    #[test]
    fn natural_sum_commutes(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (cnf(s1), cnf(s2));
        prop_assert_eq!(nat_sum(&x, &y), nat_sum(&y, &x));
    }

    #[test]
    fn natural_sum_associates(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (x, y, z) = (cnf(s1), cnf(s2), cnf(s3));
        prop_assert_eq!(nat_sum(&nat_sum(&x, &y), &z), nat_sum(&x, &nat_sum(&y, &z)));
    }

    #[test]
    fn natural_sum_is_increasing(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (cnf(s1), cnf(s2));
        let s = nat_sum(&x, &y);
        prop_assert!(x.le(&s) && y.le(&s));
    }

    #[test]
    fn strong_irreducibility_implies_irreducibility(seed in any::<u64>(), levels in 3usize..7) {
        let v = strongly_irreducible_vector(&mut rng(seed), Config::new(levels));
        prop_assert!(is_strongly_irreducible(&v));
        prop_assert!(is_irreducible(&v));
    }

    #[test]
    fn o_preserves_lexicographic_order(s1 in any::<u64>(), s2 in any::<u64>()) {
        let cfg = Config::new(4);
        let (v, w) = (irreducible_vector(&mut rng(s1), cfg), irreducible_vector(&mut rng(s2), cfg));
        if lt_lx(&v, &w).unwrap() {
            prop_assert!(o_assign(&v).unwrap().lt(&o_assign(&w).unwrap()));
        }
    }

    #[test]
    fn eterm_order_is_antisymmetric(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (random_eterm(&mut rng(s1), 3), random_eterm(&mut rng(s2), 3));
        prop_assert_eq!(ecmp(&x, &y), ecmp(&y, &x).reverse());
    }

    #[test]
    fn wellfounded_part_matches_descent(n in 1usize..9, edges in proptest::collection::vec((0usize..8, 0usize..8), 0..24)) {
        let mut preds = vec![0u64; n];
        for (x, y) in edges {
            if x < n && y < n {
                preds[y] |= 1 << x;
            }
        }
        let naive = (0..n).filter(|&x| wf_naive(&preds, x, 0)).fold(0u64, |m, x| m | 1 << x);
        prop_assert_eq!(wf_part_mask(&preds), naive);
    }

    #[test]
    fn removing_edges_grows_the_wellfounded_part(edges in proptest::collection::vec((0usize..7, 0usize..7), 1..20), drop in any::<prop::sample::Index>()) {
        let mut full = FiniteRelation::new(7);
        let mut fewer = FiniteRelation::new(7);
        let skip = drop.index(edges.len());
        for (i, (x, y)) in edges.iter().enumerate() {
            full.add(*x, *y);
            if i != skip {
                fewer.add(*x, *y);
            }
        }
        let (a, b) = (full.wf_part(), fewer.wf_part());
        prop_assert!(a.iter().zip(&b).all(|(x, y)| !x || *y));
    }

    #[test]
    fn strict_order_agrees_with_compare(seed in any::<u64>()) {
        let ts = terms(seed, 2, 3);
        prop_assert_eq!(lt(&ts[0], &ts[1]), compare(&ts[0], &ts[1]) == Ordering::Less);
    }
}
