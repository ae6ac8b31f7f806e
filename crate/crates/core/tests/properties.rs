//! Structural invariants as property tests.

use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use trunco::characters::{cone, decompose_in_block, decompose_ordered, verma_character, verma_character_by_monomials};
use trunco::oracle::Oracle;
use trunco::trunc_weights::{
    check_condition_b, find_twisting_word, linked, n_dot, same_block, singular_roots, standard_levi, twist,
};
use trunco::{CartanType, Engine, LeviDatum, PartitionCache, RootDatum, TruncatedWeight, Weight, Q};

const TYPES: [&str; 5] = ["A1", "A2", "B2", "G2", "A3"];

fn datum(s: &str) -> Arc<RootDatum> {
    Arc::new(RootDatum::new(&s.parse::<CartanType>().unwrap()))
}

fn weight(rank: usize, max: i128, den: i128) -> impl Strategy<Value = Weight> {
    prop::collection::vec((-max..=max, 1..=den), rank).prop_map(|v| Weight(v.into_iter().map(|(a, b)| Q::new(a, b)).collect()))
}

fn truncated(rank: usize, level: usize, den: i128) -> impl Strategy<Value = TruncatedWeight> {
    prop::collection::vec(weight(rank, 3, den), level + 1).prop_map(|c| TruncatedWeight::new(c).unwrap())
}

fn word(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..8, 0..=max_len)
}

fn typed_word(d: &RootDatum, w: &[usize]) -> trunco::WeylElement {
    let w: Vec<usize> = w.iter().map(|i| i % d.rank()).collect();
    d.element(&w).unwrap()
}

/// `Lambda` at level `n` together with `N` sharing its tail and a head
/// lowered by a small positive root combination.
fn pair(rank: usize, level: usize, den: i128) -> impl Strategy<Value = (TruncatedWeight, TruncatedWeight)> {
    (truncated(rank, level, den), prop::collection::vec(0i64..=2, rank)).prop_map(move |(lam, beta)| {
        (lam.clone(), lam.with_head(&lam.head().clone() - &beta_weight(rank, &beta)))
    })
}

fn beta_weight(rank: usize, beta: &[i64]) -> Weight {
    // Only A-type callers use this, so the Cartan matrix is fixed by rank.
    let d = datum(if rank == 1 { "A1" } else { "A2" });
    d.root_to_weight(beta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weyl_action_inverts(t in 0usize..5, w in word(10), v in weight(3, 6, 3)) {
        let d = datum(TYPES[t]);
        let v = Weight(v.0[..d.rank()].to_vec());
        let w = typed_word(&d, &w);
        prop_assert_eq!(d.weyl_act(&d.inverse(&w), &d.weyl_act(&w, &v)), v);
    }

    #[test]
    fn length_is_inversion_count(t in 0usize..5, a in word(10), b in word(10), v in weight(3, 6, 1)) {
        let d = datum(TYPES[t]);
        let v = Weight(v.0[..d.rank()].to_vec());
        let (a, b) = (typed_word(&d, &a), typed_word(&d, &b));
        prop_assert_eq!(a.length(), d.inversion_count(&a));
        prop_assert_eq!(a.word().len(), a.length());
        prop_assert_eq!(&d.element(a.word()).unwrap(), &a);
        let ab = d.product(&a, &b);
        prop_assert_eq!(d.weyl_act(&ab, &v), d.weyl_act(&a, &d.weyl_act(&b, &v)));
    }

    #[test]
    fn n_dot_is_a_group_action(t in 0usize..2, a in word(6), b in word(6), lam in truncated(2, 2, 3)) {
        let d = datum(["A2", "B2"][t]);
        let (a, b) = (typed_word(&d, &a), typed_word(&d, &b));
        let ab = d.product(&a, &b);
        prop_assert_eq!(n_dot(&d, &d.identity(), &lam), lam.clone());
        prop_assert_eq!(n_dot(&d, &ab, &lam), n_dot(&d, &a, &n_dot(&d, &b, &lam)));
        prop_assert_eq!(twist(&d, &ab, &lam), twist(&d, &a, &twist(&d, &b, &lam)));
    }

    #[test]
    fn blocks_are_preserved(a in word(6), x in truncated(2, 1, 2), y in truncated(2, 1, 2)) {
        let d = datum("B2");
        let w = typed_word(&d, &a);
        let y = if x.component(1) == y.component(1) { y } else { x.with_head(y.head().clone()) };
        prop_assert!(same_block(&x, &y));
        prop_assert!(same_block(&n_dot(&d, &w, &x), &n_dot(&d, &w, &y)));
        prop_assert!(!same_block(&n_dot(&d, &w, &x), &x) || w.act(x.top()) == *x.top());
    }

    #[test]
    fn singular_roots_are_equivariant(t in 0usize..5, a in word(8), v in weight(3, 2, 2)) {
        let d = datum(TYPES[t]);
        let v = Weight(v.0[..d.rank()].to_vec());
        let w = typed_word(&d, &a);
        let moved: HashSet<Vec<i64>> = singular_roots(&d, &v).iter().map(|b| d.act_root(&w, b)).collect();
        let direct: HashSet<Vec<i64>> = singular_roots(&d, &d.weyl_act(&w, &v)).into_iter().collect();
        prop_assert_eq!(moved, direct);
    }

    #[test]
    fn twisting_word_is_minimal(t in 0usize..5, v in weight(3, 2, 1)) {
        let d = datum(TYPES[t]);
        let v = Weight(v.0[..d.rank()].to_vec());
        let found = find_twisting_word(&d, &v).unwrap();
        let best = d.weyl_group().unwrap().elements().iter()
            .filter(|w| standard_levi(&d, &singular_roots(&d, &w.act(&v))).is_some())
            .map(|w| w.length())
            .min()
            .unwrap();
        prop_assert_eq!(found.w.length(), best);
        prop_assert!(found.condition_b);
        prop_assert!(check_condition_b(&d, &found.w, &v));
        let levi = standard_levi(&d, &singular_roots(&d, &found.w.act(&v))).unwrap();
        prop_assert_eq!(levi.simple(), found.levi.simple());
    }

    #[test]
    fn linkage_is_an_equivalence(heads in prop::collection::vec(weight(2, 4, 2), 3), top in 0usize..3) {
        let d = datum("A2");
        let tail = Weight::from_ints(&[[0, 1], [1, 0], [0, 0]][top]);
        let levi = LeviDatum::new(&d, [&[0usize][..], &[1], &[0, 1]][top]).unwrap();
        let ws: Vec<TruncatedWeight> = heads.into_iter().map(|h| TruncatedWeight::new(vec![h, tail.clone()]).unwrap()).collect();
        let l = |a: usize, b: usize| linked(&d, &ws[a], &ws[b], &levi).unwrap();
        prop_assert!(l(0, 0));
        prop_assert_eq!(l(0, 1), l(1, 0));
        if l(0, 1) && l(1, 2) {
            prop_assert!(l(0, 2));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn character_routes_agree(t in 0usize..3, n in 0usize..3, depth in 0usize..5, lam in truncated(2, 2, 2)) {
        let d = datum(["A1", "A2", "B2"][t]);
        let comps: Vec<Weight> = lam.components()[..=n].iter().map(|c| Weight(c.0[..d.rank()].to_vec())).collect();
        let lam = TruncatedWeight::new(comps).unwrap();
        for levi in [LeviDatum::full(&d), LeviDatum::new(&d, &[0]).unwrap()] {
            let a = verma_character(&d, &levi, &lam, depth).unwrap();
            let b = verma_character_by_monomials(&d, &levi, &lam, depth);
            prop_assert_eq!(a.entries().collect::<Vec<_>>(), b.entries().collect::<Vec<_>>());
        }
    }

    #[test]
    fn partition_cache_is_stable(t in 0usize..5, beta in prop::collection::vec(0i64..5, 3)) {
        let d = datum(TYPES[t]);
        let beta = &beta[..d.rank()];
        let warm = PartitionCache::for_datum(&d);
        let first = warm.count(beta).unwrap();
        for b in cone(d.rank(), &(0..d.rank()).collect::<Vec<_>>(), 4) {
            warm.count(&b.0).unwrap();
        }
        prop_assert_eq!(warm.count(beta).unwrap(), first);
        prop_assert_eq!(PartitionCache::for_datum(&d).count(beta).unwrap(), first);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simple_is_below_verma(t in 0usize..2, lam in truncated(2, 1, 1)) {
        let d = datum(["A1", "A2"][t]);
        let lam = TruncatedWeight::new(lam.components().iter().map(|c| Weight(c.0[..d.rank()].to_vec())).collect()).unwrap();
        let oracle = Oracle::new(d.clone()).unwrap();
        let depth = 3;
        let simple = oracle.simple_character(&lam, depth).unwrap();
        let verma = verma_character(&d, &LeviDatum::full(&d), &lam, depth).unwrap();
        prop_assert_eq!(simple.coefficient(&vec![0; d.rank()]), 1);
        for (beta, c) in simple.entries() {
            prop_assert!(c <= verma.coefficient(&beta.0));
        }
    }

    #[test]
    fn decomposition_ignores_visit_order(lam in truncated(2, 1, 1), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let d = datum("A2");
        let oracle = Oracle::new(d.clone()).unwrap();
        let depth = 3;
        let ch = verma_character(&d, &LeviDatum::full(&d), &lam, depth).unwrap();
        let plain = decompose_in_block(&d, &ch, &lam.block(), |eta, k| oracle.simple_character(eta, k)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let shuffled = decompose_ordered(&d, &ch, &lam.block(), |eta, k| oracle.simple_character(eta, k), |order| order.shuffle(&mut rng)).unwrap();
        let a: Vec<_> = plain.entries.iter().map(|(b, e)| (b.clone(), e.multiplicity)).collect();
        let b: Vec<_> = shuffled.entries.iter().map(|(b, e)| (b.clone(), e.multiplicity)).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn oracle_is_depth_stable((lam, nu) in pair(2, 1, 1)) {
        let d = datum("A2");
        let oracle = Oracle::new(d.clone()).unwrap();
        let a = oracle.multiplicity(&lam, &nu, 4).unwrap();
        let b = oracle.multiplicity(&lam, &nu, 5).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn engine_matches_oracle(t in 0usize..2, (lam, nu) in pair(2, 1, 2)) {
        let d = datum(["A1", "A2"][t]);
        let cut = |x: &TruncatedWeight| TruncatedWeight::new(x.components().iter().map(|c| Weight(c.0[..d.rank()].to_vec())).collect()).unwrap();
        let (lam, nu) = (cut(&lam), cut(&nu));
        let engine = Engine::new(d.clone());
        let expected = Oracle::new(d.clone()).unwrap().multiplicity(&lam, &nu, 4).unwrap();
        let trace = engine.traced(&lam, &nu).unwrap();
        prop_assert!(trace.verify());
        prop_assert_eq!(trace.value, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn twisting_preserves_multiplicity(t in 0usize..2, (lam, nu) in pair(2, 1, 1), a in word(3)) {
        let d = datum(["A2", "B2"][t]);
        let nu = if t == 1 { lam.with_head(lam.head() - &Weight::from_ints(&[1, 0])) } else { nu };
        let engine = Engine::new(d.clone());
        let w = typed_word(&d, &a);
        if check_condition_b(&d, &w, lam.top()) {
            let before = engine.multiplicity(&lam, &nu).unwrap();
            let after = engine.multiplicity(&twist(&d, &w, &lam), &twist(&d, &w, &nu)).unwrap();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn nonzero_multiplicity_needs_linkage((lam, nu) in pair(2, 1, 1)) {
        let d = datum("A2");
        let engine = Engine::new(d.clone());
        let trace = engine.traced(&lam, &nu).unwrap();
        if let Some(r) = trace.reduction() {
            let levi = LeviDatum::new(&d, &r.twisted_levi.iter().map(|j| j - 1).collect::<Vec<_>>()).unwrap();
            let ok = linked(&d, &r.twisted_lambda, &r.twisted_nu, &levi).unwrap();
            prop_assert!(trace.value == 0 || ok);
        }
    }
}

#[test]
fn bruhat_is_a_partial_order() {
    for t in TYPES {
        let d = datum(t);
        let elems = d.weyl_group().unwrap().elements().to_vec();
        for x in &elems {
            assert!(d.bruhat_leq(x, x));
            for y in &elems {
                let xy = d.bruhat_leq(x, y);
                if xy && x != y {
                    assert!(!d.bruhat_leq(y, x));
                    assert!(x.length() < y.length());
                }
                if xy {
                    for z in &elems {
                        if d.bruhat_leq(y, z) {
                            assert!(d.bruhat_leq(x, z), "{t}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn kl_polynomials_are_well_formed() {
    for t in ["A2", "B2", "G2", "A3"] {
        let d = datum(t);
        let table = trunco::kl::KlTable::new(d.clone()).unwrap();
        let g = table.group();
        for x in 0..g.order() {
            for y in 0..g.order() {
                let p = table.by_index(x, y);
                if !g.bruhat_leq(x, y) {
                    assert!(p.is_zero());
                    continue;
                }
                assert_eq!(p.coeffs[0], 1);
                if x != y {
                    let bound = (g.length(y) - g.length(x) - 1) / 2;
                    assert!(p.degree().unwrap() <= bound, "{t}");
                }
            }
        }
    }
}
