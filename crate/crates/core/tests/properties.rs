use std::collections::HashSet;

use chirex::permcore::{PermGroup, Permutation};
use proptest::prelude::*;

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn gens(max_degree: usize) -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (1..=max_degree).prop_flat_map(|d| (Just(d), prop::collection::vec(perm(d), 1..=3)))
}

/// Closure by breadth-first search on image vectors.
fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Vec<u32>> {
    let id: Vec<u32> = (0..degree as u32).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y: Vec<u32> = x.iter().map(|&i| g.image(i)).collect();
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen
}

proptest! {
    #[test]
    fn composition_laws(a in perm(8), b in perm(8), c in perm(8)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.after(&b), b.compose(&a));
        for x in 0..8 {
            prop_assert_eq!(a.compose(&b).image(x), b.image(a.image(x)));
        }
        prop_assert!(a.pow(a.order() as i64).is_identity());
        prop_assert_eq!(a.pow(-1), a.inverse());
    }

    #[test]
    fn cycles_round_trip(a in perm(9)) {
        let cycles = a.cycles();
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        prop_assert_eq!(Permutation::from_cycles(9, &refs).unwrap(), a);
    }

    #[test]
    fn order_matches_closure((degree, gens) in gens(7)) {
        let all = closure(degree, &gens);
        prop_assume!(all.len() <= 10_000);
        let g = PermGroup::from_perms(degree, gens).unwrap();
        prop_assert_eq!(g.order(), num_bigint::BigUint::from(all.len()));
        let mut listed = HashSet::new();
        g.for_each_element(|p| {
            listed.insert(p.images().to_vec());
            true
        });
        prop_assert_eq!(listed, all);
    }

    #[test]
    fn membership_matches_closure((degree, gens) in gens(6), probe in perm(6)) {
        let all = closure(degree, &gens);
        let g = PermGroup::from_perms(degree, gens).unwrap();
        let probe = if degree == 6 { probe } else { Permutation::identity(degree) };
        prop_assert_eq!(g.contains(&probe).unwrap(), all.contains(probe.images()));
    }

    #[test]
    fn diamond_order_divides_product((_, a) in gens(5), (_, b) in gens(5)) {
        let k = a.len().min(b.len());
        let ga = PermGroup::from_perms(a[0].degree(), a[..k].to_vec()).unwrap();
        let gb = PermGroup::from_perms(b[0].degree(), b[..k].to_vec()).unwrap();
        let d = chirex::mix::diamond(&ga, &gb, None).unwrap().order();
        let zero = num_bigint::BigUint::from(0u32);
        prop_assert_eq!(&d % ga.order(), zero.clone());
        prop_assert_eq!(&d % gb.order(), zero.clone());
        prop_assert_eq!((ga.order() * gb.order()) % &d, zero);
    }
}
