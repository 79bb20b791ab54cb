use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use young_endo::partitions::{partitions_of, sort_descending};
use young_endo::youngset::*;
use young_endo::Partition;

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

#[test]
fn orbits_are_single_sym_n_orbits() {
    for n in 1..=5usize {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        for mu in partitions_of(n) {
            let points = enumerate_points(&mu, n).unwrap();
            let expected: u128 = factorial(n as u128)
                / mu.parts().iter().map(|&m| factorial(m as u128)).product::<u128>();
            assert_eq!(points.len() as u128, expected);
            assert_eq!(multinomial(&mu), expected);
            let set: BTreeSet<Tabloid> = points.iter().cloned().collect();
            assert_eq!(set.len(), points.len());
            for start in [&points[0], points.last().unwrap()] {
                let orbit: BTreeSet<Tabloid> = perms.iter().map(|w| start.act(w)).collect();
                assert_eq!(orbit, set, "{mu}");
            }
            assert!(points.iter().all(|t| sort_descending(&t.shape()) == mu));
        }
    }
}

#[test]
fn action_composes() {
    let n = 4;
    let t = enumerate_points(&"2,1,1".parse().unwrap(), n).unwrap()[5].clone();
    for u in (0..n).permutations(n) {
        for v in (0..n).permutations(n).step_by(5) {
            let uv: Vec<usize> = (0..n).map(|k| u[v[k]]).collect();
            assert_eq!(t.act(&v).act(&u), t.act(&uv));
        }
    }
}

/// Orbit types of `I(n, r)` from brute-force stabilisers in `Sym(n)`.
fn tensor_types_by_brute_force(n: usize, r: usize) -> BTreeMap<Partition, usize> {
    // one representative per orbit: relabel the image in first-occurrence order
    let mut reps = BTreeSet::new();
    for map in (0..r).map(|_| 0..n).multi_cartesian_product() {
        let mut relabel = BTreeMap::new();
        let canon: Vec<usize> = map
            .iter()
            .map(|v| {
                let k = relabel.len();
                *relabel.entry(*v).or_insert(k)
            })
            .collect();
        reps.insert(canon);
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut types = BTreeMap::new();
    for rep in reps {
        let stab: Vec<&Vec<usize>> = perms
            .iter()
            .filter(|w| rep.iter().all(|&i| w[i] == i))
            .collect();
        // the orbits of the stabiliser on {0..n-1} give the Young subgroup type
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let orbit: BTreeSet<usize> = stab.iter().map(|w| w[start]).collect();
            for &k in &orbit {
                seen[k] = true;
            }
            sizes.push(orbit.len() as u32);
        }
        let ty = sort_descending(&sizes);
        let young_order: usize = ty.parts().iter().map(|&m| factorial(m as u128) as usize).product();
        assert_eq!(stab.len(), young_order, "stabiliser is the full Young subgroup");
        *types.entry(ty).or_insert(0) += 1;
    }
    types
}

#[test]
fn tensor_model_matches_stabilisers() {
    for n in 1..=7usize {
        for r in 1..=4usize {
            let set = tensor_young_set(n, r).unwrap();
            let mut ours = BTreeMap::new();
            for t in set.orbit_types() {
                *ours.entry(t.clone()).or_insert(0usize) += 1;
            }
            assert_eq!(ours, tensor_types_by_brute_force(n, r), "I({n},{r})");
            let hooks: BTreeSet<Partition> = (1..=r.min(n))
                .map(|b| Partition::hook((n - b) as u32, b as u32))
                .collect();
            assert_eq!(set.support().members(), &hooks);
        }
    }
}

#[test]
fn tensor_examples() {
    let s = tensor_young_set(5, 2).unwrap();
    assert_eq!(s.support().members().len(), 2);
    assert_eq!(s.to_text(), "4,1; 3,1,1");
    assert_eq!(tensor_young_set(3, 1).unwrap().to_text(), "2,1");
    assert_eq!(tensor_young_set(3, 3).unwrap().to_text(), "2,1; 1,1,1 x4");
    assert!(tensor_young_set(0, 2).is_err());
}

#[test]
fn closure_is_cosaturated_and_idempotent() {
    for n in 1..=5 {
        for set in all_simple_young_sets(n) {
            let omega = set.cosaturated_closure();
            assert!(omega.is_cosaturated());
            assert_eq!(omega.cosaturated_closure(), omega);
            assert_eq!(&omega.orbit_types()[..set.orbit_count()], set.orbit_types());
            assert!(omega.contains_orbits_of(&set));
            assert_eq!(set.is_cosaturated(), omega == set);
        }
    }
}

#[test]
fn text_format_round_trips() {
    for text in ["2,1 x2; 3", "1,1,1", "4,1; 3,1,1; 5 x3"] {
        let set: YoungSet = text.parse().unwrap();
        assert_eq!(set.to_text(), text);
        let json = serde_json::to_string(&set).unwrap();
        assert_eq!(serde_json::from_str::<YoungSet>(&json).unwrap(), set);
    }
}
