use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use young_endo::celldatum::*;
use young_endo::endoalgebra::{AlgebraElement, EndoAlgebra};
use young_endo::lattice::{quotient_basis, Lattice, SparseVec};
use young_endo::partitions::{dominates, kostka, partitions_of};
use young_endo::pdominance::{upward_closure, Dominance};
use young_endo::youngset::{all_simple_young_sets, YoungSet};
use young_endo::Partition;

fn ys(s: &str) -> YoungSet {
    s.parse().unwrap()
}

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn full_young_set(n: usize) -> YoungSet {
    YoungSet::new(n, partitions_of(n)).unwrap()
}

#[test]
fn quotient_examples() {
    let l = Lattice::from_generators(2, [SparseVec::unit(0), SparseVec::unit(1)]);
    let q = quotient_basis(&l, &l).unwrap();
    assert!(q.lifts.is_empty() && q.is_torsion_free());
    let small = Lattice::from_generators(2, [SparseVec::unit(0).scale(&BigInt::from(2))]);
    let q = quotient_basis(&Lattice::full(2), &small).unwrap();
    assert_eq!(q.torsion_divisors, vec![BigInt::from(2)]);
    assert_eq!(q.lifts, vec![SparseVec::unit(1)]);
}

#[test]
fn datum_examples() {
    let d = build_cell_datum(&ys("1,1")).unwrap();
    assert_eq!(d.lambda_plus(), vec![p("2"), p("1,1")]);
    assert_eq!(d.cells.iter().map(Cell::size).collect::<Vec<_>>(), vec![1, 1]);
    assert_eq!(d.truncated_basis().len(), 2);

    let d = build_cell_datum(&ys("2,1; 3")).unwrap();
    assert_eq!(d.lambda_plus(), vec![p("3"), p("2,1")]);
    assert_eq!(d.cells.iter().map(Cell::size).collect::<Vec<_>>(), vec![2, 1]);
    let count: usize = d.cells.iter().map(|c| c.size() * c.size()).sum();
    assert_eq!(count, 5);
}

#[test]
fn schur_algebra_ranks() {
    // orbit types with the multiplicities of weights of E^{⊗r}, dim E = r
    for (text, rank) in [("2; 1,1", 5), ("2 x2; 1,1", 10), ("3 x3; 2,1 x6; 1,1,1", 165)] {
        let d = build_cell_datum(&ys(text)).unwrap();
        assert_eq!(d.truncated_basis().len(), rank, "{text}");
        let report = verify_cell_datum(&d).unwrap();
        assert!(report.all_pass(), "{text}\n{report}");
    }
}

/// `rank eV(λ)^λ` inside the full `Ω = Par(n)` for a set of orbits `gamma`.
fn truncated_section_rank(alg: &EndoAlgebra, chain: &IdealChain, gamma: &[usize], lambda: &Partition) -> usize {
    let alpha = alg.omega().first_orbit_of(lambda).unwrap();
    let above = chain.strictly_above(lambda).unwrap();
    let mut big = above.clone();
    big.extend(gamma.iter().flat_map(|&g| alg.block(g, alpha)).map(SparseVec::unit));
    let q = quotient_basis(&big, above).unwrap();
    assert!(q.is_torsion_free());
    q.lifts.len()
}

#[test]
fn truncated_section_ranks_follow_kostka() {
    for n in 1..=4 {
        let omega = full_young_set(n);
        let alg = EndoAlgebra::new(&omega).unwrap();
        let chain = IdealChain::new(&alg);
        let k = omega.orbit_count();
        for mask in 1u32..(1 << k) {
            let gamma: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let types: Vec<Partition> = gamma.iter().map(|&i| omega.orbit_types()[i].clone()).collect();
            let closure = upward_closure(&YoungSet::new(n, types.clone()).unwrap().support(), &Dominance).unwrap();
            for lam in partitions_of(n) {
                let rank = truncated_section_rank(&alg, &chain, &gamma, &lam);
                let expected: u64 = types.iter().map(|t| kostka(&lam, t).unwrap()).sum();
                assert_eq!(rank as u64, expected, "n={n} Γ={types:?} λ={lam}");
                assert_eq!(rank == 0, !closure.contains(&lam));
            }
        }
    }
}

#[test]
fn chain_structure() {
    for n in 1..=4 {
        for omega in all_simple_young_sets(n) {
            let alg = EndoAlgebra::new(&omega).unwrap();
            let chain = IdealChain::new(&alg);
            let order = chain.order().to_vec();
            for (k, lam) in order.iter().enumerate() {
                let ge = chain.at_or_above(lam).unwrap();
                let gt = chain.strictly_above(lam).unwrap();
                assert!(ge.contains_lattice(gt));
                if k + 1 < order.len() {
                    assert!(chain.at_or_above(&order[k + 1]).unwrap().contains_lattice(ge));
                }
                let sigma: Vec<Partition> = order[..=k].to_vec();
                assert_eq!(&ideal_lattice(&alg, &sigma), ge);
                assert_eq!(&ideal_lattice(&alg, std::slice::from_ref(lam)).sum(gt), ge);
            }
            if let Some(last) = order.last() {
                assert_eq!(chain.at_or_above(last).unwrap().rank(), alg.dim());
            }
        }
    }
}

#[test]
fn cell_sizes_square_to_the_truncated_rank() {
    let mut cases: Vec<YoungSet> = (1..=4).flat_map(all_simple_young_sets).collect();
    cases.extend(["5", "3,2", "3,1,1", "4,1; 2,2,1", "2,1,1,1"].map(ys));
    for gamma in cases {
        let d = build_cell_datum(&gamma).unwrap();
        let squares: usize = d.cells.iter().map(|c| c.size() * c.size()).sum();
        assert_eq!(squares, d.truncated_basis().len(), "{gamma}");
        let closure = upward_closure(&gamma.support(), &Dominance).unwrap();
        assert_eq!(d.cells.len(), closure.len());
        for cell in &d.cells {
            let expected: u64 = gamma.orbit_types().iter().map(|t| kostka(&cell.lambda, t).unwrap()).sum();
            assert_eq!(cell.size() as u64, expected);
            assert!(cell.size() > 0);
        }
    }
}

#[test]
fn purity_examples() {
    let alg = EndoAlgebra::new(&ys("1,1; 2")).unwrap();
    assert!(purity_check(&alg, &[p("2")]).unwrap());
    assert!(purity_check(&alg, &partitions_of(2)).unwrap());
    assert!(purity_check(&alg, &[]).unwrap());
    let alg = EndoAlgebra::new(&ys("2,1")).unwrap();
    assert!(purity_check(&alg, &[p("3")]).unwrap());
    assert!(purity_check(&alg, &[p("3"), p("2,1")]).unwrap());
}

#[test]
fn purity_of_every_cosaturated_ideal_small() {
    for n in 1..=3 {
        let par = partitions_of(n);
        for omega in all_simple_young_sets(n) {
            let alg = EndoAlgebra::new(&omega).unwrap();
            for mask in 0u32..(1 << par.len()) {
                let sigma: Vec<Partition> = (0..par.len()).filter(|i| mask >> i & 1 == 1).map(|i| par[i].clone()).collect();
                let closed = sigma
                    .iter()
                    .all(|l| par.iter().all(|m| !dominates(m, l).unwrap() || sigma.contains(m)));
                match purity_check(&alg, &sigma) {
                    Ok(pure) => assert!(closed && pure, "{omega} {sigma:?}"),
                    Err(_) => assert!(!closed),
                }
            }
        }
    }
}

#[test]
fn factorization_examples() {
    let alg = EndoAlgebra::new(&ys("1,1; 2")).unwrap();
    let f = factorization_check(&alg, &p("2")).unwrap();
    assert_eq!((f.left_rank, f.right_rank, f.section_rank, f.pass), (2, 2, 4, true));
    let f = factorization_check(&alg, &p("1,1")).unwrap();
    assert_eq!((f.left_rank, f.right_rank, f.section_rank, f.pass), (1, 1, 1, true));
    assert!(factorization_check(&alg, &p("3")).is_err());
}

#[test]
fn verification_of_small_data() {
    for n in 1..=3 {
        for gamma in all_simple_young_sets(n) {
            let d = build_cell_datum(&gamma).unwrap();
            let report = verify_cell_datum(&d).unwrap();
            assert!(report.all_pass(), "{gamma}\n{report}");
        }
    }
    let report = verify_cell_datum(&build_cell_datum(&ys("1,1")).unwrap()).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["c1"]["pass"], true);
    assert_eq!(json["cells"][0], serde_json::json!(["2", 1]));
}

/// Adds 1 at a random `eSe` coordinate of a random element of the top cell.
fn mutate_top_cell(d: &mut CellDatum, rng: &mut ChaCha8Rng) {
    let basis = d.truncated_basis();
    let class = basis[rng.gen_range(0..basis.len())];
    let top = &mut d.cells[0];
    let (t, u) = (rng.gen_range(0..top.size()), rng.gen_range(0..top.size()));
    top.c[t][u] = top.c[t][u].add(&AlgebraElement::basis(class).scale(&BigInt::one()));
}

#[test]
fn mutation_controls_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for text in ["1,1", "2,1; 3", "2,1", "2,2; 3,1", "1,1,1,1", "3,1; 2,1,1"] {
        let clean = build_cell_datum(&ys(text)).unwrap();
        for _ in 0..4 {
            let mut d = clean.clone();
            mutate_top_cell(&mut d, &mut rng);
            let report = verify_cell_datum(&d).unwrap();
            assert!(!(report.c1.pass && report.c3.pass), "{text}: mutation went undetected");
            assert!(!report.all_pass());
        }
    }
}

#[test]
fn construction_is_deterministic() {
    let gamma = ys("2,2; 2,1,1");
    let a = build_cell_datum(&gamma).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| build_cell_datum(&gamma).unwrap());
    assert_eq!(a.cells, b.cells);
    assert_eq!(verify_cell_datum(&a).unwrap(), pool.install(|| verify_cell_datum(&b).unwrap()));
}

#[test]
fn size_guard_applies() {
    assert!(build_cell_datum_with(&ys("1,1,1,1,1"), 100).is_err());
}

#[test]
fn non_cosaturated_chains_can_have_torsion() {
    // (4) is missing, so maps through M(4) never enter S(>(2,2))
    let omega = ys("3,1; 2,2");
    let alg = EndoAlgebra::new(&omega).unwrap();
    let torsion = section_torsion(&IdealChain::new(&alg)).unwrap();
    let at = torsion.iter().find(|(l, _)| *l == p("2,2")).unwrap();
    assert_eq!(at.1, vec![BigInt::from(2)]);
    // inside the cosaturated closure the same Hom-group sections are free
    let tr = Truncation::new(&omega).unwrap();
    assert!(tr.section_torsion().unwrap().iter().all(|(_, d)| d.is_empty()));
    assert!(tr.purity_divisors(&[p("4"), p("3,1")]).unwrap().is_empty());
}

#[test]
fn truncation_of_a_cosaturated_set_is_the_whole_chain() {
    for omega in all_simple_young_sets(4).into_iter().filter(YoungSet::is_cosaturated) {
        let alg = EndoAlgebra::new(&omega).unwrap();
        let intrinsic = section_torsion(&IdealChain::new(&alg)).unwrap();
        assert_eq!(Truncation::new(&omega).unwrap().section_torsion().unwrap(), intrinsic);
    }
}
