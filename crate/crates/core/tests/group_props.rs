use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;

use divcert_core::cohomology::{h1_brute_force, h1_dimension};
use divcert_core::gmodule::{
    a0_a1_modules_for, composition_factors, composition_factors_ordered, end_module,
    extension_characters, same_factor_multiset, standard_module, LineOrder,
};
use divcert_core::group::{
    canonical_s3_copies, classify_subgroup, enumerate_subgroups_up_to_conjugacy,
    is_in_s3_copy_fast, is_in_s3_copy_oracle, EnumerationMode, Gl2, Mat2, MatrixGroup, TorusKind,
    TorusNormalizer,
};

fn random_group(p: u64, seeds: &[u64]) -> MatrixGroup {
    let gl = Gl2::new(p).unwrap();
    let all = gl.elements();
    let gens: Vec<Mat2> = seeds.iter().map(|s| all[(*s % all.len() as u64) as usize]).collect();
    MatrixGroup::generate(gl, &gens, None).unwrap()
}

fn exhaustive(p: u64) -> Vec<MatrixGroup> {
    enumerate_subgroups_up_to_conjugacy(p, EnumerationMode::Exhaustive).unwrap()
}

fn all_subgroups(p: u64) -> Vec<MatrixGroup> {
    let gl = Gl2::new(p).unwrap();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rep in exhaustive(p) {
        for x in gl.elements() {
            let c = rep.conjugate_by(&x);
            if seen.insert(c.element_key()) {
                out.push(c);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lagrange(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
                seeds in prop::collection::vec(any::<u64>(), 1..=3)) {
        let g = random_group(p, &seeds);
        let gl = g.gl();
        prop_assert_eq!(gl.order() % g.order(), 0);
        for m in g.matrices() {
            prop_assert_eq!(g.order() % gl.element_order(m), 0);
        }
        let els: Vec<Mat2> = g.matrices().copied().collect();
        let a = els[(seeds[0] % els.len() as u64) as usize];
        let b = els[(seeds[seeds.len() - 1] % els.len() as u64) as usize];
        prop_assert!(g.contains(&gl.mul(&a, &b)));
        prop_assert!(g.contains(&gl.inv(&a).unwrap()));
    }

    #[test]
    fn witness_words_evaluate(p in prop::sample::select(vec![3u64, 5, 7]),
                              seeds in prop::collection::vec(any::<u64>(), 1..=3)) {
        let g = random_group(p, &seeds);
        for e in g.elements() {
            prop_assert_eq!(g.evaluate_word(&e.word), e.matrix);
        }
    }

    #[test]
    fn jordan_hoelder(p in prop::sample::select(vec![3u64, 5, 7]),
                      seeds in prop::collection::vec(any::<u64>(), 1..=2)) {
        let g = Arc::new(random_group(p, &seeds));
        for m in [standard_module(&g), end_module(&g)] {
            let fwd = composition_factors_ordered(&m, LineOrder::Forward).unwrap();
            let rev = composition_factors_ordered(&m, LineOrder::Reverse).unwrap();
            prop_assert_eq!(fwd.iter().map(|x| x.dim()).sum::<usize>(), m.dim());
            prop_assert!(same_factor_multiset(&fwd, &rev));
            for x in &fwd {
                prop_assert!(x.is_irreducible());
            }
        }
    }

    #[test]
    fn borel_flag_matches_reducibility(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
                                       seeds in prop::collection::vec(any::<u64>(), 1..=2)) {
        let g = Arc::new(random_group(p, &seeds));
        let reducible = extension_characters(&standard_module(&g)).is_some();
        prop_assert_eq!(classify_subgroup(&g).in_borel, reducible);
    }

    #[test]
    fn torus_splitting(p in prop::sample::select(vec![3u64, 5, 7]),
                       split in any::<bool>(),
                       seeds in prop::collection::vec(any::<u64>(), 1..=2)) {
        let gl = Gl2::new(p).unwrap();
        let kind = if split { TorusKind::Split } else { TorusKind::Nonsplit };
        let norm = TorusNormalizer::new(gl, kind);
        let members = norm.group().matrices().copied().collect::<Vec<_>>();
        let gens: Vec<Mat2> = seeds.iter().map(|s| members[(*s % members.len() as u64) as usize]).collect();
        let g = Arc::new(MatrixGroup::generate(gl, &gens, None).unwrap());
        let s = a0_a1_modules_for(&g, &norm).unwrap();
        prop_assert!(s.verify());
        prop_assert!(s.a0.respects_relations(400, 1));
        prop_assert!(s.a1.respects_relations(400, 2));
        let mut direct = composition_factors(&s.a0).unwrap();
        direct.extend(composition_factors(&s.a1).unwrap());
        let adjoint = composition_factors(&end_module(&g)).unwrap();
        prop_assert!(same_factor_multiset(&direct, &adjoint));
    }
}

#[test]
fn full_normalizers_split() {
    for p in [3, 5, 7] {
        let gl = Gl2::new(p).unwrap();
        for kind in [TorusKind::Split, TorusKind::Nonsplit] {
            let norm = TorusNormalizer::new(gl, kind);
            let g = Arc::new(norm.group());
            assert!(a0_a1_modules_for(&g, &norm).unwrap().verify(), "p={p} {kind:?}");
        }
    }
}

#[test]
fn enumeration_is_closed_under_adjoining() {
    for p in [2, 3] {
        let gl = Gl2::new(p).unwrap();
        let subs = all_subgroups(p);
        let keys: HashSet<Vec<u32>> = subs.iter().map(|g| g.element_key()).collect();
        for h in &subs {
            for x in gl.elements() {
                let mut gens = h.generators().to_vec();
                gens.push(x);
                let k = MatrixGroup::generate(gl, &gens, None).unwrap();
                assert!(keys.contains(&k.element_key()), "p={p}: missing subgroup of order {}", k.order());
            }
        }
    }
    assert_eq!(all_subgroups(2).len(), 6);
    assert_eq!(all_subgroups(3).len(), 55);
}

#[test]
fn s3_fast_matches_oracle() {
    for p in [2, 3, 5, 7] {
        let gl = Gl2::new(p).unwrap();
        let copies = canonical_s3_copies(gl);
        let all = gl.elements();
        let small: Vec<Mat2> = all.iter().filter(|m| 6 % gl.element_order(m) == 0).copied().collect();
        let mut seen = HashSet::new();
        let mut groups = Vec::new();
        for a in &small {
            let c = MatrixGroup::generate(gl, &[*a], None).unwrap();
            if seen.insert(c.element_key()) {
                groups.push(c);
            }
        }
        let threes: Vec<Mat2> = small.iter().filter(|m| gl.element_order(m) == 3).copied().collect();
        let twos: Vec<Mat2> = small.iter().filter(|m| gl.element_order(m) == 2).copied().collect();
        for r in &threes {
            for s in &twos {
                if let Ok(g) = MatrixGroup::generate(gl, &[*r, *s], Some(6)) {
                    if seen.insert(g.element_key()) {
                        groups.push(g);
                    }
                }
            }
        }
        for g in &groups {
            assert_eq!(
                is_in_s3_copy_fast(g),
                is_in_s3_copy_oracle(g, &copies),
                "p={p} generators {:?}",
                g.generators()
            );
        }
    }
}

#[test]
fn s3_copy_classes() {
    let counts: Vec<usize> = [2, 3, 5, 7, 11]
        .iter()
        .map(|&p| canonical_s3_copies(Gl2::new(p).unwrap()).len())
        .collect();
    assert_eq!(counts, vec![1, 2, 1, 1, 1]);
}

#[test]
fn scalars_kill_h1_of_v() {
    for p in [3, 5] {
        for g in exhaustive(p) {
            if g.center_intersection().order() > 1 {
                let g = Arc::new(g);
                assert_eq!(h1_dimension(&g, &standard_module(&g)).unwrap(), 0);
            }
        }
    }
}

#[test]
fn scalars_do_not_kill_h1_of_end() {
    // scalars act trivially on End(V), so the vanishing argument does not apply
    let gl = Gl2::new(3).unwrap();
    let g = Arc::new(MatrixGroup::generate(gl, &[gl.scalar(2), gl.from_i64(1, 1, 0, 1)], None).unwrap());
    let e = end_module(&g);
    assert_eq!(h1_dimension(&g, &e).unwrap(), 1);
    assert_eq!(h1_brute_force(&g, &e).unwrap(), 1);
    let gl5 = Gl2::new(5).unwrap();
    let sl = Arc::new(MatrixGroup::special_linear(gl5));
    assert_eq!(h1_dimension(&sl, &end_module(&sl)).unwrap(), 1);
}

/// `H^1(G, V)` injects into `Hom_N(P, chi2)` with `N = N_G(P)`, which is
/// nonzero exactly when `chi1 = chi2^2` on `N`.
#[test]
fn restriction_bound() {
    for p in [3, 5] {
        let gl = Gl2::new(p).unwrap();
        let u = MatrixGroup::standard_unipotent(gl);
        for g in exhaustive(p) {
            if g.order() % p as usize != 0 {
                assert_eq!(h1_dimension(&g, &standard_module(&Arc::new(g.clone()))).unwrap(), 0);
                continue;
            }
            let sylow = g.p_sylow();
            let x = gl
                .elements()
                .into_iter()
                .find(|x| sylow.generators().iter().all(|s| u.contains(&gl.conj(x, s))))
                .expect("Sylow subgroups are conjugate");
            let h = g.conjugate_by(&x);
            let f = gl.field();
            let bound = h
                .matrices()
                .filter(|m| m.entries()[2] == 0)
                .all(|m| {
                    let [a1, _, _, a2] = m.entries();
                    a1 == f.mul(a2, a2)
                }) as usize;
            let h1 = h1_dimension(&g, &standard_module(&Arc::new(g.clone()))).unwrap();
            let h1_conj = h1_dimension(&h, &standard_module(&Arc::new(h.clone()))).unwrap();
            assert_eq!(h1, h1_conj);
            assert!(h1 <= bound, "p={p} |G|={} h1={h1} bound={bound}", g.order());
        }
    }
}
