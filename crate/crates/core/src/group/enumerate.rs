use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Gl2, Mat2, MatrixGroup};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    /// One representative per conjugacy class of subgroups (p <= 5).
    Exhaustive,
    /// `count` distinct subgroups generated by 1 to 3 random elements.
    Sampled { count: usize, seed: u64 },
}

/// Subgroups of GL2(F_p), either one per conjugacy class or a seeded sample.
///
/// Exhaustive mode grows the class list by adjoining single elements to known
/// representatives: every subgroup is reached from a maximal proper subgroup
/// chain, and conjugating the chain lands on a known representative. New
/// classes are recognized by looking up the element set among all conjugates
/// of the classes already found. The representative of a class is its
/// conjugate with the smallest sorted element list. Output is sorted by
/// `(order, element list)`.
pub fn enumerate_subgroups_up_to_conjugacy(p: u64, mode: EnumerationMode) -> Result<Vec<MatrixGroup>> {
    let gl = Gl2::new(p)?;
    match mode {
        EnumerationMode::Exhaustive => {
            if p > 5 {
                return Err(Error::ExhaustiveTooLarge(p));
            }
            Ok(exhaustive(gl))
        }
        EnumerationMode::Sampled { count, seed } => Ok(sampled(gl, count, seed)),
    }
}

fn conjugate_keys(gl: Gl2, g: &MatrixGroup, all: &[Mat2]) -> Vec<(Vec<u32>, Mat2)> {
    let members: Vec<Mat2> = g.matrices().copied().collect();
    let mut out: Vec<(Vec<u32>, Mat2)> = all
        .iter()
        .map(|x| {
            let mut k: Vec<u32> = members
                .iter()
                .map(|m| gl.index(&gl.conj(x, m)) as u32)
                .collect();
            k.sort_unstable();
            (k, *x)
        })
        .collect();
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

fn exhaustive(gl: Gl2) -> Vec<MatrixGroup> {
    let all = gl.elements();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut reps: Vec<MatrixGroup> = Vec::new();

    let register = |g: MatrixGroup, seen: &mut HashSet<Vec<u32>>, reps: &mut Vec<MatrixGroup>| {
        let keys = conjugate_keys(gl, &g, &all);
        let (_, x) = keys[0].clone();
        for (k, _) in keys {
            seen.insert(k);
        }
        let canonical = g.conjugate_by(&x);
        reps.push(canonical);
    };

    register(MatrixGroup::trivial(gl), &mut seen, &mut reps);
    let mut next = 0;
    while next < reps.len() {
        let h = reps[next].clone();
        next += 1;
        let mut tried: HashSet<Vec<u32>> = HashSet::new();
        for x in &all {
            if h.contains(x) {
                continue;
            }
            let mut gens = h.generators().to_vec();
            gens.push(*x);
            let k = MatrixGroup::generate(gl, &gens, None).expect("inside GL2");
            let key = k.element_key();
            if !tried.insert(key.clone()) || seen.contains(&key) {
                continue;
            }
            register(k, &mut seen, &mut reps);
        }
    }
    reps.sort_by_key(|a| (a.order(), a.element_key()));
    reps
}

fn sampled(gl: Gl2, count: usize, seed: u64) -> Vec<MatrixGroup> {
    let all = gl.elements();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let max_attempts = 200 * count.max(1);
    let mut attempts = 0;
    while out.len() < count && attempts < max_attempts {
        attempts += 1;
        let k = rng.gen_range(1..=3);
        let gens: Vec<Mat2> = (0..k).map(|_| all[rng.gen_range(0..all.len())]).collect();
        let g = MatrixGroup::generate(gl, &gens, None).expect("inside GL2");
        if seen.insert(g.element_key()) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroups_of_s3() {
        let reps = enumerate_subgroups_up_to_conjugacy(2, EnumerationMode::Exhaustive).unwrap();
        let orders: Vec<usize> = reps.iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn exhaustive_guard() {
        assert!(matches!(
            enumerate_subgroups_up_to_conjugacy(7, EnumerationMode::Exhaustive),
            Err(Error::ExhaustiveTooLarge(7))
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let mode = EnumerationMode::Sampled { count: 25, seed: 9 };
        let a = enumerate_subgroups_up_to_conjugacy(7, mode).unwrap();
        let b = enumerate_subgroups_up_to_conjugacy(7, mode).unwrap();
        assert_eq!(a.len(), 25);
        let ka: Vec<_> = a.iter().map(|g| g.element_key()).collect();
        let kb: Vec<_> = b.iter().map(|g| g.element_key()).collect();
        assert_eq!(ka, kb);
    }
}
