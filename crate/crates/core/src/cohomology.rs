//! First cohomology of finite matrix groups and the two sides of the group
//! criterion for local-global divisibility.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gmodule::{
    character_power, composition_factors, end_module, extension_characters,
    has_common_irreducible_factor, standard_module, trivial_character, GModule,
};
use crate::group::{
    canonical_s3_copies, classify_subgroup, is_in_s3_copy, is_in_s3_copy_oracle,
    ClassificationFlags, Mat2, MatrixGroup,
};
use crate::matrix::{FpMatrix, RowSpace};

/// Upper bound on the number of candidate functions the brute-force oracle
/// will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Cocycles as linear expressions in the generator values.
///
/// Unknown block `j` holds `f(s_j)`; `expressions[i]` is the `dim x unknowns`
/// matrix with `f(elements[i]) = expressions[i] * u`, built along a BFS tree of
/// the Cayley graph with `f(g s) = f(g) + g f(s)`.
pub struct CocycleSystem {
    pub unknowns: usize,
    pub elements: Vec<Mat2>,
    pub expressions: Vec<FpMatrix>,
    pub constraints: RowSpace,
}

impl CocycleSystem {
    pub fn build(g: &MatrixGroup, m: &GModule) -> Result<Self> {
        check_pairing(g, m)?;
        let f = g.field();
        let gl = g.gl();
        let dim = m.dim();
        let gens = g.generators();
        let unknowns = gens.len() * dim;
        let n = g.order();

        let mut expr: Vec<Option<FpMatrix>> = vec![None; n];
        let mut rho: Vec<Option<FpMatrix>> = vec![None; n];
        let mut elements = vec![Mat2::IDENTITY; n];
        let mut constraints = RowSpace::new(f, unknowns);

        let id = g.position(&Mat2::IDENTITY).expect("identity");
        expr[id] = Some(FpMatrix::zero(f, dim, unknowns));
        rho[id] = Some(FpMatrix::identity(f, dim));
        let mut queue = VecDeque::from([Mat2::IDENTITY]);
        while let Some(x) = queue.pop_front() {
            let xi = g.position(&x).expect("member");
            elements[xi] = x;
            let lx = expr[xi].clone().expect("visited");
            let rx = rho[xi].clone().expect("visited");
            for (j, s) in gens.iter().enumerate() {
                let y = gl.mul(&x, s);
                let yi = g.position(&y).expect("closed");
                // candidate expression for f(x s) = f(x) + x f(s)
                let mut cand = lx.clone();
                for r in 0..dim {
                    for c in 0..dim {
                        let col = j * dim + c;
                        cand.set(r, col, f.add(cand.get(r, col), rx.get(r, c)));
                    }
                }
                match &expr[yi] {
                    None => {
                        expr[yi] = Some(cand);
                        rho[yi] = Some(rx.mat_mul(&m.generator_actions()[j])?);
                        queue.push_back(y);
                    }
                    Some(ly) => {
                        if constraints.rank() == unknowns {
                            continue;
                        }
                        let diff = ly.sub(&cand)?;
                        for r in 0..dim {
                            constraints.insert(diff.row(r));
                        }
                    }
                }
            }
        }
        Ok(CocycleSystem {
            unknowns,
            elements,
            expressions: expr.into_iter().map(|e| e.expect("connected")).collect(),
            constraints,
        })
    }

    pub fn cocycle_dim(&self) -> usize {
        self.unknowns - self.constraints.rank()
    }
}

fn check_pairing(g: &MatrixGroup, m: &GModule) -> Result<()> {
    let mg = m.group();
    if mg.p() != g.p() || mg.generators() != g.generators() || mg.order() != g.order() {
        return Err(Error::GroupModuleMismatch);
    }
    Ok(())
}

/// `dim H^1(G, M) = dim Z^1 - (dim M - dim M^G)`.
pub fn h1_dimension(g: &MatrixGroup, m: &GModule) -> Result<usize> {
    let sys = CocycleSystem::build(g, m)?;
    let z1 = sys.cocycle_dim();
    let b1 = m.dim() - m.fixed_space_dim();
    Ok(z1 - b1)
}

/// Independent oracle: counts cocycles and coboundaries as sets of
/// functions `G -> M`.
///
/// When `|M|^|G|` is within [`BRUTE_FORCE_LIMIT`] every function is tested.
/// Otherwise every assignment of values to a minimal generating set is
/// extended along words and tested against the cocycle identity on all pairs,
/// which needs `|M|^(number of generators)` within the limit.
pub fn h1_brute_force(g: &MatrixGroup, m: &GModule) -> Result<usize> {
    check_pairing(g, m)?;
    let f = g.field();
    let p = f.modulus() as u128;
    let dim = m.dim();
    let n = g.order();
    let module_size = p.pow(dim as u32);
    let elements: Vec<Mat2> = g.matrices().copied().collect();
    let rho: Vec<FpMatrix> = elements
        .iter()
        .map(|x| m.act(x).expect("member"))
        .collect();
    let table = MulTable::new(g, &elements);

    let vectors: Vec<Vec<u64>> = (0..module_size as u64).map(|c| digits(c, f.modulus(), dim)).collect();
    let is_cocycle = |fun: &[Vec<u64>]| -> bool {
        (0..n).all(|a| {
            (0..n).all(|b| {
                let lhs = &fun[table.mul[a][b]];
                let gb = rho[a].apply(&fun[b]).expect("dim");
                lhs.iter()
                    .zip(&fun[a])
                    .zip(&gb)
                    .all(|((&l, &x), &y)| l == f.add(x, y))
            })
        })
    };

    let cocycles: usize = match checked_pow(module_size, n) {
        Some(total) if total <= BRUTE_FORCE_LIMIT => {
            let mut count = 0usize;
            for code in 0..total {
                let mut c = code;
                let fun: Vec<Vec<u64>> = (0..n)
                    .map(|_| {
                        let d = (c % module_size) as usize;
                        c /= module_size;
                        vectors[d].clone()
                    })
                    .collect();
                if is_cocycle(&fun) {
                    count += 1;
                }
            }
            count
        }
        _ => {
            let small = g.with_minimal_generators();
            let k = small.generators().len();
            let total = checked_pow(module_size, k)
                .filter(|&t| t <= BRUTE_FORCE_LIMIT)
                .ok_or_else(|| {
                    Error::TooLarge(format!(
                        "{module_size}^{k} generator assignments exceed the brute-force limit"
                    ))
                })?;
            let gen_idx: Vec<usize> = small
                .generators()
                .iter()
                .map(|s| table.index(s))
                .collect();
            let mut count = 0usize;
            for code in 0..total {
                let mut c = code;
                let vals: Vec<&Vec<u64>> = (0..k)
                    .map(|_| {
                        let d = (c % module_size) as usize;
                        c /= module_size;
                        &vectors[d]
                    })
                    .collect();
                if let Some(fun) = extend_from_generators(&table, &rho, &gen_idx, &vals, f) {
                    if is_cocycle(&fun) {
                        count += 1;
                    }
                }
            }
            count
        }
    };

    let mut coboundaries: HashSet<Vec<Vec<u64>>> = HashSet::new();
    for v in &vectors {
        let fun: Vec<Vec<u64>> = rho
            .iter()
            .map(|r| {
                let gv = r.apply(v).expect("dim");
                gv.iter().zip(v).map(|(&a, &b)| f.sub(a, b)).collect()
            })
            .collect();
        coboundaries.insert(fun);
    }
    let ratio = cocycles / coboundaries.len();
    debug_assert_eq!(ratio * coboundaries.len(), cocycles);
    let mut h = 0;
    let mut r = ratio;
    while r > 1 {
        debug_assert_eq!(r as u128 % p, 0);
        r /= p as usize;
        h += 1;
    }
    Ok(h)
}

struct MulTable {
    mul: Vec<Vec<usize>>,
    elements: Vec<Mat2>,
}

impl MulTable {
    fn new(g: &MatrixGroup, elements: &[Mat2]) -> Self {
        let gl = g.gl();
        let mul = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| elements.binary_search(&gl.mul(a, b)).expect("closed"))
                    .collect()
            })
            .collect();
        MulTable {
            mul,
            elements: elements.to_vec(),
        }
    }

    fn index(&self, m: &Mat2) -> usize {
        self.elements.binary_search(m).expect("member")
    }
}

/// Extend generator values to a function on the whole group via
/// `f(x s) = f(x) + x f(s)`, or `None` if two words disagree.
fn extend_from_generators(
    table: &MulTable,
    rho: &[FpMatrix],
    gens: &[usize],
    vals: &[&Vec<u64>],
    f: crate::fp::PrimeField,
) -> Option<Vec<Vec<u64>>> {
    let n = table.elements.len();
    let dim = vals.first().map_or(0, |v| v.len());
    let id = table.index(&Mat2::IDENTITY);
    let mut fun: Vec<Option<Vec<u64>>> = vec![None; n];
    fun[id] = Some(vec![0; dim]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let fx = fun[x].clone().expect("visited");
        for (&s, v) in gens.iter().zip(vals) {
            let y = table.mul[x][s];
            let xv = rho[x].apply(v).expect("dim");
            let cand: Vec<u64> = fx.iter().zip(&xv).map(|(&a, &b)| f.add(a, b)).collect();
            match &fun[y] {
                None => {
                    fun[y] = Some(cand);
                    queue.push_back(y);
                }
                Some(prev) if *prev != cand => return None,
                Some(_) => {}
            }
        }
    }
    fun.into_iter().collect()
}

fn digits(mut c: u64, base: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = c % base;
            c /= base;
            d
        })
        .collect()
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > BRUTE_FORCE_LIMIT {
            return Some(acc);
        }
    }
    Some(acc)
}

/// `V` and `End(V)` share no composition factor and `H^1(G, V) = 0`.
pub fn groupcrit_side1(g: &MatrixGroup) -> bool {
    side1_parts(&Arc::new(g.clone())).0
}

fn side1_parts(g: &Arc<MatrixGroup>) -> (bool, bool, usize) {
    let v = standard_module(g);
    let e = end_module(g);
    let common = has_common_irreducible_factor(&v, &e).expect("same group");
    let h1 = h1_dimension(g, &v).expect("same group");
    (!common && h1 == 0, common, h1)
}

/// `G` is in no S3 copy, and for reducible `V` with sub `chi1` and quotient
/// `chi2`: `chi1` is neither 1 nor `chi2^2`, and `chi2` is neither 1 nor
/// `chi1^2`.
pub fn groupcrit_side2(g: &MatrixGroup) -> bool {
    if is_in_s3_copy(g) {
        return false;
    }
    let g = Arc::new(g.clone());
    match extension_characters(&standard_module(&g)) {
        None => true,
        Some((c1, c2)) => characters_admissible(&c1, &c2),
    }
}

fn characters_admissible(c1: &GModule, c2: &GModule) -> bool {
    let one = trivial_character(c1.group());
    let same = |a: &GModule, b: &GModule| a.character_values() == b.character_values();
    !same(c1, &one)
        && !same(c1, &character_power(c2, 2))
        && !same(c2, &one)
        && !same(c2, &character_power(c1, 2))
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupDiagnostics {
    pub order: usize,
    pub generators: Vec<[u64; 4]>,
    pub side1: bool,
    pub side2: bool,
    pub common_factor: bool,
    pub h1_v: usize,
    pub v_factor_dims: Vec<usize>,
    pub end_factor_dims: Vec<usize>,
    pub in_s3_copy: bool,
    /// Brute-force S3 membership, computed when `|G|` divides 6.
    pub in_s3_copy_oracle: Option<bool>,
    pub flags: ClassificationFlags,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub p: u64,
    pub groups_checked: usize,
    pub violators: Vec<GroupDiagnostics>,
    /// Groups where the fast and brute-force S3 tests disagree.
    pub s3_disagreements: Vec<GroupDiagnostics>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.violators.is_empty() && self.s3_disagreements.is_empty()
    }
}

pub fn diagnose(g: &MatrixGroup, s3_copies: &[MatrixGroup]) -> GroupDiagnostics {
    let arc = Arc::new(g.clone());
    let (side1, common, h1) = side1_parts(&arc);
    let v = standard_module(&arc);
    let e = end_module(&arc);
    let dims = |m: &GModule| -> Vec<usize> {
        composition_factors(m)
            .expect("dim <= 4")
            .iter()
            .map(|x| x.dim())
            .collect()
    };
    GroupDiagnostics {
        order: g.order(),
        generators: g.generators().iter().map(|s| s.entries()).collect(),
        side1,
        side2: groupcrit_side2(g),
        common_factor: common,
        h1_v: h1,
        v_factor_dims: dims(&v),
        end_factor_dims: dims(&e),
        in_s3_copy: is_in_s3_copy(g),
        in_s3_copy_oracle: (6 % g.order() == 0).then(|| is_in_s3_copy_oracle(g, s3_copies)),
        flags: classify_subgroup(g),
    }
}

/// Check `side1 == side2` on every group, all over the same `F_p`.
pub fn groupcrit_equivalence_report(p: u64, groups: &[MatrixGroup]) -> Result<EquivalenceReport> {
    let gl = crate::group::Gl2::new(p)?;
    if let Some(g) = groups.iter().find(|g| g.p() != p) {
        return Err(Error::ModulusMismatch(g.p(), p));
    }
    let copies = canonical_s3_copies(gl);
    let mut violators = Vec::new();
    let mut s3_disagreements = Vec::new();
    for g in groups {
        let d = diagnose(g, &copies);
        if d.in_s3_copy_oracle.is_some_and(|o| o != d.in_s3_copy) {
            s3_disagreements.push(d.clone());
        }
        if d.side1 != d.side2 {
            violators.push(d);
        }
    }
    Ok(EquivalenceReport {
        p,
        groups_checked: groups.len(),
        violators,
        s3_disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Gl2;

    fn arc(g: MatrixGroup) -> Arc<MatrixGroup> {
        Arc::new(g)
    }

    #[test]
    fn unipotent_over_f3() {
        let gl = Gl2::new(3).unwrap();
        let u = arc(MatrixGroup::standard_unipotent(gl));
        let v = standard_module(&u);
        assert_eq!(h1_dimension(&u, &v).unwrap(), 1);
        assert_eq!(h1_brute_force(&u, &v).unwrap(), 1);
    }

    #[test]
    fn coprime_order_vanishes() {
        let gl = Gl2::new(3).unwrap();
        let g = arc(MatrixGroup::generate(gl, &[gl.from_i64(0, 1, 1, 0)], None).unwrap());
        for m in [standard_module(&g), end_module(&g)] {
            assert_eq!(h1_dimension(&g, &m).unwrap(), 0);
            assert_eq!(h1_brute_force(&g, &m).unwrap(), 0);
        }
        let t = arc(MatrixGroup::trivial(gl));
        assert_eq!(h1_brute_force(&t, &standard_module(&t)).unwrap(), 0);
    }

    #[test]
    fn gl2_f3_standard() {
        let gl = Gl2::new(3).unwrap();
        let g = arc(MatrixGroup::full(gl));
        let v = standard_module(&g);
        assert_eq!(h1_dimension(&g, &v).unwrap(), 0);
        assert_eq!(h1_brute_force(&g, &v).unwrap(), 0);
    }

    #[test]
    fn mismatch_detected() {
        let gl = Gl2::new(3).unwrap();
        let g = MatrixGroup::full(gl);
        let u = arc(MatrixGroup::standard_unipotent(gl));
        assert!(matches!(
            h1_dimension(&g, &standard_module(&u)),
            Err(Error::GroupModuleMismatch)
        ));
    }

    #[test]
    fn side_examples() {
        let gl = Gl2::new(5).unwrap();
        assert!(groupcrit_side1(&MatrixGroup::full(gl)));
        assert!(groupcrit_side2(&MatrixGroup::full(gl)));
        let t = MatrixGroup::trivial(gl);
        assert!(!groupcrit_side1(&t));
        assert!(!groupcrit_side2(&t));
        let s3 = &canonical_s3_copies(gl)[0];
        assert!(!groupcrit_side1(s3));
        assert!(!groupcrit_side2(s3));
        let minus = MatrixGroup::generate(gl, &[gl.scalar(4)], None).unwrap();
        assert!(groupcrit_side1(&minus));
        assert!(groupcrit_side2(&minus));
        let b1 = MatrixGroup::generate(gl, &[gl.from_i64(1, 1, 0, 2)], None).unwrap();
        assert!(!groupcrit_side2(&b1));
    }

    #[test]
    fn equivalence_small_primes() {
        use crate::group::{enumerate_subgroups_up_to_conjugacy, EnumerationMode};
        for p in [2, 3] {
            let groups = enumerate_subgroups_up_to_conjugacy(p, EnumerationMode::Exhaustive).unwrap();
            let r = groupcrit_equivalence_report(p, &groups).unwrap();
            assert!(r.is_clean(), "{r:?}");
        }
    }
}
