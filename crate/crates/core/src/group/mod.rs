//! Finite subgroups of GL2(F_p).
//!
//! Groups are stored with their full element list. Every element carries a
//! witness word in the generators, so homomorphisms and cocycles can be
//! evaluated on arbitrary elements without a presentation.

mod classify;
mod enumerate;

pub use classify::{
    canonical_nonsplit_polynomial, canonical_s3_copies, classify_subgroup, is_in_s3_copy,
    is_in_s3_copy_fast, is_in_s3_copy_oracle, ClassificationFlags, PglImage, TorusKind,
    TorusNormalizer,
};
pub use enumerate::{enumerate_subgroups_up_to_conjugacy, EnumerationMode};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::fp::PrimeField;
use crate::matrix::FpMatrix;

/// A 2x2 matrix `[[a, b], [c, d]]` over F_p with entries in `[0, p)`.
/// Ordering is lexicographic on `(a, b, c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [u32; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([1, 0, 0, 1]);

    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Mat2([a as u32, b as u32, c as u32, d as u32])
    }

    #[inline]
    pub fn entries(&self) -> [u64; 4] {
        let [a, b, c, d] = self.0;
        [a as u64, b as u64, c as u64, d as u64]
    }

    pub fn is_scalar(&self) -> bool {
        let [a, b, c, d] = self.0;
        b == 0 && c == 0 && a == d
    }

    pub fn to_fp_matrix(&self, field: PrimeField) -> FpMatrix {
        FpMatrix::from_rows(field, 2, 2, &self.entries()).expect("2x2")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// GL2(F_p) as an ambient group: arithmetic on [`Mat2`] and enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gl2 {
    field: PrimeField,
}

impl Gl2 {
    pub fn new(p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if p > 251 {
            // elements are indexed by p^4 and stored as u32 entries
            return Err(Error::ModulusTooLarge(p));
        }
        Ok(Gl2 { field })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    /// `(p^2 - 1)(p^2 - p)`.
    pub fn order(&self) -> usize {
        let p = self.p() as usize;
        (p * p - 1) * (p * p - p)
    }

    pub fn from_i64(&self, a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        let f = self.field;
        Mat2::new(f.from_i64(a), f.from_i64(b), f.from_i64(c), f.from_i64(d))
    }

    pub fn scalar(&self, c: u64) -> Mat2 {
        let c = self.field.reduce(c);
        Mat2::new(c, 0, 0, c)
    }

    #[inline]
    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let f = self.field;
        let [a, b, c, d] = x.entries();
        let [e, g, h, k] = y.entries();
        Mat2::new(
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        )
    }

    #[inline]
    pub fn det(&self, x: &Mat2) -> u64 {
        let f = self.field;
        let [a, b, c, d] = x.entries();
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    #[inline]
    pub fn trace(&self, x: &Mat2) -> u64 {
        let [a, _, _, d] = x.entries();
        self.field.add(a, d)
    }

    pub fn inv(&self, x: &Mat2) -> Option<Mat2> {
        let f = self.field;
        let di = f.inv(self.det(x))?;
        let [a, b, c, d] = x.entries();
        Some(Mat2::new(
            f.mul(d, di),
            f.mul(f.neg(b), di),
            f.mul(f.neg(c), di),
            f.mul(a, di),
        ))
    }

    /// `x y x^-1`.
    pub fn conj(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let xi = self.inv(x).expect("invertible conjugator");
        self.mul(&self.mul(x, y), &xi)
    }

    pub fn pow(&self, x: &Mat2, mut e: u64) -> Mat2 {
        let mut acc = Mat2::IDENTITY;
        let mut b = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: &Mat2) -> usize {
        let mut y = *x;
        let mut k = 1;
        while y != Mat2::IDENTITY {
            y = self.mul(&y, x);
            k += 1;
        }
        k
    }

    /// Dense index in `[0, p^4)`.
    #[inline]
    pub fn index(&self, x: &Mat2) -> usize {
        let p = self.p() as usize;
        let [a, b, c, d] = x.0;
        ((a as usize * p + b as usize) * p + c as usize) * p + d as usize
    }

    pub fn index_bound(&self) -> usize {
        (self.p() as usize).pow(4)
    }

    /// Every element of GL2(F_p) in increasing order.
    pub fn elements(&self) -> Vec<Mat2> {
        let p = self.p();
        let mut out = Vec::with_capacity(self.order());
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let m = Mat2::new(a, b, c, d);
                        if self.det(&m) != 0 {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    /// Normalized representatives of the `p + 1` lines of F_p^2:
    /// `(1, t)` for `t` in `[0, p)` followed by `(0, 1)`.
    pub fn lines(&self) -> Vec<[u64; 2]> {
        let mut v: Vec<[u64; 2]> = (0..self.p()).map(|t| [1, t]).collect();
        v.push([0, 1]);
        v
    }

    pub fn apply(&self, x: &Mat2, v: [u64; 2]) -> [u64; 2] {
        let f = self.field;
        let [a, b, c, d] = x.entries();
        [
            f.add(f.mul(a, v[0]), f.mul(b, v[1])),
            f.add(f.mul(c, v[0]), f.mul(d, v[1])),
        ]
    }

    /// Index into [`Gl2::lines`] of the line through a nonzero vector.
    pub fn line_index(&self, v: [u64; 2]) -> usize {
        let f = self.field;
        if v[0] == 0 {
            self.p() as usize
        } else {
            let t = f.mul(v[1], f.inv(v[0]).expect("nonzero"));
            t as usize
        }
    }

    pub fn stabilizes_line(&self, x: &Mat2, line: [u64; 2]) -> bool {
        self.line_index(self.apply(x, line)) == self.line_index(line)
    }
}

/// One letter of a witness word: generator index, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub matrix: Mat2,
    pub word: Vec<Letter>,
}

/// A finite subgroup of GL2(F_p) with its full element list.
///
/// `elements` is sorted by matrix; `generators[i]` is the matrix of letter `i`.
#[derive(Clone)]
pub struct MatrixGroup {
    gl: Gl2,
    generators: Vec<Mat2>,
    elements: Vec<GroupElement>,
    position: HashMap<Mat2, usize>,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGroup(p={}, order={}, gens=[", self.p(), self.order())?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

impl PartialEq for MatrixGroup {
    fn eq(&self, other: &Self) -> bool {
        self.gl == other.gl && self.generators == other.generators && self.same_elements(other)
    }
}

/// Closure of `gens` inside GL2(F_p). `cap` defaults to `|GL2(F_p)|`.
pub fn generate_group(p: u64, gens: &[Mat2], cap: Option<usize>) -> Result<MatrixGroup> {
    let gl = Gl2::new(p)?;
    MatrixGroup::generate(gl, gens, cap)
}

impl MatrixGroup {
    pub fn generate(gl: Gl2, gens: &[Mat2], cap: Option<usize>) -> Result<Self> {
        let cap = cap.unwrap_or_else(|| gl.order());
        let p = gl.p() as u32;
        let mut reduced = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            let g = Mat2(g.0.map(|x| x % p));
            if gl.det(&g) == 0 {
                return Err(Error::SingularGenerator(i));
            }
            reduced.push(g);
        }
        // breadth-first closure under right multiplication: words are shortest
        let mut position: HashMap<Mat2, usize> = HashMap::new();
        let mut found: Vec<GroupElement> = vec![GroupElement {
            matrix: Mat2::IDENTITY,
            word: Vec::new(),
        }];
        position.insert(Mat2::IDENTITY, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in reduced.iter().enumerate() {
                let m = gl.mul(&found[i].matrix, g);
                if position.contains_key(&m) {
                    continue;
                }
                if found.len() == cap {
                    return Err(Error::CapExceeded(cap));
                }
                let mut word = found[i].word.clone();
                word.push(Letter {
                    generator: gi,
                    inverse: false,
                });
                position.insert(m, found.len());
                queue.push_back(found.len());
                found.push(GroupElement { matrix: m, word });
            }
        }
        found.sort_by_key(|a| a.matrix);
        let position = found
            .iter()
            .enumerate()
            .map(|(i, e)| (e.matrix, i))
            .collect();
        Ok(MatrixGroup {
            gl,
            generators: reduced,
            elements: found,
            position,
        })
    }

    /// The trivial subgroup.
    pub fn trivial(gl: Gl2) -> Self {
        Self::generate(gl, &[], None).expect("trivial group")
    }

    /// All of GL2(F_p), generated by the two elementary unipotents and a
    /// diagonal matrix with a primitive root.
    pub fn full(gl: Gl2) -> Self {
        let f = gl.field();
        let p = gl.p();
        let prim = (1..p).find(|&a| f.unit_order(a) == Some(p - 1)).expect("primitive root");
        let gens = [
            Mat2::new(1, 1 % p, 0, 1),
            Mat2::new(1, 0, 1 % p, 1),
            Mat2::new(prim, 0, 0, 1),
        ];
        let g = Self::generate(gl, &gens, None).expect("GL2 closure");
        debug_assert_eq!(g.order(), gl.order());
        g
    }

    /// SL2(F_p).
    pub fn special_linear(gl: Gl2) -> Self {
        let p = gl.p();
        Self::generate(gl, &[Mat2::new(1, 1 % p, 0, 1), Mat2::new(1, 0, 1 % p, 1)], None)
            .expect("SL2 closure")
    }

    /// Upper triangular matrices.
    pub fn standard_borel(gl: Gl2) -> Self {
        let f = gl.field();
        let p = gl.p();
        let prim = (1..p).find(|&a| f.unit_order(a) == Some(p - 1)).expect("primitive root");
        Self::generate(
            gl,
            &[Mat2::new(1, 1 % p, 0, 1), Mat2::new(prim, 0, 0, 1), Mat2::new(1, 0, 0, prim)],
            None,
        )
        .expect("Borel closure")
    }

    /// Diagonal matrices.
    pub fn diagonal_torus(gl: Gl2) -> Self {
        let f = gl.field();
        let p = gl.p();
        let prim = (1..p).find(|&a| f.unit_order(a) == Some(p - 1)).expect("primitive root");
        Self::generate(gl, &[Mat2::new(prim, 0, 0, 1), Mat2::new(1, 0, 0, prim)], None)
            .expect("torus closure")
    }

    /// Upper unitriangular matrices.
    pub fn standard_unipotent(gl: Gl2) -> Self {
        Self::generate(gl, &[Mat2::new(1, 1 % gl.p(), 0, 1)], None).expect("unipotent closure")
    }

    /// The subgroup whose elements are exactly `set`, which must be closed.
    /// Generators are picked greedily in sorted order.
    pub fn from_element_set(gl: Gl2, set: &[Mat2]) -> Result<Self> {
        let mut sorted = set.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut gens: Vec<Mat2> = Vec::new();
        let mut current = Self::trivial(gl);
        for m in &sorted {
            if !current.contains(m) {
                gens.push(*m);
                current = Self::generate(gl, &gens, Some(sorted.len().max(1)))?;
            }
        }
        if current.order() != sorted.len() {
            return Err(Error::CapExceeded(sorted.len()));
        }
        Ok(current)
    }

    pub fn gl(&self) -> Gl2 {
        self.gl
    }

    pub fn p(&self) -> u64 {
        self.gl.p()
    }

    pub fn field(&self) -> PrimeField {
        self.gl.field()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn matrices(&self) -> impl Iterator<Item = &Mat2> + '_ {
        self.elements.iter().map(|e| &e.matrix)
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.position.contains_key(m)
    }

    pub fn position(&self, m: &Mat2) -> Option<usize> {
        self.position.get(m).copied()
    }

    pub fn element(&self, m: &Mat2) -> Option<&GroupElement> {
        self.position(m).map(|i| &self.elements[i])
    }

    /// Sorted dense indices of the elements: the canonical key of the subset.
    pub fn element_key(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.matrices().map(|m| self.gl.index(m) as u32).collect();
        v.sort_unstable();
        v
    }

    pub fn same_elements(&self, other: &Self) -> bool {
        self.order() == other.order() && self.matrices().all(|m| other.contains(m))
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// Evaluate a word in this group's generators.
    pub fn evaluate_word(&self, word: &[Letter]) -> Mat2 {
        word.iter().fold(Mat2::IDENTITY, |acc, l| {
            let g = self.generators[l.generator];
            let g = if l.inverse {
                self.gl.inv(&g).expect("generator is invertible")
            } else {
                g
            };
            self.gl.mul(&acc, &g)
        })
    }

    /// `x G x^-1`, with conjugated generators.
    pub fn conjugate_by(&self, x: &Mat2) -> Self {
        let gens: Vec<Mat2> = self.generators.iter().map(|g| self.gl.conj(x, g)).collect();
        Self::generate(self.gl, &gens, Some(self.order())).expect("conjugate has the same order")
    }

    /// Regenerate from a smallest generating set (searching singletons, then
    /// pairs, then falling back to the greedy choice).
    pub fn with_minimal_generators(&self) -> Self {
        let all: Vec<Mat2> = self.matrices().copied().collect();
        if self.order() == 1 {
            return Self::trivial(self.gl);
        }
        let cap = Some(self.order());
        for x in &all {
            if self.gl.element_order(x) == self.order() {
                return Self::generate(self.gl, &[*x], cap).expect("subgroup");
            }
        }
        for (i, x) in all.iter().enumerate() {
            for y in &all[i + 1..] {
                let g = Self::generate(self.gl, &[*x, *y], cap).expect("subgroup");
                if g.order() == self.order() {
                    return g;
                }
            }
        }
        Self::from_element_set(self.gl, &all).expect("closed set")
    }

    /// `G` intersected with the scalar matrices.
    pub fn center_intersection(&self) -> Self {
        let scalars: Vec<Mat2> = self.matrices().filter(|m| m.is_scalar()).copied().collect();
        Self::from_element_set(self.gl, &scalars).expect("scalars form a subgroup")
    }

    /// A Sylow p-subgroup, grown one p-element at a time.
    pub fn p_sylow(&self) -> Self {
        let p = self.p() as usize;
        let mut target = 1;
        let mut n = self.order();
        while n.is_multiple_of(p) {
            target *= p;
            n /= p;
        }
        let mut sylow = Self::trivial(self.gl);
        while sylow.order() < target {
            let mut grown = false;
            for x in self.matrices() {
                if sylow.contains(x) || !is_power_of(self.gl.element_order(x), p) {
                    continue;
                }
                let mut gens = sylow.generators.clone();
                gens.push(*x);
                let cand = Self::generate(self.gl, &gens, Some(self.order())).expect("subgroup");
                if is_power_of(cand.order(), p) {
                    sylow = cand;
                    grown = true;
                    break;
                }
            }
            assert!(grown, "a non-maximal p-subgroup always extends");
        }
        sylow
    }

    /// `{x in G : x H x^-1 = H}`.
    pub fn normalizer_in(&self, h: &Self) -> Self {
        let members: Vec<Mat2> = self
            .matrices()
            .filter(|x| h.generators.iter().all(|s| h.contains(&self.gl.conj(x, s))))
            .copied()
            .collect();
        Self::from_element_set(self.gl, &members).expect("normalizer is a subgroup")
    }

    pub fn is_abelian(&self) -> bool {
        let gl = self.gl;
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| gl.mul(a, b) == gl.mul(b, a))
        })
    }

    /// Multiset of element orders, as a sorted list.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.matrices().map(|m| self.gl.element_order(m)).collect();
        v.sort_unstable();
        v
    }

    /// Elements as a hash set, for bulk membership checks.
    pub fn element_set(&self) -> HashSet<Mat2> {
        self.matrices().copied().collect()
    }
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unipotent_cyclic_of_order_three() {
        let g = generate_group(3, &[Mat2::new(1, 1, 0, 1)], None).unwrap();
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn gl2_f2_has_order_six() {
        let g = generate_group(2, &[Mat2::new(0, 1, 1, 0), Mat2::new(1, 1, 0, 1)], None).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn gl2_f3_has_order_48() {
        let gens = [Mat2::new(1, 1, 0, 1), Mat2::new(1, 0, 1, 1), Mat2::new(2, 0, 0, 1)];
        let g = generate_group(3, &gens, None).unwrap();
        let p = 3usize;
        assert_eq!(g.order(), (p * p - 1) * (p * p - p));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            generate_group(5, &[Mat2::new(1, 2, 2, 4)], None),
            Err(Error::SingularGenerator(0))
        ));
        assert!(matches!(
            generate_group(5, &[Mat2::new(1, 1, 0, 1)], Some(3)),
            Err(Error::CapExceeded(3))
        ));
        assert!(generate_group(4, &[], None).is_err());
    }

    #[test]
    fn witness_words_evaluate_back() {
        let gl = Gl2::new(5).unwrap();
        let g = MatrixGroup::full(gl);
        assert_eq!(g.order(), 480);
        for e in g.elements() {
            assert_eq!(g.evaluate_word(&e.word), e.matrix);
        }
        let w = [
            Letter { generator: 0, inverse: true },
            Letter { generator: 2, inverse: false },
        ];
        let m = g.evaluate_word(&w);
        let expect = gl.mul(&gl.inv(&g.generators()[0]).unwrap(), &g.generators()[2]);
        assert_eq!(m, expect);
    }

    #[test]
    fn center_examples() {
        let gl3 = Gl2::new(3).unwrap();
        let z = MatrixGroup::full(gl3).center_intersection();
        assert_eq!(z.order(), 2);
        assert!(z.contains(&gl3.scalar(2)));
        let gl5 = Gl2::new(5).unwrap();
        let z = MatrixGroup::special_linear(gl5).center_intersection();
        assert_eq!(z.order(), 2);
        assert!(z.contains(&gl5.scalar(4)));
        assert_eq!(MatrixGroup::standard_unipotent(gl5).center_intersection().order(), 1);
    }

    #[test]
    fn sylow_and_normalizers() {
        let gl3 = Gl2::new(3).unwrap();
        let g = MatrixGroup::full(gl3);
        assert_eq!(g.p_sylow().order(), 3);
        for p in [2, 3, 5, 7] {
            let gl = Gl2::new(p).unwrap();
            let full = MatrixGroup::full(gl);
            let u = MatrixGroup::standard_unipotent(gl);
            let n = full.normalizer_in(&u);
            assert!(n.same_elements(&MatrixGroup::standard_borel(gl)), "p = {p}");
            // normal subgroup: normalizer is everything
            let sl = MatrixGroup::special_linear(gl);
            assert!(full.normalizer_in(&sl).same_elements(&full));
        }
    }

    #[test]
    fn minimal_generators_preserve_group() {
        let gl = Gl2::new(3).unwrap();
        let g = MatrixGroup::full(gl);
        let m = g.with_minimal_generators();
        assert!(m.same_elements(&g));
        assert_eq!(m.generators().len(), 2);
    }
}
