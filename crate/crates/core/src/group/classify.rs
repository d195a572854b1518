//! Where a subgroup of GL2(F_p) sits: Borel, torus normalizers, SL2,
//! exceptional projective image, and copies of S3.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{Gl2, Mat2, MatrixGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PglImage {
    A4,
    S4,
    A5,
}

/// Membership flags for the classical list of subgroups of GL2(F_p).
/// Small groups usually satisfy several at once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationFlags {
    pub p_divides_order: bool,
    pub in_borel: bool,
    pub contains_sl2: bool,
    pub in_split_normalizer: bool,
    pub in_nonsplit_normalizer: bool,
    pub exceptional_pgl_image: Option<PglImage>,
}

impl ClassificationFlags {
    /// True when at least one case of the classification applies.
    pub fn any(&self) -> bool {
        self.in_borel
            || self.contains_sl2
            || self.in_split_normalizer
            || self.in_nonsplit_normalizer
            || self.exceptional_pgl_image.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorusKind {
    Split,
    Nonsplit,
}

/// Least `(t, n)` in lexicographic order with `x^2 - t x + n` irreducible.
pub fn canonical_nonsplit_polynomial(gl: Gl2) -> (u64, u64) {
    let f = gl.field();
    let p = gl.p();
    for t in 0..p {
        for n in 0..p {
            let has_root = (0..p).any(|x| f.add(f.sub(f.mul(x, x), f.mul(t, x)), n) == 0);
            if !has_root {
                return (t, n);
            }
        }
    }
    unreachable!("an irreducible quadratic exists over every prime field")
}

/// The normalizer of a maximal torus, modelled on a quadratic algebra
/// `A = F_p[alpha]` acting on `V = A`.
///
/// Split: `A = F_p x F_p` in the standard basis, torus = diagonal matrices,
/// `F` = coordinate swap. Nonsplit: `A = F_p[C]` for the companion matrix `C`
/// of the canonical irreducible quadratic, in the basis `(1, alpha)`; `F` is
/// the Frobenius `alpha -> t - alpha`.
#[derive(Clone, Debug)]
pub struct TorusNormalizer {
    gl: Gl2,
    kind: TorusKind,
    alpha: Mat2,
    frobenius: Mat2,
}

impl TorusNormalizer {
    pub fn split(gl: Gl2) -> Self {
        TorusNormalizer {
            gl,
            kind: TorusKind::Split,
            alpha: Mat2::new(1, 0, 0, 0),
            frobenius: Mat2::new(0, 1, 1, 0),
        }
    }

    pub fn nonsplit(gl: Gl2) -> Self {
        let f = gl.field();
        let (t, n) = canonical_nonsplit_polynomial(gl);
        TorusNormalizer {
            gl,
            kind: TorusKind::Nonsplit,
            alpha: Mat2::new(0, f.neg(n), 1, t),
            frobenius: Mat2::new(1, t, 0, f.neg(1)),
        }
    }

    pub fn new(gl: Gl2, kind: TorusKind) -> Self {
        match kind {
            TorusKind::Split => Self::split(gl),
            TorusKind::Nonsplit => Self::nonsplit(gl),
        }
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    pub fn gl(&self) -> Gl2 {
        self.gl
    }

    pub fn frobenius(&self) -> Mat2 {
        self.frobenius
    }

    /// Matrix of multiplication by the algebra element with coordinates `v`.
    pub fn multiplication(&self, v: [u64; 2]) -> Mat2 {
        let f = self.gl.field();
        match self.kind {
            TorusKind::Split => Mat2::new(v[0], 0, 0, v[1]),
            TorusKind::Nonsplit => {
                let [_, b, _, d] = self.alpha.entries();
                // v0 I + v1 C with C = [[0, b], [1, d]]
                Mat2::new(v[0], f.mul(v[1], b), v[1], f.add(v[0], f.mul(v[1], d)))
            }
        }
    }

    pub fn in_torus(&self, m: &Mat2) -> bool {
        if self.gl.det(m) == 0 {
            return false;
        }
        self.gl.mul(m, &self.alpha) == self.gl.mul(&self.alpha, m)
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.in_torus(m) || self.in_torus(&self.gl.mul(m, &self.frobenius))
    }

    /// Split `m = lambda` or `m = lambda F` with `lambda` in the torus.
    /// Returns `(lambda, uses_frobenius)`; `None` outside the normalizer.
    pub fn decompose(&self, m: &Mat2) -> Option<(Mat2, bool)> {
        if self.in_torus(m) {
            Some((*m, false))
        } else {
            let lambda = self.gl.mul(m, &self.frobenius);
            self.in_torus(&lambda).then_some((lambda, true))
        }
    }

    /// All torus elements.
    pub fn torus_elements(&self) -> Vec<Mat2> {
        let p = self.gl.p();
        let mut out = Vec::new();
        for a in 0..p {
            for b in 0..p {
                let m = self.multiplication([a, b]);
                if self.gl.det(&m) != 0 {
                    out.push(m);
                }
            }
        }
        out
    }

    /// The full normalizer as a group.
    pub fn group(&self) -> MatrixGroup {
        let mut set = self.torus_elements();
        let withf: Vec<Mat2> = set.iter().map(|m| self.gl.mul(m, &self.frobenius)).collect();
        set.extend(withf);
        MatrixGroup::from_element_set(self.gl, &set).expect("normalizer is closed")
    }

    /// Whether some conjugate of `g` lies in this normalizer.
    pub fn contains_conjugate_of(&self, g: &MatrixGroup) -> bool {
        let gl = self.gl;
        gl.elements().iter().any(|x| {
            let xi = gl.inv(x).expect("invertible");
            g.generators()
                .iter()
                .all(|s| self.contains(&gl.mul(&gl.mul(&xi, s), x)))
        })
    }
}

fn common_stable_line(g: &MatrixGroup) -> bool {
    let gl = g.gl();
    gl.lines()
        .into_iter()
        .any(|l| g.generators().iter().all(|s| gl.stabilizes_line(s, l)))
}

fn permutes_line_pair(g: &MatrixGroup) -> bool {
    let gl = g.gl();
    let lines = gl.lines();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ok = g.generators().iter().all(|s| {
                let a = gl.line_index(gl.apply(s, lines[i]));
                let b = gl.line_index(gl.apply(s, lines[j]));
                (a == i && b == j) || (a == j && b == i)
            });
            if ok {
                return true;
            }
        }
    }
    false
}

/// Order of `m` in PGL2: the least `k` with `m^k` scalar.
fn projective_order(gl: Gl2, m: &Mat2) -> usize {
    let mut y = *m;
    let mut k = 1;
    while !y.is_scalar() {
        y = gl.mul(&y, m);
        k += 1;
    }
    k
}

fn pgl_image(g: &MatrixGroup) -> Option<PglImage> {
    let z = g.elements().iter().filter(|e| e.matrix.is_scalar()).count();
    let image_order = g.order() / z;
    if !matches!(image_order, 12 | 24 | 60) {
        return None;
    }
    // each coset of the scalars contributes z identical projective orders
    let mut census = [0usize; 61];
    for m in g.matrices() {
        let k = projective_order(g.gl(), m);
        if k > 60 {
            return None;
        }
        census[k] += 1;
    }
    let counts: Vec<(usize, usize)> = census
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k, c / z))
        .collect();
    match image_order {
        12 if counts == [(1, 1), (2, 3), (3, 8)] => Some(PglImage::A4),
        24 if counts == [(1, 1), (2, 9), (3, 8), (4, 6)] => Some(PglImage::S4),
        60 if counts == [(1, 1), (2, 15), (3, 20), (5, 24)] => Some(PglImage::A5),
        _ => None,
    }
}

pub fn classify_subgroup(g: &MatrixGroup) -> ClassificationFlags {
    let gl = g.gl();
    let p = gl.p();
    let e12 = Mat2::new(1, 1, 0, 1);
    let e21 = Mat2::new(1, 0, 1, 1);
    ClassificationFlags {
        p_divides_order: g.order().is_multiple_of(p as usize),
        in_borel: common_stable_line(g),
        contains_sl2: g.contains(&e12) && g.contains(&e21),
        in_split_normalizer: permutes_line_pair(g),
        in_nonsplit_normalizer: TorusNormalizer::nonsplit(gl).contains_conjugate_of(g),
        exceptional_pgl_image: pgl_image(g),
    }
}

/// Fast test for "some conjugate of `g` lies in a subgroup isomorphic to S3".
///
/// S3 has element orders 1, 2, 3 and no central involution; in its faithful
/// 2-dimensional representation a 3-cycle has determinant 1 (for p != 3) and a
/// transposition has eigenvalues 1 and -1.
pub fn is_in_s3_copy_fast(g: &MatrixGroup) -> bool {
    let gl = g.gl();
    let p = gl.p();
    if p == 2 {
        // GL2(F2) is itself S3
        return true;
    }
    let nontrivial = g.matrices().find(|m| **m != Mat2::IDENTITY);
    match (g.order(), nontrivial) {
        (1, _) => true,
        (2, Some(s)) => gl.det(s) == p - 1,
        (3, Some(r)) => p == 3 || gl.det(r) == 1,
        (6, _) => !g.is_abelian(),
        _ => false,
    }
}

/// Representatives of the GL2(F_p)-conjugacy classes of subgroups isomorphic
/// to S3, found by exhaustive search over pairs (3-element, inverting
/// involution).
pub fn canonical_s3_copies(gl: Gl2) -> Vec<MatrixGroup> {
    let all = gl.elements();
    let threes: Vec<Mat2> = all.iter().filter(|m| gl.element_order(m) == 3).copied().collect();
    let twos: Vec<Mat2> = all.iter().filter(|m| gl.element_order(m) == 2).copied().collect();
    let key = |set: &[Mat2]| -> Vec<u32> {
        let mut k: Vec<u32> = set.iter().map(|m| gl.index(m) as u32).collect();
        k.sort_unstable();
        k
    };
    let mut subgroups: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut sets: Vec<(Vec<u32>, [Mat2; 2])> = Vec::new();
    for r in &threes {
        let r2 = gl.mul(r, r);
        for s in &twos {
            if gl.mul(&gl.mul(s, r), s) != r2 {
                continue;
            }
            let set = [
                Mat2::IDENTITY,
                *r,
                r2,
                *s,
                gl.mul(s, r),
                gl.mul(s, &r2),
            ];
            let k = key(&set);
            if subgroups.insert(k.clone()) {
                sets.push((k, [*r, *s]));
            }
        }
    }
    sets.sort();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut reps = Vec::new();
    for (k, [r, s]) in sets {
        if seen.contains(&k) {
            continue;
        }
        for x in &all {
            let rc = gl.conj(x, &r);
            let sc = gl.conj(x, &s);
            let rc2 = gl.mul(&rc, &rc);
            let set = [Mat2::IDENTITY, rc, rc2, sc, gl.mul(&sc, &rc), gl.mul(&sc, &rc2)];
            seen.insert(key(&set));
        }
        reps.push(MatrixGroup::generate(gl, &[r, s], Some(6)).expect("S3 has order 6"));
    }
    reps
}

/// Brute-force version of [`is_in_s3_copy_fast`]: search all conjugators for
/// one moving `g` into a canonical S3 copy.
pub fn is_in_s3_copy_oracle(g: &MatrixGroup, copies: &[MatrixGroup]) -> bool {
    if 6 % g.order() != 0 {
        return false;
    }
    let gl = g.gl();
    let all = gl.elements();
    copies.iter().any(|c| {
        all.iter()
            .any(|x| g.generators().iter().all(|s| c.contains(&gl.conj(x, s))))
    })
}

/// Whether `g` lies, up to conjugacy, in a subgroup of GL2(F_p) isomorphic to S3.
pub fn is_in_s3_copy(g: &MatrixGroup) -> bool {
    is_in_s3_copy_fast(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(p: u64) -> Gl2 {
        Gl2::new(p).unwrap()
    }

    #[test]
    fn borel_and_full_group() {
        let b = MatrixGroup::standard_borel(gl(5));
        let fl = classify_subgroup(&b);
        assert!(fl.in_borel);
        assert!(!fl.contains_sl2);
        let g = MatrixGroup::full(gl(5));
        let fl = classify_subgroup(&g);
        assert!(fl.contains_sl2 && fl.p_divides_order);
        assert!(!fl.in_borel);
    }

    #[test]
    fn diagonal_torus_overlaps() {
        let t = MatrixGroup::diagonal_torus(gl(5));
        let fl = classify_subgroup(&t);
        assert!(fl.in_borel && fl.in_split_normalizer);
        assert!(!fl.p_divides_order);
    }

    #[test]
    fn normalizer_orders() {
        for p in [2u64, 3, 5, 7, 11] {
            let g = gl(p);
            let ps = p as usize;
            assert_eq!(TorusNormalizer::split(g).group().order(), 2 * (ps - 1) * (ps - 1));
            assert_eq!(TorusNormalizer::nonsplit(g).group().order(), 2 * (ps * ps - 1));
        }
        assert_eq!(canonical_nonsplit_polynomial(gl(2)), (1, 1));
        assert_eq!(canonical_nonsplit_polynomial(gl(3)), (0, 1));
        assert_eq!(canonical_nonsplit_polynomial(gl(5)), (0, 2));
    }

    #[test]
    fn exceptional_images() {
        // SL2(F5) maps onto PSL2(F5) = A5; GL2(F3) onto PGL2(F3) = S4
        assert_eq!(
            classify_subgroup(&MatrixGroup::special_linear(gl(5))).exceptional_pgl_image,
            Some(PglImage::A5)
        );
        assert_eq!(
            classify_subgroup(&MatrixGroup::full(gl(3))).exceptional_pgl_image,
            Some(PglImage::S4)
        );
        assert_eq!(
            classify_subgroup(&MatrixGroup::special_linear(gl(3))).exceptional_pgl_image,
            Some(PglImage::A4)
        );
    }

    #[test]
    fn s3_examples() {
        let g5 = gl(5);
        let copies = canonical_s3_copies(g5);
        assert_eq!(copies.len(), 1);
        let triv = MatrixGroup::trivial(g5);
        assert!(is_in_s3_copy(&triv));
        let minus = MatrixGroup::generate(g5, &[g5.scalar(4)], None).unwrap();
        assert!(!is_in_s3_copy(&minus));
        assert!(!is_in_s3_copy_oracle(&minus, &copies));
        let g2 = MatrixGroup::full(gl(2));
        assert!(is_in_s3_copy(&g2));
        assert!(is_in_s3_copy_oracle(&g2, &canonical_s3_copies(gl(2))));
        assert_eq!(canonical_s3_copies(gl(3)).len(), 2);
    }
}
