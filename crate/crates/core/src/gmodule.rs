//! Finite-dimensional F_p-representations of a [`MatrixGroup`].
//!
//! A module stores one action matrix per generator of its group; the action of
//! any other element is evaluated along that element's witness word.
//! Characters are simply 1-dimensional modules.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fp::PrimeField;
use crate::group::{Mat2, MatrixGroup, TorusKind, TorusNormalizer};
use crate::matrix::{FpMatrix, RowSpace};

/// Largest module dimension handled by the factor machinery.
pub const MAX_FACTOR_DIM: usize = 4;

#[derive(Clone)]
pub struct GModule {
    group: Arc<MatrixGroup>,
    dim: usize,
    action: Vec<FpMatrix>,
    label: String,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GModule({}, dim {}, [", self.label, self.dim)?;
        for (i, a) in self.action.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "])")
    }
}

/// Order in which candidate lines are spun when searching for submodules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LineOrder {
    #[default]
    Forward,
    Reverse,
}

impl GModule {
    /// A module from explicit generator actions. Each matrix must be
    /// `dim x dim` and invertible.
    pub fn new(
        group: Arc<MatrixGroup>,
        action: Vec<FpMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if action.len() != group.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for {} generators",
                action.len(),
                group.generators().len()
            )));
        }
        let field = group.field();
        let dim = match action.first() {
            Some(a) => a.rows(),
            None => 0,
        };
        for a in &action {
            if a.field() != field {
                return Err(Error::ModulusMismatch(a.field().modulus(), field.modulus()));
            }
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch("action matrices differ in size".into()));
            }
            if !a.is_invertible() {
                return Err(Error::DimensionMismatch("singular action matrix".into()));
            }
        }
        Ok(GModule {
            group,
            dim,
            action,
            label: label.into(),
        })
    }

    /// Like [`GModule::new`] but for a group with no generators, where the
    /// dimension cannot be read off the action list.
    pub fn with_dim(
        group: Arc<MatrixGroup>,
        dim: usize,
        action: Vec<FpMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut m = Self::new(group, action, label)?;
        if m.action.is_empty() {
            m.dim = dim;
        } else if m.dim != dim {
            return Err(Error::DimensionMismatch("declared dimension".into()));
        }
        Ok(m)
    }

    pub fn group(&self) -> &Arc<MatrixGroup> {
        &self.group
    }

    pub fn field(&self) -> PrimeField {
        self.group.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generator_actions(&self) -> &[FpMatrix] {
        &self.action
    }

    pub fn same_group(&self, other: &GModule) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            || (self.group.p() == other.group.p()
                && self.group.generators() == other.group.generators())
    }

    /// Action of an arbitrary group element, via its witness word.
    pub fn act(&self, m: &Mat2) -> Option<FpMatrix> {
        let e = self.group.element(m)?;
        let mut acc = FpMatrix::identity(self.field(), self.dim);
        for l in &e.word {
            let a = &self.action[l.generator];
            let a = if l.inverse {
                a.inverse().expect("invertible action")
            } else {
                a.clone()
            };
            acc = acc.mat_mul(&a).expect("square");
        }
        Some(acc)
    }

    /// Check `act(gh) = act(g) act(h)` on `samples` random pairs (or all
    /// pairs when the group is small).
    pub fn respects_relations(&self, samples: usize, seed: u64) -> bool {
        let els: Vec<Mat2> = self.group.matrices().copied().collect();
        let gl = self.group.gl();
        let check = |g: &Mat2, h: &Mat2| {
            let gh = gl.mul(g, h);
            let lhs = self.act(&gh).expect("closed");
            let rhs = self
                .act(g)
                .expect("member")
                .mat_mul(&self.act(h).expect("member"))
                .expect("square");
            lhs == rhs
        };
        if els.len() * els.len() <= samples {
            return els.iter().all(|g| els.iter().all(|h| check(g, h)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| {
            let g = els[rng.gen_range(0..els.len())];
            let h = els[rng.gen_range(0..els.len())];
            check(&g, &h)
        })
    }

    /// Vectors fixed by every generator.
    pub fn fixed_space_dim(&self) -> usize {
        let f = self.field();
        let n = self.dim;
        let mut stacked = FpMatrix::zero(f, n * self.action.len(), n);
        for (gi, a) in self.action.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    let v = if r == c { f.sub(a.get(r, c), 1) } else { a.get(r, c) };
                    stacked.set(gi * n + r, c, v);
                }
            }
        }
        n - stacked.rank()
    }

    /// Values of a character on the generators. Panics unless `dim == 1`.
    pub fn character_values(&self) -> Vec<u64> {
        assert_eq!(self.dim, 1, "not a character");
        self.action.iter().map(|a| a.get(0, 0)).collect()
    }

    /// Smallest submodule containing `v`, as an echelon basis.
    pub fn spin(&self, v: &[u64]) -> RowSpace {
        let mut space = RowSpace::new(self.field(), self.dim);
        let mut queue = vec![v.to_vec()];
        space.insert(v);
        while let Some(w) = queue.pop() {
            for a in &self.action {
                let img = a.apply(&w).expect("dimension");
                if space.insert(&img) {
                    queue.push(img);
                }
            }
        }
        space
    }

    /// A proper nonzero submodule, if any, found by spinning every line.
    pub fn find_proper_submodule(&self, order: LineOrder) -> Option<RowSpace> {
        if self.dim <= 1 {
            return None;
        }
        let lines = projective_points(self.field(), self.dim);
        let pick = |v: &Vec<u64>| {
            let s = self.spin(v);
            (s.rank() < self.dim).then_some(s)
        };
        match order {
            LineOrder::Forward => lines.iter().find_map(pick),
            LineOrder::Reverse => lines.iter().rev().find_map(pick),
        }
    }

    /// Submodule and quotient module for an invariant subspace.
    pub fn split_along(&self, sub: &RowSpace) -> (GModule, GModule) {
        let f = self.field();
        let n = self.dim;
        let k = sub.rank();
        // complete the subspace basis to a basis of F_p^n with unit vectors
        let mut full = sub.clone();
        let mut basis = sub.basis();
        for i in 0..n {
            let mut e = vec![0u64; n];
            e[i] = 1;
            if full.insert(&e) {
                basis.push(e);
            }
        }
        let mut change = FpMatrix::zero(f, n, n);
        for (c, v) in basis.iter().enumerate() {
            for (r, &x) in v.iter().enumerate() {
                change.set(r, c, x);
            }
        }
        let change_inv = change.inverse().expect("basis");
        let mut sub_act = Vec::new();
        let mut quo_act = Vec::new();
        for a in &self.action {
            let b = change_inv
                .mat_mul(&a.mat_mul(&change).expect("square"))
                .expect("square");
            let mut s = FpMatrix::zero(f, k, k);
            for r in 0..k {
                for c in 0..k {
                    s.set(r, c, b.get(r, c));
                }
            }
            let mut q = FpMatrix::zero(f, n - k, n - k);
            for r in k..n {
                for c in k..n {
                    q.set(r - k, c - k, b.get(r, c));
                }
            }
            sub_act.push(s);
            quo_act.push(q);
        }
        let sub_m = GModule::with_dim(self.group.clone(), k, sub_act, format!("{}|sub", self.label))
            .expect("invariant subspace");
        let quo_m =
            GModule::with_dim(self.group.clone(), n - k, quo_act, format!("{}|quot", self.label))
                .expect("quotient");
        (sub_m, quo_m)
    }

    pub fn is_irreducible(&self) -> bool {
        self.dim > 0 && self.find_proper_submodule(LineOrder::Forward).is_none()
    }
}

/// Normalized nonzero vectors (first nonzero coordinate 1), one per line, in
/// lexicographic order.
fn projective_points(field: PrimeField, n: usize) -> Vec<Vec<u64>> {
    let p = field.modulus();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = p.pow(free as u32);
        for code in 0..count {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            let mut c = code;
            for j in (lead + 1..n).rev() {
                v[j] = c % p;
                c /= p;
            }
            out.push(v);
        }
    }
    out
}

/// The defining 2-dimensional module: each generator acts as itself.
pub fn standard_module(g: &Arc<MatrixGroup>) -> GModule {
    let f = g.field();
    let action = g.generators().iter().map(|s| s.to_fp_matrix(f)).collect();
    GModule::with_dim(g.clone(), 2, action, "V").expect("standard module")
}

/// The 4x4 matrix of `X -> s X s^-1` on the basis `(E11, E12, E21, E22)`.
pub fn adjoint_matrix(g: &MatrixGroup, s: &Mat2) -> FpMatrix {
    let gl = g.gl();
    let f = g.field();
    let si = gl.inv(s).expect("invertible");
    let mut m = FpMatrix::zero(f, 4, 4);
    for k in 0..4 {
        let mut e = [0u32; 4];
        e[k] = 1;
        let img = gl.mul(&gl.mul(s, &Mat2(e)), &si);
        for (r, &x) in img.entries().iter().enumerate() {
            m.set(r, k, x);
        }
    }
    m
}

/// `End(V)` with the conjugation action, basis `(E11, E12, E21, E22)`.
pub fn end_module(g: &Arc<MatrixGroup>) -> GModule {
    let action = g.generators().iter().map(|s| adjoint_matrix(g, s)).collect();
    GModule::with_dim(g.clone(), 4, action, "End(V)").expect("adjoint module")
}

/// A character given by its values on the generators.
pub fn character(g: &Arc<MatrixGroup>, values: &[u64], label: impl Into<String>) -> Result<GModule> {
    let f = g.field();
    let action = values
        .iter()
        .map(|&v| FpMatrix::scalar(f, 1, v))
        .collect();
    GModule::with_dim(g.clone(), 1, action, label)
}

pub fn trivial_character(g: &Arc<MatrixGroup>) -> GModule {
    let ones = vec![1u64; g.generators().len()];
    character(g, &ones, "1").expect("trivial character")
}

/// `chi^k` for a character `chi`, with `k` possibly negative.
pub fn character_power(chi: &GModule, k: i64) -> GModule {
    let f = chi.field();
    let vals: Vec<u64> = chi
        .character_values()
        .into_iter()
        .map(|v| {
            let base = if k < 0 { f.inv(v).expect("unit") } else { v };
            f.pow(base, k.unsigned_abs())
        })
        .collect();
    character(chi.group(), &vals, format!("{}^{}", chi.label(), k)).expect("character")
}

pub fn character_product(a: &GModule, b: &GModule) -> GModule {
    let f = a.field();
    let vals: Vec<u64> = a
        .character_values()
        .iter()
        .zip(b.character_values())
        .map(|(&x, y)| f.mul(x, y))
        .collect();
    character(a.group(), &vals, format!("{}*{}", a.label(), b.label())).expect("character")
}

/// `A0`, `A1` and the isomorphism `A0 + A1 -> End(V)` for a subgroup of a
/// torus normalizer.
#[derive(Clone, Debug)]
pub struct AdjointSplitting {
    pub kind: TorusKind,
    pub a0: GModule,
    pub a1: GModule,
    /// 4x4 matrix of `(a0, a1) -> (v -> a0 v + a1 F(v))`, columns indexed by
    /// the bases of `A0` then `A1`, rows by `(E11, E12, E21, E22)`.
    pub isomorphism: FpMatrix,
}

impl AdjointSplitting {
    /// Whether `isomorphism` is invertible and intertwines `A0 + A1` with
    /// `End(V)` on every generator.
    pub fn verify(&self) -> bool {
        let g = self.a0.group();
        let f = g.field();
        if !self.isomorphism.is_invertible() {
            return false;
        }
        g.generators().iter().enumerate().all(|(i, s)| {
            let mut block = FpMatrix::zero(f, 4, 4);
            let (x, y) = (&self.a0.action[i], &self.a1.action[i]);
            for r in 0..2 {
                for c in 0..2 {
                    block.set(r, c, x.get(r, c));
                    block.set(r + 2, c + 2, y.get(r, c));
                }
            }
            let lhs = self.isomorphism.mat_mul(&block).expect("4x4");
            let rhs = adjoint_matrix(g, s).mat_mul(&self.isomorphism).expect("4x4");
            lhs == rhs
        })
    }
}

/// Build `A0` and `A1` for a group inside the canonical split or nonsplit
/// torus normalizer (split is tried first).
///
/// `A0`: the torus acts trivially and `F` acts as itself. `A1`: `lambda` acts
/// as `lambda / F(lambda)` and `F` as itself.
pub fn a0_a1_modules(n: &Arc<MatrixGroup>) -> Result<AdjointSplitting> {
    let gl = n.gl();
    let candidates = [TorusNormalizer::split(gl), TorusNormalizer::nonsplit(gl)];
    let norm = candidates
        .into_iter()
        .find(|t| n.generators().iter().all(|s| t.contains(s)))
        .ok_or(Error::NotInNormalizer)?;
    a0_a1_modules_for(n, &norm)
}

pub fn a0_a1_modules_for(n: &Arc<MatrixGroup>, norm: &TorusNormalizer) -> Result<AdjointSplitting> {
    let gl = n.gl();
    let f = n.field();
    let frob = norm.frobenius();
    let mut a0 = Vec::new();
    let mut a1 = Vec::new();
    for s in n.generators() {
        let (lambda, uses_f) = norm.decompose(s).ok_or(Error::NotInNormalizer)?;
        let conj_lambda = gl.mul(&gl.mul(&frob, &lambda), &frob);
        let ratio = gl.mul(&lambda, &gl.inv(&conj_lambda).expect("unit"));
        let (x, y) = if uses_f {
            (frob, gl.mul(&ratio, &frob))
        } else {
            (Mat2::IDENTITY, ratio)
        };
        a0.push(x.to_fp_matrix(f));
        a1.push(y.to_fp_matrix(f));
    }
    let mut iso = FpMatrix::zero(f, 4, 4);
    for k in 0..2 {
        let mut e = [0u64; 2];
        e[k] = 1;
        let m0 = norm.multiplication(e);
        let m1 = gl.mul(&norm.multiplication(e), &frob);
        for (r, &x) in m0.entries().iter().enumerate() {
            iso.set(r, k, x);
        }
        for (r, &x) in m1.entries().iter().enumerate() {
            iso.set(r, k + 2, x);
        }
    }
    Ok(AdjointSplitting {
        kind: norm.kind(),
        a0: GModule::with_dim(n.clone(), 2, a0, "A0")?,
        a1: GModule::with_dim(n.clone(), 2, a1, "A1")?,
        isomorphism: iso,
    })
}

/// Composition factors, found by recursively splitting along submodules.
pub fn composition_factors(m: &GModule) -> Result<Vec<GModule>> {
    composition_factors_ordered(m, LineOrder::Forward)
}

pub fn composition_factors_ordered(m: &GModule, order: LineOrder) -> Result<Vec<GModule>> {
    if m.dim() > MAX_FACTOR_DIM {
        return Err(Error::DimTooLarge(m.dim()));
    }
    let mut out = Vec::new();
    collect_factors(m, order, &mut out);
    Ok(out)
}

fn collect_factors(m: &GModule, order: LineOrder, out: &mut Vec<GModule>) {
    if m.dim() == 0 {
        return;
    }
    match m.find_proper_submodule(order) {
        None => out.push(m.clone()),
        Some(sub) => {
            let (s, q) = m.split_along(&sub);
            collect_factors(&s, order, out);
            collect_factors(&q, order, out);
        }
    }
}

/// Whether an invertible `T` with `T act1(s) = act2(s) T` exists for every
/// generator `s`.
pub fn modules_isomorphic(m1: &GModule, m2: &GModule) -> Result<bool> {
    if !m1.same_group(m2) {
        return Err(Error::GroupMismatch);
    }
    Ok(find_isomorphism(m1, m2).is_some())
}

/// Basis of the space of intertwiners `T` (as row-major `n x n` vectors).
pub fn intertwiner_basis(m1: &GModule, m2: &GModule) -> Vec<Vec<u64>> {
    let n = m1.dim();
    if n != m2.dim() {
        return Vec::new();
    }
    let f = m1.field();
    let gens = m1.action.len();
    let mut sys = FpMatrix::zero(f, gens * n * n, n * n);
    for (g, (a1, a2)) in m1.action.iter().zip(&m2.action).enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = g * n * n + i * n + j;
                // (T a1)_ij - (a2 T)_ij
                for k in 0..n {
                    let col = i * n + k;
                    sys.set(row, col, f.add(sys.get(row, col), a1.get(k, j)));
                    let col = k * n + j;
                    sys.set(row, col, f.sub(sys.get(row, col), a2.get(i, k)));
                }
            }
        }
    }
    sys.rref_kernel().kernel_basis
}

pub fn find_isomorphism(m1: &GModule, m2: &GModule) -> Option<FpMatrix> {
    let n = m1.dim();
    if n != m2.dim() {
        return None;
    }
    let f = m1.field();
    if n == 0 {
        return Some(FpMatrix::zero(f, 0, 0));
    }
    let basis = intertwiner_basis(m1, m2);
    if basis.is_empty() {
        return None;
    }
    let to_matrix = |v: &[u64]| FpMatrix::from_rows(f, n, n, v).expect("n x n");
    for v in &basis {
        let t = to_matrix(v);
        if t.is_invertible() {
            return Some(t);
        }
    }
    let p = f.modulus();
    let combine = |coeffs: &[u64]| {
        let mut v = vec![0u64; n * n];
        for (c, b) in coeffs.iter().zip(&basis) {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*c, y));
            }
        }
        to_matrix(&v)
    };
    let k = basis.len() as u32;
    if (p as f64).powi(k as i32) <= 4096.0 {
        let total = p.pow(k);
        for code in 1..total {
            let mut c = code;
            let coeffs: Vec<u64> = (0..k)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect();
            let t = combine(&coeffs);
            if t.is_invertible() {
                return Some(t);
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1505);
    for _ in 0..512 {
        let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        let t = combine(&coeffs);
        if t.is_invertible() {
            return Some(t);
        }
    }
    None
}

/// Whether some composition factor of `m1` is isomorphic to one of `m2`.
pub fn has_common_irreducible_factor(m1: &GModule, m2: &GModule) -> Result<bool> {
    if !m1.same_group(m2) {
        return Err(Error::GroupMismatch);
    }
    let f1 = composition_factors(m1)?;
    let f2 = composition_factors(m2)?;
    for a in &f1 {
        for b in &f2 {
            if a.dim() != b.dim() {
                continue;
            }
            let basis = intertwiner_basis(a, b);
            if let Some(v) = basis.first() {
                // Schur: a nonzero map between irreducibles is invertible
                let t = FpMatrix::from_rows(a.field(), a.dim(), a.dim(), v).expect("square");
                debug_assert!(t.is_invertible());
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// For reducible 2-dimensional `V`: the characters `(chi1, chi2)` of
/// `0 -> chi1 -> V -> chi2 -> 0`. `None` when `V` is irreducible.
pub fn extension_characters(v: &GModule) -> Option<(GModule, GModule)> {
    assert_eq!(v.dim(), 2);
    let sub = v.find_proper_submodule(LineOrder::Forward)?;
    let (s, q) = v.split_along(&sub);
    let s = character(v.group(), &s.character_values(), "chi1").expect("character");
    let q = character(v.group(), &q.character_values(), "chi2").expect("character");
    Some((s, q))
}

/// Multiset equality of two factor lists up to isomorphism.
pub fn same_factor_multiset(a: &[GModule], b: &[GModule]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let hit = b.iter().enumerate().position(|(i, y)| {
            !used[i] && x.dim() == y.dim() && find_isomorphism(x, y).is_some()
        });
        match hit {
            Some(i) => used[i] = true,
            None => return false,
        }
    }
    true
}
