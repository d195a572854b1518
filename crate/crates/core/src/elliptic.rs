//! Integral Weierstrass models over Q, reduction data and Frobenius traces.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{is_prime, primes_up_to, PrimeField};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveQ {
    a: [BigInt; 5],
    b2: BigInt,
    b4: BigInt,
    b6: BigInt,
    b8: BigInt,
    c4: BigInt,
    c6: BigInt,
    disc: BigInt,
}

/// A rational number in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: BigInt,
    pub den: BigInt,
}

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Rational { num: n, den: d }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational {
            num: n.into(),
            den: BigInt::one(),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl CurveQ {
    pub fn new(a: [BigInt; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = &a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - 24 * &b4;
        let b2_cubed: BigInt = &b2 * &b2 * &b2;
        let c6 = 36 * &b2 * &b4 - 216 * &b6 - b2_cubed;
        let disc: BigInt = 9 * &b2 * &b4 * &b6 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 - &b2 * &b2 * &b8;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(CurveQ {
            a,
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
        })
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(BigInt::from))
    }

    /// An integral model with the given `c4`, `c6`, if one exists.
    pub fn from_c4c6(c4: &BigInt, c6: &BigInt) -> Result<Self> {
        let exact = |n: BigInt, d: i64| -> Result<BigInt> {
            let (q, r) = n.div_mod_floor(&BigInt::from(d));
            if r.is_zero() {
                Ok(q)
            } else {
                Err(Error::NonIntegralModel)
            }
        };
        let mut b2 = (-c6).mod_floor(&BigInt::from(12));
        if b2 > BigInt::from(6) {
            b2 -= 12;
        }
        let b4 = exact(&b2 * &b2 - c4, 24)?;
        let b2_cubed: BigInt = &b2 * &b2 * &b2;
        let b6 = exact(36 * &b2 * &b4 - c6 - b2_cubed, 216)?;
        let a1 = b2.mod_floor(&BigInt::from(2));
        let a3 = b6.mod_floor(&BigInt::from(2));
        let a2 = exact(&b2 - &a1, 4)?;
        let a4 = exact(&b4 - &a1 * &a3, 2)?;
        let a6 = exact(&b6 - &a3, 4)?;
        let curve = CurveQ::new([a1, a2, a3, a4, a6])?;
        if &curve.c4 != c4 || &curve.c6 != c6 {
            return Err(Error::NonIntegralModel);
        }
        Ok(curve)
    }

    pub fn a_invariants(&self) -> &[BigInt; 5] {
        &self.a
    }

    pub fn b_invariants(&self) -> [&BigInt; 4] {
        [&self.b2, &self.b4, &self.b6, &self.b8]
    }

    pub fn c4(&self) -> &BigInt {
        &self.c4
    }

    pub fn c6(&self) -> &BigInt {
        &self.c6
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// `(c4, c6, disc)`.
    pub fn invariants(&self) -> (BigInt, BigInt, BigInt) {
        (self.c4.clone(), self.c6.clone(), self.disc.clone())
    }

    pub fn j_invariant(&self) -> Rational {
        Rational::new(&self.c4 * &self.c4 * &self.c4, self.disc.clone())
    }

    /// The model `[u a1, u^2 a2, u^3 a3, u^4 a4, u^6 a6]`, whose invariants
    /// are scaled by `u^4`, `u^6`, `u^12`.
    pub fn scaled(&self, u: &BigInt) -> CurveQ {
        let [a1, a2, a3, a4, a6] = &self.a;
        let u2 = u * u;
        let u3 = &u2 * u;
        CurveQ::new([
            a1 * u,
            a2 * &u2,
            a3 * &u3,
            a4 * &u2 * &u2,
            a6 * &u3 * &u3,
        ])
        .expect("nonzero scale keeps the curve nonsingular")
    }

    /// Strip factors `l^4`, `l^6` from `c4`, `c6` while possible.
    pub fn minimalize_at(&self, ell: u64) -> Result<CurveQ> {
        if ell < 5 || !is_prime(ell) {
            return Err(Error::BadPrime(ell));
        }
        let l = BigInt::from(ell);
        let l4 = l.pow(4);
        let l6 = l.pow(6);
        let l12 = l.pow(12);
        let mut c4 = self.c4.clone();
        let mut c6 = self.c6.clone();
        let mut disc = self.disc.clone();
        let mut steps = 0;
        while c4.is_multiple_of(&l4) && c6.is_multiple_of(&l6) && disc.is_multiple_of(&l12) {
            c4 /= &l4;
            c6 /= &l6;
            disc /= &l12;
            steps += 1;
        }
        if steps == 0 {
            return Ok(self.clone());
        }
        CurveQ::from_c4c6(&c4, &c6)
    }

    /// `(c4, c6, disc)` of an `l`-minimal model, for `l >= 5`.
    fn minimal_invariants(&self, ell: u64) -> (BigInt, BigInt, BigInt) {
        if !self.disc.is_multiple_of(&BigInt::from(ell).pow(12)) {
            return self.invariants();
        }
        self.minimalize_at(ell).expect("l >= 5").invariants()
    }

    fn has_good_reduction(&self, ell: u64) -> bool {
        if ell < 5 {
            return !divides(ell, &self.disc);
        }
        !divides(ell, &self.minimal_invariants(ell).2)
    }

    /// `#E(F_l)`, including the point at infinity.
    pub fn count_points(&self, ell: u64) -> Result<u64> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if !self.has_good_reduction(ell) {
            return Err(Error::BadReduction(ell));
        }
        if ell == 2 {
            return Ok(count_points_char2(&self.a));
        }
        let f = PrimeField::new(ell)?;
        if ell == 3 {
            let coeffs = [&self.b6, &self.b4, &self.b2].map(|x| residue(x, ell));
            // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
            return Ok(count_square_model(f, [coeffs[0], f.mul(2, coeffs[1]), coeffs[2], 4]));
        }
        let (c4, c6, _) = self.minimal_invariants(ell);
        // isomorphic over F_l to y^2 = x^3 - 27 c4 x - 54 c6
        let a = f.neg(f.mul(27, residue(&c4, ell)));
        let b = f.neg(f.mul(54, residue(&c6, ell)));
        Ok(count_square_model(f, [b, a, 0, 1]))
    }

    /// `a_l = l + 1 - #E(F_l)`.
    pub fn trace_frobenius(&self, ell: u64) -> Result<i64> {
        let n = self.count_points(ell)?;
        Ok(ell as i64 + 1 - n as i64)
    }

    pub fn reduction_type(&self, ell: u64) -> Result<ReductionInfo> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        let kind = if ell < 5 {
            if divides(ell, &self.disc) {
                ReductionKind::Undetermined
            } else {
                ReductionKind::Good { supersingular: None }
            }
        } else {
            let (c4, c6, disc) = self.minimal_invariants(ell);
            if !divides(ell, &disc) {
                let a = self.trace_frobenius(ell)?;
                ReductionKind::Good {
                    supersingular: Some(a.rem_euclid(ell as i64) == 0),
                }
            } else if !divides(ell, &c4) {
                let f = PrimeField::new(ell)?;
                ReductionKind::Multiplicative {
                    split: f.is_square(f.neg(residue(&c6, ell))),
                }
            } else {
                ReductionKind::Additive
            }
        };
        Ok(ReductionInfo { ell, kind })
    }

    /// `y^2 = x^3 - 27 D^2 c4 x - 54 D^3 c6`.
    pub fn quadratic_twist(&self, d: i64) -> Result<CurveQ> {
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d.to_string()));
        }
        let d = BigInt::from(d);
        let a4 = -27 * &d * &d * &self.c4;
        let a6 = -54 * &d * &d * &d * &self.c6;
        CurveQ::new([BigInt::zero(), BigInt::zero(), BigInt::zero(), a4, a6])
    }

    /// `1 + #{rational roots of 4x^3 + b2 x^2 + 2 b4 x + b6}`.
    pub fn rational_two_torsion_count(&self) -> usize {
        // X = 4x turns the cubic into the monic X^3 + b2 X^2 + 8 b4 X + 16 b6,
        // whose rational roots are integers
        let coeffs = [16 * &self.b6, 8 * &self.b4, self.b2.clone()];
        1 + integer_roots_monic_cubic(&coeffs).len()
    }

    /// Primes up to `bound`, other than `skip`, where the curve has good
    /// reduction (2 and 3 only when they do not divide this model's
    /// discriminant).
    pub fn good_primes(&self, bound: u64, skip: u64) -> Vec<u64> {
        primes_up_to(bound)
            .into_iter()
            .filter(|&l| l != skip && self.has_good_reduction(l))
            .collect()
    }
}

impl fmt::Display for CurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1},{a2},{a3},{a4},{a6}]")
    }
}

impl FromStr for CurveQ {
    type Err = Error;

    /// Parses `"a1,a2,a3,a4,a6"`, optionally wrapped in brackets.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "expected 5 comma-separated coefficients, got {}",
                parts.len()
            )));
        }
        let mut a: [BigInt; 5] = Default::default();
        for (slot, part) in a.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {part:?}")))?;
        }
        CurveQ::new(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    Good { supersingular: Option<bool> },
    Multiplicative { split: bool },
    Additive,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionInfo {
    pub ell: u64,
    pub kind: ReductionKind,
}

impl ReductionInfo {
    pub fn is_good(&self) -> bool {
        matches!(self.kind, ReductionKind::Good { .. })
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionKind::Good { supersingular: Some(true) } => write!(f, "good supersingular"),
            ReductionKind::Good { supersingular: Some(false) } => write!(f, "good ordinary"),
            ReductionKind::Good { supersingular: None } => write!(f, "good"),
            ReductionKind::Multiplicative { split: true } => write!(f, "split multiplicative"),
            ReductionKind::Multiplicative { split: false } => write!(f, "non-split multiplicative"),
            ReductionKind::Additive => write!(f, "additive"),
            ReductionKind::Undetermined => write!(f, "undetermined"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CongruenceOutcome {
    /// First good prime where `a_l != l^a + l^b (mod p)`.
    Excluded { ell: u64, a_ell: i64 },
    /// Every good prime up to the bound satisfied the congruence.
    NotExcluded { primes_checked: usize },
}

impl CongruenceOutcome {
    pub fn is_excluded(&self) -> bool {
        matches!(self, CongruenceOutcome::Excluded { .. })
    }
}

/// `l^a + l^b mod p`, in `[0, p)`.
pub fn power_pair_residue(ell: u64, a: u64, b: u64, p: u64) -> u64 {
    let f = PrimeField::new(p).expect("prime modulus");
    let l = f.reduce(ell);
    f.add(f.pow(l, a), f.pow(l, b))
}

/// Whether `a_l = l^a + l^b (mod p)`.
pub fn trace_matches_power_pair(a_ell: i64, ell: u64, a: u64, b: u64, p: u64) -> bool {
    a_ell.rem_euclid(p as i64) as u64 == power_pair_residue(ell, a, b, p)
}

/// Scan good primes `l <= aux_bound`, `l != p`, in increasing order for one
/// with `a_l != l^a + l^b (mod p)`. A curve whose mod-p semisimplification is
/// `eps^a + eps^b` can never be excluded.
pub fn power_congruence_test(
    c: &CurveQ,
    p: u64,
    a: u64,
    b: u64,
    aux_bound: u64,
) -> Result<CongruenceOutcome> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if (a + b) % (p - 1) != 1 % (p - 1) {
        return Err(Error::BadExponents { a, b, modulus: p - 1 });
    }
    let mut checked = 0;
    for ell in c.good_primes(aux_bound, p) {
        let t = c.trace_frobenius(ell)?;
        if !trace_matches_power_pair(t, ell, a, b, p) {
            return Ok(CongruenceOutcome::Excluded { ell, a_ell: t });
        }
        checked += 1;
    }
    Ok(CongruenceOutcome::NotExcluded {
        primes_checked: checked,
    })
}

fn divides(ell: u64, n: &BigInt) -> bool {
    n.is_multiple_of(&BigInt::from(ell))
}

fn residue(x: &BigInt, ell: u64) -> u64 {
    x.mod_floor(&BigInt::from(ell))
        .to_u64()
        .expect("residue fits")
}

/// Points on `y^2 = k0 + k1 x + k2 x^2 + k3 x^3` over odd `F_l`, plus infinity.
fn count_square_model(f: PrimeField, k: [u64; 4]) -> u64 {
    let l = f.modulus();
    let mut n: i64 = 1;
    for x in 0..l {
        let v = f.add(f.add(k[0], f.mul(k[1], x)), f.mul(f.mul(x, x), f.add(k[2], f.mul(k[3], x))));
        n += 1 + f.legendre(v) as i64;
    }
    n as u64
}

fn count_points_char2(a: &[BigInt; 5]) -> u64 {
    let [a1, a2, a3, a4, a6] = a.clone().map(|x| residue(&x, 2));
    let mut n = 1;
    for x in 0..2u64 {
        for y in 0..2u64 {
            let lhs = y * y + a1 * x * y + a3 * y;
            let rhs = x * x * x + a2 * x * x + a4 * x + a6;
            if (lhs + rhs) % 2 == 0 {
                n += 1;
            }
        }
    }
    n
}

/// Nonzero and not divisible by any square `> 1`.
pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut q = 2u64;
    // strip primes up to the cube root; what is left has at most two prime
    // factors, so it is squarefree unless it is a perfect square
    while q.saturating_mul(q).saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return false;
            }
        }
        q += 1;
    }
    let r = n.sqrt();
    !(n > 1 && r * r == n)
}

/// Value of `X^3 + k2 X^2 + k1 X + k0` for `coeffs = [k0, k1, k2]`.
fn eval_monic_cubic(coeffs: &[BigInt; 3], x: &BigInt) -> BigInt {
    ((x + &coeffs[2]) * x + &coeffs[1]) * x + &coeffs[0]
}

/// Distinct integer roots of a monic integer cubic, found by bisection on
/// intervals where it is monotone.
pub fn integer_roots_monic_cubic(coeffs: &[BigInt; 3]) -> Vec<BigInt> {
    let [k0, k1, k2] = coeffs;
    let bound: BigInt = 1 + k0.abs().max(k1.abs()).max(k2.abs());
    let eval = |x: &BigInt| eval_monic_cubic(coeffs, x);
    let mut roots: Vec<BigInt> = Vec::new();
    let push = |r: BigInt, roots: &mut Vec<BigInt>| {
        if !roots.contains(&r) {
            roots.push(r);
        }
    };
    // critical points of X^3 + k2 X^2 + k1 X + k0 are (-k2 +- sqrt(k2^2 - 3 k1)) / 3
    let disc: BigInt = k2 * k2 - 3 * k1;
    if disc <= BigInt::zero() {
        if let Some(r) = bisect(&eval, -&bound, bound.clone(), true) {
            push(r, &mut roots);
        }
        return roots;
    }
    let s: BigInt = disc.sqrt();
    let three = BigInt::from(3);
    // m1 <= first critical point <= big1, m2 <= second critical point <= big2
    let neg_k2: BigInt = -k2;
    let one = BigInt::one();
    let m1 = (&neg_k2 - &s - &one).div_floor(&three) - &one;
    let big1 = (&neg_k2 - &s).div_floor(&three) + &one;
    let m2 = (&neg_k2 + &s).div_floor(&three) - &one;
    let big2 = (&neg_k2 + &s + &one).div_floor(&three) + &one;
    let intervals = [
        (-&bound, m1.clone(), true),
        (big1.clone(), m2.clone(), false),
        (big2.clone(), bound.clone(), true),
    ];
    for (lo, hi, increasing) in intervals {
        if lo <= hi {
            if let Some(r) = bisect(&eval, lo, hi, increasing) {
                push(r, &mut roots);
            }
        }
    }
    for (lo, hi) in [(m1, big1), (m2, big2)] {
        let mut x = lo;
        while x <= hi {
            if eval(&x).is_zero() {
                push(x.clone(), &mut roots);
            }
            x += 1;
        }
    }
    roots.sort();
    roots
}

fn bisect(
    eval: &impl Fn(&BigInt) -> BigInt,
    mut lo: BigInt,
    mut hi: BigInt,
    increasing: bool,
) -> Option<BigInt> {
    let sign = |x: &BigInt| {
        let v = eval(x);
        if increasing {
            v
        } else {
            -v
        }
    };
    if sign(&lo).is_positive() || sign(&hi).is_negative() {
        return None;
    }
    while lo < hi {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if sign(&mid).is_negative() {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    eval(&lo).is_zero().then_some(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: [i64; 5]) -> CurveQ {
        CurveQ::from_i64(a).unwrap()
    }

    #[test]
    fn invariant_examples() {
        let e = curve([0, 0, 0, 0, 1]);
        assert_eq!(e.discriminant(), &BigInt::from(-432));
        assert_eq!(curve([1, 1, 0, -2, -7]).j_invariant(), Rational::integer(-121));
        assert_eq!(curve([0, -1, 1, -7, 10]).j_invariant(), Rational::integer(-(1 << 15)));
        assert!(matches!(CurveQ::from_i64([0, 0, 0, 0, 0]), Err(Error::SingularCurve)));
    }

    #[test]
    fn frobenius_traces_at_two() {
        assert_eq!(curve([0, -1, 1, -7, 10]).count_points(2).unwrap(), 3);
        assert_eq!(curve([0, -1, 1, -7, 10]).trace_frobenius(2).unwrap(), 0);
        assert_eq!(curve([1, 1, 0, -2, -7]).trace_frobenius(2).unwrap(), 1);
        assert_eq!(curve([1, 1, 0, -3632, 82757]).trace_frobenius(2).unwrap(), 1);
        let e = curve([0, 0, 1, -1, 0]);
        assert_eq!(e.count_points(2).unwrap(), 5);
        assert_eq!(e.trace_frobenius(2).unwrap(), -2);
        assert_eq!(e.trace_frobenius(3).unwrap(), -3);
        assert_eq!(e.trace_frobenius(5).unwrap(), -2);
    }

    #[test]
    fn bad_reduction_is_an_error() {
        let e = curve([1, 1, 0, -2, -7]);
        assert!(matches!(e.count_points(11), Err(Error::BadReduction(11))));
    }

    #[test]
    fn minimalize_round_trip() {
        let e = curve([1, 1, 0, -2, -7]);
        assert_eq!(e.minimalize_at(7).unwrap(), e);
        let big = e.scaled(&BigInt::from(7));
        let back = big.minimalize_at(7).unwrap();
        assert_eq!(back.c4(), e.c4());
        assert_eq!(back.c6(), e.c6());
        assert_eq!(big.discriminant(), &(e.discriminant() * BigInt::from(7).pow(12)));
        assert!(matches!(e.minimalize_at(3), Err(Error::BadPrime(3))));
        assert_eq!(big.trace_frobenius(7).unwrap(), e.trace_frobenius(7).unwrap());
    }

    #[test]
    fn reduction_examples() {
        let r = curve([0, 0, 0, 0, 1]).reduction_type(5).unwrap();
        assert_eq!(r.kind, ReductionKind::Good { supersingular: Some(true) });
        assert!(!curve([1, 1, 0, -2, -7]).reduction_type(11).unwrap().is_good());
        let r = curve([0, 0, 1, -1, 0]).reduction_type(37).unwrap();
        assert!(matches!(r.kind, ReductionKind::Multiplicative { .. }));
        // 11a1 has split multiplicative reduction at 11
        let r = curve([0, -1, 1, -10, -20]).reduction_type(11).unwrap();
        assert_eq!(r.kind, ReductionKind::Multiplicative { split: true });
        assert_eq!(curve([0, -1, 1, -7, 10]).reduction_type(11).unwrap().kind, ReductionKind::Additive);
        assert_eq!(curve([0, 0, 1, -1, 0]).reduction_type(2).unwrap().kind, ReductionKind::Good { supersingular: None });
        assert_eq!(curve([0, 0, 0, 0, 1]).reduction_type(2).unwrap().kind, ReductionKind::Undetermined);
    }

    #[test]
    fn twist_examples() {
        let e = curve([1, 1, 0, -2, -7]);
        assert_eq!(e.quadratic_twist(-3).unwrap().j_invariant(), Rational::integer(-121));
        assert_eq!(e.quadratic_twist(1).unwrap().j_invariant(), e.j_invariant());
        assert!(matches!(e.quadratic_twist(12), Err(Error::NotSquarefree(_))));
        assert!(matches!(e.quadratic_twist(0), Err(Error::NotSquarefree(_))));
    }

    #[test]
    fn squarefree_checks() {
        assert!(is_squarefree(1));
        assert!(is_squarefree(-1));
        assert!(is_squarefree(30));
        assert!(!is_squarefree(18));
        assert!(!is_squarefree(49 * 3));
        assert!(!is_squarefree(1_000_003 * 1_000_003));
        assert!(is_squarefree(1_000_003 * 999_983));
    }

    #[test]
    fn two_torsion_examples() {
        assert_eq!(curve([0, 0, 0, -1, 0]).rational_two_torsion_count(), 4);
        assert_eq!(curve([0, 0, 1, -1, 0]).rational_two_torsion_count(), 1);
        // y^2 = x(x-1)(x-5) = x^3 - 6x^2 + 5x
        assert_eq!(curve([0, -6, 0, 5, 0]).rational_two_torsion_count(), 4);
        // y^2 = x^3 + 1 has the single 2-torsion point (-1, 0)
        assert_eq!(curve([0, 0, 0, 0, 1]).rational_two_torsion_count(), 2);
    }

    #[test]
    fn parse_curve() {
        let e: CurveQ = "1,1,0,-2,-7".parse().unwrap();
        assert_eq!(e, curve([1, 1, 0, -2, -7]));
        let e: CurveQ = "[0, -1, 1, -7, 10]".parse().unwrap();
        assert_eq!(e.to_string(), "[0,-1,1,-7,10]");
        assert!(matches!("1,2,3".parse::<CurveQ>(), Err(Error::Parse(_))));
        assert!(matches!("1,2,x,4,5".parse::<CurveQ>(), Err(Error::Parse(_))));
    }

    #[test]
    fn congruence_examples() {
        let e = curve([1, 1, 0, -2, -7]);
        assert!(trace_matches_power_pair(1, 2, 7, 4, 11));
        assert!(!power_congruence_test(&e, 11, 7, 4, 1000).unwrap().is_excluded());
        let e = curve([0, 0, 1, -1, 0]);
        assert_eq!(
            power_congruence_test(&e, 7, 0, 1, 1000).unwrap(),
            CongruenceOutcome::Excluded { ell: 2, a_ell: -2 }
        );
        assert!(matches!(
            power_congruence_test(&e, 7, 1, 1, 1000),
            Err(Error::BadExponents { .. })
        ));
        assert!(matches!(power_congruence_test(&e, 2, 0, 1, 10), Err(Error::EvenPrime(2))));
    }

    #[test]
    fn power_pair_table() {
        let pairs = [(0, 1), (1, 10), (2, 9), (3, 8), (4, 7), (5, 6)];
        let got: Vec<i64> = pairs
            .iter()
            .map(|&(a, b)| {
                let r = power_pair_residue(2, a, b, 11) as i64;
                if r > 5 { r - 11 } else { r }
            })
            .collect();
        assert_eq!(got, vec![3, 3, -1, 0, 1, -3]);
    }
}
