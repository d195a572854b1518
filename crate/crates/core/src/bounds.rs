//! Torsion-prime bounds over number fields of degree `d` and the resulting
//! prime threshold above which divisibility holds uniformly.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Known values of the largest torsion prime over degree-`d` fields.
pub fn pi_known(d: u32) -> Option<u64> {
    match d {
        1 => Some(7),
        2 | 3 => Some(13),
        4 => Some(17),
        5 => Some(19),
        _ => None,
    }
}

/// Which bound supplies the torsion-prime bound when no exact value is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PiBoundSource {
    Known,
    /// `ceil((1 + 3^(d/2))^2)`; unpublished.
    #[default]
    Oesterle,
    /// `65 (3^d - 1) (2d)^6`.
    Parent,
}

/// `(2^d + 2^(d/2))^2`, irrational for odd `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericThreshold {
    #[serde(serialize_with = "as_decimal")]
    pub floor: BigUint,
    /// Whether `floor` is the exact value.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub d: u32,
    /// `d^(3 d^2)`, a valid bound only for `d > 1`.
    #[serde(serialize_with = "as_decimal")]
    pub merel: BigUint,
    pub merel_valid: bool,
    #[serde(serialize_with = "as_decimal")]
    pub parent: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub oesterle_ceil: BigUint,
    pub pi_known: Option<u64>,
    #[serde(serialize_with = "as_decimal")]
    pub pi_bound: BigUint,
    pub pi_bound_source: PiBoundSource,
    pub generic_threshold: GenericThreshold,
    /// Least prime strictly above `max(generic_threshold, pi_bound)`.
    #[serde(serialize_with = "as_decimal")]
    pub first_certified_prime: BigUint,
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn threshold_degree(d: u32) -> BoundReport {
    threshold_degree_with(d, PiBoundSource::Oesterle)
}

/// Like [`threshold_degree`]; `fallback` chooses the bound used when no
/// exact torsion-prime value is known (`Known` is treated as `Oesterle`).
pub fn threshold_degree_with(d: u32, fallback: PiBoundSource) -> BoundReport {
    assert!(d >= 1, "degree must be positive");
    let big = |n: u64| BigUint::from(n);
    let merel = big(d as u64).pow(3 * d * d);
    let three_d = big(3).pow(d);
    let parent = big(65) * (&three_d - 1u32) * big(2 * d as u64).pow(6);
    // (1 + 3^(d/2))^2 = 1 + 3^d + sqrt(4 * 3^d)
    let oesterle_ceil = BigUint::one() + &three_d + ceil_sqrt(&(big(4) * &three_d));
    let (pi_bound, pi_bound_source) = match pi_known(d) {
        Some(v) => (big(v), PiBoundSource::Known),
        None => match fallback {
            PiBoundSource::Parent => (parent.clone(), PiBoundSource::Parent),
            _ => (oesterle_ceil.clone(), PiBoundSource::Oesterle),
        },
    };
    // (2^d + 2^(d/2))^2 = 4^d + 2^d + sqrt(2^(3d + 2))
    let cross_sq = big(2).pow(3 * d + 2);
    let cross = cross_sq.sqrt();
    let generic_threshold = GenericThreshold {
        floor: big(4).pow(d) + big(2).pow(d) + &cross,
        exact: &cross * &cross == cross_sq,
    };
    // primes above an irrational T are exactly the primes above floor(T)
    let target = (&generic_threshold.floor).max(&pi_bound).clone();
    let first_certified_prime = next_prime_big(&target);
    BoundReport {
        d,
        merel,
        merel_valid: d > 1,
        parent,
        oesterle_ceil,
        pi_known: pi_known(d),
        pi_bound,
        pi_bound_source,
        generic_threshold,
        first_certified_prime,
    }
}

fn ceil_sqrt(n: &BigUint) -> BigUint {
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1u32
    }
}

/// Least prime strictly greater than `n`.
pub fn next_prime_big(n: &BigUint) -> BigUint {
    let mut c = n + 1u32;
    while !is_probable_prime(&c) {
        c += 1u32;
    }
    c
}

/// Miller-Rabin with the first 20 prime bases: deterministic below
/// 3.3e24 and overwhelmingly reliable above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return crate::fp::is_prime(small);
    }
    const BASES: [u32; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0;
    while (&d % 2u32).is_zero() {
        d >>= 1;
        s += 1;
    }
    'bases: for &b in &BASES {
        let b = BigUint::from(b);
        if (n % &b).is_zero() {
            return false;
        }
        let mut x = b.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
