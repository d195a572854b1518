use proptest::prelude::*;

use divcert_core::fp::PrimeField;
use divcert_core::matrix::FpMatrix;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn matrix(max_dim: usize) -> impl Strategy<Value = FpMatrix> {
    (small_prime(), 1..=max_dim, 1..=max_dim).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |data| {
            FpMatrix::from_rows(PrimeField::new(p).unwrap(), r, c, &data).unwrap()
        })
    })
}

fn square_matrix(max_dim: usize) -> impl Strategy<Value = FpMatrix> {
    (small_prime(), 1..=max_dim).prop_flat_map(|(p, n)| {
        prop::collection::vec(0..p, n * n).prop_map(move |data| {
            FpMatrix::from_rows(PrimeField::new(p).unwrap(), n, n, &data).unwrap()
        })
    })
}

/// Number of solutions of `m x = 0`, by enumerating every vector.
fn kernel_size(m: &FpMatrix) -> u64 {
    let p = m.field().modulus();
    let n = m.cols();
    let total = p.pow(n as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let v: Vec<u64> = (0..n)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect();
            m.apply(&v).unwrap().iter().all(|&x| x == 0)
        })
        .count() as u64
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix(6)) {
        let k = m.rref_kernel();
        prop_assert_eq!(k.rank + k.kernel_basis.len(), m.cols());
        prop_assert_eq!(k.rank, m.rank());
        for v in &k.kernel_basis {
            prop_assert!(m.apply(v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rank_matches_kernel_count(m in (prop::sample::select(vec![2u64, 3, 5]), 1..=4usize, 1..=4usize)
        .prop_flat_map(|(p, r, c)| prop::collection::vec(0..p, r * c).prop_map(move |d| {
            FpMatrix::from_rows(PrimeField::new(p).unwrap(), r, c, &d).unwrap()
        })))
    {
        let p = m.field().modulus();
        prop_assert_eq!(kernel_size(&m), p.pow((m.cols() - m.rank()) as u32));
    }

    #[test]
    fn inverse_round_trip(m in square_matrix(5)) {
        match m.inverse() {
            Some(inv) => {
                let n = m.rows();
                prop_assert_eq!(m.mat_mul(&inv).unwrap(), FpMatrix::identity(m.field(), n));
                prop_assert_eq!(inv.mat_mul(&m).unwrap(), FpMatrix::identity(m.field(), n));
                prop_assert_eq!(m.rank(), n);
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }

    #[test]
    fn solve_residual(m in matrix(5), seed in any::<u64>()) {
        let p = m.field().modulus();
        let x: Vec<u64> = (0..m.cols()).map(|i| (seed >> (i % 60)) % p).collect();
        let rhs = m.apply(&x).unwrap();
        let sol = m.solve_linear(&rhs).unwrap().expect("consistent by construction");
        prop_assert_eq!(m.apply(&sol).unwrap(), rhs);
    }

    #[test]
    fn transpose_preserves_rank(m in matrix(5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }
}

#[test]
fn cayley_hamilton_exhaustive() {
    for p in [2u64, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        for code in 0..p.pow(4) {
            let e = [code % p, (code / p) % p, (code / p / p) % p, code / p / p / p];
            let m = FpMatrix::from_rows(f, 2, 2, &e).unwrap();
            let (t, d) = m.char_poly_2x2().unwrap();
            let m2 = m.mat_mul(&m).unwrap();
            let res = m2
                .sub(&m.scale(t.value()))
                .unwrap()
                .add(&FpMatrix::scalar(f, 2, d.value()))
                .unwrap();
            assert!(res.is_zero(), "p={p} {m}");
        }
    }
}
