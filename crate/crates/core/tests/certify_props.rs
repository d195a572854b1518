use proptest::prelude::*;

use divcert_core::certify::{
    bad_forms, certify_q, revalidate, twist_scan, Certificate, EvidenceKind, Verdict,
    DEFAULT_AUX_BOUND,
};
use divcert_core::elliptic::CurveQ;

/// `l^a + l^b mod p` and `a_l` from a direct count on the given model.
fn congruence_holds(a: [i64; 5], ell: u64, form: [u64; 2], p: u64) -> bool {
    let l = ell as i64;
    let [a1, a2, a3, a4, a6] = a.map(|x| x.rem_euclid(l));
    let mut n = 1;
    for x in 0..l {
        for y in 0..l {
            if (y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6).rem_euclid(l) == 0 {
                n += 1;
            }
        }
    }
    let a_ell = l + 1 - n;
    let pw = |e: u64| (0..e).fold(1u64, |acc, _| acc * ell % p);
    a_ell.rem_euclid(p as i64) as u64 == (pw(form[0]) + pw(form[1])) % p
}

fn curve() -> impl Strategy<Value = ([i64; 5], CurveQ)> {
    prop::array::uniform5(-9i64..=9).prop_filter_map("singular", |a| CurveQ::from_i64(a).ok().map(|c| (a, c)))
}

fn odd_small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn witnesses_are_sound((a, c) in curve(), p in odd_small_prime()) {
        let cert = certify_q(&c, p, 300).unwrap();
        prop_assert!(revalidate(&cert).unwrap());
        for e in cert.evidence.iter().filter(|e| e.kind == EvidenceKind::Excluded) {
            let ell = e.ell.unwrap();
            prop_assert!(c.discriminant() % ell != 0.into() || ell >= 5);
            if c.discriminant() % ell != 0.into() {
                prop_assert!(!congruence_holds(a, ell, e.form.unwrap(), p));
            }
        }
        if cert.verdict == Verdict::CertifiedLocal {
            for f in bad_forms(p) {
                prop_assert!(cert.exclusion_witness(*f).is_some());
            }
        }
    }

    #[test]
    fn larger_bound_never_loses_local((_a, c) in curve(), p in odd_small_prime(), b in 20u64..200) {
        let small = certify_q(&c, p, b).unwrap();
        let large = certify_q(&c, p, 4 * b).unwrap();
        if small.verdict == Verdict::CertifiedLocal {
            prop_assert_eq!(large.verdict, Verdict::CertifiedLocal);
            for f in bad_forms(p) {
                prop_assert_eq!(small.exclusion_witness(*f), large.exclusion_witness(*f));
            }
        }
        if small.verdict == Verdict::CertifiedPaper {
            prop_assert!(large.verdict.is_certified());
        }
    }

    #[test]
    fn deterministic_json((_a, c) in curve(), p in odd_small_prime()) {
        let one = certify_q(&c, p, 200).unwrap();
        let two = certify_q(&c, p, 200).unwrap();
        prop_assert_eq!(one.to_json(), two.to_json());
        prop_assert_eq!(Certificate::from_json(&one.to_json()).unwrap(), one);
    }

    #[test]
    fn uniform_primes((_a, c) in curve(), p in prop::sample::select(vec![13u64, 17, 19, 23, 101])) {
        let cert = certify_q(&c, p, 100).unwrap();
        prop_assert_eq!(cert.verdict, Verdict::CertifiedPaper);
        prop_assert!(cert.evidence.is_empty());
    }

    #[test]
    fn two_is_unsupported((_a, c) in curve()) {
        prop_assert_eq!(certify_q(&c, 2, 100).unwrap().verdict, Verdict::UnsupportedPrime);
    }
}

#[test]
fn twist_scan_of_121c1_at_eleven() {
    let c = CurveQ::from_i64([1, 1, 0, -2, -7]).unwrap();
    let ds = [1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 11, -11];
    let scan = twist_scan(&c, 11, &ds, DEFAULT_AUX_BOUND).unwrap();
    assert_eq!(scan.summary.total, ds.len());
    let surviving: Vec<i64> = scan
        .entries
        .iter()
        .filter(|e| {
            e.certificate
                .evidence
                .iter()
                .any(|ev| ev.kind == EvidenceKind::NotExcluded && ev.form == Some([7, 4]))
        })
        .map(|e| e.d)
        .collect();
    assert!(surviving.contains(&1));
    let coprime: Vec<&i64> = surviving.iter().filter(|d| *d % 11 != 0).collect();
    assert!(coprime.len() <= 2, "surviving twists {surviving:?}");
    for e in &scan.entries {
        assert!(e.certificate.verdict.is_certified());
        assert!(revalidate(&e.certificate).unwrap());
    }
}

#[test]
fn twist_scan_preserves_input_order() {
    let c = CurveQ::from_i64([0, 0, 1, -1, 0]).unwrap();
    let ds = [5, -1, 3, 1];
    let scan = twist_scan(&c, 7, &ds, 300).unwrap();
    let order: Vec<i64> = scan.entries.iter().map(|e| e.d).collect();
    assert_eq!(order, ds);
    assert!(twist_scan(&c, 2, &ds, 300).is_err());
}
