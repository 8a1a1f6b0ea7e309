use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use gentle_udr::catalog::table1_catalog;
use gentle_udr::homext::{
    brute_force_ext, classify_trivial_end, ext1_dim, ext1_space, hom_dim, middle_term, vertex_map_dim,
};
use gentle_udr::lifts::{enumerate_lifts, fingerprint, CoeffRing};
use gentle_udr::string_module;
use gentle_udr::udr::{universal_deformation_ring, UdrKind, UdrOptions};
use gentle_udr::{enumerate_strings, FinModule, Matrix, Presentation, PrimeField, StringWord};

struct Algebra {
    name: &'static str,
    p: Arc<Presentation>,
    words: Vec<StringWord>,
    trivial_end: Vec<StringWord>,
}

fn corpus() -> &'static [Algebra] {
    static C: OnceLock<Vec<Algebra>> = OnceLock::new();
    C.get_or_init(|| {
        table1_catalog()
            .into_iter()
            .map(|e| Algebra {
                name: e.name,
                words: enumerate_strings(&e.presentation, 6),
                trivial_end: classify_trivial_end(&e.presentation, 6, f(2)),
                p: e.presentation,
            })
            .collect()
    })
}

fn f(q: u32) -> PrimeField {
    PrimeField::new(q).unwrap()
}

fn short(a: &Algebra, max_len: usize) -> Vec<&StringWord> {
    a.words.iter().filter(|w| w.len() <= max_len).collect()
}

/// Picks an algebra and a word of length at most `max_len` from it.
fn word(max_len: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..15usize).prop_flat_map(move |i| {
        let n = short(&corpus()[i], max_len).len();
        (Just(i), 0..n)
    })
}

/// An `End = k` word, over algebras that have one of length at most `max_len`.
fn trivial_end_word(max_len: usize) -> impl Strategy<Value = (usize, StringWord)> {
    let pool: Vec<(usize, StringWord)> = corpus()
        .iter()
        .enumerate()
        .flat_map(|(i, a)| a.trivial_end.iter().filter(|w| w.len() <= max_len).map(move |w| (i, w.clone())))
        .collect();
    prop::sample::select(pool)
}

fn pair(max_len: usize) -> impl Strategy<Value = (usize, usize, usize)> {
    (0..15usize).prop_flat_map(move |i| {
        let n = short(&corpus()[i], max_len).len();
        (Just(i), 0..n, 0..n)
    })
}

fn module(i: usize, j: usize, max_len: usize, q: u32) -> FinModule {
    let a = &corpus()[i];
    string_module(&a.p, short(a, max_len)[j], f(q)).unwrap()
}

/// Counts module maps by trying every family of vertex maps.
fn brute_force_hom(m: &FinModule, n: &FinModule) -> usize {
    let field = m.field();
    let q = field.order();
    let p = m.presentation();
    let nv = m.dims().len();
    let sizes: Vec<usize> = (0..nv).map(|v| n.dim_at(v) * m.dim_at(v)).collect();
    let total: usize = sizes.iter().sum();
    let mut digits = vec![0u32; total];
    let mut count: u64 = 0;
    loop {
        let mut off = 0;
        let g: Vec<Matrix> = (0..nv)
            .map(|v| {
                let g = Matrix::from_data(field, n.dim_at(v), m.dim_at(v), digits[off..off + sizes[v]].to_vec());
                off += sizes[v];
                g
            })
            .collect();
        let ok = (0..p.quiver().num_arrows()).all(|a| {
            let arr = p.quiver().arrow(a);
            n.action(a).mul(&g[arr.source]) == g[arr.target].mul(m.action(a))
        });
        count += u64::from(ok);
        let mut k = 0;
        while k < total && digits[k] == q - 1 {
            digits[k] = 0;
            k += 1;
        }
        if k == total {
            break;
        }
        digits[k] += 1;
    }
    let mut d = 0;
    let mut c = 1u64;
    while c < count {
        c *= u64::from(q);
        d += 1;
    }
    assert_eq!(c, count, "hom count is a power of q");
    d
}

#[test]
fn every_string_module_is_a_nilpotent_representation() {
    for a in corpus() {
        for w in &a.words {
            let m = string_module(&a.p, w, f(2)).unwrap();
            m.check().unwrap();
            assert!(m.is_radical_nilpotent());
            assert_eq!(m.total_dim(), w.len() + 1, "{} {}", a.name, w.render(&a.p));
        }
    }
}

#[test]
fn enumerated_words_are_canonical_and_distinct() {
    for a in corpus() {
        for (i, w) in a.words.iter().enumerate() {
            assert!(w.is_valid(&a.p));
            assert_eq!(&w.canonical(&a.p), w);
            assert!(!a.words[..i].contains(w));
        }
    }
}

#[test]
fn radical_layers_have_at_most_two_entries() {
    for e in table1_catalog() {
        for v in e.presentation.quiver().vertices().to_vec() {
            let rep = e.presentation.radical_series(&v, 12).unwrap();
            assert_eq!(rep.layers[0].len(), 1);
            assert!(rep.layers.iter().all(|l| l.len() <= 2), "{} P{v}", e.name);
            for arm in &rep.arms {
                for (i, pth) in arm.paths.iter().enumerate().skip(1) {
                    assert_eq!(pth.len(), arm.paths[i - 1].len() + 1);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hom_matches_brute_force((i, j, k) in pair(3)) {
        let (m, n) = (module(i, j, 3, 2), module(i, k, 3, 2));
        prop_assume!(vertex_map_dim(&m, &n) <= 16);
        prop_assert_eq!(hom_dim(&m, &n).unwrap(), brute_force_hom(&m, &n));
    }

    #[test]
    fn ext_matches_brute_force((i, j, k) in pair(3)) {
        let (m, n) = (module(i, j, 3, 2), module(i, k, 3, 2));
        match brute_force_ext(&m, &n, 1 << 24) {
            Ok(b) => prop_assert_eq!(ext1_dim(&m, &n).unwrap(), b),
            Err(_) => prop_assume!(false),
        }
    }

    #[test]
    fn dims_do_not_depend_on_q((i, j, k) in pair(3), q in prop::sample::select(vec![3u32, 5, 7])) {
        let (m2, n2) = (module(i, j, 3, 2), module(i, k, 3, 2));
        let (mq, nq) = (module(i, j, 3, q), module(i, k, 3, q));
        prop_assert_eq!(hom_dim(&m2, &n2).unwrap(), hom_dim(&mq, &nq).unwrap());
        prop_assert_eq!(ext1_dim(&m2, &n2).unwrap(), ext1_dim(&mq, &nq).unwrap());
    }

    #[test]
    fn reversing_a_word_gives_an_isomorphic_module((i, j) in word(6)) {
        let a = &corpus()[i];
        let w = short(a, 6)[j];
        let m = string_module(&a.p, w, f(2)).unwrap();
        let r = string_module(&a.p, &w.inverse(&a.p), f(2)).unwrap();
        prop_assert_eq!(m.dims(), r.dims());
        let e = hom_dim(&m, &m).unwrap();
        prop_assert_eq!(hom_dim(&m, &r).unwrap(), e);
        prop_assert_eq!(hom_dim(&r, &m).unwrap(), e);
        prop_assert_eq!(ext1_dim(&m, &m).unwrap(), ext1_dim(&r, &r).unwrap());
    }

    #[test]
    fn middle_terms_are_modules((i, j, k) in pair(3)) {
        let (m, n) = (module(i, j, 3, 2), module(i, k, 3, 2));
        let ext = ext1_space(&m, &n).unwrap();
        for c in ext.classes.iter().chain(&ext.cocycles) {
            let e = middle_term(&m, &n, c).unwrap();
            e.check().unwrap();
            prop_assert_eq!(e.total_dim(), m.total_dim() + n.total_dim());
            prop_assert!(hom_dim(&n, &e).unwrap() >= 1);
        }
    }

    #[test]
    fn census_starts_at_one_and_sees_the_tangent_space((i, w) in trivial_end_word(4)) {
        let v = string_module(&corpus()[i].p, &w, f(2)).unwrap();
        let c = fingerprint(&v, 2, 1 << 22).unwrap();
        let ext = ext1_dim(&v, &v).unwrap();
        prop_assert_eq!(c.counts(), vec![1, 1u128 << ext]);
    }

    #[test]
    fn lifts_reduce_to_lifts((i, j) in word(3)) {
        let v = module(i, j, 3, 2);
        let ring = CoeffRing::new(f(2), 3).unwrap();
        let lifts = match enumerate_lifts(&v, ring, 1 << 16) {
            Ok(l) => l,
            Err(_) => return Ok(()),
        };
        for l in &lifts {
            prop_assert!(l.is_valid_for(&v));
            prop_assert!(l.reduce(2).is_valid_for(&v));
            prop_assert!(l.reduce(1).is_valid_for(&v));
        }
    }

    #[test]
    fn determined_rings_match_their_census((i, w) in trivial_end_word(6)) {
        let a = &corpus()[i];
        let d = universal_deformation_ring(&a.p, &w, f(2), &UdrOptions::default()).unwrap();
        if d.kind.is_determined() {
            let c = d.evidence.census.as_ref().unwrap();
            prop_assert!(c.matches_kind(&d.kind), "{} {}: {:?}", a.name, w.render(&a.p), c);
        }
        if d.kind == UdrKind::PowerSeries {
            let seq = d.evidence.sequences.last().unwrap();
            prop_assert!(seq.validated_up_to >= 4);
        }
        if d.kind == UdrKind::Field {
            prop_assert_eq!(d.tangent_dim, 0);
        }
    }
}
