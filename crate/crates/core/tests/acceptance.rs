//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gentle_udr::catalog::{lambda0, table1_catalog};
use gentle_udr::homext::{brute_force_ext, classify_trivial_end, ext1_dim, hom_dim};
use gentle_udr::lifts::{count_deformations_exhaustive, CoeffRing};
use gentle_udr::report::{sweep, RunConfig};
use gentle_udr::udr::{
    build_sequence, connecting_letters, universal_deformation_ring, Termination, UdrKind, UdrOptions,
};
use gentle_udr::{enumerate_strings, make_string, simple_module, string_module, word_isomorphic, Matrix, PrimeField};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn f2() -> PrimeField {
    PrimeField::binary()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion1() -> Check {
    let p = lambda0();
    let got = classify_trivial_end(&p, 3, f2());
    let want = ["simple 1", "simple 2", "c", "d", "c*a", "a*d", "d*b", "b*c", "b*c*a", "a*d*b"];
    let want: Vec<_> = want.iter().map(|s| make_string(&p, s).unwrap()).collect();
    let missing: Vec<String> =
        want.iter().filter(|w| !got.iter().any(|g| word_isomorphic(&p, g, w))).map(|w| w.render(&p)).collect();
    let extra: Vec<String> =
        got.iter().filter(|g| !want.iter().any(|w| word_isomorphic(&p, g, w))).map(|g| g.render(&p)).collect();
    ensure(missing.is_empty() && extra.is_empty() && got.len() == 10, format!("missing {missing:?}, extra {extra:?}"))?;
    Ok(format!("{} modules", got.len()))
}

fn criterion2() -> Check {
    let p = lambda0();
    let cases = [
        ("simple 1", UdrKind::TruncatedPowerSeries(2), vec![1u128, 2, 2]),
        ("simple 2", UdrKind::TruncatedPowerSeries(2), vec![1, 2, 2]),
        ("b*c*a", UdrKind::PowerSeries, vec![1, 2, 4]),
        ("a*d*b", UdrKind::PowerSeries, vec![1, 2, 4]),
    ];
    let opts = UdrOptions { n_max: 3, ..Default::default() };
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for (name, kind, census) in cases {
        let w = make_string(&p, name).unwrap();
        let d = universal_deformation_ring(&p, &w, f2(), &opts).map_err(|e| format!("{name}: {e}"))?;
        let c = d.evidence.census.as_ref().ok_or_else(|| format!("{name}: no census"))?;
        let counts = c.counts();
        seen.push(format!("{name} -> {} {counts:?}", d.kind.ring_name()));
        if d.kind != kind || counts != census || c.matches != vec![kind.ring_name()] {
            failures.push(format!(
                "{name}: want {} {census:?}, got {} {counts:?} (tangent dim {}, census matches {:?})",
                kind.ring_name(),
                d.kind.ring_name(),
                d.tangent_dim,
                c.matches
            ));
        }
    }
    ensure(failures.is_empty(), failures.join("; "))?;
    Ok(seen.join(", "))
}

fn criterion3() -> Check {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let ring = CoeffRing::dual_numbers(f2());
    for e in table1_catalog() {
        let p = &e.presentation;
        for w in classify_trivial_end(p, 3, f2()) {
            let v = string_module(p, &w, f2()).unwrap();
            if v.total_dim() > 4 {
                continue;
            }
            let ext = ext1_dim(&v, &v).unwrap();
            let bf = brute_force_ext(&v, &v, 1 << 40).map_err(|err| format!("{} {}: {err}", e.name, w.render(p)))?;
            let count = count_deformations_exhaustive(&v, ring, 1 << 40)
                .map_err(|err| format!("{} {}: {err}", e.name, w.render(p)))?;
            if bf != ext || count != 1u128 << ext {
                mismatches.push(format!(
                    "{} {}: ext {ext}, brute force {bf}, deformations {count}",
                    e.name,
                    w.render(p)
                ));
            }
            checked += 1;
        }
    }
    ensure(mismatches.is_empty(), mismatches.join("; "))?;
    Ok(format!("{checked} modules, zero mismatches"))
}

fn sigma_matrix(rows: &[Vec<u32>]) -> Matrix {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| i64::from(x)).collect()).collect();
    Matrix::from_rows(f2(), &rows)
}

fn criterion4() -> Check {
    let p = lambda0();
    for (s, arrow) in [("simple 1", "a"), ("simple 2", "b")] {
        let w = make_string(&p, s).unwrap();
        let d = universal_deformation_ring(&p, &w, f2(), &UdrOptions::default()).map_err(|e| e.to_string())?;
        let seq = d.evidence.sequences.first().ok_or(format!("{s}: no sequence"))?;
        ensure(seq.termination == Termination::Finite { n: 1 }, format!("{s}: {:?}", seq.termination))?;
        ensure(seq.words.last().map(String::as_str) == Some(arrow), format!("{s}: V_1 = {:?}", seq.words))?;
        let v1 = string_module(&p, &make_string(&p, arrow).unwrap(), f2()).unwrap();
        let sv = simple_module(&p, w.base, f2());
        let (h, x) = (hom_dim(&v1, &sv).unwrap(), ext1_dim(&v1, &sv).unwrap());
        ensure(h == 1 && x == 0, format!("{s}: hom {h}, ext {x}"))?;
        let sigma = sigma_matrix(&seq.steps[0].sigma);
        ensure(sigma.mul(&sigma).is_zero() && sigma.rank() == 1, format!("{s}: sigma {:?}", seq.steps[0].sigma))?;
        ensure(seq.all_steps_passed, format!("{s}: step checks failed"))?;
    }
    let w = make_string(&p, "b*c*a").unwrap();
    let conn =
        connecting_letters(&p, &w).into_iter().find(|c| c.rendered_letter == "d").ok_or("d does not connect b*c*a")?;
    let seq = build_sequence(&p, &w, &conn, 4, f2()).map_err(|e| e.to_string())?;
    ensure(seq.termination == Termination::Infinite, format!("bca: {:?}", seq.termination))?;
    for n in 1..=4 {
        let word = std::iter::repeat_n("b*c*a", n + 1).collect::<Vec<_>>().join("*d*");
        let parsed = make_string(&p, &word).map_err(|e| format!("(bca d)^{n} bca: {e}"))?;
        ensure(seq.words.get(n) == Some(&parsed.render(&p)), format!("V_{n} = {:?}", seq.words.get(n)))?;
    }
    ensure(seq.validated_up_to >= 4, format!("validated to {}", seq.validated_up_to))?;
    for st in &seq.steps {
        let sigma = sigma_matrix(&st.sigma);
        let ell = st.ell as u32;
        ensure(
            st.passed && sigma.pow(ell + 1).is_zero() && sigma.pow(ell).rank() == st.dim_v0,
            format!("sigma_{} fails", st.ell),
        )?;
    }
    Ok(format!("simples finite at N = 1; bca via d validated to n = {}", seq.validated_up_to))
}

fn criterion5() -> Check {
    let rep = sweep(&RunConfig::default(), None).map_err(|e| e.to_string())?;
    let allowed = [UdrKind::Field, UdrKind::TruncatedPowerSeries(2), UdrKind::PowerSeries];
    let mut problems = Vec::new();
    ensure(rep.summary.algebras == 15, format!("{} algebras", rep.summary.algebras))?;
    for row in &rep.rows {
        let Some(r) = &row.report else {
            problems.push(format!("{} {}: {}", row.algebra, row.module, row.error.clone().unwrap_or_default()));
            continue;
        };
        let k = r.descriptor.kind;
        if k.is_determined() && !allowed.contains(&k) {
            problems.push(format!("{} {}: {}", row.algebra, row.module, k.ring_name()));
        }
        if !k.is_determined() && r.descriptor.evidence.census.is_none() {
            problems.push(format!("{} {}: undetermined without census", row.algebra, row.module));
        }
    }
    let p = lambda0();
    for m in ["c", "d", "c*a", "a*d", "d*b", "b*c"] {
        let w = make_string(&p, m).unwrap();
        let hit = rep.ledger.iter().find(|l| {
            l.algebra == "Q8a"
                && l.aspect == "ring"
                && make_string(&p, &l.module).is_ok_and(|x| word_isomorphic(&p, &x, &w))
        });
        match hit {
            Some(l) if l.published == "k" && !l.computed.is_empty() => {}
            _ => problems.push(format!("ledger lacks {m}")),
        }
    }
    ensure(!rep.has_internal_inconsistency(), "internal inconsistency in sweep")?;
    ensure(problems.is_empty(), problems.join("; "))?;
    let s = &rep.summary;
    Ok(format!(
        "{} modules, rings {:?}, {} published disagreements, {} outside the three rings",
        s.modules, s.rings, s.published_disagreements, s.outside_trichotomy
    ))
}

fn criterion6() -> Check {
    let p = lambda0();
    let labels = |v: &str| p.radical_series(v, 8).map(|r| r.arm_labels(p.quiver())).map_err(|e| e.to_string());
    let want1: Vec<String> = "S2 S2 S1 S1 S2 S2 S1 S1".split(' ').map(String::from).collect();
    let want2: Vec<String> = "S1 S1 S2 S2 S1 S1 S2 S2".split(' ').map(String::from).collect();
    ensure(labels("1")?.contains(&want1), "P1 arm missing")?;
    ensure(labels("2")?.contains(&want2), "P2 arm missing")?;
    Ok("both arms present at depth 8".into())
}

fn criterion7() -> Check {
    let p: Arc<_> = lambda0();
    let words = enumerate_strings(&p, 3);
    let fields: Vec<PrimeField> = [2, 3, 5].iter().map(|&q| PrimeField::new(q).unwrap()).collect();
    let mut pairs = 0;
    for a in &words {
        for b in &words {
            let dims: Vec<(usize, usize)> = fields
                .iter()
                .map(|&f| {
                    let (m, n) = (string_module(&p, a, f).unwrap(), string_module(&p, b, f).unwrap());
                    (hom_dim(&m, &n).unwrap(), ext1_dim(&m, &n).unwrap())
                })
                .collect();
            ensure(dims.windows(2).all(|w| w[0] == w[1]), format!("{} vs {}: {dims:?}", a.render(&p), b.render(&p)))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs agree at q = 2, 3, 5"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 End = k classification of the worked example", criterion1, Duration::from_secs(10)),
        ("2 rings and censuses of the simples, bca and adb", criterion2, Duration::from_secs(60)),
        ("3 tangent space equals Ext^1 (two oracles)", criterion3, Duration::from_secs(600)),
        ("4 sequence machinery", criterion4, Duration::from_secs(600)),
        ("5 catalog sweep with comparison ledger", criterion5, Duration::from_secs(1800)),
        ("6 radical series arms", criterion6, Duration::from_secs(60)),
        ("7 field independence", criterion7, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}, but took {took:.2?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name} [{took:.2?}]: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} [{took:.2?}]: {msg}");
            }
        }
    }
    println!("{} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
