//! Acceptance criteria. Each test prints one PASS/FAIL line.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starlike::index::{
    compare_indices, default_tol, index_approx, index_bracket, lower_bound_star, upper_bound_lepovic, Verdict,
    DEFAULT_MAX_STEPS,
};
use starlike::partitions::{
    alpha, classify_covering, enumerate_omega, enumerate_omega_all, maximal_class, smallest, successor,
    CoveringKind, Partition,
};
use starlike::rational::{dyadic, int, ratio, to_f64};
use starlike::spectra::{count_eigenvalues, diagonalize, EigenCount};
use starlike::trees::RootedTree;
use starlike::verify::{
    oracle_index, verify_b_lemma_all, verify_covering_theorem, verify_main_theorem, verify_pairwise_order,
    verify_residual_root_all, ORACLE_TOL,
};

fn criterion(id: u32, name: &str, limit: Duration, check: impl FnOnce() -> Result<String, String>) {
    let started = Instant::now();
    let result = check();
    let elapsed = started.elapsed();
    let result = result.and_then(|summary| {
        if elapsed <= limit {
            Ok(summary)
        } else {
            Err(format!("took {elapsed:?}, limit {limit:?}"))
        }
    });
    match &result {
        Ok(summary) => println!("AC{id} PASS {name}: {summary} [{:.3}s]", elapsed.as_secs_f64()),
        Err(why) => println!("AC{id} FAIL {name}: {why} [{:.3}s]", elapsed.as_secs_f64()),
    }
    assert!(result.is_ok(), "AC{id} {name}: {}", result.unwrap_err());
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn parts(text: &str) -> Partition {
    text.parse().unwrap()
}

fn list(texts: &[&str]) -> Vec<Partition> {
    texts.iter().map(|t| parts(t)).collect()
}

#[test]
fn ac1_omega_7_reproduction() {
    criterion(1, "omega_7 order", Duration::from_secs(1), || {
        let expected = [
            "1,1,5",
            "1,2,4",
            "1,3,3",
            "2,2,3",
            "1,1,1,4",
            "1,1,2,3",
            "1,2,2,2",
            "1,1,1,1,3",
            "1,1,1,2,2",
            "1,1,1,1,1,2",
            "1,1,1,1,1,1,1",
        ];
        let out = Command::new(env!("CARGO_BIN_EXE_starlike"))
            .args(["enumerate", "--n", "8", "--format", "csv"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("exit status {}", out.status))?;
        let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
        let emitted: Vec<String> = reader
            .records()
            .map(|r| r.map(|r| r[3].to_owned()).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        ensure(emitted == expected, || format!("emitted {emitted:?}"))?;
        Ok("11 partitions in order".into())
    });
}

#[test]
fn ac2_omega_11_3_structure() {
    criterion(2, "omega_(11,3) classes", Duration::from_secs(1), || {
        let omega = enumerate_omega(12, 3).map_err(|e| e.to_string())?;
        let expected_classes = [
            list(&["1,1,9", "1,2,8", "1,3,7", "1,4,6", "1,5,5"]),
            list(&["2,2,7", "2,3,6", "2,4,5"]),
            list(&["3,3,5", "3,4,4"]),
        ];
        let flat: Vec<Partition> = expected_classes.iter().flatten().cloned().collect();
        ensure(omega == flat, || format!("enumeration {omega:?}"))?;

        let mut classes: Vec<Vec<Partition>> = Vec::new();
        for p in &omega {
            let class = maximal_class(p);
            if !classes.contains(&class) {
                classes.push(class);
            }
        }
        ensure(classes == expected_classes, || format!("classes {classes:?}"))?;

        let (mut type_ii, mut type_iii) = (0, 0);
        for w in omega.windows(2) {
            match classify_covering(&w[0], &w[1]).map_err(|e| e.to_string())? {
                CoveringKind::TypeII => type_ii += 1,
                CoveringKind::TypeIII(_) => type_iii += 1,
                CoveringKind::TypeI => return Err("type I inside one part count".into()),
            }
        }
        ensure(type_ii == 7 && type_iii == 2, || format!("II={type_ii} III={type_iii}"))?;
        Ok("10 partitions, classes 5/3/2, II=7 III=2".into())
    });
}

#[test]
fn ac3_worked_diagonalization() {
    criterion(3, "S(1,3,3) diagonalization", Duration::from_secs(1), || {
        let tree = RootedTree::starlike(&parts("1,3,3"));
        let counts = count_eigenvalues(&tree, &int(1));
        ensure(
            counts == EigenCount { below: 5, equal: 1, above: 2 },
            || format!("counts {counts:?}"),
        )?;
        let mut values = diagonalize(&tree, &int(-1)).values;
        values.sort();
        let mut expected = vec![int(-1), int(-1), int(-1), ratio(-1, 2), ratio(-1, 2), int(0), int(2), int(2)];
        expected.sort();
        ensure(values == expected, || format!("values {values:?}"))?;
        Ok("(5,1,2) and {-1 x3, -1/2 x2, 0, 2 x2}".into())
    });
}

#[test]
fn ac4_main_theorem_to_16() {
    criterion(4, "main ordering n=4..16", Duration::from_secs(60), || {
        let mut pairs = 0;
        let mut spot = 0;
        for n in 4..=16 {
            let report = verify_main_theorem(n).map_err(|e| e.to_string())?;
            ensure(report.passed(), || format!("n={n}: {:?}", report.failures))?;
            ensure(report.certificates.len() == report.pairs_checked, || format!("n={n}: missing certificates"))?;
            for cert in &report.certificates {
                ensure(cert.check(), || format!("n={n}: witness rejected for {} < {}", cert.lower, cert.upper))?;
            }
            pairs += report.pairs_checked;

            // Non-consecutive pairs, sampled.
            let pairwise = verify_pairwise_order(n, 1000, n as u64).map_err(|e| e.to_string())?;
            ensure(pairwise.passed(), || format!("n={n} pairwise: {:?}", pairwise.failures))?;
            spot += pairwise.pairs_checked;
        }
        Ok(format!("{pairs} consecutive pairs certified, {spot} spot pairs"))
    });
}

#[test]
fn ac5_successor_chain_to_20() {
    criterion(5, "successor chain n=4..20", Duration::from_secs(30), || {
        let mut total = 0;
        for n in 4..=20 {
            let expected = enumerate_omega_all(n).map_err(|e| e.to_string())?;
            let mut chain = vec![smallest(n, 3).map_err(|e| e.to_string())?];
            while let Some(next) = successor(chain.last().unwrap()) {
                chain.push(next);
            }
            ensure(chain == expected, || format!("n={n}: chain differs from enumeration"))?;
            for w in chain.windows(2) {
                classify_covering(&w[0], &w[1]).map_err(|e| format!("n={n}: {e}"))?;
            }
            let report = verify_covering_theorem(n).map_err(|e| e.to_string())?;
            ensure(report.passed(), || format!("n={n}: {:?}", report.failures))?;
            total += chain.len();
        }
        Ok(format!("{total} partitions reproduced"))
    });
}

#[test]
fn ac6_branch_count_bounds() {
    criterion(6, "star and branch-count bounds n<=16", Duration::from_secs(30), || {
        let slack = dyadic(20);
        let mut checked = 0;
        for n in 4..=16 {
            for p in enumerate_omega_all(n).map_err(|e| e.to_string())? {
                let tree = RootedTree::starlike(&p);
                let bracket = index_bracket(&tree, &default_tol()).map_err(|e| e.to_string())?;
                ensure(bracket.is_certified(&tree), || format!("{p}: bracket not certified"))?;
                let lower = lower_bound_star(p.r()).unwrap() - &slack;
                let upper = upper_bound_lepovic(p.r()).unwrap();
                ensure(bracket.lo >= lower, || format!("{p}: lo below star bound"))?;
                ensure(bracket.hi <= upper, || format!("{p}: hi above r/sqrt(r-1)"))?;
                checked += 1;
            }
        }
        Ok(format!("{checked} starlikes within bounds"))
    });
}

#[test]
fn ac7_oracle_agreement() {
    criterion(7, "oracle agreement n<=12", Duration::from_secs(30), || {
        let tol = 1e-6;
        let agree = |tree: &RootedTree, label: &str| -> Result<(), String> {
            let exact = to_f64(&index_approx(tree, &default_tol()).map_err(|e| e.to_string())?);
            let float = oracle_index(tree, ORACLE_TOL).map_err(|e| e.to_string())?;
            ensure((exact - float).abs() <= tol, || format!("{label}: certified {exact}, oracle {float}"))
        };
        let mut starlikes = 0;
        for n in 4..=12 {
            for p in enumerate_omega_all(n).map_err(|e| e.to_string())? {
                agree(&RootedTree::starlike(&p), &p.to_string())?;
                starlikes += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..100 {
            let n = rng.gen_range(2..=12);
            let tree = RootedTree::random(n, &mut rng);
            agree(&tree, &format!("random tree #{k}"))?;
        }
        Ok(format!("{starlikes} starlikes and 100 random trees within 1e-6"))
    });
}

fn corpus() -> Vec<RootedTree> {
    let mut trees: Vec<RootedTree> = (2..=12).map(RootedTree::path).collect();
    for n in 4..=10 {
        trees.extend(enumerate_omega_all(n).unwrap().iter().map(RootedTree::starlike));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    trees.extend((0..100).map(|_| {
        let n = rng.gen_range(2..=12);
        RootedTree::random(n, &mut rng)
    }));
    trees
}

#[test]
fn ac8_monotonicity_lemmas() {
    criterion(8, "alpha and subgraph monotonicity", Duration::from_secs(60), || {
        let mut alphas = 0;
        for n in 4..=14 {
            for p in enumerate_omega_all(n).map_err(|e| e.to_string())? {
                let tp = RootedTree::starlike(&p);
                for j in 1..p.r() {
                    for i in 0..j {
                        let Ok(q) = alpha(&p, i, j) else { continue };
                        let res = compare_indices(&tp, &RootedTree::starlike(&q), DEFAULT_MAX_STEPS)
                            .map_err(|e| format!("{p} vs {q}: {e}"))?;
                        ensure(res.verdict == Verdict::Less, || format!("alpha({i},{j}) of {p} lowered the index"))?;
                        alphas += 1;
                    }
                }
            }
        }
        let mut leaves = 0;
        for tree in corpus() {
            for v in 0..tree.vertex_count() {
                let grown = tree.with_leaf(v);
                let res = compare_indices(&tree, &grown, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
                ensure(res.verdict == Verdict::Less && res.check(&tree, &grown), || {
                    format!("leaf at {v} did not raise the index of {}", tree.to_edge_list_text())
                })?;
                leaves += 1;
            }
        }
        Ok(format!("{alphas} alpha operations, {leaves} leaf additions"))
    });
}

#[test]
fn ac9_b_lemma_suite() {
    criterion(9, "b-sequence lemma and residual root n<=14", Duration::from_secs(30), || {
        let mut checked = 0;
        for n in 4..=14 {
            let b = verify_b_lemma_all(n, 40).map_err(|e| e.to_string())?;
            ensure(b.passed(), || format!("n={n}: {:?}", b.failures))?;
            let r = verify_residual_root_all(n, 40).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("n={n}: {:?}", r.failures))?;
            checked += b.pairs_checked;
        }
        Ok(format!("{checked} partitions pass both checks"))
    });
}
