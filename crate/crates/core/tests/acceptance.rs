//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

// `ensure!(residual < tol)` negates the comparison on purpose: NaN must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use chordal_inverse::chordal::{band_pattern, is_chordal, is_chordless_cycle, Chordality, CliqueTree};
use chordal_inverse::completion::{complete_recursive, complete_via_local_inverse};
use chordal_inverse::factor::{build_a, build_c, build_f, build_g, dual_direction_check, factor_inverse};
use chordal_inverse::fixtures;
use chordal_inverse::localinv::{assemble, block_assembly, BlockAssembly, Sign};
use chordal_inverse::matcore::{invert, ldu_factor, logdet, numerical_rank, DenseMatrix};
use chordal_inverse::symbol::{complete_symbol, finite_section_check, SymbolOptions};
use chordal_inverse::{local_inverse, PartialMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn close(a: &DenseMatrix, b: &DenseMatrix, tol: f64, what: &str) -> Result<(), String> {
    let d = a.max_abs_diff(b);
    ensure!(d <= tol, "{what}: max deviation {d:.3e} exceeds {tol:.0e}");
    Ok(())
}

fn rows(r: &[&[f64]]) -> DenseMatrix {
    DenseMatrix::from_rows(r)
}

fn criterion_1() -> Outcome {
    let m0 = fixtures::tridiagonal_3x3();
    let ct = CliqueTree::from_pattern(m0.pattern()).map_err(|e| e.to_string())?;
    let m = complete_recursive(&m0, &ct).map_err(|e| e.to_string())?.matrix;
    ensure!(
        m[(0, 2)] == 0.25 && m[(2, 0)] == 0.25,
        "fills are {} and {}",
        m[(0, 2)],
        m[(2, 0)]
    );
    let inv = invert(&m).map_err(|e| e.to_string())?;
    close(
        &inv,
        &rows(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]]),
        1e-12,
        "inverse",
    )?;
    let f = ldu_factor(&m).map_err(|e| e.to_string())?;
    close(
        &f.l,
        &rows(&[&[1.0, 0.0, 0.0], &[2.0 / 3.0, 1.0, 0.0], &[1.0 / 3.0, 0.5, 1.0]]),
        1e-12,
        "L",
    )?;
    close(
        &f.d,
        &DenseMatrix::from_diag(&[9.0, 8.0, 6.0]).scale(1.0 / 12.0),
        1e-12,
        "D",
    )?;
    close(&f.u, &f.l.transpose(), 1e-12, "U = L^T")?;
    Ok("fills 1/4, inverse [2 -1 0; -1 2 -1; 0 -1 2], L and D = diag(9,8,6)/12".into())
}

fn criterion_2() -> Outcome {
    let m0 = fixtures::toeplitz_4x4();
    let ct = CliqueTree::from_pattern(m0.pattern()).map_err(|e| e.to_string())?;
    let m = complete_recursive(&m0, &ct).map_err(|e| e.to_string())?.matrix;
    for (pos, want) in [((0, 2), 0.5), ((1, 3), 0.5), ((0, 3), -0.25)] {
        ensure!((m[pos] - want).abs() < 1e-12, "fill {pos:?} = {}", m[pos]);
    }
    let ba = block_assembly(&m0, &ct).map_err(|e| e.to_string())?;
    let clique_inv = rows(&[&[4.0, 2.0], &[2.0, 4.0]]).scale(1.0 / 6.0);
    let plus: Vec<_> = ba.terms.iter().filter(|t| t.sign == Sign::Plus).collect();
    let minus: Vec<_> = ba.terms.iter().filter(|t| t.sign == Sign::Minus).collect();
    ensure!(
        plus.len() == 3 && minus.len() == 2,
        "{} clique and {} overlap terms",
        plus.len(),
        minus.len()
    );
    for t in &plus {
        close(&t.block, &clique_inv, 1e-12, "clique block inverse")?;
    }
    for t in &minus {
        ensure!(
            t.block.rows() == 1 && (t.block[(0, 0)] - 0.5).abs() < 1e-12,
            "overlap inverse {:?}",
            t.block
        );
    }
    let inv = assemble(&ba).map_err(|e| e.to_string())?;
    let expected = rows(&[
        &[4.0, 2.0, 0.0, 0.0],
        &[2.0, 5.0, 2.0, 0.0],
        &[0.0, 2.0, 5.0, 2.0],
        &[0.0, 0.0, 2.0, 4.0],
    ])
    .scale(1.0 / 6.0);
    close(&inv, &expected, 1e-12, "assembled inverse")?;
    Ok("fills 1/2, 1/2, -1/4; three (1/6)[4 2; 2 4] minus two 1/2 overlaps".into())
}

fn criterion_3() -> Outcome {
    let m = fixtures::tridiagonal_3x3_completed();
    let ct = CliqueTree::from_pattern(&band_pattern(3, 1).unwrap()).map_err(|e| e.to_string())?;
    let a = build_a(&ct);
    let a_expected = rows(&[
        &[1.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0],
        &[0.0, 0.0, 1.0],
        &[0.0, 1.0, 0.0],
    ]);
    close(&a, &a_expected, 0.0, "A")?;
    let c = build_c(&m, &ct).map_err(|e| e.to_string())?;
    let c_expected = rows(&[
        &[3.0, 2.0, 0.0, 0.0, 0.0],
        &[2.0, 4.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 4.0, 2.0, 0.0],
        &[0.0, 0.0, 2.0, 3.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, -4.0],
    ])
    .scale(0.25);
    close(&c, &c_expected, 1e-12, "C")?;
    let third = 1.0 / 3.0;
    let f = build_f(&a).map_err(|e| e.to_string())?;
    let f_expected = rows(&[
        &[1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, third, third, 0.0, third],
        &[0.0, 0.0, 0.0, 1.0, 0.0],
    ]);
    close(&f, &f_expected, 1e-12, "F")?;
    let g = build_g(&c, &a, &m).map_err(|e| e.to_string())?;
    let g_expected = rows(&[
        &[1.0, 0.0, 0.0],
        &[0.0, 1.0, 0.5],
        &[0.5, 1.0, 0.0],
        &[0.0, 0.0, 1.0],
        &[-0.5, -1.0, -0.5],
    ]);
    close(&g, &g_expected, 1e-12, "G")?;

    let at = a.transpose();
    let c_inv = invert(&c).map_err(|e| e.to_string())?;
    let m_inv = rows(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]]);
    close(&(&(&at * &c_inv) * &a), &m_inv, 1e-12, "A^T C^-1 A")?;
    close(&(&(&g.transpose() * &c) * &g), &m, 1e-12, "G^T C G")?;
    close(&(&(&f * &c) * &g), &m, 1e-12, "F C G")?;
    let atca = &(&at * &c) * &a;
    close(
        &atca,
        &rows(&[&[3.0, 2.0, 0.0], &[2.0, 4.0, 2.0], &[0.0, 2.0, 3.0]]).scale(0.25),
        1e-12,
        "A^T C A",
    )?;
    ensure!(atca.max_abs_diff(&m) > 0.2, "A^T C A unexpectedly equals M");
    let fi = factor_inverse(&fixtures::tridiagonal_3x3(), &ct).map_err(|e| e.to_string())?;
    close(&fi.inverse(), &m_inv, 1e-12, "factor_inverse")?;
    Ok("A, C, F, G as printed; A^T C^-1 A = M^-1, G^T C G = F C G = M, A^T C A != M".into())
}

fn criterion_4() -> Outcome {
    let m = fixtures::daubechies();
    close(&m, &fixtures::daubechies_printed(), 5e-5, "printed wavelet matrix")?;
    close(&(&m * &m.transpose()), &DenseMatrix::identity(6), 1e-12, "M M^T")?;
    let (b1, b2) = fixtures::daubechies_blocks();
    let (r1, r2) = (numerical_rank(&b1, 1e-12), numerical_rank(&b2, 1e-12));
    ensure!(r1 == 1 && r2 == 1, "ranks of B1, B2 are {r1}, {r2}");
    let ct = CliqueTree::from_pattern(&band_pattern(6, 2).unwrap()).map_err(|e| e.to_string())?;
    ensure!(ct.total_size() == 18, "m = {}", ct.total_size());
    let r = dual_direction_check(&m, &ct, 1e-10).map_err(|e| e.to_string())?;
    for c in &r.checks {
        ensure!(c.pass, "{c}");
    }
    ensure!(r.d_minus_ct < 1e-12, "D - C^T = {:.3e}", r.d_minus_ct);
    Ok("matches printed digits, orthogonal, rank-one B1/B2, four dual identities, D = C^T".into())
}

fn criterion_5() -> Outcome {
    let sc = complete_symbol(&[-1.0, 2.0, -1.0], &SymbolOptions::default()).map_err(|e| e.to_string())?;
    for (k, want) in [(0, 5.0 / 6.0), (1, 2.0 / 6.0)] {
        ensure!((sc.b[k] - want).abs() < 1e-10, "b_{k} = {}", sc.b[k]);
    }
    for k in 0..=8 {
        let want = 2.0 * (-0.5f64).powi(k);
        let got = sc.coefficient(k as i64);
        ensure!((got - want).abs() < 1e-8, "a_{k} = {got}, expected {want}");
    }
    let fs = finite_section_check(&sc, 257).map_err(|e| e.to_string())?;
    ensure!(fs.deviation < 1e-6, "finite section deviation {:.3e}", fs.deviation);
    Ok(format!(
        "b = (2,5,2)/6, a_k = 2(-1/2)^|k| for k <= 8, n = 257 section deviation {:.1e}",
        fs.deviation
    ))
}

fn criterion_6() -> Outcome {
    let instances = common::instances(0x5eed_0006, 70);
    ensure!(instances.len() >= 200, "only {} instances", instances.len());
    let mut worst = [0.0f64; 3];
    for inst in &instances {
        let ct = CliqueTree::from_pattern(inst.m0.pattern()).map_err(|e| format!("{}: {e}", inst.label))?;
        let a = complete_recursive(&inst.m0, &ct).map_err(|e| format!("{}: {e}", inst.label))?;
        let b = complete_via_local_inverse(&inst.m0, &ct).map_err(|e| format!("{}: {e}", inst.label))?;
        let route = a.matrix.max_abs_diff(&b.matrix) / a.matrix.max_abs();
        ensure!(route <= 1e-10, "{}: routes differ by {route:.3e}", inst.label);
        let n = inst.m0.n();
        let li = local_inverse(&inst.m0, &ct).map_err(|e| e.to_string())?;
        let ident = (&li * &a.matrix).max_abs_diff(&DenseMatrix::identity(n));
        ensure!(ident <= 1e-9, "{}: local inverse * M - I = {ident:.3e}", inst.label);
        let inv = invert(&a.matrix).map_err(|e| e.to_string())?;
        let off = a.filled.iter().fold(0.0f64, |m, &(i, j)| m.max(inv[(i, j)].abs())) / inv.max_abs();
        ensure!(off < 1e-9, "{}: off-pattern inverse entry {off:.3e}", inst.label);
        for (w, v) in worst.iter_mut().zip([route, ident, off]) {
            *w = w.max(v);
        }
    }
    Ok(format!(
        "{} instances; worst route gap {:.1e}, identity {:.1e}, off-pattern {:.1e}",
        instances.len(),
        worst[0],
        worst[1],
        worst[2]
    ))
}

fn criterion_7() -> Outcome {
    let instances = common::instances(0x5eed_0006, 70);
    let mut probes = 0;
    for inst in &instances {
        let ct = CliqueTree::from_pattern(inst.m0.pattern()).map_err(|e| e.to_string())?;
        let m = complete_recursive(&inst.m0, &ct).map_err(|e| e.to_string())?.matrix;
        let inv = invert(&m).map_err(|e| e.to_string())?;
        let f0 = logdet(&m).map_err(|e| e.to_string())?;
        let step = 1e-2 * m.max_abs();
        let h = 1e-6 * m.max_abs();
        let bumped = |i: usize, j: usize, s: f64| {
            let mut p = m.clone();
            p[(i, j)] += s;
            p[(j, i)] += s;
            logdet(&p)
        };
        for (i, j) in inst
            .m0
            .pattern()
            .unspecified_positions()
            .into_iter()
            .filter(|&(i, j)| i < j)
        {
            for s in [step, -step] {
                // leaving the positive definite cone is a decrease too
                if let Ok(v) = bumped(i, j, s) {
                    ensure!(v < f0, "{}: logdet rises at ({i},{j}) step {s:+.2e}", inst.label);
                }
            }
            let up = bumped(i, j, h).map_err(|e| e.to_string())?;
            let down = bumped(i, j, -h).map_err(|e| e.to_string())?;
            let slope = (up - down) / (2.0 * h);
            ensure!(
                slope.abs() < 1e-6 * inv.max_abs(),
                "{}: slope {slope:.3e} at ({i},{j}) vs 2*(M^-1)_ij = {:.3e}",
                inst.label,
                2.0 * inv[(i, j)]
            );
            probes += 1;
        }
    }
    Ok(format!(
        "{probes} filled positions: logdet strictly decreases both ways, zero slope"
    ))
}

fn criterion_8() -> Outcome {
    // semiseparability of tridiagonal-inverse completions
    let mut rng = common::rng(0x5eed_0008);
    let mut minors = 0;
    for _ in 0..40 {
        use rand::Rng;
        let n = rng.gen_range(3..=10);
        let full = common::random_spd(&mut rng, n);
        let m0 = PartialMatrix::restrict(&full, &band_pattern(n, 1).unwrap()).unwrap();
        let ct = CliqueTree::from_pattern(m0.pattern()).map_err(|e| e.to_string())?;
        let m = complete_recursive(&m0, &ct).map_err(|e| e.to_string())?.matrix;
        let scale = m.max_abs().powi(2);
        for i1 in 0..n {
            for i2 in i1 + 1..n {
                for j1 in i2..n {
                    for j2 in j1 + 1..n {
                        let det = m[(i1, j1)] * m[(i2, j2)] - m[(i1, j2)] * m[(i2, j1)];
                        ensure!(
                            det.abs() <= 1e-9 * scale,
                            "minor rows {i1},{i2} cols {j1},{j2}: {det:.3e}"
                        );
                        let low = m[(j1, i1)] * m[(j2, i2)] - m[(j2, i1)] * m[(j1, i2)];
                        ensure!(
                            low.abs() <= 1e-9 * scale,
                            "lower minor {j1},{j2} x {i1},{i2}: {low:.3e}"
                        );
                        minors += 2;
                    }
                }
            }
        }
    }

    // rank minimality of the fill, by grid search
    for _ in 0..20 {
        let full = common::random_spd(&mut rng, 3);
        let m0 = PartialMatrix::restrict(&full, &band_pattern(3, 1).unwrap()).unwrap();
        let ct = CliqueTree::from_pattern(m0.pattern()).map_err(|e| e.to_string())?;
        let m = complete_recursive(&m0, &ct).map_err(|e| e.to_string())?.matrix;
        let fill = m[(0, 2)];
        let block = |x: f64| rows(&[&[m[(0, 1)], x], &[m[(1, 1)], m[(1, 2)]]]);
        ensure!(numerical_rank(&block(fill), 1e-9) == 1, "completed block has rank 2");
        let grid_step = 1e-3;
        let mut best = (f64::INFINITY, 0.0);
        for k in -4000..=4000 {
            let x = (fill / grid_step).round() * grid_step + k as f64 * grid_step;
            let sv = chordal_inverse::matcore::singular_values(&block(x));
            let smallest = sv[1] / sv[0];
            if smallest < best.0 {
                best = (smallest, x);
            }
            if (x - fill).abs() > grid_step {
                ensure!(
                    numerical_rank(&block(x), 1e-9) == 2,
                    "rank 1 away from the fill at x = {x}"
                );
            }
        }
        ensure!(
            (best.1 - fill).abs() <= grid_step,
            "grid minimum at {} vs fill {fill}",
            best.1
        );
    }

    // the 4-cycle
    let p = fixtures::cycle4_pattern();
    let Chordality::NotChordal(cycle) = is_chordal(&p) else {
        return Err("4-cycle accepted as chordal".into());
    };
    ensure!(
        is_chordless_cycle(&p, &cycle) && cycle.len() == 4,
        "bad certificate {cycle:?}"
    );
    ensure!(
        CliqueTree::from_pattern(&p).is_err(),
        "clique tree built for the 4-cycle"
    );
    let m = fixtures::cycle4_matrix();
    let mut naive = BlockAssembly::new(4);
    for (i, j) in p.edges() {
        naive.push(vec![i, j], Sign::Plus, invert(&m.principal(&[i, j])).unwrap());
    }
    for v in 0..4 {
        naive.push(vec![v], Sign::Minus, invert(&m.principal(&[v])).unwrap());
    }
    let naive_inv = assemble(&naive).map_err(|e| e.to_string())?;
    let residual = (&m * &naive_inv).max_abs_diff(&DenseMatrix::identity(4));
    ensure!(residual > 0.1, "naive formula residual only {residual:.3e}");
    ensure!(
        (residual - fixtures::CYCLE4_NAIVE_RESIDUAL).abs() < 1e-12,
        "residual {residual} differs from the recorded {}",
        fixtures::CYCLE4_NAIVE_RESIDUAL
    );
    Ok(format!(
        "{minors} semiseparable minors, grid-searched rank minimality, 4-cycle {:?} rejected, naive residual {residual:.4}",
        cycle
    ))
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_chordinv");
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let run = |args: &[&str]| -> Result<(i32, Vec<u8>), String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        Ok((out.status.code().unwrap_or(-1), out.stdout))
    };
    let fixtures = ["tridiag3", "toeplitz4", "pentadiag6", "complete3", "wavelet6"];
    for name in fixtures {
        let path = dir.join(format!("{name}.pmat"));
        let path = path.to_str().unwrap();
        let (code, first) = run(&["verify", "--all", path])?;
        ensure!(
            code == 0,
            "verify {name} exited {code}: {}",
            String::from_utf8_lossy(&first)
        );
        let (_, second) = run(&["verify", "--all", path])?;
        ensure!(first == second, "verify {name} output differs between runs");
    }
    let base = dir.join("tridiag3.pmat");
    let bad = dir.join("tridiag3_corrupt.pmat");
    let (code, report) = run(&["verify", base.to_str().unwrap(), "--completion", bad.to_str().unwrap()])?;
    ensure!(code == 4, "corrupted completion exited {code}");
    let json: serde_json::Value = serde_json::from_slice(&report).map_err(|e| e.to_string())?;
    let zero = json["checks"]
        .as_array()
        .and_then(|c| c.iter().find(|c| c["name"] == "inverse_zero_off_pattern"))
        .ok_or("no zero-inverse check in report")?;
    ensure!(zero["pass"] == false, "zero-inverse check passed on corrupted fill");
    Ok(format!(
        "{} fixtures verify with exit 0 reproducibly; corrupted fill exits 4",
        fixtures.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("3x3 completion, inverse and LDU", criterion_1),
        ("4x4 Toeplitz fills and local assembly", criterion_2),
        ("A^T C A worked example", criterion_3),
        ("wavelet matrix, both directions", criterion_4),
        ("Toeplitz symbol completion", criterion_5),
        ("route equivalence on random chordal SPD instances", criterion_6),
        ("maximality of the determinant", criterion_7),
        ("semiseparability, rank minimality, 4-cycle", criterion_8),
        ("command line end to end", criterion_9),
    ];
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {title} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {title} ({why})", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
