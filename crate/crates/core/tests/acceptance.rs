//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use oprange::cardinal::{card_series_sum, Cardinal, DimSeq};
use oprange::matrix_core::random::{gaussian_matrix, gaussian_vector, haar_unitary, low_rank_matrix, seeded_rng, TestRng};
use oprange::matrix_core::{adjoint_range_shells, douglas_inclusion, range_sum, ComplexMatrix, Subspace};
use oprange::range_rep::RangeRep;
use oprange::seqspace::{canonical_membership, redistribute, BlockSplit, GeometricTail, SeqVector};
use oprange::unitary::{
    check_failure_radius, check_family, check_stability, interleaved_counterexample, perturbation_rotation,
    rotation_group, FamilyKind, RotationFamilySpec,
};
use rand::Rng;

use Cardinal::{Aleph, Finite};

type Outcome = Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("nonseparable regression", c01_nonseparable_regression),
        ("decision oracle equivalence", c02_decision_oracle),
        ("closed-case law", c03_closed_case),
        ("canonical membership", c04_membership),
        ("range sum via square root", c05_range_sum),
        ("adjoint shell dimensions", c06_adjoint_shells),
        ("redistribution", c07_redistribution),
        ("self-adjoint unitary family", c08_selfadjoint_family),
        ("rotation group", c09_rotation_group),
        ("perturbation rotation", c10_perturbation),
        ("stability bound", c11_stability),
        ("failure radius", c12_failure_radius),
    ];
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => {
                passed += 1;
                println!("criterion {:>2} PASS  {name:<30} {secs:>6.2}s  {detail}", i + 1);
            }
            Err(detail) => println!("criterion {:>2} FAIL  {name:<30} {secs:>6.2}s  {detail}", i + 1),
        }
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rep(perp: Cardinal, prefix: Vec<Cardinal>, tail: Cardinal) -> RangeRep {
    RangeRep::new(perp, DimSeq::new(prefix, tail)).expect("small test values")
}

fn c01_nonseparable_regression() -> Outcome {
    let refuted = rep(Finite(0), vec![Aleph(1)], Finite(1)).decide();
    ensure(!refuted.admits && refuted.witness == Some(1), || format!("aleph_1 shell: {refuted:?}"))?;
    let admitted = rep(Finite(0), vec![Aleph(0)], Finite(1)).decide();
    ensure(admitted.admits && admitted.witness.is_none(), || format!("aleph_0 shell: {admitted:?}"))?;
    Ok("aleph_1 shell refuted at n = 1, aleph_0 shell admitted".into())
}

// Independent cardinal oracle: sums of lists and of an infinite constant tail.
fn oracle_sum(items: &[Cardinal]) -> Cardinal {
    match items.iter().filter(|c| c.is_infinite()).max() {
        Some(&a) => a,
        None => Finite(items.iter().map(|c| if let Finite(v) = c { *v } else { 0 }).sum()),
    }
}

fn oracle_tail(r: &RangeRep, n: usize) -> Cardinal {
    let prefix = r.shells().prefix();
    let mut items = vec![r.perp_dim()];
    items.extend(prefix.iter().skip(n).copied());
    match r.shells().tail() {
        Finite(0) => {}
        Finite(_) => items.push(Aleph(0)),
        a => items.push(a),
    }
    oracle_sum(&items)
}

/// `∀ n ≤ window: dim(ℋ_1 ⊕ … ⊕ ℋ_n) ≤ dim(ℋ_1 ⊕ … ⊕ ℋ_n)⊥`, with the
/// first violating `n`.
fn brute_force(r: &RangeRep, window: usize) -> (bool, Option<usize>) {
    for n in 1..=window {
        let head: Vec<Cardinal> = (1..=n).map(|k| r.shells().entry(k)).collect();
        if oracle_sum(&head) > oracle_tail(r, n) {
            return (false, Some(n));
        }
    }
    (true, None)
}

fn random_card(rng: &mut TestRng) -> Cardinal {
    if rng.random_bool(0.6) {
        Finite(rng.random_range(0..=5))
    } else {
        Aleph(rng.random_range(0..=2))
    }
}

fn random_rep(rng: &mut TestRng) -> RangeRep {
    let len = rng.random_range(0..=6);
    let prefix = (0..len).map(|_| random_card(rng)).collect();
    rep(random_card(rng), prefix, random_card(rng))
}

fn c02_decision_oracle() -> Outcome {
    let mut rng = seeded_rng(2);
    let mut refuted = 0;
    for case in 0..10_000 {
        let r = random_rep(&mut rng);
        let window = r.shells().prefix().len() + 3;
        let (admits, witness) = brute_force(&r, window);
        let d = r.decide();
        ensure(d.admits == admits && d.witness == witness, || {
            format!("case {case}: {r:?} decided {d:?}, brute force ({admits}, {witness:?})")
        })?;
        refuted += usize::from(!admits);
        let mut moved = r.clone();
        for _ in 0..3 {
            let n = rng.random_range(1..=moved.shells().prefix().len() + 1);
            moved = moved.merge_adjacent(n).map_err(|e| format!("case {case}: merge failed: {e}"))?;
        }
        moved = moved.shift_right();
        ensure(moved.admits_disjoint_unitary() == admits, || format!("case {case}: {r:?} changed under {moved:?}"))?;
    }
    Ok(format!("10000 reps ({refuted} refuted) agree with the windowed brute force"))
}

fn c03_closed_case() -> Outcome {
    let values = [Finite(0), Finite(1), Finite(2), Aleph(0)];
    let perps = [Finite(0), Finite(1), Finite(2), Finite(3), Finite(5), Aleph(0), Aleph(1)];
    let mut count = 0;
    for len in 0..=3u32 {
        for code in 0..4usize.pow(len) {
            let prefix: Vec<Cardinal> = (0..len).map(|i| values[(code / 4usize.pow(i)) % 4]).collect();
            for &perp in &perps {
                let r = rep(perp, prefix.clone(), Finite(0));
                let sum = card_series_sum(r.shells()).map_err(|e| e.to_string())?;
                ensure(r.admits_disjoint_unitary() == (sum <= perp), || format!("{r:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} closed reps satisfy admits <=> shell sum <= perp"))
}

fn c04_membership() -> Outcome {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let halving = SeqVector::new(Vec::new(), Some(GeometricTail::new(q(1, 1), q(1, 2)).map_err(|e| e.to_string())?));
    let quartering =
        SeqVector::new(Vec::new(), Some(GeometricTail::new(q(1, 4), q(1, 4)).map_err(|e| e.to_string())?));
    ensure(!canonical_membership(&halving), || "(1, 1/2, 1/4, ...) accepted".into())?;
    ensure(canonical_membership(&quartering), || "(1/4, 1/16, ...) rejected".into())?;
    Ok("(1, 1/2, ...) rejected, (1/4, 1/16, ...) accepted".into())
}

fn random_rank_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> ComplexMatrix {
    let r = rng.random_range(0..=rows.min(cols));
    low_rank_matrix(rng, rows, cols, r)
}

fn c05_range_sum() -> Outcome {
    let mut rng = seeded_rng(5);
    for case in 0..500 {
        let n = rng.random_range(1..=12);
        let t = random_rank_matrix(&mut rng, n, n);
        let s = random_rank_matrix(&mut rng, n, n);
        let r = range_sum(&t, &s).map_err(|e| e.to_string())?;
        let ts = t.hstack(&s);
        let forward = douglas_inclusion(&r, &ts).map_err(|e| e.to_string())?;
        let backward = douglas_inclusion(&ts, &r).map_err(|e| e.to_string())?;
        ensure(forward && backward, || format!("case {case} (n = {n}): forward {forward}, backward {backward}"))?;
    }
    Ok("500 pairs, column spaces equal in both directions".into())
}

/// `U diag(σ) V*` with a mix of spectra: Gaussian, exact powers of two and
/// log-uniform values, with some zeros.
fn random_spectrum_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> ComplexMatrix {
    let k = rows.min(cols);
    let mode = rng.random_range(0..3);
    if mode == 0 {
        return random_rank_matrix(rng, rows, cols);
    }
    let sigma: Vec<f64> = (0..k)
        .map(|_| {
            if rng.random_bool(0.15) {
                0.0
            } else if mode == 1 {
                (-(rng.random_range(0..10) as f64)).exp2()
            } else {
                (-rng.random_range(0.0..12.0f64)).exp2()
            }
        })
        .collect();
    let u = haar_unitary(rng, rows).column_range(0, k);
    let v = haar_unitary(rng, cols).column_range(0, k);
    u.matmul(&ComplexMatrix::from_real_diag(&sigma)).matmul(&v.adjoint())
}

fn c06_adjoint_shells() -> Outcome {
    let mut rng = seeded_rng(6);
    for case in 0..500 {
        let rows = rng.random_range(1..=16);
        let cols = rng.random_range(1..=16);
        let a = random_spectrum_matrix(&mut rng, rows, cols);
        let s = adjoint_range_shells(&a, 1e-12);
        ensure(s.shells_match(), || format!("case {case} ({rows}x{cols}): {s:?}"))?;
    }
    Ok("500 matrices, shell dimensions of A and A* identical".into())
}

fn c07_redistribution() -> Outcome {
    let mut rng = seeded_rng(7);
    for case in 0..1000 {
        let blocks_n = rng.random_range(1..=6);
        let dims: Vec<usize> = (0..blocks_n).map(|_| rng.random_range(1..=3)).collect();
        let offsets: Vec<usize> = dims.iter().scan(0, |acc, d| {
            let o = *acc;
            *acc += d;
            Some(o)
        }).collect();
        let ambient: usize = dims.iter().sum();
        let blocks: Vec<BlockSplit> = (0..blocks_n)
            .map(|n| {
                let components = (0..=n)
                    .map(|k| {
                        let scale = (-rng.random_range(0.0..6.0f64)).exp2();
                        let mut v = vec![Complex64::new(0.0, 0.0); ambient];
                        for (slot, z) in v[offsets[k]..offsets[k] + dims[k]].iter_mut().zip(gaussian_vector(&mut rng, dims[k])) {
                            *slot = z * scale;
                        }
                        v
                    })
                    .collect();
                BlockSplit { components }
            })
            .collect();
        let out = redistribute(&blocks).map_err(|e| e.to_string())?;
        let total: f64 = blocks.iter().map(|b| b.total().iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>().sqrt();
        ensure(out.bound_ok, || format!("case {case}: {} > {}", out.regrouped_weight, out.original_weight))?;
        ensure(out.conservation_residual <= 1e-10 * total.max(1.0), || {
            format!("case {case}: conservation residual {}", out.conservation_residual)
        })?;
    }
    Ok("1000 block instances satisfy the weighted bound and conserve the vector".into())
}

fn c08_selfadjoint_family() -> Outcome {
    let r = check_family(&RotationFamilySpec::plane(), FamilyKind::Selfadjoint, 10).map_err(|e| e.to_string())?;
    ensure(r.pairs.len() == 45, || format!("{} pairs", r.pairs.len()))?;
    ensure(r.pairs.iter().all(|p| p.disjoint), || "a grid pair intersects".into())?;
    ensure(r.max_unitary_residual <= 1e-10 && r.max_hermitian_residual <= 1e-10, || {
        format!("residuals {:.2e}, {:.2e}", r.max_unitary_residual, r.max_hermitian_residual)
    })?;
    Ok(format!("45/45 pairs disjoint, unitary {:.1e}, hermitian {:.1e}", r.max_unitary_residual, r.max_hermitian_residual))
}

fn c09_rotation_group() -> Outcome {
    let mut rng = seeded_rng(9);
    let n = 6;
    let spec = RotationFamilySpec::from_range(&Subspace::span(&gaussian_matrix(&mut rng, n, 2))).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = rng.random_range(-2.0 * PI..2.0 * PI);
        let s = rng.random_range(-2.0 * PI..2.0 * PI);
        for sp in [&spec, &RotationFamilySpec::plane()] {
            let lhs = rotation_group(sp, t + s);
            let rhs = rotation_group(sp, t).matmul(&rotation_group(sp, s));
            worst = worst.max((&lhs - &rhs).norm2());
        }
    }
    ensure(worst <= 1e-10, || format!("group law residual {worst:.2e}"))?;
    let r = check_family(&RotationFamilySpec::plane(), FamilyKind::Group, 10).map_err(|e| e.to_string())?;
    ensure(r.pass, || "grid disjointness failed".into())?;
    Ok(format!("group law residual {worst:.1e}, 45/45 grid pairs disjoint"))
}

fn c10_perturbation() -> Outcome {
    let mut rng = seeded_rng(10);
    let mut worst_norm: f64 = f64::NEG_INFINITY;
    let mut worst_sep: f64 = f64::INFINITY;
    for case in 0..50 {
        let dim = rng.random_range(4..=32);
        let rank = rng.random_range(1..=dim / 4);
        let count = rng.random_range(1..=10);
        let k: u32 = rng.random_range(1..=3);
        let eps = rng.random_range(0.01..=1.0);
        let basis = haar_unitary(&mut rng, dim).column_range(0, rank);
        let kf = f64::from(k);
        let points: Vec<Vec<Complex64>> = (0..count)
            .map(|_| {
                let x = basis.matvec(&gaussian_vector(&mut rng, rank));
                let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let target = if k == 1 { 1.0 } else { rng.random_range(1.0 / kf..kf) };
                x.iter().map(|z| z * (target / norm)).collect()
            })
            .collect();
        let v = haar_unitary(&mut rng, dim);
        let p = perturbation_rotation(&points, &v, eps, k).map_err(|e| format!("case {case}: {e}"))?;
        // Recompute both bounds from W directly.
        let dist = (&p.w - &ComplexMatrix::identity(dim)).norm2();
        let mut sep = f64::INFINITY;
        for x in &points {
            let wvx = p.w.matvec(&v.matvec(x));
            for y in &points {
                sep = sep.min(wvx.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt());
            }
        }
        let delta = eps.sin() / (3.0 * kf);
        ensure(dist <= eps + 1e-9, || format!("case {case}: ‖W − I‖ = {dist} > {eps}"))?;
        ensure(sep >= delta - 1e-9, || format!("case {case}: separation {sep} < {delta}"))?;
        worst_norm = worst_norm.max(dist - eps);
        worst_sep = worst_sep.min(sep / delta);
    }
    Ok(format!("50 instances, max(‖W−I‖ − ε) = {worst_norm:.2e}, min separation/δ = {worst_sep:.2}"))
}

fn c11_stability() -> Outcome {
    let mut deltas = Vec::new();
    let mut worst: f64 = f64::INFINITY;
    for m in [8, 16, 32] {
        let x = interleaved_counterexample(m).map_err(|e| e.to_string())?;
        let r = check_stability(&x.t, &x.v, 100, &mut seeded_rng(7)).map_err(|e| e.to_string())?;
        ensure(r.delta > 0.0, || format!("m = {m}: delta = {}", r.delta))?;
        ensure(r.pass, || format!("m = {m}: {r:?}"))?;
        deltas.push(r.delta);
        worst = worst.min(r.worst_margin);
    }
    let hi = deltas.iter().copied().fold(0.0, f64::max);
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let variation = (hi - lo) / hi;
    ensure(variation < 0.1, || format!("delta varies by {:.1}%: {deltas:?}", 100.0 * variation))?;
    Ok(format!("deltas {deltas:.4?}, variation {:.1e}, worst margin {worst:.3}", variation))
}

fn c12_failure_radius() -> Outcome {
    let mut rng = seeded_rng(12);
    let invertible = gaussian_matrix(&mut rng, 5, 5);
    let cases = [
        (ComplexMatrix::identity(3), Subspace::coordinate(3, &[0, 1])),
        (ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.5]), Subspace::coordinate(3, &[0, 1])),
        (invertible, Subspace::full(5)),
    ];
    let mut eps = Vec::new();
    for (i, (t, k)) in cases.iter().enumerate() {
        let r = check_failure_radius(t, k, 200, &mut rng).map_err(|e| format!("example {}: {e}", i + 1))?;
        ensure(r.eps > 0.0 && r.pass, || format!("example {}: {r:?}", i + 1))?;
        eps.push(r.eps);
    }
    Ok(format!("eps {eps:.4?}, 3 × 200 perturbations keep the bound"))
}
