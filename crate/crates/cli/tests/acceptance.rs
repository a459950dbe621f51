//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use hermitian_core::census::CensusTable;
use hermitian_core::classify::{census_by_classifier, census_closed, f_a};
use hermitian_core::codes::{
    check_matrix, max_m, min_distance_by_codewords, min_distance_by_supports, monomial_basis,
    phase_params, weight4_report, Distance3Code,
};
use hermitian_core::curve::{act_on_parabola, lambda_elements};
use hermitian_core::oracle::{brute_census, brute_count, orbit_check};
use hermitian_core::{classify, Elem, Error, FieldCtx, Parabola, RunOptions};

type Outcome = Result<String, String>;

fn field(q: u64) -> FieldCtx {
    FieldCtx::for_q(q).expect("field builds")
}

fn opts() -> RunOptions {
    RunOptions::default()
}

fn census_vs_closed(qs: &[u64]) -> Outcome {
    let mut done = Vec::new();
    for &q in qs {
        let ctx = field(q);
        let t0 = Instant::now();
        let brute = brute_census(&ctx, &opts()).map_err(|e| e.to_string())?;
        let closed = census_closed(q);
        if !brute.same_rows(&closed) {
            return Err(format!("q={q}: brute {:?} vs closed {:?}", brute.rows, closed.rows));
        }
        done.push(format!("q={q} ({:.2}s)", t0.elapsed().as_secs_f64()));
    }
    Ok(done.join(", "))
}

fn classifier_soundness() -> Outcome {
    let mut checked = 0u64;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let ctx = field(q);
        let lifts: Vec<Elem> = ctx.subfield().map(|t| ctx.trace_lift(t)).collect();
        for a in ctx.nonzero() {
            for b in ctx.elements() {
                for &c in &lifts {
                    let p = Parabola { a, b, c };
                    let got = classify(&ctx, &p).map_err(|e| format!("{p}: {e}"))?.count;
                    let want = brute_count(&ctx, &p).map_err(|e| e.to_string())?;
                    if got != want {
                        return Err(format!("q={q} {p}: classify {got}, brute {want}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} parabolas, 0 mismatches"))
}

fn counting_identities() -> Outcome {
    let mut tables: Vec<CensusTable> = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let ctx = field(q);
        tables.push(census_closed(q));
        tables.push(census_by_classifier(&ctx, &opts()).map_err(|e| e.to_string())?);
        tables.push(brute_census(&ctx, &opts()).map_err(|e| e.to_string())?);
    }
    for t in &tables {
        t.check_parabola_identities()
            .map_err(|e| format!("q={} {}: {e}", t.q, t.mode.as_str()))?;
    }
    let q3 = census_closed(3).incidences();
    if q3 != 1944 {
        return Err(format!("q=3 incidences {q3} != 1944"));
    }
    Ok(format!("{} tables, q=3 incidences = {q3}", tables.len()))
}

/// Squares of GF(q) found by squaring, so η does not come from the library.
fn eta_table(ctx: &FieldCtx) -> impl Fn(Elem) -> i64 + '_ {
    let squares: BTreeSet<Elem> = ctx.subfield().map(|y| ctx.mul(y, y)).collect();
    move |x| {
        if x.is_zero() {
            0
        } else if squares.contains(&x) {
            1
        } else {
            -1
        }
    }
}

fn field_identities() -> Outcome {
    let mut cases = 0u64;
    for q in [3u64, 5, 7] {
        let ctx = field(q);
        let elems: Vec<Elem> = ctx.elements().collect();
        let sub: Vec<Elem> = ctx.subfield().collect();

        // x^{q-1} = t: solvable iff N(t) = 1, then exactly q - 1 solutions
        let mut total = 0usize;
        for t in ctx.nonzero() {
            let direct: Vec<Elem> = ctx
                .nonzero()
                .filter(|&x| ctx.pow(x, q - 1) == t)
                .collect();
            let lib = ctx.hilbert90_solutions(t).map_err(|e| e.to_string())?;
            let expected = if ctx.norm(t) == ctx.one() { q as usize - 1 } else { 0 };
            if direct != lib || direct.len() != expected {
                return Err(format!("q={q} hilbert90 t={t}: {} vs {}", direct.len(), lib.len()));
            }
            total += direct.len();
            cases += 1;
        }
        if total as u64 != q * q - 1 {
            return Err(format!("q={q}: hilbert90 total {total}"));
        }

        // F_a(wx) = w^2 F_a(x)
        for a in ctx.nonzero() {
            for &x in &elems {
                let fx = f_a(&ctx, a, x).map_err(|e| e.to_string())?;
                for &w in &sub {
                    let lhs = f_a(&ctx, a, ctx.mul(w, x)).map_err(|e| e.to_string())?;
                    if lhs != ctx.mul(ctx.mul(w, w), fx) {
                        return Err(format!("q={q} scaling a={a} x={x} w={w}"));
                    }
                    cases += 1;
                }
            }
        }

        // counts depend on c only through trace(c)
        for a in ctx.nonzero() {
            for &b in &elems {
                let mut by_trace = std::collections::BTreeMap::new();
                for &c in &elems {
                    let n = brute_count(&ctx, &Parabola { a, b, c }).map_err(|e| e.to_string())?;
                    if *by_trace.entry(ctx.trace(c)).or_insert(n) != n {
                        return Err(format!("q={q} trace class split at ({a},{b},{c})"));
                    }
                    cases += 1;
                }
            }
        }

        // Σ η(aγ² + bγ + c) = −η(a) if b² − 4ac ≠ 0, (q − 1)η(a) otherwise
        let eta = eta_table(&ctx);
        let four = ctx.from_prime(4);
        for &a in sub.iter().filter(|x| !x.is_zero()) {
            for &b in &sub {
                for &c in &sub {
                    let direct: i64 = sub
                        .iter()
                        .map(|&g| eta(ctx.add(ctx.add(ctx.mul(a, ctx.mul(g, g)), ctx.mul(b, g)), c)))
                        .sum();
                    let d = ctx.sub(ctx.mul(b, b), ctx.mul(four, ctx.mul(a, c)));
                    let closed = if d.is_zero() { (q as i64 - 1) * eta(a) } else { -eta(a) };
                    let lib = ctx.char_sum(a, b, c).map_err(|e| e.to_string())?;
                    if direct != closed || lib != direct {
                        return Err(format!("q={q} char sum ({a},{b},{c}): {direct} {closed} {lib}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases, 0 violations"))
}

fn orbit_invariance() -> Outcome {
    let mut parts = Vec::new();
    for (q, pairs) in [(2u64, 48 * 8), (3, 648 * 27)] {
        let ctx = field(q);
        let r = orbit_check(&ctx, 0, &opts()).map_err(|e| e.to_string())?;
        if !r.exhaustive || r.pairs != pairs {
            return Err(format!("q={q}: {} pairs, exhaustive={}", r.pairs, r.exhaustive));
        }
        if !r.violations.is_empty() {
            return Err(format!("q={q}: {} violations", r.violations.len()));
        }
        parts.push(format!("q={q} {} pairs", r.pairs));
    }
    let ctx = field(3);
    let lam = lambda_elements(&ctx);
    let four = ctx.from_prime(4);
    let mut orbits = 0;
    for a in ctx.nonzero() {
        if ctx.sub(ctx.one(), ctx.mul(four, ctx.norm(a))).is_zero() {
            continue;
        }
        let base = Parabola { a, b: Elem::Zero, c: Elem::Zero };
        let orbit: BTreeSet<Parabola> = lam.iter().map(|&s| act_on_parabola(&ctx, s, base)).collect();
        if orbit.len() != 27 {
            return Err(format!("orbit of y={a}x^2 has {} parabolas", orbit.len()));
        }
        orbits += 1;
    }
    parts.push(format!("{orbits} orbits of y=ax^2 with 27 parabolas each"));
    Ok(parts.join(", "))
}

fn table_one() -> Outcome {
    let mut gaps = Vec::new();
    let mut checked = 0;
    let mut d_checked = 0;
    for q in [2u64, 3, 4] {
        let ctx = field(q);
        let n = q * q * q;
        for m in 0..=max_m(q) {
            let basis = monomial_basis(q, m).map_err(|e| e.to_string())?;
            let h = check_matrix(&ctx, m).map_err(|e| e.to_string())?;
            if h.rank(&ctx) != basis.len() {
                return Err(format!("q={q} m={m}: rank {} != |B| {}", h.rank(&ctx), basis.len()));
            }
            let spec = match phase_params(q, m) {
                Ok(s) => s,
                Err(Error::PhaseDecompositionFailed { .. }) => {
                    gaps.push(format!("q={q} m={m}"));
                    continue;
                }
                Err(e) => return Err(format!("q={q} m={m}: {e}")),
            };
            if spec.k != n - basis.len() as u64 {
                return Err(format!("q={q} m={m}: k {} != n - |B| {}", spec.k, n - basis.len() as u64));
            }
            checked += 1;
            let brute_d = if q == 2 {
                min_distance_by_codewords(&ctx, &h)
            } else if q == 3 && spec.phase == 1 {
                min_distance_by_supports(&ctx, &h, spec.d as usize + 1, &opts())
            } else {
                continue;
            };
            if brute_d != Some(spec.d) {
                return Err(format!("q={q} m={m}: d {} but brute {brute_d:?}", spec.d));
            }
            d_checked += 1;
        }
    }
    let gap_note = if gaps.is_empty() {
        String::new()
    } else {
        format!("; no phase row for {}", gaps.join(", "))
    };
    Ok(format!("{checked} codes match k, {d_checked} match d{gap_note}"))
}

fn weight_four() -> Outcome {
    let mut parts = Vec::new();
    for q in [3u64, 4] {
        let ctx = field(q);
        for code in [Distance3Code::Corner, Distance3Code::Edge1, Distance3Code::Edge2] {
            let t0 = Instant::now();
            let r = weight4_report(&ctx, code, true, &opts()).map_err(|e| e.to_string())?;
            if !r.agrees() {
                return Err(format!("q={q} {code:?}: formula {} brute {:?}", r.a4_formula, r.a4_brute));
            }
            parts.push(format!("q={q} j={} A4={} ({:.1}s)", code.j(), r.a4_formula, t0.elapsed().as_secs_f64()));
        }
    }
    Ok(parts.join(", "))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hermitian"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["census", "--q", "3", "--mode", "closed"],
        &["census", "--q", "5", "--mode", "brute", "--out", "csv"],
        &["census", "--q", "4", "--mode", "classifier", "--verify"],
        &["classify", "--q", "9", "--a", "a^3", "--b", "a^7", "--c", "a^2", "--brute"],
        &["code", "--q", "3", "--m", "10", "info"],
        &["code", "--q", "3", "--edge", "3", "--j", "1", "weight4", "--verify"],
        &["code", "--q", "2", "--m", "6", "matrix", "--out", "bin"],
        &["field", "--q", "8"],
    ];
    for cmd in commands {
        let reference = run_cli(cmd)?;
        for workers in ["1", "2", "5"] {
            let mut args = cmd.to_vec();
            args.extend(["--workers", workers]);
            if run_cli(&args)? != reference {
                return Err(format!("{cmd:?} differs with --workers {workers}"));
            }
        }
        if run_cli(cmd)? != reference {
            return Err(format!("{cmd:?} differs between runs"));
        }
    }
    Ok(format!("{} commands x 5 runs byte-identical", commands.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("odd census reproduction q=3,5,7,9", || census_vs_closed(&[3, 5, 7, 9])),
        ("even census reproduction q=2,4,8,16", || census_vs_closed(&[2, 4, 8, 16])),
        ("classifier soundness", classifier_soundness),
        ("counting identities", counting_identities),
        ("field identities q=3,5,7", field_identities),
        ("orbit invariance", orbit_invariance),
        ("code phase table q=2,3,4", table_one),
        ("weight-4 words q=3,4", weight_four),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = check();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
