//! Acceptance run: one line per criterion, exit status 1 if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use afl_core::algebra::{rat, Rational, Ring};
use afl_core::doublestruct::{dominance_suite, identity_suite};
use afl_core::exactalg::{dq_statistic, QRatFun};
use afl_core::geomside::{intersection_number, n_closed, n_step};
use afl_core::latoracle::{
    class_stat_formula, class_stat_table, class_stat_tail, default_window, det_valuation_table,
    det_volume_formula, lattice_report, orbital_from_lattices,
};
use afl_core::orbside::{afl_verify, nprime_closed, nprime_step, orbital_poly};
use afl_core::Result;

const SEED: u64 = 2024;

struct Outcome {
    ok: bool,
    detail: String,
}

fn criterion(id: u32, title: &str, bound: Duration, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(o) => (o.ok, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= bound;
    let pass = ok && in_time;
    println!(
        "criterion {id}: {} | {title} | {detail} | {:.2?} (bound {:?}{})",
        if pass { "PASS" } else { "FAIL" },
        elapsed,
        bound,
        if in_time { "" } else { ", exceeded" }
    );
    pass
}

fn odd(max: u32) -> impl Iterator<Item = u32> {
    (1..=max).step_by(2)
}

fn count_poly_of_degree(f: &QRatFun, degree: usize) -> bool {
    f.to_i64_coeffs()
        .is_some_and(|c| c.len() == degree + 1 && c.iter().all(|&x| x >= 0))
}

fn c1() -> Result<Outcome> {
    let one = QRatFun::one();
    let q_plus_2 = QRatFun::poly(&[2, 1]);
    let (n1, c1) = (intersection_number(2, 1)?, n_closed(1)?);
    let (n3, c3) = (intersection_number(2, 3)?, n_closed(3)?);
    let ok = n1 == one && c1 == one && n3 == q_plus_2 && c3 == q_plus_2 && n3.to_canonical_string() == "q + 2";
    Ok(Outcome { ok, detail: format!("N(1/2) = {n1}, N(3/2) = {n3}; exact") })
}

fn c2() -> Result<Outcome> {
    let mut bad = Vec::new();
    for v in odd(39) {
        let n = intersection_number(2, v)?;
        let ok = n == n_closed(v)? && n == n_step(v)? && count_poly_of_degree(&n, ((v - 1) / 2) as usize);
        if !ok {
            bad.push(v);
        }
    }
    Ok(Outcome { ok: bad.is_empty(), detail: format!("odd v <= 39, three routes; exact; failing v: {bad:?}") })
}

fn c3() -> Result<Outcome> {
    let mut bad = Vec::new();
    let minus_one = QRatFun::from(-1);
    for v in odd(39) {
        let p = orbital_poly(v)?;
        let np = dq_statistic(&p);
        let ok = np == nprime_closed(v)?
            && np == nprime_step(v)?
            && p.degree() == Some(v)
            && p.is_palindromic(v)
            && p.eval(&minus_one).is_zero();
        if !ok {
            bad.push(v);
        }
    }
    Ok(Outcome { ok: bad.is_empty(), detail: format!("odd v <= 39; exact; failing v: {bad:?}") })
}

fn c4() -> Result<Outcome> {
    let mut bad = Vec::new();
    for v in odd(39) {
        if !afl_verify(v)?.pass {
            bad.push(v);
        }
    }
    Ok(Outcome { ok: bad.is_empty(), detail: format!("N = -N' for odd v <= 39; exact; failing v: {bad:?}") })
}

fn c5() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for q in [2u64, 3] {
        for v in [1usize, 3] {
            let start = Instant::now();
            let (w, n) = default_window(v);
            let rep = lattice_report(q, v, w, n)?;
            let qq = rat(q as i64, 1);
            let mut got = orbital_from_lattices(&rep).substitute_q(&qq)?;
            let want = orbital_poly(v as u32)?.substitute_q(&qq)?;
            got.resize(want.len().max(got.len()), rat(0, 1));
            let case_ok = got == want && start.elapsed() <= Duration::from_secs(300);
            ok &= case_ok;
            parts.push(format!("q={q} v={v}: {:?}{}", rep.weighted_poly, if case_ok { "" } else { " MISMATCH" }));
        }
    }
    Ok(Outcome { ok, detail: format!("{}; exact, each case <= 300 s", parts.join(", ")) })
}

fn c6() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, big_q, n) in [(1usize, 4u64, 3usize), (1, 9, 3), (2, 4, 2)] {
        let t = det_valuation_table(a, big_q, n)?;
        let measured: Vec<Rational> = (0..n).map(|k| t.volume(k)).collect();
        let case_ok = measured == det_volume_formula(a, big_q, n);
        ok &= case_ok;
        let shown: Vec<String> = measured.iter().map(ToString::to_string).collect();
        parts.push(format!("a={a} Q={big_q} N={n}: [{}]", shown.join(", ")));
    }
    Ok(Outcome { ok, detail: format!("{}; exact", parts.join(", ")) })
}

fn c7() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [2u64, 3] {
        let mass = rat(1, 1) - rat(1, q as i64);
        // N = 3 resolves buckets 0, 1, 2; N = 5 resolves w = 3 and w = 4.
        for n in [3usize, 5] {
            let t = class_stat_table(q, n)?;
            let buckets = (0..n).all(|w| t.volume(w) == class_stat_formula(q, w));
            let odd_zero = (1..n).step_by(2).all(|w| Ring::is_zero(&t.volume(w)));
            let case_ok = buckets && odd_zero && t.tail == class_stat_tail(q, n) && t.total() == mass;
            ok &= case_ok;
            let shown: Vec<String> = (0..n).map(|w| t.volume(w).to_string()).collect();
            parts.push(format!("q={q} N={n}: [{}] tail {}", shown.join(", "), t.tail));
        }
    }
    Ok(Outcome { ok, detail: format!("{}; exact", parts.join(", ")) })
}

fn c8() -> Result<Outcome> {
    let reports = identity_suite(SEED, 200);
    let failing: Vec<&str> = reports.iter().filter(|r| !r.pass()).map(|r| r.ring.as_str()).collect();
    let shortcut = dominance_suite(SEED, 50);
    Ok(Outcome {
        ok: failing.is_empty() && shortcut.pass(),
        detail: format!(
            "{} rings x 200 points, failing rings {failing:?}; res_shortcut {}/{} pairs",
            reports.len(),
            shortcut.agreed,
            shortcut.pairs
        ),
    })
}

fn c9() -> Result<Outcome> {
    let n1 = intersection_number(3, 1)?;
    let n5 = intersection_number(3, 5)?;
    Ok(Outcome {
        ok: n1.is_polynomial() && n5.is_polynomial(),
        detail: format!("N(1/3) = {n1}, N(5/3) = {n5}; poles cancel"),
    })
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "exact small values", s(1), c1),
        criterion(2, "geometric side, three routes", s(30), c2),
        criterion(3, "analytic side, three routes", s(10), c3),
        criterion(4, "linear AFL N = -N'", s(30), c4),
        criterion(5, "lattice oracle vs orbital polynomial", s(4 * 300), c5),
        criterion(6, "determinant-valuation volumes", s(120), c6),
        criterion(7, "unramified class statistic", s(120), c7),
        criterion(8, "double-structure identities", s(30), c8),
        criterion(9, "h = 3 smoke", s(60), c9),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
