use afl_core::algebra::rat;
use afl_core::latoracle::{det_valuation_table, det_volume_formula, lattice_report, orbital_from_lattices};
use afl_core::orbside::orbital_poly;

fn matches_orbital(q: u64, v: usize, w: usize) {
    let rep = lattice_report(q, v, w, 2 * w + v + 2).unwrap();
    assert!(rep.checks_pass(), "{:?}", rep.checks);
    let qq = rat(q as i64, 1);
    let got = orbital_from_lattices(&rep).substitute_q(&qq).unwrap();
    let want = orbital_poly(v as u32).unwrap().substitute_q(&qq).unwrap();
    assert_eq!(got, want);
}

#[test]
fn lattice_oracle_beyond_acceptance_range() {
    matches_orbital(2, 5, 8);
    matches_orbital(3, 5, 8);
    matches_orbital(5, 3, 5);
}

#[test]
fn lattice_window_robustness_v5() {
    let a = lattice_report(2, 5, 8, 25).unwrap();
    let b = lattice_report(2, 5, 9, 28).unwrap();
    assert_eq!(a.per_class, b.per_class);
    assert_eq!(a.weighted_poly, b.weighted_poly);
}

#[test]
fn lattice_report_independent_of_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| lattice_report(3, 3, 5, 15).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn det_volumes_other_fields() {
    for (a, q, n) in [(1, 2, 5), (1, 5, 3), (1, 7, 2), (2, 2, 3), (2, 3, 2)] {
        let t = det_valuation_table(a, q, n).unwrap();
        let got: Vec<_> = (0..n).map(|k| t.volume(k)).collect();
        assert_eq!(got, det_volume_formula(a, q, n), "a={a} Q={q} N={n}");
        assert_eq!(t.total(), rat(1, 1));
    }
}
