mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ira_fec::analysis::{analyze, count_cycles4, find_stopping_sets, search_ps, SearchSetup, MAX_STOPPING_BOUND};
use ira_fec::code::{build_code_with, paper_code, IraCode, RealizedDegrees, Wiring};
use ira_fec::interleaver::Permutation;

use common::{cycle4_oracle, dense_h, random_perm, smallest_stopping_set};

fn random_code(rng: &mut ChaCha8Rng, max_k: usize, max_rep: usize) -> IraCode {
    let k = rng.random_range(2..=max_k);
    let rep: Vec<usize> = (0..k).map(|_| rng.random_range(1..=max_rep)).collect();
    let edges: usize = rep.iter().sum();
    let mut checks = Vec::new();
    let mut left = edges;
    while left > 0 {
        let d = rng.random_range(1..=3).min(left);
        checks.push(d);
        left -= d;
    }
    let perm = Permutation::new(random_perm(edges, rng)).unwrap();
    let wiring = if rng.random_bool(0.5) { Wiring::Gather } else { Wiring::Scatter };
    build_code_with(&RealizedDegrees { rep_degree: rep }, &perm, &checks, &[], wiring).unwrap()
}

#[test]
fn cycle4_counts_match_gram_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let code = random_code(&mut rng, 40, 6);
        assert_eq!(count_cycles4(&code), cycle4_oracle(&code));
    }
}

#[test]
fn paper_code_cycle4_matches_gram_matrix() {
    let code = paper_code();
    let (total, minimal) = count_cycles4(&code);
    assert_eq!((total, minimal), cycle4_oracle(&code));
    assert!(minimal <= total);
}

#[test]
fn stopping_sets_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut found = 0;
    for _ in 0..60 {
        let code = random_code(&mut rng, 6, 3);
        for bound in 1..=4 {
            let got = find_stopping_sets(&code, bound).unwrap();
            assert_eq!(got.as_ref().map(Vec::len), smallest_stopping_set(&code, bound), "bound {bound}");
            if let Some(set) = got {
                found += 1;
                // the witness really is a stopping set
                let h = dense_h(&code);
                assert!(h.iter().all(|row| set.iter().filter(|&&v| row[v] == 1).count() != 1));
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn stopping_search_is_monotone_in_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let code = random_code(&mut rng, 8, 3);
        let sizes: Vec<Option<usize>> = (1..=5).map(|b| find_stopping_sets(&code, b).unwrap().map(|s| s.len())).collect();
        for w in sizes.windows(2) {
            match (w[0], w[1]) {
                (Some(a), b) => assert_eq!(Some(a), b),
                (None, Some(b)) => assert!(b > 0),
                (None, None) => {}
            }
        }
    }
    assert!(find_stopping_sets(&paper_code(), MAX_STOPPING_BOUND + 1).is_err());
}

#[test]
fn hand_built_triangle_defect() {
    // three degree-2 info nodes on a triangle of checks
    let rep = RealizedDegrees { rep_degree: vec![2, 2, 2] };
    // gather with perm p: slot i reads edge p(i)
    let perm = Permutation::new(vec![0, 2, 3, 4, 5, 1]).unwrap();
    let code = build_code_with(&rep, &perm, &[2, 2, 2], &[], Wiring::Gather).unwrap();
    assert_eq!(code.check_info(0), &[0, 1]);
    assert_eq!(code.check_info(1), &[1, 2]);
    assert_eq!(code.check_info(2), &[2, 0]);
    // u1 and the first parity bit share checks 0 and 1 only
    let report = analyze(&code, 4).unwrap();
    assert_eq!(report.min_stopping_set_size, Some(2));
    assert_eq!(smallest_stopping_set(&code, 4), Some(2));
    let witness = report.min_stopping_set.unwrap();
    let h = dense_h(&code);
    assert!(h.iter().all(|row| witness.iter().filter(|&&v| row[v] == 1).count() != 1));
}

#[test]
fn search_reports_match_direct_analysis() {
    let setup = SearchSetup::paper(3);
    let cands = [(173, 1184), (965, 463), (5, 0)];
    let out = search_ps(&setup, &cands).unwrap();
    assert_eq!(out.evaluated.len(), 3);
    for c in &out.evaluated {
        assert_eq!(c.report, setup.evaluate(c.p, c.s).unwrap().report);
    }
    let best = out.evaluated.iter().min_by_key(|c| (c.report.score(), c.p, c.s)).unwrap();
    assert_eq!((best.p, best.s), (out.best.p, out.best.s));
}
