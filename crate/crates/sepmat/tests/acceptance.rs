//! Acceptance suite: one test per release criterion. Each test prints a
//! single PASS line when it completes (run with `--nocapture` to see them);
//! a failed assertion is the corresponding FAIL.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepmat::{
    columns_as_code, concatenate, decode_ssm, expurgate_to_ssc, is_bar_separable, is_disjunct,
    is_ssc, is_ssm, is_ssm_bruteforce, known_bounds, minimal_frames, random_code, rate_bound,
    run_campaign, search_max, BinaryMatrix, BitVec, QaryCode, Sampler, SearchOptions,
    SearchProperty, SupportSet, Witness,
};

const EXAMPLE1: &str =
    "7 8\n10000001\n11000000\n01100100\n00110000\n00010010\n00001100\n00001011\n";

fn example1() -> BinaryMatrix {
    BinaryMatrix::parse_text(EXAMPLE1).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, t: usize, n: usize, density: f64) -> BinaryMatrix {
    let columns = (0..n)
        .map(|_| BitVec::from_bits((0..t).map(|_| rng.random_bool(density))))
        .collect();
    BinaryMatrix::from_columns(columns).unwrap()
}

/// All binary matrices with `t` rows and `n` columns, by entry bitmask.
fn all_matrices(t: usize, n: usize) -> impl Iterator<Item = BinaryMatrix> {
    (0u64..(1 << (t * n))).map(move |mask| {
        let columns = (0..n)
            .map(|j| BitVec::from_bits((0..t).map(|i| mask >> (j * t + i) & 1 == 1)))
            .collect();
        BinaryMatrix::from_columns(columns).unwrap()
    })
}

#[test]
fn criterion_01_example1_golden_triple() {
    let start = Instant::now();
    let m = example1();
    assert!(is_ssm(&m, 2).unwrap().holds, "2-SSM verdict");
    assert!(is_bar_separable(&m, 2).unwrap().holds, "2̄-SM verdict");
    let dm = is_disjunct(&m, 2).unwrap();
    assert!(!dm.holds, "2-DM verdict");
    assert_eq!(
        dm.witness,
        Some(Witness::Covered {
            subset: SupportSet::from_indices([1, 3]),
            covered: 2
        })
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 01 PASS: golden 7x8 matrix is 2-SSM, 2̄-SM, not 2-DM (witness {{1,3}} covers 2) in {elapsed:?}");
}

#[test]
fn criterion_02_decoding_completeness() {
    let start = Instant::now();
    let m = example1();
    let report = run_campaign(&m, 2, u64::MAX, 0, Sampler::Exhaustive).unwrap();
    assert_eq!(report.trials, 36);
    assert_eq!(report.successes, 36);
    assert!(report.failure_examples.is_empty());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 02 PASS: 36/36 positive sets of size <= 2 recovered exactly in {elapsed:?}");
}

#[test]
fn criterion_03_rate_bound_reproduction() {
    let report = rate_bound(4, 64).unwrap();
    let closed_form = 0.5 - 22f64.log2() / 16.0;
    assert!((report.bound - closed_form).abs() < 1e-12);
    assert!((report.bound - 0.221286).abs() < 1e-6);
    assert_eq!(report.m_star, Some(3));
    assert_eq!((report.bound * 1e4).round() / 1e4, 0.2213);
    for q in [2usize, 3, 5, 8] {
        let other = rate_bound(q, 64).unwrap();
        assert!(
            other.bound < report.bound,
            "q={q} bound {} not strictly below q=4 bound {}",
            other.bound,
            report.bound
        );
    }
    println!(
        "criterion 03 PASS: rate bound at q=4 is {:.6} (m*=3), rounds to 0.2213; q in {{2,3,5,8}} strictly smaller",
        report.bound
    );
}

#[test]
fn criterion_04_known_bounds_table() {
    let table = known_bounds();
    let find = |name: &str| table.entries.iter().find(|e| e.quantity == name).unwrap();
    let rd = find("R_D(2)");
    assert_eq!((rd.lower, rd.upper), (0.1814, 0.3219));
    let rs = find("R_S(2bar)");
    assert_eq!((rs.lower, rs.upper), (0.3135, 0.4998));
    let r = find("R(2)");
    assert_eq!((r.lower, r.upper), (0.1814, 0.4998));
    assert_eq!(r.improved_lower, Some(0.2213));
    println!("criterion 04 PASS: known-bounds table matches the stated constants exactly");
}

#[test]
fn criterion_05_oracle_equivalence_sweep() {
    let start = Instant::now();
    // exhaustive part: every matrix with t <= 3, n <= 5
    let mut exhaustive_checked = 0u64;
    for t in 1..=3 {
        for n in 2..=5 {
            for m in all_matrices(t, n) {
                let fast = is_ssm(&m, 2).unwrap();
                let brute = is_ssm_bruteforce(&m, 2, false).unwrap();
                assert_eq!(fast.holds, brute.holds, "disagreement on {}", m.to_text());
                exhaustive_checked += 1;
            }
        }
    }
    // random part: 10,000 matrices with t <= 5, n <= 8
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..10_000 {
        let t = rng.random_range(1..=5);
        let n = rng.random_range(2..=8);
        let density = [0.2, 0.35, 0.5][rng.random_range(0..3)];
        let m = random_matrix(&mut rng, t, n, density);
        let fast = is_ssm(&m, 2).unwrap();
        let brute = is_ssm_bruteforce(&m, 2, false).unwrap();
        assert_eq!(fast.holds, brute.holds, "disagreement on {}", m.to_text());
        if let Some(w) = fast.witness {
            assert!(w.verify_matrix(&m), "stale witness on {}", m.to_text());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "criterion 05 PASS: fast SSM checker agrees with the brute-force oracle on 10,000 random + {exhaustive_checked} exhaustive matrices in {elapsed:?}"
    );
}

#[test]
fn criterion_06_lemma_chain_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut checked = 0u64;
    let mut check = |m: &BinaryMatrix| {
        let n = m.items();
        let ssm = is_ssm(m, 2).unwrap().holds;
        let sm = is_bar_separable(m, 2).unwrap().holds;
        if n > 2 {
            let dm = is_disjunct(m, 2).unwrap().holds;
            assert!(!dm || ssm, "2-DM not 2-SSM: {}", m.to_text());
        }
        assert!(!ssm || sm, "2-SSM not 2̄-SM: {}", m.to_text());
        let dm1 = is_disjunct(m, 1).unwrap().holds;
        assert!(!sm || dm1, "2̄-SM not 1-DM: {}", m.to_text());
        let plain = is_ssm_bruteforce(m, 2, false).unwrap().holds;
        let bar = is_ssm_bruteforce(m, 2, true).unwrap().holds;
        assert_eq!(plain, bar, "bar equivalence broken: {}", m.to_text());
        checked += 1;
    };
    for t in 1..=3 {
        for n in 2..=5 {
            for m in all_matrices(t, n) {
                check(&m);
            }
        }
    }
    for _ in 0..10_000 {
        let t = rng.random_range(1..=5);
        let n = rng.random_range(2..=8);
        let density = [0.2, 0.35, 0.5][rng.random_range(0..3)];
        let m = random_matrix(&mut rng, t, n, density);
        check(&m);
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 06 PASS: DM => SSM => SM chain, SM => (d-1)-DM, and d-SSM <=> d̄-SSM on {checked} matrices with zero counterexamples in {elapsed:?}"
    );
}

#[test]
fn criterion_07_bridge_lemmas() {
    let start = Instant::now();
    // 1,000 seeded expurgated codes -> concatenation must be 2-SSM
    for seed in 0..1_000u64 {
        let t = 1 + (seed % 4) as usize;
        let n = 2 + (seed % 7) as usize;
        let q = 2 + (seed % 3) as usize;
        let raw = random_code(t, n, q, seed).unwrap();
        let (code, _log) = expurgate_to_ssc(&raw, 2).unwrap();
        assert!(is_ssc(&code, 2).unwrap().holds);
        let m = concatenate(&code);
        // strong 2-separability is only defined for two or more columns;
        // expurgation may shrink tiny codes to a single word
        if m.items() >= 2 {
            assert!(
                is_ssm(&m, 2).unwrap().holds,
                "concatenation of seed {seed} is not 2-SSM"
            );
            if m.items() <= 10 {
                assert!(is_ssm_bruteforce(&m, 2, false).unwrap().holds);
            }
        }
    }
    // every swept 2-SSM matrix -> its columns form a 2̄-SSC
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut ssm_hits = 0u64;
    for _ in 0..4_000 {
        let t = rng.random_range(1..=5);
        let n = rng.random_range(2..=8);
        let density = [0.2, 0.35, 0.5][rng.random_range(0..3)];
        let m = random_matrix(&mut rng, t, n, density);
        if is_ssm(&m, 2).unwrap().holds {
            ssm_hits += 1;
            let code = columns_as_code(&m).expect("SSM columns are distinct");
            assert!(is_ssc(&code, 2).unwrap().holds, "matrix {}", m.to_text());
        }
    }
    assert!(ssm_hits > 50, "sweep found too few 2-SSM matrices");
    let elapsed = start.elapsed();
    println!(
        "criterion 07 PASS: 1,000 expurgated codes concatenate to 2-SSMs and {ssm_hits} swept 2-SSMs map to 2̄-SSCs, zero failures, in {elapsed:?}"
    );
}

#[test]
fn criterion_08_minimal_frame_bound() {
    let start = Instant::now();
    let mut checked_frames = 0u64;
    // definition-level oracle, deliberately ignorant of the size bound: all
    // subsets with the base's descendant code, filtered to irredundant ones
    let minimal_frames_oracle = |code: &QaryCode, base: &SupportSet| -> Vec<SupportSet> {
        let target = sepmat::descendant(code, base).unwrap();
        let n = code.size();
        let all: Vec<SupportSet> = (1usize..(1 << n))
            .map(|mask| {
                SupportSet::from_indices((1..=n).filter(|&j| mask >> (j - 1) & 1 == 1))
            })
            .filter(|cand| sepmat::descendant(code, cand).unwrap() == target)
            .collect();
        all.iter()
            .filter(|f| {
                f.iter().all(|w| {
                    let without = SupportSet::from_indices(f.iter().filter(|&x| x != w));
                    without.is_empty() || !all.contains(&without)
                })
            })
            .cloned()
            .collect()
    };
    let mut check_code = |code: &QaryCode| {
        let t = code.length();
        let bound = 2 * t - t + 1;
        for j in 1..=code.size() {
            for k in j..=code.size() {
                let base = if j == k {
                    SupportSet::singleton(j)
                } else {
                    SupportSet::from_indices([j, k])
                };
                let mut frames = minimal_frames(code, &base).unwrap().frames;
                let mut expected = minimal_frames_oracle(code, &base);
                frames.sort();
                expected.sort();
                assert_eq!(
                    frames,
                    expected,
                    "pruned search missed a minimal frame of {base} in {}",
                    code.to_text()
                );
                for f in &expected {
                    checked_frames += 1;
                    assert!(
                        f.len() <= bound,
                        "frame {f} of base {base} exceeds bound {bound} in {}",
                        code.to_text()
                    );
                }
            }
        }
    };
    // complete codes Q^t for small alphabets
    for q in 2..=3usize {
        for t in 1..=3usize {
            if q.pow(t as u32) > 8 {
                continue;
            }
            let words: Vec<Vec<u16>> = (0..q.pow(t as u32))
                .map(|x| {
                    let mut w = Vec::with_capacity(t);
                    let mut rest = x;
                    for _ in 0..t {
                        w.push((rest % q) as u16);
                        rest /= q;
                    }
                    w
                })
                .collect();
            check_code(&QaryCode::new(q, words).unwrap());
        }
    }
    // seeded duplicate-free random codes across the full parameter box
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut sampled = 0;
    while sampled < 400 {
        let t = rng.random_range(1..=3);
        let n = rng.random_range(2..=8);
        let q = rng.random_range(2..=3);
        let words: Vec<Vec<u16>> = (0..n)
            .map(|_| (0..t).map(|_| rng.random_range(0..q) as u16).collect())
            .collect();
        let code = QaryCode::new(q, words).unwrap();
        if code.duplicate_words().is_some() {
            continue;
        }
        sampled += 1;
        check_code(&code);
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 08 PASS: {checked_frames} minimal frames at t <= 3, n <= 8, q <= 3 all within the t*d-t+1 bound in {elapsed:?}"
    );
}

#[test]
fn criterion_09_complexity_check() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut points: Vec<(f64, f64)> = Vec::new(); // (t*n, mean ops)
    for &t in &[10usize, 40, 70, 100] {
        for &n in &[100usize, 500, 1000, 2000] {
            let weight = (t / 5).max(1);
            let columns: Vec<BitVec> = (0..n)
                .map(|_| {
                    let mut col = BitVec::zeros(t);
                    for i in rand::seq::index::sample(&mut rng, t, weight) {
                        col.set(i, true);
                    }
                    col
                })
                .collect();
            let m = BinaryMatrix::from_columns(columns).unwrap();
            let mut total_ops = 0u64;
            let trials = 8;
            for _ in 0..trials {
                // plant a disjoint pair so the outcome weight is exactly 2w
                let planted = loop {
                    let pair = rand::seq::index::sample(&mut rng, n, 2);
                    let (a, b) = (pair.index(0) + 1, pair.index(1) + 1);
                    if !m.column(a).intersects(m.column(b)) {
                        break SupportSet::from_indices([a, b]);
                    }
                };
                let r = m.boolean_sum(&planted).unwrap();
                let res = decode_ssm(&m, &r, 2).unwrap();
                // hard bound: both phases probe at most t*n entries each
                assert!(res.ops_counted <= 2 * (t * n) as u64);
                total_ops += res.ops_counted;
            }
            points.push(((t * n) as f64, total_ops as f64 / trials as f64));
        }
    }
    // least-squares fit ops = a*(t*n) + b
    let len = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r_squared = 1.0 - ss_res / ss_tot;
    assert!(
        r_squared >= 0.99,
        "linear fit of ops vs t*n has R^2 = {r_squared:.5}"
    );
    let elapsed = start.elapsed();
    println!(
        "criterion 09 PASS: decode ops fit {slope:.3}*t*n{intercept:+.1} with R^2 = {r_squared:.5} over the grid (hard cap 2*t*n held) in {elapsed:?}"
    );
}

#[test]
fn criterion_10_extremal_search() {
    let start = Instant::now();
    // exhaustive runs for t <= 4 with re-verified certificates
    let mut maxima = Vec::new();
    for t in 2..=4usize {
        let r = search_max(SearchProperty::StronglySeparable, 2, t, &SearchOptions::default())
            .unwrap();
        assert!(r.exhaustive, "t={t} not exhaustive");
        let cert = r.certificate.as_ref().expect("a certificate exists");
        assert_eq!(cert.items(), r.max_n);
        assert!(is_ssm(cert, 2).unwrap().holds);
        assert!(is_ssm_bruteforce(cert, 2, false).unwrap().holds);
        maxima.push(r.max_n);
    }
    assert_eq!(maxima[0], 2, "n(2,2)");
    assert_eq!(maxima[1], 3, "n(2,3)");

    // budgeted t=7 with the golden matrix as warm start
    let budgeted = search_max(
        SearchProperty::StronglySeparable,
        2,
        7,
        &SearchOptions {
            budget: Some(200_000),
            initial: Some(example1()),
        },
    )
    .unwrap();
    assert!(budgeted.max_n >= 8, "t=7 lower bound");
    let cert = budgeted.certificate.as_ref().unwrap();
    assert!(is_ssm(cert, 2).unwrap().holds);

    // sandwich f(2,t) <= n(2,t) <= s(2̄,t) on exhaustive t
    for t in 2..=4usize {
        let f = search_max(SearchProperty::Disjunct, 2, t, &SearchOptions::default()).unwrap();
        let n = search_max(SearchProperty::StronglySeparable, 2, t, &SearchOptions::default())
            .unwrap();
        let s = search_max(SearchProperty::BarSeparable, 2, t, &SearchOptions::default()).unwrap();
        assert!(f.exhaustive && n.exhaustive && s.exhaustive);
        assert!(
            f.max_n <= n.max_n && n.max_n <= s.max_n,
            "sandwich broken at t={t}: f={}, n={}, s={}",
            f.max_n,
            n.max_n,
            s.max_n
        );
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 10 PASS: exhaustive n(2,t) = {maxima:?} for t=2..4 with re-verified certificates; budgeted t=7 reaches >= 8; sandwich holds; in {elapsed:?}"
    );
}
