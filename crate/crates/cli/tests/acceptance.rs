//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use degperc::degseq::{
    is_graphical_degrees, limit_d, powerlaw_normalization, powerlaw_sequence, ClassifyParams, LimitEstimate,
};
use degperc::exploration::{explore, ExploreConfig};
use degperc::graph::{default_steps, enumerate_graphs, sample_uniform, LabeledGraph};
use degperc::harness::{
    deletion_trials, model_separation, monotone_violations, validate_robust, RobustConfig, SeparationConfig,
};
use degperc::percolation::{components, coupled_l1_sweep};
use degperc::rng::{stream_rng, Stream};
use degperc::{DegreeSequence, Regime};
use rand::Rng;
use serde_json::Value;
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn degperc(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_degperc")).current_dir(dir).args(args).output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("report written")).expect("valid JSON")
}

/// Scan reports for 3- and 4-regular sequences, shared by criteria 1 and 9.
fn regular_scans() -> Vec<(u32, Value)> {
    let dir = tempfile::tempdir().unwrap();
    [3u32, 4]
        .into_iter()
        .map(|d| {
            let file = format!("reg{d}.txt");
            std::fs::write(dir.path().join(&file), format!("{d} 5000\n")).unwrap();
            let out = format!("scan{d}.json");
            let run = degperc(
                dir.path(),
                &[
                    "scan",
                    &file,
                    "--p-min",
                    "0.2",
                    "--p-max",
                    "0.8",
                    "--p-steps",
                    "31",
                    "--replicas",
                    "30",
                    "--rho",
                    "0.05",
                    "--seed",
                    "20240501",
                    "--out",
                    &out,
                ],
            );
            assert!(run.status.code().is_some_and(|c| c <= 1), "{}", String::from_utf8_lossy(&run.stderr));
            (d, read_json(&dir.path().join(out)))
        })
        .collect()
}

fn criterion_1(scans: &[(u32, Value)], elapsed: Duration) -> Outcome {
    let windows = [(3u32, 0.45, 0.55), (4, 0.283, 0.383)];
    let mut pass = elapsed < Duration::from_secs(300);
    let mut parts = Vec::new();
    for (d, lo, hi) in windows {
        let report = &scans.iter().find(|(k, _)| *k == d).unwrap().1;
        let p_hat = report["result"]["p_hat"].as_f64();
        let ok = p_hat.is_some_and(|p| p >= lo && p <= hi);
        pass &= ok;
        parts.push(format!("{d}-regular p_hat {} in [{lo}, {hi}]", p_hat.map_or("none".into(), |p| format!("{p:.4}"))));
    }
    parts.push(format!("{:.1}s", elapsed.as_secs_f64()));
    outcome(pass, parts.join(", "))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in 3..=20u32 {
        let s = DegreeSequence::regular(2 * 21, d).unwrap();
        worst = worst.max((s.p_crit(d + 1).unwrap() - 1.0 / f64::from(d - 1)).abs());
    }
    let cases: [(&[u32], usize, f64); 3] =
        [(&[3, 3, 3, 3], 1, 0.8), (&[1, 1, 3, 3], 4, 0.2), (&[1, 1, 1, 1, 1, 1], 6, -1.0)];
    let examples_ok = cases.iter().all(|(d, j, r)| {
        let prof = DegreeSequence::new(d.iter().copied()).unwrap().critical_profile(0.6).unwrap();
        prof.j_p == *j && (prof.r_p - r).abs() < 1e-12
    });
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && examples_ok && elapsed < Duration::from_secs(1),
        format!("max |p_crit - 1/(d-1)| = {worst:e}, worked examples {examples_ok}, {:.3}s", elapsed.as_secs_f64()),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, degrees, steps) in [("(2,2,2,2)", [2u32; 4], 100_000), ("(1,1,1,1)", [1u32; 4], 10_000)] {
        let d = DegreeSequence::new(degrees).unwrap();
        let all = enumerate_graphs(&d).unwrap();
        let mut counts = vec![0u64; all.len()];
        for i in 0..3000 {
            let g = sample_uniform(&d, steps, &mut stream_rng(31, i, Stream::Graph)).unwrap();
            counts[all.iter().position(|h| *h == g).unwrap()] += 1;
        }
        let expected = 3000.0 / all.len() as f64;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let p = ChiSquared::new((all.len() - 1) as f64).unwrap().sf(stat);
        pass &= all.len() == 3 && p > 0.001;
        parts.push(format!("{name} {steps} steps counts {counts:?} p = {p:.3}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    parts.push(format!("{:.1}s", elapsed.as_secs_f64()));
    outcome(pass, parts.join(", "))
}

fn random_small_graph<R: Rng>(rng: &mut R) -> LabeledGraph {
    let n = rng.random_range(1..=200usize);
    if rng.random_bool(0.5) {
        let m = rng.random_range(0..=3 * n);
        let mut g = LabeledGraph::empty(n);
        for _ in 0..m {
            let (a, b) = (rng.random_range(0..n as u32), rng.random_range(0..n as u32));
            if a != b && !g.has_edge(a, b) {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    } else {
        loop {
            let cap = rng.random_range(1..=n.saturating_sub(1).clamp(1, 12)) as u32;
            let mut d: Vec<u32> = (0..n.max(2)).map(|_| rng.random_range(1..=cap)).collect();
            if d.iter().sum::<u32>() % 2 == 1 {
                d[0] += 1;
            }
            if is_graphical_degrees(&d).unwrap() {
                let seq = DegreeSequence::new(d).unwrap();
                return sample_uniform(&seq, default_steps((seq.sigma() / 2) as usize), rng).unwrap();
            }
        }
    }
}

fn criterion_4() -> Outcome {
    let mut equal = 0;
    for i in 0..200u64 {
        let mut rng = stream_rng(41, i, Stream::Graph);
        let g = random_small_graph(&mut rng);
        let p: f64 = rng.random_range(0.0..=1.0);
        let seed: u64 = rng.random();
        let ex = explore(
            &g,
            &ExploreConfig::new(p),
            &mut stream_rng(seed, 0, Stream::Structure),
            &mut stream_rng(seed, 0, Stream::Percolation),
        )
        .unwrap();
        if ex.partition() == components(g.n(), ex.sample.surviving_edges(&g)) {
            equal += 1;
        }
    }
    outcome(equal == 200, format!("{equal}/200 partitions equal"))
}

fn criterion_5() -> Outcome {
    let cases = deletion_trials(1000, 51).unwrap();
    let held = cases.iter().filter(|c| c.holds()).count();
    let nonempty = cases.iter().filter(|c| c.removed > 0).count();
    let tightest = cases.iter().map(|c| c.r_p_after / (c.mu / 50.0 * c.n_after as f64)).fold(f64::INFINITY, f64::min);
    outcome(
        held == 1000,
        format!("{held}/1000 instances hold ({nonempty} with non-empty removal, smallest margin ratio {tightest:.2})"),
    )
}

fn criterion_6() -> Outcome {
    let mut exceptions = 0;
    let mut exceptions_with_degree_three = 0;
    let mut with_degree_three = 0;
    let mut drawn = 0u64;
    let mut accepted = 0;
    while accepted < 10_000 {
        let mut rng = stream_rng(61, drawn, Stream::Degrees);
        drawn += 1;
        let n = rng.random_range(2..=500usize);
        let cap = rng.random_range(1..=(n as u32 - 1).min(40));
        let mut d: Vec<u32> = (0..n).map(|_| rng.random_range(1..=cap)).collect();
        if d.iter().sum::<u32>() % 2 == 1 {
            d[0] += 1;
        }
        if !is_graphical_degrees(&d).unwrap() {
            continue;
        }
        accepted += 1;
        let s = DegreeSequence::new(d).unwrap();
        let prof = s.critical_profile(1.0).unwrap();
        let r = prof.r_1 as f64;
        let holds = prof.r_p_at_one <= r && r <= 3.0 * prof.r_p_at_one;
        if s.max_degree() >= 3 {
            with_degree_three += 1;
        }
        if !holds {
            exceptions += 1;
            if s.max_degree() >= 3 {
                exceptions_with_degree_three += 1;
            }
        }
    }
    outcome(
        exceptions == 0,
        format!(
            "{exceptions} exceptions in 10000 sequences; all sequences with max degree <= 2 violate the upper \
             bound; {exceptions_with_degree_three}/{with_degree_three} exceptions with max degree >= 3"
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let cfg = SeparationConfig { n: 500, p: 0.5, replicas: 500, seed: 71, steps: None, max_retries: 100 };
    let r = model_separation(&cfg).unwrap();
    let elapsed = start.elapsed();
    outcome(
        r.pass && elapsed < Duration::from_secs(600),
        format!(
            "graph model {:.3} (se {:.3}, bound 0.5 + 3 se), sequence model {:.3} (min 0.9), infeasible {}, {:.1}s",
            r.percolated_graph.phat,
            r.percolated_graph.se,
            r.percolated_sequence.phat,
            r.infeasible,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_8() -> Outcome {
    let params = ClassifyParams::default();
    let steep = powerlaw_sequence(10_000, 3.5, 1, powerlaw_normalization(3.5, 1), 81).unwrap();
    let steep_class = steep.sequence.classify(&params).unwrap();
    let steep_thin = matches!(steep_class.regime, Regime::ThinTail { .. });
    let limit = limit_d(
        |n| Ok(powerlaw_sequence(n, 3.5, 1, powerlaw_normalization(3.5, 1), 81)?.sequence),
        64,
        &[10_000, 100_000, 1_000_000],
    )
    .unwrap();
    let finite = matches!(limit.estimate, LimitEstimate::Finite { .. });

    let shallow = powerlaw_sequence(10_000, 2.5, 1, powerlaw_normalization(2.5, 1), 82).unwrap();
    let shallow_class = shallow.sequence.classify(&params).unwrap();
    let cfg = RobustConfig {
        classify: params,
        p_list: vec![0.2],
        rho: 0.01,
        delta: 0.1,
        replicas: 20,
        seed: 83,
        steps: None,
    };
    let (robust_ok, successes) = match validate_robust(&shallow.sequence, &cfg) {
        Ok(v) => (v.points[0].successes >= 18, v.points[0].successes),
        Err(_) => (false, 0),
    };
    outcome(
        steep_thin && finite && shallow_class.regime == Regime::Robust && robust_ok,
        format!(
            "gamma 3.5: {} with limit {:?}; gamma 2.5: {}, L1/n > 0.01 in {successes}/20 replicas at p = 0.2",
            steep_class.regime.name(),
            limit.estimate,
            shallow_class.regime.name()
        ),
    )
}

fn criterion_9(scans: &[(u32, Value)]) -> Outcome {
    let mut curves: Vec<Vec<u32>> = Vec::new();
    for (_, report) in scans {
        let replicas: Vec<Vec<u32>> = serde_json::from_value(report["result"]["replica_l1"].clone()).unwrap();
        curves.extend(replicas);
    }
    let grid: Vec<f64> = (0..=50).map(|i| f64::from(i) / 50.0).collect();
    let heavy = powerlaw_sequence(5000, 2.5, 1, powerlaw_normalization(2.5, 1), 91).unwrap().sequence;
    let mixed = DegreeSequence::from_counts(&[(1, 1000), (2, 1000), (3, 1000), (6, 500)]).unwrap();
    for (k, d) in [heavy, mixed].iter().enumerate() {
        for r in 0..10u64 {
            let g = sample_uniform(
                d,
                default_steps((d.sigma() / 2) as usize),
                &mut stream_rng(92 + k as u64, r, Stream::Graph),
            )
            .unwrap();
            curves.push(coupled_l1_sweep(&g, &grid, &mut stream_rng(92 + k as u64, r, Stream::Percolation)).unwrap());
        }
    }
    let violations = monotone_violations(&curves);
    outcome(violations == 0, format!("{violations} violations over {} coupled replicas", curves.len()))
}

fn run_all_commands(dir: &Path, workers: &str) -> Vec<(String, Vec<u8>)> {
    std::fs::write(dir.join("cubic.txt"), "3 800\n").unwrap();
    std::fs::write(dir.join("hubs.txt"), "1 998\n500 2\n").unwrap();
    let commands: [&[&str]; 6] = [
        &["scan", "cubic.txt", "--replicas", "8", "--p-steps", "11", "--seed", "5", "--out", "scan.json"],
        &[
            "validate",
            "cubic.txt",
            "--regime",
            "thin",
            "--replicas",
            "8",
            "--rho",
            "0.1",
            "--seed",
            "6",
            "--out",
            "thin.json",
        ],
        &[
            "validate",
            "hubs.txt",
            "--regime",
            "robust",
            "--p",
            "0.3,0.6",
            "--replicas",
            "8",
            "--seed",
            "7",
            "--out",
            "robust.json",
        ],
        &["trace", "cubic.txt", "--p", "0.6", "--replicas", "8", "--s0-top", "3", "--seed", "8", "--out", "trace.json"],
        &["explore", "cubic.txt", "--p", "0.6", "--seed", "9", "--out", "explore.json"],
        &["separation", "--n", "200", "--replicas", "16", "--seed", "10", "--out", "sep.json"],
    ];
    for args in commands {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--workers", workers]);
        let out = degperc(dir, &full);
        assert!(out.status.code().is_some_and(|c| c <= 1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json" || x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn criterion_10() -> Outcome {
    let one = tempfile::tempdir().unwrap();
    let four = tempfile::tempdir().unwrap();
    let a = run_all_commands(one.path(), "1");
    let b = run_all_commands(four.path(), "4");
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    let differing: Vec<&str> = a.iter().zip(&b).filter(|(x, y)| x != y).map(|(x, _)| x.0.as_str()).collect();
    outcome(
        a.len() == b.len() && a.len() == 8 && differing.is_empty(),
        format!("{} files compared ({}), differing: {:?}", a.len(), names.join(" "), differing),
    )
}

fn report(number: usize, o: &Outcome) {
    println!("criterion {number}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn main() {
    let start = Instant::now();
    let scans = regular_scans();
    let scan_time = start.elapsed();
    let results = [
        criterion_1(&scans, scan_time),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(&scans),
        criterion_10(),
    ];
    for (i, o) in results.iter().enumerate() {
        report(i + 1, o);
    }
    let failed = results.iter().filter(|o| !o.pass).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
