use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use delaysplit::{parse_instance, Instance};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delaysplit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn corpus(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(dir);
    let mut files: Vec<PathBuf> = fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
}

fn path(dir: &str, name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(dir)
        .join(name)
        .to_string_lossy()
        .into_owned()
}

// Enumerates every 2-coloring of the ground set directly.
fn brute_solvable(inst: &Instance) -> bool {
    match inst {
        Instance::Split(s) => {
            let sets: Vec<u64> = s.family().iter().map(|f| f.bits()).collect();
            (0..1u64 << s.n()).any(|m| sets.iter().all(|&f| m & f != 0 && m & f != f))
        }
        Instance::SubsetSum(s) => (0..1u64 << s.n()).any(|m| {
            s.values()
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, v)| v)
                .sum::<u64>()
                == s.target()
        }),
    }
}

#[test]
fn worked_example_solves_at_moment_one() {
    let out = run(&["solve", &path("corpus", "worked.txt")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "SPLIT A1={1} A2={2,3,4} moment=1\n");
}

#[test]
fn singleton_family_is_unsolvable() {
    let out = run(&[
        "solve",
        &path("corpus", "singleton.txt"),
        "--method",
        "optical",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "NO-SPLIT\n");
}

#[test]
fn exit_codes_follow_decisions_on_corpus() {
    for file in corpus("corpus") {
        let inst = parse_instance(&fs::read_to_string(&file).unwrap()).unwrap();
        let want = if brute_solvable(&inst) { 0 } else { 1 };
        for method in ["optical", "oracle"] {
            let out = run(&["solve", file.to_str().unwrap(), "--method", method]);
            assert_eq!(
                out.status.code(),
                Some(want),
                "{} with {method}",
                file.display()
            );
            assert!(out.stderr.is_empty());
        }
    }
}

#[test]
fn diagnostics_exit_two() {
    for file in corpus("bad") {
        let out = run(&["solve", file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}", file.display());
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    let missing = run(&["solve", "/nonexistent/instance.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    for args in [
        &["solve"][..],
        &["frobnicate"],
        &["solve", "x", "--method", "guess"],
        &["solve", "x", "--verbose"],
        &["feasibility"],
        &["feasibility", "--n", "3", "--total-time", "1"],
        &["moments", "x", "--literal", "--full"],
        &[
            "gen",
            "--n",
            "0",
            "--m",
            "1",
            "--max-set-size",
            "1",
            "--seed",
            "1",
        ],
        &[
            "gen",
            "--n",
            "4",
            "--m",
            "1",
            "--max-set-size",
            "5",
            "--seed",
            "1",
        ],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn moments_output() {
    let full = run(&["moments", &path("corpus", "worked.txt")]);
    assert_eq!(stdout(&full), "full: 0,2,3,4,5,7,8,10,11,12,13,15\n");
    let literal = run(&["moments", &path("corpus", "worked.txt"), "--literal"]);
    assert_eq!(stdout(&literal), "literal: 3,5,7,11,13,15\n");
    let subset = run(&["moments", &path("corpus", "subset_yes.txt")]);
    assert_eq!(subset.status.code(), Some(2));
}

#[test]
fn simulate_sources_agree() {
    let by_n = run(&["simulate", "--set-splitting-n", "4"]);
    let by_file = run(&["simulate", &path("corpus", "worked.txt")]);
    assert_eq!(by_n.status.code(), Some(0));
    assert_eq!(stdout(&by_n), stdout(&by_file));
    assert_eq!(stdout(&by_n).lines().count(), 17);

    let ss = stdout(&run(&[
        "simulate",
        "--subset-sum-file",
        &path("corpus", "subset_yes.txt"),
    ]));
    assert!(ss.contains("15+3ε\t1/4\t2\t{1,3}"), "{ss}");

    let dump = stdout(&run(&[
        "simulate",
        "--set-splitting-n",
        "2",
        "--dump-device",
    ]));
    assert!(dump.starts_with("device set-splitting n=2"));
    assert!(dump.contains("2\t1\t2\t2+ε\t0+ε"));
}

#[test]
fn feasibility_reports() {
    let out = stdout(&run(&["feasibility", "--total-time", "1"]));
    assert!(out.contains("max_n_for_total_time: 39\n"));
    assert!(out.contains("min_cable_m: 3e-4\n"));
    assert!(out.contains("longest_cable_m_at_max_n_for_1_s: computed 8.24633720832e7, published states 8e8 [DISCREPANCY]"));
    let cable = stdout(&run(&[
        "feasibility",
        "--rise-time",
        "1e-12",
        "--light-speed",
        "3e8",
        "--max-cable",
        "3e5",
    ]));
    assert!(cable.contains("max_n_for_cable: 30\n"));
    let n = stdout(&run(&["feasibility", "--n", "26"]));
    assert!(n.contains("solve_time_s: 6.7108864e-5\n"));
}

#[test]
fn gen_is_deterministic() {
    let args = [
        "gen",
        "--n",
        "4",
        "--m",
        "2",
        "--max-set-size",
        "2",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let empty = stdout(&run(&[
        "gen",
        "--n",
        "4",
        "--m",
        "0",
        "--max-set-size",
        "2",
        "--seed",
        "7",
    ]));
    assert_eq!(empty, "n 4\n");
}

#[test]
fn gen_output_reparses() {
    for seed in 0..1000u64 {
        let n = 1 + seed % 20;
        let max = 1 + seed % n;
        let m = seed % 7;
        let out = run(&[
            "gen",
            "--n",
            &n.to_string(),
            "--m",
            &m.to_string(),
            "--max-set-size",
            &max.to_string(),
            "--seed",
            &seed.to_string(),
        ]);
        let text = stdout(&out);
        match parse_instance(&text) {
            Ok(Instance::Split(inst)) => {
                assert_eq!(inst.n() as u64, n);
                assert_eq!(inst.family().len() as u64, m);
                assert!(inst.family().iter().all(|f| f.len() as u64 <= max));
                assert_eq!(inst.to_string(), text);
            }
            other => panic!("seed {seed}: {other:?}"),
        }
    }
}

fn read_csv(path: &Path) -> Vec<(f64, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time_s,intensity"));
    lines
        .map(|l| {
            let (t, v) = l.split_once(',').unwrap();
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

/// Expected `(arrival seconds, intensity)` per event, from the simulator's
/// exact timeline.
fn arrivals(file: &str, unit: f64, eps: f64) -> Vec<(f64, f64)> {
    let out = stdout(&run(&["simulate", file]));
    out.lines()
        .skip(1)
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            let (core, hops) = cols[0].trim_end_matches('ε').split_once('+').unwrap();
            let t = core.parse::<f64>().unwrap() * unit + hops.parse::<f64>().unwrap() * eps;
            let h = match cols[1].split_once('/') {
                None => cols[1].parse().unwrap(),
                Some((a, b)) => {
                    let den = match b.strip_prefix("2^") {
                        Some(e) => 2f64.powi(e.parse().unwrap()),
                        None => b.parse().unwrap(),
                    };
                    a.parse::<f64>().unwrap() / den
                }
            };
            (t, h)
        })
        .collect()
}

fn check_trace(name: &str, unit: f64, eps: f64, rise: f64, k: u32, separated: bool) {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let file = path("corpus", name);
    let out = run(&[
        "trace",
        &file,
        "--rise-time",
        &rise.to_string(),
        "--unit-delay",
        &unit.to_string(),
        "--epsilon",
        &eps.to_string(),
        "--out",
        csv.to_str().unwrap(),
        "--samples-per-rise",
        &k.to_string(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = read_csv(&csv);
    let step = rise / k as f64;
    assert!(
        rows.windows(2).all(|w| w[1].0 > w[0].0),
        "time not increasing"
    );

    let events = arrivals(&file, unit, eps);
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    // a pulse covers the first k samples at or after its arrival
    let pulse = |t: f64| -> f64 {
        rows.iter()
            .filter(|(s, _)| *s >= t - step * 1e-9)
            .take(k as usize)
            .map(|(_, v)| v)
            .sum::<f64>()
            * step
            / rise
    };
    if separated {
        for &(t, h) in &events {
            let got = pulse(t);
            assert!(
                rel(got, h) <= 1e-12,
                "{name}: pulse at {t} integrates to {got}, want {h}"
            );
        }
    }
    let total: f64 = events.iter().map(|e| e.1).sum();
    let got = rows.iter().map(|(_, v)| v).sum::<f64>() * step / rise;
    assert!(
        rel(got, total) <= 1e-12,
        "{name}: total {got}, want {total}"
    );
}

#[test]
fn trace_pulses_integrate_to_intensities() {
    check_trace("worked.txt", 1e-9, 1e-11, 1e-10, 4, true);
    check_trace("worked.txt", 1e-10, 0.0, 1e-10, 8, true);
    check_trace("subset_yes.txt", 2e-9, 5e-12, 1e-9, 2, true);
    check_trace("chain12.txt", 3e-12, 1e-12, 1e-12, 5, true);
    // overlapping pulses only conserve the total
    check_trace("worked.txt", 1e-12, 0.0, 4e-12, 4, false);
    check_trace("subset_yes.txt", 1e-12, 0.0, 7e-12, 3, false);
}
