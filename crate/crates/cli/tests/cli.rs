use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gpsynth(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpsynth"))
        .args(args)
        .current_dir(dir)
        .env("GPSYNTH_SEED", "7")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn generated(name: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    let o = gpsynth(&["generate", name, "."], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    dir
}

fn record(out: &str) -> serde_json::Value {
    serde_json::from_str(out.lines().last().expect("record line")).expect("json record")
}

#[test]
fn solve_visitall_exits_zero_and_round_trips_through_validate() {
    let dir = generated("visitall");
    let o = gpsynth(&["solve", "manifest.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("domain"), "{out}");
    let rec = record(&out);
    assert_eq!(rec["outcome"], "solved");
    assert_eq!(rec["config"], "B(v)_{5,1}");
    assert!(rec["evaluated"].as_u64().unwrap() >= rec["expanded"].as_u64().unwrap());
    std::fs::write(dir.path().join("sol.txt"), rec["solution"].as_str().unwrap()).unwrap();
    let v = gpsynth(&["validate", "sol.txt", "manifest.txt"], dir.path());
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    let listing = stdout(&v);
    assert_eq!(listing.lines().count(), 5);
    assert!(listing.lines().all(|l| l.ends_with(": Solved")), "{listing}");
}

#[test]
fn zero_bound_is_a_configuration_error() {
    let dir = generated("visitall");
    let o = gpsynth(&["solve", "manifest.txt", "--v", "0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 1"), "{}", stderr(&o));
}

#[test]
fn resource_limit_exits_three() {
    let dir = generated("sorting");
    let o = gpsynth(&["solve", "manifest.txt", "--node-limit", "50"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert_eq!(record(&stdout(&o))["outcome"], "limit:nodes");
}

#[test]
fn unsolvable_exits_two() {
    let dir = generated("visitall");
    // one line leaves room only for `end`
    let m = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    let one = m.lines().map(|l| if l.starts_with("lines=") { "lines=1" } else if l.starts_with("v=") { "v=1" } else { l }).collect::<Vec<_>>().join("\n");
    std::fs::write(dir.path().join("one.txt"), one).unwrap();
    let o = gpsynth(&["solve", "one.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(record(&stdout(&o))["outcome"], "unsolvable");
}

#[test]
fn validate_extra_appends_verdicts() {
    let dir = generated("tsum");
    let extra = TempDir::new().unwrap();
    let o = gpsynth(&["generate", "tsum", extra.path().to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let o = gpsynth(&["solve", "manifest.txt", "--validate-extra", extra.path().to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rec = record(&stdout(&o));
    let held_out = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    let base = held_out.lines().find(|l| l.starts_with("validation=")).unwrap().split(',').count();
    let extra_files = std::fs::read_dir(extra.path()).unwrap().filter(|e| {
        e.as_ref().unwrap().path().extension().is_some_and(|x| x == "num")
    });
    assert_eq!(rec["validation"].as_array().unwrap().len(), base + extra_files.count());
}

#[test]
fn truncated_and_malformed_programs() {
    let dir = generated("visitall");
    std::fs::write(dir.path().join("t.txt"), "0. inc(z1)\n1. end\n").unwrap();
    let o = gpsynth(&["validate", "t.txt", "manifest.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().all(|l| l.ends_with("Failed(end-without-goal)")), "{}", stdout(&o));
    std::fs::write(dir.path().join("bad.txt"), "0. goto(40, y_z=true)\n").unwrap();
    let o = gpsynth(&["validate", "bad.txt", "manifest.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("1:1"), "{}", stderr(&o));
}

#[test]
fn trace_rows_have_five_fields() {
    let dir = generated("visitall");
    let o = gpsynth(&["solve", "manifest.txt", "--trace"], dir.path());
    let out = stdout(&o);
    let trace: Vec<&str> = out.lines().skip_while(|l| !l.starts_with("trace ")).skip(1).take_while(|l| l.contains(" | ")).collect();
    assert!(!trace.is_empty(), "{out}");
    assert!(trace.iter().all(|r| r.split(" | ").count() == 5), "{trace:?}");
}

#[test]
fn bench_reports_rows_in_suite_order() {
    let dir = TempDir::new().unwrap();
    for name in ["visitall", "tsum"] {
        let o = gpsynth(&["generate", name, name], dir.path());
        assert!(o.status.success());
    }
    std::fs::write(dir.path().join("suite.txt"), "tsum/manifest.txt\nmissing/manifest.txt\nvisitall/manifest.txt v=7\n").unwrap();
    let o = gpsynth(&["bench", "suite.txt", "--report", "r1.jsonl"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
    let r1 = std::fs::read_to_string(dir.path().join("r1.jsonl")).unwrap();
    let rows: Vec<serde_json::Value> = r1.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.iter().map(|r| r["outcome"].as_str().unwrap()).collect::<Vec<_>>(), ["solved", "error", "solved"]);
    assert_eq!(rows[0]["domain"], "tsum");
    gpsynth(&["bench", "suite.txt", "--report", "r2.jsonl"], dir.path());
    assert_eq!(r1, std::fs::read_to_string(dir.path().join("r2.jsonl")).unwrap());
    std::fs::write(dir.path().join("empty.txt"), "# nothing\n").unwrap();
    let o = gpsynth(&["bench", "empty.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn rank_and_inspect_print_stable_listings() {
    let dir = generated("ontable");
    std::fs::write(dir.path().join("p.txt"), "0. inc(z1)\n1. inc(z2)\n2. pickup(z2)\n3. pickup(z1)\n4. end\n").unwrap();
    let o = gpsynth(&["rank", "p.txt"], dir.path());
    assert_eq!(stdout(&o), "action  occurrences  next-rank\ninc(z1)  1  2\ninc(z2)  1  2\npickup  2  3\n");
    let o = gpsynth(&["inspect", "--helpful", "manifest.txt"], dir.path());
    let first = stdout(&o).lines().next().unwrap().to_string();
    let set = first.strip_prefix("H = {").and_then(|r| r.strip_suffix('}')).expect("set line");
    assert!(!set.split(", ").any(|a| a == "stack"), "{first}");
    let o = gpsynth(&["inspect", "--landmarks", "manifest.txt"], dir.path());
    assert!(stdout(&o).starts_with("instance "));
    let numeric = generated("fibo");
    let o = gpsynth(&["inspect", "--landmarks", "manifest.txt"], numeric.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generation_is_deterministic_and_rejects_unknown_names() {
    let a = generated("lock");
    let b = generated("lock");
    for f in ["manifest.txt", "p01.pddl", "domain.pddl"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
    let o = gpsynth(&["generate", "hanoi", "."], a.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("visitall"), "{}", stderr(&o));
}
