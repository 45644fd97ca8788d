use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mobclinic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobclinic")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Three locations on a line, two residential homes, four clients.
fn fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let locs = dir.join("locations.csv");
    let visits = dir.join("visits.csv");
    fs::write(
        &locs,
        "id,lat,lon,kind\n\
         clinic,38.030,-78.480,activity\n\
         market,38.040,-78.500,activity\n\
         school,38.010,-78.470,activity\n\
         h1,38.020,-78.490,residential\n\
         h2,38.050,-78.510,residential\n",
    )
    .unwrap();
    fs::write(
        &visits,
        "client_id,home_location_id,visited_ids\n\
         p1,h1,h1;school\n\
         p2,h1,h1;clinic\n\
         p3,h2,h2;market\n\
         p4,h2,market;clinic\n",
    )
    .unwrap();
    (locs, visits)
}

fn instance_args<'a>(locs: &'a Path, visits: &'a Path) -> Vec<&'a str> {
    vec!["--locations", locs.to_str().unwrap(), "--visits", visits.to_str().unwrap()]
}

#[test]
fn solve_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let (locs, visits) = fixture(dir.path());
    let out = dir.path().join("sol.json");
    for alg in ["fpt", "clientcover", "mostactive", "homecenters"] {
        let mut args = vec!["solve", "--algorithm", alg, "--k", "2", "--out", out.to_str().unwrap()];
        args.extend(instance_args(&locs, &visits));
        let o = mobclinic(&args);
        assert!(o.status.success(), "{alg}: {}", String::from_utf8_lossy(&o.stderr));
        let json = fs::read_to_string(&out).unwrap();
        assert!(json.contains("\"feasible\": true"), "{json}");
        assert!(json.contains("\"per_client\""));
        assert!(json.contains("\"radius_km\""));
    }
}

#[test]
fn solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (locs, visits) = fixture(dir.path());
    let mut args = vec!["solve", "--algorithm", "clientcover", "--k", "1", "--q", "0.75"];
    args.extend(instance_args(&locs, &visits));
    let a = mobclinic(&args);
    let b = mobclinic(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn zero_budget_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (locs, visits) = fixture(dir.path());
    let mut args = vec!["solve", "--algorithm", "fpt", "--k", "0"];
    args.extend(instance_args(&locs, &visits));
    assert_eq!(mobclinic(&args).status.code(), Some(2));
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = mobclinic(&["solve", "--algorithm", "fpt", "--k", "1", "--locations", "/nope.csv", "--visits", "/nope.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.csv"));
}

#[test]
fn infeasible_capacity_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (locs, visits) = fixture(dir.path());
    let mut args = vec!["solve", "--algorithm", "clientcover", "--k", "1", "--capacity", "2"];
    args.extend(instance_args(&locs, &visits));
    let o = mobclinic(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"feasible\": false"));
}

#[test]
fn sweep_has_a_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let (locs, visits) = fixture(dir.path());
    let mut args = vec!["sweep", "--k-max", "20", "--cover-solver", "greedy"];
    args.extend(instance_args(&locs, &visits));
    let o = mobclinic(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("algorithm,k,q,objective_km,runtime_ms,num_facilities"));
    assert_eq!(lines.count(), 20 * 4);
}

#[test]
fn kernel_curve_and_cluster_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (locs, visits) = fixture(dir.path());
    let mut args = vec!["kernel", "--k-max", "3", "--algorithms", "mostactive"];
    args.extend(instance_args(&locs, &visits));
    let text = stdout(&mobclinic(&args));
    assert!(text.starts_with("algorithm,q,k_prev,k,displacement\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0")), "{text}");

    let mut args = vec!["curve", "--k", "1", "--percentiles", "0.5,1"];
    args.extend(instance_args(&locs, &visits));
    let text = stdout(&mobclinic(&args));
    assert_eq!(text.lines().count(), 1 + 4 * 2);

    let mut args = vec!["cluster", "--k", "1", "--radii", "0,1,5"];
    args.extend(instance_args(&locs, &visits));
    let text = stdout(&mobclinic(&args));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    let o = mobclinic(&[
        "generate", "--seed", "3", "--clients", "200", "--activity", "30", "--residential", "40", "--out",
        gen.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(files.len(), 2);
    let solve = |out: &str| {
        mobclinic(&[
            "solve", "--algorithm", "mostactive", "--k", "4", "--locations", &files[0], "--visits", &files[1],
            "--out", out,
        ])
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(solve(a.to_str().unwrap()).status.success());
    assert!(solve(b.to_str().unwrap()).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let line = dir.path().join("line");
    let o = mobclinic(&["generate", "--kind", "line", "--gamma", "4", "--out", line.to_str().unwrap()]);
    assert!(o.status.success());
    let files: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(files.len(), 3);
    let o = mobclinic(&[
        "solve", "--algorithm", "clientcover", "--k", "4", "--all-sites", "--locations", &files[0], "--visits",
        &files[1], "--matrix", &files[2],
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"radius_km\": 0.0"), "{}", stdout(&o));
}
