// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hyperbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Non-comment lines.
fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn delta_of_a_tree() {
    let o = hyperbound(&["delta", "--gen", "tree:3:6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# hyperbound "));
    assert!(text.contains("# seed: none"));
    assert_eq!(body(&text), ["delta_4pt,0", "delta_rips,0"]);
}

#[test]
fn generated_graphs_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let path = path.to_str().unwrap();
    let o = hyperbound(&["gen", "--gen", "grid:4:5", "--out", path]);
    assert!(o.status.success());
    let spec = format!("file:{path}");
    let a = stdout(&hyperbound(&["delta", "--gen", "grid:4:5"]));
    let b = stdout(&hyperbound(&["delta", "--gen", &spec]));
    assert_eq!(body(&a), body(&b));
}

#[test]
fn lambda_decay_rows_respect_the_bound() {
    // depth-one vertices of the free group ball are 1..=4
    let o = hyperbound(&[
        "lambda-decay",
        "--gen",
        "freegroup:2:8",
        "--x",
        "1",
        "--xp",
        "2",
        "--gamma",
        "100",
        "--n",
        "2,4,8",
        "--virtual-tail",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows = body(&text);
    assert_eq!(rows[0], "n,tv,tv_float,bound,holds,sandwiched");
    assert_eq!(rows.len(), 4);
    for row in &rows[1..] {
        let f: Vec<&str> = row.split(',').collect();
        assert!(f[1].contains('/'));
        let tv: f64 = f[2].parse().unwrap();
        let bound: f64 = f[3].parse().unwrap();
        assert!(tv <= bound && f[4] == "true" && f[5] == "true", "{row}");
    }
}

#[test]
fn cat_check_passes_and_is_deterministic() {
    let args = [
        "cat-check",
        "--base",
        "euclid:1",
        "--samples",
        "2000",
        "--seed",
        "1",
    ];
    let a = hyperbound(&args);
    assert!(a.status.success());
    let text = stdout(&a);
    assert_eq!(body(&text), ["PASS 2000/2000"]);
    assert!(text.contains("# seed: 1"));
    let mut with_threads = args.to_vec();
    with_threads.extend(["--threads", "2"]);
    let b = hyperbound(&with_threads);
    assert_eq!(body(&text), body(&stdout(&b)));
    let tree = hyperbound(&["cat-check", "--base", "tree:50:3", "--samples", "300"]);
    assert_eq!(body(&stdout(&tree)), ["PASS 300/300"]);
}

#[test]
fn heavy_atoms_exit_with_a_precondition_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = stdout(&hyperbound(&["gen", "--gen", "spider:3:4"]));
    let graph = write(dir.path(), "g.txt", &g);
    // breadth-first labels put the arm ends last
    let ends = ["10", "11", "12"];
    let heavy = write(
        dir.path(),
        "heavy.txt",
        &format!("{} 1/2\n{} 1/4\n{} 1/4\n", ends[0], ends[1], ends[2]),
    );
    let o = hyperbound(&[
        "barycenter",
        "--gen",
        &format!("file:{graph}"),
        "--measure",
        &heavy,
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(body(&stdout(&o))
        .iter()
        .any(|l| l.starts_with("ERR AtomTooHeavy ")));
    let classified = hyperbound(&[
        "barycenter",
        "--gen",
        &format!("file:{graph}"),
        "--measure",
        &heavy,
        "--classify",
    ]);
    assert!(classified.status.success());
    assert!(stdout(&classified).contains("\"kind\": \"bulky\""));
    let pair = write(dir.path(), "pair.txt", "10 1/2\n11 1/2\n");
    let two = hyperbound(&[
        "barycenter",
        "--gen",
        &format!("file:{graph}"),
        "--measure",
        &pair,
        "--classify",
    ]);
    assert!(
        stdout(&two).contains("\"kind\": \"elementary2\""),
        "{}",
        stdout(&two)
    );
}

#[test]
fn tripod_barycenter_is_the_center() {
    let dir = tempfile::tempdir().unwrap();
    let uniform = write(dir.path(), "m.txt", "10 1/3\n11 1/3\n12 1/3\n");
    let o = hyperbound(&["barycenter", "--gen", "spider:3:4", "--measure", &uniform]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("\"set\": [0]"), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_with_one() {
    assert_eq!(
        hyperbound(&["delta", "--gen", "torus:3"]).status.code(),
        Some(1)
    );
    assert_eq!(hyperbound(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        hyperbound(&[
            "atoms",
            "--gen",
            "tree:3:4",
            "--measure",
            "/nonexistent",
            "--nmax",
            "2"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(hyperbound(&["--help"]).status.code(), Some(0));
}

#[test]
fn projections_and_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let g = stdout(&hyperbound(&["gen", "--gen", "tree:3:6"]));
    let graph = format!("file:{}", write(dir.path(), "g.txt", &g));
    let horizon: Vec<usize> = body(&g)[1..]
        .iter()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    let gamma = *horizon.last().unwrap();
    let dirac = write(dir.path(), "d.txt", &format!("{gamma} 1\n"));
    let partition = dir.path().join("phi.csv");
    let o = hyperbound(&[
        "pi-project",
        "--gen",
        &graph,
        "--measure",
        &dirac,
        "--n",
        "3",
        "--a",
        "2",
        "--partition",
        partition.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = body(&text);
    assert_eq!(rows[0], "point,weight");
    let mass: f64 = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((mass - 1.0).abs() < 1e-12);
    let dump = fs::read_to_string(&partition).unwrap();
    assert_eq!(body(&dump)[0], "s,z,phi");
    let atoms = hyperbound(&[
        "atoms",
        "--gen",
        &graph,
        "--measure",
        &dirac,
        "--nmax",
        "5",
        "--a",
        "2",
    ]);
    let text = stdout(&atoms);
    assert!(text.contains("# weight,1.0000000000000000e0"), "{text}");
    assert!(text.contains(&format!("# atomic_support,[{gamma}]")));
}

#[test]
fn hyperbolize_vertical_distance() {
    let o = hyperbound(&[
        "hyperbolize",
        "--base",
        "euclid:2",
        "--p",
        "0@1,2",
        "--q",
        "3@1,2",
        "--steps",
        "2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = body(&text);
    assert_eq!(rows[0], "distance,3.0000000000000000e0");
    assert_eq!(rows.len(), 2 + 4);
}

#[test]
fn growth_and_metrics_tables() {
    let o = hyperbound(&["growth", "--gen", "tree:3:8", "--rmax", "4"]);
    let text = stdout(&o);
    let rows = body(&text);
    assert_eq!(
        rows[0],
        "r,ball_min,ball_max,sphere,packing_rho1,packing_rho2,packing_rho3"
    );
    assert_eq!(rows[2].split(',').nth(3), Some("3"));
    let m = hyperbound(&["metrics", "--gen", "cycle:6"]);
    let text = stdout(&m);
    assert!(text.contains("# sandwich_violations,0"));
    assert_eq!(body(&text).len(), 1 + 36);
    let p = hyperbound(&[
        "patterson",
        "--gen",
        "tree:3:6",
        "--delta",
        "2",
        "--truncation",
        "6",
    ]);
    assert!(p.status.success());
    let d = hyperbound(&[
        "patterson",
        "--gen",
        "tree:3:6",
        "--delta",
        "0.5",
        "--truncation",
        "6",
    ]);
    assert_eq!(d.status.code(), Some(2));
}

#[test]
fn cocycle_check_passes_on_a_free_group() {
    let o = hyperbound(&[
        "cocycle-check",
        "--gen",
        "freegroup:2:8",
        "--samples",
        "500",
        "--seed",
        "2",
    ]);
    assert!(o.status.success());
    assert_eq!(body(&stdout(&o)).last(), Some(&"PASS 500/500"));
}
