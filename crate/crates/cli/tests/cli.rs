use std::process::Command;

use dpfree_cli::{run, EXIT_FAILURE, EXIT_INCONCLUSIVE, EXIT_OK};

fn dpfree(args: &[&str]) -> dpfree_cli::Outcome {
    let mut full = vec!["dpfree"];
    full.extend_from_slice(args);
    run(full)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn exit_code_matrix() {
    let torus = "<x,y|[x,y]>";
    let cases: &[(&[&str], i32)] = &[
        (&["member", "--group", "K3_2_2", "--element", "x ; x^-1 ; 1"], EXIT_OK),
        (&["member", "--group", "K3_2_2", "--element", "x ; 1 ; 1"], EXIT_OK),
        (&["member", "--group", "K3_2_9", "--element", "1 ; 1 ; 1"], EXIT_FAILURE),
        (&["member", "--group", "K2_2_2", "--element", "z ; 1"], EXIT_FAILURE),
        (&["rewrite", "--group", "K2_2_2", "--element", "[x,y] x ; x^-1"], EXIT_OK),
        (&["rewrite", "--group", "K2_3_2", "--random", "5"], EXIT_OK),
        (&["rewrite", "--group", "K2_2_2", "--element", "x ; 1"], EXIT_FAILURE),
        (&["normalize-basis", "--hom", "[[2,1],[1,1],[0,3]]"], EXIT_OK),
        (&["normalize-basis", "--hom", "[[2],[4]]"], EXIT_FAILURE),
        (&["normalize-basis", "--hom", "not json"], EXIT_FAILURE),
        (&["split", "--n", "3", "--m", "2", "--element", "x ; 1 ; x^-1"], EXIT_OK),
        (&["split", "--n", "3", "--m", "2", "--element", "x ; 1 ; 1"], EXIT_FAILURE),
        (&["area", "--presentation", torus, "--word", "[x^2,y^2]"], EXIT_OK),
        (&["--node-cap", "10", "area", "--presentation", torus, "--word", "[x^3,y^3]"], EXIT_INCONCLUSIVE),
        (&["area", "--presentation", torus, "--word", "x"], EXIT_FAILURE),
        (&["area", "--presentation", "<x,y|[x,y]", "--word", "x"], EXIT_FAILURE),
        (&["dehn", "--presentation", torus, "--n", "8"], EXIT_OK),
        (&["--node-cap", "3", "dehn", "--presentation", torus, "--n", "8"], EXIT_INCONCLUSIVE),
        (&["metric", "--group", "K2_2_2", "--target", "h(1)"], EXIT_OK),
        (&["metric", "--group", "K2_2_2", "--target", "h(2)"], EXIT_INCONCLUSIVE),
        (&["metric", "--group", "K2_2_2", "--target", "x ; 1"], EXIT_FAILURE),
        (&["distortion", "--n-max", "1"], EXIT_OK),
        (&["certify", "--n", "1"], EXIT_OK),
        (&["--node-cap", "5", "certify", "--n", "2"], EXIT_INCONCLUSIVE),
        (&["certify", "--n", "0"], EXIT_FAILURE),
        (&["toy-amalgam", "--k", "1", "--n", "1"], EXIT_OK),
        (&["--node-cap", "5", "toy-amalgam", "--k", "2", "--n", "2"], EXIT_INCONCLUSIVE),
        (&["no-such-command"], EXIT_FAILURE),
        (&["--format", "xml", "distortion"], EXIT_FAILURE),
        (&["--help"], EXIT_OK),
    ];
    for (args, code) in cases {
        let out = dpfree(args);
        assert_eq!(out.code, *code, "{args:?}\nstdout: {}\nstderr: {}", out.stdout, out.stderr);
        if *code == EXIT_FAILURE {
            assert!(!out.stderr.is_empty(), "{args:?} fails silently");
        }
    }
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["--format", "csv", "distortion"], "distortion.csv"),
        (&["--format", "csv", "toy-amalgam"], "toy_amalgam.csv"),
        (&["certify", "--n", "2"], "certify_n2.json"),
        (&["--format", "json", "area", "--presentation", "<x,y|[x,y]>", "--word", "[x^2,y^2]"], "area_torus.json"),
        (&["--format", "csv", "dehn", "--presentation", "<x,y|[x,y]>", "--n", "8"], "dehn_torus.csv"),
        (&["member", "--group", "K3_2_2", "--element", "x ; x^-1 ; 1"], "member.txt"),
    ];
    for (args, file) in cases {
        assert_eq!(dpfree(args).stdout, golden(file), "{args:?}");
    }
}

#[test]
fn csv_columns_are_frozen() {
    let header = |args: &[&str]| dpfree(args).stdout.lines().next().unwrap_or_default().to_string();
    assert_eq!(header(&["--format", "csv", "distortion", "--n-max", "1"]), "n,ambient_length,status,value");
    assert_eq!(
        header(&["--format", "csv", "toy-amalgam", "--k", "1", "--n", "1"]),
        "k,n,word_length,h_distance,required,status,area,lower_bound,verdict"
    );
}

#[test]
fn output_is_independent_of_jobs() {
    let runs: &[&[&str]] = &[
        &["--format", "csv", "rewrite", "--group", "K3_2_2", "--random", "20", "--seed", "9"],
        &["--format", "json", "dehn", "--presentation", "<x,y|[x,y]>", "--n", "6"],
        &["--format", "csv", "distortion", "--n-max", "2"],
    ];
    for args in runs {
        let base = dpfree(args).stdout;
        for jobs in ["1", "3"] {
            let mut with = vec!["--jobs", jobs];
            with.extend_from_slice(args);
            assert_eq!(dpfree(&with).stdout, base, "{args:?} --jobs {jobs}");
        }
    }
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dpfree");
    let ok = Command::new(bin).args(["metric", "--group", "K2_2_2", "--target", "h(1)"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("exact"));
    let beyond = Command::new(bin)
        .args(["--radius", "3", "metric", "--group", "K2_2_2", "--target", "h(2)"])
        .output()
        .unwrap();
    assert_eq!(beyond.status.code(), Some(EXIT_INCONCLUSIVE));
    let bad = Command::new(bin).args(["area", "--word", "x"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_FAILURE));
}
