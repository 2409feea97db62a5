use std::path::PathBuf;

use rbac_ahp::cli::run;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn rbac(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rbac-ahp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn rank_h1_tsv() {
    let h1 = data("h1.rhf");
    let (code, out, _) = rbac(&["rank", "--hierarchy", &h1, "--require", "p1,p2", "--s", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "rank\trole\tprobability\tdp\tdr\n1\tr2\t0.555556\t2\t1\n2\tr1\t0.444444\t1\t2\n"
    );
}

#[test]
fn rank_output_is_repeatable() {
    let h1 = data("clinic.rhf");
    let args = [
        "rank",
        "--hierarchy",
        &h1,
        "--require",
        "records.read",
        "--criterion",
        "integrity",
        "--criterion",
        "manager-cost:0.5",
        "--alpha",
        "2",
    ];
    let first = rbac(&args);
    assert_eq!(first.0, 0);
    for _ in 0..3 {
        assert_eq!(rbac(&args), first);
    }
    assert!(first
        .1
        .starts_with("rank\trole\tprobability\tdp\tdr\tintegrity\tmanager-cost\n"));
}

#[test]
fn tsv_and_json_agree() {
    let clinic = data("clinic.rhf");
    let base = [
        "rank",
        "--hierarchy",
        &clinic,
        "--require",
        "appointments.read",
        "--s",
        "3",
    ];
    let (_, tsv, _) = rbac(&base);
    let mut json_args = base.to_vec();
    json_args.extend(["--output", "json"]);
    let (code, json, _) = rbac(&json_args);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let scores = doc["scores"].as_array().unwrap();
    let rows: Vec<&str> = tsv.lines().skip(1).collect();
    assert_eq!(rows.len(), scores.len());
    for (row, score) in rows.iter().zip(scores) {
        let cols: Vec<&str> = row.split('\t').collect();
        assert_eq!(cols[1], score["role"].as_str().unwrap());
        let p: f64 = cols[2].parse().unwrap();
        assert!((p - score["probability"].as_f64().unwrap()).abs() <= 5e-7);
        assert_eq!(cols[3], score["dp"].to_string());
        assert_eq!(cols[4], score["dr"].to_string());
    }
}

#[test]
fn authorize_prints_mode_and_role() {
    let h1 = data("h1.rhf");
    let (code, out, _) = rbac(&["authorize", "--hierarchy", &h1, "--require", "p1,p2,p3,p4"]);
    assert_eq!((code, out.as_str()), (0, "exact-match r2\n"));
    let (code, out, _) = rbac(&[
        "authorize",
        "--hierarchy",
        &h1,
        "--require",
        "p1,p2",
        "--s",
        "2",
    ]);
    assert_eq!((code, out.as_str()), (0, "ranked r2\n"));
    let (_, out, _) = rbac(&[
        "authorize",
        "--hierarchy",
        &h1,
        "--require",
        "p1,p2",
        "--output",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["selected"], "r1");
    assert_eq!(doc["probability"], 0.5);
}

#[test]
fn require_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("need.txt");
    std::fs::write(&list, "# session needs\np1\n\np2  \n").unwrap();
    let h1 = data("h1.rhf");
    let at = format!("@{}", list.display());
    let (code, out, _) = rbac(&[
        "authorize",
        "--hierarchy",
        &h1,
        "--require",
        &at,
        "--s",
        "2",
    ]);
    assert_eq!((code, out.as_str()), (0, "ranked r2\n"));
}

#[test]
fn validate_reports() {
    let (code, out, err) = rbac(&["validate", "--hierarchy", &data("cyclic.rhf")]);
    assert_eq!(code, 1);
    assert!(out.contains("CYCLE"));
    assert!(err.contains("dominance cycle"));

    let (code, out, _) = rbac(&["validate", "--hierarchy", &data("h1.rhf")]);
    assert_eq!((code, out.as_str()), (0, "ok\n"));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("warn.rhf");
    std::fs::write(&f, "permission p\npermission spare\nrole a\ngrant a p\n").unwrap();
    let (code, out, _) = rbac(&[
        "validate",
        "--hierarchy",
        f.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["ok"], true);
    assert_eq!(report["issues"][0]["code"], "UNUSED_PERMISSION");
}

#[test]
fn exit_codes() {
    let h1 = data("h1.rhf");
    let cases: &[(&[&str], i32)] = &[
        (&["authorize", "--hierarchy", &h1, "--require", "p9"], 1),
        (
            &[
                "rank",
                "--hierarchy",
                &data("cyclic.rhf"),
                "--require",
                "p1",
            ],
            1,
        ),
        (
            &["rank", "--hierarchy", "/nonexistent.rhf", "--require", "p1"],
            2,
        ),
        (&["rank", "--hierarchy", &h1, "--require", ","], 2),
        (&["rank", "--hierarchy", &h1, "--require", "bad id"], 2),
        (
            &[
                "rank",
                "--hierarchy",
                &h1,
                "--require",
                "p1",
                "--lambda",
                "0",
            ],
            2,
        ),
        (
            &[
                "rank",
                "--hierarchy",
                &h1,
                "--require",
                "p1",
                "--criterion",
                "fame",
            ],
            2,
        ),
        (
            &[
                "sweep",
                "--hierarchy",
                &h1,
                "--require",
                "p1",
                "--steps",
                "1",
            ],
            2,
        ),
        (&["frobnicate"], 2),
        (&["--help"], 0),
    ];
    for (args, want) in cases {
        let (code, _, err) = rbac(args);
        assert_eq!(code, *want, "{args:?}: {err}");
    }
}

#[test]
fn unsatisfiable_request_explains_itself() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("h.rhf");
    std::fs::write(&f, "permission p\npermission q\nrole a\ngrant a p\n").unwrap();
    let (code, out, err) = rbac(&["rank", "--hierarchy", f.to_str().unwrap(), "--require", "q"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(
        err.contains("no role grants all requested permissions"),
        "{err}"
    );
}

#[test]
fn sweep_tsv_lists_change_points() {
    let h1 = data("h1.rhf");
    let (code, out, _) = rbac(&[
        "sweep",
        "--hierarchy",
        &h1,
        "--require",
        "p1,p2",
        "--s-min",
        "0.5",
        "--s-max",
        "2",
        "--steps",
        "4",
        "--scale",
        "linear",
    ]);
    assert_eq!(code, 0);
    let (table, changes) = out.split_once("\n\n").unwrap();
    assert_eq!(table.lines().count(), 1 + 4 * 2);
    assert!(table.starts_with("s\trank\trole\tprobability\tdp\tdr\n0.5\t1\tr1\t"));
    assert_eq!(
        changes,
        "s_before\ts_after\torder_before\torder_after\n1\t1.5\tr1,r2\tr2,r1\n"
    );
}

#[test]
fn sweep_json_round_trips() {
    let h1 = data("h1.rhf");
    let (code, out, _) = rbac(&[
        "sweep",
        "--hierarchy",
        &h1,
        "--require",
        "p1,p2",
        "--s-min",
        "0.5",
        "--s-max",
        "2",
        "--steps",
        "3",
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    let sweep: rbac_ahp::SweepResult = serde_json::from_str(&out).unwrap();
    assert_eq!(sweep.grid.len(), 3);
    assert_eq!(sweep.change_points.len(), 1);
}
