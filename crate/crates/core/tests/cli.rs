use std::path::Path;
use std::process::Command;

use chirex::report::Report;

fn chirex(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chirex"))
        .args(args)
        .env("CHIREX_THREADS", "2")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn extend_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        chirex(&[
            "build-map",
            "--family",
            "44",
            "--b",
            "3",
            "--c",
            "1",
            "-o",
            &p(d, "k.json")
        ])
        .0,
        0
    );
    let (code, _) = chirex(&[
        "extend-db",
        &p(d, "k.json"),
        "--s",
        "2",
        "-o",
        &p(d, "p.json"),
        "--report",
        &p(d, "p.rep.json"),
    ]);
    assert_eq!(code, 0);
    let ext: Report = chirex::io::load_json(d.join("p.rep.json")).unwrap();
    assert!(ext.passed);
    assert_eq!(ext.last_entry.unwrap() % 4, 0);
    assert_eq!(
        chirex(&[
            "verify-gpr",
            &p(d, "p.json"),
            "--facet",
            &p(d, "k.json"),
            "--report",
            &p(d, "v.json")
        ])
        .0,
        0
    );
    let ver: Report = chirex::io::load_json(d.join("v.json")).unwrap();
    for v in &ver.verdicts {
        assert_eq!(
            ext.verdicts.iter().find(|e| e.condition == v.condition),
            Some(v)
        );
    }
}

#[test]
fn two_sm_and_mix() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    chirex(&[
        "build-map",
        "--family",
        "44",
        "--b",
        "3",
        "--c",
        "1",
        "-o",
        &p(d, "k.json"),
    ]);
    chirex(&[
        "build-map",
        "--family",
        "44",
        "--b",
        "1",
        "--c",
        "1",
        "-o",
        &p(d, "r.json"),
    ]);
    chirex(&[
        "extend-db",
        &p(d, "k.json"),
        "--s",
        "1",
        "-o",
        &p(d, "p.json"),
    ]);
    assert_eq!(
        chirex(&["two-sm", &p(d, "r.json"), "--s", "2", "-o", &p(d, "t.json")]).0,
        0
    );
    let meta = std::fs::read_to_string(d.join("t.json.meta.json")).unwrap();
    assert_eq!(meta.trim(), r#"{"m":2,"s":2,"construction":"two_s_m"}"#);
    let (code, _) = chirex(&["classify", &p(d, "t.json"), "--report", &p(d, "c.json")]);
    assert_eq!(code, 0);
    let (code, _) = chirex(&[
        "mix-extend",
        "--extension",
        &p(d, "p.json"),
        "--facet",
        &p(d, "k.json"),
        "--quotient",
        &p(d, "r.json"),
        "--s",
        "3",
        "--report",
        &p(d, "m.json"),
    ]);
    assert_eq!(code, 0);
    let mix: Report = chirex::io::load_json(d.join("m.json")).unwrap();
    assert_eq!(mix.last_entry, Some(48));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // no regular quotient: precondition
    assert_eq!(
        chirex(&["pipeline", "--family", "44", "--b", "2", "--c", "1", "--mix-s", "2"]).0,
        3
    );
    std::fs::write(d.join("bad.json"), "{\"rank\": 2").unwrap();
    assert_eq!(chirex(&["classify", &p(d, "bad.json")]).0, 4);
    assert_eq!(chirex(&["classify", &p(d, "missing.json")]).0, 4);
    let (code, out) = chirex(&[
        "pipeline", "--family", "44", "--b", "-3", "--c", "-1", "--db-s", "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("extend_db"));
}
