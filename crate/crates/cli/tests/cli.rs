use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use striptok::corpus;
use striptok::mesh_io::write_obj;
use striptok::Mesh;
use tempfile::TempDir;

fn striptok(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_striptok")).args(args).output().unwrap()
}

fn rows(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn save(dir: &Path, name: &str, mesh: &Mesh) -> String {
    let p = dir.join(name);
    write_obj(mesh, None, &p).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn quad_ribbon_is_one_strip() {
    let dir = TempDir::new().unwrap();
    let obj = save(dir.path(), "ribbon.obj", &corpus::quad_ribbon(20));
    let out = striptok(&["stats", &obj, "--stride", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = &rows(&out)[0];
    assert_eq!(r["transitions"], 1);
    assert_eq!(r["strips"], 1);
    assert_eq!(r["faces"], 20);
    assert!(r["comp_rate_quad12"].is_number());
}

#[test]
fn triangles_with_stride_two_fail_per_file() {
    let dir = TempDir::new().unwrap();
    let obj = save(dir.path(), "grid.obj", &corpus::tri_grid(3, 3));
    let out = striptok(&["encode", &obj, "--stride", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = &rows(&out)[0];
    assert_eq!(r["file"], "grid.obj");
    assert!(r["error"].as_str().unwrap().contains("stride"));
}

#[test]
fn uv_flag_without_uvs_warns() {
    let dir = TempDir::new().unwrap();
    let obj = save(dir.path(), "grid.obj", &corpus::tri_grid(3, 3));
    let out = striptok(&["encode", &obj, "--uv", "-o", s(&dir.path().join("grid.sato"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning: grid.obj: no uv data"));
    assert_eq!(rows(&out)[0]["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn decode_of_encode_is_clean() {
    let dir = TempDir::new().unwrap();
    let obj = save(dir.path(), "torus.obj", &corpus::quad_torus(12, 8));
    let tok = dir.path().join("torus.sato");
    let back = dir.path().join("back.obj");
    assert!(striptok(&["encode", &obj, "--stride", "2", "-o", s(&tok)]).status.success());
    let out = striptok(&["decode", s(&tok), "-o", s(&back)]);
    assert_eq!(out.status.code(), Some(0));
    let r = &rows(&out)[0];
    assert_eq!(r["faces"], 96);
    assert_eq!(r["stride"], 2);
    assert_eq!(r["written"], true);
    for counter in ["discarded_tokens", "dropped_strips", "degenerate_faces", "duplicate_faces", "orphan_tokens"] {
        assert_eq!(r[counter], 0, "{counter}");
    }
    assert!(back.exists());

    // the same tokens read as triangles
    let out = striptok(&["decode", s(&tok), "--stride", "1", "-o", s(&dir.path().join("tris.obj"))]);
    let r = &rows(&out)[0];
    assert_eq!(r["stride"], 1);
    assert_eq!(r["faces"], 192);
}

#[test]
fn corrupted_payload_is_counted() {
    let dir = TempDir::new().unwrap();
    let obj = save(dir.path(), "grid.obj", &corpus::tri_grid(6, 6));
    let tok = dir.path().join("grid.sato");
    assert!(striptok(&["encode", &obj, "-o", s(&tok)]).status.success());
    let mut bytes = fs::read(&tok).unwrap();
    // first payload token (header is 4 + 1 + 1 + 4 + 32 + 4 bytes) becomes a c3 with no head before it
    bytes[46..48].copy_from_slice(&710u16.to_le_bytes());
    fs::write(&tok, bytes).unwrap();
    let out = striptok(&["decode", s(&tok), "-o", s(&dir.path().join("out.obj"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(rows(&out)[0]["discarded_tokens"].as_u64().unwrap() > 0);

    let mut bytes = fs::read(&tok).unwrap();
    bytes[46..48].copy_from_slice(&u16::MAX.to_le_bytes());
    fs::write(&tok, bytes).unwrap();
    let out = striptok(&["decode", s(&tok)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(rows(&out)[0]["error"].is_string());
}

#[test]
fn roundtrip_passes_on_generated_corpora() {
    let dir = TempDir::new().unwrap();
    for (sub, quads, stride) in [("tri", false, "1"), ("quad", true, "2")] {
        let d = dir.path().join(sub);
        let mut args = vec!["generate", s(&d)];
        if quads {
            args.push("--quads");
        }
        assert!(striptok(&args).status.success());
        let out = striptok(&["roundtrip", s(&d), "--stride", stride, "--jobs", "2"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let rs = rows(&out);
        assert!(rs.len() >= 10);
        assert!(rs.iter().all(|r| r["passed"] == true));
    }
}

#[test]
fn non_manifold_fin_round_trips_with_note() {
    let dir = TempDir::new().unwrap();
    let obj = save(dir.path(), "fin.obj", &corpus::fin());
    let out = striptok(&["roundtrip", &obj]);
    assert_eq!(out.status.code(), Some(0));
    let r = &rows(&out)[0];
    assert_eq!(r["passed"], true);
    assert_eq!(r["winding_checked"], false);
    assert!(!r["notes"].as_array().unwrap().is_empty());
}

#[test]
fn filter_applies_rules_and_copies_accepted() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    let output = dir.path().join("out");
    fs::create_dir(&input).unwrap();
    let ok = corpus::tri_grid(10, 25);
    let mut small = ok.clone();
    small.faces.pop();
    save(&input, "a_ok.obj", &ok);
    save(&input, "b_small.obj", &small);
    save(&input, "c_fin.obj", &corpus::fin());
    let out = striptok(&["filter", s(&input), "-o", s(&output)]);
    assert_eq!(out.status.code(), Some(0));
    let rs = rows(&out);
    assert_eq!(rs[0]["accepted"], true);
    assert_eq!(rs[1]["reason"], "face_count");
    assert_eq!(rs[2]["reason"], "manifold");
    assert!(stderr(&out).contains("accepted 1 of 3"));
    let copied: Vec<_> = fs::read_dir(&output).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(copied, vec!["a_ok.obj"]);

    let out = striptok(&["filter", s(&input), "--uv"]);
    assert_eq!(rows(&out)[0]["note"], "no uv data; island rule not applied");
}

#[test]
fn compare_beats_the_baseline() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().join("tri");
    assert!(striptok(&["generate", s(&d)]).status.success());
    save(&d, "zz_ribbon.obj", &corpus::tri_ribbon(50));
    let out = striptok(&["compare", s(&d)]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let records: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let mean = records.last().unwrap();
    assert_eq!(&mean[0], "mean");
    let rate = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    assert!(rate(mean, 3) < rate(mean, 6));
    let ribbon = records.iter().find(|r| &r[0] == "zz_ribbon.obj").unwrap();
    assert!(rate(ribbon, 3) < 0.25);
    assert!(stderr(&out).contains("for context only"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let obj = save(dir.path(), "grid.obj", &corpus::tri_grid(2, 2));
    assert_eq!(striptok(&["stats", &obj]).status.code(), Some(0));
    assert_eq!(striptok(&["stats", &obj, "--stride", "2"]).status.code(), Some(1));
    assert_eq!(striptok(&["stats", s(&dir.path().join("missing"))]).status.code(), Some(2));
    assert_eq!(striptok(&["stats", &obj, "--stride", "3"]).status.code(), Some(2));
    assert_eq!(striptok(&["metrics", &obj, "--tau", "0"]).status.code(), Some(2));
}
