use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn catmood(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catmood"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

#[test]
fn solve_writes_identical_outputs_for_identical_configs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "case=advection1d scheme=catmood4 nx=40\n[output]\noutput_every=10\n").unwrap();
    for out in ["a", "b"] {
        let o = catmood(&["solve", "--config", "run.cfg", "--tfinal", "0.2", "--outdir", out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let names = |d: &str| {
        let mut v: Vec<String> = fs::read_dir(dir.path().join(d))
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        v.sort();
        v
    };
    let files = names("a");
    assert!(files.contains(&"mood_stats.csv".to_string()));
    assert!(files.contains(&"field_000000.csv".to_string()));
    assert!(files.len() >= 3, "{files:?}");
    assert_eq!(files, names("b"));
    for f in &files {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap(), "{f}");
    }
    let stats = fs::read_to_string(dir.path().join("a/mood_stats.csv")).unwrap();
    assert!(stats.starts_with("step,time,dt,pct_cat4,pct_cat2,pct_hllc\n"), "{stats}");
    let field = fs::read_to_string(dir.path().join("a/field_000000.csv")).unwrap();
    assert!(field.starts_with("x,y,rho,u,v,p\n"));
    assert_eq!(field.lines().count(), 41);
}

#[test]
fn vtk_output_on_request() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "case=vortex scheme=cat2 nx=8 ny=6 tfinal=0.1\n[output]\nvtk=true outdir=o\n").unwrap();
    let o = catmood(&["solve", "--config", "run.cfg"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let vtk = fs::read_dir(dir.path().join("o"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "vtk"))
        .unwrap();
    assert!(fs::read_to_string(vtk).unwrap().contains("DIMENSIONS 8 6 1"));
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "case=vortex scheme=cat6\nbogus=1\n").unwrap();
    let o = catmood(&["solve", "--config", "bad.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    fs::write(dir.path().join("ok.cfg"), "case=vortex scheme=cat6\n").unwrap();
    let o = catmood(&["solve", "--config", "ok.cfg", "--cfl", "-0.3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = catmood(&["solve", "--config", "missing.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = catmood(&["converge", "--case", "nowhere", "--scheme", "cat2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unlimited_jet_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("jet.cfg"), "case=jet scheme=cat6 nx=40 ny=20\n").unwrap();
    let o = catmood(&["solve", "--config", "jet.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn converge_prints_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = catmood(
        &["converge", "--case", "advection1d", "--scheme", "cat4", "--resolutions", "20,40", "--tfinal", "0.1"],
        dir.path(),
    );
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].contains("N") && lines[0].contains("L1 error") && lines[0].contains("order"));
    let order: f64 = lines[2].rsplit('|').next().unwrap().trim().parse().unwrap();
    assert!(order > 3.5, "{out}");
}
