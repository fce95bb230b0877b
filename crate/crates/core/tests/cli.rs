use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liftgap"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("liftgap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(path: &PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_example1_and_ls_sizes() {
    let out = tmp("ex1.json");
    assert!(bin().args(["gen", "example1", "--out"]).arg(&out).status().unwrap().success());
    assert_eq!(json(&out)["n_clients"], 44);
    let out = tmp("ls.json");
    assert!(bin().args(["gen", "ls", "--n", "20", "--l", "20", "--H", "10", "--out"]).arg(&out).status().unwrap().success());
    assert_eq!(json(&out)["n_clients"], 160001);
}

#[test]
fn random_generation_is_deterministic() {
    let run = |name: &str| {
        let out = tmp(name);
        let args = ["gen", "random", "--facilities", "3", "--clients", "6", "--mode", "cfl", "--U", "3", "--seed", "7"];
        assert!(bin().args(args).arg("--out").arg(&out).status().unwrap().success());
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(run("r1.json"), run("r2.json"));
}

#[test]
fn gap_on_cfl_proper_three() {
    let inst = tmp("cfl3.json");
    assert!(bin().args(["gen", "cfl-proper", "--n", "3", "--out"]).arg(&inst).status().unwrap().success());
    let rep = tmp("gap3.json");
    assert!(bin().arg("gap").arg(&inst).arg("--out").arg(&rep).status().unwrap().success());
    let r = json(&rep);
    assert_eq!(r["report"]["gap"]["exact"], "9");
    assert_eq!(r["config"]["relaxation"], "classic");
}

#[test]
fn star_and_classic_agree_via_cli() {
    let inst = tmp("r3.json");
    let args = ["gen", "random", "--facilities", "3", "--clients", "5", "--mode", "lbfl", "--U", "2", "--seed", "3"];
    assert!(bin().args(args).arg("--out").arg(&inst).status().unwrap().success());
    let value = |relax: &str, name: &str| {
        let rep = tmp(name);
        let ok = bin().arg("gap").arg(&inst).args(["--relaxation", relax, "--out"]).arg(&rep).status().unwrap();
        assert!(ok.success());
        json(&rep)["report"]["lp_value"]["exact"].clone()
    };
    assert_eq!(value("classic", "c.json"), value("star", "s.json"));
}

#[test]
fn exit_codes() {
    assert_eq!(bin().args(["gen", "bogus"]).output().unwrap().status.code(), Some(2));
    let deep = bin()
        .args(["ls-verify", "--n", "10", "--l", "10", "--H", "10", "--depth", "2"])
        .output()
        .unwrap();
    assert_eq!(deep.status.code(), Some(2));
    let zero = bin()
        .args(["ls-verify", "--n", "20", "--l", "20", "--H", "10", "--strategy", "zeroing", "--out"])
        .arg(tmp("z.json"))
        .status()
        .unwrap();
    assert!(zero.success());
    let unknown = bin().arg("gap").arg(tmp("missing.json")).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn ls_verify_depth_one_passes() {
    let rep = tmp("tree.json");
    let s = bin()
        .args(["ls-verify", "--n", "10", "--l", "10", "--H", "10", "--depth", "1", "--out"])
        .arg(&rep)
        .status()
        .unwrap();
    assert!(s.success());
    let r = json(&rep);
    assert_eq!(r["tree"]["all_passed"], true);
    assert_eq!(r["tree"]["node_count"], 61);
}
