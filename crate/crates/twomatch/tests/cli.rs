use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use twomatch::cli::{run, EXIT_FILE, EXIT_GUARD, EXIT_OK, EXIT_USAGE, EXIT_VIOLATED};
use twomatch::format::{emit_allocation, emit_instance, parse_instance};
use twomatch_core::extform::{build_extended_formulation, parse_lp};
use twomatch_core::fixtures::{fig1, fig1_path_violation};

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files { dir: tempfile::tempdir().unwrap() }
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn fig1(&self) -> (String, String, String) {
        let (inst, p) = fig1();
        (
            self.write("fig1.game", &emit_instance(&inst)),
            self.write("fig1.alloc", &emit_allocation(&p)),
            self.write("bad.alloc", &emit_allocation(&fig1_path_violation())),
        )
    }
}

fn twomatch(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("twomatch").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn value_of_fig1() {
    let files = Files::new();
    let (game, _, _) = files.fig1();
    assert_eq!(twomatch(&["value", "-i", &game]), (EXIT_OK, "12\n".into(), String::new()));
    let (code, out, _) = twomatch(&["value", "--instance", &game, "--matching"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "12\nedges: 0 2 3\n");
}

#[test]
fn separate_and_check_verdicts() {
    let files = Files::new();
    let (game, good, bad) = files.fig1();
    for cmd in ["separate", "check"] {
        let (code, out, _) = twomatch(&[cmd, "-i", &game, "-a", &good]);
        assert_eq!((code, out.as_str()), (EXIT_OK, "IN_CORE\n"));
        let (code, out, _) = twomatch(&[cmd, "-i", &game, "-a", &bad, "--jobs", "3"]);
        assert_eq!(code, EXIT_VIOLATED);
        assert_eq!(out.lines().next(), Some("VIOLATED kind=Path S={0,1,2} p(S)=1 bound=2"));
    }
    let (_, out, _) = twomatch(&["separate", "-i", &game, "-a", &bad, "--all"]);
    assert!(out.contains("witness_edges: 0 1\n"));
    assert!(out.contains("nu(S): 2\n"));
    assert!(out.contains("violations: 1\n"));
}

#[test]
fn total_value_violation() {
    let files = Files::new();
    let (game, _, _) = files.fig1();
    let alloc = files.write("over.alloc", "0 1\n1 1\n2 2\n3 10\n4 1\n");
    let (code, out, _) = twomatch(&["separate", "-i", &game, "-a", &alloc]);
    assert_eq!(code, EXIT_VIOLATED);
    assert_eq!(out.lines().next(), Some("VIOLATED kind=TotalValue S={0,1,2,3,4} p(S)=15 bound=12"));
}

#[test]
fn extform_modes() {
    let files = Files::new();
    let (game, good, bad) = files.fig1();
    assert_eq!(twomatch(&["extform", "-i", &game, "--check", "-a", &good]).1, "IN_CORE\n");
    let (code, out, _) = twomatch(&["extform", "-i", &game, "-c", "-a", &bad]);
    assert_eq!(code, EXIT_VIOLATED);
    assert!(out.starts_with("NOT_IN_CORE "));

    let (code, out, _) = twomatch(&["extform", "-i", &game, "--size"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("family size 7 (bound 13)"));
    assert!(out.contains("variables 190"));

    let lp = files.path("fig1.lp");
    let (code, out, _) = twomatch(&["extform", "-i", &game, "--emit", lp.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    let parsed = parse_lp(&std::fs::read_to_string(&lp).unwrap()).unwrap();
    let built = build_extended_formulation(&fig1().0);
    assert_eq!(parsed.variables(), built.variables());
    assert_eq!(parsed.constraints(), built.constraints());

    let (code, _, err) = twomatch(&["extform", "-i", &game]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--emit"));
    assert_eq!(twomatch(&["extform", "-i", &game, "--size", "--check", "-a", &good]).0, EXIT_USAGE);
    assert_eq!(twomatch(&["extform", "-i", &game, "--check"]).0, EXIT_USAGE);
}

#[test]
fn flaw_demo_and_input() {
    let (code, out, _) = twomatch(&["flaw"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("nu(N) = 12"));
    assert!(out.contains("(s,u^1,v^2,u^3,t) weight -8"));
    assert!(out.contains("layered method verdict: NotInCore"));

    let files = Files::new();
    let (game, good, _) = files.fig1();
    let (code, out, _) = twomatch(&["flaw", "-i", &game, "-a", &good]);
    assert_eq!(code, EXIT_VIOLATED);
    assert_eq!(out, "NEGATIVE_PATH i0=0 j0=1 k=4 vertices=(0,2,3,2,1) weight=-8\n");
    assert_eq!(twomatch(&["flaw", "-i", &game]).0, EXIT_USAGE);
}

#[test]
fn random_is_deterministic() {
    let files = Files::new();
    let args = ["random", "--seed", "9", "--n", "6", "--density", "1/2", "--wmax", "10"];
    let (code, first, _) = twomatch(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(twomatch(&args).1, first);
    let inst = parse_instance(&first, "x").unwrap();
    assert_eq!((inst.n(), inst.name()), (6, "random-9-6"));

    let out = files.path("r.game");
    let mut with_output = args.to_vec();
    with_output.extend(["-o", out.to_str().unwrap()]);
    assert_eq!(twomatch(&with_output).0, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);

    assert_eq!(twomatch(&["random", "-s", "1", "-n", "3", "-d", "3/2", "-w", "4"]).0, EXIT_USAGE);
    assert_eq!(twomatch(&["random", "-s", "1", "-n", "3", "-d", "half", "-w", "4"]).0, EXIT_USAGE);
}

#[test]
fn oracle_subcommands() {
    let files = Files::new();
    let (game, good, bad) = files.fig1();
    assert_eq!(twomatch(&["oracle", "nu", "-i", &game]).1, "12\n");
    assert_eq!(twomatch(&["oracle", "nu", "-i", &game, "--coalition", "0,1,2"]).1, "2\n");
    assert_eq!(twomatch(&["oracle", "nu", "-i", &game, "-S", "0,9"]).0, EXIT_USAGE);
    assert_eq!(twomatch(&["oracle", "core", "-i", &game, "-a", &good]), (EXIT_OK, "IN_CORE\n".into(), String::new()));
    assert_eq!(twomatch(&["oracle", "core", "-i", &game, "-a", &bad]).0, EXIT_VIOLATED);
    assert_eq!(twomatch(&["oracle", "constraint-check", "-i", &game, "-a", &good]).0, EXIT_OK);
    let (code, out, _) = twomatch(&["oracle", "constraint-check", "-i", &game, "-a", &bad]);
    assert_eq!(code, EXIT_VIOLATED);
    assert!(out.starts_with("VIOLATED kind=Path S={0,1,2}"));
    assert_eq!(twomatch(&["oracle", "negcycle", "-i", &game, "-a", &good]).1, "NO_NEGATIVE_CYCLE\n");
    let (_, out, _) = twomatch(&["oracle", "constraints", "-i", &game]);
    assert!(out.starts_with("cycles: 0\npaths: "));
    assert_eq!(twomatch(&["oracle", "cuts", "-i", &game, "-x", "0,0,0,0"]).0, EXIT_OK);
    assert_eq!(twomatch(&["oracle", "cuts", "-i", &game, "-x", "1,0,0,0"]).0, EXIT_VIOLATED);
    assert_eq!(twomatch(&["oracle", "cuts", "-i", &game, "-x", "1,0"]).0, EXIT_USAGE);
}

#[test]
fn negative_cycle_in_g2() {
    let files = Files::new();
    let game = files.write(
        "tri.game",
        "game 4 4\nvertex 0 2\nvertex 1 2\nvertex 2 2\nvertex 3 1\nedge 0 1 4\nedge 1 2 4\nedge 0 2 4\nedge 2 3 10\n",
    );
    let alloc = files.write("tri.alloc", "0 2\n1 2\n2 4\n3 10\n");
    let (code, out, _) = twomatch(&["oracle", "negcycle", "-i", &game, "-a", &alloc]);
    assert_eq!(code, EXIT_VIOLATED);
    assert!(out.starts_with("NEGATIVE_CYCLE vertices=0 1 2 cost=-4"), "{out}");
    let (code, out, _) = twomatch(&["separate", "-i", &game, "-a", &alloc]);
    assert_eq!(code, EXIT_VIOLATED);
    assert!(out.starts_with("VIOLATED kind=Cycle S={0,1,2} p(S)=8 bound=12"), "{out}");
}

#[test]
fn file_errors() {
    let files = Files::new();
    let (game, good, _) = files.fig1();
    let missing = files.path("missing.game");
    let (code, _, err) = twomatch(&["value", "-i", missing.to_str().unwrap()]);
    assert_eq!(code, EXIT_FILE);
    assert!(err.starts_with("error: "));

    let broken = files.write("broken.game", "game 1 0\nvertex 0 3\n");
    let (code, _, err) = twomatch(&["value", "-i", &broken]);
    assert_eq!(code, EXIT_FILE);
    assert!(err.contains("line 2: capacity out of range"), "{err}");

    let partial = files.write("partial.alloc", "0 0\n");
    let (code, _, err) = twomatch(&["separate", "-i", &game, "-a", &partial]);
    assert_eq!(code, EXIT_FILE);
    assert!(err.contains("allocation incomplete: no value for vertex 1"));
    assert_eq!(twomatch(&["check", "-i", &game, "-a", &good]).0, EXIT_OK);
}

#[test]
fn size_guard() {
    let files = Files::new();
    let mut text = String::from("game 13 0\n");
    for v in 0..13 {
        text.push_str(&format!("vertex {v} 1\n"));
    }
    let game = files.write("big.game", &text);
    let alloc = files.write("big.alloc", &(0..13).map(|v| format!("{v} 0\n")).collect::<String>());
    let (code, _, err) = twomatch(&["oracle", "core", "-i", &game, "-a", &alloc]);
    assert_eq!(code, EXIT_GUARD);
    assert!(err.contains("size guard"));
    assert_eq!(twomatch(&["separate", "-i", &game, "-a", &alloc]).0, EXIT_OK);
}

#[test]
fn usage_errors() {
    let (code, _, err) = twomatch(&["value", "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage"));
    assert_eq!(twomatch(&[]).0, EXIT_USAGE);
    assert_eq!(twomatch(&["check", "-i", "x"]).0, EXIT_USAGE);
    assert_eq!(twomatch(&["check", "-i", "x", "-a", "y", "--jobs", "0"]).0, EXIT_USAGE);
    let (code, out, _) = twomatch(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("separate"));
}

#[test]
fn binary_exit_codes() {
    let files = Files::new();
    let (game, good, bad) = files.fig1();
    let bin = Path::new(env!("CARGO_BIN_EXE_twomatch"));
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["separate", "-i", &game, "-a", &good]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "IN_CORE\n");
    assert_eq!(status(&["separate", "-i", &game, "-a", &bad]).status.code(), Some(EXIT_VIOLATED));
    assert_eq!(status(&["separate", "-i", &game]).status.code(), Some(EXIT_USAGE));
    assert_eq!(status(&["value", "-i", "/nonexistent/x.game"]).status.code(), Some(EXIT_FILE));
}
