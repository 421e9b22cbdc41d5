use std::path::{Path, PathBuf};
use std::process::Command;

use logpois_cli::jobspec::COMMANDS;
use logpois_cli::report::{parse_report, Report, Section, Status};
use proptest::prelude::*;

fn jobs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("jobs");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "job"))
        .collect();
    v.sort();
    v
}

fn expected_exit(p: &Path) -> i32 {
    let text = std::fs::read_to_string(p).unwrap();
    let first = text.lines().next().unwrap_or_default();
    first.strip_prefix("# expect: ").and_then(|e| e.trim().parse().ok()).unwrap_or_else(|| panic!("{} lacks an expect line", p.display()))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_logpois")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes_match_expectations() {
    let all = jobs();
    assert!(all.len() >= 20);
    for p in all {
        let (code, out) = run(&[p.to_str().unwrap()]);
        assert_eq!(code, expected_exit(&p), "{}\n{out}", p.display());
        let rep = parse_report(&out).unwrap();
        assert_eq!(rep.status.exit_code(), code);
    }
}

#[test]
fn reports_are_deterministic_and_canonical() {
    for p in jobs() {
        let path = p.to_str().unwrap();
        let (_, a) = run(&[path]);
        let (_, b) = run(&[path]);
        assert_eq!(a, b, "{path}");
        let rep = parse_report(&a).unwrap();
        assert_eq!(rep.to_string(), a, "{path}");
    }
}

#[test]
fn in_process_matches_binary() {
    for p in jobs() {
        let text = std::fs::read_to_string(&p).unwrap();
        let rep = logpois_cli::execute(&text, &Default::default());
        let (_, out) = run(&[p.to_str().unwrap()]);
        assert_eq!(rep.to_string(), out);
    }
}

#[test]
fn stdin_input() {
    let p = jobs().into_iter().find(|p| p.ends_with("character.job")).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_logpois"))
        .arg("-")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let (_, direct) = run(&[p.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), direct);
}

#[test]
fn flag_overrides() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("jobs");
    let f = |n: &str| dir.join(n).to_str().unwrap().to_string();

    // The pair (0,0),(1,0) only resonates under the symmetric test.
    let (code, out) = run(&[&f("nonresonance-fail.job"), "--mode", "as-stated"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("non-resonance (as-stated): holds"));

    let (code, out) = run(&[&f("transport-1d.job"), "--steps", "2000"]);
    assert_eq!(code, 0);
    assert!(out.contains("steps = 2000"));

    let (_, a) = run(&[&f("normalize-random.job"), "--seed", "5"]);
    let (_, b) = run(&[&f("normalize-random.job"), "--seed", "5"]);
    let (_, c) = run(&[&f("normalize-random.job")]);
    assert_eq!(a, b);
    assert_ne!(a, c);

    let (code, out) = run(&[&f("normalize.job"), "--trunc", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("  trunc 3\n"), "{out}");

    let (code, _) = run(&[&f("character.job"), "--mode", "sideways"]);
    assert_ne!(code, 0);
}

#[test]
fn list_commands() {
    let (code, out) = run(&["--list-commands"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = out.lines().collect();
    assert_eq!(names, COMMANDS.iter().map(|(_, n)| *n).collect::<Vec<_>>());
}

#[test]
fn parse_errors_carry_positions() {
    let p = jobs().into_iter().find(|p| p.ends_with("float-literal.job")).unwrap();
    let (code, out) = run(&[p.to_str().unwrap()]);
    assert_eq!(code, 3);
    let rep = parse_report(&out).unwrap();
    assert_eq!(rep.status, Status::Error { code: "parse".into(), exit: 3 });
    assert!(out.contains("9:5:"), "{out}");
}

fn arb_section() -> impl Strategy<Value = Section> {
    ("[a-z][a-z0-9-]{0,11}", prop::collection::vec("[!-~][ -~]{0,30}", 0..6)).prop_map(|(name, lines)| Section { name, lines })
}

fn arb_report() -> impl Strategy<Value = Report> {
    let status = prop_oneof![
        Just(Status::Ok),
        ("[a-z][a-z-]{0,15}", prop_oneof![Just(2), Just(3)]).prop_map(|(code, exit)| Status::Error { code, exit }),
    ];
    (0..COMMANDS.len(), status, prop::collection::vec(arb_section(), 0..5)).prop_map(|(c, status, sections)| Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: COMMANDS[c].1.to_string(),
        status,
        sections,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn report_round_trip(r in arb_report()) {
        let text = r.to_string();
        let back = parse_report(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.to_string(), text);
    }
}
