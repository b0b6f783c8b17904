use std::io::Write;
use std::process::{Command, Output, Stdio};

use jumpcalc::cli::report::AnalysisReport;
use tempfile::NamedTempFile;

fn jumpcalc(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_jumpcalc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

const III_DOC: &str = r#"{
  "format": "reduction-graph/1",
  "name": "III",
  "vertices": [
    {"id": "c", "multiplicity": 4, "genus": 0},
    {"id": "a", "multiplicity": 1, "genus": 0},
    {"id": "b", "multiplicity": 2, "genus": 0},
    {"id": "d", "multiplicity": 1, "genus": 0}
  ],
  "edges": [["c", "a"], ["c", "b"], ["c", "d"]]
}"#;

#[test]
fn compute_text_golden() {
    let o = jumpcalc(&["compute", "--kodaira", "II"], b"");
    assert_eq!(o.status.code(), Some(0));
    let want = "\
name: II
genus: 1
minimal: yes
stabilization_index: 6
tame_base_change_conductor: 1/6
unipotent_rank: 1
principal_components: c
jumps:
  value        multiplicity
  1/6          1
";
    assert_eq!(stdout(&o), want);
}

#[test]
fn compute_json_from_file() {
    let f = file(III_DOC);
    let o = jumpcalc(&["compute", "--input", f.path().to_str().unwrap(), "--format", "json", "--check", "all"], b"");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = AnalysisReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.name.as_deref(), Some("III"));
    assert_eq!(r.jumps.len(), 1);
    assert_eq!((r.jumps[0].value.as_str(), r.jumps[0].multiplicity), ("1/4", 1));
    assert_eq!(r.stabilization_index, Some(4));
    assert_eq!(r.checks.len(), jumpcalc::checks::CHECK_NAMES.len());
    assert!(r.checks.iter().all(|c| c.pass));
}

#[test]
fn compute_from_stdin() {
    let o = jumpcalc(&["compute", "--input", "-"], III_DOC.as_bytes());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tame_base_change_conductor: 1/4\n"));
}

#[test]
fn genus2_example() {
    let o = jumpcalc(&["compute", "--genus2-example", "--format", "json"], b"");
    let r = AnalysisReport::from_json(&stdout(&o)).unwrap();
    let jumps: Vec<(&str, u64)> = r.jumps.iter().map(|j| (j.value.as_str(), j.multiplicity)).collect();
    assert_eq!(jumps, [("0", 1), ("1/2", 1)]);
    assert_eq!(r.tame_base_change_conductor, "1/2");
}

#[test]
fn minimize_reports_sizes() {
    let blown = jumpcalc(&["catalog", "--kodaira", "IV"], b"");
    let doc = stdout(&blown);
    let g = jumpcalc::cli::input::parse_input(doc.as_bytes()).unwrap();
    let g = g.blow_up_free_point("c").unwrap();
    let f = file(&jumpcalc::cli::input::GraphDocument::from_graph(&g).to_json());
    let path = f.path().to_str().unwrap();

    let o = jumpcalc(&["compute", "--input", path], b"");
    assert!(stdout(&o).contains("minimal: no\nstabilization_index: -\n"));
    let o = jumpcalc(&["compute", "--input", path, "--minimize"], b"");
    assert!(stdout(&o).contains("stabilization_index: 3\n"));
    assert!(stdout(&o).contains("(1 contractions)"));

    let o = jumpcalc(&["minimize", "--input", path], b"");
    assert_eq!(o.status.code(), Some(0));
    let m = jumpcalc::cli::input::parse_input(stdout(&o).as_bytes()).unwrap();
    assert!(m.is_isomorphic(&jumpcalc::catalog::kodaira_graph(jumpcalc::catalog::KodairaType::IV).unwrap()));
}

#[test]
fn invalid_graph_exits_1() {
    let f = file(r#"{"format": "reduction-graph/1",
  "vertices": [{"id": "a", "multiplicity": 2, "genus": 0}, {"id": "b", "multiplicity": 1, "genus": 0}],
  "edges": [["a", "b"]]}"#);
    let path = f.path().to_str().unwrap();
    for verb in ["compute", "validate"] {
        let o = jumpcalc(&[verb, "--input", path], b"");
        assert_eq!(o.status.code(), Some(1), "{verb}");
        assert!(stderr(&o).contains("invalid reduction graph"), "{}", stderr(&o));
    }
}

#[test]
fn unknown_and_unsupported_tags_exit_1() {
    let o = jumpcalc(&["compute", "--kodaira", "V"], b"");
    assert_eq!(o.status.code(), Some(1));
    let o = jumpcalc(&["compute", "--kodaira", "I1"], b"");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("I1res"));
}

#[test]
fn parse_and_io_errors_exit_3() {
    let f = file("{\"format\": \"reduction-graph/1\",\n \"vertices\": [,]}");
    let o = jumpcalc(&["compute", "--input", f.path().to_str().unwrap()], b"");
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = jumpcalc(&["compute", "--input", "/definitely/not/here.json"], b"");
    assert_eq!(o.status.code(), Some(3));

    let o = jumpcalc(&["compute", "--kodaira", "II", "--genus2-example"], b"");
    assert_eq!(o.status.code(), Some(3));
    let o = jumpcalc(&["frobnicate"], b"");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(jumpcalc(&["--help"], b"").status.code(), Some(0));
    assert_eq!(jumpcalc(&["--version"], b"").status.code(), Some(0));
}

#[test]
fn validate_accepts_catalog_documents() {
    let doc = stdout(&jumpcalc(&["catalog", "--kodaira", "I3*"], b""));
    let o = jumpcalc(&["validate", "--input", "-"], doc.as_bytes());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid\n");
}

#[test]
fn catalog_lists_entries() {
    let o = jumpcalc(&["catalog"], b"");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for tag in ["I0", "I1res", "II", "IV*", "II*", "genus2"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(tag)), "{tag}");
    }
}

#[test]
fn verify_small_runs() {
    let o = jumpcalc(&["verify", "--suite", "graphs", "--seed", "3", "--count", "20"], b"");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("all properties hold\n"));
    let o = jumpcalc(&["verify", "--suite", "lattices", "--count", "20"], b"");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn non_coprime_multiplicities_name_the_gcd_invariant() {
    let f = file(r#"{"format": "reduction-graph/1", "name": "bad_gcd",
  "vertices": [{"id": "a", "multiplicity": 2, "genus": 1}],
  "edges": []}"#);
    let o = jumpcalc(&["compute", "--input", f.path().to_str().unwrap()], b"");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gcd"), "{}", stderr(&o));
}

#[test]
fn verify_documented_runs() {
    for args in [
        &["verify", "--suite", "lattices", "--count", "1000", "--seed", "7"][..],
        &["verify", "--suite", "monoids", "--count", "200"][..],
        &["verify", "--suite", "graphs", "--count", "500"][..],
    ] {
        let o = jumpcalc(args, b"");
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}
