use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use toric_mirror_cli::documents::{decode_polytope_document, encode_polytope, PolytopeDocument, SeriesDocument};
use toric_mirror_cli::run;

const HEXAGON: &str = r#"{"name": "hexagon", "vertices": [[1,0],[1,1],[0,1],[-1,0],[-1,-1],[0,-1]]}"#;
const PYRAMID: &str =
    r#"{"name": "P", "vertices": [[1,0,1],[1,1,1],[0,1,1],[-1,0,1],[-1,-1,1],[0,-1,1],[0,0,-1]]}"#;
const F2: &str = "z*(2+x+x*y+y+x^-1+x^-1*y^-1+y^-1)+z^-1";
const F3: &str = "z*(3+x+x*y+y+x^-1+x^-1*y^-1+y^-1)+z^-1";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self { dir: tempfile::tempdir().unwrap() };
        ws.write("hexagon.json", HEXAGON);
        ws.write("pyramid.json", PYRAMID);
        ws.write("f3.txt", F3);
        ws
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("toric-mirror").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn classical_period_of_f2() {
    let (code, out, _) = invoke(&["period", "classical", "--poly", F2, "--order", "10"]);
    assert_eq!(code, 0);
    let doc: SeriesDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.kind, "classical");
    assert_eq!(doc.order, 10);
    assert_eq!(doc.coefficients, ["1", "0", "4", "0", "60", "0", "1120", "0", "24220", "0", "567504"]);
}

#[test]
fn symbolic_period_is_polynomial_strings() {
    let (code, out, _) =
        invoke(&["period", "classical", "--poly", "z*(a+x+x*y+y+x^-1+x^-1*y^-1+y^-1)+z^-1", "--order", "10"]);
    assert_eq!(code, 0);
    let doc: SeriesDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.coefficients[8], "70*a^4+2520*a^2+3360*a+6300");
    assert_eq!(doc.coefficients[10], "252*a^5+15120*a^3+30240*a^2+113400*a+90720");
}

#[test]
fn hexagon_has_two_decompositions() {
    let ws = Workspace::new();
    let (code, out, _) = invoke(&["mink", "decompose", "--polytope", &ws.path("hexagon.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("2 decompositions\n"), "{out}");
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn compare_reports_mismatch_with_exit_one() {
    let ws = Workspace::new();
    let f3 = ws.path("f3.txt");
    let (code, out, _) = invoke(&["period", "compare", "--model", "X2", "--poly-file", &f3, "--order", "10", "--expect-equal"]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "mismatch at index 2: classical 6, quantum 4");
    let (code, out, _) = invoke(&["period", "compare", "--model", "X2", "--poly-file", &f3, "--order", "10"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = invoke(&["period", "compare", "--model", "X3", "--poly-file", &f3, "--order", "10", "--expect-equal"]);
    assert_eq!((code, out.trim()), (0, "equal to order 10"));
}

#[test]
fn polytope_subcommands() {
    let ws = Workspace::new();
    let p = ws.path("pyramid.json");
    let (code, out, _) = invoke(&["polytope", "check", "--polytope", &p]);
    assert_eq!(code, 0);
    assert!(out.contains("vertices: 7\nfacets: 7\nedges: 12\nlattice points: 9\nfano: true\nreflexive: true\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("facet ")).count(), 7);
    assert!(out.contains("normal (0,0,-1) offset 1 vertices"), "{out}");
    let (_, json, _) = invoke(&["polytope", "check", "--polytope", &p, "--json"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["reflexive"], true);
    let (code, out, _) = invoke(&["polytope", "dual", "--polytope", &ws.path("hexagon.json"), "--json"]);
    assert_eq!(code, 0);
    let dual = decode_polytope_document(out.as_bytes()).unwrap();
    assert_eq!(dual.vertices.len(), 6);
    let (_, out, _) = invoke(&["polytope", "points", "--polytope", &p]);
    assert_eq!(out.lines().count(), 9);
}

#[test]
fn non_fano_dual_is_a_domain_error() {
    let ws = Workspace::new();
    let q = ws.write("q.json", r#"{"name": "q", "vertices": [[2,0],[0,1],[-1,0],[0,-1]]}"#);
    let (code, _, err) = invoke(&["polytope", "dual", "--polytope", q.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("Fano"), "{err}");
}

#[test]
fn input_errors_exit_two() {
    let ws = Workspace::new();
    let mixed = ws.write("mixed.json", r#"{"name": "m", "vertices": [[1,0],[0,1,0]]}"#);
    let (code, _, err) = invoke(&["polytope", "check", "--polytope", mixed.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("length"), "{err}");
    let broken = ws.write("broken.json", "{\n \"name\": 3\n}");
    let (code, _, err) = invoke(&["polytope", "check", "--polytope", broken.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(invoke(&["laurent", "parse", "--poly", "x^"]).0, 2);
    assert_eq!(invoke(&["period", "quantum", "--model", "X9"]).0, 2);
    assert_eq!(invoke(&["nonsense"]).0, 2);
    assert_eq!(invoke(&["--help"]).0, 0);
}

#[test]
fn minkowski_polynomials_from_choices() {
    let ws = Workspace::new();
    let p = ws.path("pyramid.json");
    let (code, f2, _) = invoke(&["laurent", "minkowski", "--polytope", &p, "--choice", "segments"]);
    assert_eq!(code, 0);
    let (_, parsed, _) = invoke(&["laurent", "parse", "--poly", F2]);
    assert_eq!(f2, parsed);
    let (_, f3, _) = invoke(&["laurent", "minkowski", "--polytope", &p, "--choice", "triangles"]);
    let (_, parsed, _) = invoke(&["laurent", "parse", "--poly", F3]);
    assert_eq!(f3, parsed);
    let (code, _, err) = invoke(&["laurent", "minkowski", "--polytope", &p, "--choice", "trivial"]);
    assert_eq!(code, 1);
    assert!(err.contains("no decomposition"), "{err}");

    let (_, check, _) = invoke(&["polytope", "check", "--polytope", &p, "--json"]);
    assert!(check.contains("\"facets\": 7"));
    let hex_facet = (0..7)
        .find(|&i| {
            let file = ws.write(
                "choice.json",
                &format!(r#"[{{"facet": {i}, "summands": [[[0,0],[1,0]], [[0,0],[0,1]], [[0,0],[-1,-1]]]}}]"#),
            );
            invoke(&["laurent", "minkowski", "--polytope", &p, "--choice-file", file.to_str().unwrap()]).0 == 0
        })
        .expect("some facet accepts the segment decomposition");
    let (_, out, _) = invoke(&["laurent", "minkowski", "--polytope", &p, "--choice-file", &ws.path("choice.json")]);
    assert_eq!(out, f2, "facet {hex_facet}");
}

#[test]
fn mm_check_and_newton() {
    let ws = Workspace::new();
    let (code, out, _) = invoke(&["laurent", "mm-check", "--poly", F2, "--polytope", &ws.path("pyramid.json")]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
    let (code, out, _) = invoke(&["laurent", "mm-check", "--poly", "z*(2+2*x+x*y+y+x^-1+x^-1*y^-1+y^-1)+z^-1"]);
    assert_eq!((code, out.as_str()), (0, "false\n"));
    let (_, newton, _) = invoke(&["laurent", "newton", "--poly", F3]);
    let doc = decode_polytope_document(newton.as_bytes()).unwrap();
    assert_eq!(doc.vertices.len(), 7);
}

#[test]
fn regularise_and_recurrence() {
    let ws = Workspace::new();
    let (_, quantum, _) = invoke(&["period", "quantum", "--model", "X2", "--order", "10"]);
    let file = ws.write("q.json", &quantum);
    let (code, out, _) = invoke(&["period", "regularise", "--series", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: SeriesDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.kind, "regularised-quantum");
    assert_eq!(doc.coefficients.last().unwrap(), "567504");
    let (_, via_model, _) = invoke(&["period", "regularise", "--model", "X2", "--order", "10"]);
    assert_eq!(out, via_model);

    let (code, out, _) = invoke(&["period", "recurrence", "--poly", "x + x^-1", "--order", "40", "--max-order", "2", "--max-degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "order 2 degree 1\n(k + 2)*c(k+2) + (-4*k - 4)*c(k) = 0\n");
    let (code, _, err) = invoke(&["period", "recurrence", "--model", "X2", "--order", "10"]);
    assert_eq!(code, 1);
    assert!(err.contains("need at least"), "{err}");
}

#[test]
fn toric_subcommands() {
    let (code, out, _) = invoke(&["toric", "eqs", "--style", "tom"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 9);
    assert_eq!(out.lines().next(), Some("x7^2 - x1*x4"));
    let (_, out, _) = invoke(&["toric", "eqs", "--style", "jerry", "--deform"]);
    assert_eq!(out.lines().count(), 12);
    assert!(out.lines().any(|l| l == "x7^2 + x7*s - x1*x4"));
    let (_, out, _) = invoke(&["toric", "eqs", "--style", "tom", "--deform", "--projectivise"]);
    assert!(out.contains("x7^2 + x0*x7*u + x0*x7*v - x3*x6 + x0^2*u*v"));
    assert_eq!(invoke(&["toric", "eqs", "--style", "tom", "--projectivise"]).0, 1);

    let (code, out, _) = invoke(&["toric", "verify", "--style", "jerry", "--samples", "5", "--seed", "9"]);
    assert_eq!(code, 0);
    assert!(out.contains("parametrization: true"));
    let (code, out, _) = invoke(&["toric", "probe", "--style", "tom", "--samples", "4", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("origin: rank 0"));
    assert_eq!(out.matches("rank 4").count(), 8);
}

#[test]
fn output_is_deterministic() {
    let args: &[&[&str]] = &[
        &["toric", "probe", "--style", "jerry", "--samples", "3", "--seed", "42"],
        &["period", "quantum", "--model", "X3", "--order", "12"],
        &["toric", "eqs", "--style", "jerry"],
    ];
    for a in args {
        assert_eq!(invoke(a), invoke(a));
    }
}

#[test]
fn polytope_documents_round_trip() {
    let doc = decode_polytope_document(PYRAMID.as_bytes()).unwrap();
    let text = encode_polytope(&doc);
    assert_eq!(encode_polytope(&decode_polytope_document(text.as_bytes()).unwrap()), text);
    let ws = Workspace::new();
    let first = ws.write("a.json", HEXAGON);
    let (_, sum, _) = invoke(&["mink", "sum", "--polytope", first.to_str().unwrap(), "--polytope", &ws.path("hexagon.json")]);
    let sum: PolytopeDocument = decode_polytope_document(sum.as_bytes()).unwrap();
    assert_eq!(sum.vertices, [[-2, -2], [-2, 0], [0, -2], [0, 2], [2, 0], [2, 2]]);
}

fn binary() -> &'static Path {
    Path::new(env!("CARGO_BIN_EXE_toric-mirror"))
}

#[test]
fn binary_exit_codes() {
    let ws = Workspace::new();
    let ok = Command::new(binary()).args(["mink", "decompose", "--polytope", &ws.path("hexagon.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("2 decompositions"));
    let mismatch = Command::new(binary())
        .args(["period", "compare", "--model", "X2", "--poly-file", &ws.path("f3.txt"), "--order", "10", "--expect-equal"])
        .output()
        .unwrap();
    assert_eq!(mismatch.status.code(), Some(1));
    let usage = Command::new(binary()).args(["period"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(!usage.stderr.is_empty());
}
