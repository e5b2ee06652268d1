use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn gapped(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapped"))
        .args(args)
        .env_remove("GAPPED_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn canonical_documents_round_trip() {
    for name in ["chain.json", "shifted.json", "barcode.json", "gapped.json", "translated.json", "certificate.json", "cosphere.json"] {
        let path = data(name);
        let out = gapped(&["validate", "--canonical", &path]);
        assert!(out.status.success(), "{name}: {}", stderr(&out));
        assert_eq!(stdout(&out), std::fs::read_to_string(&path).unwrap(), "{name}");
    }
}

#[test]
fn parse_errors_exit_two_with_position() {
    let out = gapped(&["validate", &data("zero_denominator.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("zero denominator") && err.contains("line 6 column"), "{err}");

    let out = gapped(&["validate", &data("truncated.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn version_mismatch_names_both_versions() {
    let out = gapped(&["validate", &data("wrong_version.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("gapped/2") && err.contains("gapped/1"), "{err}");
}

#[test]
fn validation_errors_exit_one() {
    let out = gapped(&["validate", &data("not_functorial.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("functoriality"));
}

#[test]
fn barcode_text_and_svg() {
    let out = gapped(&["barcode", &data("chain.json")]);
    assert_eq!(stdout(&out), "0 1 1\n1 inf 1\n");
    let svg = stdout(&gapped(&["barcode", &data("chain.json"), "--format", "svg"]));
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("marker-end").count(), 1);
    assert_eq!(svg, stdout(&gapped(&["barcode", &data("chain.json"), "--format", "svg"])));
    let svg = stdout(&gapped(&["barcode", &data("barcode.json"), "--format", "svg"]));
    assert_eq!(svg.matches("marker-start").count(), 1);
}

#[test]
fn distances() {
    let out = gapped(&["bottleneck", &data("chain.json"), &data("shifted.json")]);
    assert_eq!(stdout(&out), "1/2\n");
    let out = gapped(&["interleave", &data("chain.json"), &data("shifted.json")]);
    assert_eq!(stdout(&out), "interleaving distance 1/2\n");
    let out = gapped(&["bottleneck", &data("chain.json"), &data("barcode.json")]);
    assert_eq!(stdout(&out), "inf\n");
}

#[test]
fn certificates() {
    let out = gapped(&[
        "interleave",
        &data("gapped.json"),
        &data("translated.json"),
        &data("certificate.json"),
        "--class",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "certificate valid at delta 2\nc(a, G) = 0\nc(a, H) = -1\ndifference 1\nbound holds\n"
    );
    let out = gapped(&["interleave", &data("gapped.json"), &data("gapped.json"), &data("bad_certificate.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("at window index 0"));
}

#[test]
fn restrictions_and_spectral_values() {
    let out = gapped(&["restrict", &data("gapped.json")]);
    assert_eq!(stdout(&out), "restriction 0 offset 0 step 1 window 0 4\n  0 inf 1\n");
    let out = gapped(&["restrict", &data("gapped.json"), "--stability"]);
    assert!(stdout(&out).ends_with("passed\n"));
    let out = gapped(&["gapped-spectral", &data("translated.json"), "--class", "1", "--eternal"]);
    assert_eq!(stdout(&out), "spectral -1\neternal within window\n");
    let out = gapped(&["spectral", &data("chain.json"), "--class", "1"]);
    assert_eq!(stdout(&out), "first appearance 1\nspectral 1\n");
}

#[test]
fn dual_and_translate_are_inverse_pairs() {
    let dir = std::env::temp_dir().join(format!("gapped-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let once = dir.join("dual.json");
    std::fs::write(&once, stdout(&gapped(&["dual", &data("gapped.json")]))).unwrap();
    let twice = stdout(&gapped(&["dual", once.to_str().unwrap()]));
    assert_eq!(twice, std::fs::read_to_string(data("gapped.json")).unwrap());

    let moved = dir.join("moved.json");
    std::fs::write(&moved, stdout(&gapped(&["translate", &data("translated.json"), "--by", "-1"]))).unwrap();
    assert_eq!(std::fs::read_to_string(&moved).unwrap(), std::fs::read_to_string(data("gapped.json")).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cosphere_degree_five() {
    let out = gapped(&["contact", "cosphere", "--n", "3", "--mmax", "6", "--degree", "5"]);
    let text = stdout(&out);
    assert!(text.contains("barcode (epsilon suppressed)\n2π inf 1\nc(0, u) = -2π\n"), "{text}");
    let from_file = stdout(&gapped(&["contact", "cosphere", "--request", &data("cosphere.json")]));
    assert!(from_file.ends_with("c(0, u) = -2π\nc(1/2, u) = -2π+1/2\n"), "{from_file}");
    let json = stdout(&gapped(&["contact", "cosphere", "--n", "3", "--mmax", "2", "--degree", "5", "--format", "json"]));
    assert!(json.contains("\"two_pi\": \"1\""), "{json}");
}

#[test]
fn cosphere_model_feeds_gapped_commands() {
    let dir = std::env::temp_dir().join(format!("gapped-model-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("model.json");
    let doc = stdout(&gapped(&["contact", "cosphere", "--n", "3", "--mmax", "3", "--degree", "7", "--emit-model"]));
    std::fs::write(&model, doc).unwrap();
    let out = gapped(&["gapped-spectral", model.to_str().unwrap(), "--class", "1"]);
    assert_eq!(stdout(&out), "spectral -2π-1/100\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn suite_prints_seed_and_honours_env() {
    let out = gapped(&["suite", "--seed", "5", "--cases", "10"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("seed 5\ncases 10\n"));
    let env = Command::new(env!("CARGO_BIN_EXE_gapped"))
        .args(["suite", "--seed", "5", "--cases", "10"])
        .env("GAPPED_SEED", "9")
        .output()
        .unwrap();
    assert!(stdout(&env).starts_with("seed 9\n"));
}

#[test]
fn wrong_kind_is_an_input_error() {
    let out = gapped(&["spectral", &data("barcode.json"), "--class", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("expected persistence_module, found barcode"));
}
