mod common;

use std::path::PathBuf;

use common::{random_shift, ALPHABETS};
use groupshift_cli::run_command;
use groupshift_cli::spec::{format_word, parse_spec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    run_command(std::iter::once("groupshift").chain(args.iter().copied()))
}

fn value<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("groupshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn certify_full_shift_z4() {
    let (code, out) = run(&["certify", &spec("full-shift-Z4.spec")]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "certificate.complete"), Some("true"));
    assert_eq!(value(&out, "encoder.tap.0"), Some("order 4 height 1 word @0 1"));
    assert_eq!(value(&out, "prime.2.heights"), Some("1"));
    assert!(value(&out, "disclaimer").is_some());
}

#[test]
fn analyze_delayed_repetition_is_negative() {
    let (code, out) = run(&["analyze", &spec("repeat-code.spec")]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(value(&out, "analysis.n_c"), Some("none (cap 16)"));
    assert_eq!(value(&out, "analysis.weakly-controllable"), Some("true"));
    assert!(value(&out, "analysis.n_c.counterexample").is_some());
    assert_eq!(value(&out, "verdict"), Some("not-controllable"));
    // Raising the cap past the delay finds the index.
    let (code, out) = run(&["analyze", &spec("repeat-code.spec"), "--index-cap", "20"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "analysis.n_c"), Some("20"));
    assert_eq!(value(&out, "horizon.index-cap"), Some("20"));
}

#[test]
fn encode_messages() {
    let (code, out) = run(&["encode", &spec("full-shift-Z4.spec"), &spec("message-Z4.msg")]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "codeword"), Some("@0 1 3 0 0 2"));
    let (code, out) = run(&["encode", &spec("full-shift-Z4.spec"), &spec("bad-message-Z4.msg")]);
    assert_eq!(code, 2);
    assert!(out.contains("line 1") && out.contains("out of range"), "{out}");
    let msg = scratch("diff.msg", "0: 1\n2: 1\n");
    let (code, out) = run(&["encode", &spec("difference.spec"), &msg]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "codeword"), Some("@0 1 1 1 1"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["certify", "/nonexistent/x.spec"]).0, 2);
    let bad = scratch("bad.spec", "group: Z4\ngen @0: 1\ngen @1: 9\n");
    let (code, out) = run(&["certify", &bad]);
    assert_eq!(code, 2);
    assert!(out.contains("line 3"), "{out}");
    let z0 = scratch("z0.spec", "group: Z0\n");
    assert_eq!(run(&["analyze", &z0]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn generators_and_refusals() {
    let (code, out) = run(&["generators", &spec("full-shift-Z2xZ4.spec")]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "prime.2.heights"), Some("1 0"));
    let (code, out) = run(&["generators", &spec("no-order-index.spec")]);
    assert_eq!(code, 1);
    assert!(value(&out, "prime.2.error").is_some(), "{out}");
    let (code, out) = run(&["certify", &spec("no-order-index.spec")]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "certificate.failed-stage"), Some("order-controllability"));
}

#[test]
fn difference_encoder_report() {
    let (code, out) = run(&["certify", &spec("difference.spec")]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "certificate.failed-stage"), Some("injectivity"));
    assert_eq!(value(&out, "checks.noncatastrophic"), Some("false"));
    assert_eq!(value(&out, "checks.noncatastrophic.witness"), Some("@0 1"));
}

#[test]
fn oracle_agrees_with_certificates_on_tiny_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut agreed = 0;
    for i in 0..30 {
        let g = random_shift(&mut rng, ALPHABETS[i % ALPHABETS.len()]);
        let h = g.alphabet();
        let mut text = format!("group: {h}\n");
        for w in g.generators() {
            let s = format_word(h, w);
            let (at, body) = s.split_once(' ').unwrap();
            text.push_str(&format!("gen {at}: {body}\n"));
        }
        assert_eq!(parse_spec(&text).unwrap().shift(), g);
        let path = scratch(&format!("r{i}.spec"), &text);
        let (code, out) = run(&["oracle", &path, "--from", "-2", "--to", "2"]);
        let certified = run(&["certify", &path]).0 == 0;
        assert_eq!(value(&out, "oracle.size"), value(&out, "oracle.window-module.order"), "{text}");
        if certified {
            assert_eq!(code, 0, "{text}\n{out}");
            assert_eq!(value(&out, "oracle.size"), value(&out, "oracle.encoder-image.order"));
            agreed += 1;
        }
    }
    assert!(agreed >= 20);
}

#[test]
fn reports_are_deterministic_without_timing() {
    let a = run(&["analyze", &spec("mixed-Z4xZ2.spec")]);
    assert_eq!(a, run(&["analyze", &spec("mixed-Z4xZ2.spec")]));
    let (_, timed) = run(&["analyze", &spec("mixed-Z4xZ2.spec"), "--timing"]);
    assert!(value(&timed, "timing.ms").is_some());
}
