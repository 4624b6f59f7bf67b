use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use cycletrace::poly::{parse_poly, parse_ratfun, Monomial, Poly, RationalFunction, VarTable, Q};
use cycletrace::Error;
use cycletrace_cli::commands::{check_item, run, Command as Op, Options};
use cycletrace_cli::corpus::{bundled, BUNDLED};
use cycletrace_cli::family::parse_family;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cycletrace"))
}

fn exit_of(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cycletrace-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exit_codes_per_subcommand() {
    let cases: &[(&[&str], i32)] = &[
        (&["trace", "whitney.fam", "u^2", "u*du"], 0),
        (&["trace", "whitney.fam", "q^2"], 2),
        (&["classify", "cusp.fam"], 0),
        (&["classify", "weights1.fam"], 2),
        (&["check", "whitney.fam"], 0),
        (&["check", "cusp.fam"], 1),
        (&["check", "missing.fam"], 2),
        (&["weights", "weights1.fam"], 0),
        (&["weights", "weights2.fam"], 1),
        (&["weights", "weights1.fam", "--max-weight", "2"], 1),
        (&["fibers", "cartan.fam", "--point", "0,0,1"], 0),
        (&["fibers", "cartan.fam"], 2),
        (&["fibers", "cartan.fam", "--point", "1,1,1"], 2),
        (&["residue", "whitney.fam", "u*v"], 0),
        (&["residue", "cusp.fam"], 2),
        (&["pullback", "cone.fam"], 0),
        (&["pullback", "whitney.fam"], 2),
    ];
    for (args, code) in cases {
        assert_eq!(exit_of(args), *code, "{args:?}");
    }
}

#[test]
fn check_reports_the_witness() {
    let out = bin().args(["check", "c10.fam", "--format", "machine"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let lines: Vec<serde_json::Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["record"], "report");
    assert_eq!(lines[0]["operation"], "check");
    let verdict = lines.iter().find(|l| l["record"] == "verdict").unwrap();
    assert_eq!(verdict["verdict"], "ContinuousOnly_evidence");
    let witness = lines.iter().find(|l| l["record"] == "witness").unwrap();
    assert_eq!(witness["relation"], "s^2 - 4*x3*y1");
    assert_eq!(witness["item"], "u*dv");
    assert_eq!(lines.last().unwrap()["exit"], 1);
}

#[test]
fn machine_reports_are_deterministic() {
    let dir = scratch("det");
    let out = dir.join("report.jsonl");
    let run_once = |seed: &str| {
        bin()
            .args([
                "fibers",
                "cartan.fam",
                "--point",
                "0,0,1",
                "--point",
                "0,1,0",
                "--format",
                "machine",
                "--seed",
                seed,
            ])
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
    };
    let a = run_once("5");
    let written = std::fs::read(&out).unwrap();
    let b = run_once("5");
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, written);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"seed\":5"));
    assert!(!text.contains("time"));
}

#[test]
fn corpus_runs_clean_and_reports_tampering() {
    assert_eq!(exit_of(&["corpus"]), 0);
    let dir = scratch("corpus");
    let edited = bundled("cusp").unwrap().replace("expect witness y/x", "expect witness x/y");
    std::fs::write(dir.join("cusp.fam"), edited).unwrap();
    std::fs::write(dir.join("cartan.fam"), bundled("cartan").unwrap()).unwrap();
    let out = bin().args(["corpus", "--dir"]).arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let cartan = text.find("cartan.fam: 5/5").unwrap();
    let cusp = text.find("cusp.fam: 5/6").unwrap();
    assert!(cartan < cusp);
    std::fs::write(dir.join("broken.fam"), "base x\nfiber\n").unwrap();
    assert_eq!(exit_of(&["corpus", "--dir", dir.to_str().unwrap()]), 2);
}

#[test]
fn every_bundled_item_meets_its_expectations() {
    for (name, text) in BUNDLED {
        if name == "whitney.fam" || name == "cone.fam" {
            continue;
        }
        let o = check_item(name, text, &Options::default());
        assert!(!o.errored && o.failures == 0, "{name}: {:#?}", o.records.iter().map(|r| &r.text).collect::<Vec<_>>());
    }
}

#[test]
fn family_errors_carry_positions() {
    assert!(matches!(parse_family(""), Err(Error::Parse { line: 1, col: 1, .. })));
    assert!(matches!(parse_family("  \n# nothing\n"), Err(Error::Parse { .. })));
    assert!(matches!(parse_family("base x\nfiber x\n"), Err(Error::Invalid(_))));
    let text = "base x y\nfiber u\nrelations x*y\ncomponent weight 0\n  equations u - x\n";
    assert!(matches!(parse_family(text), Err(Error::Invalid(m)) if m.contains("positive")));
    let text = "base x y\nfiber u\ncomponent weight -2\n  equations u - x\n";
    assert!(parse_family(text).is_err());
    match parse_family("base x\nfiber u\ncomponent\n  branch x + , 1\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    match parse_family("base x\nfiber u\nwibble 3\n") {
        Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (3, 1)),
        other => panic!("{other:?}"),
    }
    let report = run(&Op::Check, "bad.fam", "base x\nfiber u\nideal u^2 - zz\n", &Options::default());
    assert_eq!(report.exit, 2);
    let e = report.records_of("error").next().unwrap();
    assert_eq!(e.text, "error: bad.fam:3:13: unknown variable `zz`");
}

#[test]
fn cone_file_is_the_quadric_cone_cover() {
    let f = parse_family(bundled("cone").unwrap()).unwrap();
    assert_eq!(f.vars.list(&f.scale().base), ["x", "y", "z"]);
    assert_eq!(f.vars.list(&f.scale().fiber), ["u", "v"]);
    assert_eq!(f.family.covering().unwrap().degree(), 2);
    assert_eq!(f.ideal.as_ref().unwrap().len(), 3);
}

fn config(seed: u64) -> Config {
    Config { cases: 128, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

fn poly_from(coeffs: &[(i64, i64)], deg: u32) -> Poly {
    Monomial::all_up_to_degree(&[0, 1, 2], deg)
        .into_iter()
        .zip(coeffs)
        .fold(Poly::zero(), |acc, (m, &(n, d))| &acc + &Poly::term(Q::new(n.into(), d.into()), m))
}

proptest! {
    #![proptest_config(config(0xc11_0001))]

    #[test]
    fn printed_values_parse_back(a in prop::collection::vec((-9i64..=9, 1i64..=5), 20), b in prop::collection::vec((-4i64..=4, 1i64..=3), 10)) {
        let t = VarTable::from_names(&["x", "y", "z1"]).unwrap();
        let p = poly_from(&a, 3);
        prop_assert_eq!(parse_poly(&t.poly(&p), &t).unwrap(), p.clone());
        let den = &poly_from(&b, 2) + &Poly::one();
        prop_assume!(!den.is_zero());
        let r = RationalFunction::new(p, den);
        prop_assert_eq!(parse_ratfun(&t.ratfun(&r), &t).unwrap(), r);
    }
}
