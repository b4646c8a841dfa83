//! CLI acceptance: deterministic reports, the exit-code contract, and
//! witness replayability.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrtopo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(
        out.status.code() == Some(0),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn acceptance_8_reports_are_byte_identical_across_runs() {
    let per_space: Vec<(&str, Vec<Vec<String>>)> = vec![
        (
            "chain3.space",
            vec![
                vec!["irr".into(), "--set".into(), "{a} | {b}".into()],
                vec!["sup".into(), "--set".into(), "{a} | {c}".into()],
                vec!["si".into(), "--iterate".into()],
                vec!["sober".into()],
                vec!["waybelow".into(), "a".into(), "c".into()],
                vec!["belowset".into(), "b".into()],
                vec!["continuity".into()],
                vec!["interpolate".into(), "a".into(), "c".into()],
                vec![
                    "converge".into(),
                    "--net".into(),
                    "const(b)".into(),
                    "--to".into(),
                    "a".into(),
                ],
                vec!["kelley".into()],
                vec!["verdict".into()],
            ],
        ),
        (
            "nat_inf.space",
            vec![
                vec!["irr".into(), "--set".into(), "tail(N,0)".into()],
                vec!["sup".into(), "--set".into(), "tail(N,3)".into()],
                vec!["si".into(), "--iterate".into()],
                vec!["sober".into()],
                vec!["waybelow".into(), "N@3".into(), "inf".into()],
                vec!["belowset".into(), "inf".into()],
                vec!["continuity".into()],
                vec![
                    "converge".into(),
                    "--net".into(),
                    "chain(N)".into(),
                    "--to".into(),
                    "inf".into(),
                ],
                vec!["kelley".into()],
                vec!["verdict".into()],
            ],
        ),
        (
            "lambda.space",
            vec![
                vec!["irr".into(), "--set".into(), "tail(A,0) | tail(B,0)".into()],
                vec!["sup".into(), "--set".into(), "tail(A,0)".into()],
                vec!["si".into()],
                vec!["sober".into()],
                vec!["waybelow".into(), "A@3".into(), "top".into()],
                vec!["belowset".into(), "top".into()],
                vec!["continuity".into()],
                vec![
                    "converge".into(),
                    "--net".into(),
                    "interleave(chain(A),chain(B))".into(),
                    "--to".into(),
                    "top".into(),
                ],
                vec!["kelley".into()],
                vec!["verdict".into()],
            ],
        ),
        (
            "rat_cc_scott.space",
            vec![
                vec!["irr".into(), "--set".into(), "(0,1/2)".into()],
                vec!["sup".into(), "--set".into(), "(0,1/2)".into()],
                vec!["si".into(), "--iterate".into()],
                vec!["sober".into()],
                vec!["waybelow".into(), "1/3".into(), "1/2".into()],
                vec!["belowset".into(), "1/2".into()],
                vec!["continuity".into()],
                vec!["interpolate".into(), "1/4".into(), "1/2".into()],
                vec![
                    "converge".into(),
                    "--net".into(),
                    "ratascent(1/2)".into(),
                    "--to".into(),
                    "1/2".into(),
                ],
                vec!["kelley".into()],
                vec!["verdict".into()],
            ],
        ),
    ];
    let mut reports = 0usize;
    for (space, commands) in &per_space {
        let file = corpus(space);
        for cmd in commands {
            let mut args: Vec<&str> = vec![cmd[0].as_str()];
            args.push(&file);
            args.extend(cmd[1..].iter().map(|s| s.as_str()));
            args.extend(["--json", "--seed", "42"]);
            let first = stdout_of(&args);
            let second = stdout_of(&args);
            assert_eq!(
                first, second,
                "report for {space} {cmd:?} is not byte-identical"
            );
            reports += 1;
        }
    }
    // the full corpus at least through the verdict pipeline
    for name in [
        "antichain_top.space",
        "diamond.space",
        "nat_inf_upper.space",
        "rat_cc_alex.space",
        "rat_cc_upper.space",
        "rat_oo_scott.space",
        "rat_co_scott.space",
        "rat_oc_scott.space",
        "rat_cu_scott.space",
        "rat_uc_scott.space",
        "rat_uu_scott.space",
    ] {
        let file = corpus(name);
        let args = ["verdict", file.as_str(), "--json", "--seed", "42"];
        let first = stdout_of(&args);
        let second = stdout_of(&args);
        assert_eq!(first, second, "verdict report for {name} not byte-identical");
        reports += 1;
    }
    println!("ACCEPTANCE 8 determinism: PASS ({reports} reports byte-identical across repeated runs)");
}

#[test]
fn exit_code_contract() {
    // 0: success
    let ok = run(&["sober", &corpus("rat_cc_scott.space")]);
    assert_eq!(ok.status.code(), Some(0));

    // 0: assertion matches
    let ok = run(&[
        "sober",
        &corpus("rat_cc_scott.space"),
        "--assert",
        "k_bounded_sober=proven",
    ]);
    assert_eq!(ok.status.code(), Some(0));

    // 2: parse error
    let dir = std::env::temp_dir().join("irrtopo-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("nonsense.space");
    std::fs::write(&bad, "space sideways\npoints a\n").unwrap();
    let parse_err = run(&["verdict", bad.to_str().unwrap()]);
    assert_eq!(parse_err.status.code(), Some(2));

    // 3: validation error — the declared supremum is not least
    let sup_not_lub = dir.join("sup_not_lub.space");
    std::fs::write(
        &sup_not_lub,
        "space vspace\npoints p q\nchain A\nrel chain_below A p\nrel chain_below A q\nrel q <= p\nsup A = p\ntopology scott\n",
    )
    .unwrap();
    let val_err = run(&["verdict", sup_not_lub.to_str().unwrap()]);
    assert_eq!(val_err.status.code(), Some(3), "{}", String::from_utf8_lossy(&val_err.stderr));
    assert!(String::from_utf8_lossy(&val_err.stderr).contains("least upper bound"));

    // 3: antisymmetry failure is rejected at validation
    let cyclic = dir.join("cyclic.space");
    std::fs::write(
        &cyclic,
        "space finite\npoints a b\nrel a <= b\nrel b <= a\ntopology alexandroff\n",
    )
    .unwrap();
    let cyc = run(&["sober", cyclic.to_str().unwrap()]);
    assert_eq!(cyc.status.code(), Some(3));

    // 4: assertion failure
    let bad_assert = run(&[
        "sober",
        &corpus("rat_cc_scott.space"),
        "--assert",
        "k_bounded_sober=refuted",
    ]);
    assert_eq!(bad_assert.status.code(), Some(4));

    println!("exit-code contract: PASS");
}

#[test]
fn witnesses_replay_through_the_cli() {
    // the sobriety witness re-parses and is confirmed irreducible without
    // a least attained supremum
    let out = run(&["sober", &corpus("rat_cc_scott.space"), "--json"]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let witness = v["result"]["sober"]["detail"]
        .as_str()
        .unwrap()
        .trim_start_matches("set ")
        .to_string();
    let irr = run(&[
        "irr",
        &corpus("rat_cc_scott.space"),
        "--set",
        &witness,
        "--assert",
        "irreducible=true",
    ]);
    assert_eq!(irr.status.code(), Some(0));
    let sup = run(&[
        "sup",
        &corpus("rat_cc_scott.space"),
        "--set",
        &witness,
        "--assert",
        "sup=no-least-upper-bound",
    ]);
    assert_eq!(sup.status.code(), Some(0));

    // the derivative witness on the chain-with-top space re-refutes
    let out = run(&["si", &corpus("nat_inf.space"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let witness = v["result"]["si_infty"]["detail"]
        .as_str()
        .unwrap()
        .trim_start_matches("set ")
        .to_string();
    let replay = run(&[
        "si",
        &corpus("nat_inf.space"),
        "--set",
        &witness,
        "--assert",
        "si_open=refuted",
    ]);
    assert_eq!(replay.status.code(), Some(0));
    println!("witness replay: PASS");
}

#[test]
fn assertion_examples_from_the_interface_contract() {
    // verdict conclusions drive CI through --assert
    for (file, key, value) in [
        ("lambda.space", "conclusion", "nottopological"),
        ("rat_cc_scott.space", "conclusion", "topological"),
        ("nat_inf.space", "conclusion", "outofscope"),
        ("rat_cc_scott.space", "continuity", "proven"),
        ("nat_inf.space", "gamma", "1"),
        ("rat_cc_scott.space", "gamma", "0"),
    ] {
        let cmd = match key {
            "conclusion" => "verdict",
            "continuity" => "continuity",
            _ => "si",
        };
        let out = run(&[cmd, &corpus(file), "--assert", &format!("{key}={value}")]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "assert {key}={value} on {file}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    println!("interface assertions: PASS");
}
