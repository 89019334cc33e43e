use std::io::Cursor;
use std::process::Command;

use clap::Parser;
use infoarch::kbstore::KnowledgeBase;
use infoarch_cli::{run, Cli};

fn exec(args: &[&str], input: &str) -> (i32, String) {
    let cli = Cli::try_parse_from(std::iter::once("infoarch").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let code = run(&cli, &mut Cursor::new(input.as_bytes()), &mut out, false).unwrap();
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn spm_show_renders_the_living_room() {
    let (code, out) = exec(&["spm", "show", "--layer", "0"], "");
    assert_eq!(code, 0);
    let row = |v: &str| out.lines().find(|l| l.contains(&format!("| {v} "))).unwrap().to_string();
    assert!(row("Table").contains("Sofa"));
    assert!(row("Fridge").contains("Cat (a)"));
    assert!(out.contains("House (layer 1)"));
}

#[test]
fn readout_modes() {
    let (_, out) = exec(&["--kb", "queen", "readout", "apple"], "");
    assert!(out.contains("Apple's color is red\n"));
    let (_, out) = exec(&["--kb", "queen", "readout", "apple", "--mode", "SRM"], "");
    assert!(out.contains("Apple has color\n"));
    let (_, out) = exec(&["--kb", "queen", "readout", "Queen Elizabeth", "--mode", "srm", "--members"], "");
    assert!(out.contains("Queen Elizabeth has cat and dog\n"));
}

#[test]
fn transform_targets() {
    assert_eq!(exec(&["transform", "This apple is red.", "--to", "verify"], "").1, "Is this apple red ?\n");
    assert_eq!(exec(&["transform", "This apple is red.", "--to", "search"], "").1, "What color is this apple ?\n");
    assert_eq!(
        exec(&["transform", "Queen has twelve crowns.", "--to", "search:twelve"], "").1,
        "How many crowns does Queen have ?\n"
    );
    let cli = Cli::try_parse_from(["infoarch", "transform", "This apple is red.", "--to", "ask"]).unwrap();
    assert!(run(&cli, &mut Cursor::new(&b""[..]), &mut Vec::new(), false).is_err());
}

#[test]
fn repl_replays_the_apple_dialogue() {
    let (code, out) = exec(&["repl"], "Nana, do we have any apple?\nGive me an apple.\n:quit\nignored\n");
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "Nana: Yes.");
    assert_eq!(lines[1], "Nana: Sure.");
    assert!(lines[2].contains("3 -> 2 at 2020-10-01T17:06:00Z"));
    assert_eq!(lines.len(), 3);
}

#[test]
fn repl_saves_on_exit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("house.kb.json");
    KnowledgeBase::house().save(&path).unwrap();
    let p = path.to_str().unwrap();
    let (_, out) = exec(&["--kb", p, "--save-on-exit", "repl"], "Give me an apple.\n");
    assert!(out.contains("saved"));
    let kb = KnowledgeBase::load(&path).unwrap();
    let apple = kb.memory.find("apple").unwrap();
    assert_eq!(kb.memory.sheet(apple).unwrap().records.len(), 2);

    let cli = Cli::try_parse_from(["infoarch", "--save-on-exit", "repl"]).unwrap();
    assert!(run(&cli, &mut Cursor::new(&b""[..]), &mut Vec::new(), false).is_err());
}

#[test]
fn corpus_reports_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let good = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/apple_dialogue.txt");
    let (code, out) = exec(&["corpus", "run", good], "");
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("5 turns, 0 mismatches\n"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "do we have any banana?\nYes.\n").unwrap();
    let (code, out) = exec(&["corpus", "run", bad.to_str().unwrap()], "");
    assert_eq!(code, 1);
    assert!(out.contains("FAIL  line 1"));
    assert!(out.contains("  - Yes.\n  + No.\n"));
}

#[test]
fn kb_check_and_fmt() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.kb.json");
    let text = KnowledgeBase::bundled_text("queen").unwrap();
    // Same document, different layout.
    let compact: String = text.lines().map(str::trim).collect();
    std::fs::write(&path, compact).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(exec(&["kb", "check", p], "").0, 0);
    assert_eq!(exec(&["kb", "fmt", "--check", p], "").0, 1);
    assert_eq!(exec(&["kb", "fmt", p], "").0, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    assert_eq!(exec(&["kb", "fmt", "--check", p], "").0, 0);

    std::fs::write(&path, text.replacen("\"left\": null", "\"left\": \"ghost\"", 1)).unwrap();
    let (code, out) = exec(&["kb", "check", p], "");
    assert_eq!(code, 1);
    assert!(out.contains("line "), "{out}");
}

#[test]
fn binary_runs_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_infoarch"))
        .args(["--kb", "house", "transform", "The cat has a black tail.", "--to", "search:cat"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "Who has a black tail ?\n");
    let out = Command::new(env!("CARGO_BIN_EXE_infoarch")).args(["--kb", "/no/such.kb.json", "spm", "show"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
