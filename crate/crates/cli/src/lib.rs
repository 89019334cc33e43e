//! Command-line front end.
//!
//! Every subcommand works on one knowledge base chosen with `--kb`: a
//! `.kb.json` path, or the bundled names `queen` and `house`. Commands that
//! talk (`repl`, `corpus run`) write the changed knowledge base back when
//! `--save-on-exit` is given.

use std::io::{BufRead, Write};
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use infoarch::kbstore::KnowledgeBase;
use infoarch::readout::{read_defining, read_processes, read_set, ReadOptions, ReadingMode, SetDepth};
use infoarch::tasks::{to_search, to_verification, TaskSentence};
use infoarch::{NodeId, Session};

#[derive(Debug, Parser)]
#[command(name = "infoarch", version, about = "Rule-based language understanding over a knowledge base")]
pub struct Cli {
    /// Knowledge base: a .kb.json path or a bundled name (queen, house).
    #[arg(long, global = true, default_value = "house")]
    pub kb: String,
    /// Write the knowledge base back to --kb when the command finishes.
    #[arg(long, global = true)]
    pub save_on_exit: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spatial projection map views.
    Spm {
        #[command(subcommand)]
        action: SpmAction,
    },
    /// Read a node out as sentences.
    Readout(ReadoutArgs),
    /// Turn a description into a verification or a search.
    Transform(TransformArgs),
    /// Talk to the knowledge base turn by turn.
    Repl {
        #[arg(long)]
        speaker: Option<String>,
        #[arg(long)]
        addressee: Option<String>,
    },
    /// Replay transcript files.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "INFOARCH_PORT", default_value_t = 8080)]
        port: u16,
    },
    /// Knowledge-base file maintenance.
    Kb {
        #[command(subcommand)]
        action: KbAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpmAction {
    /// Print adjacency matrices and the scope tree.
    Show {
        /// Only this layer.
        #[arg(long)]
        layer: Option<i32>,
    },
}

#[derive(Debug, Args)]
pub struct ReadoutArgs {
    pub node: String,
    #[arg(long, default_value = "DRM")]
    pub mode: ReadingMode,
    /// Set readings list included members instead of spaces.
    #[arg(long)]
    pub members: bool,
    /// Omit the space when the value already names it.
    #[arg(long)]
    pub brief: bool,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub sentence: String,
    /// `verify`, `search` or `search:<slot>` where the slot is a word of the
    /// sentence or a chunk index.
    #[arg(long)]
    pub to: String,
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Replay alternating utterance and expected-response lines.
    Run { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum KbAction {
    /// Validate a file and summarize it.
    Check { path: Option<PathBuf> },
    /// Rewrite a file in canonical form.
    Fmt {
        path: Option<PathBuf>,
        /// Report whether the file is canonical without rewriting it.
        #[arg(long)]
        check: bool,
    },
}

/// Where the knowledge base came from.
enum Source {
    File(PathBuf),
    Bundled(&'static str),
}

fn resolve_kb(spec: &str) -> Result<(KnowledgeBase, Source)> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(text) = KnowledgeBase::bundled_text(spec) {
            let name = if spec == "queen" { "queen" } else { "house" };
            return Ok((KnowledgeBase::from_json(text, None)?, Source::Bundled(name)));
        }
    }
    let kb = KnowledgeBase::load(path).with_context(|| format!("loading {}", path.display()))?;
    Ok((kb, Source::File(path.to_path_buf())))
}

fn save_if_asked(cli: &Cli, kb: &KnowledgeBase, source: &Source, out: &mut dyn Write) -> Result<()> {
    if !cli.save_on_exit {
        return Ok(());
    }
    match source {
        Source::File(path) => {
            kb.save(path)?;
            writeln!(out, "saved {}", path.display())?;
            Ok(())
        }
        Source::Bundled(name) => bail!("--save-on-exit needs a file path, not the bundled {name:?}"),
    }
}

/// Runs a parsed command. Returns the process exit code.
pub fn run(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write, interactive: bool) -> Result<i32> {
    match &cli.command {
        Command::Kb { action } => return kb_command(cli, action, out),
        Command::Serve { port } => {
            let (kb, _) = resolve_kb(&cli.kb)?;
            let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, *port));
            writeln!(out, "listening on http://{addr}")?;
            out.flush()?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(infoarch_service::serve(addr, infoarch_service::AppState::new(kb)))?;
            return Ok(0);
        }
        _ => {}
    }
    let (kb, source) = resolve_kb(&cli.kb)?;
    match &cli.command {
        Command::Spm { action: SpmAction::Show { layer } } => {
            let layers: Vec<i32> = match layer {
                Some(l) => vec![*l],
                None => kb.spm.layers().into_iter().collect(),
            };
            for l in layers {
                write!(out, "{}", kb.spm.render_layer(l, Some(&kb.memory)))?;
                writeln!(out)?;
            }
            writeln!(out, "Scope tree")?;
            write!(out, "{}", kb.spm.render_tree())?;
            Ok(0)
        }
        Command::Readout(args) => {
            let opts = ReadOptions {
                brief: args.brief,
                depth: if args.members { SetDepth::Members } else { SetDepth::Spaces },
                at: None,
            };
            let readouts = match args.mode {
                ReadingMode::Drm => read_defining(&kb.memory, &kb.lexicon, &args.node, opts)?,
                ReadingMode::Srm => read_set(&kb.memory, &args.node, opts)?,
                ReadingMode::Prm => read_processes(&kb.memory, &kb.lexicon, &args.node)?,
            };
            for r in readouts {
                writeln!(out, "{}", r.sentence)?;
            }
            Ok(0)
        }
        Command::Transform(args) => {
            let sentence = TaskSentence::parse(&args.sentence, &kb.lexicon)?;
            let result = match args.to.split_once(':') {
                None if args.to == "verify" => to_verification(&sentence, &kb.lexicon)?,
                None if args.to == "search" => {
                    let slot = default_slot(&sentence).ok_or_else(|| anyhow!("no data chunk to ask about"))?;
                    to_search(&sentence, slot, &kb.lexicon, Some(&kb.memory.graph))?
                }
                Some(("search", slot)) => {
                    let slot = find_slot(&sentence, slot)?;
                    to_search(&sentence, slot, &kb.lexicon, Some(&kb.memory.graph))?
                }
                _ => bail!("--to must be verify, search or search:<slot>"),
            };
            writeln!(out, "{}", result.render())?;
            Ok(0)
        }
        Command::Repl { speaker, addressee } => {
            let mut session = Session::with_participants(kb, speaker.as_deref().map(NodeId::new), addressee.as_deref().map(NodeId::new))?;
            repl(&mut session, input, out, interactive)?;
            save_if_asked(cli, &session.kb, &source, out)?;
            Ok(0)
        }
        Command::Corpus { action: CorpusAction::Run { file } } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let mut session = Session::new(kb)?;
            let mismatches = run_corpus(&mut session, &text, out)?;
            save_if_asked(cli, &session.kb, &source, out)?;
            Ok(if mismatches == 0 { 0 } else { 1 })
        }
        Command::Kb { .. } | Command::Serve { .. } => unreachable!("handled above"),
    }
}

/// The last data chunk, which in a description is usually the value.
fn default_slot(s: &TaskSentence) -> Option<usize> {
    s.chunks.iter().rposition(|c| c.is_data() || c.is_unknown() && !c.is_terminal())
}

fn find_slot(s: &TaskSentence, slot: &str) -> Result<usize> {
    if let Ok(i) = slot.parse::<usize>() {
        return Ok(i);
    }
    s.chunks
        .iter()
        .position(|c| c.surface.eq_ignore_ascii_case(slot))
        .ok_or_else(|| anyhow!("no chunk {slot:?} in {:?}", s.render()))
}

fn repl(session: &mut Session, input: &mut dyn BufRead, out: &mut dyn Write, interactive: bool) -> Result<()> {
    let mut line = String::new();
    loop {
        if interactive {
            write!(out, "{}> ", session.ctx.speaker)?;
            out.flush()?;
        }
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let text = line.trim();
        if text == ":quit" || text == ":q" {
            break;
        }
        if text.is_empty() {
            continue;
        }
        let entry = session.utter(text);
        writeln!(out, "{}: {}", entry.addressee, entry.turn.response)?;
        for change in &entry.turn.delta {
            writeln!(
                out,
                "  [{} {}: {} -> {} at {}]",
                change.entity,
                change.space,
                quantity(change.old_quantity),
                quantity(change.new_quantity),
                infoarch::memory::format_timestamp(&change.boundary)
            )?;
        }
    }
    Ok(())
}

fn quantity(q: Option<u64>) -> String {
    q.map_or_else(|| "-".to_string(), |q| q.to_string())
}

/// Drops a leading "Name: " when the name is a participant.
fn strip_speaker<'a>(line: &'a str, session: &Session) -> &'a str {
    if let Some((name, rest)) = line.split_once(": ") {
        let name = NodeId::new(name);
        if name == session.ctx.speaker || name == session.ctx.addressee {
            return rest.trim();
        }
    }
    line
}

/// Replays a corpus: non-blank, non-`#` lines alternate between an
/// utterance and its expected response, each optionally prefixed by a
/// participant name. Returns the number of mismatches.
pub fn run_corpus(session: &mut Session, text: &str, out: &mut dyn Write) -> Result<usize> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if !lines.len().is_multiple_of(2) {
        bail!("line {}: utterance without an expected response", lines[lines.len() - 1].0);
    }
    let mut mismatches = 0;
    for pair in lines.chunks(2) {
        let (line_no, utterance) = pair[0];
        let expected = strip_speaker(pair[1].1, session).to_string();
        let utterance = strip_speaker(utterance, session).to_string();
        let got = session.utter(&utterance).turn.response.clone();
        if got == expected {
            writeln!(out, "ok    {utterance} => {got}")?;
        } else {
            mismatches += 1;
            writeln!(out, "FAIL  line {line_no}: {utterance}")?;
            writeln!(out, "  - {expected}")?;
            writeln!(out, "  + {got}")?;
        }
    }
    writeln!(out, "{} turns, {mismatches} mismatches", lines.len() / 2)?;
    Ok(mismatches)
}

fn kb_command(cli: &Cli, action: &KbAction, out: &mut dyn Write) -> Result<i32> {
    let path_of = |p: &Option<PathBuf>| p.clone().unwrap_or_else(|| PathBuf::from(&cli.kb));
    match action {
        KbAction::Check { path } => {
            let path = path_of(path);
            match KnowledgeBase::load(&path) {
                Ok(kb) => {
                    writeln!(
                        out,
                        "{}: ok ({} nodes, {} SPM vertices, {} models)",
                        path.display(),
                        kb.memory.graph.node_count(),
                        kb.spm.len(),
                        kb.models.len()
                    )?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "{}: {e}", path.display())?;
                    Ok(1)
                }
            }
        }
        KbAction::Fmt { path, check } => {
            let path = path_of(path);
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let kb = KnowledgeBase::from_json(&text, path.parent()).with_context(|| format!("{}", path.display()))?;
            let canonical = kb.to_json();
            if canonical == text {
                writeln!(out, "{}: canonical", path.display())?;
                Ok(0)
            } else if *check {
                writeln!(out, "{}: not canonical", path.display())?;
                Ok(1)
            } else {
                kb.save(&path)?;
                writeln!(out, "{}: rewritten", path.display())?;
                Ok(0)
            }
        }
    }
}
