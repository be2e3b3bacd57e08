// SPDX-License-Identifier: Apache-2.0

//! Subcommand bodies. Everything printed to stdout is deterministic for a
//! given input and config.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use astkit::config::GlobalConfig;
use astkit::dataset::{
    build_porting_prompt, filter_leakage, load_eval_instructions, parse_porting_response, read_records,
    run_dataset_build, write_records, DatasetBuild,
};
use astkit::eval::{
    aggregate_report, benchmark_matrix, classify_tiers, parse_sim_log, read_jsonl, render_matrix, AttemptOutcome,
    Estimator, ProblemSpec,
};
use astkit::hlsc::{find_function, parse, AstNode, SourceFile};
use astkit::serialize::{serialize_with, SerializeOptions};
use astkit::toolbridge::{llm_chat, Adapter, AdapterKind};
use astkit::{analyze_control_flow, optimize};

use crate::{CfgFormat, Cli, Command, DatasetCommand, EstimatorArg, EvalCommand, Input, ReportFormat, TreeArgs};

fn load_config(path: Option<&Path>) -> Result<GlobalConfig> {
    let cfg = match path {
        Some(p) => GlobalConfig::load(p)?,
        None => {
            let mut cfg = GlobalConfig::default();
            cfg.apply_env(|k| std::env::var(k).ok())?;
            cfg.validate()?;
            cfg
        }
    };
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Parse(args) => tree_command(&args, &cfg, false, &mut out),
        Command::Optimize(args) => tree_command(&args, &cfg, true, &mut out),
        Command::Cfg { input, format } => {
            let func = optimized_top(&input, &cfg)?;
            let graph = analyze_control_flow(&func);
            match format {
                CfgFormat::Dot => write!(out, "{}", graph.to_dot(&func))?,
                CfgFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&graph)?)?,
            }
            Ok(())
        }
        Command::Serialize { input, indent, with_cfg } => {
            let func = optimized_top(&input, &cfg)?;
            let ser = serialize_with(&func, SerializeOptions { indent })?;
            writeln!(out, "{ser}")?;
            if with_cfg {
                write!(out, "\n{}", analyze_control_flow(&func).to_dot(&func))?;
            }
            Ok(())
        }
        Command::Dataset(cmd) => dataset_command(cmd, cfg, &mut out),
        Command::Eval(cmd) => eval_command(cmd, &cfg, &mut out),
        Command::Port { verilog, adapter } => {
            let llm = Adapter::new(cfg.adapter(AdapterKind::Llm, adapter.as_deref())?.clone(), cfg.seed)?;
            let text = std::fs::read_to_string(&verilog).with_context(|| format!("reading {}", verilog.display()))?;
            let messages = build_porting_prompt(&text, &cfg.templates())?;
            let reply = llm_chat(&messages, &llm)?;
            let ported = parse_porting_response(&reply)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&ported)?)?;
            Ok(())
        }
    }
}

fn read_source(path: &Path) -> Result<AstNode> {
    let src = SourceFile::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&src).with_context(|| format!("parsing {}", path.display()))
}

fn optimized_top(input: &Input, cfg: &GlobalConfig) -> Result<AstNode> {
    let tu = read_source(&input.file)?;
    let top = find_function(&tu, input.top.as_deref().unwrap_or(&cfg.top))?;
    Ok(optimize(top, &cfg.optimize)?)
}

fn tree_command(args: &TreeArgs, cfg: &GlobalConfig, optimized: bool, out: &mut impl std::io::Write) -> Result<()> {
    let tu = read_source(&args.file)?;
    let tree = match &args.top {
        Some(name) => find_function(&tu, name)?,
        None => &tu,
    };
    let tree = if optimized { optimize(tree, &cfg.optimize)? } else { tree.clone() };
    if args.dump_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&tree)?)?;
    } else {
        write!(out, "{}", outline(&tree))?;
    }
    Ok(())
}

/// One line per node: kind, name, type text, span and id, indented by depth.
fn outline(tree: &AstNode) -> String {
    fn walk(n: &AstNode, depth: usize, s: &mut String) {
        let _ = write!(s, "{:indent$}{}", "", n.kind, indent = depth * 2);
        if let Some(name) = &n.name {
            let _ = write!(s, " {name:?}");
        }
        if let Some(ty) = &n.type_text {
            let _ = write!(s, " : {ty}");
        }
        let _ = writeln!(s, " @{} #{}", n.span, n.node_id);
        for c in &n.children {
            walk(c, depth + 1, s);
        }
    }
    let mut s = String::new();
    walk(tree, 0, &mut s);
    s
}

fn dataset_command(cmd: DatasetCommand, mut cfg: GlobalConfig, out: &mut impl std::io::Write) -> Result<()> {
    match cmd {
        DatasetCommand::Build { corpus, out: dest, eval_instructions } => {
            if eval_instructions.is_some() {
                cfg.dataset.eval_instructions = eval_instructions;
            }
            let llm_cfg = cfg.adapter(AdapterKind::Llm, cfg.dataset.llm_adapter.as_deref())?.clone();
            let synth_cfg = cfg.adapter(AdapterKind::Synthesis, cfg.dataset.synthesis_adapter.as_deref())?.clone();
            let llm = Adapter::new(llm_cfg, cfg.seed)?;
            let synth = Adapter::new(synth_cfg, cfg.seed)?;
            let eval_instructions = match &cfg.dataset.eval_instructions {
                Some(p) => load_eval_instructions(p)?,
                None => Vec::new(),
            };
            let build = DatasetBuild {
                config: &cfg,
                llm: &llm,
                synth: &synth,
                eval_instructions,
            };
            let summary = run_dataset_build(&corpus, &dest, &build)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
            Ok(())
        }
        DatasetCommand::Filter { input, eval_instructions, threshold, out: dest } => {
            let records = read_records(&input)?;
            let eval = load_eval_instructions(&eval_instructions)?;
            let records = filter_leakage(records, &eval, threshold.unwrap_or(cfg.leakage_threshold))?;
            let kept = records.iter().filter(|r| r.kept).count();
            log::info!("{kept} of {} records kept", records.len());
            match dest {
                Some(path) => {
                    let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    let mut w = std::io::BufWriter::new(file);
                    write_records(&records, &mut w)?;
                    w.flush()?;
                }
                None => write_records(&records, out)?,
            }
            Ok(())
        }
    }
}

fn read_outcomes(path: &Path) -> Result<Vec<AttemptOutcome>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_jsonl(&text).with_context(|| format!("in {}", path.display()))
}

fn eval_command(cmd: EvalCommand, cfg: &GlobalConfig, out: &mut impl std::io::Write) -> Result<()> {
    let k_or_default = |k: Vec<u32>| if k.is_empty() { cfg.k_set.clone() } else { k };
    match cmd {
        EvalCommand::Report { outcomes, problems, k, tiers, format, model, estimator } => {
            let outcomes = read_outcomes(&outcomes)?;
            let text = std::fs::read_to_string(&problems).with_context(|| format!("reading {}", problems.display()))?;
            let specs: Vec<ProblemSpec> = read_jsonl(&text).with_context(|| format!("in {}", problems.display()))?;
            let boundaries = match tiers.as_slice() {
                [] => None,
                [b1, b2] => Some((*b1, *b2)),
                _ => bail!("--tiers takes exactly two values, got {}", tiers.len()),
            };
            let metas = classify_tiers(&specs, boundaries)?;
            let estimator = match estimator {
                EstimatorArg::FirstK => Estimator::FirstK,
                EstimatorArg::Unbiased => Estimator::Unbiased,
            };
            let report = aggregate_report(&outcomes, &metas, &model, &k_or_default(k), estimator)?;
            match format {
                ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
                ReportFormat::Table => write!(out, "{}", report.render_table())?,
            }
        }
        EvalCommand::Matrix { outcomes, model, k } => {
            let outcomes = read_outcomes(&outcomes)?;
            let k = k_or_default(k);
            let rows = benchmark_matrix(&outcomes, &model, &k)?;
            write!(out, "{}", render_matrix(&rows, &k))?;
        }
        EvalCommand::SimLog { log, strict } => {
            let text = std::fs::read_to_string(&log).with_context(|| format!("reading {}", log.display()))?;
            let counts = parse_sim_log(&text, strict)?;
            writeln!(out, "{}", serde_json::to_string(&counts)?)?;
        }
    }
    Ok(())
}
