use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use seqtok::{
    compute_stats, filter_text_with, parse_config, render_stats, render_tokens, tokenize_with, Action, Config,
    ScanStrategy, StatsBuilder, StatsFormat, StatsReport, TokenKind,
};

use crate::args::CliArgs;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

struct Job {
    input: PathBuf,
    output: PathBuf,
}

struct Settings {
    config: Config,
    strategy: ScanStrategy,
    stats: Option<StatsFormat>,
    emit_text: bool,
    max_in_memory: u64,
}

enum Setup {
    Usage(String),
    Failure(String),
}

pub fn run(args: CliArgs) -> u8 {
    match prepare(&args) {
        Ok((settings, jobs)) => process_all(&settings, &jobs),
        Err(Setup::Usage(msg)) => {
            eprintln!("seqtok: {msg}");
            eprintln!("Try 'seqtok --help' for more information.");
            EXIT_USAGE
        }
        Err(Setup::Failure(msg)) => {
            eprintln!("seqtok: {msg}");
            EXIT_FAILURE
        }
    }
}

fn effective_config(args: &CliArgs) -> Result<Config, Setup> {
    let mut config = match &args.config {
        Some(path) => {
            let doc = fs::read_to_string(path)
                .map_err(|e| Setup::Failure(format!("cannot read config {}: {e}", path.display())))?;
            parse_config(&doc).map_err(|e| Setup::Failure(format!("{}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    let flagged = [(TokenKind::Ip, args.ip), (TokenKind::Email, args.email), (TokenKind::Url, args.url), (TokenKind::Date, args.date)];
    if flagged.iter().any(|&(_, on)| on) {
        for (kind, on) in flagged {
            config.set_enabled(kind, on);
        }
    }
    if let Some(mode) = args.mode {
        let action: Action = mode.into();
        for kind in TokenKind::SPECIAL {
            config.set_action(kind, action);
        }
    }
    if args.output.is_some() {
        config.output_path = args.output.clone();
    }
    if args.stats {
        config.stats_enabled = true;
    } else if args.no_stats {
        config.stats_enabled = false;
    }
    config.tag_output |= args.tag;
    config.keep_punctuation |= args.keep_punctuation;
    Ok(config)
}

fn prepare(args: &CliArgs) -> Result<(Settings, Vec<Job>), Setup> {
    let config = effective_config(args)?;
    if args.emit_text && config.removed_kinds().is_empty() {
        return Err(Setup::Usage("--emit-text requires at least one enabled kind with the remove action".into()));
    }
    let jobs = plan_outputs(&args.input, config.output_path.as_deref())?;
    let settings = Settings {
        strategy: args.strategy.into(),
        stats: config.stats_enabled.then_some(args.stats_format.into()),
        emit_text: args.emit_text,
        max_in_memory: args.max_in_memory,
        config,
    };
    Ok((settings, jobs))
}

fn with_suffix(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".tok");
    PathBuf::from(s)
}

fn plan_outputs(inputs: &[PathBuf], output: Option<&Path>) -> Result<Vec<Job>, Setup> {
    let jobs: Vec<Job> = match output {
        None => inputs.iter().map(|i| Job { input: i.clone(), output: with_suffix(i) }).collect(),
        Some(out) if inputs.len() == 1 => {
            if out.is_dir() {
                return Err(Setup::Usage(format!("output {} is a directory", out.display())));
            }
            vec![Job { input: inputs[0].clone(), output: out.to_path_buf() }]
        }
        Some(dir) => {
            if dir.exists() && !dir.is_dir() {
                return Err(Setup::Usage(format!(
                    "several inputs need an output directory, but {} is a file",
                    dir.display()
                )));
            }
            let mut jobs = Vec::with_capacity(inputs.len());
            for input in inputs {
                let Some(name) = input.file_name() else {
                    return Err(Setup::Usage(format!("input {} has no file name", input.display())));
                };
                jobs.push(Job { input: input.clone(), output: with_suffix(&dir.join(name)) });
            }
            jobs
        }
    };
    let mut seen = HashSet::new();
    for job in &jobs {
        if !seen.insert(job.output.clone()) {
            return Err(Setup::Usage(format!("two inputs would both write {}", job.output.display())));
        }
        if same_file(&job.input, &job.output) {
            return Err(Setup::Usage(format!("output {} would overwrite its input", job.output.display())));
        }
    }
    if let (Some(dir), true) = (output, inputs.len() > 1) {
        fs::create_dir_all(dir).map_err(|e| Setup::Failure(format!("cannot create {}: {e}", dir.display())))?;
    }
    Ok(jobs)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn process_all(settings: &Settings, jobs: &[Job]) -> u8 {
    let results: Vec<Result<StatsReport>> = jobs.par_iter().map(|job| process(settings, job)).collect();
    let many = jobs.len() > 1;
    let mut code = EXIT_OK;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (job, result) in jobs.iter().zip(results) {
        match result {
            Ok(report) => {
                if let Some(format) = settings.stats {
                    if many && format == StatsFormat::Text {
                        let _ = writeln!(out, "== {} ==", job.input.display());
                    }
                    let _ = out.write_all(render_stats(&report, format).as_bytes());
                }
            }
            Err(e) => {
                eprintln!("seqtok: {e:#}");
                code = EXIT_FAILURE;
            }
        }
    }
    let _ = out.flush();
    code
}

fn process(settings: &Settings, job: &Job) -> Result<StatsReport> {
    let size = fs::metadata(&job.input).with_context(|| format!("cannot read {}", job.input.display()))?.len();
    if size > settings.max_in_memory {
        return process_streaming(settings, job);
    }
    let bytes = fs::read(&job.input).with_context(|| format!("cannot read {}", job.input.display()))?;
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not valid UTF-8", job.input.display()))?;
    let config = &settings.config;
    let tokens = tokenize_with(&text, config, settings.strategy);
    let rendered = if settings.emit_text {
        filter_text_with(&text, config, settings.strategy)
    } else {
        render_tokens(&tokens, config.tag_output)
    };
    fs::write(&job.output, rendered).with_context(|| format!("cannot write {}", job.output.display()))?;
    Ok(compute_stats(&tokens))
}

// No special sequence spans a line break, so tokens are the same as for the
// whole document. Filtered text normalizes whitespace per line.
fn process_streaming(settings: &Settings, job: &Job) -> Result<StatsReport> {
    let input = File::open(&job.input).with_context(|| format!("cannot read {}", job.input.display()))?;
    let mut reader = BufReader::new(input);
    let file = File::create(&job.output).with_context(|| format!("cannot write {}", job.output.display()))?;
    let mut writer = BufWriter::new(file);
    let config = &settings.config;
    let mut stats = StatsBuilder::new();
    let mut line = String::new();
    let mut lineno = 0usize;
    loop {
        line.clear();
        lineno += 1;
        let n = reader
            .read_line(&mut line)
            .with_context(|| format!("{}: line {lineno}: read failed or not valid UTF-8", job.input.display()))?;
        if n == 0 {
            break;
        }
        let body = line.strip_suffix('\n').unwrap_or(&line);
        let tokens = tokenize_with(body, config, settings.strategy);
        stats.extend(&tokens);
        let rendered = if settings.emit_text {
            let mut s = filter_text_with(body, config, settings.strategy);
            if body.len() < line.len() {
                s.push('\n');
            }
            s
        } else {
            render_tokens(&tokens, config.tag_output)
        };
        writer.write_all(rendered.as_bytes()).with_context(|| format!("cannot write {}", job.output.display()))?;
    }
    writer.flush().with_context(|| format!("cannot write {}", job.output.display()))?;
    Ok(stats.finish())
}
