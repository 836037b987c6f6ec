//! The `srs` command-line tool.
//!
//! Commands act on a project file (`--file`, `SRS_FILE`, default
//! `project.srs`) or, with `--remote`, on a running service through
//! [`srs_client`]. Exit codes: 0 success, 1 validation found errors,
//! 2 usage, parse, I/O or model-operation failure. A command that exits 2
//! never touches the file.

mod args;

use std::ffi::OsString;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use srs_client::{ClientError, SrsClient};
use srs_core::format::{load, save, LoadError};
use srs_core::render::{build_fhd, render, render_fhd};
use srs_core::validation::{json_report, validate, Profile, Severity};
use srs_core::wire::{DiagnosticDto, RequirementDto, RequirementUpdate};
use srs_core::{
    new_project, parse_date, FunctionNumber, ModelError, Project, ReqId, SectionBody, SectionPath, SignoffRole,
    TemplateRegistry,
};

pub use args::Cli;
use args::{Command, FunctionCommand, ReqCommand, SetSection, SignoffCommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug)]
struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure(format!("error[{}]: {e}", e.code()))
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Parse { diagnostics, .. } => Failure(
                diagnostics
                    .iter()
                    .map(|d| format!("error: {d}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
            ),
            io => Failure(format!("error: {io}")),
        }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        match e {
            ClientError::Api { code, message, .. } => Failure(format!("error[{code}]: {message}")),
            other => Failure(format!("error: {other}")),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure(format!("error: {}: {e}", path.display()))
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{f}");
            EXIT_FAILURE
        }
    }
}

enum Target {
    Local(PathBuf),
    Remote(SrsClient, tokio::runtime::Runtime),
}

impl Target {
    fn open(cli: &Cli) -> Result<Self, Failure> {
        match &cli.remote {
            None => Ok(Target::Local(cli.file.clone())),
            Some(url) => {
                let client = SrsClient::new(url)?;
                let rt = tokio::runtime::Builder::new_current_thread()
                    .enable_all()
                    .build()
                    .map_err(|e| Failure(format!("error: {e}")))?;
                Ok(Target::Remote(client, rt))
            }
        }
    }

    /// Loads, applies `op` and saves. Nothing is written when `op` fails.
    fn mutate_local(path: &Path, op: impl FnOnce(&Project) -> Result<Project, ModelError>) -> Result<(), Failure> {
        let project = load(path)?;
        let next = op(&project)?;
        save(&next, path)?;
        Ok(())
    }

    fn snapshot(&self) -> Result<Project, Failure> {
        match self {
            Target::Local(path) => Ok(load(path)?),
            Target::Remote(..) => unreachable!("remote reads go through the API"),
        }
    }
}

fn write_output(out: &mut dyn Write, output: Option<&Path>, content: &str) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, content).map_err(|e| io_failure(path, e))?,
        None => out
            .write_all(content.as_bytes())
            .map_err(|e| Failure(format!("error: {e}")))?,
    }
    Ok(EXIT_OK)
}

fn say(out: &mut dyn Write, msg: impl fmt::Display) -> Outcome {
    writeln!(out, "{msg}").map_err(|e| Failure(format!("error: {e}")))?;
    Ok(EXIT_OK)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    let target = Target::open(&cli)?;
    match cli.command {
        Command::Init {
            title,
            id,
            template,
            out: dest,
            force,
        } => {
            if matches!(target, Target::Remote(..)) {
                return Err(Failure("error: init creates a local file; drop --remote".into()));
            }
            let dest = dest.unwrap_or(cli.file);
            if dest.exists() && !force {
                return Err(Failure(format!(
                    "error: {} already exists (use --force to overwrite)",
                    dest.display()
                )));
            }
            let project = new_project(&title, id, &template, &TemplateRegistry::new())?;
            save(&project, &dest)?;
            say(out, format!("created {}", dest.display()))
        }
        Command::SetSection(args) => set_section(&target, args, out),
        Command::Req(cmd) => requirement(&target, cmd, out),
        Command::Define { term, meaning, remove } => {
            match (&target, remove) {
                (Target::Local(path), true) => Target::mutate_local(path, |p| p.remove_definition(&term))?,
                (Target::Local(path), false) => {
                    Target::mutate_local(path, |p| p.set_definition(&term, meaning.as_deref().unwrap_or("")))?
                }
                (Target::Remote(c, rt), true) => rt.block_on(c.remove_definition(&term))?,
                (Target::Remote(c, rt), false) => {
                    rt.block_on(c.set_definition(&term, meaning.as_deref().unwrap_or("")))?;
                }
            }
            say(
                out,
                if remove {
                    format!("removed {term}")
                } else {
                    format!("defined {term}")
                },
            )
        }
        Command::Function(cmd) => function(&target, cmd, out),
        Command::Signoff(cmd) => signoff(&target, cmd, out),
        Command::Validate {
            profile,
            format,
            strict_exit,
        } => {
            let profile = Profile::named(profile);
            let (report, diags) = match &target {
                Target::Local(_) => {
                    let diags = validate(&target.snapshot()?, &profile);
                    let dtos: Vec<DiagnosticDto> = diags.iter().map(DiagnosticDto::from).collect();
                    (json_report(&diags), dtos)
                }
                Target::Remote(c, rt) => {
                    let dtos = rt.block_on(c.diagnostics(profile.name))?;
                    let json = serde_json::to_string_pretty(&dtos).expect("diagnostics serialize");
                    (json, dtos)
                }
            };
            if format == "json" {
                writeln!(out, "{report}").map_err(|e| Failure(format!("error: {e}")))?;
            } else {
                for d in &diags {
                    say(
                        out,
                        format!("{} {} {}: {}", d.severity.to_uppercase(), d.code, d.locus, d.message),
                    )?;
                }
                if diags.is_empty() {
                    say(out, "no diagnostics")?;
                }
            }
            let error = Severity::Error.to_string();
            let fails = diags.iter().any(|d| d.severity == error) || (strict_exit && !diags.is_empty());
            Ok(if fails { EXIT_INVALID } else { EXIT_OK })
        }
        Command::Render { format, output } => {
            let content = match &target {
                Target::Local(_) => render(&target.snapshot()?, format).content,
                Target::Remote(c, rt) => rt.block_on(c.render(format))?,
            };
            write_output(out, output.as_deref(), &content)
        }
        Command::Fhd { format, output } => {
            let content = match &target {
                Target::Local(_) => render_fhd(&build_fhd(&target.snapshot()?)?, format),
                Target::Remote(c, rt) => rt.block_on(c.fhd(format))?,
            };
            write_output(out, output.as_deref(), &content)
        }
        Command::Serve { port, bind, ui_dir } => {
            if matches!(target, Target::Remote(..)) {
                return Err(Failure("error: serve works on a local file; drop --remote".into()));
            }
            serve(cli.file, std::net::SocketAddr::new(bind, port), ui_dir, out)
        }
    }
}

fn set_section(target: &Target, args: SetSection, out: &mut dyn Write) -> Outcome {
    let text = match &args.from_file {
        Some(path) if path.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure(format!("error: stdin: {e}")))?;
            Some(s)
        }
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?),
        None => args.text.clone(),
    };
    match target {
        Target::Local(file) => {
            let path = SectionPath::parse(&args.path)?;
            if args.clear {
                Target::mutate_local(file, |p| p.clear_section(&path))?;
            } else {
                let body = match &text {
                    Some(t) => SectionBody::text(t)?,
                    None => SectionBody::Na,
                };
                Target::mutate_local(file, |p| p.set_section(&path, body))?;
            }
        }
        Target::Remote(c, rt) => {
            if args.clear {
                rt.block_on(c.clear_section(&args.path))?;
            } else {
                rt.block_on(c.set_section(&args.path, text.as_deref().unwrap_or("NA")))?;
            }
        }
    }
    let state = if args.clear {
        "unset"
    } else if args.na {
        "NA"
    } else {
        "filled"
    };
    say(out, format!("{} {state}", args.path))
}

fn requirement(target: &Target, cmd: ReqCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        ReqCommand::Add {
            id,
            kind,
            title,
            text,
            trace,
        } => {
            let dto = RequirementDto {
                id: id.clone(),
                kind,
                title,
                text,
                trace,
            };
            match target {
                Target::Local(file) => {
                    let req = dto.to_requirement()?;
                    Target::mutate_local(file, |p| p.add_requirement(req))?;
                }
                Target::Remote(c, rt) => {
                    rt.block_on(c.add_requirement(&dto))?;
                }
            }
            say(out, format!("added {id}"))
        }
        ReqCommand::Update {
            id,
            kind,
            title,
            text,
            trace,
        } => {
            let existing = match target {
                Target::Local(_) => {
                    let rid = ReqId::parse(&id)?;
                    let p = target.snapshot()?;
                    let req = p.requirements().get(&rid).ok_or(ModelError::UnknownRequirement(rid))?;
                    RequirementDto::from(req)
                }
                Target::Remote(c, rt) => {
                    let p = rt.block_on(c.project())?;
                    match p.requirements.into_iter().find(|r| r.id == id) {
                        Some(r) => r,
                        None => return Err(ModelError::UnknownRequirement(ReqId::parse(&id)?).into()),
                    }
                }
            };
            let update = RequirementUpdate {
                kind: kind.unwrap_or(existing.kind),
                title: title.unwrap_or(existing.title),
                text: text.unwrap_or(existing.text),
                trace: trace
                    .map(|t| t.into_iter().filter(|s| !s.trim().is_empty()).collect())
                    .unwrap_or(existing.trace),
            };
            match target {
                Target::Local(file) => {
                    let req = update.with_id(&id).to_requirement()?;
                    Target::mutate_local(file, |p| p.update_requirement(req))?;
                }
                Target::Remote(c, rt) => {
                    rt.block_on(c.update_requirement(&id, &update))?;
                }
            }
            say(out, format!("updated {id}"))
        }
        ReqCommand::Rm { id } => {
            match target {
                Target::Local(file) => {
                    let rid = ReqId::parse(&id)?;
                    Target::mutate_local(file, |p| p.remove_requirement(&rid))?;
                }
                Target::Remote(c, rt) => rt.block_on(c.remove_requirement(&id))?,
            }
            say(out, format!("removed {id}"))
        }
        ReqCommand::List { format } => {
            let reqs: Vec<RequirementDto> = match target {
                Target::Local(_) => target
                    .snapshot()?
                    .requirements()
                    .values()
                    .map(RequirementDto::from)
                    .collect(),
                Target::Remote(c, rt) => rt.block_on(c.project())?.requirements,
            };
            if format == "json" {
                return say(
                    out,
                    serde_json::to_string_pretty(&reqs).expect("requirements serialize"),
                );
            }
            for r in &reqs {
                let mut line = format!("{}\t{}\t{}", r.id, r.kind, r.title);
                if !r.trace.is_empty() {
                    line.push_str(&format!("\ttrace: {}", r.trace.join(", ")));
                }
                say(out, line)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn function(target: &Target, cmd: FunctionCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        FunctionCommand::Set { number, title } => {
            match target {
                Target::Local(file) => {
                    let num = FunctionNumber::parse(&number)?;
                    Target::mutate_local(file, |p| p.set_function(num, &title))?;
                }
                Target::Remote(c, rt) => {
                    rt.block_on(c.set_function(&number, &title))?;
                }
            }
            say(out, format!("set function {number}"))
        }
        FunctionCommand::Rm { number } => {
            match target {
                Target::Local(file) => {
                    let num = FunctionNumber::parse(&number)?;
                    Target::mutate_local(file, |p| p.remove_function(&num))?;
                }
                Target::Remote(c, rt) => rt.block_on(c.remove_function(&number))?,
            }
            say(out, format!("removed function {number}"))
        }
    }
}

fn signoff(target: &Target, cmd: SignoffCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        SignoffCommand::Set { role, name, date } => {
            match target {
                Target::Local(file) => {
                    let r: SignoffRole = role.parse()?;
                    let d = parse_date(date.as_deref().unwrap_or(""))?;
                    Target::mutate_local(file, |p| p.set_signoff(r, &name, d))?;
                }
                Target::Remote(c, rt) => {
                    rt.block_on(c.set_signoff(&role, &name, date.as_deref()))?;
                }
            }
            say(out, format!("signed {role}"))
        }
        SignoffCommand::Title { title, reset } => {
            let title = if reset { None } else { title };
            match target {
                Target::Local(file) => Target::mutate_local(file, |p| p.set_signoff_title(title.as_deref()))?,
                Target::Remote(c, rt) => {
                    rt.block_on(c.set_signoff_title(title.as_deref()))?;
                }
            }
            say(out, "sign-off title updated")
        }
    }
}

fn serve(file: PathBuf, addr: std::net::SocketAddr, ui_dir: Option<PathBuf>, out: &mut dyn Write) -> Outcome {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure(format!("error: {e}")))?;
    rt.block_on(async {
        let server = srs_service::Server::bind(srs_service::ServeConfig {
            file: file.clone(),
            addr,
            ui_dir,
        })
        .await
        .map_err(|e| match e {
            srs_service::ServeError::Load(l) => Failure::from(l),
            other => Failure(format!("error: {other}")),
        })?;
        say(
            out,
            format!("serving {} at http://{}", file.display(), server.local_addr()),
        )?;
        out.flush().map_err(|e| Failure(format!("error: {e}")))?;
        server
            .run(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| Failure(format!("error: {e}")))?;
        Ok(EXIT_OK)
    })
}
