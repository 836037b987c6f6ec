use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use srs_core::render::{DocFormat, FhdFormat};
use srs_core::validation::ProfileName;

#[derive(Debug, Parser)]
#[command(
    name = "srs",
    version,
    about = "Author, validate and render software requirements specifications"
)]
pub struct Cli {
    /// Project file to read and update.
    #[arg(short, long, global = true, env = "SRS_FILE", default_value = "project.srs")]
    pub file: PathBuf,

    /// Talk to a running service (e.g. http://127.0.0.1:8830) instead of the file.
    #[arg(long, global = true, env = "SRS_REMOTE")]
    pub remote: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create a new project file.
    Init {
        #[arg(long)]
        title: String,
        #[arg(long)]
        id: u64,
        #[arg(long, default_value = "ieee-830")]
        template: String,
        /// Where to write (defaults to --file).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overwrite an existing file.
        #[arg(long)]
        force: bool,
    },
    /// Fill a section, mark it NA, or clear it.
    SetSection(SetSection),
    /// Manage requirements.
    #[command(subcommand)]
    Req(ReqCommand),
    /// Define a term (or redefine it in place).
    Define {
        term: String,
        #[arg(required_unless_present = "remove")]
        meaning: Option<String>,
        /// Remove the term instead.
        #[arg(long, conflicts_with = "meaning")]
        remove: bool,
    },
    /// Manage product functions.
    #[command(subcommand)]
    Function(FunctionCommand),
    /// Manage the sign-off block.
    #[command(subcommand)]
    Signoff(SignoffCommand),
    /// Check the project against the rule set.
    Validate {
        #[arg(long, default_value = "strict")]
        profile: ProfileName,
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
        /// Exit 1 on warnings too.
        #[arg(long)]
        strict_exit: bool,
    },
    /// Generate the document.
    Render {
        #[arg(long, default_value = "text")]
        format: DocFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw the function hierarchy.
    Fhd {
        #[arg(long, default_value = "tree")]
        format: FhdFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Serve the project over HTTP for the editor.
    Serve {
        #[arg(long, default_value_t = srs_service::DEFAULT_PORT)]
        port: u16,
        /// Address to listen on; anything but loopback exposes an unauthenticated API.
        #[arg(long, default_value = "127.0.0.1")]
        bind: std::net::IpAddr,
        /// Directory with the built editor bundle.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("body").required(true).multiple(false)))]
pub struct SetSection {
    /// Dotted section path, e.g. introduction.purpose.
    pub path: String,
    #[arg(long, group = "body")]
    pub na: bool,
    #[arg(long, group = "body")]
    pub text: Option<String>,
    /// Read the text from a file (`-` for stdin).
    #[arg(long, group = "body")]
    pub from_file: Option<PathBuf>,
    /// Return the section to the unset state.
    #[arg(long, group = "body")]
    pub clear: bool,
}

#[derive(Debug, Subcommand)]
pub enum ReqCommand {
    /// Add a requirement.
    Add {
        id: String,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        title: String,
        #[arg(long, default_value = "")]
        text: String,
        /// Comma-separated requirement ids.
        #[arg(long, value_delimiter = ',')]
        trace: Vec<String>,
    },
    /// Change fields of an existing requirement.
    Update {
        id: String,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        title: Option<String>,
        #[arg(long)]
        text: Option<String>,
        /// Replaces the whole trace list; pass an empty string to clear it.
        #[arg(long, value_delimiter = ',')]
        trace: Option<Vec<String>>,
    },
    /// Remove a requirement.
    Rm { id: String },
    /// List requirements in id order.
    List {
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FunctionCommand {
    /// Add or retitle a function.
    Set { number: String, title: String },
    /// Remove a function.
    Rm { number: String },
}

#[derive(Debug, Subcommand)]
pub enum SignoffCommand {
    /// Record a signatory.
    Set {
        /// submitted-by, coord-applications-architecture, coord-engineering, coord-test-director or approved-by.
        role: String,
        #[arg(long, default_value = "")]
        name: String,
        /// YYYY-MM-DD.
        #[arg(long)]
        date: Option<String>,
    },
    /// Set the title shown above the sign-off block.
    Title {
        #[arg(required_unless_present = "reset")]
        title: Option<String>,
        /// Go back to the default title.
        #[arg(long, conflicts_with = "title")]
        reset: bool,
    },
}
