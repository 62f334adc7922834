use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use germoid_cli::commands::{
    cmd_classify, cmd_construct, cmd_export_dot, cmd_roundtrip, cmd_verify, Outcome,
};

/// Finite inverse semigroups, étale groupoids, and germ constructions.
#[derive(Parser)]
#[command(name = "germoid", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-check every axiom of a structure file.
    Verify { file: PathBuf },
    /// Run a construction and emit the resulting structure file.
    Construct {
        /// One of: germs, mx, universal, beta0, translation, bisections.
        kind: String,
        /// Input structure file(s).
        files: Vec<PathBuf>,
        /// Write the output here (atomically) instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a groupoid from its bisections, or a semigroup from its
    /// germ groupoid, and print the isomorphism.
    Roundtrip { file: PathBuf },
    /// Render a groupoid file as DOT.
    #[command(name = "export-dot")]
    ExportDot {
        file: PathBuf,
        /// Also draw the unit arrows.
        #[arg(long)]
        show_units: bool,
    },
    /// Report whether a representation is unital, full, and wide.
    Classify { file: PathBuf },
}

fn write_atomically(path: &PathBuf, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
        None => PathBuf::from(format!(".{}.tmp", path.display())),
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out_path): (Outcome, Option<PathBuf>) = match cli.command {
        Command::Verify { file } => (cmd_verify(&file), None),
        Command::Construct { kind, files, out } => (cmd_construct(&kind, &files), out),
        Command::Roundtrip { file } => (cmd_roundtrip(&file), None),
        Command::ExportDot { file, show_units } => (cmd_export_dot(&file, show_units), None),
        Command::Classify { file } => (cmd_classify(&file), None),
    };
    match outcome {
        Ok(text) => {
            if let Some(path) = out_path {
                if let Err(e) = write_atomically(&path, &text) {
                    eprintln!("germoid: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if failure.code == 2 {
                eprintln!("germoid: {}", failure.payload);
            } else {
                print!("{}", failure.payload);
            }
            ExitCode::from(failure.code as u8)
        }
    }
}
