use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use conekit::engine::{
    classify_pair, decomposition_report, identity_pullback, minor_multiplicity_report, recursion_check, render_svg,
    RenderSpec, ReportOptions, DEFAULT_K_MAX,
};
use conekit::models::{builtin, load_model, save_model, CoxPresentation};
use conekit::poly::{pointcount_dimension, SamplingOptions};
use conekit::{Error, LatticeVector};

/// Cones, Mori chambers and stable base loci of low-rank Mori dream spaces.
#[derive(Parser)]
#[command(name = "conekit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical JSON presentation of a model.
    Model {
        /// Built-in name (`X 3 3 2`, `Q 3 2`, `thmex Z`), a JSON file, or `-` for stdin.
        #[arg(required = true, num_args = 1..)]
        model: Vec<String>,
    },
    /// Compute cones and chamber decompositions.
    Report {
        #[arg(required = true, num_args = 1..)]
        model: Vec<String>,
        /// Mori chamber decomposition.
        #[arg(long)]
        mcd: bool,
        /// Stable base locus decomposition.
        #[arg(long)]
        sbld: bool,
        /// Effective, movable and nef cones.
        #[arg(long)]
        cones: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compare a model with the pullback of another.
    Compare {
        /// Model refs such as `thmex:X` or `Q:3:2`, files, or `-`.
        left: String,
        right: String,
        /// Rows of the pullback matrix, e.g. `1,0;0,1`. Defaults to the identity.
        #[arg(long)]
        pullback: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a self-check and report pass or fail.
    Verify(VerifyArgs),
    /// Draw the Mori chambers of a rank-three model as SVG.
    Render {
        #[arg(required = true, num_args = 1..)]
        model: Vec<String>,
        /// Width and height in pixels.
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long)]
        no_ray_labels: bool,
        #[arg(long)]
        no_p_labels: bool,
        #[arg(long)]
        no_nef: bool,
        #[arg(long)]
        no_mov: bool,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Seed for randomized face tests.
    #[arg(long, env = "CONEKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Largest multiple used for stable base loci.
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k_max: u32,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    /// Check the chamber-count recursion for n in the range.
    #[arg(long, num_args = 2, value_names = ["N_MIN", "N_MAX"])]
    recursion: Option<Vec<usize>>,
    /// Check that the k×k determinant vanishes to order k-h on rank-h matrices.
    #[arg(long, num_args = 2, value_names = ["K", "H"])]
    multiplicity: Option<Vec<usize>>,
    /// Compare the Gröbner dimension of a model's relations with point counts.
    #[arg(long, value_name = "MODEL")]
    ffdim: Option<String>,
}

#[derive(Serialize)]
struct Verdict<T: Serialize> {
    check: &'static str,
    pass: bool,
    #[serde(flatten)]
    detail: T,
}

enum Failure {
    Error(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn read_source(path: &str) -> Result<String, Error> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidParameter(format!("reading stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("reading {path}: {e}")))?;
    }
    Ok(s)
}

fn resolve(parts: &[String]) -> Result<CoxPresentation, Error> {
    if let [single] = parts {
        if single == "-" || single.ends_with(".json") || Path::new(single).is_file() {
            return load_model(&read_source(single)?);
        }
    }
    builtin(&parts.join(" "))
}

fn parse_matrix(src: &str) -> Result<Vec<LatticeVector>, Error> {
    src.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidParameter(format!("bad pullback entry {x:?}")))
                })
                .collect::<Result<Vec<i64>, Error>>()
                .map(LatticeVector::from)
        })
        .collect()
}

/// Writes to stdout, ignoring a reader that went away.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&format!("{}\n", serde_json::to_string_pretty(value).expect("output serializes")));
}

/// Writes next to the target and renames, so readers never see a partial file.
fn write_atomically(path: &Path, contents: &str) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::InvalidParameter(format!("writing {}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::File::create(&tmp).and_then(|mut f| f.write_all(contents.as_bytes())).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    if let Some(r) = args.recursion {
        let report = recursion_check(r[0], r[1])?;
        let pass = report.holds();
        print_json(&Verdict { check: "recursion", pass, detail: &report });
        return if pass { Ok(()) } else { Err(Failure::Verification) };
    }
    if let Some(m) = args.multiplicity {
        let (k, h) = (m[0], m[1]);
        let report = minor_multiplicity_report(k, h, 5, 0)?;
        let pass = report.multiplicity as usize == k - h;
        print_json(&Verdict { check: "multiplicity", pass, detail: &report });
        return if pass { Ok(()) } else { Err(Failure::Verification) };
    }
    let name = args.ffdim.expect("clap requires one check");
    let model = resolve(&[name])?;
    if model.relations().is_empty() {
        return Err(Error::Unsupported(format!("{} has no recorded relations", model.id)).into());
    }
    let groebner = model.relation_ideal().dimension()?;
    let counted = pointcount_dimension(model.relations(), model.nvars(), &[3])?;
    let pass = groebner == counted.dimension;
    #[derive(Serialize)]
    struct Dims<'a> {
        model: &'a str,
        ambient: usize,
        groebner_dimension: i64,
        pointcount: &'a conekit::poly::DimensionEstimate,
    }
    print_json(&Verdict {
        check: "ffdim",
        pass,
        detail: Dims { model: &model.id, ambient: model.nvars(), groebner_dimension: groebner, pointcount: &counted },
    });
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Model { model } => {
            emit(&format!("{}\n", save_model(&resolve(&model)?)));
        }
        Command::Report { model, mcd, sbld, cones, common } => {
            let model = resolve(&model)?;
            let all = !(mcd || sbld || cones);
            let opts = ReportOptions {
                cones: cones || all,
                mcd: mcd || all,
                sbld: sbld || all,
                seed: common.seed,
                k_max: common.k_max,
            };
            emit(&format!("{}\n", decomposition_report(&model, &opts)?.to_json()));
        }
        Command::Compare { left, right, pullback, common } => {
            let a = resolve(&[left])?;
            let b = resolve(&[right])?;
            let m = match pullback {
                Some(src) => parse_matrix(&src)?,
                None => identity_pullback(a.rank()),
            };
            let sampling = SamplingOptions { seed: common.seed, ..SamplingOptions::default() };
            print_json(&classify_pair(&a, &b, &m, &sampling, common.k_max)?);
        }
        Command::Verify(args) => verify(args)?,
        Command::Render { model, size, no_ray_labels, no_p_labels, no_nef, no_mov, output, common } => {
            let model = resolve(&model)?;
            let spec = RenderSpec { size, ray_labels: !no_ray_labels, p_labels: !no_p_labels, nef: !no_nef, mov: !no_mov };
            let sampling = SamplingOptions { seed: common.seed, ..SamplingOptions::default() };
            let svg = render_svg(&model, &spec, &sampling)?;
            match output {
                Some(path) => write_atomically(&path, &svg)?,
                None => emit(&svg),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
