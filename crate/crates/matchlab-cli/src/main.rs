use clap::{Args, Parser, Subcommand};
use matchlab_cli::campaign::{run_campaign, CampaignConfig, CampaignMode, TheoremId};
use matchlab_cli::hunt::{hunt_counterexample, HuntConfig, HuntDomain};
use matchlab_cli::io::{parse_field_instance, parse_group_instance, parse_group_only};
use matchlab_cli::store::CertStore;
use matchlab_cli::{CliError, CliResult};
use matchlab_core::cert::{self, Certificate};
use matchlab_core::field::{
    find_matched_basis, linear_kneser_verify, linear_locally_matched, primitive_check, BasisSeq,
    LocalSearchConfig, MatchedBasisOutcome,
};
use matchlab_core::group::{
    construct_counterexample, decide_matching_property, find_matching, is_locally_matched,
    kneser_verify, MatchOutcome,
};
use std::io::Read;
use std::path::PathBuf;

/// Decide, construct, and certify matchings and local matchings in abelian
/// groups and finite-field extensions.
#[derive(Parser)]
#[command(name = "matchlab", version, disable_help_subcommand = true)]
struct Cli {
    /// Suppress output; the exit code carries the verdict.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matchings between finite subsets of an abelian group.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Matchings between subspaces of a finite-field extension.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Single-instance verification of the growth bounds.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Exhaustive and seeded-random verification campaigns.
    Campaign {
        #[command(subcommand)]
        cmd: CampaignCmd,
    },
    /// Certificate store operations.
    Cert {
        #[command(subcommand)]
        cmd: CertCmd,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance JSON file, or `-` for stdin.
    #[arg(long)]
    input: String,
    /// Write emitted certificates into this store directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Find a matching from A to B, or a Hall violator proving none exists.
    FindMatching(InstanceArgs),
    /// Decide whether A is locally matched to B, with a per-subgroup report.
    CheckLocal(InstanceArgs),
    /// Decide the matching property for a group (closed form).
    DecideProperty(InstanceArgs),
    /// Construct a certified unmatched pair, when the group admits one.
    Counterexample(InstanceArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Match an ordered basis of A to a basis of B, or report the violator.
    FindMatchedBasis(InstanceArgs),
    /// Check whether B meets any proper subfield non-trivially.
    CheckPrimitive(InstanceArgs),
    /// Decide whether A is locally matched to B, with a per-subfield report.
    CheckLocal {
        #[command(flatten)]
        args: InstanceArgs,
        /// Seed for sampled searches when budgets are exceeded.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Verify the sumset growth bound on one instance.
    Kneser(InstanceArgs),
    /// Verify the product-span growth bound on one instance.
    LinearKneser(InstanceArgs),
}

#[derive(Subcommand)]
enum CampaignCmd {
    /// Run a theorem-verification campaign.
    Run(RunArgs),
    /// Scan for unmatched pairs (group or linear side).
    Hunt(HuntArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    theorem: TheoremId,
    /// `exhaustive` or `random`.
    #[arg(long, default_value = "random")]
    mode: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Group-side bound on group orders.
    #[arg(long)]
    max_order: Option<u64>,
    /// Explicit JSON array of groups, e.g. '[{"free_rank":0,"torsion":[12,2]}]'.
    #[arg(long)]
    groups: Option<String>,
    /// Field list as `p^n` pairs, e.g. `2^4,2^6`.
    #[arg(long)]
    fields: Option<String>,
    /// Field-side bound on subspace dimensions.
    #[arg(long)]
    max_dim: Option<usize>,
}

#[derive(Args)]
struct HuntArgs {
    #[arg(long, value_enum)]
    domain: HuntDomain,
    #[arg(long, default_value_t = 8)]
    max_order: u64,
    /// Field list as `p^n` pairs, e.g. `2^4`.
    #[arg(long, default_value = "2^4")]
    fields: String,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    /// Unmatched pairs to collect per group or field.
    #[arg(long, default_value_t = 5)]
    max_findings: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Console {
    quiet: bool,
}

impl Console {
    fn emit(&self, text: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", text.as_ref());
        }
    }

    fn note(&self, text: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", text.as_ref());
        }
    }
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn archive(out: &Option<PathBuf>, cert: &Certificate, console: &Console) -> CliResult<()> {
    if let Some(dir) = out {
        let store = CertStore::open(dir)?;
        let name = store.put(cert)?;
        console.note(format!("certificate written: {}", dir.join(name).display()));
    }
    Ok(())
}

fn parse_fields_arg(s: &str) -> CliResult<Vec<(u64, usize)>> {
    s.split(',')
        .map(|part| {
            let (p, n) = part
                .trim()
                .split_once('^')
                .ok_or_else(|| CliError::Usage(format!("bad field spec '{part}', want p^n")))?;
            Ok((
                p.parse::<u64>()
                    .map_err(|e| CliError::Usage(format!("bad prime in '{part}': {e}")))?,
                n.parse::<usize>()
                    .map_err(|e| CliError::Usage(format!("bad degree in '{part}': {e}")))?,
            ))
        })
        .collect()
}

/// Exit code for decision-style commands: 0 = positive, 1 = negative.
fn verdict_code(positive: bool) -> i32 {
    if positive {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    let console = Console { quiet: cli.quiet };
    match cli.command {
        Command::Group { cmd } => match cmd {
            GroupCmd::FindMatching(args) => {
                let inst = parse_group_instance(&read_input(&args.input)?)?;
                match find_matching(&inst.a, &inst.b)? {
                    MatchOutcome::Matched(m) => {
                        let cert = Certificate::from_matching(&m);
                        console.emit(cert.pretty_json());
                        archive(&args.out, &cert, &console)?;
                        Ok(0)
                    }
                    MatchOutcome::Unmatched(v) => {
                        let cert = Certificate::from_hall_violator(&inst.a, &inst.b, &v);
                        console.emit(cert.pretty_json());
                        archive(&args.out, &cert, &console)?;
                        Ok(1)
                    }
                }
            }
            GroupCmd::CheckLocal(args) => {
                let inst = parse_group_instance(&read_input(&args.input)?)?;
                let report = is_locally_matched(&inst.a, &inst.b)?;
                console.emit(serde_json::to_string_pretty(&report).unwrap());
                if let Some(out) = &args.out {
                    let store = CertStore::open(out)?;
                    for row in report.qualifying() {
                        if let matchlab_core::group::GroupLocalStatus::Matched(lm) = &row.status {
                            store.put(&Certificate::from_local_matching(&inst.a, &inst.b, lm))?;
                        }
                    }
                }
                Ok(verdict_code(report.locally_matched))
            }
            GroupCmd::DecideProperty(args) => {
                let group = parse_group_only(&read_input(&args.input)?)?;
                let has_property = decide_matching_property(&group);
                console.emit(
                    serde_json::json!({ "group": group, "matching_property": has_property })
                        .to_string(),
                );
                Ok(verdict_code(has_property))
            }
            GroupCmd::Counterexample(args) => {
                let group = parse_group_only(&read_input(&args.input)?)?;
                match construct_counterexample(&group)? {
                    Some(ce) => {
                        let cert = Certificate::from_hall_violator(&ce.a, &ce.b, &ce.violator);
                        console.emit(cert.pretty_json());
                        archive(&args.out, &cert, &console)?;
                        Ok(0)
                    }
                    None => {
                        console.emit(
                            serde_json::json!({
                                "group": group,
                                "counterexample": null,
                                "reason": "group has the matching property"
                            })
                            .to_string(),
                        );
                        Ok(1)
                    }
                }
            }
        },
        Command::Field { cmd } => match cmd {
            FieldCmd::FindMatchedBasis(args) => {
                let inst = parse_field_instance(&read_input(&args.input)?)?;
                let basis = match inst.a_basis {
                    Some(b) => b,
                    None => BasisSeq::new(
                        &inst.field,
                        inst.a
                            .rows()
                            .iter()
                            .map(|r| inst.field.from_coeffs(r))
                            .collect::<Result<_, _>>()?,
                    )?,
                };
                match find_matched_basis(&inst.field, &basis, &inst.b, &inst.a)? {
                    MatchedBasisOutcome::Found(bm) => {
                        let cert = Certificate::from_basis_matching(
                            &inst.field,
                            &inst.a,
                            &inst.b,
                            bm.a_basis,
                            bm.b_basis,
                        );
                        console.emit(cert.pretty_json());
                        archive(&args.out, &cert, &console)?;
                        Ok(0)
                    }
                    MatchedBasisOutcome::Violator(v) => {
                        let cert = Certificate::from_criterion_violator(
                            &inst.field,
                            &inst.a,
                            &inst.b,
                            basis.vectors().to_vec(),
                            v.indices,
                            v.witness,
                            v.deficit,
                        );
                        console.emit(cert.pretty_json());
                        archive(&args.out, &cert, &console)?;
                        Ok(1)
                    }
                }
            }
            FieldCmd::CheckPrimitive(args) => {
                let inst = parse_field_instance(&read_input(&args.input)?)?;
                let verdict = primitive_check(&inst.field, &inst.b)?;
                console.emit(serde_json::to_string_pretty(&verdict).unwrap());
                Ok(verdict_code(verdict.primitive))
            }
            FieldCmd::CheckLocal { args, seed } => {
                let inst = parse_field_instance(&read_input(&args.input)?)?;
                let cfg = LocalSearchConfig {
                    seed,
                    ..LocalSearchConfig::default()
                };
                let report = linear_locally_matched(&inst.field, &inst.a, &inst.b, &cfg)?;
                console.emit(serde_json::to_string_pretty(&report).unwrap());
                Ok(verdict_code(report.locally_matched))
            }
        },
        Command::Verify { cmd } => match cmd {
            VerifyCmd::Kneser(args) => {
                let inst = parse_group_instance(&read_input(&args.input)?)?;
                let cert = kneser_verify(&inst.a, &inst.b)?;
                let cert = Certificate::from_kneser(&cert);
                console.emit(cert.pretty_json());
                archive(&args.out, &cert, &console)?;
                Ok(0)
            }
            VerifyCmd::LinearKneser(args) => {
                let inst = parse_field_instance(&read_input(&args.input)?)?;
                let cert = linear_kneser_verify(&inst.field, &inst.a, &inst.b)?;
                let cert = Certificate::from_linear_kneser(&inst.field, &cert);
                console.emit(cert.pretty_json());
                archive(&args.out, &cert, &console)?;
                Ok(0)
            }
        },
        Command::Campaign { cmd } => match cmd {
            CampaignCmd::Run(args) => {
                let mode = match args.mode.as_str() {
                    "exhaustive" => CampaignMode::Exhaustive,
                    "random" => CampaignMode::Random {
                        trials: args.trials,
                        seed: args.seed,
                    },
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown mode '{other}' (want exhaustive or random)"
                        )))
                    }
                };
                let mut config = CampaignConfig::new(args.theorem, mode);
                config.max_order = args.max_order;
                config.max_dim = args.max_dim;
                config.jobs = args.jobs;
                config.out_dir = args.out;
                if let Some(gs) = &args.groups {
                    config.groups = Some(
                        serde_json::from_str(gs)
                            .map_err(|e| CliError::Usage(format!("bad --groups: {e}")))?,
                    );
                }
                if let Some(fs) = &args.fields {
                    config.fields = Some(parse_fields_arg(fs)?);
                }
                let started = std::time::Instant::now();
                let report = run_campaign(&config)?;
                console.note(format!(
                    "campaign {:?}: {} instances, {} failures, {} findings in {:.2?}",
                    config.theorem,
                    report.instances,
                    report.failures.len(),
                    report.findings.len(),
                    started.elapsed()
                ));
                console.emit(serde_json::to_string_pretty(&report).unwrap());
                if report.failures.is_empty() {
                    Ok(0)
                } else {
                    // failed theorem campaigns are contradictions by contract
                    Ok(2)
                }
            }
            CampaignCmd::Hunt(args) => {
                let config = HuntConfig {
                    domain: args.domain,
                    max_order: args.max_order,
                    fields: parse_fields_arg(&args.fields)?,
                    max_dim: args.max_dim,
                    max_findings_each: args.max_findings,
                    out_dir: args.out,
                };
                let report = hunt_counterexample(&config)?;
                console.emit(serde_json::to_string_pretty(&report).unwrap());
                Ok(0)
            }
        },
        Command::Cert { cmd } => match cmd {
            CertCmd::Verify { path } => {
                let cert = CertStore::load(&path)?;
                match cert::verify(&cert) {
                    Ok(()) => {
                        console.emit(
                            serde_json::json!({ "kind": cert.kind(), "verified": true })
                                .to_string(),
                        );
                        Ok(0)
                    }
                    Err(e) => {
                        console.emit(
                            serde_json::json!({
                                "kind": cert.kind(),
                                "verified": false,
                                "detail": e.to_string()
                            })
                            .to_string(),
                        );
                        Ok(1)
                    }
                }
            }
        },
    }
}

#[derive(Subcommand)]
enum CertCmd {
    /// Re-check a certificate file against its embedded instance.
    Verify { path: PathBuf },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(3);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
