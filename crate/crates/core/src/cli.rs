//! Command-line front end. Every subcommand prints a JSON report
//! `{command, passed, result}` (or CSV/SVG where offered) and exits with 0 on
//! pass, 2 on a failed verification and 1 on usage or numerical errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::exactpoly::{parse_rational, Rational};
use crate::interfam::{self, FamilySpec, SvgStyle, SweepOptions};
use crate::periods::mirror_check;
use crate::pseudolattice::{self, MutationWord};
use crate::rootlattice::{self, IntLattice};
use crate::vancycles::{self, expected_classes};
use crate::weierstrass::{self, catalog, Variant};

#[derive(Parser, Debug)]
#[command(name = "dpmirror", version, about = "Mirror-side computations for del Pezzo surfaces of degree 1, 2 and 3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Exact,
    Perturbed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kodaira fiber configuration of a catalog surface.
    Fibers {
        #[arg(long)]
        d: u8,
        #[arg(long, value_enum, default_value_t = VariantArg::Exact)]
        variant: VariantArg,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
    },
    /// Regularized quantum period against the classical period of the mirror.
    Mirror {
        #[arg(long)]
        d: u8,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Ordered critical values of the perturbed surface.
    Critvals {
        #[arg(long)]
        d: u8,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
    },
    /// Vanishing classes, their Seifert Gram matrix and the cycle over ∞.
    Cycles {
        #[arg(long)]
        d: u8,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
        /// Largest accepted lattice-rounding residual.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Mutation sequence taking the vanishing-cycle basis to the del Pezzo basis.
    Verify {
        #[arg(long)]
        d: u8,
    },
    /// Charge-kernel decomposition, Kuznetsov basis and fundamental weights.
    Junction {
        #[arg(long)]
        d: u8,
    },
    /// Vanishing-cycle sequences in the E_ℓ string-junction conventions.
    Ghs {
        #[arg(long)]
        ell: u8,
    },
    /// Critical-value tracks of the interpolation from degree d to d − 1.
    Interpolate {
        #[arg(long)]
        d: u8,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Also write the SVG figure here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Apply a mutation word such as "L1 L2 R8" (rightmost first).
    Mutate {
        #[arg(long)]
        d: u8,
        #[arg(long)]
        word: String,
        /// Append the d classes over ∞ to the basis.
        #[arg(long)]
        extended: bool,
    },
    /// Best-first search for a word reaching the del Pezzo Gram matrix.
    Search {
        #[arg(long)]
        d: u8,
        #[arg(long, default_value_t = 20000)]
        budget: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Numeric(e.to_string())
    }
}

/// Version of the JSON report layout; bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    pub passed: bool,
    pub body: String,
}

fn json_report<T: Serialize>(command: &str, passed: bool, result: &T) -> Result<Report, CliError> {
    let v = json!({ "schema_version": SCHEMA_VERSION, "command": command, "passed": passed, "result": result });
    Ok(Report { passed, body: serde_json::to_string_pretty(&v)? + "\n" })
}

fn epsilon(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--epsilon: {e}")))
}

fn check_d(d: u8) -> Result<(), CliError> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--d must be 1, 2 or 3 (got {d})")))
    }
}

fn only_json(format: Format, allowed: &[Format]) -> Result<(), CliError> {
    if format == Format::Json || allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("format {format:?} is not available for this command")))
    }
}

/// Runs one parsed command and returns the report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Fibers { d, variant, epsilon: e } => {
            only_json(fmt, &[])?;
            check_d(*d)?;
            let v = match variant {
                VariantArg::Exact => Variant::Exact,
                VariantArg::Perturbed => Variant::Perturbed(epsilon(e)?),
            };
            let cfg = weierstrass::fiber_configuration(&catalog(*d, &v)?)?;
            let result = json!({ "summary": cfg.summary(), "configuration": cfg });
            json_report("fibers", cfg.euler_sum == 12, &result)
        }
        Command::Mirror { d, order } => {
            only_json(fmt, &[])?;
            check_d(*d)?;
            let m = mirror_check(*d, *order)?;
            json_report("mirror", m.passed(), &m)
        }
        Command::Critvals { d, epsilon: e } => {
            only_json(fmt, &[Format::Csv])?;
            check_d(*d)?;
            let w = catalog(*d, &Variant::Perturbed(epsilon(e)?))?;
            let l0 = crate::exactpoly::rational_to_f64(&weierstrass::lambda0(*d)?);
            let cvs = vancycles::critical_values_ordered(&w, l0)?;
            if fmt == Format::Csv {
                let mut s = String::from("index,re,im\n");
                for (i, z) in cvs.iter().enumerate() {
                    let _ = writeln!(s, "{i},{:.15e},{:.15e}", z.re, z.im);
                }
                return Ok(Report { passed: true, body: s });
            }
            json_report("critvals", true, &cvs)
        }
        Command::Cycles { d, epsilon: e, tol } => {
            only_json(fmt, &[Format::Csv])?;
            check_d(*d)?;
            let data = vancycles::vanishing_classes(*d, &epsilon(e)?)?;
            let classes = data.classes();
            let gram = vancycles::seifert_gram(&classes);
            let inf = vancycles::infinity_cycle(&classes, *d as u32)?;
            let expected = expected_classes(*d).unwrap_or_default();
            let matches_listed =
                expected.len() == classes.len() && expected.iter().zip(&classes).all(|(x, y)| x.same_up_to_sign(y));
            let passed = data.max_residual() < *tol && data.delta_disagreements().is_empty();
            if fmt == Format::Csv {
                let mut s = String::from("index,re,im,class,residual\n");
                for (i, a) in data.arcs.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "{i},{:.15e},{:.15e},{},{:.3e}",
                        a.critical_value.re, a.critical_value.im, a.class, a.residual
                    );
                }
                return Ok(Report { passed, body: s });
            }
            let result = json!({
                "classes": classes,
                "matches_listed_sequence": matches_listed,
                "max_residual": data.max_residual(),
                "delta_disagreements": data.delta_disagreements(),
                "seifert_gram": gram,
                "infinity_cycle": inf,
                "data": data,
            });
            json_report("cycles", passed, &result)
        }
        Command::Verify { d } => {
            only_json(fmt, &[])?;
            check_d(*d)?;
            let r = pseudolattice::verify_theorem(*d)?;
            json_report("verify", r.passed(), &r)
        }
        Command::Junction { d } => {
            only_json(fmt, &[])?;
            check_d(*d)?;
            let classes = expected_classes(*d).unwrap_or_default();
            let (p, _, c) = pseudolattice::from_boundaries(&classes)?;
            let dec = rootlattice::kernel_decomposition(&p, &c)?;
            let split = rootlattice::rational_splitting(&p, &c)?;
            let kz = rootlattice::kuznetsov_basis(*d)?;
            let hyp = rootlattice::hyperbolic_model(9 - *d as usize)?;
            let weights = rootlattice::fundamental_weights(&IntLattice::new(hyp.gram.clone())?, &hyp.simple_roots())?;
            let passed = dec.passed() && split.passed && kz.matches_up_to_kk_sign();
            let result = json!({
                "kernel_decomposition": dec,
                "rational_splitting": split,
                "kuznetsov": kz,
                "hyperbolic_model": hyp,
                "fundamental_weights": weights,
            });
            json_report("junction", passed, &result)
        }
        Command::Ghs { ell } => {
            only_json(fmt, &[])?;
            let seq = pseudolattice::ghs_sequences(*ell)?;
            let target = pseudolattice::ghs_target(*ell)?;
            let passed = seq.len() == target.len() && seq.iter().zip(&target).all(|(x, y)| x.same_up_to_sign(y));
            json_report("ghs", passed, &json!({ "sequence": seq, "target": target }))
        }
        Command::Interpolate { d, samples, svg } => {
            if !(2..=3).contains(d) {
                return Err(CliError::Usage(format!("--d must be 3 or 2 (got {d})")));
            }
            let fam = FamilySpec::standard(*d)?;
            let t = interfam::sweep(&fam, &SweepOptions { samples: *samples, ..Default::default() })?;
            let figure = interfam::render_svg(Some(&t), &SvgStyle::default());
            if let Some(path) = svg {
                std::fs::write(path, &figure).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            }
            let counts = t.endpoint_finite_counts();
            let expected = (12 - *d as usize, 13 - *d as usize);
            let passed = counts == expected && t.points.iter().all(|p| p.len() == interfam::SPHERE_DEGREE);
            match fmt {
                Format::Svg => return Ok(Report { passed, body: figure }),
                Format::Csv => return Ok(Report { passed, body: t.to_csv() }),
                Format::Json => {}
            }
            let (word, validation) = match interfam::transposition_word(&t) {
                Ok(w) => {
                    let v = interfam::validate_word(*d, *d - 1, &w)?;
                    (Some(w.to_string()), Some(v))
                }
                Err(_) => (None, None),
            };
            let result = json!({
                "family": t.family,
                "samples": t.samples.len(),
                "endpoint_finite_counts": counts,
                "tracks_leaving_infinity": t.tracks_leaving_infinity(),
                "chart_switches": t.chart_switches.len(),
                "candidate_word": word,
                "validation": validation,
            });
            json_report("interpolate", passed, &result)
        }
        Command::Mutate { d, word, extended } => {
            only_json(fmt, &[])?;
            check_d(*d)?;
            let w: MutationWord =
                word.parse().map_err(|e: pseudolattice::LatticeError| CliError::Usage(e.to_string()))?;
            let mut classes = expected_classes(*d).unwrap_or_default();
            if *extended {
                classes = pseudolattice::extended_classes(*d, &classes);
            }
            let (p, b, c) = pseudolattice::from_boundaries(&classes)?;
            let out = pseudolattice::mutate(&p, &b, &w)?;
            let result = json!({
                "word": w.to_string(),
                "classes": c.charges(&out),
                "vectors": out.vectors,
                "gram": out.gram(&p),
            });
            json_report("mutate", true, &result)
        }
        Command::Search { d, budget } => {
            only_json(fmt, &[])?;
            check_d(*d)?;
            let (p, b, _) = pseudolattice::from_boundaries(&expected_classes(*d).unwrap_or_default())?;
            let target = pseudolattice::del_pezzo_gram(9 - *d as usize);
            let found = pseudolattice::norm_guided_search(&p, &b, &target, *budget);
            let result = json!({
                "word": found.as_ref().map(|r| r.word.to_string()),
                "expanded": found.as_ref().map(|r| r.expanded),
            });
            json_report("search", found.is_some(), &result)
        }
    }
}

/// Parses arguments, runs the command and writes the output; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &report.body) {
                    eprintln!("error: {}: {e}", path.display());
                    return 1;
                }
            } else {
                print!("{}", report.body);
            }
            if report.passed {
                0
            } else {
                2
            }
        }
        Err(CliError::Usage(m)) | Err(CliError::Numeric(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}
