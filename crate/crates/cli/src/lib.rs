//! Command-line driver for the `dpfree` toolkit.
//!
//! Every subcommand prints a report on standard output and exits with `0`
//! when the answer is verified, `2` when a budget ran out before an answer
//! was certified, and `1` on bad input or a failed verification.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dpfree::abelian::{normalize_basis, AbelianVector, FactorHom, NielsenMove};
use dpfree::certificate::{self, AmalgamScenario, ReportConfig, Verdict};
use dpfree::kernel::KernelGroup;
use dpfree::metric::{self, Distance, Metric};
use dpfree::presentation::{self, AreaResult, Exactness, NullExpression, Presentation, SearchBudget};
use dpfree::splitting::Splitting;
use dpfree::{Error, Exec, ProductElement};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dpfree", version, about = "Kernels of products of free groups: rewriting, area and distortion experiments")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of words stored by one area search.
    #[arg(long, global = true, default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub node_cap: u64,
    /// Intermediate words are capped at |w| + c * (longest relator).
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub len_cap_factor: u64,
    /// Radius for word-metric searches.
    #[arg(long, global = true, default_value_t = metric::DEFAULT_RADIUS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub radius: u64,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Output format (default: json for `certify`, table otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide membership in K^n_m(r) and print θ.
    Member {
        #[arg(long)]
        group: String,
        /// `w1 ; w2 ; ...` or `{"factors": [...]}`.
        #[arg(long)]
        element: String,
        /// JSON list of per-factor matrices replacing the standard θ.
        #[arg(long)]
        homs: Option<String>,
    },
    /// Rewrite kernel elements over the standard generating set.
    Rewrite {
        #[arg(long)]
        group: String,
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        element: Option<String>,
        /// Rewrite this many random kernel elements instead.
        #[arg(long)]
        random: Option<usize>,
        /// Length budget for random elements.
        #[arg(long, default_value_t = 12)]
        length: usize,
        #[arg(long)]
        homs: Option<String>,
    },
    /// Normalize a homomorphism F_m -> Z^r by Nielsen moves.
    NormalizeBasis {
        /// `{"m":..,"r":..,"rows":[..]}` or a bare row list.
        #[arg(long)]
        hom: String,
    },
    /// Decompose an element of K^n_m(m) over the amalgam splitting.
    Split {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        element: String,
    },
    /// Exact area of a null-homotopic word.
    Area {
        /// `< a, b | r1, r2 >`, or `toy` for the built-in amalgam.
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        word: String,
    },
    /// Dehn function value δ(n) by enumeration.
    Dehn {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        n: usize,
    },
    /// Word-metric distance from the identity over the standard generators.
    Metric {
        #[arg(long)]
        group: String,
        /// A product element, or `h(n)` for ([x^n, y^n], 1).
        #[arg(long)]
        target: String,
    },
    /// d_B(1, h_n) against ambient length for n = 1..n-max.
    Distortion {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Assemble the area lower-bound certificate for one n.
    Certify {
        #[arg(long)]
        n: usize,
        /// Random B-words checked against the substitution identity.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Test the amalgam area inequality on the built-in scenario.
    ToyAmalgam {
        /// Defaults to all of 1 and 2.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    json: Value,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    code: i32,
}

impl Report {
    fn single(json: Value, fields: Vec<(&'static str, String)>, code: i32) -> Report {
        let (columns, row) = fields.into_iter().unzip();
        Report {
            json,
            columns,
            rows: vec![row],
            code,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("plain data");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Table if self.rows.len() == 1 => {
                let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
                let mut s = String::new();
                for (c, v) in self.columns.iter().zip(&self.rows[0]) {
                    let _ = writeln!(s, "{c:<width$}  {v}");
                }
                s
            }
            Format::Table => {
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
                for row in &self.rows {
                    for (w, v) in widths.iter_mut().zip(row) {
                        *w = (*w).max(v.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let mut s = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ");
                    s.truncate(s.trim_end().len());
                    s.push('\n');
                    s
                };
                let mut s = line(self.columns.clone());
                for row in &self.rows {
                    s.push_str(&line(row.iter().map(String::as_str).collect()));
                }
                s
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_FAILURE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let exec = match cli.config.jobs {
        Some(1) => Exec::Sequential,
        _ => Exec::Parallel,
    };
    let go = || execute(&cli.command, &cli.config, exec);
    let result = with_jobs(cli.config.jobs, go);
    let format = cli.config.format.unwrap_or(match cli.command {
        Command::Certify { .. } => Format::Json,
        _ => Format::Table,
    });
    match result {
        Ok(report) => Outcome {
            code: report.code,
            stdout: report.render(format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: EXIT_FAILURE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

#[cfg(feature = "parallel")]
fn with_jobs<R: Send>(jobs: Option<u64>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(j) if j > 1 => match rayon::ThreadPoolBuilder::new().num_threads(j as usize).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<R: Send>(_jobs: Option<u64>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn budget(cfg: &RunConfig, exec: Exec) -> SearchBudget {
    SearchBudget {
        node_cap: cfg.node_cap as usize,
        len_cap_factor: cfg.len_cap_factor as usize,
        exec,
    }
}

fn kernel_group(group: &str, homs: Option<&str>) -> Result<KernelGroup, Error> {
    let g = KernelGroup::parse(group)?;
    match homs {
        None => Ok(g),
        Some(text) => {
            let raw: Vec<Value> = serde_json::from_str(text)
                .map_err(|e| Error::InvalidArgument(format!("homs JSON: {e}")))?;
            let homs = raw
                .iter()
                .map(|v| FactorHom::from_json(&v.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            if homs.len() != g.n() || homs.iter().any(|h| h.rank() != g.m() || h.target_rank() != g.r()) {
                return Err(Error::InvalidArgument(format!("homs do not match {}", g.name())));
            }
            KernelGroup::with_homs(homs)
        }
    }
}

fn vector_text(v: &AbelianVector) -> String {
    let parts: Vec<String> = v.coords().iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn move_text(m: &NielsenMove) -> String {
    match *m {
        NielsenMove::Swap { i, j } => format!("swap({i},{j})"),
        NielsenMove::Invert { i } => format!("invert({i})"),
        NielsenMove::Multiply { i, j, sign } => format!("multiply({i},{j},{sign:+})"),
    }
}

fn load_presentation(text: &str) -> Result<Presentation, Error> {
    if text.trim() == "toy" {
        return Ok(AmalgamScenario::toy(1)?.presentation);
    }
    let p = Presentation::parse(text)?;
    match p.clone().with_inferred_evaluation() {
        Ok(q) => Ok(q),
        Err(Error::InvalidArgument(_)) => Ok(p),
        Err(e) => Err(e),
    }
}

fn witness_text(p: &Presentation, e: &NullExpression) -> String {
    if e.terms.is_empty() {
        return "1".into();
    }
    e.terms
        .iter()
        .map(|t| format!("({}, r{}, {:+})", p.format_word(&t.conjugator), t.relator, t.sign))
        .collect::<Vec<_>>()
        .join(" ")
}

fn regime_text(e: &Exactness) -> String {
    match e {
        Exactness::MatchesLowerBound => "matches_lower_bound".into(),
        Exactness::WithinLengthCap { cap } => format!("within_length_cap({cap})"),
    }
}

fn parse_target(text: &str, m: usize) -> Result<ProductElement, Error> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix("h(").and_then(|r| r.strip_suffix(')')) {
        let n: usize = inner
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad family index `{inner}`")))?;
        return metric::h_family(n);
    }
    ProductElement::parse(text, m)
}

fn execute(cmd: &Command, cfg: &RunConfig, exec: Exec) -> Result<Report, Error> {
    match cmd {
        Command::Member { group, element, homs } => {
            let g = kernel_group(group, homs.as_deref())?;
            let e = ProductElement::parse(element, g.m())?;
            let theta = g.theta(&e)?;
            let member = theta.is_zero();
            Ok(Report::single(
                json!({ "group": g.name(), "element": e.format(g.m()), "theta": theta.coords(), "member": member }),
                vec![
                    ("group", g.name()),
                    ("element", e.format(g.m())),
                    ("theta", vector_text(&theta)),
                    ("member", member.to_string()),
                ],
                EXIT_OK,
            ))
        }
        Command::Rewrite {
            group,
            element,
            random,
            length,
            homs,
        } => {
            let g = kernel_group(group, homs.as_deref())?;
            let gens = g.standard_generators()?;
            let elements = match (element, random) {
                (Some(text), _) => vec![ProductElement::parse(text, g.m())?],
                (None, Some(count)) => g.random_kernel_elements(*count, *length, cfg.seed, exec)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let words = g.rewrite_batch(&elements, exec);
            let mut rows = Vec::new();
            let mut items = Vec::new();
            let mut all_ok = true;
            for (e, w) in elements.iter().zip(words) {
                let w = w?;
                let ok = gens.eval(&w)? == *e;
                all_ok &= ok;
                let (et, wt) = (e.format(g.m()), gens.format_word(&w));
                items.push(json!({ "element": et, "word": wt, "length": w.len(), "verified": ok }));
                rows.push(vec![et, wt, w.len().to_string(), ok.to_string()]);
            }
            Ok(Report {
                json: json!({ "group": g.name(), "generators": gens.symbols().names(), "rewrites": items }),
                columns: vec!["element", "word", "length", "verified"],
                rows,
                code: if all_ok { EXIT_OK } else { EXIT_FAILURE },
            })
        }
        Command::NormalizeBasis { hom } => {
            let h = FactorHom::from_json(hom)?;
            let change = normalize_basis(&h)?;
            let standard = FactorHom::standard(h.rank(), h.target_rank())?;
            let mut ok = true;
            for (j, w) in change.new_basis.iter().enumerate() {
                ok &= h.ab_image(w)? == *standard.image(j as u32 + 1);
            }
            let f = h.domain();
            let basis: Vec<String> = change.new_basis.iter().map(|w| f.format(w)).collect();
            Ok(Report::single(
                json!({ "m": h.rank(), "r": h.target_rank(), "moves": change.moves, "new_basis": basis, "verified": ok }),
                vec![
                    ("moves", change.moves.iter().map(move_text).collect::<Vec<_>>().join(" ")),
                    ("new_basis", basis.join(" , ")),
                    ("verified", ok.to_string()),
                ],
                if ok { EXIT_OK } else { EXIT_FAILURE },
            ))
        }
        Command::Split { n, m, element } => {
            let d = Splitting::new(*n, *m)?;
            let gamma = ProductElement::parse(element, *m)?;
            gamma.check_shape(*n, *m)?;
            let form = d.syllable_form(&gamma)?;
            let parts = d.semidirect_decompose(&gamma)?;
            let ok = d.embed_base(&parts.m_part).mul(&d.eval_hat_word(&parts.hat_word)) == gamma;
            let blocks: Vec<String> = form.blocks.iter().map(|(k, e)| format!("g{k}^{e}")).collect();
            let mut js = serde_json::to_value(form.to_json(*m)).expect("plain data");
            js["reassembles"] = json!(ok);
            Ok(Report::single(
                js,
                vec![
                    ("m_part", form.m_part.format(*m)),
                    ("blocks", if blocks.is_empty() { "1".into() } else { blocks.join(" ") }),
                    ("reassembles", ok.to_string()),
                ],
                if ok { EXIT_OK } else { EXIT_FAILURE },
            ))
        }
        Command::Area { presentation: ptext, word } => {
            let p = load_presentation(ptext)?;
            let w = p.parse_word(word)?;
            let res = presentation::area_search(&p, &w, budget(cfg, exec))?;
            Ok(area_report(&p, &res))
        }
        Command::Dehn { presentation: ptext, n } => {
            let p = load_presentation(ptext)?;
            let d = presentation::dehn_function(&p, *n, budget(cfg, exec))?;
            let witness = d.witness.as_ref().map_or("1".to_string(), |w| p.format_word(w));
            let code = if d.exact { EXIT_OK } else { EXIT_INCONCLUSIVE };
            Ok(Report::single(
                json!({ "n": d.n, "value": d.value, "exact": d.exact, "witness": witness, "classes": d.words, "inconclusive": d.inconclusive }),
                vec![
                    ("n", d.n.to_string()),
                    ("value", d.value.to_string()),
                    ("exact", d.exact.to_string()),
                    ("witness", witness),
                    ("classes", d.words.to_string()),
                    ("inconclusive", d.inconclusive.to_string()),
                ],
                code,
            ))
        }
        Command::Metric { group, target } => {
            let g = KernelGroup::parse(group)?;
            let gens = g.standard_generators()?;
            let t = parse_target(target, g.m())?;
            t.check_shape(g.n(), g.m())?;
            if !g.contains(&t)? {
                return Err(Error::NotInKernel);
            }
            let radius = cfg.radius as usize;
            let d = Metric::new(&gens, radius, exec).distance(&t)?;
            let (status, witness, code) = match &d {
                Distance::Exact { witness, .. } => ("exact", gens.format_word(witness), EXIT_OK),
                Distance::Beyond { .. } => ("lower_bound", String::new(), EXIT_INCONCLUSIVE),
            };
            let value = d.lower_bound();
            Ok(Report::single(
                json!({ "group": g.name(), "target": t.format(g.m()), "radius": radius, "status": status, "value": value, "witness": witness }),
                vec![
                    ("target", t.format(g.m())),
                    ("radius", radius.to_string()),
                    ("status", status.into()),
                    ("value", value.to_string()),
                    ("witness", witness),
                ],
                code,
            ))
        }
        Command::Distortion { n_max } => {
            if *n_max < 1 {
                return Err(Error::InvalidArgument("--n-max must be at least 1".into()));
            }
            let ns: Vec<usize> = (1..=*n_max).collect();
            let rows = metric::distortion_table(&ns, cfg.radius as usize, exec)?;
            Ok(Report {
                json: json!({ "radius": cfg.radius, "rows": rows }),
                columns: vec!["n", "ambient_length", "status", "value"],
                rows: rows
                    .iter()
                    .map(|r| vec![r.n.to_string(), r.ambient_length.to_string(), r.status.into(), r.value.to_string()])
                    .collect(),
                code: EXIT_OK,
            })
        }
        Command::Certify { n, samples } => {
            let rc = ReportConfig {
                budget: budget(cfg, exec),
                radius: cfg.radius as usize,
                seed: cfg.seed,
                samples: *samples,
            };
            let r = certificate::lower_bound_report(*n, rc)?;
            let code = if r.status == "verified" { EXIT_OK } else { EXIT_INCONCLUSIVE };
            let fields = vec![
                ("n", r.n.to_string()),
                ("status", r.status.into()),
                ("test_word", r.test_word.clone()),
                ("symbol_length", r.test_word_length.symbols.to_string()),
                ("ambient_length", r.test_word_length.ambient.to_string()),
                ("stated_length", r.test_word_length.stated.to_string()),
                ("distance_lower_bound", r.distance_lower_bound.to_string()),
                ("area_lower_bound", r.area_lower_bound.to_string()),
                (
                    "evidence",
                    r.evidence
                        .iter()
                        .map(|e| format!("{}:{}", e.verifier, e.status))
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
            ];
            Ok(Report::single(serde_json::to_value(&r).expect("plain data"), fields, code))
        }
        Command::ToyAmalgam { k, n } => {
            let ks: Vec<usize> = k.map_or(vec![1, 2], |k| vec![k]);
            let ns: Vec<usize> = n.map_or(vec![1, 2], |n| vec![n]);
            let cases: Vec<(usize, usize)> = ks.iter().flat_map(|&k| ns.iter().map(move |&n| (k, n))).collect();
            // instances run one at a time; each search parallelizes internally
            let reports = cases
                .iter()
                .map(|&(k, n)| certificate::toy_amalgam_check(k, n, budget(cfg, exec)))
                .collect::<Result<Vec<_>, _>>()?;
            let code = if reports.iter().any(|r| r.verdict == Verdict::Violated) {
                EXIT_FAILURE
            } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            };
            let verdict = |v: Verdict| match v {
                Verdict::Holds => "holds",
                Verdict::Violated => "violated",
                Verdict::Inconclusive => "inconclusive",
            };
            Ok(Report {
                json: json!({ "instances": reports }),
                columns: vec!["k", "n", "word_length", "h_distance", "required", "status", "area", "lower_bound", "verdict"],
                rows: reports
                    .iter()
                    .map(|r| {
                        vec![
                            r.k.to_string(),
                            r.n.to_string(),
                            r.word_length.to_string(),
                            r.h_distance.to_string(),
                            r.required.to_string(),
                            r.area.status.into(),
                            r.area.area.map_or("-".into(), |a| a.to_string()),
                            r.area.lower_bound.to_string(),
                            verdict(r.verdict).into(),
                        ]
                    })
                    .collect(),
                code,
            })
        }
    }
}

fn area_report(p: &Presentation, res: &AreaResult) -> Report {
    match res {
        AreaResult::Exact {
            area,
            witness,
            exactness,
            lower_bound,
            bound,
            nodes,
        } => Report::single(
            json!({
                "status": "exact",
                "area": area,
                "lower_bound": lower_bound,
                "bound": bound,
                "regime": exactness,
                "nodes": nodes,
                "witness": witness.to_json(p),
            }),
            vec![
                ("status", "exact".into()),
                ("area", area.to_string()),
                ("lower_bound", lower_bound.to_string()),
                ("regime", regime_text(exactness)),
                ("nodes", nodes.to_string()),
                ("witness", witness_text(p, witness)),
            ],
            EXIT_OK,
        ),
        AreaResult::Exhausted {
            node_cap,
            lower_bound,
            capped_lower_bound,
            bound,
            nodes,
        } => Report::single(
            json!({
                "status": "exhausted",
                "node_cap": node_cap,
                "lower_bound": lower_bound,
                "capped_lower_bound": capped_lower_bound,
                "bound": bound,
                "nodes": nodes,
            }),
            vec![
                ("status", "exhausted".into()),
                ("node_cap", node_cap.to_string()),
                ("lower_bound", lower_bound.to_string()),
                ("capped_lower_bound", capped_lower_bound.to_string()),
                ("nodes", nodes.to_string()),
            ],
            EXIT_INCONCLUSIVE,
        ),
    }
}
