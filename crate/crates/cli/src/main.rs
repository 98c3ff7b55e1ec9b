use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use heckekit::checks::{self, CheckReport};
use heckekit::cyclotomic::{format_rational, parse_rational, TorusPointFiniteOrder};
use heckekit::group_spec::GroupSpec;
use heckekit::kottwitz;
use heckekit::lefschetz::{self, FixedPointReport, ParabolicType};
use heckekit::root_datum::{parse_word, Cochar};
use heckekit::spectral::{self, AbelianCentralizer, PacketDatum};
use heckekit::transfer::{self, ClassFunction, HeckeTransfer, Side, TorusType};
use heckekit::weights::{self, bigint_json, WeightFunction};
use heckekit::Error;
use num_rational::BigRational;
use serde_json::{json, Value};

const PRESETS: &[(&str, &str)] = &[
    ("gl2", include_str!("../presets/gl2.json")),
    ("gl3", include_str!("../presets/gl3.json")),
    ("sl2", include_str!("../presets/sl2.json")),
    ("sp4", include_str!("../presets/sp4.json")),
    ("g2", include_str!("../presets/g2.json")),
    ("a1", include_str!("../presets/a1.json")),
    ("a2sc", include_str!("../presets/a2sc.json")),
    ("a2ad-twisted", include_str!("../presets/a2ad-twisted.json")),
    ("f4", include_str!("../presets/f4.json")),
];

#[derive(Parser)]
#[command(name = "heckekit", version, about = "Exact computations with based root data and Hecke transfer")]
struct Cli {
    /// Group spec: a JSON file, inline JSON, or a bundled preset name
    #[arg(long, global = true)]
    group: Vec<String>,
    /// Dominant cocharacter as a JSON array
    #[arg(long, global = true)]
    mu: Option<String>,
    /// Weyl word of a torus type (repeatable)
    #[arg(long, global = true)]
    torus: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    suite: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Summary of the root datum
    Describe,
    /// Weight multiplicities of r_mu
    Weights,
    /// Weyl dimension of r_mu
    Dim,
    /// Minuscule / quasi-minuscule classification
    Classify,
    /// Decompose r_mu ⊗ r_nu
    Tensor {
        #[arg(long)]
        nu: String,
    },
    /// Trace of r_mu at a torus point of finite order
    Char {
        /// Coordinates as rationals, e.g. '["1/3", 0]'
        #[arg(long)]
        point: String,
        /// Also evaluate the Weyl character formula (regular points only)
        #[arg(long)]
        oracle: bool,
    },
    /// pi_1(G) and its theta-coinvariants
    Pi1,
    /// Basic class of mu in pi_1(G)_Gamma
    Kappa,
    /// Kottwitz sign identity; mu may have rational entries
    Sign {
        #[arg(long)]
        base: Option<String>,
    },
    /// <2rho, mu>
    Dimension,
    /// Transfer kernel on each torus type
    Kernel,
    /// Apply the Hecke transfer to a class function
    Transfer {
        /// Class function (file or inline JSON); the side is read from `nu`
        #[arg(long)]
        input: String,
        /// Side of an empty input
        #[arg(long, value_enum, default_value_t = SideArg::G)]
        side: SideArg,
    },
    /// Euler characteristic of G/P
    Euler {
        /// One-based Levi nodes as a JSON array; defaults to the parabolic of mu
        #[arg(long)]
        levi: Option<String>,
    },
    /// Fixed-point terms on Gr_{<=mu}
    Lefschetz,
    /// Fixed-point terms of the convolution Gr_{<=mu} x Gr_{<=nu}
    ConvolveFp {
        #[arg(long)]
        nu: String,
    },
    /// dim Hom_S(delta, r_mu) and its character average
    Hom {
        #[arg(long)]
        centralizer: String,
        #[arg(long)]
        delta: String,
    },
    /// Signed multiplicities of a packet
    Rhs {
        #[arg(long)]
        centralizer: String,
        #[arg(long)]
        packet: String,
        #[arg(long)]
        rho: String,
    },
    /// Run an identity suite
    Check {
        /// Include per-identity timings (output is then not reproducible)
        #[arg(long)]
        timings: bool,
    },
    /// Run the spectral identity suite
    CheckSpectral {
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    G,
    J,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Output {
    json: Value,
    tsv: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, tsv: String) -> Self {
        Output { json, tsv, ok: true }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load_json(arg: &str) -> Res<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON in {arg}: {e}")))
}

fn load_group(arg: &str) -> Res<(String, GroupSpec)> {
    if Path::new(arg).is_file() {
        let label = Path::new(arg).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok((label, GroupSpec::from_file(Path::new(arg))?));
    }
    let stem = arg.trim_end_matches(".json");
    let stem = Path::new(stem).file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if let Some((name, text)) = PRESETS.iter().find(|(n, _)| *n == stem) {
        return Ok((name.to_string(), GroupSpec::from_str(text)?));
    }
    let v = load_json(arg)?;
    let spec = GroupSpec::from_json(&v)?;
    Ok((spec.datum.name().to_string(), spec))
}

fn int_vec(arg: &str, what: &str) -> Res<Vec<i64>> {
    serde_json::from_str(arg).map_err(|e| usage(format!("--{what} must be a JSON array of integers: {e}")))
}

fn rational_vec(arg: &str, what: &str) -> Res<Vec<BigRational>> {
    let v: Value = serde_json::from_str(arg).map_err(|e| usage(format!("--{what}: {e}")))?;
    let items = v.as_array().ok_or_else(|| usage(format!("--{what} must be a JSON array")))?;
    items
        .iter()
        .map(|x| match x {
            Value::Number(n) => n
                .as_i64()
                .map(|k| BigRational::from_integer(k.into()))
                .ok_or_else(|| usage(format!("--{what}: bad entry {n}"))),
            Value::String(s) => parse_rational(s).map_err(Failure::from),
            other => Err(usage(format!("--{what}: bad entry {other}"))),
        })
        .collect()
}

fn char_vec(arg: &str, what: &str) -> Res<Vec<u64>> {
    serde_json::from_str(arg).map_err(|e| usage(format!("--{what} must be a JSON array of exponents: {e}")))
}

fn show(v: &[i64]) -> String {
    serde_json::to_string(v).expect("vector serializes")
}

fn weights_tsv(f: &WeightFunction) -> String {
    f.iter().map(|(l, m)| format!("{}\t{m}\n", show(l))).collect()
}

fn report_tsv(r: &FixedPointReport) -> String {
    let mut out = String::new();
    for (l, t) in &r.terms {
        out.push_str(&format!("{}\t{t}\n", show(l)));
    }
    out.push_str(&format!("total\t{}\nexpected\t{}\n", r.global_sum, r.expected));
    out
}

struct Ctx {
    cli: Cli,
}

impl Ctx {
    fn group(&self) -> Res<GroupSpec> {
        match self.cli.group.as_slice() {
            [one] => Ok(load_group(one)?.1),
            [] => Err(usage("--group is required")),
            _ => Err(usage("this command takes a single --group")),
        }
    }

    fn mu(&self, g: &GroupSpec) -> Res<Cochar> {
        let raw = self.cli.mu.as_deref().ok_or_else(|| usage("--mu is required"))?;
        let mu = int_vec(raw, "mu")?;
        g.datum.check_len(&mu)?;
        Ok(mu)
    }

    fn tori(&self, g: &GroupSpec) -> Res<Vec<TorusType>> {
        if self.cli.torus.is_empty() {
            return Ok(g.torus_catalog()?);
        }
        self.cli
            .torus
            .iter()
            .map(|w| Ok(TorusType::from_word(&g.datum, &parse_word(w)?, &g.theta)?))
            .collect()
    }

    fn run(&self) -> Res<Output> {
        match &self.cli.command {
            Command::Describe => self.describe(),
            Command::Weights => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let f = weights::weight_multiplicities(&g.datum, &mu)?;
                let json = json!({"mu": mu, "dim": bigint_json(&f.mass()), "weights": f.to_json()});
                Ok(Output::new(json, weights_tsv(&f)))
            }
            Command::Dim => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let d = weights::weyl_dim(&g.datum, &mu)?;
                Ok(Output::new(json!({"mu": mu, "dim": bigint_json(&d)}), format!("{d}\n")))
            }
            Command::Classify => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let c = weights::classify_minimal(&g.datum, &mu)?.to_json();
                let tsv = format!("{}\n", c["class"].as_str().unwrap_or(""));
                Ok(Output::new(json!({"mu": mu, "classification": c}), tsv))
            }
            Command::Tensor { nu } => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let nu = int_vec(nu, "nu")?;
                let t = weights::tensor_decompose(&g.datum, &mu, &nu)?;
                let mut rows = Vec::new();
                let mut tsv = String::new();
                for (l, m) in t.iter() {
                    let dim = weights::weyl_dim(&g.datum, l)?;
                    tsv.push_str(&format!("{}\t{m}\t{dim}\n", show(l)));
                    rows.push(json!({"lambda": l, "mult": bigint_json(m), "dim": bigint_json(&dim)}));
                }
                Ok(Output::new(json!({"mu": mu, "nu": nu, "components": rows}), tsv))
            }
            Command::Char { point, oracle } => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let s = TorusPointFiniteOrder::from_rationals(&rational_vec(point, "point")?, None)?;
                let tr = weights::character_eval(&g.datum, &mu, &s)?;
                let mut json = json!({"mu": mu, "point": s.to_json(), "trace": tr.to_json()});
                let mut tsv = format!("trace\t{tr}\n");
                let mut ok = true;
                if *oracle {
                    let w = weights::weyl_character_oracle(&g.datum, &mu, &s)?;
                    ok = w == tr;
                    json["oracle"] = w.to_json();
                    json["agree"] = json!(ok);
                    tsv.push_str(&format!("oracle\t{w}\n"));
                }
                Ok(Output { json, tsv, ok })
            }
            Command::Pi1 => {
                let g = self.group()?;
                let (p, _) = kottwitz::pi1(&g.datum)?;
                let (c, _) = kottwitz::pi1_coinvariants(&g.datum, &g.theta)?;
                let json = json!({"pi1": p.to_json(), "pi1_coinvariants": c.to_json(), "display": p.to_string(), "display_coinvariants": c.to_string()});
                Ok(Output::new(json, format!("pi1\t{p}\npi1_coinvariants\t{c}\n")))
            }
            Command::Kappa => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let b = kottwitz::basic_class_of(&g.datum, &g.theta, &mu)?;
                Ok(Output::new(json!({"mu": mu, "basic_class": b.to_json()}), format!("{}\t{}\n", b.group, show(&b.element))))
            }
            Command::Sign { base } => {
                let g = self.group()?;
                let raw = self.cli.mu.as_deref().ok_or_else(|| usage("--mu is required"))?;
                let mu = rational_vec(raw, "mu")?;
                let base = base.as_deref().map(|b| rational_vec(b, "base")).transpose()?;
                let (l, r) = kottwitz::sign_identity(&g.datum, &mu, base.as_deref())?;
                let mu_s: Vec<String> = mu.iter().map(format_rational).collect();
                Ok(Output {
                    json: json!({"mu": mu_s, "lhs": l, "rhs": r, "pass": l == r}),
                    tsv: format!("lhs\t{l}\nrhs\t{r}\n"),
                    ok: l == r,
                })
            }
            Command::Dimension => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let d = kottwitz::shtuka_dimension(&g.datum, &mu)?;
                Ok(Output::new(json!({"mu": mu, "dimension": d}), format!("{d}\n")))
            }
            Command::Kernel => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let mut kernels = Vec::new();
                let mut tsv = String::new();
                for t in self.tori(&g)? {
                    let k = transfer::transfer_kernel(&g.datum, &mu, &t)?;
                    for (nu, m) in &k.values {
                        tsv.push_str(&format!("{}\t{}\t{m}\n", t.id(), show(nu)));
                    }
                    let mut v = k.to_json();
                    v["elliptic"] = json!(t.is_elliptic());
                    kernels.push(v);
                }
                Ok(Output::new(json!({"mu": mu, "kernels": kernels}), tsv))
            }
            Command::Transfer { input, side } => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let side = match side {
                    SideArg::G => Side::G,
                    SideArg::J => Side::J,
                };
                let f = ClassFunction::from_json(&load_json(input)?, side)?;
                let h = HeckeTransfer::new(&g.datum, &g.theta, &mu, &self.tori(&g)?)?;
                let out = match f.side() {
                    Side::G => h.g_to_j(&f)?,
                    Side::J => h.j_to_g(&f)?,
                };
                let tsv = out
                    .iter()
                    .map(|(p, v)| {
                        let nu = p.nu.as_ref().map(|n| show(n)).unwrap_or_default();
                        format!("{}\t{}\t{nu}\t{}\n", p.torus, p.label, format_rational(v))
                    })
                    .collect();
                Ok(Output::new(json!({"side": out.side().name(), "function": out.to_json()}), tsv))
            }
            Command::Euler { levi } => {
                let g = self.group()?;
                let p = match levi {
                    Some(l) => {
                        let nodes: Vec<usize> = serde_json::from_str(l).map_err(|e| usage(format!("--levi: {e}")))?;
                        if nodes.contains(&0) {
                            return Err(usage("--levi nodes are one-based"));
                        }
                        ParabolicType::new(&g.datum, nodes.iter().map(|i| i - 1).collect())?
                    }
                    None => ParabolicType::of_cochar(&g.datum, &self.mu(&g)?)?,
                };
                let chi = lefschetz::flag_euler_characteristic(&g.datum, &p)?;
                let nodes: Vec<usize> = p.levi_nodes().iter().map(|i| i + 1).collect();
                Ok(Output::new(json!({"levi": nodes, "euler": bigint_json(&chi)}), format!("{chi}\n")))
            }
            Command::Lefschetz => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let r = lefschetz::lefschetz_global_check(&g.datum, &mu)?;
                Ok(Output { json: r.to_json(), tsv: report_tsv(&r), ok: r.passes() })
            }
            Command::ConvolveFp { nu } => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let nu = int_vec(nu, "nu")?;
                let r = lefschetz::convolution_fixed_points(&g.datum, &mu, &nu)?;
                Ok(Output { json: r.to_json(), tsv: report_tsv(&r), ok: r.passes() })
            }
            Command::Hom { centralizer, delta } => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let s = AbelianCentralizer::from_json(&load_json(centralizer)?)?;
                let delta = char_vec(delta, "delta")?;
                let h = spectral::hom_multiplicity(&g.datum, &mu, &s, &delta)?;
                let a = spectral::averaging_multiplicity(&g.datum, &mu, &s, &delta)?;
                let ok = BigRational::from_integer(h.clone()) == a;
                Ok(Output {
                    json: json!({"mu": mu, "delta": delta, "hom": bigint_json(&h), "averaging": format_rational(&a), "agree": ok}),
                    tsv: format!("hom\t{h}\naveraging\t{}\n", format_rational(&a)),
                    ok,
                })
            }
            Command::Rhs { centralizer, packet, rho } => {
                let g = self.group()?;
                let mu = self.mu(&g)?;
                let s = AbelianCentralizer::from_json(&load_json(centralizer)?)?;
                let packet = PacketDatum::from_json(&s, &load_json(packet)?)?;
                let rho = char_vec(rho, "rho")?;
                let rhs = spectral::kottwitz_rhs(&g.datum, &mu, &s, &packet, &rho)?;
                let d = kottwitz::shtuka_dimension(&g.datum, &mu)?;
                let tsv = rhs.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect();
                Ok(Output::new(json!({"mu": mu, "d": d, "rhs": spectral::rhs_to_json(&rhs)}), tsv))
            }
            Command::Check { timings } => {
                let suite = self.cli.suite.clone().unwrap_or_else(|| "all".into());
                self.check(&suite, *timings)
            }
            Command::CheckSpectral { timings } => self.check("spectral", *timings),
        }
    }

    fn describe(&self) -> Res<Output> {
        let g = self.group()?;
        let d = &g.datum;
        let (p, _) = kottwitz::pi1(d)?;
        let weyl = match d.weyl_order() {
            Ok(n) => json!(n),
            Err(Error::CostGuard { .. }) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        let tori: Vec<Value> = match g.torus_catalog() {
            Ok(ts) => ts.iter().map(|t| t.to_json()).collect(),
            Err(Error::CostGuard { .. }) => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        let perm: Vec<usize> = g.theta.permutation().iter().map(|i| i + 1).collect();
        let json = json!({
            "name": d.name(),
            "rank": d.rank(),
            "semisimple_rank": d.semisimple_rank(),
            "cartan": d.cartan(),
            "simple_roots": d.simple_roots(),
            "simple_coroots": d.simple_coroots(),
            "positive_coroots": d.positive_coroots().collect::<Vec<_>>(),
            "two_rho": d.two_rho(),
            "two_rho_check": d.two_rho_check(),
            "weyl_order": weyl,
            "pi1": p.to_string(),
            "theta": perm,
            "tori": tori,
        });
        let mut tsv = format!(
            "name\t{}\nrank\t{}\nsemisimple_rank\t{}\npositive_roots\t{}\nweyl_order\t{}\npi1\t{p}\n",
            d.name(),
            d.rank(),
            d.semisimple_rank(),
            d.num_positive_roots(),
            json["weyl_order"]
        );
        for t in &tori {
            tsv.push_str(&format!("torus\t{}\t{}\n", t["torus"].as_str().unwrap_or(""), t["elliptic"]));
        }
        Ok(Output::new(json, tsv))
    }

    fn check(&self, suite: &str, timings: bool) -> Res<Output> {
        let groups = self.cli.group.iter().map(|g| load_group(g)).collect::<Res<Vec<_>>>()?;
        let seed = self.cli.seed.unwrap_or(checks::DEFAULT_SEED);
        if !checks::SUITES.contains(&suite) {
            return Err(usage(format!("unknown suite `{suite}`; known: {}", checks::SUITES.join(", "))));
        }
        let report: CheckReport = checks::run_suite(suite, &groups, seed)?;
        Ok(Output { json: report.to_json(timings), tsv: report.to_tsv(timings), ok: report.pass() })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let ctx = Ctx { cli };
    match ctx.run() {
        Ok(out) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON serializes")),
                Format::Tsv => print!("{}", out.tsv),
            }
            ExitCode::from(if out.ok { 0 } else { 2 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e @ Error::CostGuard { .. })) => {
            eprintln!("refused: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
