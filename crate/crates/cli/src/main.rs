use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use thompson_core::construct::{prop_finite_data, prop_infinite_pipeline, FiniteCase};
use thompson_core::core2::{build_core_of_maps, is_generation_graph};
use thompson_core::golan::{generates_f, Verdict, DEFAULT_DEPTH};
use thompson_core::groupcalc::{order_of, rotation_number, torsion_rep, x_n, zeta, Order, DEFAULT_ORDER_BOUND};
use thompson_core::plmap::PlMapJson;
use thompson_core::repro::{self, SCHEMA};
use thompson_core::{Carrier, Dyadic, Error, Exec, PLMap, TreePair};

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Dot,
}

/// Exact computations in Thompson's groups F and T.
///
/// Elements are tree pairs such as "(00,01,10,11)->(0,100,101,11)" or one of
/// the names zeta, x0, x1, x<n>, identity, kappa0, kappa1, kappa1-c,
/// kappa1-tau, case-a-alpha, case-b-alpha, case-c-alpha, torsion:<n>,
/// rot:<dyadic>.
#[derive(Debug, Parser)]
#[command(name = "thompson", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    output: Output,
    /// Word length bound for the witness search.
    #[arg(long, default_value_t = DEFAULT_DEPTH, global = true, value_parser = clap::value_parser!(usize))]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_ORDER_BOUND, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    order_bound: u64,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Image of a dyadic point.
    Eval {
        element: String,
        point: String,
    },
    /// Product of the elements, left to right.
    Compose {
        #[arg(required = true)]
        elements: Vec<String>,
        /// Append the inverse of the first element.
        #[arg(long)]
        with_inverse_of_self: bool,
    },
    Inverse {
        element: String,
    },
    /// `by^-1 element by`.
    Conjugate {
        element: String,
        #[arg(long)]
        by: String,
    },
    /// Stallings core graph of elements of F.
    Core {
        #[arg(required = true)]
        elements: Vec<String>,
        /// Also report the class counts before and after coarsening.
        #[arg(long)]
        stages: bool,
    },
    /// Decide whether elements of F generate F.
    Generates {
        #[arg(required = true)]
        elements: Vec<String>,
    },
    Order {
        element: String,
    },
    Rotation {
        element: String,
    },
    /// The infinite-order construction for alpha and zeta.
    Pipeline {
        alpha: String,
        zeta: String,
        /// Base point in the support of alpha.
        #[arg(long)]
        a: Option<String>,
    },
    /// Reproduction suites: figures, case-a, case-b, case-c, standard,
    /// prop-infinite, conjugators, factorisations, schedules, all.
    Repro {
        #[arg(default_value = "all")]
        suites: Vec<String>,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn named(name: &str) -> Option<std::result::Result<PLMap, Error>> {
    let m = match name {
        "zeta" | "ζ" | "kappa0" | "κ0" | "κ₀" => zeta(),
        "identity" | "id" => PLMap::identity(Carrier::Interval),
        "case-a-alpha" => PLMap::rotation(&Dyadic::q(1, 2)),
        "case-b-alpha" => thompson_core::construct::case_b_alpha(),
        "case-c-alpha" => return Some(torsion_rep(5)),
        "kappa1" | "κ1" | "κ₁" => return Some(prop_finite_data(FiniteCase::A).map(|d| d.kappa1)),
        "kappa1-c" => return Some(prop_finite_data(FiniteCase::C(5)).map(|d| d.kappa1)),
        "kappa1-tau" => return Some(prop_finite_data(FiniteCase::C(5)).map(|d| d.kappa_tau.expect("case c").1)),
        _ => {
            if let Some(n) = name.strip_prefix("torsion:") {
                return Some(
                    n.parse::<usize>()
                        .map_err(|_| Error::Parse { pos: 8, msg: format!("bad order {n:?}") })
                        .and_then(torsion_rep),
                );
            }
            if let Some(a) = name.strip_prefix("rot:") {
                return Some(a.parse::<Dyadic>().map(|a| PLMap::rotation(&a)).map_err(|e| shift_pos(e, 4)));
            }
            let n = name.strip_prefix('x')?;
            let n: usize = n.parse().ok()?;
            x_n(n)
        }
    };
    Some(Ok(m))
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        e => e,
    }
}

fn element(s: &str) -> Result<PLMap, Failure> {
    if let Some(m) = named(s.trim()) {
        return Ok(m?);
    }
    Ok(s.parse::<TreePair>()?.to_plmap())
}

fn elements(v: &[String]) -> Result<Vec<PLMap>, Failure> {
    v.iter().map(|s| element(s)).collect()
}

fn render(f: &PLMap) -> String {
    TreePair::from_plmap(f).to_string()
}

fn element_json(f: &PLMap) -> Value {
    json!({ "tree_pair": render(f), "map": PlMapJson::from(f) })
}

fn emit(out: Output, text: String, value: Value) {
    match out {
        Output::Json => {
            let mut v = value;
            if let Value::Object(m) = &mut v {
                m.insert("schema".into(), json!(SCHEMA));
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
        _ => println!("{text}"),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = Exec::default();
    let out = cli.output;
    if out == Output::Dot && !matches!(cli.cmd, Cmd::Core { .. }) {
        return Err(Failure::Usage("--output dot is only available for `core`".into()));
    }
    match cli.cmd {
        Cmd::Eval { element: e, point } => {
            let f = element(&e)?;
            let x: Dyadic = point.parse()?;
            let y = if f.carrier() == Carrier::Interval && x == Dyadic::one() { x.clone() } else { f.eval(&x.fract()) };
            emit(out, y.to_string(), json!({ "element": render(&f), "point": x, "image": y }));
        }
        Cmd::Compose { elements: es, with_inverse_of_self } => {
            let mut fs = elements(&es)?;
            if with_inverse_of_self {
                fs.push(fs[0].inverse());
            }
            let carrier =
                if fs.iter().all(|f| f.carrier() == Carrier::Interval) { Carrier::Interval } else { Carrier::Circle };
            let p = PLMap::product(carrier, &fs);
            emit(out, render(&p), element_json(&p));
        }
        Cmd::Inverse { element: e } => {
            let f = element(&e)?.inverse();
            emit(out, render(&f), element_json(&f));
        }
        Cmd::Conjugate { element: e, by } => {
            let f = element(&e)?.conjugate(&element(&by)?);
            emit(out, render(&f), element_json(&f));
        }
        Cmd::Core { elements: es, stages } => {
            let fs = elements(&es)?;
            let core = build_core_of_maps(&fs)?;
            for w in &core.warnings {
                eprintln!("warning: {w}");
            }
            let dot = core.graph.to_dot();
            let (initial, fin) = (core.initial.count(), core.fixpoint.count());
            match out {
                Output::Dot => print!("{dot}"),
                Output::Text => {
                    if stages {
                        println!("{initial} initial classes, {fin} final classes");
                    }
                    print!("{dot}");
                }
                Output::Json => emit(
                    out,
                    String::new(),
                    json!({
                        "initial_classes": initial,
                        "final_classes": fin,
                        "criterion_graph": is_generation_graph(&core.graph),
                        "dot": dot,
                        "warnings": core.warnings,
                    }),
                ),
            }
        }
        Cmd::Generates { elements: es } => {
            let fs = elements(&es)?;
            let v = generates_f(&fs, cli.depth, exec)?;
            let mut text = match v.verdict {
                Verdict::Yes => "yes".to_string(),
                Verdict::No => "no".to_string(),
                Verdict::Unknown => "unknown".to_string(),
            };
            if let Some(c) = &v.failed_condition {
                text.push_str(&format!(" ({c})"));
            }
            if let Some(w) = &v.witnesses {
                text.push_str(&format!(
                    "\nmu = {}\nnu = {}\nxi = {}, x = {}",
                    w.mu.render(&es),
                    w.nu.render(&es),
                    w.xi.render(&es),
                    w.x
                ));
            }
            emit(out, text, serde_json::to_value(&v).expect("serializable"));
        }
        Cmd::Order { element: e } => {
            let f = element(&e)?;
            let o = order_of(&f, cli.order_bound);
            let text = match o {
                Order::Finite(n) => format!("finite {n}"),
                Order::Infinite => "infinite".into(),
                Order::Unknown(b) => format!("unknown (no verdict within {b} powers)"),
            };
            emit(out, text, json!({ "element": render(&f), "order": o }));
        }
        Cmd::Rotation { element: e } => {
            let f = element(&e)?;
            let r = rotation_number(&f, cli.order_bound).ok_or_else(|| {
                Failure::Core(Error::Precondition(
                    "rotation numbers are only computed for finite-order elements".into(),
                ))
            })?;
            emit(out, r.to_string(), json!({ "element": render(&f), "rotation_number": r.to_string() }));
        }
        Cmd::Pipeline { alpha, zeta: z, a } => {
            let (alpha, z) = (element(&alpha)?, element(&z)?);
            let a = a.map(|s| s.parse::<Dyadic>()).transpose()?;
            let st = prop_infinite_pipeline(&alpha, &z, a.as_ref())?;
            let mut text = format!("a = {}, c = {}, d = {}\n", st.a, st.c, st.d);
            if st.alpha_inverted {
                text.push_str("alpha replaced by its inverse\n");
            }
            if st.zeta_inverted {
                text.push_str("zeta replaced by its inverse\n");
            }
            text.push_str(&format!("gamma = {}\n", render(&st.gamma)));
            for c in &st.report.checks {
                text.push_str(&format!("[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name));
                if let Some(d) = &c.detail {
                    text.push_str(&format!(" ({d})"));
                }
                text.push('\n');
            }
            let value = json!({
                "a": st.a,
                "c": st.c.to_string(),
                "d": st.d.to_string(),
                "alpha_inverted": st.alpha_inverted,
                "zeta_inverted": st.zeta_inverted,
                "gamma": render(&st.gamma),
                "passed": st.report.all_passed(),
                "checks": st.report,
            });
            emit(out, text.trim_end().to_string(), value);
            if !st.report.all_passed() {
                return Err(Failure::Mismatch("pipeline identities failed".into()));
            }
        }
        Cmd::Repro { suites } => {
            let names: Vec<&str> = suites.iter().map(String::as_str).collect();
            let rep = repro::run(&names, cli.seed, exec).map_err(Failure::Usage)?;
            match out {
                Output::Json => println!("{}", serde_json::to_string_pretty(&rep).expect("serializable")),
                _ => print!("{}", rep.to_text()),
            }
            if !rep.passed {
                return Err(Failure::Mismatch("reproduction mismatch".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e @ Error::Parse { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PRECONDITION)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_MISMATCH)
        }
    }
}
