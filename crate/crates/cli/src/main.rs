use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use fixlogic::differential::files::{parse_field, parse_triples};
use fixlogic::differential::{nabla_instance, rk4_trajectory, tba_rewrite, Ball, Norm, NumConfig, ReachTriple, Region};
use fixlogic::proofkit::{
    check_proof, expand_derived, parse_proof, parse_theory, print_formula, print_proof, print_theory, Builder, Calculus, DeriveError,
    DerivedRule, Theory,
};
use fixlogic::selftest::{self, Config as SelfConfig};
use fixlogic::semantics::{eval_gl, eval_mu, Caps, FiniteStructure, StateSet, Valuation};
use fixlogic::surface::{
    format_state, parse_action, parse_game, parse_gl, parse_mu, parse_structure, parse_valuation, print_gl, print_mu,
};
use fixlogic::syntax::{Action, MuFormula, PVar};
use fixlogic::translate::{
    eliminate_assignments, eliminate_assignments_gl, eliminate_modalities, eval_flat, flat, random_to_ode, sharp,
};

#[derive(Parser)]
#[command(name = "fixlogic", version, about = "Fixpoint logic and game logic toolkit")]
struct Cli {
    /// JSON file with `caps`, `norm`, `grid` and `slack` settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Logic {
    Mu,
    Gl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Sharp,
    Flat,
    Roundtrip,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    AssignToRandom,
    RandomToOde,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Formula,
    Proof,
    Theory,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Intersection,
    SeqDual,
    MonoMu,
    MonoNu,
    BoxMono,
    ReplaceLoop,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a formula and print it canonically.
    Parse {
        #[arg(long, value_enum)]
        logic: Logic,
        text: String,
    },
    /// Print a formula, proof script or theory file canonically (`-` reads stdin).
    Print {
        #[arg(long, value_enum, default_value = "proof")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "mu")]
        logic: Logic,
        file: PathBuf,
    },
    /// List the states of a structure where a formula holds.
    Eval {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        valuation: Option<PathBuf>,
        #[arg(long, value_enum)]
        logic: Logic,
        #[arg(long)]
        formula: String,
    },
    /// Translate between game logic and the mu-calculus.
    Translate {
        #[arg(long, value_enum)]
        dir: Direction,
        #[arg(long = "in")]
        input: String,
        /// For `roundtrip`, compare denotations on this structure.
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Eliminate modalities from a formula.
    Reduce {
        #[arg(long, value_enum)]
        strategy: Strategy,
        #[arg(long, value_enum, default_value = "mu")]
        logic: Logic,
        #[arg(long = "in")]
        input: String,
    },
    /// Check a proof script.
    Prove {
        script: PathBuf,
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Expand a derived rule instance into a checked proof script.
    Derive(DeriveArgs),
    /// Print the differential-induction instance for an ODE and postcondition.
    Nabla {
        #[arg(long)]
        ode: String,
        #[arg(long)]
        post: String,
    },
    /// Rewrite evolution-domain constraints away.
    Tba {
        #[arg(long = "in")]
        input: String,
    },
    /// Refute reachability triples or certify a trajectory against a field.
    Reach(ReachArgs),
    /// Run the self-checks at the given scale.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        /// Run only these checks.
        #[arg(long)]
        only: Vec<u8>,
    },
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(value_enum)]
    rule: Rule,
    /// Script whose lines the premises refer to; the expansion is appended.
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long)]
    theory: Option<PathBuf>,
    #[arg(long)]
    g1: Option<String>,
    #[arg(long)]
    g2: Option<String>,
    /// Postcondition for `intersection` and `seq-dual`, loop goal for `replace-loop`.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    premise: Option<usize>,
    #[arg(long)]
    var: Option<String>,
    #[arg(long)]
    action: Option<String>,
    #[arg(long)]
    at_g2: Option<usize>,
    #[arg(long)]
    at_g1: Option<usize>,
}

#[derive(Args)]
struct ReachArgs {
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    radius: f64,
    /// One triple as `x1,..;y1,..;t`.
    #[arg(long)]
    triple: Option<String>,
    /// CSV of labelled triples; fails when a label disagrees.
    #[arg(long)]
    triples: Option<PathBuf>,
    /// Certify the RK4 trajectory from this start point (`x1,..`).
    #[arg(long)]
    start: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    time: f64,
    #[arg(long, default_value_t = 6)]
    depth: u32,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    caps: Option<CapsConfig>,
    norm: Option<String>,
    grid: Option<usize>,
    slack: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CapsConfig {
    max_domain: Option<usize>,
    max_support: Option<usize>,
    max_states: Option<usize>,
}

/// Usage and input errors exit with 2, failed checks with 1.
enum Failure {
    Usage(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Usage(e)
    }
}

type Out = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let res = load_config(cli.config.as_deref()).map_err(Failure::Usage).and_then(|cfg| run(cli.cmd, &cfg));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{}", msg.trim_end());
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        Some(p) => serde_json::from_str(&read(p)?).with_context(|| format!("reading config {}", p.display())),
        None => Ok(FileConfig::default()),
    }
}

fn read(p: &Path) -> Result<String> {
    if p.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn caps(cfg: &FileConfig, base: Caps) -> Caps {
    let mut c = base;
    if let Some(k) = &cfg.caps {
        c.max_domain = k.max_domain.unwrap_or(c.max_domain);
        c.max_support = k.max_support.unwrap_or(c.max_support);
        c.max_states = k.max_states.unwrap_or(c.max_states);
    }
    c
}

fn num_config(cfg: &FileConfig) -> Result<NumConfig> {
    let mut n = NumConfig::default();
    match cfg.norm.as_deref() {
        None | Some("euclidean") => {}
        Some("max") => n.norm = Norm::Max,
        Some(other) => bail!("unknown norm {other}, expected euclidean or max"),
    }
    n.grid = cfg.grid.unwrap_or(n.grid);
    n.slack = cfg.slack.unwrap_or(n.slack);
    Ok(n)
}

fn load_structure(p: &Path, cfg: &FileConfig) -> Result<FiniteStructure> {
    let mut s = parse_structure(&read(p)?).map_err(|e| anyhow!("{}: {e}", p.display()))?;
    s.caps = caps(cfg, s.caps);
    Ok(s)
}

fn mu(text: &str) -> Result<MuFormula> {
    parse_mu(text).map_err(|e| anyhow!("{e}"))
}

fn list_states(s: &FiniteStructure, d: &StateSet) {
    for i in d.iter() {
        println!("{}", format_state(s, &s.state(i)));
    }
    println!("{} of {} states", d.len(), d.universe());
}

fn run(cmd: Cmd, cfg: &FileConfig) -> Out {
    match cmd {
        Cmd::Parse { logic, text } => {
            let shown = match logic {
                Logic::Mu => print_mu(&mu(&text)?),
                Logic::Gl => print_gl(&parse_gl(&text).map_err(|e| anyhow!("{e}"))?),
            };
            println!("{shown}");
            println!("OK");
        }
        Cmd::Print { kind, logic, file } => {
            let text = read(&file)?;
            match kind {
                Kind::Formula => {
                    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                        match logic {
                            Logic::Mu => println!("{}", print_mu(&mu(line)?)),
                            Logic::Gl => println!("{}", print_gl(&parse_gl(line).map_err(|e| anyhow!("{e}"))?)),
                        }
                    }
                }
                Kind::Proof => print!("{}", print_proof(&parse_proof(&text).map_err(|e| anyhow!("{e}"))?)),
                Kind::Theory => {
                    let (calc, th) = parse_theory(&text).map_err(|e| anyhow!("{e}"))?;
                    print!("{}", print_theory(calc, &th));
                }
            }
        }
        Cmd::Eval { structure, valuation, logic, formula } => {
            let s = load_structure(&structure, cfg)?;
            let om = match valuation {
                Some(p) => parse_valuation(&read(&p)?, &s).map_err(|e| anyhow!("{}: {e}", p.display()))?,
                None => Valuation::new(),
            };
            let d = match logic {
                Logic::Mu => eval_mu(&s, &om, &mu(&formula)?),
                Logic::Gl => eval_gl(&s, &om, &parse_gl(&formula).map_err(|e| anyhow!("{e}"))?),
            }
            .map_err(|e| anyhow!("{e}"))?;
            list_states(&s, &d);
        }
        Cmd::Translate { dir, input, structure } => translate(dir, &input, structure.as_deref(), cfg)?,
        Cmd::Reduce { strategy, logic, input } => {
            let shown = match (strategy, logic) {
                (Strategy::AssignToRandom, Logic::Mu) => {
                    print_mu(&eliminate_assignments(&mu(&input)?).map_err(|e| anyhow!("{e}"))?)
                }
                (Strategy::AssignToRandom, Logic::Gl) => {
                    print_gl(&eliminate_assignments_gl(&parse_gl(&input).map_err(|e| anyhow!("{e}"))?))
                }
                (Strategy::RandomToOde, Logic::Mu) => {
                    let f = mu(&input)?;
                    let g = eliminate_modalities(&f, &|a| matches!(a, Action::Random(_)), &mut random_to_ode)
                        .map_err(|e| anyhow!("{e}"))?;
                    print_mu(&g)
                }
                (Strategy::RandomToOde, Logic::Gl) => {
                    return Err(anyhow!("random-to-ode is only available for the mu-calculus").into())
                }
            };
            println!("{shown}");
        }
        Cmd::Prove { script, theory } => {
            let s = parse_proof(&read(&script)?).map_err(|e| anyhow!("{}: {e}", script.display()))?;
            let th = load_theory(theory.as_deref())?;
            let v = check_proof(&s, &th);
            if !v.ok() {
                return Err(Failure::Check(v.to_string()));
            }
            let concl = s.conclusion().map(print_formula).unwrap_or_default();
            println!("OK {} lines: {concl}", s.lines.len());
        }
        Cmd::Derive(args) => derive(args)?,
        Cmd::Nabla { ode, post } => {
            let a = parse_action(&ode).map_err(|e| anyhow!("{e}"))?;
            let f = nabla_instance(&a, &mu(&post)?).map_err(|e| anyhow!("{e}"))?;
            println!("{}", print_mu(&f));
        }
        Cmd::Tba { input } => println!("{}", print_mu(&tba_rewrite(&mu(&input)?))),
        Cmd::Reach(args) => reach(args, cfg)?,
        Cmd::Selftest { seed, count, only } => {
            let sc = SelfConfig { seed, count };
            let ids: Vec<u8> = if only.is_empty() { selftest::CHECKS.iter().map(|c| c.0).collect() } else { only };
            let mut failed = 0;
            for id in ids {
                let o = selftest::run(id, sc).ok_or_else(|| anyhow!("no check with id {id}"))?;
                println!("{o}");
                failed += !o.passed as usize;
            }
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} checks failed")));
            }
        }
    }
    Ok(())
}

fn load_theory(p: Option<&Path>) -> Result<Theory> {
    match p {
        Some(p) => parse_theory(&read(p)?).map(|(_, th)| th).map_err(|e| anyhow!("{}: {e}", p.display())),
        None => Ok(Theory::default()),
    }
}

fn translate(dir: Direction, input: &str, structure: Option<&Path>, cfg: &FileConfig) -> Out {
    match dir {
        Direction::Sharp => println!("{}", print_mu(&sharp(&parse_gl(input).map_err(|e| anyhow!("{e}"))?))),
        Direction::Flat => println!("{}", print_gl(&flat(&mu(input)?).map_err(|e| anyhow!("{e}"))?)),
        Direction::Roundtrip => {
            let f = parse_gl(input).map_err(|e| anyhow!("{e}"))?;
            let back = flat(&sharp(&f)).map_err(|e| anyhow!("{e}"))?;
            println!("{}", print_gl(&back));
            if let Some(p) = structure {
                let s = load_structure(p, cfg)?;
                let om = Valuation::new();
                let want = eval_gl(&s, &om, &f).map_err(|e| anyhow!("{e}"))?;
                let got = eval_flat(&s, &om, &sharp(&f)).map_err(|e| anyhow!("{e}"))?;
                if want != got {
                    return Err(Failure::Check(format!(
                        "denotations differ: {} states before, {} after",
                        want.len(),
                        got.len()
                    )));
                }
                println!("same denotation on {} ({} states)", p.display(), want.len());
            }
        }
    }
    Ok(())
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("--{flag} is required for this rule"))
}

fn derive(a: DeriveArgs) -> Out {
    let theory = load_theory(a.theory.as_deref())?;
    let game = |s: Option<String>, flag: &str| -> Result<_> {
        parse_game(&need(s, flag)?).map_err(|e| anyhow!("--{flag}: {e}"))
    };
    let gl = |s: Option<String>| -> Result<_> { parse_gl(&need(s, "phi")?).map_err(|e| anyhow!("--phi: {e}")) };
    let calc = match a.rule {
        Rule::Intersection | Rule::SeqDual | Rule::ReplaceLoop => Calculus::Gl,
        _ => Calculus::Mu,
    };
    let mut b = match &a.script {
        Some(p) => Builder::from_script(parse_proof(&read(p)?).map_err(|e| anyhow!("{}: {e}", p.display()))?),
        None => Builder::new(calc),
    };
    let rule = match a.rule {
        Rule::Intersection => DerivedRule::Intersection { g1: game(a.g1, "g1")?, g2: game(a.g2, "g2")?, phi: gl(a.phi)? },
        Rule::SeqDual => DerivedRule::SeqDual { g1: game(a.g1, "g1")?, g2: game(a.g2, "g2")?, phi: gl(a.phi)? },
        Rule::MonoMu => DerivedRule::MonoMu { premise: need(a.premise, "premise")?, x: PVar::new(need(a.var, "var")?) },
        Rule::MonoNu => DerivedRule::MonoNu { premise: need(a.premise, "premise")?, x: PVar::new(need(a.var, "var")?) },
        Rule::BoxMono => DerivedRule::BoxMono {
            premise: need(a.premise, "premise")?,
            action: parse_action(&need(a.action, "action")?).map_err(|e| anyhow!("--action: {e}"))?,
        },
        Rule::ReplaceLoop => DerivedRule::ReplaceInLoop {
            g1: game(a.g1, "g1")?,
            g2: game(a.g2, "g2")?,
            rho: gl(a.phi)?,
            at_g2: need(a.at_g2, "at-g2")?,
            at_g1: need(a.at_g1, "at-g1")?,
        },
    };
    match expand_derived(&mut b, &rule, &theory) {
        Ok(_) => {
            print!("{}", print_proof(b.script()));
            Ok(())
        }
        Err(DeriveError::Check(msg)) => Err(Failure::Check(msg)),
        Err(e) => Err(anyhow!("{e}").into()),
    }
}

fn point(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|v| v.trim().parse::<f64>().with_context(|| format!("bad number {v:?}"))).collect()
}

fn reach(a: ReachArgs, cfg: &FileConfig) -> Out {
    let f = parse_field(&read(&a.field)?).map_err(|e| anyhow!("{}: {e}", a.field.display()))?;
    let ball = Ball::new(a.radius).map_err(|e| anyhow!("{e}"))?;
    let region = Region::new(&f, ball, num_config(cfg)?).map_err(|e| anyhow!("{e}"))?;
    let mut bad = Vec::new();
    if let Some(t) = &a.triple {
        let parts: Vec<&str> = t.split(';').collect();
        let [x, y, time] = parts[..] else {
            return Err(anyhow!("--triple must look like x1,..;y1,..;t").into());
        };
        let p = ReachTriple { x: point(x)?, y: point(y)?, t: time.trim().parse().context("bad time")? };
        let refuted = region.refutes(&p).map_err(|e| anyhow!("{e}"))?;
        println!("{}", if refuted { "refuted" } else { "not refuted" });
    }
    if let Some(p) = &a.triples {
        for (i, t) in parse_triples(&read(p)?, f.dim()).map_err(|e| anyhow!("{e}"))?.iter().enumerate() {
            let refuted = region.refutes(&t.triple).map_err(|e| anyhow!("{e}"))?;
            let label = if t.reachable { "reachable" } else { "unreachable" };
            println!("row {}: {label}, {}", i + 1, if refuted { "refuted" } else { "not refuted" });
            if refuted == t.reachable {
                bad.push(i + 1);
            }
        }
    }
    if let Some(s) = &a.start {
        let cert = rk4_trajectory(&f, &point(s)?, a.time, a.depth).map_err(|e| anyhow!("{e}"))?;
        match region.certify(&cert).map_err(|e| anyhow!("{e}"))? {
            Ok(()) => println!("certified at depth {}: endpoint {:?}", a.depth, cert.samples.last().unwrap()),
            Err((level, k)) => return Err(Failure::Check(format!("not certified: level {level}, interval {k}"))),
        }
    }
    if a.triple.is_none() && a.triples.is_none() && a.start.is_none() {
        return Err(anyhow!("give --triple, --triples or --start").into());
    }
    if !bad.is_empty() {
        return Err(Failure::Check(format!("labels disagree on rows {bad:?}")));
    }
    Ok(())
}
