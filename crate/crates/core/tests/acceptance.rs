//! One line per acceptance criterion. Seed and count come from
//! `ACCEPTANCE_SEED` and `ACCEPTANCE_COUNT` when set.

use fixlogic::selftest::{run_all, Config};

fn main() {
    let env = |k: &str| std::env::var(k).ok().and_then(|v| v.parse().ok());
    let mut cfg = Config::default();
    if let Some(s) = env("ACCEPTANCE_SEED") {
        cfg.seed = s as u64;
    }
    if let Some(c) = env("ACCEPTANCE_COUNT") {
        cfg.count = c;
    }
    let outcomes = run_all(cfg);
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria pass", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
