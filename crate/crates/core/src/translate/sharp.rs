use std::collections::BTreeSet;

use crate::binding::{free_pvar_bases_gl, Fresh};
use crate::logic::{bar, free_pvars_game, rank_gl};
use crate::syntax::*;

/// Names for the variables bound at repetitions.
enum Supply {
    Fresh(Fresh),
    /// Two reserved names, with the general supply as a fallback.
    Two([String; 2], Fresh),
}

fn pvar_bases_gl(f: &GlFormula) -> BTreeSet<String> {
    free_pvar_bases_gl(f)
}

/// The embedding of game logic into the mu-calculus.
pub fn sharp(f: &GlFormula) -> MuFormula {
    sharp_avoiding(f, &BTreeSet::new())
}

/// As [`sharp`], with bound variables also avoiding `avoid`.
pub fn sharp_avoiding(f: &GlFormula, avoid: &BTreeSet<String>) -> MuFormula {
    let used = pvar_bases_gl(f).into_iter().chain(avoid.iter().cloned());
    rec(f, &mut Supply::Fresh(Fresh::new(used)))
}

/// Variant that reuses two bound variables wherever possible.
pub fn sharp_two_var(f: &GlFormula) -> MuFormula {
    let mut fresh = Fresh::new(pvar_bases_gl(f));
    let names = [fresh.name("X"), fresh.name("X")];
    rec(f, &mut Supply::Two(names, fresh))
}

fn pick(supply: &mut Supply, body: &GlFormula, g: &Game) -> PVar {
    match supply {
        Supply::Fresh(fresh) => fresh.pvar(),
        Supply::Two(names, fresh) => {
            let mut busy = free_pvar_bases_gl(body);
            busy.extend(free_pvars_game(g).into_iter().map(|x| x.base));
            match names.iter().find(|n| !busy.contains(*n)) {
                Some(n) => PVar::new(n.clone()),
                None => fresh.pvar(),
            }
        }
    }
}

fn rec(f: &GlFormula, supply: &mut Supply) -> MuFormula {
    let sub = |g: &GlFormula, supply: &mut Supply| {
        debug_assert!(rank_gl(g) < rank_gl(f));
        rec(g, supply)
    };
    match f {
        GlFormula::Lit(l) => MuFormula::Lit(l.clone()),
        GlFormula::Var(x) => MuFormula::Var(x.clone()),
        GlFormula::Not(g) => bar(&sub(g, supply)),
        GlFormula::Or(a, b) => MuFormula::or(sub(a, supply), sub(b, supply)),
        GlFormula::Diamond(g, phi) => match &**g {
            Game::Act(a) => MuFormula::dia(a.clone(), sub(phi, supply)),
            Game::Test(psi) => MuFormula::and(sub(psi, supply), sub(phi, supply)),
            Game::Choice(a, b) => MuFormula::or(
                sub(&GlFormula::dia((**a).clone(), (**phi).clone()), supply),
                sub(&GlFormula::dia((**b).clone(), (**phi).clone()), supply),
            ),
            Game::Seq(a, b) => {
                let inner = GlFormula::dia((**b).clone(), (**phi).clone());
                sub(&GlFormula::dia((**a).clone(), inner), supply)
            }
            Game::Dual(a) => {
                let neg = GlFormula::dia((**a).clone(), GlFormula::not((**phi).clone()));
                bar(&sub(&neg, supply))
            }
            Game::Repeat(a) => {
                let x = pick(supply, phi, a);
                let unfold =
                    GlFormula::or((**phi).clone(), GlFormula::dia((**a).clone(), GlFormula::Var(x.clone())));
                MuFormula::mu(x, sub(&unfold, supply))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_gl, print_mu};

    fn sh(s: &str) -> String {
        print_mu(&sharp(&parse_gl(s).unwrap()))
    }

    #[test]
    fn clauses() {
        assert_eq!(sh("<?p> q"), "p & q");
        assert_eq!(sh("<a*> p"), "mu X0. (p | <a> X0)");
        assert_eq!(sh("<a^d> p"), "[a] p");
        assert_eq!(sh("<a u b> p"), "<a> p | <b> p");
        assert_eq!(sh("<a; b> p"), "<a> <b> p");
    }

    #[test]
    fn fresh_names_avoid_input() {
        assert_eq!(sh("<a*> X0"), "mu X1. (X0 | <a> X1)");
    }

    #[test]
    fn two_variable_mode_reuses_names() {
        let f = parse_gl("<(a*)*; (b*)*; c*> p").unwrap();
        let two = sharp_two_var(&f);
        let names = crate::logic::all_pvar_bases_mu(&two);
        assert!(names.len() <= 2, "{}", print_mu(&two));
    }
}
