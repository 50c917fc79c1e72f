use std::collections::BTreeSet;

use crate::binding::{fresh_ovar, rename_ovar_mu, Fresh};
use crate::logic::{actions_mu, bar, free_ovars_gl, free_ovars_mu, free_pvar_bases_mu};
use crate::surface::print_action;
use crate::syntax::*;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("rewrite of {0} introduced free propositional variables")]
    FreePvars(String),
    #[error("rewrite of {0} left an eliminated action behind")]
    NotEliminated(String),
    #[error("no rewrite for {0}")]
    Unsupported(String),
}

/// Removes every modality whose action is in Λ, innermost first. `elim`
/// receives the action and its already reduced body and returns a formula
/// equivalent to the diamond. Boxes are reduced through their dual diamond.
pub fn eliminate_modalities<L, E>(f: &MuFormula, in_lambda: &L, elim: &mut E) -> Result<MuFormula, ReduceError>
where
    L: Fn(&Action) -> bool,
    E: FnMut(&Action, &MuFormula) -> Result<MuFormula, ReduceError>,
{
    Ok(match f {
        MuFormula::Lit(_) | MuFormula::Var(_) => f.clone(),
        MuFormula::Or(a, b) => {
            MuFormula::or(eliminate_modalities(a, in_lambda, elim)?, eliminate_modalities(b, in_lambda, elim)?)
        }
        MuFormula::And(a, b) => {
            MuFormula::and(eliminate_modalities(a, in_lambda, elim)?, eliminate_modalities(b, in_lambda, elim)?)
        }
        MuFormula::Diamond(a, g) => {
            let r = eliminate_modalities(g, in_lambda, elim)?;
            if in_lambda(a) {
                checked(a, r, in_lambda, elim)?
            } else {
                MuFormula::dia(a.clone(), r)
            }
        }
        MuFormula::Box(a, g) => {
            let r = eliminate_modalities(g, in_lambda, elim)?;
            if in_lambda(a) {
                bar(&checked(a, bar(&r), in_lambda, elim)?)
            } else {
                MuFormula::boxed(a.clone(), r)
            }
        }
        MuFormula::Mu(x, g) => MuFormula::mu(x.clone(), eliminate_modalities(g, in_lambda, elim)?),
        MuFormula::Nu(x, g) => MuFormula::nu(x.clone(), eliminate_modalities(g, in_lambda, elim)?),
    })
}

fn checked<L, E>(a: &Action, body: MuFormula, in_lambda: &L, elim: &mut E) -> Result<MuFormula, ReduceError>
where
    L: Fn(&Action) -> bool,
    E: FnMut(&Action, &MuFormula) -> Result<MuFormula, ReduceError>,
{
    let out = elim(a, &body)?;
    if !free_pvar_bases_mu(&out).is_subset(&free_pvar_bases_mu(&body)) {
        return Err(ReduceError::FreePvars(print_action(a)));
    }
    if actions_mu(&out).iter().any(in_lambda) {
        return Err(ReduceError::NotEliminated(print_action(a)));
    }
    Ok(out)
}

/// `<x := t> body` as `<y := *> (y = t & body[x<->y])` with `y` fresh for
/// the body, `t`, `x` and `avoid`.
pub fn assign_to_random(a: &Action, body: &MuFormula, avoid: &BTreeSet<OVar>) -> Result<MuFormula, ReduceError> {
    let Action::Assign(x, t) = a else {
        return Err(ReduceError::Unsupported(print_action(a)));
    };
    let mut used = avoid.clone();
    used.extend(free_ovars_mu(body));
    used.extend(t.vars());
    used.insert(x.clone());
    let y = fresh_ovar("y", &used);
    Ok(MuFormula::dia(
        Action::random(&y),
        MuFormula::and(MuFormula::Lit(Literal::eq(Term::var(&y), t.clone())), rename_ovar_mu(body, x, &y)),
    ))
}

/// Removes all deterministic assignments. Fresh variables avoid every
/// object variable of `f`.
pub fn eliminate_assignments(f: &MuFormula) -> Result<MuFormula, ReduceError> {
    let avoid = free_ovars_mu(f);
    eliminate_modalities(f, &|a| matches!(a, Action::Assign(..)), &mut |a, b| assign_to_random(a, b, &avoid))
}

/// `<x := *> body` as `<{x' = 1}> body | <{x' = -1}> body`.
pub fn random_to_ode(a: &Action, body: &MuFormula) -> Result<MuFormula, ReduceError> {
    let Action::Random(x) = a else {
        return Err(ReduceError::Unsupported(print_action(a)));
    };
    let flow = |t: Term| Action::Ode { eqs: vec![(x.clone(), t)], constraint: None };
    Ok(MuFormula::or(
        MuFormula::dia(flow(Term::cst("1")), body.clone()),
        MuFormula::dia(flow(Term::app("-", vec![Term::cst("1")])), body.clone()),
    ))
}

/// Replaces each action in Λ by the game `game_elim` gives for it.
pub fn gl_eliminate_actions<L, E>(f: &GlFormula, in_lambda: &L, game_elim: &mut E) -> GlFormula
where
    L: Fn(&Action) -> bool,
    E: FnMut(&Action) -> Game,
{
    match f {
        GlFormula::Lit(_) | GlFormula::Var(_) => f.clone(),
        GlFormula::Not(g) => GlFormula::Not(Box::new(gl_eliminate_actions(g, in_lambda, game_elim))),
        GlFormula::Or(a, b) => {
            GlFormula::or(gl_eliminate_actions(a, in_lambda, game_elim), gl_eliminate_actions(b, in_lambda, game_elim))
        }
        GlFormula::Diamond(g, b) => GlFormula::dia(
            game_eliminate(g, in_lambda, game_elim),
            gl_eliminate_actions(b, in_lambda, game_elim),
        ),
    }
}

fn game_eliminate<L, E>(g: &Game, in_lambda: &L, game_elim: &mut E) -> Game
where
    L: Fn(&Action) -> bool,
    E: FnMut(&Action) -> Game,
{
    match g {
        Game::Act(a) if in_lambda(a) => game_elim(a),
        Game::Act(_) => g.clone(),
        Game::Test(f) => Game::test(gl_eliminate_actions(f, in_lambda, game_elim)),
        Game::Choice(a, b) => {
            Game::choice(game_eliminate(a, in_lambda, game_elim), game_eliminate(b, in_lambda, game_elim))
        }
        Game::Seq(a, b) => Game::seq(game_eliminate(a, in_lambda, game_elim), game_eliminate(b, in_lambda, game_elim)),
        Game::Repeat(a) => Game::repeat(game_eliminate(a, in_lambda, game_elim)),
        Game::Dual(a) => Game::dual(game_eliminate(a, in_lambda, game_elim)),
    }
}

/// `x := t` as `x := *; ?x = t`, going through a fresh `y` when `t` mentions `x`.
pub fn assign_to_random_game(a: &Action, fresh: &mut Fresh) -> Game {
    let Action::Assign(x, t) = a else {
        return Game::act(a.clone());
    };
    let test = |v: &str, t: Term| Game::test(GlFormula::Lit(Literal::eq(Term::var(v), t)));
    if !t.mentions(x) {
        return Game::seq(Game::act(Action::random(x)), test(x, t.clone()));
    }
    let y = fresh.name("y");
    let g = Game::seq(Game::act(Action::random(&y)), test(&y, t.clone()));
    let g = Game::seq(g, Game::act(Action::random(x)));
    Game::seq(g, test(x, Term::var(&y)))
}

pub fn eliminate_assignments_gl(f: &GlFormula) -> GlFormula {
    let mut fresh = Fresh::new(free_ovars_gl(f));
    gl_eliminate_actions(f, &|a| matches!(a, Action::Assign(..)), &mut |a| assign_to_random_game(a, &mut fresh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_gl, parse_mu, print_gl, print_mu};

    #[test]
    fn assignment_example() {
        let f = parse_mu("<x := 1> x = 1").unwrap();
        assert_eq!(print_mu(&eliminate_assignments(&f).unwrap()), "<y0 := *> (y0 = 1 & y0 = 1)");
    }

    #[test]
    fn empty_lambda_is_identity() {
        let f = parse_mu("mu X. (p | <a> X) & [x := 0] q").unwrap();
        let g = eliminate_modalities(&f, &|_| false, &mut |a, _| Err(ReduceError::Unsupported(print_action(a))));
        assert_eq!(g.unwrap(), f);
    }

    #[test]
    fn assignment_under_binder_tags_variable() {
        let f = parse_mu("mu X. (p | <x := 0> X)").unwrap();
        let g = eliminate_assignments(&f).unwrap();
        assert_eq!(print_mu(&g), "mu X. (p | <y0 := *> (y0 = 0 & X@(x, y0)))");
    }

    #[test]
    fn game_assignment() {
        let f = parse_gl("<(x := 1)*> p").unwrap();
        assert_eq!(print_gl(&eliminate_assignments_gl(&f)), "<(x := *; ?x = 1)*> p");
        let g = parse_gl("<x := x + 1> p").unwrap();
        assert_eq!(print_gl(&eliminate_assignments_gl(&g)), "<y0 := *; ?y0 = x + 1; x := *; ?x = y0> p");
    }
}
