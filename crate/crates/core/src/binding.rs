//! Propositional substitution, object-variable renaming, alpha-equivalence and fresh names.

use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{all_pvar_bases_mu, bar, free_pvar_bases_mu, free_pvars_gl};
use crate::syntax::*;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BindingError {
    #[error("substitution for {var} would be captured by the binder for {binder}")]
    Capture { var: PVar, binder: PVar },
    #[error("renamed variable {0} cannot be substituted")]
    Tagged(PVar),
}

/// `f[psi/x]`. Occurrences of the bar of `x` receive `bar(psi)`; binders for
/// `x` or its bar stop the substitution.
pub fn subst_pvar(f: &MuFormula, x: &PVar, psi: &MuFormula) -> Result<MuFormula, BindingError> {
    if x.is_tagged() {
        return Err(BindingError::Tagged(x.clone()));
    }
    if x.barred {
        return subst_pvar(f, &x.bar(), &bar(psi));
    }
    let free = free_pvar_bases_mu(psi);
    subst_rec(f, x, psi, &free)
}

fn subst_rec(f: &MuFormula, x: &PVar, psi: &MuFormula, free: &BTreeSet<String>) -> Result<MuFormula, BindingError> {
    Ok(match f {
        MuFormula::Lit(_) => f.clone(),
        MuFormula::Var(y) => {
            if y.base != x.base {
                f.clone()
            } else if y.is_tagged() {
                return Err(BindingError::Tagged(y.clone()));
            } else if y.barred {
                bar(psi)
            } else {
                psi.clone()
            }
        }
        MuFormula::Or(a, b) => MuFormula::or(subst_rec(a, x, psi, free)?, subst_rec(b, x, psi, free)?),
        MuFormula::And(a, b) => MuFormula::and(subst_rec(a, x, psi, free)?, subst_rec(b, x, psi, free)?),
        MuFormula::Diamond(a, g) => MuFormula::dia(a.clone(), subst_rec(g, x, psi, free)?),
        MuFormula::Box(a, g) => MuFormula::boxed(a.clone(), subst_rec(g, x, psi, free)?),
        MuFormula::Mu(y, g) | MuFormula::Nu(y, g) => {
            if y.base == x.base {
                return Ok(f.clone());
            }
            if free.contains(&y.base) && free_pvar_bases_mu(g).contains(&x.base) {
                return Err(BindingError::Capture { var: x.clone(), binder: y.clone() });
            }
            let body = subst_rec(g, x, psi, free)?;
            match f {
                MuFormula::Mu(..) => MuFormula::mu(y.clone(), body),
                _ => MuFormula::nu(y.clone(), body),
            }
        }
    })
}

/// True iff no free occurrence of `x` in `f` lies under a binder of a free pvar of `psi`.
pub fn free_for(x: &PVar, psi: &MuFormula, f: &MuFormula) -> bool {
    let free = free_pvar_bases_mu(psi);
    fn rec(f: &MuFormula, x: &str, free: &BTreeSet<String>, danger: bool) -> bool {
        match f {
            MuFormula::Lit(_) => true,
            MuFormula::Var(y) => !(y.base == x && danger),
            MuFormula::Or(a, b) | MuFormula::And(a, b) => rec(a, x, free, danger) && rec(b, x, free, danger),
            MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => rec(g, x, free, danger),
            MuFormula::Mu(y, g) | MuFormula::Nu(y, g) => {
                if y.base == x {
                    true
                } else {
                    rec(g, x, free, danger || free.contains(&y.base))
                }
            }
        }
    }
    rec(f, &x.base, &free, false)
}

/// Substitution into a game-logic formula, which has no binders.
pub fn subst_pvar_gl(f: &GlFormula, x: &PVar, psi: &GlFormula) -> Result<GlFormula, BindingError> {
    if x.is_tagged() {
        return Err(BindingError::Tagged(x.clone()));
    }
    if x.barred {
        return subst_pvar_gl(f, &x.bar(), &GlFormula::not(psi.clone()));
    }
    Ok(match f {
        GlFormula::Lit(_) => f.clone(),
        GlFormula::Var(y) => {
            if y.base != x.base {
                f.clone()
            } else if y.is_tagged() {
                return Err(BindingError::Tagged(y.clone()));
            } else if y.barred {
                GlFormula::not(psi.clone())
            } else {
                psi.clone()
            }
        }
        GlFormula::Not(g) => GlFormula::not(subst_pvar_gl(g, x, psi)?),
        GlFormula::Or(a, b) => GlFormula::or(subst_pvar_gl(a, x, psi)?, subst_pvar_gl(b, x, psi)?),
        GlFormula::Diamond(g, b) => GlFormula::dia(subst_pvar_game(g, x, psi)?, subst_pvar_gl(b, x, psi)?),
    })
}

pub fn subst_pvar_game(g: &Game, x: &PVar, psi: &GlFormula) -> Result<Game, BindingError> {
    Ok(match g {
        Game::Act(_) => g.clone(),
        Game::Test(f) => Game::test(subst_pvar_gl(f, x, psi)?),
        Game::Choice(a, b) => Game::choice(subst_pvar_game(a, x, psi)?, subst_pvar_game(b, x, psi)?),
        Game::Seq(a, b) => Game::seq(subst_pvar_game(a, x, psi)?, subst_pvar_game(b, x, psi)?),
        Game::Repeat(a) => Game::repeat(subst_pvar_game(a, x, psi)?),
        Game::Dual(a) => Game::dual(subst_pvar_game(a, x, psi)?),
    })
}

/// Renames bound pvars of `f` away from the free pvars of `psi`, then substitutes.
pub fn subst_pvar_renaming(f: &MuFormula, x: &PVar, psi: &MuFormula) -> Result<MuFormula, BindingError> {
    let mut avoid = free_pvar_bases_mu(psi);
    avoid.insert(x.base.clone());
    let apart = rename_bound_apart(f, &avoid);
    subst_pvar(&apart, x, psi)
}

// ---- object-variable renaming ----

pub fn rename_action(a: &Action, x: &str, y: &str) -> Action {
    match a {
        Action::Named { name, tags } => {
            let mut tags = tags.clone();
            push_swap(&mut tags, x, y);
            Action::Named { name: name.clone(), tags }
        }
        Action::Assign(z, t) => Action::Assign(swap_name(z, x, y), t.swap(x, y)),
        Action::Random(z) => Action::Random(swap_name(z, x, y)),
        Action::Ode { eqs, constraint } => Action::Ode {
            eqs: eqs.iter().map(|(z, t)| (swap_name(z, x, y), t.swap(x, y))).collect(),
            constraint: constraint.as_ref().map(|c| Box::new(rename_ovar_mu(c, x, y))),
        },
    }
}

pub(crate) fn swap_name(z: &str, x: &str, y: &str) -> String {
    if z == x {
        y.to_string()
    } else if z == y {
        x.to_string()
    } else {
        z.to_string()
    }
}

/// Swaps `x` and `y` throughout; free pvars receive the swap as a tag.
pub fn rename_ovar_mu(f: &MuFormula, x: &str, y: &str) -> MuFormula {
    fn rec(f: &MuFormula, x: &str, y: &str, bound: &mut Vec<String>) -> MuFormula {
        match f {
            MuFormula::Lit(l) => MuFormula::Lit(l.swap(x, y)),
            MuFormula::Var(z) => {
                if bound.contains(&z.base) {
                    // the binder now ranges over renamed sets, so conjugate
                    let sw = |v: &String| if v == x { y.to_string() } else if v == y { x.to_string() } else { v.clone() };
                    let tags = z.tags.iter().map(|(a, b)| (sw(a), sw(b))).collect();
                    MuFormula::Var(PVar { tags, ..z.clone() })
                } else {
                    MuFormula::Var(z.tagged(x, y))
                }
            }
            MuFormula::Or(a, b) => MuFormula::or(rec(a, x, y, bound), rec(b, x, y, bound)),
            MuFormula::And(a, b) => MuFormula::and(rec(a, x, y, bound), rec(b, x, y, bound)),
            MuFormula::Diamond(a, g) => MuFormula::dia(rename_action(a, x, y), rec(g, x, y, bound)),
            MuFormula::Box(a, g) => MuFormula::boxed(rename_action(a, x, y), rec(g, x, y, bound)),
            MuFormula::Mu(z, g) | MuFormula::Nu(z, g) => {
                bound.push(z.base.clone());
                let body = rec(g, x, y, bound);
                bound.pop();
                match f {
                    MuFormula::Mu(..) => MuFormula::mu(z.clone(), body),
                    _ => MuFormula::nu(z.clone(), body),
                }
            }
        }
    }
    if x == y {
        return f.clone();
    }
    rec(f, x, y, &mut Vec::new())
}

pub fn rename_ovar_gl(f: &GlFormula, x: &str, y: &str) -> GlFormula {
    if x == y {
        return f.clone();
    }
    match f {
        GlFormula::Lit(l) => GlFormula::Lit(l.swap(x, y)),
        GlFormula::Var(z) => GlFormula::Var(z.tagged(x, y)),
        GlFormula::Not(g) => GlFormula::Not(Box::new(rename_ovar_gl(g, x, y))),
        GlFormula::Or(a, b) => GlFormula::or(rename_ovar_gl(a, x, y), rename_ovar_gl(b, x, y)),
        GlFormula::Diamond(g, b) => GlFormula::dia(rename_ovar_game(g, x, y), rename_ovar_gl(b, x, y)),
    }
}

pub fn rename_ovar_game(g: &Game, x: &str, y: &str) -> Game {
    match g {
        Game::Act(a) => Game::Act(rename_action(a, x, y)),
        Game::Test(f) => Game::test(rename_ovar_gl(f, x, y)),
        Game::Choice(a, b) => Game::choice(rename_ovar_game(a, x, y), rename_ovar_game(b, x, y)),
        Game::Seq(a, b) => Game::seq(rename_ovar_game(a, x, y), rename_ovar_game(b, x, y)),
        Game::Repeat(a) => Game::repeat(rename_ovar_game(a, x, y)),
        Game::Dual(a) => Game::dual(rename_ovar_game(a, x, y)),
    }
}

// ---- fresh names ----

/// First name `prefix0`, `prefix1`, ... not in `avoid`.
pub fn fresh_name(prefix: &str, avoid: &BTreeSet<String>) -> String {
    (0..).map(|i| format!("{}{}", prefix, i)).find(|n| !avoid.contains(n)).unwrap()
}

pub fn fresh_pvar(avoid: &BTreeSet<String>) -> PVar {
    PVar::new(fresh_name("X", avoid))
}

/// Prefix reserved for control variables of the counterembedding.
pub const CONTROL_PREFIX: &str = "ctl";

pub fn fresh_ovar(prefix: &str, avoid: &BTreeSet<String>) -> OVar {
    fresh_name(prefix, avoid)
}

/// A deterministic name supply threaded by value.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    pub fn new(avoid: impl IntoIterator<Item = String>) -> Fresh {
        Fresh { used: avoid.into_iter().collect() }
    }

    pub fn avoid(&mut self, names: impl IntoIterator<Item = String>) {
        self.used.extend(names);
    }

    pub fn name(&mut self, prefix: &str) -> String {
        let n = fresh_name(prefix, &self.used);
        self.used.insert(n.clone());
        n
    }

    pub fn pvar(&mut self) -> PVar {
        PVar::new(self.name("X"))
    }
}

// ---- bound-variable renaming ----

fn rename_base(f: &MuFormula, from: &str, to: &str) -> MuFormula {
    match f {
        MuFormula::Lit(_) => f.clone(),
        MuFormula::Var(z) if z.base == from => MuFormula::Var(PVar { base: to.to_string(), ..z.clone() }),
        MuFormula::Var(_) => f.clone(),
        MuFormula::Or(a, b) => MuFormula::or(rename_base(a, from, to), rename_base(b, from, to)),
        MuFormula::And(a, b) => MuFormula::and(rename_base(a, from, to), rename_base(b, from, to)),
        MuFormula::Diamond(a, g) => MuFormula::dia(a.clone(), rename_base(g, from, to)),
        MuFormula::Box(a, g) => MuFormula::boxed(a.clone(), rename_base(g, from, to)),
        MuFormula::Mu(z, _) | MuFormula::Nu(z, _) if z.base == from => f.clone(),
        MuFormula::Mu(z, g) => MuFormula::mu(z.clone(), rename_base(g, from, to)),
        MuFormula::Nu(z, g) => MuFormula::nu(z.clone(), rename_base(g, from, to)),
    }
}

/// Renames bound pvars so that every pvar is bound at most once and no bound
/// name is in `avoid` or free in `f`. Names are kept where possible.
pub fn rename_bound_apart(f: &MuFormula, avoid: &BTreeSet<String>) -> MuFormula {
    let mut used: BTreeSet<String> = avoid.clone();
    used.extend(free_pvar_bases_mu(f));
    let mut fresh = Fresh::new(used.iter().cloned().chain(all_pvar_bases_mu(f)));
    fn rec(f: &MuFormula, used: &mut BTreeSet<String>, fresh: &mut Fresh) -> MuFormula {
        match f {
            MuFormula::Lit(_) | MuFormula::Var(_) => f.clone(),
            MuFormula::Or(a, b) => MuFormula::or(rec(a, used, fresh), rec(b, used, fresh)),
            MuFormula::And(a, b) => MuFormula::and(rec(a, used, fresh), rec(b, used, fresh)),
            MuFormula::Diamond(a, g) => MuFormula::dia(a.clone(), rec(g, used, fresh)),
            MuFormula::Box(a, g) => MuFormula::boxed(a.clone(), rec(g, used, fresh)),
            MuFormula::Mu(z, g) | MuFormula::Nu(z, g) => {
                let (z2, g2) = if used.contains(&z.base) {
                    let n = fresh.name(&z.base);
                    (PVar { base: n.clone(), ..z.clone() }, rename_base(g, &z.base, &n))
                } else {
                    (z.clone(), (**g).clone())
                };
                used.insert(z2.base.clone());
                let body = rec(&g2, used, fresh);
                match f {
                    MuFormula::Mu(..) => MuFormula::mu(z2, body),
                    _ => MuFormula::nu(z2, body),
                }
            }
        }
    }
    rec(f, &mut used, &mut fresh)
}

/// Canonical representative of the alpha-equivalence class: bound pvars are
/// renamed by binder depth to names that cannot be written in the surface syntax.
pub fn alpha_normalize(f: &MuFormula) -> MuFormula {
    // Each entry maps a bound base to its canonical name and whether the
    // binder was barred, in which case occurrences flip their bar.
    type Env = BTreeMap<String, Vec<(String, bool)>>;
    fn rec(f: &MuFormula, env: &mut Env, depth: usize) -> MuFormula {
        match f {
            MuFormula::Lit(_) => f.clone(),
            MuFormula::Var(z) => match env.get(&z.base).and_then(|v| v.last()) {
                Some((n, flip)) => MuFormula::Var(PVar { base: n.clone(), barred: z.barred != *flip, tags: z.tags.clone() }),
                None => f.clone(),
            },
            MuFormula::Or(a, b) => MuFormula::or(rec(a, env, depth), rec(b, env, depth)),
            MuFormula::And(a, b) => MuFormula::and(rec(a, env, depth), rec(b, env, depth)),
            MuFormula::Diamond(a, g) => MuFormula::dia(norm_action(a), rec(g, env, depth)),
            MuFormula::Box(a, g) => MuFormula::boxed(norm_action(a), rec(g, env, depth)),
            MuFormula::Mu(z, g) | MuFormula::Nu(z, g) => {
                let n = format!("#{}", depth);
                env.entry(z.base.clone()).or_default().push((n.clone(), z.barred));
                let body = rec(g, env, depth + 1);
                env.get_mut(&z.base).unwrap().pop();
                let z2 = PVar::new(n);
                match f {
                    MuFormula::Mu(..) => MuFormula::mu(z2, body),
                    _ => MuFormula::nu(z2, body),
                }
            }
        }
    }
    fn norm_action(a: &Action) -> Action {
        match a {
            Action::Ode { eqs, constraint } => Action::Ode {
                eqs: eqs.clone(),
                constraint: constraint.as_ref().map(|c| Box::new(alpha_normalize(c))),
            },
            _ => a.clone(),
        }
    }
    rec(f, &mut BTreeMap::new(), 0)
}

pub fn alpha_eq(a: &MuFormula, b: &MuFormula) -> bool {
    a == b || alpha_normalize(a) == alpha_normalize(b)
}

/// Free pvars of a GL formula by base.
pub fn free_pvar_bases_gl(f: &GlFormula) -> BTreeSet<String> {
    free_pvars_gl(f).into_iter().map(|x| x.base).collect()
}
