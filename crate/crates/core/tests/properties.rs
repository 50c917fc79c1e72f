use std::collections::BTreeSet;

use fixlogic::binding::{alpha_eq, alpha_normalize, rename_bound_apart, rename_ovar_mu};
use fixlogic::gen::{self, Gen, GenConfig, GenRng};
use fixlogic::logic::*;
use fixlogic::semantics::{eval_game, eval_gl, eval_mu, FiniteStructure, Valuation};
use fixlogic::surface::{parse_gl, parse_mu, print_gl, print_mu};
use fixlogic::syntax::*;
use fixlogic::translate::{flat_game, ControlEncoding, TranslationDictionary};
use proptest::prelude::*;

fn setup(seed: u64, support: &[&str]) -> (GenRng, FiniteStructure, Valuation) {
    let mut r = gen::rng(seed);
    let vars: Vec<OVar> = support.iter().map(|v| v.to_string()).collect();
    let acts = vec![("a".to_string(), None), ("b".to_string(), None)];
    let s = gen::structure_with(&mut r, 3, &vars, &acts);
    let om = gen::valuation(&mut r, &s, &["P".into(), "Q".into()]);
    (r, s, om)
}

fn mu_on(r: &mut GenRng, s: &FiniteStructure, cfg: GenConfig) -> MuFormula {
    Gen::for_structure(r, cfg, s).mu_formula()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let f = Gen::new(&mut r, GenConfig::standard(5)).mu_formula();
        prop_assert_eq!(parse_mu(&print_mu(&f)).unwrap(), f);
        let g = Gen::new(&mut r, GenConfig::standard(4)).gl_formula();
        prop_assert_eq!(parse_gl(&print_gl(&g)).unwrap(), g);
    }

    #[test]
    fn bar_is_an_involution_and_keeps_well_formedness(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let f = Gen::new(&mut r, GenConfig::standard(5)).mu_formula();
        prop_assert_eq!(bar(&bar(&f)), f.clone());
        prop_assert!(well_formed_mu(&bar(&f), None).is_ok());
    }

    #[test]
    fn bar_denotes_the_complement(seed in any::<u64>()) {
        let (mut r, s, om) = setup(seed, &["x", "y"]);
        let f = mu_on(&mut r, &s, GenConfig::standard(5));
        let d = eval_mu(&s, &om, &f).unwrap();
        prop_assert_eq!(eval_mu(&s, &om, &bar(&f)).unwrap(), d.complement());
    }

    #[test]
    fn games_are_monotone(seed in any::<u64>()) {
        let (mut r, s, om) = setup(seed, &["x", "y"]);
        let n = s.num_states().unwrap();
        let hi = gen::state_set(&mut r, n);
        let lo = hi.intersection(&gen::state_set(&mut r, n));
        let g = Gen::for_structure(&mut r, GenConfig::standard(4), &s).game(4);
        let a = eval_game(&s, &om, &g, &lo).unwrap();
        prop_assert!(a.is_subset(&eval_game(&s, &om, &g, &hi).unwrap()));
    }

    #[test]
    fn renaming_permutes_the_denotation(seed in any::<u64>()) {
        let (mut r, s, om) = setup(seed, &["x", "y"]);
        let f = mu_on(&mut r, &s, GenConfig::standard(4));
        let d = eval_mu(&s, &om, &f).unwrap();
        let renamed = rename_ovar_mu(&f, "x", "y");
        prop_assert_eq!(eval_mu(&s, &om, &renamed).unwrap(), d.map(&s.swap_perm("x", "y").unwrap()));
    }

    #[test]
    fn unused_variables_do_not_matter(seed in any::<u64>()) {
        let (mut r, s, om) = setup(seed, &["x"]);
        let mut cfg = GenConfig::standard(4);
        cfg.ovars = vec!["x".into()];
        let f = mu_on(&mut r, &s, cfg);
        let ext = s.extend_support(&["z".to_string()]);
        let mut lifted = Valuation::new();
        for (k, d) in &om.sets {
            lifted.sets.insert(k.clone(), s.cylindrify(&ext, d).unwrap());
        }
        let want = s.cylindrify(&ext, &eval_mu(&s, &om, &f).unwrap()).unwrap();
        prop_assert_eq!(eval_mu(&ext, &lifted, &f).unwrap(), want);
    }

    #[test]
    fn bound_names_are_irrelevant(seed in any::<u64>()) {
        let (mut r, s, om) = setup(seed, &["x", "y"]);
        let f = mu_on(&mut r, &s, GenConfig::standard(5));
        let apart = rename_bound_apart(&f, &BTreeSet::from(["X".to_string(), "Y".to_string()]));
        prop_assert!(alpha_eq(&f, &apart));
        prop_assert_eq!(alpha_normalize(&f), alpha_normalize(&apart));
        prop_assert_eq!(eval_mu(&s, &om, &apart).unwrap(), eval_mu(&s, &om, &f).unwrap());
    }

    #[test]
    fn counter_embedding_of_closed_formulas(seed in any::<u64>()) {
        let (mut r, s, _) = setup(seed, &["x", "y"]);
        let cfg = GenConfig::standard(3).closed().without_tags();
        let f = rename_bound_apart(&mu_on(&mut r, &s, cfg), &BTreeSet::new());
        let rho = GlFormula::Lit(Gen::for_structure(&mut r, GenConfig::standard(0), &s).literal());
        let mut bases: Vec<String> = all_pvar_bases_mu(&f).into_iter().collect();
        bases.sort();
        let avoid: BTreeSet<OVar> = s.support.iter().cloned().chain(s.footprint_vars()).collect();
        let enc = ControlEncoding::new(bases, &avoid);
        let th = TranslationDictionary::zero();
        let ext = s.extend_support(&enc.vars);
        let none = Valuation::new();
        let g = flat_game(&f, &th, &enc).unwrap();
        let gbar = flat_game(&bar(&f), &th, &enc).unwrap();

        // the game of the bar is the dual game
        let lhs = eval_gl(&ext, &none, &GlFormula::dia(gbar, rho.clone())).unwrap();
        let rhs = eval_gl(&ext, &none, &GlFormula::dia(Game::dual(g.clone()), rho.clone())).unwrap();
        prop_assert_eq!(lhs, rhs);

        // the winning region of a closed formula's game ignores the goal
        let top = eval_gl(&ext, &none, &GlFormula::dia(g.clone(), gl_true())).unwrap();
        prop_assert_eq!(eval_gl(&ext, &none, &GlFormula::dia(g, rho)).unwrap(), top);
    }
}

#[test]
fn renaming_conjugates_tags_of_bound_occurrences() {
    let f = parse_mu("mu Z. (Z@(x, y) | <a> Z)").unwrap();
    let g = rename_ovar_mu(&f, "x", "w");
    assert_eq!(print_mu(&g), "mu Z. (Z@(w, y) | <a@(x, w)> Z)");
}
