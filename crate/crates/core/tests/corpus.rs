use fixlogic::corpus::{BROKEN, PROOFS};
use fixlogic::proofkit::check_proof;

#[test]
fn bundled_scripts_check() {
    let mut bad = Vec::new();
    for e in PROOFS {
        let v = check_proof(&e.script().unwrap(), &e.theory().unwrap());
        if !v.ok() {
            bad.push(format!("{}: {}", e.name, v));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn broken_scripts_fail_where_documented() {
    for e in BROKEN {
        let want = e.expect_fail().expect("documented line");
        let v = match e.script() {
            Ok(s) => check_proof(&s, &e.theory().unwrap()).first_failure(),
            Err(err) => Some(err.line),
        };
        assert_eq!(v, Some(want), "{}", e.name);
    }
}


#[test]
fn scripts_survive_printing() {
    use fixlogic::proofkit::{parse_proof, print_proof};
    for e in PROOFS {
        let s = e.script().unwrap();
        assert_eq!(parse_proof(&print_proof(&s)).unwrap(), s, "{}", e.name);
    }
}

mod substitution {
    use fixlogic::corpus::PROOFS;
    use fixlogic::gen::{self, Gen, GenConfig};
    use fixlogic::proofkit::{check_proof, subst_proof, Calculus};
    use fixlogic::syntax::PVar;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn substituting_closed_formulas_keeps_proofs_valid(seed in any::<u64>()) {
            let mut r = gen::rng(seed);
            let psi = Gen::new(&mut r, GenConfig::standard(3).closed().without_tags()).mu_formula();
            for e in PROOFS.iter().filter(|e| e.calculus() == Some(Calculus::Mu)) {
                let (s, th) = (e.script().unwrap(), e.theory().unwrap());
                let out = subst_proof(&s, &th, &PVar::new("X"), &psi).unwrap();
                prop_assert!(check_proof(&out, &th).ok(), "{}", e.name);
            }
        }
    }
}
