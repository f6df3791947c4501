mod common;

use ccdd::equivalence::{construct_core, detect_lit_equ};
use ccdd::formula::evaluate;
use ccdd::oracle::{all_assignments, brute_count, brute_models, OracleLimit};
use common::{arb_cnf, arb_equivalence_cnf};
use proptest::prelude::*;

const LIMIT: OracleLimit = OracleLimit { max_vars: 24 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn detected_facts_hold_in_every_model(phi in arb_equivalence_cnf(10)) {
        let mut det = detect_lit_equ(&phi);
        let models = brute_models(&phi, LIMIT).unwrap();
        if det.conflict || det.system.is_contradictory() {
            prop_assert!(models.is_empty());
            return Ok(());
        }
        let primes = det.system.prime().unwrap();
        for m in &models {
            for &l in &det.forced {
                prop_assert_eq!(m.lit_value(l), Some(true));
            }
            for &(x, l) in &primes {
                prop_assert_eq!(m.get(x), m.lit_value(l));
            }
        }
    }

    #[test]
    fn primes_are_canonical(phi in arb_equivalence_cnf(12)) {
        let mut det = detect_lit_equ(&phi);
        prop_assume!(!det.conflict && !det.system.is_contradictory());
        let primes = det.system.prime().unwrap();
        let mut rights: Vec<_> = primes.iter().map(|(_, l)| l.var()).collect();
        rights.sort();
        rights.dedup();
        prop_assert_eq!(rights.len(), primes.len());
        for &(x, l) in &primes {
            prop_assert!(x < l.var());
            prop_assert!(!rights.contains(&x));
            // negation symmetry
            prop_assert_eq!(det.system.find(!l), !det.system.find(l));
            prop_assert_eq!(det.system.find(l), x.pos());
        }
    }

    #[test]
    fn core_with_equivalences_is_equivalent(phi in arb_equivalence_cnf(10)) {
        let mut det = detect_lit_equ(&phi);
        prop_assume!(!det.conflict && !det.system.is_contradictory());
        let primes = det.system.prime().unwrap();
        let base = phi.with_units(&det.forced);
        let kr = construct_core(&base, &primes).unwrap();
        for &(_, l) in &primes {
            prop_assert!(!kr.core.vars().contains(&l.var()));
        }
        for omega in all_assignments(phi.num_vars(), LIMIT).unwrap() {
            let lhs = evaluate(&kr.core, &omega).unwrap() && primes.iter().all(|&(x, l)| omega.get(x) == omega.lit_value(l));
            prop_assert_eq!(lhs, evaluate(&phi, &omega).unwrap());
        }
        // each equivalence halves the count over the same variables
        let core_count = brute_count(&kr.core, LIMIT).unwrap();
        prop_assert_eq!(brute_count(&phi, LIMIT).unwrap() << primes.len(), core_count);
    }

    #[test]
    fn detection_on_arbitrary_formulas_is_sound(phi in arb_cnf(9, 20)) {
        let mut det = detect_lit_equ(&phi);
        let models = brute_models(&phi, LIMIT).unwrap();
        if det.conflict || det.system.is_contradictory() {
            prop_assert!(models.is_empty());
        } else {
            let primes = det.system.prime().unwrap();
            for m in &models {
                prop_assert!(primes.iter().all(|&(x, l)| m.get(x) == m.lit_value(l)));
            }
        }
    }
}
