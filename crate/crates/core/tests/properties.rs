//! Randomized invariants, checked against a brute-force solver.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use ppdual_core::algebra::{FiniteModule, Side};
use ppdual_core::duality::{annihilator_identity_check, character_dual};
use ppdual_core::pp::{pp_dual, pp_meet, pp_product_check, pp_solve, pp_sum, PPFormula};
use ppdual_core::suite::Suite;
use proptest::prelude::*;

fn suite() -> &'static Suite {
    static S: OnceLock<Suite> = OnceLock::new();
    S.get_or_init(|| Suite::with_max_carrier(8).unwrap())
}

/// Every free tuple that extends to a solution, by enumerating all of M^(n+m).
fn brute_force(phi: &PPFormula, m: &FiniteModule) -> BTreeSet<Vec<usize>> {
    let vars = phi.free() + phi.bound();
    let mut out = BTreeSet::new();
    let mut t = vec![0usize; vars];
    loop {
        let ok = (0..phi.constraints()).all(|j| {
            let mut s = m.zero();
            for (v, &x) in t.iter().enumerate() {
                s = m.add(s, m.act(phi.coefficient(v, j), x));
            }
            s == m.zero()
        });
        if ok {
            out.insert(t[..phi.free()].to_vec());
        }
        let mut i = 0;
        while i < vars {
            t[i] += 1;
            if t[i] < m.size() {
                break;
            }
            t[i] = 0;
            i += 1;
        }
        if i == vars {
            return out;
        }
    }
}

#[derive(Debug, Clone)]
struct Case {
    ring: usize,
    module: usize,
    other: usize,
    free: usize,
    bound: usize,
    constraints: usize,
    coeffs: Vec<usize>,
}

fn case() -> impl Strategy<Value = Case> {
    let n = suite().rings.len();
    (0..n, 0usize..64, 0usize..64, 1usize..=2, 0usize..=2, 0usize..=3, prop::collection::vec(0usize..64, 12))
        .prop_map(|(ring, module, other, free, bound, constraints, coeffs)| Case {
            ring,
            module,
            other,
            free,
            bound,
            constraints,
            coeffs,
        })
}

impl Case {
    fn modules(&self) -> (&FiniteModule, &FiniteModule) {
        let ms = &suite().rings[self.ring].modules;
        (&ms[self.module % ms.len()], &ms[self.other % ms.len()])
    }

    fn formula(&self, side: Side, free: usize) -> PPFormula {
        let ring = &suite().rings[self.ring].ring;
        let c: Vec<usize> = self.coeffs.iter().map(|x| x % ring.size()).collect();
        let k = self.constraints;
        let a = c.iter().cycle().take(free * k).copied().collect();
        let b = c.iter().rev().cycle().take(self.bound * k).copied().collect();
        PPFormula::new(ring, side, free, self.bound, k, a, b).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solver_matches_brute_force(c in case()) {
        let (m, _) = c.modules();
        let phi = c.formula(Side::Left, c.free);
        let fast: BTreeSet<Vec<usize>> = pp_solve(&phi, m).unwrap().elements().iter().cloned().collect();
        prop_assert_eq!(fast, brute_force(&phi, m));
    }

    #[test]
    fn solution_sets_are_end_closed_and_commute_with_sums(c in case()) {
        let (m, n) = c.modules();
        let phi = c.formula(Side::Left, c.free);
        prop_assert!(pp_solve(&phi, m).unwrap().check_closure(None).is_pass());
        prop_assert!(pp_product_check(&phi, &[m.clone(), n.clone()]).unwrap());
    }

    #[test]
    fn double_dual_is_equivalent(c in case()) {
        let (m, _) = c.modules();
        let phi = c.formula(Side::Left, c.free);
        let dd = pp_dual(&pp_dual(&phi));
        prop_assert_eq!(pp_solve(&dd, m).unwrap(), pp_solve(&phi, m).unwrap());
    }

    #[test]
    fn connectives_are_sum_and_intersection(c in case()) {
        let (m, _) = c.modules();
        let phi = c.formula(Side::Left, 1);
        let psi = pp_dual(&pp_dual(&c.formula(Side::Left, 1)));
        let a = pp_solve(&phi, m).unwrap().to_set();
        let b = pp_solve(&psi, m).unwrap().to_set();
        prop_assert_eq!(pp_solve(&pp_sum(&phi, &psi).unwrap(), m).unwrap().to_set(), m.subgroup_sum(&a, &b));
        prop_assert_eq!(pp_solve(&pp_meet(&phi, &psi).unwrap(), m).unwrap().to_set(), a.intersection(&b));
    }

    #[test]
    fn annihilator_identity_holds(c in case()) {
        let (m, _) = c.modules();
        let phi = c.formula(Side::Right, 1);
        let d = character_dual(m).unwrap();
        prop_assert!(annihilator_identity_check(&phi, &d).unwrap());
    }
}
