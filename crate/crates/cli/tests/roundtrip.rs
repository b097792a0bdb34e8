//! Printing a formula and parsing it back gives an equivalent formula.

use ppdual_cli::parse_formula;
use ppdual_core::suite::{random_formulas, Suite};
use ppdual_core::{character_dual, pp_leq, FiniteModule, PPFormula, Side};

const PER_RING: usize = 1000;

fn check(phi: &PPFormula, testset: &[FiniteModule]) {
    let text = phi.to_string();
    let back = parse_formula(&text, phi.ring(), phi.side())
        .unwrap_or_else(|e| panic!("{text:?} does not parse: {e}"))
        .formula;
    assert_eq!(back.free(), phi.free(), "{text}");
    assert!(pp_leq(phi, &back, testset).unwrap(), "{text}");
    assert!(pp_leq(&back, phi, testset).unwrap(), "{text}");
    // printing is a fixed point after one round
    assert_eq!(back.to_string(), text);
}

#[test]
fn thousand_formulas_per_suite_ring() {
    let suite = Suite::with_max_carrier(16).unwrap();
    for (i, sr) in suite.rings.iter().enumerate() {
        let left = &sr.modules;
        let right: Vec<FiniteModule> = left.iter().map(|m| character_dual(m).unwrap().dual).collect();
        let half = PER_RING / 2;
        for phi in random_formulas(&sr.ring, Side::Left, half, 2, 1000 + i as u64) {
            check(&phi, left);
        }
        for phi in random_formulas(&sr.ring, Side::Right, PER_RING - half, 2, 2000 + i as u64) {
            check(&phi, &right);
        }
    }
}

#[test]
fn several_free_variables() {
    let suite = Suite::with_max_carrier(16).unwrap();
    let sr = suite.ring("Z/6").unwrap();
    let r = &sr.ring;
    let shapes = [
        (vec![1, 0, 0, 1], vec![2, 3]),
        (vec![0, 0, 5, 0], vec![1, 1]),
        (vec![0, 0, 0, 0], vec![0, 0]),
    ];
    for (a, b) in shapes {
        let phi = PPFormula::new(r, Side::Left, 2, 1, 2, a, b).unwrap();
        check(&phi, &sr.modules);
    }
}
