//! Benchmark fixtures shared by the bench targets.

use ppdual_core::{direct_sum, ring_zmod, upper_triangular_f2, FiniteModule, PPFormula, Side};

/// `Z/4 ⊕ Z/8` over `Z/8` and `UT2(F2) ⊕ UT2(F2)`, the larger suite-sized inputs.
pub fn modules() -> Vec<FiniteModule> {
    let z8 = ring_zmod(8).unwrap();
    let a = FiniteModule::cyclic_quotient(&z8, Side::Left, &[4]).unwrap();
    let b = FiniteModule::regular(&z8, Side::Left);
    let ut = upper_triangular_f2();
    let u = FiniteModule::regular(&ut, Side::Left);
    vec![
        direct_sum(&z8, Side::Left, &[a, b]).unwrap().module.with_name("Z/4+Z/8"),
        direct_sum(&ut, Side::Left, &[u.clone(), u]).unwrap().module.with_name("UT2+UT2"),
    ]
}

/// `∃ y1 y2 : v = 2 y1 + 3 y2 ∧ 4 y1 = y2` over the module's ring.
pub fn formula(m: &FiniteModule) -> PPFormula {
    let r = m.ring();
    let (one, two, three, four) = (r.from_int(1), r.from_int(2), r.from_int(3), r.from_int(4));
    let neg = |x| r.neg(x);
    PPFormula::new(r, Side::Left, 1, 2, 2, vec![one, r.zero()], vec![neg(two), four, neg(three), neg(one)]).unwrap()
}
