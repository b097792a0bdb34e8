use std::fmt;

use crate::algebra::{FiniteModule, FiniteRing, Side};
use crate::error::{Error, Result};

/// A pp formula `∃ȳ : x̄A + ȳB = 0` in `free` variables.
///
/// `a` is `free × constraints` and `b` is `bound × constraints`, both
/// row-major. Constraint `j` reads `Σ_i x_i·a[i][j] + Σ_l y_l·b[l][j] = 0`
/// where `·` is the scalar action on the formula's side: `x·r` for right
/// modules and `r·x` for left modules. The storage is side-agnostic; the side
/// tag decides which modules the formula may be evaluated in.
#[derive(Clone, PartialEq, Eq)]
pub struct PPFormula {
    ring: FiniteRing,
    side: Side,
    free: usize,
    bound: usize,
    constraints: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl PPFormula {
    pub fn new(
        ring: &FiniteRing,
        side: Side,
        free: usize,
        bound: usize,
        constraints: usize,
        a: Vec<usize>,
        b: Vec<usize>,
    ) -> Result<Self> {
        if free == 0 {
            return Err(Error::invalid_argument("a pp formula needs a free variable"));
        }
        if a.len() != free * constraints || b.len() != bound * constraints {
            return Err(Error::invalid_argument(format!(
                "coefficient matrices have {} and {} entries, expected {}x{} and {}x{}",
                a.len(),
                b.len(),
                free,
                constraints,
                bound,
                constraints
            )));
        }
        if let Some(&r) = a.iter().chain(&b).find(|&&r| r >= ring.size()) {
            return Err(Error::invalid_argument(format!(
                "coefficient {r} is not an element of {}",
                ring.name()
            )));
        }
        Ok(PPFormula {
            ring: ring.clone(),
            side,
            free,
            bound,
            constraints,
            a,
            b,
        })
    }

    /// `x̄ = x̄`: no constraints.
    pub fn tautology(ring: &FiniteRing, side: Side, free: usize) -> Self {
        Self::new(ring, side, free, 0, 0, vec![], vec![]).expect("well-formed")
    }

    /// `x̄ = 0`.
    pub fn equals_zero(ring: &FiniteRing, side: Side, free: usize) -> Self {
        let mut a = vec![ring.zero(); free * free];
        for i in 0..free {
            a[i * free + i] = ring.one();
        }
        Self::new(ring, side, free, 0, free, a, vec![]).expect("well-formed")
    }

    /// `∃y : v = y·c` ("c divides v").
    pub fn divisible_by(ring: &FiniteRing, side: Side, c: usize) -> Self {
        Self::new(ring, side, 1, 1, 1, vec![ring.one()], vec![ring.neg(c)]).expect("well-formed")
    }

    /// `v·c = 0`.
    pub fn annihilated_by(ring: &FiniteRing, side: Side, c: usize) -> Self {
        Self::new(ring, side, 1, 0, 1, vec![c], vec![]).expect("well-formed")
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn constraints(&self) -> usize {
        self.constraints
    }

    /// Coefficient of free variable `i` in constraint `j`.
    pub fn a(&self, i: usize, j: usize) -> usize {
        self.a[i * self.constraints + j]
    }

    /// Coefficient of bound variable `l` in constraint `j`.
    pub fn b(&self, l: usize, j: usize) -> usize {
        self.b[l * self.constraints + j]
    }

    /// Coefficient of variable `v` (free variables first) in constraint `j`.
    pub fn coefficient(&self, v: usize, j: usize) -> usize {
        if v < self.free {
            self.a(v, j)
        } else {
            self.b(v - self.free, j)
        }
    }

    pub fn a_matrix(&self) -> &[usize] {
        &self.a
    }

    pub fn b_matrix(&self) -> &[usize] {
        &self.b
    }

    pub fn ensure_applies_to(&self, m: &FiniteModule) -> Result<()> {
        if !self.ring.same_as(m.ring()) {
            return Err(Error::mismatch(format!(
                "formula over {} evaluated in a module over {}",
                self.ring.name(),
                m.ring().name()
            )));
        }
        if self.side != m.side() {
            return Err(Error::mismatch(format!(
                "{} formula evaluated in the {} module {}",
                self.side,
                m.side(),
                m.name()
            )));
        }
        Ok(())
    }

    pub(crate) fn ensure_compatible(&self, other: &PPFormula) -> Result<()> {
        if !self.ring.same_as(&other.ring) || self.side != other.side || self.free != other.free {
            return Err(Error::mismatch(format!(
                "formulas differ in ring, side or arity ({} {} /{} vs {} {} /{})",
                self.ring.name(),
                self.side,
                self.free,
                other.ring.name(),
                other.side,
                other.free
            )));
        }
        Ok(())
    }
}

/// The elementary dual.
///
/// `∃ȳ : x̄A + ȳB = 0` becomes `∃z̄ : x̄ = Az̄ ∧ Bz̄ = 0` on the opposite side,
/// with the `k` old constraints becoming the `k` bound variables `z̄`. In the
/// stored orientation the new free block is `[I | 0]` and the new bound block
/// is `[-Aᵀ | Bᵀ]`; the same transform serves both directions.
pub fn pp_dual(phi: &PPFormula) -> PPFormula {
    let ring = &phi.ring;
    let (n, m, k) = (phi.free, phi.bound, phi.constraints);
    let kk = n + m;
    let mut a = vec![ring.zero(); n * kk];
    for i in 0..n {
        a[i * kk + i] = ring.one();
    }
    let mut b = vec![ring.zero(); k * kk];
    for j in 0..k {
        for i in 0..n {
            b[j * kk + i] = ring.neg(phi.a(i, j));
        }
        for l in 0..m {
            b[j * kk + n + l] = phi.b(l, j);
        }
    }
    PPFormula {
        ring: ring.clone(),
        side: phi.side.opposite(),
        free: n,
        bound: k,
        constraints: kk,
        a,
        b,
    }
}

/// Conjunction: both constraint systems side by side with disjoint bound variables.
pub fn pp_meet(phi: &PPFormula, psi: &PPFormula) -> Result<PPFormula> {
    phi.ensure_compatible(psi)?;
    let ring = &phi.ring;
    let n = phi.free;
    let (m1, k1, m2, k2) = (phi.bound, phi.constraints, psi.bound, psi.constraints);
    let k = k1 + k2;
    let mut a = vec![ring.zero(); n * k];
    for i in 0..n {
        for j in 0..k1 {
            a[i * k + j] = phi.a(i, j);
        }
        for j in 0..k2 {
            a[i * k + k1 + j] = psi.a(i, j);
        }
    }
    let mut b = vec![ring.zero(); (m1 + m2) * k];
    for l in 0..m1 {
        for j in 0..k1 {
            b[l * k + j] = phi.b(l, j);
        }
    }
    for l in 0..m2 {
        for j in 0..k2 {
            b[(m1 + l) * k + k1 + j] = psi.b(l, j);
        }
    }
    PPFormula::new(ring, phi.side, n, m1 + m2, k, a, b)
}

/// Sum: `∃x̄₁ : φ(x̄₁) ∧ ψ(x̄ - x̄₁)`.
///
/// Bound variables are `x̄₁`, then φ's, then ψ's.
pub fn pp_sum(phi: &PPFormula, psi: &PPFormula) -> Result<PPFormula> {
    phi.ensure_compatible(psi)?;
    let ring = &phi.ring;
    let n = phi.free;
    let (m1, k1, m2, k2) = (phi.bound, phi.constraints, psi.bound, psi.constraints);
    let k = k1 + k2;
    let m = n + m1 + m2;
    let mut a = vec![ring.zero(); n * k];
    for i in 0..n {
        for j in 0..k2 {
            a[i * k + k1 + j] = psi.a(i, j);
        }
    }
    let mut b = vec![ring.zero(); m * k];
    for i in 0..n {
        for j in 0..k1 {
            b[i * k + j] = phi.a(i, j);
        }
        for j in 0..k2 {
            b[i * k + k1 + j] = ring.neg(psi.a(i, j));
        }
    }
    for l in 0..m1 {
        for j in 0..k1 {
            b[(n + l) * k + j] = phi.b(l, j);
        }
    }
    for l in 0..m2 {
        for j in 0..k2 {
            b[(n + m1 + l) * k + k1 + j] = psi.b(l, j);
        }
    }
    PPFormula::new(ring, phi.side, n, m, k, a, b)
}

/// A coefficient as the formula DSL writes it: a small integer when the
/// element lies in the prime subring, `#i` for carrier index `i` otherwise.
pub fn coefficient_text(ring: &FiniteRing, r: usize) -> String {
    match ring.as_int(r) {
        Some(n) => n.to_string(),
        None => format!("#{r}"),
    }
}

fn var_name(free: usize, v: usize) -> String {
    if v < free {
        if free == 1 {
            "v".into()
        } else {
            format!("v{}", v + 1)
        }
    } else {
        format!("y{}", v - free + 1)
    }
}

/// Prints in the formula DSL; the output parses back to the same matrices
/// (up to dropped all-zero constraints).
impl fmt::Display for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = &self.ring;
        let nv = self.free + self.bound;
        let mut eqs: Vec<String> = Vec::new();
        let mut seen_order: Vec<usize> = Vec::new();
        let mut rows = Vec::new();
        for j in 0..self.constraints {
            let mut terms = Vec::new();
            for v in 0..nv {
                let c = self.coefficient(v, j);
                if c == ring.zero() {
                    continue;
                }
                if v < self.free && !seen_order.contains(&v) {
                    seen_order.push(v);
                }
                let name = var_name(self.free, v);
                terms.push(if c == ring.one() {
                    name
                } else {
                    format!("{}*{}", coefficient_text(ring, c), name)
                });
            }
            if !terms.is_empty() {
                rows.push(format!("{} = 0", terms.join(" + ")));
            }
        }
        // free variables must first appear in index order for the parser to
        // recover the same variable order
        if seen_order != (0..self.free).collect::<Vec<_>>() {
            for v in 0..self.free {
                let name = var_name(self.free, v);
                eqs.push(format!("{name} = {name}"));
            }
        }
        eqs.extend(rows);
        if eqs.is_empty() {
            let name = var_name(self.free, 0);
            eqs.push(format!("{name} = {name}"));
        }
        if self.bound > 0 {
            let bound: Vec<String> = (0..self.bound)
                .map(|l| var_name(self.free, self.free + l))
                .collect();
            write!(f, "E {} : ", bound.join(" "))?;
        }
        write!(f, "{}", eqs.join(" & "))
    }
}

impl fmt::Debug for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PPFormula[{} {}]({})", self.side, self.ring.name(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring_zmod;

    #[test]
    fn dual_of_divisibility_is_annihilation_shape() {
        let z4 = ring_zmod(4).unwrap();
        let div = PPFormula::divisible_by(&z4, Side::Right, 2);
        let d = pp_dual(&div);
        assert_eq!(d.side(), Side::Left);
        assert_eq!((d.free(), d.bound(), d.constraints()), (1, 1, 2));
        // v - z = 0 and -2 z = 0
        assert_eq!(d.a_matrix(), &[1, 0]);
        assert_eq!(d.b_matrix(), &[3, 2]);
    }

    #[test]
    fn dual_of_equals_zero_has_no_bound_constraints() {
        let z6 = ring_zmod(6).unwrap();
        let d = pp_dual(&PPFormula::equals_zero(&z6, Side::Right, 1));
        // ∃z : v = z, which is v = v
        assert_eq!((d.free(), d.bound(), d.constraints()), (1, 1, 1));
        let t = pp_dual(&PPFormula::tautology(&z6, Side::Right, 1));
        // v = 0
        assert_eq!((t.free(), t.bound(), t.constraints()), (1, 0, 1));
    }

    #[test]
    fn connective_shapes() {
        let z4 = ring_zmod(4).unwrap();
        let p = PPFormula::divisible_by(&z4, Side::Left, 2);
        let q = PPFormula::annihilated_by(&z4, Side::Left, 2);
        let s = pp_sum(&p, &q).unwrap();
        assert_eq!((s.free(), s.bound(), s.constraints()), (1, 2, 2));
        let m = pp_meet(&p, &q).unwrap();
        assert_eq!((m.free(), m.bound(), m.constraints()), (1, 1, 2));
        let other = PPFormula::tautology(&z4, Side::Right, 1);
        assert!(pp_sum(&p, &other).is_err());
    }

    #[test]
    fn display() {
        let z4 = ring_zmod(4).unwrap();
        assert_eq!(
            PPFormula::divisible_by(&z4, Side::Right, 2).to_string(),
            "E y1 : v + 2*y1 = 0"
        );
        assert_eq!(PPFormula::tautology(&z4, Side::Right, 1).to_string(), "v = v");
    }
}
