//! Definable subcategories through pp-pairs, their elementary duals, and
//! finite shadows of the `lim→` and `Prod` closures.
//!
//! A pair `φ/ψ` with `ψ ≤ φ` is closed on `X` when `φ(X) = ψ(X)`. Pairs are
//! always of the form `φ / (φ ∧ ψ)`, so closure on `X` is `φ(X) ⊆ ψ(X)`.

use serde::Serialize;

use crate::algebra::decompose::{summand_power, Profile};
use crate::algebra::{FactorCatalog, FiniteModule, FiniteRing, Side};
use crate::duality::{dual_in, DualityKind, Membership};
use crate::error::{Error, Result};
use crate::pp::{pp_dual, pp_equivalent, pp_meet, pp_solve, scan_definable, PPFormula};

/// A pp-pair `top / bottom` with `bottom ≤ top`.
#[derive(Clone, Debug)]
pub struct PPPair {
    pub top: PPFormula,
    pub bottom: PPFormula,
}

impl PPPair {
    /// Checks `bottom(M) ⊆ top(M)` on every module of `testset`.
    pub fn new(top: PPFormula, bottom: PPFormula, testset: &[FiniteModule]) -> Result<Self> {
        top.ensure_compatible(&bottom)?;
        for m in testset {
            if !pp_solve(&bottom, m)?.is_subset(&pp_solve(&top, m)?) {
                return Err(Error::invalid_argument(format!(
                    "bottom of the pair is not contained in its top on {}",
                    m.name()
                )));
            }
        }
        Ok(PPPair { top, bottom })
    }

    /// `φ / (φ ∧ ψ)`.
    pub fn cut(phi: &PPFormula, psi: &PPFormula) -> Result<Self> {
        Ok(PPPair {
            top: phi.clone(),
            bottom: pp_meet(phi, psi)?,
        })
    }

    pub fn is_closed_on(&self, m: &FiniteModule) -> Result<bool> {
        Ok(pp_solve(&self.top, m)? == pp_solve(&self.bottom, m)?)
    }

    /// `Dψ / Dφ`: duality reverses the pair.
    pub fn dual(&self) -> PPPair {
        PPPair {
            top: pp_dual(&self.bottom),
            bottom: pp_dual(&self.top),
        }
    }

    /// Same top and bottom solution sets on every module of `testset`.
    pub fn equivalent(&self, other: &PPPair, testset: &[FiniteModule]) -> Result<bool> {
        Ok(pp_equivalent(&self.top, &other.top, testset)?
            && pp_equivalent(&self.bottom, &other.bottom, testset)?)
    }
}

impl std::fmt::Display for PPPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) / ({})", self.top, self.bottom)
    }
}

/// Generators of a definable subcategory with the pairs found closed on them.
#[derive(Clone, Debug)]
pub struct DefinableWitness {
    pub ring: FiniteRing,
    pub side: Side,
    pub generators: Vec<FiniteModule>,
    /// Closed on every generator and open on some probe module.
    pub closed_pairs: Vec<PPPair>,
    pub bound: usize,
}

fn check_modules(ring: &FiniteRing, side: Side, ms: &[FiniteModule]) -> Result<()> {
    for m in ms {
        if !m.ring().same_as(ring) || m.side() != side {
            return Err(Error::mismatch(format!(
                "module {} is not a {side} module over {}",
                m.name(),
                ring.name()
            )));
        }
    }
    Ok(())
}

/// Collects the pairs (up to `bound`) closed on all generators but open on some probe.
pub fn definable_witness(
    ring: &FiniteRing,
    side: Side,
    generators: &[FiniteModule],
    probes: &[FiniteModule],
    bound: usize,
) -> Result<DefinableWitness> {
    check_modules(ring, side, generators)?;
    check_modules(ring, side, probes)?;
    let all: Vec<FiniteModule> = generators.iter().chain(probes).cloned().collect();
    let found = scan_definable(ring, side, &all, bound)?;
    let g = generators.len();
    let mut closed_pairs = Vec::new();
    for a in &found {
        for b in &found {
            let closed = (0..g).all(|i| a.solutions[i].is_subset(&b.solutions[i]));
            let opens = (g..all.len()).any(|i| !a.solutions[i].is_subset(&b.solutions[i]));
            if closed && opens {
                closed_pairs.push(PPPair::cut(&a.formula, &b.formula)?);
            }
        }
    }
    Ok(DefinableWitness {
        ring: ring.clone(),
        side,
        generators: generators.to_vec(),
        closed_pairs,
        bound,
    })
}

impl DefinableWitness {
    /// Every stored pair is closed on every generator.
    pub fn verify(&self) -> Result<bool> {
        for p in &self.closed_pairs {
            for g in &self.generators {
                if !p.is_closed_on(g)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct DefcatMembership {
    pub member: bool,
    /// Closed on every generator, open on the candidate.
    pub separating: Option<PPPair>,
}

/// Membership by a fresh scan over the generators and `x`: every pair closed
/// on all generators must be closed on `x`.
pub fn in_defcat(x: &FiniteModule, w: &DefinableWitness) -> Result<DefcatMembership> {
    check_modules(&w.ring, w.side, std::slice::from_ref(x))?;
    let mut all = w.generators.clone();
    all.push(x.clone());
    let found = scan_definable(&w.ring, w.side, &all, w.bound)?;
    let g = w.generators.len();
    for a in &found {
        for b in &found {
            let closed = (0..g).all(|i| a.solutions[i].is_subset(&b.solutions[i]));
            if closed && !a.solutions[g].is_subset(&b.solutions[g]) {
                return Ok(DefcatMembership {
                    member: false,
                    separating: Some(PPPair::cut(&a.formula, &b.formula)?),
                });
            }
        }
    }
    Ok(DefcatMembership {
        member: true,
        separating: None,
    })
}

/// The dual class: duals of the generators and reversed elementary duals of the pairs.
///
/// Each dual pair is checked closed on each dual generator.
pub fn dual_defcat(w: &DefinableWitness, kind: DualityKind) -> Result<DefinableWitness> {
    let generators = w
        .generators
        .iter()
        .map(|g| dual_in(g, kind).map(|d| d.dual))
        .collect::<Result<Vec<_>>>()?;
    let closed_pairs: Vec<PPPair> = w.closed_pairs.iter().map(PPPair::dual).collect();
    let out = DefinableWitness {
        ring: w.ring.clone(),
        side: w.side.opposite(),
        generators,
        closed_pairs,
        bound: w.bound,
    };
    if !out.verify()? {
        return Err(Error::Disagreement("a dual pair opens on a dual generator".into()));
    }
    Ok(out)
}

fn sum_profiles(profiles: &[Profile]) -> Profile {
    let mut total = Profile::new();
    for p in profiles {
        for (&c, &k) in p {
            *total.entry(c).or_default() += k;
        }
    }
    total
}

/// `m` is a summand of a finite direct sum of members of `b` (Krull–Schmidt).
pub fn in_limclosure_fp(m: &FiniteModule, b: &[FiniteModule]) -> Result<bool> {
    check_modules(m.ring(), m.side(), b)?;
    let mut cat = FactorCatalog::new();
    let pm = cat.profile(m)?;
    let pb = b.iter().map(|x| cat.profile(x)).collect::<Result<Vec<_>>>()?;
    let total = sum_profiles(&pb);
    Ok(pm.keys().all(|c| total.contains_key(c)))
}

/// `X ∈ Prod(Y_1, …, Y_r)` tested as a summand of `(⊕ Y_i)^k` with `k ≤ k_max`.
pub fn in_prod_of(x: &FiniteModule, ys: &[FiniteModule], k_max: usize) -> Result<Membership> {
    check_modules(x.ring(), x.side(), ys)?;
    let mut cat = FactorCatalog::new();
    let px = cat.profile(x)?;
    let py = ys.iter().map(|y| cat.profile(y)).collect::<Result<Vec<_>>>()?;
    let total = sum_profiles(&py);
    Ok(match summand_power(&px, &total) {
        None => {
            let missing = px.keys().find(|c| !total.contains_key(c)).expect("a factor is missing");
            Membership::NonMember {
                missing_factor: cat.classes()[*missing].name().to_string(),
            }
        }
        Some(k) if k > k_max => Membership::Inconclusive { needed: k, k_max },
        Some(k) => Membership::Member { k },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm51Row {
    pub module: String,
    pub in_lim_closure: bool,
    pub dual_in_prod: Membership,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm51Report {
    pub rows: Vec<Thm51Row>,
    pub violations: usize,
    pub inconclusive: usize,
}

/// `M ∈ lim→ B ⟺ M* ∈ Prod(B*)` on every module of `testset`.
pub fn thm51_check(
    b: &[FiniteModule],
    testset: &[FiniteModule],
    kind: DualityKind,
    k_max: Option<usize>,
) -> Result<Thm51Report> {
    let b_duals = b
        .iter()
        .map(|x| dual_in(x, kind).map(|d| d.dual))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for m in testset {
        let lim = in_limclosure_fp(m, b)?;
        let md = dual_in(m, kind)?.dual;
        let prod = in_prod_of(&md, &b_duals, k_max.unwrap_or(m.size()))?;
        let agrees = match &prod {
            Membership::Inconclusive { .. } => true,
            p => p.is_member() == lim,
        };
        rows.push(Thm51Row {
            module: m.name().to_string(),
            in_lim_closure: lim,
            dual_in_prod: prod,
            agrees,
        });
    }
    Ok(Thm51Report {
        violations: rows.iter().filter(|r| !r.agrees).count(),
        inconclusive: rows
            .iter()
            .filter(|r| matches!(r.dual_in_prod, Membership::Inconclusive { .. }))
            .count(),
        rows,
    })
}

/// A finite membership predicate standing in for a class.
#[derive(Clone, Debug)]
pub enum Shadow {
    Everything,
    /// Only the zero module.
    Zero,
    /// Summands of finite direct sums (equivalently, at finite scale, products) of the listed modules.
    Summands(Vec<FiniteModule>),
    Definable(DefinableWitness),
}

impl Shadow {
    pub fn contains(&self, m: &FiniteModule) -> Result<bool> {
        match self {
            Shadow::Everything => Ok(true),
            Shadow::Zero => Ok(m.is_zero()),
            Shadow::Summands(list) => in_limclosure_fp(m, list),
            Shadow::Definable(w) => Ok(in_defcat(m, w)?.member),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlmostDualPairWitness {
    pub left_testset: Vec<FiniteModule>,
    pub right_testset: Vec<FiniteModule>,
    pub kind: DualityKind,
    pub s_shadow: Shadow,
    pub p_shadow: Shadow,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlmostDualPairReport {
    /// `M ∈ S ⟺ M* ∈ P` on the left test set; names of violating modules.
    pub duality_violations: Vec<String>,
    /// Right test set members in `P` whose pairwise sums or summands leave `P`.
    pub prod_violations: Vec<String>,
    pub hull_closure: &'static str,
    pub pass: bool,
}

pub fn verify_almost_dual_pair(w: &AlmostDualPairWitness) -> Result<AlmostDualPairReport> {
    let mut duality_violations = Vec::new();
    for m in &w.left_testset {
        let s = w.s_shadow.contains(m)?;
        let p = w.p_shadow.contains(&dual_in(m, w.kind)?.dual)?;
        if s != p {
            duality_violations.push(m.name().to_string());
        }
    }
    let mut prod_violations = Vec::new();
    let members: Vec<&FiniteModule> = w
        .right_testset
        .iter()
        .map(|p| w.p_shadow.contains(p).map(|ok| ok.then_some(p)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i..] {
            let s = crate::algebra::direct_sum(a.ring(), a.side(), &[(*a).clone(), (*b).clone()])?;
            if !w.p_shadow.contains(&s.module)? {
                prod_violations.push(format!("{} + {}", a.name(), b.name()));
            }
        }
        for s in crate::algebra::decompose_indecomposable(a)?.summands {
            if !w.p_shadow.contains(&s.module)? {
                prod_violations.push(s.module.name().to_string());
            }
        }
    }
    let pass = duality_violations.is_empty() && prod_violations.is_empty();
    Ok(AlmostDualPairReport {
        duality_violations,
        prod_violations,
        hull_closure: "vacuously holds (finite)",
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{direct_sum, ring_zmod};

    fn cyc(n: usize, ideal: &[usize]) -> FiniteModule {
        FiniteModule::cyclic_quotient(&ring_zmod(n).unwrap(), Side::Left, ideal).unwrap()
    }

    #[test]
    fn z2_is_separated_from_z4() {
        let (z2, z4) = (cyc(4, &[2]), cyc(4, &[]));
        let r = z4.ring().clone();
        let w = definable_witness(&r, Side::Left, &[z4.clone()], &[z2.clone()], 2).unwrap();
        assert!(w.verify().unwrap());
        let res = in_defcat(&z2, &w).unwrap();
        assert!(!res.member);
        let pair = res.separating.unwrap();
        assert!(pair.is_closed_on(&z4).unwrap());
        assert!(!pair.is_closed_on(&z2).unwrap());
        let top = pp_solve(&pair.top, &z2).unwrap().to_set().to_vec();
        let bottom = pp_solve(&pair.bottom, &z2).unwrap().to_set().to_vec();
        assert_eq!((top, bottom), (vec![0, 1], vec![0]));
        assert!(in_defcat(&z4, &w).unwrap().member);
    }

    #[test]
    fn finite_sums_stay_inside() {
        let f2 = ring_zmod(2).unwrap();
        let k = FiniteModule::regular(&f2, Side::Left);
        let kk = direct_sum(&f2, Side::Left, &[k.clone(), k.clone()]).unwrap().module;
        let w = definable_witness(&f2, Side::Left, &[k], &[], 2).unwrap();
        assert!(in_defcat(&kk, &w).unwrap().member);
    }

    #[test]
    fn dual_witness_is_involutive() {
        let (z2, z4) = (cyc(4, &[2]), cyc(4, &[]));
        let r = z4.ring().clone();
        let w = definable_witness(&r, Side::Left, &[z4.clone()], &[z2.clone()], 1).unwrap();
        assert!(!w.closed_pairs.is_empty());
        let d = dual_defcat(&w, DualityKind::Character).unwrap();
        assert_eq!(d.side, Side::Right);
        let dd = dual_defcat(&d, DualityKind::Character).unwrap();
        let suite = [z2, z4];
        for (p, q) in w.closed_pairs.iter().zip(&dd.closed_pairs) {
            assert!(p.equivalent(q, &suite).unwrap());
        }
    }

    #[test]
    fn lim_closure_examples() {
        let r = ring_zmod(6).unwrap();
        let (z2, z3) = (cyc(6, &[2]), cyc(6, &[3]));
        let z6 = cyc(6, &[]);
        assert!(in_limclosure_fp(&z6, &[z2.clone(), z3.clone()]).unwrap());
        assert!(!in_limclosure_fp(&cyc(4, &[]), &[cyc(4, &[2])]).unwrap());
        let zero = FiniteModule::zero_module(&r, Side::Left);
        assert!(in_limclosure_fp(&zero, &[]).unwrap());
        let rep = thm51_check(&[z2.clone()], &[z2, z3, z6], DualityKind::Character, None).unwrap();
        assert_eq!(rep.violations, 0);
        let lims: Vec<bool> = rep.rows.iter().map(|r| r.in_lim_closure).collect();
        assert_eq!(lims, vec![true, false, false]);
    }

    #[test]
    fn almost_dual_pair_over_z6() {
        let z6 = cyc(6, &[]);
        let r = z6.ring().clone();
        let (z2, z3) = (cyc(6, &[2]), cyc(6, &[3]));
        let zero = FiniteModule::zero_module(&r, Side::Left);
        let z2d = dual_in(&z2, DualityKind::Character).unwrap().dual;
        let right: Vec<FiniteModule> = [&zero, &z2, &z3, &z6]
            .iter()
            .map(|m| dual_in(m, DualityKind::Character).unwrap().dual)
            .collect();
        let w = AlmostDualPairWitness {
            left_testset: vec![zero, z2.clone(), z3, z6],
            right_testset: right,
            kind: DualityKind::Character,
            s_shadow: Shadow::Summands(vec![z2]),
            p_shadow: Shadow::Summands(vec![z2d]),
        };
        assert!(verify_almost_dual_pair(&w).unwrap().pass);
    }
}
