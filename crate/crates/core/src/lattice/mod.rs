//! The lattice of pp-definable subgroups of a finite module.
//!
//! Subgroups come from a bounded formula scan and are closed under sum and
//! intersection. In a finite module the smallest pp-definable subgroup
//! containing `a` is `End(M)·a`, so the pp-definable subgroups are exactly the
//! `End(M)`-submodules. That gives an independent completeness test: once the
//! scanned lattice has as many elements as the `End`-submodule lattice it
//! cannot grow at any larger bound.

pub mod dot;

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::decompose::end_submodules;
use crate::algebra::FiniteModule;
use crate::duality::{dual_in, DualModule, DualityKind};
use crate::elemset::ElementSet;
use crate::error::{Error, Result};
use crate::pp::{pp_dual, pp_meet, pp_solve, pp_sum, scan_definable, PPFormula, MAX_BOUND};

/// A pp-definable subgroup with one formula defining it.
#[derive(Clone, Debug)]
pub struct LatticeElement {
    pub set: ElementSet,
    pub witness: PPFormula,
}

/// How far the enumeration bound is known to suffice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Stability {
    /// Equal to the `End`-submodule lattice: no larger bound adds anything.
    Complete,
    /// Unchanged when re-scanned at `bound + 1`.
    Stable,
    /// Still growing, or unverifiable, at the hard cap.
    Unsettled,
}

#[derive(Clone, Debug)]
pub struct PPLattice {
    module: FiniteModule,
    elements: Vec<LatticeElement>,
    index: HashMap<ElementSet, usize>,
    join: Vec<usize>,
    meet: Vec<usize>,
    requested_bound: usize,
    bound: usize,
    stability: Stability,
}

impl PPLattice {
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[LatticeElement] {
        &self.elements
    }

    pub fn set(&self, i: usize) -> &ElementSet {
        &self.elements[i].set
    }

    pub fn witness(&self, i: usize) -> &PPFormula {
        &self.elements[i].witness
    }

    pub fn index_of(&self, set: &ElementSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.meet(i, j) == i
    }

    /// Bound the caller asked for.
    pub fn requested_bound(&self) -> usize {
        self.requested_bound
    }

    /// Bound actually used after escalation.
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn stability(&self) -> Stability {
        self.stability
    }

    /// `j` covers `i`.
    pub fn covers(&self, i: usize, j: usize) -> bool {
        i != j
            && self.leq(i, j)
            && (0..self.len()).all(|k| k == i || k == j || !(self.leq(i, k) && self.leq(k, j)))
    }

    /// First triple violating `a ≤ c ⇒ a ∨ (b ∧ c) = (a ∨ b) ∧ c`.
    pub fn modular_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for c in 0..n {
                if !self.leq(a, c) {
                    continue;
                }
                for b in 0..n {
                    if self.join(a, self.meet(b, c)) != self.meet(self.join(a, b), c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Every element's witness defines it, and joins and meets are sums and intersections.
    pub fn verify(&self) -> Result<bool> {
        let m = &self.module;
        for e in &self.elements {
            if pp_solve(&e.witness, m)?.to_set() != e.set {
                return Ok(false);
            }
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                if *self.set(self.join(i, j)) != m.subgroup_sum(self.set(i), self.set(j))
                    || *self.set(self.meet(i, j)) != self.set(i).intersection(self.set(j))
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn close(m: &FiniteModule, mut elements: Vec<LatticeElement>) -> Result<Vec<LatticeElement>> {
    let mut seen: HashMap<ElementSet, ()> = elements.iter().map(|e| (e.set.clone(), ())).collect();
    let mut done = 0;
    // new elements only need combining with everything before them
    while done < elements.len() {
        let end = elements.len();
        for i in done..end {
            for j in 0..end {
                if j >= done && j > i {
                    continue;
                }
                let (a, b) = (&elements[i], &elements[j]);
                let sum = m.subgroup_sum(&a.set, &b.set);
                if !seen.contains_key(&sum) {
                    let w = pp_sum(&b.witness, &a.witness)?;
                    seen.insert(sum.clone(), ());
                    elements.push(LatticeElement { set: sum, witness: w });
                }
                let (a, b) = (&elements[i], &elements[j]);
                let meet = a.set.intersection(&b.set);
                if !seen.contains_key(&meet) {
                    let w = pp_meet(&b.witness, &a.witness)?;
                    seen.insert(meet.clone(), ());
                    elements.push(LatticeElement { set: meet, witness: w });
                }
            }
        }
        done = end;
    }
    Ok(elements)
}

fn build(m: &FiniteModule, bound: usize) -> Result<Vec<LatticeElement>> {
    let scanned = scan_definable(m.ring(), m.side(), std::slice::from_ref(m), bound)?;
    let elements = scanned
        .into_iter()
        .map(|d| LatticeElement {
            set: d.solutions.into_iter().next().expect("one module"),
            witness: d.formula,
        })
        .collect();
    let mut elements = close(m, elements)?;
    elements.sort_by(|a, b| a.set.cmp(&b.set));
    Ok(elements)
}

fn assemble(
    m: &FiniteModule,
    elements: Vec<LatticeElement>,
    requested_bound: usize,
    bound: usize,
    stability: Stability,
) -> PPLattice {
    let index: HashMap<ElementSet, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.set.clone(), i))
        .collect();
    let n = elements.len();
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            join[i * n + j] = index[&m.subgroup_sum(&elements[i].set, &elements[j].set)];
            meet[i * n + j] = index[&elements[i].set.intersection(&elements[j].set)];
        }
    }
    PPLattice {
        module: m.clone(),
        elements,
        index,
        join,
        meet,
        requested_bound,
        bound,
        stability,
    }
}

/// The lattice of pp-definable subgroups found by formulas with at most
/// `bound` bound variables and constraints, escalating the bound (up to 3)
/// until it is complete or stops growing.
pub fn pp_lattice(m: &FiniteModule, bound: usize) -> Result<PPLattice> {
    let target = match end_submodules(m) {
        Ok(subs) => Some(subs.len()),
        Err(Error::EndTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut b = bound;
    let mut elements = build(m, b)?;
    loop {
        if Some(elements.len()) == target {
            return Ok(assemble(m, elements, bound, b, Stability::Complete));
        }
        if b >= MAX_BOUND.max(bound) {
            return Ok(assemble(m, elements, bound, b, Stability::Unsettled));
        }
        let next = match build(m, b + 1) {
            Ok(next) => next,
            Err(Error::SizeGuard { .. }) => {
                return Ok(assemble(m, elements, bound, b, Stability::Unsettled))
            }
            Err(e) => return Err(e),
        };
        if next.len() == elements.len() && target.is_none() {
            return Ok(assemble(m, elements, bound, b, Stability::Stable));
        }
        b += 1;
        elements = next;
    }
}

/// A filter of the lattice, with the element realizing it when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PPType {
    pub members: Vec<usize>,
    pub realized_by: Option<usize>,
}

impl PPType {
    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_filter(&self, l: &PPLattice) -> bool {
        !self.members.is_empty()
            && self.members.iter().all(|&i| {
                (0..l.len()).all(|j| !l.leq(i, j) || self.contains(j))
                    && self.members.iter().all(|&j| self.contains(l.meet(i, j)))
            })
    }
}

/// A down-closed, join-closed set of lattice elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeIdeal {
    pub members: Vec<usize>,
}

impl LatticeIdeal {
    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_ideal(&self, l: &PPLattice) -> bool {
        !self.members.is_empty()
            && self.members.iter().all(|&i| {
                (0..l.len()).all(|j| !l.leq(j, i) || self.contains(j))
                    && self.members.iter().all(|&j| self.contains(l.join(i, j)))
            })
    }

    /// The largest member; every ideal of a finite lattice is principal.
    pub fn generator(&self, l: &PPLattice) -> usize {
        self.members.iter().fold(l.bottom(), |acc, &i| l.join(acc, i))
    }

    /// No member contains `a`.
    pub fn avoids(&self, l: &PPLattice, a: usize) -> bool {
        self.members.iter().all(|&i| !l.set(i).contains(a))
    }
}

/// `{G ∈ L : a ∈ G}`.
pub fn pp_type_of(a: usize, l: &PPLattice) -> Result<PPType> {
    if a >= l.module().size() {
        return Err(Error::invalid_argument(format!(
            "{a} is not an element of {}",
            l.module().name()
        )));
    }
    Ok(PPType {
        members: (0..l.len()).filter(|&i| l.set(i).contains(a)).collect(),
        realized_by: Some(a),
    })
}

fn principal_ideal(l: &PPLattice, g: usize) -> LatticeIdeal {
    LatticeIdeal {
        members: (0..l.len()).filter(|&i| l.leq(i, g)).collect(),
    }
}

/// A maximal ideal all of whose members avoid `a`, grown greedily in index order.
///
/// Maximality is re-checked: every non-member joined with the generator contains `a`.
pub fn max_ideal_avoiding(l: &PPLattice, a: usize) -> Result<LatticeIdeal> {
    let m = l.module();
    if a >= m.size() {
        return Err(Error::invalid_argument(format!("{a} is not an element of {}", m.name())));
    }
    if a == m.zero() {
        return Err(Error::invalid_argument("no ideal avoids 0"));
    }
    let mut g = l.bottom();
    for i in 0..l.len() {
        let j = l.join(g, i);
        if !l.set(j).contains(a) {
            g = j;
        }
    }
    let ideal = principal_ideal(l, g);
    let maximal = (0..l.len())
        .filter(|&i| !ideal.contains(i))
        .all(|i| l.set(l.join(g, i)).contains(a));
    if !ideal.avoids(l, a) || !maximal {
        return Err(Error::Disagreement(format!(
            "greedy ideal for {a} in {} is not maximal avoiding",
            m.name()
        )));
    }
    Ok(ideal)
}

/// Result of the irreducibility test on a filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZieglerResult {
    pub irreducible: bool,
    /// A pair `G1, G2` outside the filter that no member repairs.
    pub witness: Option<(usize, usize)>,
}

/// For all `G1, G2 ∉ p` some `H ∈ p` has `(H ∧ G1) + (H ∧ G2) ∉ p`.
///
/// Checked against the computed finite lattice only.
pub fn ziegler_irreducible(l: &PPLattice, p: &PPType) -> Result<ZieglerResult> {
    if !p.is_filter(l) {
        return Err(Error::invalid_argument("pp-type is not a filter of the lattice"));
    }
    let outside: Vec<usize> = (0..l.len()).filter(|&i| !p.contains(i)).collect();
    for &g1 in &outside {
        for &g2 in &outside {
            let repaired = p
                .members
                .iter()
                .any(|&h| !p.contains(l.join(l.meet(h, g1), l.meet(h, g2))));
            if !repaired {
                return Ok(ZieglerResult {
                    irreducible: false,
                    witness: Some((g1, g2)),
                });
            }
        }
    }
    Ok(ZieglerResult {
        irreducible: true,
        witness: None,
    })
}

/// The correspondence `φ(M) ↦ Dφ(M*)` between the two lattices.
#[derive(Clone, Debug)]
pub struct AntiIso {
    pub dual: DualModule,
    pub dual_lattice: PPLattice,
    /// Image index in the dual lattice, when the image was found there.
    pub map: Vec<Option<usize>>,
    pub verdict: AntiIsoVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AntiIsoVerdict {
    Pass,
    Fail,
    /// The two lattices differ in size at the bound used.
    Inconclusive,
}

impl AntiIso {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| (i, j)))
            .collect()
    }
}

/// Checks that `φ(M) ↦ Dφ(M*)` is an order-reversing bijection exchanging joins and meets.
pub fn lattice_antiiso_check(m: &FiniteModule, bound: usize, kind: DualityKind) -> Result<AntiIso> {
    let l = pp_lattice(m, bound)?;
    let dual = dual_in(m, kind)?;
    let dual_lattice = pp_lattice(&dual.dual, bound)?;
    antiiso_between(&l, dual, dual_lattice)
}

pub fn antiiso_between(l: &PPLattice, dual: DualModule, dual_lattice: PPLattice) -> Result<AntiIso> {
    let mut map = Vec::with_capacity(l.len());
    for e in l.elements() {
        let image = pp_solve(&pp_dual(&e.witness), &dual.dual)?.to_set();
        map.push(dual_lattice.index_of(&image));
    }
    let verdict = if l.len() != dual_lattice.len() {
        AntiIsoVerdict::Inconclusive
    } else if map.iter().any(|j| j.is_none()) {
        AntiIsoVerdict::Fail
    } else {
        let f: Vec<usize> = map.iter().map(|j| j.unwrap()).collect();
        let mut hit = vec![false; f.len()];
        let bijective = f.iter().all(|&j| !std::mem::replace(&mut hit[j], true));
        let n = l.len();
        let exchanges = (0..n).all(|i| {
            (0..n).all(|j| {
                f[l.join(i, j)] == dual_lattice.meet(f[i], f[j])
                    && f[l.meet(i, j)] == dual_lattice.join(f[i], f[j])
                    && l.leq(i, j) == dual_lattice.leq(f[j], f[i])
            })
        });
        if bijective && exchanges {
            AntiIsoVerdict::Pass
        } else {
            AntiIsoVerdict::Fail
        }
    };
    Ok(AntiIso {
        dual,
        dual_lattice,
        map,
        verdict,
    })
}

/// A character separating `a` from an ideal, with its pp-type in the dual lattice.
#[derive(Clone, Debug)]
pub struct DualElement {
    pub character: usize,
    pub pp_type: PPType,
    /// `{D(G) : G ∈ I}` transported through the anti-isomorphism.
    pub predicted: Vec<usize>,
}

impl DualElement {
    pub fn matches_prediction(&self) -> bool {
        self.pp_type.members == self.predicted
    }
}

/// The first character (in dual index order) killing `ΣI` but not `a`.
pub fn construct_dual_element(
    l: &PPLattice,
    ideal: &LatticeIdeal,
    a: usize,
    anti: &AntiIso,
) -> Result<DualElement> {
    if !ideal.avoids(l, a) {
        return Err(Error::invalid_argument("ideal does not avoid the element"));
    }
    let g = ideal.generator(l);
    let dual = &anti.dual;
    let f = (0..dual.dual.size())
        .find(|&f| dual.eval(f, a) != 0 && l.set(g).iter().all(|x| dual.eval(f, x) == 0))
        .ok_or_else(|| Error::Disagreement("no separating character; pairing is degenerate".into()))?;
    let pp_type = pp_type_of(f, &anti.dual_lattice)?;
    let mut predicted: Vec<usize> = ideal
        .members
        .iter()
        .map(|&i| {
            anti.map[i].ok_or_else(|| Error::Disagreement("ideal member has no dual image".into()))
        })
        .collect::<Result<_>>()?;
    predicted.sort_unstable();
    Ok(DualElement {
        character: f,
        pp_type,
        predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ring_zmod, Side};

    fn cyc(n: usize) -> FiniteModule {
        FiniteModule::regular(&ring_zmod(n).unwrap(), Side::Left)
    }

    fn sizes(l: &PPLattice) -> Vec<usize> {
        l.elements().iter().map(|e| e.set.len()).collect()
    }

    #[test]
    fn expected_lattices() {
        let l4 = pp_lattice(&cyc(4), 2).unwrap();
        assert_eq!(sizes(&l4), vec![1, 2, 4]);
        assert_eq!(l4.stability(), Stability::Complete);
        assert!(l4.verify().unwrap());
        assert_eq!(sizes(&pp_lattice(&cyc(2), 1).unwrap()), vec![1, 2]);
        let l6 = pp_lattice(&cyc(6), 2).unwrap();
        assert_eq!(sizes(&l6), vec![1, 2, 3, 6]);
        assert!(l6.modular_violation().is_none());
        assert_eq!(sizes(&pp_lattice(&cyc(8), 2).unwrap()), vec![1, 2, 4, 8]);
    }

    #[test]
    fn types_and_ideals_in_z4() {
        let l = pp_lattice(&cyc(4), 2).unwrap();
        assert_eq!(pp_type_of(0, &l).unwrap().members, vec![0, 1, 2]);
        assert_eq!(pp_type_of(2, &l).unwrap().members, vec![1, 2]);
        let p1 = pp_type_of(1, &l).unwrap();
        assert_eq!(p1.members, vec![2]);
        assert_eq!(max_ideal_avoiding(&l, 1).unwrap().members, vec![0, 1]);
        assert_eq!(max_ideal_avoiding(&l, 2).unwrap().members, vec![0]);
        assert!(max_ideal_avoiding(&l, 0).is_err());
        assert!(ziegler_irreducible(&l, &p1).unwrap().irreducible);
    }

    #[test]
    fn z6_top_filter_is_reducible() {
        let l = pp_lattice(&cyc(6), 2).unwrap();
        let top = PPType {
            members: vec![l.top()],
            realized_by: None,
        };
        let z = ziegler_irreducible(&l, &top).unwrap();
        assert!(!z.irreducible);
        let (g1, g2) = z.witness.unwrap();
        assert_eq!(l.join(g1, g2), l.top());
        // the ideal avoiding the element of order 2 is {0, Z/3-part}
        let ideal = max_ideal_avoiding(&l, 3).unwrap();
        let gens: Vec<usize> = ideal.members.iter().map(|&i| l.set(i).len()).collect();
        assert_eq!(gens, vec![1, 3]);
    }

    #[test]
    fn antiiso_and_dual_elements() {
        for n in [2, 4, 6] {
            let m = cyc(n);
            let l = pp_lattice(&m, 2).unwrap();
            let anti = lattice_antiiso_check(&m, 2, DualityKind::Character).unwrap();
            assert_eq!(anti.verdict, AntiIsoVerdict::Pass);
            for a in 1..n {
                let ideal = max_ideal_avoiding(&l, a).unwrap();
                let de = construct_dual_element(&l, &ideal, a, &anti).unwrap();
                assert_ne!(anti.dual.eval(de.character, a), 0);
                assert!(de.matches_prediction());
                assert!(ziegler_irreducible(&anti.dual_lattice, &de.pp_type).unwrap().irreducible);
            }
        }
    }
}
