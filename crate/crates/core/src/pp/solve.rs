//! Solution sets of pp formulas in finite modules.
//!
//! The solver materializes one relation per constraint over the variables it
//! mentions, then eliminates the bound variables one at a time (join the
//! relations that mention the variable, project it away). The result equals
//! the exhaustive search over `M^(n+m)` but only ever builds the relations the
//! constraint structure forces.

use std::collections::{HashMap, HashSet};

use super::formula::PPFormula;
use crate::algebra::{direct_sum, EndomorphismRing, FiniteModule, Validation};
use crate::elemset::ElementSet;
use crate::error::{guard, Error, Result, MAX_RELATION};

/// A subgroup of `ambient^arity`, stored as a sorted list of tuples.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FiniteModule,
    arity: usize,
    elements: Vec<Vec<usize>>,
}

impl Subgroup {
    pub fn new(ambient: &FiniteModule, arity: usize, mut elements: Vec<Vec<usize>>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup {
            ambient: ambient.clone(),
            arity,
            elements,
        }
    }

    pub fn from_set(ambient: &FiniteModule, set: &ElementSet) -> Self {
        Subgroup {
            ambient: ambient.clone(),
            arity: 1,
            elements: set.iter().map(|x| vec![x]).collect(),
        }
    }

    pub fn ambient(&self) -> &FiniteModule {
        &self.ambient
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(tuple))
            .is_ok()
    }

    /// The underlying set of a one-variable subgroup.
    pub fn to_set(&self) -> ElementSet {
        assert_eq!(self.arity, 1, "to_set needs arity 1");
        ElementSet::from_iter_in(self.ambient.size(), self.elements.iter().map(|e| e[0]))
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// Zero tuple, closure under addition, and (when given) closure under the
    /// diagonal action of every endomorphism.
    pub fn check_closure(&self, end: Option<&EndomorphismRing>) -> Validation {
        let m = &self.ambient;
        let zero = vec![m.zero(); self.arity];
        if !self.contains(&zero) {
            return Validation::fail("contains zero", &zero);
        }
        for a in &self.elements {
            for b in &self.elements {
                let s: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| m.add(x, y)).collect();
                if !self.contains(&s) {
                    return Validation::fail("closed under addition", &[a.clone(), b.clone()].concat());
                }
            }
        }
        if let Some(end) = end {
            for f in 0..end.len() {
                for a in &self.elements {
                    let img: Vec<usize> = a.iter().map(|&x| end.act(f, x)).collect();
                    if !self.contains(&img) {
                        return Validation::fail("closed under End", &[vec![f], a.clone()].concat());
                    }
                }
            }
        }
        Validation::Pass
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.ambient.same_as(&other.ambient)
            && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

struct Relation {
    vars: Vec<usize>,
    rows: Vec<Vec<usize>>,
}

/// Relation `Σ c·x = 0` over the listed `(variable, coefficient)` terms, sorted by variable.
fn linear_relation(m: &FiniteModule, mut terms: Vec<(usize, usize)>) -> Result<Relation> {
    terms.sort_unstable();
    let size = m.size();
    // pivot: the variable whose coefficient has the smallest fibres
    let fibre_width = |c: usize| {
        let mut counts = vec![0usize; size];
        for x in 0..size {
            counts[m.act(c, x)] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    };
    let pivot_pos = (0..terms.len())
        .min_by_key(|&p| fibre_width(terms[p].1))
        .expect("nonempty support");
    let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); size];
    for x in 0..size {
        fibres[m.act(terms[pivot_pos].1, x)].push(x);
    }
    let others: Vec<usize> = (0..terms.len()).filter(|&p| p != pivot_pos).collect();
    guard(
        "pp constraint relation",
        (size as u128).pow(others.len() as u32),
        MAX_RELATION as u128,
    )?;
    let coeffs: Vec<usize> = others.iter().map(|&p| terms[p].1).collect();
    let mut rows = Vec::new();
    let mut assign = vec![0usize; others.len()];
    loop {
        let mut acc = m.zero();
        for (i, &x) in assign.iter().enumerate() {
            acc = m.add(acc, m.act(coeffs[i], x));
        }
        for &x in &fibres[m.neg(acc)] {
            let mut row = vec![0; terms.len()];
            for (i, &p) in others.iter().enumerate() {
                row[p] = assign[i];
            }
            row[pivot_pos] = x;
            rows.push(row);
        }
        // odometer
        let mut i = 0;
        while i < assign.len() {
            assign[i] += 1;
            if assign[i] < size {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == assign.len() {
            break;
        }
    }
    Ok(Relation {
        vars: terms.iter().map(|t| t.0).collect(),
        rows,
    })
}

/// Relations for constraint `j`. Constraints with more than three terms are
/// split into a chain of partial sums held in fresh auxiliary variables,
/// numbered from `next_aux`, which are returned for elimination.
fn constraint_relations(
    phi: &PPFormula,
    m: &FiniteModule,
    j: usize,
    next_aux: &mut usize,
) -> Result<(Vec<Relation>, Vec<usize>)> {
    let ring = phi.ring();
    let nv = phi.free() + phi.bound();
    let terms: Vec<(usize, usize)> = (0..nv)
        .map(|v| (v, phi.coefficient(v, j)))
        .filter(|&(_, c)| c != ring.zero())
        .collect();
    if terms.is_empty() {
        return Ok((vec![], vec![]));
    }
    if terms.len() <= 3 {
        return Ok((vec![linear_relation(m, terms)?], vec![]));
    }
    let (one, minus_one) = (ring.one(), ring.neg(ring.one()));
    let mut rels = Vec::new();
    let mut aux = Vec::new();
    let mut prev = *next_aux;
    *next_aux += 1;
    aux.push(prev);
    rels.push(linear_relation(m, vec![terms[0], terms[1], (prev, minus_one)])?);
    for &t in &terms[2..terms.len() - 1] {
        let cur = *next_aux;
        *next_aux += 1;
        aux.push(cur);
        rels.push(linear_relation(m, vec![(prev, one), t, (cur, minus_one)])?);
        prev = cur;
    }
    rels.push(linear_relation(m, vec![(prev, one), terms[terms.len() - 1]])?);
    Ok((rels, aux))
}

fn join(a: &Relation, b: &Relation) -> Result<Relation> {
    let shared: Vec<usize> = a.vars.iter().copied().filter(|v| b.vars.contains(v)).collect();
    let mut vars: Vec<usize> = a.vars.iter().chain(&b.vars).copied().collect();
    vars.sort_unstable();
    vars.dedup();
    let pos = |r: &Relation, v: usize| r.vars.iter().position(|&w| w == v).unwrap();
    let a_key: Vec<usize> = shared.iter().map(|&v| pos(a, v)).collect();
    let b_key: Vec<usize> = shared.iter().map(|&v| pos(b, v)).collect();
    let mut index: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, row) in b.rows.iter().enumerate() {
        index
            .entry(b_key.iter().map(|&p| row[p]).collect())
            .or_default()
            .push(i);
    }
    // where each output column comes from
    let src: Vec<(bool, usize)> = vars
        .iter()
        .map(|&v| match a.vars.iter().position(|&w| w == v) {
            Some(p) => (true, p),
            None => (false, pos(b, v)),
        })
        .collect();
    let mut rows = Vec::new();
    for ra in &a.rows {
        let key: Vec<usize> = a_key.iter().map(|&p| ra[p]).collect();
        if let Some(matches) = index.get(&key) {
            for &i in matches {
                let rb = &b.rows[i];
                rows.push(
                    src.iter()
                        .map(|&(from_a, p)| if from_a { ra[p] } else { rb[p] })
                        .collect(),
                );
                if rows.len() > MAX_RELATION {
                    return Err(Error::SizeGuard {
                        what: "pp join",
                        needed: rows.len() as u128,
                        limit: MAX_RELATION as u128,
                    });
                }
            }
        }
    }
    Ok(Relation { vars, rows })
}

fn project_out(r: Relation, var: usize) -> Relation {
    let p = r.vars.iter().position(|&v| v == var).unwrap();
    let mut seen = HashSet::new();
    let rows = r
        .rows
        .into_iter()
        .map(|mut row| {
            row.remove(p);
            row
        })
        .filter(|row| seen.insert(row.clone()))
        .collect();
    let mut vars = r.vars;
    vars.remove(p);
    Relation { vars, rows }
}

/// Joins starting from the smallest relation, each time taking the relation
/// sharing most variables with the result so far.
fn join_all(mut rels: Vec<Relation>) -> Result<Relation> {
    rels.sort_by_key(|r| r.rows.len());
    let mut acc = rels.remove(0);
    while !rels.is_empty() {
        let shared = |r: &Relation| r.vars.iter().filter(|v| acc.vars.contains(v)).count();
        let next = (0..rels.len())
            .max_by_key(|&i| (shared(&rels[i]), std::cmp::Reverse(rels[i].rows.len()), std::cmp::Reverse(i)))
            .expect("nonempty");
        let r = rels.remove(next);
        acc = join(&acc, &r)?;
    }
    Ok(acc)
}

/// `φ(M)`: all free-variable tuples with a witnessing assignment of the bound variables.
pub fn pp_solve(phi: &PPFormula, m: &FiniteModule) -> Result<Subgroup> {
    phi.ensure_applies_to(m)?;
    let n = phi.free();
    let mut rels = Vec::new();
    let mut pending: Vec<usize> = (n..n + phi.bound()).collect();
    let mut next_aux = n + phi.bound();
    for j in 0..phi.constraints() {
        let (r, aux) = constraint_relations(phi, m, j, &mut next_aux)?;
        rels.extend(r);
        pending.extend(aux);
    }
    while !pending.is_empty() {
        // cheapest variable: smallest merged scope, then fewest rows to join
        let (idx, _) = pending
            .iter()
            .enumerate()
            .map(|(i, &y)| {
                let mut scope: Vec<usize> = rels
                    .iter()
                    .filter(|r| r.vars.contains(&y))
                    .flat_map(|r| r.vars.iter().copied())
                    .collect();
                scope.sort_unstable();
                scope.dedup();
                let rows: usize = rels
                    .iter()
                    .filter(|r| r.vars.contains(&y))
                    .map(|r| r.rows.len())
                    .sum();
                (i, (scope.len(), rows))
            })
            .min_by_key(|&(_, key)| key)
            .expect("pending is nonempty");
        let y = pending.remove(idx);
        let (touching, rest): (Vec<Relation>, Vec<Relation>) =
            rels.into_iter().partition(|r| r.vars.contains(&y));
        rels = rest;
        if touching.is_empty() {
            continue;
        }
        rels.push(project_out(join_all(touching)?, y));
    }
    let joined = if rels.is_empty() {
        Relation {
            vars: vec![],
            rows: vec![vec![]],
        }
    } else {
        join_all(rels)?
    };
    let missing: Vec<usize> = (0..n).filter(|v| !joined.vars.contains(v)).collect();
    guard(
        "pp solution set",
        joined.rows.len() as u128 * (m.size() as u128).pow(missing.len() as u32),
        MAX_RELATION as u128,
    )?;
    let mut tuples = Vec::new();
    for row in &joined.rows {
        let mut free_vals = vec![0usize; missing.len()];
        loop {
            let mut t = vec![0; n];
            for (p, &v) in joined.vars.iter().enumerate() {
                t[v] = row[p];
            }
            for (p, &v) in missing.iter().enumerate() {
                t[v] = free_vals[p];
            }
            tuples.push(t);
            let mut i = 0;
            while i < free_vals.len() {
                free_vals[i] += 1;
                if free_vals[i] < m.size() {
                    break;
                }
                free_vals[i] = 0;
                i += 1;
            }
            if i == free_vals.len() {
                break;
            }
        }
    }
    Ok(Subgroup::new(m, n, tuples))
}

/// `φ(M) ⊆ ψ(M)` for every `M` in the test set: implication relative to a class.
pub fn pp_leq(phi: &PPFormula, psi: &PPFormula, testset: &[FiniteModule]) -> Result<bool> {
    phi.ensure_compatible(psi)?;
    if testset.is_empty() {
        return Err(Error::invalid_argument("pp_leq needs a nonempty test set"));
    }
    for m in testset {
        if !pp_solve(phi, m)?.is_subset(&pp_solve(psi, m)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Semantic equivalence relative to a class.
pub fn pp_equivalent(phi: &PPFormula, psi: &PPFormula, testset: &[FiniteModule]) -> Result<bool> {
    Ok(pp_leq(phi, psi, testset)? && pp_leq(psi, phi, testset)?)
}

/// `φ(⊕ M_i) = ∏ φ(M_i)`, with both sides computed separately.
pub fn pp_product_check(phi: &PPFormula, ms: &[FiniteModule]) -> Result<bool> {
    let ds = direct_sum(phi.ring(), phi.side(), ms)?;
    let whole = pp_solve(phi, &ds.module)?;
    let parts = ms
        .iter()
        .map(|m| pp_solve(phi, m))
        .collect::<Result<Vec<_>>>()?;
    let count: u128 = parts.iter().map(|p| p.len() as u128).product();
    guard("pp product", count, MAX_RELATION as u128)?;
    let n = phi.free();
    let sum = &ds.module;
    let mut product = vec![vec![sum.zero(); n]];
    for (i, part) in parts.iter().enumerate() {
        let inj = &ds.injections[i];
        let mut next = Vec::with_capacity(product.len() * part.len());
        for t in &product {
            for e in part.elements() {
                next.push(
                    t.iter()
                        .zip(e)
                        .map(|(&s, &x)| sum.add(s, inj.apply(x)))
                        .collect::<Vec<_>>(),
                );
            }
        }
        product = next;
    }
    Ok(Subgroup::new(sum, n, product) == whole)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{end_ring, ring_zmod, Side};
    use crate::pp::formula::{pp_dual, pp_meet, pp_sum};

    fn zmod(n: usize, ideal: &[usize]) -> FiniteModule {
        FiniteModule::cyclic_quotient(&ring_zmod(n).unwrap(), Side::Left, ideal).unwrap()
    }

    fn solve1(phi: &PPFormula, m: &FiniteModule) -> Vec<usize> {
        pp_solve(phi, m).unwrap().to_set().to_vec()
    }

    #[test]
    fn divisibility_and_annihilation() {
        let z4 = zmod(4, &[]);
        let r = z4.ring().clone();
        assert_eq!(solve1(&PPFormula::divisible_by(&r, Side::Left, 2), &z4), vec![0, 2]);
        assert_eq!(solve1(&PPFormula::tautology(&r, Side::Left, 1), &z4), vec![0, 1, 2, 3]);
        let z6 = zmod(6, &[]);
        assert_eq!(
            solve1(&PPFormula::equals_zero(z6.ring(), Side::Left, 1), &z6),
            vec![0]
        );
    }

    #[test]
    fn meet_over_z4_and_its_quotient() {
        let z4 = zmod(4, &[]);
        let r = z4.ring().clone();
        let phi = pp_meet(
            &PPFormula::divisible_by(&r, Side::Left, 2),
            &PPFormula::annihilated_by(&r, Side::Left, 2),
        )
        .unwrap();
        assert_eq!(solve1(&phi, &z4), vec![0, 2]);
        assert_eq!(solve1(&phi, &zmod(4, &[2])), vec![0]);
    }

    #[test]
    fn sum_over_z8() {
        let z8 = zmod(8, &[]);
        let r = z8.ring().clone();
        let phi = pp_sum(
            &PPFormula::divisible_by(&r, Side::Left, 2),
            &PPFormula::annihilated_by(&r, Side::Left, 2),
        )
        .unwrap();
        assert_eq!(solve1(&phi, &z8), vec![0, 2, 4, 6]);
    }

    #[test]
    fn leq_relative_to_class() {
        let z4 = zmod(4, &[]);
        let z2 = zmod(4, &[2]);
        let r = z4.ring().clone();
        let ann = PPFormula::annihilated_by(&r, Side::Left, 2);
        let div = PPFormula::divisible_by(&r, Side::Left, 2);
        let zero = PPFormula::equals_zero(&r, Side::Left, 1);
        assert!(pp_leq(&zero, &div, &[z4.clone(), z2.clone()]).unwrap());
        assert!(pp_leq(&ann, &div, &[z4.clone()]).unwrap());
        assert!(!pp_leq(&ann, &div, &[z2]).unwrap());
        assert!(pp_leq(&ann, &div, &[]).is_err());
    }

    #[test]
    fn product_check() {
        let z4 = zmod(4, &[]);
        let z2 = zmod(4, &[2]);
        let r = z4.ring().clone();
        let div = PPFormula::divisible_by(&r, Side::Left, 2);
        assert!(pp_product_check(&div, &[z4.clone(), z2.clone()]).unwrap());
        assert!(pp_product_check(&div, &[]).unwrap());
        let t = PPFormula::tautology(&r, Side::Left, 1);
        assert!(pp_product_check(&t, &[z4, z2]).unwrap());
    }

    #[test]
    fn solutions_are_end_closed() {
        let r = ring_zmod(4).unwrap();
        let m = direct_sum(&r, Side::Left, &[zmod(4, &[]), zmod(4, &[2])])
            .unwrap()
            .module;
        let end = end_ring(&m).unwrap();
        let phi = pp_dual(&PPFormula::divisible_by(&r, Side::Right, 2));
        assert!(pp_solve(&phi, &m).unwrap().check_closure(Some(&end)).is_pass());
    }

    #[test]
    fn side_mismatch_is_rejected() {
        let z4 = zmod(4, &[]);
        let phi = PPFormula::tautology(z4.ring(), Side::Right, 1);
        assert!(matches!(pp_solve(&phi, &z4), Err(Error::Mismatch(_))));
    }
}
