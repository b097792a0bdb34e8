use std::fmt;
use std::sync::Arc;

use super::ring::{check_table, FiniteRing, Side, Validation};
use crate::elemset::ElementSet;
use crate::error::{Error, Result, MAX_CARRIER};

struct ModuleData {
    name: String,
    ring: FiniteRing,
    side: Side,
    size: usize,
    add: Vec<usize>,
    // action[r * size + x] is r.x for left modules and x.r for right modules
    action: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    generators: Option<Vec<usize>>,
}

/// A finite left or right module given by its addition and scalar-action tables.
///
/// Cloning is cheap; tables are shared.
#[derive(Clone)]
pub struct FiniteModule(Arc<ModuleData>);

impl FiniteModule {
    /// Builds a module without checking the module axioms (see [`FiniteModule::validate`]).
    ///
    /// `action` is row-major with one row per ring element.
    pub fn from_tables_unchecked(
        name: impl Into<String>,
        ring: &FiniteRing,
        side: Side,
        size: usize,
        add: Vec<usize>,
        action: Vec<usize>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid_argument("carrier_size must be positive"));
        }
        if size > MAX_CARRIER {
            return Err(Error::SizeGuard {
                what: "module carrier",
                needed: size as u128,
                limit: MAX_CARRIER as u128,
            });
        }
        check_table("add_table", &add, size, size, size)?;
        check_table("action_table", &action, ring.size(), size, size)?;
        if let Some(g) = &generators {
            if let Some((i, &x)) = g.iter().enumerate().find(|(_, &x)| x >= size) {
                return Err(Error::Table {
                    path: format!("generators[{i}]"),
                    message: format!("value {x} out of range"),
                });
            }
        }
        let zero = (0..size)
            .find(|&e| (0..size).all(|x| add[e * size + x] == x))
            .unwrap_or(0);
        let neg = (0..size)
            .map(|x| {
                (0..size)
                    .find(|&y| add[x * size + y] == zero)
                    .unwrap_or(zero)
            })
            .collect();
        Ok(FiniteModule(Arc::new(ModuleData {
            name: name.into(),
            ring: ring.clone(),
            side,
            size,
            add,
            action,
            neg,
            zero,
            generators,
        })))
    }

    /// Builds a module and rejects it unless [`FiniteModule::validate`] passes.
    pub fn from_tables(
        name: impl Into<String>,
        ring: &FiniteRing,
        side: Side,
        size: usize,
        add: Vec<usize>,
        action: Vec<usize>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self> {
        let m = Self::from_tables_unchecked(name, ring, side, size, add, action, generators)?;
        match m.validate() {
            Validation::Pass => Ok(m),
            v => Err(Error::Invalid(format!("module {}: {v}", m.name()))),
        }
    }

    /// The ring as a module over itself on the given side.
    pub fn regular(ring: &FiniteRing, side: Side) -> Self {
        let n = ring.size();
        let action = (0..n * n)
            .map(|i| {
                let (r, x) = (i / n, i % n);
                match side {
                    Side::Left => ring.mul(r, x),
                    Side::Right => ring.mul(x, r),
                }
            })
            .collect();
        let side_tag = match side {
            Side::Left => "_R",
            Side::Right => "R_",
        };
        Self::from_tables_unchecked(
            format!("{}{}", side_tag, ring.name()),
            ring,
            side,
            n,
            ring.add_table().to_vec(),
            action,
            Some(vec![ring.one()]),
        )
        .expect("ring tables are well-shaped")
    }

    pub fn zero_module(ring: &FiniteRing, side: Side) -> Self {
        Self::from_tables_unchecked(
            "0",
            ring,
            side,
            1,
            vec![0],
            vec![0; ring.size()],
            Some(vec![]),
        )
        .expect("trivial tables are well-shaped")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        let d = &self.0;
        FiniteModule(Arc::new(ModuleData {
            name: name.into(),
            ring: d.ring.clone(),
            side: d.side,
            size: d.size,
            add: d.add.clone(),
            action: d.action.clone(),
            neg: d.neg.clone(),
            zero: d.zero,
            generators: d.generators.clone(),
        }))
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.0.ring
    }

    pub fn side(&self) -> Side {
        self.0.side
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn zero(&self) -> usize {
        self.0.zero
    }

    pub fn is_zero(&self) -> bool {
        self.0.size == 1
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.0.add[x * self.0.size + y]
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.0.neg[x]
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// Scalar action of ring element `r` on `x`, on the module's declared side.
    #[inline]
    pub fn act(&self, r: usize, x: usize) -> usize {
        self.0.action[r * self.0.size + x]
    }

    pub fn add_table(&self) -> &[usize] {
        &self.0.add
    }

    pub fn action_table(&self) -> &[usize] {
        &self.0.action
    }

    /// Generators supplied at construction, if any.
    pub fn declared_generators(&self) -> Option<&[usize]> {
        self.0.generators.as_deref()
    }

    /// A generating set: the declared one, or a greedy one in ascending index order.
    ///
    /// Carriers above 256 elements must declare their generators.
    pub fn generators(&self) -> Result<Vec<usize>> {
        if let Some(g) = &self.0.generators {
            return Ok(g.clone());
        }
        if self.size() > crate::error::MAX_CARRIER_WITHOUT_GENERATORS {
            return Err(Error::invalid_argument(format!(
                "module {} has {} elements; hom enumeration needs a generator list above {}",
                self.name(),
                self.size(),
                crate::error::MAX_CARRIER_WITHOUT_GENERATORS
            )));
        }
        Ok(self.greedy_generators())
    }

    /// Ascending-order greedy generating set.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut span = self.span(&[]);
        let mut gens = Vec::new();
        for x in 0..self.size() {
            if !span.contains(x) {
                gens.push(x);
                span = self.subgroup_sum(&span, &self.cyclic(x));
            }
        }
        gens
    }

    /// `R x` (or `x R` on the right).
    pub fn cyclic(&self, x: usize) -> ElementSet {
        let mut s = ElementSet::empty(self.size());
        for r in 0..self.ring().size() {
            s.insert(self.act(r, x));
        }
        s
    }

    /// `{a + b}` for subgroups `a`, `b`.
    pub fn subgroup_sum(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        let mut s = ElementSet::empty(self.size());
        let bs = b.to_vec();
        for x in a.iter() {
            for &y in &bs {
                s.insert(self.add(x, y));
            }
        }
        s
    }

    /// Submodule generated by `gens`.
    pub fn span(&self, gens: &[usize]) -> ElementSet {
        let mut s = ElementSet::from_iter_in(self.size(), [self.zero()]);
        for &g in gens {
            if !s.contains(g) {
                s = self.subgroup_sum(&s, &self.cyclic(g));
            }
        }
        s
    }

    /// Subgroup generated additively by `gens`.
    pub fn additive_span(&self, gens: &[usize]) -> ElementSet {
        let mut s = ElementSet::from_iter_in(self.size(), [self.zero()]);
        for &g in gens {
            if s.contains(g) {
                continue;
            }
            let mut multiples = ElementSet::from_iter_in(self.size(), [self.zero()]);
            let mut x = g;
            while multiples.insert(x) {
                x = self.add(x, g);
            }
            s = self.subgroup_sum(&s, &multiples);
        }
        s
    }

    pub fn additive_order(&self, x: usize) -> usize {
        let mut n = 1;
        let mut y = x;
        while y != self.zero() {
            y = self.add(y, x);
            n += 1;
        }
        n
    }

    /// Exponent of the additive group.
    pub fn exponent(&self) -> usize {
        (0..self.size())
            .map(|x| self.additive_order(x))
            .fold(1, lcm)
    }

    /// Isomorphism invariant used to bucket isomorphism tests.
    pub(crate) fn fingerprint(&self) -> Vec<usize> {
        let mut cyc: Vec<usize> = (0..self.size()).map(|x| self.cyclic(x).len()).collect();
        let mut ord: Vec<usize> = (0..self.size()).map(|x| self.additive_order(x)).collect();
        cyc.sort_unstable();
        ord.sort_unstable();
        let mut f = vec![self.size()];
        f.extend(cyc);
        f.extend(ord);
        f
    }

    /// Is `set` a submodule (contains zero, closed under + and the action)?
    pub fn is_submodule(&self, set: &ElementSet) -> bool {
        set.contains(self.zero())
            && set
                .iter()
                .all(|x| set.iter().all(|y| set.contains(self.add(x, y))))
            && set
                .iter()
                .all(|x| (0..self.ring().size()).all(|r| set.contains(self.act(r, x))))
    }

    /// Exhaustive axiom scan for the declared side.
    pub fn validate(&self) -> Validation {
        let n = self.size();
        let ring = self.ring();
        let z = self.zero();
        for x in 0..n {
            if self.add(z, x) != x || self.add(x, z) != x {
                return Validation::fail("additive identity", &[z, x]);
            }
            if self.add(x, self.neg(x)) != z {
                return Validation::fail("additive inverse", &[x]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Validation::fail("additive commutativity", &[a, b]);
                }
                let ab = self.add(a, b);
                for c in 0..n {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return Validation::fail("additive associativity", &[a, b, c]);
                    }
                }
            }
        }
        for x in 0..n {
            if self.act(ring.one(), x) != x {
                return Validation::fail("unit action", &[x]);
            }
        }
        for r in 0..ring.size() {
            for x in 0..n {
                for y in 0..n {
                    if self.act(r, self.add(x, y)) != self.add(self.act(r, x), self.act(r, y)) {
                        return Validation::fail("action distributes over module addition", &[
                            r, x, y,
                        ]);
                    }
                }
            }
        }
        for r in 0..ring.size() {
            for s in 0..ring.size() {
                let rs = ring.add(r, s);
                // left: r(sx) = (rs)x, right: (xs)r = x(sr)
                let prod = match self.side() {
                    Side::Left => ring.mul(r, s),
                    Side::Right => ring.mul(s, r),
                };
                for x in 0..n {
                    if self.act(rs, x) != self.add(self.act(r, x), self.act(s, x)) {
                        return Validation::fail("action distributes over ring addition", &[
                            r, s, x,
                        ]);
                    }
                    if self.act(r, self.act(s, x)) != self.act(prod, x) {
                        return Validation::fail("action associativity", &[r, s, x]);
                    }
                }
            }
        }
        if let Some(g) = &self.0.generators {
            if self.span(g).len() != n {
                return Validation::fail("generators span the carrier", g);
            }
        }
        Validation::Pass
    }

    /// Compatibility check used by every binary operation.
    pub fn ensure_compatible(&self, other: &FiniteModule) -> Result<()> {
        if !self.ring().same_as(other.ring()) {
            return Err(Error::mismatch(format!(
                "modules {} and {} are over different rings",
                self.name(),
                other.name()
            )));
        }
        if self.side() != other.side() {
            return Err(Error::mismatch(format!(
                "modules {} ({}) and {} ({}) have different sides",
                self.name(),
                self.side(),
                other.name(),
                other.side()
            )));
        }
        Ok(())
    }

    /// Structural equality of the tables (names ignored).
    pub fn same_as(&self, other: &FiniteModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.side() == other.side()
                && self.size() == other.size()
                && self.ring().same_as(other.ring())
                && self.0.add == other.0.add
                && self.0.action == other.0.action)
    }

    /// The submodule `set` as a module in its own right; elements keep ascending order.
    ///
    /// Returns the module and the position of each of its elements in `self`.
    pub fn submodule(&self, set: &ElementSet, name: impl Into<String>) -> Result<(Self, Vec<usize>)> {
        if !self.is_submodule(set) {
            return Err(Error::invalid_argument("set is not a submodule"));
        }
        let elems = set.to_vec();
        let mut pos = vec![usize::MAX; self.size()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let k = elems.len();
        let add = (0..k * k)
            .map(|i| pos[self.add(elems[i / k], elems[i % k])])
            .collect();
        let action = (0..self.ring().size() * k)
            .map(|i| pos[self.act(i / k, elems[i % k])])
            .collect();
        let sub = Self::from_tables_unchecked(name, self.ring(), self.side(), k, add, action, None)?;
        let gens = sub.greedy_generators();
        Ok((sub.with_generators(gens), elems))
    }

    /// `self / set`. Cosets are indexed in ascending order of their least element.
    ///
    /// Returns the quotient and the coset index of each element of `self`.
    pub fn quotient(&self, set: &ElementSet, name: impl Into<String>) -> Result<(Self, Vec<usize>)> {
        if !self.is_submodule(set) {
            return Err(Error::invalid_argument("set is not a submodule"));
        }
        let mut class = vec![usize::MAX; self.size()];
        let mut reps = Vec::new();
        for x in 0..self.size() {
            if class[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for s in set.iter() {
                class[self.add(x, s)] = c;
            }
        }
        let k = reps.len();
        let add = (0..k * k)
            .map(|i| class[self.add(reps[i / k], reps[i % k])])
            .collect();
        let action = (0..self.ring().size() * k)
            .map(|i| class[self.act(i / k, reps[i % k])])
            .collect();
        let gens = self
            .generators()
            .ok()
            .map(|g| g.into_iter().map(|x| class[x]).collect());
        let q = Self::from_tables_unchecked(name, self.ring(), self.side(), k, add, action, gens)?;
        Ok((q, class))
    }

    pub(crate) fn with_generators(&self, gens: Vec<usize>) -> Self {
        let d = &self.0;
        FiniteModule(Arc::new(ModuleData {
            name: d.name.clone(),
            ring: d.ring.clone(),
            side: d.side,
            size: d.size,
            add: d.add.clone(),
            action: d.action.clone(),
            neg: d.neg.clone(),
            zero: d.zero,
            generators: Some(gens),
        }))
    }

    /// `R / I` for the one-sided ideal generated by `ideal_gens` on the module's side.
    pub fn cyclic_quotient(ring: &FiniteRing, side: Side, ideal_gens: &[usize]) -> Result<Self> {
        let r = Self::regular(ring, side);
        let ideal = r.span(ideal_gens);
        let name = if ideal.len() == 1 {
            r.name().to_string()
        } else {
            format!("{}/{:?}", r.name(), ideal_gens)
        };
        Ok(r.quotient(&ideal, name)?.0)
    }

    /// The additive group of `self` as a left module over `Z/e`; `e` must kill every element.
    pub fn as_abelian_group(&self, e: usize) -> Result<Self> {
        if e == 0 || !e.is_multiple_of(self.exponent()) {
            return Err(Error::invalid_argument(format!(
                "{e} does not annihilate {} (exponent {})",
                self.name(),
                self.exponent()
            )));
        }
        let ze = super::ring::ring_zmod(e)?;
        let n = self.size();
        let mut action = Vec::with_capacity(e * n);
        for k in 0..e {
            for x in 0..n {
                let mut acc = self.zero();
                for _ in 0..k {
                    acc = self.add(acc, x);
                }
                action.push(acc);
            }
        }
        let gens = {
            let mut span = ElementSet::from_iter_in(n, [self.zero()]);
            let mut g = Vec::new();
            for x in 0..n {
                if !span.contains(x) {
                    g.push(x);
                    span = self.additive_span(&g);
                }
            }
            g
        };
        Self::from_tables_unchecked(
            format!("{} as Z/{e}", self.name()),
            &ze,
            Side::Left,
            n,
            self.0.add.clone(),
            action,
            Some(gens),
        )
    }
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FiniteModule {}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteModule({}, {} over {}, size {})",
            self.name(),
            self.side(),
            self.ring().name(),
            self.size()
        )
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{ring_zmod, upper_triangular_f2};

    #[test]
    fn regular_and_quotients_validate() {
        let z4 = ring_zmod(4).unwrap();
        let m = FiniteModule::regular(&z4, Side::Left);
        assert!(m.validate().is_pass());
        let z2 = FiniteModule::cyclic_quotient(&z4, Side::Left, &[2]).unwrap();
        assert_eq!(z2.size(), 2);
        assert!(z2.validate().is_pass());
        assert_eq!(z2.act(3, 1), 1);
        assert_eq!(z2.act(2, 1), 0);
    }

    #[test]
    fn right_regular_module_over_noncommutative_ring() {
        let ut = upper_triangular_f2();
        let r = FiniteModule::regular(&ut, Side::Right);
        assert!(r.validate().is_pass());
        let l = FiniteModule::regular(&ut, Side::Left);
        assert!(l.validate().is_pass());
        // left action used on a right module breaks associativity
        let bad = FiniteModule::from_tables_unchecked(
            "bad",
            &ut,
            Side::Right,
            8,
            l.add_table().to_vec(),
            l.action_table().to_vec(),
            None,
        )
        .unwrap();
        assert!(!bad.validate().is_pass());
    }

    #[test]
    fn spans_and_exponent() {
        let z6 = ring_zmod(6).unwrap();
        let m = FiniteModule::regular(&z6, Side::Left);
        assert_eq!(m.cyclic(2).to_vec(), vec![0, 2, 4]);
        assert_eq!(m.span(&[2, 3]).len(), 6);
        assert_eq!(m.exponent(), 6);
        assert_eq!(m.greedy_generators(), vec![1]);
    }

    #[test]
    fn bad_generators_fail_validation() {
        let z4 = ring_zmod(4).unwrap();
        let r = FiniteModule::regular(&z4, Side::Left);
        let m = FiniteModule::from_tables_unchecked(
            "m",
            &z4,
            Side::Left,
            4,
            r.add_table().to_vec(),
            r.action_table().to_vec(),
            Some(vec![2]),
        )
        .unwrap();
        assert_eq!(
            m.validate(),
            Validation::Fail {
                axiom: "generators span the carrier".into(),
                witness: vec![2]
            }
        );
    }
}
