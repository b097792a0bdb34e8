use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, MAX_CARRIER};

/// Which side the ring acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Outcome of an exhaustive axiom scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Validation {
    Pass,
    Fail { axiom: String, witness: Vec<usize> },
}

impl Validation {
    pub fn is_pass(&self) -> bool {
        matches!(self, Validation::Pass)
    }

    pub(crate) fn fail(axiom: &str, witness: &[usize]) -> Self {
        Validation::Fail {
            axiom: axiom.to_string(),
            witness: witness.to_vec(),
        }
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validation::Pass => f.write_str("pass"),
            Validation::Fail { axiom, witness } => write!(f, "fail: {axiom} at {witness:?}"),
        }
    }
}

struct RingData {
    name: String,
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    base_field: Option<usize>,
}

/// A unital ring on the carrier `0..size`, given by full tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FiniteRing(Arc<RingData>);

impl FiniteRing {
    /// Builds a ring from row-major tables without checking the axioms.
    ///
    /// Table shape and entry ranges are checked. The additive and
    /// multiplicative identities are located by scanning; when none exists
    /// index 0 is recorded and [`FiniteRing::validate`] reports the failure.
    pub fn from_tables_unchecked(
        name: impl Into<String>,
        size: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        base_field: Option<usize>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid_argument("carrier_size must be positive"));
        }
        if size > MAX_CARRIER {
            return Err(Error::SizeGuard {
                what: "ring carrier",
                needed: size as u128,
                limit: MAX_CARRIER as u128,
            });
        }
        check_table("add_table", &add, size, size, size)?;
        check_table("mul_table", &mul, size, size, size)?;
        let zero = (0..size)
            .find(|&e| (0..size).all(|x| add[e * size + x] == x && add[x * size + e] == x))
            .unwrap_or(0);
        let one = (0..size)
            .find(|&e| (0..size).all(|x| mul[e * size + x] == x && mul[x * size + e] == x))
            .unwrap_or(0);
        let neg = (0..size)
            .map(|x| {
                (0..size)
                    .find(|&y| add[x * size + y] == zero)
                    .unwrap_or(zero)
            })
            .collect();
        if let Some(p) = base_field {
            if p < 2 || !(2..p).all(|d| p % d != 0) {
                return Err(Error::invalid_argument(format!(
                    "base_field must be a prime order, got {p}"
                )));
            }
        }
        Ok(FiniteRing(Arc::new(RingData {
            name: name.into(),
            size,
            add,
            mul,
            neg,
            zero,
            one,
            base_field,
        })))
    }

    /// Builds a ring and rejects it unless every axiom holds.
    pub fn from_tables(
        name: impl Into<String>,
        size: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        base_field: Option<usize>,
    ) -> Result<Self> {
        let r = Self::from_tables_unchecked(name, size, add, mul, base_field)?;
        match r.validate() {
            Validation::Pass => Ok(r),
            v => Err(Error::Invalid(format!("ring {}: {v}", r.name()))),
        }
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn zero(&self) -> usize {
        self.0.zero
    }

    pub fn one(&self) -> usize {
        self.0.one
    }

    /// Prime order `p` of the base field when the ring is tagged as an `F_p`-algebra.
    pub fn base_field(&self) -> Option<usize> {
        self.0.base_field
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.0.add[a * self.0.size + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.size + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.0.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// The image of the integer `n` under `Z -> R`.
    pub fn from_int(&self, n: i64) -> usize {
        let mut acc = self.zero();
        for _ in 0..n.unsigned_abs() {
            acc = self.add(acc, self.one());
        }
        if n < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    /// Smallest `n >= 0` with `n * 1 = r`, if `r` lies in the prime subring.
    pub fn as_int(&self, r: usize) -> Option<usize> {
        let mut acc = self.zero();
        for n in 0..self.size() {
            if acc == r {
                return Some(n);
            }
            acc = self.add(acc, self.one());
        }
        None
    }

    /// Additive order of 1.
    pub fn characteristic(&self) -> usize {
        let mut acc = self.one();
        let mut n = 1;
        while acc != self.zero() {
            acc = self.add(acc, self.one());
            n += 1;
        }
        n
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (a..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn opposite(&self) -> FiniteRing {
        let n = self.size();
        let mul = (0..n * n).map(|i| self.mul(i % n, i / n)).collect();
        FiniteRing(Arc::new(RingData {
            name: format!("{}^op", self.name()),
            size: n,
            add: self.0.add.clone(),
            mul,
            neg: self.0.neg.clone(),
            zero: self.0.zero,
            one: self.0.one,
            base_field: self.0.base_field,
        }))
    }

    pub fn add_table(&self) -> &[usize] {
        &self.0.add
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.0.mul
    }

    /// Exhaustive axiom scan; reports the first violated axiom with a witness.
    pub fn validate(&self) -> Validation {
        let n = self.size();
        let (z, o) = (self.zero(), self.one());
        for x in 0..n {
            if self.add(z, x) != x || self.add(x, z) != x {
                return Validation::fail("additive identity", &[z, x]);
            }
        }
        for a in 0..n {
            if self.add(a, self.neg(a)) != z {
                return Validation::fail("additive inverse", &[a]);
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Validation::fail("additive commutativity", &[a, b]);
                }
            }
        }
        for x in 0..n {
            if self.mul(o, x) != x || self.mul(x, o) != x {
                return Validation::fail("multiplicative unit", &[o, x]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.add(a, b);
                let mab = self.mul(a, b);
                for c in 0..n {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return Validation::fail("additive associativity", &[a, b, c]);
                    }
                    if self.mul(mab, c) != self.mul(a, self.mul(b, c)) {
                        return Validation::fail("multiplicative associativity", &[a, b, c]);
                    }
                    if self.mul(a, self.add(b, c)) != self.add(mab, self.mul(a, c)) {
                        return Validation::fail("left distributivity", &[a, b, c]);
                    }
                    if self.mul(ab, c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return Validation::fail("right distributivity", &[a, b, c]);
                    }
                }
            }
        }
        if let Some(p) = self.base_field() {
            if self.characteristic() != p {
                return Validation::fail("base field characteristic", &[p]);
            }
        }
        Validation::Pass
    }

    /// Structural equality of the tables (names are ignored).
    pub fn same_as(&self, other: &FiniteRing) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.size == other.0.size
                && self.0.add == other.0.add
                && self.0.mul == other.0.mul
                && self.0.base_field == other.0.base_field)
    }

    /// Carrier index of the matrix `[[a, b], [0, d]]` in [`upper_triangular_f2`].
    pub fn ut_index(a: usize, b: usize, d: usize) -> usize {
        a | (b << 1) | (d << 2)
    }

    /// Same carrier and tables with a new name.
    pub fn renamed(&self, name: impl Into<String>) -> FiniteRing {
        FiniteRing(Arc::new(RingData {
            name: name.into(),
            size: self.0.size,
            add: self.0.add.clone(),
            mul: self.0.mul.clone(),
            neg: self.0.neg.clone(),
            zero: self.0.zero,
            one: self.0.one,
            base_field: self.0.base_field,
        }))
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, size {})", self.name(), self.size())
    }
}

pub(crate) fn check_table(
    name: &str,
    t: &[usize],
    rows: usize,
    cols: usize,
    range: usize,
) -> Result<()> {
    if t.len() != rows * cols {
        return Err(Error::Table {
            path: name.to_string(),
            message: format!("expected {rows}x{cols} entries, found {}", t.len()),
        });
    }
    for (i, &v) in t.iter().enumerate() {
        if v >= range {
            return Err(Error::Table {
                path: format!("{name}[{}][{}]", i / cols, i % cols),
                message: format!("value {v} out of range"),
            });
        }
    }
    Ok(())
}

/// `Z/nZ` with its canonical tables. Prime `n` is tagged as an `F_n`-algebra.
pub fn ring_zmod(n: usize) -> Result<FiniteRing> {
    if n == 0 {
        return Err(Error::invalid_argument("ring_zmod requires n >= 1"));
    }
    let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let mul = (0..n * n).map(|i| (i / n) * (i % n) % n).collect();
    let prime = n >= 2 && (2..n).all(|d| !n.is_multiple_of(d));
    FiniteRing::from_tables_unchecked(format!("Z/{n}"), n, add, mul, prime.then_some(n))
}

/// Upper-triangular 2x2 matrices over `F_2`; see [`FiniteRing::ut_index`] for the encoding.
pub fn upper_triangular_f2() -> FiniteRing {
    let decode = |i: usize| (i & 1, (i >> 1) & 1, (i >> 2) & 1);
    let mut add = vec![0; 64];
    let mut mul = vec![0; 64];
    for x in 0..8 {
        for y in 0..8 {
            let (a, b, d) = decode(x);
            let (a2, b2, d2) = decode(y);
            add[x * 8 + y] = x ^ y;
            mul[x * 8 + y] = FiniteRing::ut_index(a & a2, (a & b2) ^ (b & d2), d & d2);
        }
    }
    FiniteRing::from_tables_unchecked("UT2(F2)", 8, add, mul, Some(2))
        .expect("static tables are well-shaped")
}

/// `F_2[t]/(t^2)`, element `a + b t` at index `a + 2b`.
pub fn dual_numbers_f2() -> FiniteRing {
    let mut add = vec![0; 16];
    let mut mul = vec![0; 16];
    for x in 0..4 {
        for y in 0..4 {
            let (a, b) = (x & 1, x >> 1);
            let (c, d) = (y & 1, y >> 1);
            add[x * 4 + y] = x ^ y;
            mul[x * 4 + y] = (a & c) | (((a & d) ^ (b & c)) << 1);
        }
    }
    FiniteRing::from_tables_unchecked("F2[t]/(t^2)", 4, add, mul, Some(2))
        .expect("static tables are well-shaped")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_basics() {
        let z1 = ring_zmod(1).unwrap();
        assert_eq!(z1.size(), 1);
        assert!(z1.validate().is_pass());

        let z4 = ring_zmod(4).unwrap();
        assert_eq!(z4.mul(2, 2), 0);
        assert_eq!(z4.mul(3, 3), 1);
        assert!(z4.validate().is_pass());
        assert!(ring_zmod(0).is_err());
    }

    #[test]
    fn zmod6_idempotents() {
        let z6 = ring_zmod(6).unwrap();
        let idem: Vec<_> = (0..6).filter(|&x| z6.mul(x, x) == x).collect();
        assert_eq!(idem, vec![0, 1, 3, 4]);
    }

    #[test]
    fn builtin_rings_are_valid() {
        let ut = upper_triangular_f2();
        assert!(ut.validate().is_pass());
        assert!(!ut.is_commutative());
        assert_eq!(ut.one(), FiniteRing::ut_index(1, 0, 1));
        let dn = dual_numbers_f2();
        assert!(dn.validate().is_pass());
        assert_eq!(dn.mul(2, 2), 0);
    }

    #[test]
    fn transposed_table_is_the_opposite_ring() {
        let ut = upper_triangular_f2();
        let op = ut.opposite();
        assert!(op.validate().is_pass());
        assert!(!op.same_as(&ut));
    }

    #[test]
    fn broken_tables_report_a_witness() {
        let ut = upper_triangular_f2();
        let mut mul = ut.mul_table().to_vec();
        // e11 * e12 = e12 in UT2; corrupt it to 0.
        let e11 = FiniteRing::ut_index(1, 0, 0);
        let e12 = FiniteRing::ut_index(0, 1, 0);
        mul[e11 * 8 + e12] = 0;
        let bad = FiniteRing::from_tables_unchecked("bad", 8, ut.add_table().to_vec(), mul, None)
            .unwrap();
        match bad.validate() {
            Validation::Fail { witness, .. } => assert!(!witness.is_empty()),
            Validation::Pass => panic!("corrupted table validated"),
        }
    }

    #[test]
    fn table_shape_errors_are_positioned() {
        let err = FiniteRing::from_tables_unchecked("x", 2, vec![0, 1, 1, 5], vec![0; 4], None)
            .unwrap_err();
        assert_eq!(err.to_string(), "add_table[1][1]: value 5 out of range");
    }
}
