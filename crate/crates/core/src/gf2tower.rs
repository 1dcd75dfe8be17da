//! Exact arithmetic in `K = GF(2^{2m})` together with the embedded chain
//! `GF(2) ⊂ F' = GF(2^h) ⊂ F = GF(2^m) ⊂ K` and the polar machinery
//! (conjugate, trace, norm, unit circle, polar decomposition).
//!
//! Elements are residues modulo an irreducible polynomial of degree `2m`,
//! stored as the coefficient bit-vector (bit `j` is the coefficient of
//! `z^j`). Subfields are not separate types: membership is a predicate on an
//! element of `K`.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest supported `m`; keeps `|K| <= 2^16`.
pub const MAX_M: u32 = 8;

/// An element of `K`, ordered by the integer value of its bit-vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Raw coefficient bits. No range check against a particular tower.
    pub const fn from_bits(bits: u16) -> Self {
        FieldElement(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Which quadratic extension a plane-level operation works in: the full
/// `K / F` or the subplane `K' / F'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Full,
    Sub,
}

/// The arithmetic context. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTower {
    m: u32,
    h: u32,
    modulus: u32,
    i_elem: FieldElement,
    delta: FieldElement,
    generator: FieldElement,
    base: Vec<FieldElement>,
    circle: Vec<FieldElement>,
    sub_base: Vec<FieldElement>,
    sub_circle: Vec<FieldElement>,
}

impl FieldTower {
    /// Builds the tower for `q = 2^m`, `r = 2^h`.
    ///
    /// Without an explicit modulus the smallest irreducible polynomial of
    /// degree `2m` (by integer value) is used. The distinguished element
    /// `i` is the smallest element with `i + i^q = 1`, and the generator is
    /// the smallest primitive element.
    pub fn new(m: u32, h: u32, modulus: Option<u32>) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(Error::DegreeOutOfRange { m });
        }
        if h == 0 || !m.is_multiple_of(h) {
            return Err(Error::SubfieldNotDivisor { m, h });
        }
        let n = 2 * m;
        let modulus = match modulus {
            Some(p) => {
                let found = poly_degree(p);
                if found != Some(n) {
                    return Err(Error::ModulusDegree {
                        expected: n,
                        found: found.unwrap_or(0),
                    });
                }
                if !is_irreducible(p) {
                    return Err(Error::ReducibleModulus { modulus: p });
                }
                p
            }
            None => smallest_irreducible(n),
        };

        let mut tower = FieldTower {
            m,
            h,
            modulus,
            i_elem: FieldElement::ZERO,
            delta: FieldElement::ZERO,
            generator: FieldElement::ONE,
            base: Vec::new(),
            circle: Vec::new(),
            sub_base: Vec::new(),
            sub_circle: Vec::new(),
        };

        tower.generator = (2..tower.field_size())
            .map(|v| FieldElement(v as u16))
            .find(|&x| tower.is_primitive(x))
            // m = 1: K = GF(4) and 1 is not primitive, but 2 always is there.
            .ok_or(Error::Internal("no primitive element"))?;
        tower.i_elem = tower
            .elements()
            .find(|&x| tower.trace_kf(x) == FieldElement::ONE)
            .ok_or(Error::Internal("no element of trace 1"))?;
        tower.delta = tower.norm_kf(tower.i_elem);
        tower.fill_subgroups();
        Ok(tower)
    }

    /// Same field and subfield, different distinguished element `i`.
    pub fn with_i_elem(&self, i_elem: FieldElement) -> Result<Self> {
        self.check(i_elem)?;
        if self.trace_kf(i_elem) != FieldElement::ONE {
            return Err(Error::InvalidIElem { value: i_elem });
        }
        let mut tower = self.clone();
        tower.i_elem = i_elem;
        tower.delta = tower.norm_kf(i_elem);
        Ok(tower)
    }

    /// Same field, different intermediate subfield `F' = GF(2^h)`.
    pub fn with_subfield(&self, h: u32) -> Result<Self> {
        if h == 0 || !self.m.is_multiple_of(h) {
            return Err(Error::SubfieldNotDivisor { m: self.m, h });
        }
        let mut tower = self.clone();
        tower.h = h;
        tower.fill_subgroups();
        Ok(tower)
    }

    fn fill_subgroups(&mut self) {
        let order = self.order();
        let q = self.q() as u64;
        let r = self.r() as u64;
        self.circle = self.cyclic_subgroup(order / (q + 1));
        self.sub_circle = self.cyclic_subgroup(order / (r + 1));
        let mut base = self.cyclic_subgroup(q + 1);
        base.insert(0, FieldElement::ZERO);
        self.base = base;
        let mut sub_base = self.cyclic_subgroup(order / (r - 1));
        sub_base.insert(0, FieldElement::ZERO);
        self.sub_base = sub_base;
    }

    /// Sorted subgroup generated by `generator^step`.
    fn cyclic_subgroup(&self, step: u64) -> Vec<FieldElement> {
        let g = self.pow(self.generator, step);
        let mut out = Vec::new();
        let mut x = FieldElement::ONE;
        loop {
            out.push(x);
            x = self.mul(x, g);
            if x == FieldElement::ONE {
                break;
            }
        }
        out.sort_unstable();
        out
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// `q = |F| = 2^m`.
    pub fn q(&self) -> u32 {
        1 << self.m
    }

    /// `r = |F'| = 2^h`.
    pub fn r(&self) -> u32 {
        1 << self.h
    }

    /// `|K| = 2^{2m}`.
    pub fn field_size(&self) -> u32 {
        1 << (2 * self.m)
    }

    /// `|K*| = 2^{2m} - 1`.
    pub fn order(&self) -> u64 {
        (self.field_size() - 1) as u64
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn i_elem(&self) -> FieldElement {
        self.i_elem
    }

    /// `delta = N(i)`, the constant term of the minimal polynomial `z^2 + z + delta` of `i`.
    pub fn delta(&self) -> FieldElement {
        self.delta
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// `|F|` or `|F'|`.
    pub fn level_size(&self, level: Level) -> u32 {
        1 << self.level_exp(level)
    }

    /// `m` for the full plane, `h` for the subplane.
    pub fn level_exp(&self, level: Level) -> u32 {
        match level {
            Level::Full => self.m,
            Level::Sub => self.h,
        }
    }

    /// Checks that raw bits name an element of this `K`.
    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits >= self.field_size() {
            return Err(Error::OutOfField { value: bits });
        }
        Ok(FieldElement(bits as u16))
    }

    pub(crate) fn check(&self, x: FieldElement) -> Result<()> {
        self.element(x.0 as u32).map(|_| ())
    }

    /// All of `K` in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.field_size()).map(|v| FieldElement(v as u16))
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(x.0 ^ y.0)
    }

    /// Carry-less shift-and-xor product reduced by the modulus.
    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let top = 1u32 << (2 * self.m);
        let mut a = x.0 as u32;
        let mut b = y.0 as u32;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        FieldElement(acc as u16)
    }

    #[inline]
    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// `x^e`, with `0^0 = 1`. Exponents are reduced modulo `|K*|` for `x != 0`.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if x.is_zero() {
            return if e == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let mut e = e % self.order();
        let mut base = x;
        let mut acc = FieldElement::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` for a possibly negative exponent; `x` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, x: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            return Ok(self.pow(x, e as u64));
        }
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let order = self.order() as i64;
        Ok(self.pow(x, e.rem_euclid(order) as u64))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.order() - 1))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// The unique square root, `x^{2^{2m-1}}`.
    pub fn sqrt(&self, x: FieldElement) -> FieldElement {
        self.frob(x, 2 * self.m - 1)
    }

    /// `x^{2^e}`.
    pub fn frob(&self, x: FieldElement, e: u32) -> FieldElement {
        (0..e % (2 * self.m)).fold(x, |acc, _| self.square(acc))
    }

    /// `x̄ = x^q`.
    pub fn conj(&self, x: FieldElement) -> FieldElement {
        self.frob(x, self.m)
    }

    /// `T(x) = x + x^q`, always in `F`.
    pub fn trace_kf(&self, x: FieldElement) -> FieldElement {
        self.add(x, self.conj(x))
    }

    /// `N(x) = x^{1+q}`, always in `F`.
    pub fn norm_kf(&self, x: FieldElement) -> FieldElement {
        self.mul(x, self.conj(x))
    }

    /// Conjugation of `K` over `F`, or of `K'` over `F'`.
    pub fn conj_at(&self, level: Level, x: FieldElement) -> FieldElement {
        self.frob(x, self.level_exp(level))
    }

    pub fn norm_at(&self, level: Level, x: FieldElement) -> FieldElement {
        self.mul(x, self.conj_at(level, x))
    }

    /// `x ∈ F`, i.e. `x^q = x`.
    pub fn is_in_base(&self, x: FieldElement) -> bool {
        self.conj(x) == x
    }

    /// `x ∈ K' = GF(r^2)`.
    pub fn is_in_sub_quadratic(&self, x: FieldElement) -> bool {
        self.frob(x, 2 * self.h) == x
    }

    /// `x ∈ F' = GF(r)`.
    pub fn is_in_sub_base(&self, x: FieldElement) -> bool {
        self.frob(x, self.h) == x
    }

    /// Membership in the base field of the given level (`F` or `F'`).
    pub fn is_in_base_at(&self, level: Level, x: FieldElement) -> bool {
        match level {
            Level::Full => self.is_in_base(x),
            Level::Sub => self.is_in_sub_base(x),
        }
    }

    /// Membership in the quadratic field of the given level (`K` or `K'`).
    pub fn is_in_quadratic_at(&self, level: Level, x: FieldElement) -> bool {
        match level {
            Level::Full => true,
            Level::Sub => self.is_in_sub_quadratic(x),
        }
    }

    /// Relative trace `Tr_{F/F'}(x) = x + x^r + ... + x^{q/r}`.
    pub fn rel_trace(&self, x: FieldElement) -> Result<FieldElement> {
        if !self.is_in_base(x) {
            return Err(Error::NotInBaseField { value: x });
        }
        let mut acc = FieldElement::ZERO;
        let mut term = x;
        for _ in 0..self.m / self.h {
            acc = self.add(acc, term);
            term = self.frob(term, self.h);
        }
        Ok(acc)
    }

    /// The unit circle `S = {x : x^{q+1} = 1}` (level `Full`) or
    /// `S' = {x : x^{r+1} = 1}` (level `Sub`), sorted.
    pub fn unit_circle(&self, level: Level) -> &[FieldElement] {
        match level {
            Level::Full => &self.circle,
            Level::Sub => &self.sub_circle,
        }
    }

    /// `F` (level `Full`) or `F'` (level `Sub`), sorted.
    pub fn base_field(&self, level: Level) -> &[FieldElement] {
        match level {
            Level::Full => &self.base,
            Level::Sub => &self.sub_base,
        }
    }

    /// `x = lambda * u` with `lambda ∈ F*`, `u ∈ S`.
    pub fn polar_decompose(&self, x: FieldElement) -> Result<(FieldElement, FieldElement)> {
        self.polar_decompose_at(Level::Full, x)
    }

    /// Polar form at the given level: `lambda = sqrt(x x̄)`, `u = sqrt(x / x̄)`.
    pub fn polar_decompose_at(
        &self,
        level: Level,
        x: FieldElement,
    ) -> Result<(FieldElement, FieldElement)> {
        if x.is_zero() {
            return Err(Error::ZeroHasNoPolarForm);
        }
        let xc = self.conj_at(level, x);
        let lambda = self.sqrt(self.mul(x, xc));
        let u = self.sqrt(self.div(x, xc)?);
        Ok((lambda, u))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut order = self.order();
        for p in prime_factors(self.order()) {
            while order.is_multiple_of(p) && self.pow(x, order / p) == FieldElement::ONE {
                order /= p;
            }
        }
        Ok(order)
    }

    fn is_primitive(&self, x: FieldElement) -> bool {
        !x.is_zero()
            && prime_factors(self.order())
                .into_iter()
                .all(|p| self.pow(x, self.order() / p) != FieldElement::ONE)
    }
}

/// Degree of a GF(2) polynomial given as a bit-vector; `None` for zero.
pub fn poly_degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Exhaustive trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| ((1u32 << d)..(1u32 << (d + 1))).all(|g| poly_rem(p, g) != 0))
}

/// Smallest irreducible polynomial of the given degree by integer value.
pub fn smallest_irreducible(degree: u32) -> u32 {
    ((1u32 << degree)..(1u32 << (degree + 1)))
        .find(|&p| is_irreducible(p))
        .expect("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fe(v: u16) -> FieldElement {
        FieldElement::from_bits(v)
    }

    /// Schoolbook product then long division, independent of `FieldTower::mul`.
    fn oracle_mul(a: u32, b: u32, modulus: u32) -> u32 {
        let mut prod = 0u32;
        for j in 0..16 {
            if b >> j & 1 == 1 {
                prod ^= a << j;
            }
        }
        poly_rem(prod, modulus)
    }

    #[test]
    fn default_tower_m2() {
        let t = FieldTower::new(2, 1, None).unwrap();
        assert_eq!(t.modulus(), 0b10011);
        assert_eq!(t.i_elem(), fe(2));
        assert_eq!(t.trace_kf(t.i_elem()), FieldElement::ONE);
        assert!(t.is_in_base(t.delta()));
        assert_eq!(t.multiplicative_order(t.generator()).unwrap(), 15);
    }

    #[test]
    fn smallest_case_m1() {
        let t = FieldTower::new(1, 1, None).unwrap();
        assert_eq!(t.modulus(), 0b111);
        assert_eq!(t.unit_circle(Level::Full), &[fe(1), fe(2), fe(3)]);
        assert_eq!(t.base_field(Level::Full), &[fe(0), fe(1)]);
    }

    #[test]
    fn explicit_alternative_modulus() {
        let t = FieldTower::new(2, 1, Some(0b11001)).unwrap();
        assert_eq!(t.modulus(), 0b11001);
        assert_eq!(t.trace_kf(t.i_elem()), FieldElement::ONE);
        assert_eq!(t.unit_circle(Level::Full).len(), 5);
    }

    #[test]
    fn tower_errors() {
        assert_eq!(
            FieldTower::new(0, 1, None),
            Err(Error::DegreeOutOfRange { m: 0 })
        );
        assert_eq!(
            FieldTower::new(9, 1, None),
            Err(Error::DegreeOutOfRange { m: 9 })
        );
        assert_eq!(
            FieldTower::new(4, 3, None),
            Err(Error::SubfieldNotDivisor { m: 4, h: 3 })
        );
        assert_eq!(
            FieldTower::new(2, 1, Some(0b10101)),
            Err(Error::ReducibleModulus { modulus: 0b10101 })
        );
        assert!(matches!(
            FieldTower::new(2, 1, Some(0b1011)),
            Err(Error::ModulusDegree { .. })
        ));
    }

    #[test]
    fn irreducibility_against_root_and_factor_count() {
        // Degree-4 irreducibles over GF(2): exactly x^4+x+1, x^4+x^3+1, x^4+x^3+x^2+x+1.
        let found: Vec<u32> = (16..32).filter(|&p| is_irreducible(p)).collect();
        assert_eq!(found, vec![0b10011, 0b11001, 0b11111]);
        // Necklace count of degree-8 irreducibles is 30.
        assert_eq!((256..512).filter(|&p| is_irreducible(p)).count(), 30);
    }

    #[test]
    fn mul_matches_oracle_exhaustively_m2_m3() {
        for m in [2, 3] {
            let t = FieldTower::new(m, 1, None).unwrap();
            for a in t.elements() {
                for b in t.elements() {
                    let want = oracle_mul(a.bits() as u32, b.bits() as u32, t.modulus());
                    assert_eq!(t.mul(a, b).bits() as u32, want);
                }
            }
        }
    }

    #[test]
    fn hand_reduction_z_times_z3() {
        let t = FieldTower::new(2, 1, None).unwrap();
        assert_eq!(t.mul(fe(0b10), fe(0b1000)), fe(0b0011));
    }

    #[test]
    fn char_two_and_sqrt() {
        let t = FieldTower::new(3, 1, None).unwrap();
        for x in t.elements() {
            assert!(t.add(x, x).is_zero());
            let s = t.sqrt(x);
            assert_eq!(t.mul(s, s), x);
            assert_eq!(t.sqrt(t.square(x)), x);
        }
    }

    #[test]
    fn inverse_and_zero() {
        let t = FieldTower::new(4, 2, None).unwrap();
        assert_eq!(t.inv(FieldElement::ZERO), Err(Error::ZeroInverse));
        for x in t.elements().skip(1) {
            assert_eq!(t.mul(x, t.inv(x).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn trace_norm_conj_basics() {
        let t = FieldTower::new(3, 1, None).unwrap();
        assert!(t.trace_kf(FieldElement::ONE).is_zero());
        assert_eq!(t.norm_kf(FieldElement::ONE), FieldElement::ONE);
        for x in t.elements() {
            assert_eq!(t.conj(t.conj(x)), x);
            assert!(t.is_in_base(t.trace_kf(x)));
            assert!(t.is_in_base(t.norm_kf(x)));
        }
    }

    #[test]
    fn norm_is_multiplicative_and_trace_surjective() {
        let t = FieldTower::new(3, 1, None).unwrap();
        let mut hits = vec![0u32; t.field_size() as usize];
        for x in t.elements() {
            hits[t.trace_kf(x).bits() as usize] += 1;
            for y in t.elements() {
                assert_eq!(t.norm_kf(t.mul(x, y)), t.mul(t.norm_kf(x), t.norm_kf(y)));
            }
        }
        for &f in t.base_field(Level::Full) {
            assert_eq!(hits[f.bits() as usize], t.q());
        }
    }

    #[test]
    fn subfield_sizes_and_intersection() {
        for (m, h) in [(2, 1), (3, 1), (4, 2), (6, 2), (6, 3), (8, 4)] {
            let t = FieldTower::new(m, h, None).unwrap();
            let f: Vec<_> = t.elements().filter(|&x| t.is_in_base(x)).collect();
            let kp: Vec<_> = t.elements().filter(|&x| t.is_in_sub_quadratic(x)).collect();
            let fp: Vec<_> = t.elements().filter(|&x| t.is_in_sub_base(x)).collect();
            assert_eq!(f.len() as u32, t.q());
            assert_eq!(kp.len() as u32, t.r() * t.r());
            assert_eq!(f, t.base_field(Level::Full));
            assert_eq!(fp, t.base_field(Level::Sub));
            if (m / h) % 2 == 1 {
                let inter: Vec<_> = f
                    .iter()
                    .copied()
                    .filter(|&x| t.is_in_sub_quadratic(x))
                    .collect();
                assert_eq!(inter, fp);
            }
        }
    }

    #[test]
    fn rel_trace_values() {
        let t = FieldTower::new(2, 1, None).unwrap();
        assert!(t.rel_trace(FieldElement::ZERO).unwrap().is_zero());
        // omega: the elements of F outside GF(2).
        for &w in t.base_field(Level::Full).iter().filter(|x| x.bits() > 1) {
            assert_eq!(t.rel_trace(w).unwrap(), FieldElement::ONE);
        }
        assert!(matches!(
            t.rel_trace(t.i_elem()),
            Err(Error::NotInBaseField { .. })
        ));
    }

    #[test]
    fn rel_trace_balanced_and_linear() {
        for (m, h) in [(4, 2), (6, 2), (6, 3), (4, 1)] {
            let t = FieldTower::new(m, h, None).unwrap();
            let base = t.base_field(Level::Full);
            for &fp in t.base_field(Level::Sub) {
                let hits = base
                    .iter()
                    .filter(|&&x| t.rel_trace(x).unwrap() == fp)
                    .count();
                assert_eq!(hits as u32, t.q() / t.r());
            }
            for &a in t.base_field(Level::Sub) {
                for &x in base.iter().step_by(3) {
                    let lhs = t.rel_trace(t.mul(a, x)).unwrap();
                    assert_eq!(lhs, t.mul(a, t.rel_trace(x).unwrap()));
                }
            }
        }
    }

    #[test]
    fn unit_circle_m2_is_powers_of_z3() {
        let t = FieldTower::new(2, 1, None).unwrap();
        let z = fe(2);
        let mut want: Vec<_> = [0, 3, 6, 9, 12].iter().map(|&e| t.pow(z, e)).collect();
        want.sort();
        assert_eq!(t.unit_circle(Level::Full), want.as_slice());
        assert_eq!(t.unit_circle(Level::Sub).len(), 3);
    }

    #[test]
    fn unit_circle_closed_under_product() {
        let t = FieldTower::new(4, 2, None).unwrap();
        let s = t.unit_circle(Level::Full);
        for &u in s {
            for &v in s {
                assert!(s.binary_search(&t.mul(u, v)).is_ok());
            }
        }
    }

    #[test]
    fn polar_is_bijection() {
        for m in [2, 3, 4] {
            let t = FieldTower::new(m, 1, None).unwrap();
            let mut seen = alloc::collections::BTreeSet::new();
            for x in t.elements().skip(1) {
                let (l, u) = t.polar_decompose(x).unwrap();
                assert!(t.is_in_base(l) && !l.is_zero());
                assert_eq!(t.norm_kf(u), FieldElement::ONE);
                assert_eq!(t.mul(l, u), x);
                assert!(seen.insert((l, u)));
            }
            assert_eq!(seen.len() as u64, t.order());
            assert_eq!(
                t.polar_decompose(FieldElement::ZERO),
                Err(Error::ZeroHasNoPolarForm)
            );
        }
    }

    #[test]
    fn polar_of_base_and_circle() {
        let t = FieldTower::new(3, 1, None).unwrap();
        for &x in &t.base_field(Level::Full)[1..] {
            assert_eq!(t.polar_decompose(x).unwrap(), (x, FieldElement::ONE));
        }
        for &u in t.unit_circle(Level::Full) {
            assert_eq!(t.polar_decompose(u).unwrap(), (FieldElement::ONE, u));
        }
    }

    #[test]
    fn with_i_elem_validates() {
        let t = FieldTower::new(2, 1, None).unwrap();
        assert!(t.with_i_elem(FieldElement::ONE).is_err());
        let other = t
            .elements()
            .filter(|&x| t.trace_kf(x) == FieldElement::ONE)
            .nth(1)
            .unwrap();
        let t2 = t.with_i_elem(other).unwrap();
        assert_eq!(t2.i_elem(), other);
        assert_eq!(t2.delta(), t.norm_kf(other));
    }

    #[test]
    fn largest_tower_builds() {
        let t = FieldTower::new(8, 4, None).unwrap();
        assert_eq!(t.unit_circle(Level::Full).len(), 257);
        assert_eq!(t.unit_circle(Level::Sub).len(), 17);
        assert_eq!(
            t.pow_signed(t.generator(), -1).unwrap(),
            t.inv(t.generator()).unwrap()
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn field_axioms(a in 0u16..4096, b in 0u16..4096, c in 0u16..4096) {
                let t = FieldTower::new(6, 2, None).unwrap();
                let (a, b, c) = (fe(a), fe(b), fe(c));
                prop_assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
                prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
                prop_assert_eq!(t.mul(a, b), t.mul(b, a));
                prop_assert_eq!(t.add(t.add(a, b), b), a);
            }

            #[test]
            fn trace_is_f_linear(a in 0u16..4096, b in 0u16..4096, l in 0usize..64) {
                let t = FieldTower::new(6, 3, None).unwrap();
                let lam = t.base_field(Level::Full)[l];
                let (a, b) = (fe(a), fe(b));
                let lhs = t.trace_kf(t.add(t.mul(lam, a), b));
                prop_assert_eq!(lhs, t.add(t.mul(lam, t.trace_kf(a)), t.trace_kf(b)));
            }
        }
    }
}
