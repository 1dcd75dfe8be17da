//! The two construction families.
//!
//! Both scale a small "seed" set by the trace slice
//! `V_c = c · { x ∈ F : Tr_{F/F'}(x) = 1 }`:
//!
//! * [`lift_construction`]: `{ λu : 1/λ ∈ V_c, u ∈ H' }` for an arc `H'` of
//!   type `s` in the subplane on `K'` (needs `m/h` odd), giving type `sq/r`;
//! * [`recurrence_arc`]: the same product with the recurrence set `U`, giving a
//!   KM-arc of type `q/r` for every `h | m`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::arcs::{census, verify_direct_at, PointSet};
use crate::gf2tower::{FieldElement, FieldTower, Level};
use crate::{Error, Result};

/// `V_c = c · V_1` where `V_1 = { x ∈ F : Tr_{F/F'}(x) = 1 }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSlice {
    pub h: u32,
    pub c: FieldElement,
    pub unit_trace: Vec<FieldElement>,
    /// `c · V_1`, sorted.
    pub elements: Vec<FieldElement>,
}

pub fn trace_slice(tower: &FieldTower, c: FieldElement) -> Result<TraceSlice> {
    tower.check(c)?;
    if c.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let unit_trace = level_set(tower, FieldElement::ONE);
    let mut elements: Vec<_> = unit_trace.iter().map(|&x| tower.mul(c, x)).collect();
    elements.sort_unstable();
    Ok(TraceSlice {
        h: tower.h(),
        c,
        unit_trace,
        elements,
    })
}

/// `{ x ∈ F : Tr_{F/F'}(x) = value }`.
pub fn level_set(tower: &FieldTower, value: FieldElement) -> Vec<FieldElement> {
    tower
        .base_field(Level::Full)
        .iter()
        .copied()
        .filter(|&x| tower.rel_trace(x).expect("x in F") == value)
        .collect()
}

/// `𝒜 = { q/r^j : 1 <= j <= m/h } ∪ {0}`, sorted.
pub fn admissible_digits(tower: &FieldTower) -> Vec<u64> {
    let q = tower.q() as u64;
    let r = tower.r() as u64;
    let mut out: Vec<u64> = (1..=tower.m() / tower.h()).map(|j| q / r.pow(j)).collect();
    out.push(0);
    out.sort_unstable();
    out
}

/// All `Σ_{j<h} 2^j a_j` with `a_j ∈ 𝒜`, sorted (includes 0).
pub fn admissible_sums(tower: &FieldTower) -> Vec<u64> {
    let digits = admissible_digits(tower);
    let mut sums = BTreeSet::from([0u64]);
    for j in 0..tower.h() {
        sums = sums
            .iter()
            .flat_map(|&s| digits.iter().map(move |&a| s + (1u64 << j) * a))
            .collect();
    }
    sums.into_iter().collect()
}

/// `(k, π_k(V_1))` for every `1 <= k <= q-2` with `π_k(V_1) != 0`, by direct
/// evaluation.
pub fn unit_trace_power_sums(tower: &FieldTower) -> Vec<(u64, FieldElement)> {
    let unit_trace = level_set(tower, FieldElement::ONE);
    let q = tower.q() as u64;
    (1..=q.saturating_sub(2))
        .map(|k| (k, crate::arcs::power_sum(tower, &unit_trace, k)))
        .filter(|(_, s)| !s.is_zero())
        .collect()
}

/// The exponents `q - 1 - Σ_{j<h} 2^j a_j`, `a_j ∈ 𝒜`, allowed to carry a
/// nonzero power sum of `V_1`.
pub fn unit_trace_support_form(tower: &FieldTower) -> BTreeSet<u64> {
    let q = tower.q() as u64;
    admissible_sums(tower)
        .into_iter()
        .filter(|&s| s < q)
        .map(|s| q - 1 - s)
        .collect()
}

/// Checks that `H'` is an arc of type `s` in the subplane `PG(2, r)` on
/// `K'` with nucleus `0`: every subplane line meets it in `0, 2` or `s`
/// points (`0, 1, 2` for an oval) and every line through `0` in `0` or `s`.
pub fn verify_subplane_arc(tower: &FieldTower, sub: &PointSet, s: u32) -> Result<()> {
    tower.check_points(sub)?;
    if sub.contains(FieldElement::ZERO) {
        return Err(Error::ContainsNucleus);
    }
    if let Some(&x) = sub
        .points()
        .iter()
        .find(|&&x| !tower.is_in_sub_quadratic(x))
    {
        return Err(Error::NotInSubfield { value: x });
    }
    let report = verify_direct_at(tower, Level::Sub, sub, s)?;
    if !report.is_km_arc() {
        return Err(Error::SubplaneArc { s });
    }
    let through_origin_ok = census(tower, Level::Sub, sub.points())
        .iter()
        .all(|d| matches!(d.count(FieldElement::ZERO), c if c == 0 || c == s));
    if !through_origin_ok {
        return Err(Error::SubplaneArc { s });
    }
    Ok(())
}

/// `{ λu : 1/λ ∈ V_c, u ∈ H' }` for a verified subplane arc `H'` of type `s`.
/// The result has `q + sq/r` points and type `t = sq/r`.
pub fn lift_construction(
    tower: &FieldTower,
    sub: &PointSet,
    s: u32,
    c: FieldElement,
) -> Result<PointSet> {
    let (m, h) = (tower.m(), tower.h());
    if (m / h) % 2 == 0 {
        return Err(Error::EvenDegreeRatio { m, h });
    }
    if s == 0 {
        return Err(Error::TypeOutOfRange { t: 0, q: tower.r() });
    }
    let t = s * (tower.q() / tower.r());
    if t >= tower.q() {
        return Err(Error::TypeOutOfRange { t, q: tower.q() });
    }
    verify_subplane_arc(tower, sub, s)?;
    scale_by_slice(tower, sub.points(), c)
}

/// `{ u / v : v ∈ V_c, u ∈ seed }`.
fn scale_by_slice(tower: &FieldTower, seed: &[FieldElement], c: FieldElement) -> Result<PointSet> {
    let slice = trace_slice(tower, c)?;
    let inverses = slice
        .elements
        .iter()
        .map(|&v| tower.inv(v))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(
        seed.iter()
            .flat_map(|&u| inverses.iter().map(move |&l| tower.mul(l, u))),
    )
}

/// The unit circle `S'` of `K'`: an oval of the subplane with nucleus `0`.
pub fn subplane_oval(tower: &FieldTower) -> Result<PointSet> {
    let oval = PointSet::new(tower.unit_circle(Level::Sub).iter().copied())?;
    verify_subplane_arc(tower, &oval, 1).map_err(|_| Error::Internal("S' is not an oval"))?;
    Ok(oval)
}

/// `(S' ∪ {0}) + c0` for the smallest `c0 ∈ K'` keeping `0` outside: a
/// hyperoval of the subplane not containing `0`.
pub fn subplane_hyperoval(tower: &FieldTower) -> Result<PointSet> {
    let circle = tower.unit_circle(Level::Sub);
    let c0 = tower
        .elements()
        .filter(|&x| tower.is_in_sub_quadratic(x))
        .find(|&x| !x.is_zero() && circle.binary_search(&x).is_err())
        .ok_or(Error::NoExternalPoint)?;
    let hyperoval = PointSet::new(
        circle
            .iter()
            .chain(core::iter::once(&FieldElement::ZERO))
            .map(|&x| tower.add(x, c0)),
    )?;
    verify_subplane_arc(tower, &hyperoval, 2)
        .map_err(|_| Error::Internal("translated conic is not a hyperoval"))?;
    Ok(hyperoval)
}

/// The recurrence `b_{n+1} = b·b_n + b_{n-1}`, `b_0 = 1`, `b_1 = 0`, and the
/// set `U = { b_i + b_{i+1}·i : 0 <= i <= r }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSet {
    pub h: u32,
    /// Smallest element of multiplicative order `r + 1`.
    pub u_gen: FieldElement,
    /// `u_gen + u_gen^r`, in `F'`.
    pub b: FieldElement,
    /// `b_0 ..= b_{r+1}`.
    pub b_seq: Vec<FieldElement>,
    /// `u_0 ..= u_r` in recurrence order.
    pub points: Vec<FieldElement>,
}

impl RecurrenceSet {
    pub fn point_set(&self) -> PointSet {
        PointSet::new(self.points.iter().copied()).expect("U has distinct elements")
    }
}

pub fn recurrence_set(tower: &FieldTower) -> Result<RecurrenceSet> {
    let r = tower.r() as u64;
    let u_gen = tower
        .unit_circle(Level::Sub)
        .iter()
        .copied()
        .find(|&x| tower.multiplicative_order(x) == Ok(r + 1))
        .ok_or(Error::Internal("no element of order r + 1"))?;
    let b = tower.add(u_gen, tower.pow(u_gen, r));

    // Two full periods and a bit, to check the period and the zero pattern.
    let len = 2 * (r as usize + 1) + 2;
    let mut seq = Vec::with_capacity(len);
    seq.push(FieldElement::ONE);
    seq.push(FieldElement::ZERO);
    while seq.len() < len {
        let n = seq.len();
        seq.push(tower.add(tower.mul(b, seq[n - 1]), seq[n - 2]));
    }

    let period = r as usize + 1;
    if (0..len - period).any(|n| seq[n] != seq[n + period]) {
        return Err(Error::Internal("b-sequence does not have period r + 1"));
    }
    for (n, &bn) in seq.iter().enumerate() {
        let divisible = (n as i64 - 1).rem_euclid(period as i64) == 0;
        if bn.is_zero() != divisible {
            return Err(Error::Internal(
                "b_n = 0 exactly when (r + 1) | (n - 1) fails",
            ));
        }
    }

    let i = tower.i_elem();
    let points: Vec<FieldElement> = (0..=r as usize)
        .map(|n| tower.add(seq[n], tower.mul(seq[n + 1], i)))
        .collect();
    let set = PointSet::new(points.iter().copied())
        .map_err(|_| Error::Internal("U has repeated elements"))?;
    if set.len() != period {
        return Err(Error::Internal("|U| != r + 1"));
    }
    if conic_points(tower, b) != set.points() {
        return Err(Error::Internal(
            "U differs from the conic x^2 + y^2 + bxy = 1",
        ));
    }

    seq.truncate(period + 1);
    Ok(RecurrenceSet {
        h: tower.h(),
        u_gen,
        b,
        b_seq: seq,
        points,
    })
}

/// `{ x + y·i : x, y ∈ F', x^2 + y^2 + bxy = 1 }`, sorted.
pub fn conic_points(tower: &FieldTower, b: FieldElement) -> Vec<FieldElement> {
    let fp = tower.base_field(Level::Sub);
    let mut out: Vec<_> = fp
        .iter()
        .flat_map(|&x| fp.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| {
            let v = tower.add(
                tower.add(tower.square(x), tower.square(y)),
                tower.mul(b, tower.mul(x, y)),
            );
            v == FieldElement::ONE
        })
        .map(|(x, y)| tower.add(x, tower.mul(y, tower.i_elem())))
        .collect();
    out.sort_unstable();
    out
}

/// Closed form `b_n = (u^{n-1} + ũ^{n-1}) / (u + ũ)` with `ũ = u^r`.
pub fn b_closed_form(tower: &FieldTower, rec: &RecurrenceSet, n: i64) -> Result<FieldElement> {
    let u = rec.u_gen;
    let ut = tower.pow(u, tower.r() as u64);
    let num = tower.add(tower.pow_signed(u, n - 1)?, tower.pow_signed(ut, n - 1)?);
    tower.div(num, tower.add(u, ut))
}

/// `H_r = { λu : 1/λ ∈ V_c, u ∈ U }`: `q + q/r` points, type `t = q/r`.
pub fn recurrence_arc(tower: &FieldTower, c: FieldElement) -> Result<PointSet> {
    let rec = recurrence_set(tower)?;
    scale_by_slice(tower, &rec.points, c)
}

/// Exponents of the parameter in the two coordinates; `None` is zero.
type ListedPoint = (Option<u32>, Option<u32>);

/// The worked examples of type `q/2`, `q/4` and `q/8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Example {
    Half,
    Quarter,
    Eighth,
}

impl Example {
    pub fn h(self) -> u32 {
        match self {
            Example::Half => 1,
            Example::Quarter => 2,
            Example::Eighth => 3,
        }
    }

    /// Minimal polynomial of the parameter (`ω` or `η`) the listed set is
    /// written in, and the listed `U` as pairs of exponents of that parameter
    /// (`None` for a zero coordinate).
    fn listing(self) -> (u32, &'static [ListedPoint]) {
        const HALF: &[ListedPoint] = &[(Some(0), None), (None, Some(0)), (Some(0), Some(0))];
        const QUARTER: &[ListedPoint] = &[
            (Some(0), None),
            (None, Some(0)),
            (Some(0), Some(1)),
            (Some(1), Some(0)),
            (Some(1), Some(1)),
        ];
        const EIGHTH: &[ListedPoint] = &[
            (Some(0), None),
            (None, Some(0)),
            (Some(0), Some(1)),
            (Some(1), Some(6)),
            (Some(6), Some(3)),
            (Some(3), Some(3)),
            (Some(3), Some(6)),
            (Some(6), Some(1)),
            (Some(1), Some(0)),
        ];
        match self {
            Example::Half => (0b11, HALF),
            Example::Quarter => (0b111, QUARTER),
            Example::Eighth => (0b1011, EIGHTH),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleFixture {
    pub example: Example,
    /// The input tower with `h` replaced by the example's `h`.
    pub tower: FieldTower,
    pub recurrence: RecurrenceSet,
    pub arc: PointSet,
    /// `e` such that the listed set, with its parameter replaced by
    /// `param^{2^e}`, equals the computed `U`.
    pub automorphism: u32,
    /// The parameter (`ω`, `η`, or 1) before the automorphism is applied.
    pub parameter: FieldElement,
}

pub fn example_fixture(tower: &FieldTower, example: Example) -> Result<ExampleFixture> {
    let h = example.h();
    if !tower.m().is_multiple_of(h) {
        return Err(Error::TowerTooSmall { m: tower.m(), h });
    }
    let tower = tower.with_subfield(h)?;
    let recurrence = recurrence_set(&tower)?;
    let arc = recurrence_arc(&tower, FieldElement::ONE)?;

    let (minpoly, listed) = example.listing();
    let parameter = tower
        .elements()
        .find(|&x| eval_gf2_poly(&tower, minpoly, x).is_zero())
        .ok_or(Error::Internal("parameter polynomial has no root"))?;
    let want = recurrence.point_set();
    let automorphism = (0..h)
        .find(|&e| {
            let p = tower.frob(parameter, e);
            let coord = |c: Option<u32>| c.map_or(FieldElement::ZERO, |k| tower.pow(p, k as u64));
            let listed = PointSet::new(
                listed
                    .iter()
                    .map(|&(x, y)| tower.add(coord(x), tower.mul(coord(y), tower.i_elem()))),
            );
            listed.as_ref() == Ok(&want)
        })
        .ok_or(Error::FixtureMismatch)?;
    Ok(ExampleFixture {
        example,
        tower,
        recurrence,
        arc,
        automorphism,
        parameter,
    })
}

/// Evaluates a GF(2) polynomial (bit-vector) at `x`.
fn eval_gf2_poly(tower: &FieldTower, poly: u32, x: FieldElement) -> FieldElement {
    let deg = crate::gf2tower::poly_degree(poly).unwrap_or(0);
    (0..=deg).rev().fold(FieldElement::ZERO, |acc, j| {
        let acc = tower.mul(acc, x);
        if poly >> j & 1 == 1 {
            tower.add(acc, FieldElement::ONE)
        } else {
            acc
        }
    })
}
