//! Star-sets and the three equivalent KM-arc criteria.
//!
//! For a star-set `H` (the `q + t` points spread `t` per line over `q/t + 1`
//! lines through `0`), the following are equivalent:
//!
//! * every line meets `H` in `0`, `2` or `t` points ([`verify_direct`]);
//! * `Σ_{y∈H} <v, y>^k = 0` for every `v ∈ S`, `1 <= k <= q-2` ([`verify_bracket`]);
//! * `π_d(H) = 0` for every `d` in the exponent set `D` or `E` ([`verify_power_sums`]).
//!
//! The census is the ground truth; the algebraic routes are checked against it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::gf2tower::{FieldElement, FieldTower, Level};
use crate::plane::Line;
use crate::{Error, Result};

/// A duplicate-free, canonically ordered set of affine points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PointSet {
    points: Vec<FieldElement>,
}

impl PointSet {
    pub fn new(points: impl IntoIterator<Item = FieldElement>) -> Result<Self> {
        let mut points: Vec<_> = points.into_iter().collect();
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint { value: w[0] });
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[FieldElement] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    pub fn into_points(self) -> Vec<FieldElement> {
        self.points
    }
}

impl FieldTower {
    pub fn check_points(&self, set: &PointSet) -> Result<()> {
        set.points().iter().try_for_each(|&x| self.check(x))
    }
}

/// Result of a criterion: either it holds, or a witness of failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome<W> {
    Holds,
    Fails(W),
}

impl<W> Outcome<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    KmArc(u32),
    /// The first line (canonical order) met in a number of points outside `{0, 2, t}`.
    NotKmArc {
        witness: Line,
        count: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcReport {
    pub is_star_set: bool,
    pub t: Option<u32>,
    /// Intersection size → number of lines; includes the line at infinity.
    pub histogram: BTreeMap<u32, u32>,
    pub verdict: Verdict,
}

impl ArcReport {
    pub fn is_km_arc(&self) -> bool {
        matches!(self.verdict, Verdict::KmArc(_))
    }

    pub fn line_total(&self) -> u32 {
        self.histogram.values().sum()
    }

    /// `Σ size · count`, i.e. the number of incident (point, line) pairs.
    pub fn incidence_total(&self) -> u32 {
        self.histogram.iter().map(|(s, c)| s * c).sum()
    }
}

/// Intersection counts of a point set with the `q` parallel lines `L(u, ·)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionCensus {
    pub u: FieldElement,
    /// `(mu, |L(u, mu) ∩ H|)` for the lines met at least once, sorted by `mu`.
    pub counts: Vec<(FieldElement, u32)>,
}

impl DirectionCensus {
    pub fn count(&self, mu: FieldElement) -> u32 {
        self.counts
            .binary_search_by_key(&mu, |&(m, _)| m)
            .map_or(0, |i| self.counts[i].1)
    }
}

/// Census of all lines with normal direction `u` at the given level.
pub fn direction_census(
    tower: &FieldTower,
    level: Level,
    u: FieldElement,
    points: &[FieldElement],
) -> DirectionCensus {
    let mut values: Vec<FieldElement> = points
        .iter()
        .map(|&y| tower.bilinear_at(level, u, y))
        .collect();
    values.sort_unstable();
    let mut counts: Vec<(FieldElement, u32)> = Vec::new();
    for v in values {
        match counts.last_mut() {
            Some((mu, c)) if *mu == v => *c += 1,
            _ => counts.push((v, 1)),
        }
    }
    DirectionCensus { u, counts }
}

/// Census over every direction of the given level, in canonical order.
pub fn census(tower: &FieldTower, level: Level, points: &[FieldElement]) -> Vec<DirectionCensus> {
    tower
        .unit_circle(level)
        .iter()
        .map(|&u| direction_census(tower, level, u, points))
        .collect()
}

/// Folds per-direction censuses into a report. `parts` must cover every
/// direction of the level exactly once, in any order.
pub fn assemble_report(
    tower: &FieldTower,
    level: Level,
    set: &PointSet,
    t: u32,
    parts: &[DirectionCensus],
) -> ArcReport {
    let lines_per_direction = tower.level_size(level);
    let mut histogram = BTreeMap::new();
    // The line at infinity never meets an affine set.
    *histogram.entry(0).or_insert(0) += 1;
    let mut witness: Option<(Line, u32)> = None;
    for part in parts {
        *histogram.entry(0).or_insert(0) += lines_per_direction - part.counts.len() as u32;
        for &(mu, c) in &part.counts {
            *histogram.entry(c).or_insert(0) += 1;
            if c != 2 && c != t {
                let line = Line::Affine { u: part.u, mu };
                if witness.is_none_or(|(w, _)| line < w) {
                    witness = Some((line, c));
                }
            }
        }
    }
    let verdict = match witness {
        None => Verdict::KmArc(t),
        Some((witness, count)) => Verdict::NotKmArc { witness, count },
    };
    let (is_star_set, star_t) = classify_star_set_at(tower, level, set);
    let t = match verdict {
        Verdict::KmArc(t) => Some(t),
        Verdict::NotKmArc { .. } => star_t,
    };
    ArcReport {
        is_star_set,
        t,
        histogram,
        verdict,
    }
}

fn check_type(tower: &FieldTower, level: Level, set: &PointSet, t: u32) -> Result<()> {
    let q = tower.level_size(level);
    if t == 0 || t >= q {
        return Err(Error::TypeOutOfRange { t, q });
    }
    let expected = (q + t) as usize;
    if set.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            found: set.len(),
        });
    }
    Ok(())
}

/// Full census over the `q² + q + 1` lines of `PG(2, q)`.
pub fn verify_direct(tower: &FieldTower, set: &PointSet, t: u32) -> Result<ArcReport> {
    verify_direct_at(tower, Level::Full, set, t)
}

/// [`verify_direct`] in the full plane or in the subplane `PG(2, r)` on `K'`.
pub fn verify_direct_at(
    tower: &FieldTower,
    level: Level,
    set: &PointSet,
    t: u32,
) -> Result<ArcReport> {
    tower.check_points(set)?;
    if let Some(&x) = set
        .points()
        .iter()
        .find(|&&x| !tower.is_in_quadratic_at(level, x))
    {
        return Err(Error::NotInSubfield { value: x });
    }
    check_type(tower, level, set, t)?;
    let parts = census(tower, level, set.points());
    Ok(assemble_report(tower, level, set, t, &parts))
}

/// Star-set test: `(true, Some(t))` iff the `q + t` points lie `t` per line
/// on `q/t + 1` lines through `0`, with `t = |H| - q >= 1`.
pub fn classify_star_set(tower: &FieldTower, set: &PointSet) -> (bool, Option<u32>) {
    classify_star_set_at(tower, Level::Full, set)
}

fn classify_star_set_at(tower: &FieldTower, level: Level, set: &PointSet) -> (bool, Option<u32>) {
    let q = tower.level_size(level) as usize;
    if set.contains(FieldElement::ZERO) || set.len() <= q {
        return (false, None);
    }
    let t = set.len() - q;
    if !q.is_multiple_of(t) {
        return (false, None);
    }
    let mut rays: BTreeMap<FieldElement, usize> = BTreeMap::new();
    for &y in set.points() {
        match tower.polar_decompose_at(level, y) {
            Ok((_, u)) => *rays.entry(u).or_insert(0) += 1,
            Err(_) => return (false, None),
        }
    }
    let ok = rays.len() == q / t + 1 && rays.values().all(|&c| c == t);
    if ok {
        (true, Some(t as u32))
    } else {
        (false, None)
    }
}

/// The algebraic criteria need a star-set of type `2 <= t < q`.
fn require_star(tower: &FieldTower, set: &PointSet) -> Result<u32> {
    tower.check_points(set)?;
    match classify_star_set(tower, set) {
        (true, Some(t)) if t >= 2 && t < tower.q() => Ok(t),
        (true, Some(t)) => Err(Error::TypeOutOfRange { t, q: tower.q() }),
        _ => Err(Error::NotStarSet),
    }
}

/// `Σ_{y∈H} <v, y>^k = 0` for all `v ∈ S` and `1 <= k <= q-2`.
/// Fails with the first `(v, k)` that does not vanish.
pub fn verify_bracket(tower: &FieldTower, set: &PointSet) -> Result<Outcome<(FieldElement, u32)>> {
    require_star(tower, set)?;
    Ok(bracket_sums(tower, set, tower.q() - 2))
}

/// [`verify_bracket`] with the range extended to `k = q - 1`.
pub fn verify_bracket_extended(
    tower: &FieldTower,
    set: &PointSet,
) -> Result<Outcome<(FieldElement, u32)>> {
    require_star(tower, set)?;
    Ok(bracket_sums(tower, set, tower.q() - 1))
}

fn bracket_sums(tower: &FieldTower, set: &PointSet, k_max: u32) -> Outcome<(FieldElement, u32)> {
    for &v in tower.unit_circle(Level::Full) {
        let values: Vec<FieldElement> =
            set.points().iter().map(|&y| tower.bilinear(v, y)).collect();
        let mut powers = values.clone();
        for k in 1..=k_max {
            let sum = powers
                .iter()
                .fold(FieldElement::ZERO, |a, &p| tower.add(a, p));
            if !sum.is_zero() {
                return Outcome::Fails((v, k));
            }
            for (p, &b) in powers.iter_mut().zip(&values) {
                *p = tower.mul(*p, b);
            }
        }
    }
    Outcome::Holds
}

/// `π_d(H) = Σ_{y∈H} y^d`, with `0^d = 0` for `d >= 1`.
pub fn power_sum(tower: &FieldTower, points: &[FieldElement], d: u64) -> FieldElement {
    points.iter().fold(FieldElement::ZERO, |acc, &y| {
        tower.add(acc, tower.pow(y, d))
    })
}

/// `π_d(H) = 0` for every `d` of the chosen exponent set.
/// Fails with the smallest exponent whose power sum does not vanish.
pub fn verify_power_sums(
    tower: &FieldTower,
    set: &PointSet,
    kind: ExponentKind,
) -> Result<Outcome<u64>> {
    require_star(tower, set)?;
    let exps = gen_exponents(kind, tower.m())?;
    Ok(exps
        .values
        .iter()
        .find(|&&d| !power_sum(tower, set.points(), d).is_zero())
        .map_or(Outcome::Holds, |&d| Outcome::Fails(d)))
}

/// `i ⪯ k`: every binary digit of `i` is at most the digit of `k`
/// (equivalently `binom(k, i)` is odd).
pub const fn preceq(i: u64, k: u64) -> bool {
    i & !k == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExponentKind {
    D,
    Dprime,
    E,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSet {
    pub kind: ExponentKind,
    pub m: u32,
    /// Sorted, duplicate-free.
    pub values: Vec<u64>,
}

/// Enumerates `D`, `D'` or `E` for `q = 2^m`:
///
/// * `D  = { iq + k - i : 1 <= k <= q-2, 0 <= i <= ⌊(k-1)/2⌋, i ⪯ k }`
/// * `D' = { k + (q-1) i : 1 <= k <= q-1, i ⪯ k }`
/// * `E  = { Σ_j 2^j x_j > 0 : x_j ∈ {0, 1, q} }`
pub fn gen_exponents(kind: ExponentKind, m: u32) -> Result<ExponentSet> {
    if m == 0 || m > crate::gf2tower::MAX_M {
        return Err(Error::DegreeOutOfRange { m });
    }
    let q = 1u64 << m;
    let mut values = BTreeSet::new();
    match kind {
        ExponentKind::D => {
            for k in 1..=q.saturating_sub(2) {
                for i in (0..=(k - 1) / 2).filter(|&i| preceq(i, k)) {
                    values.insert(i * q + k - i);
                }
            }
        }
        ExponentKind::Dprime => {
            for k in 1..q {
                // Submasks of k.
                let mut i = k;
                loop {
                    values.insert(k + (q - 1) * i);
                    if i == 0 {
                        break;
                    }
                    i = (i - 1) & k;
                }
            }
        }
        ExponentKind::E => {
            let digits = [0, 1, q];
            let combos = 3u64.pow(m);
            for code in 1..combos {
                let mut c = code;
                let mut sum = 0;
                for j in 0..m {
                    sum += (1u64 << j) * digits[(c % 3) as usize];
                    c /= 3;
                }
                values.insert(sum);
            }
        }
    }
    Ok(ExponentSet {
        kind,
        m,
        values: values.into_iter().collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionForm {
    /// `i` over `0 ..= ⌊(k-1)/2⌋`.
    Low,
    /// `i` over `⌈(k+1)/2⌉ ..= k`.
    High,
}

/// `Σ_i binom(k, i) <a^{iq+k-i}, b^{iq+k-i}>` over the chosen half range,
/// keeping only the odd binomials. Both forms equal `<a, b>^k`.
pub fn bracket_power_expand(
    tower: &FieldTower,
    a: FieldElement,
    b: FieldElement,
    k: u32,
    form: ExpansionForm,
) -> Result<FieldElement> {
    let q = tower.q() as u64;
    if k == 0 || k as u64 >= q {
        return Err(Error::ExponentOutOfRange {
            k: k as u64,
            max: q - 1,
        });
    }
    let k = k as u64;
    let range = match form {
        ExpansionForm::Low => 0..=(k - 1) / 2,
        ExpansionForm::High => (k + 2) / 2..=k,
    };
    Ok(range
        .filter(|&i| preceq(i, k))
        .fold(FieldElement::ZERO, |acc, i| {
            let e = i * q + k - i;
            tower.add(acc, tower.bilinear(tower.pow(a, e), tower.pow(b, e)))
        }))
}

/// A `t`-set is Vandermonde when `π_k(T) = 0` for `1 <= k <= t - 2`.
pub fn is_vandermonde(tower: &FieldTower, set: &[FieldElement]) -> Result<bool> {
    let unique = PointSet::new(set.iter().copied())?;
    tower.check_points(&unique)?;
    let t = set.len();
    if t <= 1 || t >= tower.field_size() as usize {
        return Err(Error::VandermondeSize { size: t });
    }
    Ok((1..=t as u64 - 2).all(|k| power_sum(tower, set, k).is_zero()))
}

/// The lines `L(u, 0)` meeting a verified KM-arc with nucleus `0` in `t` points.
pub fn t_secants(tower: &FieldTower, set: &PointSet, t: u32) -> Result<Vec<Line>> {
    let report = verify_direct(tower, set, t)?;
    if !report.is_km_arc() || classify_star_set(tower, set) != (true, Some(t)) {
        return Err(Error::NotKmArc);
    }
    Ok(tower
        .unit_circle(Level::Full)
        .iter()
        .map(|&u| Line::through_origin(u))
        .filter(|l| secant_points(tower, set, l).len() == t as usize)
        .collect())
}

/// `H ∩ L` for an affine line.
pub fn secant_points(tower: &FieldTower, set: &PointSet, line: &Line) -> Vec<FieldElement> {
    match *line {
        Line::Infinity => Vec::new(),
        Line::Affine { u, mu } => set
            .points()
            .iter()
            .copied()
            .filter(|&y| tower.bilinear(u, y) == mu)
            .collect(),
    }
}

/// For every `t`-secant, `{1/y : y ∈ secant ∩ H}` is a Vandermonde set.
pub fn secant_inverse_check(tower: &FieldTower, set: &PointSet, t: u32) -> Result<bool> {
    for line in t_secants(tower, set, t)? {
        let inverses = secant_points(tower, set, &line)
            .into_iter()
            .map(|y| tower.inv(y))
            .collect::<Result<Vec<_>>>()?;
        if !is_vandermonde(tower, &inverses)? {
            return Ok(false);
        }
    }
    Ok(true)
}
