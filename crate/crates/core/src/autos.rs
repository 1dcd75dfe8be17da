//! Named collineations of the `H_r` arcs, orbit computations, elation and
//! translation checks, and group closure.
//!
//! Every map here is a [`Collineation`] in the homogeneous coordinates of
//! [`crate::plane`]; point images are always computed through that
//! conversion.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::arcs::{t_secants, Outcome, PointSet};
use crate::constructions::{level_set, Example, ExampleFixture};
use crate::gf2tower::{FieldElement, FieldTower, Level};
use crate::plane::{Collineation, Line, Matrix, ProjPoint};
use crate::{Error, Result};

/// Default bound on closure and order computations.
pub const DEFAULT_CAP: usize = 1_000_000;

const SAMPLE_POINTS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MapSpec {
    /// `[[0,1,0],[1,b,0],[0,0,1]]`, cyclic of order `r + 1`.
    Rotation { b: FieldElement },
    /// `(x, y) ↦ (x² + y², b y²)`: a squaring followed by a linear part.
    TwistedSquaring { b: FieldElement },
    /// `[[1,0,0],[0,1,0],[a,b,1]]`, the elation `z ↦ z / (<z, b + a·i> + 1)`.
    Elation { a: FieldElement, b: FieldElement },
    /// `[[1,b,0],[0,1,0],[0,0,1]]`, an involution.
    Shear { b: FieldElement },
    /// `[[γ,0,0],[0,γ⁻¹,0],[s,t,1]]` with `γ ∈ F'*`, `Tr(s) = γ + 1`,
    /// `Tr(t) = γ⁻¹ + 1`.
    Dilation {
        gamma: FieldElement,
        s: FieldElement,
        t: FieldElement,
    },
    /// `z ↦ z̄`.
    Conjugation,
    /// `[[1,1,0],[0,1,0],[0,t,1]]`: conjugation followed by `E_{0,t}`.
    ShiftedConjugation { t: FieldElement },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamedMap {
    pub spec: MapSpec,
    pub map: Collineation,
}

/// Builds a named map, checking its parameter constraints and the
/// properties it is defined by.
pub fn make_named(tower: &FieldTower, spec: MapSpec) -> Result<NamedMap> {
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let map = match spec {
        MapSpec::Rotation { b } => {
            let map = tower.collineation([[z, o, z], [o, b, z], [z, z, o]], 0)?;
            if map_order(tower, &map, DEFAULT_CAP)? != tower.r() as u64 + 1 {
                return Err(Error::InvalidParameter(
                    "rotation parameter does not give order r + 1",
                ));
            }
            map
        }
        MapSpec::TwistedSquaring { b } => {
            let squaring = tower.collineation([[o, tower.delta(), z], [z, o, z], [z, z, o]], 1)?;
            let linear = tower.collineation(
                [[o, tower.add(tower.delta(), o), z], [z, b, z], [z, z, o]],
                0,
            )?;
            let map = tower.compose(&linear, &squaring);
            for x in sample(tower) {
                if tower.apply_affine(&squaring, x) != Some(tower.square(x)) {
                    return Err(Error::Internal("squaring matrix disagrees with z ↦ z²"));
                }
                let (cx, cy) = affine_coords(tower, x);
                let (x2, y2) = (tower.square(cx), tower.square(cy));
                let want = tower.add(
                    tower.add(x2, y2),
                    tower.mul(tower.mul(b, y2), tower.i_elem()),
                );
                if tower.apply_affine(&map, x) != Some(want) {
                    return Err(Error::Internal(
                        "twisted_squaring' disagrees with its coordinate formula",
                    ));
                }
            }
            if !tower.power(&map, tower.m() as u64).is_linear() {
                return Err(Error::Internal("(twisted_squaring')^m is not linear"));
            }
            map
        }
        MapSpec::Elation { a, b } => {
            let map = tower.collineation([[o, z, z], [z, o, z], [a, b, o]], 0)?;
            let w = tower.add(b, tower.mul(a, tower.i_elem()));
            for x in sample(tower) {
                let den = tower.add(tower.bilinear(x, w), o);
                let want = tower.div(x, den).ok();
                if tower.apply_affine(&map, x) != want {
                    return Err(Error::Internal("elation disagrees with z / (<z, w> + 1)"));
                }
            }
            map
        }
        MapSpec::Shear { b } => {
            if b.is_zero() {
                return Err(Error::InvalidParameter("shear needs b != 0"));
            }
            let map = tower.collineation([[o, b, z], [z, o, z], [z, z, o]], 0)?;
            if map_order(tower, &map, 2)? != 2 {
                return Err(Error::Internal("shear is not an involution"));
            }
            map
        }
        MapSpec::Dilation { gamma, s, t } => {
            tower.check(gamma)?;
            if gamma.is_zero() || !tower.is_in_sub_base(gamma) {
                return Err(Error::NotInSubfield { value: gamma });
            }
            for x in [s, t] {
                tower.check(x)?;
                if !tower.is_in_base(x) {
                    return Err(Error::NotInBaseField { value: x });
                }
            }
            let ginv = tower.inv(gamma)?;
            if tower.rel_trace(s)? != tower.add(gamma, o)
                || tower.rel_trace(t)? != tower.add(ginv, o)
            {
                return Err(Error::TraceCondition);
            }
            let map = tower.collineation([[gamma, z, z], [z, ginv, z], [s, t, o]], 0)?;
            let r1 = tower.r() as u64 - 1;
            if tower.multiplicative_order(gamma)? == r1
                && map_order(tower, &map, DEFAULT_CAP)? != r1
            {
                return Err(Error::Internal(
                    "dilation with primitive gamma does not have order r - 1",
                ));
            }
            map
        }
        MapSpec::Conjugation => {
            let images = [o, tower.i_elem()]
                .map(|x| tower.to_homogeneous(&ProjPoint::Affine(tower.conj(x))));
            let map = tower.collineation(
                [
                    [images[0][0], images[1][0], z],
                    [images[0][1], images[1][1], z],
                    [z, z, o],
                ],
                0,
            )?;
            for x in sample(tower) {
                if tower.apply_affine(&map, x) != Some(tower.conj(x)) {
                    return Err(Error::Internal("conjugation matrix disagrees with z ↦ z̄"));
                }
            }
            map
        }
        MapSpec::ShiftedConjugation { t } => {
            tower.collineation([[o, o, z], [z, o, z], [z, t, o]], 0)?
        }
    };
    Ok(NamedMap { spec, map })
}

/// `ρ_{γ,s,t}` with the smallest `s`, `t` meeting the trace conditions.
pub fn dilation_spec(tower: &FieldTower, gamma: FieldElement) -> Result<MapSpec> {
    if gamma.is_zero() || !tower.is_in_sub_base(gamma) {
        return Err(Error::NotInSubfield { value: gamma });
    }
    let o = FieldElement::ONE;
    let s = smallest_with_trace(tower, tower.add(gamma, o))?;
    let t = smallest_with_trace(tower, tower.add(tower.inv(gamma)?, o))?;
    Ok(MapSpec::Dilation { gamma, s, t })
}

/// Smallest `x ∈ F` with `Tr_{F/F'}(x) = value`.
pub fn smallest_with_trace(tower: &FieldTower, value: FieldElement) -> Result<FieldElement> {
    level_set(tower, value)
        .first()
        .copied()
        .ok_or(Error::TraceCondition)
}

/// Smallest primitive element of `F'`.
pub fn primitive_sub_element(tower: &FieldTower) -> FieldElement {
    let target = tower.r() as u64 - 1;
    tower
        .base_field(Level::Sub)
        .iter()
        .copied()
        .find(|&x| !x.is_zero() && tower.multiplicative_order(x) == Ok(target))
        .expect("F' has a primitive element")
}

/// Coordinates `(x, y)` with `z = x + y·i`.
fn affine_coords(tower: &FieldTower, z: FieldElement) -> (FieldElement, FieldElement) {
    let v = tower.to_homogeneous(&ProjPoint::Affine(z));
    (v[0], v[1])
}

/// Up to fifty deterministic sample points spread over `K`.
fn sample(tower: &FieldTower) -> impl Iterator<Item = FieldElement> + '_ {
    let step = (tower.field_size() as usize / SAMPLE_POINTS).max(1);
    tower.elements().step_by(step).take(SAMPLE_POINTS)
}

/// Smallest `k >= 1` with `c^k` the identity map.
pub fn map_order(tower: &FieldTower, c: &Collineation, cap: usize) -> Result<u64> {
    let mut acc = *c;
    for k in 1..=cap as u64 {
        if tower.is_identity_map(&acc) {
            return Ok(k);
        }
        acc = tower.compose(c, &acc);
    }
    Err(Error::ClosureOverflow { cap })
}

/// Whether `c` maps the affine set onto itself; the witness is the first
/// point whose image leaves the set (or goes to infinity).
pub fn stabilizes(tower: &FieldTower, c: &Collineation, set: &PointSet) -> Outcome<FieldElement> {
    for &x in set.points() {
        match tower.apply_affine(c, x) {
            Some(y) if set.contains(y) => {}
            _ => return Outcome::Fails(x),
        }
    }
    Outcome::Holds
}

/// Partition of `xs` into orbits of the group generated by `gens` under the
/// action `act`. Orbits are sorted and listed by their smallest member.
pub fn orbits<T, F>(gens: &[Collineation], xs: &[T], act: F) -> Result<Vec<Vec<T>>>
where
    T: Ord + Clone,
    F: Fn(&Collineation, &T) -> T,
{
    let universe: BTreeSet<T> = xs.iter().cloned().collect();
    for g in gens {
        if universe.iter().any(|x| !universe.contains(&act(g, x))) {
            return Err(Error::NotInvariant);
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in &universe {
        if seen.contains(start) {
            continue;
        }
        let mut orbit = vec![start.clone()];
        seen.insert(start.clone());
        let mut next = 0;
        while next < orbit.len() {
            let x = orbit[next].clone();
            next += 1;
            for g in gens {
                let y = act(g, &x);
                if seen.insert(y.clone()) {
                    orbit.push(y);
                }
            }
        }
        orbit.sort();
        out.push(orbit);
    }
    Ok(out)
}

pub fn point_orbits(
    tower: &FieldTower,
    gens: &[Collineation],
    xs: &[ProjPoint],
) -> Result<Vec<Vec<ProjPoint>>> {
    orbits(gens, xs, |g, p| tower.apply_collineation(g, p))
}

pub fn line_orbits(
    tower: &FieldTower,
    gens: &[Collineation],
    lines: &[Line],
) -> Result<Vec<Vec<Line>>> {
    orbits(gens, lines, |g, l| tower.apply_to_line(g, l))
}

/// All `q²` elations with the given axis (identity included), as
/// `I + c·fᵀ` for `f` the line coordinates and `c` on the axis.
pub fn axis_elations(tower: &FieldTower, axis: &Line) -> Vec<Collineation> {
    let f = tower.line_coordinates(axis);
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    // Basis of { c : f·c = 0 }.
    let [c1, c2] = if !f[2].is_zero() {
        [[f[2], z, f[0]], [z, f[2], f[1]]]
    } else if !f[1].is_zero() {
        [[f[1], f[0], z], [z, z, o]]
    } else {
        [[z, o, z], [z, z, o]]
    };
    let base = tower.base_field(Level::Full);
    let mut out = Vec::with_capacity(base.len() * base.len());
    for &alpha in base {
        for &beta in base {
            let c: [FieldElement; 3] = core::array::from_fn(|k| {
                tower.add(tower.mul(alpha, c1[k]), tower.mul(beta, c2[k]))
            });
            let mut matrix: Matrix = [[z; 3]; 3];
            for (row, cell_row) in matrix.iter_mut().enumerate() {
                for (col, cell) in cell_row.iter_mut().enumerate() {
                    let id = if row == col { o } else { z };
                    *cell = tower.add(id, tower.mul(c[row], f[col]));
                }
            }
            out.push(
                tower
                    .collineation(matrix, 0)
                    .expect("elations are invertible"),
            );
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TranslationClass {
    /// The stabilizing elations are transitive on `H \ l0`.
    Translation,
    /// Transitive on `l ∩ H` for every other `t`-secant `l`, but not on `H \ l0`.
    ElationOnly,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationReport {
    pub class: TranslationClass,
    /// The elations with axis `l0` that stabilize `H`.
    pub stabilizer: Vec<Collineation>,
}

/// Classifies `H` by the group of elations with axis `l0` that stabilize it.
pub fn verify_translation_arc(
    tower: &FieldTower,
    set: &PointSet,
    t: u32,
    axis: &Line,
) -> Result<TranslationReport> {
    if t <= 2 {
        return Err(Error::InvalidParameter("translation arcs need t > 2"));
    }
    tower.check_line(axis)?;
    let secants = t_secants(tower, set, t)?;
    if !secants.contains(axis) {
        return Err(Error::NotSecant);
    }
    let stabilizer: Vec<Collineation> = axis_elations(tower, axis)
        .into_iter()
        .filter(|g| stabilizes(tower, g, set).holds())
        .collect();

    let on_axis = |x: FieldElement| tower.is_incident(axis, &ProjPoint::Affine(x));
    let off_axis: Vec<FieldElement> = set
        .points()
        .iter()
        .copied()
        .filter(|&x| !on_axis(x))
        .collect();
    let translation = single_orbit(tower, &stabilizer, &off_axis);

    let elation = secants.iter().filter(|l| *l != axis).all(|l| {
        let on_l: Vec<FieldElement> = set
            .points()
            .iter()
            .copied()
            .filter(|&x| tower.is_incident(l, &ProjPoint::Affine(x)))
            .collect();
        let fixing: Vec<Collineation> = stabilizer
            .iter()
            .copied()
            .filter(|g| tower.apply_to_line(g, l) == *l)
            .collect();
        single_orbit(tower, &fixing, &on_l)
    });

    let class = match (translation, elation) {
        (true, _) => TranslationClass::Translation,
        (false, true) => TranslationClass::ElationOnly,
        (false, false) => TranslationClass::Neither,
    };
    Ok(TranslationReport { class, stabilizer })
}

/// For a full group `group`, whether `{ g(x0) }` covers `xs`.
fn single_orbit(tower: &FieldTower, group: &[Collineation], xs: &[FieldElement]) -> bool {
    let Some(&x0) = xs.first() else { return true };
    let images: BTreeSet<FieldElement> = group
        .iter()
        .filter_map(|g| tower.apply_affine(g, x0))
        .collect();
    xs.iter().all(|x| images.contains(x))
}

/// All elements of the group generated by `gens`, in canonical form and
/// sorted. Fails once more than `cap` elements are found.
pub fn group_closure(
    tower: &FieldTower,
    gens: &[Collineation],
    cap: usize,
) -> Result<Vec<Collineation>> {
    let gens: Vec<Collineation> = gens.iter().map(|g| tower.canonical(g)).collect();
    let identity = tower.identity_collineation();
    let mut seen = BTreeSet::from([identity]);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = tower.canonical(&tower.compose(g, &x));
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::ClosureOverflow { cap });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Generators `E_{a,0}`, `E_{0,b}` of `ℰ = { E_{a,b} : Tr(a) = Tr(b) = 0 }`,
/// with `a`, `b` running over a GF(2)-basis of the trace kernel.
pub fn trace_zero_elation_generators(tower: &FieldTower) -> Result<Vec<Collineation>> {
    let z = FieldElement::ZERO;
    let mut span = BTreeSet::from([z]);
    let mut basis = Vec::new();
    for x in level_set(tower, z) {
        if !span.contains(&x) {
            let shifted: Vec<FieldElement> = span.iter().map(|&y| tower.add(x, y)).collect();
            span.extend(shifted);
            basis.push(x);
        }
    }
    let mut out = Vec::with_capacity(2 * basis.len());
    for &v in &basis {
        out.push(make_named(tower, MapSpec::Elation { a: v, b: z })?.map);
        out.push(make_named(tower, MapSpec::Elation { a: z, b: v })?.map);
    }
    Ok(out)
}

/// The `τ` that, together with `θ`, generates the automorphisms of an
/// example arc modulo `ℰ`.
pub fn example_involution(fixture: &ExampleFixture) -> Result<MapSpec> {
    let tower = &fixture.tower;
    let b = fixture.recurrence.b;
    Ok(match fixture.example {
        Example::Half => MapSpec::Conjugation,
        Example::Quarter => MapSpec::ShiftedConjugation {
            t: smallest_with_trace(tower, b)?,
        },
        Example::Eighth => MapSpec::ShiftedConjugation {
            t: smallest_with_trace(tower, tower.pow(b, 5))?,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientOrder {
    /// Order of `ℰ.<θ, τ>`.
    pub group: usize,
    /// Order of `ℰ`.
    pub normal: usize,
    pub quotient: usize,
}

/// Order of `(ℰ.<θ, τ>)/ℰ` for an example arc.
pub fn example_quotient_order(fixture: &ExampleFixture, cap: usize) -> Result<QuotientOrder> {
    let tower = &fixture.tower;
    let elations = trace_zero_elation_generators(tower)?;
    let normal = group_closure(tower, &elations, cap)?.len();
    let rotation = make_named(
        tower,
        MapSpec::Rotation {
            b: fixture.recurrence.b,
        },
    )?
    .map;
    let involution = make_named(tower, example_involution(fixture)?)?.map;
    let mut gens = elations;
    gens.push(rotation);
    gens.push(involution);
    let group = group_closure(tower, &gens, cap)?.len();
    Ok(QuotientOrder {
        group,
        normal,
        quotient: group / normal,
    })
}
