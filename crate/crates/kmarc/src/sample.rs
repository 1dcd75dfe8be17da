//! Seeded random star-sets and star-set preserving mutations.

use kmarc_core::arcs::PointSet;
use kmarc_core::{FieldElement, FieldTower, Level};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{CliError, CliResult};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `q/t + 1` random directions through `0` with `t` random points on each.
pub fn random_star_set<R: Rng>(tower: &FieldTower, t: u32, rng: &mut R) -> CliResult<PointSet> {
    let q = tower.q();
    if t < 1 || t >= q || !q.is_multiple_of(t) {
        return Err(CliError::Input(format!(
            "type t = {t} must be a proper divisor of q = {q}"
        )));
    }
    let radii: Vec<FieldElement> = tower.base_field(Level::Full)[1..].to_vec();
    let dirs = tower
        .unit_circle(Level::Full)
        .choose_multiple(rng, (q / t + 1) as usize);
    let mut points = Vec::with_capacity((q + t) as usize);
    for &u in dirs {
        for &lambda in radii.choose_multiple(rng, t as usize) {
            points.push(tower.mul(lambda, u));
        }
    }
    Ok(PointSet::new(points)?)
}

/// Moves one point along its ray to an unused radius. The result is still a
/// star-set of the same type.
pub fn move_along_ray<R: Rng>(
    tower: &FieldTower,
    set: &PointSet,
    rng: &mut R,
) -> CliResult<PointSet> {
    let &y = set
        .points()
        .choose(rng)
        .ok_or_else(|| CliError::Input("empty point set".into()))?;
    let (_, u) = tower.polar_decompose(y)?;
    let free = tower.base_field(Level::Full)[1..]
        .iter()
        .map(|&l| tower.mul(l, u))
        .filter(|p| !set.contains(*p))
        .choose(rng)
        .ok_or_else(|| CliError::Input("ray is full".into()))?;
    Ok(PointSet::new(set.points().iter().map(|&p| {
        if p == y {
            free
        } else {
            p
        }
    }))?)
}

/// `c · H` for a random `c ∈ K*`; preserves the KM property and the nucleus.
pub fn random_scaling<R: Rng>(
    tower: &FieldTower,
    set: &PointSet,
    rng: &mut R,
) -> CliResult<PointSet> {
    let c = FieldElement::from_bits(rng.gen_range(1..tower.field_size()) as u16);
    Ok(PointSet::new(
        set.points().iter().map(|&p| tower.mul(c, p)),
    )?)
}
