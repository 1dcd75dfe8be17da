//! Direct census split over threads by direction.

use std::thread;

use kmarc_core::arcs::{
    assemble_report, direction_census, verify_direct, ArcReport, DirectionCensus, PointSet,
};
use kmarc_core::{Error, FieldTower, Level};

use crate::CliResult;

/// [`verify_direct`] with the `q + 1` directions shared among `jobs`
/// threads. The report is identical to the serial one.
pub fn verify_direct_jobs(
    tower: &FieldTower,
    set: &PointSet,
    t: u32,
    jobs: usize,
) -> CliResult<ArcReport> {
    if jobs <= 1 {
        return Ok(verify_direct(tower, set, t)?);
    }
    tower.check_points(set)?;
    let q = tower.q();
    if t == 0 || t >= q {
        return Err(Error::TypeOutOfRange { t, q }.into());
    }
    let expected = (q + t) as usize;
    if set.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            found: set.len(),
        }
        .into());
    }

    let directions = tower.unit_circle(Level::Full);
    let chunk = directions.len().div_ceil(jobs);
    let parts: Vec<DirectionCensus> = thread::scope(|scope| {
        let handles: Vec<_> = directions
            .chunks(chunk)
            .map(|dirs| {
                scope.spawn(move || {
                    dirs.iter()
                        .map(|&u| direction_census(tower, Level::Full, u, set.points()))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("census worker panicked"))
            .collect()
    });
    Ok(assemble_report(tower, Level::Full, set, t, &parts))
}
