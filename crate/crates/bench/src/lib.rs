//! Shared fixtures for the benchmarks.

use twotone_core::sweep::default_axes;
use twotone_core::{DriveSpec, SweepAxis, SystemParams};

/// Reference parameters with a critical in-phase port 3 drive.
pub fn reference() -> (SystemParams, DriveSpec) {
    let params = SystemParams::default();
    let drive = DriveSpec::from_effective(&params, 1.0, 0.0).expect("reference drive");
    (params, drive)
}

/// Default probe and magnon windows resampled to `points` per axis.
pub fn axes(params: &SystemParams, points: usize) -> (SweepAxis, SweepAxis) {
    let (probe, magnon) = default_axes(params);
    (
        SweepAxis::new(probe.start, probe.stop, points),
        SweepAxis::new(magnon.start, magnon.stop, points),
    )
}
