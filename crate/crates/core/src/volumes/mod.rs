//! Volumes: character sums for surface moduli, Reidemeister volumes of
//! Seifert components and the abelian case.

mod abelian;
mod witten;

pub use abelian::{
    abelian_components, abelian_mv_verify, abelian_torsion_scalar, density_factor, AbelianComponentSet, AbelianLabel,
    AbelianSequences,
};
pub use witten::{
    witten_volume, witten_volume_with, Normalization, TailKind, VolumeOptions, VolumeResult, WITTEN_NORMALIZATION,
};

use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::seifert::{torsion_prefactor, ComponentLabel, SeifertData};

/// Volume of the component labelled by `label` for the Reidemeister
/// density: the torsion prefactor times the surface volume of `label.u`.
pub fn reidemeister_volume(s: &SeifertData, rs: &RootSystem, label: &ComponentLabel, truncation: u64) -> Result<VolumeResult> {
    reidemeister_volume_with(s, rs, label, &VolumeOptions::new(truncation))
}

pub fn reidemeister_volume_with(
    s: &SeifertData,
    rs: &RootSystem,
    label: &ComponentLabel,
    opts: &VolumeOptions,
) -> Result<VolumeResult> {
    if label.dim <= 0 {
        return Err(Error::NonConvergent { dim: label.dim });
    }
    let prefactor = torsion_prefactor(s, rs, label)?.value;
    let mut v = witten_volume_with(s.genus(), rs, &label.u, opts)?;
    v.value *= prefactor;
    v.tail_estimate *= prefactor;
    Ok(v)
}
