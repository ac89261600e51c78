use super::SweState;

/// Mechanical energy `(hu^2 + hv^2) / (2h) + g h^2 / 2` per cell, plus its integral.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub total: f64,
    pub per_cell: Vec<f64>,
}

/// Energy of the water column. Dry cells contribute zero; bed potential
/// energy `g h z` is included when `z` is given.
pub fn energy_diagnostic(state: &SweState, z: Option<&[f64]>, g: f64) -> EnergyReport {
    let per_cell: Vec<f64> = (0..state.h.len())
        .map(|k| {
            let h = state.h[k];
            if h <= 0.0 {
                return 0.0;
            }
            let kinetic = (state.hu[k] * state.hu[k] + state.hv[k] * state.hv[k]) / (2.0 * h);
            let bed = z.map_or(0.0, |z| g * h * z[k]);
            kinetic + 0.5 * g * h * h + bed
        })
        .collect();
    let total = per_cell.iter().sum::<f64>() * state.grid.cell_area();
    EnergyReport { total, per_cell }
}
