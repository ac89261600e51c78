//! Configuration, topography ingestion and frame output.

pub mod config;
pub mod output;
pub mod scenario;
pub mod topography;

pub use config::{parse_config, OutputFormat, SimConfig};
pub use output::{read_frame_csv, write_frame_csv, write_frame_vtk, OutputFrame, CSV_HEADER};
pub use scenario::{lake_at_rest_check, run_simulation, FrameWriter, LakeReport, Scenario};
pub use topography::{load_topography, Hill, Ramp, RampAxis, TopographyInput};
