//! Writes the `Psi_beta(r)` comparison table as CSV to stdout, the same
//! output as `ckernels fig1`.

use contracted_kernels::contraction::{fig1_rows, write_fig1_csv, FIG1_POINTS, FIG1_R_RANGE};
use contracted_kernels::quadrature::QuadConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (lo, hi) = FIG1_R_RANGE;
    let rows = fig1_rows(lo, hi, FIG1_POINTS, 1.0, &QuadConfig::default())?;
    write_fig1_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
