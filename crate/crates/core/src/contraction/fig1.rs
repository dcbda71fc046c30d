use std::io::Write;

use rayon::prelude::*;

use super::psi0::{psi0_closed, psi0_limit_beta_inf, psi0_taylor, Psi0Params};
use crate::asymptotics::log_grid;
use crate::error::{Error, Result};
use crate::quadrature::QuadConfig;

/// Mollifier widths of the three finite-`beta` columns.
pub const FIG1_BETAS: [f64; 3] = [1000.0, 2000.0, 3000.0];
/// `beta` at which the Taylor columns are evaluated.
pub const FIG1_TAYLOR_BETA: f64 = 1000.0;
pub const FIG1_R_RANGE: (f64, f64) = (0.05, 1.5);
pub const FIG1_POINTS: usize = 60;
pub const FIG1_HEADER: &str = "r,psi_beta1000,psi_beta2000,psi_beta3000,psi_inf,taylor1,taylor2,taylor3";

/// One row of the figure table. Taylor cells are `None` where the
/// approximant's precondition `sqrt(2 beta) r >= 3` fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Row {
    pub r: f64,
    pub psi: [f64; 3],
    pub psi_inf: f64,
    pub taylor: [Option<f64>; 3],
}

/// Evaluates the figure table at `points` log-spaced radii.
pub fn fig1_rows(r_min: f64, r_max: f64, points: usize, c12: f64, cfg: &QuadConfig) -> Result<Vec<Fig1Row>> {
    if !(r_min > 0.0) || !(r_max > r_min) || points < 2 {
        return Err(Error::InvalidConfig(format!("bad radius grid [{r_min}, {r_max}] with {points} points")));
    }
    cfg.validate()?;
    log_grid(r_min, r_max, points).into_par_iter().map(|r| fig1_row(r, c12, cfg)).collect()
}

fn fig1_row(r: f64, c12: f64, cfg: &QuadConfig) -> Result<Fig1Row> {
    let mut psi = [0.0; 3];
    for (slot, &beta) in psi.iter_mut().zip(&FIG1_BETAS) {
        *slot = psi0_closed(&Psi0Params::new(r, beta, c12)?, cfg)?.value;
    }
    let tp = Psi0Params::new(r, FIG1_TAYLOR_BETA, c12)?;
    let mut taylor = [None; 3];
    for (k, slot) in taylor.iter_mut().enumerate() {
        *slot = match psi0_taylor(k as u8 + 1, &tp, cfg) {
            Ok(q) => Some(q.value),
            Err(Error::Precondition(_)) => None,
            Err(e) => return Err(e),
        };
    }
    Ok(Fig1Row { r, psi, psi_inf: psi0_limit_beta_inf(r, c12), taylor })
}

/// Writes the header and rows with 17 significant digits and `\n` endings.
pub fn write_fig1_csv<W: Write>(rows: &[Fig1Row], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{FIG1_HEADER}")?;
    for row in rows {
        write!(out, "{:.16e}", row.r)?;
        for v in row.psi.iter().chain(std::iter::once(&row.psi_inf)) {
            write!(out, ",{v:.16e}")?;
        }
        for t in &row.taylor {
            match t {
                Some(v) => write!(out, ",{v:.16e}")?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_shape_and_empty_taylor_cells() {
        let cfg = QuadConfig::default();
        let rows = fig1_rows(0.05, 1.5, 6, 1.0, &cfg).unwrap();
        let mut buf = Vec::new();
        write_fig1_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], FIG1_HEADER);
        assert_eq!(lines.len(), 7);
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 8);
        }
        // sqrt(2000) * 0.05 < 3
        assert!(lines[1].ends_with(",,,"));
        assert!(!lines[6].ends_with(','));
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn columns_decrease_towards_the_exact_limit() {
        let cfg = QuadConfig::default();
        for row in fig1_rows(0.1, 0.3, 2, 1.0, &cfg).unwrap() {
            let lim = super::super::psi0_limit_beta_inf_exact(row.r, 1.0, &cfg).unwrap().value;
            assert!(row.psi[0] > row.psi[1] && row.psi[1] > row.psi[2] && row.psi[2] > lim, "r = {}", row.r);
        }
    }
}
