//! Writers for every file artifact: trajectory / dispersion / sweep CSV,
//! portable graymap snapshots (ASCII P2 and binary P5) with min/max sidecars
//! for exact inversion, and full-precision plain-text field dumps.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a dump back recovers the exact doubles.

use std::io::{self, Write};

use crate::analysis::SweepRecord;
use crate::ode::Trajectory;
use crate::pde::Field;
use crate::stability::DispersionCurve;

/// `t,u1,u2,u3` rows at full precision.
pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "t,u1,u2,u3")?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        writeln!(w, "{},{},{},{}", t, s.u1, s.u2, s.u3)?;
    }
    Ok(())
}

/// `x,re_lambda_max` rows.
pub fn write_dispersion_csv<W: Write>(mut w: W, curve: &DispersionCurve) -> io::Result<()> {
    writeln!(w, "x,re_lambda_max")?;
    for (x, y) in &curve.points {
        writeln!(w, "{},{}", x, y)?;
    }
    Ok(())
}

/// `param,u1_min,u1_max,amplitude,spot_count,classification` rows.
pub fn write_sweep_csv<W: Write>(mut w: W, records: &[SweepRecord]) -> io::Result<()> {
    writeln!(w, "param,u1_min,u1_max,amplitude,spot_count,classification")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.param_value,
            r.u1_min,
            r.u1_max,
            r.metrics.amplitude,
            r.metrics.spot_count,
            r.metrics.classification
        )?;
    }
    Ok(())
}

const PGM_MAXVAL: u32 = 65535;

fn pgm_levels(f: &Field) -> (f64, f64, Vec<u16>) {
    let (min, max) = (f.min(), f.max());
    let span = max - min;
    let levels = f
        .values
        .iter()
        .map(|&v| {
            if span > 0.0 {
                (((v - min) / span) * PGM_MAXVAL as f64).round() as u16
            } else {
                0
            }
        })
        .collect();
    (min, max, levels)
}

/// ASCII portable graymap, values affinely mapped from `[min, max]` of this
/// frame to `0..=65535`.
pub fn write_pgm_p2<W: Write>(mut w: W, f: &Field) -> io::Result<()> {
    let (_, _, levels) = pgm_levels(f);
    writeln!(w, "P2")?;
    writeln!(w, "{} {}", f.grid.nx, f.grid.ny)?;
    writeln!(w, "{}", PGM_MAXVAL)?;
    for row in levels.chunks(f.grid.nx) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Binary portable graymap (big-endian 16-bit samples).
pub fn write_pgm_p5<W: Write>(mut w: W, f: &Field) -> io::Result<()> {
    let (_, _, levels) = pgm_levels(f);
    write!(w, "P5\n{} {}\n{}\n", f.grid.nx, f.grid.ny, PGM_MAXVAL)?;
    for v in levels {
        w.write_all(&v.to_be_bytes())?;
    }
    Ok(())
}

/// Sidecar recording the affine map of a graymap frame, so gray levels can
/// be inverted back to densities.
pub fn write_pgm_sidecar<W: Write>(mut w: W, f: &Field) -> io::Result<()> {
    writeln!(w, "min = {}", f.min())?;
    writeln!(w, "max = {}", f.max())?;
    writeln!(w, "maxval = {}", PGM_MAXVAL)?;
    Ok(())
}

/// Row-major space-separated matrix at full precision, one line per grid row.
pub fn write_field_dump<W: Write>(mut w: W, f: &Field) -> io::Result<()> {
    for row in f.values.chunks(f.grid.nx) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Parse a field dump back (test/verification aid for exact inversion).
pub fn read_field_dump(text: &str, grid: crate::pde::Grid) -> io::Result<Field> {
    let mut values = Vec::with_capacity(grid.len());
    for line in text.lines() {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{e}: {tok}")))?;
            values.push(v);
        }
    }
    if values.len() != grid.len() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("expected {} values, got {}", grid.len(), values.len()),
        ));
    }
    Ok(Field { grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelParams, SpeciesState};
    use crate::ode::integrate_ode;
    use crate::pde::Grid;

    #[test]
    fn trajectory_csv_round_trips_doubles() {
        let p = ModelParams::reference(2.0);
        let traj = integrate_ode(&p, &SpeciesState::new(0.5, 0.5, 0.5), 1.0, 0.1).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,u1,u2,u3");
        let last = text.lines().last().unwrap();
        let cols: Vec<f64> = last.split(',').map(|s| s.parse().unwrap()).collect();
        let end = traj.final_state();
        assert_eq!(cols[1], end.u1);
        assert_eq!(cols[3], end.u3);
    }

    #[test]
    fn field_dump_round_trips_exactly() {
        let g = Grid::new(6, 4, 1.0).unwrap();
        let f = Field::from_fn(g, |x, y| (x * 0.37 + y * 0.11).sin() / 3.0);
        let mut buf = Vec::new();
        write_field_dump(&mut buf, &f).unwrap();
        let back = read_field_dump(&String::from_utf8(buf).unwrap(), g).unwrap();
        assert_eq!(back.values, f.values);
    }

    #[test]
    fn pgm_headers_and_extremes() {
        let g = Grid::new(3, 3, 1.0).unwrap();
        let mut f = Field::constant(g, 0.25);
        f.set(0, 0, 0.0);
        f.set(2, 2, 1.0);
        let mut buf = Vec::new();
        write_pgm_p2(&mut buf, &f).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "P2");
        assert_eq!(lines.next().unwrap(), "3 3");
        assert_eq!(lines.next().unwrap(), "65535");
        assert!(text.contains("65535"));
        assert!(text.lines().nth(3).unwrap().starts_with('0'));

        let mut bin = Vec::new();
        write_pgm_p5(&mut bin, &f).unwrap();
        assert!(bin.starts_with(b"P5\n3 3\n65535\n"));
        assert_eq!(bin.len(), b"P5\n3 3\n65535\n".len() + 9 * 2);
        // last sample is the maximum
        assert_eq!(&bin[bin.len() - 2..], &65535u16.to_be_bytes());
    }

    #[test]
    fn constant_frame_maps_to_zero_levels() {
        let g = Grid::new(3, 3, 1.0).unwrap();
        let f = Field::constant(g, 0.5);
        let mut buf = Vec::new();
        write_pgm_p2(&mut buf, &f).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines().skip(3) {
            assert_eq!(line, "0 0 0");
        }
    }
}
