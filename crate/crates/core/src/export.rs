//! Plot-ready CSV tables. Every writer emits a fixed header and rows in a
//! deterministic order; floats use the shortest round-trip representation.

use std::io;
use std::path::Path;

use crate::dynamics::{ReconstructedSpectrum, TrajectorySeries};
use crate::gbz::{GbzSlice, KappaField};
use crate::lattice::{CellSet, GeometryMask};
use crate::spectral::{BandPath, BoundaryStats, ComplexSpectrum, DensityField};
use crate::{Error, Result};

pub const MASK_HEADER: &str = "cell_index,x,y,is_boundary_shell";
pub const SPECTRUM_HEADER: &str = "index,re_E,im_E,fd,rho_b";
pub const DENSITY_HEADER: &str = "x,y,rho";
pub const KAPPA_HEADER: &str = "k_plus,k_minus,kappa";
pub const GBZ_HEADER: &str = "k_minus,re_E,im_E,re_beta,im_beta,kappa";
pub const TRAJECTORY_HEADER: &str = "t,x,y,log_norm,kx,ky";
pub const RECONSTRUCTION_HEADER: &str = "kx,ky,re_E,im_E";

fn table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::with_capacity(64);
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn mask_csv(mask: &GeometryMask, shell: &CellSet) -> Result<String> {
    if shell.flags().len() != mask.len() {
        return Err(Error::InvalidInput("shell does not belong to this mask".into()));
    }
    Ok(table(
        MASK_HEADER,
        mask.cells().iter().enumerate().map(|(i, &(x, y))| format!("{i},{x},{y},{}", u8::from(shell.contains(i)))),
    ))
}

pub fn spectrum_csv(spec: &ComplexSpectrum, stats: &BoundaryStats) -> Result<String> {
    if stats.per_state.len() != spec.len() {
        return Err(Error::InvalidInput("boundary statistics do not match the spectrum".into()));
    }
    Ok(table(
        SPECTRUM_HEADER,
        spec.eigenvalues.iter().enumerate().map(|(i, e)| {
            format!("{i},{},{},{},{}", e.re, e.im, spec.fd[i], stats.per_state[i])
        }),
    ))
}

pub fn density_csv(mask: &GeometryMask, density: &DensityField) -> Result<String> {
    if density.values.len() != mask.len() {
        return Err(Error::InvalidInput("density does not match the mask".into()));
    }
    Ok(table(
        DENSITY_HEADER,
        mask.cells().iter().zip(&density.values).map(|(&(x, y), rho)| format!("{x},{y},{rho}")),
    ))
}

/// Rows over `(k+, k-)`; cells without a GBZ point are written as `NaN`.
pub fn kappa_csv(field: &KappaField) -> String {
    let n = field.grid_n;
    table(
        KAPPA_HEADER,
        (0..n).flat_map(|a| {
            (0..n).map(move |b| format!("{},{},{}", field.momentum(a), field.momentum(b), field.get(a, b)))
        }),
    )
}

pub fn gbz_csv(slices: &[GbzSlice]) -> String {
    table(
        GBZ_HEADER,
        slices.iter().flat_map(|s| {
            s.points.iter().map(|p| {
                format!("{},{},{},{},{},{}", p.k_param, p.energy.re, p.energy.im, p.beta.re, p.beta.im, p.kappa)
            })
        }),
    )
}

pub fn trajectory_csv(series: &TrajectorySeries) -> String {
    table(
        TRAJECTORY_HEADER,
        series.samples.iter().enumerate().map(|(i, s)| {
            let (kx, ky) = series.k_raw(i);
            format!("{},{},{},{},{kx},{ky}", s.t, s.com.0, s.com.1, s.log_norm)
        }),
    )
}

pub fn reconstruction_csv(rec: &ReconstructedSpectrum) -> String {
    table(
        RECONSTRUCTION_HEADER,
        rec.samples.iter().map(|s| format!("{},{},{},{}", s.k.0, s.k.1, s.energy.re, s.energy.im)),
    )
}

/// One band of a momentum path in the reconstruction schema, so the two
/// files can be compared row by row.
pub fn band_path_csv(bp: &BandPath, band: usize) -> Result<String> {
    let trace = bp.bands.get(band).ok_or_else(|| Error::InvalidInput(format!("band {band} does not exist")))?;
    Ok(table(
        RECONSTRUCTION_HEADER,
        trace.iter().enumerate().map(|(j, e)| {
            let (kx, ky) = bp.path.raw(j);
            format!("{kx},{ky},{},{}", e.re, e.im)
        }),
    ))
}

/// Numeric CSV back into rows of floats; the header is returned separately.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> =
        lines.next().ok_or_else(|| Error::InvalidInput("empty table".into()))?.split(',').map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| f.parse::<f64>().map_err(|e| Error::InvalidInput(format!("row {}: {e}", n + 1))))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != header.len() {
            return Err(Error::InvalidInput(format!("row {} has {} fields", n + 1, row.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{boundary_shell, build_real_space, make_geometry, GeometrySpec, HoppingParams, HoppingTable};
    use crate::spectral::{average_density, boundary_statistics, eigensolve};

    #[test]
    fn spectrum_and_density_tables() {
        let mask = make_geometry(&GeometrySpec::square(4)).unwrap();
        let shell = boundary_shell(&mask, 1).unwrap();
        let h = build_real_space(&HoppingTable::sp_ladder(&HoppingParams::main_text()), &mask);
        let spec = eigensolve(&h).unwrap();
        let stats = boundary_statistics(&spec, &shell).unwrap();

        let (head, rows) = parse_csv(&spectrum_csv(&spec, &stats).unwrap()).unwrap();
        assert_eq!(head.join(","), SPECTRUM_HEADER);
        assert_eq!(rows.len(), 32);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r[0] as usize, i);
            assert_eq!(r[1], spec.eigenvalues[i].re);
            assert_eq!(r[4], stats.per_state[i]);
        }

        let rho = average_density(&spec, &mask);
        let (_, rows) = parse_csv(&density_csv(&mask, &rho).unwrap()).unwrap();
        let total: f64 = rows.iter().map(|r| r[2]).sum();
        assert!((total - 1.0).abs() < 1e-12);

        let (head, rows) = parse_csv(&mask_csv(&mask, &shell).unwrap()).unwrap();
        assert_eq!(head.join(","), MASK_HEADER);
        assert_eq!(rows.iter().filter(|r| r[3] == 1.0).count(), 12);
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let small = make_geometry(&GeometrySpec::square(3)).unwrap();
        let big = make_geometry(&GeometrySpec::square(4)).unwrap();
        let shell = boundary_shell(&big, 1).unwrap();
        assert!(mask_csv(&small, &shell).is_err());
        assert!(density_csv(&small, &DensityField { values: vec![0.0; 2] }).is_err());
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        assert!(parse_csv("a,b\n1,2\n3\n").is_err());
        assert!(parse_csv("a\nx\n").is_err());
        assert!(parse_csv("").is_err());
        let (_, rows) = parse_csv("a\nNaN\n").unwrap();
        assert!(rows[0][0].is_nan());
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = std::env::temp_dir().join(format!("skinlab-export-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("table.csv");
        write_atomic(&path, "a\n1\n").unwrap();
        write_atomic(&path, "a\n2\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a\n2\n");
        assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
