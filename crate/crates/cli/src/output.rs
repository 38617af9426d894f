//! CSV and plotting-script output.
//!
//! Rows cover the full grid nodes only. Every number is written with 17
//! significant digits, which round-trips binary doubles exactly.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use antilinear::numerics::Trajectory;
use antilinear::Complex64;

pub fn header(components: usize) -> Vec<String> {
    let mut cols = vec!["x".to_string()];
    for c in 1..=components {
        cols.push(format!("re_u{c}"));
        cols.push(format!("im_u{c}"));
    }
    cols
}

fn number(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes)?)
}

fn row(prefix: &[f64], x: f64, state: &[Complex64]) -> Vec<String> {
    let mut r: Vec<String> = prefix.iter().map(|v| number(*v)).collect();
    r.push(number(x));
    for z in state {
        r.push(number(z.re));
        r.push(number(z.im));
    }
    r
}

/// CSV text of `t` at the full grid nodes.
pub fn format_csv(t: &Trajectory) -> Result<String> {
    let mut w = writer();
    w.write_record(header(t.n_components()))?;
    for (x, state) in t.full_nodes() {
        check_row(x, &state)?;
        w.write_record(row(&[], x, &state))?;
    }
    finish(w)
}

/// CSV text of several trajectories tagged by a leading `xi` column, in the
/// order given.
pub fn format_tagged_csv(runs: &[(f64, Trajectory)]) -> Result<String> {
    let components = runs.first().map_or(1, |(_, t)| t.n_components());
    let mut w = writer();
    let mut cols = vec!["xi".to_string()];
    cols.extend(header(components));
    w.write_record(cols)?;
    for (xi, t) in runs {
        for (x, state) in t.full_nodes() {
            check_row(x, &state)?;
            w.write_record(row(&[*xi], x, &state))?;
        }
    }
    finish(w)
}

fn check_row(x: f64, state: &[Complex64]) -> Result<()> {
    if state.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        bail!("trajectory is not finite at x = {x}");
    }
    Ok(())
}

pub fn emit_csv(t: &Trajectory, path: &Path) -> Result<()> {
    write_all(&[(path.to_path_buf(), format_csv(t)?)])
}

/// Column names and numeric rows of a CSV written by this module.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_records(&mut r)
}

pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    parse_records(&mut r)
}

fn parse_records<R: std::io::Read>(r: &mut csv::Reader<R>) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .map(|field| field.parse::<f64>().with_context(|| format!("row {}: `{field}` is not a number", i + 1)))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    Ok((header, rows))
}

/// Gnuplot script for a CSV with columns `[xi,] x, re_u1, im_u1[, re_u2, im_u2]`:
/// real part, imaginary part and modulus of every component against `x`.
pub fn plot_script(csv_path: &str, header: &[String]) -> Result<String> {
    let offset = usize::from(header.first().map(String::as_str) == Some("xi"));
    let data = header.len().saturating_sub(1 + offset);
    if header.get(offset).map(String::as_str) != Some("x") || data == 0 || !data.is_multiple_of(2) {
        bail!("unexpected CSV header: {}", header.join(","));
    }
    let x = offset + 1;
    let quoted = csv_path.replace('\\', "\\\\").replace('"', "\\\"");
    let mut curves = Vec::new();
    for c in 0..data / 2 {
        let (re, im) = (x + 1 + 2 * c, x + 2 + 2 * c);
        let n = c + 1;
        curves.push(format!("\"{quoted}\" using {x}:{re} with lines title \"re u{n}\""));
        curves.push(format!("\"{quoted}\" using {x}:{im} with lines title \"im u{n}\""));
        curves.push(format!(
            "\"{quoted}\" using {x}:(sqrt(${re}**2 + ${im}**2)) with lines title \"|u{n}|\""
        ));
    }
    Ok(format!(
        "set datafile separator \",\"\nset key outside\nset xlabel \"x\"\nplot {}\n",
        curves.join(", \\\n     ")
    ))
}

/// Reads the CSV header and writes the script; the script names the CSV by
/// `csv_path` exactly as given.
pub fn emit_plot_script(csv_path: &Path, out: &Path) -> Result<()> {
    let (header, _) = read_csv(csv_path)?;
    let script = plot_script(&csv_path.to_string_lossy(), &header)?;
    write_all(&[(out.to_path_buf(), script)])
}

/// Writes every file through a temporary sibling and renames only after all
/// contents are on disk, so a failure leaves no target half-written.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<()> {
    let mut staged = Vec::new();
    let cleanup = |staged: &[(PathBuf, &PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (path, contents) in files {
        let mut name = path.file_name().unwrap_or_default().to_os_string();
        name.push(".partial");
        let tmp = path.with_file_name(name);
        if let Err(e) = fs::write(&tmp, contents) {
            cleanup(&staged);
            return Err(e).with_context(|| format!("cannot write {}", path.display()));
        }
        staged.push((tmp, path));
    }
    for (tmp, path) in &staged {
        if let Err(e) = fs::rename(tmp, path) {
            cleanup(&staged);
            return Err(e).with_context(|| format!("cannot write {}", path.display()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use antilinear::numerics::Grid;

    #[test]
    fn constant_scalar_trajectory() {
        let g = Grid::new(1.0, 2).unwrap();
        let t = Trajectory::constant(g, &[Complex64::new(1.0, 2.0)]).unwrap();
        let text = format_csv(&t).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,re_u1,im_u1");
        assert_eq!(lines.len(), 4);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let (_, rows) = parse_csv(&text).unwrap();
        assert_eq!(rows, vec![vec![0.0, 1.0, 2.0], vec![0.5, 1.0, 2.0], vec![1.0, 1.0, 2.0]]);
    }

    #[test]
    fn pair_has_five_columns() {
        let g = Grid::new(1.0, 4).unwrap();
        let t = Trajectory::constant(g, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]).unwrap();
        let (header, rows) = parse_csv(&format_csv(&t).unwrap()).unwrap();
        assert_eq!(header, ["x", "re_u1", "im_u1", "re_u2", "im_u2"]);
        assert!(rows.iter().all(|r| r.len() == 5));
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let g = Grid::new(0.7, 9).unwrap();
        let samples: Vec<Complex64> = g
            .refined_nodes()
            .iter()
            .map(|x| Complex64::new((x * 13.1).sin() / 3.0, -x.exp() * 1e-300))
            .collect();
        let t = Trajectory::scalar(g, samples).unwrap();
        let (_, rows) = parse_csv(&format_csv(&t).unwrap()).unwrap();
        for ((x, state), row) in t.full_nodes().zip(&rows) {
            assert_eq!(row[0].to_bits(), x.to_bits());
            assert_eq!(row[1].to_bits(), state[0].re.to_bits());
            assert_eq!(row[2].to_bits(), state[0].im.to_bits());
        }
    }

    #[test]
    fn non_finite_rows_are_refused() {
        let g = Grid::new(1.0, 2).unwrap();
        let t = Trajectory::constant(g, &[Complex64::new(f64::NAN, 0.0)]);
        if let Ok(t) = t {
            assert!(format_csv(&t).is_err());
        }
    }

    #[test]
    fn plot_curves_per_component() {
        let one = plot_script("out.csv", &header(1)).unwrap();
        assert_eq!(one.matches("with lines").count(), 3);
        let two = plot_script("out.csv", &header(2)).unwrap();
        assert_eq!(two.matches("with lines").count(), 6);
        assert!(two.contains("\"out.csv\" using 1:4"));
        let mut tagged = vec!["xi".to_string()];
        tagged.extend(header(2));
        let sweep = plot_script("sweep.csv", &tagged).unwrap();
        assert!(sweep.contains("using 2:3"));
        assert!(plot_script("x.csv", &["a".to_string()]).is_err());
    }

    #[test]
    fn emitted_files_and_script_reference() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("run.csv");
        let g = Grid::new(2.0, 4).unwrap();
        let t = Trajectory::constant(g, &[Complex64::new(0.5, -1.0)]).unwrap();
        emit_csv(&t, &csv).unwrap();
        let (header, rows) = read_csv(&csv).unwrap();
        assert_eq!(header.len(), 3);
        assert_eq!(rows.len(), 5);
        let script = dir.path().join("run.gp");
        emit_plot_script(&csv, &script).unwrap();
        let text = fs::read_to_string(&script).unwrap();
        assert!(text.contains(&format!("\"{}\"", csv.display())));
        assert_eq!(text.matches("with lines").count(), 3);
        assert!(emit_plot_script(&dir.path().join("missing.csv"), &script).is_err());
    }
}
