//! File formats: path CSVs with 17 significant digits, JSON documents, and
//! atomic directory output.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::SamplePath;
use crate::sde::SolutionPath;

/// Scientific notation with 17 significant digits; round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn path_csv(path: &SamplePath) -> String {
    let mut out = String::with_capacity(48 * (path.n_steps() + 2));
    out.push_str("t,value\n");
    for (i, v) in path.values().iter().enumerate() {
        out.push_str(&fmt_f64(path.time(i)));
        out.push(',');
        out.push_str(&fmt_f64(*v));
        out.push('\n');
    }
    out
}

pub fn write_path_csv(file: &Path, path: &SamplePath) -> Result<()> {
    let f = fs::File::create(file).map_err(|e| Error::io(file, e))?;
    let mut w = BufWriter::new(f);
    w.write_all(path_csv(path).as_bytes())
        .map_err(|e| Error::io(file, e))?;
    w.flush().map_err(|e| Error::io(file, e))
}

/// Reads a `t,value` CSV and checks that the times form the grid `i / N`.
pub fn read_path_csv(file: &Path) -> Result<SamplePath> {
    let f = fs::File::open(file).map_err(|e| Error::io(file, e))?;
    let mut lines = BufReader::new(f).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{} is empty", file.display())))?
        .map_err(|e| Error::io(file, e))?;
    if header.trim() != "t,value" {
        return Err(Error::Config(format!(
            "{}: expected header `t,value`, found `{}`",
            file.display(),
            header.trim()
        )));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(file, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || {
            Error::Config(format!(
                "{}:{}: expected `t,value`",
                file.display(),
                lineno + 2
            ))
        };
        let (t, v) = line.split_once(',').ok_or_else(bad)?;
        times.push(t.trim().parse::<f64>().map_err(|_| bad())?);
        values.push(v.trim().parse::<f64>().map_err(|_| bad())?);
    }
    let path = SamplePath::new(values)?;
    let n = path.n_steps() as f64;
    for (i, t) in times.iter().enumerate() {
        if (t - i as f64 / n).abs() > 1e-9 {
            return Err(Error::IncompatibleGrid(format!(
                "{}: row {i} has t = {t}, expected {} on a uniform grid of [0, 1]",
                file.display(),
                i as f64 / n
            )));
        }
    }
    Ok(path)
}

/// Persists a solution as `solution.csv`, `noise.csv` and `model.json`.
pub fn write_solution(dir: &Path, sol: &SolutionPath, seed: u64) -> Result<()> {
    #[derive(Serialize)]
    struct Sidecar<'a> {
        model: &'a crate::sde::ModelSpec,
        seed: u64,
        noise: crate::noise::NoiseSpec,
    }
    write_path_csv(&dir.join("solution.csv"), &sol.solution)?;
    write_path_csv(&dir.join("noise.csv"), &sol.noise)?;
    write_json(
        &dir.join("model.json"),
        &Sidecar {
            model: &sol.model,
            seed,
            noise: sol.model.noise_spec(seed),
        },
    )
}

/// Fills `out` through `fill` without ever exposing a half-written directory.
///
/// Output goes to a hidden sibling directory that is renamed onto `out` only
/// after `fill` succeeds. An existing non-empty `out` is never touched.
pub fn write_dir_atomically<F>(out: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&Path) -> Result<()>,
{
    if out.exists() {
        let empty = fs::read_dir(out)
            .map_err(|e| Error::io(out, e))?
            .next()
            .is_none();
        if !empty {
            return Err(Error::Config(format!(
                "output directory {} already exists and is not empty",
                out.display()
            )));
        }
    }
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| Error::io(&parent, e))?;
    let name = out
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = parent.join(format!(".{name}.tmp-{}", std::process::id()));
    if tmp.exists() {
        fs::remove_dir_all(&tmp).map_err(|e| Error::io(&tmp, e))?;
    }
    fs::create_dir(&tmp).map_err(|e| Error::io(&tmp, e))?;
    if let Err(e) = fill(&tmp) {
        let _ = fs::remove_dir_all(&tmp);
        return Err(e);
    }
    if out.exists() {
        fs::remove_dir(out).map_err(|e| Error::io(out, e))?;
    }
    fs::rename(&tmp, out).map_err(|e| {
        let _ = fs::remove_dir_all(&tmp);
        Error::io(out, e)
    })
}
