//! Certificate serialization and sidecar CSV files.

use std::fs;
use std::path::{Path, PathBuf};

use super::certify::{file_stem, Certificate};
use crate::error::{Error, Result};

/// Pretty JSON with a trailing newline. Field order follows the struct
/// definitions, so identical inputs give identical bytes.
pub fn certificate_json(cert: &Certificate) -> String {
    let mut s = serde_json::to_string_pretty(cert).expect("certificate serializes");
    s.push('\n');
    s
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let io_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    };
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row.iter().map(|x| x.to_string())).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `<stem>.certificate.json` and the sidecars it references into
/// `dir`. Returns the written paths.
pub fn write_run(dir: &Path, cert: &Certificate) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    if let Some(l) = &cert.landau {
        if let Some(name) = &cert.sidecars.orbit_f {
            let p = dir.join(name);
            write_csv(
                &p,
                &["t", "ratio"],
                l.orbital.f_orbit.curve.iter().map(|&(t, r)| vec![t, r]),
            )?;
            written.push(p);
        }
        if let Some(name) = &cert.sidecars.orbit_a2f {
            let p = dir.join(name);
            write_csv(
                &p,
                &["t", "ratio"],
                l.orbital.a2f_orbit.curve.iter().map(|&(t, r)| vec![t, r]),
            )?;
            written.push(p);
        }
        if let Some(name) = &cert.sidecars.dynamical {
            let p = dir.join(name);
            let d = &l.margins.dynamical;
            write_csv(&p, &["s", "D"], d.s.iter().zip(&d.values).map(|(&s, &v)| vec![s, v]))?;
            written.push(p);
        }
    }
    if let (Some(k), Some(name)) = (&cert.kato, &cert.sidecars.kato_lambda) {
        let p = dir.join(name);
        write_csv(
            &p,
            &["lambda", "dissipativity", "lambda_margin", "contractivity_max_ratio"],
            k.certificate
                .rows
                .iter()
                .map(|r| vec![r.lambda, r.dissipativity, r.lambda_margin, r.contractivity.max_ratio]),
        )?;
        written.push(p);
    }

    let p = dir.join(format!("{}.certificate.json", file_stem(&cert.scenario.name)));
    fs::write(&p, certificate_json(cert)).map_err(|e| Error::io(&p, e))?;
    written.push(p);
    Ok(written)
}

/// One-line human summary.
pub fn summary_line(cert: &Certificate) -> String {
    let mut parts = vec![format!(
        "{}: {} (exit {})",
        cert.scenario.name, cert.verdict, cert.exit_code
    )];
    if let Some(l) = &cert.landau {
        let o = &l.orbital;
        parts.push(format!(
            "orbit f max {:.6} at t={:.4}, A2f max {:.6} at t={:.4}",
            o.max_ratio_f, o.argmax_t_f, o.max_ratio_a2f, o.argmax_t_a2f
        ));
        let q = &l.quantities;
        parts.push(format!("a={:.6} b={:.6} c={:.6}", q.a, q.b, q.c));
    }
    if let Some(k) = &cert.kato {
        parts.push(format!("kato margin {:.6}", k.certificate.kato_margin));
    }
    if let Some(e) = &cert.error {
        parts.push(format!("error: {e}"));
    }
    parts.join("; ")
}
