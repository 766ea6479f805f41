use std::io::{self, Write};

use super::SweepResult;

/// First line of every CSV file; bump on any column change.
pub const CSV_SCHEMA: &str = "# schema: dicke2p-sweep/1";

pub const CSV_COLUMNS: [&str; 10] = [
    "g",
    "phase",
    "beta",
    "e_exc_over_omega_q",
    "var_xd",
    "var_xa",
    "r_a",
    "r_s",
    "status",
    "ed_photon_number",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Schema line, header, then one row per grid point. Numbers carry 17
/// significant digits; missing values are empty fields.
pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_SCHEMA}")?;
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for r in &result.records {
        let fields = [
            num(r.g),
            r.phase.to_string(),
            opt(r.beta),
            opt(r.e_exc_over_omega_q),
            opt(r.var_xd),
            opt(r.var_xa),
            opt(r.r_a),
            opt(r.r_s),
            r.status.as_str().to_string(),
            opt(r.ed_photon_number),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn write_json<W: Write>(result: &SweepResult, out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(out, result).map_err(io::Error::other)
}

#[cfg(test)]
mod tests {
    use super::super::{linspace, sweep_g, SweepConfig};
    use super::*;
    use crate::params::ModelParams;

    #[test]
    fn csv_shape_and_determinism() {
        let p = ModelParams::two_photon(1.0, 0.005, 0.2, 100);
        let s = sweep_g(&p, &linspace(0.05, 0.45, 9), &SweepConfig::default());
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&s, &mut a).unwrap();
        write_csv(&sweep_g(&p, &linspace(0.05, 0.45, 9), &SweepConfig::default()), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_SCHEMA);
        assert_eq!(lines.len(), 11);
        assert!(lines[2..].iter().all(|l| l.split(',').count() == CSV_COLUMNS.len()));
        let g: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(g, 0.05);
    }

    #[test]
    fn json_round_trip() {
        let p = ModelParams::two_photon(1.0, 0.005, 0.2, 100);
        let s = sweep_g(&p, &linspace(0.1, 0.4, 4), &SweepConfig::default());
        let mut buf = Vec::new();
        write_json(&s, &mut buf).unwrap();
        let back: SweepResult = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, s);
    }
}
