use std::path::{Path, PathBuf};

use crate::{Error, Result};

use crate::projection::Method;

use super::{svg, CellStatus, PrivacyScoring, TradeoffPoint};

fn num(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else {
        String::new()
    }
}

/// Joins privacy weights with `;`.
pub fn weights_label(w: &[f64]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Renders the trade-off table.
///
/// Columns: `method, k, privacy_weights, acc_u_mean, acc_u_std`, then
/// `acc_p{i}_mean, acc_p{i}_std` per privacy task, `perf@{β}` per β, and
/// `status`.
pub fn tradeoff_csv(points: &[TradeoffPoint], betas: &[f64]) -> Result<String> {
    let n_privacy = points.first().map_or(0, |p| p.acc_p_mean.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "method".to_owned(),
        "k".to_owned(),
        "privacy_weights".to_owned(),
        "acc_u_mean".to_owned(),
        "acc_u_std".to_owned(),
    ];
    for i in 0..n_privacy {
        header.push(format!("acc_p{i}_mean"));
        header.push(format!("acc_p{i}_std"));
    }
    header.extend(betas.iter().map(|b| format!("perf@{b}")));
    header.push("status".to_owned());
    w.write_record(&header)?;

    for p in points {
        let mut row = vec![
            p.method_name().to_owned(),
            p.k.to_string(),
            weights_label(&p.privacy_weights),
            num(p.acc_u_mean),
            num(p.acc_u_std),
        ];
        for i in 0..n_privacy {
            row.push(num(p.acc_p_mean[i]));
            row.push(num(p.acc_p_std[i]));
        }
        for &b in betas {
            let v = p.performance.iter().find(|(pb, _)| *pb == b).map_or(f64::NAN, |x| x.1);
            row.push(num(v));
        }
        row.push(match &p.status {
            CellStatus::Ok => "ok".to_owned(),
            CellStatus::Failed(m) => format!("failed: {m}"),
        });
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `<prefix>.csv` and `<prefix>.svg` and returns both paths.
pub fn emit_tradeoff_curve(
    points: &[TradeoffPoint],
    betas: &[f64],
    scoring: PrivacyScoring,
    prefix: impl AsRef<Path>,
) -> Result<(PathBuf, PathBuf)> {
    if points.is_empty() {
        return Err(Error::InvalidConfig("no trade-off points to write".into()));
    }
    let prefix = prefix.as_ref();
    let csv_path = prefix.with_extension("csv");
    let svg_path = prefix.with_extension("svg");
    std::fs::write(&csv_path, tradeoff_csv(points, betas)?)?;
    std::fs::write(&svg_path, svg::tradeoff_svg(points, scoring))?;
    Ok((csv_path, svg_path))
}

fn parse_num(field: &str, row: usize, column: &str) -> Result<f64> {
    if field.is_empty() {
        return Ok(f64::NAN);
    }
    field.parse().map_err(|e| Error::Parse {
        row,
        column: column.to_owned(),
        message: format!("{field:?}: {e}"),
    })
}

/// Reads a table written by [`tradeoff_csv`] back into points and the betas
/// of its `perf@β` columns. Per-iteration accuracies are not stored in the
/// table and come back empty.
pub fn read_tradeoff_csv(text: &str) -> Result<(Vec<TradeoffPoint>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let bad_header = || Error::Parse {
        row: 1,
        column: String::new(),
        message: "not a trade-off table header".into(),
    };
    let fixed = ["method", "k", "privacy_weights", "acc_u_mean", "acc_u_std"];
    if header.len() < fixed.len() + 1 || header[..fixed.len()] != fixed || header.last().map(String::as_str) != Some("status") {
        return Err(bad_header());
    }
    let middle = &header[fixed.len()..header.len() - 1];
    let n_privacy = middle.iter().filter(|h| h.starts_with("acc_p")).count() / 2;
    let betas = middle[2 * n_privacy..]
        .iter()
        .map(|h| h.strip_prefix("perf@").and_then(|b| b.parse().ok()).ok_or_else(bad_header))
        .collect::<Result<Vec<f64>>>()?;

    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let col = |i: usize| (&rec[i], header[i].as_str());
        let method = match &rec[0] {
            "FULL" => None,
            name => Some(name.parse::<Method>()?),
        };
        let k = rec[1].parse().map_err(|e| Error::Parse {
            row,
            column: "k".into(),
            message: format!("{:?}: {e}", &rec[1]),
        })?;
        let privacy_weights = if rec[2].is_empty() {
            Vec::new()
        } else {
            rec[2].split(';').map(|w| parse_num(w, row, "privacy_weights")).collect::<Result<_>>()?
        };
        let num_at = |i: usize| {
            let (f, c) = col(i);
            parse_num(f, row, c)
        };
        let mut acc_p_mean = Vec::with_capacity(n_privacy);
        let mut acc_p_std = Vec::with_capacity(n_privacy);
        for i in 0..n_privacy {
            acc_p_mean.push(num_at(5 + 2 * i)?);
            acc_p_std.push(num_at(6 + 2 * i)?);
        }
        let performance = betas
            .iter()
            .enumerate()
            .map(|(i, &b)| Ok((b, num_at(5 + 2 * n_privacy + i)?)))
            .collect::<Result<_>>()?;
        let status_field = &rec[header.len() - 1];
        let status = match status_field.strip_prefix("failed: ") {
            Some(m) => CellStatus::Failed(m.to_owned()),
            None => CellStatus::Ok,
        };
        points.push(TradeoffPoint {
            method,
            k,
            privacy_weights,
            acc_u_mean: num_at(3)?,
            acc_u_std: num_at(4)?,
            acc_p_mean,
            acc_p_std,
            performance,
            status,
            acc_u_runs: Vec::new(),
            acc_p_runs: Vec::new(),
        });
    }
    Ok((points, betas))
}
