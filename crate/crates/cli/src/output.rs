use std::fmt::Write as _;

use serde_json::{json, Value};

use theta_rigidity::rigidity::{CheckReport, PoleReport, RigidityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Everything a command produced, in every format it supports.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    /// Format written to `--out` when `--format text` is in effect.
    pub file_default: Format,
    pub pass: bool,
}

impl Output {
    pub fn plain(text: String, json: Value, pass: bool) -> Self {
        Output {
            text,
            json,
            csv: None,
            file_default: Format::Json,
            pass,
        }
    }

    pub fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Text => Some(self.text.clone()),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json output");
                s.push('\n');
                Some(s)
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

fn to_csv<R: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: R) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

pub fn check_output(report: &CheckReport) -> Output {
    let csv = to_csv(
        &["label", "residual"],
        report.detail.iter().map(|d| vec![d.label.clone(), format!("{:e}", d.residual)]),
    );
    Output {
        text: report.render(),
        json: serde_json::to_value(report).expect("report serializes"),
        csv: Some(csv),
        file_default: Format::Json,
        pass: report.pass,
    }
}

pub fn scan_output(report: &RigidityReport, tolerance: f64, digits: usize) -> Output {
    let pass = report.max_deviation < tolerance;
    let mut text = format!(
        "rigidity scan: {} (max deviation {:.3e}, tolerance {:.1e}, {} points)\n  mean value: {}\n",
        if pass { "pass" } else { "fail" },
        report.max_deviation,
        tolerance,
        report.points.len(),
        report.mean_value
    );
    for w in &report.warnings {
        let _ = writeln!(text, "  warning: {w}");
    }
    let csv = to_csv(
        &["t_re", "t_im", "value_re", "value_im", "deviation"],
        report.points.iter().map(|p| {
            let (t_re, t_im) = p.t_value.parts_decimal(12);
            let (v_re, v_im) = p
                .value_exact
                .as_ref()
                .map(|v| v.parts_decimal(digits))
                .unwrap_or_default();
            let dev = p.deviation.map(|d| format!("{d:e}")).unwrap_or_default();
            vec![t_re, t_im, v_re, v_im, dev]
        }),
    );
    let mut json = serde_json::to_value(report).expect("report serializes");
    json["tolerance"] = json!(tolerance);
    json["pass"] = json!(pass);
    Output {
        text,
        json,
        csv: Some(csv),
        file_default: Format::Csv,
        pass,
    }
}

pub fn pole_output(report: &PoleReport) -> Output {
    let pass = report.unexplained == 0;
    let mut text = format!(
        "pole scan: {} ({} predicted, {} probes, {} blowups, {} unexplained)\n",
        if pass { "pass" } else { "fail" },
        report.predicted.len(),
        report.probes.len(),
        report.blowups,
        report.unexplained
    );
    for p in &report.predicted {
        let _ = writeln!(text, "  predicted m={} ({}+{}tau)/{}: t = {}", p.m, p.a, p.b, p.m, p.t);
    }
    for p in report.probes.iter().filter(|p| p.blowup) {
        let _ = writeln!(
            text,
            "  blowup at t = {}: |L| = {:.3e}{}",
            p.t,
            p.magnitude,
            if p.explained { "" } else { " (unexplained)" }
        );
    }
    let csv = to_csv(
        &["t", "magnitude", "blowup", "explained"],
        report
            .probes
            .iter()
            .map(|p| vec![p.t.clone(), format!("{:e}", p.magnitude), p.blowup.to_string(), p.explained.to_string()]),
    );
    Output {
        text,
        json: serde_json::to_value(report).expect("report serializes"),
        csv: Some(csv),
        file_default: Format::Json,
        pass,
    }
}
