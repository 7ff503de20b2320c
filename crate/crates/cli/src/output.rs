use crate::{scalar_gap, CliError, CliResult, Command, OutputFormat, Report, ResultRow, Scalar};

pub fn render(report: &Report, format: OutputFormat) -> CliResult<String> {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(report).map_err(|e| CliError::Output(e.to_string())),
        OutputFormat::Csv if report.command == Command::Scan && report.all_pass() => scan_csv(&report.results),
        OutputFormat::Csv => rows_csv(&report.results),
    }
}

fn parts(s: Option<Scalar>) -> (String, String) {
    match s {
        None => (String::new(), String::new()),
        Some(Scalar::Real(x)) => (x.to_string(), String::new()),
        Some(Scalar::Complex { re, im }) => (re.to_string(), im.to_string()),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn scan_csv(rows: &[ResultRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(["X_partial", "sum", "main_term", "rel_dev"]).map_err(err)?;
    for r in rows {
        let (sum, _) = parts(r.value);
        let (main, _) = parts(r.target);
        let rel = match (r.value, r.target) {
            (Some(v), Some(t)) => (scalar_gap(v, t) / t.magnitude()).to_string(),
            _ => String::new(),
        };
        w.write_record([opt(r.truncation), sum, main, rel]).map_err(err)?;
    }
    finish(w)
}

fn rows_csv(rows: &[ResultRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record([
        "id", "paper_tag", "value_re", "value_im", "target_re", "target_im", "tolerance", "pass", "heuristic_tail",
        "truncation", "note",
    ])
    .map_err(err)?;
    for r in rows {
        let (vr, vi) = parts(r.value);
        let (tr, ti) = parts(r.target);
        w.write_record([
            r.id.clone(),
            r.paper_tag.clone(),
            vr,
            vi,
            tr,
            ti,
            opt(r.tolerance),
            opt(r.pass),
            r.heuristic_tail.to_string(),
            opt(r.truncation),
            r.note.clone().unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    finish(w)
}
