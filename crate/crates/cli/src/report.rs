//! Markdown / JSON / CSV rendering of table and scan reports.

use clap::ValueEnum;
use serde::Serialize;
use wittext::solver::ScanReport;
use wittext::tables::{format_km, TableKind, TableReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Serialize)]
struct RowJson {
    degree: u32,
    alpha: String,
    beta: String,
    gamma: String,
    coordinates: &'static str,
    class: String,
    status: &'static str,
    printed: Option<String>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct DiscrepancyJson {
    degree: u32,
    params: String,
    printed: String,
    finding: String,
}

#[derive(Serialize)]
struct TableJson {
    table: &'static str,
    rows: Vec<RowJson>,
    discrepancies: Vec<DiscrepancyJson>,
}

fn coordinates(kind: TableKind) -> &'static str {
    match kind {
        TableKind::PolyTheta => "theta",
        _ => "M",
    }
}

fn table_json(r: &TableReport) -> TableJson {
    TableJson {
        table: r.kind.name(),
        rows: r
            .rows
            .iter()
            .map(|row| RowJson {
                degree: row.degree,
                alpha: row.params.alpha_label(),
                beta: row.params.beta_label(),
                gamma: row.gamma.label().to_string(),
                coordinates: coordinates(r.kind),
                class: row.class_text(r.kind),
                status: row.status.label(),
                printed: row.printed.clone(),
                notes: row.notes.clone(),
            })
            .collect(),
        discrepancies: r
            .discrepancies
            .iter()
            .map(|d| DiscrepancyJson {
                degree: d.degree,
                params: d.params.clone(),
                printed: d.printed.clone(),
                finding: d.finding.clone(),
            })
            .collect(),
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn render_discrepancies(r: &TableReport) -> String {
    let mut out = String::new();
    for d in &r.discrepancies {
        out.push_str(&format!("- degree {}, {}: printed `{}`: {}\n", d.degree, d.params, d.printed, d.finding));
    }
    out
}

pub fn render_table(r: &TableReport, format: Format) -> String {
    let data = table_json(r);
    match format {
        Format::Json => serde_json::to_string_pretty(&data).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["degree", "alpha", "beta", "gamma", "coordinates", "class", "status", "printed", "notes"])
                .expect("in-memory write");
            for row in &data.rows {
                let degree = row.degree.to_string();
                let printed = row.printed.clone().unwrap_or_default();
                let notes = row.notes.join("; ");
                w.write_record([
                    degree.as_str(),
                    &row.alpha,
                    &row.beta,
                    &row.gamma,
                    row.coordinates,
                    &row.class,
                    row.status,
                    &printed,
                    &notes,
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Md => {
            let mut out = format!("## {} ({} coordinates)\n\n", data.table, coordinates(r.kind));
            out.push_str("| n | alpha | beta | gamma | class | status | notes |\n|---|---|---|---|---|---|---|\n");
            for row in &data.rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} |\n",
                    row.degree,
                    md_cell(&row.alpha),
                    md_cell(&row.beta),
                    row.gamma,
                    md_cell(&row.class),
                    row.status,
                    md_cell(&row.notes.join("; ")),
                ));
            }
            if !r.discrepancies.is_empty() {
                out.push_str("\n### Discrepancies with the printed rows\n\n");
                out.push_str(&render_discrepancies(r));
            }
            out
        }
    }
}

#[derive(Serialize)]
struct SpecialJson {
    alpha: String,
    beta: String,
    h1_dim: usize,
    representatives: Vec<String>,
}

#[derive(Serialize)]
struct LineJson {
    offset: i64,
    generic_rank: usize,
    generic_h1: usize,
    generic_representatives: Vec<String>,
    rank_drop_poly: String,
    coboundary_gcd: String,
    special: Vec<SpecialJson>,
    unresolved: Vec<String>,
}

#[derive(Serialize)]
struct ScanJson {
    degree: u32,
    offset_forced: Option<bool>,
    nontrivial: bool,
    lines: Vec<LineJson>,
}

fn scan_json(r: &ScanReport) -> ScanJson {
    ScanJson {
        degree: r.n,
        offset_forced: r.offset_forced,
        nontrivial: !r.is_empty(),
        lines: r
            .lines
            .iter()
            .map(|l| LineJson {
                offset: l.offset,
                generic_rank: l.generic_rank,
                generic_h1: l.generic_h1,
                generic_representatives: l.generic_reps.iter().map(format_km).collect(),
                rank_drop_poly: l.rank_drop_poly.display_in("alpha"),
                coboundary_gcd: l.coboundary_gcd.display_in("alpha"),
                special: l
                    .special
                    .iter()
                    .map(|s| SpecialJson {
                        alpha: s.params.alpha.to_string(),
                        beta: s.params.beta.to_string(),
                        h1_dim: s.report.h1_dim,
                        representatives: s.report.representatives.iter().map(|c| c.to_string()).collect(),
                    })
                    .collect(),
                unresolved: l.unresolved.iter().map(|u| u.display_in("alpha")).collect(),
            })
            .collect(),
    }
}

/// Degrees from which the scan is expected to be empty.
const EMPTY_FROM: u32 = 8;

pub fn render_scan(reports: &[ScanReport], format: Format) -> String {
    let data: Vec<ScanJson> = reports.iter().map(scan_json).collect();
    match format {
        Format::Json => serde_json::to_string_pretty(&data).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["degree", "offset", "generic_h1", "alpha", "beta", "h1_dim", "representatives"])
                .expect("in-memory write");
            for d in &data {
                for l in &d.lines {
                    let (deg, off) = (d.degree.to_string(), l.offset.to_string());
                    if l.generic_h1 > 0 {
                        let h = l.generic_h1.to_string();
                        let reps = l.generic_representatives.join("; ");
                        w.write_record([deg.as_str(), &off, &h, "any", "", &h, &reps]).expect("in-memory write");
                    }
                    for s in &l.special {
                        let h = s.h1_dim.to_string();
                        let reps = s.representatives.join("; ");
                        let gh = l.generic_h1.to_string();
                        w.write_record([deg.as_str(), &off, &gh, &s.alpha, &s.beta, &h, &reps]).expect("in-memory write");
                    }
                }
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Md => {
            let mut out = String::new();
            for d in &data {
                out.push_str(&format!("degree {}:", d.degree));
                if !d.nontrivial {
                    out.push_str(" no nontrivial classes\n");
                    continue;
                }
                out.push('\n');
                for l in &d.lines {
                    if l.generic_h1 > 0 {
                        out.push_str(&format!(
                            "  alpha - beta = {}: h1 = {} for generic alpha, {}\n",
                            l.offset,
                            l.generic_h1,
                            l.generic_representatives.join("; ")
                        ));
                    }
                    for s in &l.special {
                        out.push_str(&format!(
                            "  alpha = {}, beta = {}: h1 = {}, {}\n",
                            s.alpha,
                            s.beta,
                            s.h1_dim,
                            s.representatives.join("; ")
                        ));
                    }
                    for u in &l.unresolved {
                        out.push_str(&format!("  unresolved factor on alpha - beta = {}: {u}\n", l.offset));
                    }
                }
            }
            let tail: Vec<&ScanJson> = data.iter().filter(|d| d.degree >= EMPTY_FROM).collect();
            if !tail.is_empty() {
                let last = tail.last().expect("nonempty").degree;
                let verdict = if tail.iter().all(|d| !d.nontrivial) { "no nontrivial classes" } else { "NONTRIVIAL CLASSES FOUND" };
                out.push_str(&format!("degrees {EMPTY_FROM}..{last}: {verdict}\n"));
            }
            out
        }
    }
}
