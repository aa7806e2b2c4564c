//! Reproduction reports: every intermediate table of an evaluation, rendered as
//! one markdown document or one CSV file per table.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::consistency::RANDOM_INDEX;
use crate::display;
use crate::document::DecisionModel;
use crate::evaluate::Evaluation;
use crate::hierarchy::CriterionNode;
use crate::rating::RATING_LABELS;
use crate::reference::{check_reference, ReferenceCheck};
use crate::scale::INTENSITY_LABELS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("unknown report format {0:?} (expected markdown or csv)")]
    UnknownFormat(String),
    #[error("csv encoding failed: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(ReportError::UnknownFormat(s.to_string())),
        }
    }
}

/// A rendered table. `key` doubles as the CSV file stem.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub key: String,
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Markdown-only lines printed under the table.
    pub notes: Vec<String>,
}

impl Table {
    fn new(key: impl Into<String>, title: impl Into<String>, headers: Vec<String>) -> Self {
        Table {
            key: key.into(),
            title: title.into(),
            headers,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvFile {
    pub name: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Markdown(String),
    Csv(Vec<CsvFile>),
}

fn strings<const N: usize>(v: [&str; N]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn check_note(c: &ReferenceCheck) -> String {
    let tol = c.tolerance.map(|t| format!(" ± {t}")).unwrap_or_default();
    let mut s = format!(
        "{} {}: expected {}{tol}, got {}",
        if c.pass { "PASS" } else { "FAIL" },
        c.subject,
        c.expected,
        c.actual
    );
    if let Some(n) = &c.note {
        let _ = write!(s, " ({n})");
    }
    s
}

fn attach(table: &mut Table, checks: &[ReferenceCheck], pred: impl Fn(&ReferenceCheck) -> bool) {
    table
        .notes
        .extend(checks.iter().filter(|c| pred(c)).map(check_note));
}

/// Builds every report table in document order.
pub fn report_tables(model: &DecisionModel, eval: &Evaluation) -> Vec<Table> {
    let checks = check_reference(model, eval);
    let mut tables = Vec::new();

    let mut scale = Table::new("scale", "Pairwise comparison scale", strings(["Intensity", "Preference"]));
    for (i, label) in INTENSITY_LABELS.iter().enumerate() {
        scale.rows.push(vec![(i + 1).to_string(), label.to_string()]);
    }
    scale
        .notes
        .push("Reciprocals 1/2 … 1/9 express the reverse preference.".into());
    tables.push(scale);

    let mut ri = Table::new("random_index", "Random index by matrix order", strings(["Order", "RI"]));
    for (i, v) in RANDOM_INDEX.iter().enumerate() {
        ri.rows.push(vec![(i + 1).to_string(), format!("{v:.2}")]);
    }
    tables.push(ri);

    for node in model.root.internal_nodes() {
        node_tables(node, eval, &checks, &mut tables);
    }

    let mut cons = Table::new(
        "consistency",
        "Consistency summary",
        strings(["Node", "n", "λmax", "CI", "RI", "CR", "Decision"]),
    );
    for a in &eval.weights.analyses {
        let r = &a.report;
        cons.rows.push(vec![
            node_name(eval, &a.node_id),
            r.n.to_string(),
            display::index(r.lambda_max),
            display::index(r.ci),
            format!("{:.2}", r.ri),
            display::index(r.cr),
            display::verdict(r.consistent).to_string(),
        ]);
    }
    cons.notes.push(format!(
        "Judgments are acceptable when CR < {}.",
        eval.threshold
    ));
    attach(&mut cons, &checks, |c| c.section == "consistency");
    tables.push(cons);

    let mut weights = Table::new(
        "weights",
        "Local and global weights",
        strings(["Parent", "Parent weight", "Criterion", "Local weight", "Global weight"]),
    );
    for n in eval.weights.nodes.iter().filter(|n| n.parent.is_some()) {
        let parent = n.parent.as_deref().unwrap_or_default();
        let parent_weight = eval.weights.global_weight(parent).unwrap_or(1.0);
        weights.rows.push(vec![
            node_name(eval, parent),
            display::weight(parent_weight),
            n.name.clone(),
            display::weight(n.local_weight),
            display::weight(n.global_weight),
        ]);
    }
    attach(&mut weights, &checks, |c| c.section == "global_weights");
    tables.push(weights);

    let mut prio = Table::new(
        "priorities",
        "Leaf criteria by global weight",
        strings(["Rank", "Criterion", "Global weight", "Weight %"]),
    );
    for p in &eval.priorities {
        prio.rows.push(vec![
            p.rank.to_string(),
            p.name.clone(),
            display::weight(p.global_weight),
            display::percent(p.global_weight),
        ]);
    }
    attach(&mut prio, &checks, |c| c.section == "priorities");
    tables.push(prio);

    let mut rs = Table::new("rating_scale", "Rating scale", strings(["Rating", "Preference"]));
    for (i, label) in RATING_LABELS.iter().enumerate() {
        rs.rows.push(vec![i.to_string(), label.to_string()]);
    }
    tables.push(rs);

    if let Some(ranking) = &eval.ranking {
        let alts: Vec<&str> = model.document.alternatives.iter().map(|a| a.id.as_str()).collect();
        let mut headers = strings(["Criterion", "Global weight"]);
        for a in &alts {
            headers.push(format!("{a} rating"));
            headers.push(format!("{a} score"));
        }
        let mut scores = Table::new("scores", "Ratings and weighted scores", headers);
        for p in &eval.priorities {
            let mut row = vec![p.id.clone(), display::weight(p.global_weight)];
            for a in &alts {
                let c = ranking
                    .breakdown(a)
                    .and_then(|b| b.contributions.iter().find(|c| c.leaf_id == p.id));
                match c {
                    Some(c) => {
                        row.push(c.rating.to_string());
                        row.push(display::score(c.contribution));
                    }
                    None => row.extend([String::new(), String::new()]),
                }
            }
            scores.rows.push(row);
        }
        let mut sum = vec!["Sum".to_string(), String::new()];
        for a in &alts {
            sum.push(String::new());
            sum.push(ranking.total_of(a).map(display::score).unwrap_or_default());
        }
        scores.rows.push(sum);
        attach(&mut scores, &checks, |c| c.section == "totals");
        tables.push(scores);

        if let Some(b) = &eval.criterion_breakdown {
            let mut headers = vec!["Alternative".to_string()];
            headers.extend(b.criteria.iter().map(|c| node_name(eval, c)));
            headers.push("Total".into());
            let mut sub = Table::new("subtotals", "Weighted score by top-level criterion", headers);
            for row in &b.rows {
                let mut r = vec![row.alternative_id.clone()];
                r.extend(row.subtotals.iter().map(|&s| display::score(s)));
                r.push(display::score(row.total));
                sub.rows.push(r);
            }
            tables.push(sub);
        }

        let mut rank = Table::new("ranking", "Ranking", strings(["Rank", "Alternative", "Name", "Total"]));
        for e in &ranking.entries {
            rank.rows.push(vec![
                e.rank.to_string(),
                e.alternative_id.clone(),
                model.alternative_name(&e.alternative_id).unwrap_or_default().to_string(),
                display::score(e.total),
            ]);
        }
        attach(&mut rank, &checks, |c| c.section == "ranking");
        tables.push(rank);
    }

    if !checks.is_empty() {
        let mut t = Table::new(
            "reference_checks",
            "Reference checks",
            strings(["Section", "Subject", "Expected", "Actual", "Tolerance", "Result", "Note"]),
        );
        for c in &checks {
            t.rows.push(vec![
                c.section.clone(),
                c.subject.clone(),
                c.expected.clone(),
                c.actual.clone(),
                c.tolerance.map(|x| x.to_string()).unwrap_or_default(),
                if c.pass { "PASS" } else { "FAIL" }.to_string(),
                c.note.clone().unwrap_or_default(),
            ]);
        }
        let passed = checks.iter().filter(|c| c.pass).count();
        t.notes.push(format!("{passed} of {} checks passed.", checks.len()));
        tables.push(t);
    }
    tables
}

fn node_name(eval: &Evaluation, id: &str) -> String {
    eval.weights
        .node(id)
        .map_or_else(|| id.to_string(), |n| n.name.clone())
}

fn node_tables(node: &CriterionNode, eval: &Evaluation, checks: &[ReferenceCheck], out: &mut Vec<Table>) {
    let ids = node.child_ids();
    let Some(m) = &node.matrix else {
        let mut t = Table::new(
            format!("matrix_{}", node.id),
            format!("Pairwise comparisons: {}", node.name),
            strings(["Criterion", "Local weight"]),
        );
        t.rows.push(vec![ids.join(" "), display::weight(1.0)]);
        t.notes.push("Single child; it takes the full weight.".into());
        out.push(t);
        return;
    };

    let mut headers = vec![node.name.clone()];
    headers.extend(ids.iter().cloned());
    let mut pairwise = Table::new(
        format!("matrix_{}", node.id),
        format!("Pairwise comparisons: {}", node.name),
        headers.clone(),
    );
    for (i, row) in m.rows().iter().enumerate() {
        let mut r = vec![ids[i].clone()];
        r.extend(row.iter().map(|&x| display::entry(x)));
        pairwise.rows.push(r);
    }
    let mut sums = vec!["Column sums".to_string()];
    sums.extend(m.column_sums().iter().map(|s| format!("{s:.3}")));
    pairwise.rows.push(sums);
    out.push(pairwise);

    let analysis = eval.weights.analysis(&node.id);
    headers.push("Local weight".into());
    let mut norm = Table::new(
        format!("normalized_{}", node.id),
        format!("Normalized matrix and local weights: {}", node.name),
        headers,
    );
    for (i, row) in m.normalized().iter().enumerate() {
        let mut r = vec![ids[i].clone()];
        r.extend(row.iter().map(|&x| display::weight(x)));
        r.push(analysis.map(|a| display::weight(a.priorities.weights[i])).unwrap_or_default());
        norm.rows.push(r);
    }
    let prefix = format!("{}/", node.id);
    attach(&mut norm, checks, |c| c.section == "local_weights" && c.subject.starts_with(&prefix));
    out.push(norm);

    if let Some(a) = analysis {
        let mut lam = Table::new(
            format!("lambda_{}", node.id),
            format!("λmax calculation: {}", node.name),
            strings(["Criterion", "A·x", "x", "(A·x)/x"]),
        );
        let x = &a.priorities.weights;
        let ax = m.mul_vec(x);
        for i in 0..ids.len() {
            lam.rows.push(vec![
                ids[i].clone(),
                display::index(ax[i]),
                display::index(x[i]),
                display::index(ax[i] / x[i]),
            ]);
        }
        let r = &a.report;
        lam.notes.push(format!(
            "λmax = {}, CI = {}, RI = {:.2}, CR = {} → {}",
            display::index(r.lambda_max),
            display::index(r.ci),
            r.ri,
            display::index(r.cr),
            display::verdict(r.consistent)
        ));
        out.push(lam);
    }
}

pub fn render_markdown(title: &str, tables: &[Table]) -> String {
    let mut s = format!("# {title}\n");
    for t in tables {
        let _ = write!(s, "\n## {}\n\n", t.title);
        let _ = writeln!(s, "| {} |", t.headers.join(" | "));
        let _ = writeln!(s, "|{}", "---|".repeat(t.headers.len()));
        for row in &t.rows {
            let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
            let _ = writeln!(s, "| {} |", cells.join(" | "));
        }
        if !t.notes.is_empty() {
            s.push('\n');
            for n in &t.notes {
                let _ = writeln!(s, "- {n}");
            }
        }
    }
    s
}

pub fn render_csv(tables: &[Table]) -> Result<Vec<CsvFile>, ReportError> {
    tables
        .iter()
        .map(|t| {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.headers).map_err(|e| ReportError::Csv(e.to_string()))?;
            for row in &t.rows {
                w.write_record(row).map_err(|e| ReportError::Csv(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.to_string()))?;
            Ok(CsvFile {
                name: format!("{}.csv", t.key),
                content: String::from_utf8(bytes).map_err(|e| ReportError::Csv(e.to_string()))?,
            })
        })
        .collect()
}

pub fn render_report(model: &DecisionModel, eval: &Evaluation, format: ReportFormat) -> Result<Report, ReportError> {
    let tables = report_tables(model, eval);
    match format {
        ReportFormat::Markdown => {
            let mut header = format!("Decision report: {}", model.document.goal);
            header.push_str(&format!(
                "\n\nScale: {}. Consistency threshold: CR < {}. {} internal nodes, {} leaf criteria, {} alternatives.",
                model.document.scale.as_str(),
                eval.threshold,
                model.root.internal_nodes().len(),
                model.root.leaves().len(),
                model.document.alternatives.len()
            ));
            Ok(Report::Markdown(render_markdown(&header, &tables)))
        }
        ReportFormat::Csv => Ok(Report::Csv(render_csv(&tables)?)),
    }
}
