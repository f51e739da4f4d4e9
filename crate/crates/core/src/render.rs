//! Plain-text, Markdown, LaTeX and JSON renderings of a leaderboard table.
//!
//! Row markup in every human-readable format:
//!
//! | mark | meaning |
//! |------|---------|
//! | `░` / `\opentrack{..}` | open system |
//! | `▓` / `\closedtrack{..}` | closed system |
//! | `⊘` before the name | no claimed support for the pair |
//! | `†` after the name | withdrawn from human evaluation |
//! | `✓` | selected for human evaluation |
//!
//! The cutoff is a rule before the first row below the cutoff line.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::model::{LeaderboardTable, RankedRow, SystemCategory};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Markdown,
    Latex,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Markdown => "md",
            Format::Latex => "tex",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "md" | "markdown" => Ok(Format::Markdown),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected text, md, latex or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: Format,
    /// When false, closed systems are dropped from the view.
    pub include_closed: bool,
    pub show_reasons: bool,
    /// ANSI shading in text output.
    pub color: bool,
}

impl RenderOptions {
    pub fn new(format: Format) -> Self {
        Self {
            format,
            include_closed: true,
            show_reasons: false,
            color: false,
        }
    }
}

/// English name of an ISO-639-1 code used in table titles.
pub fn language_name(code: &str) -> Option<&'static str> {
    Some(match code {
        "cs" => "Czech",
        "de" => "German",
        "en" => "English",
        "es" => "Spanish",
        "fr" => "French",
        "hi" => "Hindi",
        "is" => "Icelandic",
        "ja" => "Japanese",
        "ru" => "Russian",
        "uk" => "Ukrainian",
        "zh" => "Chinese",
        _ => return None,
    })
}

fn pair_title(table: &LeaderboardTable) -> String {
    let name = |code: &str| language_name(code).map_or_else(|| code.to_string(), str::to_string);
    format!("{}-{}", name(table.pair.source()), name(table.pair.target()))
}

/// The rows a view shows, with a flag marking the first row below the cutoff.
///
/// The rule position comes from each row's stored `above_cutoff`, so a
/// filtered view places it where the full ranking put it.
pub fn visible_rows(table: &LeaderboardTable, include_closed: bool) -> Vec<(&RankedRow, bool)> {
    let mut rule_placed = false;
    table
        .rows
        .iter()
        .filter(|r| include_closed || r.category() != SystemCategory::Closed)
        .map(|r| {
            let rule = !r.above_cutoff && !rule_placed;
            rule_placed |= rule;
            (r, rule)
        })
        .collect()
}

fn display_autorank(row: &RankedRow, table: &LeaderboardTable) -> String {
    format!("{:.*}", table.config.display_decimals as usize, row.autorank_display)
}

fn reasons(row: &RankedRow) -> String {
    row.reasons.iter().map(|r| r.as_str()).collect::<Vec<_>>().join(",")
}

fn category_mark(category: SystemCategory) -> &'static str {
    match category {
        SystemCategory::Constrained => " ",
        SystemCategory::Open => "░",
        SystemCategory::Closed => "▓",
    }
}

fn decorated_name(row: &RankedRow) -> String {
    let mut name = String::new();
    if row.unsupported {
        name.push_str("⊘ ");
    }
    name.push_str(&row.system.name);
    if row.withdrawn {
        name.push_str(" †");
    }
    name
}

pub fn render_table(table: &LeaderboardTable, opts: &RenderOptions) -> String {
    match opts.format {
        Format::Text => render_text(table, opts),
        Format::Markdown => render_markdown(table, opts),
        Format::Latex => render_latex(table, opts),
        Format::Json => {
            let include_closed = opts.include_closed;
            Report::from_tables([table], |r| include_closed || r.category() != SystemCategory::Closed).to_json()
        }
    }
}

fn title(table: &LeaderboardTable, opts: &RenderOptions) -> String {
    let mut title = format!("{} ({})", pair_title(table), table.pair);
    if !opts.include_closed {
        title.push_str(", excluding closed systems");
    }
    title
}

fn render_text(table: &LeaderboardTable, opts: &RenderOptions) -> String {
    let mut header: Vec<String> = vec!["System Name".into(), "AutoRank".into()];
    header.extend(table.metrics.iter().map(|m| m.display_name.clone()));
    header.push("Human eval".into());
    if opts.show_reasons {
        header.push("Reasons".into());
    }

    let rows = visible_rows(table, opts.include_closed);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|(row, _)| {
            let mut line = vec![
                format!("{} {}", category_mark(row.category()), decorated_name(row)),
                display_autorank(row, table),
            ];
            line.extend(table.metrics.iter().map(|m| row.raw_scores[&m.id].to_string()));
            line.push(if row.selected { "✓".into() } else { String::new() });
            if opts.show_reasons {
                line.push(reasons(row));
            }
            line
        })
        .collect();

    let width = |i: usize| {
        cells
            .iter()
            .map(|c| c[i].chars().count())
            .chain([header[i].chars().count() + if i == 0 { 2 } else { 0 }])
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..header.len()).map(width).collect();
    let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
    let pad = |text: &str, w: usize, right: bool| {
        let fill = " ".repeat(w.saturating_sub(text.chars().count()));
        if right {
            format!("{fill}{text}")
        } else {
            format!("{text}{fill}")
        }
    };
    // Name and trailing columns are left-aligned; numbers right-aligned.
    let numeric = |i: usize| i > 0 && i < header.len() - 1 - usize::from(opts.show_reasons);

    let mut out = String::new();
    writeln!(out, "{}", title(table, opts)).unwrap();
    let head: Vec<String> = header
        .iter()
        .enumerate()
        .map(|(i, h)| {
            if i == 0 {
                pad(&format!("  {h}"), widths[i], false)
            } else {
                pad(h, widths[i], numeric(i))
            }
        })
        .collect();
    writeln!(out, "{}", head.join("  ").trim_end()).unwrap();
    writeln!(out, "{}", "-".repeat(total)).unwrap();
    for ((row, rule), line) in rows.iter().zip(&cells) {
        if *rule {
            writeln!(out, "{}", "=".repeat(total)).unwrap();
        }
        let mut parts: Vec<String> = line
            .iter()
            .enumerate()
            .map(|(i, c)| pad(c, widths[i], numeric(i)))
            .collect();
        if opts.color {
            let shade = match row.category() {
                SystemCategory::Constrained => None,
                SystemCategory::Open => Some("\x1b[48;5;252m"),
                SystemCategory::Closed => Some("\x1b[48;5;246m"),
            };
            if let Some(code) = shade {
                parts[0] = format!("{code}{}\x1b[0m", parts[0]);
            }
        }
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    }
    out
}

fn escape_markdown(text: &str) -> String {
    text.replace('|', "\\|")
}

fn render_markdown(table: &LeaderboardTable, opts: &RenderOptions) -> String {
    let mut out = String::new();
    writeln!(out, "### {}\n", title(table, opts)).unwrap();

    let mut header = vec!["System Name".to_string(), "AutoRank ↓".to_string()];
    header.extend(
        table
            .metrics
            .iter()
            .map(|m| format!("{} {}", m.display_name, m.orientation.arrow())),
    );
    header.push("Human evaluation?".into());
    if opts.show_reasons {
        header.push("Reasons".into());
    }
    writeln!(out, "| {} |", header.join(" | ")).unwrap();
    let mut align = vec!["---:"; header.len()];
    for a in align.iter_mut().skip(1) {
        *a = ":---:";
    }
    if opts.show_reasons {
        *align.last_mut().unwrap() = ":---";
    }
    writeln!(out, "|{}|", align.join("|")).unwrap();

    for (row, rule) in visible_rows(table, opts.include_closed) {
        if rule {
            let blanks = " |".repeat(header.len() - 1);
            writeln!(out, "| ━━ cutoff ━━ |{blanks}").unwrap();
        }
        let mark = match row.category() {
            SystemCategory::Constrained => String::new(),
            other => format!("{} ", category_mark(other)),
        };
        let mut cells = vec![
            format!("{mark}{}", escape_markdown(&decorated_name(row))),
            display_autorank(row, table),
        ];
        cells.extend(table.metrics.iter().map(|m| row.raw_scores[&m.id].to_string()));
        cells.push(if row.selected { "✓".into() } else { String::new() });
        if opts.show_reasons {
            cells.push(reasons(row));
        }
        let line = format!("| {} |", cells.join(" | "));
        // Empty trailing cells leave a double space before the pipe.
        writeln!(out, "{}", line.replace("  |", " |")).unwrap();
    }
    out
}

fn escape_latex(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            c => out.push(c),
        }
    }
    out
}

const LATEX_CHECK: &str = "\\colorbox{black}{\\textcolor{white}{\\ding{51}}}";

fn render_latex(table: &LeaderboardTable, opts: &RenderOptions) -> String {
    let mut out = String::new();
    let mut columns = String::from("R{40mm}C{22mm}");
    for _ in &table.metrics {
        columns.push_str("C{22mm}");
    }
    columns.push_str("C{32mm}");
    if opts.show_reasons {
        columns.push_str("L{60mm}");
    }
    writeln!(out, "\\begin{{tabular}}{{{columns}}}").unwrap();

    let arrow = |up: bool| if up { "$\\uparrow$" } else { "$\\downarrow$" };
    let mut header = vec![
        "\\bf System Name".to_string(),
        format!("\\bf AutoRank {}", arrow(false)),
    ];
    header.extend(table.metrics.iter().map(|m| {
        let up = m.orientation == crate::model::Orientation::HigherBetter;
        format!("\\bf {} {}", escape_latex(&m.display_name), arrow(up))
    }));
    header.push("\\bf Human evaluation?".into());
    if opts.show_reasons {
        header.push("\\bf Reasons".into());
    }
    writeln!(out, "{} \\\\", header.join(" & ")).unwrap();
    writeln!(out, "\\toprule").unwrap();

    for (row, rule) in visible_rows(table, opts.include_closed) {
        if rule {
            writeln!(out, "\\midrule").unwrap();
        }
        let mut name = escape_latex(&row.system.name);
        if row.unsupported {
            name = format!("\\nonsupporting{{{name}}}");
        }
        if row.withdrawn {
            name.push_str(" $\\dagger$");
        }
        let mut cells = vec![name, display_autorank(row, table)];
        cells.extend(table.metrics.iter().map(|m| row.raw_scores[&m.id].to_string()));
        cells.push(if row.selected {
            LATEX_CHECK.to_string()
        } else {
            String::new()
        });
        if opts.show_reasons {
            cells.push(escape_latex(&reasons(row)));
        }
        let body = cells.join(" & ");
        let line = match row.category() {
            SystemCategory::Constrained => format!("{body} \\\\"),
            SystemCategory::Open => format!("\\opentrack{{{body}}} \\\\"),
            SystemCategory::Closed => format!("\\closedtrack{{{body}}} \\\\"),
        };
        writeln!(out, "{line}").unwrap();
    }
    writeln!(out, "\\bottomrule").unwrap();
    writeln!(out, "\\end{{tabular}}").unwrap();
    let mut caption = format!("AutoRank leaderboard for {}", pair_title(table));
    if !opts.include_closed {
        caption.push_str(" (excluding closed systems)");
    }
    writeln!(out, "\\caption{{{caption}.}}").unwrap();
    out
}
