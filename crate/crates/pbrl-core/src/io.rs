//! Text file formats: protomatrices, families, circulant shift tables, and
//! MacKay alist export, plus flat little-endian `f32` streams for codeword
//! and LLR files.
//!
//! All text formats are line oriented and rendered canonically so files
//! round-trip byte for byte:
//!
//! * protomatrix: `rows cols` then one line of space-separated entries per row;
//! * family: `[precode]` and `[lt]` sections in protomatrix form, then
//!   `[punctured]` (space-separated indices, possibly an empty line) and
//!   `[name]`;
//! * shift table: `rows cols z` then one line per block row, each cell `-1`
//!   or a comma-separated exponent list.

use crate::error::{Error, Result};
use crate::protograph::{PbrlFamily, Protomatrix};
use crate::qc::{Expanded, LiftStage, QcMatrix};
use std::collections::BTreeSet;
use std::fmt::Write as _;

pub fn render_protomatrix(p: &Protomatrix) -> String {
    let mut out = format!("{} {}\n", p.rows(), p.cols());
    for r in 0..p.rows() {
        let line = p
            .row(r)
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_protomatrix(text: &str) -> Result<Protomatrix> {
    let mut lines = text.lines().enumerate();
    parse_protomatrix_lines(&mut lines)
}

fn parse_protomatrix_lines<'a, I>(lines: &mut I) -> Result<Protomatrix>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing matrix header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, "bad dimension")))
        .collect::<Result<_>>()?;
    if dims.len() != 2 {
        return Err(Error::parse(ln + 1, "expected `rows cols`"));
    }
    let (rows, cols) = (dims[0], dims[1]);
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + 1, "truncated matrix"))?;
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, "bad entry")))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::parse(
                ln + 1,
                format!("expected {cols} entries, got {}", row.len()),
            ));
        }
        data.push(row);
    }
    Protomatrix::from_rows(data)
}

pub fn render_family(f: &PbrlFamily) -> String {
    let mut out = String::new();
    out.push_str("[precode]\n");
    out.push_str(&render_protomatrix(&f.precode));
    out.push_str("[lt]\n");
    let _ = writeln!(out, "{} {}", f.lt_rows.len(), f.n_precode_vars());
    for row in &f.lt_rows {
        let line = row
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("[punctured]\n");
    let punct = f
        .punctured
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    out.push_str(&punct);
    out.push('\n');
    out.push_str("[name]\n");
    out.push_str(&f.name);
    out.push('\n');
    out
}

pub fn parse_family(text: &str) -> Result<PbrlFamily> {
    let mut lines = text.lines().enumerate().peekable();

    let expect_section = |lines: &mut std::iter::Peekable<
        std::iter::Enumerate<std::str::Lines<'_>>,
    >,
                          tag: &str|
     -> Result<()> {
        match lines.next() {
            Some((_, line)) if line.trim() == tag => Ok(()),
            Some((ln, line)) => Err(Error::parse(
                ln + 1,
                format!("expected `{tag}`, found `{line}`"),
            )),
            None => Err(Error::parse(0, format!("missing `{tag}` section"))),
        }
    };

    expect_section(&mut lines, "[precode]")?;
    let precode = parse_protomatrix_lines(&mut lines)?;

    expect_section(&mut lines, "[lt]")?;
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing lt header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, "bad dimension")))
        .collect::<Result<_>>()?;
    if dims.len() != 2 {
        return Err(Error::parse(ln + 1, "expected `rows cols`"));
    }
    let mut lt_rows = Vec::with_capacity(dims[0]);
    for _ in 0..dims[0] {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + 1, "truncated lt section"))?;
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, "bad entry")))
            .collect::<Result<_>>()?;
        if row.len() != dims[1] {
            return Err(Error::parse(
                ln + 1,
                format!("expected {} entries, got {}", dims[1], row.len()),
            ));
        }
        lt_rows.push(row);
    }

    expect_section(&mut lines, "[punctured]")?;
    let (ln, punct_line) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing punctured line"))?;
    let punctured: BTreeSet<usize> = punct_line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, "bad index")))
        .collect::<Result<_>>()?;

    expect_section(&mut lines, "[name]")?;
    let (_, name) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing name line"))?;

    PbrlFamily::new(name.trim().to_string(), precode, lt_rows, punctured)
}

pub fn render_qc(qc: &QcMatrix) -> String {
    let mut out = format!("{} {} {}\n", qc.block_rows(), qc.block_cols(), qc.z());
    for r in 0..qc.block_rows() {
        let line = (0..qc.block_cols())
            .map(|c| {
                let cell = qc.cell(r, c);
                if cell.is_empty() {
                    "-1".to_string()
                } else {
                    cell.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                }
            })
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_qc(text: &str, stage: LiftStage) -> Result<QcMatrix> {
    let mut lines = text.lines().enumerate();
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing shift-table header"))?;
    let dims: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, "bad header")))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(Error::parse(ln + 1, "expected `rows cols z`"));
    }
    let (rows, cols, z) = (dims[0] as usize, dims[1] as usize, dims[2] as u32);
    let mut cells = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + 1, "truncated shift table"))?;
        let row_cells: Vec<&str> = line.split_whitespace().collect();
        if row_cells.len() != cols {
            return Err(Error::parse(
                ln + 1,
                format!("expected {cols} cells, got {}", row_cells.len()),
            ));
        }
        for cell in row_cells {
            if cell == "-1" {
                cells.push(Vec::new());
            } else {
                let exps: Vec<u32> = cell
                    .split(',')
                    .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, "bad exponent")))
                    .collect::<Result<_>>()?;
                cells.push(exps);
            }
        }
    }
    QcMatrix::from_cells(rows, cols, z, cells, stage)
}

/// MacKay alist rendering of an expanded parity-check graph. Column and row
/// entry lists are 1-based and zero-padded to the maximum degree.
pub fn render_alist(h: &Expanded) -> String {
    let n = h.n_vars;
    let m = h.n_checks;
    let max_col = h.var_adj.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = h.chk_adj.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("{n} {m}\n{max_col} {max_row}\n");
    out.push_str(
        &h.var_adj
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    out.push('\n');
    out.push_str(
        &h.chk_adj
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    out.push('\n');
    for col in &h.var_adj {
        let mut ids: Vec<String> = col.iter().map(|&c| (c + 1).to_string()).collect();
        ids.resize(max_col, "0".to_string());
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    for row in &h.chk_adj {
        let mut ids: Vec<String> = row.iter().map(|&v| (v + 1).to_string()).collect();
        ids.resize(max_row, "0".to_string());
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_alist(text: &str) -> Result<Expanded> {
    let mut tokens = text.split_whitespace();
    let mut next_num = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::parse(0, format!("missing {what}")))?
            .parse()
            .map_err(|_| Error::parse(0, format!("bad {what}")))
    };
    let n = next_num("n")?;
    let m = next_num("m")?;
    let max_col = next_num("max column degree")?;
    let max_row = next_num("max row degree")?;
    let col_deg: Vec<usize> = (0..n).map(|_| next_num("column degree")).collect::<Result<_>>()?;
    let row_deg: Vec<usize> = (0..m).map(|_| next_num("row degree")).collect::<Result<_>>()?;
    let mut var_adj = vec![Vec::new(); n];
    for (v, adj) in var_adj.iter_mut().enumerate() {
        for i in 0..max_col {
            let id = next_num("column entry")?;
            if id != 0 {
                if id > m {
                    return Err(Error::parse(0, format!("check id {id} out of range")));
                }
                adj.push(id as u32 - 1);
            } else if i < col_deg[v] {
                return Err(Error::parse(0, "zero padding inside declared degree"));
            }
        }
        if adj.len() != col_deg[v] {
            return Err(Error::parse(0, "column degree mismatch"));
        }
    }
    let mut chk_adj = vec![Vec::new(); m];
    for (c, adj) in chk_adj.iter_mut().enumerate() {
        for i in 0..max_row {
            let id = next_num("row entry")?;
            if id != 0 {
                if id > n {
                    return Err(Error::parse(0, format!("variable id {id} out of range")));
                }
                adj.push(id as u32 - 1);
            } else if i < row_deg[c] {
                return Err(Error::parse(0, "zero padding inside declared degree"));
            }
        }
        if adj.len() != row_deg[c] {
            return Err(Error::parse(0, "row degree mismatch"));
        }
    }
    Ok(Expanded::new(m, n, chk_adj, var_adj))
}

/// Little-endian `f32` stream written as raw bytes.
pub fn write_f32_stream(values: &[f32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() * 4);
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_f32_stream(bytes: &[u8]) -> Result<Vec<f32>> {
    if bytes.len() % 4 != 0 {
        return Err(Error::parse(0, "f32 stream length not a multiple of 4"));
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}
