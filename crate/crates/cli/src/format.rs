//! Plain-text dataset and result files.
//!
//! Every file starts with `# key: value` metadata lines followed by a CSV table:
//!
//! ```text
//! # schema: 1
//! # window: -1 -1 1 1
//! # config: pattern=grid k=5 margin=0 window=-1,-1,1,1
//! # rows: 25
//! x,y,label
//! -1,-1,red
//! ```
//!
//! `window` lists the lower corner then the upper corner. When `rows` is present it must match
//! the number of data rows and the last row must end with a newline, so truncated files are
//! rejected.

use std::fmt::Write as _;
use std::io::Write;

use curvestat::point_k::LabeledPointSet;
use curvestat::{CurveSet, EstimateCurve, Point, Polyline, Window};

use crate::error::{CliError, CliResult};

pub const SCHEMA: u32 = 1;

/// Ordered `key=value` pairs echoed into the `# config:` line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config(pub Vec<(String, String)>);

impl Config {
    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }

    fn parse(s: &str) -> Option<Config> {
        s.split_whitespace()
            .map(|kv| kv.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
            .collect::<Option<Vec<_>>>()
            .map(Config)
    }
}

/// Metadata block of a parsed file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Header {
    pub schema: Option<u32>,
    pub window: Option<Window>,
    pub estimator: Option<String>,
    pub config: Config,
    pub rows: Option<usize>,
    pub warnings: Vec<String>,
}

fn write_header(
    text: &mut String,
    window: Option<&Window>,
    estimator: Option<&str>,
    config: &Config,
    warnings: &[String],
    rows: usize,
) {
    writeln!(text, "# schema: {SCHEMA}").unwrap();
    if let Some(est) = estimator {
        writeln!(text, "# estimator: {est}").unwrap();
    }
    if let Some(w) = window {
        writeln!(text, "# window: {}", window_to_string(w)).unwrap();
    }
    writeln!(text, "# config: {}", config.render()).unwrap();
    for w in warnings {
        writeln!(text, "# warning: {w}").unwrap();
    }
    writeln!(text, "# rows: {rows}").unwrap();
}

pub fn window_to_string(w: &Window) -> String {
    w.lo().coords().iter().chain(w.hi().coords()).map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn coords_csv(p: &Point) -> String {
    p.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn axis_names(dim: usize) -> &'static str {
    if dim == 3 {
        "x,y,z"
    } else {
        "x,y"
    }
}

pub fn points_to_string(ps: &LabeledPointSet, config: &Config) -> String {
    let mut text = String::new();
    write_header(&mut text, Some(ps.window()), None, config, &[], ps.len());
    writeln!(text, "{},label", axis_names(ps.window().dim())).unwrap();
    for (pts, label) in [(ps.interior(), "red"), (ps.guard(), "blue")] {
        for p in pts {
            writeln!(text, "{},{label}", coords_csv(p)).unwrap();
        }
    }
    text
}

pub fn curves_to_string(cs: &CurveSet, config: &Config) -> String {
    let mut text = String::new();
    let rows = cs.curves().iter().map(|c| c.vertices().len()).sum();
    write_header(&mut text, Some(cs.window()), None, config, &[], rows);
    writeln!(text, "curve_id,vertex_index,{}", axis_names(cs.dim())).unwrap();
    for (id, c) in cs.curves().iter().enumerate() {
        for (k, v) in c.vertices().iter().enumerate() {
            writeln!(text, "{id},{k},{}", coords_csv(v)).unwrap();
        }
    }
    text
}

pub fn estimate_to_string(
    estimator: &str,
    curve: &EstimateCurve,
    reference: Option<&dyn Fn(f64) -> f64>,
    config: &Config,
    warnings: &[String],
) -> String {
    let mut text = String::new();
    write_header(&mut text, None, Some(estimator), config, warnings, curve.len());
    text.push_str(if reference.is_some() { "r,value,reference\n" } else { "r,value\n" });
    for s in curve.samples() {
        match reference {
            Some(f) => writeln!(text, "{},{},{}", s.r, s.value, f(s.r)).unwrap(),
            None => writeln!(text, "{},{}", s.r, s.value).unwrap(),
        }
    }
    text
}

pub fn write_output(path: Option<&std::path::Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Data(format!("stdout: {e}"))),
    }
}

/// A parsed table: header plus rows with their 1-based line numbers.
struct Table {
    header: Header,
    columns: Vec<String>,
    rows: Vec<(u64, Vec<String>)>,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let v: Vec<f64> = s
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad window coordinate {t:?}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 4 && v.len() != 6 {
        return Err(format!("window needs 4 or 6 numbers, got {}", v.len()));
    }
    let d = v.len() / 2;
    let lo = Point::new(&v[..d]).map_err(|e| e.to_string())?;
    let hi = Point::new(&v[d..]).map_err(|e| e.to_string())?;
    Window::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_table(name: &str, text: &str) -> CliResult<Table> {
    let err = |line: usize, msg: String| CliError::Data(format!("{name}:{line}: {msg}"));
    let mut header = Header::default();
    let mut body_start = text.len();
    let mut body_line = 0;
    let mut offset = 0;
    for (idx, line) in text.split_inclusive('\n').enumerate() {
        let trimmed = line.trim_end_matches(['\n', '\r']);
        let Some(meta) = trimmed.strip_prefix('#') else {
            body_start = offset;
            body_line = idx;
            break;
        };
        offset += line.len();
        let Some((key, value)) = meta.split_once(':') else { continue };
        let value = value.trim();
        match key.trim() {
            "schema" => {
                let v: u32 = value.parse().map_err(|_| err(idx + 1, format!("bad schema {value:?}")))?;
                if v != SCHEMA {
                    return Err(err(idx + 1, format!("unsupported schema {v} (expected {SCHEMA})")));
                }
                header.schema = Some(v);
            }
            "window" => header.window = Some(parse_window(value).map_err(|m| err(idx + 1, m))?),
            "rows" => header.rows = Some(value.parse().map_err(|_| err(idx + 1, format!("bad row count {value:?}")))?),
            "estimator" => header.estimator = Some(value.to_string()),
            "config" => header.config = Config::parse(value).ok_or_else(|| err(idx + 1, "bad config line".into()))?,
            "warning" => header.warnings.push(value.to_string()),
            _ => {}
        }
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(&text.as_bytes()[body_start..]);
    let columns: Vec<String> =
        reader.headers().map_err(|e| err(body_line + 1, e.to_string()))?.iter().map(str::to_string).collect();
    if columns.is_empty() || columns == [""] {
        return Err(err(body_line + 1, "missing column header".into()));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize + body_line).unwrap_or(0);
            match e.kind() {
                csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                    err(line, format!("expected {expected_len} fields, found {len}"))
                }
                _ => err(line, e.to_string()),
            }
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0) + body_line as u64;
        if rec.iter().next().is_some_and(|f| f.starts_with('#')) {
            return Err(err(line as usize, "metadata line after the column header".into()));
        }
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    if let Some(n) = header.rows {
        if !text.ends_with('\n') {
            return Err(CliError::Data(format!("{name}: last line is unterminated (truncated file?)")));
        }
        if n != rows.len() {
            return Err(CliError::Data(format!("{name}: header promises {n} rows, found {}", rows.len())));
        }
    }
    Ok(Table { header, columns, rows })
}

fn number(name: &str, line: u64, field: &str) -> CliResult<f64> {
    match field.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Data(format!("{name}:{line}: expected a finite number, got {field:?}"))),
    }
}

fn point(name: &str, line: u64, fields: &[String]) -> CliResult<Point> {
    let v = fields.iter().map(|f| number(name, line, f)).collect::<CliResult<Vec<_>>>()?;
    Point::new(&v).map_err(|e| CliError::Data(format!("{name}:{line}: {e}")))
}

fn expect_columns(name: &str, table: &Table, options: &[&str]) -> CliResult<usize> {
    let got = table.columns.join(",");
    options
        .iter()
        .position(|o| *o == got)
        .ok_or_else(|| CliError::Data(format!("{name}: expected header {}, got {got:?}", options.join(" or "))))
}

fn require_window(name: &str, header: &Header, dim: usize) -> CliResult<Window> {
    let w = header.window.ok_or_else(|| CliError::Data(format!("{name}: missing '# window:' metadata line")))?;
    if w.dim() != dim {
        return Err(CliError::Data(format!(
            "{name}: window is {}-dimensional but columns are {dim}-dimensional",
            w.dim()
        )));
    }
    Ok(w)
}

pub fn parse_points(name: &str, text: &str) -> CliResult<(Header, LabeledPointSet)> {
    let table = parse_table(name, text)?;
    let dim = 2 + expect_columns(name, &table, &["x,y,label", "x,y,z,label"])?;
    let window = require_window(name, &table.header, dim)?;
    let (mut red, mut blue) = (Vec::new(), Vec::new());
    for (line, f) in &table.rows {
        let p = point(name, *line, &f[..dim])?;
        match f[dim].trim() {
            "red" => red.push(p),
            "blue" => blue.push(p),
            other => return Err(CliError::Data(format!("{name}:{line}: label must be red or blue, got {other:?}"))),
        }
    }
    let ps = LabeledPointSet::new(red, blue, window).map_err(|e| CliError::Data(format!("{name}: {e}")))?;
    Ok((table.header, ps))
}

pub fn parse_curves(name: &str, text: &str) -> CliResult<(Header, CurveSet)> {
    let table = parse_table(name, text)?;
    let dim = 2 + expect_columns(name, &table, &["curve_id,vertex_index,x,y", "curve_id,vertex_index,x,y,z"])?;
    let window = require_window(name, &table.header, dim)?;
    let data = |line: u64, msg: String| CliError::Data(format!("{name}:{line}: {msg}"));
    let mut curves: Vec<(u64, u64, Vec<Point>)> = Vec::new();
    for (line, f) in &table.rows {
        let id: u64 = f[0].trim().parse().map_err(|_| data(*line, format!("bad curve_id {:?}", f[0])))?;
        let k: usize = f[1].trim().parse().map_err(|_| data(*line, format!("bad vertex_index {:?}", f[1])))?;
        let p = point(name, *line, &f[2..2 + dim])?;
        match curves.last_mut() {
            Some((cur, _, verts)) if *cur == id => {
                if k != verts.len() {
                    return Err(data(*line, format!("curve {id}: expected vertex_index {}, got {k}", verts.len())));
                }
                verts.push(p);
            }
            _ => {
                if curves.iter().any(|(c, _, _)| *c == id) {
                    return Err(data(*line, format!("curve {id} is split into separate blocks")));
                }
                if k != 0 {
                    return Err(data(*line, format!("curve {id} must start at vertex_index 0, got {k}")));
                }
                curves.push((id, *line, vec![p]));
            }
        }
    }
    let polylines = curves
        .into_iter()
        .map(|(id, line, v)| Polyline::new(v).map_err(|e| data(line, format!("curve {id}: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    let cs = CurveSet::new(polylines, window).map_err(|e| CliError::Data(format!("{name}: {e}")))?;
    Ok((table.header, cs))
}

/// One row of an estimate file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateRow {
    pub r: f64,
    pub value: f64,
    pub reference: Option<f64>,
}

pub fn parse_estimate(name: &str, text: &str) -> CliResult<(Header, Vec<EstimateRow>)> {
    let table = parse_table(name, text)?;
    if table.header.schema.is_none() {
        return Err(CliError::Data(format!("{name}: missing '# schema:' metadata line")));
    }
    let with_ref = expect_columns(name, &table, &["r,value", "r,value,reference"])? == 1;
    let rows = table
        .rows
        .iter()
        .map(|(line, f)| {
            Ok(EstimateRow {
                r: number(name, *line, &f[0])?,
                value: number(name, *line, &f[1])?,
                reference: if with_ref { Some(number(name, *line, &f[2])?) } else { None },
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((table.header, rows))
}
