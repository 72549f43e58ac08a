//! Deterministic tabular output: CSV with a `# key=value` metadata header,
//! a single-object JSON form, and a minimal SVG polyline for quick looks.
//! All floats print as `{:.16e}` (17 significant digits) so identical runs
//! produce identical bytes.

use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub enum Column {
    Int(String, Vec<i64>),
    Float(String, Vec<f64>),
}

impl Column {
    pub fn name(&self) -> &str {
        match self {
            Column::Int(n, _) => n,
            Column::Float(n, _) => n,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Int(_, v) => v.len(),
            Column::Float(_, v) => v.len(),
        }
    }

    fn cell_csv(&self, row: usize) -> String {
        match self {
            Column::Int(_, v) => v[row].to_string(),
            Column::Float(_, v) => fmt_float(v[row]),
        }
    }

    fn cell_json(&self, row: usize) -> String {
        match self {
            Column::Int(_, v) => v[row].to_string(),
            // NaN marks cells outside a validity region; JSON has no NaN.
            Column::Float(_, v) if !v[row].is_finite() => "null".into(),
            Column::Float(_, v) => fmt_float(v[row]),
        }
    }

    fn as_f64(&self, row: usize) -> f64 {
        match self {
            Column::Int(_, v) => v[row] as f64,
            Column::Float(_, v) => v[row],
        }
    }
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<Column>,
}

impl Table {
    pub fn new() -> Self {
        Table::default()
    }

    pub fn meta_str(&mut self, key: &str, value: impl AsRef<str>) {
        self.meta.push((key.into(), value.as_ref().into()));
    }

    pub fn meta_float(&mut self, key: &str, value: f64) {
        self.meta.push((key.into(), fmt_float(value)));
    }

    pub fn meta_int(&mut self, key: &str, value: i64) {
        self.meta.push((key.into(), value.to_string()));
    }

    pub fn push_int(&mut self, name: &str, values: Vec<i64>) {
        self.columns.push(Column::Int(name.into(), values));
    }

    pub fn push_float(&mut self, name: &str, values: Vec<f64>) {
        self.columns.push(Column::Float(name.into(), values));
    }

    fn rows(&self) -> usize {
        self.columns.first().map(Column::len).unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        let header: Vec<&str> = self.columns.iter().map(Column::name).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for row in 0..self.rows() {
            let cells: Vec<String> = self.columns.iter().map(|c| c.cell_csv(row)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let _ = writeln!(
            out,
            "  \"meta\": {{{}}},",
            self.meta
                .iter()
                .map(|(k, v)| format!("\"{k}\": \"{v}\""))
                .collect::<Vec<_>>()
                .join(", ")
        );
        let n = self.columns.len();
        for (i, col) in self.columns.iter().enumerate() {
            let cells: Vec<String> = (0..col.len()).map(|r| col.cell_json(r)).collect();
            let comma = if i + 1 < n { "," } else { "" };
            let _ = writeln!(out, "  \"{}\": [{}]{}", col.name(), cells.join(", "), comma);
        }
        out.push_str("}\n");
        out
    }

    /// Single polyline per group of `y` against `x`, auto-scaled into a
    /// fixed viewBox. Groups (for orbit families) split on changes of the
    /// `group` column.
    pub fn to_svg(&self, x_col: usize, y_col: usize, group: Option<usize>) -> String {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const PAD: f64 = 20.0;
        let rows = self.rows();
        let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
        for r in 0..rows {
            let (x, y) = (self.columns[x_col].as_f64(r), self.columns[y_col].as_f64(r));
            if x.is_finite() && y.is_finite() {
                xmin = xmin.min(x);
                xmax = xmax.max(x);
                ymin = ymin.min(y);
                ymax = ymax.max(y);
            }
        }
        let xspan = (xmax - xmin).max(1e-300);
        let yspan = (ymax - ymin).max(1e-300);
        let sx = |x: f64| PAD + (x - xmin) / xspan * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - ymin) / yspan * (H - 2.0 * PAD);
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\">\n\
             <rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n",
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let mut start = 0usize;
        while start < rows {
            let mut end = rows;
            if let Some(gc) = group {
                let tag = self.columns[gc].cell_csv(start);
                end = (start..rows)
                    .find(|&r| self.columns[gc].cell_csv(r) != tag)
                    .unwrap_or(rows);
            }
            let pts: Vec<String> = (start..end)
                .filter(|&r| {
                    self.columns[x_col].as_f64(r).is_finite()
                        && self.columns[y_col].as_f64(r).is_finite()
                })
                .map(|r| {
                    format!(
                        "{:.2},{:.2}",
                        sx(self.columns[x_col].as_f64(r)),
                        sy(self.columns[y_col].as_f64(r))
                    )
                })
                .collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\"/>",
                pts.join(" ")
            );
            start = end;
        }
        out.push_str("</svg>\n");
        out
    }
}
