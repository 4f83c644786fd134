//! CSV tables and the gnuplot scripts that plot them.

use std::fmt::Write as _;
use std::path::Path;

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        // writing into memory cannot fail
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Plot layout for a table: x column, y columns, axis labels.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub title: String,
    pub x_col: usize,
    pub y_cols: Vec<usize>,
    pub x_label: &'static str,
    pub y_label: &'static str,
    pub points: bool,
}

/// A standalone gnuplot script reading `csv`.
pub fn gnuplot_script(table: &Table, csv: &Path, plot: &PlotSpec) -> String {
    let name = csv.file_name().map_or_else(
        || csv.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let stem = Path::new(&name)
        .file_stem()
        .map_or("plot".into(), |s| s.to_string_lossy().into_owned());
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{stem}.png'");
    let _ = writeln!(s, "set title '{}'", plot.title.replace('\'', "''"));
    let _ = writeln!(s, "set xlabel '{}'", plot.x_label);
    let _ = writeln!(s, "set ylabel '{}'", plot.y_label);
    let style = if plot.points { "linespoints" } else { "lines" };
    let series: Vec<String> = plot
        .y_cols
        .iter()
        .map(|&c| {
            format!(
                "'{name}' using {}:{} with {style} title '{}'",
                plot.x_col + 1,
                c + 1,
                table.header[c]
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_and_script() {
        let mut t = Table::new(&["x", "psi"]);
        t.push(vec![num(0.0), num(1.0)]);
        assert_eq!(
            t.to_csv(),
            "x,psi\n0.0000000000000000e0,1.0000000000000000e0\n"
        );
        let p = PlotSpec {
            title: "ground state".into(),
            x_col: 0,
            y_cols: vec![1],
            x_label: "x",
            y_label: "psi",
            points: false,
        };
        let s = gnuplot_script(&t, Path::new("/tmp/out/g.csv"), &p);
        assert!(s.contains("plot 'g.csv' using 1:2 with lines title 'psi'"));
        assert!(s.contains("set output 'g.png'"));
        let mut t = Table::new(&["id", "detail"]);
        t.push(vec!["1".into(), "a, b".into()]);
        assert_eq!(t.to_csv(), "id,detail\n1,\"a, b\"\n");
    }
}
