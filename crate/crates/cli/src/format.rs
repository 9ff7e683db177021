//! Number rendering and CSV / aligned-table layout.

/// How numeric cells are rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Display {
    /// Three decimals at or above 0.01, otherwise `d.dE-XX`: `0.425`, `1.4E-03`.
    Tabular,
    /// `n` significant digits; fixed notation for `0.1 <= |v| < 10^n`,
    /// scientific (`1.00e-3`) elsewhere.
    Significant(usize),
}

impl Display {
    pub fn render(self, v: f64) -> String {
        if !v.is_finite() {
            return v.to_string();
        }
        match self {
            Display::Tabular => tabular(v),
            Display::Significant(n) => significant(v, n.max(1)),
        }
    }
}

fn tabular(v: f64) -> String {
    if v == 0.0 || v.abs() >= 0.01 {
        return format!("{v:.3}");
    }
    let s = format!("{v:.1E}");
    let (mantissa, exp) = s.split_once('E').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    format!("{mantissa}E{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    if magnitude >= -1 && magnitude < digits as i32 {
        let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.prec$e}", prec = digits - 1)
    }
}

/// Renders `nu` compactly (`8`, `0.15`, `6.908`).
pub fn threshold(nu: f64) -> String {
    format!("{nu}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Csv,
    Aligned,
}

/// Header plus rows, laid out as CSV or as right-aligned columns.
pub fn layout(header: &[&str], rows: &[Vec<String>], how: Layout) -> String {
    let mut out = String::new();
    match how {
        Layout::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Layout::Aligned => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for row in rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            out.push_str(&line(header.to_vec()));
            out.push('\n');
            for row in rows {
                out.push_str(&line(row.iter().map(String::as_str).collect()));
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabular_matches_published_style() {
        let r = |v| Display::Tabular.render(v);
        assert_eq!(r(0.42466), "0.425");
        assert_eq!(r(1.0), "1.000");
        assert_eq!(r(0.0498), "0.050");
        assert_eq!(r(0.0167), "0.017");
        assert_eq!(r(1.4e-3), "1.4E-03");
        assert_eq!(r(1.7356e-10), "1.7E-10");
        assert_eq!(r(9.12e-4), "9.1E-04");
        assert_eq!(r(0.0), "0.000");
        assert_eq!(r(12.5), "12.500");
    }

    #[test]
    fn significant_digits() {
        let r = |v| Display::Significant(3).render(v);
        assert_eq!(r(0.000_999_76), "1.00e-3");
        assert_eq!(r(0.001_144_5), "1.14e-3");
        assert_eq!(r(0.144_76), "0.145");
        assert_eq!(r(0.049_787), "4.98e-2");
        assert_eq!(r(1.0), "1.00");
        assert_eq!(r(12.345), "12.3");
        assert_eq!(r(12345.0), "1.23e4");
        assert_eq!(r(0.0), "0");
        assert_eq!(Display::Significant(12).render(0.5), "0.500000000000");
        assert_eq!(r(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_and_aligned() {
        let rows = vec![vec!["1".to_string(), "0.368".to_string()]];
        assert_eq!(layout(&["nu", "tail"], &rows, Layout::Csv), "nu,tail\n1,0.368\n");
        assert_eq!(
            layout(&["nu", "tail"], &rows, Layout::Aligned),
            "nu   tail\n 1  0.368\n"
        );
    }
}
