//! Comma-separated output with `#` comment headers and fixed 12-significant-digit
//! numbers, so identical inputs give byte-identical files.

use std::io::Write;

/// Formats a number with 12 significant digits; NaN is written as `nan`.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn write_comments<W: Write>(w: &mut W, comments: &[String]) -> std::io::Result<()> {
    for c in comments {
        for line in c.lines() {
            if line.starts_with('#') {
                writeln!(w, "{line}")?;
            } else {
                writeln!(w, "# {line}")?;
            }
        }
    }
    Ok(())
}

/// Writes equal-length columns under a header row.
pub fn write_columns<W: Write>(
    mut w: W,
    comments: &[String],
    header: &[String],
    columns: &[&[f64]],
) -> std::io::Result<()> {
    assert_eq!(header.len(), columns.len(), "header/column count");
    let n = columns.first().map_or(0, |c| c.len());
    assert!(columns.iter().all(|c| c.len() == n), "ragged columns");
    write_comments(&mut w, comments)?;
    writeln!(w, "{}", header.join(","))?;
    let mut line = String::new();
    for i in 0..n {
        line.clear();
        for (k, c) in columns.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&number(c[i]));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes text rows (already formatted) under a header row.
pub fn write_records<W: Write>(
    mut w: W,
    comments: &[String],
    header: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    write_comments(&mut w, comments)?;
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        let escaped: Vec<String> = r
            .iter()
            .map(|f| {
                if f.contains([',', '"', '\n']) {
                    format!("\"{}\"", f.replace('"', "\"\""))
                } else {
                    f.clone()
                }
            })
            .collect();
        writeln!(w, "{}", escaped.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_precision() {
        assert_eq!(number(1.0), "1.00000000000e0");
        assert_eq!(number(-2.5e-9), "-2.50000000000e-9");
        assert_eq!(number(f64::NAN), "nan");
    }

    #[test]
    fn columns_and_comments() {
        let mut buf = Vec::new();
        write_columns(
            &mut buf,
            &["a\n# b".into()],
            &["x".into(), "y".into()],
            &[&[1.0, 2.0], &[3.0, 4.0]],
        )
        .unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "# a\n# b\nx,y\n1.00000000000e0,3.00000000000e0\n2.00000000000e0,4.00000000000e0\n"
        );
    }

    #[test]
    fn records_are_quoted() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[], &["name", "note"], &[vec!["a".into(), "x, y".into()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name,note\na,\"x, y\"\n");
    }
}
