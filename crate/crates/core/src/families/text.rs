//! Plain-text family tables.
//!
//! ```text
//! # family kind=simon n=2 output_width=1
//! label,values,meta
//! 0011,0 0 1 1,h=01
//! ```

use std::fmt::Write as _;

use super::{label_width, output_width, table_label, FamilyKind, FunctionFamily, FunctionTable, TableMeta};
use crate::bits::BitString;
use crate::error::{Error, Result};

impl FunctionFamily {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = self.output_width();
        let _ = writeln!(out, "# family kind={} n={} output_width={}", self.kind, self.n, w);
        out.push_str("label,values,meta\n");
        for t in &self.tables {
            let values: Vec<String> = t.values.iter().map(|&v| BitString::new(v, w).to_string()).collect();
            let meta = match t.meta {
                TableMeta::Marked(b) => format!("marked={b}"),
                TableMeta::Constant => "constant".to_string(),
                TableMeta::Balanced => "balanced".to_string(),
                TableMeta::Period(h) => format!("h={h}"),
            };
            let _ = writeln!(out, "{},{},{}", t.label, values.join(" "), meta);
        }
        out
    }

    /// Parses the output of [`FunctionFamily::to_text`] and checks it
    /// against the defining property of the family.
    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, message: &str| Error::Parse { line, message: message.to_string() };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
        let mut kind = None;
        let mut n = None;
        for tok in header.trim_start_matches('#').split_whitespace().skip(1) {
            match tok.split_once('=') {
                Some(("kind", v)) => kind = Some(v.parse::<FamilyKind>()?),
                Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|_| err(hl + 1, "bad n"))?),
                Some(("output_width", _)) => {}
                _ => return Err(err(hl + 1, "unexpected header token")),
            }
        }
        let kind = kind.ok_or_else(|| err(hl + 1, "missing kind"))?;
        let n = n.ok_or_else(|| err(hl + 1, "missing n"))?;
        let w = output_width(kind, n);
        match lines.next() {
            Some((_, l)) if l.trim() == "label,values,meta" => {}
            Some((i, _)) => return Err(err(i + 1, "expected column header")),
            None => return Err(err(hl + 2, "missing column header")),
        }
        let mut tables = Vec::new();
        for (i, line) in lines {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(err(i + 1, "expected three columns"));
            }
            let label: BitString = cols[0].parse().map_err(|_| err(i + 1, "bad label"))?;
            let values = cols[1]
                .split_whitespace()
                .map(|v| v.parse::<BitString>().ok().filter(|b| b.width() == w).map(|b| b.value()))
                .collect::<Option<Vec<u64>>>()
                .ok_or_else(|| err(i + 1, "bad value"))?;
            if values.len() != 1 << n || label.width() != label_width(kind, n) {
                return Err(err(i + 1, "table size does not match n"));
            }
            let table =
                derive_table(kind, n, label, values).ok_or_else(|| err(i + 1, "table violates the family property"))?;
            let meta_text = cols[2].trim();
            let expected_meta = match table.meta {
                TableMeta::Marked(b) => format!("marked={b}"),
                TableMeta::Constant => "constant".into(),
                TableMeta::Balanced => "balanced".into(),
                TableMeta::Period(h) => format!("h={h}"),
            };
            if meta_text != expected_meta {
                return Err(err(i + 1, "metadata does not match the table"));
            }
            tables.push(table);
        }
        let fam = FunctionFamily::assemble(kind, n, tables);
        if fam.index.len() != fam.tables.len() {
            return Err(err(0, "duplicate labels"));
        }
        Ok(fam)
    }
}

fn derive_table(kind: FamilyKind, n: usize, label: BitString, values: Vec<u64>) -> Option<FunctionTable> {
    let w = output_width(kind, n);
    let entries = 1u64 << n;
    let meta = match kind {
        FamilyKind::Grover => {
            if values.iter().enumerate().any(|(a, &v)| v != (a as u64 == label.value()) as u64) {
                return None;
            }
            TableMeta::Marked(label)
        }
        FamilyKind::DeutschJozsa => {
            if table_label(&values, w) != label {
                return None;
            }
            let ones = values.iter().filter(|&&v| v == 1).count() as u64;
            if ones == 0 || ones == entries {
                TableMeta::Constant
            } else if ones * 2 == entries {
                TableMeta::Balanced
            } else {
                return None;
            }
        }
        FamilyKind::Simon => {
            if table_label(&values, w) != label {
                return None;
            }
            let h = (1..entries).find(|&h| values[h as usize] == values[0])?;
            for a in 0..entries {
                for c in 0..entries {
                    let same = values[a as usize] == values[c as usize];
                    if same != (a == c || a == c ^ h) {
                        return None;
                    }
                }
            }
            TableMeta::Period(BitString::new(h, n))
        }
    };
    Some(FunctionTable { label, values, output_width: w, meta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for (k, n) in [(FamilyKind::Grover, 3), (FamilyKind::DeutschJozsa, 2), (FamilyKind::Simon, 3)] {
            let f = FunctionFamily::build(k, n).unwrap();
            let back = FunctionFamily::from_text(&f.to_text()).unwrap();
            assert_eq!(back.tables(), f.tables());
        }
    }

    #[test]
    fn simon_golden_rows() {
        let text = FunctionFamily::build(FamilyKind::Simon, 2).unwrap().to_text();
        assert!(text.starts_with("# family kind=simon n=2 output_width=1\nlabel,values,meta\n"));
        assert!(text.contains("\n0011,0 0 1 1,h=01\n"));
        assert!(text.contains("\n1001,1 0 0 1,h=11\n"));
    }

    #[test]
    fn rejects_tables_breaking_the_property() {
        let bad = "# family kind=deutsch_jozsa n=2 output_width=1\nlabel,values,meta\n0001,0 0 0 1,balanced\n";
        assert!(matches!(FunctionFamily::from_text(bad), Err(Error::Parse { line: 3, .. })));
        let bad_meta = "# family kind=simon n=2 output_width=1\nlabel,values,meta\n0011,0 0 1 1,h=10\n";
        assert!(FunctionFamily::from_text(bad_meta).is_err());
    }
}
