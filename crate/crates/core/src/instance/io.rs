//! Instance file format.
//!
//! UTF-8 text, whitespace-separated columns, header row then one row per
//! node with the depot first:
//!
//! ```text
//! CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T
//! 1 47 24 0 285 0.00 256
//! 2 38 15 102 198 0.19 256
//! ...
//! ```
//!
//! The travel-time matrix is recomputed from the coordinates on load and is
//! never serialized.

use std::fs;
use std::path::Path;

use super::Instance;
use crate::error::{Error, Result};
use crate::fixed::{parse_centi, Centi};

/// Exact header row of instance files.
pub const INSTANCE_HEADER: &str = "CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T";

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str(INSTANCE_HEADER);
    out.push('\n');
    for node in 1..=inst.n() {
        out.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            node,
            inst.x(node),
            inst.y(node),
            inst.open(node),
            inst.close(node),
            inst.prize(node),
            inst.t_max(),
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance_str(&path.display().to_string(), &text)
}

/// Parses instance file contents; `name` is used in error messages.
pub fn parse_instance_str(name: &str, text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(name, 1, "empty file"))?;
    if header.split_whitespace().collect::<Vec<_>>()
        != INSTANCE_HEADER.split_whitespace().collect::<Vec<_>>()
    {
        return Err(Error::parse(
            name,
            line_no,
            format!("bad header; expected `{INSTANCE_HEADER}`"),
        ));
    }

    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut open = Vec::new();
    let mut close = Vec::new();
    let mut prize = Vec::new();
    let mut t_max: Option<i64> = None;

    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(Error::parse(
                name,
                line_no,
                format!("expected 7 columns, found {}", fields.len()),
            ));
        }
        let int = |field: &str, what: &str| -> Result<i64> {
            field
                .parse::<i64>()
                .map_err(|_| Error::parse(name, line_no, format!("non-numeric {what} `{field}`")))
        };
        let custno = int(fields[0], "CUSTNO")?;
        let expected = x.len() as i64 + 1;
        if custno < expected {
            return Err(Error::parse(
                name,
                line_no,
                format!("duplicate CUSTNO {custno}"),
            ));
        }
        if custno != expected {
            return Err(Error::parse(
                name,
                line_no,
                format!("expected CUSTNO {expected}, found {custno}"),
            ));
        }
        x.push(int(fields[1], "XCOORD")?);
        y.push(int(fields[2], "YCOORD")?);
        open.push(int(fields[3], "TW_LOW")?);
        close.push(int(fields[4], "TW_HIGH")?);
        let p: Centi = parse_centi(fields[5]).ok_or_else(|| {
            Error::parse(name, line_no, format!("non-numeric PRIZE `{}`", fields[5]))
        })?;
        prize.push(p);
        let t = int(fields[6], "MAX_T")?;
        match t_max {
            None => t_max = Some(t),
            Some(prev) if prev != t => {
                return Err(Error::parse(
                    name,
                    line_no,
                    format!("MAX_T {t} differs from {prev} on earlier rows"),
                ));
            }
            _ => {}
        }
    }

    let t_max = t_max.ok_or_else(|| Error::parse(name, 2, "no node rows"))?;
    if x.len() < 2 {
        return Err(Error::parse(name, 2, "need at least 2 nodes"));
    }
    Instance::from_parts(x, y, open, close, prize, t_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, GenParams};

    /// The four-node worked example as a file.
    pub(crate) const SAMPLE_FILE: &str = "\
CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T
1 47 24 0 285 0.0 256
2 38 15 102 198 0.19 256
3 53 49 9 52 0.38 256
4 116 23 30 137 1.0 256
";

    #[test]
    fn parses_sample_file() {
        let inst = parse_instance_str("sample", SAMPLE_FILE).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.t_max(), 256);
        assert_eq!(inst.prize(2), Centi(19));
        assert_eq!(inst.prize(4), Centi(100));
        assert_eq!(inst.open(2), 102);
        assert_eq!(inst.close(3), 52);
        assert_eq!(inst.dist(1, 4), 69);
    }

    #[test]
    fn roundtrip_preserves_instance() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.txt");
        let inst = generate_instance(&GenParams::new(20, 60), 7).unwrap();
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn missing_column_is_a_parse_error() {
        let text = "\
CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T
1 47 24 0 285 0.0 256
2 38 15 102 198 256
";
        let err = parse_instance_str("bad", text).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_custno_names_line() {
        let text = "\
CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T
1 47 24 0 285 0.0 256
2 38 15 102 198 0.19 256
2 53 49 9 52 0.38 256
";
        let err = parse_instance_str("bad", text).unwrap_err();
        match err {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 4);
                assert!(msg.contains("duplicate CUSTNO"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_numeric_field_is_rejected() {
        let text = "\
CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T
1 47 xx 0 285 0.0 256
2 38 15 102 198 0.19 256
";
        assert!(matches!(
            parse_instance_str("bad", text),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn missing_header_is_rejected() {
        let text = "1 47 24 0 285 0.0 256\n";
        assert!(matches!(
            parse_instance_str("bad", text),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn inconsistent_budget_is_rejected() {
        let text = "\
CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T
1 47 24 0 285 0.0 256
2 38 15 102 198 0.19 255
";
        assert!(matches!(
            parse_instance_str("bad", text),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
