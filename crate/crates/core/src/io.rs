//! Text formats for frames and fusion frames.
//!
//! ```text
//! FRAME <m> <n> <REAL|COMPLEX>
//! <m lines of n entries re:im>
//!
//! FUSION <n> <l> <m>
//! <n blocks of m lines of m entries re:im>
//! ```
//!
//! Entries are written with 17 significant digits so values round-trip
//! exactly. Steiner matrices use the grid format in [`crate::designs`].

use std::fmt::Write as _;

use crate::designs::{load_steiner, SteinerMatrix};
use crate::error::{Error, Result};
use crate::frames::{Field, Frame};
use crate::fusion::{FusionFrame, Projection};
use crate::numerics::{Complex, Matrix, Tolerance};

fn format_entry(z: Complex) -> String {
    // adding 0.0 turns -0.0 into 0.0
    format!("{:.16e}:{:.16e}", z.re + 0.0, z.im + 0.0)
}

fn parse_entry(token: &str) -> Result<Complex> {
    let (re, im) = token
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("entry '{token}' is not of the form re:im")))?;
    let parse = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Parse(format!("bad number '{s}' in entry '{token}'")))
    };
    Ok(Complex::new(parse(re)?, parse(im)?))
}

fn parse_count(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad {what} '{s}'")))
}

fn write_matrix(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_entry(z)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn read_rows<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    rows: usize,
    cols: usize,
) -> Result<Matrix> {
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing matrix row {i}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                tokens.len()
            )));
        }
        for t in tokens {
            data.push(parse_entry(t)?);
        }
    }
    Matrix::new(rows, cols, data)
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty())
}

pub fn save_frame(frame: &Frame) -> String {
    let mut out = format!("FRAME {} {} {}\n", frame.m(), frame.n(), frame.field());
    write_matrix(&mut out, frame.synthesis());
    out
}

pub fn load_frame(text: &str, tol: Tolerance) -> Result<Frame> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty frame file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (m, n, field) = match fields.as_slice() {
        ["FRAME", m, n, f] => {
            let field = match *f {
                "REAL" => Field::Real,
                "COMPLEX" => Field::Complex,
                other => return Err(Error::Parse(format!("unknown field '{other}'"))),
            };
            (
                parse_count(m, "row count")?,
                parse_count(n, "column count")?,
                field,
            )
        }
        _ => {
            return Err(Error::Parse(format!(
                "expected 'FRAME <m> <n> <REAL|COMPLEX>', got '{header}'"
            )))
        }
    };
    let matrix = read_rows(&mut lines, m, n)?;
    if lines.next().is_some() {
        return Err(Error::Parse(format!("more than {m} matrix rows")));
    }
    if field == Field::Real && !matrix.is_real(0.0) {
        return Err(Error::Parse(
            "REAL frame file has non-zero imaginary parts".into(),
        ));
    }
    Frame::new(matrix, field, tol)
}

pub fn save_fusion(ff: &FusionFrame) -> String {
    let mut out = format!("FUSION {} {} {}\n", ff.n(), ff.l(), ff.m());
    for p in ff.projections() {
        write_matrix(&mut out, p.matrix());
    }
    out
}

/// Parses and validates a fusion frame; each block must be a projection of
/// the declared rank.
pub fn load_fusion(text: &str, tol: Tolerance) -> Result<FusionFrame> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty fusion file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, l, m) = match fields.as_slice() {
        ["FUSION", n, l, m] => (
            parse_count(n, "count")?,
            parse_count(l, "rank")?,
            parse_count(m, "dimension")?,
        ),
        _ => {
            return Err(Error::Parse(format!(
                "expected 'FUSION <n> <l> <m>', got '{header}'"
            )))
        }
    };
    let mut projections = Vec::with_capacity(n);
    for j in 0..n {
        let p = Projection::new(read_rows(&mut lines, m, m)?, &tol)?;
        if p.rank() != l {
            return Err(Error::Verification(format!(
                "projection {j} has rank {}, header says {l}",
                p.rank()
            )));
        }
        projections.push(p);
    }
    if lines.next().is_some() {
        return Err(Error::Parse(format!("more than {n} projection blocks")));
    }
    FusionFrame::new(projections, tol)
}

/// Any of the three file kinds, chosen by the header keyword.
#[derive(Clone, Debug)]
pub enum Document {
    Frame(Frame),
    Steiner(SteinerMatrix),
    Fusion(FusionFrame),
}

pub fn load_document(text: &str, tol: Tolerance) -> Result<Document> {
    let keyword = content_lines(text)
        .next()
        .and_then(|l| l.split_whitespace().next())
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    match keyword {
        "FRAME" => load_frame(text, tol).map(Document::Frame),
        "STEINER" => load_steiner(text).map(Document::Steiner),
        "FUSION" => load_fusion(text, tol).map(Document::Fusion),
        other => Err(Error::Parse(format!("unknown file kind '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::curve_frame;
    use crate::fusion::build_plucker_example;
    use crate::harmonic::harmonic_frame;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn frame_round_trip_is_exact() {
        let g = crate::algebra::AbelianGroup::cyclic(7).unwrap();
        let f = harmonic_frame(&g, &[1, 2, 4], tol()).unwrap();
        let text = save_frame(&f);
        assert!(text.starts_with("FRAME 3 7 COMPLEX\n"));
        let back = load_frame(&text, tol()).unwrap();
        assert_eq!(back.synthesis(), f.synthesis());
        assert_eq!(save_frame(&back), text);

        let f = curve_frame(1.3, tol()).unwrap();
        let text = save_frame(&f);
        assert!(text.starts_with("FRAME 3 6 REAL\n"));
        assert_eq!(load_frame(&text, tol()).unwrap().synthesis(), f.synthesis());
    }

    #[test]
    fn fusion_round_trip() {
        let (ff, _) = build_plucker_example(tol()).unwrap();
        let text = save_fusion(&ff);
        assert!(text.starts_with("FUSION 16 2 4\n"));
        let back = load_fusion(&text, tol()).unwrap();
        assert_eq!(back.projections(), ff.projections());
    }

    #[test]
    fn malformed_inputs() {
        let tol = tol();
        assert!(matches!(load_frame("", tol), Err(Error::Parse(_))));
        assert!(matches!(
            load_frame("FRAME 1 2 REAL\n1:0\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_frame("FRAME 1 1 REAL\n1:1\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_frame("FRAME 1 1 QUAT\n1:0\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_frame("FRAME 1 1 REAL\n1\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_frame("FRAME 1 1 REAL\nx:0\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_frame("FRAME 1 1 REAL\n1:0\n1:0\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_document("MATRIX 1 1\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_fusion("FUSION 1 1 2\n1:0 0:0\n", tol),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_fusion("FUSION 1 2 2\n1:0 0:0\n0:0 0:0\n", tol),
            Err(Error::Verification(_))
        ));
    }

    #[test]
    fn document_dispatch() {
        let text = crate::designs::save_steiner(&crate::designs::projective_steiner(2, 2).unwrap());
        assert!(matches!(
            load_document(&text, tol()),
            Ok(Document::Steiner(_))
        ));
        let text = save_frame(&curve_frame(1.0, tol()).unwrap());
        assert!(matches!(
            load_document(&text, tol()),
            Ok(Document::Frame(_))
        ));
    }
}
