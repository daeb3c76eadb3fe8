//! Steiner matrices: transposed incidence matrices of `2-(v,k,1)` designs.
//!
//! A `(v,k)`-Steiner matrix is an `m x v` `{0,1}` matrix with `k` ones per
//! row, `s = (v-1)/(k-1)` ones per column, and distinct columns meeting in
//! exactly one row, where `m = v(v-1)/(k(k-1))`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algebra::{FieldElement, FiniteField};
use crate::error::{Error, Result};
use crate::numerics::{Complex, Matrix};

/// Upper bound on the number of points of a built-in geometry.
pub const MAX_POINTS: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerMatrix {
    data: Vec<Vec<u8>>,
    v: usize,
    k: usize,
    s: usize,
    m: usize,
}

impl SteinerMatrix {
    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row][col]
    }

    /// Row indices of the ones in column `col`, increasing.
    pub fn column_support(&self, col: usize) -> Vec<usize> {
        (0..self.m).filter(|&r| self.data[r][col] == 1).collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.m, self.v, |i, j| {
            Complex::new(self.data[i][j] as f64, 0.0)
        })
    }
}

/// Checks the Steiner conditions. Failures name the first violated
/// condition with witness indices.
pub fn verify_steiner(data: Vec<Vec<u8>>) -> Result<SteinerMatrix> {
    let rows = data.len();
    let v = data.first().map_or(0, Vec::len);
    if rows == 0 || v == 0 {
        return Err(Error::Verification("empty matrix".into()));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != v {
            return Err(Error::Verification(format!(
                "row {i} has {} entries, expected {v}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|&x| x > 1) {
            return Err(Error::Verification(format!(
                "entry ({i},{j}) is not 0 or 1"
            )));
        }
    }
    let k = data[0].iter().filter(|&&x| x == 1).count();
    if let Some(i) = data
        .iter()
        .position(|r| r.iter().filter(|&&x| x == 1).count() != k)
    {
        return Err(Error::Verification(format!(
            "row {i} does not have k={k} ones (row 0 does)"
        )));
    }
    for a in 0..v {
        for b in a + 1..v {
            let dot = data.iter().filter(|r| r[a] == 1 && r[b] == 1).count();
            if dot != 1 {
                return Err(Error::Verification(format!(
                    "columns {a} and {b} have dot product {dot}"
                )));
            }
        }
    }
    if k < 2 || k > v {
        return Err(Error::Verification(format!(
            "need 2 <= k <= v, got k={k}, v={v}"
        )));
    }
    if !(v - 1).is_multiple_of(k - 1) || !(v * (v - 1)).is_multiple_of(k * (k - 1)) {
        return Err(Error::Verification(format!(
            "(v,k)=({v},{k}) violates the divisibility conditions"
        )));
    }
    let s = (v - 1) / (k - 1);
    let m = v * (v - 1) / (k * (k - 1));
    if let Some(j) = (0..v).find(|&j| data.iter().filter(|r| r[j] == 1).count() != s) {
        return Err(Error::Verification(format!(
            "column {j} does not have s={s} ones"
        )));
    }
    if rows != m {
        return Err(Error::Verification(format!("{rows} rows, expected m={m}")));
    }
    Ok(SteinerMatrix { data, v, k, s, m })
}

fn field_for(q: u64) -> Result<FiniteField> {
    FiniteField::with_order(q)
}

fn encode(q: usize, coords: &[FieldElement]) -> usize {
    coords.iter().fold(0, |acc, &c| acc * q + c as usize)
}

fn decode(q: usize, mut idx: usize, len: usize) -> Vec<FieldElement> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % q) as FieldElement;
        idx /= q;
    }
    out
}

fn incidence(points: usize, blocks: BTreeSet<Vec<usize>>) -> Vec<Vec<u8>> {
    blocks
        .into_iter()
        .map(|b| {
            let mut row = vec![0u8; points];
            b.into_iter().for_each(|p| row[p] = 1);
            row
        })
        .collect()
}

/// Lines of the affine geometry `AG(a, q)`: a `(q^a, q)`-Steiner matrix.
///
/// Points are the vectors of `GF(q)^a` in lexicographic order; rows are the
/// lines ordered by their sorted point lists.
pub fn affine_steiner(q: u64, a: u32) -> Result<SteinerMatrix> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension a must be at least 2, got {a}"
        )));
    }
    let f = field_for(q)?;
    let points = q
        .checked_pow(a)
        .filter(|&v| v <= MAX_POINTS)
        .ok_or_else(|| Error::Guard(format!("AG({a},{q}) has more than {MAX_POINTS} points")))?
        as usize;
    let qs = q as usize;
    let a = a as usize;
    let mut blocks = BTreeSet::new();
    for d_idx in 1..points {
        let dir = decode(qs, d_idx, a);
        // projective representative: first nonzero coordinate equal to 1
        if dir.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        for p_idx in 0..points {
            let base = decode(qs, p_idx, a);
            let mut line: Vec<usize> = f
                .elements()
                .map(|t| {
                    let pt: Vec<FieldElement> = base
                        .iter()
                        .zip(&dir)
                        .map(|(&b, &d)| f.add(b, f.mul(t, d)))
                        .collect();
                    encode(qs, &pt)
                })
                .collect();
            line.sort_unstable();
            blocks.insert(line);
        }
    }
    verify_steiner(incidence(points, blocks))
}

/// Lines of the projective geometry `PG(a, q)`: a
/// `((q^{a+1}-1)/(q-1), q+1)`-Steiner matrix.
///
/// Points are normalised representatives (first nonzero coordinate 1) of
/// `GF(q)^{a+1}` in lexicographic order; rows are the 2-dimensional
/// subspaces ordered by their sorted point lists.
pub fn projective_steiner(q: u64, a: u32) -> Result<SteinerMatrix> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension a must be at least 2, got {a}"
        )));
    }
    let f = field_for(q)?;
    let count = (q.pow(a + 1) - 1) / (q - 1);
    if count > MAX_POINTS {
        return Err(Error::Guard(format!(
            "PG({a},{q}) has more than {MAX_POINTS} points"
        )));
    }
    let qs = q as usize;
    let len = a as usize + 1;
    let reps: Vec<Vec<FieldElement>> = (1..qs.pow(len as u32))
        .map(|i| decode(qs, i, len))
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    let index_of = |v: &[FieldElement]| -> usize {
        let lead = *v.iter().find(|&&c| c != 0).expect("nonzero vector");
        let inv = f.inv(lead).expect("nonzero lead");
        let norm: Vec<FieldElement> = v.iter().map(|&c| f.mul(c, inv)).collect();
        reps.binary_search(&norm)
            .expect("normalised vector is a listed point")
    };
    let mut blocks = BTreeSet::new();
    for (i, u) in reps.iter().enumerate() {
        for w in &reps[i + 1..] {
            let mut line: Vec<usize> = vec![i];
            for t in f.elements() {
                let pt: Vec<FieldElement> = w
                    .iter()
                    .zip(u)
                    .map(|(&wc, &uc)| f.add(wc, f.mul(t, uc)))
                    .collect();
                line.push(index_of(&pt));
            }
            line.sort_unstable();
            line.dedup();
            blocks.insert(line);
        }
    }
    verify_steiner(incidence(reps.len(), blocks))
}

/// Parses the `STEINER <m> <v>` grid format and verifies the result.
pub fn load_steiner(text: &str) -> Result<SteinerMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty Steiner file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (m, v) = match fields.as_slice() {
        ["STEINER", m, v] => (
            m.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad row count '{m}'")))?,
            v.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad column count '{v}'")))?,
        ),
        _ => {
            return Err(Error::Parse(format!(
                "expected 'STEINER <m> <v>', got '{header}'"
            )))
        }
    };
    let mut data = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        if i >= m {
            return Err(Error::Parse(format!("more than {m} grid rows")));
        }
        let row: Vec<u8> = line
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!(
                    "row {i}: unexpected character '{other}'"
                ))),
            })
            .collect::<Result<_>>()?;
        if row.len() != v {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {v}",
                row.len()
            )));
        }
        data.push(row);
    }
    if data.len() != m {
        return Err(Error::Parse(format!(
            "expected {m} grid rows, found {}",
            data.len()
        )));
    }
    verify_steiner(data)
}

pub fn save_steiner(s: &SteinerMatrix) -> String {
    let mut out = format!("STEINER {} {}\n", s.m, s.v);
    for row in &s.data {
        for &x in row {
            out.push(if x == 1 { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

impl std::fmt::Display for SteinerMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        let _ = write!(
            s,
            "({},{})-Steiner matrix, s={}, m={}",
            self.v, self.k, self.s, self.m
        );
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano_rows() -> Vec<Vec<u8>> {
        // lines {0,1,2},{0,3,4},{0,5,6},{1,3,5},{1,4,6},{2,3,6},{2,4,5}
        let lines = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        lines
            .iter()
            .map(|l| {
                let mut r = vec![0u8; 7];
                l.iter().for_each(|&p| r[p] = 1);
                r
            })
            .collect()
    }

    #[test]
    fn verify_examples() {
        let fano = verify_steiner(fano_rows()).unwrap();
        assert_eq!((fano.v(), fano.k(), fano.s(), fano.m()), (7, 3, 3, 7));
        let ag22: Vec<Vec<u8>> = vec![
            vec![1, 1, 0, 0],
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
        ];
        let s = verify_steiner(ag22).unwrap();
        assert_eq!((s.v(), s.k(), s.s(), s.m()), (4, 2, 3, 6));
        let err = verify_steiner(vec![vec![1, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(
            err,
            Error::Verification("columns 0 and 1 have dot product 2".into())
        );
        assert!(verify_steiner(vec![vec![1, 2]]).is_err());
        assert!(verify_steiner(vec![]).is_err());
    }

    #[test]
    fn affine_geometries() {
        for (q, a, rows, v, s) in [
            (2, 2, 6, 4, 3),
            (3, 2, 12, 9, 4),
            (2, 3, 28, 8, 7),
            (4, 2, 20, 16, 5),
            (2, 4, 120, 16, 15),
        ] {
            let st = affine_steiner(q, a).unwrap();
            assert_eq!((st.m(), st.v(), st.k(), st.s()), (rows, v, q as usize, s));
            assert_eq!(st.m() * st.k(), st.v() * st.s());
        }
        assert!(affine_steiner(6, 2).is_err());
        assert!(affine_steiner(2, 1).is_err());
        assert!(matches!(affine_steiner(2, 9), Err(Error::Guard(_))));
    }

    #[test]
    fn projective_geometries() {
        for (q, a, rows, v, s) in [
            (2, 2, 7, 7, 3),
            (3, 2, 13, 13, 4),
            (2, 3, 35, 15, 7),
            (4, 2, 21, 21, 5),
        ] {
            let st = projective_steiner(q, a).unwrap();
            assert_eq!(
                (st.m(), st.v(), st.k(), st.s()),
                (rows, v, q as usize + 1, s)
            );
            assert_eq!(st.m() * st.k(), st.v() * st.s());
        }
        assert!(matches!(projective_steiner(2, 8), Err(Error::Guard(_))));
    }

    #[test]
    fn rows_meet_at_most_once() {
        for st in [
            affine_steiner(3, 2).unwrap(),
            projective_steiner(2, 3).unwrap(),
            affine_steiner(2, 3).unwrap(),
        ] {
            for i in 0..st.m() {
                for j in i + 1..st.m() {
                    let common = (0..st.v())
                        .filter(|&c| st.get(i, c) == 1 && st.get(j, c) == 1)
                        .count();
                    assert!(common <= 1);
                }
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let fano = projective_steiner(2, 2).unwrap();
        let text = save_steiner(&fano);
        assert!(text.starts_with("STEINER 7 7\n"));
        assert_eq!(load_steiner(&text).unwrap(), fano);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(load_steiner(""), Err(Error::Parse(_))));
        assert!(matches!(
            load_steiner("STEINER 2 2\n11\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_steiner("STEINER 1 2\n1x\n"),
            Err(Error::Parse(_))
        ));
        // a swapped pair of entries breaks the column condition
        let mut text = save_steiner(&projective_steiner(2, 2).unwrap());
        text = text.replacen("1110000", "1100001", 1);
        match load_steiner(&text) {
            Err(Error::Verification(msg)) => assert!(msg.contains("columns"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
