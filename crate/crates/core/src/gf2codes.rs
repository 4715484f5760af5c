//! GF(2) linear-code core: parity-check matrices, codeword enumeration,
//! cyclic-code construction and the built-in matrices.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default ceiling on the code dimension accepted by [`enumerate_codewords`].
pub const DEFAULT_MAX_K: usize = 26;

/// A dense binary matrix, stored row-major with one byte per entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl BinaryMatrix {
    /// Builds a matrix from explicit rows. All rows must have the same
    /// nonzero length and contain only 0 and 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput)?.as_ref().len();
        if first == 0 {
            return Err(Error::EmptyInput);
        }
        let mut bits = Vec::with_capacity(rows.len() * first);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != first {
                return Err(Error::RaggedRows {
                    line: i + 1,
                    expected: first,
                    found: row.len(),
                });
            }
            for &b in row {
                if b > 1 {
                    return Err(Error::NonBinarySymbol {
                        line: i + 1,
                        symbol: char::from_digit(b as u32 % 36, 36).unwrap_or('?'),
                    });
                }
                bits.push(b);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols: first,
            bits,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.bits[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.bits[i * self.cols + j] = v & 1;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Column indices of the ones in row `i` (the check neighbourhood N(i)).
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().filter(|&&b| b == 1).count()
    }

    pub fn rank(&self) -> usize {
        let words = self.cols.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| pack(self.row(i), words)).collect();
        eliminate(&mut rows, self.cols).len()
    }

    /// Syndrome check `x Hᵀ = 0`.
    pub fn is_codeword(&self, x: &[u8]) -> bool {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).all(|i| {
            self.row(i)
                .iter()
                .zip(x)
                .fold(0u8, |acc, (&h, &b)| acc ^ (h & b))
                == 0
        })
    }

    /// Renders the matrix in the dense text format, one row per line with
    /// no separators.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            for &b in self.row(i) {
                out.push(if b == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Renders the matrix in alist format.
    pub fn render_alist(&self) -> String {
        let cols: Vec<Vec<usize>> = (0..self.cols)
            .map(|j| (0..self.rows).filter(|&i| self.get(i, j) == 1).collect())
            .collect();
        let rows: Vec<Vec<usize>> = (0..self.rows).map(|i| self.row_support(i)).collect();
        let max_c = cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_r = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = format!("{} {}\n{} {}\n", self.cols, self.rows, max_c, max_r);
        let degs = |v: &[Vec<usize>]| {
            v.iter()
                .map(|c| c.len().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        out += &degs(&cols);
        out.push('\n');
        out += &degs(&rows);
        out.push('\n');
        for (list, width) in cols.iter().map(|c| (c, max_c)).chain(rows.iter().map(|r| (r, max_r))) {
            let mut idx: Vec<String> = list.iter().map(|&x| (x + 1).to_string()).collect();
            idx.resize(width, "0".to_string());
            out += &idx.join(" ");
            out.push('\n');
        }
        out
    }

    /// A generator matrix for the null space of `self`, in original
    /// coordinate order. Rows are linearly independent.
    pub fn generator_matrix(&self) -> BinaryMatrix {
        let n = self.cols;
        let words = n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| pack(self.row(i), words)).collect();
        let pivots = eliminate(&mut rows, n);
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut g = BinaryMatrix::zeros(free.len(), n);
        for (r, &f) in free.iter().enumerate() {
            g.set(r, f, 1);
            // Reduced row echelon form: pivot variable p_i = sum of row i over free columns.
            for (i, &p) in pivots.iter().enumerate() {
                if bit(&rows[i], f) {
                    g.set(r, p, 1);
                }
            }
        }
        g
    }

    pub fn params(&self) -> CodeParams {
        let k = self.cols - self.rank();
        CodeParams { n: self.cols, k }
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix({}x{})", self.rows, self.cols)?;
        write!(f, "{}", self.render())
    }
}

fn pack(row: &[u8], words: usize) -> Vec<u64> {
    let mut w = vec![0u64; words];
    for (j, &b) in row.iter().enumerate() {
        if b == 1 {
            w[j / 64] |= 1 << (j % 64);
        }
    }
    w
}

fn bit(w: &[u64], j: usize) -> bool {
    w[j / 64] >> (j % 64) & 1 == 1
}

/// Gauss-Jordan elimination in place; returns pivot columns, and leaves the
/// first `pivots.len()` rows in reduced row echelon form.
fn eliminate(rows: &mut Vec<Vec<u64>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A codeword together with its Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    pub bits: Vec<u8>,
    pub hamming_weight: usize,
}

impl Codeword {
    pub fn new(bits: Vec<u8>) -> Self {
        let hamming_weight = bits.iter().filter(|&&b| b == 1).count();
        Self {
            bits,
            hamming_weight,
        }
    }

    pub fn support(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
}

impl CodeParams {
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Parses a parity-check matrix, auto-detecting dense 0/1 text or alist.
///
/// Alist is assumed when the first non-empty line holds exactly two
/// integers, at least one of them larger than 1.
pub fn parse_parity_matrix(text: &str) -> Result<BinaryMatrix> {
    let first = text.lines().find(|l| !l.trim().is_empty()).ok_or(Error::EmptyInput)?;
    let toks: Vec<&str> = first.split_whitespace().collect();
    let looks_alist = toks.len() == 2
        && toks
            .iter()
            .all(|t| t.chars().all(|c| c.is_ascii_digit()))
        && toks.iter().any(|t| t.parse::<u64>().map_or(true, |v| v > 1));
    if looks_alist {
        parse_alist(text)
    } else {
        parse_dense(text)
    }
}

/// Dense format: one row per line, entries `0`/`1` with optional whitespace.
pub fn parse_dense(text: &str) -> Result<BinaryMatrix> {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut lines = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for c in line.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '0' => row.push(0),
                '1' => row.push(1),
                other => {
                    return Err(Error::NonBinarySymbol {
                        line: ln + 1,
                        symbol: other,
                    })
                }
            }
        }
        rows.push(row);
        lines.push(ln + 1);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let expected = rows[0].len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != expected) {
        return Err(Error::RaggedRows {
            line: lines[i],
            expected,
            found: r.len(),
        });
    }
    BinaryMatrix::from_rows(&rows)
}

/// Alist format: `n m`, max degrees, column degrees, row degrees, then the
/// 1-based row indices of each column and column indices of each row
/// (zero padding allowed).
pub fn parse_alist(text: &str) -> Result<BinaryMatrix> {
    let bad = |m: &str| Error::Alist(m.to_string());
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut ints = |what: &str| -> Result<Vec<usize>> {
        let line = lines.next().ok_or_else(|| bad(&format!("missing {what}")))?;
        line.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad(&format!("bad integer {t:?} in {what}"))))
            .collect()
    };
    let dims = ints("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(bad("first line must be `n m`"));
    };
    if n == 0 || m == 0 {
        return Err(Error::EmptyInput);
    }
    ints("max degrees")?;
    let col_deg = ints("column degrees")?;
    let row_deg = ints("row degrees")?;
    if col_deg.len() != n || row_deg.len() != m {
        return Err(bad("degree list length mismatch"));
    }
    let mut h = BinaryMatrix::zeros(m, n);
    for (j, &d) in col_deg.iter().enumerate() {
        let idx: Vec<usize> = ints("column list")?.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != d {
            return Err(bad(&format!("column {} lists {} entries, degree {}", j + 1, idx.len(), d)));
        }
        for i in idx {
            if i > m {
                return Err(bad(&format!("row index {i} out of range")));
            }
            h.set(i - 1, j, 1);
        }
    }
    // Row lists are redundant; when present they must agree with the columns.
    for (i, &d) in row_deg.iter().enumerate() {
        let Ok(list) = ints("row list") else { break };
        let idx: Vec<usize> = list.into_iter().filter(|&x| x != 0).collect();
        let mut uniq = idx.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if idx.len() != d || uniq.len() != d || idx.iter().any(|&j| j > n || h.get(i, j - 1) != 1) {
            return Err(bad(&format!("row {} list disagrees with column lists", i + 1)));
        }
    }
    Ok(h)
}

/// All codewords of the code with parity-check matrix `h`, including the
/// all-zeros word, in Gray-code order starting from zero.
pub fn enumerate_codewords(h: &BinaryMatrix, max_k: usize) -> Result<Vec<Codeword>> {
    let mut out = Vec::new();
    for_each_codeword(h, max_k, |w| out.push(Codeword::new(w.to_vec())))?;
    Ok(out)
}

/// Hamming-weight histogram of the code, without materializing codewords.
pub fn weight_distribution(h: &BinaryMatrix, max_k: usize) -> Result<BTreeMap<usize, u64>> {
    let mut hist = BTreeMap::new();
    for_each_codeword(h, max_k, |w| {
        *hist.entry(w.iter().filter(|&&b| b == 1).count()).or_insert(0) += 1;
    })?;
    Ok(hist)
}

fn for_each_codeword(h: &BinaryMatrix, max_k: usize, mut f: impl FnMut(&[u8])) -> Result<()> {
    let g = h.generator_matrix();
    let k = g.rows();
    if k > max_k {
        return Err(Error::DimensionTooLarge { k, cap: max_k });
    }
    let n = h.cols();
    let mut word = vec![0u8; n];
    f(&word);
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        for (w, &b) in word.iter_mut().zip(g.row(flip)) {
            *w ^= b;
        }
        f(&word);
    }
    Ok(())
}

/// GF(2) polynomial, coefficient `i` is the coefficient of `x^i`.
fn poly_rem(num: &[u8], den: &[u8]) -> Vec<u8> {
    let dd = den.iter().rposition(|&c| c == 1).expect("nonzero divisor");
    let mut r = num.to_vec();
    for i in (dd..r.len()).rev() {
        if r[i] == 1 {
            for (k, &c) in den[..=dd].iter().enumerate() {
                r[i - dd + k] ^= c;
            }
        }
    }
    r.truncate(dd);
    r
}

/// Systematic parity-check matrix `[A | I]` of the length-`n` cyclic code
/// generated by `poly` (`poly[i]` is the coefficient of `x^i`).
///
/// Column `i < k` carries the message position of `x^(r+i)` and its column
/// of `A` is `x^(r+i) mod g(x)`; the last `r = deg g` columns carry `x^0..x^(r-1)`.
pub fn systematic_from_generator_poly(poly: &[u8], n: usize) -> Result<BinaryMatrix> {
    if poly.iter().any(|&c| c > 1) {
        return Err(Error::InvalidPolynomial("coefficients must be 0 or 1".into()));
    }
    let Some(r) = poly.iter().rposition(|&c| c == 1) else {
        return Err(Error::InvalidPolynomial("zero polynomial".into()));
    };
    if r == 0 || r >= n || poly[0] == 0 {
        return Err(Error::NotAGeneratorPolynomial { n });
    }
    let mut xn1 = vec![0u8; n + 1];
    xn1[0] = 1;
    xn1[n] = 1;
    if poly_rem(&xn1, poly).iter().any(|&c| c == 1) {
        return Err(Error::NotAGeneratorPolynomial { n });
    }
    let k = n - r;
    let mut h = BinaryMatrix::zeros(r, n);
    for i in 0..k {
        let mut mono = vec![0u8; r + i + 1];
        mono[r + i] = 1;
        for (row, &c) in poly_rem(&mono, poly).iter().enumerate() {
            h.set(row, i, c);
        }
    }
    for row in 0..r {
        h.set(row, k + row, 1);
    }
    Ok(h)
}

/// Parses a polynomial written as exponents, e.g. `"6,1,0"` or `"x^6+x+1"`.
pub fn parse_poly(text: &str) -> Result<Vec<u8>> {
    let mut exps = Vec::new();
    let exponent_list = text.contains(',') || !text.contains('x');
    let sep: &[char] = if exponent_list { &[','] } else { &['+'] };
    for term in text.split(sep).map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || Error::InvalidPolynomial(format!("bad term {term:?}"));
        let e = match term {
            _ if exponent_list => term.parse::<usize>().map_err(|_| bad())?,
            "1" => 0,
            "x" => 1,
            t => t.strip_prefix("x^").ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?,
        };
        exps.push(e);
    }
    let deg = *exps.iter().max().ok_or_else(|| Error::InvalidPolynomial("empty".into()))?;
    let mut p = vec![0u8; deg + 1];
    for e in exps {
        p[e] ^= 1;
    }
    Ok(p)
}

pub const BUILTIN_NAMES: [&str; 4] = ["golay24_HGpp", "bch31_21", "bch31_26", "hamming74"];

const GOLAY24_HGPP: [&str; 12] = [
    "011111111111100000000000",
    "111011100010010000000000",
    "110111000101001000000000",
    "101110001011000100000000",
    "111100010110000010000000",
    "111000101101000001000000",
    "110001011011000000100000",
    "100010110111000000010000",
    "100101101110000000001000",
    "101011011100000000000100",
    "110110111000000000000010",
    "101101110001000000000001",
];

const BCH31_21: [&str; 10] = [
    "1000000000110101011110010010100",
    "0100000000011010101111001001010",
    "0010000000001101010111100100101",
    "0001000000110011110101100000110",
    "0000100000011001111010110000011",
    "0000010000111001100011001010101",
    "0000001000101001101111110111110",
    "0000000100010100110111111011111",
    "0000000010111111000101101111011",
    "0000000001101010111100100101001",
];

const BCH31_26: [&str; 5] = [
    "1000010010110011111000110111010",
    "0100001001011001111100011011101",
    "0010010110011111000110111010100",
    "0001001011001111100011011101010",
    "0000100101100111110001101110101",
];

/// One of the built-in parity-check matrices: `golay24_HGpp` (systematic
/// extended Golay [24,12,8]), `bch31_21`, `bch31_26` and `hamming74`.
pub fn builtin(name: &str) -> Result<BinaryMatrix> {
    let rows: &[&str] = match name {
        "golay24_HGpp" => &GOLAY24_HGPP,
        "bch31_21" => &BCH31_21,
        "bch31_26" => &BCH31_26,
        "hamming74" => return Ok(hamming74()),
        _ => return Err(Error::UnknownBuiltin(name.to_string())),
    };
    parse_dense(&rows.join("\n"))
}

/// The [7,4] Hamming parity-check matrix used throughout the tests and docs.
pub fn hamming74() -> BinaryMatrix {
    parse_dense("1101100\n1011010\n0111001").expect("static matrix")
}
