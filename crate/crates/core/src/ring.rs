//! Exact linear algebra over residue rings `Z/m`.
//!
//! Row spans are kept in Howell form, the canonical row form for modules
//! over `Z/m`: two matrices span the same row module iff their Howell forms
//! are identical. The algorithm works directly over any modulus, so prime
//! power and composite moduli share one code path.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{egcd, gcd, is_prime, mod_inverse};

/// Largest modulus accepted by the ring routines.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    InvalidModulus(u64),
    DimensionMismatch { expected: usize, found: usize },
    MixedModuli(u64, u64),
    NotPrime(u64),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::InvalidModulus(m) => {
                write!(f, "modulus {m} outside the supported range [2, 2^31]")
            }
            RingError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            RingError::MixedModuli(a, b) => write!(f, "vectors over different moduli {a} and {b}"),
            RingError::NotPrime(m) => write!(f, "modulus {m} is not prime"),
        }
    }
}

impl core::error::Error for RingError {}

fn check_modulus(modulus: u64) -> Result<(), RingError> {
    if (2..=MAX_MODULUS).contains(&modulus) {
        Ok(())
    } else {
        Err(RingError::InvalidModulus(modulus))
    }
}

/// Dense matrix with entries reduced into `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ResidueMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self, RingError> {
        check_modulus(modulus)?;
        Ok(ResidueMatrix { modulus, rows, cols, entries: vec![0; rows * cols] })
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self, RingError> {
        let mut m = Self::zeros(modulus, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Builds a matrix from rows of arbitrary integers, reducing every entry.
    pub fn from_rows<R: AsRef<[u64]>>(modulus: u64, cols: usize, rows: &[R]) -> Result<Self, RingError> {
        let mut m = Self::zeros(modulus, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(RingError::DimensionMismatch { expected: cols, found: r.len() });
            }
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x % modulus);
            }
        }
        Ok(m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.entries[i * self.cols + j] = x % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> ResidueMatrix {
        let mut t = ResidueMatrix {
            modulus: self.modulus,
            rows: self.cols,
            cols: self.rows,
            entries: vec![0; self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// `self · x` for a column vector `x`.
    pub fn apply(&self, x: &[u64]) -> Result<Vec<u64>, RingError> {
        if x.len() != self.cols {
            return Err(RingError::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        let m = self.modulus as u128;
        Ok((0..self.rows)
            .map(|i| {
                let s: u128 = self.row(i).iter().zip(x).map(|(&a, &b)| a as u128 * (b as u128 % m)).sum();
                (s % m) as u64
            })
            .collect())
    }
}

/// A vector over `Z/modulus`, used where the modulus must travel with the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueVector {
    pub modulus: u64,
    pub entries: Vec<u64>,
}

impl ResidueVector {
    pub fn new(modulus: u64, entries: Vec<u64>) -> Self {
        let entries = entries.into_iter().map(|x| x % modulus).collect();
        ResidueVector { modulus, entries }
    }
}

/// Row module in Howell form.
///
/// Pivot entries divide the modulus, entries above a pivot are reduced below
/// it, and for every `k` the rows with pivot column `>= k` span exactly the
/// elements of the module whose first `k` entries vanish.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HowellForm {
    modulus: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl HowellForm {
    /// Canonical form of the module spanned by `rows` (each of length `cols`).
    pub fn span<R: AsRef<[u64]>>(modulus: u64, cols: usize, rows: &[R]) -> Result<Self, RingError> {
        Ok(howell_form(&ResidueMatrix::from_rows(modulus, cols, rows)?))
    }

    pub fn zero(modulus: u64, cols: usize) -> Self {
        HowellForm { modulus, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of nonzero rows.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Additive order of each pivot entry, i.e. `modulus / pivot`.
    pub fn pivot_orders(&self) -> Vec<u64> {
        self.rows.iter().zip(&self.pivots).map(|(r, &c)| self.modulus / r[c]).collect()
    }

    /// Number of elements of the row module.
    pub fn order(&self) -> u128 {
        self.pivot_orders().iter().map(|&o| o as u128).product()
    }

    pub fn to_matrix(&self) -> ResidueMatrix {
        ResidueMatrix::from_rows(self.modulus, self.cols, &self.rows).expect("rows are well formed")
    }

    /// Canonical representative of `v` modulo the row module.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let n = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|x| x % n).collect();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = v[c] / row[c];
            if q != 0 {
                sub_scaled(&mut v, row, q, n);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.cols && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// True if every row of `other` lies in this module.
    pub fn contains_module(&self, other: &HowellForm) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Sum of two modules over the same ring and dimension.
    pub fn join(&self, other: &HowellForm) -> HowellForm {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        HowellForm::span(self.modulus, self.cols, &rows).expect("same shape")
    }

    /// Invariant factors of the module as an abstract abelian group
    /// (trivial factors dropped).
    pub fn invariant_factors(&self) -> Vec<u64> {
        if self.rows.is_empty() {
            return Vec::new();
        }
        // Relations among the rows: the combination kernel plus modulus * I.
        let k = self.rows.len();
        let mut rel: Vec<Vec<i64>> = combination_kernel(self.modulus, self.cols, &self.rows)
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect();
        for i in 0..k {
            let mut r = vec![0i64; k];
            r[i] = self.modulus as i64;
            rel.push(r);
        }
        smith_invariants(&rel).into_iter().filter(|&d| d != 1).collect()
    }
}

fn sub_scaled(v: &mut [u64], row: &[u64], q: u64, n: u64) {
    let q = q as u128 % n as u128;
    for (x, &r) in v.iter_mut().zip(row) {
        let t = (q * r as u128 % n as u128) as u64;
        *x = (*x + n - t) % n;
    }
}

fn lin_comb(a: &[u64], s: i128, b: &[u64], t: i128, n: u64) -> Vec<u64> {
    let n = n as i128;
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((s * x as i128 + t * y as i128).rem_euclid(n)) as u64)
        .collect()
}

fn normalize_pivot(row: &mut [u64], c: usize, n: u64) {
    let a = row[c];
    let g = gcd(a, n);
    if a == g {
        return;
    }
    let (a1, n1) = (a / g, n / g);
    let w0 = if n1 == 1 { 1 } else { mod_inverse(a1, n1).expect("coprime by construction") };
    let mut w = w0;
    while gcd(w, n) != 1 {
        w += n1;
    }
    for x in row.iter_mut() {
        *x = (*x as u128 * w as u128 % n as u128) as u64;
    }
    debug_assert_eq!(row[c], g);
}

/// Howell form of the row module of `m`.
pub fn howell_form(m: &ResidueMatrix) -> HowellForm {
    let n = m.modulus;
    let cols = m.cols;
    let mut work: Vec<Vec<u64>> =
        (0..m.rows).map(|i| m.row(i).to_vec()).filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();

    for c in 0..cols {
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::with_capacity(work.len());
        for row in work.drain(..) {
            if row[c] == 0 {
                rest.push(row);
                continue;
            }
            pivot = Some(match pivot.take() {
                None => row,
                Some(p) => {
                    let (a, b) = (p[c] as i128, row[c] as i128);
                    let (g, s, t) = egcd(a, b);
                    let merged = lin_comb(&p, s, &row, t, n);
                    let cleared = lin_comb(&row, a / g, &p, -(b / g), n);
                    debug_assert_eq!(cleared[c], 0);
                    if cleared.iter().any(|&x| x != 0) {
                        rest.push(cleared);
                    }
                    merged
                }
            });
        }
        work = rest;
        if let Some(mut p) = pivot {
            normalize_pivot(&mut p, c, n);
            let ann = n / p[c];
            let killed: Vec<u64> = p.iter().map(|&x| (x as u128 * ann as u128 % n as u128) as u64).collect();
            if killed.iter().any(|&x| x != 0) {
                work.push(killed);
            }
            rows.push(p);
            pivots.push(c);
        }
    }

    for i in 0..rows.len() {
        let c = pivots[i];
        let g = rows[i][c];
        let (above, below) = rows.split_at_mut(i);
        let pivot_row = &below[0];
        for r in above.iter_mut() {
            let q = r[c] / g;
            if q != 0 {
                sub_scaled(r, pivot_row, q, n);
            }
        }
    }

    HowellForm { modulus: n, cols, rows, pivots }
}

/// Result of [`solve_linear`]: one solution plus generators of the kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

/// Solves `a · x = b` over `Z/modulus`.
pub fn solve_linear(a: &ResidueMatrix, b: &[u64]) -> Result<Option<Solution>, RingError> {
    if b.len() != a.rows {
        return Err(RingError::DimensionMismatch { expected: a.rows, found: b.len() });
    }
    let n = a.modulus;
    let (m, k) = (a.rows, a.cols);
    // Row j of the augmented matrix is (column j of a | e_j).
    let mut aug = ResidueMatrix::zeros(n, k, m + k)?;
    for j in 0..k {
        for i in 0..m {
            aug.set(j, i, a.get(i, j));
        }
        aug.set(j, m + j, 1);
    }
    let form = howell_form(&aug);
    let mut v = vec![0u64; m + k];
    for (i, &x) in b.iter().enumerate() {
        v[i] = x % n;
    }
    let mut kernel = Vec::new();
    for (row, &c) in form.rows.iter().zip(&form.pivots) {
        if c < m {
            let q = v[c] / row[c];
            if q != 0 {
                sub_scaled(&mut v, row, q, n);
            }
        } else {
            kernel.push(row[m..].to_vec());
        }
    }
    if v[..m].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    let particular = v[m..].iter().map(|&x| (n - x) % n).collect();
    Ok(Some(Solution { particular, kernel }))
}

/// Generators of `{ λ : Σ λ_i rows_i = 0 }`.
pub fn combination_kernel<R: AsRef<[u64]>>(modulus: u64, cols: usize, rows: &[R]) -> Vec<Vec<u64>> {
    let m = ResidueMatrix::from_rows(modulus, cols, rows).expect("well formed rows");
    let zero = vec![0u64; cols];
    solve_linear(&m.transpose(), &zero).expect("dimensions agree").expect("zero is solvable").kernel
}

/// `Σ λ_i rows_i`.
pub fn combine<R: AsRef<[u64]>>(modulus: u64, cols: usize, rows: &[R], coeffs: &[u64]) -> Vec<u64> {
    let n = modulus as u128;
    let mut out = vec![0u64; cols];
    for (r, &c) in rows.iter().zip(coeffs) {
        if c % modulus == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(r.as_ref()) {
            *o = ((*o as u128 + c as u128 * x as u128) % n) as u64;
        }
    }
    out
}

/// Generators of the submodule `{ Σ λ_i rows_i : Σ λ_i f(rows_i) = 0 }`
/// for a linear map `f`.
pub fn kernel_submodule<F>(modulus: u64, cols: usize, rows: &[Vec<u64>], f: F) -> Vec<Vec<u64>>
where
    F: Fn(&[u64]) -> Vec<u64>,
{
    if rows.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<u64>> = rows.iter().map(|r| f(r)).collect();
    let dim = images[0].len();
    if dim == 0 {
        return rows.to_vec();
    }
    combination_kernel(modulus, dim, &images)
        .iter()
        .map(|l| combine(modulus, cols, rows, l))
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect()
}

/// Coefficients `λ` with `Σ λ_i rows_i = target`, if any.
pub fn express<R: AsRef<[u64]>>(modulus: u64, rows: &[R], target: &[u64]) -> Option<Vec<u64>> {
    if rows.is_empty() {
        return if target.iter().all(|&x| x % modulus == 0) { Some(Vec::new()) } else { None };
    }
    let m = ResidueMatrix::from_rows(modulus, target.len(), rows).ok()?;
    solve_linear(&m.transpose(), target).ok()?.map(|s| s.particular)
}

/// Linear independence over a prime field.
pub fn independent(vectors: &[ResidueVector]) -> Result<bool, RingError> {
    let Some(first) = vectors.first() else {
        return Ok(true);
    };
    let p = first.modulus;
    if !is_prime(p) {
        return Err(RingError::NotPrime(p));
    }
    let dim = first.entries.len();
    for v in vectors {
        if v.modulus != p {
            return Err(RingError::MixedModuli(p, v.modulus));
        }
        if v.entries.len() != dim {
            return Err(RingError::DimensionMismatch { expected: dim, found: v.entries.len() });
        }
    }
    let rows: Vec<&[u64]> = vectors.iter().map(|v| v.entries.as_slice()).collect();
    Ok(HowellForm::span(p, dim, &rows)?.rank() == vectors.len())
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<u64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, &y) in rest[0][t..].iter_mut().zip(&top[t][t..]) {
                        *x -= q * y;
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for r in a.iter_mut().skip(t) {
                        r[j] -= q * r[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility: fold any entry the pivot does not divide into row t.
                let p = a[t][t];
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        let (top, rest) = a.split_at_mut(i);
                        for (x, &y) in top[t][t..].iter_mut().zip(&rest[0][t..]) {
                            *x += y;
                        }
                    }
                    None => break,
                }
            }
            // Move the smallest nonzero entry of row/column t into the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for r in a.iter_mut() {
                    r.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
        t += 1;
    }
    diag
}
