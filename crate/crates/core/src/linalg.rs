//! Exact dense linear algebra over the rationals and a small prime field,
//! plus binary-form arithmetic for restrictions to rational curves.
//!
//! Rank and determinant computations over the rationals clear denominators
//! and run fraction-free (Bareiss) elimination on the integer matrix, which
//! keeps intermediate entries as minors of the input instead of letting
//! fractions grow. Kernels are computed by rational Gauss-Jordan.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rat::{rat, Rat};

/// Default prime for the fast finite field. Fits in a machine word with
/// room for elimination growth.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("pfaffian requires a skew-symmetric matrix")]
    NotSkewSymmetric,
    #[error("pfaffian requires even size, got {0}")]
    OddSize(usize),
    #[error("gcd of binary forms requires at least one nonzero input")]
    AllZeroGcd,
}

// ---------------------------------------------------------------------------
// Exact rational matrices
// ---------------------------------------------------------------------------

/// Dense matrix with exact rational entries, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    /// Denominator-cleared integer copy, row by row.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self[(i, j)].denom());
                }
                (0..self.cols)
                    .map(|j| self[(i, j)].numer() * &lcm / self[(i, j)].denom())
                    .collect()
            })
            .collect()
    }

    /// Rank over the rationals via fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        bareiss(&mut self.integer_rows()).0
    }

    /// Determinant via fraction-free elimination on the cleared matrix,
    /// rescaled by the row denominators.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return Rat::one();
        }
        let mut scale = Rat::one();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                lcm = lcm.lcm(self[(i, j)].denom());
            }
            scale *= Rat::new(BigInt::one(), lcm.clone());
            rows.push(
                (0..self.cols)
                    .map(|j| self[(i, j)].numer() * &lcm / self[(i, j)].denom())
                    .collect(),
            );
        }
        let (rank, det, sign) = bareiss(&mut rows);
        if rank < self.rows {
            return Rat::zero();
        }
        Rat::from_integer(det * BigInt::from(sign)) * scale
    }

    /// Basis of the right kernel: `self * v = 0` for every returned `v`,
    /// and the count is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        // Gauss-Jordan to reduced row echelon form.
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let t = &m[(r, j)] * &inv;
                m[(r, j)] = t;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &m[(r, j)] * &f;
                        m[(i, j)] -= t;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); m.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Pfaffian of an even skew-symmetric matrix, by expansion along the
    /// first row. Sizes in this crate stay small.
    pub fn pfaffian(&self) -> Result<Rat, LinalgError> {
        if self.rows != self.cols || !self.is_skew_symmetric() {
            return Err(LinalgError::NotSkewSymmetric);
        }
        if !self.rows.is_multiple_of(2) {
            return Err(LinalgError::OddSize(self.rows));
        }
        fn pf(m: &Mat, live: &[usize]) -> Rat {
            if live.is_empty() {
                return Rat::one();
            }
            let i = live[0];
            let mut acc = Rat::zero();
            for (pos, &j) in live.iter().enumerate().skip(1) {
                if m[(i, j)].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = live[1..]
                    .iter()
                    .copied()
                    .filter(|&x| x != j)
                    .collect();
                let sign = if pos % 2 == 1 { Rat::one() } else { -Rat::one() };
                acc += sign * &m[(i, j)] * pf(m, &rest);
            }
            acc
        }
        let live: Vec<usize> = (0..self.rows).collect();
        Ok(pf(self, &live))
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.a.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Reduction mod p, entry by entry (denominators must be invertible
    /// mod p, which holds for every denominator smaller than p).
    pub fn reduce_mod(&self, p: u64) -> FpMat {
        let entries = self
            .a
            .iter()
            .map(|x| {
                let n = fp_from_bigint(x.numer(), p);
                let d = fp_from_bigint(x.denom(), p);
                assert!(d != 0, "denominator divisible by the prime");
                fp_mul(n, fp_inv(d, p), p)
            })
            .collect();
        FpMat {
            rows: self.rows,
            cols: self.cols,
            p,
            a: entries,
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.a[i * self.cols + j]
    }
}

/// Fraction-free elimination in place. Returns (rank, last pivot, sign):
/// when the matrix is square and nonsingular the last pivot is det up to
/// the recorded row-swap sign.
fn bareiss(rows: &mut [Vec<BigInt>]) -> (usize, BigInt, i32) {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1;
    for col in 0..c {
        let Some(p) = (rank..r).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        if p != rank {
            rows.swap(p, rank);
            sign = -sign;
        }
        for i in rank + 1..r {
            for j in col + 1..c {
                let t = &rows[rank][col] * &rows[i][j] - &rows[i][col] * &rows[rank][j];
                rows[i][j] = t / &prev;
            }
            rows[i][col] = BigInt::zero();
        }
        prev = rows[rank][col].clone();
        rank += 1;
        if rank == r {
            break;
        }
    }
    (rank, prev, sign)
}

// ---------------------------------------------------------------------------
// The prime field
// ---------------------------------------------------------------------------

fn fp_from_bigint(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    let (_, digits) = m.to_u64_digits();
    *digits.first().unwrap_or(&0)
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // Fermat: p is prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mul(acc, base, p);
        }
        base = fp_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Dense matrix over F_p.
#[derive(Debug, Clone)]
pub struct FpMat {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    a: Vec<u64>,
}

impl FpMat {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    /// Rank by plain Gaussian elimination over F_p.
    pub fn rank(&self) -> usize {
        let p = self.p;
        let mut m = self.a.clone();
        let (r, c) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..c {
            let Some(piv) = (rank..r).find(|&i| m[i * c + col] != 0) else {
                continue;
            };
            if piv != rank {
                for j in 0..c {
                    m.swap(piv * c + j, rank * c + j);
                }
            }
            let inv = fp_inv(m[rank * c + col], p);
            for j in col..c {
                m[rank * c + j] = fp_mul(m[rank * c + j], inv, p);
            }
            for i in 0..r {
                if i != rank && m[i * c + col] != 0 {
                    let f = m[i * c + col];
                    for j in col..c {
                        let t = fp_mul(f, m[rank * c + j], p);
                        m[i * c + j] = (m[i * c + j] + p - t) % p;
                    }
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }
}

// ---------------------------------------------------------------------------
// Binary forms
// ---------------------------------------------------------------------------

/// Homogeneous form of fixed degree in two variables (s, t). Coefficient `i`
/// multiplies `s^(d-i) t^i`. The zero form of any degree is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub deg: usize,
    pub coeffs: Vec<Rat>,
}

impl BinaryForm {
    pub fn zero(deg: usize) -> Self {
        BinaryForm {
            deg,
            coeffs: vec![Rat::zero(); deg + 1],
        }
    }

    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm {
            deg: coeffs.len() - 1,
            coeffs,
        }
    }

    /// Linear form `a s + b t`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        BinaryForm::new(vec![a, b])
    }

    pub fn constant(c: Rat) -> Self {
        BinaryForm::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn add(&self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.deg, rhs.deg, "degree mismatch in binary-form sum");
        BinaryForm::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.deg, rhs.deg, "degree mismatch in binary-form difference");
        BinaryForm::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, rhs: &BinaryForm) -> BinaryForm {
        let mut out = vec![Rat::zero(); self.deg + rhs.deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm::new(out)
    }

    pub fn eval(&self, s: &Rat, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..(self.deg - i) {
                term *= s;
            }
            for _ in 0..i {
                term *= t;
            }
            acc += term;
        }
        acc
    }

    pub fn derivative_s(&self) -> BinaryForm {
        if self.deg == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm::new(
            (0..self.deg)
                .map(|i| &self.coeffs[i] * rat((self.deg - i) as i64))
                .collect(),
        )
    }

    pub fn derivative_t(&self) -> BinaryForm {
        if self.deg == 0 {
            return BinaryForm::zero(0);
        }
        BinaryForm::new(
            (1..=self.deg)
                .map(|i| &self.coeffs[i] * rat(i as i64))
                .collect(),
        )
    }

    /// Largest powers of s and t dividing the form.
    fn strip_st(&self) -> (usize, usize, Vec<Rat>) {
        debug_assert!(!self.is_zero());
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let trail = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        // coeff index i carries s^(d-i) t^i: t divides iff coeffs[0] = 0,
        // s divides iff coeffs[d] = 0.
        let t_pow = lead;
        let s_pow = self.deg - trail;
        (s_pow, t_pow, self.coeffs[lead..=trail].to_vec())
    }

    /// Exact division; panics unless `rhs` divides `self`.
    pub fn div_exact(&self, rhs: &BinaryForm) -> BinaryForm {
        assert!(!rhs.is_zero(), "division by the zero form");
        if self.is_zero() {
            assert!(self.deg >= rhs.deg);
            return BinaryForm::zero(self.deg - rhs.deg);
        }
        assert!(self.deg >= rhs.deg, "degree too small for exact division");
        let qd = self.deg - rhs.deg;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); qd + 1];
        let lead_idx = rhs.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let lead = rhs.coeffs[lead_idx].clone();
        // Divide as univariate polynomials in t after factoring the leading
        // s-power out of rhs; exactness is asserted at the end.
        for i in 0..=qd {
            let idx = i + lead_idx;
            let c = &rem[idx] / &lead;
            quot[i] = c.clone();
            if c.is_zero() {
                continue;
            }
            for (j, r) in rhs.coeffs.iter().enumerate().skip(lead_idx) {
                let t = &c * r;
                rem[i + j] -= t;
            }
        }
        assert!(rem.iter().all(Rat::is_zero), "inexact binary-form division");
        BinaryForm::new(quot)
    }

    /// Monic normalisation (first nonzero coefficient becomes 1).
    pub fn monic(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }
}

/// Monic gcd of a list of binary forms via the Euclidean algorithm on
/// dehomogenisations, with the s- and t-divisibility at the boundary handled
/// by stripping monomial factors first.
pub fn gcd_binary(forms: &[BinaryForm]) -> Result<BinaryForm, LinalgError> {
    let nonzero: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(LinalgError::AllZeroGcd);
    }
    let mut s_pow = usize::MAX;
    let mut t_pow = usize::MAX;
    let mut cores: Vec<Vec<Rat>> = Vec::new();
    for f in nonzero {
        let (sp, tp, core) = f.strip_st();
        s_pow = s_pow.min(sp);
        t_pow = t_pow.min(tp);
        cores.push(core);
    }
    // Cores have nonzero constant and leading univariate coefficients, so
    // the homogeneous gcd of the cores is the homogenisation of the
    // univariate gcd (no root at s=0 or t=0 can be lost).
    let mut g = cores[0].clone();
    for core in &cores[1..] {
        g = univariate_gcd(&g, core);
        if g.len() == 1 {
            break;
        }
    }
    let mut out = BinaryForm::zero(s_pow + t_pow + g.len() - 1);
    for (i, c) in g.iter().enumerate() {
        out.coeffs[t_pow + i] = c.clone();
    }
    Ok(out.monic())
}

/// Euclidean gcd of univariate polynomials (coefficient index = degree in t).
fn univariate_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        v
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !(b.len() == 1 && b[0].is_zero()) {
        // a mod b
        let mut r = a.clone();
        let bl = b.len();
        let lead = b[bl - 1].clone();
        while r.len() >= bl && !(r.len() == 1 && r[0].is_zero()) {
            let shift = r.len() - bl;
            let c = r.last().unwrap() / &lead;
            for (j, bc) in b.iter().enumerate() {
                let t = &c * bc;
                r[shift + j] -= t;
            }
            r = trim(r);
            if r.iter().all(Rat::is_zero) {
                r = vec![Rat::zero()];
                break;
            }
        }
        a = b;
        b = trim(r);
        if b.iter().all(Rat::is_zero) {
            b = vec![Rat::zero()];
        }
    }
    let lead = a.last().unwrap().clone();
    if lead.is_zero() {
        a
    } else {
        a.iter().map(|c| c / &lead).collect()
    }
}

/// Resultant of two binary forms (Sylvester determinant); nonzero iff the
/// forms share no projective root.
pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Rat {
    let (m, n) = (f.deg, g.deg);
    if m == 0 || n == 0 {
        // res(const, g) = const^deg(g)
        let (c, d) = if m == 0 {
            (f.coeffs[0].clone(), n)
        } else {
            (g.coeffs[0].clone(), m)
        };
        let mut acc = Rat::one();
        for _ in 0..d {
            acc *= &c;
        }
        return acc;
    }
    let size = m + n;
    let mut s = Mat::zeros(size, size);
    for row in 0..n {
        for (j, c) in f.coeffs.iter().enumerate() {
            s[(row, row + j)] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in g.coeffs.iter().enumerate() {
            s[(n + row, row + j)] = c.clone();
        }
    }
    s.det()
}

// ---------------------------------------------------------------------------
// Matrices of linear forms
// ---------------------------------------------------------------------------

/// Matrix whose entries are homogeneous linear forms in `nvars` variables
/// (the zero form is allowed). Stored as one coefficient vector per entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMatrix {
    pub rows: usize,
    pub cols: usize,
    pub nvars: usize,
    entries: Vec<Vec<Rat>>,
}

impl FormMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        FormMatrix {
            rows,
            cols,
            nvars,
            entries: vec![vec![Rat::zero(); nvars]; rows * cols],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Rat] {
        &self.entries[i * self.cols + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, coeffs: Vec<Rat>) {
        assert_eq!(coeffs.len(), self.nvars);
        self.entries[i * self.cols + j] = coeffs;
    }

    /// Entrywise evaluation at a point.
    pub fn evaluate(&self, point: &[Rat]) -> Mat {
        assert_eq!(point.len(), self.nvars, "point length must match nvars");
        let mut out = Mat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut acc = Rat::zero();
                for (c, x) in self.entry(i, j).iter().zip(point) {
                    if !c.is_zero() {
                        acc += c * x;
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> FormMatrix {
        let mut t = FormMatrix::zeros(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set_entry(j, i, self.entry(i, j).to_vec());
            }
        }
        t
    }

    /// Left multiplication by a scalar matrix.
    pub fn scalar_mul_left(&self, m: &Mat) -> FormMatrix {
        assert_eq!(m.cols, self.rows);
        let mut out = FormMatrix::zeros(m.rows, self.cols, self.nvars);
        for i in 0..m.rows {
            for j in 0..self.cols {
                let mut acc = vec![Rat::zero(); self.nvars];
                for k in 0..self.rows {
                    if m[(i, k)].is_zero() {
                        continue;
                    }
                    for (v, c) in acc.iter_mut().zip(self.entry(k, j)) {
                        *v += &m[(i, k)] * c;
                    }
                }
                out.set_entry(i, j, acc);
            }
        }
        out
    }

    /// For two-variable matrices: the entry (i, j) as a binary linear form.
    pub fn entry_as_binary(&self, i: usize, j: usize) -> BinaryForm {
        assert_eq!(self.nvars, 2, "binary view requires nvars = 2");
        let e = self.entry(i, j);
        BinaryForm::linear(e[0].clone(), e[1].clone())
    }

    /// Substitutes binary forms for the variables, producing a matrix of
    /// binary forms of the common input degree.
    pub fn substitute_binary(&self, forms: &[BinaryForm]) -> BfMat {
        assert_eq!(forms.len(), self.nvars);
        let deg = forms[0].deg;
        assert!(forms.iter().all(|f| f.deg == deg));
        let mut out = BfMat::zeros(self.rows, self.cols, deg);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut acc = BinaryForm::zero(deg);
                for (c, f) in self.entry(i, j).iter().zip(forms) {
                    if !c.is_zero() {
                        acc = acc.add(&f.scale(c));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// Matrix of binary forms of a common degree.
#[derive(Debug, Clone)]
pub struct BfMat {
    pub rows: usize,
    pub cols: usize,
    pub deg: usize,
    entries: Vec<BinaryForm>,
}

impl BfMat {
    pub fn zeros(rows: usize, cols: usize, deg: usize) -> Self {
        BfMat {
            rows,
            cols,
            deg,
            entries: vec![BinaryForm::zero(deg); rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BinaryForm {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: BinaryForm) {
        assert_eq!(f.deg, self.deg);
        self.entries[i * self.cols + j] = f;
    }

    /// Matrix product; entry degrees add.
    pub fn mul(&self, rhs: &BfMat) -> BfMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = BfMat::zeros(self.rows, rhs.cols, self.deg + rhs.deg);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BinaryForm::zero(self.deg + rhs.deg);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Determinant by Laplace expansion; meant for the small square
    /// matrices that arise from monads.
    pub fn det(&self) -> BinaryForm {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        fn det_rec(m: &BfMat, rows: &[usize], cols: &[usize]) -> BinaryForm {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = BinaryForm::zero(m.deg * rows.len());
            for (pos, &c) in cols.iter().enumerate() {
                let e = m.get(rows[0], c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> =
                    cols.iter().copied().filter(|&x| x != c).collect();
                let sub = det_rec(m, &rows[1..], &sub_cols);
                let term = e.mul(&sub);
                acc = if pos % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
        let idx: Vec<usize> = (0..n).collect();
        if n == 0 {
            return BinaryForm::constant(Rat::one());
        }
        det_rec(self, &idx, &idx)
    }

    /// All maximal minors (size = min(rows, cols)).
    pub fn maximal_minors(&self) -> Vec<BinaryForm> {
        let k = self.rows.min(self.cols);
        let (long, is_rows) = if self.rows >= self.cols {
            (self.rows, true)
        } else {
            (self.cols, false)
        };
        let mut minors = Vec::new();
        let mut choice: Vec<usize> = (0..k).collect();
        loop {
            let sub = {
                let mut s = BfMat::zeros(k, k, self.deg);
                for (a, &x) in choice.iter().enumerate() {
                    for b in 0..k {
                        let f = if is_rows {
                            self.get(x, b).clone()
                        } else {
                            self.get(b, x).clone()
                        };
                        s.set(a, b, f);
                    }
                }
                s
            };
            minors.push(sub.det());
            // next k-combination of 0..long
            let mut i = k;
            loop {
                if i == 0 {
                    return minors;
                }
                i -= 1;
                if choice[i] != i + long - k {
                    choice[i] += 1;
                    for j in i + 1..k {
                        choice[j] = choice[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}
