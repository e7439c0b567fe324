//! Dense exact linear algebra over prime fields.
//!
//! Every morphism of the finite-dimensional cosmos ends up as an [`FpMatrix`]:
//! a row-major table of residues in `[0, p)`. Row reduction pivots on the
//! leftmost nonzero column and the topmost candidate row, so every basis
//! derived from it (kernels, cokernels, solutions) is reproducible bit for bit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{shape, Error, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp(u32);

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=(1 << 31)).contains(&p) {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p as u64 {
            if (p as u64).is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Fp(p))
    }

    pub fn p(self) -> u32 {
        self.0
    }

    /// reduce an arbitrary signed integer into `[0, p)`
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// `(-1)^n` as a residue
    pub fn sign(self, n: i64) -> u32 {
        if n.rem_euclid(2) == 0 {
            1
        } else {
            self.0 - 1
        }
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// multiplicative inverse; `a` must be nonzero
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, self.0 as u64 - 2)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0)
    }
}

/// A dense matrix over a prime field, stored row by row.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    fp: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix<{}>{}x{}[", self.fp, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn new(fp: Fp, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(shape(
                "FpMatrix::new",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        if let Some(&bad) = data.iter().find(|&&e| e >= fp.p()) {
            return Err(Error::EntryOutOfRange {
                value: bad,
                modulus: fp.p(),
            });
        }
        Ok(Self {
            fp,
            rows,
            cols,
            data,
        })
    }

    /// build from signed rows, reducing every entry mod p
    pub fn from_rows(fp: Fp, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(shape("FpMatrix::from_rows", "ragged rows"));
        }
        let data = rows.iter().flatten().map(|&x| fp.reduce(x)).collect();
        Ok(Self {
            fp,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(fp: Fp, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % fp.p());
            }
        }
        Self {
            fp,
            rows,
            cols,
            data,
        }
    }

    /// a single column vector
    pub fn column(fp: Fp, entries: &[u32]) -> Self {
        Self::from_fn(fp, entries.len(), 1, |r, _| entries[r])
    }

    /// build a matrix whose columns are the given vectors, all of length `rows`
    pub fn from_columns(fp: Fp, rows: usize, columns: &[Vec<u32>]) -> Self {
        Self::from_fn(fp, rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn zeros(fp: Fp, rows: usize, cols: usize) -> Self {
        Self {
            fp,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(fp: Fp, n: usize) -> Self {
        Self::from_fn(fp, n, n, |r, c| u32::from(r == c))
    }

    /// the permutation matrix sending basis vector `i` to `sign_i * e_{perm[i]}`
    pub fn signed_permutation(fp: Fp, perm: &[(usize, u32)]) -> Self {
        let mut m = Self::zeros(fp, perm.len(), perm.len());
        for (i, &(j, s)) in perm.iter().enumerate() {
            m.set(j, i, s);
        }
        m
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.fp.p();
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.fp.add(self.data[i], v % self.fp.p());
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.fp != other.fp {
            return Err(Error::ModulusMismatch(self.fp.p(), other.fp.p()));
        }
        Ok(())
    }

    /// `self · other`
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(shape(
                "mul",
                format!("{}x{} · {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        let p = self.fp.p() as u64;
        let n = other.cols;
        let mut out = vec![0u64; self.rows * n];
        for r in 0..self.rows {
            let acc = &mut out[r * n..(r + 1) * n];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (x, &b) in acc.iter_mut().zip(brow) {
                    if b != 0 {
                        *x = (*x + a * b as u64) % p;
                    }
                }
            }
        }
        Ok(Self {
            fp: self.fp,
            rows: self.rows,
            cols: n,
            data: out.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// apply to a vector
    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(shape(
                "apply",
                format!("{}x{} on a vector of length {}", self.rows, self.cols, v.len()),
            ));
        }
        let p = self.fp.p() as u64;
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for (k, &x) in v.iter().enumerate() {
                    let a = self.data[r * self.cols + k];
                    if a != 0 && x != 0 {
                        acc = (acc + a as u64 * x as u64) % p;
                    }
                }
                acc as u32
            })
            .collect())
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(u32, u32) -> u32) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(shape(
                op,
                format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        Ok(Self {
            fp: self.fp,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let fp = self.fp;
        self.zip_with(other, "add", |a, b| fp.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let fp = self.fp;
        self.zip_with(other, "sub", |a, b| fp.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.scale(self.fp.p() - 1)
    }

    pub fn scale(&self, c: u32) -> Self {
        let fp = self.fp;
        let c = c % fp.p();
        Self {
            fp,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| fp.mul(a, c)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.fp, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Kronecker product: `(a⊗b)[i·rows(b)+k, j·cols(b)+l] = a[i,j]·b[k,l]`
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let fp = self.fp;
        let (br, bc) = (other.rows, other.cols);
        let mut out = Self::zeros(fp, self.rows * br, self.cols * bc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.set(i * br + k, j * bc + l, fp.mul(a, b));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(shape("hstack", format!("{} vs {} rows", self.rows, other.rows)));
        }
        Ok(Self::from_fn(self.fp, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        }))
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(shape("vstack", format!("{} vs {} cols", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            fp: self.fp,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn block_diag(fp: Fp, blocks: &[FpMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(fp, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// copy `block` into `self` with its top-left corner at `(r0, c0)`
    pub fn paste(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Self {
        Self::from_fn(self.fp, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    /// Reduced row echelon form plus the pivot columns in ascending order.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let fp = self.fp;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = fp.inv(m.get(row, col));
            for c in col..m.cols {
                let v = fp.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = fp.sub(m.get(r, c), fp.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of `{v : self·v = 0}`, one per free column in
    /// ascending order.
    pub fn kernel_basis(&self) -> FpMatrix {
        let fp = self.fp;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMatrix::zeros(fp, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, fp.neg(r.get(i, f)));
            }
        }
        k
    }

    /// A surjection `q` out of the codomain whose kernel is exactly the image
    /// of `self`; its rows are the left null space basis.
    pub fn cokernel_projection(&self) -> FpMatrix {
        self.transpose().kernel_basis().transpose()
    }

    /// the columns of `self` at its pivot positions
    pub fn image_basis(&self) -> FpMatrix {
        let (_, pivots) = self.rref();
        Self::from_fn(self.fp, self.rows, pivots.len(), |r, c| self.get(r, pivots[c]))
    }

    /// Two-sided inverse, when square of full rank.
    pub fn is_isomorphism(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        self.solve(&FpMatrix::identity(self.fp, self.rows)).ok().flatten()
    }

    /// Some `x` with `self · x = rhs`, or `None` when inconsistent. Free
    /// variables are set to zero.
    pub fn solve(&self, rhs: &FpMatrix) -> Result<Option<FpMatrix>> {
        self.same_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(shape("solve", format!("{} vs {} rows", self.rows, rhs.rows)));
        }
        let aug = self.hstack(rhs)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = FpMatrix::zeros(self.fp, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    /// A right inverse `s` with `self · s = 1`; exists iff `self` is surjective.
    pub fn right_inverse(&self) -> Option<FpMatrix> {
        self.solve(&FpMatrix::identity(self.fp, self.rows)).ok().flatten()
    }

    /// A left inverse `t` with `t · self = 1`; exists iff `self` is injective.
    pub fn left_inverse(&self) -> Option<FpMatrix> {
        self.transpose().right_inverse().map(|m| m.transpose())
    }
}

/// All vectors of `F_p^n` in lexicographic order; `p^n` must stay under `cap`.
pub fn enumerate_vectors(fp: Fp, n: usize, cap: usize) -> Result<Vec<Vec<u32>>> {
    let p = fp.p() as usize;
    let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(p).filter(|&t| t <= cap));
    let Some(total) = total else {
        return Err(Error::EnumerationCap(format!("{}^{} vectors exceed {}", p, n, cap)));
    };
    Ok((0..total)
        .map(|mut idx| {
            let mut v = vec![0u32; n];
            for slot in v.iter_mut().rev() {
                *slot = (idx % p) as u32;
                idx /= p;
            }
            v
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(Fp::new(4), Err(Error::NotPrime(4)));
        assert_eq!(Fp::new(1), Err(Error::NotPrime(1)));
        assert!(Fp::new(7).is_ok());
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let err = FpMatrix::new(f3(), 1, 2, vec![1, 3]).unwrap_err();
        assert_eq!(err, Error::EntryOutOfRange { value: 3, modulus: 3 });
        assert!(FpMatrix::new(f3(), 2, 2, vec![1, 2, 0]).is_err());
    }

    #[test]
    fn rref_examples() {
        let id = FpMatrix::identity(f2(), 2);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1]));

        let ones = FpMatrix::from_rows(f2(), &[vec![1, 1], vec![1, 1]]).unwrap();
        let expect = FpMatrix::from_rows(f2(), &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(ones.rref(), (expect, vec![0]));

        let z = FpMatrix::zeros(f3(), 3, 2);
        assert_eq!(z.rref(), (z.clone(), vec![]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(FpMatrix::identity(f3(), 4).kernel_basis().cols(), 0);

        // {v : [[1,0],[0,0]] v = 0} over F_2 is {0, e2}, found by listing F_2^2
        let m = FpMatrix::from_rows(f2(), &[vec![1, 0], vec![0, 0]]).unwrap();
        let in_kernel: Vec<Vec<u32>> = enumerate_vectors(f2(), 2, 16)
            .unwrap()
            .into_iter()
            .filter(|v| m.apply(v).unwrap().iter().all(|&x| x == 0))
            .collect();
        assert_eq!(in_kernel, vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(m.kernel_basis(), FpMatrix::column(f2(), &[0, 1]));

        assert_eq!(FpMatrix::zeros(f3(), 1, 2).kernel_basis().cols(), 2);
    }

    #[test]
    fn cokernel_examples() {
        let z = FpMatrix::zeros(f3(), 2, 3);
        assert_eq!(z.cokernel_projection(), FpMatrix::identity(f3(), 2));

        assert_eq!(FpMatrix::identity(f2(), 3).cokernel_projection().rows(), 0);

        let m = FpMatrix::column(f2(), &[1, 0]);
        let q = m.cokernel_projection();
        assert_eq!(q.rows(), 1);
        assert_eq!(q.rank(), 1);
        assert!(q.mul(&m).unwrap().is_zero());
        // exhaustive: q kills exactly {0, e1}
        let killed: Vec<Vec<u32>> = enumerate_vectors(f2(), 2, 16)
            .unwrap()
            .into_iter()
            .filter(|v| q.apply(v).unwrap()[0] == 0)
            .collect();
        assert_eq!(killed, vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn kron_examples() {
        let k = FpMatrix::identity(f3(), 2).kron(&FpMatrix::identity(f3(), 3)).unwrap();
        assert_eq!(k, FpMatrix::identity(f3(), 6));

        let x = FpMatrix::from_rows(f3(), &[vec![1, 2], vec![0, 1]]).unwrap();
        assert!(FpMatrix::zeros(f3(), 2, 1).kron(&x).unwrap().is_zero());

        // entry formula evaluated by hand: a = [[1,1]], b = [[1],[1]]
        let a = FpMatrix::from_rows(f2(), &[vec![1, 1]]).unwrap();
        let b = FpMatrix::from_rows(f2(), &[vec![1], vec![1]]).unwrap();
        let expect = FpMatrix::from_rows(f2(), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(a.kron(&b).unwrap(), expect);

        assert_eq!(
            a.kron(&FpMatrix::identity(f3(), 1)),
            Err(Error::ModulusMismatch(2, 3))
        );
    }

    #[test]
    fn inverse_examples() {
        let id = FpMatrix::identity(f2(), 3);
        assert_eq!(id.is_isomorphism(), Some(id.clone()));

        let u = FpMatrix::from_rows(f2(), &[vec![1, 1], vec![0, 1]]).unwrap();
        let inv = u.is_isomorphism().unwrap();
        assert_eq!(inv, u);
        assert_eq!(u.mul(&inv).unwrap(), FpMatrix::identity(f2(), 2));
        assert_eq!(inv.mul(&u).unwrap(), FpMatrix::identity(f2(), 2));

        assert_eq!(FpMatrix::zeros(f2(), 2, 3).is_isomorphism(), None);
        assert_eq!(FpMatrix::zeros(f2(), 2, 2).is_isomorphism(), None);
    }

    #[test]
    fn solve_and_one_sided_inverses() {
        let a = FpMatrix::from_rows(f3(), &[vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        let s = a.right_inverse().unwrap();
        assert_eq!(a.mul(&s).unwrap(), FpMatrix::identity(f3(), 2));
        let t = a.transpose().left_inverse().unwrap();
        assert_eq!(t.mul(&a.transpose()).unwrap(), FpMatrix::identity(f3(), 2));
        let rhs = FpMatrix::column(f3(), &[1, 1]);
        let x = a.solve(&rhs).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), rhs);
        let singular = FpMatrix::from_rows(f3(), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(singular.solve(&FpMatrix::column(f3(), &[1, 0])).unwrap(), None);
    }

    #[test]
    fn enumeration_respects_cap() {
        assert_eq!(enumerate_vectors(f3(), 2, 100).unwrap().len(), 9);
        assert!(enumerate_vectors(f3(), 10, 100).is_err());
        assert_eq!(enumerate_vectors(f2(), 0, 1).unwrap(), vec![Vec::<u32>::new()]);
    }
}
