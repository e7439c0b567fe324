//! Bounded cochain complexes of finite-dimensional `F_p`-spaces.
//!
//! Differentials raise degree by one. The tensor product is the total
//! complex with the Koszul sign `d(x⊗y) = dx⊗y + (−1)^i x⊗dy`; the internal
//! hom is the total hom complex `Hom^n = ∏_i [A^i, B^{i+n}]` with
//! `d(h)^i = d_B h^i − (−1)^n h^{i+1} d_A`. Within a degree the summands are
//! ordered by the degree of the left factor (tensor) or the source degree
//! (hom), each block in the [`FinVect`](super::FinVect) basis order.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Cosmos, CosmosObject, DualPairWitness};
use crate::error::{shape, Error, Result};
use crate::linalg::{Fp, FpMatrix};

pub const DEFAULT_DEGREE_CAP: (i32, i32) = (-8, 8);

/// A bounded cochain complex, stored trimmed: the first and last terms are
/// nonzero, and the zero complex has `lo = 0` and no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainComplex {
    fp: Fp,
    lo: i32,
    terms: Vec<usize>,
    /// `diffs[k] : terms[k] → terms[k+1]`
    diffs: Vec<FpMatrix>,
}

impl std::fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChainComplex[{}; degrees {}..={}; dims {:?}]", self.fp, self.lo, self.hi(), self.terms)
    }
}

impl ChainComplex {
    /// Builds a complex with terms in degrees `lo, lo+1, …` and checks `d∘d = 0`.
    pub fn new(fp: Fp, lo: i32, terms: Vec<usize>, diffs: Vec<FpMatrix>) -> Result<Self> {
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(shape(
                "chain complex",
                format!("{} terms need {} differentials, got {}", terms.len(), terms.len().saturating_sub(1), diffs.len()),
            ));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.fp() != fp {
                return Err(Error::ModulusMismatch(d.fp().p(), fp.p()));
            }
            if d.cols() != terms[k] || d.rows() != terms[k + 1] {
                return Err(shape(
                    "chain complex",
                    format!("differential at degree {} is {}x{}, expected {}x{}", lo + k as i32, d.rows(), d.cols(), terms[k + 1], terms[k]),
                ));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].mul(&diffs[k - 1])?.is_zero() {
                return Err(Error::NotAComplex(lo + k as i32 - 1));
            }
        }
        Ok(Self { fp, lo, terms, diffs }.trimmed())
    }

    fn trimmed(mut self) -> Self {
        let first = self.terms.iter().position(|&t| t > 0);
        let Some(first) = first else {
            return Self::zero(self.fp);
        };
        let last = self.terms.iter().rposition(|&t| t > 0).unwrap_or(first);
        self.terms = self.terms[first..=last].to_vec();
        self.diffs = self.diffs[first..last].to_vec();
        self.lo += first as i32;
        self
    }

    pub fn zero(fp: Fp) -> Self {
        Self {
            fp,
            lo: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `X` concentrated in degree 0.
    pub fn sphere(fp: Fp, x: CosmosObject) -> Self {
        Self {
            fp,
            lo: 0,
            terms: vec![x.dim],
            diffs: Vec::new(),
        }
        .trimmed()
    }

    /// `X --id--> X` in degrees −1 and 0.
    pub fn disk(fp: Fp, x: CosmosObject) -> Self {
        Self {
            fp,
            lo: -1,
            terms: vec![x.dim, x.dim],
            diffs: vec![FpMatrix::identity(fp, x.dim)],
        }
        .trimmed()
    }

    /// `C[n]^k = C^{k+n}` with differential `(−1)^n d`.
    pub fn shift(&self, n: i32) -> Self {
        let s = self.fp.sign(i64::from(n));
        Self {
            fp: self.fp,
            lo: if self.terms.is_empty() { 0 } else { self.lo - n },
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(s)).collect(),
        }
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Top degree; `lo − 1` for the zero complex.
    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, n: i32) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.terms[(n - self.lo) as usize]
        }
    }

    pub fn term(&self, n: i32) -> CosmosObject {
        CosmosObject { dim: self.dim(n) }
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().sum()
    }

    /// `d^n : C^n → C^{n+1}`
    pub fn d(&self, n: i32) -> FpMatrix {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            FpMatrix::zeros(self.fp, self.dim(n + 1), self.dim(n))
        }
    }

    /// The cocycles `Z^n = ker d^n` with their inclusion.
    pub fn cycles(&self, n: i32) -> FpMatrix {
        self.d(n).kernel_basis()
    }

    /// `dim H^n`.
    pub fn cohomology_dim(&self, n: i32) -> usize {
        let z = self.dim(n) - self.d(n).rank();
        z - self.d(n - 1).rank()
    }
}

/// A degree-0 chain map. Components are stored exactly on the degrees where
/// both source and target are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    src: ChainComplex,
    dst: ChainComplex,
    components: BTreeMap<i32, FpMatrix>,
}

impl ChainMap {
    /// Checks shapes and `d f = f d` in every degree. Missing components are zero.
    pub fn new(src: ChainComplex, dst: ChainComplex, mut components: BTreeMap<i32, FpMatrix>) -> Result<Self> {
        if src.fp != dst.fp {
            return Err(Error::ModulusMismatch(src.fp.p(), dst.fp.p()));
        }
        components.retain(|n, _| src.dim(*n) > 0 && dst.dim(*n) > 0);
        for (n, f) in &components {
            if f.fp() != src.fp {
                return Err(Error::ModulusMismatch(f.fp().p(), src.fp.p()));
            }
            if f.rows() != dst.dim(*n) || f.cols() != src.dim(*n) {
                return Err(shape(
                    "chain map",
                    format!("component at degree {n} is {}x{}, expected {}x{}", f.rows(), f.cols(), dst.dim(*n), src.dim(*n)),
                ));
            }
        }
        let map = Self { src, dst, components };
        let (lo, hi) = (map.src.lo.min(map.dst.lo), map.src.hi().max(map.dst.hi()));
        for n in lo..=hi {
            let lhs = map.dst.d(n).mul(&map.at(n))?;
            let rhs = map.at(n + 1).mul(&map.src.d(n))?;
            if lhs != rhs {
                return Err(Error::NotAChainMap(n));
            }
        }
        Ok(map)
    }

    fn from_fn(src: &ChainComplex, dst: &ChainComplex, mut f: impl FnMut(i32) -> Result<FpMatrix>) -> Result<Self> {
        let mut components = BTreeMap::new();
        for n in src.degrees() {
            if dst.dim(n) > 0 && src.dim(n) > 0 {
                components.insert(n, f(n)?);
            }
        }
        Ok(Self {
            src: src.clone(),
            dst: dst.clone(),
            components,
        })
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }

    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }

    /// The component in degree `n` (a zero matrix where none is stored).
    pub fn at(&self, n: i32) -> FpMatrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(self.src.fp, self.dst.dim(n), self.src.dim(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(FpMatrix::is_zero)
    }
}

/// Summands `(i, j, offset, dim)` of `(A⊗B)^n` with `i + j = n`.
fn tensor_blocks(a: &ChainComplex, b: &ChainComplex, n: i32) -> Vec<(i32, i32, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for i in a.degrees() {
        let j = n - i;
        let dim = a.dim(i) * b.dim(j);
        if dim > 0 {
            out.push((i, j, offset, dim));
            offset += dim;
        }
    }
    out
}

fn tensor_offset(a: &ChainComplex, b: &ChainComplex, n: i32, i: i32) -> Option<usize> {
    tensor_blocks(a, b, n)
        .into_iter()
        .find(|blk| blk.0 == i)
        .map(|blk| blk.2)
}

/// Factors `(i, offset, dim)` of `Hom(A,B)^n = ∏_i [A^i, B^{i+n}]`.
fn hom_blocks(a: &ChainComplex, b: &ChainComplex, n: i32) -> Vec<(i32, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for i in a.degrees() {
        let dim = a.dim(i) * b.dim(i + n);
        if dim > 0 {
            out.push((i, offset, dim));
            offset += dim;
        }
    }
    out
}

fn hom_offset(a: &ChainComplex, b: &ChainComplex, n: i32, i: i32) -> Option<usize> {
    hom_blocks(a, b, n).into_iter().find(|blk| blk.0 == i).map(|blk| blk.1)
}

/// Bounded complexes with the total tensor product and total hom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCosmos {
    fp: Fp,
    cap: (i32, i32),
}

impl ChainCosmos {
    pub fn new(fp: Fp) -> Self {
        Self {
            fp,
            cap: DEFAULT_DEGREE_CAP,
        }
    }

    pub fn with_cap(fp: Fp, lo: i32, hi: i32) -> Self {
        Self { fp, cap: (lo, hi) }
    }

    pub fn cap(&self) -> (i32, i32) {
        self.cap
    }

    pub fn sphere(&self, x: CosmosObject) -> ChainComplex {
        ChainComplex::sphere(self.fp, x)
    }

    pub fn disk(&self, x: CosmosObject) -> ChainComplex {
        ChainComplex::disk(self.fp, x)
    }

    fn check_cap(&self, c: ChainComplex) -> Result<ChainComplex> {
        if !c.is_zero() && (c.lo < self.cap.0 || c.hi() > self.cap.1) {
            return Err(Error::DegreeCap {
                lo: c.lo,
                hi: c.hi(),
                cap_lo: self.cap.0,
                cap_hi: self.cap.1,
            });
        }
        Ok(c)
    }

    fn check_fp(&self, c: &ChainComplex) -> Result<()> {
        if c.fp != self.fp {
            return Err(Error::ModulusMismatch(c.fp.p(), self.fp.p()));
        }
        Ok(())
    }

    pub fn total_tensor(&self, a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
        self.check_fp(a)?;
        self.check_fp(b)?;
        if a.is_zero() || b.is_zero() {
            return Ok(ChainComplex::zero(self.fp));
        }
        let (lo, hi) = (a.lo + b.lo, a.hi() + b.hi());
        let terms: Vec<usize> = (lo..=hi)
            .map(|n| tensor_blocks(a, b, n).iter().map(|blk| blk.3).sum())
            .collect();
        let mut diffs = Vec::new();
        for n in lo..hi {
            let rows = terms[(n + 1 - lo) as usize];
            let cols = terms[(n - lo) as usize];
            let mut d = FpMatrix::zeros(self.fp, rows, cols);
            for (i, j, off, _) in tensor_blocks(a, b, n) {
                if let Some(t) = tensor_offset(a, b, n + 1, i + 1) {
                    d.paste(t, off, &a.d(i).kron(&FpMatrix::identity(self.fp, b.dim(j)))?);
                }
                if let Some(t) = tensor_offset(a, b, n + 1, i) {
                    let blk = FpMatrix::identity(self.fp, a.dim(i)).kron(&b.d(j))?;
                    d.paste(t, off, &blk.scale(self.fp.sign(i64::from(i))));
                }
            }
            diffs.push(d);
        }
        self.check_cap(ChainComplex::new(self.fp, lo, terms, diffs)?)
    }

    pub fn total_hom(&self, a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
        self.check_fp(a)?;
        self.check_fp(b)?;
        if a.is_zero() || b.is_zero() {
            return Ok(ChainComplex::zero(self.fp));
        }
        let (lo, hi) = (b.lo - a.hi(), b.hi() - a.lo);
        if lo < self.cap.0 || hi > self.cap.1 {
            // only the nonzero part counts against the cap
            let support: Vec<i32> = (lo..=hi).filter(|&n| !hom_blocks(a, b, n).is_empty()).collect();
            if let (Some(&l), Some(&h)) = (support.first(), support.last()) {
                if l < self.cap.0 || h > self.cap.1 {
                    return Err(Error::DegreeCap {
                        lo: l,
                        hi: h,
                        cap_lo: self.cap.0,
                        cap_hi: self.cap.1,
                    });
                }
            }
        }
        let terms: Vec<usize> = (lo..=hi)
            .map(|n| hom_blocks(a, b, n).iter().map(|blk| blk.2).sum())
            .collect();
        let mut diffs = Vec::new();
        for n in lo..hi {
            let rows = terms[(n + 1 - lo) as usize];
            let cols = terms[(n - lo) as usize];
            let mut d = FpMatrix::zeros(self.fp, rows, cols);
            let coeff = self.fp.neg(self.fp.sign(i64::from(n)));
            for (i, t, _) in hom_blocks(a, b, n + 1) {
                // d_B ∘ h^i, from factor i of Hom^n
                if let Some(s) = hom_offset(a, b, n, i) {
                    d.paste(t, s, &b.d(i + n).kron(&FpMatrix::identity(self.fp, a.dim(i)))?);
                }
                // −(−1)^n h^{i+1} ∘ d_A, from factor i+1 of Hom^n
                if let Some(s) = hom_offset(a, b, n, i + 1) {
                    let blk = FpMatrix::identity(self.fp, b.dim(i + n + 1)).kron(&a.d(i).transpose())?;
                    d.paste(t, s, &blk.scale(coeff));
                }
            }
            diffs.push(d);
        }
        ChainComplex::new(self.fp, lo, terms, diffs)
    }

    /// The dual `Hom(C, S(I))` with its evaluation and coevaluation.
    pub fn chain_dual_pair(&self, c: &ChainComplex) -> Result<DualPairWitness<ChainCosmos>> {
        let unit = self.unit();
        let dual = self.total_hom(c, &unit)?;
        let xy = self.total_tensor(c, &dual)?;
        let yx = self.total_tensor(&dual, c)?;
        let fp = self.fp;

        // ε(x⊗φ) = (−1)^i φ(x) for x ∈ C^i, φ ∈ [C^i, I]
        let mut eps = FpMatrix::zeros(fp, 1, xy.dim(0));
        for (i, _, off, _) in tensor_blocks(c, &dual, 0) {
            let s = fp.sign(i64::from(i));
            let dim = c.dim(i);
            for k in 0..dim {
                eps.set(0, off + k * dim + k, s);
            }
        }
        // η(1) = Σ_i (−1)^i Σ_k e*_{i,k} ⊗ e_{i,k}
        let mut eta = FpMatrix::zeros(fp, yx.dim(0), 1);
        for (j, i, off, _) in tensor_blocks(&dual, c, 0) {
            debug_assert_eq!(j, -i);
            let s = fp.sign(i64::from(i));
            let dim = c.dim(i);
            for k in 0..dim {
                eta.set(off + k * dim + k, 0, s);
            }
        }
        let mut ec = BTreeMap::new();
        ec.insert(0, eps);
        let mut hc = BTreeMap::new();
        hc.insert(0, eta);
        let w = DualPairWitness {
            x: c.clone(),
            y: dual.clone(),
            eta: ChainMap::new(unit.clone(), yx, hc)?,
            epsilon: ChainMap::new(xy, unit, ec)?,
        };
        w.verify(self)
            .map_err(|e| Error::Verification(format!("internal dual pair check on {c:?}: {e}")))?;
        Ok(w)
    }

    /// `Z⁰ = Hom(S(I), −)`: the degree-0 cocycles and the induced map.
    pub fn z0(&self, c: &ChainComplex) -> (CosmosObject, FpMatrix) {
        let k = c.cycles(0);
        (CosmosObject { dim: k.cols() }, k)
    }

    /// `Z⁰(f)` restricted to cocycles, in the bases given by [`Self::z0`].
    pub fn z0_mor(&self, f: &ChainMap) -> Result<FpMatrix> {
        let (_, ks) = self.z0(f.src());
        let (_, kt) = self.z0(f.dst());
        let image = f.at(0).mul(&ks)?;
        kt.solve(&image)?
            .ok_or_else(|| Error::Verification("chain map does not preserve cocycles".into()))
    }

    /// A random complex with the given term dimensions, built so that
    /// `d^{n+1}` factors through the cokernel of `d^n`.
    pub fn random_complex<R: Rng>(&self, rng: &mut R, lo: i32, terms: &[usize]) -> Result<ChainComplex> {
        let p = self.fp.p();
        let mut diffs: Vec<FpMatrix> = Vec::new();
        for k in 0..terms.len().saturating_sub(1) {
            let (src, dst) = (terms[k], terms[k + 1]);
            let d = match diffs.last() {
                None => FpMatrix::from_fn(self.fp, dst, src, |_, _| rng.gen_range(0..p)),
                Some(prev) => {
                    let q = prev.cokernel_projection();
                    let r = FpMatrix::from_fn(self.fp, dst, q.rows(), |_, _| rng.gen_range(0..p));
                    r.mul(&q)?
                }
            };
            diffs.push(d);
        }
        ChainComplex::new(self.fp, lo, terms.to_vec(), diffs)
    }

    /// A random chain map, obtained by projecting a random graded map onto
    /// the space of chain maps (solved exactly).
    pub fn random_map<R: Rng>(&self, rng: &mut R, a: &ChainComplex, b: &ChainComplex) -> Result<ChainMap> {
        let basis = self.chain_map_basis(a, b)?;
        let p = self.fp.p();
        let mut acc = self.zero(a, b);
        for m in &basis {
            acc = self.add(&acc, &self.scale(rng.gen_range(0..p), m))?;
        }
        Ok(acc)
    }

    /// A basis of the space of chain maps `A → B`, as the cocycles of
    /// `Hom(A,B)` in degree 0.
    pub fn chain_map_basis(&self, a: &ChainComplex, b: &ChainComplex) -> Result<Vec<ChainMap>> {
        let h = self.total_hom(a, b)?;
        let k = h.cycles(0);
        (0..k.cols())
            .map(|c| self.map_from_hom_element(a, b, &k.col(c)))
            .collect()
    }

    /// Offset of the block `A^i ⊗ B^{n-i}` inside `(A⊗B)^n`.
    pub fn tensor_block_offset(&self, a: &ChainComplex, b: &ChainComplex, n: i32, i: i32) -> Option<usize> {
        tensor_offset(a, b, n, i)
    }

    /// Offset of the factor `[A^i, B^{i+n}]` inside `Hom(A,B)^n`.
    pub fn hom_block_offset(&self, a: &ChainComplex, b: &ChainComplex, n: i32, i: i32) -> Option<usize> {
        hom_offset(a, b, n, i)
    }

    /// The chain map with the given degree-0 element of `Hom(A,B)`.
    pub fn map_from_hom_element(&self, a: &ChainComplex, b: &ChainComplex, v: &[u32]) -> Result<ChainMap> {
        let mut comps = BTreeMap::new();
        for (i, off, dim) in hom_blocks(a, b, 0) {
            comps.insert(i, FpMatrix::new(self.fp, b.dim(i), a.dim(i), v[off..off + dim].to_vec())?);
        }
        ChainMap::new(a.clone(), b.clone(), comps)
    }
}

impl Cosmos for ChainCosmos {
    type Object = ChainComplex;
    type Morphism = ChainMap;

    fn matrix(&self, f: &ChainMap) -> FpMatrix {
        let lo = f.src.lo().min(f.dst.lo());
        let hi = f.src.hi().max(f.dst.hi());
        FpMatrix::block_diag(self.fp, &(lo..=hi).map(|n| f.at(n)).collect::<Vec<_>>())
    }

    fn field(&self) -> Fp {
        self.fp
    }

    fn name(&self) -> String {
        format!("Ch(FinVect({}))", self.fp)
    }

    fn unit(&self) -> ChainComplex {
        ChainComplex::sphere(self.fp, CosmosObject { dim: 1 })
    }

    fn source(&self, f: &ChainMap) -> ChainComplex {
        f.src.clone()
    }

    fn target(&self, f: &ChainMap) -> ChainComplex {
        f.dst.clone()
    }

    fn identity(&self, x: &ChainComplex) -> ChainMap {
        ChainMap::from_fn(x, x, |n| Ok(FpMatrix::identity(self.fp, x.dim(n)))).expect("identity components")
    }

    fn zero(&self, x: &ChainComplex, y: &ChainComplex) -> ChainMap {
        ChainMap::from_fn(x, y, |n| Ok(FpMatrix::zeros(self.fp, y.dim(n), x.dim(n)))).expect("zero components")
    }

    fn compose(&self, g: &ChainMap, f: &ChainMap) -> Result<ChainMap> {
        if f.dst != g.src {
            return Err(shape("chain map composition", format!("{:?} vs {:?}", f.dst, g.src)));
        }
        ChainMap::from_fn(&f.src, &g.dst, |n| g.at(n).mul(&f.at(n)))
    }

    fn add(&self, f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
        if f.src != g.src || f.dst != g.dst {
            return Err(shape("chain map sum", "maps are not parallel"));
        }
        ChainMap::from_fn(&f.src, &f.dst, |n| f.at(n).add(&g.at(n)))
    }

    fn scale(&self, c: u32, f: &ChainMap) -> ChainMap {
        ChainMap::from_fn(&f.src, &f.dst, |n| Ok(f.at(n).scale(c))).expect("scaled components")
    }

    fn inverse(&self, f: &ChainMap) -> Option<ChainMap> {
        let (lo, hi) = (f.src.lo.min(f.dst.lo), f.src.hi().max(f.dst.hi()));
        if (lo..=hi).any(|n| f.src.dim(n) != f.dst.dim(n)) {
            return None;
        }
        let mut comps = BTreeMap::new();
        for n in f.src.degrees() {
            comps.insert(n, f.at(n).is_isomorphism()?);
        }
        ChainMap::new(f.dst.clone(), f.src.clone(), comps).ok()
    }

    fn tensor(&self, x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
        self.total_tensor(x, y)
    }

    fn tensor_mor(&self, f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
        let src = self.total_tensor(&f.src, &g.src)?;
        let dst = self.total_tensor(&f.dst, &g.dst)?;
        ChainMap::from_fn(&src, &dst, |n| {
            let mut m = FpMatrix::zeros(self.fp, dst.dim(n), src.dim(n));
            for (i, j, off, _) in tensor_blocks(&f.src, &g.src, n) {
                if let Some(t) = tensor_offset(&f.dst, &g.dst, n, i) {
                    m.paste(t, off, &f.at(i).kron(&g.at(j))?);
                }
            }
            Ok(m)
        })
    }

    fn internal_hom(&self, x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
        self.total_hom(x, y)
    }

    fn associator(&self, x: &ChainComplex, y: &ChainComplex, z: &ChainComplex) -> Result<ChainMap> {
        let xy = self.total_tensor(x, y)?;
        let yz = self.total_tensor(y, z)?;
        let src = self.total_tensor(&xy, z)?;
        let dst = self.total_tensor(x, &yz)?;
        ChainMap::from_fn(&src, &dst, |n| {
            let mut perm = vec![(0usize, 1u32); src.dim(n)];
            for (m, k, off, _) in tensor_blocks(&xy, z, n) {
                let dz = z.dim(k);
                for (i, j, off_xy, _) in tensor_blocks(x, y, m) {
                    let dy = y.dim(j);
                    let t_off = tensor_offset(x, &yz, n, i).ok_or_else(|| shape("associator", "missing block"))?;
                    let yz_off = tensor_offset(y, z, j + k, j).ok_or_else(|| shape("associator", "missing block"))?;
                    let dyz = yz.dim(j + k);
                    for a in 0..x.dim(i) {
                        for b in 0..dy {
                            for c in 0..dz {
                                let s = off + (off_xy + a * dy + b) * dz + c;
                                let t = t_off + a * dyz + yz_off + b * dz + c;
                                perm[s] = (t, 1);
                            }
                        }
                    }
                }
            }
            Ok(FpMatrix::signed_permutation(self.fp, &perm))
        })
    }

    fn left_unitor(&self, x: &ChainComplex) -> Result<ChainMap> {
        let src = self.total_tensor(&self.unit(), x)?;
        ChainMap::new(src, x.clone(), self.identity(x).components)
    }

    fn right_unitor(&self, x: &ChainComplex) -> Result<ChainMap> {
        let src = self.total_tensor(x, &self.unit())?;
        ChainMap::new(src, x.clone(), self.identity(x).components)
    }

    fn symmetry(&self, x: &ChainComplex, y: &ChainComplex) -> Result<ChainMap> {
        let src = self.total_tensor(x, y)?;
        let dst = self.total_tensor(y, x)?;
        ChainMap::from_fn(&src, &dst, |n| {
            let mut perm = vec![(0usize, 1u32); src.dim(n)];
            for (i, j, off, _) in tensor_blocks(x, y, n) {
                let t_off = tensor_offset(y, x, n, j).ok_or_else(|| shape("symmetry", "missing block"))?;
                let s = self.fp.sign(i64::from(i) * i64::from(j));
                let (dx, dy) = (x.dim(i), y.dim(j));
                for a in 0..dx {
                    for b in 0..dy {
                        perm[off + a * dy + b] = (t_off + b * dx + a, s);
                    }
                }
            }
            Ok(FpMatrix::signed_permutation(self.fp, &perm))
        })
    }

    fn curry(&self, x: &ChainComplex, y: &ChainComplex, f: &ChainMap) -> Result<ChainMap> {
        let z = f.dst.clone();
        let xy = self.total_tensor(x, y)?;
        if f.src != xy {
            return Err(shape("curry", "source is not the tensor product"));
        }
        let hom = self.total_hom(y, &z)?;
        ChainMap::from_fn(x, &hom, |i| {
            let mut m = FpMatrix::zeros(self.fp, hom.dim(i), x.dim(i));
            for (j, h_off, _) in hom_blocks(y, &z, i) {
                let Some(t_off) = tensor_offset(x, y, i + j, i) else {
                    continue;
                };
                let fc = f.at(i + j);
                let dy = y.dim(j);
                for zz in 0..z.dim(i + j) {
                    for b in 0..dy {
                        for a in 0..x.dim(i) {
                            m.set(h_off + zz * dy + b, a, fc.get(zz, t_off + a * dy + b));
                        }
                    }
                }
            }
            Ok(m)
        })
    }

    fn uncurry(&self, y: &ChainComplex, z: &ChainComplex, g: &ChainMap) -> Result<ChainMap> {
        let x = g.src.clone();
        let hom = self.total_hom(y, z)?;
        if g.dst != hom {
            return Err(shape("uncurry", "target is not the internal hom"));
        }
        let xy = self.total_tensor(&x, y)?;
        ChainMap::from_fn(&xy, z, |n| {
            let mut m = FpMatrix::zeros(self.fp, z.dim(n), xy.dim(n));
            for (i, j, t_off, _) in tensor_blocks(&x, y, n) {
                let Some(h_off) = hom_offset(y, z, i, j) else {
                    continue;
                };
                let gc = g.at(i);
                let dy = y.dim(j);
                for zz in 0..z.dim(n) {
                    for a in 0..x.dim(i) {
                        for b in 0..dy {
                            m.set(zz, t_off + a * dy + b, gc.get(h_off + zz * dy + b, a));
                        }
                    }
                }
            }
            Ok(m)
        })
    }

    fn global_coordinates(&self, x: &ChainComplex, f: &ChainMap) -> Result<Vec<u32>> {
        if f.src != self.unit() || f.dst != *x {
            return Err(shape("global element", "not a map out of the unit"));
        }
        let k = x.cycles(0);
        let v = f.at(0);
        let sol = k
            .solve(&v)?
            .ok_or_else(|| Error::Verification("degree-0 component is not a cocycle".into()))?;
        Ok(sol.col(0))
    }

    fn discrete(&self, n: usize) -> ChainComplex {
        self.sphere(CosmosObject { dim: n })
    }

    fn discrete_mor(&self, m: &FpMatrix) -> Result<ChainMap> {
        let mut comps = BTreeMap::new();
        comps.insert(0, m.clone());
        ChainMap::new(self.discrete(m.cols()), self.discrete(m.rows()), comps)
    }

    fn from_global_elements(&self, x: &ChainComplex, elems: &[ChainMap]) -> Result<ChainMap> {
        let cols: Vec<Vec<u32>> = elems.iter().map(|e| e.at(0).col(0)).collect();
        let mut comps = BTreeMap::new();
        comps.insert(0, FpMatrix::from_columns(self.fp, x.dim(0), &cols));
        ChainMap::new(self.discrete(elems.len()), x.clone(), comps)
    }

    fn global_elements(&self, x: &ChainComplex) -> Result<Vec<ChainMap>> {
        let k = x.cycles(0);
        let unit = self.unit();
        (0..k.cols())
            .map(|c| {
                let mut comps = BTreeMap::new();
                comps.insert(0, FpMatrix::column(self.fp, &k.col(c)));
                ChainMap::new(unit.clone(), x.clone(), comps)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosmos::coherence;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cosmos(p: u32) -> ChainCosmos {
        ChainCosmos::new(Fp::new(p).unwrap())
    }

    fn obj(d: usize) -> CosmosObject {
        CosmosObject { dim: d }
    }

    #[test]
    fn sphere_and_disk_shapes() {
        let c = cosmos(2);
        let s = c.sphere(obj(1));
        assert_eq!((s.lo(), s.hi(), s.dim(0)), (0, 0, 1));
        assert_eq!(s, c.unit());
        let d = c.disk(obj(1));
        assert_eq!((d.lo(), d.hi()), (-1, 0));
        assert_eq!(d.dim(-1), 1);
        assert_eq!(d.dim(0), 1);
        assert_eq!(d.d(-1), FpMatrix::identity(c.field(), 1));
        assert_eq!(s.shift(0), s);
        assert!(c.sphere(obj(0)).is_zero());
    }

    #[test]
    fn shift_relabels_and_signs() {
        let c = cosmos(3);
        let d = c.disk(obj(1)).shift(1);
        assert_eq!((d.lo(), d.hi()), (-2, -1));
        assert_eq!(d.d(-2).get(0, 0), 2);
        assert_eq!(c.disk(obj(2)).shift(-2).shift(2), c.disk(obj(2)));
    }

    #[test]
    fn rejects_non_complex() {
        let fp = Fp::new(2).unwrap();
        let one = FpMatrix::identity(fp, 1);
        let err = ChainComplex::new(fp, 0, vec![1, 1, 1], vec![one.clone(), one]).unwrap_err();
        assert_eq!(err, Error::NotAComplex(0));
    }

    #[test]
    fn disk_tensor_disk_over_f3() {
        let c = cosmos(3);
        let d = c.disk(obj(1));
        let t = c.total_tensor(&d, &d).unwrap();
        assert_eq!((t.lo(), t.hi()), (-2, 0));
        assert_eq!((t.dim(-2), t.dim(-1), t.dim(0)), (1, 2, 1));
        // blocks of degree −1 are (−1,0) then (0,−1); reaching (−1,0) from
        // (−1,−1) moves the right factor and carries (−1)^{−1}
        assert_eq!(t.d(-2), FpMatrix::from_rows(c.field(), &[vec![2], vec![1]]).unwrap());
        assert_eq!(t.d(-1), FpMatrix::from_rows(c.field(), &[vec![1, 1]]).unwrap());
        assert!(t.d(-1).mul(&t.d(-2)).unwrap().is_zero());
        // D ⊗ D is contractible
        for n in -3..=1 {
            assert_eq!(t.cohomology_dim(n), 0);
        }
    }

    #[test]
    fn unit_laws_are_identities() {
        let c = cosmos(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = c.random_complex(&mut rng, -1, &[2, 2, 1]).unwrap();
        assert_eq!(c.total_tensor(&c.unit(), &x).unwrap(), x);
        assert_eq!(c.total_tensor(&x, &c.unit()).unwrap(), x);
        assert_eq!(c.total_hom(&c.unit(), &x).unwrap(), x);
        let (lhs, rhs) = coherence::triangle(&c, &x, &x).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn hom_differential_matches_formula() {
        // Hom(D, S(I)): degree 0 is [D^0, I], degree 1 is [D^{-1}, I];
        // d(h) = −(−1)^0 h ∘ d_D = −h.
        let c = cosmos(3);
        let h = c.total_hom(&c.disk(obj(1)), &c.unit()).unwrap();
        assert_eq!((h.lo(), h.hi()), (0, 1));
        assert_eq!(h.d(0).get(0, 0), 2);
    }

    #[test]
    fn coherence_on_small_complexes_p3() {
        let c = cosmos(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs = [
            c.disk(obj(1)),
            c.random_complex(&mut rng, 0, &[1, 2]).unwrap(),
            c.disk(obj(1)).shift(1),
            c.sphere(obj(2)).shift(-1),
        ];
        for x in &xs {
            for y in &xs {
                let (l, r) = coherence::symmetry_involution(&c, x, y).unwrap();
                assert_eq!(l, r);
                for z in &xs {
                    let (l, r) = coherence::hexagon(&c, x, y, z).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
        let (l, r) = coherence::pentagon(&c, &xs[0], &xs[1], &xs[2], &xs[3]).unwrap();
        assert_eq!(l, r);
        let (l, r) = coherence::unit_coincidence(&c).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn curry_round_trip_and_internal_compose() {
        let c = cosmos(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = c.disk(obj(1));
        let y = c.random_complex(&mut rng, 0, &[1, 1]).unwrap();
        let z = c.random_complex(&mut rng, -1, &[1, 2, 1]).unwrap();
        let xy = c.total_tensor(&x, &y).unwrap();
        for _ in 0..5 {
            let f = c.random_map(&mut rng, &xy, &z).unwrap();
            assert!(coherence::curry_round_trip(&c, &x, &y, &f).unwrap());
        }
        // evaluation and internal composition are chain maps
        c.evaluation(&y, &z).unwrap();
        c.internal_compose(&x, &y, &z).unwrap();
        c.internal_identity(&z).unwrap();
    }

    #[test]
    fn dual_pairs() {
        let c = cosmos(3);
        let w = c.chain_dual_pair(&c.unit()).unwrap();
        assert_eq!(w.y, c.unit());
        for n in -1..=1 {
            c.chain_dual_pair(&c.disk(obj(1)).shift(n)).unwrap();
        }
        let c2 = cosmos(2);
        let fp = c2.field();
        let x = ChainComplex::new(
            fp,
            0,
            vec![2, 2],
            vec![FpMatrix::from_rows(fp, &[vec![1, 0], vec![0, 0]]).unwrap()],
        )
        .unwrap();
        c2.chain_dual_pair(&x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = c.random_complex(&mut rng, -1, &[1, 2, 1]).unwrap();
        c.chain_dual_pair(&x).unwrap();
    }

    #[test]
    fn degree_cap_is_enforced() {
        let c = ChainCosmos::with_cap(Fp::new(2).unwrap(), -2, 2);
        let x = c.disk(obj(1)).shift(-2); // degrees 1..2
        let err = c.total_tensor(&x, &x).unwrap_err();
        assert!(matches!(err, Error::DegreeCap { .. }));
    }

    #[test]
    fn global_elements_are_cocycles() {
        let c = cosmos(2);
        assert_eq!(c.global_elements(&c.disk(obj(1))).unwrap().len(), 1);
        assert_eq!(c.global_elements(&c.disk(obj(1)).shift(-1)).unwrap().len(), 0);
        assert_eq!(c.global_elements(&c.sphere(obj(2))).unwrap().len(), 2);
        let fp = c.field();
        let x = ChainComplex::new(fp, 0, vec![2, 2], vec![FpMatrix::from_rows(fp, &[vec![1, 0], vec![0, 0]]).unwrap()]).unwrap();
        let (z, inc) = c.z0(&x);
        assert_eq!(z.dim, 1);
        assert_eq!(inc, FpMatrix::column(fp, &[0, 1]));
    }
}
