use std::collections::BTreeMap;

use crate::cosmos::{ChainComplex, ChainCosmos, ChainMap, Cosmos, CosmosObject, FinVect};
use crate::enriched::VCategory;
use crate::error::{Error, Result};
use crate::linalg::{Fp, FpMatrix};

use super::report::{Certificate, CheckResult, Verdict};

fn solve_into(inc: &FpMatrix, m: &FpMatrix, what: &str) -> Result<FpMatrix> {
    inc.solve(m)?
        .ok_or_else(|| Error::Verification(format!("{what} does not land in degree-0 cocycles")))
}

/// `Z⁰X ⊗ Z⁰Y → (X⊗Y)^0`, landing in the `X^0 ⊗ Y^0` block.
fn lax_tensor(cosmos: &ChainCosmos, x: &ChainComplex, y: &ChainComplex) -> Result<FpMatrix> {
    let fp = cosmos.field();
    let (_, ix) = cosmos.z0(x);
    let (_, iy) = cosmos.z0(y);
    let xy = cosmos.total_tensor(x, y)?;
    let mut out = FpMatrix::zeros(fp, xy.dim(0), ix.cols() * iy.cols());
    if let Some(off) = cosmos.tensor_block_offset(x, y, 0, 0) {
        out.paste(off, 0, &ix.kron(&iy)?);
    }
    Ok(out)
}

/// The FinVect-category with homs `Z⁰ B(a,b)`.
pub fn change_of_base(b: &VCategory<ChainCosmos>) -> Result<VCategory<FinVect>> {
    let cosmos = b.cosmos();
    let fp = cosmos.field();
    let incs: Vec<FpMatrix> = (0..b.len() * b.len())
        .map(|k| cosmos.z0(b.hom(k / b.len(), k % b.len())).1)
        .collect();
    let n = b.len();
    let inc = |a: usize, c: usize| &incs[a * n + c];
    let g = VCategory::new(
        FinVect::new(fp),
        b.labels().to_vec(),
        |a, c| Ok(CosmosObject::new(inc(a, c).cols())),
        |x, y, z| {
            let tau = lax_tensor(cosmos, b.hom(y, z), b.hom(x, y))?;
            solve_into(inc(x, z), &b.comp(x, y, z).at(0).mul(&tau)?, "composition")
        },
        |a| solve_into(inc(a, a), &b.ident(a).at(0), "identity"),
    )?;
    g.check_axioms().into_result("change of base")?;
    Ok(g)
}

/// The chain map `I → B(a,b)` named by a degree-0 cocycle.
fn element(cosmos: &ChainCosmos, hom: &ChainComplex, inc: &FpMatrix, v: &[u32]) -> Result<ChainMap> {
    let mut comps = BTreeMap::new();
    comps.insert(0, inc.mul(&FpMatrix::column(cosmos.field(), v))?);
    ChainMap::new(cosmos.unit(), hom.clone(), comps)
}

/// The underlying ordinary categories of `B` and of `Z⁰_* B` agree.
pub fn underlying_check(b: &VCategory<ChainCosmos>, g: &VCategory<FinVect>, max_dim: usize) -> Result<CheckResult> {
    let cosmos = b.cosmos();
    let ub = b.underlying(max_dim)?;
    let ug = g.underlying(max_dim)?;
    let n = b.len();
    let arrows = ug.category.arrows().len();
    if ub.category.arrows().len() != arrows {
        return Ok(CheckResult::new(
            "cob-underlying",
            "the underlying categories of B and of Z0 B agree",
            Verdict::Fail,
            format!("{} arrows against {arrows}", ub.category.arrows().len()),
            vec![],
        ));
    }
    let mut sigma = vec![0; arrows];
    for (k, arrow) in ug.category.arrows().iter().enumerate() {
        let (a, c) = (arrow.src, arrow.dst);
        let v = ug.elements[k].col(0);
        let hom = b.hom(a, c);
        let e = element(cosmos, hom, &cosmos.z0(hom).1, &v)?;
        sigma[k] = ub.arrow_of(cosmos, hom, a, c, &e)?;
    }
    let mut certs = Vec::new();
    let p2 = Fp::new(2)?;
    let perm = FpMatrix::from_fn(p2, arrows, arrows, |r, c| u32::from(sigma[c] == r));
    let bijective = {
        let c = Certificate::for_matrix("arrow correspondence as a permutation matrix", perm);
        let ok = c.is_inverse();
        certs.push(c);
        ok
    };
    // Composition tables written over a prime larger than any arrow index.
    let big = Fp::new(1_000_003)?;
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for (gi, ga) in ug.category.arrows().iter().enumerate() {
        for (fi, fa) in ug.category.arrows().iter().enumerate() {
            if fa.dst != ga.src {
                continue;
            }
            let gf = ug.category.compose(gi, fi).ok_or_else(|| Error::Verification("missing composite".into()))?;
            lhs.push(sigma[gf] as i64);
            let composite = ub
                .category
                .compose(sigma[gi], sigma[fi])
                .ok_or_else(|| Error::Verification("missing composite".into()))?;
            rhs.push(composite as i64);
        }
    }
    let table = |v: &[i64]| FpMatrix::from_rows(big, &[v.to_vec()]);
    let compatible = lhs == rhs;
    let label = "composition tables transported along the correspondence".to_string();
    let (lhs, rhs) = (table(&lhs)?, table(&rhs)?);
    certs.push(if compatible {
        Certificate::Equal { label, lhs, rhs }
    } else {
        Certificate::Distinct { label, lhs, rhs }
    });
    let idents = (0..n).all(|a| sigma[ug.category.identity(a)] == ub.category.identity(a));
    Ok(CheckResult::new(
        "cob-underlying",
        "the underlying categories of B and of Z0 B agree",
        Verdict::from_bool(bijective && compatible && idents),
        format!("{arrows} arrows; composition preserved: {compatible}; identities preserved: {idents}"),
        certs,
    ))
}

/// `Z⁰ Hom(D, Hom(SX, C)) → [X, Z⁰ Hom(D, C)]`, evaluating at basis vectors of `X`.
pub fn cotensor_comparison(cosmos: &ChainCosmos, x: usize, d: &ChainComplex, c: &ChainComplex) -> Result<FpMatrix> {
    let fp = cosmos.field();
    let sx = cosmos.sphere(CosmosObject::new(x));
    let h1 = cosmos.total_hom(&sx, c)?;
    let h2 = cosmos.total_hom(d, &h1)?;
    let hdc = cosmos.total_hom(d, c)?;
    let (_, inc2) = cosmos.z0(&h2);
    let (_, inc) = cosmos.z0(&hdc);
    let mut out = FpMatrix::zeros(fp, inc.cols() * x, inc2.cols());
    for col in 0..inc2.cols() {
        let phi = inc2.col(col);
        for xi in 0..x {
            let mut psi = vec![0; hdc.dim(0)];
            for i in d.degrees() {
                let (Some(src), Some(dst)) = (cosmos.hom_block_offset(d, &h1, 0, i), cosmos.hom_block_offset(d, c, 0, i)) else {
                    continue;
                };
                let (rows, cols) = (c.dim(i), d.dim(i));
                // `h1^i = [X, C^i]`, row-major with `X` varying fastest.
                let h1_cols = d.dim(i);
                for r in 0..rows {
                    for s in 0..cols {
                        psi[dst + r * cols + s] = phi[src + (r * x + xi) * h1_cols + s];
                    }
                }
            }
            let z = solve_into(&inc, &FpMatrix::column(fp, &psi), "evaluation")?;
            for (k, v) in z.col(0).into_iter().enumerate() {
                out.set(k * x + xi, col, v);
            }
        }
    }
    Ok(out)
}

/// `Z⁰ Hom(SX, Y) → [X, Z⁰ Y]`.
pub fn sphere_comparison(cosmos: &ChainCosmos, x: usize, y: &ChainComplex) -> Result<FpMatrix> {
    let fp = cosmos.field();
    let sx = cosmos.sphere(CosmosObject::new(x));
    let h = cosmos.total_hom(&sx, y)?;
    let (_, inc_h) = cosmos.z0(&h);
    let (_, inc_y) = cosmos.z0(y);
    let mut out = FpMatrix::zeros(fp, inc_y.cols() * x, inc_h.cols());
    for col in 0..inc_h.cols() {
        let phi = inc_h.col(col);
        for xi in 0..x {
            let v: Vec<u32> = (0..y.dim(0)).map(|r| phi[r * x + xi]).collect();
            let z = solve_into(&inc_y, &FpMatrix::column(fp, &v), "evaluation")?;
            for (k, val) in z.col(0).into_iter().enumerate() {
                out.set(k * x + xi, col, val);
            }
        }
    }
    Ok(out)
}

/// Probe complexes for the transport checks.
#[derive(Clone, Debug, Default)]
pub struct CobProbes {
    pub dims: Vec<usize>,
    pub complexes: Vec<ChainComplex>,
}

fn iso_check(id: &str, statement: &str, certs: Vec<Certificate>) -> CheckResult {
    let bad: Vec<&str> = certs.iter().filter(|c| !c.is_inverse()).map(Certificate::label).collect();
    let detail = if bad.is_empty() {
        format!("{} comparison maps inverted", certs.len())
    } else {
        format!("not invertible: {}", bad.join(", "))
    };
    let verdict = Verdict::from_bool(bad.is_empty());
    CheckResult::new(id, statement, verdict, detail, certs)
}

/// The underlying-category check plus the two transport isomorphisms.
pub fn change_of_base_checks(b: &VCategory<ChainCosmos>, probes: &CobProbes, max_dim: usize) -> Vec<CheckResult> {
    let cosmos = b.cosmos();
    let mut out = Vec::new();
    let statement = "the underlying categories of B and of Z0 B agree";
    out.push(
        change_of_base(b)
            .and_then(|g| underlying_check(b, &g, max_dim))
            .unwrap_or_else(|e| CheckResult::errored("cob-underlying", statement, &e)),
    );
    let statement = "Z0 Hom(D, Hom(SX, C)) is [X, Z0 Hom(D, C)]";
    let cot = (|| -> Result<Vec<Certificate>> {
        let mut certs = Vec::new();
        for &x in &probes.dims {
            for (i, d) in probes.complexes.iter().enumerate() {
                for (j, c) in probes.complexes.iter().enumerate() {
                    let m = cotensor_comparison(cosmos, x, d, c)?;
                    certs.push(Certificate::for_matrix(format!("X = F_p^{x}, D = probe {i}, C = probe {j}"), m));
                }
            }
        }
        Ok(certs)
    })();
    out.push(match cot {
        Ok(certs) => iso_check("cob-cotensor", statement, certs),
        Err(e) => CheckResult::errored("cob-cotensor", statement, &e),
    });
    let statement = "Z0 Hom(SX, Y) is [X, Z0 Y]";
    let sph = (|| -> Result<Vec<Certificate>> {
        let mut certs = Vec::new();
        for &x in &probes.dims {
            for (i, y) in probes.complexes.iter().enumerate() {
                certs.push(Certificate::for_matrix(format!("X = F_p^{x}, Y = probe {i}"), sphere_comparison(cosmos, x, y)?));
            }
        }
        Ok(certs)
    })();
    out.push(match sph {
        Ok(certs) => iso_check("cob-sphere", statement, certs),
        Err(e) => CheckResult::errored("cob-sphere", statement, &e),
    });
    out
}
