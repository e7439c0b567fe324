use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vcosmos::cosmos::{ChainComplex, ChainCosmos, Cosmos, CosmosObject, FinVect};
use vcosmos::enriched::examples::algebra;
use vcosmos::enriched::ordinary::Arrow;
use vcosmos::harness::instances::{build_instance, ProbeConfig, SpecialProbes};
use vcosmos::harness::laws::{complexes_up_to_iso, cosmos_laws, dualizability, LawFamily};
use vcosmos::harness::report::{PresheafRecord, ProbeInventory};
use vcosmos::harness::{change_of_base_checks, gabriel_popescu_verify, CobProbes};
use vcosmos::{
    Certificate, CheckResult, Error, FiniteCategory, Fp, FpMatrix, HarnessReport, NerveRealization, Presheaf, PresheafCat,
    PresheafFunctor, Result, VCategory, Verdict,
};

use crate::scenario::{CategoryDecl, CategoryKind, CheckDecl, CosmosDecl, Matrix, Pos, PresheafDecl, Scenario, Token};

/// Overrides from the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: Option<u64>,
    pub max_dim: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum BuiltCategory {
    Vect(VCategory<FinVect>),
    Chain(VCategory<ChainCosmos>),
}

struct Built {
    fp: Fp,
    categories: BTreeMap<String, BuiltCategory>,
    presheaves: Vec<(String, String, Presheaf)>,
}

fn matrix(fp: Fp, m: &Matrix, rows: usize, cols: usize, what: &str) -> Result<FpMatrix> {
    if m.rows.is_empty() && rows * cols == 0 {
        return Ok(FpMatrix::zeros(fp, rows, cols));
    }
    let got = (m.rows.len(), m.rows.first().map_or(0, Vec::len));
    if got != (rows, cols) {
        return Err(m.pos.error(format!("{what} must be {rows}x{cols}, found {}x{}", got.0, got.1)));
    }
    FpMatrix::from_rows(fp, &m.rows).map_err(|e| m.pos.error(e.to_string()))
}

fn index_of(labels: &[String], t: &Token, what: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| *l == t.text)
        .ok_or_else(|| t.pos.error(format!("unknown {what} `{}`", t.text)))
}

fn at(pos: Pos) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::Parse { .. } => e,
        e => pos.error(e.to_string()),
    }
}

fn labels_of(objects: &[Token]) -> Vec<String> {
    objects.iter().map(|t| t.text.clone()).collect()
}

fn quiver(objects: &[Token], arrows: &[crate::scenario::ArrowDecl]) -> Result<FiniteCategory> {
    let labels = labels_of(objects);
    let names: Vec<&str> = labels.iter().map(String::as_str).collect();
    let edges = arrows
        .iter()
        .map(|a| Ok((a.name.text.as_str(), index_of(&labels, &a.src, "object")?, index_of(&labels, &a.dst, "object")?)))
        .collect::<Result<Vec<_>>>()?;
    FiniteCategory::free_on_quiver(&names, &edges)
}

fn ordinary(
    objects: &[Token],
    arrows: &[crate::scenario::ArrowDecl],
    compose: &[(Token, Token, Token)],
    pos: Pos,
) -> Result<FiniteCategory> {
    let labels = labels_of(objects);
    let mut all: Vec<Arrow> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| Arrow {
            name: format!("1_{l}"),
            src: i,
            dst: i,
        })
        .collect();
    for a in arrows {
        all.push(Arrow {
            name: a.name.text.clone(),
            src: index_of(&labels, &a.src, "object")?,
            dst: index_of(&labels, &a.dst, "object")?,
        });
    }
    let names: Vec<String> = all.iter().map(|a| a.name.clone()).collect();
    let n = labels.len();
    let mut table = BTreeMap::new();
    for (g, f, gf) in compose {
        let (gi, fi, gfi) = (index_of(&names, g, "arrow")?, index_of(&names, f, "arrow")?, index_of(&names, gf, "arrow")?);
        table.insert((gi, fi), gfi);
    }
    for g in 0..all.len() {
        for f in 0..all.len() {
            if all[f].dst != all[g].src || g < n || f < n {
                continue;
            }
            if !table.contains_key(&(g, f)) {
                return Err(pos.error(format!("missing composite of `{}` after `{}`", all[g].name, all[f].name)));
            }
        }
    }
    FiniteCategory::new(labels, all, (0..n).collect(), |g, f| {
        if g < n {
            f
        } else if f < n {
            g
        } else {
            table[&(g, f)]
        }
    })
    .map_err(at(pos))
}

fn explicit(fp: Fp, kind: &CategoryKind, pos: Pos) -> Result<VCategory<FinVect>> {
    let CategoryKind::Explicit {
        objects,
        homs,
        comps,
        idents,
    } = kind
    else {
        unreachable!("called on explicit categories only")
    };
    let labels = labels_of(objects);
    let n = labels.len();
    let mut dims = vec![0; n * n];
    for (a, b, d) in homs {
        dims[index_of(&labels, a, "object")? * n + index_of(&labels, b, "object")?] = *d;
    }
    let dim = |a: usize, b: usize| dims[a * n + b];
    let mut comp = BTreeMap::new();
    for ([a, b, c], m) in comps {
        let (a, b, c) = (index_of(&labels, a, "object")?, index_of(&labels, b, "object")?, index_of(&labels, c, "object")?);
        comp.insert((a, b, c), matrix(fp, m, dim(a, c), dim(b, c) * dim(a, b), "composition")?);
    }
    let mut ident = BTreeMap::new();
    for (a, m) in idents {
        let a = index_of(&labels, a, "object")?;
        ident.insert(a, matrix(fp, m, dim(a, a), 1, "identity")?);
    }
    VCategory::new(
        FinVect::new(fp),
        labels,
        |a, b| Ok(CosmosObject::new(dim(a, b))),
        |a, b, c| Ok(comp.get(&(a, b, c)).cloned().unwrap_or_else(|| FpMatrix::zeros(fp, dim(a, c), dim(b, c) * dim(a, b)))),
        |a| Ok(ident.get(&a).cloned().unwrap_or_else(|| FpMatrix::zeros(fp, dim(a, a), 1))),
    )
    .map_err(at(pos))
}

fn complexes(fp: Fp, chain: &ChainCosmos, decls: &[crate::scenario::ComplexDecl]) -> Result<Vec<ChainComplex>> {
    decls
        .iter()
        .map(|c| {
            let mut diffs: Vec<FpMatrix> = (0..c.dims.len().saturating_sub(1))
                .map(|k| FpMatrix::zeros(fp, c.dims[k + 1], c.dims[k]))
                .collect();
            for (degree, m) in &c.diffs {
                let k = degree - c.lo;
                if k < 0 || k as usize >= diffs.len() {
                    return Err(m.pos.error(format!("complex `{}` has no differential in degree {degree}", c.label.text)));
                }
                let k = k as usize;
                diffs[k] = matrix(fp, m, c.dims[k + 1], c.dims[k], "differential")?;
            }
            let x = ChainComplex::new(fp, c.lo, c.dims.clone(), diffs).map_err(at(c.label.pos))?;
            let cap = chain.cap();
            if x.lo() < cap.0 || x.hi() > cap.1 {
                return Err(c.label.pos.error(format!("complex `{}` leaves the degree cap [{}, {}]", c.label.text, cap.0, cap.1)));
            }
            Ok(x)
        })
        .collect()
}

fn build_category(fp: Fp, chain: &ChainCosmos, cosmos: CosmosDecl, d: &CategoryDecl) -> Result<BuiltCategory> {
    let pos = d.name.pos;
    let name = d.name.text.as_str();
    let finvect_only = || pos.error(format!("category `{name}`: this kind needs `cosmos finvect`"));
    Ok(match (&d.kind, cosmos) {
        (CategoryKind::Unit, CosmosDecl::FinVect) => BuiltCategory::Vect(VCategory::unit(FinVect::new(fp)).map_err(at(pos))?),
        (CategoryKind::Unit, CosmosDecl::Chain { .. }) => BuiltCategory::Chain(VCategory::unit(*chain).map_err(at(pos))?),
        (CategoryKind::Quiver { objects, arrows }, _) => {
            let l = quiver(objects, arrows).map_err(at(pos))?;
            match cosmos {
                CosmosDecl::FinVect => BuiltCategory::Vect(VCategory::free(FinVect::new(fp), &l).map_err(at(pos))?),
                CosmosDecl::Chain { .. } => BuiltCategory::Chain(VCategory::free(*chain, &l).map_err(at(pos))?),
            }
        }
        (CategoryKind::Ordinary { objects, arrows, compose }, CosmosDecl::FinVect) => {
            let l = ordinary(objects, arrows, compose, pos)?;
            BuiltCategory::Vect(VCategory::free(FinVect::new(fp), &l).map_err(at(pos))?)
        }
        (CategoryKind::Algebra { dim, unit, mult }, CosmosDecl::FinVect) => {
            let mult = mult.as_ref().ok_or_else(|| pos.error(format!("algebra `{name}` needs `mult`")))?;
            let mult = matrix(fp, mult, *dim, dim * dim, "structure constants")?;
            if unit.len() != *dim {
                return Err(pos.error(format!("algebra `{name}` needs a unit with {dim} coordinates")));
            }
            let unit: Vec<u32> = unit.iter().map(|&x| fp.reduce(x)).collect();
            BuiltCategory::Vect(algebra(fp, name, mult, &unit).map_err(at(pos))?)
        }
        (CategoryKind::Explicit { .. }, CosmosDecl::FinVect) => BuiltCategory::Vect(explicit(fp, &d.kind, pos)?),
        (CategoryKind::Complexes { complexes: decls }, CosmosDecl::Chain { .. }) => {
            let xs = complexes(fp, chain, decls)?;
            let labels = decls.iter().map(|c| c.label.text.clone()).collect();
            BuiltCategory::Chain(VCategory::full_sub_cosmos(*chain, labels, xs).map_err(at(pos))?)
        }
        (CategoryKind::Complexes { .. }, CosmosDecl::FinVect) => {
            return Err(pos.error(format!("category `{name}`: complexes need `cosmos chain <lo> <hi>`")))
        }
        _ => return Err(finvect_only()),
    })
}

fn build_presheaf(fp: Fp, ps: &PresheafCat, d: &PresheafDecl) -> Result<Presheaf> {
    let c = ps.base();
    let labels = c.labels();
    let n = c.len();
    let mut values = vec![0; n];
    for (o, v) in &d.values {
        values[index_of(labels, o, "object")?] = *v;
    }
    let mut actions = BTreeMap::new();
    for (x, y, m) in &d.actions {
        let (xi, yi) = (index_of(labels, x, "object")?, index_of(labels, y, "object")?);
        let cols = c.hom(yi, xi).dim * values[xi];
        actions.insert((xi, yi), matrix(fp, m, values[yi], cols, "action")?);
    }
    ps.functor(values.clone(), |x, y| {
        Ok(actions
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(fp, values[y], c.hom(y, x).dim * values[x])))
    })
    .map_err(at(d.name.pos))
}

fn build(s: &Scenario) -> Result<Built> {
    let fp = Fp::new(s.modulus).map_err(at(s.modulus_pos))?;
    let chain = match s.cosmos {
        CosmosDecl::FinVect => ChainCosmos::new(fp),
        CosmosDecl::Chain { lo, hi } => ChainCosmos::with_cap(fp, lo, hi),
    };
    let mut categories = BTreeMap::new();
    for d in &s.categories {
        categories.insert(d.name.text.clone(), build_category(fp, &chain, s.cosmos, d)?);
    }
    let mut presheaves = Vec::new();
    for d in &s.presheaves {
        let ps = match categories.get(&d.category.text) {
            Some(BuiltCategory::Vect(c)) => PresheafCat::new(c.clone()).map_err(at(d.category.pos))?,
            Some(BuiltCategory::Chain(_)) => return Err(d.category.pos.error("presheaves are only supported over finvect categories")),
            None => return Err(d.category.pos.error(format!("unknown category `{}`", d.category.text))),
        };
        presheaves.push((d.name.text.clone(), d.category.text.clone(), build_presheaf(fp, &ps, d)?));
    }
    Ok(Built {
        fp,
        categories,
        presheaves,
    })
}

/// For the `i`-th associativity diagram of a FinVect category, the first
/// basis triple `h ⊗ g ⊗ f` on which the two sides differ.
fn basis_triple(cat: &VCategory<FinVect>, i: usize, lhs: &FpMatrix, rhs: &FpMatrix) -> Option<String> {
    let n = cat.len();
    if i >= n.pow(4) {
        return None;
    }
    let (a, b, c, d) = (i / n.pow(3), i / n.pow(2) % n, i / n % n, i % n);
    let (bc, ab) = (cat.hom(b, c).dim, cat.hom(a, b).dim);
    let col = (0..lhs.cols()).find(|&j| (0..lhs.rows()).any(|r| lhs.get(r, j) != rhs.get(r, j)))?;
    Some(format!(
        "basis triple (e{} in C({}, {}), e{} in C({}, {}), e{} in C({}, {}))",
        col / (bc * ab),
        cat.label(c),
        cat.label(d),
        col / ab % bc,
        cat.label(b),
        cat.label(c),
        col % ab,
        cat.label(a),
        cat.label(b)
    ))
}

fn axioms_check<C: Cosmos>(
    name: &str,
    cat: &VCategory<C>,
    locate: impl Fn(usize, &FpMatrix, &FpMatrix) -> Option<String>,
) -> CheckResult {
    let c = cat.cosmos();
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    for (i, (diagram, lhs, rhs)) in cat.axiom_diagrams().into_iter().enumerate() {
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                let (lm, rm) = (c.matrix(&l), c.matrix(&r));
                if l == r {
                    certs.push(Certificate::Equal {
                        label: diagram,
                        lhs: lm,
                        rhs: rm,
                    });
                } else {
                    failing.push(match locate(i, &lm, &rm) {
                        Some(at) => format!("{diagram} at {at}"),
                        None => diagram.clone(),
                    });
                    certs.push(Certificate::Distinct {
                        label: diagram,
                        lhs: lm,
                        rhs: rm,
                    });
                }
            }
            (l, r) => {
                let e = l.err().or(r.err()).expect("one side failed");
                failing.push(format!("{diagram} ({e})"));
            }
        }
    }
    let detail = if failing.is_empty() {
        format!("{} diagrams commute", certs.len())
    } else {
        format!("fails: {}", failing.join(", "))
    };
    CheckResult::new(
        format!("axioms:{name}"),
        format!("{name} satisfies the associativity and unit axioms"),
        Verdict::from_bool(failing.is_empty()),
        detail,
        certs,
    )
}

struct Ctx<'a> {
    s: &'a Scenario,
    built: &'a Built,
    seed: u64,
    max_dim: usize,
    inventory: Vec<PresheafRecord>,
}

impl Ctx<'_> {
    fn target<'t>(&self, c: &'t CheckDecl) -> Result<&'t Token> {
        c.target
            .as_ref()
            .ok_or_else(|| c.kind.pos.error(format!("check `{}` needs a category", c.kind.text)))
    }

    fn category(&self, c: &CheckDecl) -> Result<(&str, &BuiltCategory)> {
        let t = self.target(c)?;
        self.built
            .categories
            .get_key_value(&t.text)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| t.pos.error(format!("unknown category `{}`", t.text)))
    }

    fn vect(&self, c: &CheckDecl) -> Result<(&str, &VCategory<FinVect>)> {
        match self.category(c)? {
            (name, BuiltCategory::Vect(v)) => Ok((name, v)),
            (name, BuiltCategory::Chain(_)) => Err(self.target(c)?.pos.error(format!(
                "check `{}` needs a finvect category; `{name}` is chain-enriched",
                c.kind.text
            ))),
        }
    }

    fn declared_on(&self, cat: &str) -> Vec<(String, Presheaf)> {
        self.built
            .presheaves
            .iter()
            .filter(|(_, c, _)| c == cat)
            .map(|(n, _, p)| (n.clone(), p.clone()))
            .collect()
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(index as u64))
    }

    /// Representables, declared presheaves and `random` random ones.
    fn probes(&mut self, name: &str, ps: &PresheafCat, random: usize, index: usize) -> Result<Vec<(String, Presheaf)>> {
        let c = ps.base();
        let mut out: Vec<(String, Presheaf)> = (0..c.len())
            .map(|a| Ok((format!("y({})", c.label(a)), ps.yoneda_object(a)?)))
            .collect::<Result<_>>()?;
        out.extend(self.declared_on(name));
        let mut rng = self.rng(index);
        for i in 0..random {
            let p = ps.random_functor(&mut rng, 2, 1)?;
            self.inventory.push(PresheafRecord::new(format!("check {index}: random-{i} on {name}"), &p));
            out.push((format!("random-{i}"), p));
        }
        Ok(out)
    }

    fn run_check(&mut self, index: usize, c: &CheckDecl) -> Result<Vec<CheckResult>> {
        let kind = c.kind.text.as_str();
        match kind {
            "axioms" => Ok(vec![match self.category(c)? {
                (name, BuiltCategory::Vect(v)) => axioms_check(name, v, |i, l, r| basis_triple(v, i, l, r)),
                (name, BuiltCategory::Chain(v)) => axioms_check(name, v, |_, _, _| None),
            }]),
            "cosmos-laws" => {
                let dim = c.usize_arg("max-dim", if self.s.cosmos == CosmosDecl::FinVect { 3 } else { 2 })?;
                let terms = c.usize_arg("terms", 3)?;
                let fp = self.built.fp;
                Ok(vec![match self.s.cosmos {
                    CosmosDecl::FinVect => {
                        let v = FinVect::new(fp);
                        cosmos_laws(&v, &LawFamily::exhaustive(&v, (0..=dim).map(|d| v.obj(d)).collect())?)
                    }
                    CosmosDecl::Chain { .. } => {
                        let chain = &ChainCosmos::new(self.built.fp);
                        let mut family = LawFamily::exhaustive(chain, complexes_up_to_iso(fp, terms, dim, &[0])?)?;
                        family.small = complexes_up_to_iso(fp, terms, dim, &[-1, 0])?
                            .into_iter()
                            .filter(|x| x.total_dim() <= 2)
                            .collect();
                        cosmos_laws(chain, &family)
                    }
                }])
            }
            "dualizable" => {
                let dim = c.usize_arg("max-dim", 4)?;
                Ok(vec![match self.s.cosmos {
                    CosmosDecl::FinVect => {
                        let v = FinVect::new(self.built.fp);
                        let pairs = (0..=dim)
                            .map(|d| Ok((format!("F_p^{d}"), v.dual_pair(v.obj(d))?)))
                            .collect::<Result<Vec<_>>>()?;
                        dualizability(&v, &pairs)
                    }
                    CosmosDecl::Chain { .. } => {
                        let chain = &ChainCosmos::new(self.built.fp);
                        let mut pairs = Vec::new();
                        for d in 1..=dim {
                            for shift in -1..=1 {
                                let x = CosmosObject::new(d);
                                pairs.push((format!("S(F_p^{d})[{shift}]"), chain.chain_dual_pair(&chain.sphere(x).shift(shift))?));
                                pairs.push((format!("D(F_p^{d})[{shift}]"), chain.chain_dual_pair(&chain.disk(x).shift(shift))?));
                            }
                        }
                        dualizability(chain, &pairs)
                    }
                }])
            }
            "yoneda" => {
                let (name, cat) = self.vect(c)?;
                let (name, cat) = (name.to_string(), cat.clone());
                let ps = PresheafCat::new(cat)?;
                let probes = self.probes(&name, &ps, c.usize_arg("random", 0)?, index)?;
                let mut certs = Vec::new();
                for (label, p) in &probes {
                    for obj in 0..ps.base().len() {
                        let iso = ps.yoneda_iso(p, obj)?;
                        certs.push(Certificate::Inverse {
                            label: format!("[C^op,V](y({}), {label}) to {label}({})", ps.base().label(obj), ps.base().label(obj)),
                            matrix: iso.forward,
                            inverse: iso.backward,
                        });
                    }
                }
                Ok(vec![CheckResult::new(
                    format!("yoneda:{name}"),
                    format!("evaluation at the identity is an isomorphism [C^op,V](y(c), P) to P(c) on {name}"),
                    Verdict::Pass,
                    format!("{} presheaves, {} isomorphisms", probes.len(), certs.len()),
                    certs,
                )])
            }
            "adjunction" => {
                let (name, cat) = self.vect(c)?;
                let (name, cat) = (name.to_string(), cat.clone());
                let ps = PresheafCat::new(cat)?;
                let nr = NerveRealization::new(PresheafFunctor::yoneda(&ps)?)?;
                let probes: Vec<Presheaf> = self
                    .probes(&name, &ps, c.usize_arg("random", 2)?, index)?
                    .into_iter()
                    .map(|(_, p)| p)
                    .collect();
                let w = nr.witness(&probes, &probes)?;
                let mut certs: Vec<Certificate> = w
                    .hom_isos
                    .iter()
                    .map(|h| Certificate::Inverse {
                        label: format!("hom isomorphism at probe pair ({}, {})", h.p, h.q),
                        matrix: h.matrix.clone(),
                        inverse: h.inverse.clone(),
                    })
                    .collect();
                let mut ok = true;
                for (i, p) in probes.iter().enumerate() {
                    for (what, m) in [("unit", nr.unit(p)?), ("counit", nr.counit(p)?)] {
                        let cert = Certificate::for_morphism(format!("{what} at probe {i}"), &m);
                        ok &= cert.is_inverse();
                        certs.push(cert);
                    }
                }
                Ok(vec![CheckResult::new(
                    format!("adjunction:{name}"),
                    format!("realization along the Yoneda embedding of {name} is left adjoint to the nerve, with invertible unit and counit"),
                    Verdict::from_bool(ok),
                    format!("{} naturality squares, {} triangle identities", w.naturality_squares, w.triangles),
                    certs,
                )])
            }
            "gp" => self.gp(c),
            "change-of-base" => {
                let (name, cat) = match self.category(c)? {
                    (name, BuiltCategory::Chain(v)) => (name.to_string(), v.clone()),
                    (name, BuiltCategory::Vect(_)) => {
                        return Err(self.target(c)?.pos.error(format!("`{name}` is not chain-enriched")))
                    }
                };
                let dims = match c.list_arg("dims") {
                    None => vec![0, 1, 2],
                    Some(v) => v
                        .iter()
                        .map(|d| d.parse().map_err(|_| c.arg("dims").expect("present").pos.error(format!("bad dimension `{d}`"))))
                        .collect::<Result<_>>()?,
                };
                let mut complexes: Vec<ChainComplex> = Vec::new();
                for a in 0..cat.len() {
                    for b in 0..cat.len() {
                        if !complexes.contains(cat.hom(a, b)) {
                            complexes.push(cat.hom(a, b).clone());
                        }
                    }
                }
                let probes = CobProbes { dims, complexes };
                Ok(change_of_base_checks(&cat, &probes, self.max_dim)
                    .into_iter()
                    .map(|mut r| {
                        r.id = format!("{}:{name}", r.id);
                        r
                    })
                    .collect())
            }
            other => Err(c.kind.pos.error(format!("unknown check `{other}`"))),
        }
    }

    fn gp(&mut self, c: &CheckDecl) -> Result<Vec<CheckResult>> {
        let (name, cat) = self.vect(c)?;
        let (name, cat) = (name.to_string(), cat.clone());
        let ps = PresheafCat::new(cat.clone())?;
        let declared = self.declared_on(&name);
        let generators = c.arg("generators").map_or("representables", |t| t.text.as_str());
        let representables: Vec<Presheaf> = (0..cat.len()).map(|a| ps.yoneda_object(a)).collect::<Result<_>>()?;
        let (c_objects, gens) = match generators {
            "representables" => (None, representables),
            "sum" => {
                let (g, _, _) = ps.direct_sum(&representables)?;
                (Some(vec![("G".to_string(), g.clone())]), vec![g])
            }
            list => {
                let t = c.arg("generators").expect("given");
                let objs = list
                    .split(',')
                    .map(|n| {
                        declared
                            .iter()
                            .find(|(d, _)| d == n)
                            .cloned()
                            .ok_or_else(|| t.pos.error(format!("unknown presheaf `{n}` on `{name}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let gens = objs.iter().map(|(_, p)| p.clone()).collect();
                (Some(objs), gens)
            }
        };
        let special = SpecialProbes {
            objects: declared,
            ..SpecialProbes::default()
        };
        let cfg = ProbeConfig {
            seed: self.seed,
            random_objects: c.usize_arg("objects", self.s.probe_objects)?,
            random_morphisms: c.usize_arg("morphisms", self.s.probe_morphisms)?,
            max_dim: self.max_dim,
        };
        let inst = build_instance(&format!("{name} with generators {generators}"), cat, c_objects, gens, special, &cfg)?;
        let report = gabriel_popescu_verify(&inst);
        for r in report.probes.presheaves {
            self.inventory.push(PresheafRecord {
                label: format!("gp {name}: {}", r.label),
                ..r
            });
        }
        Ok(report
            .checks
            .into_iter()
            .map(|mut r| {
                r.id = format!("gp:{name}:{}", r.id);
                r
            })
            .collect())
    }
}

/// Parses nothing; runs every declared check in order. Resolution errors
/// (unknown names, malformed matrices) are returned as parse errors; a
/// check that cannot complete is recorded as a failing verdict.
pub fn run(s: &Scenario, opts: &Options) -> Result<HarnessReport> {
    let built = build(s)?;
    let seed = opts.seed.unwrap_or(s.seed);
    let mut ctx = Ctx {
        s,
        built: &built,
        seed,
        max_dim: opts.max_dim.unwrap_or(s.max_dim),
        inventory: Vec::new(),
    };
    for (name, _, p) in &built.presheaves {
        ctx.inventory.push(PresheafRecord::new(name.clone(), p));
    }
    let mut checks = Vec::new();
    for (i, c) in s.checks.iter().enumerate() {
        match ctx.run_check(i, c) {
            Ok(rs) => checks.extend(rs),
            Err(e @ Error::Parse { .. }) => return Err(e),
            Err(e) => {
                let id = match &c.target {
                    Some(t) => format!("{}:{}", c.kind.text, t.text),
                    None => c.kind.text.clone(),
                };
                checks.push(CheckResult::errored(id, format!("check `{}` completes", c.kind.text), &e));
            }
        }
    }
    Ok(HarnessReport {
        title: s.name.clone(),
        checks,
        probes: ProbeInventory {
            seed: Some(seed),
            notes: vec![format!("modulus {}", s.modulus), format!("max-dim {}", ctx.max_dim)],
            presheaves: ctx.inventory,
        },
    })
}
