use std::collections::HashMap;

use serde::Serialize;

use super::ordinary::{Arrow, FiniteCategory};
use crate::cosmos::{compose_chain, Cosmos};
use crate::error::{shape, Error, Result};
use crate::linalg::{enumerate_vectors, FpMatrix};

/// Default cap on hom dimensions when enumerating underlying hom-sets.
pub const DEFAULT_ENUMERATION_DIM: usize = 6;

/// One diagram that failed to commute, with both composites rendered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramFailure {
    pub diagram: String,
    pub lhs: String,
    pub rhs: String,
}

/// Every failing diagram; empty means the structure is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub failures: Vec<DiagramFailure>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn compare<M: PartialEq + std::fmt::Debug>(&mut self, diagram: impl Into<String>, lhs: Result<M>, rhs: Result<M>) {
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(l), Ok(r)) => self.failures.push(DiagramFailure {
                diagram: diagram.into(),
                lhs: format!("{l:?}"),
                rhs: format!("{r:?}"),
            }),
            (l, r) => self.failures.push(DiagramFailure {
                diagram: format!("structure: {}", diagram.into()),
                lhs: l.err().map(|e| e.to_string()).unwrap_or_default(),
                rhs: r.err().map(|e| e.to_string()).unwrap_or_default(),
            }),
        }
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.failures.extend(other.failures);
    }

    pub fn into_result(self, what: &str) -> Result<()> {
        match self.failures.first() {
            None => Ok(()),
            Some(f) => Err(Error::Verification(format!("{what}: {} fails", f.diagram))),
        }
    }
}

/// A finite category enriched in `C`: hom objects, composition
/// `m_{abc} : C(b,c)⊗C(a,b) → C(a,c)` and identities `j_a : I → C(a,a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VCategory<C: Cosmos> {
    cosmos: C,
    labels: Vec<String>,
    homs: Vec<C::Object>,
    comps: Vec<C::Morphism>,
    idents: Vec<C::Morphism>,
}

impl<C: Cosmos> VCategory<C> {
    /// Assembles a V-category; only the shapes are checked here, the axioms
    /// by [`VCategory::check_axioms`].
    pub fn new(
        cosmos: C,
        labels: Vec<String>,
        mut hom: impl FnMut(usize, usize) -> Result<C::Object>,
        mut comp: impl FnMut(usize, usize, usize) -> Result<C::Morphism>,
        mut ident: impl FnMut(usize) -> Result<C::Morphism>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidCategory("object labels must be distinct".into()));
        }
        let mut homs = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                homs.push(hom(a, b)?);
            }
        }
        let mut comps = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let m = comp(a, b, c)?;
                    let src = cosmos.tensor(&homs[b * n + c], &homs[a * n + b])?;
                    if cosmos.source(&m) != src || cosmos.target(&m) != homs[a * n + c] {
                        return Err(shape("composition", format!("m at ({}, {}, {})", labels[a], labels[b], labels[c])));
                    }
                    comps.push(m);
                }
            }
        }
        let mut idents = Vec::with_capacity(n);
        for a in 0..n {
            let j = ident(a)?;
            if cosmos.source(&j) != cosmos.unit() || cosmos.target(&j) != homs[a * n + a] {
                return Err(shape("identity", format!("j at {}", labels[a])));
            }
            idents.push(j);
        }
        Ok(Self {
            cosmos,
            labels,
            homs,
            comps,
            idents,
        })
    }

    pub fn cosmos(&self) -> &C {
        &self.cosmos
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownObject(label.to_string()))
    }

    pub fn hom(&self, a: usize, b: usize) -> &C::Object {
        &self.homs[a * self.len() + b]
    }

    pub fn comp(&self, a: usize, b: usize, c: usize) -> &C::Morphism {
        let n = self.len();
        &self.comps[(a * n + b) * n + c]
    }

    pub fn ident(&self, a: usize) -> &C::Morphism {
        &self.idents[a]
    }

    /// Replaces one composition morphism (shape-checked). Used to build
    /// negative controls.
    pub fn set_comp(&mut self, a: usize, b: usize, c: usize, m: C::Morphism) -> Result<()> {
        let src = self.cosmos.tensor(self.hom(b, c), self.hom(a, b))?;
        if self.cosmos.source(&m) != src || self.cosmos.target(&m) != *self.hom(a, c) {
            return Err(shape("composition", "replacement has the wrong shape"));
        }
        let n = self.len();
        self.comps[(a * n + b) * n + c] = m;
        Ok(())
    }

    /// Both sides of every associativity and unit diagram, by name.
    #[allow(clippy::type_complexity)]
    pub fn axiom_diagrams(&self) -> Vec<(String, Result<C::Morphism>, Result<C::Morphism>)> {
        let c = &self.cosmos;
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    for d in 0..n {
                        let name = format!(
                            "associativity ({}, {}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[cc], self.labels[d]
                        );
                        let (cd, bc, ab) = (self.hom(cc, d), self.hom(b, cc), self.hom(a, b));
                        let lhs = (|| {
                            let step = c.tensor_mor(self.comp(b, cc, d), &c.identity(ab))?;
                            c.compose(self.comp(a, b, d), &step)
                        })();
                        let rhs = (|| {
                            let assoc = c.associator(cd, bc, ab)?;
                            let step = c.tensor_mor(&c.identity(cd), self.comp(a, b, cc))?;
                            compose_chain(c, &[assoc, step, self.comp(a, cc, d).clone()])
                        })();
                        out.push((name, lhs, rhs));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.hom(a, b);
                let lhs = (|| {
                    let step = c.tensor_mor(self.ident(b), &c.identity(ab))?;
                    c.compose(self.comp(a, b, b), &step)
                })();
                out.push((format!("left unit ({}, {})", self.labels[a], self.labels[b]), lhs, c.left_unitor(ab)));
                let rhs_unit = (|| {
                    let step = c.tensor_mor(&c.identity(ab), self.ident(a))?;
                    c.compose(self.comp(a, a, b), &step)
                })();
                out.push((format!("right unit ({}, {})", self.labels[a], self.labels[b]), rhs_unit, c.right_unitor(ab)));
            }
        }
        out
    }

    /// Associativity for every triple of composable homs and both unit laws
    /// for every pair.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        for (name, lhs, rhs) in self.axiom_diagrams() {
            report.compare(name, lhs, rhs);
        }
        report
    }

    /// The unit V-category: one object, hom `I`, composition `l_I`.
    pub fn unit(cosmos: C) -> Result<Self> {
        let i = cosmos.unit();
        let l = cosmos.left_unitor(&i)?;
        let id = cosmos.identity(&i);
        Self::new(cosmos, vec!["*".into()], |_, _| Ok(i.clone()), |_, _, _| Ok(l.clone()), |_| Ok(id.clone()))
    }

    /// `C^op(a,b) = C(b,a)` with `m^op_{abc} = m_{cba} ∘ c`.
    pub fn opposite(&self) -> Result<Self> {
        let c = self.cosmos.clone();
        Self::new(
            c.clone(),
            self.labels.clone(),
            |a, b| Ok(self.hom(b, a).clone()),
            |a, b, cc| {
                let sym = c.symmetry(self.hom(cc, b), self.hom(b, a))?;
                c.compose(self.comp(cc, b, a), &sym)
            },
            |a| Ok(self.ident(a).clone()),
        )
    }

    /// Objects are pairs `(c, d)` labelled `c|d`; homs are tensor products and
    /// composition goes through the middle-four interchange.
    pub fn tensor_vcat(&self, other: &Self) -> Result<Self> {
        let c = self.cosmos.clone();
        let m = other.len();
        let labels: Vec<String> = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}|{b}")))
            .collect();
        let split = |x: usize| (x / m, x % m);
        let i = c.unit();
        let l_inv = c.inverse_or_err(&c.left_unitor(&i)?, "l_I")?;
        Self::new(
            c.clone(),
            labels,
            |x, y| {
                let ((a, b), (a2, b2)) = (split(x), split(y));
                c.tensor(self.hom(a, a2), other.hom(b, b2))
            },
            |x, y, z| {
                let ((a, b), (a2, b2), (a3, b3)) = (split(x), split(y), split(z));
                let interchange = middle_four(
                    &c,
                    self.hom(a2, a3),
                    other.hom(b2, b3),
                    self.hom(a, a2),
                    other.hom(b, b2),
                )?;
                let mm = c.tensor_mor(self.comp(a, a2, a3), other.comp(b, b2, b3))?;
                c.compose(&mm, &interchange)
            },
            |x| {
                let (a, b) = split(x);
                let jj = c.tensor_mor(self.ident(a), other.ident(b))?;
                c.compose(&jj, &l_inv)
            },
        )
    }

    /// The full sub-V-category of the cosmos itself on the given objects.
    pub fn full_sub_cosmos(cosmos: C, labels: Vec<String>, objects: Vec<C::Object>) -> Result<Self> {
        if labels.len() != objects.len() {
            return Err(shape("full sub-cosmos", "one label per object"));
        }
        let c = cosmos.clone();
        Self::new(
            cosmos,
            labels,
            |a, b| c.internal_hom(&objects[a], &objects[b]),
            |a, b, d| c.internal_compose(&objects[a], &objects[b], &objects[d]),
            |a| c.internal_identity(&objects[a]),
        )
    }

    /// The free V-category: `L_V(a,b) = I^{⊕ Hom_L(a,b)}`, composition
    /// permuting basis vectors as `L` composes arrows.
    pub fn free(cosmos: C, l: &FiniteCategory) -> Result<Self> {
        let fp = cosmos.field();
        let c = cosmos.clone();
        Self::new(
            cosmos,
            l.objects().to_vec(),
            |a, b| Ok(c.discrete(l.hom(a, b).len())),
            |a, b, d| {
                let (bc, ab, ac) = (l.hom(b, d), l.hom(a, b), l.hom(a, d));
                let mut m = FpMatrix::zeros(fp, ac.len(), bc.len() * ab.len());
                for (gi, &g) in bc.iter().enumerate() {
                    for (fi, &f) in ab.iter().enumerate() {
                        let h = l.compose(g, f).ok_or_else(|| shape("free V-category", "arrows not composable"))?;
                        let hi = ac.iter().position(|&x| x == h).expect("composite lies in the hom-set");
                        m.set(hi, gi * ab.len() + fi, 1);
                    }
                }
                c.discrete_mor(&m)
            },
            |a| {
                let aa = l.hom(a, a);
                let k = aa.iter().position(|&x| x == l.identity(a)).expect("identity lies in End(a)");
                c.discrete_mor(&FpMatrix::from_fn(fp, aa.len(), 1, |r, _| u32::from(r == k)))
            },
        )
    }

    /// All morphisms `I → C(a,b)` for every pair, with composition induced by
    /// `m` and identities by `j`. Fails if some hom has more than `max_dim`
    /// dimensions.
    pub fn underlying(&self, max_dim: usize) -> Result<Underlying<C>> {
        let c = &self.cosmos;
        let n = self.len();
        let fp = c.field();
        let i = c.unit();
        let l_inv = c.inverse_or_err(&c.left_unitor(&i)?, "l_I")?;
        let mut arrows = Vec::new();
        let mut elements = Vec::new();
        let mut coords: HashMap<(usize, usize, Vec<u32>), usize> = HashMap::new();
        let mut identities = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                let hom = self.hom(a, b);
                let basis = c.global_elements(hom)?;
                if basis.len() > max_dim {
                    return Err(Error::EnumerationCap(format!(
                        "hom ({}, {}) has dimension {} > {}",
                        self.labels[a],
                        self.labels[b],
                        basis.len(),
                        max_dim
                    )));
                }
                for v in enumerate_vectors(fp, basis.len(), usize::MAX)? {
                    let mut e = c.zero(&i, hom);
                    for (k, &x) in v.iter().enumerate() {
                        if x != 0 {
                            e = c.add(&e, &c.scale(x, &basis[k]))?;
                        }
                    }
                    let name = format!("{}→{}#{}", self.labels[a], self.labels[b], elements.len());
                    coords.insert((a, b, v), arrows.len());
                    arrows.push(Arrow { name, src: a, dst: b });
                    elements.push(e);
                }
            }
            let j = self.ident(a);
            let key = (a, a, c.global_coordinates(self.hom(a, a), j)?);
            identities[a] = coords[&key];
        }
        let mut table = HashMap::new();
        for (gi, g) in elements.iter().enumerate() {
            for (fi, f) in elements.iter().enumerate() {
                if arrows[fi].dst != arrows[gi].src {
                    continue;
                }
                let (a, b, d) = (arrows[fi].src, arrows[fi].dst, arrows[gi].dst);
                let gf = compose_chain(c, &[l_inv.clone(), c.tensor_mor(g, f)?, self.comp(a, b, d).clone()])?;
                let key = (a, d, c.global_coordinates(self.hom(a, d), &gf)?);
                table.insert((gi, fi), coords[&key]);
            }
        }
        let category = FiniteCategory::new(self.labels.clone(), arrows, identities, |g, f| table[&(g, f)])?;
        Ok(Underlying {
            category,
            elements,
            coordinates: coords,
        })
    }
}

/// `(A⊗B)⊗(C⊗D) → (A⊗C)⊗(B⊗D)`
pub fn middle_four<C: Cosmos>(
    c: &C,
    a: &C::Object,
    b: &C::Object,
    x: &C::Object,
    d: &C::Object,
) -> Result<C::Morphism> {
    let xd = c.tensor(x, d)?;
    let bd = c.tensor(b, d)?;
    let ia = c.identity(a);
    compose_chain(
        c,
        &[
            c.associator(a, b, &xd)?,
            c.tensor_mor(&ia, &c.inverse_or_err(&c.associator(b, x, d)?, "a")?)?,
            c.tensor_mor(&ia, &c.tensor_mor(&c.symmetry(b, x)?, &c.identity(d))?)?,
            c.tensor_mor(&ia, &c.associator(x, b, d)?)?,
            c.inverse_or_err(&c.associator(a, x, &bd)?, "a")?,
        ],
    )
}

/// The underlying ordinary category, with the cosmos morphism behind each
/// arrow.
#[derive(Clone, Debug)]
pub struct Underlying<C: Cosmos> {
    pub category: FiniteCategory,
    pub elements: Vec<C::Morphism>,
    coordinates: HashMap<(usize, usize, Vec<u32>), usize>,
}

impl<C: Cosmos> Underlying<C> {
    /// The arrow index of a global element of `C(a,b)`.
    pub fn arrow_of(&self, cosmos: &C, hom: &C::Object, a: usize, b: usize, e: &C::Morphism) -> Result<usize> {
        let v = cosmos.global_coordinates(hom, e)?;
        self.coordinates
            .get(&(a, b, v))
            .copied()
            .ok_or_else(|| Error::Verification("element not in the enumerated hom-set".into()))
    }
}
