//! Coherence and dualizability checks on explicit families of objects.

use crate::cosmos::{coherence, ChainComplex, Cosmos, DualPairWitness};
use crate::error::Result;
use crate::linalg::{Fp, FpMatrix};

use super::report::{Certificate, CheckResult, Verdict};

/// One complex per isomorphism class with at most `max_terms` terms, each
/// of dimension at most `max_dim`, starting in each degree of `los`.
/// Differentials are in normal form: `d^k` sends the basis vectors after
/// the image of `d^{k−1}` onto the first basis vectors of the next term.
pub fn complexes_up_to_iso(fp: Fp, max_terms: usize, max_dim: usize, los: &[i32]) -> Result<Vec<ChainComplex>> {
    fn shapes(len: usize, max_dim: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for k in 0..len {
            let lo = usize::from(k == 0 || k + 1 == len);
            out = out
                .into_iter()
                .flat_map(|s| (lo..=max_dim).map(move |d| [s.clone(), vec![d]].concat()))
                .collect();
        }
        out
    }
    fn ranks(dims: &[usize]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![vec![]];
        for k in 0..dims.len().saturating_sub(1) {
            out = out
                .into_iter()
                .flat_map(|r| {
                    let used = r.last().copied().unwrap_or(0);
                    let max = (dims[k] - used).min(dims[k + 1]);
                    (0..=max).map(move |x| [r.clone(), vec![x]].concat())
                })
                .collect();
        }
        out
    }
    let mut out = Vec::new();
    for &lo in los {
        for len in 1..=max_terms {
            for dims in shapes(len, max_dim) {
                for rs in ranks(&dims) {
                    let diffs = (0..len - 1)
                        .map(|k| {
                            let before = if k == 0 { 0 } else { rs[k - 1] };
                            FpMatrix::from_fn(fp, dims[k + 1], dims[k], |r, c| u32::from(c >= before && c - before == r && r < rs[k]))
                        })
                        .collect();
                    out.push(ChainComplex::new(fp, lo, dims.clone(), diffs)?);
                }
            }
        }
    }
    out.dedup();
    Ok(out)
}

/// The entries of every matrix, in order, as one row.
fn concat(fp: Fp, ms: &[FpMatrix]) -> FpMatrix {
    let entries: Vec<u32> = ms.iter().flat_map(|m| m.entries().iter().copied()).collect();
    FpMatrix::new(fp, 1, entries.len(), entries).expect("entries are reduced")
}

struct Law<'a, C: Cosmos> {
    cosmos: &'a C,
    name: &'static str,
    lhs: Vec<FpMatrix>,
    rhs: Vec<FpMatrix>,
    failures: usize,
    instances: usize,
}

impl<'a, C: Cosmos> Law<'a, C> {
    fn new(cosmos: &'a C, name: &'static str) -> Self {
        Self {
            cosmos,
            name,
            lhs: Vec::new(),
            rhs: Vec::new(),
            failures: 0,
            instances: 0,
        }
    }

    fn record(&mut self, sides: Result<(C::Morphism, C::Morphism)>) -> Result<()> {
        let (l, r) = sides?;
        self.instances += 1;
        if l != r {
            self.failures += 1;
        }
        self.lhs.push(self.cosmos.matrix(&l));
        self.rhs.push(self.cosmos.matrix(&r));
        Ok(())
    }

    fn certificate(self) -> (Certificate, usize, usize) {
        let fp = self.cosmos.field();
        let label = format!("{}: {} instances", self.name, self.instances);
        let (lhs, rhs) = (concat(fp, &self.lhs), concat(fp, &self.rhs));
        let cert = if self.failures == 0 {
            Certificate::Equal { label, lhs, rhs }
        } else {
            Certificate::Distinct { label, lhs, rhs }
        };
        (cert, self.instances, self.failures)
    }
}

/// Objects to run the coherence laws over: unary and binary laws use
/// `objects`, the pentagon and hexagon use `small`.
pub struct LawFamily<C: Cosmos> {
    pub objects: Vec<C::Object>,
    pub small: Vec<C::Object>,
    /// Morphisms `f : X⊗Y → Z` given with `X` and `Y`, for the tensor-hom round trips.
    pub curry: Vec<(C::Object, C::Object, C::Morphism)>,
}

impl<C: Cosmos> LawFamily<C> {
    /// Every object in both roles, with `id` and `2·id` on each `X⊗Y` as
    /// round-trip probes.
    pub fn exhaustive(c: &C, objects: Vec<C::Object>) -> Result<Self> {
        let mut curry = Vec::new();
        for x in &objects {
            for y in &objects {
                let id = c.identity(&c.tensor(x, y)?);
                curry.push((x.clone(), y.clone(), c.scale(2, &id)));
                curry.push((x.clone(), y.clone(), id));
            }
        }
        Ok(Self {
            small: objects.clone(),
            objects,
            curry,
        })
    }
}

fn laws_inner<C: Cosmos>(c: &C, family: &LawFamily<C>) -> Result<CheckResult> {
    let mut pentagon = Law::new(c, "pentagon");
    let mut hexagon = Law::new(c, "hexagon");
    let mut triangle = Law::new(c, "triangle");
    let mut involution = Law::new(c, "symmetry involution");
    let mut unit = Law::new(c, "l_I = r_I");
    unit.record(coherence::unit_coincidence(c))?;
    for x in &family.objects {
        for y in &family.objects {
            triangle.record(coherence::triangle(c, x, y))?;
            involution.record(coherence::symmetry_involution(c, x, y))?;
        }
    }
    for w in &family.small {
        for x in &family.small {
            for y in &family.small {
                hexagon.record(coherence::hexagon(c, w, x, y))?;
                for z in &family.small {
                    pentagon.record(coherence::pentagon(c, w, x, y, z))?;
                }
            }
        }
    }
    let mut round_trips = 0;
    let mut failed_round_trips = 0;
    for (x, y, f) in &family.curry {
        round_trips += 1;
        if !coherence::curry_round_trip(c, x, y, f)? {
            failed_round_trips += 1;
        }
    }
    let mut certs = Vec::new();
    let mut failures = failed_round_trips;
    let mut counts = Vec::new();
    for law in [pentagon, hexagon, triangle, involution, unit] {
        let name = law.name;
        let (cert, n, bad) = law.certificate();
        counts.push(format!("{name} {n}"));
        failures += bad;
        certs.push(cert);
    }
    counts.push(format!("tensor-hom round trips {round_trips}"));
    Ok(CheckResult::new(
        "cosmos-laws",
        format!("{}: coherence diagrams commute and currying is bijective", c.name()),
        Verdict::from_bool(failures == 0),
        format!("{}; {failures} failures", counts.join(", ")),
        certs,
    ))
}

/// Pentagon, hexagon, triangle, symmetry involution, unit coincidence and
/// tensor-hom round trips over the family.
pub fn cosmos_laws<C: Cosmos>(c: &C, family: &LawFamily<C>) -> CheckResult {
    laws_inner(c, family).unwrap_or_else(|e| CheckResult::errored("cosmos-laws", "coherence diagrams commute", &e))
}

/// Both triangle identities for each dual pair.
pub fn dualizability<C: Cosmos>(c: &C, pairs: &[(String, DualPairWitness<C>)]) -> CheckResult {
    let run = || -> Result<CheckResult> {
        let mut certs = Vec::new();
        let mut failing = Vec::new();
        for (label, w) in pairs {
            for (which, zz, id) in [
                ("first", w.first_zigzag(c)?, c.identity(&w.x)),
                ("second", w.second_zigzag(c)?, c.identity(&w.y)),
            ] {
                let (lhs, rhs) = (c.matrix(&zz), c.matrix(&id));
                let label = format!("{label}: {which} zig-zag");
                if zz == id {
                    certs.push(Certificate::Equal { label, lhs, rhs });
                } else {
                    failing.push(label.clone());
                    certs.push(Certificate::Distinct { label, lhs, rhs });
                }
            }
        }
        let detail = if failing.is_empty() {
            format!("{} dual pairs", pairs.len())
        } else {
            format!("failing: {}", failing.join(", "))
        };
        Ok(CheckResult::new(
            "dualizable",
            format!("{}: unit and counit satisfy the triangle identities", c.name()),
            Verdict::from_bool(failing.is_empty()),
            detail,
            certs,
        ))
    };
    run().unwrap_or_else(|e| CheckResult::errored("dualizable", "triangle identities", &e))
}
