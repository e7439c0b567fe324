use crate::enriched::{FiniteCategory, VCategory};
use crate::error::{Error, Result};
use crate::kan::{is_fully_faithful, NerveRealization};
use crate::limits::{
    colimit_universal_map, conical_colimit, conical_limit, constant_weight, limit_universal_map, weighted_colimit, weighted_limit,
    PresheafFunctor,
};
use crate::linalg::FpMatrix;
use crate::presheaf::{FunctorCat, FunctorMorphism, Presheaf, PresheafCat};

use super::checks::{
    check_jointly_conservative, check_jointly_faithful, filtered_exactness_probe, homomorphism_theorem_check, left_exactness_check,
    FilteredDiagram, FiniteWeightFamily, GeneratorProbe,
};
use super::report::{Certificate, CheckResult, HarnessReport, ProbeInventory, Verdict, FILTERED_SCOPE};

/// Everything a Gabriel–Popescu run needs: the functor `F : C → A` and the
/// probe families each condition is checked on.
#[derive(Clone, Debug)]
pub struct GpInstance {
    pub title: String,
    pub realization: NerveRealization,
    pub generators: GeneratorProbe,
    /// Presheaves on `C`, for the adjunction and left exactness of `S`.
    pub source_probes: Vec<Presheaf>,
    /// Objects of `A`.
    pub target_probes: Vec<Presheaf>,
    pub exactness_family: FiniteWeightFamily,
    /// Morphisms of `A`, for the homomorphism theorem and finite limits.
    pub morphisms: Vec<(Presheaf, Presheaf, FunctorMorphism)>,
    pub cotensor_dims: Vec<usize>,
    pub filtered: Vec<(FiniteCategory, Vec<FilteredDiagram>)>,
    /// Index categories that must be rejected as not filtered.
    pub rejected: Vec<FiniteCategory>,
    pub max_dim: usize,
    pub inventory: ProbeInventory,
}

/// `T_{Q,Q'} : A(Q, Q') → [C^op,V](T Q, T Q')` in hom-object coordinates.
pub fn nerve_hom_matrix(nr: &NerveRealization, q: &Presheaf, q2: &Presheaf) -> Result<FpMatrix> {
    let a = nr.target();
    let src = a.functor_hom(q, q2)?;
    let (tq, tq2) = (nr.nerve(q)?, nr.nerve(q2)?);
    let dst = nr.source().functor_hom(&tq, &tq2)?;
    let mut m = FpMatrix::zeros(a.fp(), dst.dim(), src.dim());
    for (k, h) in src.basis()?.iter().enumerate() {
        m.paste(0, k, &FpMatrix::column(a.fp(), &dst.coords(&nr.nerve_map(q, q2, h)?)?));
    }
    Ok(m)
}

fn left_inverse_certificate(label: String, m: FpMatrix) -> Certificate {
    match m.left_inverse() {
        Some(inverse) => Certificate::LeftInverse { label, matrix: m, inverse },
        None => Certificate::NotInvertible { label, matrix: m },
    }
}

fn t_fully_faithful(inst: &GpInstance) -> Result<(CheckResult, Vec<Certificate>)> {
    let mut certs = Vec::new();
    let mut faithful = Vec::new();
    let mut failing = Vec::new();
    let probes = &inst.target_probes;
    for (i, q) in probes.iter().enumerate() {
        for (j, q2) in probes.iter().enumerate() {
            let m = nerve_hom_matrix(&inst.realization, q, q2)?;
            faithful.push(left_inverse_certificate(format!("T on A(Q{i}, Q{j}) is injective"), m.clone()));
            let c = Certificate::for_matrix(format!("T on A(Q{i}, Q{j})"), m);
            if !c.is_inverse() {
                failing.push((i, j));
            }
            certs.push(c);
        }
    }
    let detail = if failing.is_empty() {
        format!("{} hom components inverted", certs.len())
    } else {
        format!("hom components not invertible at probe pairs {failing:?}")
    };
    Ok((
        CheckResult::new(
            "T-fully-faithful",
            "the nerve T = A(F-, ?) is fully faithful",
            Verdict::from_bool(failing.is_empty()),
            detail,
            certs,
        ),
        faithful,
    ))
}

fn adjunction_check(inst: &GpInstance) -> Result<CheckResult> {
    let ps: Vec<Presheaf> = inst.source_probes.iter().take(2).cloned().collect();
    let qs: Vec<Presheaf> = inst.target_probes.iter().take(2).cloned().collect();
    let w = inst.realization.witness(&ps, &qs)?;
    let certs = w
        .hom_isos
        .iter()
        .map(|h| Certificate::Inverse {
            label: format!("hom isomorphism at probe pair ({}, {})", h.p, h.q),
            matrix: h.matrix.clone(),
            inverse: h.inverse.clone(),
        })
        .collect();
    Ok(CheckResult::new(
        "adjunction",
        "S = Lan_y F is left adjoint to T with invertible hom isomorphisms",
        Verdict::Pass,
        format!("{} naturality squares and {} triangle identities commute", w.naturality_squares, w.triangles),
        certs,
    ))
}

/// `P ⇉ Q` along `(f, 0)` as a diagram out of the free parallel pair.
pub fn parallel_pair_diagram(a: &PresheafCat, p: &Presheaf, q: &Presheaf, f: &FunctorMorphism) -> Result<PresheafFunctor> {
    let l = FiniteCategory::parallel_pair();
    let arrows: Vec<FunctorMorphism> = l
        .arrows()
        .iter()
        .map(|arr| match (arr.src, arr.dst, arr.name.as_str()) {
            (0, 0, _) => a.identity(p),
            (1, 1, _) => a.identity(q),
            (_, _, "u") => f.clone(),
            _ => a.zero(p, q),
        })
        .collect();
    PresheafFunctor::from_ordinary(a, &l, vec![p.clone(), q.clone()], &arrows)
}

/// `P`, `Q` as a diagram out of the discrete category on two objects.
pub fn pair_diagram(a: &PresheafCat, p: &Presheaf, q: &Presheaf) -> Result<PresheafFunctor> {
    let l = FiniteCategory::discrete(&["p", "q"]);
    PresheafFunctor::from_ordinary(a, &l, vec![p.clone(), q.clone()], &[a.identity(p), a.identity(q)])
}

/// `P` as a diagram out of the unit V-category.
pub fn point_diagram(a: &PresheafCat, p: &Presheaf) -> Result<PresheafFunctor> {
    let unit = VCategory::unit(crate::cosmos::FinVect::new(a.fp()))?;
    PresheafFunctor::new(unit, a.clone(), vec![p.clone()], |_, _| Ok(vec![a.identity(p)]))
}

fn record_iso(certs: &mut Vec<Certificate>, failing: &mut Vec<String>, label: String, m: FpMatrix) {
    let c = Certificate::for_matrix(label.clone(), m);
    if !c.is_inverse() {
        failing.push(label);
    }
    certs.push(c);
}

fn cocompleteness(inst: &GpInstance) -> Result<CheckResult> {
    let a = inst.realization.target();
    let f = inst.realization.functor();
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    for (i, w) in inst.source_probes.iter().enumerate().take(3) {
        let col = weighted_colimit(w, f)?;
        for (j, q) in inst.target_probes.iter().enumerate().take(3) {
            record_iso(&mut certs, &mut failing, format!("weighted colimit P{i} * F against Q{j}"), colimit_universal_map(&col, w, f, q)?);
        }
    }
    for (i, (p, q, m)) in inst.morphisms.iter().enumerate().take(3) {
        let d = parallel_pair_diagram(a, p, q, m)?;
        let col = conical_colimit(&d)?;
        let w = constant_weight(&FunctorCat::new(d.source().opposite()?))?;
        for (j, t) in inst.target_probes.iter().enumerate().take(2) {
            record_iso(&mut certs, &mut failing, format!("coequalizer of probe morphism {i} against Q{j}"), colimit_universal_map(&col, &w, &d, t)?);
        }
    }
    let detail = if failing.is_empty() {
        format!("{} defining isomorphisms inverted", certs.len())
    } else {
        format!("not invertible: {}", failing.join(", "))
    };
    Ok(CheckResult::new(
        "i",
        "A is cocomplete: weighted colimits satisfy their defining isomorphism",
        Verdict::from_bool(failing.is_empty()),
        detail,
        certs,
    ))
}

fn finite_completeness(inst: &GpInstance) -> Result<CheckResult> {
    let a = inst.realization.target();
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    let probes: Vec<&Presheaf> = inst.target_probes.iter().take(2).collect();
    let mut check = |label: String, d: &PresheafFunctor, w: &crate::presheaf::VValuedFunctor| -> Result<()> {
        let lim = weighted_limit(w, d)?;
        for (j, q) in probes.iter().enumerate() {
            record_iso(&mut certs, &mut failing, format!("{label} against Q{j}"), limit_universal_map(&lim, w, d, q)?);
        }
        Ok(())
    };
    for (i, (p, q, m)) in inst.morphisms.iter().enumerate().take(3) {
        let d = parallel_pair_diagram(a, p, q, m)?;
        let w = constant_weight(&FunctorCat::new(d.source().clone()))?;
        conical_limit(&d)?;
        check(format!("equalizer of probe morphism {i}"), &d, &w)?;
        let d = pair_diagram(a, p, q)?;
        let w = constant_weight(&FunctorCat::new(d.source().clone()))?;
        check(format!("product of probe pair {i}"), &d, &w)?;
    }
    for &x in &inst.cotensor_dims {
        for (i, p) in inst.target_probes.iter().enumerate().take(2) {
            let d = point_diagram(a, p)?;
            let unit = FunctorCat::new(d.source().clone());
            let fp = a.fp();
            let w = unit.functor(vec![x], |_, _| Ok(FpMatrix::identity(fp, x)))?;
            check(format!("cotensor of Q{i} with F_p^{x}"), &d, &w)?;
        }
    }
    let detail = if failing.is_empty() {
        format!("{} defining isomorphisms inverted", certs.len())
    } else {
        format!("not invertible: {}", failing.join(", "))
    };
    Ok(CheckResult::new(
        "ii",
        "A is finitely complete: kernels, binary products and finite cotensors",
        Verdict::from_bool(failing.is_empty()),
        detail,
        certs,
    ))
}

fn filtered_condition(inst: &GpInstance) -> Result<CheckResult> {
    let mut results = Vec::new();
    for (j, diagrams) in &inst.filtered {
        results.push(filtered_exactness_probe(j, diagrams)?);
    }
    let mut notes = Vec::new();
    let mut ok = results.iter().all(|r| r.verdict.is_pass());
    for (i, j) in inst.rejected.iter().enumerate() {
        match filtered_exactness_probe(j, &[]) {
            Err(Error::NotFiltered(why)) => notes.push(format!("control {i} rejected: {why}")),
            Err(e) => return Err(e),
            Ok(_) => {
                ok = false;
                notes.push(format!("control {i} was not rejected"));
            }
        }
    }
    let certs = results
        .into_iter()
        .flat_map(|r| r.certificates.into_iter().map(|e| e.certificate))
        .collect();
    Ok(CheckResult::new(
        "v",
        "conical filtered colimits are left exact",
        Verdict::from_bool(ok),
        format!("{} filtered index categories; {}", inst.filtered.len(), notes.join("; ")),
        certs,
    )
    .with_scope(FILTERED_SCOPE))
}

fn or_error(id: &str, statement: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::errored(id, statement, &e))
}

/// Runs every check of a Gabriel–Popescu instance. Failures inside a check
/// are recorded as failing verdicts.
pub fn gabriel_popescu_verify(inst: &GpInstance) -> HarnessReport {
    let mut checks = Vec::new();
    let (tff, t_faithful) = match t_fully_faithful(inst) {
        Ok((c, f)) => (c, f),
        Err(e) => (CheckResult::errored("T-fully-faithful", "the nerve T is fully faithful", &e), vec![]),
    };
    checks.push(tff);
    checks.push(left_exactness_check(&inst.realization, &inst.exactness_family));
    checks.push(or_error("adjunction", "S is left adjoint to T", adjunction_check(inst)));
    checks.push(or_error("i", "A is cocomplete", cocompleteness(inst)));
    checks.push(or_error("ii", "A is finitely complete", finite_completeness(inst)));

    let faithful = check_jointly_faithful(&inst.generators, inst.max_dim);
    let iii = match faithful {
        Ok(f) => {
            let t_ok = !t_faithful.is_empty() && t_faithful.iter().all(|c| matches!(c, Certificate::LeftInverse { .. }));
            let mut certs: Vec<Certificate> = f.certificates.into_iter().map(|e| e.certificate).collect();
            certs.extend(t_faithful);
            CheckResult::new(
                "iii",
                "the generating set is a V-generating set: jointly faithful, and T faithful",
                Verdict::from_bool(f.verdict.is_pass() && t_ok),
                format!("{}; T faithful on probes: {t_ok}", f.detail),
                certs,
            )
        }
        Err(e) => CheckResult::errored("iii", "the generating set is a V-generating set", &e),
    };
    checks.push(iii);
    checks.push(or_error(
        "generators-conservative",
        "Hom(s, -) is jointly conservative",
        check_jointly_conservative(&inst.generators, inst.max_dim),
    ));
    checks.push(homomorphism_theorem_check(inst.realization.target(), &inst.morphisms));
    checks.push(or_error("v", "conical filtered colimits are left exact", filtered_condition(inst)));
    HarnessReport {
        title: inst.title.clone(),
        checks,
        probes: inst.inventory.clone(),
    }
}

/// `F` of the instance is fully faithful on `C`.
pub fn functor_fully_faithful(inst: &GpInstance) -> Result<bool> {
    Ok(is_fully_faithful(inst.realization.functor())?.iter().all(|(_, ok)| *ok))
}
