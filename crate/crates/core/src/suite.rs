//! The verification suite behind `verify-all`: eight criteria, each run over
//! a list of fixtures, reported as one pass/fail line per criterion.

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{builtin_catalog, extract_from_twist, extract_with_permuted_base, match_affine_label, Gcm};
use crate::algebra::automorphism::FiniteOrderAutomorphism;
use crate::algebra::grading::eigengrading;
use crate::algebra::table::{validate_algebra, MultTableAlgebra};
use crate::classify::{
    classification_table, conjugacy_classes, dynkin_automorphism_group, h1_out, inverse_conjugacy_check,
    k_vs_r_classes,
};
use crate::descent::{
    build_cocycle, build_matrix_algebra, coboundary_witness, default_window, lie_twist, matrix_twist,
    twisted_fixed_points, untwist_iso, TwistData,
};
use crate::error::Result;
use crate::lie::automorphisms::{DiagramPermutation, ToralCharge};
use crate::lie::cartan::{CartanType, FiniteCartanMatrix};
use crate::lie::chevalley::{chevalley_algebra, Chevalley};
use crate::lie::roots::RootSystem;

/// Types used for construction, classification and the affine catalog.
pub const FIXTURE_TYPES: [&str; 7] = ["A1", "A2", "A3", "B2", "C3", "D4", "G2"];

/// An algebra to validate, with the dimension it should have.
#[derive(Debug, Clone)]
pub struct AlgebraFixture {
    pub name: String,
    pub alg: MultTableAlgebra,
    pub expected_dim: Option<usize>,
}

/// Where an automorphism fixture comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutoSource {
    /// `π ∘ τ_s` on the Chevalley algebra of a type.
    Lie {
        cartan: String,
        perm: Vec<usize>,
        charge: ToralCharge,
    },
    /// `E_ik ↦ ζ_m^{a_i − a_k} E_ik` on `M_n`.
    Matrix { n: usize, exponents: Vec<i64>, m: u32 },
}

impl AutoSource {
    pub fn lie(cartan: &str, perm: &[usize], s: &[i64], m: u32) -> Self {
        AutoSource::Lie {
            cartan: cartan.into(),
            perm: perm.to_vec(),
            charge: ToralCharge::new(s.to_vec(), m),
        }
    }

    pub fn matrix(n: usize, exponents: &[i64], m: u32) -> Self {
        AutoSource::Matrix {
            n,
            exponents: exponents.to_vec(),
            m,
        }
    }

    /// Algebra (over the field of the period) and the automorphism `σ`.
    pub fn build(&self) -> Result<(MultTableAlgebra, FiniteOrderAutomorphism)> {
        match self {
            AutoSource::Lie { .. } => {
                let d = self.twist()?;
                Ok((d.alg, d.source))
            }
            AutoSource::Matrix { n, exponents, m } => build_matrix_algebra(*n, exponents, *m),
        }
    }

    /// Untwisting data of `σ`.
    pub fn twist(&self) -> Result<TwistData> {
        match self {
            AutoSource::Lie { cartan, perm, charge } => {
                let ch = chevalley(cartan)?;
                let p = DiagramPermutation::from_one_based(perm)?;
                lie_twist(&ch, &p, charge)
            }
            AutoSource::Matrix { n, exponents, m } => matrix_twist(*n, exponents, *m),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AutoFixture {
    pub name: String,
    pub source: AutoSource,
    pub expected_dims: Option<Vec<usize>>,
}

/// Class-count expectation for one type.
#[derive(Debug, Clone)]
pub struct ClassFixture {
    pub cartan: String,
    pub classes: usize,
}

#[derive(Debug, Clone, Default)]
pub struct FixtureSet {
    pub algebras: Vec<AlgebraFixture>,
    pub automorphisms: Vec<AutoFixture>,
    pub toral: Vec<AutoFixture>,
    pub composed: Vec<AutoFixture>,
    pub classes: Vec<ClassFixture>,
    /// Largest rank whose diagram symmetry groups are checked for inverse conjugacy.
    pub inverse_conjugacy_rank: usize,
    pub k_vs_r: Vec<String>,
    pub gcm_types: Vec<String>,
    pub determinism: bool,
}

fn chevalley(label: &str) -> Result<Chevalley> {
    chevalley_algebra(&RootSystem::new(&FiniteCartanMatrix::parse(label)?)?)
}

fn auto(name: &str, source: AutoSource, dims: Option<&[usize]>) -> AutoFixture {
    AutoFixture {
        name: name.into(),
        source,
        expected_dims: dims.map(<[usize]>::to_vec),
    }
}

impl FixtureSet {
    pub fn empty() -> Self {
        FixtureSet::default()
    }

    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty()
            && self.automorphisms.is_empty()
            && self.toral.is_empty()
            && self.composed.is_empty()
            && self.classes.is_empty()
            && self.inverse_conjugacy_rank == 0
            && self.k_vs_r.is_empty()
            && self.gcm_types.is_empty()
    }

    /// The built-in fixture set.
    pub fn standard() -> Result<Self> {
        let dims = [3, 8, 15, 10, 21, 28, 14];
        let algebras = FIXTURE_TYPES
            .iter()
            .zip(dims)
            .map(|(t, d)| {
                Ok(AlgebraFixture {
                    name: t.to_string(),
                    alg: chevalley(t)?.algebra().clone(),
                    expected_dim: Some(d),
                })
            })
            .collect::<Result<_>>()?;

        let toral = vec![
            auto("sl2 toral s=(1) m=2", AutoSource::lie("A1", &[1], &[1], 2), Some(&[1, 2])),
            auto("sl3 toral s=(1,0) m=3", AutoSource::lie("A2", &[1, 2], &[1, 0], 3), Some(&[4, 2, 2])),
            auto("sl3 toral s=(1,1) m=2", AutoSource::lie("A2", &[1, 2], &[1, 1], 2), None),
            auto("D4 toral s=(1,0,0,0) m=2", AutoSource::lie("D4", &[1, 2, 3, 4], &[1, 0, 0, 0], 2), None),
            auto("M2 toral (0,1) m=2", AutoSource::matrix(2, &[0, 1], 2), Some(&[2, 2])),
            auto("M3 toral (0,1,2) m=3", AutoSource::matrix(3, &[0, 1, 2], 3), Some(&[3, 3, 3])),
        ];
        let composed = vec![
            auto("A2 flip with s=(1,1) m=2", AutoSource::lie("A2", &[2, 1], &[1, 1], 2), None),
            auto("D4 triality with s=(1,0,1,1) m=3", AutoSource::lie("D4", &[3, 2, 4, 1], &[1, 0, 1, 1], 3), None),
        ];
        let mut automorphisms = vec![
            auto("sl3 flip", AutoSource::lie("A2", &[2, 1], &[0, 0], 1), Some(&[3, 5])),
            auto("A3 flip", AutoSource::lie("A3", &[3, 2, 1], &[0, 0, 0], 1), None),
            auto("D4 transposition", AutoSource::lie("D4", &[1, 2, 4, 3], &[0, 0, 0, 0], 1), None),
            auto("D4 triality", AutoSource::lie("D4", &[3, 2, 4, 1], &[0, 0, 0, 0], 1), Some(&[14, 7, 7])),
        ];
        automorphisms.extend(toral.iter().cloned());
        automorphisms.extend(composed.iter().cloned());

        let classes = [("A1", 1), ("A2", 2), ("A3", 2), ("B2", 1), ("D4", 3), ("G2", 1)]
            .into_iter()
            .map(|(t, n)| ClassFixture {
                cartan: t.into(),
                classes: n,
            })
            .collect();

        Ok(FixtureSet {
            algebras,
            automorphisms,
            toral,
            composed,
            classes,
            inverse_conjugacy_rank: 8,
            k_vs_r: vec!["A2".into(), "A3".into(), "D4".into()],
            gcm_types: FIXTURE_TYPES.iter().map(|t| t.to_string()).collect(),
            determinism: true,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub cases: Vec<CaseResult>,
}

impl CriterionResult {
    fn new(id: u8, name: &str, cases: Vec<CaseResult>) -> Self {
        CriterionResult {
            id,
            name: name.into(),
            passed: cases.iter().all(|c| c.passed),
            cases,
        }
    }

    /// First failing case, as `name: detail`.
    pub fn first_failure(&self) -> Option<String> {
        self.cases
            .iter()
            .find(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("failed")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per criterion, generated from the JSON.
    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        for c in v["criteria"].as_array().into_iter().flatten() {
            let status = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            let cases = c["cases"].as_array().map_or(0, Vec::len);
            out.push_str(&format!(
                "criterion {}  {status}  {}  ({cases} cases)\n",
                c["id"],
                c["name"].as_str().unwrap_or("")
            ));
            for case in c["cases"].as_array().into_iter().flatten() {
                if case["passed"].as_bool() != Some(true) {
                    out.push_str(&format!(
                        "    {}: {}\n",
                        case["name"].as_str().unwrap_or(""),
                        case["detail"].as_str().unwrap_or("failed")
                    ));
                }
            }
        }
        out
    }
}

fn case(name: impl Into<String>, r: std::result::Result<(), String>) -> CaseResult {
    let passed = r.is_ok();
    CaseResult {
        name: name.into(),
        passed,
        detail: r.err(),
    }
}

fn flatten(r: Result<std::result::Result<(), String>>) -> std::result::Result<(), String> {
    r.unwrap_or_else(|e| Err(e.to_string()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Antisymmetry and Jacobi (or associativity) on all triples, plus dimension.
pub fn check_construction(f: &AlgebraFixture) -> CaseResult {
    let report = validate_algebra(&f.alg);
    let r = match report.violations.first() {
        Some(v) => Err(format!("{:?} fails on ({})", v.law, v.labels.join(", "))),
        None => match f.expected_dim {
            Some(d) if d != f.alg.dim() => Err(format!("dimension {} expected {d}", f.alg.dim())),
            _ => Ok(()),
        },
    };
    case(&f.name, r)
}

pub fn check_grading(f: &AutoFixture) -> CaseResult {
    let r = flatten((|| {
        let (alg, sigma) = f.source.build()?;
        let g = eigengrading(&alg, &sigma)?;
        g.check_product_rule(&alg)?;
        let dims = g.dims();
        if dims.iter().sum::<usize>() != alg.dim() {
            return Ok(Err(format!("dims {dims:?} do not sum to {}", alg.dim())));
        }
        Ok(match &f.expected_dims {
            Some(e) if e != &dims => Err(format!("dims {dims:?}, expected {e:?}")),
            _ => Ok(()),
        })
    })());
    case(&f.name, r)
}

pub fn check_descent(f: &AutoFixture) -> CaseResult {
    let r = flatten((|| {
        let (alg, sigma) = f.source.build()?;
        let g = eigengrading(&alg, &sigma)?;
        let cocycle = build_cocycle(&sigma)?;
        let c = cocycle.verify();
        if !c.passed() {
            return Ok(Err(c.witness.unwrap_or_else(|| "cocycle identity fails".into())));
        }
        let fixed = twisted_fixed_points(&cocycle, &g, default_window(sigma.period()))?;
        Ok(ensure(fixed.report.passed(), || fixed.report.witness.clone().unwrap_or_default()))
    })());
    case(&f.name, r)
}

pub fn check_triviality(f: &AutoFixture) -> CaseResult {
    let r = flatten((|| {
        let data = f.source.twist()?;
        let w = default_window(data.period());
        let (_, report) = untwist_iso(&data, w)?;
        if let Some(c) = report.checks.iter().find(|c| !c.passed()) {
            return Ok(Err(format!("{}: {}", c.check, c.witness.clone().unwrap_or_default())));
        }
        let cob = coboundary_witness(&data, w)?;
        Ok(ensure(cob.passed(), || format!("coboundary: {}", cob.witness.clone().unwrap_or_default())))
    })());
    case(&f.name, r)
}

fn label_of(ch: &Chevalley, perm: &DiagramPermutation, charge: &ToralCharge) -> Result<String> {
    let data = lie_twist(ch, perm, charge)?;
    let (gcm, _) = extract_from_twist(ch, &data, perm, None)?;
    Ok(match_affine_label(&gcm, builtin_catalog())?.to_string())
}

/// Untwisting onto `L(π)` succeeds and both sides carry the same label.
pub fn check_composed(f: &AutoFixture) -> CaseResult {
    let r = flatten((|| {
        let AutoSource::Lie { cartan, perm, charge } = &f.source else {
            return Ok(Err("not a Lie fixture".into()));
        };
        let data = f.source.twist()?;
        let (_, report) = untwist_iso(&data, default_window(data.period()))?;
        if let Some(c) = report.checks.iter().find(|c| !c.passed()) {
            return Ok(Err(format!("{}: {}", c.check, c.witness.clone().unwrap_or_default())));
        }
        let ch = chevalley(cartan)?;
        let p = DiagramPermutation::from_one_based(perm)?;
        let twisted = label_of(&ch, &p, charge)?;
        let plain = label_of(&ch, &p, &ToralCharge::zero(ch.rank()))?;
        Ok(ensure(twisted == plain, || format!("labels differ: {twisted} vs {plain}")))
    })());
    case(&f.name, r)
}

fn check_classes(f: &ClassFixture) -> CaseResult {
    let r = flatten((|| {
        let cartan = FiniteCartanMatrix::parse(&f.cartan)?;
        let out = dynkin_automorphism_group(&cartan)?;
        let classes = conjugacy_classes(&out.group).classes.len();
        let h1 = h1_out(&cartan)?.classes.len();
        let rows = classification_table(&cartan)?;
        if (classes, h1, rows.len()) != (f.classes, f.classes, f.classes) {
            return Ok(Err(format!(
                "classes {classes}, h1 {h1}, rows {}, expected {}",
                rows.len(),
                f.classes
            )));
        }
        let mut labels: Vec<&str> = rows.iter().map(|r| r.affine_label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        Ok(ensure(labels.len() == rows.len(), || "repeated affine label".into()))
    })());
    case(format!("{} classes", f.cartan), r)
}

/// Every finite type of rank between 1 and `max_rank`.
pub fn types_up_to_rank(max_rank: usize) -> Vec<CartanType> {
    let mut out = Vec::new();
    for l in 1..=max_rank {
        out.push(CartanType::A(l));
        if l >= 2 {
            out.push(CartanType::B(l));
        }
        if l >= 3 {
            out.push(CartanType::C(l));
        }
        if l >= 4 {
            out.push(CartanType::D(l));
        }
        if (6..=8).contains(&l) {
            out.push(CartanType::E(l));
        }
    }
    if max_rank >= 4 {
        out.push(CartanType::F4);
    }
    if max_rank >= 2 {
        out.push(CartanType::G2);
    }
    out
}

fn check_inverse_conjugacy(t: CartanType) -> CaseResult {
    let r = flatten((|| {
        let out = dynkin_automorphism_group(&FiniteCartanMatrix::of_type(t))?;
        Ok(ensure(inverse_conjugacy_check(&out.group).holds, || "an element is not conjugate to its inverse".into()))
    })());
    case(format!("{t} inverse conjugacy"), r)
}

fn check_k_vs_r(label: &str) -> CaseResult {
    let r = flatten((|| {
        let k = k_vs_r_classes(&FiniteCartanMatrix::parse(label)?)?;
        Ok(ensure(k.hypotheses_hold && k.r_class_count == k.k_class_count, || {
            format!(
                "counts ({}, {}), centroid dims {:?}",
                k.r_class_count, k.k_class_count, k.centroid_dims
            )
        }))
    })());
    case(format!("{label} k vs R"), r)
}

/// `new[i][j] = old[p[i]][p[j]]`.
fn permuted(gcm: &Gcm, p: &[usize]) -> Vec<Vec<i64>> {
    p.iter().map(|&i| p.iter().map(|&j| gcm.0[i][j]).collect()).collect()
}

/// Extraction on `L(π)` for one class representative, with the affine
/// invariants, the permuted-base recomputation and the named expectations.
fn check_gcm(label: &str, perm: &DiagramPermutation) -> CaseResult {
    let name = format!("{label} pi={:?}", perm.one_based());
    let r = flatten((|| {
        let ch = chevalley(label)?;
        let data = lie_twist(&ch, perm, &ToralCharge::zero(ch.rank()))?;
        let (gcm, base) = extract_from_twist(&ch, &data, perm, None)?;
        gcm.check_affine()?;
        let n = gcm.size();
        if base.len() != perm.orbit_count() + 1 {
            return Ok(Err(format!("base has {} roots", base.len())));
        }
        let reversed: Vec<usize> = (0..n).rev().collect();
        let again = extract_with_permuted_base(&ch, &data, perm, &reversed)?;
        if again.0 != permuted(&gcm, &reversed) {
            return Ok(Err(format!("permuted base gives {:?}", again.0)));
        }
        let r = perm.order();
        let expected = match (label, r) {
            ("A1", 1) => ensure(gcm.0 == vec![vec![2, -2], vec![-2, 2]], || format!("{:?}", gcm.0)),
            ("A2", 2) => ensure(n == 2 && gcm.edge_products() == vec![4], || format!("{:?}", gcm.0)),
            ("D4", 3) => ensure(n == 3 && gcm.edge_products().contains(&3), || format!("{:?}", gcm.0)),
            _ => Ok(()),
        };
        Ok(expected)
    })());
    case(name, r)
}

fn gcm_cases(types: &[String]) -> Vec<CaseResult> {
    let mut jobs = Vec::new();
    for t in types {
        match FiniteCartanMatrix::parse(t).and_then(|c| dynkin_automorphism_group(&c)) {
            Ok(out) => {
                for c in conjugacy_classes(&out.group).classes {
                    jobs.push((t.clone(), Some(out.elements[c.rep].clone())));
                }
            }
            Err(_) => jobs.push((t.clone(), None)),
        }
    }
    jobs.par_iter()
        .map(|(t, p)| match p {
            Some(p) => check_gcm(t, p),
            None => case(t.clone(), Err("unknown type".into())),
        })
        .collect()
}

fn run_criteria(f: &FixtureSet) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    if !f.algebras.is_empty() {
        let cases = f.algebras.par_iter().map(check_construction).collect();
        out.push(CriterionResult::new(1, "construction soundness", cases));
    }
    if !f.automorphisms.is_empty() {
        let cases = f.automorphisms.par_iter().map(check_grading).collect();
        out.push(CriterionResult::new(2, "grading laws", cases));
        let cases = f.automorphisms.par_iter().map(check_descent).collect();
        out.push(CriterionResult::new(3, "galois descent", cases));
    }
    if !f.toral.is_empty() {
        let cases = f.toral.par_iter().map(check_triviality).collect();
        out.push(CriterionResult::new(4, "triviality witnesses", cases));
    }
    if !f.composed.is_empty() {
        let cases = f.composed.par_iter().map(check_composed).collect();
        out.push(CriterionResult::new(5, "untwisting onto diagram automorphisms", cases));
    }
    if !f.classes.is_empty() || f.inverse_conjugacy_rank > 0 || !f.k_vs_r.is_empty() {
        let mut cases: Vec<CaseResult> = f.classes.par_iter().map(check_classes).collect();
        cases.extend(
            types_up_to_rank(f.inverse_conjugacy_rank)
                .into_par_iter()
                .map(check_inverse_conjugacy)
                .collect::<Vec<_>>(),
        );
        cases.extend(f.k_vs_r.par_iter().map(|t| check_k_vs_r(t)).collect::<Vec<_>>());
        out.push(CriterionResult::new(6, "classification", cases));
    }
    if !f.gcm_types.is_empty() {
        out.push(CriterionResult::new(7, "affine cartan matrices", gcm_cases(&f.gcm_types)));
    }
    out
}

/// Run every criterion that has fixtures; criterion 8 reruns the others and
/// compares the serialized reports byte for byte.
pub fn verify_all(f: &FixtureSet) -> SuiteReport {
    let mut criteria = run_criteria(f);
    if f.determinism && !criteria.is_empty() {
        let first = serde_json::to_string(&criteria).expect("report serializes");
        let second = serde_json::to_string(&run_criteria(f)).expect("report serializes");
        let r = ensure(first == second, || "reports differ between runs".into());
        criteria.push(CriterionResult::new(8, "determinism", vec![case("rerun", r)]));
    }
    SuiteReport { criteria }
}

/// Restrict to the criteria listed in `only` (1-based ids).
pub fn verify_selected(f: &FixtureSet, only: &[u8]) -> SuiteReport {
    let mut f = f.clone();
    let keep = |id: u8| only.is_empty() || only.contains(&id);
    if !keep(1) {
        f.algebras.clear();
    }
    if !keep(2) && !keep(3) {
        f.automorphisms.clear();
    }
    if !keep(4) {
        f.toral.clear();
    }
    if !keep(5) {
        f.composed.clear();
    }
    if !keep(6) {
        f.classes.clear();
        f.inverse_conjugacy_rank = 0;
        f.k_vs_r.clear();
    }
    if !keep(7) {
        f.gcm_types.clear();
    }
    f.determinism = keep(8);
    let mut report = verify_all(&f);
    report.criteria.retain(|c| keep(c.id));
    report
}
