//! Loop algebras as twisted forms: the cocycle of `σ`, its fixed points, and
//! explicit trivializations by degree shifts.
//!
//! `Γ = Z/PZ` acts on `A ⊗ k[z, z⁻¹]` through `γ(a z^j) = ζ_P^j a z^j`, and on
//! automorphisms by conjugation, `γ(f) = γ ∘ f ∘ γ⁻¹`. The cocycle of a period-`P`
//! automorphism is `u(n̄) = σ^{-n}`; a cochain `a` splits it when
//! `u(n̄) = a⁻¹ ∘ γⁿ(a)` for all `n̄`.

use serde::{Deserialize, Serialize};

use crate::algebra::automorphism::{check_automorphism, FiniteOrderAutomorphism};
use crate::algebra::grading::{eigengrading, eigenvalue, GradedDecomposition};
use crate::algebra::loops::{loop_bracket, LoopElement};
use crate::algebra::table::{matrix_units, MultTableAlgebra};
use crate::cyclo::{lcm, CycloNum};
use crate::error::{Error, Result};
use crate::linalg::{rank_of, same_span, unit_vec, vec_scale, Mat, Vector};
use crate::lie::automorphisms::{compose_pi_toral, diagram_automorphism, DiagramPermutation, ToralCharge};
use crate::lie::chevalley::Chevalley;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one window-bounded verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub window: i64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckReport {
    fn from_result(check: &str, window: i64, r: std::result::Result<(), String>) -> Self {
        CheckReport {
            check: check.to_string(),
            window,
            status: if r.is_ok() { Status::Pass } else { Status::Fail },
            witness: r.err(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn default_window(period: u32) -> i64 {
    2 * period as i64
}

fn describe(alg: &MultTableAlgebra, x: &LoopElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (d, v) in x.terms() {
        let inner: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                if c.is_one() {
                    alg.label(k).to_string()
                } else {
                    format!("({c})*{}", alg.label(k))
                }
            })
            .collect();
        parts.push(format!("({}) z^{d}", inner.join(" + ")));
    }
    parts.join(" + ")
}

/// `γ(a z^j) = ζ_P^j a z^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicGaloisAction {
    pub period: u32,
    pub order: u32,
}

impl CyclicGaloisAction {
    /// `γⁿ` applied to a loop element.
    pub fn apply(&self, n: i64, x: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero();
        for (d, v) in x.terms() {
            let e = (n * d).rem_euclid(self.period as i64) as usize;
            out.add_term(d, vec_scale(v, &eigenvalue(self.period, e, self.order)));
        }
        out
    }
}

/// Degree-independent linear map applied slice by slice.
fn apply_matrix(m: &Mat, x: &LoopElement) -> LoopElement {
    let mut out = LoopElement::zero();
    for (d, v) in x.terms() {
        out.add_term(d, m.mul_vec(v));
    }
    out
}

/// `u(n̄) = σ^{-n}` for `n̄ ∈ Z/PZ`.
#[derive(Debug, Clone)]
pub struct LoopCocycle {
    sigma: FiniteOrderAutomorphism,
    values: Vec<Mat>,
    action: CyclicGaloisAction,
}

impl LoopCocycle {
    pub fn period(&self) -> u32 {
        self.sigma.period()
    }

    pub fn sigma(&self) -> &FiniteOrderAutomorphism {
        &self.sigma
    }

    pub fn value(&self, n: i64) -> &Mat {
        &self.values[n.rem_euclid(self.period() as i64) as usize]
    }

    pub fn action(&self) -> CyclicGaloisAction {
        self.action
    }

    /// `u(n₁+n₂) = u(n₁) ∘ γ^{n₁}(u(n₂))` on every pair, tested on all basis
    /// vectors at degrees `0..P` (one per residue).
    pub fn verify(&self) -> CheckReport {
        let p = self.period() as i64;
        let n = self.sigma.dim();
        let order = self.action.order;
        let r = (|| {
            for n1 in 0..p {
                for n2 in 0..p {
                    for deg in 0..p {
                        for k in 0..n {
                            let x = LoopElement::monomial(deg, unit_vec(n, k, order));
                            let lhs = apply_matrix(self.value(n1 + n2), &x);
                            let twisted = self.action.apply(n1, &apply_matrix(self.value(n2), &self.action.apply(-n1, &x)));
                            let rhs = apply_matrix(self.value(n1), &twisted);
                            if lhs != rhs {
                                return Err(format!("pair ({n1}, {n2}) at basis vector {k}, degree {deg}"));
                            }
                        }
                    }
                }
            }
            Ok(())
        })();
        CheckReport::from_result("cocycle", p, r)
    }
}

pub fn build_cocycle(sigma: &FiniteOrderAutomorphism) -> Result<LoopCocycle> {
    let p = sigma.period();
    let order = sigma.matrix().order();
    if !order.is_multiple_of(p) {
        return Err(Error::ScalarOrder { order, period: p });
    }
    let values = (0..p as i64).map(|k| sigma.power(-k)).collect();
    let cocycle = LoopCocycle {
        sigma: sigma.clone(),
        values,
        action: CyclicGaloisAction { period: p, order },
    };
    let report = cocycle.verify();
    if !report.passed() {
        return Err(Error::Verification(format!("cocycle identity fails: {:?}", report.witness)));
    }
    Ok(cocycle)
}

/// Per-degree fixed spaces of `x ↦ u(1̄)(γ(x))`.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub report: CheckReport,
    /// `(degree, dimension of the fixed space)`.
    pub dims: Vec<(i64, usize)>,
}

pub fn twisted_fixed_points(cocycle: &LoopCocycle, grading: &GradedDecomposition, window: i64) -> Result<FixedPointReport> {
    if window < 1 {
        return Err(Error::Input("window must be at least 1".into()));
    }
    let p = cocycle.period();
    if grading.period() != p {
        return Err(Error::Input(format!(
            "grading period {} differs from cocycle period {p}",
            grading.period()
        )));
    }
    let n = cocycle.sigma.dim();
    let order = cocycle.action.order;
    let mut dims = Vec::new();
    let mut failure = None;
    for j in -window..=window {
        let z = eigenvalue(p, (j.rem_euclid(p as i64)) as usize, order);
        let op = cocycle.value(1).scale(&z).sub(&Mat::identity(n, order));
        let fixed = op.nullspace();
        dims.push((j, fixed.len()));
        if failure.is_none() && !same_span(&fixed, grading.component_at(j), n, order) {
            failure = Some(format!("degree {j}: fixed space of dimension {} differs from the grading component", fixed.len()));
        }
    }
    Ok(FixedPointReport {
        report: CheckReport::from_result("twisted-fixed-points", window, failure.map_or(Ok(()), Err)),
        dims,
    })
}

/// An automorphism `σ` together with the target of its untwisting and the
/// per-basis-vector degree shifts.
#[derive(Debug, Clone)]
pub struct TwistData {
    pub alg: MultTableAlgebra,
    pub source: FiniteOrderAutomorphism,
    /// The untwisted automorphism, declared with the same period as `source`.
    pub target: FiniteOrderAutomorphism,
    pub shifts: Vec<i64>,
}

impl TwistData {
    pub fn period(&self) -> u32 {
        self.source.period()
    }
}

/// `σ = π ∘ τ_s` on the Chevalley algebra, untwisted to `π`.
///
/// The period is `P = lcm(order(π), m)` and `e_α` is shifted by `(P/m)⟨s, α⟩`.
pub fn lie_twist(ch: &Chevalley, perm: &DiagramPermutation, charge: &ToralCharge) -> Result<TwistData> {
    if !charge.is_invariant_under(perm) {
        return Err(Error::ChargeNotInvariant);
    }
    let p = lcm(perm.order(), charge.m);
    let alg = ch.algebra().embed(p)?;
    let source = compose_pi_toral(ch, &alg, perm, charge)?;
    let target = diagram_automorphism(ch, &alg, perm)?.with_period(p)?;
    let scale = (p / charge.m) as i64;
    let shifts = (0..alg.dim()).map(|b| scale * ch.charge(&charge.s, b)).collect();
    Ok(TwistData { alg, source, target, shifts })
}

/// Matrix units of `M_n` over `Q(ζ_m)` with `σ = Ad diag(ζ^{a_1}, …, ζ^{a_n})`.
pub fn build_matrix_algebra(n: usize, exponents: &[i64], m: u32) -> Result<(MultTableAlgebra, FiniteOrderAutomorphism)> {
    if n == 0 || exponents.len() != n || m == 0 {
        return Err(Error::Input(format!("need {n} exponents and a positive period")));
    }
    let alg = matrix_units(n, m);
    let diag: Vec<CycloNum> = (0..n * n)
        .map(|b| CycloNum::zeta_power(m, exponents[b / n] - exponents[b % n]))
        .collect();
    let sigma = check_automorphism(&alg, &Mat::diagonal(&diag, m), m)?;
    Ok((alg, sigma))
}

/// `M_n` with `Ad diag(ζ^{a})`, untwisted to the identity by shifting `E_ik` by `a_i - a_k`.
pub fn matrix_twist(n: usize, exponents: &[i64], m: u32) -> Result<TwistData> {
    let (alg, source) = build_matrix_algebra(n, exponents, m)?;
    let target = check_automorphism(&alg, &Mat::identity(n * n, m), m)?;
    let shifts = (0..n * n).map(|b| exponents[b / n] - exponents[b % n]).collect();
    Ok(TwistData { alg, source, target, shifts })
}

/// `a z^j ↦ a z^{j - d(a)}` on basis vectors, from `L(σ)` to `L(target)`.
#[derive(Debug, Clone)]
pub struct UntwistIso {
    pub period: u32,
    pub shifts: Vec<i64>,
    pub source: GradedDecomposition,
    pub target: GradedDecomposition,
}

impl UntwistIso {
    fn shift_by(&self, x: &LoopElement, sign: i64) -> LoopElement {
        let mut out = LoopElement::zero();
        for (d, v) in x.terms() {
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut w = vec![CycloNum::zero(c.order()); v.len()];
                w[k] = c.clone();
                out.add_term(d - sign * self.shifts[k], w);
            }
        }
        out
    }

    pub fn apply(&self, x: &LoopElement) -> LoopElement {
        self.shift_by(x, 1)
    }

    pub fn apply_inverse(&self, x: &LoopElement) -> LoopElement {
        self.shift_by(x, -1)
    }

    fn max_shift(&self) -> i64 {
        self.shifts.iter().map(|d| d.abs()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UntwistReport {
    pub period: u32,
    pub shifts: Vec<i64>,
    pub source_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    pub checks: Vec<CheckReport>,
}

impl UntwistReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }
}

fn window_basis(g: &GradedDecomposition, window: i64) -> Vec<(i64, Vector)> {
    (-window..=window)
        .flat_map(|j| g.component_at(j).iter().map(move |v| (j, v.clone())))
        .collect()
}

/// Build the untwisting isomorphism and verify it on `|j| ≤ window`.
pub fn untwist_iso(data: &TwistData, window: i64) -> Result<(UntwistIso, UntwistReport)> {
    let alg = &data.alg;
    let source = eigengrading(alg, &data.source)?;
    let target = eigengrading(alg, &data.target)?;
    let iso = UntwistIso {
        period: data.period(),
        shifts: data.shifts.clone(),
        source,
        target,
    };
    let n = alg.dim();
    let order = alg.scalar_order();
    let basis = window_basis(&iso.source, window);
    let mut checks = Vec::new();

    let lands = (|| {
        for (j, v) in &basis {
            let x = LoopElement::monomial(*j, v.clone());
            if iso.apply(&x).check_in(&iso.target).is_err() {
                return Err(format!("image of {} leaves the target", describe(alg, &x)));
            }
        }
        Ok(())
    })();
    checks.push(CheckReport::from_result("untwist-lands-in-target", window, lands));

    let brackets = (|| {
        for (i, a) in &basis {
            for (j, b) in &basis {
                if (i + j).abs() > window {
                    continue;
                }
                let x = LoopElement::monomial(*i, a.clone());
                let y = LoopElement::monomial(*j, b.clone());
                let lhs = iso.apply(&loop_bracket(alg, &iso.source, &x, &y).map_err(|e| e.to_string())?);
                let rhs = loop_bracket(alg, &iso.target, &iso.apply(&x), &iso.apply(&y)).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!("product of {} and {}", describe(alg, &x), describe(alg, &y)));
                }
            }
        }
        Ok(())
    })();
    checks.push(CheckReport::from_result("untwist-multiplicative", window, brackets));

    let bijective = (|| {
        for j in -window..=window {
            let slice = iso.source.component_at(j);
            let images: Vec<Vector> = slice
                .iter()
                .map(|v| {
                    // Flatten the image into A ⊗ (degrees) coordinates.
                    let img = iso.apply(&LoopElement::monomial(j, v.clone()));
                    let mut flat = vec![CycloNum::zero(order); n * (2 * iso.max_shift() as usize + 1)];
                    for (d, w) in img.terms() {
                        let off = (d - j + iso.max_shift()) as usize * n;
                        flat[off..off + n].clone_from_slice(w);
                    }
                    flat
                })
                .collect();
            let width = n * (2 * iso.max_shift() as usize + 1);
            if rank_of(&images, width, order) != slice.len() {
                return Err(format!("not injective at degree {j}"));
            }
        }
        let inner = window - iso.max_shift();
        for k in -inner..=inner {
            for w in iso.target.component_at(k) {
                let y = LoopElement::monomial(k, w.clone());
                let pre = iso.apply_inverse(&y);
                if pre.check_in(&iso.source).is_err() || iso.apply(&pre) != y {
                    return Err(format!("{} has no preimage", describe(alg, &y)));
                }
            }
        }
        Ok(())
    })();
    checks.push(CheckReport::from_result("untwist-bijective", window, bijective));

    let t_linear = (|| {
        let t = iso.period as i64;
        for (j, v) in &basis {
            let x = LoopElement::monomial(*j, v.clone());
            if iso.apply(&x.shift(t)) != iso.apply(&x).shift(t) {
                return Err(format!("t-action on {}", describe(alg, &x)));
            }
        }
        Ok(())
    })();
    checks.push(CheckReport::from_result("untwist-r-linear", window, t_linear));

    let report = UntwistReport {
        period: iso.period,
        shifts: iso.shifts.clone(),
        source_dims: iso.source.dims(),
        target_dims: iso.target.dims(),
        checks,
    };
    Ok((iso, report))
}

/// Verify `u(n̄) = a⁻¹ ∘ γⁿ(a)` with `a = b⁻¹`, `b(x z^j) = x z^{j + d(x)}`, on all
/// basis vectors of `A` at degrees `|j| ≤ window`. Only for inner (toral) twists.
pub fn coboundary_witness(data: &TwistData, window: i64) -> Result<CheckReport> {
    if !data.target.matrix().is_identity() {
        return Err(Error::NonToral);
    }
    let cocycle = build_cocycle(&data.source)?;
    let gamma = cocycle.action();
    let n = data.alg.dim();
    let order = data.alg.scalar_order();
    let p = cocycle.period() as i64;
    let shift = |x: &LoopElement, sign: i64| {
        let mut out = LoopElement::zero();
        for (d, v) in x.terms() {
            for (k, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut w = vec![CycloNum::zero(order); n];
                w[k] = c.clone();
                out.add_term(d + sign * data.shifts[k], w);
            }
        }
        out
    };
    // a = b⁻¹ shifts down, a⁻¹ = b shifts up.
    let a = |x: &LoopElement| shift(x, -1);
    let a_inv = |x: &LoopElement| shift(x, 1);
    let r = (|| {
        for nn in 0..p {
            for j in -window..=window {
                for k in 0..n {
                    let x = LoopElement::monomial(j, unit_vec(n, k, order));
                    let lhs = apply_matrix(cocycle.value(nn), &x);
                    let rhs = a_inv(&gamma.apply(nn, &a(&gamma.apply(-nn, &x))));
                    if lhs != rhs {
                        return Err(format!("n = {nn} on {}", describe(&data.alg, &x)));
                    }
                }
            }
        }
        Ok(())
    })();
    Ok(CheckReport::from_result("coboundary", window, r))
}
