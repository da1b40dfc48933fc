use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ainf::{stasheff_defect_at, AInfStructure, DeltaOperations, Mode};
use crate::algebra::{GradedAlgebra, ValidationReport};
use crate::basis::Element;
use crate::error::{Error, Result};
use crate::multiop::{multilinear, MultiOp};
use crate::operator::{compose, LinearOperator};
use crate::random::Rng;
use crate::scalar::Scalar;

use super::complex::connes_operator;
use super::{
    connes_b_dual, cup, gerstenhaber_bracket, hh_cohomology_normalized, hochschild_delta,
    random_cochain, random_normalized_cochain, sign, unit_index, Cochain, CochainSpace,
    FrobeniusData, HHBasis,
};

fn sign_of(s: i8) -> Scalar {
    sign(s < 0)
}

/// Result of comparing `δΔ` with `Δδ`.
#[derive(Debug, Clone)]
pub struct ChainMapOutcome {
    /// The sign with `δΔ = ε·Δδ` on every tested cochain; `None` if neither works,
    /// or if both do because every tested value vanished.
    pub epsilon: Option<i8>,
    pub candidates: Vec<i8>,
    pub cochains_tested: usize,
    /// A cochain outside the normalized subcomplex with Δ² ≠ 0, if one was met.
    pub unnormalized_square: Option<String>,
    pub report: ValidationReport,
}

fn basis_cochains(d: usize, n: usize, skip: Option<usize>) -> Vec<Cochain> {
    let proto = Cochain::zero(d, n);
    let mut out = Vec::new();
    for t in 0..proto.len() {
        if skip.is_some_and(|u| proto.tuple_of(t).contains(&u)) {
            continue;
        }
        for k in 0..d {
            let mut c = proto.clone();
            c.values[t] = Element::basis(k);
            out.push(c);
        }
    }
    out
}

/// `δΔ = ε·Δδ` on every basis cochain of degree ≤ n_max and on `samples`
/// random cochains per degree, and Δ² = 0 on the normalized ones, in a
/// unit-adapted basis.
///
/// Δ² only vanishes on normalized cochains: on dual numbers `(1, x) ↦ x`
/// has Δ² = 1.
pub fn check_connes_chain_map(
    fd: &FrobeniusData,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<ChainMapOutcome> {
    let fd = &fd.unit_adapted()?;
    let alg = fd.algebra();
    let u = unit_index(alg)?;
    let d = fd.dim();
    let mut rng = Rng::seeded(seed);
    let mut report = ValidationReport::default();
    let mut alive = [true, true];
    let mut tested = 0;
    let mut unnormalized_square = None;
    for n in 0..=n_max {
        let mut cochains = basis_cochains(d, n, None);
        cochains.extend((0..samples).map(|_| random_cochain(&mut rng, d, n)));
        cochains.extend((0..samples).map(|_| random_normalized_cochain(&mut rng, d, n, u)));
        for (ci, f) in cochains.iter().enumerate() {
            tested += 1;
            let bf = connes_b_dual(fd, f)?;
            let bbf = connes_b_dual(fd, &bf)?;
            if !bbf.is_zero() {
                let msg = format!("Delta^2 != 0 on {}: {}", f.display(alg), bbf.display(alg));
                if f.is_normalized(u) {
                    report.push("connes_square", vec![n, ci], None, msg);
                } else if unnormalized_square.is_none() {
                    unnormalized_square = Some(msg);
                }
            }
            let rhs = connes_b_dual(fd, &hochschild_delta(alg, f)?)?;
            // Δ maps C^0 to C^{−1} = 0
            let lhs = if n == 0 {
                Cochain::zero(d, 0)
            } else {
                hochschild_delta(alg, &bf)?
            };
            for (slot, eps) in [(0, 1i8), (1, -1i8)] {
                if alive[slot] && !lhs.sub(&rhs.scaled(&sign_of(eps)))?.is_zero() {
                    alive[slot] = false;
                }
            }
        }
    }
    let candidates: Vec<i8> = [1i8, -1]
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(e, _)| e)
        .collect();
    let epsilon = if candidates.len() == 1 {
        Some(candidates[0])
    } else {
        None
    };
    if candidates.is_empty() {
        report.push(
            "chain_map",
            vec![],
            None,
            "delta Delta = eps Delta delta fails for both signs".into(),
        );
    }
    Ok(ChainMapOutcome {
        epsilon,
        candidates,
        cochains_tested: tested,
        unnormalized_square,
        report,
    })
}

/// Which degree enters the signs of the BV identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DegreeReading {
    /// `|a|` is the cochain degree `n`.
    Cochain,
    /// `|a|` is the shifted degree `n − 1`.
    Shifted,
}

impl DegreeReading {
    pub fn degree(self, n: usize) -> i64 {
        match self {
            DegreeReading::Cochain => n as i64,
            DegreeReading::Shifted => n as i64 - 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DegreeReading::Cochain => "cochain",
            DegreeReading::Shifted => "shifted",
        }
    }
}

fn parity(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

fn sign_parity(x: i64) -> i8 {
    if parity(x) {
        -1
    } else {
        1
    }
}

/// `Δ(a⌣b) − Δa⌣b − (−1)^{|a|} a⌣Δb`.
fn bv_defect(fd: &FrobeniusData, a: &Cochain, b: &Cochain, a_deg: i64) -> Result<Cochain> {
    let alg = fd.algebra();
    let ab = connes_b_dual(fd, &cup(alg, a, b)?)?;
    let t2 = cup(alg, &connes_b_dual(fd, a)?, b)?;
    let t3 = cup(alg, a, &connes_b_dual(fd, b)?)?;
    let target = a.degree() + b.degree();
    let zero = Cochain::zero(fd.dim(), target.saturating_sub(1));
    let norm = |c: Cochain| {
        if c.degree() + 1 == target {
            c
        } else {
            zero.clone()
        }
    };
    let (ab, t2, t3) = (norm(ab), norm(t2), norm(t3));
    ab.sub(&t2)?.sub(&t3.scaled(&sign(parity(a_deg))))
}

/// Outcome of the BV identity sweep over HH class pairs.
#[derive(Debug, Clone)]
pub struct BvOutcome {
    /// Every (reading, κ) under which `[a,b] = κ·(right side)` held on all pairs.
    pub passing: Vec<(DegreeReading, i8)>,
    /// The unique reading with a consistent κ, if there is exactly one.
    pub reading: Option<DegreeReading>,
    pub kappa: Option<i8>,
    pub pairs_checked: usize,
    pub nonzero_pairs: usize,
    pub report: ValidationReport,
}

fn hh_pairs(hh: &HHBasis, bound: usize) -> Vec<((usize, Cochain), (usize, Cochain))> {
    let classes = hh.classes();
    let mut out = Vec::new();
    for a in &classes {
        for b in &classes {
            if a.0 + b.0 <= bound {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn perturb(alg: &GradedAlgebra, rng: &mut Rng, f: &Cochain) -> Result<Cochain> {
    if f.degree() == 0 {
        return Ok(f.clone());
    }
    let g = random_normalized_cochain(rng, f.dim(), f.degree() - 1, unit_index(alg)?);
    f.add(&hochschild_delta(alg, &g)?)
}

/// The identity `[a,b] = −(−1)^{(|a|−1)|b|+1}(Δ(a⌣b) − Δa⌣b − (−1)^{|a|} a⌣Δb)`
/// on classes with `|a| + |b| ≤ n_max + 1`, under both degree readings and an
/// overall sign κ; each pair is evaluated once more on perturbed representatives.
/// Representatives are normalized cochains in a unit-adapted basis.
pub fn bv_identity_on_hh(fd: &FrobeniusData, n_max: usize, seed: u64) -> Result<BvOutcome> {
    let fd = &fd.unit_adapted()?;
    let alg = fd.algebra();
    let hh = hh_cohomology_normalized(alg, n_max)?;
    let mut rng = Rng::seeded(seed);
    let readings = [DegreeReading::Cochain, DegreeReading::Shifted];
    let mut alive: BTreeMap<(DegreeReading, i8), bool> = readings
        .iter()
        .flat_map(|&r| [((r, 1), true), ((r, -1), true)])
        .collect();
    let mut report = ValidationReport::default();
    let pairs = hh_pairs(&hh, n_max + 1);
    let mut nonzero = 0;
    for (pi, ((na, a), (nb, b))) in pairs.iter().enumerate() {
        let pa = perturb(alg, &mut rng, a)?;
        let pb = perturb(alg, &mut rng, b)?;
        let reps = [(a.clone(), b.clone()), (pa, pb)];
        let mut lhs_coords: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs_coords: BTreeMap<DegreeReading, Vec<Vec<Scalar>>> = BTreeMap::new();
        for (x, y) in &reps {
            let br = gerstenhaber_bracket(x, y)?;
            lhs_coords.push(if na + nb == 0 {
                vec![Scalar::zero(); hh.len()]
            } else {
                hh.project(&br)?
            });
            for r in readings {
                let (da, db) = (r.degree(*na), r.degree(*nb));
                let core = bv_defect(fd, x, y, da)?;
                // −(−1)^{(|a|−1)|b|+1} = (−1)^{(|a|−1)|b|}
                let s = sign(parity((da - 1) * db));
                let coords = if na + nb == 0 {
                    vec![Scalar::zero(); hh.len()]
                } else {
                    hh.project(&core.scaled(&s))?
                };
                rhs_coords.entry(r).or_default().push(coords);
            }
        }
        if lhs_coords[0] != lhs_coords[1] {
            report.push(
                "bv_representative",
                vec![pi],
                None,
                format!("bracket of classes ({na},{nb}) depends on representatives"),
            );
        }
        for r in readings {
            let rc = &rhs_coords[&r];
            if rc[0] != rc[1] {
                report.push(
                    "bv_representative",
                    vec![pi],
                    None,
                    format!(
                        "BV side ({} reading) of classes ({na},{nb}) depends on representatives",
                        r.name()
                    ),
                );
            }
            for k in [1i8, -1] {
                let scaled: Vec<Scalar> = rc[0].iter().map(|c| c * sign_of(k)).collect();
                if scaled != lhs_coords[0] {
                    alive.insert((r, k), false);
                }
            }
        }
        if lhs_coords[0].iter().any(|c| !c.is_zero()) {
            nonzero += 1;
        }
    }
    let passing: Vec<(DegreeReading, i8)> = alive
        .into_iter()
        .filter(|(_, a)| *a)
        .map(|(k, _)| k)
        .collect();
    let readings_passing: Vec<DegreeReading> = {
        let mut v: Vec<DegreeReading> = passing.iter().map(|p| p.0).collect();
        v.dedup();
        v
    };
    let (reading, kappa) = match readings_passing.as_slice() {
        [r] => {
            let ks: Vec<i8> = passing.iter().filter(|p| p.0 == *r).map(|p| p.1).collect();
            (Some(*r), if ks.len() == 1 { Some(ks[0]) } else { None })
        }
        _ => (None, None),
    };
    if passing.is_empty() {
        report.push(
            "bv_identity",
            vec![],
            None,
            "no degree reading and overall sign satisfies the identity".into(),
        );
    }
    Ok(BvOutcome {
        passing,
        reading,
        kappa,
        pairs_checked: pairs.len(),
        nonzero_pairs: nonzero,
        report,
    })
}

/// Degree labels used for the Koszul signs of the structure on cochains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HochschildGrading {
    /// `f ∈ C^n` has parity `n`.
    CochainDegree,
    /// `f ∈ C^n` has parity `n − 1` (label `−(n − 1)`).
    Shifted,
}

impl HochschildGrading {
    pub fn label(self, n: usize) -> i64 {
        match self {
            HochschildGrading::CochainDegree => n as i64,
            HochschildGrading::Shifted => 1 - n as i64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HochschildGrading::CochainDegree => "cochain",
            HochschildGrading::Shifted => "shifted",
        }
    }
}

/// The operations `m_{Δ,n}` on normalized cochains `(C̄^{≤n_max}, ⌣)` with `Δ`
/// the Connes operator, in a unit-adapted basis of the algebra.
#[derive(Debug, Clone)]
pub struct HochschildAInf {
    pub frobenius: FrobeniusData,
    pub grading: HochschildGrading,
    pub space: CochainSpace,
    pub algebra: GradedAlgebra,
    pub delta: LinearOperator,
    /// Gradings tried, with whether the Stasheff sweep passed.
    pub arbiter: Vec<(HochschildGrading, bool)>,
    pub comparison: M2Comparison,
    pub report: ValidationReport,
}

impl HochschildAInf {
    pub fn operations(&self) -> Result<DeltaOperations<'_>> {
        DeltaOperations::new(&self.algebra, &self.delta)
    }

    /// `m_k` on cochains of total degree ≤ n_max; the value has degree `total − 1`.
    pub fn eval(&self, args: &[Cochain]) -> Result<Cochain> {
        let total: usize = args.iter().map(Cochain::degree).sum();
        if total > self.space.n_max() {
            return Err(Error::TruncationOverflow(format!(
                "total degree {total} above {}",
                self.space.n_max()
            )));
        }
        let ops = self.operations()?;
        let elems = args
            .iter()
            .map(|a| self.space.to_element(a))
            .collect::<Result<Vec<_>>>()?;
        let out = multilinear(&elems, |t| ops.eval(t));
        Ok(match total.checked_sub(1) {
            Some(n) => self.space.component(&out, n),
            None => Cochain::zero(self.space.dim(), 0),
        })
    }

    /// `m_1, …, m_arities` tabulated on basis tuples of total degree ≤ n_max
    /// (other tuples are left out of the tables).
    pub fn structure(&self, arities: usize) -> Result<AInfStructure> {
        let ops = self.operations()?;
        let mode = if self.delta.degree() < 0 {
            Mode::Homological
        } else {
            Mode::Cohomological
        };
        let mut tables = Vec::new();
        for k in 1..=arities {
            let entries = bounded_tuples(&self.space, k, self.space.n_max())
                .into_iter()
                .map(|t| {
                    let v = ops.eval(&t);
                    (t, v)
                })
                .filter(|(_, v)| !v.is_zero());
            tables.push(MultiOp::from_table(
                self.space.basis().clone(),
                k,
                self.delta.degree(),
                entries,
            )?);
        }
        AInfStructure::new(tables, mode)
    }
}

/// Tuples of basis cochains of the given arity with total degree ≤ bound.
fn bounded_tuples(space: &CochainSpace, arity: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(arity);
    fn rec(
        space: &CochainSpace,
        arity: usize,
        budget: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == arity {
            out.push(cur.clone());
            return;
        }
        for i in 0..space.len() {
            let n = space.cochain_degree(i);
            if n <= budget {
                cur.push(i);
                rec(space, arity, budget - n, cur, out);
                cur.pop();
            }
        }
    }
    rec(space, arity, bound, &mut cur, &mut out);
    out
}

fn stasheff_sweep(
    space: &CochainSpace,
    ops: &DeltaOperations<'_>,
    n_arities: usize,
    report: &mut Option<&mut ValidationReport>,
) -> bool {
    let mut ok = true;
    for k in 1..=n_arities {
        for t in bounded_tuples(space, k, space.n_max()) {
            let d = stasheff_defect_at(ops, &t);
            if !d.is_zero() {
                ok = false;
                match report {
                    Some(r) => {
                        if r.violations.len() < 20 {
                            r.push(
                                "hochschild_stasheff",
                                t.clone(),
                                Some(d.clone()),
                                format!("arity {k}: {}", space.basis().display(&d)),
                            );
                        }
                    }
                    None => return false,
                }
            }
        }
    }
    ok
}

/// Builds `m_{Δ,n}` on the cup algebra of cochains of degree ≤ n_max with the
/// Connes operator, homologically graded.
///
/// Both parity conventions are swept against the Stasheff identities on
/// tuples of total degree ≤ n_max and arity ≤ n_arities; the first passing
/// one is kept. On HH classes, `m_2` is compared with the bracket.
pub fn hochschild_ainf_structure(
    fd: &FrobeniusData,
    n_arities: usize,
    n_max: usize,
    seed: u64,
) -> Result<HochschildAInf> {
    let fd = &fd.unit_adapted()?;
    let alg = fd.algebra();
    let mut arbiter = Vec::new();
    let mut chosen: Option<(
        HochschildGrading,
        CochainSpace,
        GradedAlgebra,
        LinearOperator,
    )> = None;
    for grading in [HochschildGrading::CochainDegree, HochschildGrading::Shifted] {
        let space = CochainSpace::with_labels(alg, n_max, true, |n| grading.label(n))?;
        let cup_alg = space.cup_algebra(alg, "cochains")?;
        let delta = connes_operator(fd, &space, grading.label(0) - grading.label(1))?;
        let ops = DeltaOperations::new(&cup_alg, &delta)?;
        let ok = stasheff_sweep(&space, &ops, n_arities, &mut None);
        arbiter.push((grading, ok));
        if ok && chosen.is_none() {
            chosen = Some((grading, space, cup_alg, delta));
        }
    }
    let (grading, space, cup_alg, delta) = match chosen {
        Some(c) => c,
        None => {
            let space = CochainSpace::normalized(alg, n_max)?;
            let cup_alg = space.cup_algebra(alg, "cochains")?;
            let delta = connes_operator(fd, &space, -1)?;
            let mut report = ValidationReport::default();
            let ops = DeltaOperations::new(&cup_alg, &delta)?;
            stasheff_sweep(&space, &ops, n_arities, &mut Some(&mut report));
            let first = report
                .violations
                .first()
                .map(|v| v.message.clone())
                .unwrap_or_default();
            return Err(Error::StasheffFailure(format!(
                "no parity convention passes: {first}"
            )));
        }
    };
    let mut report = ValidationReport::default();
    if !compose(&delta, &delta)?.is_zero() {
        report.push(
            "connes_square",
            vec![],
            None,
            "Delta^2 != 0 on the truncated cochain space".into(),
        );
    }
    let mut s = HochschildAInf {
        frobenius: fd.clone(),
        grading,
        space,
        algebra: cup_alg,
        delta,
        arbiter,
        comparison: M2Comparison::default(),
        report: ValidationReport::default(),
    };
    s.comparison = compare_m2_with_bracket(fd, &s, &mut report, seed)?;
    s.report = report;
    Ok(s)
}

/// `m_2` against the bracket on HH classes, and `m_3` on classes.
#[derive(Debug, Clone, Default)]
pub struct M2Comparison {
    /// Observed `k` with `m_2(a,b) = k·[a,b]`, per degree pair of classes with a nonzero side.
    pub sigma: BTreeMap<(usize, usize), i8>,
    /// `σ₀` with `sigma(|a|,|b|) = σ₀·(−1)^{(|a|−1)|b|}` on every pair, if one exists.
    pub sigma_law: Option<i8>,
    /// `sigma(|a|,|b|)·(−1)^{|a|}`: the sign against `m_2` moved one degree
    /// down with the suspension sign of a binary operation.
    pub sigma_suspended: BTreeMap<(usize, usize), i8>,
    /// The one sign of `sigma_suspended` when it is constant; `None` if it varies
    /// or no pair was nonzero.
    pub sigma_global: Option<i8>,
    pub m2_pairs_nonzero: usize,
    /// Class triples on which `m_3` projected to a nonzero class, or was not a cocycle.
    pub m3_nonzero: usize,
    pub m3_not_closed: usize,
}

/// The common value of a nonempty sequence of signs.
fn constant_sign(entries: impl Iterator<Item = i8>) -> Option<i8> {
    let mut seen = None;
    for k in entries {
        match seen {
            None => seen = Some(k),
            Some(p) if p != k => return None,
            _ => {}
        }
    }
    seen
}

fn compare_m2_with_bracket(
    fd: &FrobeniusData,
    s: &HochschildAInf,
    report: &mut ValidationReport,
    seed: u64,
) -> Result<M2Comparison> {
    let alg = fd.algebra();
    let n_max = s.space.n_max();
    let hh = hh_cohomology_normalized(alg, n_max)?;
    let mut rng = Rng::seeded(seed);
    let mut out = M2Comparison::default();
    let m_on = |args: &[&Cochain], _total: usize| -> Result<Cochain> {
        let owned: Vec<Cochain> = args.iter().map(|c| (*c).clone()).collect();
        s.eval(&owned)
    };
    let mut sigma: BTreeMap<(usize, usize), i8> = BTreeMap::new();
    let mut consistent = true;
    for ((na, a), (nb, b)) in hh_pairs(&hh, n_max) {
        let total = na + nb;
        if total == 0 {
            continue;
        }
        let pa = perturb(alg, &mut rng, &a)?;
        let pb = perturb(alg, &mut rng, &b)?;
        let m2 = hh.project(&m_on(&[&a, &b], total)?)?;
        let m2p = hh.project(&m_on(&[&pa, &pb], total)?)?;
        if m2 != m2p {
            report.push(
                "m2_representative",
                vec![na, nb],
                None,
                format!("m_2 on classes ({na},{nb}) depends on representatives"),
            );
        }
        let br = hh.project(&gerstenhaber_bracket(&a, &b)?)?;
        if br.iter().all(Scalar::is_zero) && m2.iter().all(Scalar::is_zero) {
            continue;
        }
        out.m2_pairs_nonzero += 1;
        let observed = [1i8, -1]
            .into_iter()
            .find(|&k| br.iter().map(|c| c * sign_of(k)).eq(m2.iter().cloned()));
        match observed {
            None => {
                consistent = false;
                report.push(
                    "m2_bracket",
                    vec![na, nb],
                    None,
                    format!("m_2 on classes ({na},{nb}) is not a signed bracket"),
                );
            }
            Some(k) => match sigma.get(&(na, nb)) {
                Some(&prev) if prev != k => {
                    consistent = false;
                    report.push(
                        "m2_sign",
                        vec![na, nb],
                        None,
                        format!(
                            "sign of m_2 against the bracket varies within degrees ({na},{nb})"
                        ),
                    );
                }
                _ => {
                    sigma.insert((na, nb), k);
                }
            },
        }
    }
    if consistent {
        let law = |&(na, nb): &(usize, usize)| sign_parity((na as i64 - 1) * nb as i64);
        out.sigma_law = constant_sign(sigma.iter().map(|(p, k)| k * law(p)));
        out.sigma_suspended = sigma
            .iter()
            .map(|(&(na, nb), &k)| ((na, nb), k * sign_parity(na as i64)))
            .collect();
        out.sigma_global = constant_sign(out.sigma_suspended.values().copied());
    }
    out.sigma = sigma;
    // m_3 on classes: reported, not asserted
    let classes = hh.classes();
    for x in &classes {
        for y in &classes {
            for z in &classes {
                let total = x.0 + y.0 + z.0;
                if total == 0 || total > n_max {
                    continue;
                }
                let v = m_on(&[&x.1, &y.1, &z.1], total)?;
                match hh.project(&v) {
                    Ok(c) => {
                        if c.iter().any(|c| !c.is_zero()) {
                            out.m3_nonzero += 1;
                        }
                    }
                    Err(Error::NotClosed) => out.m3_not_closed += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}
