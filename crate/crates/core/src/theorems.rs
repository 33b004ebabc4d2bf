//! Drivers that check the statements about curves on a regulus: degree
//! well-definedness, the order of H ∩ S_{n−1,1,q} for extensions H of
//! F(Θ) or of a regulus element, extendability profiles, the explicit
//! PG(7,4) example and the external-line configuration in PG(5,q).
//!
//! Drivers never assume the statement they test: every violation is
//! recorded together with the offending subspace.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linalg::Matrix;
use crate::nrc;
use crate::par::Exec;
use crate::projective::{extensions_through, subspaces_of_dim, ProjPoint, Projectivity, Subspace};
use crate::reduction::ReductionContext;
use crate::segre::{self, regulus_of_subline, SegreVariety, Subgeometry};

/// The first problem met while checking a statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub reason: String,
    /// Generators of the offending subspace, in the field grammar.
    pub subspace: Vec<String>,
}

/// Orders of H ∩ S_{n−1,1,q} over all n-spaces H through a subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderProfile {
    pub subspace: Subspace,
    /// Span order per extension, in enumeration order.
    pub orders: Vec<usize>,
    pub nrc: Vec<bool>,
    pub constant: Option<usize>,
    pub violation: Option<Violation>,
}

impl OrderProfile {
    /// Distinct orders with their multiplicities.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &o in &self.orders {
            *h.entry(o).or_default() += 1;
        }
        h
    }

    pub fn all_nrc(&self) -> bool {
        self.nrc.iter().all(|&b| b)
    }
}

/// H ∩ S as one point per first-family element, in family order.
pub fn curve_in(segre: &SegreVariety, h: &Subspace) -> std::result::Result<Vec<ProjPoint>, String> {
    let f = segre.field();
    let mut pts = Vec::with_capacity(f.order() as usize + 1);
    for (i, el) in segre.first_family().iter().enumerate() {
        let meet = el.meet(f, h).map_err(|e| e.to_string())?;
        match meet.as_point() {
            Some(p) => pts.push(p),
            None => return Err(format!("meets regulus element {i} in a subspace of rank {}", meet.rank())),
        }
    }
    Ok(pts)
}

fn analyze(segre: &SegreVariety, h: &Subspace) -> (usize, bool, Option<String>) {
    let f = segre.field();
    match curve_in(segre, h) {
        Err(reason) => (0, false, Some(reason)),
        Ok(pts) => match nrc::is_nrc(f, &pts) {
            Ok(r) => (r.order, r.is_nrc, None),
            Err(e) => (nrc::span_order(f, &pts).unwrap_or(0), false, Some(e.to_string())),
        },
    }
}

/// Profile over every n-space through `u`, without preconditions on `u`.
pub fn extension_profile(segre: &SegreVariety, u: &Subspace, exec: Exec) -> Result<OrderProfile> {
    let f = segre.field();
    let exts: Vec<Subspace> = extensions_through(f, u, u.dim() as usize + 1)?.collect();
    let results = exec.map(&exts, |h| analyze(segre, h));
    let mut profile = OrderProfile { subspace: u.clone(), orders: Vec::new(), nrc: Vec::new(), constant: None, violation: None };
    for (h, (order, is_nrc, issue)) in exts.iter().zip(results) {
        if profile.violation.is_none() {
            if let Some(reason) = issue {
                profile.violation = Some(Violation { reason, subspace: h.format(f) });
            }
        }
        profile.orders.push(order);
        profile.nrc.push(is_nrc);
    }
    if profile.orders.windows(2).all(|w| w[0] == w[1]) {
        profile.constant = profile.orders.first().copied();
    }
    Ok(profile)
}

/// Profile of an (n−1)-space disjoint from every regulus element. A
/// non-constant profile rules out a Desarguesian spread containing the
/// regulus and `u`.
pub fn extendability_profile(segre: &SegreVariety, u: &Subspace, exec: Exec) -> Result<OrderProfile> {
    let f = segre.field();
    if u.ambient_dim() != segre.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of PG({},q) for a regulus in PG({},q)",
            u.ambient_dim(),
            segre.ambient_dim()
        )));
    }
    if u.rank() != segre.n() {
        return Err(Error::Precondition(format!("expected a subspace of rank {}, got rank {}", segre.n(), u.rank())));
    }
    for (i, el) in segre.first_family().iter().enumerate() {
        let meet = el.meet(f, u)?;
        if !meet.is_empty() {
            return Err(Error::NotDisjoint(format!(
                "meets regulus element {i} ({}) in a subspace of rank {}",
                el.format(f).join("; "),
                meet.rank()
            )));
        }
    }
    extension_profile(segre, u, exec)
}

/// Points (1, ξ) with ξ ∉ GF(q), optionally one per Frobenius class and
/// restricted to one degree.
pub fn thetas(tower: &FieldTower, up_to_conjugacy: bool, degree: Option<usize>) -> Vec<ProjPoint> {
    let mut xis: Vec<Elem> = tower
        .top()
        .elements()
        .filter(|&x| !tower.in_base(x) && degree.is_none_or(|h| tower.degree_over_base(x) == h))
        .collect();
    if up_to_conjugacy {
        xis = tower.frobenius_representatives(&xis);
    }
    xis.into_iter().map(|x| ProjPoint::new(tower.top(), vec![1, x]).unwrap()).collect()
}

/// Outcome of the order check for one point Θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCheck {
    pub theta: ProjPoint,
    pub degree: usize,
    pub expected: usize,
    pub profile: OrderProfile,
}

impl ThetaCheck {
    pub fn verified(&self) -> bool {
        self.profile.violation.is_none() && self.profile.all_nrc() && self.profile.orders.iter().all(|&o| o == self.expected)
    }
}

/// Orders of H ∩ F̃(b) over all n-spaces H ⊇ F(Θ), with the expected
/// value min{q, [Θ:b]}.
pub fn extension_orders(ctx: &ReductionContext, b: &Subgeometry, theta: &ProjPoint, exec: Exec) -> Result<ThetaCheck> {
    let tower = ctx.tower();
    if b.contains(tower, theta) {
        return Err(Error::Precondition(format!("{} lies on the subline", theta.format(tower.top()))));
    }
    let degree = b.degree_of(tower, theta)?;
    let segre = regulus_of_subline(ctx, b)?;
    let profile = extension_profile(&segre, &ctx.reduce_point(theta), exec)?;
    Ok(ThetaCheck { theta: theta.clone(), degree, expected: degree.min(ctx.q() as usize), profile })
}

/// Aggregate over the points Θ of one (q, n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSweep {
    pub thetas: usize,
    pub extensions_per_theta: usize,
    /// degree h ↦ observed orders
    pub orders_by_degree: BTreeMap<usize, Vec<usize>>,
    pub failure: Option<(ProjPoint, Violation)>,
}

impl OrderSweep {
    pub fn verified(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn sweep_extension_orders(
    q: u32,
    n: u32,
    up_to_conjugacy: bool,
    degree: Option<usize>,
    exec: Exec,
) -> Result<OrderSweep> {
    let tower = FieldTower::for_q(q, n)?;
    let ctx = ReductionContext::new(tower, 2)?;
    let b = Subgeometry::standard(2, 1);
    let ths = thetas(ctx.tower(), up_to_conjugacy, degree);
    let mut sweep = OrderSweep { thetas: ths.len(), extensions_per_theta: 0, orders_by_degree: BTreeMap::new(), failure: None };
    for theta in &ths {
        let check = extension_orders(&ctx, &b, theta, exec)?;
        sweep.extensions_per_theta = check.profile.orders.len();
        let seen = sweep.orders_by_degree.entry(check.degree).or_default();
        for &o in &check.profile.orders {
            if !seen.contains(&o) {
                seen.push(o);
                seen.sort();
            }
        }
        if sweep.failure.is_none() && !check.verified() {
            let violation = check.profile.violation.clone().unwrap_or_else(|| {
                let idx = (0..check.profile.orders.len())
                    .find(|&i| check.profile.orders[i] != check.expected || !check.profile.nrc[i])
                    .expect("some extension failed");
                let u = ctx.reduce_point(theta);
                let h = extensions_through(ctx.base(), &u, ctx.n()).unwrap().nth(idx).unwrap();
                Violation {
                    reason: format!(
                        "order {} (nrc: {}) where {} was expected",
                        check.profile.orders[idx], check.profile.nrc[idx], check.expected
                    ),
                    subspace: h.format(ctx.base()),
                }
            });
            sweep.failure = Some((theta.clone(), violation));
        }
    }
    Ok(sweep)
}

/// F(xθ(x−ξ⁻¹)⁻¹, θ(x−ξ⁻¹)⁻¹) as a vector of GF(qⁿ)².
pub fn closed_form_intersection(tower: &FieldTower, x: Elem, theta: Elem, xi: Elem) -> Result<Vec<Elem>> {
    let top = tower.top();
    if theta == 0 {
        return Err(Error::Precondition("θ must be nonzero".into()));
    }
    if tower.in_base(xi) {
        return Err(Error::Precondition("ξ must lie outside GF(q)".into()));
    }
    if !tower.in_base(x) {
        return Err(Error::Precondition("x must lie in GF(q)".into()));
    }
    let beta = top.div(theta, top.sub(x, top.inv(xi)));
    Ok(vec![top.mul(x, beta), beta])
}

/// Comparison of the closed form with the meet ⟨F(Θ), F(θ,0)⟩ ∩ F(x,1),
/// and the order of the traced curve in Ξ = F(0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub agrees: bool,
    pub trace_order: usize,
    pub trace_is_nrc: bool,
    pub expected_trace_order: usize,
}

pub fn check_closed_form(ctx: &ReductionContext, theta: Elem, xi: Elem) -> Result<ClosedFormCheck> {
    let tower = ctx.tower();
    let (base, top) = (ctx.base(), ctx.top());
    let u = ctx.reduce_vec(&[1, xi])?;
    let y = ProjPoint::new(base, ctx.flatten(&[theta, 0]))?;
    let h = u.join_point(base, &y)?;
    let mut agrees = true;
    for x in base.elements() {
        let closed = ProjPoint::new(base, ctx.flatten(&closed_form_intersection(tower, x, theta, xi)?))?;
        let meet = h.meet(base, &ctx.reduce_vec(&[x, 1])?)?;
        agrees &= meet.as_point().as_ref() == Some(&closed);
    }
    let mut trace: Vec<ProjPoint> = base
        .elements()
        .map(|x| {
            let beta = top.div(theta, top.sub(x, top.inv(xi)));
            ProjPoint::new(base, tower.as_base_vector(beta).unwrap()).unwrap()
        })
        .collect();
    trace.push(ProjPoint::new(base, tower.as_base_vector(theta)?)?);
    let report = nrc::is_nrc(base, &trace)?;
    let h_deg = tower.degree_over_base(top.inv(xi));
    Ok(ClosedFormCheck {
        agrees,
        trace_order: report.order,
        trace_is_nrc: report.is_nrc,
        expected_trace_order: (h_deg - 1).min(ctx.q() as usize),
    })
}

/// True iff H ∩ S is the element plus exactly one second-family line.
pub fn check_containing_extension(segre: &SegreVariety, element: &Subspace, h: &Subspace) -> Result<bool> {
    let f = segre.field();
    if !h.contains(f, element) {
        return Err(Error::Precondition("the subspace does not contain the regulus element".into()));
    }
    if !segre.first_family().contains(element) {
        return Err(Error::Precondition("not an element of the first family".into()));
    }
    let pts = segre.points_in(h)?;
    let Some(extra) = pts.iter().find(|p| !element.contains_point(f, p)) else {
        return Ok(false);
    };
    let line = segre.transversal_through(extra).expect("points of H ∩ S lie on S");
    if !h.contains(f, &line) {
        return Ok(false);
    }
    let mut expected: Vec<ProjPoint> = element.points(f).chain(line.points(f)).collect();
    expected.sort();
    expected.dedup();
    Ok(expected == pts)
}

/// Every n-space through every regulus element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainingSweep {
    pub checked: usize,
    pub failure: Option<Violation>,
}

pub fn sweep_containing_extensions(q: u32, n: u32, exec: Exec) -> Result<ContainingSweep> {
    let ctx = ReductionContext::new(FieldTower::for_q(q, n)?, 2)?;
    let segre = regulus_of_subline(&ctx, &Subgeometry::standard(2, 1))?;
    let f = ctx.base();
    let mut sweep = ContainingSweep { checked: 0, failure: None };
    for el in segre.first_family() {
        let exts: Vec<Subspace> = extensions_through(f, &el, ctx.n())?.collect();
        let results = exec.map(&exts, |h| check_containing_extension(&segre, &el, h));
        for (h, ok) in exts.iter().zip(results) {
            sweep.checked += 1;
            if sweep.failure.is_none() && !ok? {
                sweep.failure = Some(Violation {
                    reason: "the intersection is not the element plus one transversal".into(),
                    subspace: h.format(f),
                });
            }
        }
    }
    Ok(sweep)
}

/// For `trials` random ordered triples of points of b used as reference
/// frames, the degree of Θ is the same.
pub fn degree_well_defined<R: Rng>(
    tower: &FieldTower,
    b: &Subgeometry,
    theta: &ProjPoint,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    if b.contains(tower, theta) {
        return Err(Error::Precondition(format!("{} lies on the subline", theta.format(tower.top()))));
    }
    let reference = b.degree_of(tower, theta)?;
    let pts = b.points(tower);
    for _ in 0..trials {
        let frame: Vec<ProjPoint> = pts.choose_multiple(rng, 3).cloned().collect();
        let b2 = Subgeometry::from_frame(tower.top(), &frame)?;
        if b2.degree_of(tower, theta)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random frames on random images of the standard subline, for every Θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSweep {
    pub thetas: usize,
    pub trials: usize,
    pub failure: Option<String>,
}

pub fn sweep_degree_well_defined(q: u32, n: u32, trials: usize, seed: u64) -> Result<DegreeSweep> {
    let tower = FieldTower::for_q(q, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = Subgeometry::standard(2, 1);
    let ths = thetas(&tower, true, None);
    let mut failure = None;
    for theta in &ths {
        // move the configuration by a random projectivity of PG(1,qⁿ)
        let k = Projectivity::random(tower.top(), 1, &mut rng);
        let moved_b = Subgeometry::new(tower.top(), b.reps().iter().map(|r| k.apply_vec(tower.top(), r)).collect())?;
        let moved_theta = k.apply(tower.top(), theta);
        if !degree_well_defined(&tower, &moved_b, &moved_theta, trials, &mut rng)? && failure.is_none() {
            failure = Some(theta.format(tower.top()));
        }
    }
    Ok(DegreeSweep { thetas: ths.len(), trials, failure })
}

/// The two cases of the frame construction on PG(t,t) × PG(1,t).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameCase {
    /// rᵢ a frame of a hyperplane.
    Hyperplane,
    /// rᵢ spanning the first factor.
    Spanning,
}

/// Curve σ(rᵢ, sᵢ) on S_{t,1,t} ⊂ PG(2t+1,t) for the given case.
pub fn frame_case_curve(q: u32, case: FrameCase) -> Result<(SegreVariety, Vec<ProjPoint>)> {
    let t = q as usize;
    let tower = FieldTower::for_q(q, q + 1)?;
    let ctx = ReductionContext::new(tower, 2)?;
    let segre = regulus_of_subline(&ctx, &Subgeometry::standard(2, 1))?;
    let rs: Vec<ProjPoint> = match case {
        FrameCase::Hyperplane => {
            let mut v: Vec<ProjPoint> = (0..t).map(|i| ProjPoint::standard(t, i)).collect();
            let mut unit = vec![1; t + 1];
            unit[t] = 0;
            v.push(ProjPoint::new(ctx.base(), unit)?);
            v
        }
        FrameCase::Spanning => (0..=t).map(|i| ProjPoint::standard(t, i)).collect(),
    };
    let phi = segre::curve_through_params(&segre, &rs)?;
    Ok((segre, phi))
}

/// Whether ⟨Φ⟩ meets every first-family element in exactly one point and
/// meets the variety exactly in Φ; also returns dim⟨Φ⟩.
pub fn curve_hypotheses(segre: &SegreVariety, phi: &[ProjPoint]) -> Result<(usize, bool)> {
    let f = segre.field();
    let st = Subspace::from_points(f, segre.ambient_dim(), phi)?;
    let one_each = curve_in(segre, &st).is_ok();
    let mut on = segre.points_in(&st)?;
    let mut expected = phi.to_vec();
    on.sort();
    expected.sort();
    Ok((st.dim() as usize, one_each && on == expected))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSample {
    pub curve_order: usize,
    pub hypotheses: bool,
    /// Order of the trace on each first-family element, in family order.
    pub trace_orders: Vec<usize>,
    pub traces_nrc: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub q: u32,
    pub t: usize,
    pub n: usize,
    pub case: Option<FrameCase>,
    pub expected: usize,
    pub samples: Vec<TraceSample>,
}

impl TraceReport {
    pub fn verified(&self) -> bool {
        self.samples.iter().all(|s| {
            s.hypotheses && s.curve_order == self.t && s.traces_nrc && s.trace_orders.iter().all(|&o| o == self.expected)
        })
    }
}

fn trace_sample(segre: &SegreVariety, phi: &[ProjPoint]) -> Result<TraceSample> {
    let (curve_order, hypotheses) = curve_hypotheses(segre, phi)?;
    let mut trace_orders = Vec::new();
    let mut traces_nrc = true;
    for xi in segre.first_params() {
        let r = segre::transversal_trace(segre, phi, &xi)?;
        trace_orders.push(r.order);
        traces_nrc &= r.is_nrc;
    }
    Ok(TraceSample { curve_order, hypotheses, trace_orders, traces_nrc })
}

/// Orders of transversal traces: the frame construction when t = q, or
/// random curves σ(R·m_{t−1}(y), A·y) on S_{t,1,q} when q > t.
pub fn verify_transversal_traces(q: u32, t: usize, case: Option<FrameCase>, samples: usize, seed: u64) -> Result<TraceReport> {
    if t == 0 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    match case {
        Some(case) => {
            if t != q as usize {
                return Err(Error::Precondition(format!("the frame construction needs t = q, got t = {t}, q = {q}")));
            }
            let (segre, phi) = frame_case_curve(q, case)?;
            let expected = if case == FrameCase::Hyperplane { t - 1 } else { t };
            Ok(TraceReport { q, t, n: t + 1, case: Some(case), expected, samples: vec![trace_sample(&segre, &phi)?] })
        }
        None => {
            if (q as usize) <= t {
                return Err(Error::Precondition(format!("random curves need q > t, got q = {q}, t = {t}")));
            }
            let n = t + 1;
            let ctx = ReductionContext::new(FieldTower::for_q(q, n as u32)?, 2)?;
            let segre = regulus_of_subline(&ctx, &Subgeometry::standard(2, 1))?;
            let f = ctx.base();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(samples);
            for _ in 0..samples {
                let full = Projectivity::random(f, n - 1, &mut rng);
                let cols: Vec<Vec<Elem>> = (0..t).map(|j| full.matrix().column(j)).collect();
                let r_map = Matrix::from_columns(n, &cols);
                let s_map = Projectivity::random(f, 1, &mut rng).matrix().clone();
                let phi = segre::scroll_curve(&segre, &r_map, &s_map);
                out.push(trace_sample(&segre, &phi.points)?);
            }
            Ok(TraceReport { q, t, n, case: None, expected: t - 1, samples: out })
        }
    }
}

/// Coordinates of the explicit 3-space of PG(7,4), with ω = [0,1].
pub fn gf4_example_rows(tower: &FieldTower) -> Result<Vec<Vec<Elem>>> {
    let base = tower.base();
    let w = base.parse("[0,1]")?;
    let w2 = base.mul(w, w);
    Ok(vec![
        vec![1, 0, 0, 0, w2, 1, 0, 1],
        vec![0, 1, 0, 0, 1, w2, 0, w2],
        vec![0, 0, 1, 0, 0, w, 1, w],
        vec![0, 0, 0, 1, w2, w2, w, 1],
    ])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf4Fallback {
    pub attempts: usize,
    pub subspace: Option<Vec<String>>,
    pub orders: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf4Report {
    pub base_modulus: String,
    pub top_modulus: String,
    pub disjoint: bool,
    /// Orders of the two named extensions.
    pub orders: Vec<usize>,
    pub nrc: Vec<bool>,
    /// All distinct orders over the 85 extensions.
    pub profile: BTreeMap<usize, usize>,
    pub literal: bool,
    pub fallback: Option<Gf4Fallback>,
}

impl Gf4Report {
    pub fn verified(&self) -> bool {
        if self.literal {
            return true;
        }
        self.fallback
            .as_ref()
            .is_some_and(|fb| fb.subspace.is_some() && fb.orders.len() > 1)
    }
}

/// The explicit PG(7,4) example: S₃ disjoint from the regulus of the
/// standard subline, with extensions of orders 4 and 2. If S₃ is not
/// disjoint under the chosen modulus, a seeded random search looks for
/// another 3-space with a non-constant profile.
pub fn reproduce_gf4_example(top_modulus: Option<Vec<Elem>>, seed: u64, exec: Exec) -> Result<Gf4Report> {
    let tower = match top_modulus {
        Some(m) => FieldTower::with_top_modulus(2, 2, 4, m)?,
        None => FieldTower::for_q(4, 4)?,
    };
    let (base_modulus, top_modulus) = tower.moduli();
    let ctx = ReductionContext::new(tower.clone(), 2)?;
    let segre = regulus_of_subline(&ctx, &Subgeometry::standard(2, 1))?;
    let f = ctx.base();
    let s3 = Subspace::from_rows(f, 7, &gf4_example_rows(&tower)?)?;
    let disjoint = s3.rank() == 4 && segre.first_family().iter().all(|el| el.meet(f, &s3).map(|m| m.is_empty()).unwrap_or(false));
    let w2 = f.mul(f.parse("[0,1]")?, f.parse("[0,1]")?);
    let mut orders = Vec::new();
    let mut nrc_flags = Vec::new();
    for extra in [vec![1, 0, 0, 0, 0, 0, 0, 0], vec![0, 1, 0, w2, 0, 0, 0, 0]] {
        let h = s3.join_point(f, &ProjPoint::new(f, extra)?)?;
        let (order, is_nrc, _) = analyze(&segre, &h);
        orders.push(order);
        nrc_flags.push(is_nrc);
    }
    let profile = if disjoint { extendability_profile(&segre, &s3, exec)?.histogram() } else { BTreeMap::new() };
    let literal = disjoint && orders == [4, 2] && nrc_flags.iter().all(|&b| b);
    let fallback = if literal { None } else { Some(search_nonconstant_profile(&segre, seed, 2000, exec)?) };
    Ok(Gf4Report { base_modulus, top_modulus, disjoint, orders, nrc: nrc_flags, profile, literal, fallback })
}

/// Random (n−1)-spaces disjoint from the regulus until one has a
/// non-constant extension profile.
pub fn search_nonconstant_profile(segre: &SegreVariety, seed: u64, budget: usize, exec: Exec) -> Result<Gf4Fallback> {
    let f = segre.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = segre.ambient_dim() + 1;
    let family = segre.first_family();
    for attempt in 1..=budget {
        let rows: Vec<Vec<Elem>> = (0..segre.n()).map(|_| (0..width).map(|_| rng.gen_range(0..f.order())).collect()).collect();
        let u = Subspace::from_rows(f, segre.ambient_dim(), &rows)?;
        if u.rank() != segre.n() || family.iter().any(|el| !el.meet(f, &u).unwrap().is_empty()) {
            continue;
        }
        let p = extension_profile(segre, &u, exec)?;
        if p.constant.is_none() {
            return Ok(Gf4Fallback { attempts: attempt, subspace: Some(u.format(f)), orders: p.histogram().into_keys().collect() });
        }
    }
    Ok(Gf4Fallback { attempts: budget, subspace: None, orders: Vec::new() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixReport {
    pub q: u32,
    pub quadric_points: usize,
    pub external_lines: usize,
    pub witness: Option<Vec<String>>,
    pub span_dim: isize,
    pub intersection_points: usize,
    pub intersection_is_line: bool,
    /// Every external line gives a 3-space meeting the variety only in ℓ.
    pub all_external_lines_work: bool,
}

impl AppendixReport {
    pub fn verified(&self) -> bool {
        self.witness.is_some() && self.span_dim == 3 && self.intersection_is_line && self.all_external_lines_work
    }
}

/// ℓ = σ(e₀, PG(1,q)) on S_{2,1,q} and a line m of the 3-space
/// σ(⟨e₁,e₂⟩, PG(1,q)) missing its hyperbolic quadric: ⟨ℓ,m⟩ is a
/// 3-space meeting S_{2,1,q} exactly in ℓ.
pub fn appendix_counterexample(q: u32) -> Result<AppendixReport> {
    let f = crate::projective::base_field(q)?;
    let segre = SegreVariety::standard(f.clone(), 3, 2);
    let ell = segre.second_family_element(&ProjPoint::standard(2, 0));
    // coordinates i·3 + j of e_j ⊗ e'_i with j ∈ {1,2}
    let solid_coords = [1usize, 2, 4, 5];
    let embed = |v: &[Elem]| {
        let mut w = vec![0; 6];
        for (&c, &x) in solid_coords.iter().zip(v) {
            w[c] = x;
        }
        w
    };
    let solid = Subspace::from_rows(&f, 5, &(0..4).map(|i| embed(&ProjPoint::standard(3, i).into_coords())).collect::<Vec<_>>())?;
    let quadric = segre.points_in(&solid)?;
    let mut external = Vec::new();
    for line in subspaces_of_dim(&f, 3, 1) {
        let rows: Vec<Vec<Elem>> = line.basis().row_vecs().iter().map(|r| embed(r)).collect();
        let m = Subspace::from_rows(&f, 5, &rows)?;
        if m.points(&f).all(|p| !segre.contains_point(&p)) {
            external.push(m);
        }
    }
    let mut ell_points: Vec<ProjPoint> = ell.points(&f).collect();
    ell_points.sort();
    let check = |m: &Subspace| -> Result<(isize, Vec<ProjPoint>)> {
        let s = ell.join(&f, m)?;
        Ok((s.dim(), segre.points_in(&s)?))
    };
    let mut all_work = true;
    for m in &external {
        let (dim, pts) = check(m)?;
        all_work &= dim == 3 && pts == ell_points;
    }
    let (span_dim, pts) = match external.first() {
        Some(m) => check(m)?,
        None => (-1, Vec::new()),
    };
    Ok(AppendixReport {
        q,
        quadric_points: quadric.len(),
        external_lines: external.len(),
        witness: external.first().map(|m| m.format(&f)),
        span_dim,
        intersection_points: pts.len(),
        intersection_is_line: pts == ell_points,
        all_external_lines_work: all_work,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u32, n: u32) -> ReductionContext {
        ReductionContext::new(FieldTower::for_q(q, n).unwrap(), 2).unwrap()
    }

    #[test]
    fn orders_follow_the_degree() {
        for (q, n) in [(2, 2), (2, 3), (3, 2), (5, 2)] {
            let sweep = sweep_extension_orders(q, n, false, None, Exec::Sequential).unwrap();
            assert!(sweep.verified(), "{q} {n}: {:?}", sweep.failure);
            for (h, orders) in &sweep.orders_by_degree {
                assert_eq!(orders, &vec![(*h).min(q as usize)]);
            }
        }
    }

    #[test]
    fn q4_n4_profiles() {
        let c = ctx(4, 4);
        let b = Subgeometry::standard(2, 1);
        for h in [2, 4] {
            let xi = c.tower().generator_of_degree(h).unwrap();
            let theta = ProjPoint::new(c.top(), vec![1, xi]).unwrap();
            let check = extension_orders(&c, &b, &theta, Exec::Parallel).unwrap();
            assert_eq!(check.profile.orders.len(), 85);
            assert_eq!(check.degree, h);
            assert!(check.verified());
            assert_eq!(check.profile.constant, Some(h));
        }
        let on_b = ProjPoint::new(c.top(), vec![1, 1]).unwrap();
        assert!(extension_orders(&c, &b, &on_b, Exec::Sequential).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let c = ctx(4, 4);
        let tower = c.tower();
        let top = tower.top();
        let xi = tower.generator_of_degree(4).unwrap();
        let theta = top.root();
        let at_zero = closed_form_intersection(tower, 0, theta, xi).unwrap();
        assert_eq!(at_zero, vec![0, top.neg(top.mul(theta, xi))]);
        assert!(closed_form_intersection(tower, 0, 0, xi).is_err());
        assert!(closed_form_intersection(tower, 0, theta, 1).is_err());
        for h in [2, 4] {
            let xi = tower.generator_of_degree(h).unwrap();
            for theta in [1, top.root(), 77] {
                let check = check_closed_form(&c, theta, xi).unwrap();
                assert!(check.agrees);
                assert_eq!(check.trace_order, check.expected_trace_order);
                assert!(check.trace_is_nrc);
            }
        }
    }

    #[test]
    fn containing_extensions() {
        for (q, n) in [(2, 2), (3, 2), (2, 3)] {
            let sweep = sweep_containing_extensions(q, n, Exec::Sequential).unwrap();
            assert!(sweep.failure.is_none());
            assert_eq!(sweep.checked as u64, (q as u64 + 1) * ((q as u64).pow(n) - 1) / (q as u64 - 1));
        }
        let c = ctx(2, 2);
        let segre = regulus_of_subline(&c, &Subgeometry::standard(2, 1)).unwrap();
        let el = &segre.first_family()[0];
        let other = Subspace::from_rows(c.base(), 3, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 1, 0]]).unwrap();
        assert!(check_containing_extension(&segre, el, &other).is_err());
    }

    #[test]
    fn extendability_profile_rejects_regulus_elements() {
        let c = ctx(3, 2);
        let segre = regulus_of_subline(&c, &Subgeometry::standard(2, 1)).unwrap();
        let el = segre.first_family()[2].clone();
        assert!(matches!(extendability_profile(&segre, &el, Exec::Sequential), Err(Error::NotDisjoint(_))));
        let theta = ProjPoint::new(c.top(), vec![1, c.tower().generator_of_degree(2).unwrap()]).unwrap();
        let p = extendability_profile(&segre, &c.reduce_point(&theta), Exec::Sequential).unwrap();
        assert_eq!(p.constant, Some(2));
    }

    #[test]
    fn degree_is_frame_independent() {
        let tower = FieldTower::for_q(4, 4).unwrap();
        let b = Subgeometry::standard(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for h in [2, 4] {
            let xi = tower.generator_of_degree(h).unwrap();
            let theta = ProjPoint::new(tower.top(), vec![1, xi]).unwrap();
            assert!(degree_well_defined(&tower, &b, &theta, 10, &mut rng).unwrap());
        }
        let on_b = ProjPoint::new(tower.top(), vec![0, 1]).unwrap();
        assert!(degree_well_defined(&tower, &b, &on_b, 1, &mut rng).is_err());
    }

    #[test]
    fn frame_cases() {
        for q in [2u32, 3] {
            let a = verify_transversal_traces(q, q as usize, Some(FrameCase::Hyperplane), 1, 0).unwrap();
            assert!(a.verified(), "{a:?}");
            let b = verify_transversal_traces(q, q as usize, Some(FrameCase::Spanning), 1, 0).unwrap();
            assert!(b.verified(), "{b:?}");
        }
        let r = verify_transversal_traces(5, 2, None, 3, 7).unwrap();
        assert!(r.verified());
        assert!(verify_transversal_traces(3, 3, None, 1, 0).is_err());
    }

    #[test]
    fn appendix_small_fields() {
        let r = appendix_counterexample(2).unwrap();
        assert_eq!(r.external_lines, 2);
        assert_eq!(r.quadric_points, 9);
        assert!(r.verified());
        let r = appendix_counterexample(3).unwrap();
        assert_eq!(r.intersection_points, 4);
        assert!(r.verified());
    }

    #[test]
    fn gf4_example_literal_and_fallback() {
        let r = reproduce_gf4_example(None, 1, Exec::Sequential).unwrap();
        assert!(r.disjoint && r.literal && r.verified());
        assert_eq!(r.orders, vec![4, 2]);
        assert_eq!(r.profile, BTreeMap::from([(2, 10), (4, 75)]));
        let c = ctx(4, 4);
        let segre = regulus_of_subline(&c, &Subgeometry::standard(2, 1)).unwrap();
        let fb = search_nonconstant_profile(&segre, 3, 2000, Exec::Parallel).unwrap();
        assert!(fb.subspace.is_some());
        assert!(fb.orders.len() > 1);
    }
}
