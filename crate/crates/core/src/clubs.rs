//! Clubs of PG(1,qⁿ): rank-3 linear sets with a head of weight two,
//! obtained by projecting a q-subplane from a point Θ on the span of one
//! of its sublines.
//!
//! The subplane is the standard one of PG(2,qⁿ), b is its line X₂ = 0,
//! Θ = (1 : ξ : 0) and the axis is X₀ = 0, so the projection is
//! (x₀, x₁, x₂) ↦ (x₁ − ξx₀, x₂).

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::par::Exec;
use crate::projective::{all_points, span, subspaces_of_dim, ProjPoint, Projectivity, Subspace};
use crate::reduction::{ReductionContext, WeightedPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClubSource {
    pub h: usize,
    pub xi: Elem,
    /// The projection center in PG(2,qⁿ).
    pub theta: ProjPoint,
}

#[derive(Clone, Debug)]
pub struct Club {
    ctx: ReductionContext,
    v: Subspace,
    points: Vec<WeightedPoint>,
    head: ProjPoint,
    source: Option<ClubSource>,
}

impl Club {
    /// B(V) for a rank-3 subspace V of PG(2n−1,q), which must be a club.
    pub fn from_subspace(ctx: ReductionContext, v: Subspace) -> Result<Self> {
        if ctx.m() != 2 || v.rank() != 3 {
            return Err(Error::Precondition("a club is a rank-3 linear set of PG(1,qⁿ)".into()));
        }
        let points = ctx.spread_trace(&v)?;
        let heads: Vec<&WeightedPoint> = points.iter().filter(|w| w.weight == 2).collect();
        if heads.len() != 1 || points.iter().any(|w| w.weight > 2) {
            return Err(Error::Precondition("the linear set has no unique point of weight two".into()));
        }
        let head = heads[0].point.clone();
        Ok(Club { ctx, v, points, head, source: None })
    }

    pub fn reduction(&self) -> &ReductionContext {
        &self.ctx
    }

    pub fn subspace(&self) -> &Subspace {
        &self.v
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn head(&self) -> &ProjPoint {
        &self.head
    }

    pub fn source(&self) -> Option<&ClubSource> {
        self.source.as_ref()
    }

    /// Σ over points of (q^w − 1)/(q − 1) equals the size of PG(2,q).
    pub fn weight_identity(&self) -> bool {
        self.ctx.weight_identity_check(&self.v).unwrap_or(false)
    }

    /// The image of the club under a projectivity of PG(1,qⁿ).
    pub fn transform(&self, a: &Projectivity) -> Result<Club> {
        let hat = self.ctx.induced_map(a.matrix());
        let base = self.ctx.base();
        let rows: Vec<Vec<Elem>> = self.v.basis().row_vecs().iter().map(|r| hat.mul_vec(base, r)).collect();
        Club::from_subspace(self.ctx.clone(), Subspace::from_rows(base, self.ctx.ambient_dim(), &rows)?)
    }
}

/// The club L_h: projection of the standard subplane from (1 : ξ_h : 0),
/// ξ_h the smallest generator of GF(q^h).
pub fn make_club(q: u32, n: u32, h: usize) -> Result<Club> {
    if h <= 1 || !(n as usize).is_multiple_of(h) {
        return Err(Error::Precondition(format!("h must be a divisor of n = {n} greater than 1, got {h}")));
    }
    let tower = FieldTower::for_q(q, n)?;
    let xi = tower.generator_of_degree(h).expect("every divisor of n is a degree");
    let ctx = ReductionContext::new(tower, 2)?;
    let top = ctx.top();
    let images = [vec![top.neg(xi), 0], vec![1, 0], vec![0, 1]];
    let rows: Vec<Vec<Elem>> = images.iter().map(|v| ctx.flatten(v)).collect();
    let v = Subspace::from_rows(ctx.base(), ctx.ambient_dim(), &rows)?;
    let theta = ProjPoint::new(top, vec![1, xi, 0])?;
    let mut club = Club::from_subspace(ctx, v)?;
    club.source = Some(ClubSource { h, xi, theta });
    Ok(club)
}

/// λ·S for λ ∈ GF(qⁿ)*.
fn scale_subspace(ctx: &ReductionContext, lambda: Elem, s: &Subspace) -> Subspace {
    let top = ctx.top();
    let rows: Vec<Vec<Elem>> = s
        .basis()
        .row_vecs()
        .iter()
        .map(|r| {
            let v: Vec<Elem> = ctx.unflatten(r).iter().map(|&c| top.mul(lambda, c)).collect();
            ctx.flatten(&v)
        })
        .collect();
    Subspace::from_rows(ctx.base(), ctx.ambient_dim(), &rows).expect("scaling is invertible")
}

/// F₁ = {F(X) : X ≠ Υ}, F₂ = {λV : λ ∈ GF(qⁿ)*/GF(q)*} and their
/// incidences with F(Υ).
#[derive(Clone, Debug)]
pub struct ClubFamilies {
    pub head_space: Subspace,
    pub f1: Vec<Subspace>,
    pub f2: Vec<Subspace>,
    /// F₂ member ∩ F(Υ), per member.
    pub head_lines: Vec<Subspace>,
    /// Point of F(Υ) ↦ members of F₂ through it, in enumeration order.
    pub incidence: HashMap<ProjPoint, Vec<usize>>,
    /// Properties (i)–(iii).
    pub f1_ok: bool,
    pub f2_ok: bool,
    pub plane_counts_ok: bool,
}

impl ClubFamilies {
    pub fn verified(&self) -> bool {
        self.f1_ok && self.f2_ok && self.plane_counts_ok
    }

    /// Points of F(Υ) in enumeration order.
    pub fn head_points(&self, club: &Club) -> Vec<ProjPoint> {
        self.head_space.points(club.ctx.base()).collect()
    }
}

pub fn club_families(club: &Club, exec: Exec) -> Result<ClubFamilies> {
    let ctx = &club.ctx;
    let base = ctx.base();
    let q = ctx.q() as usize;
    let head_space = ctx.reduce_point(&club.head);
    let f1: Vec<Subspace> = club.points.iter().filter(|w| w.point != club.head).map(|w| ctx.reduce_point(&w.point)).collect();
    let mut f1_ok = f1.len() == q * q;
    for (i, a) in f1.iter().enumerate() {
        f1_ok &= a.rank() == ctx.n() && a.meet(base, &head_space)?.is_empty();
        for b in &f1[i + 1..] {
            f1_ok &= a.meet(base, b)?.is_empty();
        }
    }
    let lambdas: Vec<Elem> = all_points(ctx.q(), ctx.n() - 1).map(|r| ctx.tower().from_base_vector(r.coords())).collect();
    let built = exec.map(&lambdas, |&l| {
        let plane = scale_subspace(ctx, l, &club.v);
        let line = plane.meet(base, &head_space).expect("same ambient space");
        (plane, line)
    });
    let (f2, head_lines): (Vec<Subspace>, Vec<Subspace>) = built.into_iter().unzip();
    let f2_ok = f2.iter().zip(&head_lines).all(|(p, l)| p.rank() == 3 && l.rank() == 2);
    let mut incidence: HashMap<ProjPoint, Vec<usize>> = HashMap::new();
    for (i, line) in head_lines.iter().enumerate() {
        for p in line.points(base) {
            incidence.entry(p).or_default().push(i);
        }
    }
    let head_count = head_space.num_points(ctx.q()) as usize;
    let plane_counts_ok = incidence.len() == head_count && incidence.values().all(|v| v.len() == q + 1);
    Ok(ClubFamilies { head_space, f1, f2, head_lines, incidence, f1_ok, f2_ok, plane_counts_ok })
}

/// Dimension of the span of the lines F(Υ) ∩ V over q of the q+1 planes
/// V ∈ F₂ through X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInvariant {
    /// Using the first q planes in enumeration order.
    pub s: usize,
    /// Value for each choice of the excluded plane.
    pub per_exclusion: Vec<usize>,
}

impl PointInvariant {
    pub fn exclusion_independent(&self) -> bool {
        self.per_exclusion.iter().all(|&s| s == self.s)
    }
}

pub fn club_point_invariant(club: &Club, families: &ClubFamilies, x: &ProjPoint) -> Result<PointInvariant> {
    let base = club.ctx.base();
    let planes = families
        .incidence
        .get(x)
        .ok_or_else(|| Error::Precondition(format!("{} is not a point of F(Υ)", x.format(base))))?;
    let span_dim = |skip: usize| -> Result<usize> {
        let lines = planes.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| &families.head_lines[i]);
        Ok(span(base, lines)?.dim() as usize)
    };
    let per_exclusion = (0..planes.len()).map(span_dim).collect::<Result<Vec<_>>>()?;
    Ok(PointInvariant { s: *per_exclusion.last().expect("every point lies on some plane"), per_exclusion })
}

/// The s-values of one club at sample points of F(Υ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClubInvariantReport {
    pub q: u32,
    pub n: u32,
    pub h: usize,
    pub points: usize,
    pub weights_ok: bool,
    pub weight_identity: bool,
    pub families_ok: bool,
    pub samples: usize,
    /// Distinct values of s over the samples.
    pub s_values: Vec<usize>,
    pub exclusion_independent: bool,
    /// s = h − 1 when q > h, s ∈ {q−1, q} otherwise.
    pub matches_expected: bool,
}

impl ClubInvariantReport {
    pub fn s(&self) -> Option<usize> {
        (self.s_values.len() == 1).then(|| self.s_values[0])
    }

    pub fn verified(&self) -> bool {
        self.weights_ok && self.weight_identity && self.families_ok && self.s().is_some() && self.exclusion_independent && self.matches_expected
    }
}

pub fn club_invariant(club: &Club, samples: usize, seed: u64, exec: Exec) -> Result<ClubInvariantReport> {
    let ctx = &club.ctx;
    let q = ctx.q() as usize;
    let h = club.source.as_ref().map_or(0, |s| s.h);
    let families = club_families(club, exec)?;
    let mut pts = families.head_points(club);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pts.shuffle(&mut rng);
    pts.truncate(samples.max(1));
    let invs = exec.map(&pts, |x| club_point_invariant(club, &families, x));
    let invs = invs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut s_values: Vec<usize> = invs.iter().map(|i| i.s).collect();
    s_values.sort();
    s_values.dedup();
    let matches_expected = s_values.iter().all(|&s| if q > h { s + 1 == h } else { s + 1 == q || s == q });
    Ok(ClubInvariantReport {
        q: ctx.q(),
        n: ctx.n() as u32,
        h,
        points: club.points.len(),
        weights_ok: club.points.len() == q * q + 1 && club.points.iter().filter(|w| w.weight == 2).count() == 1,
        weight_identity: club.weight_identity(),
        families_ok: families.verified(),
        samples: pts.len(),
        s_values,
        exclusion_independent: invs.iter().all(PointInvariant::exclusion_independent),
        matches_expected,
    })
}

/// {h : h | n, 1 < h < q}.
pub fn distinguishable_degrees(q: u32, n: u32) -> Vec<usize> {
    (2..q as usize).filter(|h| (n as usize).is_multiple_of(*h)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinguisher {
    pub q: u32,
    pub n: u32,
    pub degrees: Vec<usize>,
    pub reports: BTreeMap<usize, ClubInvariantReport>,
    /// h ↦ s
    pub invariant: BTreeMap<usize, usize>,
    pub distinct: bool,
    /// Number of clubs certified to lie in distinct orbits.
    pub orbit_lower_bound: usize,
}

impl Distinguisher {
    pub fn verified(&self) -> bool {
        self.distinct && self.reports.values().all(ClubInvariantReport::verified)
    }
}

pub fn orbit_distinguisher(q: u32, n: u32, samples: usize, seed: u64, exec: Exec) -> Result<Distinguisher> {
    let degrees = distinguishable_degrees(q, n);
    if degrees.is_empty() {
        return Err(Error::Unsupported(format!("no distinguishable pairs at q = {q}, n = {n}")));
    }
    let mut reports = BTreeMap::new();
    for &h in &degrees {
        let club = make_club(q, n, h)?;
        reports.insert(h, club_invariant(&club, samples, seed, exec)?);
    }
    let invariant: BTreeMap<usize, usize> = reports.iter().filter_map(|(&h, r)| r.s().map(|s| (h, s))).collect();
    let values: HashSet<usize> = invariant.values().copied().collect();
    let distinct = invariant.len() == degrees.len() && values.len() == degrees.len();
    let orbit_lower_bound = if distinct { degrees.len() } else { values.len().min(1) };
    Ok(Distinguisher { q, n, degrees, reports, invariant, distinct, orbit_lower_bound })
}

/// Every line inside F̃(L) lies in F(Υ) or in a member of F₁ ∪ F₂.
/// Quadratic in the number of points; meant for small clubs.
pub fn lines_lie_in_families(club: &Club, families: &ClubFamilies) -> Result<bool> {
    let ctx = &club.ctx;
    let base = ctx.base();
    let union = reduced_points(club);
    let set: HashSet<&ProjPoint> = union.iter().collect();
    let mut seen: HashSet<Subspace> = HashSet::new();
    let members: Vec<&Subspace> = std::iter::once(&families.head_space).chain(&families.f1).chain(&families.f2).collect();
    for (i, a) in union.iter().enumerate() {
        for b in &union[i + 1..] {
            let line = Subspace::from_points(base, ctx.ambient_dim(), &[a.clone(), b.clone()])?;
            if seen.contains(&line) {
                continue;
            }
            if line.points(base).all(|p| set.contains(&p)) && !members.iter().any(|m| m.contains(base, &line)) {
                return Ok(false);
            }
            seen.insert(line);
        }
    }
    Ok(true)
}

/// Every point of F̃(L), sorted.
pub fn reduced_points(club: &Club) -> Vec<ProjPoint> {
    let base = club.ctx.base();
    let mut out: Vec<ProjPoint> = club.points.iter().flat_map(|w| club.ctx.reduce_point(&w.point).points(base).collect::<Vec<_>>()).collect();
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Detection {
    Yes,
    No,
    Inconclusive,
}

/// Searches a partition of F̃(L) into 3-spaces, each meeting every F(X),
/// X ∈ L, in a line. Such a partition exists when L ≅ PG(1,q²). Odd n
/// answers `No` at once; running out of `budget` search nodes answers
/// `Inconclusive`.
pub fn detect_pg1q2_club(club: &Club, budget: usize) -> Result<Detection> {
    let ctx = &club.ctx;
    if ctx.n() % 2 == 1 {
        return Ok(Detection::No);
    }
    let base = ctx.base();
    let q = ctx.q() as usize;
    let union = reduced_points(club);
    let index: HashMap<&ProjPoint, usize> = union.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let owner: Vec<usize> = union
        .iter()
        .map(|p| {
            let x = ctx.point_of(p.coords()).expect("nonzero");
            club.points.iter().position(|w| w.point == x).expect("point of the club")
        })
        .collect();
    // a valid solid is the join of its lines in F(X₀) and F(X₁)
    let mut non_head = club.points.iter().filter(|w| w.point != club.head);
    let f_x0 = ctx.reduce_point(&non_head.next().expect("clubs have non-head points").point);
    let f_x1 = ctx.reduce_point(&non_head.next().expect("clubs have non-head points").point);
    let (lines0, lines1) = (lines_in(base, &f_x0)?, lines_in(base, &f_x1)?);
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Subspace> = HashSet::new();
    for l0 in &lines0 {
        for l1 in &lines1 {
            let solid = l0.join(base, l1)?;
            if !seen.insert(solid.clone()) {
                continue;
            }
            let mut members = Vec::new();
            let mut per_owner = vec![0usize; club.points.len()];
            let mut inside = true;
            for p in solid.points(base) {
                match index.get(&p) {
                    Some(&i) => {
                        members.push(i);
                        per_owner[owner[i]] += 1;
                    }
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            if inside && per_owner.iter().all(|&c| c == q + 1) {
                members.sort();
                candidates.push(members);
            }
        }
    }
    let mut by_point: Vec<Vec<usize>> = vec![Vec::new(); union.len()];
    for (c, members) in candidates.iter().enumerate() {
        for &i in members {
            by_point[i].push(c);
        }
    }
    let mut covered = vec![false; union.len()];
    let mut nodes = 0;
    Ok(match exact_cover(&candidates, &by_point, &mut covered, &mut nodes, budget) {
        Some(true) => Detection::Yes,
        Some(false) => Detection::No,
        None => Detection::Inconclusive,
    })
}

/// Lines of PG(2n−1,q) inside `space`.
fn lines_in(f: &crate::field::Field, space: &Subspace) -> Result<Vec<Subspace>> {
    subspaces_of_dim(f, space.rank() - 1, 1)
        .map(|l| {
            let rows: Vec<Vec<Elem>> = l.basis().row_vecs().iter().map(|c| space.combine(f, c)).collect();
            Subspace::from_rows(f, space.ambient_dim(), &rows)
        })
        .collect()
}

fn exact_cover(
    candidates: &[Vec<usize>],
    by_point: &[Vec<usize>],
    covered: &mut [bool],
    nodes: &mut usize,
    budget: usize,
) -> Option<bool> {
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    let fits = |c: usize, covered: &[bool]| candidates[c].iter().all(|&i| !covered[i]);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (i, cands) in by_point.iter().enumerate() {
        if covered[i] {
            continue;
        }
        let options: Vec<usize> = cands.iter().copied().filter(|&c| fits(c, covered)).collect();
        if best.as_ref().is_none_or(|(_, b)| options.len() < b.len()) {
            let done = options.is_empty();
            best = Some((i, options));
            if done {
                break;
            }
        }
    }
    let Some((_, options)) = best else {
        return Some(true);
    };
    for c in options {
        for &i in &candidates[c] {
            covered[i] = true;
        }
        let found = exact_cover(candidates, by_point, covered, nodes, budget);
        for &i in &candidates[c] {
            covered[i] = false;
        }
        match found {
            Some(false) => {}
            other => return other,
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn club_shape() {
        for (q, n, h) in [(2, 3, 3), (3, 3, 3), (4, 3, 3), (3, 4, 2), (3, 4, 4), (4, 4, 2)] {
            let club = make_club(q, n, h).unwrap();
            let q = q as usize;
            assert_eq!(club.points().len(), q * q + 1);
            assert_eq!(club.points().iter().filter(|w| w.weight == 2).count(), 1);
            assert!(club.points().iter().all(|w| w.weight <= 2));
            assert!(club.weight_identity());
            // (q+1) + q² = q² + q + 1
            assert_eq!((q + 1) + q * q, q * q + q + 1);
        }
        assert!(make_club(4, 4, 3).is_err());
        assert!(make_club(4, 4, 1).is_err());
    }

    #[test]
    fn families_and_lines() {
        let club = make_club(4, 3, 3).unwrap();
        let fam = club_families(&club, Exec::Sequential).unwrap();
        assert_eq!(fam.f1.len(), 16);
        assert!(fam.verified());
        assert!(lines_lie_in_families(&club, &fam).unwrap());
    }

    #[test]
    fn invariant_values() {
        let club = make_club(4, 4, 2).unwrap();
        let r = club_invariant(&club, 10, 1, Exec::Sequential).unwrap();
        assert!(r.verified());
        assert_eq!(r.s(), Some(1));
        let club = make_club(4, 3, 3).unwrap();
        let r = club_invariant(&club, 10, 1, Exec::Sequential).unwrap();
        assert_eq!(r.s(), Some(2));
        let club = make_club(3, 4, 4).unwrap();
        let r = club_invariant(&club, 10, 1, Exec::Sequential).unwrap();
        assert!(r.verified());
        assert!([2, 3].contains(&r.s().unwrap()));
    }

    #[test]
    fn invariant_survives_projectivities() {
        let club = make_club(4, 3, 3).unwrap();
        let s = club_invariant(&club, 5, 0, Exec::Sequential).unwrap().s();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = Projectivity::random(club.reduction().top(), 1, &mut rng);
            let moved = club.transform(&a).unwrap();
            assert_eq!(club_invariant(&moved, 5, 0, Exec::Sequential).unwrap().s(), s);
        }
    }

    #[test]
    fn distinguisher_sets() {
        assert_eq!(distinguishable_degrees(4, 6), vec![2, 3]);
        assert_eq!(distinguishable_degrees(3, 4), vec![2]);
        assert!(distinguishable_degrees(2, 4).is_empty());
        assert!(matches!(orbit_distinguisher(2, 4, 3, 0, Exec::Sequential), Err(Error::Unsupported(_))));
        let d = orbit_distinguisher(3, 4, 5, 0, Exec::Sequential).unwrap();
        assert_eq!(d.invariant, BTreeMap::from([(2, 1)]));
        assert_eq!(d.orbit_lower_bound, 1);
    }

    #[test]
    fn pg1q2_detection() {
        let odd = make_club(2, 3, 3).unwrap();
        assert_eq!(detect_pg1q2_club(&odd, 10_000).unwrap(), Detection::No);
        let club = make_club(3, 4, 2).unwrap();
        assert_eq!(detect_pg1q2_club(&club, 100_000).unwrap(), Detection::Yes);
        let club = make_club(2, 6, 3).unwrap();
        assert_eq!(detect_pg1q2_club(&club, 100_000).unwrap(), Detection::No);
    }
}
