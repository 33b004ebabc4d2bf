//! The André–Bruck–Bose representation φ(X) = F(X) ∩ K of AG(2,qⁿ) in
//! PG(3n−1,q), and the images of q-sublines and tangent q-subplanes.
//!
//! The line at infinity is X₀ = 0, so ⟨F(l∞)⟩ is spanned by the last two
//! coordinate blocks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linalg::normalize;
use crate::nrc::{self, NrcReport};
use crate::projective::{Projectivity, ProjPoint, Subspace};
use crate::reduction::ReductionContext;
use crate::segre::Subgeometry;

#[derive(Clone, Debug)]
pub struct AbbContext {
    ctx: ReductionContext,
    at_infinity: Subspace,
    k: Subspace,
}

impl AbbContext {
    /// K = ⟨F(l∞), e₀⟩.
    pub fn new(tower: FieldTower) -> Result<Self> {
        let ctx = ReductionContext::new(tower, 3)?;
        let e0 = ProjPoint::standard(ctx.ambient_dim(), 0);
        AbbContext::with_point(ctx, &e0)
    }

    /// K = ⟨F(l∞), P⟩ for a random P off ⟨F(l∞)⟩.
    pub fn with_k_seed(tower: FieldTower, seed: u64) -> Result<Self> {
        let ctx = ReductionContext::new(tower, 3)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (q, n) = (ctx.q(), ctx.n());
        let mut v: Vec<Elem> = (0..3 * n).map(|_| rng.gen_range(0..q)).collect();
        if v[..n].iter().all(|&c| c == 0) {
            v[rng.gen_range(0..n)] = rng.gen_range(1..q);
        }
        let p = ProjPoint::new(ctx.base(), v)?;
        AbbContext::with_point(ctx, &p)
    }

    fn with_point(ctx: ReductionContext, p: &ProjPoint) -> Result<Self> {
        let n = ctx.n();
        let rows: Vec<Vec<Elem>> = (n..3 * n).map(|i| ProjPoint::standard(ctx.ambient_dim(), i).into_coords()).collect();
        let at_infinity = Subspace::from_rows(ctx.base(), ctx.ambient_dim(), &rows)?;
        if at_infinity.contains_point(ctx.base(), p) {
            return Err(Error::Precondition("K must not lie at infinity".into()));
        }
        let k = at_infinity.join_point(ctx.base(), p)?;
        Ok(AbbContext { ctx, at_infinity, k })
    }

    pub fn reduction(&self) -> &ReductionContext {
        &self.ctx
    }

    pub fn tower(&self) -> &FieldTower {
        self.ctx.tower()
    }

    /// ⟨F(l∞)⟩, a (2n−1)-space.
    pub fn at_infinity(&self) -> &Subspace {
        &self.at_infinity
    }

    pub fn k(&self) -> &Subspace {
        &self.k
    }

    pub fn is_affine(&self, x: &ProjPoint) -> bool {
        x.coords()[0] != 0
    }

    /// φ(X) = F(X) ∩ K.
    pub fn abb_point(&self, x: &ProjPoint) -> Result<ProjPoint> {
        if !self.is_affine(x) {
            return Err(Error::Precondition(format!("{} lies on the line at infinity", x.format(self.ctx.top()))));
        }
        let meet = self.ctx.reduce_point(x).meet(self.ctx.base(), &self.k)?;
        Ok(meet.as_point().expect("F(X) meets K in one point for affine X"))
    }

    pub fn is_at_infinity(&self, p: &ProjPoint) -> bool {
        self.at_infinity.contains_point(self.ctx.base(), p)
    }

    /// A subline of PG(2,qⁿ) through the origin whose span meets l∞ in
    /// (0:1:0) with coordinates (1, ζ) with respect to the subline.
    pub fn subline_with_degree(&self, h: usize) -> Result<Subgeometry> {
        let tower = self.tower();
        let top = tower.top();
        let zeta = if h == 1 { 1 } else { tower.generator_of_degree(h).ok_or_else(|| no_degree(h, tower))? };
        Subgeometry::new(top, vec![vec![1, 0, 0], vec![top.neg(top.inv(zeta)), 1, 0]])
    }

    /// The image of a subline not contained in l∞.
    pub fn subline_image(&self, b: &Subgeometry) -> Result<SublineImage> {
        let tower = self.tower();
        let top = tower.top();
        let base = self.ctx.base();
        let pts = b.points(tower);
        if pts.iter().all(|p| !self.is_affine(p)) {
            return Err(Error::Precondition("the subline lies on the line at infinity".into()));
        }
        let linf = Subspace::from_rows(top, 2, &[vec![0, 1, 0], vec![0, 0, 1]])?;
        let theta = b.span(top).meet(top, &linf)?.as_point().expect("a line meets l∞ in one point");
        let degree = b.degree_of(tower, &theta)?;
        let delta = degree.min(self.ctx.q() as usize);
        let affine: Vec<ProjPoint> = pts.iter().filter(|p| self.is_affine(p)).cloned().collect();
        let image = affine.iter().map(|p| self.abb_point(p)).collect::<Result<Vec<_>>>()?;
        let infinite_points = pts.len() - affine.len();
        let (kind, verified) = if delta == 1 {
            let line = Subspace::from_points(base, self.ctx.ambient_dim(), &image)?;
            let end = line.meet(base, &self.at_infinity)?;
            let end_in_theta = end.rank() == 1 && self.ctx.reduce_point(&theta).contains(base, &end);
            (ImageKind::AffineLine, line.rank() == 2 && end_in_theta && image.len() == tower.q() as usize)
        } else {
            let report = nrc::is_nrc(base, &image)?;
            let ok = infinite_points == 0 && report.is_nrc && report.order == delta && !image.iter().any(|p| self.is_at_infinity(p));
            (ImageKind::Curve(report), ok)
        };
        Ok(SublineImage { theta, degree, delta, infinite_points, image, kind, verified })
    }

    /// A q-subplane tangent to l∞ at T = (0:0:1) containing the subline
    /// of [`Self::subline_with_degree`].
    pub fn tangent_subplane(&self, h: usize) -> Result<(Subgeometry, Subgeometry)> {
        let b = self.subline_with_degree(h)?;
        let mut reps = b.reps().to_vec();
        reps.push(vec![0, 0, 1]);
        Ok((Subgeometry::new(self.tower().top(), reps)?, b))
    }

    /// The ruled surface φ(B ∖ l∞) for a subplane tangent at T and a line
    /// b of B avoiding T.
    pub fn tangent_subplane_image(&self, plane: &Subgeometry, b: &Subgeometry) -> Result<RuledSurface> {
        let tower = self.tower();
        let top = tower.top();
        let base = self.ctx.base();
        let q = tower.q() as usize;
        if plane.dim() != 2 || b.dim() != 1 {
            return Err(Error::Precondition("expected a subplane and a subline".into()));
        }
        let plane_pts = plane.points(tower);
        let at_inf: Vec<&ProjPoint> = plane_pts.iter().filter(|p| !self.is_affine(p)).collect();
        if at_inf.len() != 1 {
            return Err(Error::Precondition(format!("the subplane meets l∞ in {} points, not one", at_inf.len())));
        }
        let t = at_inf[0].clone();
        let b_pts = b.points(tower);
        if !b_pts.iter().all(|p| plane.contains(tower, p)) {
            return Err(Error::Precondition("the subline is not contained in the subplane".into()));
        }
        if b_pts.contains(&t) {
            return Err(Error::Precondition("the subline passes through the tangent point".into()));
        }
        let c0_image = self.subline_image(b)?;
        let c0 = match &c0_image.kind {
            ImageKind::Curve(r) => r.clone(),
            ImageKind::AffineLine => return Err(Error::Precondition("the subline meets l∞ on the subplane".into())),
        };
        let f_t = self.ctx.reduce_point(&t);
        let t_local = gf_q_coords(top, plane, &t);
        let mut lines = Vec::with_capacity(q + 1);
        let mut pairs = Vec::with_capacity(q + 1);
        let mut covered = Vec::new();
        let mut disjoint = true;
        let mut seen = HashSet::new();
        for (x, p) in b_pts.iter().zip(&c0.points) {
            // the subline TX of the subplane: X + λT for λ ∈ GF(q), plus T
            let x_local = gf_q_coords(top, plane, x);
            let mut affine = Vec::with_capacity(q);
            for lambda in base.elements() {
                let v: Vec<Elem> = x_local.iter().zip(&t_local).map(|(&a, &c)| top.add(a, top.mul(lambda, c))).collect();
                affine.push(self.abb_point(&plane_point(top, plane, &v))?);
            }
            let line = Subspace::from_points(base, self.ctx.ambient_dim(), &affine)?;
            let end = line.meet(base, &self.at_infinity)?.as_point();
            let Some(end) = end.filter(|e| f_t.contains_point(base, e) && line.rank() == 2) else {
                return Err(Error::Precondition("a generator is not a line ending in F(T)".into()));
            };
            for a in &affine {
                disjoint &= seen.insert(a.clone());
            }
            covered.extend(affine);
            pairs.push((p.clone(), end.clone()));
            lines.push(line);
        }
        let c1_points: Vec<ProjPoint> = pairs.iter().map(|(_, e)| e.clone()).collect();
        let c1 = nrc::is_nrc(base, &c1_points)?;
        let (c0, c1, kappa) = pairing_projectivity(base, c0, c1, &pairs);
        let mut expected: Vec<ProjPoint> =
            plane_pts.iter().filter(|p| self.is_affine(p)).map(|p| self.abb_point(p)).collect::<Result<_>>()?;
        expected.sort();
        covered.sort();
        let covers_image = expected == covered;
        let degree = c0_image.degree;
        let delta_prime_ok = if q > degree { c1.order == degree - 1 } else { c1.order + 1 == q || c1.order == q };
        Ok(RuledSurface {
            tangent_point: t,
            degree,
            delta: c0_image.delta,
            c0,
            c1,
            kappa,
            pairs,
            lines,
            affine_points: expected.len(),
            disjoint,
            covers_image,
            delta_prime_ok,
        })
    }
}

/// Tries the given witnesses first, then reparametrizes either curve along
/// the pairing.
fn pairing_projectivity(
    f: &crate::field::Field,
    c0: NrcReport,
    c1: NrcReport,
    pairs: &[(ProjPoint, ProjPoint)],
) -> (NrcReport, NrcReport, Option<Projectivity>) {
    if let Ok(g) = nrc::parameter_projectivity(f, &c0, &c1, pairs) {
        return (c0, c1, Some(g));
    }
    let forward: std::collections::HashMap<&ProjPoint, &ProjPoint> = pairs.iter().map(|(a, b)| (a, b)).collect();
    let backward: std::collections::HashMap<&ProjPoint, &ProjPoint> = pairs.iter().map(|(a, b)| (b, a)).collect();
    if let Some(order) = c0.parametrized_points(f).and_then(|p| p.iter().map(|x| forward.get(x).map(|y| (*y).clone())).collect::<Option<Vec<_>>>()) {
        if let Some(c1b) = nrc::reparametrized(f, &c1, &order) {
            if let Ok(g) = nrc::parameter_projectivity(f, &c0, &c1b, pairs) {
                return (c0, c1b, Some(g));
            }
        }
    }
    if let Some(order) = c1.parametrized_points(f).and_then(|p| p.iter().map(|x| backward.get(x).map(|y| (*y).clone())).collect::<Option<Vec<_>>>()) {
        if let Some(c0b) = nrc::reparametrized(f, &c0, &order) {
            if let Ok(g) = nrc::parameter_projectivity(f, &c0b, &c1, pairs) {
                return (c0b, c1, Some(g));
            }
        }
    }
    (c0, c1, None)
}

fn no_degree(h: usize, tower: &FieldTower) -> Error {
    Error::Precondition(format!("GF(q^{}) has no element of degree {h} over GF(q)", tower.n()))
}

/// Coordinates over the subplane representatives, scaled into GF(q).
fn gf_q_coords(top: &crate::field::Field, plane: &Subgeometry, p: &ProjPoint) -> Vec<Elem> {
    let mut c = plane.local_coords(top, p).expect("the point lies in the subplane");
    normalize(top, &mut c);
    c
}

fn plane_point(top: &crate::field::Field, plane: &Subgeometry, local: &[Elem]) -> ProjPoint {
    let mut v = vec![0; plane.len()];
    for (rep, &c) in plane.reps().iter().zip(local) {
        for (vi, &a) in v.iter_mut().zip(rep) {
            *vi = top.add(*vi, top.mul(a, c));
        }
    }
    ProjPoint::new(top, v).expect("nonzero combination")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageKind {
    AffineLine,
    Curve(NrcReport),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublineImage {
    pub theta: ProjPoint,
    pub degree: usize,
    pub delta: usize,
    /// Points of the subline on l∞.
    pub infinite_points: usize,
    /// φ of the affine points of the subline, in subline order.
    pub image: Vec<ProjPoint>,
    pub kind: ImageKind,
    pub verified: bool,
}

impl SublineImage {
    pub fn order(&self) -> usize {
        match &self.kind {
            ImageKind::AffineLine => 1,
            ImageKind::Curve(r) => r.order,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuledSurface {
    pub tangent_point: ProjPoint,
    pub degree: usize,
    pub delta: usize,
    pub c0: NrcReport,
    /// The curve of ends in F(T); its order is δ′.
    pub c1: NrcReport,
    /// Parameter map between C₀ and C₁, when the pairing is projective.
    pub kappa: Option<Projectivity>,
    /// (X, X^κ) for X ∈ C₀.
    pub pairs: Vec<(ProjPoint, ProjPoint)>,
    pub lines: Vec<Subspace>,
    pub affine_points: usize,
    pub disjoint: bool,
    pub covers_image: bool,
    pub delta_prime_ok: bool,
}

impl RuledSurface {
    pub fn delta_prime(&self) -> usize {
        self.c1.order
    }

    pub fn verified(&self, q: u32) -> bool {
        let q = q as usize;
        self.c0.is_nrc
            && self.c0.order == self.delta
            && self.c1.is_nrc
            && self.kappa.is_some()
            && self.lines.len() == q + 1
            && self.affine_points == q * q + q
            && self.disjoint
            && self.covers_image
            && self.delta_prime_ok
    }
}
