use fingeo::field::FieldTower;
use fingeo::nrc;
use fingeo::projective::{base_field, ProjPoint, Projectivity, Subspace};
use fingeo::reduction::ReductionContext;
use fingeo::theorems;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_grid() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(vec![(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)])
}

fn vector(len: usize, order: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..order, len).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flatten_round_trips((q, n) in small_grid(), seed in any::<u64>()) {
        let ctx = ReductionContext::new(FieldTower::for_q(q, n).unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = ctx.top().order();
        let v: Vec<u32> = (0..2).map(|_| rand::Rng::gen_range(&mut rng, 0..order)).collect();
        prop_assert_eq!(ctx.unflatten(&ctx.flatten(&v)), v);
    }

    #[test]
    fn reduced_points_partition_the_space((q, n) in small_grid(), a in 0u32..1000, b in 0u32..1000) {
        let ctx = ReductionContext::new(FieldTower::for_q(q, n).unwrap(), 2).unwrap();
        let pts: Vec<ProjPoint> = ctx.ext_points().collect();
        let x = &pts[a as usize % pts.len()];
        let y = &pts[b as usize % pts.len()];
        let (fx, fy) = (ctx.reduce_point(x), ctx.reduce_point(y));
        prop_assert_eq!(fx.rank(), n as usize);
        let meet = fx.meet(ctx.base(), &fy).unwrap();
        prop_assert_eq!(meet.is_empty(), x != y);
        for p in fx.points(ctx.base()) {
            prop_assert_eq!(&ctx.point_of(p.coords()).unwrap(), x);
        }
    }

    #[test]
    fn meet_and_join_agree_with_point_counts(rows_u in prop::collection::vec(vector(5, 3), 1..4), rows_w in prop::collection::vec(vector(5, 3), 1..4)) {
        let f = base_field(3).unwrap();
        let u = Subspace::from_rows(&f, 4, &rows_u).unwrap();
        let w = Subspace::from_rows(&f, 4, &rows_w).unwrap();
        let meet = u.meet(&f, &w).unwrap();
        let join = u.join(&f, &w).unwrap();
        prop_assert_eq!(meet.rank() + join.rank(), u.rank() + w.rank());
        let common = u.points(&f).filter(|p| w.contains_point(&f, p)).count() as u64;
        prop_assert_eq!(meet.num_points(3), common);
    }

    #[test]
    fn spread_trace_weights_sum_to_the_point_count((q, n) in small_grid(), rank in 1usize..5, seed in any::<u64>()) {
        let ctx = ReductionContext::new(FieldTower::for_q(q, n).unwrap(), 2).unwrap();
        let dim = ctx.ambient_dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<u32>> = (0..rank.min(dim + 1)).map(|_| (0..=dim).map(|_| rand::Rng::gen_range(&mut rng, 0..q)).collect()).collect();
        prop_assume!(rows.iter().any(|r| r.iter().any(|&c| c != 0)));
        let s = Subspace::from_rows(ctx.base(), dim, &rows).unwrap();
        let trace = ctx.spread_trace(&s).unwrap();
        let q64 = q as u64;
        let total: u64 = trace.iter().map(|w| (q64.pow(w.weight as u32) - 1) / (q64 - 1)).sum();
        prop_assert_eq!(total, s.num_points(q));
    }

    #[test]
    fn projective_images_of_moment_curves_are_recognized(t in 1usize..4, q in prop::sample::select(vec![4u32, 5, 7]), seed in any::<u64>()) {
        let f = base_field(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Projectivity::random(&f, t, &mut rng);
        let pts: Vec<ProjPoint> = nrc::moment_curve(&f, t).iter().map(|p| g.apply(&f, p)).collect();
        let report = nrc::is_nrc(&f, &pts).unwrap();
        prop_assert!(report.is_nrc);
        prop_assert_eq!(report.order, t);
        prop_assert!(report.witness_is_valid(&f));
    }

    #[test]
    fn closed_form_matches_the_meet(theta in 1u32..27, xi in 0u32..27) {
        let tower = FieldTower::for_q(3, 3).unwrap();
        prop_assume!(!tower.in_base(xi));
        let ctx = ReductionContext::new(tower, 2).unwrap();
        prop_assert!(theorems::check_closed_form(&ctx, theta, xi).unwrap().agrees);
    }
}
