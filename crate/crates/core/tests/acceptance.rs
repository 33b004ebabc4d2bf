use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use fingeo::cli::dispatch;
use fingeo::field::FieldTower;
use fingeo::nrc;
use fingeo::projective::{base_field, ProjPoint, Projectivity, Subspace};
use fingeo::reduction::ReductionContext;
use fingeo::report::RunReport;
use fingeo::theorems;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const GRID: [(u32, u32); 7] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 3), (4, 4), (5, 2)];

type Outcome = Result<(), String>;
type Check = fn(&mut Runner) -> Outcome;

struct Runner {
    /// Every CLI invocation made so far, for the determinism check.
    invocations: Vec<Vec<String>>,
}

impl Runner {
    fn run(&mut self, args: &[&str]) -> std::result::Result<RunReport, String> {
        let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        argv.extend(["--threads".to_string(), "4".to_string()]);
        self.invocations.push(argv.clone());
        run_argv(&argv)
    }
}

fn run_argv(argv: &[String]) -> std::result::Result<RunReport, String> {
    let d = dispatch(std::iter::once("fingeo".to_string()).chain(argv.iter().cloned()));
    d.report.ok_or_else(|| format!("`{}` exited with {}: {}", argv.join(" "), d.exit_code, d.message.trim()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf4_example(r: &mut Runner) -> Outcome {
    let rep = r.run(&["reproduce", "gf4-remark"])?;
    let d = &rep.details;
    ensure(d["disjoint"] == json!(true), || "the 3-space meets the regulus".into())?;
    let literal = d["path"] == json!("literal") && d["orders"] == json!([4, 2]);
    let fallback = d["path"] == json!("fallback") && d.get("fallback").is_some_and(|f| f["orders"].as_array().is_some_and(|o| o.len() > 1));
    ensure(literal || fallback, || format!("orders {} via {}", d["orders"], d["path"]))?;
    ensure(rep.verified, || "report not verified".into())
}

fn order_sweeps(r: &mut Runner) -> Outcome {
    for (q, n) in GRID {
        let rep = r.run(&["verify", "thm3-3", "--q", &q.to_string(), "--n", &n.to_string(), "--up-to-conjugacy"])?;
        ensure(rep.verified && rep.counterexample.is_none(), || format!("q={q} n={n}: {:?}", rep.counterexample))?;
        let by_degree: BTreeMap<String, Vec<usize>> = serde_json::from_value(rep.details["orders_by_degree"].clone()).unwrap();
        ensure(!by_degree.is_empty(), || format!("q={q} n={n}: no Θ checked"))?;
        for (h, orders) in by_degree {
            let h: usize = h.parse().unwrap();
            let expected = h.min(q as usize);
            ensure(orders == [expected], || format!("q={q} n={n} degree {h}: orders {orders:?}, expected {expected}"))?;
        }
    }
    Ok(())
}

fn transversal_traces(r: &mut Runner) -> Outcome {
    for q in [2u32, 3, 4] {
        for (case, expected) in [("a", q - 1), ("b", q)] {
            let rep = r.run(&["verify", "lemma2-1", "--q", &q.to_string(), "--t", &q.to_string(), "--case", case])?;
            ensure(rep.verified && rep.details["order"] == json!(expected), || {
                format!("q=t={q} case {case}: order {}, expected {expected}", rep.details["order"])
            })?;
        }
    }
    for t in [2usize, 3] {
        let rep = r.run(&["verify", "lemma2-1", "--q", "5", "--t", &t.to_string()])?;
        ensure(rep.verified && rep.details["order"] == json!(t - 1), || {
            format!("q=5 t={t}: orders {}", rep.details["trace_orders"])
        })?;
    }
    Ok(())
}

fn containing_extensions(r: &mut Runner) -> Outcome {
    for (q, n) in [(2u32, 2u32), (3, 2), (2, 3), (3, 3)] {
        let rep = r.run(&["verify", "prop3-2", "--q", &q.to_string(), "--n", &n.to_string()])?;
        let checked = rep.counts["extensions_checked"].as_u64().unwrap_or(0);
        // (q+1) elements, each on (q^n − 1)/(q − 1) n-spaces
        let expected = (q as u64 + 1) * ((q as u64).pow(n) - 1) / (q as u64 - 1);
        ensure(rep.verified && checked == expected, || format!("q={q} n={n}: {checked} checked, verified {}", rep.verified))?;
    }
    Ok(())
}

fn closed_form(_: &mut Runner) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (q, n) in GRID {
        let tower = FieldTower::for_q(q, n).map_err(|e| e.to_string())?;
        let ctx = ReductionContext::new(tower.clone(), 2).map_err(|e| e.to_string())?;
        let order = tower.top().order();
        for _ in 0..50 {
            let theta = rng.gen_range(1..order);
            let xi = loop {
                let x = rng.gen_range(0..order);
                if !tower.in_base(x) {
                    break x;
                }
            };
            let check = theorems::check_closed_form(&ctx, theta, xi).map_err(|e| e.to_string())?;
            ensure(check.agrees, || format!("q={q} n={n}: θ={theta} ξ={xi} disagrees"))?;
        }
    }
    Ok(())
}

fn abb_images(r: &mut Runner) -> Outcome {
    for q in [3u32, 4] {
        for n in [3u32, 4] {
            for h in (1..=n as usize).filter(|h| (n as usize).is_multiple_of(*h)) {
                let (qs, ns, hs) = (q.to_string(), n.to_string(), h.to_string());
                let rep = r.run(&["abb", "subline", "--q", &qs, "--n", &ns, "--theta-degree", &hs])?;
                let delta = h.min(q as usize);
                let d = &rep.details;
                let shape_ok = if delta == 1 {
                    d["kind"] == json!("affine line")
                } else {
                    d["kind"] == json!("normal rational curve") && d["order"] == json!(delta) && rep.counts["infinite_points"] == json!(0)
                };
                ensure(rep.verified && shape_ok && d["k_invariant"] == json!(true), || {
                    format!("subline q={q} n={n} h={h}: kind {} order {}", d["kind"], d["order"])
                })?;
                if h == 1 {
                    continue;
                }
                let rep = r.run(&["abb", "subplane", "--q", &qs, "--n", &ns, "--h", &hs])?;
                let d = &rep.details;
                let counts_ok = rep.counts["lines"] == json!(q + 1) && rep.counts["affine_points"] == json!(q * q + q);
                ensure(rep.verified && counts_ok && d["disjoint"] == json!(true) && d["delta_prime_ok"] == json!(true), || {
                    format!("subplane q={q} n={n} h={h}: δ′ = {}", d["delta_prime"])
                })?;
                ensure(d["k_invariant"] == json!(true), || format!("subplane q={q} n={n} h={h}: verdict depends on K"))?;
            }
        }
    }
    Ok(())
}

fn club_orbits(r: &mut Runner) -> Outcome {
    for (q, n) in [(4u32, 6u32), (5, 6)] {
        let rep = r.run(&["clubs", "distinguish", "--q", &q.to_string(), "--n", &n.to_string()])?;
        ensure(rep.details["s_by_h"] == json!({"2": 1, "3": 2}), || format!("q={q} n={n}: s = {}", rep.details["s_by_h"]))?;
        ensure(rep.counts["orbit_lower_bound"].as_u64().unwrap_or(0) >= 2, || format!("q={q} n={n}: fewer than two orbits"))?;
        for (h, club) in rep.details["clubs"].as_object().unwrap() {
            let ok = club["points"] == json!(q * q + 1) && club["weight_identity"] == json!(true) && club["families_ok"] == json!(true);
            ensure(ok, || format!("q={q} n={n} h={h}: {club}"))?;
        }
        ensure(rep.verified, || format!("q={q} n={n}: not verified"))?;
    }
    Ok(())
}

fn appendix(r: &mut Runner) -> Outcome {
    for q in [2u32, 3, 4] {
        let rep = r.run(&["verify", "appendix", "--q", &q.to_string()])?;
        let ok = rep.verified
            && rep.counts["external_lines"].as_u64().unwrap_or(0) > 0
            && rep.details["span_dim"] == json!(3)
            && rep.details["intersection_is_line"] == json!(true)
            && rep.counts["intersection_points"] == json!(q + 1);
        ensure(ok, || format!("q={q}: {:?} {:?}", rep.counts, rep.details))?;
    }
    Ok(())
}

/// A point of the line through two curve points other than `skip`, off
/// the curve.
fn collinear_corruption(f: &fingeo::field::Field, pts: &[ProjPoint], skip: usize, rng: &mut ChaCha8Rng) -> ProjPoint {
    let others: Vec<usize> = (0..pts.len()).filter(|&i| i != skip).collect();
    let a = &pts[others[rng.gen_range(0..others.len())]];
    let b = loop {
        let b = &pts[others[rng.gen_range(0..others.len())]];
        if b != a {
            break b;
        }
    };
    let line = Subspace::from_points(f, a.ambient_dim(), &[a.clone(), b.clone()]).unwrap();
    let off: Vec<ProjPoint> = line.points(f).filter(|p| !pts.contains(p)).collect();
    off[rng.gen_range(0..off.len())].clone()
}

fn oracle_soundness(_: &mut Runner) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for q in [2u32, 3, 4, 5, 7] {
        let f = base_field(q).map_err(|e| e.to_string())?;
        for t in 1..q as usize {
            let curve = nrc::moment_curve(&f, t);
            for trial in 0..100 {
                let g = Projectivity::random(&f, t, &mut rng);
                let image: Vec<ProjPoint> = curve.iter().map(|p| g.apply(&f, p)).collect();
                let rep = nrc::is_nrc(&f, &image).map_err(|e| e.to_string())?;
                ensure(rep.is_nrc && rep.order == t && rep.witness_is_valid(&f), || {
                    format!("q={q} t={t} image {trial}: order {} nrc {}", rep.order, rep.is_nrc)
                })?;

                let i = rng.gen_range(0..image.len());
                let bad: Vec<ProjPoint> = if t == 1 {
                    // lift to PG(2,q) with one point off the line
                    let lift = |p: &ProjPoint, z: u32| ProjPoint::new(&f, vec![p.coords()[0], p.coords()[1], z]).unwrap();
                    image.iter().enumerate().map(|(j, p)| lift(p, (j == i) as u32)).collect()
                } else {
                    let mut bad = image.clone();
                    bad[i] = collinear_corruption(&f, &image, i, &mut rng);
                    bad
                };
                let verdict = nrc::is_nrc(&f, &bad).map(|r| r.is_nrc && r.order == t).unwrap_or(false);
                ensure(!verdict, || format!("q={q} t={t}: corruption {trial} accepted"))?;
            }
        }
    }
    Ok(())
}

fn degree_frames(r: &mut Runner) -> Outcome {
    for (q, n) in GRID {
        let rep = r.run(&["verify", "prop3-1", "--q", &q.to_string(), "--n", &n.to_string(), "--trials", "10"])?;
        ensure(rep.verified, || format!("q={q} n={n}: {:?}", rep.counterexample))?;
    }
    Ok(())
}

fn determinism(r: &mut Runner) -> Outcome {
    let runs = std::mem::take(&mut r.invocations);
    for argv in &runs {
        let first = run_argv(argv)?.fingerprint();
        let second = run_argv(argv)?.fingerprint();
        let mut single = argv.clone();
        let n = single.len();
        single[n - 1] = "1".into();
        let sequential = run_argv(&single)?.fingerprint();
        ensure(first == second, || format!("`{}` differs between runs", argv.join(" ")))?;
        ensure(first == sequential, || format!("`{}` differs between 4 threads and 1", argv.join(" ")))?;
    }
    ensure(!runs.is_empty(), || "no reports to compare".into())
}

fn main() {
    let criteria: [(&str, Check, u64); 11] = [
        ("GF(4) example: disjoint 3-space with extension orders 4 and 2", gf4_example, 10),
        ("extension orders equal min{q, degree} over the grid", order_sweeps, 120),
        ("transversal trace orders t−1 and t", transversal_traces, 10),
        ("n-spaces through a regulus element", containing_extensions, 30),
        ("closed form agrees with the meet", closed_form, 10),
        ("ABB subline and tangent subplane images", abb_images, 60),
        ("club invariant separates orbits for q=4,5 and n=6", club_orbits, 300),
        ("3-space meeting S_{2,1,q} in one line", appendix, 20),
        ("NRC oracle on images and corruptions", oracle_soundness, 60),
        ("degree independent of the frame", degree_frames, 5),
        ("reports identical across runs and thread counts", determinism, 600),
    ];
    let mut runner = Runner { invocations: Vec::new() };
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check(&mut runner);
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(*limit) {
            outcome = Err(format!("took {:.1} s, limit {limit} s", elapsed.as_secs_f64()));
        }
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({:.2} s)", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
