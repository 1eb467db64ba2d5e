//! The acceptance suite: twelve end-to-end criteria, one PASS/FAIL line each.
//! Runs as a plain binary (`cargo test --test acceptance`).

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypergrass::par;
use hypergrass_core::combin::subsets;
use hypergrass_core::dequant::{
    associativity_defect, figure_emit, non_associativity_witness, tropical_limit_check, GridSpec, Prec,
};
use hypergrass_core::grassmannian::{induced_map, naive_points, Grassmannian};
use hypergrass_core::hyperfield::{default_probes, verify_hyperfield_axioms};
use hypergrass_core::num::{q, qi, Q};
use hypergrass_core::plucker::{check_strong_naive, GPVector, MatroidBases};
use hypergrass_core::poset::BitSet;
use hypergrass_core::realization::{
    check_zero_open_equivalences, dressian_member, gluing_failure, homotopy_in_fiber, orientation_search, shift_all,
    torus_scale,
};
use hypergrass_core::search::{Kind, DEFAULT_MAX_COORDS};
use hypergrass_core::structures::{check_diagram_commutes, check_sections, Homomorphism};
use hypergrass_core::topology::{order_complex, DEFAULT_SIMPLEX_CAP};
use hypergrass_core::{Element, Field};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn axioms() -> Outcome {
    let fields = [Field::S, Field::K, Field::Triangle, Field::P, Field::Phi, Field::TR, Field::TC, Field::TT];
    for f in fields {
        let rep = verify_hyperfield_axioms(f, &default_probes(f)).map_err(e)?;
        if !rep.passed() {
            let bad = rep.checks.iter().find(|c| c.required && c.witness.is_some());
            return Err(format!("{f}: {bad:?}"));
        }
    }
    Ok(format!("{} hyperfields, S and K exhaustive", fields.len()))
}

fn diagram() -> Outcome {
    let paths = check_diagram_commutes();
    let secs = check_sections();
    for c in paths.iter().chain(&secs) {
        if let Some(w) = &c.witness {
            return Err(format!("{} vs {}: {w}", c.left, c.right));
        }
    }
    Ok(format!("{} path pairs, {} sections", paths.len(), secs.len()))
}

fn assignments(field: Field, m: usize) -> Vec<Vec<Element>> {
    let vals: Vec<Element> = match field {
        Field::S => vec![Element::sign(0), Element::sign(1), Element::sign(-1)],
        _ => vec![Element::zero(Field::K), Element::one(Field::K)],
    };
    let mut out: Vec<Vec<Element>> = vec![vec![]];
    for _ in 0..m {
        out = out.iter().flat_map(|p| vals.iter().map(|v| [p.clone(), vec![v.clone()]].concat())).collect();
    }
    out
}

fn gp_checker() -> Outcome {
    let mut total = 0;
    for field in [Field::S, Field::K] {
        for a in assignments(field, 6) {
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let v = GPVector::new(field, 2, 4, a).map_err(e)?;
            let fast = v.check_strong().map_err(e)?.is_none();
            let slow = check_strong_naive(&v).map_err(e)?;
            ensure(fast == slow, format!("{field} {}: {fast} vs naive {slow}", v.chirotope().unwrap_or_default()))?;
            total += 1;
        }
    }
    Ok(format!("{total} assignments agree with the naive checker"))
}

fn counts() -> Outcome {
    for n in 1..=10u32 {
        let g = Grassmannian::enumerate(Field::K, 1, n as usize, Kind::Strong).map_err(e)?;
        ensure(g.len() as u64 == 2u64.pow(n) - 1, format!("|Gr(1,K^{n})| = {}", g.len()))?;
    }
    for n in 1..=8u32 {
        let g = Grassmannian::enumerate(Field::S, 1, n as usize, Kind::Strong).map_err(e)?;
        ensure(g.len() as u64 == (3u64.pow(n) - 1) / 2, format!("|Gr(1,S^{n})| = {}", g.len()))?;
    }
    for r in 1..=4u32 {
        let g = Grassmannian::enumerate(Field::S, r as usize, r as usize + 1, Kind::Strong).map_err(e)?;
        ensure(g.len() as u64 == (3u64.pow(r + 1) - 1) / 2, format!("|Gr({r},S^{})| = {}", r + 1, g.len()))?;
    }
    for field in [Field::S, Field::K] {
        let fast = Grassmannian::enumerate(field, 1, 3, Kind::Strong).map_err(e)?;
        let naive = naive_points(field, 1, 3, Kind::Strong).map_err(e)?;
        ensure(fast.chirotopes() == naive.as_slice(), format!("{field}: search and naive enumeration differ"))?;
    }
    Ok("rank 1 up to n=10 (K) and n=8 (S), corank 1 up to r=4".into())
}

fn strong_is_weak() -> Outcome {
    let mut sizes = Vec::new();
    for field in [Field::S, Field::K] {
        for n in 2..=5 {
            let s = Grassmannian::enumerate(field, 2, n, Kind::Strong).map_err(e)?;
            let w = Grassmannian::enumerate(field, 2, n, Kind::Weak).map_err(e)?;
            ensure(s.chirotopes() == w.chirotopes(), format!("Gr(2,{field}^{n}): {} strong, {} weak", s.len(), w.len()))?;
            sizes.push(s.len());
        }
    }
    Ok(format!("sizes {sizes:?}"))
}

fn poset_topology() -> Outcome {
    let mut checked = 0;
    for n in 1..=5 {
        for r in 1..=n {
            let g = Grassmannian::enumerate(Field::K, r, n, Kind::Strong).map_err(e)?;
            let p = g.weak_map_poset();
            ensure(p.maxima().len() == 1, format!("Gr({r},K^{n}) has {} maxima", p.maxima().len()))?;
            let b = order_complex(&p, DEFAULT_SIMPLEX_CAP).map_err(e)?.homology_mod2();
            ensure(b[0] == 1 && b[1..].iter().all(|&x| x == 0), format!("Gr({r},K^{n}) betti {b:?}"))?;
            checked += 1;
        }
    }
    let kappa = Homomorphism::kappa(Field::S);
    for (r, n) in [(1, 3), (2, 4), (2, 5), (3, 5)] {
        let s = Grassmannian::enumerate(Field::S, r, n, Kind::Strong).map_err(e)?;
        let k = Grassmannian::enumerate(Field::K, r, n, Kind::Strong).map_err(e)?;
        let f = induced_map(&kappa, &s, &k).map_err(e)?;
        if let Some((a, b)) = s.weak_map_poset().monotone_failure(&f, &k.weak_map_poset()) {
            return Err(format!("kappa not monotone at {} <= {}", s.chirotopes()[a], s.chirotopes()[b]));
        }
    }
    let s = Grassmannian::enumerate(Field::S, 2, 4, Kind::Strong).map_err(e)?;
    let k = Grassmannian::enumerate(Field::K, 2, 4, Kind::Strong).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for round in 0..20 {
        let set = BitSet::from_indices(k.len(), (0..k.len()).filter(|_| rng.gen_bool(0.3)));
        if let Some(i) = gluing_failure(&kappa, &s, &k, &set).map_err(e)? {
            return Err(format!("gluing fails in round {round} at {}", s.chirotopes()[i]));
        }
    }
    Ok(format!("{checked} matroid posets contractible, kappa monotone, gluing on 20 subsets"))
}

fn homology() -> Outcome {
    let pool = par::pool(None).map_err(e)?;
    let mut out = Vec::new();
    for n in 2..=4 {
        let g = Grassmannian::enumerate(Field::S, 1, n, Kind::Strong).map_err(e)?;
        let c = order_complex(&g.weak_map_poset(), DEFAULT_SIMPLEX_CAP).map_err(e)?;
        let b = par::homology(&c, &pool);
        ensure(b == vec![1; n], format!("Gr(1,S^{n}) betti {b:?}"))?;
        out.push(format!("n={n} {b:?}"));
    }
    Ok(out.join(", "))
}

fn fano() -> Outcome {
    let pool = par::pool(Some(8)).map_err(e)?;
    let f = orientation_search(&MatroidBases::fano(), Kind::Strong, DEFAULT_MAX_COORDS).map_err(e)?;
    let (nf_count, _) = par::count_and_first(&f, &pool, 0);
    ensure(nf_count == 0, format!("Fano has {nf_count} orientations"))?;
    let nf = orientation_search(&MatroidBases::non_fano(), Kind::Strong, DEFAULT_MAX_COORDS).map_err(e)?;
    let (count, first) = par::count_and_first(&nf, &pool, 1);
    ensure(count >= 1, "non-Fano has no orientation")?;
    let w = nf.to_vector(&first[0]);
    ensure(w.is_strong().map_err(e)?, "non-Fano witness is not GP")?;
    Ok(format!("Fano 0, non-Fano {count} (first {})", w.chirotope().map_err(e)?))
}

fn homotopy() -> Outcome {
    let om = Grassmannian::enumerate(Field::S, 2, 4, Kind::Strong).map_err(e)?;
    let inc = Homomorphism::inclusion(Field::S, Field::TR);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut prec = Prec::default();
    let ts: Vec<Q> = (0..=4).map(|k| q(k, 4)).collect();
    let mut steps = 0;
    for _ in 0..10 {
        let p = &om.points()[rng.gen_range(0..om.len())];
        let lambda: Vec<Element> = (0..4)
            .map(|_| Element::real(Field::TR, q(rng.gen_range(1..6i64).pow(4), rng.gen_range(1..4i64).pow(4))).unwrap())
            .collect();
        let v = torus_scale(&p.pushforward(&inc).map_err(e)?, &lambda).map_err(e)?;
        ensure(v.is_strong().map_err(e)?, "scaled realization is not GP")?;
        for st in homotopy_in_fiber(&mut prec, &v, &ts).map_err(e)? {
            ensure(st.exact && st.passed(), format!("{} at t={}: {st:?}", p.chirotope().unwrap_or_default(), st.t))?;
            steps += 1;
        }
    }
    Ok(format!("{steps} exact steps stay in the fiber"))
}

fn openness() -> Outcome {
    let mut fibers = 0;
    for (r, n) in [(1, 2), (2, 4)] {
        let [coarse, _] = check_zero_open_equivalences(Field::S, r, n).map_err(e)?;
        for f in &coarse.fibers {
            ensure(f.open == f.uniform, format!("({r},{n}) fiber over {}: open={} uniform={}", f.matroid, f.open, f.uniform))?;
            fibers += 1;
        }
        ensure(coarse.fibers.iter().any(|f| f.uniform), "no uniform fiber")?;
        ensure(!coarse.zero_open, "0 is open")?;
        ensure(coarse.equivalent(), format!("({r},{n}) equivalences disagree"))?;
    }
    Ok(format!("{fibers} fibers: exactly the uniform ones are open"))
}

fn dequantization() -> Outcome {
    let mut prec = Prec::default();
    let vals = [qi(-3), qi(-1), q(1, 3), qi(1), qi(2)];
    let hs: Vec<Q> = [1, 3, 9, 27, 81].iter().map(|&d| q(1, d)).collect();
    for x in &vals {
        for y in &vals {
            let rep = tropical_limit_check(&mut prec, x, y, &hs, 1e-6).map_err(e)?;
            ensure(rep.passed, format!("pair ({x}, {y}): {:?}", rep.steps.last()))?;
        }
    }
    let rows = figure_emit(&mut prec, &q(1, 5), &GridSpec::parse("-2:2:0.05").map_err(e)?).map_err(e)?;
    let z = rows
        .iter()
        .find(|r| r[0].parse::<f64>() == Ok(1.0) && r[1].parse::<f64>() == Ok(1.0))
        .ok_or("no (1,1) row")?;
    ensure(z[2].starts_with("1.14869835499"), format!("z(1,1) = {}", z[2]))?;
    let mut triples: Vec<[Q; 3]> = Vec::new();
    for a in &vals {
        for b in &vals {
            for c in &vals {
                triples.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    for h in &hs {
        let (worst, ok) = associativity_defect(&mut prec, &triples, h).map_err(e)?;
        ensure(ok, format!("associativity defect {worst} at h={h}"))?;
    }
    let na = non_associativity_witness(&mut prec, &hs).map_err(e)?;
    ensure(na.naive_left == qi(-1) && na.naive_right == qi(0), format!("naive {} vs {}", na.naive_left, na.naive_right))?;
    Ok(format!("25 pairs converge, z(1,1) = {}", z[2]))
}

fn dressian() -> Outcome {
    let m = MatroidBases::uniform(2, 4);
    let keys = subsets(4, 2);
    let mut members = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut patterns = 0;
    for code in 0..3u32.pow(6) {
        let xs: Vec<i64> = (0..6).map(|i| (code / 3u32.pow(i)) as i64 % 3 - 1).collect();
        // keys in lex order: 12 13 14 23 24 34
        let sums = [xs[0] + xs[5], xs[1] + xs[4], xs[2] + xs[3]];
        let top = *sums.iter().max().unwrap();
        let oracle = sums.iter().filter(|&&s| s == top).count() >= 2;
        let x: BTreeMap<Vec<usize>, Q> = keys.iter().cloned().zip(xs.iter().map(|&v| qi(v))).collect();
        let got = dressian_member(&x, &m).map_err(e)?.member;
        ensure(got == oracle, format!("{xs:?}: got {got}, oracle {oracle}"))?;
        members += got as usize;
        if patterns < 100 {
            let c = q(rng.gen_range(-50..50), rng.gen_range(1..20));
            let shifted = dressian_member(&shift_all(&x, &c), &m).map_err(e)?.member;
            ensure(shifted == got, format!("{xs:?} shifted by {c}"))?;
            patterns += 1;
        }
    }
    Ok(format!("729 patterns ({members} members), {patterns} shifts"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 12] = [
        ("hyperfield axioms", axioms, Duration::from_secs(5)),
        ("diagram commutes", diagram, Duration::from_secs(1)),
        ("GP checker", gp_checker, Duration::from_secs(10)),
        ("Grassmannian counts", counts, Duration::from_secs(60)),
        ("strong equals weak", strong_is_weak, Duration::from_secs(120)),
        ("posets and gluing", poset_topology, Duration::from_secs(60)),
        ("projective space homology", homology, Duration::from_secs(120)),
        ("Fano and non-Fano", fano, Duration::from_secs(600)),
        ("homotopy in fiber", homotopy, Duration::from_secs(10)),
        ("zero-openness", openness, Duration::from_secs(5)),
        ("dequantization", dequantization, Duration::from_secs(10)),
        ("Dressian", dressian, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let dt = t.elapsed();
        let (ok, detail) = match out {
            Ok(d) if dt <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took longer than {limit:?}")),
            Err(d) => (false, d),
        };
        failed += !ok as usize;
        println!(
            "criterion {:>2}: {} ({:.3}s) {name}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
