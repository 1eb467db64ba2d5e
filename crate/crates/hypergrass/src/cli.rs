//! The `hypergrass` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hypergrass_core::dequant::{figure_emit, tropical_limit_check, tropical_limit_check_complex, GridSpec, LimitReport, PairKind, Prec};
use hypergrass_core::grassmannian::{signs_leq, Grassmannian};
use hypergrass_core::hyperfield::{default_probes, verify_hyperfield_axioms};
use hypergrass_core::num::{fmt_rational, parse_rational, Q};
use hypergrass_core::plucker::{check_strong_naive, GPVector, MatroidBases};
use hypergrass_core::poset::Poset;
use hypergrass_core::realization::{dressian_member, orientation_search};
use hypergrass_core::search::{Kind, Search, DEFAULT_MAX_COORDS};
use hypergrass_core::structures::{find_hom, lookup, verify_homomorphism, Homomorphism, MapKind};
use hypergrass_core::topology::{order_complex, DEFAULT_SIMPLEX_CAP};
use hypergrass_core::{Element, Field};

use crate::formats;
use crate::par;

const AFTER: &str = "\
Formats:
  points    JSONL, one chirotope string per line (lexicographic r-subsets; 0+- over S, 01 over K)
  GP JSON   {\"field\":\"TR\",\"r\":2,\"n\":4,\"coords\":{\"12\":\"3\",...}}, absent keys are zero
  DOT       Hasse diagram of the weak-map order, nodes labelled by chirotope
  CSV       header x,y,z, decimals with 20 significant digits
Exit codes: 0 ok, 1 verification failed, 2 usage or input error.";

#[derive(Parser, Debug)]
#[command(name = "hypergrass", version, about = "Hyperfields, Grassmann-Plucker functions and hyperfield Grassmannians", after_help = AFTER)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "HYPERGRASS_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Verify the hyperfield axioms (exhaustive for S and K, on probes otherwise).
    Axioms {
        #[arg(long)]
        field: Field,
        /// Comma-separated element literals replacing the default probes.
        #[arg(long)]
        probes: Option<String>,
    },
    /// Check that a map between hyperfields is a homomorphism.
    CheckHom {
        #[arg(long)]
        from: Field,
        #[arg(long)]
        to: Field,
        /// id, inc, ph, abs or kappa; default is the registered arrow.
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        probes: Option<String>,
    },
    /// Check a Grassmann-Plucker function.
    CheckGp {
        #[arg(long)]
        field: Option<Field>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "strong")]
        kind: Kind,
        #[arg(long, conflicts_with_all = ["coords", "input"])]
        chirotope: Option<String>,
        /// `12:3,13:-2,...`
        #[arg(long, conflicts_with = "input")]
        coords: Option<String>,
        /// GP JSON file.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Also run the all-tuples checker.
        #[arg(long)]
        naive: bool,
    },
    /// Enumerate Gr(r, F^n) for F = S or K.
    Enumerate {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "strong")]
        kind: Kind,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refuse more than this many Plucker coordinates.
        #[arg(long, default_value_t = DEFAULT_MAX_COORDS)]
        max_coords: u64,
        /// Print only the number of points.
        #[arg(long)]
        count: bool,
    },
    /// Weak-map order on a point stream.
    Poset {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        field: Option<Field>,
        #[arg(long, requires = "n")]
        r: Option<usize>,
        #[arg(long, requires = "r")]
        n: Option<usize>,
        #[arg(long, default_value = "strong")]
        kind: Kind,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Mod-2 homology of the order complex.
    Homology {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        field: Field,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "strong")]
        kind: Kind,
        #[arg(long, default_value_t = DEFAULT_SIMPLEX_CAP)]
        cap: usize,
    },
    /// Count the realizations of a matroid.
    Realize {
        #[arg(long, default_value = "kappa")]
        hom: String,
        #[arg(long, default_value = "S")]
        field: Field,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// fano, non-fano, uniform, a K chirotope, or bases such as 12,13,24.
        #[arg(long)]
        matroid: String,
        #[arg(long, default_value = "strong")]
        kind: Kind,
        /// How many realizations to print.
        #[arg(long, default_value_t = 1)]
        witnesses: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COORDS)]
        max_coords: u64,
    },
    /// Dressian membership in max-plus arithmetic.
    Dressian {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// `12:0,13:1,...` (`;`-separated when n > 9) or a JSON object.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long, default_value = "uniform")]
        matroid: String,
        #[arg(long)]
        json: bool,
    },
    /// Deformed addition x +_h y on a grid, or the tropical limit of one pair.
    Dequantize {
        #[arg(long, default_value = "1/5")]
        h: String,
        #[arg(long, default_value = "-2:2:0.05", allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 128)]
        precision: usize,
        /// `x,y` as rationals or TC literals; prints the limit report instead.
        #[arg(long, allow_hyphen_values = true)]
        pair: Option<String>,
        #[arg(long, default_value = "1,1/3,1/9,1/27,1/81")]
        hs: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

/// Parses and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(ok) => {
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn probes_or_default(f: Field, s: &Option<String>) -> Result<Vec<Element>> {
    match s {
        Some(s) => {
            let v = formats::parse_element_list(s)?;
            if let Some(x) = v.iter().find(|x| x.field() != f) {
                bail!("probe {x} is not in {f}");
            }
            Ok(v)
        }
        None => Ok(default_probes(f)),
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn read_points(path: &PathBuf) -> Result<Vec<String>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    formats::read_jsonl(BufReader::new(f))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match &cli.cmd {
        Cmd::Axioms { field, probes } => {
            let samples = probes_or_default(*field, probes)?;
            let rep = verify_hyperfield_axioms(*field, &samples)?;
            print_json(
                out,
                &json!({
                    "field": field.to_string(),
                    "exhaustive": rep.exhaustive,
                    "samples": rep.samples,
                    "doublyDistributive": rep.doubly_distributive,
                    "passed": rep.passed(),
                    "checks": rep.checks.iter().map(formats::check_json).collect::<Vec<_>>(),
                }),
            )?;
            Ok(rep.passed())
        }
        Cmd::CheckHom { from, to, map, probes } => {
            let h = match map {
                Some(m) => {
                    let kind = MapKind::parse(m).with_context(|| format!("unknown map `{m}`"))?;
                    lookup(&format!("{}:{from}->{to}", kind.tag())).unwrap_or_else(|| Homomorphism::new(kind, *from, *to))
                }
                None => find_hom(*from, *to).with_context(|| format!("no registered map {from} -> {to}; pass --map"))?,
            };
            let samples = probes_or_default(*from, probes)?;
            let rep = verify_homomorphism(&h, &samples);
            print_json(
                out,
                &json!({
                    "name": rep.name,
                    "source": rep.source.to_string(),
                    "target": rep.target.to_string(),
                    "probes": rep.probes,
                    "passed": rep.passed(),
                    "checks": rep.checks.iter().map(formats::check_json).collect::<Vec<_>>(),
                }),
            )?;
            Ok(rep.passed())
        }
        Cmd::CheckGp { field, r, n, kind, chirotope, coords, input, naive } => {
            let need = |x: &Option<usize>, name: &str| x.with_context(|| format!("--{name} is required"));
            let v = if let Some(c) = chirotope {
                let f = field.unwrap_or(if c.contains(['+', '-']) { Field::S } else { Field::K });
                GPVector::parse_chirotope(f, need(r, "r")?, need(n, "n")?, c)?
            } else if let Some(c) = coords {
                let f = field.context("--field is required with --coords")?;
                formats::parse_coords(f, need(r, "r")?, need(n, "n")?, c)?
            } else if let Some(p) = input {
                let s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                formats::parse_gp_json(&s)?
            } else {
                bail!("give --chirotope, --coords or --in");
            };
            let failure = match kind {
                Kind::Strong => v.check_strong()?,
                Kind::Weak => v.check_weak()?,
            };
            let mut rep = json!({
                "field": v.field().to_string(),
                "r": v.rank(),
                "n": v.ground(),
                "kind": kind.as_str(),
                "valid": failure.is_none(),
            });
            if let Some(f) = &failure {
                rep["witness"] = formats::failure_json(f, v.ground());
            }
            if *naive {
                rep["naive"] = check_strong_naive(&v)?.into();
            }
            print_json(out, &rep)?;
            Ok(failure.is_none())
        }
        Cmd::Enumerate { field, r, n, kind, out: path, max_coords, count } => {
            let search = Search::new(*field, *r, *n, *kind, *max_coords)?;
            let pool = par::pool(cli.threads)?;
            if *count {
                let (c, _) = par::count_and_first(&search, &pool, 0);
                print_json(out, &json!({"count": c}))?;
                return Ok(true);
            }
            let sols = par::solutions(&search, &pool);
            let lines: Vec<String> = sols.iter().map(|x| search.to_chirotope(x)).collect();
            match path {
                Some(p) => {
                    formats::write_jsonl(create(p)?, &lines)?;
                    writeln!(err, "wrote {} points to {}", lines.len(), p.display())?;
                }
                None => formats::write_jsonl(&mut *out, &lines)?,
            }
            Ok(true)
        }
        Cmd::Poset { input, field, r, n, kind, dot } => {
            let mut lines = read_points(input)?;
            let field = match field {
                Some(f) => *f,
                None => formats::infer_field(&lines)?,
            };
            if let (Some(r), Some(n)) = (r, n) {
                let g = Grassmannian::from_chirotopes(field, *r, *n, *kind, &lines)?;
                lines = g.chirotopes().to_vec();
            } else {
                lines.sort();
                lines.dedup();
            }
            let vals = formats::sign_vectors(&lines)?;
            let p = Poset::new(lines.clone(), |i, j| signs_leq(&vals[i], &vals[j]))?;
            if let Some(d) = dot {
                let mut w = create(d)?;
                w.write_all(formats::hasse_dot(&p).as_bytes())?;
                w.flush()?;
            }
            let label = |v: Vec<usize>| v.into_iter().map(|i| lines[i].clone()).collect::<Vec<_>>();
            print_json(
                out,
                &json!({
                    "field": field.to_string(),
                    "points": p.len(),
                    "hasseEdges": p.hasse_edges().len(),
                    "maxima": label(p.maxima()),
                    "minima": label(p.minima()),
                    "uniqueMaximum": p.is_contractible_via_max(),
                }),
            )?;
            Ok(true)
        }
        Cmd::Homology { input, field, r, n, kind, cap } => {
            let pool = par::pool(cli.threads)?;
            let g = match input {
                Some(p) => Grassmannian::from_chirotopes(*field, *r, *n, *kind, &read_points(p)?)?,
                None => {
                    let s = Search::new(*field, *r, *n, *kind, DEFAULT_MAX_COORDS)?;
                    Grassmannian::from_solutions(&s, &par::solutions(&s, &pool))
                }
            };
            let c = order_complex(&g.weak_map_poset(), *cap)?;
            let betti = par::homology(&c, &pool);
            print_json(out, &json!({"points": g.len(), "fvector": c.f_vector(), "betti": betti, "euler": c.euler_characteristic()}))?;
            Ok(true)
        }
        Cmd::Realize { hom, field, r, n, matroid, kind, witnesses, max_coords } => {
            let start = Instant::now();
            let m = parse_matroid(matroid, *r, *n)?;
            let h = lookup(hom)
                .or_else(|| (hom == "kappa").then(|| Homomorphism::kappa(*field)))
                .or_else(|| (hom == "id").then(|| Homomorphism::identity(*field)))
                .with_context(|| format!("unknown homomorphism `{hom}`"))?;
            if h.source() != *field || h.target() != Field::K {
                bail!("realize takes a map from --field to K, got {}", h.name());
            }
            let (count, wit) = match field {
                Field::S => {
                    let s = orientation_search(&m, *kind, *max_coords)?;
                    let pool = par::pool(cli.threads)?;
                    let (c, first) = par::count_and_first(&s, &pool, *witnesses);
                    (c, first.iter().map(|x| s.to_chirotope(x)).collect::<Vec<_>>())
                }
                Field::K => (1, vec![m.to_vector()?.chirotope()?].into_iter().take(*witnesses).collect()),
                f => bail!("realization spaces are enumerated over S or K, not {f}"),
            };
            let mut rep = json!({
                "hom": h.name(),
                "field": field.to_string(),
                "r": r,
                "n": n,
                "kind": kind.as_str(),
                "matroid": m.to_vector()?.chirotope()?,
                "count": count,
                "elapsed": start.elapsed().as_secs_f64(),
            });
            if !wit.is_empty() {
                rep["witnesses"] = json!(wit);
            }
            print_json(out, &rep)?;
            Ok(count > 0)
        }
        Cmd::Dressian { r, n, values, matroid, json: as_json } => {
            let m = parse_matroid(matroid, *r, *n)?;
            let x: BTreeMap<Vec<usize>, Q> = formats::parse_values(values, *n)?.into_iter().collect();
            let rep = dressian_member(&x, &m)?;
            let val = |v: &Option<Q>| v.as_ref().map(fmt_rational).unwrap_or_else(|| "-inf".into());
            let key = |s: &[usize]| hypergrass_core::combin::fmt_subset(s, *n);
            if *as_json {
                let rows: Vec<Value> = rep
                    .rows
                    .iter()
                    .map(|row| {
                        json!({
                            "I": key(&row.i), "J": key(&row.j),
                            "terms": row.terms.iter().map(|(a, b, v)| json!({"left": key(a), "right": key(b), "value": val(v)})).collect::<Vec<_>>(),
                            "max": val(&row.max), "attained": row.attained, "ok": row.ok,
                        })
                    })
                    .collect();
                print_json(out, &json!({"result": if rep.member { "member" } else { "nonmember" }, "rows": rows}))?;
            } else {
                writeln!(out, "{}", if rep.member { "member" } else { "nonmember" })?;
                for row in &rep.rows {
                    let terms: Vec<String> = row.terms.iter().map(|(a, b, v)| format!("{}.{}={}", key(a), key(b), val(v))).collect();
                    writeln!(
                        out,
                        "I={} J={} {} max={} x{} {}",
                        key(&row.i),
                        if row.j.is_empty() { "-".to_string() } else { key(&row.j) },
                        terms.join(" "),
                        val(&row.max),
                        row.attained,
                        if row.ok { "ok" } else { "FAIL" }
                    )?;
                }
            }
            Ok(rep.member)
        }
        Cmd::Dequantize { h, grid, out: path, precision, pair, hs, tol } => {
            let mut prec = Prec::new(*precision);
            if let Some(pair) = pair {
                let hs = hs
                    .split(',')
                    .map(|t| parse_rational(t.trim()).with_context(|| format!("`{t}` is not a rational")))
                    .collect::<Result<Vec<_>>>()?;
                let (a, b) = pair.split_once(',').context("--pair takes x,y")?;
                let rep = if a.contains(':') || b.contains(':') {
                    tropical_limit_check_complex(&mut prec, &a.trim().parse()?, &b.trim().parse()?, &hs, *tol)?
                } else {
                    let x = parse_rational(a.trim()).context("bad x")?;
                    let y = parse_rational(b.trim()).context("bad y")?;
                    tropical_limit_check(&mut prec, &x, &y, &hs, *tol)?
                };
                print_json(out, &limit_json(&rep))?;
                return Ok(rep.passed);
            }
            let h = parse_rational(h).with_context(|| format!("`{h}` is not a rational"))?;
            let grid = GridSpec::parse(grid)?;
            let rows = figure_emit(&mut prec, &h, &grid)?;
            match path {
                Some(p) => {
                    formats::write_csv(create(p)?, &rows)?;
                    writeln!(err, "wrote {} rows to {}", rows.len(), p.display())?;
                }
                None => formats::write_csv(&mut *out, &rows)?,
            }
            Ok(true)
        }
    }
}

fn limit_json(rep: &LimitReport) -> Value {
    let kind = match rep.kind {
        PairKind::Dominant => "dominant",
        PairKind::Tie => "tie",
        PairKind::Cancellation => "cancellation",
        PairKind::Arc => "arc",
    };
    json!({
        "x": rep.x.to_string(),
        "y": rep.y.to_string(),
        "kind": kind,
        "target": formats::set_value_json(&rep.target),
        "steps": rep.steps.iter().map(|s| json!({"h": fmt_rational(&s.h), "value": s.value, "distance": s.distance})).collect::<Vec<_>>(),
        "passed": rep.passed,
    })
}

/// `fano`, `non-fano`, `uniform`, a K chirotope, or a comma-separated basis list.
pub fn parse_matroid(s: &str, r: usize, n: usize) -> Result<MatroidBases> {
    let m = match s.to_ascii_lowercase().as_str() {
        "fano" => MatroidBases::fano(),
        "non-fano" | "nonfano" => MatroidBases::non_fano(),
        "uniform" => MatroidBases::uniform(r, n),
        t if !t.is_empty() && t.chars().all(|c| c == '0' || c == '1') && t.len() as u64 == hypergrass_core::combin::binom(n, r) => {
            GPVector::parse_chirotope(Field::K, r, n, t)?.underlying_matroid()
        }
        t => {
            let sep = if t.contains(';') { ';' } else { ',' };
            let mut bases = t
                .split(sep)
                .filter(|b| !b.trim().is_empty())
                .map(|b| Ok(hypergrass_core::combin::parse_subset(b.trim(), n)?))
                .collect::<Result<Vec<_>>>()?;
            bases.sort();
            bases.dedup();
            if bases.iter().any(|b| b.len() != r) {
                bail!("every basis must have {r} elements");
            }
            MatroidBases { n, r, bases }
        }
    };
    if m.r != r || m.n != n {
        bail!("that matroid has rank {} on {} elements, not rank {r} on {n}", m.r, m.n);
    }
    if !m.is_matroid() {
        bail!("the given sets are not the bases of a matroid");
    }
    Ok(m)
}
