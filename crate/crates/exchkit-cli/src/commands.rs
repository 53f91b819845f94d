//! The six subcommand implementations. Each returns the process exit code
//! on the success path and an error message (exit 2) otherwise.

use crate::io::{emit, report_csv, InstanceFile};
use exchkit::{
    classify_weight_sequence, decompose, exchangeability_violation, lp_project, random_instance,
    sample_mixture, simplex_grid, sweep_plan, tol, tv_decay_experiment, BoundReport, Instance,
    InstanceAnalysis, WeightSequenceSpec,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};

pub fn cmd_gen(
    seed: u64,
    c: usize,
    n: usize,
    r_min: f64,
    out: Option<&Path>,
) -> Result<i32, String> {
    let instance = random_instance(seed, c, n, r_min).map_err(|e| e.to_string())?;
    let file = InstanceFile::from_instance(&instance);
    emit(out, &file.to_json())?;
    if let Some(path) = out {
        eprintln!("wrote {}", path.display());
    }
    Ok(0)
}

pub fn cmd_check(path: &Path) -> Result<i32, String> {
    let file = InstanceFile::load(path)?;
    let (profile, law) = file.raw_law()?;
    let spread = exchangeability_violation(&law, &profile).map_err(|e| e.to_string())?;
    match spread {
        Some(s) if s.hi - s.lo > tol::REL * s.hi + tol::ABS * s.scale => {
            eprintln!(
                "not weighted exchangeable: de-tilted mass {} at {:?} vs {} at {:?}{}",
                s.hi,
                s.tuple_hi,
                s.lo,
                s.tuple_lo,
                transposition_note(&s.tuple_hi, &s.tuple_lo)
            );
            Ok(1)
        }
        _ => {
            println!("weighted exchangeable (c = {}, n = {})", file.c, file.n);
            Ok(0)
        }
    }
}

/// When the witness tuples differ in exactly two coordinates the violation
/// is a single transposition; name it.
fn transposition_note(hi: &[usize], lo: &[usize]) -> String {
    let diffs: Vec<usize> = (0..hi.len()).filter(|&i| hi[i] != lo[i]).collect();
    if let [a, b] = diffs[..] {
        format!(" (swap coordinates {} and {})", a + 1, b + 1)
    } else {
        String::new()
    }
}

pub struct VerifyArgs {
    pub instance: Option<PathBuf>,
    pub k_list: Option<Vec<usize>>,
    pub seed: u64,
    pub instances: usize,
    pub c: Option<usize>,
    pub n: Option<usize>,
    pub r_min: Option<f64>,
    pub out: Option<PathBuf>,
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, String> {
    let targets: Vec<Instance> = match &args.instance {
        Some(path) => vec![InstanceFile::load(path)?.to_instance()?],
        None => sweep_plan(args.seed, args.instances)
            .into_iter()
            .map(|mut p| {
                if let Some(c) = args.c {
                    p.c = c;
                }
                if let Some(n) = args.n {
                    p.n = n;
                }
                if let Some(r) = args.r_min {
                    p.r_min = r;
                }
                random_instance(p.seed, p.c, p.n, p.r_min).map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?,
    };
    if let Some(list) = &args.k_list {
        if list.iter().any(|&k| k == 0) {
            return Err("k must be at least 1".to_string());
        }
    }
    let per_instance: Vec<Result<Vec<BoundReport>, String>> = targets
        .par_iter()
        .map(|instance| {
            let analysis = InstanceAnalysis::new(instance).map_err(|e| e.to_string())?;
            let n = instance.n();
            let ks: Vec<usize> = match &args.k_list {
                Some(list) => list.iter().copied().filter(|&k| k <= n).collect(),
                None => (1..=n).collect(),
            };
            ks.into_iter()
                .map(|k| analysis.report(k).map_err(|e| e.to_string()))
                .collect()
        })
        .collect();
    let mut rows: Vec<BoundReport> = Vec::new();
    for group in per_instance {
        rows.extend(group?);
    }
    if rows.is_empty() {
        return Err("no (instance, k) pairs to verify".to_string());
    }
    rows.sort_by(|a, b| (a.seed, a.k, a.c, a.n).cmp(&(b.seed, b.k, b.c, b.n)));
    emit(args.out.as_deref(), &report_csv(&rows))?;
    let failures = rows.iter().filter(|r| !r.pass_general || !r.pass_finite).count();
    eprintln!("{} rows, {} bound violations", rows.len(), failures);
    Ok(if failures > 0 { 1 } else { 0 })
}

fn render_tuple(c: usize, tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(|x| x.to_string()).collect();
    if c <= 10 {
        parts.concat()
    } else {
        parts.join("-")
    }
}

pub fn cmd_sample(
    path: &Path,
    samples: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32, String> {
    if samples == 0 {
        return Err("need at least one sample".to_string());
    }
    let instance = InstanceFile::load(path)?.to_instance()?;
    let p = instance.model().map_err(|e| e.to_string())?;
    let mix = decompose(&p, instance.profile()).map_err(|e| e.to_string())?;
    let batch =
        sample_mixture(instance.profile(), &mix, seed, samples).map_err(|e| e.to_string())?;
    let c = instance.c();
    let mut counts = vec![0usize; p.probs().len()];
    for tuple in batch.iter() {
        counts[exchkit::space::index_of(c, tuple)] += 1;
    }
    let mut csv = String::from("tuple,count,empirical,exact\n");
    let mut tv = 0.0f64;
    for (index, (&count, &exact)) in counts.iter().zip(p.probs()).enumerate() {
        let empirical = count as f64 / samples as f64;
        tv += (empirical - exact).abs();
        if count > 0 {
            let tuple = exchkit::space::tuple_of(c, instance.n(), index);
            csv.push_str(&format!(
                "{},{},{},{}\n",
                render_tuple(c, &tuple),
                count,
                empirical,
                exact
            ));
        }
    }
    emit(out, &csv)?;
    eprintln!("{} draws, empirical tv to the exact law = {}", samples, tv / 2.0);
    Ok(0)
}

#[derive(Serialize)]
struct ProjectAtom {
    base: Vec<f64>,
    weight: f64,
}

#[derive(Serialize)]
struct ProjectReport {
    k: usize,
    grid_resolution: usize,
    value: f64,
    atoms: Vec<ProjectAtom>,
}

pub fn cmd_project(
    path: &Path,
    k: usize,
    grid_resolution: usize,
    out: Option<&Path>,
) -> Result<i32, String> {
    let instance = InstanceFile::load(path)?.to_instance()?;
    let p = instance.model().map_err(|e| e.to_string())?;
    let p_k = p.marginal(k).map_err(|e| e.to_string())?;
    let grid = simplex_grid(instance.c(), grid_resolution).map_err(|e| e.to_string())?;
    let projection = lp_project(&p_k, instance.profile(), &grid).map_err(|e| e.to_string())?;
    let atoms: Vec<ProjectAtom> = grid
        .iter()
        .zip(&projection.mixture_weights)
        .filter(|(_, &w)| w > 1e-12)
        .map(|(base, &weight)| ProjectAtom { base: base.clone(), weight })
        .collect();
    let report = ProjectReport {
        k,
        grid_resolution,
        value: projection.value,
        atoms,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serialization");
    text.push('\n');
    emit(out, &text)?;
    eprintln!("lp distance {}", projection.value);
    Ok(0)
}

/// Family strings: `constant[:r]`, `one-minus-geometric[:a]`,
/// `one-minus-poly[:a,p]`, `geometric[:a]`, `harmonic`.
pub fn parse_family(text: &str) -> Result<WeightSequenceSpec, String> {
    let (name, params) = match text.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (text, None),
    };
    let values: Vec<f64> = match params {
        Some(p) => p
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad parameter {s:?}")))
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let wrong_count =
        |want: usize| format!("family {name:?} takes {want} parameter(s), got {}", values.len());
    match name {
        "constant" => match values[..] {
            [] => Ok(WeightSequenceSpec::Constant { r: 1.0 }),
            [r] => Ok(WeightSequenceSpec::Constant { r }),
            _ => Err(wrong_count(1)),
        },
        "one-minus-geometric" => match values[..] {
            [] => Ok(WeightSequenceSpec::OneMinusGeometric { a: 0.5 }),
            [a] => Ok(WeightSequenceSpec::OneMinusGeometric { a }),
            _ => Err(wrong_count(1)),
        },
        "one-minus-poly" => match values[..] {
            [] => Ok(WeightSequenceSpec::OneMinusPoly { a: 0.5, p: 2.0 }),
            [a, p] => Ok(WeightSequenceSpec::OneMinusPoly { a, p }),
            _ => Err(wrong_count(2)),
        },
        "geometric" => match values[..] {
            [] => Ok(WeightSequenceSpec::Geometric { a: 0.5 }),
            [a] => Ok(WeightSequenceSpec::Geometric { a }),
            _ => Err(wrong_count(1)),
        },
        "harmonic" => {
            if values.is_empty() {
                Ok(WeightSequenceSpec::Harmonic)
            } else {
                Err(wrong_count(0))
            }
        }
        other => Err(format!(
            "unknown family {other:?} (constant, one-minus-geometric, one-minus-poly, geometric, harmonic)"
        )),
    }
}

pub fn cmd_asymptotics(
    family: &str,
    k: usize,
    n_max: usize,
    out: Option<&Path>,
) -> Result<i32, String> {
    let spec = parse_family(family)?;
    let n_list: Vec<usize> = (k.max(2)..=n_max).collect();
    if n_list.is_empty() {
        return Err(format!("n-max {} is below the smallest length {}", n_max, k.max(2)));
    }
    let curve =
        tv_decay_experiment(&spec, (1.0, 1.0), k, &n_list).map_err(|e| e.to_string())?;
    let mut csv = String::from("family,k,n,tv_exact,bound_general\n");
    for point in &curve {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            family, k, point.n, point.tv_exact, point.bound
        ));
    }
    emit(out, &csv)?;
    let class = classify_weight_sequence(&spec, 100_000).map_err(|e| e.to_string())?;
    eprintln!(
        "sum(1-r) = {}, sum(r) = {}, prod(r) = {}, closed-form: finite-deficit {}, divergent-sum {}",
        class.sum_one_minus_r,
        class.sum_r,
        class.prod_r,
        class.thm33_applies,
        class.bc23_applies
    );
    Ok(0)
}
