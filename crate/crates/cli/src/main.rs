mod cache;
mod report;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use unital::Serialize;

use unital::aut::{
    are_isomorphic, automorphism_group, classify_affine_unitals, r_invariant_parallelisms, AutOptions,
};
use unital::design::fixture::figure1_fixture;
use unital::design::search::SearchOptions;
use unital::design::{
    build_affine_unital, closure, enumerate_parallelisms, flat_parallelism, natural_parallelism,
    search_block_collections, short_block_geometry, short_blocks, verify_affine_axioms, verify_unital, BlockCollection,
    IncidenceStructure, Parallelism, StructureFile,
};
use unital::perm::PermGroup;
use unital::quadrangle::{
    build_q4, complement_geometry, hyperplane_h, is_geometric_hyperplane, short_geometry_aut_order,
    verify_short_block_model,
};
use unital::sl2::{Sl2, Subgroup, SubgroupClass};
use unital::theorems::run_theorems;

use cache::Cache;
use report::{render, Format};

#[derive(Parser)]
#[command(name = "unital", version, about = "Affine SL(2,q)-unitals, their closures and automorphisms")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Cache directory; UNITAL_CACHE takes precedence.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Canonical labeling node budget.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SType {
    Cyclic,
    Quaternion,
    Exceptional,
}

#[derive(Clone, Copy, ValueEnum)]
enum Choice {
    Flat,
    Natural,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    Structure,
    Pi,
    PiPrime,
    Iso,
}

#[derive(Subcommand)]
enum Command {
    /// Build an affine unital from SL(2,q), a subgroup S and a collection 𝒟.
    Build {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "cyclic")]
        s_type: SType,
        /// Explicit subgroup as comma-separated element indices.
        #[arg(long, conflicts_with = "s_type")]
        s_elements: Option<String>,
        /// JSON list of sets; searched for when absent.
        #[arg(long)]
        d_file: Option<PathBuf>,
        /// Which search result to use.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Check the affine unital axioms, or the unital axioms for a closure.
    Verify { file: Option<PathBuf> },
    /// Enumerate parallelisms of the short blocks.
    Parallelisms {
        file: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
        /// Keep only those invariant under right multiplication.
        #[arg(long)]
        r_invariant: bool,
    },
    /// Close an affine unital by a parallelism.
    Closure {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        parallelism: Choice,
        #[arg(long)]
        p_file: Option<PathBuf>,
    },
    /// Full automorphism group.
    Aut { file: Option<PathBuf> },
    /// Isomorphism test with an explicit map.
    Iso { a: PathBuf, b: PathBuf },
    /// Isomorphism classes of affine SL(2,q)-unitals.
    Classify {
        #[arg(long)]
        q: u32,
    },
    /// Compare the short-block geometry with Q(4,q) minus a hyperplane.
    Quadrangle {
        #[arg(long)]
        q: u32,
    },
    /// The built-in 24-point example with two parallelisms.
    Fixture {
        #[arg(long, value_enum, default_value = "structure")]
        part: Part,
    },
    /// Closure and translation checks for every class at order q.
    Theorems {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        cap: Option<usize>,
    },
}

type Outcome = Result<(Value, bool), String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = AutOptions { budget: cli.budget.unwrap_or(AutOptions::default().budget) };
    let cache = Cache::open(cli.cache.as_deref());
    match run(cli.command, opts, cache.as_ref()) {
        Ok((value, pass)) => {
            print!("{}", render(&value, cli.format));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn read_input(path: Option<&Path>) -> Result<String, String> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(err)?;
            Ok(s)
        }
    }
}

fn load(path: Option<&Path>) -> Result<(StructureFile, IncidenceStructure), String> {
    let file: StructureFile = serde_json::from_str(&read_input(path)?).map_err(err)?;
    let u = file.to_structure().map_err(err)?;
    Ok((file, u))
}

fn group(q: u32) -> Result<Sl2, String> {
    Sl2::of_order(q).map_err(err)
}

fn pick_subgroup(sl2: &Sl2, t: SType, explicit: Option<&str>) -> Result<Subgroup, String> {
    if let Some(list) = explicit {
        let elements = list
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(err))
            .collect::<Result<Vec<_>, _>>()?;
        return sl2.subgroup(elements).map_err(err);
    }
    let class = match t {
        SType::Cyclic => return Ok(sl2.cyclic_subgroup_c()),
        SType::Quaternion => SubgroupClass::GeneralizedQuaternion,
        SType::Exceptional => SubgroupClass::Exceptional,
    };
    sl2.subgroups_order_qplus1()
        .into_iter()
        .find(|s| s.class() == Some(class))
        .ok_or_else(|| format!("SL(2,{}) has no subgroup of that type", sl2.q()))
}

/// Requires the short blocks in the order produced by `build`.
fn check_built(sl2: &Sl2, file: &StructureFile) -> Result<(), String> {
    if file.short_blocks != short_blocks(sl2) {
        return Err("short blocks are not in the standard SL(2,q) order".into());
    }
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn run(command: Command, opts: AutOptions, cache: Option<&Cache>) -> Outcome {
    match command {
        Command::Build { q, s_type, s_elements, d_file, index } => {
            let sl2 = group(q)?;
            let s = pick_subgroup(&sl2, s_type, s_elements.as_deref())?;
            let coll = match d_file {
                Some(p) => BlockCollection::new(serde_json::from_str(&read_input(Some(&p))?).map_err(err)?),
                None => {
                    let opts = SearchOptions { limit: Some(index + 1), ..SearchOptions::default() };
                    let mut found = search_block_collections(&sl2, &s, opts).map_err(err)?;
                    if index >= found.len() {
                        return Err(format!("only {} collections exist for this subgroup", found.len()));
                    }
                    found.swap_remove(index)
                }
            };
            let u = build_affine_unital(&sl2, &s, &coll).map_err(err)?;
            Ok((to_value(&u.to_file(sl2.q())), true))
        }
        Command::Verify { file } => {
            let (file, u) = load(file.as_deref())?;
            if file.short_blocks.is_empty() {
                let r = verify_unital(&u);
                Ok((to_value(&r), r.is_unital()))
            } else {
                let r = verify_affine_axioms(&u);
                Ok((to_value(&r), r.all_pass()))
            }
        }
        Command::Parallelisms { file, cap, r_invariant } => {
            let (file, u) = load(file.as_deref())?;
            if r_invariant {
                let sl2 = group(file.q as u32)?;
                check_built(&sl2, &file)?;
                let found = r_invariant_parallelisms(&sl2, &u, cap).map_err(err)?;
                let flat = found.contains(&flat_parallelism(&sl2));
                let natural = found.contains(&natural_parallelism(&sl2));
                Ok((json!({"count": found.len(), "parallelisms": found, "flat": flat, "natural": natural}), true))
            } else {
                let e = enumerate_parallelisms(&u, cap).map_err(err)?;
                Ok((json!({"count": e.parallelisms.len(), "exhaustive": e.exhaustive, "parallelisms": e.parallelisms}), true))
            }
        }
        Command::Closure { file, parallelism, p_file } => {
            let (file, u) = load(file.as_deref())?;
            let pi = match parallelism {
                Choice::File => {
                    let p = p_file.ok_or("--parallelism file needs --p-file")?;
                    serde_json::from_str::<Parallelism>(&read_input(Some(&p))?).map_err(err)?
                }
                Choice::Flat | Choice::Natural => {
                    let sl2 = group(file.q as u32)?;
                    check_built(&sl2, &file)?;
                    if matches!(parallelism, Choice::Flat) {
                        flat_parallelism(&sl2)
                    } else {
                        natural_parallelism(&sl2)
                    }
                }
            };
            let c = closure(&u, &pi).map_err(err)?;
            let out = StructureFile {
                q: file.q,
                num_points: c.structure().num_points(),
                long_blocks: c.structure().blocks().to_vec(),
                short_blocks: Vec::new(),
                infinity_block: Some(c.infinity_block()),
            };
            Ok((to_value(&out), true))
        }
        Command::Aut { file } => {
            let (_, u) = load(file.as_deref())?;
            let g = automorphism_group(&u, opts).map_err(err)?;
            let gens: Vec<Vec<usize>> = g.generators().iter().map(|p| p.to_vec()).collect();
            Ok((json!({"order": g.order() as u64, "generators": gens}), true))
        }
        Command::Iso { a, b } => {
            let (_, ua) = load(Some(&a))?;
            let (_, ub) = load(Some(&b))?;
            let map = are_isomorphic(&ua, &ub, opts).map_err(err)?;
            Ok((json!({"isomorphic": map.is_some(), "map": map.map(|m| m.to_vec())}), true))
        }
        Command::Classify { q } => {
            let key = cache::key(&["classify", &q.to_string(), &opts.budget.to_string()]);
            if let Some(hit) = cache.and_then(|c| c.get("classify", &key)) {
                return Ok((hit, true));
            }
            let sl2 = group(q)?;
            let classes = classify_affine_unitals(&sl2, SearchOptions::default(), opts).map_err(err)?;
            let mut rows = Vec::new();
            for class in &classes {
                let g = automorphism_group(&class.structure, opts).map_err(err)?;
                let mut row = to_value(class);
                row["aut_order"] = json!(g.order() as u64);
                rows.push(row);
            }
            let value = json!({"q": q, "count": classes.len(), "classes": rows});
            if let Some(c) = cache {
                c.put("classify", &key, &value).map_err(err)?;
            }
            Ok((value, true))
        }
        Command::Quadrangle { q } => quadrangle(q, opts),
        Command::Fixture { part } => {
            let f = figure1_fixture();
            let value = match part {
                Part::Structure => to_value(&f.structure.to_file(3)),
                Part::Pi => to_value(&f.pi),
                Part::PiPrime => to_value(&f.pi_prime),
                Part::Iso => json!({
                    "images": f.iso.to_vec(),
                    "pi_points": f.pi_points,
                    "pi_prime_points": f.pi_prime_points,
                }),
            };
            Ok((value, true))
        }
        Command::Theorems { q, cap } => {
            if q < 3 {
                return Err("theorem checks need q ≥ 3".into());
            }
            let sl2 = group(q)?;
            let r = run_theorems(&sl2, cap, opts).map_err(err)?;
            Ok((to_value(&r), r.pass()))
        }
    }
}

fn quadrangle(q: u32, opts: AutOptions) -> Outcome {
    let sl2 = group(q)?;
    let q4 = build_q4(sl2.field().clone());
    let h = hyperplane_h(&q4);
    let comp = complement_geometry(&q4, &h);
    let model = verify_short_block_model(&sl2, opts).map_err(err)?;
    let (qq, e) = (q as u128, sl2.field().degree() as u128);
    let mut value = json!({
        "q": q,
        "points": q4.points().len(),
        "lines": q4.lines().len(),
        "h_points": h.points.len(),
        "h_lines": h.lines.len(),
        "geometric_hyperplane": is_geometric_hyperplane(&q4, &h),
        "complement_points": comp.num_points(),
        "complement_blocks": comp.num_blocks(),
        "isomorphic": model.is_some(),
        "map": model.as_ref().map(|m| m.to_vec()),
        "expected_aut_order": short_geometry_aut_order(qq, e) as u64,
    });
    let mut pass = model.is_some() && value["geometric_hyperplane"] == json!(true);
    let geometry = short_block_geometry(&sl2);
    let aut = automorphism_group(&geometry, opts).map_err(err)?;
    let a = sl2.automorphism_group_a();
    let r = sl2.right_regular_group();
    let gens = a
        .group()
        .generators()
        .iter()
        .cloned()
        .chain([sl2.inversion_permutation()])
        .chain(r.generators().iter().cloned());
    let generated = PermGroup::new(sl2.order(), gens).map_err(err)?;
    value["aut_order"] = json!(aut.order() as u64);
    value["generated_order"] = json!(generated.order() as u64);
    pass &= aut.order() == short_geometry_aut_order(qq, e) && generated.order() == aut.order();
    Ok((value, pass))
}
