//! Command-line entry point: file I/O, corpus generation, audits, and
//! reports for every library module.
//!
//! Exit codes: 0 success, 1 crash or malformed input, 2 audit
//! counterexamples found, 3 search budget exceeded (partial report).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use fintopo::chains::{self, ComplexFile, Ring, SimplicialComplex};
use fintopo::corpus::all_posets_up_to_iso;
use fintopo::covers::{
    cat_map, extract_planner, restrict_cover, tc_map, Budgets, PartWitness, RestrictKind,
};
use fintopo::error::Error;
use fintopo::grouphom::{self, IntMatrix};
use fintopo::homotopy::{core, HomotopyEngine};
use fintopo::linalg::FieldSpec;
use fintopo::products::{cup_length, zero_divisor_cup_length};
use fintopo::report::{cover_view, fence_view, hash_file, planner_view, write_atomic, InputHash, Report};
use fintopo::retracts::{
    audit_monotonicity, enumerate_retractions, CorpusSpec, Invariant, RetractionSquare,
};
use fintopo::space::{FiniteSpace, MapFile, ProductSpace, SpaceFile, SpaceMap};

#[derive(Parser)]
#[command(name = "fintopo", version, about = "Invariants of finite topological spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Report file, written atomically.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Format of the report written to --output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for audits (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Give up with a partial report after this many seconds.
    #[arg(long, global = true)]
    time_limit_secs: Option<u64>,
    /// Cap on enumerated candidate open sets.
    #[arg(long, global = true)]
    max_open_sets: Option<usize>,
    /// Cap on r-fold product size for TC searches.
    #[arg(long, global = true)]
    max_product_points: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InvariantArg {
    Cat,
    Tc,
}

#[derive(Subcommand, Clone)]
enum Cmd {
    /// LS-category of a map (or of a space via its identity map).
    Cat { input: PathBuf },
    /// Sequential topological complexity TC_r.
    Tc {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// TC cover with optional explicit motion-planner tables.
    Planner {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Emit the evaluated planner table for every cover part.
        #[arg(long)]
        extract: bool,
    },
    /// Restrict a minimal cover through a retraction square and re-validate.
    RestrictCover {
        square: PathBuf,
        #[arg(long, value_enum, default_value_t = InvariantArg::Cat)]
        invariant: InvariantArg,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Enumerate all retractions of a space onto an induced subspace.
    Retractions {
        space: PathBuf,
        /// Comma-separated point labels of the subspace.
        #[arg(long, value_delimiter = ',')]
        subspace: Vec<String>,
    },
    /// Verify a retraction square's defining identities.
    SquareCheck { square: PathBuf },
    /// Monotonicity audit of cat or TC_r over the poset corpus.
    Audit {
        #[arg(long, value_enum)]
        invariant: InvariantArg,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long)]
        connected_only: bool,
        /// Audit only identity maps (the space-level statements).
        #[arg(long)]
        identity_only: bool,
    },
    /// Simplicial homology of a complex (or a space's order complex).
    Homology {
        input: PathBuf,
        #[arg(long, value_parser = parse_ring, default_value = "Z")]
        ring: Ring,
    },
    /// Simplicial cohomology (universal-coefficient torsion shift over Z).
    Cohomology {
        input: PathBuf,
        #[arg(long, value_parser = parse_ring, default_value = "Z")]
        ring: Ring,
    },
    /// Cohomological-dimension probes (lower bound; dim is the upper bound).
    Cd {
        input: PathBuf,
        /// Probe rings; default: Z, Q, and Z/p for detected torsion primes.
        #[arg(long, value_parser = parse_ring)]
        ring: Vec<Ring>,
    },
    /// Homological-dimension probes.
    Hd {
        input: PathBuf,
        #[arg(long, value_parser = parse_ring)]
        ring: Vec<Ring>,
    },
    /// Cup-length over a field.
    CupLength {
        input: PathBuf,
        #[arg(long, value_parser = parse_field, default_value = "Q")]
        field: FieldSpec,
    },
    /// Zero-divisor cup-length (TC_r lower bound) over a field.
    Zdcl {
        input: PathBuf,
        #[arg(long, value_parser = parse_field, default_value = "Q")]
        field: FieldSpec,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// cd of a free-abelian homomorphism at trivial coefficients.
    CdHom {
        /// JSON file containing the matrix as a list of rows.
        matrix: PathBuf,
    },
    /// Lemma 3.1 audit: cd(φ') ≤ cd(φ) over exhaustive + random corpora.
    AuditLemma31 {
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Theorem 3.2 audit: classify retraction squares equal/strict-less.
    AuditTheorem32 {
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long)]
        seed: u64,
    },
    /// All posets up to isomorphism, with counts per size.
    GenCorpus {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
    },
    /// Are two maps homotopic? Emits the fence when they are.
    Homotopic { f: PathBuf, g: PathBuf },
    /// Is a map null-homotopic?
    Nullhomotopic { map: PathBuf },
    /// Deformation core of a space via iterated beat-point removal.
    Core { space: PathBuf },
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    let ring = match s {
        "Z" => Ring::Z,
        "Q" => Ring::Q,
        other => match other.strip_prefix("Zp:") {
            Some(p) => Ring::Zp(p.parse().map_err(|_| format!("bad modulus {p:?}"))?),
            None => return Err(format!("expected Z, Q, or Zp:<p>, got {s:?}")),
        },
    };
    ring.validate().map_err(|e| e.to_string())?;
    Ok(ring)
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let field = match s {
        "Q" => FieldSpec::Q,
        other => match other.strip_prefix("Zp:") {
            Some(p) => FieldSpec::Fp(p.parse().map_err(|_| format!("bad modulus {p:?}"))?),
            None => return Err(format!("expected Q or Zp:<p>, got {s:?}")),
        },
    };
    field.validate().map_err(|e| e.to_string())?;
    Ok(field)
}

// --- input loading ---

struct Loaded<T> {
    value: T,
    inputs: Vec<InputHash>,
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<Loaded<FiniteSpace>, Error> {
    let v = read_json(path)?;
    let file: SpaceFile = serde_json::from_value(v)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        value: file.to_space()?,
        inputs: vec![hash_file(path)?],
    })
}

/// A map file, or a space file interpreted as its identity map.
fn load_map_or_space(path: &Path) -> Result<Loaded<SpaceMap>, Error> {
    let v = read_json(path)?;
    if v.get("points").is_some() {
        let loaded = load_space(path)?;
        return Ok(Loaded {
            value: SpaceMap::identity(&loaded.value),
            inputs: loaded.inputs,
        });
    }
    let file: MapFile = serde_json::from_value(v)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let resolve = |p: &str| -> PathBuf {
        let pb = PathBuf::from(p);
        if pb.is_absolute() {
            pb
        } else {
            base.join(pb)
        }
    };
    let dom_path = resolve(&file.domain);
    let cod_path = resolve(&file.codomain);
    let dom = load_space(&dom_path)?;
    let cod = load_space(&cod_path)?;
    let map = file.to_map(&dom.value, &cod.value)?;
    let mut inputs = vec![hash_file(path)?];
    inputs.extend(dom.inputs);
    inputs.extend(cod.inputs);
    Ok(Loaded { value: map, inputs })
}

/// A complex file, or a space file whose order complex is taken.
fn load_complex(path: &Path) -> Result<Loaded<SimplicialComplex>, Error> {
    let v = read_json(path)?;
    if v.get("points").is_some() {
        let loaded = load_space(path)?;
        return Ok(Loaded {
            value: SimplicialComplex::order_complex(&loaded.value),
            inputs: loaded.inputs,
        });
    }
    let file: ComplexFile = serde_json::from_value(v)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        value: file.build()?,
        inputs: vec![hash_file(path)?],
    })
}

/// On-disk retraction square: a map plus subspace labels and retractions.
#[derive(Deserialize)]
struct SquareFile {
    map: String,
    x_prime: Vec<String>,
    y_prime: Vec<String>,
    r_x: BTreeMap<String, String>,
    r_y: BTreeMap<String, String>,
}

fn load_square(path: &Path) -> Result<Loaded<RetractionSquare>, Error> {
    let v = read_json(path)?;
    let file: SquareFile = serde_json::from_value(v)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let map_path = {
        let pb = PathBuf::from(&file.map);
        if pb.is_absolute() {
            pb
        } else {
            base.join(pb)
        }
    };
    let f = load_map_or_space(&map_path)?;
    let mask_of = |space: &FiniteSpace, labels: &[String]| -> Result<u64, Error> {
        let mut mask = 0u64;
        for l in labels {
            let i = space
                .index_of(l)
                .ok_or_else(|| Error::Parse(format!("unknown point {l:?}")))?;
            mask |= 1 << i;
        }
        Ok(mask)
    };
    let x_sub = f.value.domain().subspace(mask_of(f.value.domain(), &file.x_prime)?);
    let y_sub = f
        .value
        .codomain()
        .subspace(mask_of(f.value.codomain(), &file.y_prime)?);
    let retraction = |space: &FiniteSpace,
                      sub: &fintopo::space::Subspace,
                      assignment: &BTreeMap<String, String>|
     -> Result<SpaceMap, Error> {
        let mut map = Vec::with_capacity(space.len());
        for l in space.labels() {
            let target = assignment
                .get(l)
                .ok_or_else(|| Error::Parse(format!("retraction missing point {l:?}")))?;
            let y = sub
                .space
                .index_of(target)
                .ok_or_else(|| Error::Parse(format!("retraction target {target:?} not in subspace")))?;
            map.push(y);
        }
        SpaceMap::new(space.clone(), sub.space.clone(), map)
    };
    let r_x = retraction(f.value.domain(), &x_sub, &file.r_x)?;
    let r_y = retraction(f.value.codomain(), &y_sub, &file.r_y)?;
    let f_prime = f.value.restrict(&x_sub, Some(&y_sub))?;
    let square = RetractionSquare {
        f: f.value,
        f_prime,
        r_x,
        r_y,
        x_sub,
        y_sub,
    };
    let mut inputs = vec![hash_file(path)?];
    inputs.extend(f.inputs);
    Ok(Loaded {
        value: square,
        inputs,
    })
}

// --- outcome plumbing ---

struct Outcome {
    exit: i32,
    inputs: Vec<InputHash>,
    payload: Value,
    summary: String,
}

fn budgets(common: &Common) -> Budgets {
    let mut b = Budgets::default();
    if let Some(m) = common.max_open_sets {
        b.max_open_sets = m;
    }
    if let Some(m) = common.max_product_points {
        b.max_product_points = m;
    }
    b
}

fn map_render(m: &SpaceMap) -> Vec<String> {
    m.assignment()
        .iter()
        .enumerate()
        .map(|(i, &y)| format!("{}->{}", m.domain().label(i), m.codomain().label(y)))
        .collect()
}

fn run(cmd: Cmd, common: &Common) -> Result<Outcome, (Vec<InputHash>, Error)> {
    let budgets = budgets(common);
    let engine = HomotopyEngine::default();
    match cmd {
        Cmd::Cat { input } => {
            let f = load_map_or_space(&input).map_err(|e| (vec![], e))?;
            let inputs = f.inputs.clone();
            let (value, cover) =
                cat_map(&engine, &f.value, &budgets).map_err(|e| (inputs.clone(), e))?;
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({"invariant": "cat", "value": value, "cover": cover_view(&cover)}),
                summary: format!("cat = {value} ({} parts)", cover.parts.len()),
            })
        }
        Cmd::Tc { input, r } => {
            let f = load_map_or_space(&input).map_err(|e| (vec![], e))?;
            let inputs = f.inputs.clone();
            let (value, cover) =
                tc_map(&engine, &f.value, r, &budgets).map_err(|e| (inputs.clone(), e))?;
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({"invariant": format!("tc_{r}"), "value": value, "cover": cover_view(&cover)}),
                summary: format!("TC_{r} = {value} ({} parts)", cover.parts.len()),
            })
        }
        Cmd::Planner { input, r, extract } => {
            let f = load_map_or_space(&input).map_err(|e| (vec![], e))?;
            let inputs = f.inputs.clone();
            let (value, cover) =
                tc_map(&engine, &f.value, r, &budgets).map_err(|e| (inputs.clone(), e))?;
            let product =
                ProductSpace::power(f.value.domain(), r).map_err(|e| (inputs.clone(), e))?;
            let mut tables = Vec::new();
            if extract {
                for (part, witness) in cover.parts.iter().zip(&cover.witnesses) {
                    let PartWitness::Planner(fences) = witness else {
                        continue;
                    };
                    let table = extract_planner(&product, part.members, &f.value, fences.as_slice())
                        .map_err(|e| (inputs.clone(), e))?;
                    table
                        .validate(&product, &f.value)
                        .map_err(|e| (inputs.clone(), e))?;
                    tables.push(planner_view(&table, f.value.codomain()));
                }
            }
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({
                    "invariant": format!("tc_{r}"),
                    "value": value,
                    "cover": cover_view(&cover),
                    "planners": tables,
                }),
                summary: format!(
                    "TC_{r} = {value}; {} planner table(s)",
                    if extract { cover.parts.len() } else { 0 }
                ),
            })
        }
        Cmd::RestrictCover { square, invariant, r } => {
            let sq = load_square(&square).map_err(|e| (vec![], e))?;
            let inputs = sq.inputs.clone();
            let (kind, inv_name) = match invariant {
                InvariantArg::Cat => (RestrictKind::Cat, "cat".to_string()),
                InvariantArg::Tc => (RestrictKind::Tc { r }, format!("tc_{r}")),
            };
            let (value, cover) = match kind {
                RestrictKind::Cat => cat_map(&engine, &sq.value.f, &budgets),
                RestrictKind::Tc { r } => tc_map(&engine, &sq.value.f, r, &budgets),
            }
            .map_err(|e| (inputs.clone(), e))?;
            let restricted =
                restrict_cover(&sq.value, &cover, kind).map_err(|e| (inputs.clone(), e))?;
            match kind {
                RestrictKind::Cat => restricted.validate_cat(&sq.value.f_prime),
                RestrictKind::Tc { r } => restricted.validate_tc(&sq.value.f_prime, r),
            }
            .map_err(|e| (inputs.clone(), e))?;
            let value_prime = restricted.parts.len() - 1;
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({
                    "invariant": inv_name,
                    "value": value,
                    "restricted_upper_bound": value_prime,
                    "cover": cover_view(&cover),
                    "restricted_cover": cover_view(&restricted),
                }),
                summary: format!(
                    "{inv_name}(f) = {value}; restricted cover gives {inv_name}(f') <= {value_prime}"
                ),
            })
        }
        Cmd::Retractions { space, subspace } => {
            let s = load_space(&space).map_err(|e| (vec![], e))?;
            let inputs = s.inputs.clone();
            let mut mask = 0u64;
            for l in &subspace {
                let i = s
                    .value
                    .index_of(l)
                    .ok_or_else(|| (inputs.clone(), Error::Parse(format!("unknown point {l:?}"))))?;
                mask |= 1 << i;
            }
            let sub = s.value.subspace(mask);
            let retractions = enumerate_retractions(&sub);
            let rendered: Vec<Vec<String>> = retractions.iter().map(map_render).collect();
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({"subspace": subspace, "retractions": rendered}),
                summary: format!("{} retraction(s)", retractions.len()),
            })
        }
        Cmd::SquareCheck { square } => {
            let sq = load_square(&square).map_err(|e| (vec![], e))?;
            let inputs = sq.inputs.clone();
            match sq.value.verify() {
                Ok(()) => Ok(Outcome {
                    exit: 0,
                    inputs,
                    payload: json!({"valid": true}),
                    summary: "square is valid".into(),
                }),
                Err(e) => Ok(Outcome {
                    exit: 2,
                    inputs,
                    payload: json!({"valid": false, "failure": e.to_string()}),
                    summary: format!("square is invalid: {e}"),
                }),
            }
        }
        Cmd::Audit {
            invariant,
            r,
            max_points,
            connected_only,
            identity_only,
        } => {
            let inv = match invariant {
                InvariantArg::Cat => Invariant::Cat,
                InvariantArg::Tc => Invariant::Tc { r },
            };
            let corpus = CorpusSpec {
                max_points,
                connected_only: connected_only || matches!(inv, Invariant::Tc { .. }),
                identity_only,
            };
            let key = format!(
                "audit-{inv}-{max_points}-{}-{}",
                corpus.connected_only, corpus.identity_only
            );
            let payload = match cache_get(&key) {
                Some(v) => v,
                None => {
                    let report = audit_monotonicity(&corpus, inv, &budgets)
                        .map_err(|e| (vec![], e))?;
                    let v = serde_json::to_value(&report).expect("report serializes");
                    cache_put(&key, &v);
                    v
                }
            };
            let violations = payload["violations"].as_array().map_or(0, Vec::len)
                + payload["restrict_failures"].as_array().map_or(0, Vec::len);
            let budget_exceeded = payload["budget_exceeded"].as_u64().unwrap_or(0);
            let squares = payload["squares_checked"].as_u64().unwrap_or(0);
            let exit = if violations > 0 {
                2
            } else if budget_exceeded > 0 {
                3
            } else {
                0
            };
            Ok(Outcome {
                exit,
                inputs: vec![],
                summary: format!(
                    "audit {inv} max-points={max_points}: {squares} squares, {violations} violation(s), {budget_exceeded} budget-exceeded"
                ),
                payload,
            })
        }
        Cmd::Homology { .. } | Cmd::Cohomology { .. } | Cmd::Cd { .. } | Cmd::Hd { .. } => {
            unreachable!("chain-family commands are dispatched by run_chain_cmd")
        }
        Cmd::CupLength { input, field } => {
            let k = load_complex(&input).map_err(|e| (vec![], e))?;
            let inputs = k.inputs.clone();
            let value = cup_length(&k.value, field).map_err(|e| (inputs.clone(), e))?;
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({"field": field, "cup_length": value}),
                summary: format!("cup-length = {value}"),
            })
        }
        Cmd::Zdcl { input, field, r } => {
            let k = load_complex(&input).map_err(|e| (vec![], e))?;
            let inputs = k.inputs.clone();
            let value =
                zero_divisor_cup_length(&k.value, field, r).map_err(|e| (inputs.clone(), e))?;
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({"field": field, "r": r, "zero_divisor_cup_length": value}),
                summary: format!("zdcl(r={r}) = {value}"),
            })
        }
        Cmd::CdHom { matrix } => {
            let v = read_json(&matrix).map_err(|e| (vec![], e))?;
            let rows: Vec<Vec<i64>> = serde_json::from_value(v)
                .map_err(|e| (vec![], Error::Parse(format!("{}: {e}", matrix.display()))))?;
            let inputs = vec![hash_file(&matrix).map_err(|e| (vec![], e))?];
            let a = IntMatrix::new(rows).map_err(|e| (inputs.clone(), e))?;
            let cd = grouphom::cd_trivial(&a);
            let hd = grouphom::hd_trivial(&a);
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({
                    "rows": a.rows, "cols": a.cols,
                    "cd_trivial": cd, "hd_trivial": hd,
                    "note": "trivial-coefficient value; a lower bound for the module-supremum definition",
                }),
                summary: format!("cd = hd = {cd} (rank)"),
            })
        }
        Cmd::AuditLemma31 { random, seed } => {
            let key = format!("lemma31-{random}-{seed}");
            let payload = match cache_get(&key) {
                Some(v) => v,
                None => {
                    let report = grouphom::audit_lemma31(random, seed);
                    let v = serde_json::to_value(&report).expect("report serializes");
                    cache_put(&key, &v);
                    v
                }
            };
            let violations = payload["violations"].as_array().map_or(0, Vec::len);
            let exit = if violations > 0 { 2 } else { 0 };
            let checked = payload["exhaustive_instances"].as_u64().unwrap_or(0)
                + payload["random_instances"].as_u64().unwrap_or(0);
            Ok(Outcome {
                exit,
                inputs: vec![],
                summary: format!("lemma 3.1 audit: {checked} instances, {violations} violation(s)"),
                payload,
            })
        }
        Cmd::AuditTheorem32 { random, seed } => {
            let report =
                grouphom::audit_theorem32(random, seed).map_err(|e| (vec![], e))?;
            let strict = report.strict_less.len();
            let exit = if strict > 0 { 2 } else { 0 };
            Ok(Outcome {
                exit,
                inputs: vec![],
                summary: format!(
                    "theorem 3.2 audit: {} squares, {} equal, {strict} strict-less finding(s)",
                    report.squares_checked, report.equal
                ),
                payload: serde_json::to_value(&report).expect("report serializes"),
            })
        }
        Cmd::GenCorpus { max_points } => {
            let spaces = all_posets_up_to_iso(max_points).map_err(|e| (vec![], e))?;
            let mut counts = vec![0usize; max_points + 1];
            for s in &spaces {
                counts[s.len()] += 1;
            }
            let files: Vec<SpaceFile> = spaces.iter().map(SpaceFile::from_space).collect();
            Ok(Outcome {
                exit: 0,
                inputs: vec![],
                payload: json!({
                    "max_points": max_points,
                    "counts_by_size": counts[1..].to_vec(),
                    "total": spaces.len(),
                    "spaces": files,
                }),
                summary: format!("{} poset(s) up to isomorphism", spaces.len()),
            })
        }
        Cmd::Homotopic { f, g } => {
            let fm = load_map_or_space(&f).map_err(|e| (vec![], e))?;
            let gm = load_map_or_space(&g).map_err(|e| (vec![], e))?;
            let mut inputs = fm.inputs.clone();
            inputs.extend(gm.inputs.clone());
            let witness = engine
                .are_homotopic(&fm.value, &gm.value)
                .map_err(|e| (inputs.clone(), e))?;
            let homotopic = witness.is_some();
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({
                    "homotopic": homotopic,
                    "fence": witness.as_ref().map(fence_view),
                }),
                summary: format!("homotopic: {homotopic}"),
            })
        }
        Cmd::Nullhomotopic { map } => {
            let fm = load_map_or_space(&map).map_err(|e| (vec![], e))?;
            let inputs = fm.inputs.clone();
            let witness = engine
                .is_nullhomotopic(&fm.value)
                .map_err(|e| (inputs.clone(), e))?;
            let null = witness.is_some();
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({
                    "nullhomotopic": null,
                    "fence": witness.as_ref().map(fence_view),
                }),
                summary: format!("null-homotopic: {null}"),
            })
        }
        Cmd::Core { space } => {
            let s = load_space(&space).map_err(|e| (vec![], e))?;
            let inputs = s.inputs.clone();
            let result = core(&s.value);
            let core_labels: Vec<String> = result.core.space.labels().to_vec();
            Ok(Outcome {
                exit: 0,
                inputs,
                payload: json!({
                    "core_points": core_labels,
                    "retraction": map_render(&result.retraction),
                    "contractible": result.core.space.len() == 1,
                }),
                summary: format!("core has {} point(s)", core_labels.len()),
            })
        }
    }
}

/// Homology-family commands need the command name; handled outside `run`.
fn run_chain_cmd(cmd: &Cmd) -> Option<Result<Outcome, (Vec<InputHash>, Error)>> {
    let (input, name): (&PathBuf, &str) = match cmd {
        Cmd::Homology { input, .. } => (input, "homology"),
        Cmd::Cohomology { input, .. } => (input, "cohomology"),
        Cmd::Cd { input, .. } => (input, "cd"),
        Cmd::Hd { input, .. } => (input, "hd"),
        _ => return None,
    };
    let k = match load_complex(input) {
        Ok(k) => k,
        Err(e) => return Some(Err((vec![], e))),
    };
    let inputs = k.inputs.clone();
    let out = match cmd {
        Cmd::Homology { ring, .. } | Cmd::Cohomology { ring, .. } => {
            let summarize = if name == "homology" {
                chains::homology
            } else {
                chains::cohomology
            };
            match summarize(&k.value, *ring) {
                Ok(h) => {
                    let betti = h.betti.clone();
                    Ok(Outcome {
                        exit: 0,
                        inputs,
                        payload: serde_json::to_value(&h).expect("summary serializes"),
                        summary: format!("{name} over {ring}: betti {betti:?}"),
                    })
                }
                Err(e) => Err((inputs, e)),
            }
        }
        Cmd::Cd { ring, .. } | Cmd::Hd { ring, .. } => {
            let probes = if ring.is_empty() {
                chains::default_probes(&k.value)
            } else {
                ring.clone()
            };
            let result = if name == "cd" {
                chains::cd_space(&k.value, &probes)
            } else {
                chains::hd_space(&k.value, &probes)
            };
            match result {
                Ok(rep) => {
                    let value = rep.value;
                    let upper = rep.upper_bound;
                    Ok(Outcome {
                        exit: 0,
                        inputs,
                        payload: serde_json::to_value(&rep).expect("report serializes"),
                        summary: format!("{name} >= {value} (dim upper bound {upper})"),
                    })
                }
                Err(e) => Err((inputs, e)),
            }
        }
        _ => unreachable!(),
    };
    Some(out)
}

// --- report cache (env var FINTOPO_CACHE_DIR only) ---

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("FINTOPO_CACHE_DIR").map(PathBuf::from)
}

fn cache_get(key: &str) -> Option<Value> {
    let path = cache_dir()?.join(format!("{key}.json"));
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn cache_put(key: &str, value: &Value) {
    let Some(dir) = cache_dir() else { return };
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    let path = dir.join(format!("{key}.json"));
    let bytes = serde_json::to_vec_pretty(value).expect("value serializes");
    let _ = write_atomic(&path, &bytes);
}

// --- top level ---

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Cat { .. } => "cat",
        Cmd::Tc { .. } => "tc",
        Cmd::Planner { .. } => "planner",
        Cmd::RestrictCover { .. } => "restrict-cover",
        Cmd::Retractions { .. } => "retractions",
        Cmd::SquareCheck { .. } => "square-check",
        Cmd::Audit { .. } => "audit",
        Cmd::Homology { .. } => "homology",
        Cmd::Cohomology { .. } => "cohomology",
        Cmd::Cd { .. } => "cd",
        Cmd::Hd { .. } => "hd",
        Cmd::CupLength { .. } => "cup-length",
        Cmd::Zdcl { .. } => "zdcl",
        Cmd::CdHom { .. } => "cd-hom",
        Cmd::AuditLemma31 { .. } => "audit-lemma31",
        Cmd::AuditTheorem32 { .. } => "audit-theorem32",
        Cmd::GenCorpus { .. } => "gen-corpus",
        Cmd::Homotopic { .. } => "homotopic",
        Cmd::Nullhomotopic { .. } => "nullhomotopic",
        Cmd::Core { .. } => "core",
    }
}

fn emit(common: &Common, name: &str, outcome: &Outcome) -> i32 {
    println!("{}", outcome.summary);
    let report = Report {
        command: name.to_string(),
        inputs: outcome.inputs.clone(),
        payload: outcome.payload.clone(),
    };
    if let Some(path) = &common.output {
        let bytes = match common.format {
            Format::Json => {
                let mut b = serde_json::to_vec_pretty(&report).expect("report serializes");
                b.push(b'\n');
                b
            }
            Format::Text => format!("{name}: {}\n", outcome.summary).into_bytes(),
        };
        if let Err(e) = write_atomic(path, &bytes) {
            eprintln!("error: cannot write report: {e}");
            return 1;
        }
    }
    outcome.exit
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version exit 0; any usage problem is an input error (1)
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(n) = cli.common.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let name = command_name(&cli.cmd).to_string();
    let common = cli.common.clone();
    let cmd = cli.cmd.clone();
    let limit = common.time_limit_secs.map(Duration::from_secs);
    let (tx, rx) = mpsc::channel();
    let common_worker = common.clone();
    let worker = std::thread::spawn(move || {
        let result = run_chain_cmd(&cmd).unwrap_or_else(|| run(cmd, &common_worker));
        let _ = tx.send(result);
    });
    let result = match limit {
        None => rx.recv().ok(),
        Some(d) => match rx.recv_timeout(d) {
            Ok(r) => Some(r),
            Err(mpsc::RecvTimeoutError::Timeout) => {
                let outcome = Outcome {
                    exit: 3,
                    inputs: vec![],
                    payload: json!({"status": "time limit exceeded", "limit_secs": d.as_secs()}),
                    summary: format!("time limit of {}s exceeded; partial report", d.as_secs()),
                };
                let code = emit(&common, &name, &outcome);
                std::process::exit(code);
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => None,
        },
    };
    if limit.is_none() {
        let _ = worker.join();
    }
    let code = match result {
        Some(Ok(outcome)) => emit(&common, &name, &outcome),
        Some(Err((inputs, e))) => {
            eprintln!("error: {e}");
            let (exit, status) = match &e {
                Error::SearchBudgetExceeded { lower, upper, context } => (
                    3,
                    json!({
                        "status": "budget exceeded",
                        "context": context,
                        "lower_bound": lower,
                        "upper_bound": upper,
                    }),
                ),
                other => (1, json!({"status": "error", "message": other.to_string()})),
            };
            let outcome = Outcome {
                exit,
                inputs,
                payload: status,
                summary: format!("failed: {e}"),
            };
            emit(&common, &name, &outcome)
        }
        None => {
            eprintln!("error: worker thread terminated unexpectedly");
            1
        }
    };
    std::process::exit(code);
}
