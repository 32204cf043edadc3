//! `ade`: JSON front end for the lattice, root-system, algebra and Torelli
//! computations of `ade-core`.
//!
//! Every successful run prints one JSON document on stdout. Domain errors
//! print `{"error": …}` on stderr and exit with status 1; usage errors exit
//! with status 2.

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use ade_core::chevalley::{
    build_module_with, check_duality, quadratic_form_pairs, ChevalleyAlgebra, DualityPair, ModuleKind,
};
use ade_core::picard::{is_root_lattice, orthogonal_complement, RootLatticeClass};
use ade_core::roots::{
    classify, enumerate_exceptional, enumerate_exceptional_systems, enumerate_roots, enumerate_rulings,
    enumerate_spinor_weights, reflect, weyl_group_order, RootDatum, SpinorSign,
};
use ade_core::torelli::{configuration_check, OrbitVerdict, DEFAULT_ORBIT_CAP};
use ade_core::{
    DivisorClass, Error, Family, HomToTorus, PicardLattice, PointConfig, SurfaceKind, TorelliSystem, TorusPoint,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ade", version, about = "Exact ADE surface lattice computations")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    /// Seed for every randomized sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    En,
    Dn,
    An,
}

#[derive(Args, Debug)]
struct KindArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
}

impl KindArgs {
    fn kind(&self) -> ade_core::Result<SurfaceKind> {
        let family = match self.family {
            FamilyArg::En => Family::En,
            FamilyArg::Dn => Family::Dn,
            FamilyArg::An => Family::An,
        };
        SurfaceKind::new(family, self.n)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairArg {
    LinesRoots,
    RulingsLines,
    RulingsRoots,
    SpinorTwist,
    Clifford,
    QuadraticForm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gram matrix, basis labels and canonical class.
    Lattice(KindArgs),
    /// Roots: classes with x² = −2 and x·K = 0.
    Roots(KindArgs),
    /// Exceptional classes (standard weights on Y_n and Z_n).
    Lines(KindArgs),
    /// Rulings R² = 0, R·K = −2 (E_n only).
    Rulings(KindArgs),
    /// Spinor weights on Y_n.
    Spinors {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
    },
    /// Exceptional systems, refused above the Weyl group order cap.
    Systems {
        #[command(flatten)]
        kind: KindArgs,
        /// Defaults to ADE_ORBIT_CAP, or 10⁶.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Dynkin type of the roots, or of the (−2)-classes among `--classes`.
    Classify {
        #[command(flatten)]
        kind: KindArgs,
        /// JSON array of classes.
        #[arg(long)]
        classes: Option<String>,
    },
    /// Orthogonal complement of a set of classes and its root-lattice type.
    Complement {
        #[command(flatten)]
        kind: KindArgs,
        /// JSON array of classes.
        #[arg(long)]
        classes: String,
    },
    /// The Chevalley algebra: dimension, basis and identity checks.
    Algebra {
        #[command(flatten)]
        kind: KindArgs,
        /// Print the structure constants as JSON lines instead.
        #[arg(long)]
        export: bool,
        /// Sampled Jacobi triples above rank 4.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// A weight module: lines, rulings, standard, spinor+, spinor-, wedgeK.
    Module {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        which: String,
        /// Sampled module-relation checks.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Weight-set duality statements.
    Duality {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, value_enum)]
        pair: PairArg,
    },
    /// Points to homomorphism (default) or back with `--backward`.
    Phi {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        backward: bool,
        /// Flattened coordinates x_1,y_1,x_2,y_2,… of the points.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        /// Flattened coordinates of the simple-root values.
        #[arg(long, allow_hyphen_values = true)]
        hom: Option<String>,
        /// Torsion branch `p/q,r/s` for the backward map.
        #[arg(long, default_value = "0/1,0/1")]
        choice: String,
        /// Draw the input at random from the seed.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 12)]
        max_denominator: i64,
    },
    /// Sorted values of a homomorphism on all roots.
    Invariant {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, allow_hyphen_values = true)]
        hom: String,
    },
    /// Whether two homomorphisms lie in one Weyl orbit.
    OrbitEqual {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, allow_hyphen_values = true)]
        hom1: String,
        #[arg(long, allow_hyphen_values = true)]
        hom2: String,
        /// Defaults to ADE_ORBIT_CAP, or 10⁶.
        #[arg(long)]
        cap: Option<u64>,
        /// Error out instead of comparing invariants above the cap.
        #[arg(long)]
        no_fallback: bool,
    },
    /// Whether a tuple of classes blows down to ℙ² or 𝔽_1.
    ConfigCheck {
        #[command(flatten)]
        kind: KindArgs,
        /// JSON array of n classes.
        #[arg(long)]
        system: String,
    },
}

fn orbit_cap(flag: Option<u64>) -> ade_core::Result<u64> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("ADE_ORBIT_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("ADE_ORBIT_CAP must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_ORBIT_CAP),
    }
}

fn parse_classes(lat: &PicardLattice, text: &str) -> ade_core::Result<Vec<DivisorClass>> {
    let classes: Vec<DivisorClass> =
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("expected a JSON array of classes: {e}")))?;
    for c in &classes {
        lat.check_len(c)?;
    }
    Ok(classes)
}

/// Splits `x_1,y_1,x_2,y_2,…` (commas, semicolons or spaces) into points.
fn parse_points(text: &str, expected: usize) -> ade_core::Result<Vec<TorusPoint>> {
    let coords: Vec<&str> = text
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if coords.len() != 2 * expected {
        return Err(Error::Malformed(format!(
            "expected {} coordinates ({expected} points), got {}",
            2 * expected,
            coords.len()
        )));
    }
    coords.chunks(2).map(|c| format!("{},{}", c[0], c[1]).parse()).collect()
}

fn parse_module_kind(s: &str) -> ade_core::Result<ModuleKind> {
    Ok(match s {
        "lines" => ModuleKind::Lines,
        "rulings" => ModuleKind::Rulings,
        "standard" => ModuleKind::Standard,
        "spinor+" | "spinor-plus" => ModuleKind::SpinorPlus,
        "spinor-" | "spinor-minus" => ModuleKind::SpinorMinus,
        other => match other.strip_prefix("wedge").and_then(|k| k.parse().ok()) {
            Some(k) => ModuleKind::Wedge(k),
            None => {
                return Err(Error::Malformed(format!(
                    "unknown module `{other}`; expected lines, rulings, standard, spinor+, spinor- or wedgeK"
                )))
            }
        },
    })
}

fn enumeration(kind: SurfaceKind, what: &str, items: Value) -> Value {
    let count = items.as_array().map_or(0, Vec::len);
    json!({
        "kind": kind,
        "what": what,
        "count": count,
        "items": items,
    })
}

/// The root system generated by the (−2)-classes among `given`: their orbit
/// under the group generated by their own reflections.
fn generated_roots(lat: &PicardLattice, given: &[DivisorClass]) -> ade_core::Result<Vec<DivisorClass>> {
    const LIMIT: usize = 100_000;
    let generators: Vec<DivisorClass> = given.iter().filter(|c| lat.square(c) == -2).cloned().collect();
    let mut seen: std::collections::BTreeSet<DivisorClass> = generators.iter().cloned().collect();
    let mut queue: Vec<DivisorClass> = generators.clone();
    while let Some(x) = queue.pop() {
        for a in &generators {
            let y = reflect(lat, a, &x)?;
            if seen.insert(y.clone()) {
                if seen.len() > LIMIT {
                    return Err(Error::CapExceeded {
                        what: "root system generated by the classes".into(),
                        cap: LIMIT as u64,
                    });
                }
                queue.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn hom_json(system: &TorelliSystem, hom: &HomToTorus) -> ade_core::Result<(bool, Value)> {
    let (ok, vanishing) = system.general_position(hom)?;
    Ok((ok, json!(vanishing)))
}

fn run(cli: &Cli) -> ade_core::Result<Vec<Value>> {
    let one = |v: Value| Ok(vec![v]);
    match &cli.command {
        Command::Lattice(k) => one(PicardLattice::new(k.kind()?).to_json()),
        Command::Roots(k) => {
            let kind = k.kind()?;
            one(enumeration(kind, "roots", json!(enumerate_roots(kind))))
        }
        Command::Lines(k) => {
            let kind = k.kind()?;
            one(enumeration(kind, "lines", json!(enumerate_exceptional(kind))))
        }
        Command::Rulings(k) => {
            let kind = k.kind()?;
            one(enumeration(kind, "rulings", json!(enumerate_rulings(kind)?)))
        }
        Command::Spinors { kind, sign } => {
            let kind = kind.kind()?;
            let sign = match sign {
                SignArg::Plus => SpinorSign::Plus,
                SignArg::Minus => SpinorSign::Minus,
            };
            let what = format!("spinor{}", sign.symbol());
            one(enumeration(kind, &what, json!(enumerate_spinor_weights(kind, sign)?)))
        }
        Command::Systems { kind, cap } => {
            let kind = kind.kind()?;
            let systems = enumerate_exceptional_systems(kind, orbit_cap(*cap)?)?;
            one(enumeration(kind, "systems", json!(systems)))
        }
        Command::Classify { kind, classes } => {
            let kind = kind.kind()?;
            let lat = PicardLattice::new(kind);
            let (vectors, source) = match classes {
                Some(text) => {
                    let given = parse_classes(&lat, text)?;
                    (generated_roots(&lat, &given)?, "classes")
                }
                None => (enumerate_roots(kind), "roots"),
            };
            let t = classify(&vectors, &lat)?;
            let mut out = json!({
                "kind": kind,
                "source": source,
                "vectors": vectors.len(),
                "label": t.to_string(),
                "rank": t.rank(),
                "weyl_order": weyl_group_order(&t).to_string(),
            });
            if classes.is_none() {
                let datum = RootDatum::new(kind)?;
                out["expected"] = json!(kind.expected_label());
                out["simple_roots"] = json!(datum.simple());
                out["cartan"] = json!(datum.cartan());
            }
            one(out)
        }
        Command::Complement { kind, classes } => {
            let kind = kind.kind()?;
            let lat = PicardLattice::new(kind);
            let given = parse_classes(&lat, classes)?;
            let sub = orthogonal_complement(&lat, &given)?;
            let class = is_root_lattice(&sub)?;
            let (is_root, label) = match &class {
                RootLatticeClass::Root(t) => (true, json!(t.to_string())),
                RootLatticeClass::NotRoot { .. } => (false, Value::Null),
            };
            one(json!({
                "kind": kind,
                "classes": given,
                "rank": sub.rank(),
                "basis": sub.basis(),
                "gram": sub.gram(),
                "negative_definite": sub.is_negative_definite(),
                "minus_two_vectors": sub.minus_two_vectors().map(|v| v.len()),
                "root_lattice": is_root,
                "label": label,
                "description": class.to_string(),
            }))
        }
        Command::Algebra { kind, export, samples } => {
            let algebra = ChevalleyAlgebra::new(kind.kind()?)?;
            if *export {
                return Ok(algebra
                    .export_json_lines()
                    .into_iter()
                    .map(|line| serde_json::from_str(&line).expect("exported lines are JSON"))
                    .collect());
            }
            let (mode, checked, jacobi) = if algebra.rank() <= 4 {
                let d = algebra.dim();
                (
                    "exhaustive",
                    d * (d + 1) * (d + 2) / 6,
                    algebra.jacobi_violations_exhaustive(16),
                )
            } else {
                (
                    "sampled",
                    *samples,
                    algebra.jacobi_violations_sampled(*samples, cli.seed, 16),
                )
            };
            let relations = algebra.relation_violations();
            one(json!({
                "kind": algebra.kind(),
                "label": algebra.datum().label(),
                "dim": algebra.dim(),
                "rank": algebra.rank(),
                "roots": algebra.root_count(),
                "basis": algebra.basis_labels(),
                "jacobi": {"mode": mode, "checked": checked, "violations": jacobi.len()},
                "relation_violations": relations.len(),
            }))
        }
        Command::Module { kind, which, samples } => {
            let kind = kind.kind()?;
            let which = parse_module_kind(which)?;
            let algebra = Arc::new(ChevalleyAlgebra::new(kind)?);
            let module = build_module_with(algebra, which)?;
            let violations = module.relation_violations_sampled(*samples, cli.seed, 16);
            one(json!({
                "kind": kind,
                "which": which.to_string(),
                "construction": module.construction(),
                "dim": module.dim(),
                "highest_weight": module.highest_weight(),
                "twist": module.twist(),
                "highest_weight_failures": module.highest_weight_failures().len(),
                "weights_consistent": module.weights_are_consistent(),
                "relation_samples": samples,
                "relation_violations": violations.len(),
                "weights": module.weights(),
            }))
        }
        Command::Duality { kind, pair } => {
            let kind = kind.kind()?;
            let pair = match pair {
                PairArg::LinesRoots => DualityPair::LinesToRoots,
                PairArg::RulingsLines => DualityPair::RulingsToLines,
                PairArg::RulingsRoots => DualityPair::RulingsToRoots,
                PairArg::SpinorTwist => DualityPair::SpinorTwist,
                PairArg::Clifford => DualityPair::Clifford,
                PairArg::QuadraticForm => {
                    let pairs = quadratic_form_pairs(kind)?;
                    let covered: std::collections::HashSet<&DivisorClass> =
                        pairs.iter().flat_map(|(a, b)| [a, b]).collect();
                    let perfect = pairs.len() == kind.n() && covered.len() == enumerate_exceptional(kind).len();
                    return one(json!({
                        "kind": kind,
                        "pair": "quadratic-form",
                        "pass": perfect,
                        "count": pairs.len(),
                        "items": pairs,
                    }));
                }
            };
            one(serde_json::to_value(check_duality(kind, pair)?).expect("reports serialize"))
        }
        Command::Phi {
            kind,
            backward,
            points,
            hom,
            choice,
            random,
            max_denominator,
        } => {
            let kind = kind.kind()?;
            let system = TorelliSystem::new(kind)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            if *backward {
                let hom = match (hom, random) {
                    (Some(text), false) => HomToTorus::new(kind, parse_points(text, kind.root_rank())?)?,
                    (None, true) => HomToTorus::random(kind, &mut rng, *max_denominator),
                    _ => return Err(Error::Malformed("give exactly one of --hom and --random".into())),
                };
                let choice: TorusPoint = choice.parse()?;
                let cfg = system.backward(&hom, choice)?;
                let (ok, vanishing) = hom_json(&system, &hom)?;
                one(json!({
                    "kind": kind,
                    "direction": "backward",
                    "points": cfg.points(),
                    "hom": hom.values(),
                    "torsion_choice": choice,
                    "general_position": ok,
                    "vanishing_roots": vanishing,
                }))
            } else {
                let cfg = match (points, random) {
                    (Some(text), false) => PointConfig::new(kind, parse_points(text, kind.n())?)?,
                    (None, true) => PointConfig::random(kind, &mut rng, *max_denominator),
                    _ => return Err(Error::Malformed("give exactly one of --points and --random".into())),
                };
                let hom = system.forward(&cfg)?;
                let (ok, vanishing) = hom_json(&system, &hom)?;
                one(json!({
                    "kind": kind,
                    "direction": "forward",
                    "points": cfg.points(),
                    "hom": hom.values(),
                    "torsion_choice": Value::Null,
                    "general_position": ok,
                    "vanishing_roots": vanishing,
                }))
            }
        }
        Command::Invariant { kind, hom } => {
            let kind = kind.kind()?;
            let system = TorelliSystem::new(kind)?;
            let hom = HomToTorus::new(kind, parse_points(hom, kind.root_rank())?)?;
            let invariant = system.invariant(&hom)?;
            one(json!({
                "kind": kind,
                "hom": hom.values(),
                "count": invariant.len(),
                "invariant": invariant,
            }))
        }
        Command::OrbitEqual {
            kind,
            hom1,
            hom2,
            cap,
            no_fallback,
        } => {
            let kind = kind.kind()?;
            let system = TorelliSystem::new(kind)?;
            let h1 = HomToTorus::new(kind, parse_points(hom1, kind.root_rank())?)?;
            let h2 = HomToTorus::new(kind, parse_points(hom2, kind.root_rank())?)?;
            let cap = orbit_cap(*cap)?;
            let verdict: OrbitVerdict = system.orbit_equal(&h1, &h2, cap, !no_fallback)?;
            one(json!({
                "kind": kind,
                "verdict": verdict.as_str(),
                "equal": verdict.is_equal(),
                "proven": verdict.is_proven(),
                "weyl_order": system.weyl_order().to_string(),
                "cap": cap,
            }))
        }
        Command::ConfigCheck { kind, system } => {
            let kind = kind.kind()?;
            let lat = PicardLattice::new(kind);
            let members = parse_classes(&lat, system)?;
            let ok = configuration_check(kind, &members)?;
            one(json!({
                "kind": kind,
                "system": members,
                "configuration": ok,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(values) => {
            let mut out = std::io::stdout().lock();
            for v in values {
                let text = if cli.pretty {
                    serde_json::to_string_pretty(&v)
                } else {
                    serde_json::to_string(&v)
                };
                // A closed pipe (`ade roots … | head`) is not an error.
                if writeln!(out, "{}", text.expect("JSON values serialize")).is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
