//! `lencat` command-line front end. All input and output is JSON; `D` spells
//! `∂` in Weyl syntax. Usage errors exit 2, domain errors exit 1 with a JSON
//! descriptor on stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lencat::defm::{self, HullPresentation};
use lencat::extension::{self, FamilyRef};
use lencat::fdmod::{self, FdModule};
use lencat::fixtures::{self, Family};
use lencat::json;
use lencat::pointed::{build_k_gamma, PointedAlgebra};
use lencat::quiver::{enumerate_extension_types, GabrielQuiver, OrderedQuiver, Quiver};
use lencat::uniserial::{self, CeKind};
use lencat::weyl::{self, WeylElement};
use lencat::{Error, Field, Fp, Q};

#[derive(Parser)]
#[command(name = "lencat", version, about = "Length categories of orthogonal simple modules")]
struct Cli {
    /// Output layout
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Scalar field when no input file names one: Q, F2, F3, F5, F7
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Ordered quivers, condition (*), components, Q5
    #[command(subcommand)]
    Quiver(QuiverCmd),
    /// Pointed algebras k[Γ]
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Module computations over a family file
    #[command(subcommand, name = "mod")]
    Module(ModCmd),
    /// Iterated extensions and cofiltrations
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Liftings, scheme equations and surjection reports
    #[command(subcommand, name = "def")]
    Deform(DefCmd),
    /// Indecomposables of a family under (*), or counterexamples without it
    Classify(ClassifyArgs),
    /// Weyl algebra and graded windows
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Built-in fixture families
    #[command(subcommand)]
    Fixture(FixtureCmd),
    /// Regenerate (or with --check, compare) every golden file a manifest lists
    Manifest {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        check: bool,
        /// Only the entries reproducing this acceptance criterion
        #[arg(long)]
        criterion: Option<u64>,
    },
}

#[derive(Subcommand)]
enum FixtureCmd {
    /// Names accepted by `{"fixture": name}` in family files
    List,
    /// Dump a built-in family as an explicit family file
    Show {
        #[arg(long)]
        name: String,
    },
}

#[derive(Subcommand)]
enum QuiverCmd {
    /// Extension types of length n up to relabelling
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    CheckStar(QuiverFile),
    Components(QuiverFile),
    /// Whether the quiver contains Q5; the displayed Q5 when no file is given
    Q5 {
        #[arg(long)]
        quiver: Option<PathBuf>,
    },
}

#[derive(Args)]
struct QuiverFile {
    /// {"vertices": [...], "arrows": [[a, b], ...]} or {"vertices", "mult"}
    #[arg(long)]
    quiver: PathBuf,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Basis and structure constants of k[Γ]
    Kgamma {
        #[arg(long, value_delimiter = ',')]
        order_vector: Vec<usize>,
    },
    /// Pointed algebra axioms for k[Γ] or a dumped algebra
    Axioms {
        #[arg(long, value_delimiter = ',', conflicts_with = "algebra")]
        order_vector: Option<Vec<usize>>,
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArg {
    /// Family JSON: {"field", "algebra", "members"} or {"fixture": name}
    #[arg(long)]
    family: PathBuf,
}

#[derive(Subcommand)]
enum ModCmd {
    /// Ext¹ between two members
    Ext1 {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Gabriel quiver of the family
    Gabriel {
        #[command(flatten)]
        family: FamilyArg,
    },
    /// Socle, uniseriality and locality certificate of a module
    Uniserial(ModuleInput),
    /// Locality of End(M)
    Local(ModuleInput),
}

#[derive(Args)]
struct ModuleInput {
    #[command(flatten)]
    family: FamilyArg,
    /// Module JSON {"dim", "action"}; a member name with --member instead
    #[arg(long, required_unless_present = "member")]
    module: Option<PathBuf>,
    #[arg(long, conflicts_with = "module")]
    member: Option<String>,
}

#[derive(Subcommand)]
enum ExtCmd {
    /// Chain module on an order vector of member labels (1-based)
    BuildChain {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_delimiter = ',')]
        order: Vec<usize>,
    },
    /// Cofiltration of M from {"inner", "outer", "module", "f", "g"}
    Splice {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        input: PathBuf,
    },
    /// Cofiltration to filtration and back
    Roundtrip {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum DefCmd {
    /// Iterated extension to lifting over k[Γ]
    Lift {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        input: PathBuf,
    },
    /// Lifting over k[Γ] to iterated extension
    Unlift {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        input: PathBuf,
    },
    /// Equations of Mor(H, k[Γ])
    Scheme {
        #[arg(long)]
        hull: PathBuf,
        #[arg(long, value_delimiter = ',')]
        order_vector: Vec<usize>,
    },
    /// Sampled points of Mor(H, k[Γ]) and their lifting and module classes
    Report {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        hull: PathBuf,
        #[arg(long, value_delimiter = ',')]
        order_vector: Vec<usize>,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    family: FamilyArg,
    /// Only `auto` is supported: Ext¹ is computed from the family
    #[arg(long, default_value = "auto")]
    ext: String,
    #[arg(long)]
    max_length: usize,
    /// Build one counterexample (ce1, ce2, ce3) on the given members instead
    #[arg(long, requires = "members")]
    counterexample: Option<String>,
    #[arg(long, value_delimiter = ',')]
    members: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Normal form of a*b
    Mul {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Alternating word w(α, n) for α ∈ {0, 1}
    Word {
        #[arg(long)]
        alpha: u8,
        #[arg(long)]
        n: usize,
    },
    /// Weight window of D/DP
    Window {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        /// lo..hi
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long)]
        bound: Option<u32>,
        /// Include degree 0 endomorphism data
        #[arg(long)]
        end: bool,
    },
    /// Graded Gabriel quiver on M_0, M_1 and M_α for the given α
    Quiver {
        #[arg(long, value_delimiter = ',', default_value = "1/2,1/3")]
        alphas: Vec<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "-5..5")]
        range: String,
        #[arg(long, default_value_t = 3)]
        max_shift: i64,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<Value, Failure>;

macro_rules! with_field {
    ($name:expr, $f:ident => $body:expr) => {
        match $name {
            "Q" => {
                type $f = Q;
                $body
            }
            "F2" | "F_2" => {
                type $f = Fp<2>;
                $body
            }
            "F3" | "F_3" => {
                type $f = Fp<3>;
                $body
            }
            "F5" | "F_5" => {
                type $f = Fp<5>;
                $body
            }
            "F7" | "F_7" => {
                type $f = Fp<7>;
                $body
            }
            other => Err(Failure::Usage(format!("unknown field '{other}'"))),
        }
    };
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn load_family<F: Field>(v: &Value) -> Result<(Family<F>, FamilyRef<F>), Failure> {
    let f: Family<F> = json::parse_family(v)?;
    let r: FamilyRef<F> = Arc::from(f.members.clone());
    Ok((f, r))
}

fn member_index<F>(f: &Family<F>, name: &str) -> Result<usize, Failure> {
    f.names
        .iter()
        .position(|n| n == name)
        .or_else(|| name.parse::<usize>().ok().filter(|&k| k >= 1 && k <= f.names.len()).map(|k| k - 1))
        .ok_or_else(|| Failure::Domain(Error::Invalid(format!("no family member '{name}'"))))
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let (a, b) = s.split_once("..").ok_or_else(|| Failure::Usage(format!("range '{s}' is not lo..hi")))?;
    let lo = a.trim().parse().map_err(|_| Failure::Usage(format!("bad range start '{a}'")))?;
    let hi = b.trim().parse().map_err(|_| Failure::Usage(format!("bad range end '{b}'")))?;
    if lo > hi {
        return Err(Failure::Usage(format!("empty range {s}")));
    }
    Ok((lo, hi))
}

fn load_quiver(path: &Path) -> Result<GabrielQuiver, Failure> {
    let v = read_json(path)?;
    if v.get("mult").is_some() {
        return serde_json::from_value(v).map_err(|e| Failure::Domain(Error::Parse(e.to_string())));
    }
    Ok(GabrielQuiver::from_quiver(&Quiver::from_json(&v)?))
}

fn ordered(v: &[usize]) -> Result<OrderedQuiver, Failure> {
    if v.is_empty() || v.contains(&0) {
        return Err(Failure::Usage("order vectors are nonempty lists of labels >= 1".into()));
    }
    Ok(OrderedQuiver::from_order_vector(v.to_vec()))
}

fn run_quiver(cmd: QuiverCmd) -> Out {
    Ok(match cmd {
        QuiverCmd::Enumerate { n } => {
            let classes = enumerate_extension_types(n);
            json!({ "n": n, "count": classes.len(), "classes": classes })
        }
        QuiverCmd::CheckStar(q) => {
            let g = load_quiver(&q.quiver)?;
            let r = g.check_star_condition();
            json!({ "holds": r.holds, "violations": r.violations.iter().map(|&v| &g.vertices[v]).collect::<Vec<_>>() })
        }
        QuiverCmd::Components(q) => {
            let g = load_quiver(&q.quiver)?;
            let comps: Vec<Value> = g
                .classify_components()
                .into_iter()
                .map(|(vs, kind)| json!({ "vertices": vs.iter().map(|&v| &g.vertices[v]).collect::<Vec<_>>(), "kind": kind }))
                .collect();
            json!({ "components": comps })
        }
        QuiverCmd::Q5 { quiver } => {
            let g = match quiver {
                Some(p) => load_quiver(&p)?,
                None => GabrielQuiver::q5(),
            };
            json!({ "contains_q5": g.contains_q5() })
        }
    })
}

fn run_algebra<F: Field>(cmd: AlgebraCmd) -> Out {
    match cmd {
        AlgebraCmd::Kgamma { order_vector } => Ok(json::pointed_algebra(&build_k_gamma::<F>(&ordered(&order_vector)?)?)),
        AlgebraCmd::Axioms { order_vector, algebra } => {
            let a: PointedAlgebra<F> = match (order_vector, algebra) {
                (Some(v), None) => build_k_gamma(&ordered(&v)?)?,
                (None, Some(p)) => json::parse_pointed_algebra(&read_json(&p)?)?,
                _ => return Err(Failure::Usage("give --order-vector or --algebra".into())),
            };
            let v = a.check_axioms();
            Ok(json!({ "ok": v.is_empty(), "violations": v, "radical_filtration": a.radical_filtration() }))
        }
    }
}

fn load_module<F: Field>(f: &Family<F>, input: &ModuleInput) -> Result<FdModule<F>, Failure> {
    match (&input.module, &input.member) {
        (Some(p), _) => Ok(json::parse_module(&read_json(p)?, &f.pres)?),
        (None, Some(name)) => Ok(f.members[member_index(f, name)?].clone()),
        (None, None) => Err(Failure::Usage("give --module or --member".into())),
    }
}

fn run_mod<F: Field>(cmd: ModCmd, fam: &Value) -> Out {
    let (f, _) = load_family::<F>(fam)?;
    match cmd {
        ModCmd::Ext1 { from, to, .. } => {
            let (a, b) = (member_index(&f, &from)?, member_index(&f, &to)?);
            let e = fdmod::ext1(&f.members[a], &f.members[b])?;
            let basis: Vec<Value> = e
                .basis
                .iter()
                .map(|c| {
                    let vals = f.pres.generators.iter().zip(&c.values).map(|(g, m)| (g.clone(), json::matrix(m)));
                    Value::Object(vals.collect())
                })
                .collect();
            Ok(json!({ "from": f.names[a], "to": f.names[b], "dim": e.dim, "basis": basis }))
        }
        ModCmd::Gabriel { .. } => {
            let q = fdmod::gabriel_quiver(&f.members, &f.names)?;
            let star = q.check_star_condition();
            Ok(json!({ "orthogonal": true, "quiver": q, "star_holds": star.holds }))
        }
        ModCmd::Uniserial(input) => {
            let m = load_module(&f, &input)?;
            let soc = m.socle()?;
            Ok(json!({
                "certificate": uniserial::certify(&m)?,
                "socle_layers": m.socle_layers()?,
                "socle": json::matrix(&soc),
            }))
        }
        ModCmd::Local(input) => Ok(serde_json::to_value(fdmod::end_is_local(&load_module(&f, &input)?)?).expect("plain data")),
    }
}

fn order_arg(v: &[usize], len: usize) -> Result<Vec<usize>, Failure> {
    if v.is_empty() || v.iter().any(|&a| a == 0 || a > len) {
        return Err(Failure::Usage(format!("order labels must lie in 1..={len}")));
    }
    Ok(v.iter().map(|a| a - 1).collect())
}

fn run_ext<F: Field>(cmd: ExtCmd, fam: &Value) -> Out {
    let (f, r) = load_family::<F>(fam)?;
    match cmd {
        ExtCmd::BuildChain { order, .. } => {
            let x = uniserial::chain_module(&r, &order_arg(&order, f.members.len())?)?;
            Ok(json::cofiltered(&x)?)
        }
        ExtCmd::Splice { input, .. } => {
            let v = read_json(&input)?;
            let field = |k: &str| v.get(k).ok_or_else(|| Failure::Domain(Error::Parse(format!("missing '{k}'"))));
            let inner = json::parse_cofiltered(field("inner")?, &r)?;
            let outer = json::parse_cofiltered(field("outer")?, &r)?;
            let m = json::parse_module(field("module")?, &f.pres)?;
            let fm = json::parse_matrix(field("f")?, m.dim(), inner.module().dim())?;
            let gm = json::parse_matrix(field("g")?, outer.module().dim(), m.dim())?;
            Ok(json::cofiltered(&extension::splice(&inner, &outer, &m, &fm, &gm)?)?)
        }
        ExtCmd::Roundtrip { input, .. } => {
            let x = json::parse_cofiltered(&read_json(&input)?, &r)?;
            let filt = x.to_filtered()?;
            let back = filt.to_cofiltered()?;
            let iso = fdmod::iso_test(x.module(), back.module())?;
            Ok(json!({
                "order": back.order().iter().map(|a| a + 1).collect::<Vec<_>>(),
                "same_order": back.order() == x.order(),
                "identity": back == x,
                "isomorphic": iso.is_iso(),
                "flag_dims": (0..=filt.len()).map(|i| filt.flag(i).cols()).collect::<Vec<_>>(),
            }))
        }
    }
}

fn run_def<F: Field>(cmd: DefCmd, field: &str) -> Out {
    match cmd {
        DefCmd::Lift { family, input } => {
            let (_, r) = load_family::<F>(&read_json(&family.family)?)?;
            let x = json::parse_cofiltered(&read_json(&input)?, &r)?;
            Ok(json::lifting(&defm::iterated_extension_to_lifting(&x)?)?)
        }
        DefCmd::Unlift { family, input } => {
            let (_, r) = load_family::<F>(&read_json(&family.family)?)?;
            let l = json::parse_lifting(&read_json(&input)?, &r)?;
            Ok(json::cofiltered(&defm::lifting_to_iterated_extension(&l)?)?)
        }
        DefCmd::Scheme { hull, order_vector } => {
            let h: HullPresentation<F> = json::parse_hull(&read_json(&hull)?)?;
            let e = defm::scheme_equations(&h, &ordered(&order_vector)?)?;
            Ok(json!({ "field": field, "scheme": json::scheme_equations(&e) }))
        }
        DefCmd::Report { family, hull, order_vector } => {
            let (_, r) = load_family::<F>(&read_json(&family.family)?)?;
            let h: HullPresentation<F> = json::parse_hull(&read_json(&hull)?)?;
            let rep = defm::surjection_report(&h, &ordered(&order_vector)?, &r, None)?;
            Ok(json::surjection_report(&rep))
        }
    }
}

fn run_classify<F: Field>(args: ClassifyArgs, fam: &Value) -> Out {
    if args.ext != "auto" {
        return Err(Failure::Usage("only --ext auto is supported".into()));
    }
    let (f, r) = load_family::<F>(fam)?;
    if let Some(kind) = &args.counterexample {
        let k = CeKind::parse(kind).ok_or_else(|| Failure::Usage(format!("unknown counterexample '{kind}'")))?;
        let members =
            args.members.unwrap_or_default().iter().map(|m| member_index(&f, m)).collect::<Result<Vec<_>, _>>()?;
        let c = uniserial::counterexample(&r, k, &members)?;
        let res = lencat::uniserial::ClassificationResult {
            quiver: fdmod::gabriel_quiver(&f.members, &f.names)?,
            star_holds: false,
            violations: Vec::new(),
            indecomposables: Vec::new(),
            obstructed: Vec::new(),
            counterexamples: vec![c],
        };
        return Ok(json::classification(&res, &f.names)?["counterexamples"][0].clone());
    }
    let res = uniserial::classify(&r, &f.names, args.max_length)?;
    Ok(json::classification(&res, &f.names)?)
}

fn parse_weyl<F: Field>(s: &str) -> Result<WeylElement<F>, Failure> {
    Ok(WeylElement::parse(s)?)
}

fn run_weyl<F: Field>(cmd: WeylCmd) -> Out {
    match cmd {
        WeylCmd::Mul { a, b } => {
            let p = weyl::weyl_multiply(&parse_weyl::<F>(&a)?, &parse_weyl::<F>(&b)?);
            Ok(json!({ "product": p.render() }))
        }
        WeylCmd::Word { alpha, n } => {
            let w = weyl::word_w::<F>(alpha, n)?;
            Ok(json!({ "alpha": alpha, "n": n, "word": w.render() }))
        }
        WeylCmd::Window { p, range, bound, end } => {
            let (lo, hi) = parse_range(&range)?;
            let m = weyl::window_module(&parse_weyl::<F>(&p)?, lo, hi, bound.unwrap_or_else(|| weyl::default_bound(lo, hi)))?;
            let mut v = json::window(&m);
            v["P"] = json!(p);
            v["commutation_holds"] = json!(m.commutation_holds());
            if end {
                v["end_degree0"] = serde_json::to_value(weyl::window_end_degree0(&m)?).expect("plain data");
                v["weight_spaces_uniserial"] = json!(weyl::weight_spaces_uniserial(&m));
            }
            Ok(v)
        }
        WeylCmd::Quiver { alphas, range, max_shift } => {
            let (lo, hi) = parse_range(&range)?;
            let a = alphas
                .iter()
                .map(|s| F::parse_exact(s.trim()).ok_or_else(|| Failure::Usage(format!("bad scalar '{s}'"))))
                .collect::<Result<Vec<F>, _>>()?;
            let rep = weyl::graded_gabriel_quiver(&a, lo, hi, max_shift)?;
            let star = rep.quiver.check_star_condition();
            Ok(json!({ "quiver": rep.quiver, "contributions": rep.contributions, "star_holds": star.holds }))
        }
    }
}

fn family_field(path: &Path, default: &str) -> Result<(Value, String), Failure> {
    let v = read_json(path)?;
    let field = v.get("field").and_then(Value::as_str).map_or_else(|| default.to_string(), str::to_string);
    Ok((v, field))
}

fn dispatch(cli: Cli) -> Out {
    let field = cli.field.clone();
    match cli.command {
        Command::Quiver(c) => run_quiver(c),
        Command::Algebra(c) => with_field!(field.as_str(), F => run_algebra::<F>(c)),
        Command::Module(c) => {
            let path = match &c {
                ModCmd::Ext1 { family, .. } | ModCmd::Gabriel { family } => &family.family,
                ModCmd::Uniserial(i) | ModCmd::Local(i) => &i.family.family,
            };
            let (v, fld) = family_field(path, &field)?;
            with_field!(fld.as_str(), F => run_mod::<F>(c, &v))
        }
        Command::Ext(c) => {
            let path = match &c {
                ExtCmd::BuildChain { family, .. } | ExtCmd::Splice { family, .. } | ExtCmd::Roundtrip { family, .. } => {
                    &family.family
                }
            };
            let (v, fld) = family_field(path, &field)?;
            with_field!(fld.as_str(), F => run_ext::<F>(c, &v))
        }
        Command::Deform(c) => {
            let fld = match &c {
                DefCmd::Lift { family, .. } | DefCmd::Unlift { family, .. } | DefCmd::Report { family, .. } => {
                    family_field(&family.family, &field)?.1
                }
                DefCmd::Scheme { .. } => field,
            };
            with_field!(fld.as_str(), F => run_def::<F>(c, &fld))
        }
        Command::Classify(a) => {
            let (v, fld) = family_field(&a.family.family, &field)?;
            with_field!(fld.as_str(), F => run_classify::<F>(a, &v))
        }
        Command::Weyl(c) => with_field!(field.as_str(), F => run_weyl::<F>(c)),
        Command::Fixture(FixtureCmd::List) => Ok(json!({ "fixtures": fixtures::FIXTURE_NAMES })),
        Command::Fixture(FixtureCmd::Show { name }) => {
            with_field!(field.as_str(), F => Ok(json::family(&fixtures::by_name::<F>(&name)?)))
        }
        Command::Manifest { manifest, check, criterion } => run_manifest(&manifest, check, criterion),
    }
}

fn render(v: &Value, format: Format) -> String {
    let mut text = match format {
        Format::Json => serde_json::to_string(v),
        Format::Pretty => serde_json::to_string_pretty(v),
    }
    .expect("serialisable");
    text.push('\n');
    text
}

/// Entries are `{"name", "criterion"?, "args": [...], "output"}`; args and
/// outputs are relative to the manifest's directory.
fn run_manifest(path: &Path, check: bool, criterion: Option<u64>) -> Out {
    let v = read_json(path)?;
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::env::set_current_dir(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let entries = v["entries"].as_array().ok_or_else(|| Failure::Domain(Error::Parse("manifest needs 'entries'".into())))?;
    let (mut done, mut mismatched) = (Vec::new(), Vec::new());
    for e in entries {
        if criterion.is_some() && e["criterion"].as_u64() != criterion {
            continue;
        }
        let bad = || Failure::Domain(Error::Parse(format!("bad manifest entry {e}")));
        let name = e["name"].as_str().ok_or_else(bad)?;
        let out = e["output"].as_str().ok_or_else(bad)?;
        let args: Vec<&str> = e["args"].as_array().ok_or_else(bad)?.iter().map(|a| a.as_str().ok_or_else(bad)).collect::<Result<_, _>>()?;
        let cli = Cli::try_parse_from(std::iter::once("lencat").chain(args.iter().copied()))
            .map_err(|err| Failure::Usage(format!("{name}: {err}")))?;
        if cli.output.is_some() || matches!(cli.command, Command::Manifest { .. }) {
            return Err(Failure::Usage(format!("{name}: entries may not set --output or nest manifests")));
        }
        let format = cli.format;
        let text = render(&dispatch(cli)?, format);
        if check {
            if fs::read_to_string(out).ok().as_deref() != Some(text.as_str()) {
                mismatched.push(name.to_string());
            }
        } else {
            if let Some(parent) = Path::new(out).parent() {
                fs::create_dir_all(parent).map_err(|err| Failure::Usage(format!("{out}: {err}")))?;
            }
            fs::write(out, &text).map_err(|err| Failure::Usage(format!("{out}: {err}")))?;
        }
        done.push(name.to_string());
    }
    if !mismatched.is_empty() {
        return Err(Failure::Domain(Error::Invalid(format!("golden files differ: {}", mismatched.join(", ")))));
    }
    Ok(json!({ if check { "checked" } else { "written" }: done }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let output = cli.output.clone();
    match dispatch(cli) {
        Ok(v) => {
            let text = render(&v, format);
            let written = match output {
                Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{}", json!({ "error": "io", "message": e }));
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", json!({ "error": "usage", "message": msg }));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
