use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use toric_hdi::builtin::parse_builtin;
use toric_hdi::contract::nef_ray_contractions;
use toric_hdi::frobenius::{frobenius_summands, push_module};
use toric_hdi::hdi::{self, HdiConfig, HdiEngine};
use toric_hdi::json::{self as tj, FanJson, InputError, MorphismJson, PresentationJson};
use toric_hdi::{DivisorClass, LatticeBox, TDivisor, ToricError, ToricMorphism, ToricVariety};

#[derive(Parser)]
#[command(name = "toric-hdi", version, about = "Higher direct images and Frobenius pushforwards on toric varieties")]
struct Cli {
    /// Worker threads for data-parallel steps (default: all cores).
    #[arg(long, global = true, env = "TORIC_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    output: Output,
    /// Also run brute-force cross-checks and report their agreement.
    #[arg(long, global = true)]
    oracle: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Smoothness, completeness and class group of a fan.
    VarietyCheck(VarietyArgs),
    /// Higher direct images of a line bundle along a toric fibration.
    Hdi(HdiArgs),
    /// Frobenius pushforward of a line bundle or a presented module.
    Frobenius(FrobeniusArgs),
    /// Contractions attached to the extremal rays of the nef cone.
    Contract(VarietyArgs),
}

#[derive(Args)]
struct VarietyArgs {
    /// Fan JSON file (`-` for standard input).
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    fan: Option<String>,
    /// Builtin variety, e.g. `hirzebruch:1` or `product(projective:1,projective:1)`.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args)]
struct HdiArgs {
    /// Morphism JSON file with `source`, `target` and `matrix`.
    #[arg(long, conflicts_with_all = ["source", "target", "matrix"])]
    map: Option<String>,
    /// Builtin source variety.
    #[arg(long, requires_all = ["target", "matrix"])]
    source: Option<String>,
    /// Builtin target variety.
    #[arg(long)]
    target: Option<String>,
    /// Lattice map, rows separated by `;`, e.g. `1,0,0;0,1,0`.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Divisor coefficients in ray order, e.g. `0,-1,-2,-3`.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "divisor_on_rays")]
    divisor: Option<String>,
    /// Divisor given by rays, e.g. `0,0,1=-2;0,1,-1=-2`; unlisted rays get 0.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "divisor")]
    divisor_on_rays: Option<String>,
    #[arg(long, default_value_t = 0)]
    degree: usize,
    /// Twist classes: `B` for the cube `[-B, B]`, or `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    twist_box: Option<String>,
    /// Include the eigencharacter table.
    #[arg(long)]
    eigenchars: bool,
}

#[derive(Args)]
struct FrobeniusArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    #[arg(short, long)]
    p: u32,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "presentation", conflicts_with = "presentation")]
    divisor: Option<String>,
    /// Presentation JSON file with `target`, `source` and `entries`.
    #[arg(long)]
    presentation: Option<String>,
    /// Half-width of the class box for the Hilbert fingerprint of a pushed presentation.
    #[arg(long, default_value_t = 2)]
    hilbert_box: i64,
}

/// Structured failure: input errors carry a JSON pointer, computation errors do not.
enum Failure {
    Input(InputError),
    Compute(ToricError),
    Oracle(Value),
    Io(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<ToricError> for Failure {
    fn from(e: ToricError) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    fn report(&self) -> (Value, u8) {
        match self {
            Failure::Input(e) => (json!({"error": {"kind": "input", "message": e.message, "pointer": e.pointer}}), 2),
            Failure::Io(m) => (json!({"error": {"kind": "io", "message": m}}), 2),
            Failure::Compute(e) => (json!({"error": {"kind": "computation", "message": e.to_string()}}), 1),
            Failure::Oracle(v) => (json!({"error": {"kind": "oracle-mismatch", "message": "cross-check disagrees", "details": v}}), 3),
        }
    }
}

type Res<T> = Result<T, Failure>;

fn read_json(path: &str) -> Res<Value> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Io(e.to_string()))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?
    };
    Ok(tj::parse_str(&text)?)
}

fn load_variety(a: &VarietyArgs) -> Res<ToricVariety> {
    match (&a.fan, &a.builtin) {
        (_, Some(spec)) => Ok(parse_builtin(spec).map_err(|e| InputError::new("", e.to_string()))?),
        (Some(path), None) => {
            let v = read_json(path)?;
            Ok(tj::from_value::<FanJson>(&v, "")?.build("")?)
        }
        (None, None) => Err(InputError::new("", "a fan is required").into()),
    }
}

fn parse_ints(text: &str, what: &str) -> Res<Vec<i64>> {
    let t = text.trim();
    if t.starts_with('[') {
        let v = tj::parse_str(t)?;
        return Ok(tj::from_value(&v, "")?);
    }
    t.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| InputError::new("", format!("{what}: not an integer: {s:?}")).into()))
        .collect()
}

fn parse_matrix(text: &str) -> Res<Vec<Vec<i64>>> {
    text.split(';').map(|row| parse_ints(row, "matrix")).collect()
}

fn load_morphism(a: &HdiArgs) -> Res<ToricMorphism> {
    if let Some(path) = &a.map {
        let v = read_json(path)?;
        return Ok(tj::from_value::<MorphismJson>(&v, "")?.build("")?);
    }
    let (Some(s), Some(t), Some(m)) = (&a.source, &a.target, &a.matrix) else {
        return Err(InputError::new("", "give --map, or --source, --target and --matrix").into());
    };
    let bad = |e: ToricError| InputError::new("", e.to_string());
    let source = Arc::new(parse_builtin(s).map_err(bad)?);
    let target = Arc::new(parse_builtin(t).map_err(bad)?);
    Ok(ToricMorphism::new(target, source, parse_matrix(m)?)?)
}

fn load_divisor(x: &ToricVariety, plain: &Option<String>, on_rays: &Option<String>) -> Res<TDivisor> {
    if let Some(text) = plain {
        return Ok(tj::divisor(x, parse_ints(text, "divisor")?, "")?);
    }
    let text = on_rays.as_deref().unwrap_or_default();
    let mut coeffs = vec![0i64; x.num_rays()];
    for part in text.split(';').filter(|p| !p.trim().is_empty()) {
        let (ray, c) = part.split_once('=').ok_or_else(|| InputError::new("", format!("expected RAY=COEFF in {part:?}")))?;
        let ray = parse_ints(ray, "ray")?;
        let idx = x.rays().iter().position(|r| *r == ray).ok_or_else(|| InputError::new("", format!("{ray:?} is not a ray")))?;
        coeffs[idx] = c.trim().parse().map_err(|_| InputError::new("", format!("not an integer: {c:?}")))?;
    }
    Ok(TDivisor(coeffs))
}

fn parse_box(text: &str, rank: usize) -> Res<LatticeBox> {
    let bad = || Failure::from(InputError::new("", format!("twist box: expected B or LO:HI, got {text:?}")));
    let (lo, hi) = match text.split_once(':') {
        Some((l, h)) => (l.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?),
        None => {
            let b: i64 = text.trim().parse().map_err(|_| bad())?;
            (-b, b)
        }
    };
    Ok(LatticeBox::cube(rank, lo, hi))
}

fn is_p1(y: &ToricVariety) -> bool {
    let mut rays = y.rays().to_vec();
    rays.sort();
    rays == vec![vec![-1], vec![1]]
}

fn cmd_variety_check(a: &VarietyArgs) -> Res<Value> {
    Ok(tj::variety_report(&load_variety(a)?))
}

fn cmd_hdi(a: &HdiArgs, oracle: bool) -> Res<Value> {
    let f = load_morphism(a)?;
    let d = load_divisor(f.source(), &a.divisor, &a.divisor_on_rays)?;
    let cfg = HdiConfig::default();
    let engine = HdiEngine::new(&f, a.degree)?;
    let table = hdi::eigencharacters_with(&engine, &d, &cfg)?;
    let (_, torsion) = engine.global_sections(&d)?;
    let twist = match &a.twist_box {
        Some(b) => Some(hdi::twist_table_with(&engine, &d, &parse_box(b, f.target().class_rank())?, &cfg)?),
        None => None,
    };
    let splitting = if is_p1(f.target()) { Some(hdi::splitting_type_over_p1(&f, a.degree, &d, &cfg)?) } else { None };
    let mut out = json!({
        "i": a.degree,
        "rank": table.rank(),
        "eigencharacters": if a.eigenchars { serde_json::to_value(&table.entries).expect("serializable") } else { Value::Null },
        "twistTable": twist.as_ref().map(|t| t.entries.iter().map(|(c, h)| json!({"class": c, "h0": h})).collect::<Vec<_>>()),
        "splitting": splitting,
        "torsionDim": torsion,
    });
    if oracle {
        out["oracle"] = hdi_oracle(&f, &engine, &d, a.degree, twist.as_ref(), splitting.as_ref())?;
    }
    Ok(out)
}

/// Recomputes global sections over a doubled character box, compares degree-zero twists
/// with lattice-point counts on the source, and checks Leray over the projective line.
fn hdi_oracle(
    f: &ToricMorphism,
    engine: &HdiEngine,
    d: &TDivisor,
    degree: usize,
    twist: Option<&hdi::TwistTable>,
    splitting: Option<&hdi::SplittingType>,
) -> Res<Value> {
    let mut checks = Vec::new();
    let x = f.source();
    let bx = x.character_box(d)?;
    let plain = engine.global_sections_in(d, &bx)?;
    let doubled = engine.global_sections_in(d, &bx.doubled())?;
    checks.push(json!({"check": "box-doubling", "agree": plain == doubled}));
    if let (Some(t), 0) = (twist, degree) {
        let mut ok = true;
        for (c, &h) in &t.entries {
            let dd = engine.twisted(d, &DivisorClass(c.clone()))?;
            ok &= x.count_lattice_points(&dd)? == h;
        }
        checks.push(json!({"check": "lattice-points", "agree": ok}));
    }
    if splitting.is_some() {
        let report = hdi::leray_check_over_p1(f, d, &HdiConfig::default())?;
        checks.push(json!({"check": "leray", "agree": report.holds(), "direct": report.direct, "spectral": report.spectral}));
    }
    finish_oracle(checks)
}

fn finish_oracle(checks: Vec<Value>) -> Res<Value> {
    let agree = checks.iter().all(|c| c["agree"] == json!(true));
    let v = json!({"agree": agree, "checks": checks});
    if agree {
        Ok(v)
    } else {
        Err(Failure::Oracle(v))
    }
}

fn cmd_frobenius(a: &FrobeniusArgs, oracle: bool) -> Res<Value> {
    let x = load_variety(&a.variety)?;
    if a.p == 0 {
        return Err(InputError::new("", "p must be positive").into());
    }
    if let Some(path) = &a.presentation {
        let v = read_json(path)?;
        let m = tj::from_value::<PresentationJson>(&v, "")?.build(&x, "")?;
        let pushed = push_module(&x, a.p, &m)?;
        let bx = LatticeBox::cube(x.class_rank(), -a.hilbert_box, a.hilbert_box);
        let hilb = pushed.hilbert_function(&x, &bx)?;
        let mut out = json!({
            "p": a.p,
            "summands": Value::Null,
            "matrix": PresentationJson::of(&pushed),
            "hilbert": hilb.iter().map(|(c, v)| json!({"class": c, "dim": v})).collect::<Vec<_>>(),
        });
        if oracle {
            let mut ok = true;
            for (c, &v) in &hilb {
                let scaled = DivisorClass(c.iter().map(|t| t * a.p as i64).collect());
                ok &= m.hilbert_value(&x, &scaled)? == v;
            }
            out["oracle"] = finish_oracle(vec![json!({"check": "hilbert-scaling", "agree": ok})])?;
        }
        return Ok(out);
    }
    let d = tj::divisor(&x, parse_ints(a.divisor.as_deref().unwrap_or_default(), "divisor")?, "")?;
    let summands = frobenius_summands(&x, a.p, &d)?;
    let mut out = json!({"p": a.p, "summands": summands, "matrix": Value::Null});
    if oracle {
        let mut ok = true;
        for c in LatticeBox::cube(x.class_rank(), -2, 2).iter() {
            let e = x.divisor_of_class(&DivisorClass(c));
            let mut lhs = 0;
            for s in &summands {
                lhs += x.count_lattice_points(&(&s.divisor + &e))?;
            }
            ok &= lhs == x.count_lattice_points(&(&d + &(a.p as i64 * &e)))?;
        }
        out["oracle"] = finish_oracle(vec![json!({"check": "section-count", "agree": ok})])?;
    }
    Ok(out)
}

fn cmd_contract(a: &VarietyArgs, oracle: bool) -> Res<Value> {
    let x = Arc::new(load_variety(a)?);
    let cs = nef_ray_contractions(&x)?;
    let list: Vec<Value> = cs
        .iter()
        .map(|c| {
            json!({
                "nefRay": c.nef_ray,
                "isIsomorphism": c.is_isomorphism,
                "target": FanJson::of(c.morphism.target()),
                "matrix": c.morphism.matrix(),
            })
        })
        .collect();
    if oracle {
        // contractions have connected fibers: f_* O_X = O_Y, checked on a few twists
        let mut ok = true;
        for c in cs.iter().filter(|c| !c.is_isomorphism) {
            let f = &c.morphism;
            let y = f.target();
            let zero = TDivisor::zero(x.num_rays());
            let t = hdi::hdi_twist_table(f, 0, &zero, &LatticeBox::cube(y.class_rank(), -1, 2), &HdiConfig::default())?;
            for (cl, &h) in &t.entries {
                ok &= y.count_lattice_points(&y.divisor_of_class(&DivisorClass(cl.clone())))? == h;
            }
        }
        let check = json!({"check": "connected-fibers", "agree": ok});
        return Ok(json!({"contractions": list, "oracle": finish_oracle(vec![check])?}));
    }
    Ok(Value::Array(list))
}

fn run(cli: &Cli) -> Res<Value> {
    match &cli.command {
        Command::VarietyCheck(a) => cmd_variety_check(a),
        Command::Hdi(a) => cmd_hdi(a, cli.oracle),
        Command::Frobenius(a) => cmd_frobenius(a, cli.oracle),
        Command::Contract(a) => cmd_contract(a, cli.oracle),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({"error": {"kind": "io", "message": e.to_string()}}));
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(v) => {
            let text = match cli.output {
                Output::Json => serde_json::to_string(&v),
                Output::Pretty => serde_json::to_string_pretty(&v),
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{}", text.expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (v, code) = f.report();
            eprintln!("{v}");
            ExitCode::from(code)
        }
    }
}
