mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use orblab::abc::{self, AbcTriple, QualityRecord};
use orblab::beauville::BeauvilleConfig;
use orblab::belyi::{self, BelyiMap, Target};
use orblab::chatelet::{self, ChateletSurface, Evidence, Place};
use orblab::orbifold::{self, OrbifoldDivisor, PrimeSet, ScanOptions};
use orblab::poly::ZPoly;
use orblab::{parse, Error, PrimeForm, ProjPoint};
use serde_json::{json, Value};

use output::{float, float_text, int, point, rat, Out};

#[derive(Parser)]
#[command(name = "orblab", version, about = "Orbifold points, abc triples, Belyi maps, Beauville surfaces and Chatelet surfaces")]
struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "ORBLAB_JOBS")]
    jobs: Option<usize>,
    /// Output format for scans.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Orbifold divisors on the projective line.
    #[command(subcommand)]
    Orbifold(OrbifoldCmd),
    /// abc triples and the key-inequality report.
    #[command(subcommand)]
    Abc(AbcCmd),
    /// Rational maps of the projective line.
    #[command(subcommand)]
    Belyi(BelyiCmd),
    /// Quotients of products of double-cover towers.
    #[command(subcommand)]
    Beauville(BeauvilleCmd),
    /// Chatelet surfaces y^2 - a z^2 = P(x).
    #[command(subcommand)]
    Chatelet(ChateletCmd),
}

#[derive(Args, Clone)]
struct DivisorArgs {
    /// Component of multiplicity 2 at a point (`n`, `a/b` or `inf`).
    #[arg(long = "half", value_parser = parse_point, allow_hyphen_values = true)]
    halves: Vec<ProjPoint>,
    /// Component `<form>:<m>`, the form a point or an irreducible polynomial in x.
    #[arg(long = "branch", value_parser = parse_branch, allow_hyphen_values = true)]
    branches: Vec<(PrimeForm, u32)>,
}

impl DivisorArgs {
    fn divisor(&self) -> orblab::Result<OrbifoldDivisor> {
        let mut comps: Vec<(PrimeForm, u32)> = self.halves.iter().map(|p| (p.as_form(), 2)).collect();
        comps.extend(self.branches.iter().cloned());
        OrbifoldDivisor::new(comps)
    }
}

#[derive(Args, Clone)]
struct ExcludeArgs {
    /// Prime at which the multiplicity condition is waived.
    #[arg(long = "exclude-prime", value_parser = parse_prime)]
    primes: Vec<u64>,
}

impl ExcludeArgs {
    fn set(&self) -> PrimeSet {
        self.primes.iter().copied().collect()
    }
}

#[derive(Subcommand)]
enum OrbifoldCmd {
    /// Orbifold points of bounded height, one JSON object per point.
    Scan {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[command(flatten)]
        exclude: ExcludeArgs,
        #[arg(long)]
        hmax: u64,
        /// Drop points lying on the divisor.
        #[arg(long)]
        no_support: bool,
    },
    /// Membership of one point, with a violating prime if any.
    Check {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[command(flatten)]
        exclude: ExcludeArgs,
        #[arg(short = 'q', long = "point", value_parser = parse_point, allow_hyphen_values = true)]
        point: ProjPoint,
    },
    /// Canonical degree and general type for a curve of genus g.
    Degree {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[arg(long, default_value_t = 0)]
        genus: u64,
    },
}

#[derive(Subcommand)]
enum AbcCmd {
    /// The triple (-p, q, p - q) of a ratio p/q.
    Triple {
        #[arg(short = 'r', long = "ratio", value_parser = parse_point, allow_hyphen_values = true)]
        ratio: ProjPoint,
    },
    /// Triples of bounded height and quality at least the given one.
    Scan {
        #[arg(long)]
        hmax: u64,
        #[arg(long = "quality-min")]
        quality_min: f64,
    },
    /// One row per orbifold point p: the split conductor of f(p) against deg D_t / deg f.
    Keyineq {
        #[arg(long = "map", value_parser = parse_map, allow_hyphen_values = true)]
        map: BelyiMap,
        #[command(flatten)]
        divisor: DivisorArgs,
        #[command(flatten)]
        exclude: ExcludeArgs,
        #[arg(long)]
        hmax: u64,
        /// Row format (csv unless given).
        #[arg(long, value_enum)]
        out: Option<Format>,
    },
}

#[derive(Subcommand)]
enum BelyiCmd {
    /// Whether the map branches only over 0, 1 and inf.
    Check {
        #[arg(long = "map", value_parser = parse_map, allow_hyphen_values = true)]
        map: BelyiMap,
    },
    /// Fibers over 0, 1, inf and the remaining critical points.
    Ram {
        #[arg(long = "map", value_parser = parse_map, allow_hyphen_values = true)]
        map: BelyiMap,
    },
    /// Pullback divisors, the degree identity and the general-type transfer.
    Transfer {
        #[arg(long = "map", value_parser = parse_map, allow_hyphen_values = true)]
        map: BelyiMap,
        #[command(flatten)]
        divisor: DivisorArgs,
    },
}

#[derive(Subcommand)]
enum BeauvilleCmd {
    /// Genera, freeness and invariants of the quotient surface.
    Verify {
        #[arg(long, value_enum, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<Preset>,
        /// JSON file with covers_C, covers_D, action_C, action_D.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(short = 'a', value_parser = parse_rational, allow_hyphen_values = true)]
    a: BigRational,
    #[arg(short = 'P', value_parser = parse_poly, allow_hyphen_values = true)]
    poly: ZPoly,
}

#[derive(Subcommand)]
enum ChateletCmd {
    /// Local solvability at the real place, the bad primes and any extra primes.
    Local {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long = "place", value_parser = parse_place)]
        places: Vec<Place>,
    },
    /// Points x of bounded height whose fiber has a rational point.
    Search {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        hmax: u64,
    },
}

fn parse_point(s: &str) -> Result<ProjPoint, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_branch(s: &str) -> Result<(PrimeForm, u32), String> {
    let (form, m) = s.rsplit_once(':').ok_or("expected <form>:<m>")?;
    let m: u32 = m.parse().map_err(|_| format!("bad multiplicity {m:?}"))?;
    let form = parse::parse_prime_form(form).map_err(|e| e.to_string())?;
    Ok((form, m))
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("bad prime {s:?}"))?;
    if !orblab::arith::is_prime_u64(p) {
        return Err(format!("{p} is not a prime"));
    }
    Ok(p)
}

fn parse_map(s: &str) -> Result<BelyiMap, String> {
    BelyiMap::parse(s).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim().parse::<BigRational>().map_err(|_| format!("bad rational {s:?}"))
}

fn parse_poly(s: &str) -> Result<ZPoly, String> {
    parse::parse_poly(s).map_err(|e| e.to_string())
}

fn parse_place(s: &str) -> Result<Place, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Precondition(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => Failure::Usage(msg),
            e => Failure::Precondition(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let mut out = Out::default();
    let result = pool.install(|| dispatch(&cli, &mut out));
    match result.and_then(|()| out.flush().map_err(Failure::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Precondition(e)) => {
            let diag = json!({"error": e.to_string(), "precondition": e.precondition()});
            eprintln!("{diag}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Out) -> Run {
    match &cli.command {
        Command::Orbifold(c) => orbifold_cmd(c, cli.format, out),
        Command::Abc(c) => abc_cmd(c, cli.format, out),
        Command::Belyi(c) => belyi_cmd(c, out),
        Command::Beauville(c) => beauville_cmd(c, out),
        Command::Chatelet(c) => chatelet_cmd(c, out),
    }
}

fn orbifold_cmd(cmd: &OrbifoldCmd, format: Format, out: &mut Out) -> Run {
    match cmd {
        OrbifoldCmd::Scan { divisor, exclude, hmax, no_support } => {
            let d = divisor.divisor()?;
            let opts = ScanOptions { include_support: !no_support };
            let points = orbifold::scan_orbifold_points(&d, &exclude.set(), *hmax, opts)?;
            if format == Format::Csv {
                out.line("x,y,height");
            }
            for p in points {
                match format {
                    Format::Json => out.json(&json!({"x": int(p.x()), "y": int(p.y()), "height": int(&p.height())})),
                    Format::Csv => out.line(format!("{},{},{}", p.x(), p.y(), p.height())),
                }
            }
        }
        OrbifoldCmd::Check { divisor, exclude, point } => {
            let d = divisor.divisor()?;
            let r = orbifold::is_orbifold_point(point, &d, &exclude.set());
            let witness = match r.witness {
                Some(w) => json!({"component": w.component, "prime": int(&w.prime), "value": w.value}),
                None => Value::Null,
            };
            out.json(&json!({"member": r.member, "witness": witness}));
        }
        OrbifoldCmd::Degree { divisor, genus } => {
            let d = divisor.divisor()?;
            out.json(&json!({
                "canonical_degree": rat(&orbifold::canonical_degree(*genus, &d)),
                "general_type": orbifold::is_general_type(*genus, &d),
            }));
        }
    }
    Ok(())
}

fn quality_json(r: &QualityRecord) -> Value {
    let t = &r.triple;
    json!({
        "a": int(t.a()), "b": int(t.b()), "c": int(t.c()),
        "H": int(&r.height), "N": int(&r.conductor), "quality": float(r.quality),
    })
}

fn abc_cmd(cmd: &AbcCmd, format: Format, out: &mut Out) -> Run {
    match cmd {
        AbcCmd::Triple { ratio } => {
            let t: AbcTriple = abc::triple_from_ratio(ratio)?;
            out.json(&quality_json(&QualityRecord::of(t)));
        }
        AbcCmd::Scan { hmax, quality_min } => {
            if !(*quality_min > 0.0) {
                return Err(Failure::Usage("--quality-min must be positive".into()));
            }
            let records = abc::scan_high_quality(*hmax, *quality_min)?;
            if format == Format::Csv {
                out.line("a,b,c,H,N,quality");
            }
            for r in &records {
                match format {
                    Format::Json => out.json(&quality_json(r)),
                    Format::Csv => {
                        let t = &r.triple;
                        out.line(format!(
                            "{},{},{},{},{},{}",
                            t.a(), t.b(), t.c(), r.height, r.conductor, float_text(r.quality)
                        ));
                    }
                }
            }
        }
        AbcCmd::Keyineq { map, divisor, exclude, hmax, out: row_format } => {
            let d = divisor.divisor()?;
            let report = abc::key_inequality_report(map, &d, &exclude.set(), *hmax)?;
            let csv = row_format.unwrap_or(Format::Csv) == Format::Csv;
            if csv {
                out.line("x,y,rx,ry,logH,logN0,logN1,logNinf,slope0,slope1,slopeinf,rho0,rho1,rhoinf");
            }
            for row in &report.rows {
                if csv {
                    let mut cells = vec![
                        row.point.x().to_string(),
                        row.point.y().to_string(),
                        row.ratio.x().to_string(),
                        row.ratio.y().to_string(),
                        float_text(row.log_height),
                    ];
                    cells.extend(row.log_split.iter().map(|v| float_text(*v)));
                    cells.extend(row.slopes.iter().map(|s| s.to_string()));
                    cells.extend(row.residuals.iter().map(|v| float_text(*v)));
                    out.line(cells.join(","));
                } else {
                    out.json(&json!({
                        "x": int(row.point.x()), "y": int(row.point.y()),
                        "rx": int(row.ratio.x()), "ry": int(row.ratio.y()),
                        "logH": float(row.log_height),
                        "logN0": float(row.log_split[0]), "logN1": float(row.log_split[1]), "logNinf": float(row.log_split[2]),
                        "slope0": rat(&row.slopes[0]), "slope1": rat(&row.slopes[1]), "slopeinf": rat(&row.slopes[2]),
                        "rho0": float(row.residuals[0]), "rho1": float(row.residuals[1]), "rhoinf": float(row.residuals[2]),
                    }));
                }
            }
            let max = |t| report.max_residual(t).map_or("none".to_string(), float_text);
            eprintln!(
                "rows={} max_rho0={} max_rho1={} max_rhoinf={}",
                report.rows.len(),
                max(Target::Zero),
                max(Target::One),
                max(Target::Infinity)
            );
        }
    }
    Ok(())
}

fn critical_json(r: &belyi::RamificationData) -> Value {
    r.extra_critical
        .iter()
        .map(|c| json!({"point": c.point.to_string(), "value": c.value.as_ref().map(point)}))
        .collect()
}

fn belyi_cmd(cmd: &BelyiCmd, out: &mut Out) -> Run {
    match cmd {
        BelyiCmd::Check { map } => {
            let r = belyi::ramification_data(map);
            out.json(&json!({
                "map": map.to_string(),
                "degree": map.degree(),
                "belyi": r.is_belyi(),
                "extra_critical": critical_json(&r),
            }));
        }
        BelyiCmd::Ram { map } => {
            let r = belyi::ramification_data(map);
            let mut fibers = serde_json::Map::new();
            for t in Target::ALL {
                let pts: Vec<Value> = r
                    .fiber(t)
                    .points
                    .iter()
                    .map(|(d, n)| json!({"form": d.to_string(), "multiplicity": n}))
                    .collect();
                fibers.insert(t.label().into(), Value::Array(pts));
            }
            out.json(&json!({
                "map": map.to_string(),
                "degree": map.degree(),
                "fibers": fibers,
                "extra_critical": critical_json(&r),
            }));
        }
        BelyiCmd::Transfer { map, divisor } => {
            let d = divisor.divisor()?;
            let pb = belyi::orbifold_pullback(map, &d)?;
            let id = belyi::verify_degree_identity(map, &d)?;
            let divisors: serde_json::Map<String, Value> = Target::ALL
                .iter()
                .map(|t| {
                    let comps: Vec<Value> = pb
                        .divisor(*t)
                        .components
                        .iter()
                        .map(|(f, a)| json!({"form": f.to_string(), "weight": rat(a)}))
                        .collect();
                    (format!("D{}", t.label()), Value::Array(comps))
                })
                .collect();
            out.json(&json!({
                "degree": map.degree(),
                "divisors": divisors,
                "deg_D0": rat(&pb.degree_of(Target::Zero)),
                "deg_D1": rat(&pb.degree_of(Target::One)),
                "deg_Dinf": rat(&pb.degree_of(Target::Infinity)),
                "deg_D": rat(&pb.degree()),
                "lhs": rat(&id.lhs),
                "rhs": rat(&id.rhs),
                "equal": id.equal,
                "canonical_degree": rat(&orbifold::canonical_degree(0, &d)),
                "general_type": orbifold::is_general_type(0, &d),
                "transfer": belyi::transfer_general_type(map, &d)?,
            }));
        }
    }
    Ok(())
}

fn beauville_cmd(cmd: &BeauvilleCmd, out: &mut Out) -> Run {
    let BeauvilleCmd::Verify { preset, config } = cmd;
    let cfg = match (preset, config) {
        (Some(Preset::Paper), _) => BeauvilleConfig::paper(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(Failure::Usage("one of --preset or --config is required".into())),
    };
    let inv = cfg.build()?.invariants()?;
    out.line(serde_json::to_string(&inv).expect("serializable"));
    Ok(())
}

fn evidence_json(r: &chatelet::PlaceReport) -> Value {
    let (witness, certificate) = match &r.evidence {
        Evidence::Witness(x) => (point(x), Value::Null),
        Evidence::GoodReduction => (Value::Null, json!("good_reduction")),
        Evidence::Exhausted { precision } => (Value::Null, json!(format!("exhausted_mod_p^{precision}"))),
        Evidence::NegativeDefinite => (Value::Null, json!("negative_definite")),
    };
    json!({"place": r.place.to_string(), "solvable": r.solvable, "witness": witness, "certificate": certificate})
}

fn chatelet_cmd(cmd: &ChateletCmd, out: &mut Out) -> Run {
    match cmd {
        ChateletCmd::Local { surface, places } => {
            let s = ChateletSurface::new(surface.a.clone(), surface.poly.clone())?;
            let (mut ok, mut reports) = chatelet::everywhere_locally_solvable(&s);
            for p in places {
                if reports.iter().all(|r| &r.place != p) {
                    let r = chatelet::locally_solvable_at(&s, p);
                    ok &= r.solvable;
                    reports.push(r);
                }
            }
            out.json(&json!({
                "a": rat(s.a()),
                "P": s.poly().display_in("x"),
                "split": s.is_split(),
                "bad_primes": s.bad_primes().iter().map(int).collect::<Vec<_>>(),
                "solvable": ok,
                "places": reports.iter().map(evidence_json).collect::<Vec<_>>(),
            }));
        }
        ChateletCmd::Search { surface, hmax } => {
            let s = ChateletSurface::new(surface.a.clone(), surface.poly.clone())?;
            let found = chatelet::search_solvable_fibers(&s, *hmax)?;
            out.json(&Value::Array(found.iter().map(point).collect()));
        }
    }
    Ok(())
}
