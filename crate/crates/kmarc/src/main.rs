use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmarc::format::{
    parse_hex, to_hex, ArcFile, CollineationJson, CriterionJson, LineJson, Provenance, ReportJson,
    TowerJson,
};
use kmarc::parallel::verify_direct_jobs;
use kmarc::sample::{move_along_ray, random_scaling, random_star_set, seeded};
use kmarc::svg::histogram_svg;
use kmarc::{CliError, CliResult};
use kmarc_core::arcs::{
    gen_exponents, is_vandermonde, secant_points, t_secants, verify_bracket, verify_power_sums,
    ExponentKind, Outcome,
};
use kmarc_core::autos::{
    dilation_spec, example_involution, example_quotient_order, make_named, map_order, point_orbits,
    primitive_sub_element, smallest_with_trace, stabilizes, verify_translation_arc, MapSpec,
    TranslationClass, DEFAULT_CAP,
};
use kmarc_core::constructions::{
    example_fixture, lift_construction, recurrence_arc, recurrence_set, subplane_hyperoval,
    subplane_oval, Example,
};
use kmarc_core::{FieldElement, FieldTower, Line, ProjPoint};
use serde_json::{json, Value};

/// KM-arcs in PG(2, 2^m), built and checked in polar coordinates.
///
/// Every command prints JSON. Exit status: 0 on success or a positive
/// verdict, 1 when a check comes out false, 2 on usage or input errors.
#[derive(Parser)]
#[command(name = "kmarc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TowerArgs {
    /// q = 2^m; the field K has 2^(2m) elements (1 <= m <= 8).
    #[arg(long)]
    m: u32,
    /// Subfield F' = GF(2^h) of F; h must divide m.
    #[arg(long, default_value_t = 1)]
    h: u32,
    /// Defining polynomial of K in hex [default: smallest irreducible].
    #[arg(long)]
    modulus: Option<String>,
}

impl TowerArgs {
    fn build(&self) -> CliResult<FieldTower> {
        let modulus = self
            .modulus
            .as_deref()
            .map(kmarc::format::parse_hex_u32)
            .transpose()?;
        Ok(FieldTower::new(self.m, self.h, modulus)?)
    }
}

#[derive(Args, Clone)]
struct OutArg {
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ArcArg {
    /// Arc JSON file; `-` or absent reads standard input.
    #[arg(long)]
    arc: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tower description (modulus and distinguished element).
    Tower {
        #[command(flatten)]
        tower: TowerArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build an arc and print it as arc JSON.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check whether an arc is a KM-arc with nucleus 0.
    Verify(VerifyArgs),
    /// List the t-secants of a KM-arc and check their inverse sets.
    Secants {
        #[command(flatten)]
        arc: ArcArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check whether a set of field elements is a Vandermonde set.
    Vandermonde {
        #[command(flatten)]
        tower: TowerArgs,
        /// Comma-separated hex elements.
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Collineations of an arc.
    Autos {
        #[command(subcommand)]
        action: AutosAction,
    },
    /// Enumerate an exponent set for q = 2^m.
    Exponents {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// The recurrence-set arc of type q/r, scaled by 1/c.
    #[command(alias = "hr")]
    Recurrence {
        #[command(flatten)]
        tower: TowerArgs,
        /// Scaling element of the trace slice, hex.
        #[arg(long, default_value = "1")]
        c: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Lift of a subplane oval (type q/r) or hyperoval (type 2q/r); m/h odd.
    Lift {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, value_enum, default_value_t = SubArc::Oval)]
        from: SubArc,
        #[arg(long, default_value = "1")]
        c: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// The unit-circle oval of the subplane (claimed type 1 in the subplane).
    Oval {
        #[command(flatten)]
        tower: TowerArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// A translated conic of the subplane avoiding 0 (claimed type 2).
    Hyperoval {
        #[command(flatten)]
        tower: TowerArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// One of the worked examples of type q/2, q/4 or q/8.
    Example {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        name: ExampleArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// A seeded random star-set, optionally mutated.
    Random {
        #[command(flatten)]
        tower: TowerArgs,
        /// Type of the star-set (a proper divisor of q); ignored with `--base recurrence`.
        #[arg(long, default_value_t = 2)]
        t: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start from the recurrence-set arc scaled by a random unit instead.
        #[arg(long, value_enum, default_value_t = Base::Random)]
        base: Base,
        /// Number of points moved along their rays afterwards.
        #[arg(long, default_value_t = 0)]
        mutations: u32,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    arc: ArcArg,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    /// Threads for the direct census.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write the intersection histogram as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Subcommand)]
enum AutosAction {
    /// Build a named map, check that it stabilizes the arc and print its orbits.
    Check {
        #[command(flatten)]
        arc: ArcArg,
        #[arg(long, value_enum)]
        map: MapArg,
        /// First elation parameter.
        #[arg(long)]
        a: Option<String>,
        /// Parameter b [default: the recurrence parameter, or 0 for elations].
        #[arg(long)]
        b: Option<String>,
        /// dilation: element of F'* [default: smallest primitive].
        #[arg(long)]
        gamma: Option<String>,
        /// dilation: first trace parameter [default: smallest valid].
        #[arg(long)]
        s: Option<String>,
        /// dilation or involution: second parameter [default: smallest valid].
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Classify the arc by the elations with the given axis that stabilize it.
    Translation {
        #[command(flatten)]
        arc: ArcArg,
        /// Direction u of the axis L(u, mu).
        #[arg(long, default_value = "1")]
        axis_u: String,
        #[arg(long, default_value = "0")]
        axis_mu: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Order of the example's automorphism group modulo the trace-zero elations.
    Closure {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        example: ExampleArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Bracket,
    D,
    E,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    D,
    Dprime,
    E,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubArc {
    Oval,
    Hyperoval,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    Random,
    Recurrence,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    #[value(alias = "h2")]
    Half,
    #[value(alias = "h4")]
    Quarter,
    #[value(alias = "h8")]
    Eighth,
}

impl From<ExampleArg> for Example {
    fn from(e: ExampleArg) -> Self {
        match e {
            ExampleArg::Half => Example::Half,
            ExampleArg::Quarter => Example::Quarter,
            ExampleArg::Eighth => Example::Eighth,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    #[value(alias = "theta")]
    Rotation,
    #[value(alias = "psi")]
    Shear,
    #[value(alias = "rho")]
    Dilation,
    Elation,
    #[value(alias = "sigma")]
    TwistedSquaring,
    Conjugation,
    #[value(alias = "tau")]
    ShiftedConjugation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a check came out negative.
fn run(command: Command) -> CliResult<bool> {
    match command {
        Command::Tower { tower, out } => {
            let t = tower.build()?;
            emit(&out, &serde_json::to_value(TowerJson::from_tower(&t))?)?;
            Ok(true)
        }
        Command::Construct { kind } => construct(kind),
        Command::Verify(args) => verify(args),
        Command::Secants { arc, out } => secants(&read_arc(&arc)?, &out),
        Command::Vandermonde { tower, points, out } => {
            let t = tower.build()?;
            let xs = points
                .iter()
                .map(|s| parse_hex(&t, s))
                .collect::<CliResult<Vec<_>>>()?;
            let ok = is_vandermonde(&t, &xs)?;
            emit(&out, &json!({ "size": xs.len(), "vandermonde": ok }))?;
            Ok(ok)
        }
        Command::Autos { action } => autos(action),
        Command::Exponents { kind, m, out } => {
            let (kind, name) = match kind {
                KindArg::D => (ExponentKind::D, "D"),
                KindArg::Dprime => (ExponentKind::Dprime, "Dprime"),
                KindArg::E => (ExponentKind::E, "E"),
            };
            let set = gen_exponents(kind, m)?;
            emit(&out, &json!({ "kind": name, "m": m, "values": set.values }))?;
            Ok(true)
        }
    }
}

fn emit(out: &OutArg, value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match &out.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_arc(arg: &ArcArg) -> CliResult<ArcFile> {
    let text = match arg.arc.as_deref() {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| CliError::io(p.display().to_string(), e))?
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::io("<stdin>", e))?;
            s
        }
    };
    ArcFile::parse(&text)
}

fn provenance(
    construction: &str,
    tower: &FieldTower,
    c: Option<FieldElement>,
) -> CliResult<Provenance> {
    let u_gen = recurrence_set(tower)?.u_gen;
    Ok(Provenance {
        construction: construction.to_string(),
        h: tower.h(),
        c_hex: c.map(|c| to_hex(tower, c)),
        u_gen_hex: Some(to_hex(tower, u_gen)),
        seed: None,
    })
}

fn construct(kind: ConstructKind) -> CliResult<bool> {
    let (file, out) = match kind {
        ConstructKind::Recurrence { tower, c, out } => {
            let t = tower.build()?;
            let c = parse_hex(&t, &c)?;
            let set = recurrence_arc(&t, c)?;
            let claimed = t.q() / t.r();
            let prov = provenance("recurrence", &t, Some(c))?;
            (ArcFile::new(t, set, claimed, Some(prov)), out)
        }
        ConstructKind::Lift {
            tower,
            from,
            c,
            out,
        } => {
            let t = tower.build()?;
            let c = parse_hex(&t, &c)?;
            let (sub, s, name) = match from {
                SubArc::Oval => (subplane_oval(&t)?, 1, "lift_oval"),
                SubArc::Hyperoval => (subplane_hyperoval(&t)?, 2, "lift_hyperoval"),
            };
            let set = lift_construction(&t, &sub, s, c)?;
            let claimed = s * t.q() / t.r();
            let prov = Provenance {
                u_gen_hex: None,
                ..provenance(name, &t, Some(c))?
            };
            (ArcFile::new(t, set, claimed, Some(prov)), out)
        }
        ConstructKind::Oval { tower, out } => {
            let t = tower.build()?;
            let set = subplane_oval(&t)?;
            let prov = Provenance {
                u_gen_hex: None,
                ..provenance("subplane_oval", &t, None)?
            };
            (ArcFile::new(t, set, 1, Some(prov)), out)
        }
        ConstructKind::Hyperoval { tower, out } => {
            let t = tower.build()?;
            let set = subplane_hyperoval(&t)?;
            let prov = Provenance {
                u_gen_hex: None,
                ..provenance("subplane_hyperoval", &t, None)?
            };
            (ArcFile::new(t, set, 2, Some(prov)), out)
        }
        ConstructKind::Example { m, name, out } => {
            let base = FieldTower::new(m, 1, None)?;
            let f = example_fixture(&base, name.into())?;
            let claimed = f.tower.q() / f.tower.r();
            let label = match name {
                ExampleArg::Half => "example_half",
                ExampleArg::Quarter => "example_quarter",
                ExampleArg::Eighth => "example_eighth",
            };
            let prov = provenance(label, &f.tower, Some(FieldElement::ONE))?;
            (ArcFile::new(f.tower, f.arc, claimed, Some(prov)), out)
        }
        ConstructKind::Random {
            tower,
            t,
            seed,
            base,
            mutations,
            out,
        } => {
            let tw = tower.build()?;
            let mut rng = seeded(seed);
            let (mut set, claimed) = match base {
                Base::Random => (random_star_set(&tw, t, &mut rng)?, t),
                Base::Recurrence => {
                    let recurrence = recurrence_arc(&tw, FieldElement::ONE)?;
                    (random_scaling(&tw, &recurrence, &mut rng)?, tw.q() / tw.r())
                }
            };
            for _ in 0..mutations {
                set = move_along_ray(&tw, &set, &mut rng)?;
            }
            let prov = Provenance {
                construction: "random".into(),
                h: tw.h(),
                c_hex: None,
                u_gen_hex: None,
                seed: Some(seed),
            };
            (ArcFile::new(tw, set, claimed, Some(prov)), out)
        }
    };
    emit(&out, &serde_json::to_value(file.to_json())?)?;
    Ok(true)
}

fn verify(args: VerifyArgs) -> CliResult<bool> {
    let arc = read_arc(&args.arc)?;
    let tower = &arc.tower;
    let mut doc = serde_json::Map::new();
    let mut verdicts = Vec::new();

    if matches!(args.method, Method::Direct | Method::All) {
        let report = verify_direct_jobs(tower, &arc.set, arc.claimed_t, args.jobs)?;
        if let Some(path) = &args.svg {
            let title = format!(
                "intersection sizes, q = {}, t = {}",
                tower.q(),
                arc.claimed_t
            );
            fs::write(path, histogram_svg(&title, &report.histogram))
                .map_err(|e| CliError::io(path.display().to_string(), e))?;
        }
        verdicts.push(report.is_km_arc());
        doc.insert(
            "direct".into(),
            serde_json::to_value(ReportJson::from_report(tower, &report))?,
        );
    }
    if matches!(args.method, Method::Bracket | Method::All) {
        let c = match verify_bracket(tower, &arc.set) {
            Ok(o) => CriterionJson::from_outcome(
                &o,
                |&(v, k)| json!({ "v_hex": to_hex(tower, v), "k": k }),
            ),
            Err(e) => CriterionJson::not_applicable(&e),
        };
        verdicts.push(c.holds);
        doc.insert("bracket".into(), serde_json::to_value(c)?);
    }
    for (kind, key) in [(ExponentKind::D, "d"), (ExponentKind::E, "e")] {
        let wanted = matches!(
            (args.method, kind),
            (Method::All, _) | (Method::D, ExponentKind::D) | (Method::E, ExponentKind::E)
        );
        if wanted {
            let c = match verify_power_sums(tower, &arc.set, kind) {
                Ok(o) => CriterionJson::from_outcome(&o, |&d| json!({ "exponent": d })),
                Err(e) => CriterionJson::not_applicable(&e),
            };
            verdicts.push(c.holds);
            doc.insert(key.into(), serde_json::to_value(c)?);
        }
    }

    let all = verdicts.iter().all(|&v| v);
    doc.insert(
        "agree".into(),
        json!(verdicts.iter().all(|&v| v == verdicts[0])),
    );
    doc.insert("is_km_arc".into(), json!(all));
    emit(&args.out, &Value::Object(doc))?;
    Ok(all)
}

fn secants(arc: &ArcFile, out: &OutArg) -> CliResult<bool> {
    let tower = &arc.tower;
    let lines = match t_secants(tower, &arc.set, arc.claimed_t) {
        Ok(lines) => lines,
        Err(kmarc_core::Error::NotKmArc) => {
            emit(
                out,
                &json!({ "t": arc.claimed_t, "error": "not a KM-arc with nucleus 0" }),
            )?;
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let mut all = true;
    let mut rows = Vec::new();
    for line in &lines {
        let pts = secant_points(tower, &arc.set, line);
        let inverses = pts
            .iter()
            .map(|&y| tower.inv(y))
            .collect::<Result<Vec<_>, _>>()?;
        let vdm = if arc.claimed_t >= 3 {
            Some(is_vandermonde(tower, &inverses)?)
        } else {
            None
        };
        all &= vdm.unwrap_or(true);
        rows.push(json!({
            "line": LineJson::from_line(tower, line),
            "points": pts.iter().map(|&y| to_hex(tower, y)).collect::<Vec<_>>(),
            "inverse_vandermonde": vdm,
        }));
    }
    emit(
        out,
        &json!({ "t": arc.claimed_t, "secants": rows, "all_vandermonde": all }),
    )?;
    Ok(all)
}

fn opt_hex(tower: &FieldTower, s: &Option<String>) -> CliResult<Option<FieldElement>> {
    s.as_deref().map(|s| parse_hex(tower, s)).transpose()
}

fn autos(action: AutosAction) -> CliResult<bool> {
    match action {
        AutosAction::Check {
            arc,
            map,
            a,
            b,
            gamma,
            s,
            t,
            out,
        } => {
            let arc = read_arc(&arc)?;
            let tower = &arc.tower;
            let z = FieldElement::ZERO;
            let rec_b = || recurrence_set(tower).map(|r| r.b);
            let b_or_rec = |b: Option<FieldElement>| b.map_or_else(rec_b, Ok);
            let (a, b, gamma, s, t) = (
                opt_hex(tower, &a)?,
                opt_hex(tower, &b)?,
                opt_hex(tower, &gamma)?,
                opt_hex(tower, &s)?,
                opt_hex(tower, &t)?,
            );
            let spec = match map {
                MapArg::Rotation => MapSpec::Rotation { b: b_or_rec(b)? },
                MapArg::Shear => MapSpec::Shear { b: b_or_rec(b)? },
                MapArg::TwistedSquaring => MapSpec::TwistedSquaring { b: b_or_rec(b)? },
                MapArg::Elation => MapSpec::Elation {
                    a: a.unwrap_or(z),
                    b: b.unwrap_or(z),
                },
                MapArg::Conjugation => MapSpec::Conjugation,
                MapArg::ShiftedConjugation => MapSpec::ShiftedConjugation {
                    t: t.map_or_else(|| smallest_with_trace(tower, rec_b()?), Ok)?,
                },
                MapArg::Dilation => {
                    let gamma = gamma.unwrap_or_else(|| primitive_sub_element(tower));
                    let MapSpec::Dilation { s: s0, t: t0, .. } = dilation_spec(tower, gamma)?
                    else {
                        unreachable!()
                    };
                    MapSpec::Dilation {
                        gamma,
                        s: s.unwrap_or(s0),
                        t: t.unwrap_or(t0),
                    }
                }
            };
            let named = make_named(tower, spec)?;
            let order = map_order(tower, &named.map, DEFAULT_CAP)?;
            let outcome = stabilizes(tower, &named.map, &arc.set);
            let mut doc = json!({
                "map": spec_params(tower, &spec),
                "collineation": CollineationJson::from_collineation(tower, &named.map),
                "order": order,
                "stabilizes": outcome.holds(),
            });
            match outcome {
                Outcome::Holds => {
                    let pts: Vec<ProjPoint> = arc
                        .set
                        .points()
                        .iter()
                        .map(|&x| ProjPoint::Affine(x))
                        .collect();
                    let orbits = point_orbits(tower, &[named.map], &pts)?;
                    doc["orbits"] = json!(orbits
                        .iter()
                        .map(|o| o.iter().map(|p| point_hex(tower, p)).collect::<Vec<_>>())
                        .collect::<Vec<_>>());
                }
                Outcome::Fails(x) => doc["witness"] = json!(to_hex(tower, x)),
            }
            emit(&out, &doc)?;
            Ok(outcome.holds())
        }
        AutosAction::Translation {
            arc,
            axis_u,
            axis_mu,
            out,
        } => {
            let arc = read_arc(&arc)?;
            let tower = &arc.tower;
            let axis = Line::Affine {
                u: parse_hex(tower, &axis_u)?,
                mu: parse_hex(tower, &axis_mu)?,
            };
            let report = verify_translation_arc(tower, &arc.set, arc.claimed_t, &axis)?;
            let class = match report.class {
                TranslationClass::Translation => "translation",
                TranslationClass::ElationOnly => "elation_only",
                TranslationClass::Neither => "neither",
            };
            emit(
                &out,
                &json!({
                    "axis": LineJson::from_line(tower, &axis),
                    "class": class,
                    "stabilizer_order": report.stabilizer.len(),
                }),
            )?;
            Ok(report.class == TranslationClass::Translation)
        }
        AutosAction::Closure {
            m,
            example,
            cap,
            out,
        } => {
            let f = example_fixture(&FieldTower::new(m, 1, None)?, example.into())?;
            let involution = example_involution(&f)?;
            let q = example_quotient_order(&f, cap)?;
            emit(
                &out,
                &json!({
                    "m": m,
                    "h": f.tower.h(),
                    "involution": spec_params(&f.tower, &involution),
                    "group_order": q.group,
                    "normal_order": q.normal,
                    "quotient_order": q.quotient,
                }),
            )?;
            Ok(true)
        }
    }
}

fn point_hex(tower: &FieldTower, p: &ProjPoint) -> String {
    match p {
        ProjPoint::Affine(x) => to_hex(tower, *x),
        ProjPoint::Infinite(u) => format!("inf:{}", to_hex(tower, *u)),
    }
}

fn spec_params(tower: &FieldTower, spec: &MapSpec) -> Value {
    let h = |x: &FieldElement| to_hex(tower, *x);
    match spec {
        MapSpec::Rotation { b } => json!({ "name": "rotation", "b_hex": h(b) }),
        MapSpec::TwistedSquaring { b } => json!({ "name": "twisted_squaring", "b_hex": h(b) }),
        MapSpec::Elation { a, b } => json!({ "name": "elation", "a_hex": h(a), "b_hex": h(b) }),
        MapSpec::Shear { b } => json!({ "name": "shear", "b_hex": h(b) }),
        MapSpec::Dilation { gamma, s, t } => {
            json!({ "name": "dilation", "gamma_hex": h(gamma), "s_hex": h(s), "t_hex": h(t) })
        }
        MapSpec::Conjugation => json!({ "name": "conjugation" }),
        MapSpec::ShiftedConjugation { t } => {
            json!({ "name": "shifted_conjugation", "t_hex": h(t) })
        }
    }
}
