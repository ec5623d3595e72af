use std::fmt;
use std::fs;
use std::io::{ErrorKind, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use musical_icosahedron::assignment::TypeLibrary;
use musical_icosahedron::diagrams::{
    dodecagon_svg, permutation_circle_svg, projection_svg, projection_svg_with_pairs,
    write_raga_gallery, RagaType,
};
use musical_icosahedron::extension::extend_union;
use musical_icosahedron::permutations::{
    classify_inter_family, classify_intra_family, inter_family, intra_family,
};
use musical_icosahedron::report::Report;
use musical_icosahedron::solver::{
    load_constraints, load_gauge, modulo_automorphism, search_assignments, Gauge,
};
use musical_icosahedron::tones::{
    catalog, catalog_keys, melakarta_catalog, melakarta_for_set, Scale,
};
use musical_icosahedron::verify::{all_passed, verify_all, Section};
use musical_icosahedron::{canonical_graph, neighboring_number, InterMask, MusicalIcosahedron};
use serde_json::json;

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(args: fmt::Arguments) {
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

macro_rules! outln {
    () => { emit(format_args!("\n")) };
    ($($arg:tt)*) => { emit(format_args!("{}\n", format_args!($($arg)*))) };
}

#[derive(Parser)]
#[command(
    name = "icosa",
    version,
    about = "Musical icosahedra: verification, enumeration and diagrams"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Print CSV where a table is produced.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,

    /// Directory of assignment files; a file labelled like a built-in type
    /// replaces it.
    #[arg(long, global = true, value_name = "DIR")]
    types_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every reference number and report pass/fail.
    Verify {
        #[arg(value_enum, default_value_t = Target::All)]
        target: Target,
        #[command(flatten)]
        base: BaseArg,
    },
    /// List the members of a permutation family.
    Enumerate {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        base: BaseArg,
        /// Print the classification table instead of the members.
        #[arg(long)]
        classes: bool,
    },
    /// Permutation-extension of a scale by a set of types.
    Extend {
        /// Catalog key or comma-separated tones.
        #[arg(long, default_value = "c_major")]
        scale: String,
        /// Comma-separated type names.
        #[arg(long, value_delimiter = ',', default_value = "RA,RB,RC,RD")]
        types: Vec<String>,
    },
    /// Find all assignments meeting neighboring-number constraints.
    Solve {
        /// JSON list of `{"scale": ..., "required": n}`.
        #[arg(long, value_name = "FILE")]
        constraints: PathBuf,
        /// JSON object pinning tones to vertices, e.g. `{"C": "h0"}`.
        #[arg(long, value_name = "FILE")]
        gauge: Option<PathBuf>,
        /// Keep one representative per automorphism class.
        #[arg(long)]
        canonical: bool,
    },
    /// Render an SVG diagram.
    Diagram {
        #[arg(value_enum)]
        kind: DiagramKind,
        /// Output file; a directory for the raga gallery.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        base: BaseArg,
        /// Inter-permutation slots applied first, e.g. `0,2`.
        #[arg(long, default_value = "")]
        mask: String,
        /// Outline the six swap slots (projection).
        #[arg(long)]
        pairs: bool,
        /// Scale whose neighbor pairs become chords (dodecagon); defaults
        /// to the chain scale of the base.
        #[arg(long)]
        chain: Option<String>,
        /// Melakarta type A, B, C or D (circles).
        #[arg(long = "type", default_value = "A")]
        raga_type: String,
    },
    /// Print built-in data.
    Catalog {
        #[arg(value_enum)]
        what: CatalogKind,
    },
}

#[derive(Args)]
struct BaseArg {
    /// Type name or assignment file.
    #[arg(long, default_value = "type1")]
    base: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    All,
    Type1,
    Inter,
    Intra,
    Raga,
    Solver,
    Diagrams,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Inter,
    Intra,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramKind {
    Projection,
    Dodecagon,
    Circles,
    RagaGallery,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogKind {
    Melakarta,
    Scales,
    Graph,
    Types,
}

enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let mut library = TypeLibrary::new();
    if let Some(dir) = &cli.types_dir {
        library
            .load_dir(dir)
            .with_context(|| format!("--types-dir {}", dir.display()))?;
    }
    match &cli.command {
        Command::Verify { target, base } => {
            let base = resolve_base(&library, &base.base)?;
            verify(cli, *target, &base)
        }
        Command::Enumerate {
            family,
            base,
            classes,
        } => {
            let base = resolve_base(&library, &base.base)?;
            enumerate(cli, *family, &base, *classes)
        }
        Command::Extend { scale, types } => extend(cli, &library, scale, types),
        Command::Solve {
            constraints,
            gauge,
            canonical,
        } => solve(cli, constraints, gauge.as_deref(), *canonical),
        Command::Diagram {
            kind,
            out,
            base,
            mask,
            pairs,
            chain,
            raga_type,
        } => {
            let mask: InterMask = mask.parse().context("--mask")?;
            let opts = DiagramOpts {
                out: out.as_deref(),
                mask,
                pairs: *pairs,
                chain: chain.as_deref(),
                raga_type,
            };
            diagram(cli, &library, *kind, &base.base, &opts)
        }
        Command::Catalog { what } => catalog_cmd(cli, &library, *what),
    }
}

/// A type name, or failing that, an assignment file.
fn resolve_base(library: &TypeLibrary, name: &str) -> anyhow::Result<MusicalIcosahedron> {
    if let Ok(x) = library.get(name) {
        return Ok(x);
    }
    let path = Path::new(name);
    if path.exists() {
        let x = MusicalIcosahedron::load(path).with_context(|| format!("--base {name}"))?;
        let label = x
            .label()
            .map(str::to_string)
            .unwrap_or_else(|| name.to_string());
        return Ok(x.with_label(label));
    }
    bail!("--base: `{name}` is neither a known type nor a readable file")
}

fn parse_scale(text: &str) -> anyhow::Result<Scale> {
    if let Ok(s) = catalog(text) {
        return Ok(s);
    }
    let names: Vec<&str> = text.split(',').map(str::trim).collect();
    Scale::parse(&names).with_context(|| format!("scale `{text}`"))
}

fn emit_json(value: &serde_json::Value) {
    outln!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn verify(cli: &Cli, target: Target, base: &MusicalIcosahedron) -> anyhow::Result<Outcome> {
    let reports: Vec<Report> = match target {
        Target::All => verify_all(base),
        Target::Type1 => vec![Section::Type1.run(base)],
        Target::Inter => vec![Section::Inter.run(base)],
        Target::Intra => vec![Section::Intra.run(base)],
        Target::Raga => vec![Section::Raga.run(base)],
        Target::Solver => vec![Section::Solver.run(base)],
        Target::Diagrams => vec![Section::Diagrams.run(base)],
    };
    let passed = all_passed(&reports);
    if cli.json {
        emit_json(&json!({ "passed": passed, "reports": reports }));
    } else {
        for r in &reports {
            outln!("{r}\n");
        }
        let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
        outln!(
            "{}",
            if passed {
                "all checks passed".to_string()
            } else {
                format!("failed checks: {failed}")
            }
        );
    }
    Ok(if passed { Outcome::Ok } else { Outcome::Failed })
}

fn tones_json(x: &MusicalIcosahedron) -> serde_json::Value {
    json!(x.to_file().tones)
}

fn enumerate(
    cli: &Cli,
    family: Family,
    base: &MusicalIcosahedron,
    classes: bool,
) -> anyhow::Result<Outcome> {
    if classes {
        let table = match family {
            Family::Inter => classify_inter_family(base).table(),
            Family::Intra => classify_intra_family(base).table(),
        };
        if cli.json {
            outln!("{}", table.to_json());
        } else {
            out!("{}", table.to_csv());
        }
        return Ok(Outcome::Ok);
    }

    match family {
        Family::Inter => {
            let (c, h, s) = (
                base.induced_chain_scale(),
                base.induced_hexagon_scale(),
                base.induced_star_scale(),
            );
            let rows: Vec<_> = inter_family(base)
                .into_iter()
                .map(|m| {
                    let n = [
                        neighboring_number(&c, &m.assignment),
                        neighboring_number(&h, &m.assignment),
                        neighboring_number(&s, &m.assignment),
                    ];
                    (m, n)
                })
                .collect();
            if cli.json {
                let records: Vec<_> = rows
                    .iter()
                    .map(|(m, n)| {
                        json!({
                            "mask": m.mask.to_string(),
                            "swaps": m.mask.count(),
                            "intermediate": m.intermediate,
                            "n_chain": n[0],
                            "n_hexagon": n[1],
                            "n_star": n[2],
                            "tones": tones_json(&m.assignment),
                        })
                    })
                    .collect();
                emit_json(&json!(records));
            } else {
                outln!("mask,swaps,intermediate,N(chain),N(hexagon),N(star)");
                for (m, n) in &rows {
                    outln!(
                        "\"{}\",{},{},{},{},{}",
                        m.mask,
                        m.mask.count(),
                        m.intermediate,
                        n[0],
                        n[1],
                        n[2]
                    );
                }
            }
        }
        Family::Intra => {
            let (chromatic, fifths) = (catalog("chromatic")?, catalog("pythagorean")?);
            let rows: Vec<_> = intra_family(base)
                .into_iter()
                .map(|m| {
                    let n = [
                        neighboring_number(&chromatic, &m.assignment),
                        neighboring_number(&fifths, &m.assignment),
                    ];
                    (m, n)
                })
                .collect();
            if cli.json {
                let records: Vec<_> = rows
                    .iter()
                    .map(|(m, n)| {
                        json!({
                            "permutation": m.permutation.to_string(),
                            "signature": m.signature.as_ref().map(ToString::to_string),
                            "intermediate": m.intermediate,
                            "n_chromatic": n[0],
                            "n_pythagorean": n[1],
                            "tones": tones_json(&m.assignment),
                        })
                    })
                    .collect();
                emit_json(&json!(records));
            } else {
                outln!("signature,intermediate,N(chromatic),N(pythagorean),permutation");
                for (m, n) in &rows {
                    let sig = m
                        .signature
                        .as_ref()
                        .map(ToString::to_string)
                        .unwrap_or_default();
                    outln!(
                        "\"{sig}\",{},{},{},\"{}\"",
                        m.intermediate,
                        n[0],
                        n[1],
                        m.permutation
                    );
                }
            }
        }
    }
    Ok(Outcome::Ok)
}

fn extend(
    cli: &Cli,
    library: &TypeLibrary,
    scale: &str,
    types: &[String],
) -> anyhow::Result<Outcome> {
    let scale = parse_scale(scale).context("--scale")?;
    let bases = types
        .iter()
        .map(|t| library.get(t).with_context(|| format!("--types: `{t}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let result = extend_union(&scale, &bases);
    let rows: Vec<_> = result
        .entries()
        .map(|(set, prov)| (set, melakarta_for_set(set), prov))
        .collect();
    if cli.json {
        let records: Vec<_> = rows
            .iter()
            .map(|(set, raga, prov)| {
                json!({
                    "tones": set.iter().map(|t| t.name()).collect::<Vec<_>>(),
                    "raga_index": raga.map(|r| r.index),
                    "raga_name": raga.map(|r| r.name.clone()),
                    "witnesses": prov,
                })
            })
            .collect();
        emit_json(&json!({ "size": result.len(), "scales": records }));
    } else if cli.csv {
        outln!("tones,raga_index,raga_name,witnesses");
        for (set, raga, prov) in &rows {
            let w: Vec<String> = prov
                .iter()
                .map(|p| format!("{} {}", p.base, p.mask))
                .collect();
            outln!(
                "\"{}\",{},{},\"{}\"",
                set.iter().map(|t| t.name()).collect::<Vec<_>>().join(" "),
                raga.map(|r| r.index.to_string()).unwrap_or_default(),
                raga.map(|r| r.name.as_str()).unwrap_or_default(),
                w.join("; ")
            );
        }
    } else {
        outln!(
            "extension of [{scale}] by {}: {} scales",
            types.join(", "),
            result.len()
        );
        for (set, raga, prov) in &rows {
            let w: Vec<String> = prov
                .iter()
                .map(|p| format!("{} {}", p.base, p.mask))
                .collect();
            let name = raga.map_or("-".to_string(), |r| format!("{:>2} {}", r.index, r.name));
            outln!("{:<28} {:<24} {}", set.to_string(), name, w.join("; "));
        }
    }
    Ok(Outcome::Ok)
}

fn solve(
    cli: &Cli,
    constraints: &Path,
    gauge: Option<&Path>,
    canonical: bool,
) -> anyhow::Result<Outcome> {
    let constraints = load_constraints(constraints).context("--constraints")?;
    let gauge = match gauge {
        Some(path) => load_gauge(path).context("--gauge")?,
        None => Gauge::none(),
    };
    let mut solutions = search_assignments(&constraints, &gauge)?;
    if canonical {
        solutions = modulo_automorphism(&solutions);
    }
    if cli.json {
        let records: Vec<_> = solutions.iter().map(|x| x.to_file()).collect();
        emit_json(&json!({ "count": solutions.len(), "solutions": records }));
    } else {
        outln!("{} solutions", solutions.len());
        for x in &solutions {
            outln!("{x}");
        }
    }
    Ok(Outcome::Ok)
}

struct DiagramOpts<'a> {
    out: Option<&'a Path>,
    mask: InterMask,
    pairs: bool,
    chain: Option<&'a str>,
    raga_type: &'a str,
}

fn write_svg(out: Option<&Path>, svg: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, svg).with_context(|| format!("--out {}", path.display())),
        None => {
            out!("{svg}");
            Ok(())
        }
    }
}

fn diagram(
    cli: &Cli,
    library: &TypeLibrary,
    kind: DiagramKind,
    base: &str,
    opts: &DiagramOpts,
) -> anyhow::Result<Outcome> {
    match kind {
        DiagramKind::Projection => {
            let x = resolve_base(library, base)?.apply_inter(opts.mask);
            let svg = if opts.pairs {
                projection_svg_with_pairs(&x, opts.mask)
            } else {
                projection_svg(&x)
            };
            write_svg(opts.out, &svg)?;
        }
        DiagramKind::Dodecagon => {
            let base = resolve_base(library, base)?;
            let chain = match opts.chain {
                Some(text) => parse_scale(text).context("--chain")?,
                None => base.induced_chain_scale(),
            };
            let x = base.apply_inter(opts.mask);
            write_svg(opts.out, &dodecagon_svg(&x, &chain))?;
        }
        DiagramKind::Circles => {
            let n: RagaType = opts.raga_type.parse().context("--type")?;
            let x = n.assignment().apply_inter(opts.mask);
            let d = permutation_circle_svg(n, &x)?;
            write_svg(opts.out, &d.svg)?;
            if opts.out.is_some() {
                if cli.json {
                    emit_json(&json!(d));
                } else {
                    outln!(
                        "{n} {}: {} full, {} half, {} quarter circles colored; count {}",
                        opts.mask,
                        d.full_circles,
                        d.half_circles,
                        d.quarter_circles,
                        d.count
                    );
                }
            }
        }
        DiagramKind::RagaGallery => {
            let Some(dir) = opts.out else {
                bail!("--out <DIR> is required for the raga gallery");
            };
            let written =
                write_raga_gallery(dir).with_context(|| format!("--out {}", dir.display()))?;
            outln!("wrote {} diagrams to {}", written.len(), dir.display());
        }
    }
    Ok(Outcome::Ok)
}

fn catalog_cmd(cli: &Cli, library: &TypeLibrary, what: CatalogKind) -> anyhow::Result<Outcome> {
    match what {
        CatalogKind::Melakarta => {
            let ragas = melakarta_catalog();
            if cli.json {
                emit_json(&json!(ragas));
            } else {
                if cli.csv {
                    outln!("index,name,tones");
                }
                for r in ragas {
                    if cli.csv {
                        outln!("{},{},\"{}\"", r.index, r.name, r.tones);
                    } else {
                        outln!("{:>2}  {:<20} {}", r.index, r.name, r.tones);
                    }
                }
            }
        }
        CatalogKind::Scales => {
            let scales: Vec<(&str, Scale)> = catalog_keys()
                .map(|k| Ok((k, catalog(k)?)))
                .collect::<anyhow::Result<_>>()?;
            if cli.json {
                let map: serde_json::Map<String, serde_json::Value> = scales
                    .iter()
                    .map(|(k, s)| (k.to_string(), json!(s)))
                    .collect();
                emit_json(&serde_json::Value::Object(map));
            } else {
                for (k, s) in &scales {
                    outln!("{k:<14} {s}");
                }
            }
        }
        CatalogKind::Graph => {
            let export = canonical_graph().export();
            if cli.json {
                emit_json(&json!(export));
            } else {
                for (a, b) in canonical_graph().edges() {
                    outln!("{a} {b}");
                }
            }
        }
        CatalogKind::Types => {
            for name in library.names() {
                let x = library.get(&name)?;
                if cli.json {
                    outln!(
                        "{}",
                        serde_json::to_string(&json!({ "name": name, "tones": tones_json(&x) }))?
                    );
                } else {
                    outln!("{x}");
                }
            }
        }
    }
    Ok(Outcome::Ok)
}
