use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polyvol::descent::{descend_with, DescentOptions, DescentStats};
use polyvol::exact::{decimal, RatRepr};
use polyvol::polytope::input::parse_input;
use polyvol::polytope::{
    dual_convert_seeded, ConstraintSystem, HomogenizedPolytope, PolytopeInput,
};
use polyvol::special::{oracle_volume_by_triangulation, recognize, special_volume, ShapeKind};
use polyvol::voting::{self, EventVolume, ProbabilityReport, Query, Rule};
use polyvol::{Error, Rat};

#[derive(Parser)]
#[command(
    name = "polyvol",
    version,
    about = "Exact volumes of rational polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of the polytope described in a file.
    Volume {
        /// Constraint or vertex description
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Print descent statistics.
        #[arg(long)]
        stats: bool,
        /// Report the volume of the polytope without grading-denominator scaling.
        #[arg(long)]
        raw_cone_volume: bool,
    },
    /// Probability of a social-choice event under impartial anonymous culture.
    Vote {
        #[arg(long, default_value_t = 4)]
        candidates: usize,
        #[arg(long, value_enum)]
        event: EventArg,
        /// Candidate letter in the role of A.
        #[arg(long, default_value = "A")]
        winner: char,
        #[arg(long, value_enum, default_value_t = RuleArg::Pr)]
        rule: RuleArg,
        /// Borda place of A for `other-paradox-place`.
        #[arg(long, default_value_t = 1)]
        place: usize,
        /// Table cell `i,j` for `elimination-cell`.
        #[arg(long, value_parser = parse_cell)]
        cell: Option<(usize, usize)>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Backend::Descent)]
    backend: Backend,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Decimal places of approximations.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    precision: u32,
    /// Machine-readable output with exact rationals as strings
    #[arg(long)]
    json: bool,
    /// Seed of the randomized lattice saturation
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Descent,
    Oracle,
    SpecialAuto,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Pr,
    Npr,
    Borda,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Pr => Rule::Plurality,
            RuleArg::Npr => Rule::NegativePlurality,
            RuleArg::Borda => Rule::Borda,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EventArg {
    FourRules,
    CondorcetWinner,
    CondorcetPlurality,
    OtherParadox,
    OtherParadoxPlace,
    StrongBorda,
    ReverseStrongBorda,
    Elimination,
    EliminationEfficiency,
    EliminationCell,
    EliminationTable,
}

fn parse_cell(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected `i,j`")?;
    let i = i.trim().parse().map_err(|_| format!("bad row `{i}`"))?;
    let j = j.trim().parse().map_err(|_| format!("bad column `{j}`"))?;
    Ok((i, j))
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 2,
            Error::Empty => 3,
            Error::OracleBound { .. } => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Volume {
            file,
            run,
            stats,
            raw_cone_volume,
        } => run_volume(&file, &run, stats, raw_cone_volume),
        Command::Vote {
            candidates,
            event,
            winner,
            rule,
            place,
            cell,
            run,
        } => run_vote(candidates, event, winner, rule.into(), place, cell, &run),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

#[derive(Serialize)]
struct StatsJson {
    total_faces: u64,
    det_count: u64,
    simplex_decomp_count: String,
    layer_sizes: Vec<u64>,
}

impl From<&DescentStats> for StatsJson {
    fn from(s: &DescentStats) -> Self {
        Self {
            total_faces: s.total_faces,
            det_count: s.det_count,
            simplex_decomp_count: s.simplex_decomp_count.to_string(),
            layer_sizes: s.layer_sizes.clone(),
        }
    }
}

#[derive(Serialize)]
struct VolumeJson {
    backend: &'static str,
    lattice_volume: RatRepr,
    grading_scaled: bool,
    euclidean_volume: String,
    grading_denominator: String,
    dim: i64,
    full_dimensional: bool,
    vertices: usize,
    support_hyperplanes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<StatsJson>,
}

fn run_volume(file: &PathBuf, run: &RunArgs, want_stats: bool, raw: bool) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", file.display()),
    })?;
    let input = parse_input(&text)?;
    let digits = run.precision as usize;
    let p = match dual_convert_seeded(&input, run.seed) {
        Ok(p) => p,
        Err(Error::Empty) => {
            let report = VolumeJson {
                backend: backend_name(run.backend),
                lattice_volume: RatRepr::from(&Rat::from_integer(0.into())),
                grading_scaled: !raw,
                euclidean_volume: decimal(&Rat::from_integer(0.into()), digits),
                grading_denominator: "1".into(),
                dim: -1,
                full_dimensional: false,
                vertices: 0,
                support_hyperplanes: 0,
                shape: None,
                stats: None,
            };
            emit_volume(&report, run.json);
            return Err(Failure {
                code: 3,
                message: String::new(),
            });
        }
        Err(e) => return Err(e.into()),
    };
    let k = p.grading_denominator();
    let mut stats = None;
    let mut shape = None;
    let lattice = match run.backend {
        Backend::Descent => descent(&p, run, want_stats, &mut stats)?,
        Backend::Oracle => {
            let order: Vec<usize> = (0..p.num_vertices()).collect();
            oracle_volume_by_triangulation(&p, &order)?
        }
        Backend::SpecialAuto => {
            let s = recognize(&p);
            if s.kind == ShapeKind::None {
                descent(&p, run, want_stats, &mut stats)?
            } else {
                shape = Some(shape_name(s.kind));
                special_volume(&p, &s)?
            }
        }
    };
    let reported = if raw {
        &lattice / Rat::from_integer(k.clone())
    } else {
        lattice.clone()
    };
    let report = VolumeJson {
        backend: backend_name(run.backend),
        lattice_volume: RatRepr::from(&reported),
        grading_scaled: !raw,
        euclidean_volume: p.euclidean_volume(&lattice, digits),
        grading_denominator: k.to_string(),
        dim: p.dim as i64,
        full_dimensional: p.dim + 1 == p.ambient_dim,
        vertices: p.num_vertices(),
        support_hyperplanes: p.num_facets(),
        shape,
        stats,
    };
    emit_volume(&report, run.json);
    Ok(())
}

fn descent(
    p: &HomogenizedPolytope,
    run: &RunArgs,
    want_stats: bool,
    stats: &mut Option<StatsJson>,
) -> Result<Rat, Error> {
    let options = DescentOptions {
        threads: run.threads,
        trace: false,
    };
    let r = descend_with(p, &options)?;
    if want_stats {
        *stats = Some(StatsJson::from(&r.stats));
    }
    Ok(r.lattice_volume)
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Descent => "descent",
        Backend::Oracle => "oracle",
        Backend::SpecialAuto => "special-auto",
    }
}

fn shape_name(k: ShapeKind) -> &'static str {
    match k {
        ShapeKind::Parallelotope => "parallelotope",
        ShapeKind::CrossPolytope => "cross-polytope",
        ShapeKind::Simplex => "simplex",
        ShapeKind::None => "none",
    }
}

fn show(r: &RatRepr) -> String {
    if r.den == "1" {
        r.num.clone()
    } else {
        format!("{}/{}", r.num, r.den)
    }
}

fn emit_volume(r: &VolumeJson, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(r).expect("serializable"));
        return;
    }
    let label = if r.grading_scaled {
        "lattice volume"
    } else {
        "lattice volume (unscaled)"
    };
    println!("{label}: {}", show(&r.lattice_volume));
    println!("euclidean volume: {}", r.euclidean_volume);
    if !r.full_dimensional && r.dim >= 0 {
        println!("note: not full-dimensional; volumes are taken in the affine hull");
    }
    println!("grading denominator: {}", r.grading_denominator);
    println!("dim: {}", r.dim);
    println!("vertices: {}", r.vertices);
    println!("support hyperplanes: {}", r.support_hyperplanes);
    if let Some(s) = r.shape {
        println!("shape: {s}");
    }
    if let Some(s) = &r.stats {
        println!("stored faces: {}", s.total_faces);
        println!("determinants: {}", s.det_count);
        println!("simplices in decomposition: {}", s.simplex_decomp_count);
        let layers: Vec<String> = s.layer_sizes.iter().map(u64::to_string).collect();
        println!("layer sizes: {}", layers.join(" "));
    }
}

#[derive(Serialize)]
struct ComponentJson {
    label: String,
    volume: RatRepr,
    multiplicity: String,
    dim: Option<usize>,
    inequalities: usize,
    equations: usize,
}

#[derive(Serialize)]
struct VoteJson {
    event: String,
    candidates: usize,
    winner: char,
    backend: &'static str,
    probability: RatRepr,
    probability_decimal: String,
    symmetry_factor: String,
    components: Vec<ComponentJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<RatRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<RatRepr>>>,
}

#[allow(clippy::too_many_arguments)]
fn run_vote(
    n: usize,
    event: EventArg,
    winner: char,
    rule: Rule,
    place: usize,
    cell: Option<(usize, usize)>,
    run: &RunArgs,
) -> Result<(), Failure> {
    let usage = |message: String| Failure { code: 2, message };
    let w = (winner.to_ascii_uppercase() as usize).wrapping_sub('A' as usize);
    if w >= n {
        return Err(usage(format!(
            "winner `{winner}` is not one of {n} candidates"
        )));
    }
    let query = match event {
        EventArg::FourRules => Query::AllFourRules,
        EventArg::CondorcetWinner => Query::CondorcetWinner,
        EventArg::CondorcetPlurality => Query::CondorcetPlurality,
        EventArg::OtherParadox => Query::OtherParadox,
        EventArg::OtherParadoxPlace => Query::OtherParadoxPlace(place),
        EventArg::StrongBorda => Query::StrongBorda(rule),
        EventArg::ReverseStrongBorda => Query::ReverseStrongBorda(rule),
        EventArg::Elimination => Query::Elimination(rule),
        EventArg::EliminationEfficiency => Query::EliminationEfficiency(rule),
        EventArg::EliminationCell => {
            let (first, second) =
                cell.ok_or_else(|| usage("elimination-cell needs --cell i,j".into()))?;
            Query::EliminationCell {
                rule,
                first,
                second,
            }
        }
        EventArg::EliminationTable => Query::EliminationTable(rule),
    };
    let options = DescentOptions {
        threads: run.threads,
        trace: false,
    };
    let backend = run.backend;
    let seed = run.seed;
    let volume = move |sys: &ConstraintSystem| -> polyvol::Result<EventVolume> {
        match backend {
            Backend::Descent => voting::descent_volume(sys, seed, &options),
            Backend::Oracle | Backend::SpecialAuto => {
                let p = dual_convert_seeded(&PolytopeInput::H(sys.clone()), seed)?;
                let s = recognize(&p);
                let v = if backend == Backend::SpecialAuto && s.kind != ShapeKind::None {
                    special_volume(&p, &s)?
                } else if backend == Backend::Oracle {
                    let order: Vec<usize> = (0..p.num_vertices()).collect();
                    oracle_volume_by_triangulation(&p, &order)?
                } else {
                    descend_with(&p, &options)?.lattice_volume
                };
                Ok(EventVolume {
                    volume: v,
                    dim: Some(p.dim),
                })
            }
        }
    };
    let report = voting::probability_for(n, w, &query, &volume).map_err(|e| match e {
        Error::InvalidEvent(m) => usage(m),
        e => e.into(),
    })?;
    emit_vote(
        &report,
        winner.to_ascii_uppercase(),
        backend_name(backend),
        run,
    );
    Ok(())
}

fn emit_vote(r: &ProbabilityReport, winner: char, backend: &'static str, run: &RunArgs) {
    let digits = run.precision as usize;
    let out = VoteJson {
        event: r.event.clone(),
        candidates: r.n_candidates,
        winner,
        backend,
        probability: RatRepr::from(&r.probability),
        probability_decimal: decimal(&r.probability, digits),
        symmetry_factor: r.symmetry_factor.to_string(),
        components: r
            .components
            .iter()
            .map(|c| ComponentJson {
                label: c.label.clone(),
                volume: RatRepr::from(&c.volume),
                multiplicity: c.multiplicity.to_string(),
                dim: c.dim,
                inequalities: c.inequalities,
                equations: c.equations,
            })
            .collect(),
        cross_check: r.cross_check.as_ref().map(RatRepr::from),
        table: r.table.as_ref().map(|t| {
            t.iter()
                .map(|row| row.iter().map(RatRepr::from).collect())
                .collect()
        }),
    };
    if run.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
        return;
    }
    println!(
        "event: {} ({} candidates, A = {})",
        out.event, out.candidates, winner
    );
    for c in &out.components {
        let dim = c.dim.map_or("empty".to_string(), |d| d.to_string());
        let weight = if c.multiplicity == "0" {
            "reference".to_string()
        } else {
            format!("x{}", c.multiplicity)
        };
        println!(
            "  {}: volume {} ({weight}), dim {}, {} inequalities, {} equations, grading sum x = 1",
            c.label,
            show(&c.volume),
            dim,
            c.inequalities,
            c.equations
        );
    }
    println!("symmetry factor: {}", out.symmetry_factor);
    println!("probability: {}", show(&out.probability));
    println!("           ~ {}", out.probability_decimal);
    if let (Some(x), Some(exact)) = (&out.cross_check, &r.cross_check) {
        let verdict = if *exact == r.probability {
            "agrees"
        } else {
            "DISAGREES"
        };
        println!("cross-check: {} ({verdict})", show(x));
    }
    if let Some(t) = &r.table {
        println!("table (round one place by round two place):");
        for row in t {
            let cells: Vec<String> = row.iter().map(|c| decimal(c, digits.min(11))).collect();
            println!("  {}", cells.join("  "));
        }
    }
}
