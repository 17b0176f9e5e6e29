use clap::{Parser, Subcommand};
use navmap::mask::ColorMap;
use navmap::medial::CorridorParams;
use navmap::pipeline::{analyze_file, emit_knowledge_base, DEFAULT_K};
use navmap::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "navmap", version, about = "Floor-plan mask to route and turn-by-turn directions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a mask and write the knowledge base as JSON.
    Analyze(AnalyzeArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Mask image (PNG or PNM).
    #[arg(long)]
    input: PathBuf,
    /// Narrowest corridor run kept, in pixels.
    #[arg(long, default_value_t = 8)]
    min_width: u32,
    /// Widest corridor run kept; wider runs become junction shapes.
    #[arg(long, default_value_t = 60)]
    max_width: u32,
    /// How far past a corridor wall to look for doors. Defaults to max-width.
    #[arg(long)]
    door_probe: Option<u32>,
    /// Number of shortest routes to choose from.
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Knowledge base output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional overlay image showing skeleton, route and nodes.
    #[arg(long)]
    render: Option<PathBuf>,
    /// Colour map file with `key = hex` lines.
    #[arg(long)]
    colors: Option<PathBuf>,
}

fn run(args: AnalyzeArgs) -> Result<(), Error> {
    let colors = match &args.colors {
        Some(path) => ColorMap::from_file(path)?,
        None => ColorMap::default(),
    };
    let mut params = CorridorParams::new(args.min_width, args.max_width);
    if let Some(probe) = args.door_probe {
        params = params.with_door_probe(probe);
    }
    let analysis = analyze_file(&args.input, params, &colors, args.k)?;
    emit_knowledge_base(&analysis.kb, &args.out)?;
    if let Some(path) = &args.render {
        analysis.render(&colors, path)?;
    }

    let kb = &analysis.kb;
    println!(
        "route: {} nodes, length {:.3}",
        kb.route.node_count(),
        kb.route.total_length
    );
    for ins in kb.directions.actionable() {
        let pixel = kb.graph.nodes[ins.at_node].pixel;
        println!("  at {pixel}: {} ({:.1} deg)", ins.direction.label(), ins.angle);
    }
    let d = kb.door_directive;
    let side = match d.side {
        navmap::TravelSide::Left => "left",
        navmap::TravelSide::Right => "right",
    };
    println!("  target: door {} on the {side}", d.ordinal);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
