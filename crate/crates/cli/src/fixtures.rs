//! The `gen` subcommand: seeded graphs with instance streams to match.

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recurrent_core::cds_tree::{gen_path_lb_instances, PathLbKind};
use recurrent_core::graph::{
    generate_path, generate_random_graph, generate_random_planar, generate_random_tree, greedy_chromatic_upper, io,
    Graph,
};
use recurrent_core::lcl_paths::bundled_spec;
use recurrent_core::sim::{write_instances, RecurrentInstance};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// What `gen` writes. Parsed case-insensitively from `random-tree`,
/// `random-planar`, `random-graph`, `path`, `path-lb-c1`, `path-lb-c2` and
/// `lcl-<bundled spec>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenKind {
    RandomTree,
    RandomPlanar,
    RandomGraph,
    Path,
    /// Lower-bound path with clients on every other vertex from v2.
    PathLbC1,
    /// Lower-bound path with clients on every other vertex from v4.
    PathLbC2,
    /// A bundled path LCL spec plus a path with edge-subset instances.
    Lcl(String),
}

impl GenKind {
    pub fn name(&self) -> String {
        match self {
            GenKind::RandomTree => "random-tree".into(),
            GenKind::RandomPlanar => "random-planar".into(),
            GenKind::RandomGraph => "random-graph".into(),
            GenKind::Path => "path".into(),
            GenKind::PathLbC1 => "path-lb-c1".into(),
            GenKind::PathLbC2 => "path-lb-c2".into(),
            GenKind::Lcl(spec) => format!("lcl-{spec}"),
        }
    }
}

impl FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        Ok(match lower.as_str() {
            "random-tree" => GenKind::RandomTree,
            "random-planar" => GenKind::RandomPlanar,
            "random-graph" => GenKind::RandomGraph,
            "path" => GenKind::Path,
            "path-lb-c1" => GenKind::PathLbC1,
            "path-lb-c2" => GenKind::PathLbC2,
            _ => match lower.strip_prefix("lcl-") {
                Some(spec) if bundled_spec(spec).is_some() => GenKind::Lcl(spec.to_string()),
                Some(spec) => return Err(format!("no bundled spec named {spec:?}")),
                None => return Err(format!("unknown fixture kind {s:?}")),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InstanceKind {
    Clients,
    Precoloring,
    Edges,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// random-tree, random-planar, random-graph, path, path-lb-c1, path-lb-c2 or lcl-<spec>.
    #[arg(long)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    /// Size parameter of the lower-bound paths (even).
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Number of instances.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Edge probability of `random-graph`.
    #[arg(long, default_value_t = 0.15)]
    pub p: f64,
    /// Fraction of vertices (or edges) an instance marks.
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// File stem; defaults to the kind.
    #[arg(long)]
    pub name: Option<String>,
    /// Overrides the instance kind that suits the graph.
    #[arg(long, value_enum)]
    pub instance_kind: Option<InstanceKind>,
}

fn default_instances(kind: &GenKind) -> InstanceKind {
    match kind {
        GenKind::RandomTree | GenKind::RandomPlanar | GenKind::PathLbC1 | GenKind::PathLbC2 => InstanceKind::Clients,
        GenKind::RandomGraph => InstanceKind::Precoloring,
        GenKind::Path | GenKind::Lcl(_) => InstanceKind::Edges,
    }
}

/// A proper partial coloring: a random subset of a greedy coloring under a
/// random injective relabelling, so precolors are spread over `1..=χ+2`.
fn precoloring(g: &Graph, density: f64, rng: &mut ChaCha8Rng) -> BTreeMap<usize, u32> {
    let (chi, colors) = greedy_chromatic_upper(g);
    let mut relabel: Vec<u32> = (1..=chi as u32 + 2).collect();
    relabel.shuffle(rng);
    (0..g.n()).filter(|_| rng.random_bool(density)).map(|v| (v, relabel[colors[v] as usize - 1])).collect()
}

pub fn instances(g: &Graph, kind: InstanceKind, count: usize, density: f64, seed: u64) -> Vec<RecurrentInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| match kind {
            InstanceKind::Clients => RecurrentInstance::ClientSet((0..g.n()).map(|_| rng.random_bool(density)).collect()),
            InstanceKind::Precoloring => RecurrentInstance::Precoloring(precoloring(g, density, &mut rng)),
            InstanceKind::Edges => RecurrentInstance::EdgeSubset((0..g.m()).map(|_| rng.random_bool(1.0 - density)).collect()),
        })
        .collect()
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Writes `<out>/<name>.graph.json` and `<out>/<name>.jsonl` (and
/// `<name>.spec.json` for LCL fixtures).
pub fn generate(args: &GenArgs, seed: u64) -> Result<()> {
    if !(0.0..=1.0).contains(&args.density) || !(0.0..=1.0).contains(&args.p) {
        bail!("--p and --density must lie in [0, 1]");
    }
    let name = args.name.clone().unwrap_or_else(|| args.kind.name());
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let ikind = args.instance_kind.unwrap_or(default_instances(&args.kind));
    let (g, insts) = match &args.kind {
        GenKind::PathLbC1 | GenKind::PathLbC2 => {
            let kind = if args.kind == GenKind::PathLbC1 { PathLbKind::C1 } else { PathLbKind::C2 };
            let (g, inst) = gen_path_lb_instances(kind, args.k)?;
            (g, vec![inst.to_instance()])
        }
        kind => {
            let g = match kind {
                GenKind::RandomTree => generate_random_tree(args.n, seed),
                GenKind::RandomPlanar => generate_random_planar(args.n, seed),
                GenKind::RandomGraph => generate_random_graph(args.n, args.p, seed),
                _ => generate_path(args.n)?,
            };
            let insts = instances(&g, ikind, args.count, args.density, seed.wrapping_add(1));
            (g, insts)
        }
    };
    if let GenKind::Lcl(spec) = &args.kind {
        let spec = bundled_spec(spec).expect("checked when parsing the kind");
        write(&args.out.join(format!("{name}.spec.json")), &(spec.to_json() + "\n"))?;
    }
    write(&args.out.join(format!("{name}.graph.json")), &(io::to_json(&g) + "\n"))?;
    write(&args.out.join(format!("{name}.jsonl")), &write_instances(&insts))
}
