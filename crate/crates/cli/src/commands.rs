//! One runner per subcommand. Each loads its inputs, runs the stream and
//! turns the simulator reports into report rows.

use crate::config::{pick, pick_enum, FileConfig, Settings};
use crate::report::{Report, Row};
use crate::{CcScheme, MisColors, MmMode, OracleProblem, PlanarAlgo, SpecArg};
use anyhow::{bail, ensure, Context, Result};
use recurrent_core::cds_planar::{
    compute_nonrepetitive_coloring, ctas, Approx39Program, CtasOptions, NrcOptions, APPROX39_RADIUS,
};
use recurrent_core::cds_tree::{ApprProgram, CdsInstance};
use recurrent_core::color_completion::{
    build_set_family, color_stats, DefaultColoring, FamilyCompletion, KRoundCompletion, PriorityRecoloring,
};
use recurrent_core::graph::{forest_decompose, greedy_chromatic_upper, io::parse_graph, root_at, Graph};
use recurrent_core::lcl_paths::{bundled_spec, classify, classify_with_cap, validate_outputs, LclSpec, PathSolver};
use recurrent_core::matching_mis::{degree_split, ColorMis, ForestMatching, MisSplit, SubgraphMis};
use recurrent_core::oracles::validate::{
    is_client_dominating, is_maximal_independent, is_maximal_matching, is_proper_completion,
};
use recurrent_core::oracles::{cc_exact, cds_bruteforce, cds_tree_dp, chromatic_exact, CcObjective};
use recurrent_core::sim::{
    parse_instances, run_preprocess, run_stream_with, Execution, NodeProgram, RecurrentInstance, RunReport, Verdict,
};
use std::collections::BTreeMap;

const DEFAULT_ORACLE_CAP: usize = 24;

struct Inputs {
    g: Graph,
    insts: Vec<RecurrentInstance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Clients,
    Precoloring,
    Edges,
    Any,
}

impl Kind {
    fn matches(self, inst: &RecurrentInstance) -> bool {
        matches!(
            (self, inst),
            (Kind::Clients, RecurrentInstance::ClientSet(_))
                | (Kind::Precoloring, RecurrentInstance::Precoloring(_))
                | (Kind::Edges, RecurrentInstance::EdgeSubset(_))
                | (Kind::Any, _)
        )
    }
}

fn load(s: &Settings, kind: Kind) -> Result<Inputs> {
    let gp = s.graph_path()?;
    let text = std::fs::read_to_string(&gp).with_context(|| format!("reading graph {}", gp.display()))?;
    let g = parse_graph(&text).with_context(|| format!("parsing graph {}", gp.display()))?;
    let insts = match s.instances_path()? {
        Some(ip) => {
            let text = std::fs::read_to_string(&ip).with_context(|| format!("reading instances {}", ip.display()))?;
            parse_instances(&text, &g).with_context(|| format!("parsing instances {}", ip.display()))?
        }
        None => bail!("--instances is required"),
    };
    if let Some(i) = insts.iter().position(|inst| !kind.matches(inst)) {
        bail!("instance {i} is not a {kind:?} instance");
    }
    log::debug!("loaded graph n={} m={} and {} instances", g.n(), g.m(), insts.len());
    Ok(Inputs { g, insts })
}

fn exec(s: &Settings) -> Execution {
    if s.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn clients_of(inst: &RecurrentInstance) -> Result<&[bool]> {
    match inst {
        RecurrentInstance::ClientSet(c) => Ok(c),
        other => bail!("expected a client-set instance, got {other:?}"),
    }
}

fn precoloring_of(inst: &RecurrentInstance) -> Result<&BTreeMap<usize, u32>> {
    match inst {
        RecurrentInstance::Precoloring(pc) => Ok(pc),
        other => bail!("expected a precoloring instance, got {other:?}"),
    }
}

fn active_of(inst: &RecurrentInstance) -> Result<&[bool]> {
    match inst {
        RecurrentInstance::EdgeSubset(m) => Ok(m),
        other => bail!("expected an edge-subset instance, got {other:?}"),
    }
}

/// Every output, or `None` if some node did not halt.
fn complete<O: Clone>(outputs: &[Option<O>]) -> Option<Vec<O>> {
    outputs.iter().cloned().collect()
}

/// Runs `p` over the stream. `check` validates complete outputs and `value`
/// measures them; both see the instance.
fn stream<P, C, V>(s: &Settings, inp: &Inputs, p: &P, round_bound: usize, check: C, value: V) -> Result<(Vec<Row>, usize)>
where
    P: NodeProgram,
    C: Fn(&RecurrentInstance, &[P::Output]) -> bool + Sync,
    V: Fn(&RecurrentInstance, &[P::Output]) -> Option<u64>,
{
    let pre = run_preprocess(&inp.g, p)?;
    let cap = s.round_cap.unwrap_or(round_bound);
    let reports = run_stream_with(exec(s), &inp.g, &pre, p, &inp.insts, cap, |inst, out| {
        Verdict::valid(complete(out).is_some_and(|o| !s.validate || check(inst, &o)))
    });
    let rows = reports.iter().map(|r| row_of(s, r, round_bound, &inp.insts[r.index], &value)).collect();
    Ok((rows, pre.s_sup_bits()))
}

fn row_of<O: Clone>(
    s: &Settings,
    r: &RunReport<O>,
    round_bound: usize,
    inst: &RecurrentInstance,
    value: &dyn Fn(&RecurrentInstance, &[O]) -> Option<u64>,
) -> Row {
    let mut row = Row::new(r.index);
    row.rounds = r.rounds;
    row.round_bound = Some(round_bound);
    row.messages = r.messages;
    row.error = r.error.clone();
    row.valid = if s.validate { r.valid } else { None };
    row.value = complete(&r.outputs).and_then(|o| value(inst, &o));
    row
}

/// Adds oracle optima to the rows when `--oracle` is on.
fn with_oracle(s: &Settings, rows: Vec<Row>, insts: &[RecurrentInstance], opt: impl Fn(&RecurrentInstance) -> Result<u64>) -> Result<Vec<Row>> {
    if !s.oracle {
        return Ok(rows);
    }
    rows.into_iter().map(|r| Ok(r.clone().with_optimum(opt(&insts[r.index])?))).collect()
}

fn count(members: &[bool]) -> Option<u64> {
    Some(members.iter().filter(|&&b| b).count() as u64)
}

pub fn cds_tree(s: &Settings, file: &FileConfig, k: Option<usize>, root: Option<usize>) -> Result<Report> {
    let k = pick(k, file.k, 5);
    let root = pick(root, file.root, 0);
    let inp = load(s, Kind::Clients)?;
    let t = root_at(&inp.g, root).context("cds-tree needs a tree")?;
    let prog = ApprProgram::new(k, root)?;
    let (rows, bits) = stream(
        s,
        &inp,
        &prog,
        prog.round_bound(),
        |inst, out| clients_of(inst).is_ok_and(|c| is_client_dominating(&inp.g, c, out)),
        |_, out| count(out),
    )?;
    let bound = 1.0 + 4.0 / (k as f64 - 1.0);
    let rows = with_oracle(s, rows, &inp.insts, |inst| Ok(cds_tree_dp(&t, clients_of(inst)?).0 as u64))?;
    let rows = rows.into_iter().map(|r| Row { ratio_bound: Some(bound), ..r }).collect();
    Ok(Report::new(&format!("cds-tree k={k}"), rows, bits, Some(bound)))
}

pub fn cds_planar(s: &Settings, file: &FileConfig, algo: Option<PlanarAlgo>, eps: Option<f64>) -> Result<Report> {
    let algo = pick_enum(algo, file.algo.as_deref(), PlanarAlgo::Approx39, "algo")?;
    let inp = load(s, Kind::Clients)?;
    let cap = file.cap.unwrap_or(DEFAULT_ORACLE_CAP);
    let oracle = |inst: &RecurrentInstance| Ok(cds_bruteforce(&inp.g, clients_of(inst)?, cap)?.0 as u64);
    match algo {
        PlanarAlgo::Approx39 => {
            let (rows, bits) = stream(
                s,
                &inp,
                &Approx39Program,
                APPROX39_RADIUS,
                |inst, out| clients_of(inst).is_ok_and(|c| is_client_dominating(&inp.g, c, out)),
                |_, out| count(out),
            )?;
            let rows = with_oracle(s, rows, &inp.insts, oracle)?;
            let rows = rows.into_iter().map(|r| Row { ratio_bound: Some(39.0), ..r }).collect();
            Ok(Report::new("cds-planar approx39", rows, bits, Some(39.0)))
        }
        PlanarAlgo::Ctas => {
            let eps = pick(eps, file.eps, 1.0);
            ensure!(eps > 0.0, "eps must be positive");
            let nrc = compute_nonrepetitive_coloring(&inp.g, &NrcOptions { seed: s.seed, ..Default::default() })?;
            let mut rows = Vec::new();
            for (i, inst) in inp.insts.iter().enumerate() {
                let clients = CdsInstance::new(clients_of(inst)?.to_vec());
                let (d, run) = ctas(&inp.g, &clients, eps, &nrc, &CtasOptions::default())?;
                let mut row = Row::new(i);
                row.rounds = run.rounds_estimate as usize;
                row.value = Some(d.size() as u64);
                row.valid = s.validate.then(|| d.dominates(&inp.g, &clients));
                row.ratio_bound = Some(1.0 + eps);
                rows.push(row);
            }
            let rows = with_oracle(s, rows, &inp.insts, oracle)?;
            Ok(Report::new(&format!("cds-planar ctas eps={eps}"), rows, nrc.payload_bits(), Some(1.0 + eps)))
        }
    }
}

pub fn cc(s: &Settings, file: &FileConfig, scheme: Option<CcScheme>, k: Option<u32>) -> Result<Report> {
    let scheme = pick_enum(scheme, file.scheme.as_deref(), CcScheme::Single, "scheme")?;
    let inp = load(s, Kind::Precoloring)?;
    let g = &inp.g;
    let check = |inst: &RecurrentInstance, out: &[u32]| {
        precoloring_of(inst).is_ok_and(|pc| out.iter().all(|&c| c > 0) && is_proper_completion(g, pc, out))
    };
    let chi_new = |inst: &RecurrentInstance, out: &[u32]| {
        let pc = precoloring_of(inst).ok()?;
        color_stats(pc, out).ok().map(|st| st.chi_new as u64)
    };
    let dc = DefaultColoring::compute(g);
    let (name, (mut rows, bits), value_bound, ratio_bound) = match scheme {
        CcScheme::Single => {
            let p = KRoundCompletion::single_round(g, dc);
            let nb = p.new_color_bound() as u64;
            ("cc single-round".to_string(), stream(s, &inp, &p, p.round_cap(), check, chi_new)?, Some(nb), None)
        }
        CcScheme::KRounds => {
            let k = pick(k, file.k.map(|k| k as u32), 2.min(dc.chi).max(1));
            let p = KRoundCompletion::new(g, dc, k)?;
            let nb = p.new_color_bound() as u64;
            (format!("cc k-rounds k={k}"), stream(s, &inp, &p, p.round_cap(), check, chi_new)?, Some(nb), None)
        }
        CcScheme::Priority => {
            let chi = dc.chi as u64;
            let p = PriorityRecoloring::new(dc);
            ("cc priority".to_string(), stream(s, &inp, &p, p.round_cap(), check, chi_new)?, Some(chi), Some(2.0))
        }
        CcScheme::Family => {
            let fam = build_set_family(g.n().max(2), g.max_degree().max(1), s.seed)?;
            for inst in &inp.insts {
                if let Some((v, c)) = precoloring_of(inst)?.iter().find(|(_, &c)| c as usize > fam.m) {
                    bail!("vertex {v} has precolor {c} outside the family universe 1..={}", fam.m);
                }
            }
            let p = FamilyCompletion::new(&fam);
            ("cc family".to_string(), stream(s, &inp, &p, 1, check, chi_new)?, None, None)
        }
    };
    for r in &mut rows {
        r.value_bound = value_bound;
        r.ratio_bound = ratio_bound;
    }
    if s.oracle {
        // ratio compares the whole palette with the best completion
        let cap = file.cap.unwrap_or(DEFAULT_ORACLE_CAP);
        for r in &mut rows {
            let pc = precoloring_of(&inp.insts[r.index])?;
            let (opt, _) = cc_exact(g, pc, CcObjective::ChiAll, cap)?;
            r.optimum = Some(opt as u64);
            let chi_pc = pc.values().collect::<std::collections::BTreeSet<_>>().len() as u64;
            r.ratio = r.value.map(|new| recurrent_core::sim::Ratio::of(chi_pc + new, opt as u64).as_f64());
        }
    }
    Ok(Report::new(&name, rows, bits, ratio_bound))
}

fn load_spec(s: &Settings, file: &FileConfig, arg: &SpecArg) -> Result<LclSpec> {
    if let Some(name) = arg.bundled.as_ref().or(file.bundled.as_ref()) {
        return bundled_spec(name).with_context(|| format!("no bundled spec named {name:?}"));
    }
    let path = arg.spec.as_ref().or(file.spec.as_ref()).context("give --spec FILE or --bundled NAME")?;
    let path = s.locate(path)?;
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading spec {}", path.display()))?;
    LclSpec::from_json(&text).with_context(|| format!("parsing spec {}", path.display()))
}

pub fn lcl_classify(s: &Settings, file: &FileConfig, arg: &SpecArg, cap: Option<usize>) -> Result<()> {
    let spec = load_spec(s, file, arg)?;
    let c = match cap.or(file.cap) {
        Some(cap) => classify_with_cap(&spec, cap)?,
        None => classify(&spec)?,
    };
    let out = serde_json::json!({
        "spec": spec.name,
        "complexity": c.complexity,
        "cap": c.cap,
        "cycle_length": c.witness.as_ref().map(|w| w.k),
        "witness_lengths": c.witness_lengths(),
    });
    let text = serde_json::to_string_pretty(&out)? + "\n";
    match &s.report {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn lcl_solve(s: &Settings, file: &FileConfig, arg: &SpecArg) -> Result<Report> {
    let spec = load_spec(s, file, arg)?;
    let solver = PathSolver::new(&spec)?;
    let inp = load(s, Kind::Any)?;
    let pre = run_preprocess(&inp.g, &solver)?;
    let cap = s.round_cap.unwrap_or(solver.round_bound());
    let reports = run_stream_with(exec(s), &inp.g, &pre, &solver, &inp.insts, cap, |inst, out| {
        if s.validate {
            validate_outputs(&spec, &inp.g, inst, out)
        } else {
            Verdict::valid(true)
        }
    });
    let rows = reports.iter().map(|r| row_of(s, r, solver.round_bound(), &inp.insts[r.index], &|_, _| None)).collect();
    Ok(Report::new(&format!("lcl {}", spec.name), rows, pre.s_sup_bits(), None))
}

pub fn mm(s: &Settings, file: &FileConfig, mode: Option<MmMode>, root: Option<usize>, forests: Option<usize>) -> Result<Report> {
    let mode = pick_enum(mode, file.mode.as_deref(), MmMode::Tree, "mode")?;
    let inp = load(s, Kind::Edges)?;
    let prog = match mode {
        MmMode::Tree => ForestMatching::tree(&root_at(&inp.g, pick(root, file.root, 0)).context("tree mode needs a tree")?),
        MmMode::Arboricity => {
            let fd = forest_decompose(&inp.g, pick(forests, file.forests, 6))?;
            ForestMatching::new(&inp.g, &fd)?
        }
    };
    let (rows, bits) = stream(
        s,
        &inp,
        &prog,
        prog.round_bound(),
        |inst, out| active_of(inst).is_ok_and(|a| is_maximal_matching(&inp.g, a, out)),
        |_, out| Some(out.iter().filter(|p| p.is_some()).count() as u64 / 2),
    )?;
    Ok(Report::new(&format!("mm {mode:?} forests={}", prog.forest_count()).to_lowercase(), rows, bits, None))
}

pub fn mis(s: &Settings, file: &FileConfig, colors: Option<MisColors>, split: Option<usize>) -> Result<Report> {
    let which = pick_enum(colors, file.colors.as_deref(), MisColors::Greedy, "colors")?;
    let inp = load(s, Kind::Edges)?;
    let g = &inp.g;
    let coloring = match which {
        MisColors::Greedy => greedy_chromatic_upper(g).1,
        MisColors::Exact => chromatic_exact(g, file.cap.unwrap_or(DEFAULT_ORACLE_CAP))?.1,
    };
    let inner = ColorMis::new(g, coloring)?;
    let check = |inst: &RecurrentInstance, out: &[bool]| active_of(inst).is_ok_and(|a| is_maximal_independent(g, a, out));
    let (name, (rows, bits)) = match split.or(file.split) {
        None => {
            let bound = inner.round_bound();
            (format!("mis colors={}", inner.color_count()), stream(s, &inp, &inner, bound, check, |_, o| count(o))?)
        }
        Some(d) => {
            let parts = degree_split(g, d)?.parts();
            let p = MisSplit::new(g, &parts, inner)?;
            let bound = p.round_bound();
            (format!("mis split d={d}"), stream(s, &inp, &p, bound, check, |_, o| count(o))?)
        }
    };
    Ok(Report::new(&name, rows, bits, None))
}

pub fn oracle(s: &Settings, file: &FileConfig, problem: Option<OracleProblem>, cap: Option<usize>) -> Result<Report> {
    let problem = pick_enum(problem, file.problem.as_deref(), OracleProblem::Cds, "problem")?;
    let cap = pick(cap, file.cap, DEFAULT_ORACLE_CAP);
    if problem == OracleProblem::Chromatic {
        let gp = s.graph_path()?;
        let g = parse_graph(&std::fs::read_to_string(&gp)?).with_context(|| format!("parsing {}", gp.display()))?;
        let (chi, _) = chromatic_exact(&g, cap)?;
        let mut row = Row::new(0);
        row.value = Some(chi as u64);
        return Ok(Report::new("oracle chromatic", vec![row], 0, None));
    }
    let inp = load(s, if problem == OracleProblem::Cds { Kind::Clients } else { Kind::Precoloring })?;
    let mut rows = Vec::new();
    for (i, inst) in inp.insts.iter().enumerate() {
        let value = match problem {
            OracleProblem::Cds => {
                let clients = clients_of(inst)?;
                if inp.g.is_tree() {
                    cds_tree_dp(&root_at(&inp.g, 0)?, clients).0
                } else {
                    cds_bruteforce(&inp.g, clients, cap)?.0
                }
            }
            OracleProblem::CcNew => cc_exact(&inp.g, precoloring_of(inst)?, CcObjective::ChiNew, cap)?.0,
            OracleProblem::CcAll => cc_exact(&inp.g, precoloring_of(inst)?, CcObjective::ChiAll, cap)?.0,
            OracleProblem::Chromatic => unreachable!("handled above"),
        };
        let mut row = Row::new(i);
        row.value = Some(value as u64);
        rows.push(row);
    }
    Ok(Report::new(&format!("oracle {problem:?}").to_lowercase(), rows, 0, None))
}
