//! `chiralplate` — plate bending scenarios from TOML configs to CSV files.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure.

mod config;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chiralplate::experiments::{
    self, density_grid_points, mesh_convergence_study, poisson_diagram, run_sweep,
    write_convergence_csv, write_poisson_csv, write_sweep_csv, Algorithm, Setup,
    SweepOptions,
};
use chiralplate::fem::{ElementKind, RecoveryMode};
use chiralplate::honeycomb::{effective_material, wall_thickness_for_density, TetrachiralGeometry};
use chiralplate::{BoundaryKind, Error, LoadCase, PlateModel};

use config::{AlgorithmArg, BcArg, ScenarioConfig, SetupKind};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "chiralplate", version, about = "Plane-strain bending of solid and tetrachiral-core sandwich plates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one plate and write its displacement/stress field.
    Solve(Common),
    /// Run a setup over the diameter × density grid.
    Sweep(Common),
    /// Solid-plate mesh refinement study.
    Convergence(Common),
    /// Honeycomb properties and Poisson ratios over the grid.
    Honeycomb(Common),
    /// Dispatch on the config's `setup` selector.
    Run(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file (TOML); defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`, default `out`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    #[arg(long, value_enum)]
    bc: Option<BcArg>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
    /// Validate and print derived mesh dimensions without solving.
    #[arg(long)]
    dry_run: bool,
    /// Largest field dump `solve` will write.
    #[arg(long, default_value_t = 200_000)]
    max_rows: usize,
    /// Also write the assembled stiffness and load (matrix-market text).
    #[arg(long)]
    dump_system: bool,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Io(_) => 1,
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptySystem
            | Error::Singular { .. }
            | Error::Indefinite { .. }
            | Error::DimensionMismatch { .. } => Self::Numerical(e.to_string()),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CHIRALPLATE_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Config(m) => ("config error", m),
                Failure::Numerical(m) => ("numerical failure", m),
                Failure::Io(m) => ("i/o error", m),
            };
            eprintln!("chiralplate: {kind}: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(cmd: Command) -> Outcome<()> {
    match cmd {
        Command::Solve(c) => with_ctx(c, "solve", cmd_solve),
        Command::Sweep(c) => with_ctx(c, "sweep", cmd_sweep),
        Command::Convergence(c) => with_ctx(c, "convergence", cmd_convergence),
        Command::Honeycomb(c) => with_ctx(c, "honeycomb", cmd_honeycomb),
        Command::Run(c) => {
            let ctx = Ctx::load(c, "run")?;
            match ctx.cfg.setup {
                SetupKind::Solid => cmd_solve(&ctx),
                SetupKind::Setup1 | SetupKind::Setup2 => cmd_sweep(&ctx),
                SetupKind::Convergence => cmd_convergence(&ctx),
                SetupKind::Poisson => cmd_honeycomb(&ctx),
            }
        }
    }
}

fn with_ctx(c: Common, name: &'static str, f: fn(&Ctx) -> Outcome<()>) -> Outcome<()> {
    f(&Ctx::load(c, name)?)
}

struct Ctx {
    cfg: ScenarioConfig,
    args: Common,
    out: PathBuf,
    command: &'static str,
}

impl Ctx {
    fn load(args: Common, command: &'static str) -> Outcome<Self> {
        let mut cfg = match &args.config {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| Failure::Config(format!("cannot read {}: {e}", p.display())))?;
                ScenarioConfig::parse(&text)
                    .map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?
            }
            None => ScenarioConfig::default(),
        };
        if let Some(a) = args.algorithm {
            cfg.algorithm = a;
        }
        if let Some(b) = args.bc {
            cfg.bc = b;
        }
        cfg.validate().map_err(Failure::Config)?;
        let out = args
            .out
            .clone()
            .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok(Self {
            cfg,
            args,
            out,
            command,
        })
    }

    fn bc(&self) -> BoundaryKind {
        self.cfg.bc.into()
    }

    fn algorithm(&self) -> Algorithm {
        self.cfg.algorithm.into()
    }

    fn composite_setup(&self) -> Outcome<Setup> {
        match self.cfg.setup {
            SetupKind::Setup1 => Ok(Setup::One),
            SetupKind::Setup2 => Ok(Setup::Two),
            other => Err(Failure::Config(format!(
                "`{}` needs setup = \"setup1\" or \"setup2\", got {other:?}",
                self.command
            ))),
        }
    }

    /// Refuses to clobber existing files unless `--force`.
    fn claim(&self, names: &[&str]) -> Outcome<Vec<PathBuf>> {
        let paths: Vec<PathBuf> = names.iter().map(|n| self.out.join(n)).collect();
        if !self.args.force {
            if let Some(p) = paths.iter().find(|p| p.exists()) {
                return Err(Failure::Config(format!(
                    "{} exists; pass --force to overwrite",
                    p.display()
                )));
            }
        }
        fs::create_dir_all(&self.out)?;
        Ok(paths)
    }

    fn write_manifest(&self, path: &Path) -> Outcome<()> {
        let mut text = format!(
            "# chiralplate {VERSION}\n# command: {}\n# workers: {}\n",
            self.command, self.args.workers
        );
        text.push_str(&self.cfg.to_toml());
        fs::write(path, text)?;
        Ok(())
    }
}

fn create(path: &Path) -> Outcome<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path)?))
}

fn cmd_solve(ctx: &Ctx) -> Outcome<()> {
    let cfg = &ctx.cfg;
    let solid = cfg.material.build()?;
    let base = cfg.plate.spec();
    let (model, setup) = match cfg.setup {
        SetupKind::Solid | SetupKind::Convergence => {
            let kind = match ctx.algorithm() {
                Algorithm::Conforming => ElementKind::Conforming,
                Algorithm::IncompatibleFaces => ElementKind::Incompatible,
            };
            (PlateModel::solid(&base, solid, cfg.mesh.layers, kind)?, None)
        }
        SetupKind::Setup1 | SetupKind::Setup2 => {
            let setup = ctx.composite_setup()?;
            let (d_a, rho) = (cfg.case.d_a_mm, cfg.case.rho_rel);
            let t_sw = wall_thickness_for_density(d_a, rho)?;
            let core = effective_material(&TetrachiralGeometry::from_cell(d_a, t_sw)?, &solid)?;
            let spec = setup.plate(&base, rho);
            let m = PlateModel::composite(&spec, core, solid, ctx.algorithm().face_kind(), cfg.mesh.core_layers)?;
            (m, Some(setup))
        }
        SetupKind::Poisson => {
            return Err(Failure::Config("`solve` does not apply to setup = \"poisson\"".into()))
        }
    };
    let mesh = &model.mesh;
    let rows = 4 * mesh.elements().len();
    if ctx.args.dry_run {
        println!(
            "mesh: {} x {} elements, a_fe = {} mm, {} nodes, {} dofs, {} field rows",
            mesh.columns(),
            mesh.rows(),
            mesh.length() / mesh.columns() as f64,
            mesh.node_count(),
            mesh.dof_count(),
            rows
        );
        return Ok(());
    }
    if rows > ctx.args.max_rows {
        return Err(Failure::Config(format!(
            "field dump would have {rows} rows, above --max-rows {}",
            ctx.args.max_rows
        )));
    }
    let f_y = cfg.load.f_y_n.unwrap_or(setup.map_or(experiments::CONVERGENCE_PROBE, |s| s.default_probe()));
    let mut names = vec!["field.csv", "summary.txt", "manifest.toml"];
    if ctx.args.dump_system {
        names.push("system.mtx");
    }
    let paths = ctx.claim(&names)?;
    let resp = model.analyze(ctx.bc(), &LoadCase { f_y }, RecoveryMode::Normal)?;
    if ctx.args.dump_system {
        let mut sys = chiralplate::fem::assemble(mesh, &model.models)?;
        sys.set_load(chiralplate::plate::apply_load(mesh, &model.spec, &LoadCase { f_y })?)?;
        let mut w = create(&paths[3])?;
        sys.dump(&mut w)?;
        w.flush()?;
    }

    let u = &resp.solution.displacements;
    let mut w = csv::Writer::from_writer(create(&paths[0])?);
    w.write_record([
        "element", "node", "x_mm", "y_mm", "u_x_mm", "u_y_mm", "sigma_xx_mpa", "sigma_yy_mpa",
        "sigma_e_mpa", "layer",
    ])
    .map_err(|e| Failure::Io(e.to_string()))?;
    for el in &resp.field.elements {
        for c in &el.corners {
            w.write_record([
                el.element.to_string(),
                c.node.to_string(),
                c.x.to_string(),
                c.y.to_string(),
                u[2 * c.node].to_string(),
                u[2 * c.node + 1].to_string(),
                c.stress[0].to_string(),
                c.stress[1].to_string(),
                c.von_mises.to_string(),
                el.tag.to_string(),
            ])
            .map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    w.flush()?;

    let sigma_max = resp.field.max_von_mises();
    let f_crit = experiments::critical_load(f_y, solid.elastic_limit(), sigma_max)?;
    let mut summary = String::new();
    for (i, band) in mesh.bands().iter().enumerate() {
        summary.push_str(&format!("sigma_max_{}_mpa={} ", band.tag, resp.field.max_in_layer(i)));
    }
    summary.push_str(&format!("f_probe_n={f_y} f_crit_n={f_crit}"));
    println!("{summary}");
    fs::write(&paths[1], format!("{summary}\n"))?;
    ctx.write_manifest(&paths[2])
}

fn sweep_options(ctx: &Ctx) -> Outcome<SweepOptions> {
    Ok(SweepOptions {
        diameters: ctx.cfg.grid.d_a_mm.clone(),
        densities: ctx.cfg.grid.rho_rel.clone(),
        f_probe: ctx.cfg.load.f_y_n,
        solid: ctx.cfg.material.build()?,
        base: ctx.cfg.plate.spec(),
        core_layers: ctx.cfg.mesh.core_layers,
        workers: ctx.args.workers,
    })
}

fn cmd_sweep(ctx: &Ctx) -> Outcome<()> {
    let setup = ctx.composite_setup()?;
    let opts = sweep_options(ctx)?;
    // validate every grid point before solving anything
    let mut cases = Vec::new();
    for &d in &opts.diameters {
        for &r in &opts.densities {
            let t_sw = wall_thickness_for_density(d, r)?;
            effective_material(&TetrachiralGeometry::from_cell(d, t_sw)?, &opts.solid)?;
            let spec = setup.plate(&opts.base, r);
            chiralplate::plate::build_composite_mesh(&spec, ctx.cfg.mesh.core_layers)?;
            cases.push((d, r, spec.t_cl));
        }
    }
    if ctx.args.dry_run {
        for (d, r, t) in cases {
            println!("d_a = {d} mm, rho_rel = {r}, t_cl = {t} mm");
        }
        return Ok(());
    }
    let paths = ctx.claim(&["sweep.csv", "manifest.toml"])?;
    let rows = run_sweep(setup, ctx.bc(), ctx.algorithm(), &opts)?;
    let mut w = create(&paths[0])?;
    write_sweep_csv(&mut w, &rows)?;
    w.flush()?;
    println!("wrote {} rows to {}", rows.len(), paths[0].display());
    ctx.write_manifest(&paths[1])
}

fn cmd_convergence(ctx: &Ctx) -> Outcome<()> {
    let cfg = &ctx.cfg;
    let solid = cfg.material.build()?;
    let spec = cfg.plate.spec();
    for layers in 1..=cfg.mesh.max_layers {
        let m = chiralplate::plate::build_solid_mesh(&spec, layers)?;
        if ctx.args.dry_run {
            println!("layers = {layers}: {} x {} elements, {} dofs", m.columns(), m.rows(), m.dof_count());
        }
    }
    if ctx.args.dry_run {
        return Ok(());
    }
    let paths = ctx.claim(&["convergence.csv", "manifest.toml"])?;
    let f = cfg.load.f_y_n.unwrap_or(experiments::CONVERGENCE_PROBE);
    let rows = mesh_convergence_study(&spec, &solid, cfg.mesh.max_layers, f, ctx.args.workers)?;
    let mut w = create(&paths[0])?;
    write_convergence_csv(&mut w, &rows)?;
    w.flush()?;
    println!("wrote {} rows to {}", rows.len(), paths[0].display());
    ctx.write_manifest(&paths[1])
}

fn cmd_honeycomb(ctx: &Ctx) -> Outcome<()> {
    let cfg = &ctx.cfg;
    let solid = cfg.material.build()?;
    let points = density_grid_points(&cfg.grid.d_a_mm, &cfg.grid.rho_rel)?;
    let t_h = cfg.grid.t_h_mm.unwrap_or(cfg.plate.t_cl_mm);
    if ctx.args.dry_run {
        println!("{} grid points, t_h = {t_h} mm", points.len());
        return Ok(());
    }
    let paths = ctx.claim(&["poisson.csv", "manifest.toml"])?;
    let rows = poisson_diagram(&points, &solid, t_h)?;
    let mut w = create(&paths[0])?;
    write_poisson_csv(&mut w, &rows)?;
    w.flush()?;
    println!("wrote {} rows to {}", rows.len(), paths[0].display());
    ctx.write_manifest(&paths[1])
}
