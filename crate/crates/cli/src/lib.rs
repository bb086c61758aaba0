//! Experiment drivers behind the `iwagrowth` binary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use iwagrowth::asymptotics::{fit_cm_law, fit_diagonal, fit_iwasawa, Axis, DiagonalModel, FitReport, GrowthTable};
use iwagrowth::gamma::{self, GammaForm, GammaModule};
use iwagrowth::lambda::{prep_exact, resultant_val_exact, weierstrass_prep, LambdaSeries};
use iwagrowth::multivar::{self, HModule, HStructure, StructureSpec};
use iwagrowth::padic::PrecisionPolicy;
use iwagrowth::serial::{dec, dec_opt, Dec};
use iwagrowth::skew::{self, GModule};
use iwagrowth::{corpus, Error, Exec, ZPoly};

pub mod ingest;

#[derive(Debug, Parser)]
#[command(name = "iwagrowth", version, about = "Growth of coinvariants of Iwasawa modules")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Odd prime; required where no module file supplies it.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Dimension of the p-adic Lie extension.
    #[arg(long, global = true)]
    pub d: Option<u32>,
    /// Starting p-adic precision K.
    #[arg(short = 'K', long, global = true, default_value_t = 8)]
    pub precision: u32,
    /// Largest precision tried before giving up.
    #[arg(long, global = true, default_value_t = 1024)]
    pub max_precision: u32,
    /// Degree cap D for truncated power series.
    #[arg(short = 'D', long, global = true)]
    pub cap: Option<usize>,
    /// Action unit u for d = 2 (overrides the module file).
    #[arg(long, global = true)]
    pub u: Option<i64>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the run record as JSON to this path (`-` for stdout).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Execution mode for independent levels and elimination.
    #[arg(long, global = true, default_value = "parallel")]
    pub exec: Exec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Iwasawa,
    Cm,
    Main,
    Upper,
    Perbet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Kernel,
    PseudoNull,
    Pipeline,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weierstrass preparation of a polynomial.
    Prep {
        #[arg(short = 'F', long = "poly")]
        poly: String,
    },
    /// Print omega_n, Phi_n and optionally Phi_{n/n0}.
    Omega {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        n0: Option<u32>,
    },
    /// Coinvariant order of a module file at one level.
    Order {
        module: PathBuf,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
    /// mu, lambda, nu and n0 of a Lambda(Gamma)-module.
    Invariants { module: PathBuf },
    /// e(M_{Gamma_n}) over a range of n, with the Iwasawa fit.
    GrowthGamma {
        module: PathBuf,
        #[arg(long, default_value_t = 0)]
        n_min: u32,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
    },
    /// e(M/A_m(S)) over a range of m, with the Cuoco-Monsky fit.
    GrowthH {
        module: PathBuf,
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        m_min: Option<u32>,
        #[arg(long, default_value_t = 3)]
        m_max: u32,
    },
    /// e and etilde of M_{G_{n,n}} over a range of n, with diagonal fits.
    GrowthG {
        module: PathBuf,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        /// mu_G for the upper-bound check on etilde.
        #[arg(long)]
        mu_g: Option<i64>,
        /// tau for the upper-bound check on etilde.
        #[arg(long)]
        tau: Option<i64>,
        #[arg(long)]
        c_max: Option<i64>,
    },
    /// Fit a growth law to an external CSV table with columns n,m,e.
    Fit {
        csv: PathBuf,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        mu_g: Option<i64>,
        #[arg(long)]
        tau: Option<i64>,
        #[arg(long)]
        c_max: Option<i64>,
    },
    /// Run a seeded randomized property suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

/// Exit codes of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const NO_STABILIZATION: i32 = 2;
    pub const BOUND_VIOLATED: i32 = 3;
    pub const ORACLE_MISMATCH: i32 = 4;
    pub const COMPUTATION: i32 = 5;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::InvalidContext(_) | Error::BadRange(_) | Error::ContextMismatch { .. } | Error::InsufficientData { .. } => exit::INPUT,
            Error::NoStabilization(_) => exit::NO_STABILIZATION,
            Error::BoundViolated { .. } => exit::BOUND_VIOLATED,
            _ => exit::COMPUTATION,
        };
        CliError { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> CliError {
    CliError { code: exit::INPUT, message: message.into() }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Echo of everything that determines a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(with = "dec_opt")]
    pub p: Option<u64>,
    #[serde(with = "dec_opt")]
    pub d: Option<u32>,
    #[serde(rename = "K", with = "dec")]
    pub precision: u32,
    #[serde(with = "dec")]
    pub max_precision: u32,
    #[serde(rename = "D", with = "dec_opt")]
    pub cap: Option<usize>,
    #[serde(with = "dec_opt")]
    pub u: Option<i64>,
    pub n_range: Option<[Dec; 2]>,
    pub m_range: Option<[Dec; 2]>,
    pub module: Option<String>,
    pub structure: Option<String>,
    pub output: Option<String>,
    #[serde(with = "dec")]
    pub seed: u64,
}

impl RunConfig {
    fn from_opts(g: &GlobalOpts) -> Self {
        RunConfig {
            p: g.p,
            d: g.d,
            precision: g.precision,
            max_precision: g.max_precision,
            cap: g.cap,
            u: g.u,
            n_range: None,
            m_range: None,
            module: None,
            structure: None,
            output: g.json.as_ref().map(|p| p.display().to_string()),
            seed: g.seed,
        }
    }
}

fn range(a: u32, b: u32) -> Option<[Dec; 2]> {
    Some([Dec::from(i64::from(a)), Dec::from(i64::from(b))])
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OracleSummary {
    #[serde(with = "dec")]
    pub checks: usize,
    #[serde(with = "dec")]
    pub mismatches: usize,
    pub failures: Vec<String>,
}

impl OracleSummary {
    fn compare<T: PartialEq + std::fmt::Debug>(&mut self, what: impl Fn() -> String, a: T, b: T) {
        self.checks += 1;
        if a != b {
            self.mismatches += 1;
            self.failures.push(format!("{}: {a:?} != {b:?}", what()));
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedTable {
    pub name: String,
    pub table: GrowthTable,
}

/// The reproducible part of a run.
#[derive(Debug, Clone, Serialize)]
pub struct RecordBody {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub tables: Vec<NamedTable>,
    pub fits: Vec<FitReport>,
    pub results: Value,
    pub oracle: OracleSummary,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    /// Wall-clock milliseconds; excluded from determinism checks.
    pub elapsed_ms: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub record: RecordBody,
    pub timing: Timing,
}

impl RunRecord {
    /// Canonical JSON of the reproducible part.
    pub fn deterministic_json(&self) -> String {
        serde_json::to_string(&self.record).expect("records serialize")
    }
}

/// Outcome of a command: human-readable lines and the run record.
pub struct Outcome {
    pub lines: Vec<String>,
    pub record: RunRecord,
}

struct Ctx<'a> {
    g: &'a GlobalOpts,
    body: RecordBody,
    lines: Vec<String>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a GlobalOpts, command: &str) -> Self {
        let body = RecordBody {
            tool: "iwagrowth".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: RunConfig::from_opts(g),
            tables: Vec::new(),
            fits: Vec::new(),
            results: Value::Null,
            oracle: OracleSummary::default(),
            notes: Vec::new(),
        };
        Ctx { g, body, lines: Vec::new() }
    }

    fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy::new(self.g.precision, self.g.max_precision)
    }

    fn say(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn table(&mut self, name: &str, t: GrowthTable) {
        let vals: Vec<String> = t.values().iter().map(|v| v.to_string()).collect();
        self.say(format!("{name}: {}", vals.join(", ")));
        self.body.tables.push(NamedTable { name: name.into(), table: t });
    }

    fn fit(&mut self, f: FitReport) {
        let params: Vec<String> = f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let c = f.witnessed_c.map(|c| format!(", C={c}")).unwrap_or_default();
        self.say(format!("fit {}: {}{c}", f.model, params.join(" ")));
        self.body.fits.push(f);
    }

    fn want_p(&self, module_p: u64) -> CliResult<()> {
        match self.g.p {
            Some(p) if p != module_p => Err(input_error(format!("--p {p} disagrees with the module's p = {module_p}"))),
            _ => Ok(()),
        }
    }

    fn want_d(&self, module_d: u32) -> CliResult<()> {
        match self.g.d {
            Some(d) if d != module_d => Err(input_error(format!("--d {d} disagrees with the module's d = {module_d}"))),
            _ => Ok(()),
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_json(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn decode<T: serde::de::DeserializeOwned>(v: Value, path: &Path) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// A module file of any of the three rings.
pub enum AnyModule {
    Gamma(GammaModule),
    H(HModule),
    G(GModule),
}

pub fn load_module(path: &Path) -> CliResult<AnyModule> {
    let v = parse_json(path)?;
    match v.get("ring").and_then(Value::as_str) {
        Some("gamma") => Ok(AnyModule::Gamma(decode(v, path)?)),
        Some("h") => Ok(AnyModule::H(decode(v, path)?)),
        Some("g") => Ok(AnyModule::G(decode(v, path)?)),
        Some(r) => Err(input_error(format!("{}: unknown ring \"{r}\"", path.display()))),
        None => Err(input_error(format!("{}: missing \"ring\"", path.display()))),
    }
}

fn load_gamma(c: &Ctx, path: &Path) -> CliResult<GammaModule> {
    match load_module(path)? {
        AnyModule::Gamma(m) => {
            c.want_p(m.p)?;
            Ok(m)
        }
        _ => Err(input_error(format!("{}: expected a \"gamma\" module", path.display()))),
    }
}

fn load_h(c: &Ctx, path: &Path) -> CliResult<HModule> {
    match load_module(path)? {
        AnyModule::H(m) => {
            c.want_p(m.p())?;
            c.want_d(m.d())?;
            Ok(m)
        }
        _ => Err(input_error(format!("{}: expected an \"h\" module", path.display()))),
    }
}

fn load_g(c: &Ctx, path: &Path) -> CliResult<GModule> {
    match load_module(path)? {
        AnyModule::G(mut m) => {
            c.want_p(m.p)?;
            c.want_d(m.d)?;
            if let Some(u) = c.g.u {
                if m.d != 2 {
                    return Err(input_error("--u applies to d = 2 only"));
                }
                m = GModule::with_unit(m.p, u, m.generators, m.relations)?;
            }
            Ok(m)
        }
        _ => Err(input_error(format!("{}: expected a \"g\" module", path.display()))),
    }
}

fn need_p(g: &GlobalOpts) -> CliResult<u64> {
    g.p.ok_or_else(|| input_error("this command needs --p"))
}

/// Run one command.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let start = Instant::now();
    let name = match &cli.command {
        Command::Prep { .. } => "prep",
        Command::Omega { .. } => "omega",
        Command::Order { .. } => "order",
        Command::Invariants { .. } => "invariants",
        Command::GrowthGamma { .. } => "growth-gamma",
        Command::GrowthH { .. } => "growth-h",
        Command::GrowthG { .. } => "growth-g",
        Command::Fit { .. } => "fit",
        Command::Check { .. } => "check",
    };
    let mut c = Ctx::new(&cli.global, name);
    match &cli.command {
        Command::Prep { poly } => cmd_prep(&mut c, poly)?,
        Command::Omega { n, n0 } => cmd_omega(&mut c, *n, *n0)?,
        Command::Order { module, n, m } => cmd_order(&mut c, module, *n, *m)?,
        Command::Invariants { module } => cmd_invariants(&mut c, module)?,
        Command::GrowthGamma { module, n_min, n_max } => cmd_growth_gamma(&mut c, module, *n_min, *n_max)?,
        Command::GrowthH { module, structure, m_min, m_max } => cmd_growth_h(&mut c, module, structure.as_deref(), *m_min, *m_max)?,
        Command::GrowthG { module, n_min, n_max, mu_g, tau, c_max } => cmd_growth_g(&mut c, module, *n_min, *n_max, (*mu_g, *tau, *c_max))?,
        Command::Fit { csv, model, mu_g, tau, c_max } => cmd_fit(&mut c, csv, *model, (*mu_g, *tau, *c_max))?,
        Command::Check { suite, count } => cmd_check(&mut c, *suite, *count)?,
    }
    let o = &c.body.oracle;
    c.lines.push(format!("oracle checks: {} ({} mismatches)", o.checks, o.mismatches));
    let record = RunRecord { record: c.body, timing: Timing { elapsed_ms: start.elapsed().as_millis().to_string() } };
    Ok(Outcome { lines: c.lines, record })
}

/// Write the record where `--json` asks for it.
pub fn persist(g: &GlobalOpts, record: &RunRecord) -> CliResult<()> {
    let Some(path) = &g.json else { return Ok(()) };
    let text = serde_json::to_string_pretty(record).expect("records serialize") + "\n";
    if path.as_os_str() == "-" {
        print!("{text}");
        return Ok(());
    }
    std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Fail with exit code 4 when an oracle comparison disagreed.
pub fn assert_oracle(record: &RunRecord) -> CliResult<()> {
    let o = &record.record.oracle;
    if o.mismatches > 0 {
        return Err(CliError { code: exit::ORACLE_MISMATCH, message: format!("{} oracle mismatches: {}", o.mismatches, o.failures.join("; ")) });
    }
    Ok(())
}

fn cmd_prep(c: &mut Ctx, poly: &str) -> CliResult<()> {
    let p = need_p(c.g)?;
    let f: ZPoly = poly.parse()?;
    let policy = c.policy();
    let w = match c.g.cap {
        Some(cap) => policy.escalate(p, |ctx| weierstrass_prep(&LambdaSeries::from_zpoly(ctx, &f, cap)?))?,
        None => prep_exact(&f, p, &policy)?,
    };
    let prefix: Vec<String> = (0..=w.unit.cap().min(4)).map(|i| w.unit.coeff(i).balanced().to_string()).collect();
    c.say(format!("F = {f}"));
    c.say(format!("mu = {}", w.mu));
    c.say(format!("lambda = {}", w.lambda()));
    c.say(format!("distinguished = {}", w.distinguished.to_zpoly()));
    c.say(format!("unit prefix = [{}] (mod {p}^{})", prefix.join(", "), w.unit.ctx().precision()));
    // Independent reading of mu and lambda from the integer coefficients.
    let direct = iwagrowth::lambda::mu_lambda_direct(&f, p);
    c.body.oracle.compare(|| "prep vs direct coefficient reading".into(), direct, Some((w.mu, w.lambda())));
    c.body.results = json!({
        "F": f.to_string(),
        "mu": w.mu.to_string(),
        "lambda": w.lambda().to_string(),
        "distinguished": w.distinguished.to_zpoly(),
        "unit_prefix": prefix,
        "unit_precision": w.unit.ctx().precision().to_string(),
    });
    Ok(())
}

fn cmd_omega(c: &mut Ctx, n: u32, n0: Option<u32>) -> CliResult<()> {
    let p = need_p(c.g)?;
    let w = ZPoly::omega(p, n);
    let ph = ZPoly::phi(p, n);
    c.say(format!("omega_{n} = {w}"));
    c.say(format!("Phi_{n} = {ph}"));
    let mut res = json!({ "omega": w, "phi": ph });
    if let Some(n0) = n0 {
        let r = ZPoly::phi_rel(p, n, n0)?;
        c.say(format!("Phi_{{{n}/{n0}}} = {r}"));
        res["phi_rel"] = serde_json::to_value(&r).expect("poly");
    }
    c.body.results = res;
    Ok(())
}

fn coker_json(cok: &iwagrowth::oracle::Coker) -> Value {
    json!({
        "torsion": cok.torsion.iter().map(u32::to_string).collect::<Vec<_>>(),
        "free_rank": cok.free_rank.to_string(),
        "e": cok.exponent().to_string(),
        "precision": cok.precision.to_string(),
    })
}

fn cmd_order(c: &mut Ctx, path: &Path, n: u32, m: u32) -> CliResult<()> {
    c.body.config.module = Some(path.display().to_string());
    let policy = c.policy();
    let exec = c.g.exec;
    let cok = match load_module(path)? {
        AnyModule::Gamma(md) => {
            c.want_p(md.p)?;
            c.body.config.n_range = range(n, n);
            gamma::coinvariants(&md, n, &policy, exec)?
        }
        AnyModule::H(md) => {
            c.want_p(md.p())?;
            c.body.config.m_range = range(m, m);
            multivar::quotient_coker(&md, &md.structure, m, &policy, exec)?
        }
        AnyModule::G(_) => {
            let md = load_g(c, path)?;
            c.body.config.n_range = range(n, n);
            c.body.config.m_range = range(m, m);
            let ring = md.ring_for(n.max(m))?;
            let two = skew::two_stage(&md, &ring, n, m, &policy, exec)?;
            let one = skew::one_shot_coinvariants(&md, &ring, n, m, &policy, exec)?;
            c.body.oracle.compare(|| format!("one-shot vs two-stage at (n={n}, m={m})"), (&one.torsion, one.free_rank), (&two.torsion, two.free_rank));
            two
        }
    };
    c.say(format!("e = {}", cok.exponent()));
    c.say(format!("free rank = {}", cok.free_rank));
    c.say(format!("elementary divisors (valuations) = {:?}", cok.torsion));
    c.body.results = coker_json(&cok);
    Ok(())
}

fn invariants_json(inv: &gamma::GammaInvariants) -> Value {
    serde_json::to_value(inv).expect("invariants serialize")
}

fn cmd_invariants(c: &mut Ctx, path: &Path) -> CliResult<()> {
    c.body.config.module = Some(path.display().to_string());
    let m = load_gamma(c, path)?;
    let inv = gamma::extract_invariants(&m, &c.policy(), c.g.exec)?;
    c.say(format!("char element = {}", inv.char_element));
    c.say(format!("mu = {}, lambda = {}, nu = {}, n0 = {}", inv.mu, inv.lambda, inv.nu, inv.n0));
    // The fitted law must reproduce the oracle one level past n0.
    let n = inv.n0 + 1;
    let e = gamma::coinvariant_order(&m, n, &c.policy(), c.g.exec)?;
    c.body.oracle.compare(|| format!("invariants predict e at n={n}"), inv.predict(m.p, n), i128::from(e));
    c.body.results = invariants_json(&inv);
    Ok(())
}

fn cmd_growth_gamma(c: &mut Ctx, path: &Path, n_min: u32, n_max: u32) -> CliResult<()> {
    if n_min > n_max {
        return Err(input_error("--n-min exceeds --n-max"));
    }
    c.body.config.module = Some(path.display().to_string());
    c.body.config.n_range = range(n_min, n_max);
    let m = load_gamma(c, path)?;
    let policy = c.policy();
    let ns: Vec<u32> = (n_min..=n_max).collect();
    let t = gamma::coinvariant_order_seq(&m, &ns, &policy, c.g.exec)?;
    let vals = t.values();
    // Second oracle: the same module presented purely by relations.
    if !matches!(m.form, GammaForm::Relations { .. }) {
        let (g, rows) = m.as_relations();
        let rel = GammaModule::relations(m.p, g, rows)?;
        let alt = gamma::coinvariant_order_seq(&rel, &ns, &policy, c.g.exec)?.values();
        for (i, (a, b)) in vals.iter().zip(&alt).enumerate() {
            c.body.oracle.compare(|| format!("relation form at n={}", ns[i]), a, b);
        }
    }
    // Third oracle for cyclic modules: transition kernels as resultants.
    if let GammaForm::Divisors(f) = &m.form {
        if let [f] = f.as_slice() {
            for (i, w) in vals.windows(2).enumerate() {
                let n = ns[i + 1];
                let r = resultant_val_exact(f, &ZPoly::phi(m.p, n), m.p, &policy)?;
                c.body.oracle.compare(|| format!("resultant kernel at n={n}"), i128::from(r), w[1] - w[0]);
            }
        }
    }
    c.table("e_n", t.clone());
    if t.points.len() >= 4 {
        c.fit(fit_iwasawa(&t)?);
    } else {
        c.body.notes.push("fewer than four levels: no Iwasawa fit".into());
    }
    match gamma::extract_invariants(&m, &policy, c.g.exec) {
        Ok(inv) => {
            c.say(format!("invariants from the characteristic ideal: mu = {}, lambda = {}, nu = {}", inv.mu, inv.lambda, inv.nu));
            for (n, e) in ns.iter().zip(&vals) {
                if *n >= inv.n0 {
                    c.body.oracle.compare(|| format!("characteristic-ideal law at n={n}"), inv.predict(m.p, *n), *e);
                }
            }
            c.body.results = json!({ "invariants": invariants_json(&inv) });
        }
        Err(e) => c.body.notes.push(format!("invariants unavailable: {e}")),
    }
    Ok(())
}

fn cmd_growth_h(c: &mut Ctx, path: &Path, structure: Option<&Path>, m_min: Option<u32>, m_max: u32) -> CliResult<()> {
    c.body.config.module = Some(path.display().to_string());
    let m = load_h(c, path)?;
    let s: HStructure = match structure {
        Some(sp) => {
            c.body.config.structure = Some(sp.display().to_string());
            let spec: StructureSpec = decode(parse_json(sp)?, sp)?;
            m.resolve_structure(spec)?
        }
        None => m.structure.clone(),
    };
    let m_min = m_min.unwrap_or(s.m0);
    if m_min > m_max {
        return Err(input_error("--m-min exceeds --m-max"));
    }
    c.body.config.m_range = range(m_min, m_max);
    let ms: Vec<u32> = (m_min..=m_max).collect();
    let policy = c.policy();
    let g = multivar::cm_growth(&m, &s, &ms, &policy, c.g.exec)?;
    // Second oracle: relations in reverse order must give the same quotient.
    let mut rev = m.clone();
    rev.relations.reverse();
    let alt = multivar::cm_growth(&rev, &s, &ms, &policy, c.g.exec)?;
    for (i, (a, b)) in g.table.values().iter().zip(alt.table.values()).enumerate() {
        c.body.oracle.compare(|| format!("reordered relations at m={}", ms[i]), *a, b);
    }
    c.table("e_m", g.table.clone());
    if g.table.points.len() >= 3 {
        c.fit(fit_cm_law(&g.table, m.d())?);
    } else {
        c.body.notes.push("fewer than three levels: no Cuoco-Monsky fit".into());
    }
    c.body.results = json!({ "ranks": g.ranks });
    Ok(())
}

/// Largest coset count for the one-shot cross-check.
pub const ONE_SHOT_LIMIT: usize = 1024;

fn cmd_growth_g(c: &mut Ctx, path: &Path, n_min: u32, n_max: u32, upper: (Option<i64>, Option<i64>, Option<i64>)) -> CliResult<()> {
    if n_min > n_max {
        return Err(input_error("--n-min exceeds --n-max"));
    }
    c.body.config.module = Some(path.display().to_string());
    c.body.config.n_range = range(n_min, n_max);
    c.body.config.m_range = range(n_min, n_max);
    let m = load_g(c, path)?;
    let ring = m.ring_for(n_max)?;
    let (nc, mc) = ring.caps();
    c.say(format!("working level (n', m') = ({nc}, {mc})"));
    let ns: Vec<u32> = (n_min..=n_max).collect();
    let policy = c.policy();
    let rep = skew::gnn_growth(&m, &ring, &ns, &policy, c.g.exec)?;
    for r in &rep.rows {
        let cosets = (m.p as usize).pow(m.d * r.n) * m.generators;
        if cosets <= ONE_SHOT_LIMIT {
            let one = skew::one_shot_coinvariants(&m, &ring, r.n, r.n, &policy, c.g.exec)?;
            c.body.oracle.compare(|| format!("one-shot vs two-stage at n=m={}", r.n), (one.exponent(), one.exponent_mod_pn(r.n)), (r.e, r.etilde));
        }
    }
    let et = rep.e_table()?;
    let tt = rep.etilde_table()?;
    c.table("e_nn", et.clone());
    c.table("etilde_nn", tt.clone());
    match fit_diagonal(&et, &DiagonalModel::Main, m.d) {
        Ok(f) => c.fit(f),
        Err(e @ (Error::InsufficientData { .. } | Error::NoStabilization(_))) => c.body.notes.push(format!("main fit unavailable: {e}")),
        Err(e) => return Err(e.into()),
    }
    if let (Some(mu_g), Some(tau)) = (upper.0, upper.1) {
        let model = DiagonalModel::Upper { mu_g: i128::from(mu_g), tau: i128::from(tau), c_max: upper.2.map(i128::from) };
        c.fit(fit_diagonal(&tt, &model, m.d)?);
    }
    c.body.results = serde_json::to_value(&rep).expect("report serializes");
    Ok(())
}

fn cmd_fit(c: &mut Ctx, path: &Path, model: Model, upper: (Option<i64>, Option<i64>, Option<i64>)) -> CliResult<()> {
    c.body.config.module = Some(path.display().to_string());
    let p = need_p(c.g)?;
    let axis = match model {
        Model::Iwasawa => Axis::N,
        Model::Cm => Axis::M,
        _ => Axis::Diagonal,
    };
    let t = ingest::read_table(&read(path)?, p, axis)?;
    let d = c.g.d.unwrap_or(match model {
        Model::Cm => 3,
        _ => 2,
    });
    let f = match model {
        Model::Iwasawa => fit_iwasawa(&t)?,
        Model::Cm => fit_cm_law(&t, d)?,
        Model::Main => fit_diagonal(&t, &DiagonalModel::Main, d)?,
        Model::Perbet => fit_diagonal(&t, &DiagonalModel::Perbet, d)?,
        Model::Upper => {
            let (Some(mu_g), Some(tau)) = (upper.0, upper.1) else {
                return Err(input_error("model upper needs --mu-g and --tau"));
            };
            fit_diagonal(&t, &DiagonalModel::Upper { mu_g: i128::from(mu_g), tau: i128::from(tau), c_max: upper.2.map(i128::from) }, d)?
        }
    };
    c.table("input", t);
    c.fit(f);
    Ok(())
}

fn cmd_check(c: &mut Ctx, suite: Suite, count: usize) -> CliResult<()> {
    let policy = c.policy();
    let exec = c.g.exec;
    let seed = c.g.seed;
    match suite {
        Suite::Kernel => {
            for p in [3u64, 5] {
                for s in corpus::divisors(seed, p, count, 3) {
                    let m = GammaModule::divisors(p, vec![s.f.clone()])?;
                    let e = gamma::coinvariant_order_seq(&m, &[0, 1, 2, 3], &policy, exec)?.values();
                    for n in 1..=3u32 {
                        let r = i128::from(resultant_val_exact(&s.f, &ZPoly::phi(p, n), p, &policy)?);
                        c.body.oracle.compare(|| format!("p={p} F={} n={n} kernel", s.f), r, e[n as usize] - e[n as usize - 1]);
                        let deg = i128::from(p.pow(n - 1) * (p - 1));
                        if deg > s.lambda as i128 {
                            c.body.oracle.compare(|| format!("p={p} F={} n={n} closed form", s.f), r, i128::from(s.mu) * deg + s.lambda as i128);
                        }
                    }
                }
            }
        }
        Suite::PseudoNull => {
            let p = c.g.p.unwrap_or(3);
            for (f, cc) in corpus::pseudo_null_pairs(seed, p, count, 3) {
                let ns = [0, 1, 2, 3];
                let a = gamma::coinvariant_order_seq(&GammaModule::with_finite_summand(p, f.clone(), cc)?, &ns, &policy, exec)?.values();
                let b = gamma::coinvariant_order_seq(&GammaModule::divisors(p, vec![f.clone()])?, &ns, &policy, exec)?.values();
                for n in ns {
                    c.body.oracle.compare(|| format!("F={f} c={cc} n={n}"), a[n as usize], b[n as usize] + i128::from(cc));
                }
            }
        }
        Suite::Pipeline => {
            for (i, m) in corpus::gmodules(seed, count)?.into_iter().enumerate() {
                let ring = m.ring_for(2)?;
                for n in 0..=2 {
                    for lvl in 0..=2 {
                        let a = skew::two_stage(&m, &ring, n, lvl, &policy, exec)?;
                        let b = skew::one_shot_coinvariants(&m, &ring, n, lvl, &policy, exec)?;
                        c.body.oracle.compare(|| format!("module {i} at (n={n}, m={lvl})"), (&a.torsion, a.free_rank), (&b.torsion, b.free_rank));
                    }
                }
            }
        }
    }
    c.say(format!("suite {suite:?} with seed {seed}"));
    Ok(())
}
