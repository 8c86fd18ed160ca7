//! Command-line driver: verification suites and table emitters.

pub mod cache;
pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

pub use config::Config;
pub use report::{Check, Status, Summary, VerificationReport};
pub use suites::{run_suite, SuiteConfig, SuiteName};

use crate::arith::fmt_q;
use crate::charsum::{characters, gauss, has_cube_root, Guard};
use crate::error::{Error, Result};
use crate::freudenthal::{
    gamma_element, is_lattice_preserving, level_pairs, quartic, random_integral_vector, symplectic,
    FreudenthalVector, W_DIM,
};
use crate::kmseries::{constant_check, km1, km2_convolution, km2_local, KmRow};
use crate::octonion::conventions;
use crate::siegel::{ftilde_table, verify_hp, verify_kp, PrimeSpec, MAX_ORDER};
use cache::Cache;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Local,
    Convolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    First,
    Second,
}

fn parse_value<T: ValueEnum>(s: &str) -> Result<T> {
    T::from_str(s, true).map_err(Error::Parse)
}

#[derive(Debug, Parser)]
#[command(name = "ekm", version, about = "Exact verification of Jordan-algebra, character-sum and Siegel-series identities")]
pub struct Cli {
    /// Flat key = value file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Lift enumeration guards.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite; exits nonzero iff a check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Option<SuiteName>,
        /// Restrict character sums and Freudenthal levels to this modulus.
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        max_ord: Option<usize>,
        /// Weight 2k of the lift.
        #[arg(long)]
        weight: Option<u32>,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Local polynomial table and the two generating-function identities.
    Siegel {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        max_ord: Option<usize>,
        /// Largest ord for the polynomial table.
        #[arg(long)]
        table_ord: Option<u32>,
    },
    /// Character table mod N with Gauss sums and identity checks.
    Charsums {
        #[arg(long = "N")]
        n: Option<u64>,
    },
    /// Dirichlet coefficients of the twisted Koecher-Maass Euler product.
    Km {
        /// Weight 2k of the lift; the eigenform has weight 2k - 8.
        #[arg(long)]
        weight: Option<u32>,
        #[arg(long)]
        chi_mod: Option<u64>,
        #[arg(long)]
        chi_index: Option<u64>,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, value_enum)]
        route: Option<Route>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Only check the normalizing constant.
        #[arg(long)]
        constant_check: bool,
    },
    /// Level-N Freudenthal elements with integrality and similitude checks.
    Gamma {
        #[arg(long = "N")]
        n: Option<i64>,
    },
    /// Multiplication table and basis of the maximal order.
    Conventions,
}

/// Rendered output and process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
    /// Destination from `--out` or the config file; stdout when absent.
    pub out: Option<PathBuf>,
}

struct Context {
    config: Config,
    format: Option<Format>,
    guard: Guard,
    out: Option<PathBuf>,
}

impl Context {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Parses arguments and runs the command without printing.
pub fn execute<I, T>(args: I) -> Result<Output>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Parse(e.to_string()))?;
    run(&cli)
}

pub fn run(cli: &Cli) -> Result<Output> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let format = match cli.format {
        Some(f) => Some(f),
        None => config.get::<String>("format")?.map(|s| parse_value(&s)).transpose()?,
    };
    let force = cli.force || config.get::<bool>("force")?.unwrap_or(false);
    let jobs = config.pick(cli.jobs, "jobs")?;
    let out = config.pick(cli.out.clone(), "out")?;
    let ctx = Context {
        config,
        format,
        guard: if force { Guard::Force } else { Guard::Default },
        out,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Error::Precondition("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::Precondition(e.to_string()))?;
    let mut output = pool.install(|| dispatch(&cli.command, &ctx))?;
    output.out = ctx.out;
    Ok(output)
}

fn dispatch(cmd: &Command, ctx: &Context) -> Result<Output> {
    let c = &ctx.config;
    match cmd {
        Command::Verify {
            suite,
            n,
            p,
            max_ord,
            weight,
            max_n,
        } => {
            let suite = match suite {
                Some(s) => *s,
                None => c.get::<String>("suite")?.map(|s| parse_value(&s)).transpose()?.unwrap_or(SuiteName::All),
            };
            let mut cfg = SuiteConfig {
                guard: ctx.guard,
                ..SuiteConfig::default()
            };
            if let Some(n) = c.pick(*n, "N")? {
                cfg.moduli = vec![n];
                cfg.levels = vec![n as i64];
                cfg.counts = false;
            }
            if let Some(p) = c.pick(p.clone(), "p")? {
                cfg.primes = vec![p.parse()?];
            }
            if let Some(m) = c.pick(*max_ord, "max_ord")? {
                cfg.formal_order = m;
                cfg.numeric_order = m;
            }
            if let Some(w) = c.pick(*weight, "weight")? {
                cfg.lift_weight = w;
            }
            if let Some(m) = c.pick(*max_n, "max_n")? {
                cfg.max_n = m;
            }
            let report = run_suite(suite, &cfg);
            let text = match ctx.format(Format::Json) {
                Format::Json => to_json(&report)?,
                Format::Tsv => report.to_tsv(),
            };
            Ok(Output {
                text,
                code: report.exit_code(),
                out: None,
            })
        }
        Command::Siegel { p, max_ord, table_ord } => {
            let p: PrimeSpec = c.pick(p.clone(), "p")?.unwrap_or_else(|| "formal".into()).parse()?;
            let default_ord = if p == PrimeSpec::Formal { 8 } else { 10 };
            let max_ord = c.pick(*max_ord, "max_ord")?.unwrap_or(default_ord);
            if max_ord > MAX_ORDER {
                return Err(Error::Precondition(format!("--max-ord is limited to {MAX_ORDER}")));
            }
            let table_ord = c.pick(*table_ord, "table_ord")?.unwrap_or(4);
            siegel_command(p, max_ord, table_ord, ctx)
        }
        Command::Charsums { n } => {
            let n = c.pick(*n, "N")?.unwrap_or(5);
            charsums_command(n, ctx)
        }
        Command::Km {
            weight,
            chi_mod,
            chi_index,
            max_n,
            route,
            kind,
            constant_check: only_constant,
        } => {
            if *only_constant {
                let r = constant_check();
                return Ok(Output {
                    text: to_json(&r)?,
                    code: if r.holds { 0 } else { 1 },
                out: None,
                });
            }
            let route = match route {
                Some(r) => *r,
                None => c.get::<String>("route")?.map(|s| parse_value(&s)).transpose()?.unwrap_or(Route::Local),
            };
            let kind = match kind {
                Some(k) => *k,
                None => c.get::<String>("kind")?.map(|s| parse_value(&s)).transpose()?.unwrap_or(Kind::Second),
            };
            let args = KmArgs {
                lift_weight: c.pick(*weight, "weight")?.unwrap_or(20),
                modulus: c.pick(*chi_mod, "chi_mod")?.unwrap_or(5),
                index: c.pick(*chi_index, "chi_index")?.unwrap_or(0),
                max_n: c.pick(*max_n, "max_n")?.unwrap_or(200),
                route,
                kind,
            };
            km_command(&args, ctx)
        }
        Command::Gamma { n } => {
            let n = c.pick(*n, "N")?.unwrap_or(2);
            gamma_command(n, ctx)
        }
        Command::Conventions => {
            let conv = conventions();
            let text = match ctx.format(Format::Json) {
                Format::Json => to_json(&json!({
                    "hash": cache::conventions_hash(),
                    "conventions": conv,
                }))?,
                Format::Tsv => {
                    let mut s = String::from("i\tj\tsign\tk\n");
                    for (i, row) in conv.table.iter().enumerate() {
                        for (j, [sign, k]) in row.iter().enumerate() {
                            s.push_str(&format!("{i}\t{j}\t{sign}\t{k}\n"));
                        }
                    }
                    s
                }
            };
            Ok(Output { text, code: 0, out: None })
        }
    }
}

fn siegel_command(p: PrimeSpec, max_ord: usize, table_ord: u32, ctx: &Context) -> Result<Output> {
    let table = ftilde_table(&p, table_ord)?;
    let (hp, kp) = rayon::join(|| verify_hp(&p, max_ord), verify_kp);
    let hp = hp?;
    let code = if hp.holds && kp.holds { 0 } else { 1 };
    let text = match ctx.format(Format::Json) {
        Format::Json => {
            let rows: Vec<_> = table
                .iter()
                .map(|(prm, poly)| json!({"m1": prm.m1, "m2": prm.m2, "m3": prm.m3, "ftilde": poly}))
                .collect();
            to_json(&json!({
                "prime": p.to_string(),
                "max_ord": max_ord,
                "ftilde": rows,
                "hp": hp,
                "kp": kp,
            }))?
        }
        Format::Tsv => {
            let mut s = String::from("m1\tm2\tm3\tftilde\n");
            for (prm, poly) in &table {
                s.push_str(&format!("{}\t{}\t{}\t{poly}\n", prm.m1, prm.m2, prm.m3));
            }
            s
        }
    };
    Ok(Output { text, code, out: None })
}

#[derive(Serialize)]
struct CharacterRow {
    index: u64,
    order: u64,
    conductor: u64,
    primitive: bool,
    gauss: String,
    gauss_norm: Option<bool>,
    cube: bool,
    cube_scalar: Option<bool>,
}

const H_NOTE: &str = "the character sum over the coset space is given by its closed form; the defining sum is not enumerated";

fn charsums_command(n: u64, ctx: &Context) -> Result<Output> {
    if n < 1 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    let admissible = suites::cube_admissible(n);
    let mut rows = Vec::new();
    let mut failed = false;
    for chi in characters(n) {
        let w = gauss(&chi);
        let gauss_norm = chi
            .is_primitive()
            .then(|| &w * &gauss(&chi.conj()) == chi.value(-1).scale(&crate::arith::q(n as i64)));
        let cube_scalar = match admissible.iter().find(|(c, _)| c == &chi) {
            Some((c, root)) => {
                let mut ok = true;
                for eta in crate::charsum::cal_d(n) {
                    let (j, g) = crate::charsum::cube_scalars(c, root, &eta)?;
                    ok &= g.as_ref() == Some(&j);
                }
                Some(ok)
            }
            None => None,
        };
        failed |= gauss_norm == Some(false) || cube_scalar == Some(false);
        rows.push(CharacterRow {
            index: chi.index(),
            order: chi.order(),
            conductor: chi.conductor(),
            primitive: chi.is_primitive(),
            gauss: w.render(),
            gauss_norm,
            cube: has_cube_root(&chi),
            cube_scalar,
        });
    }
    let cube_status = if admissible.is_empty() {
        format!("skipped: {}", suites::CUBE_SCALAR_SKIP)
    } else {
        "checked".to_string()
    };
    let text = match ctx.format(Format::Tsv) {
        Format::Json => to_json(&json!({
            "modulus": n,
            "characters": rows,
            "cube_scalar": cube_status,
            "note": H_NOTE,
        }))?,
        Format::Tsv => {
            let flag = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
            let mut s = format!("# modulus {n}; cube scalar identity {cube_status}\n# {H_NOTE}\n");
            s.push_str("index\torder\tconductor\tprimitive\tgauss\tgauss_norm\tcube\tcube_scalar\n");
            for r in &rows {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.index,
                    r.order,
                    r.conductor,
                    r.primitive,
                    r.gauss,
                    flag(r.gauss_norm),
                    r.cube,
                    flag(r.cube_scalar)
                ));
            }
            s
        }
    };
    Ok(Output {
        text,
        code: if failed { 1 } else { 0 },
                out: None,
    })
}

struct KmArgs {
    lift_weight: u32,
    modulus: u64,
    index: u64,
    max_n: usize,
    route: Route,
    kind: Kind,
}

fn km_command(a: &KmArgs, ctx: &Context) -> Result<Output> {
    let weight = a
        .lift_weight
        .checked_sub(8)
        .ok_or_else(|| Error::Precondition(format!("lift weight {} is below 8", a.lift_weight)))?;
    ctx.guard.check(a.max_n as u128, crate::kmseries::KM_GUARD)?;
    let chi = characters(a.modulus)
        .into_iter()
        .find(|c| c.index() == a.index)
        .ok_or_else(|| Error::Precondition(format!("no character with index {} mod {}", a.index, a.modulus)))?;
    let f = match &ctx.out {
        Some(out) => {
            let path = Cache::path_for(out);
            let mut cache = Cache::load(&path);
            let f = cache.eigenform(weight, a.max_n)?;
            cache.store(&path)?;
            f
        }
        None => crate::kmseries::eigenform(weight, a.max_n)?,
    };
    let (coeffs, note) = match a.kind {
        Kind::Second => {
            let c = match a.route {
                Route::Local => km2_local(&f, &chi, a.max_n, ctx.guard)?,
                Route::Convolution => km2_convolution(&f, &chi, a.max_n, ctx.guard)?,
            };
            (c, None)
        }
        Kind::First => {
            let r = km1(&f, &chi, a.max_n, ctx.guard)?;
            let note = r.vanishes.then_some("chi(u0) != 1: the series vanishes");
            (r.jacobi_form, note)
        }
    };
    let rows: Vec<KmRow> = coeffs.rows();
    let text = match ctx.format(Format::Tsv) {
        Format::Json => to_json(&json!({
            "lift_weight": a.lift_weight,
            "eigenform_weight": weight,
            "character": coeffs.label,
            "note": note,
            "rows": rows,
        }))?,
        Format::Tsv => {
            let mut s = String::from("n\texact\tnumeric_re\tnumeric_im\n");
            for r in &rows {
                s.push_str(&format!("{}\t{}\t{}\t{}\n", r.n, r.exact, r.re, r.im));
            }
            s
        }
    };
    Ok(Output { text, code: 0, out: None })
}

#[derive(Serialize)]
struct GammaRow {
    a: i64,
    b: i64,
    level: i64,
    integral: bool,
    inverse_integral: bool,
    mu: String,
    quartic_residual: String,
    symplectic_residual: String,
    error: Option<String>,
}

fn gamma_command(n: i64, ctx: &Context) -> Result<Output> {
    if n < 1 {
        return Err(Error::Precondition(format!("level {n} must be positive")));
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for (a, b) in level_pairs(n) {
        let row = match gamma_element(a, b, n) {
            Ok(g) => {
                let inv = g.matrix.inverse()?;
                let mut rng = ChaCha8Rng::seed_from_u64(0x9a33a + n as u64);
                let mut samples: Vec<FreudenthalVector> = (0..W_DIM).map(FreudenthalVector::basis).collect();
                samples.extend((0..100).map(|_| random_integral_vector(&mut rng, 3)));
                let mu2 = &g.mu * &g.mu;
                let quartic_residual = samples
                    .iter()
                    .map(|w| (quartic(&g.apply(w)) - &mu2 * quartic(w)).abs())
                    .max()
                    .unwrap_or_default();
                let symplectic_residual = samples
                    .windows(2)
                    .map(|p| (symplectic(&g.apply(&p[0]), &g.apply(&p[1])) - &g.mu * symplectic(&p[0], &p[1])).abs())
                    .max()
                    .unwrap_or_default();
                let integral = g.matrix.is_integral();
                let inverse_integral = inv.is_integral();
                ok &= integral && inverse_integral && g.mu == crate::arith::q(1) && is_lattice_preserving(&g)?;
                ok &= quartic_residual == crate::arith::q(0) && symplectic_residual == crate::arith::q(0);
                GammaRow {
                    a,
                    b,
                    level: n,
                    integral,
                    inverse_integral,
                    mu: fmt_q(&g.mu),
                    quartic_residual: fmt_q(&quartic_residual),
                    symplectic_residual: fmt_q(&symplectic_residual),
                    error: None,
                }
            }
            Err(e) => {
                ok = false;
                GammaRow {
                    a,
                    b,
                    level: n,
                    integral: false,
                    inverse_integral: false,
                    mu: String::new(),
                    quartic_residual: String::new(),
                    symplectic_residual: String::new(),
                    error: Some(e.to_string()),
                }
            }
        };
        rows.push(row);
    }
    let text = match ctx.format(Format::Json) {
        Format::Json => to_json(&rows)?,
        Format::Tsv => {
            let mut s = String::from("a\tb\tN\tintegral\tinverse_integral\tmu\tquartic_residual\tsymplectic_residual\n");
            for r in &rows {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.a, r.b, r.level, r.integral, r.inverse_integral, r.mu, r.quartic_residual, r.symplectic_residual
                ));
            }
            s
        }
    };
    Ok(Output {
        text,
        code: if ok { 0 } else { 1 },
                out: None,
    })
}

/// Runs the CLI with process arguments, writing output and returning the exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(&cli).and_then(|o| write_output(&o).map(|()| o.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn write_output(output: &Output) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, &output.text)?,
        None => std::io::stdout().write_all(output.text.as_bytes())?,
    }
    Ok(())
}
