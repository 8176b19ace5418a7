//! Subcommand bodies. Each returns a JSON document, its CSV rendering and a
//! pass flag; `main` decides bytes and exit codes.

use std::fmt;

use serde_json::{json, Value};
use weil_core::canonical::{dual_space, duality_gram, reduction_iso, weil_rep, CanonicalSpace};
use weil_core::cyclotomic::{gauss_sum, gauss_sum_unreduced, FloatRender};
use weil_core::intertwine::{canonical_t, kernel_of, TMethod};
use weil_core::symplectic::{OrientedSubspace, SymplecticMap, SymplecticSpace, DEFAULT_MAX_CELLS};
use weil_core::verify::{gauss_identity, run_suite, Suite, VerifyConfig};
use weil_core::{CycMatrix, CycNum, Error};

use crate::Format;

pub const MAX_CELLS_VAR: &str = "WEIL_MAX_CELLS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(Error::ScaleGuard { what, cells, limit }) => write!(
                f,
                "scale guard: {what} needs {cells} cells, limit is {limit} (raise {MAX_CELLS_VAR} to override)"
            ),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CmdResult = Result<Outcome, CliError>;

pub struct RunConfig {
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub float: bool,
}

impl RunConfig {
    pub fn new(p: u64, dim: usize, seed: u64, samples: usize, format: Format) -> Result<Self, CliError> {
        if ![3, 5, 7].contains(&p) {
            return Err(CliError::Usage(format!("--p must be an odd prime at most 7, got {p}")));
        }
        if dim == 0 || !dim.is_multiple_of(2) || dim > 4 {
            return Err(CliError::Usage(format!("--dim must be 2 or 4, got {dim}")));
        }
        Ok(RunConfig { p, n: dim / 2, seed, samples, float: format == Format::Float })
    }

    /// `p^{2n}` against `WEIL_MAX_CELLS` (default: the library limit).
    pub fn check_scale(&self) -> Result<(), CliError> {
        let limit = match std::env::var(MAX_CELLS_VAR) {
            Ok(v) => v
                .trim()
                .parse::<u128>()
                .map_err(|_| CliError::Usage(format!("{MAX_CELLS_VAR} must be a non-negative integer, got '{v}'")))?,
            Err(_) => DEFAULT_MAX_CELLS,
        };
        let cells = (self.p as u128).pow(2 * self.n as u32);
        if cells > limit {
            return Err(Error::ScaleGuard { what: format!("V = F_{}^{}", self.p, 2 * self.n), cells, limit }.into());
        }
        Ok(())
    }

    fn space(&self) -> Result<SymplecticSpace, CliError> {
        Ok(SymplecticSpace::standard(self.p, self.n)?)
    }

    fn subspace(&self, text: &str) -> Result<OrientedSubspace, CliError> {
        Ok(OrientedSubspace::parse(text, self.p, 2 * self.n)?)
    }
}

pub struct Outcome {
    pub doc: Value,
    pub csv: String,
    pub passed: bool,
}

impl Outcome {
    fn new(kind: &str, mut doc: Value, csv: String, passed: bool) -> Self {
        doc["kind"] = json!(kind);
        Outcome { doc, csv, passed }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv.clone(),
            Format::Json | Format::Float => {
                let mut s = serde_json::to_string_pretty(&self.doc).expect("plain data");
                s.push('\n');
                s
            }
        }
    }
}

fn float(x: &CycNum) -> FloatRender {
    x.into()
}

fn matrix_csv(m: &CycMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn gauss(cfg: &RunConfig) -> CmdResult {
    let g = gauss_sum(cfg.p)?;
    let square = g.pow(2);
    let (power, expected) = gauss_identity(cfg.p, cfg.n)?;
    let passed = power == expected;
    let mut doc = json!({
        "p": cfg.p,
        "n": cfg.n,
        "gauss_sum": g,
        "gauss_sum_text": g.to_string(),
        "gauss_sum_unreduced": gauss_sum_unreduced(cfg.p)?,
        "square": square,
        "square_text": square.to_string(),
        "power": power,
        "power_text": power.to_string(),
        "expected": expected,
        "expected_text": expected.to_string(),
        "verdict": if passed { "PASS" } else { "FAIL" },
    });
    if cfg.float {
        doc["float"] = json!({
            "gauss_sum": float(&g),
            "square": float(&square),
            "power": float(&power),
            "expected": float(&expected),
        });
    }
    let mut csv = String::from("quantity,exact\n");
    for (name, x) in [("gauss_sum", &g), ("square", &square), ("power", &power), ("expected", &expected)] {
        csv.push_str(&format!("{name},{x}\n"));
    }
    csv.push_str(&format!("verdict,{}\n", if passed { "PASS" } else { "FAIL" }));
    Ok(Outcome::new("gauss", doc, csv, passed))
}

pub fn lagrangians(cfg: &RunConfig, oriented: bool) -> CmdResult {
    let space = cfg.space()?;
    let items: Vec<String> = if oriented {
        space.oriented_lagrangians()?.iter().map(ToString::to_string).collect()
    } else {
        space.lagrangians()?.iter().map(ToString::to_string).collect()
    };
    let mut csv = String::from("index,subspace\n");
    for (i, s) in items.iter().enumerate() {
        csv.push_str(&format!("{i},{s}\n"));
    }
    let doc = json!({
        "p": cfg.p,
        "n": cfg.n,
        "oriented": oriented,
        "count": items.len(),
        "lagrangians": items,
    });
    Ok(Outcome::new("lagrangians", doc, csv, true))
}

pub fn intertwiner(cfg: &RunConfig, from: &str, to: &str, check: bool) -> CmdResult {
    let space = cfg.space()?;
    let (l, m) = (cfg.subspace(from)?, cfg.subspace(to)?);
    let t = canonical_t(&space, &m, &l, TMethod::ClosedForm)?;
    let mut doc = t.to_json(cfg.float);
    let mut passed = true;
    if check {
        let chained = canonical_t(&space, &m, &l, TMethod::Chained)?;
        passed = chained.matrix() == t.matrix();
        doc["chained"] = json!(chained.matrix());
        doc["agree"] = json!(passed);
    }
    Ok(Outcome::new("intertwiner", doc, matrix_csv(t.matrix()), passed))
}

pub fn kernel(cfg: &RunConfig, from: &str, to: &str) -> CmdResult {
    let space = cfg.space()?;
    let (l, m) = (cfg.subspace(from)?, cfg.subspace(to)?);
    let k = kernel_of(&canonical_t(&space, &m, &l, TMethod::ClosedForm)?)?;
    let mut doc = k.to_json();
    let mut csv = String::from("h,value\n");
    let support = doc["support"].as_array_mut().expect("support list");
    for entry in support.iter_mut() {
        let h = entry["h"].as_str().expect("label").to_string();
        let value: CycNum = serde_json::from_value(entry["value"].clone()).expect("round trip");
        csv.push_str(&format!("{h},{value}\n"));
        if cfg.float {
            entry["float"] = json!(float(&value));
        }
    }
    Ok(Outcome::new("kernel", doc, csv, true))
}

pub fn rep(cfg: &RunConfig, element: &str) -> CmdResult {
    let space = cfg.space()?;
    let holder = CanonicalSpace::new(&space)?;
    let g = SymplecticMap::parse(element, &space)?;
    let w = weil_rep(&holder, &g)?;
    let doc = w.to_json(&holder, cfg.float);
    Ok(Outcome::new("rep", doc, matrix_csv(&w.mat), true))
}

pub fn reduce(cfg: &RunConfig, isotropic: &str) -> CmdResult {
    let space = cfg.space()?;
    let holder = CanonicalSpace::new(&space)?;
    let iso = cfg.subspace(isotropic)?;
    let red = reduction_iso(&holder, &iso)?;
    let n_i = red.reduction.reduced().n();
    let expected = (cfg.p as usize).pow(n_i as u32);
    let restricted = red.restricted();
    let invertible = restricted.rows() == restricted.cols() && restricted.rank() == restricted.rows();
    let invariant_dim = red.invariant.cols();
    let passed = invariant_dim == expected && invertible;
    let mut doc = json!({
        "p": cfg.p,
        "n": cfg.n,
        "isotropic": iso.to_string(),
        "isotropic_dim": iso.sub().dim(),
        "reduced_n": n_i,
        "reduced_base": red.reduced.base().to_string(),
        "invariant_dim": invariant_dim,
        "expected_dim": expected,
        "invariant_basis": red.invariant,
        "alpha": red.alpha,
        "restricted": restricted,
        "invertible": invertible,
        "passed": passed,
    });
    if cfg.float {
        doc["float_restricted"] = json!(restricted.to_float_rows());
    }
    let csv = format!(
        "quantity,value\nisotropic_dim,{}\nreduced_n,{n_i}\ninvariant_dim,{invariant_dim}\nexpected_dim,{expected}\ninvertible,{invertible}\n",
        iso.sub().dim()
    );
    Ok(Outcome::new("reduce", doc, csv, passed))
}

pub fn pair(cfg: &RunConfig, at: Option<&str>) -> CmdResult {
    let space = cfg.space()?;
    let holder = CanonicalSpace::new(&space)?;
    let dual = dual_space(&holder)?;
    let at = match at {
        Some(text) => cfg.subspace(text)?,
        None => holder.base().clone(),
    };
    let gram = duality_gram(&dual, &holder, &at)?;
    let rank = gram.rank();
    let nondegenerate = rank == gram.rows();
    let mut doc = json!({
        "p": cfg.p,
        "n": cfg.n,
        "at": at.to_string(),
        "gram": gram,
        "rank": rank,
        "dim": gram.rows(),
        "nondegenerate": nondegenerate,
    });
    if cfg.float {
        doc["float_gram"] = json!(gram.to_float_rows());
    }
    Ok(Outcome::new("pair", doc, matrix_csv(&gram), nondegenerate))
}

pub fn verify(cfg: &RunConfig, suite: &str) -> CmdResult {
    let suite: Suite = suite.parse().map_err(|_| {
        let names: Vec<&str> = Suite::EACH.iter().map(|s| s.name()).chain(["all"]).collect();
        CliError::Usage(format!("unknown suite '{suite}'; expected one of {}", names.join(", ")))
    })?;
    let mut vc = VerifyConfig::new(cfg.p, cfg.n);
    vc.seed = cfg.seed;
    vc.samples = cfg.samples;
    let report = run_suite(suite, &vc)?;
    Ok(Outcome::new("verify", report.to_json(), report.to_csv(), report.passed))
}
