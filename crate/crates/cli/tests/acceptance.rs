//! Acceptance run: one line per criterion, each with a pinned runtime budget.
//! Exact identities need no tolerance; the only pinned numbers are the case
//! counts and the budgets below.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use weil_core::canonical::{reduction_iso, CanonicalSpace};
use weil_core::symplectic::{OrientedSubspace, SymplecticSpace};
use weil_core::verify::{gauss_identity, run_suite, CheckReport, Suite, SuiteReport, VerifyConfig};

const BIN: &str = env!("CARGO_BIN_EXE_weil");
const TOTAL_BUDGET: Duration = Duration::from_secs(15 * 60);

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn suite(s: Suite, p: u64, n: usize, samples: usize) -> Result<SuiteReport, String> {
    let mut cfg = VerifyConfig::new(p, n);
    cfg.samples = samples;
    run_suite(s, &cfg).map_err(|e| format!("{s} at ({p},{n}): {e}"))
}

fn check<'a>(r: &'a SuiteReport, name: &str) -> Result<&'a CheckReport, String> {
    let c = r
        .checks
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| format!("{}: no check {name}", r.suite))?;
    if let Some(why) = &c.skipped {
        return Err(format!("{}/{name} at p={} skipped: {why}", r.suite, r.p));
    }
    if !c.passed {
        return Err(format!(
            "{}/{name} at (p={}, 2n={}): {} of {} cases fail; witness {}",
            r.suite,
            r.p,
            r.dim,
            c.failures,
            c.cases,
            c.witness.clone().unwrap_or_default()
        ));
    }
    Ok(c)
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every check passed and none was skipped; returns the total case count.
fn all_pass(r: &SuiteReport) -> Result<usize, String> {
    for c in &r.checks {
        check(r, &c.name)?;
    }
    Ok(r.checks.iter().map(|c| c.cases).sum())
}

fn exhaustive(r: &SuiteReport, name: &str, cases: usize) -> Result<(), String> {
    let c = check(r, name)?;
    require(c.exhaustive && c.cases == cases, || {
        format!("{}/{name}: expected {cases} exhaustive cases, got {} (exhaustive={})", r.suite, c.cases, c.exhaustive)
    })
}

fn at_least(r: &SuiteReport, name: &str, cases: usize) -> Result<(), String> {
    let c = check(r, name)?;
    require(c.cases >= cases, || format!("{}/{name}: {} cases, need at least {cases}", r.suite, c.cases))
}

fn gauss() -> Outcome {
    for p in [3u64, 5, 7] {
        for n in 1..=3 {
            let (lhs, rhs) = gauss_identity(p, n).map_err(|e| e.to_string())?;
            require(lhs == rhs, || format!("p={p} n={n}: {lhs} ≠ {rhs}"))?;
        }
    }
    Ok("9 (p, n) pairs exact".into())
}

fn svn() -> Outcome {
    let mut models = 0;
    for (p, n) in [(3, 1), (5, 1), (3, 2)] {
        let r = suite(Suite::Svn, p, n, 500)?;
        models += check(&r, "commutant-dimension")?.cases;
        check(&r, "central-character")?;
    }
    Ok(format!("{models} models with commutant 1 and central character ψ"))
}

fn multiplicativity() -> Outcome {
    let r = suite(Suite::Multiplicativity, 3, 1, 500)?;
    all_pass(&r)?;
    exhaustive(&r, "triples", 512)?;
    let r5 = suite(Suite::Multiplicativity, 5, 1, 500)?;
    all_pass(&r5)?;
    at_least(&r5, "triples", 500)?;
    let r32 = suite(Suite::Multiplicativity, 3, 2, 200)?;
    all_pass(&r32)?;
    at_least(&r32, "triples", 200)?;
    Ok("512 exhaustive at (3,1); ≥500 at (5,1); ≥200 at (3,2)".into())
}

fn closed_form() -> Outcome {
    let r = suite(Suite::ClosedForm, 3, 1, 500)?;
    all_pass(&r)?;
    exhaustive(&r, "chained-all-middles", 64)?;
    exhaustive(&r, "orientation-covariance", 64)?;
    Ok("all 64 ordered pairs, every transverse middle".into())
}

fn kernels() -> Outcome {
    let r = suite(Suite::Kernels, 3, 1, 500)?;
    let total = all_pass(&r)?;
    for name in ["intertwining", "ansatz-kernel", "kernel-of-inverts-transform", "convolution-composition"] {
        require(check(&r, name)?.exhaustive, || format!("{name} was sampled"))?;
    }
    Ok(format!("{total} exhaustive cases at (3,1)"))
}

fn lemmas() -> Outcome {
    let r = suite(Suite::Lemmas, 3, 1, 500)?;
    all_pass(&r)?;
    for c in &r.checks {
        require(c.exhaustive && c.cases > 0, || format!("lemmas/{} at (3,1) not exhaustive", c.name))?;
    }
    let r5 = suite(Suite::Lemmas, 5, 1, 200)?;
    all_pass(&r5)?;
    for c in &r5.checks {
        require(c.exhaustive || c.cases >= 200, || format!("lemmas/{} at (5,1): {} cases", c.name, c.cases))?;
    }
    Ok(format!("{} lemma checks exhaustive at (3,1), ≥200 cases each at (5,1)", r.checks.len()))
}

fn weil() -> Outcome {
    let h = suite(Suite::Homomorphism, 3, 1, 500)?;
    all_pass(&h)?;
    exhaustive(&h, "rho-multiplicative", 576)?;
    let e = suite(Suite::Egorov, 3, 1, 500)?;
    all_pass(&e)?;
    exhaustive(&e, "egorov", 24 * 27)?;
    for (p, n) in [(5, 1), (3, 2)] {
        all_pass(&suite(Suite::Homomorphism, p, n, 200)?)?;
        all_pass(&suite(Suite::Egorov, p, n, 200)?)?;
    }
    Ok("576 products and 648 Egorov pairs at (3,1); sampled at (5,1), (3,2)".into())
}

fn idempotent() -> Outcome {
    let r = suite(Suite::Idempotent, 3, 1, 500)?;
    all_pass(&r)?;
    for name in ["square", "rank", "sp-invariant"] {
        check(&r, name)?;
    }
    Ok("T² = T, rank 3, Sp-invariant on Γ(V) at (3,1)".into())
}

fn compatibilities() -> Outcome {
    let t = suite(Suite::Tensor, 3, 1, 500)?;
    all_pass(&t)?;
    at_least(&t, "conjugation", 50)?;
    let d = suite(Suite::Duality, 3, 1, 500)?;
    all_pass(&d)?;
    exhaustive(&d, "dual-transport-lemma", 64)?;
    let r = suite(Suite::Reduction, 3, 2, 200)?;
    all_pass(&r)?;
    // the dim I = 1 case explicitly
    let space = SymplecticSpace::standard(3, 2).map_err(|e| e.to_string())?;
    let holder = CanonicalSpace::new(&space).map_err(|e| e.to_string())?;
    let line = OrientedSubspace::parse("rows=0,1,0,0|o=1", 3, 4).map_err(|e| e.to_string())?;
    let red = reduction_iso(&holder, &line).map_err(|e| e.to_string())?;
    require(red.invariant.cols() == 3, || format!("dim H(V)^I = {}", red.invariant.cols()))?;
    Ok("tensor 50 pairs; duality exhaustive; reduction at 2n=4 incl. dim I = 1".into())
}

fn determinism() -> Outcome {
    let args = ["verify", "--suite", "all", "--p", "3", "--dim", "2", "--seed", "0"];
    let runs: Vec<_> = (0..2)
        .map(|_| Command::new(BIN).args(args).env_remove("WEIL_MAX_CELLS").output())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for out in &runs {
        require(out.status.code() == Some(0), || {
            format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
    }
    require(runs[0].stdout == runs[1].stdout, || "reports differ".into())?;
    Ok(format!("two runs, {} identical bytes, exit 0", runs[0].stdout.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "Gauss identity", budget: secs(1), run: gauss },
        Criterion { id: 2, title: "Stone-von Neumann", budget: secs(60), run: svn },
        Criterion { id: 3, title: "multiplicativity", budget: secs(300), run: multiplicativity },
        Criterion { id: 4, title: "closed form = chained", budget: secs(60), run: closed_form },
        Criterion { id: 5, title: "intertwining and kernels", budget: secs(120), run: kernels },
        Criterion { id: 6, title: "normalization lemmas", budget: secs(120), run: lemmas },
        Criterion { id: 7, title: "Weil representation", budget: secs(300), run: weil },
        Criterion { id: 8, title: "total idempotent", budget: secs(60), run: idempotent },
        Criterion { id: 9, title: "tensor, duality, reduction", budget: secs(300), run: compatibilities },
        Criterion { id: 10, title: "determinism", budget: secs(300), run: determinism },
    ];
    let start = Instant::now();
    let mut failed = 0;
    for c in &criteria {
        let t = Instant::now();
        let result = (c.run)();
        let took = t.elapsed();
        let (verdict, detail) = match result {
            Ok(d) if took > c.budget => ("FAIL", format!("over budget; {d}")),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {verdict} {:<28} {:>7.2}s / {:>4}s  {detail}",
            c.id,
            c.title,
            took.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    let total = start.elapsed();
    let over = total > TOTAL_BUDGET;
    println!(
        "total {:.1}s / {}s budget; {} of {} criteria pass{}",
        total.as_secs_f64(),
        TOTAL_BUDGET.as_secs(),
        criteria.len() - failed,
        criteria.len(),
        if over { " (total over budget)" } else { "" }
    );
    if failed > 0 || over {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
