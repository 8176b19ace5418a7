//! Verification suites: exact checks of every identity the library relies
//! on, exhaustive where the case count is small and seeded samples
//! otherwise. Reports are deterministic for a fixed configuration.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::canonical::{
    dual_space, duality_gram, duality_pairing, functor_matrix, gamma_action,
    pullback_matrix, reduction_iso, tensor_iso, total_idempotent, weil_rep, CanonicalSpace,
    CanonicalVector,
};
use crate::cyclotomic::{gauss_sum, CycNum};
use crate::error::{Error, Result};
use crate::field::legendre_symbol;
use crate::heisenberg::{
    commutant_dimension, heis_elements, heis_generators, heis_mul, sp_act_heis, HeisElement,
    ModelVector,
};
use crate::intertwine::{
    ansatz_kernel, chained_matrix_via, cocycle_c, cocycle_product, convolve,
    discriminant_lemma, identity_lemma, kernel_of, normalization, quotient_discriminant_lemma,
    quotient_identity_lemma, transform_matrix, Transport,
};
use crate::matrix::CycMatrix;
use crate::symplectic::{
    enumerate_sp, orientation_decompose, sample_sp, subspaces_of_dim, wedge_pairing_frames,
    OrientedSubspace, SpElement, SymplecticMap, SymplecticSpace,
};

/// Exhaustive enumeration is used when the case count is at most this.
pub const EXHAUSTIVE_LIMIT: usize = 4096;
/// Larger limit for checks that do not build intertwiners.
pub const CHEAP_EXHAUSTIVE_LIMIT: usize = 20_000;
/// `dim Γ(V)` above which the total idempotent is skipped.
pub const IDEMPOTENT_LIMIT: usize = 200;
/// Kernel convolutions cost `p^{2n+1}` terms each; exhaustive up to this many triples.
pub const CONVOLUTION_LIMIT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Gauss,
    Svn,
    Multiplicativity,
    ClosedForm,
    Kernels,
    Lemmas,
    Egorov,
    Homomorphism,
    Idempotent,
    Tensor,
    Duality,
    Reduction,
    All,
}

impl Suite {
    pub const EACH: [Suite; 12] = [
        Suite::Gauss,
        Suite::Svn,
        Suite::Multiplicativity,
        Suite::ClosedForm,
        Suite::Kernels,
        Suite::Lemmas,
        Suite::Egorov,
        Suite::Homomorphism,
        Suite::Idempotent,
        Suite::Tensor,
        Suite::Duality,
        Suite::Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gauss => "gauss",
            Suite::Svn => "svn",
            Suite::Multiplicativity => "multiplicativity",
            Suite::ClosedForm => "closed-form",
            Suite::Kernels => "kernels",
            Suite::Lemmas => "lemmas",
            Suite::Egorov => "egorov",
            Suite::Homomorphism => "homomorphism",
            Suite::Idempotent => "idempotent",
            Suite::Tensor => "tensor",
            Suite::Duality => "duality",
            Suite::Reduction => "reduction",
            Suite::All => "all",
        }
    }

    fn salt(self) -> u64 {
        Suite::EACH.iter().position(|s| *s == self).unwrap_or(99) as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
}

impl VerifyConfig {
    pub fn new(p: u64, n: usize) -> Self {
        VerifyConfig {
            p,
            n,
            seed: 0,
            samples: 500,
        }
    }

    fn rng(&self, suite: Suite, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(suite.salt() * 1000 + stream);
        rng
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub exhaustive: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    /// The first failing case, with both sides of the identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub p: u64,
    pub dim: usize,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check,cases,failures,exhaustive,passed\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.suite,
                c.name,
                c.cases,
                c.failures,
                c.exhaustive,
                if c.skipped.is_some() { "skipped" } else if c.passed { "true" } else { "false" }
            ));
        }
        out
    }
}

/// Runs `f` on every case in parallel; `Ok(None)` is a pass, `Ok(Some(w))`
/// a failure with witness `w`. Errors count as failures.
fn run_cases<C: Sync>(name: &str, cases: &[C], exhaustive: bool, f: impl Fn(&C) -> Result<Option<Value>> + Sync) -> CheckReport {
    let results: Vec<Option<Value>> = cases
        .par_iter()
        .map(|c| f(c).unwrap_or_else(|e| Some(json!({ "error": e.to_string() }))))
        .collect();
    let failures = results.iter().filter(|r| r.is_some()).count();
    CheckReport {
        name: name.to_string(),
        cases: cases.len(),
        failures,
        exhaustive,
        passed: failures == 0,
        skipped: None,
        witness: results.into_iter().flatten().next(),
    }
}

fn skipped(name: &str, why: String) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        cases: 0,
        failures: 0,
        exhaustive: false,
        passed: true,
        skipped: Some(why),
        witness: None,
    }
}

fn verdict(ok: bool, witness: impl FnOnce() -> Value) -> Option<Value> {
    if ok {
        None
    } else {
        Some(witness())
    }
}

fn mats_witness(label: Value, lhs: &CycMatrix, rhs: &CycMatrix) -> Value {
    json!({ "case": label, "lhs": lhs, "rhs": rhs })
}

/// All `k`-tuples of indices below `len` if there are at most `limit`,
/// otherwise `samples` seeded tuples.
fn tuples(len: usize, k: usize, limit: usize, samples: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<usize>>, bool) {
    let total = len.checked_pow(k as u32).unwrap_or(usize::MAX);
    if total <= limit {
        let all = (0..total)
            .map(|mut i| {
                let mut t = vec![0; k];
                for slot in t.iter_mut().rev() {
                    *slot = i % len;
                    i /= len;
                }
                t
            })
            .collect();
        (all, true)
    } else {
        let picked = (0..samples)
            .map(|_| (0..k).map(|_| rng.random_range(0..len)).collect())
            .collect();
        (picked, false)
    }
}

fn labels(lags: &[OrientedSubspace], t: &[usize]) -> Value {
    json!(t.iter().map(|&i| lags[i].to_string()).collect::<Vec<_>>())
}

fn group_sample(space: &SymplecticSpace, count: usize, rng: &mut ChaCha8Rng) -> (Vec<SpElement>, bool) {
    let p = space.p() as usize;
    if space.dim() == 2 && p * (p * p - 1) <= 2 * count {
        if let Ok(all) = enumerate_sp(space) {
            return (all, true);
        }
    }
    (sample_sp(space, count, rng.random()), false)
}

fn context(cfg: &VerifyConfig) -> Result<(SymplecticSpace, Arc<CanonicalSpace>, Vec<OrientedSubspace>)> {
    let space = SymplecticSpace::standard(cfg.p, cfg.n)?;
    let holder = CanonicalSpace::new(&space)?;
    let lags = space.oriented_lagrangians()?;
    Ok((space, holder, lags))
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let checks = if suite == Suite::All {
        let mut all = Vec::new();
        for s in Suite::EACH {
            for mut c in checks_for(s, cfg)? {
                c.name = format!("{}/{}", s.name(), c.name);
                all.push(c);
            }
        }
        all
    } else {
        checks_for(suite, cfg)?
    };
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        p: cfg.p,
        dim: 2 * cfg.n,
        seed: cfg.seed,
        samples: cfg.samples,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn checks_for(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::Gauss => gauss_suite(cfg),
        Suite::Svn => svn_suite(cfg),
        Suite::Multiplicativity => multiplicativity_suite(cfg),
        Suite::ClosedForm => closed_form_suite(cfg),
        Suite::Kernels => kernels_suite(cfg),
        Suite::Lemmas => lemmas_suite(cfg),
        Suite::Egorov => egorov_suite(cfg),
        Suite::Homomorphism => homomorphism_suite(cfg),
        Suite::Idempotent => idempotent_suite(cfg),
        Suite::Tensor => tensor_suite(cfg),
        Suite::Duality => duality_suite(cfg),
        Suite::Reduction => reduction_suite(cfg),
        Suite::All => unreachable!("expanded by run_suite"),
    }
}

/// `G₁^{2k} = p^k·σ((−1)^k)` for `k = 1..=max(n,3)`.
pub fn gauss_identity(p: u64, k: usize) -> Result<(CycNum, CycNum)> {
    let g = gauss_sum(p)?;
    let lhs = g.pow(2 * k as u32);
    let sign = legendre_symbol(if k.is_multiple_of(2) { 1 } else { p - 1 }, p) as i64;
    let rhs = CycNum::from_int(p, (p as i64).pow(k as u32) * sign);
    Ok((lhs, rhs))
}

fn gauss_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let ks: Vec<usize> = (1..=cfg.n.max(3)).collect();
    Ok(vec![run_cases("gauss-identity", &ks, true, |&k| {
        let (lhs, rhs) = gauss_identity(cfg.p, k)?;
        Ok(verdict(lhs == rhs, || json!({ "n": k, "lhs": lhs, "rhs": rhs })))
    })])
}

fn svn_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, holder, lags) = context(cfg)?;
    let commutant = run_cases("commutant-dimension", &lags, true, |l| {
        let d = commutant_dimension(&*holder.model(l)?)?;
        Ok(verdict(d == 1, || json!({ "model": l.to_string(), "dimension": d })))
    });
    let zs: Vec<(usize, u64)> = (0..lags.len()).flat_map(|i| (1..cfg.p).map(move |z| (i, z))).collect();
    let central = run_cases("central-character", &zs, true, |&(i, z)| {
        let model = holder.model(&lags[i])?;
        let m = model.pi_matrix(&HeisElement::central(space.dim(), z));
        let expected = CycMatrix::identity(cfg.p, model.dim()).scale(&CycNum::root(cfg.p, z));
        Ok(verdict(m == expected, || mats_witness(json!([lags[i].to_string(), z]), &m, &expected)))
    });
    let mut rng = cfg.rng(Suite::Svn, 0);
    let elements = heis_elements(&space);
    let (pairs, exhaustive) = tuples(elements.len(), 2, EXHAUSTIVE_LIMIT, cfg.samples, &mut rng);
    let model = holder.base_model();
    let representation = run_cases("representation", &pairs, exhaustive, |t| {
        let (a, b) = (&elements[t[0]], &elements[t[1]]);
        let lhs = model.pi_matrix(&heis_mul(&space, a, b)?);
        let rhs = model.pi_matrix(a).mul(&model.pi_matrix(b));
        Ok(verdict(lhs == rhs, || mats_witness(json!([a.to_string(), b.to_string()]), &lhs, &rhs)))
    });
    Ok(vec![commutant, central, representation])
}

fn multiplicativity_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, _, lags) = context(cfg)?;
    let transport = Transport::new(&space);
    let mut rng = cfg.rng(Suite::Multiplicativity, 0);
    let (triples, exhaustive) = tuples(lags.len(), 3, EXHAUSTIVE_LIMIT, cfg.samples, &mut rng);
    let triple = run_cases("triples", &triples, exhaustive, |t| {
        let (n, m, l) = (&lags[t[0]], &lags[t[1]], &lags[t[2]]);
        let lhs = transport.t(n, m)?.mul(&*transport.t(m, l)?);
        let rhs = transport.t(n, l)?;
        Ok(verdict(lhs == *rhs, || mats_witness(labels(&lags, t), &lhs, &rhs)))
    });
    let (pairs, exhaustive) = tuples(lags.len(), 2, EXHAUSTIVE_LIMIT, cfg.samples, &mut rng);
    let inverse = run_cases("round-trip", &pairs, exhaustive, |t| {
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let lhs = transport.t(l, m)?.mul(&*transport.t(m, l)?);
        Ok(verdict(lhs.is_identity(), || mats_witness(labels(&lags, t), &lhs, &CycMatrix::identity(cfg.p, lhs.rows()))))
    });
    let diagonal = run_cases("diagonal-identity", &lags, true, |l| {
        let t = transport.t(l, l)?;
        Ok(verdict(t.is_identity(), || json!({ "case": l.to_string(), "matrix": *t })))
    });
    Ok(vec![triple, inverse, diagonal])
}

fn closed_form_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, _, lags) = context(cfg)?;
    let transport = Transport::new(&space);
    let f = space.field();
    let mut rng = cfg.rng(Suite::ClosedForm, 0);
    let (pairs, exhaustive) = tuples(lags.len(), 2, EXHAUSTIVE_LIMIT, cfg.samples, &mut rng);
    // for every pair: all valid middles at n = 1, otherwise up to three
    let all_middles = lags.len() <= 32;
    let agreement = run_cases("chained-all-middles", &pairs, exhaustive, |t| {
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let closed = transport.t(m, l)?;
        let middles: Vec<&OrientedSubspace> = lags
            .iter()
            .filter(|s| space.in_general_position(s.sub(), m.sub()) && space.in_general_position(s.sub(), l.sub()))
            .take(if all_middles { usize::MAX } else { 3 })
            .collect();
        if middles.is_empty() {
            return Err(Error::Internal("no transverse middle".into()));
        }
        for s in middles {
            let chained = chained_matrix_via(&*transport.model(m)?, &*transport.model(s)?, &*transport.model(l)?)?;
            if chained != *closed {
                return Ok(Some(json!({
                    "case": labels(&lags, t), "middle": s.to_string(), "closed_form": *closed, "chained": chained,
                })));
            }
        }
        Ok(None)
    });
    let scalars: Vec<u64> = (2..cfg.p).collect();
    let covariance = run_cases("orientation-covariance", &pairs[..pairs.len().min(64)], exhaustive && pairs.len() <= 64, |t| {
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let base = transport.t(m, l)?;
        for &c in &scalars {
            let rescaled = transport.t(m, &l.rescaled(c)?)?;
            let expected = base.scale_rational(&crate::cyclotomic::Rational::from_integer(legendre_symbol(c, cfg.p).into()));
            if *rescaled != expected {
                return Ok(Some(mats_witness(json!([m.to_string(), l.to_string(), c]), &rescaled, &expected)));
            }
        }
        Ok(None)
    });
    let gauge = run_cases("normalization-gauge", &pairs[..pairs.len().min(256)], exhaustive && pairs.len() <= 256, |t| {
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let i = m.sub().intersect(l.sub())?;
        let (sm, sl) = (orientation_decompose(m, &i)?, orientation_decompose(l, &i)?);
        let arg = |sm: &crate::symplectic::OrientationSplit, sl: &crate::symplectic::OrientationSplit| -> Result<u64> {
            let w = wedge_pairing_frames(&space, &sl.quotient, &sm.quotient)?;
            Ok(f.mul(w, f.mul(sl.iota, f.inv(sm.iota).ok_or(Error::ZeroOrientation)?)))
        };
        let before = legendre_symbol(arg(&sm, &sl)?, cfg.p);
        for c in 1..cfg.p {
            for d in 1..cfg.p {
                let after = legendre_symbol(arg(&sm.regauged(c)?, &sl.regauged(d)?)?, cfg.p);
                if c == d && after != before {
                    return Ok(Some(json!({ "case": labels(&lags, t), "gauge": c, "before": before, "after": after })));
                }
            }
        }
        Ok(None)
    });
    let examples = run_cases("normalization-diagonal", &lags, true, |l| {
        let mut bad = None;
        for c in 1..cfg.p {
            let a = normalization(&space, &l.rescaled(c)?, l)?;
            let expected = CycNum::from_int(cfg.p, legendre_symbol(c, cfg.p) as i64);
            if a != expected {
                bad = Some(json!({ "case": l.to_string(), "scale": c, "value": a, "expected": expected }));
                break;
            }
        }
        Ok(bad)
    });
    Ok(vec![agreement, covariance, gauge, examples])
}

fn kernels_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, _, lags) = context(cfg)?;
    let transport = Transport::new(&space);
    let mut rng = cfg.rng(Suite::Kernels, 0);
    let elements = heis_elements(&space);
    let (pairs, exhaustive) = tuples(lags.len(), 2, EXHAUSTIVE_LIMIT, cfg.samples, &mut rng);
    let small_h = elements.len() <= 125;
    let probe: Vec<HeisElement> = if small_h {
        elements.clone()
    } else {
        heis_generators(&space)
            .into_iter()
            .chain((0..20).map(|_| elements[rng.random_range(0..elements.len())].clone()))
            .collect()
    };
    let intertwining = run_cases("intertwining", &pairs, exhaustive && small_h, |t| {
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let it = transport.intertwiner(m, l)?;
        Ok(verdict(it.intertwines(&probe), || json!({ "case": labels(&lags, t) })))
    });
    let transverse: Vec<Vec<usize>> = pairs
        .iter()
        .filter(|t| space.in_general_position(lags[t[0]].sub(), lags[t[1]].sub()))
        .cloned()
        .collect();
    let ansatz = run_cases("ansatz-kernel", &transverse, exhaustive, |t| {
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let k = ansatz_kernel(&transport.model(m)?, &transport.model(l)?)?;
        let lhs = transform_matrix(&k);
        let rhs = transport.t(m, l)?;
        Ok(verdict(lhs == *rhs, || mats_witness(labels(&lags, t), &lhs, &rhs)))
    });
    let inverse = run_cases("kernel-of-inverts-transform", &pairs, exhaustive, |t| {
        let it = transport.intertwiner(&lags[t[0]], &lags[t[1]])?;
        let lhs = transform_matrix(&kernel_of(&it)?);
        Ok(verdict(lhs == *it.matrix(), || mats_witness(labels(&lags, t), &lhs, it.matrix())))
    });
    let count = if exhaustive { 200.min(cfg.samples.max(1)) } else { cfg.samples.min(200) };
    let (triples, all_triples) = tuples(lags.len(), 3, CONVOLUTION_LIMIT, count, &mut rng);
    let convolution = run_cases("convolution-composition", &triples, all_triples, |t| {
        let (n, m, l) = (&lags[t[0]], &lags[t[1]], &lags[t[2]]);
        let k1 = kernel_of(&transport.intertwiner(n, m)?)?;
        let k2 = kernel_of(&transport.intertwiner(m, l)?)?;
        let k12 = convolve(&k1, &k2)?;
        let lhs = transform_matrix(&k12);
        let rhs = transform_matrix(&k1).mul(&transform_matrix(&k2));
        if lhs != rhs {
            return Ok(Some(mats_witness(labels(&lags, t), &lhs, &rhs)));
        }
        // kernel multiplicativity: K_{N,M} ∗ K_{M,L} = K_{N,L}
        let k13 = kernel_of(&transport.intertwiner(n, l)?)?;
        Ok(verdict(k12 == k13, || json!({ "case": labels(&lags, t), "convolved": k12.to_json(), "direct": k13.to_json() })))
    });
    Ok(vec![intertwining, ansatz, inverse, convolution])
}

fn lemmas_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, _, lags) = context(cfg)?;
    let mut rng = cfg.rng(Suite::Lemmas, 0);
    let transverse = |a: usize, b: usize| space.in_general_position(lags[a].sub(), lags[b].sub());
    let total = lags.len().pow(3);
    let exhaustive = total <= CHEAP_EXHAUSTIVE_LIMIT;
    let pick_triples = |rng: &mut ChaCha8Rng, ok: &dyn Fn(&[usize]) -> bool| -> Vec<Vec<usize>> {
        if exhaustive {
            tuples(lags.len(), 3, usize::MAX, 0, rng).0.into_iter().filter(|t| ok(t)).collect()
        } else {
            let want = cfg.samples.max(200);
            let mut out = Vec::with_capacity(want);
            while out.len() < want {
                let t: Vec<usize> = (0..3).map(|_| rng.random_range(0..lags.len())).collect();
                if ok(&t) {
                    out.push(t);
                }
            }
            out
        }
    };
    let pairwise = pick_triples(&mut rng, &|t| transverse(t[0], t[1]) && transverse(t[1], t[2]) && transverse(t[0], t[2]));
    // (M, L, S) with S transverse to M and L, any relative position of M and L
    let middle = pick_triples(&mut rng, &|t| transverse(t[0], t[2]) && transverse(t[2], t[1]));
    let get = |t: &[usize]| (&lags[t[0]], &lags[t[1]], &lags[t[2]]);

    let discr = run_cases("discriminant", &pairwise, exhaustive, |t| {
        let (n, m, l) = get(t);
        let c = discriminant_lemma(&space, n, m, l)?;
        Ok(verdict(c.holds(), || json!({ "case": labels(&lags, t), "diagonalized": c.diagonalized, "wedge": c.wedge })))
    });
    let identity = run_cases("identity", &pairwise, exhaustive, |t| {
        let (n, m, l) = get(t);
        let (lhs, rhs) = identity_lemma(&space, n, m, l)?;
        Ok(verdict(lhs == rhs, || json!({ "case": labels(&lags, t), "lhs": lhs, "rhs": rhs })))
    });
    let cocycle = run_cases("cocycle-direct", &pairwise, exhaustive, |t| {
        let (n, m, l) = get(t);
        let c = cocycle_c(&space, n, m, l)?;
        let rescaled = cocycle_c(&space, n, &m.rescaled(space.p() - 1)?, l)?;
        let ok = c.closed_form == c.direct && c.direct == c.gauss_type_sum && rescaled.closed_form == c.closed_form;
        Ok(verdict(ok, || json!({ "case": labels(&lags, t), "cocycle": {
            "closed_form": c.closed_form, "direct": c.direct, "gauss_type_sum": c.gauss_type_sum,
        }})))
    });
    let step = run_cases("normalization-times-cocycle", &pairwise, exhaustive, |t| {
        let (n, m, l) = get(t);
        let v = cocycle_product(&space, n, m, l)?;
        Ok(verdict(v.is_one(), || json!({ "case": labels(&lags, t), "product": v })))
    });
    let discr2 = run_cases("quotient-discriminant", &middle, exhaustive, |t| {
        let (m, l, s) = get(t);
        let q = quotient_discriminant_lemma(&space, m, l, s)?;
        Ok(verdict(q.holds(), || json!({
            "case": labels(&lags, t), "n_I": q.n_i, "gauss_type_sum": q.gauss_type_sum,
            "diagonal_form": q.diagonal_form, "diagonalized": q.discriminant.diagonalized, "wedge": q.discriminant.wedge,
        })))
    });
    let identity2 = run_cases("quotient-identity", &middle, exhaustive, |t| {
        let (m, l, s) = get(t);
        let (lhs, rhs) = quotient_identity_lemma(&space, m, l, s)?;
        Ok(verdict(lhs == rhs, || json!({ "case": labels(&lags, t), "lhs": lhs, "rhs": rhs })))
    });
    Ok(vec![discr, identity, cocycle, step, discr2, identity2])
}

fn egorov_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, holder, _) = context(cfg)?;
    let mut rng = cfg.rng(Suite::Egorov, 0);
    let (gs, all_g) = group_sample(&space, (cfg.samples / 10).max(20), &mut rng);
    let elements = heis_elements(&space);
    let all_h = elements.len() <= 125;
    let hs: Vec<HeisElement> = if all_h {
        elements
    } else {
        heis_generators(&space)
            .into_iter()
            .chain((0..20).map(|_| elements[rng.random_range(0..elements.len())].clone()))
            .collect()
    };
    let model = holder.base_model();
    let pis: Vec<CycMatrix> = hs.iter().map(|h| model.pi_matrix(h)).collect();
    let cases: Vec<(usize, usize)> = (0..gs.len()).flat_map(|i| (0..hs.len()).map(move |j| (i, j))).collect();
    let rhos: Vec<CycMatrix> = gs.par_iter().map(|g| weil_rep(&holder, g).map(|w| w.mat)).collect::<Result<_>>()?;
    let egorov = run_cases("egorov", &cases, all_g && all_h, |&(i, j)| {
        let lhs = rhos[i].mul(&pis[j]);
        let rhs = model.pi_matrix(&sp_act_heis(&gs[i], &hs[j])).mul(&rhos[i]);
        Ok(verdict(lhs == rhs, || mats_witness(json!({ "g": gs[i].mat(), "h": hs[j].to_string() }), &lhs, &rhs)))
    });
    let invertible = run_cases("invertible", &rhos, all_g, |m| Ok(verdict(m.rank() == m.rows(), || json!({ "matrix": m }))));
    Ok(vec![egorov, invertible])
}

fn homomorphism_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, holder, lags) = context(cfg)?;
    let mut rng = cfg.rng(Suite::Homomorphism, 0);
    let (gs, all_g) = group_sample(&space, cfg.samples, &mut rng);
    let pairs: Vec<(usize, usize)> = if all_g && gs.len() * gs.len() <= EXHAUSTIVE_LIMIT {
        (0..gs.len()).flat_map(|i| (0..gs.len()).map(move |j| (i, j))).collect()
    } else {
        (0..(cfg.samples / 2).max(100))
            .map(|_| (rng.random_range(0..gs.len()), rng.random_range(0..gs.len())))
            .collect()
    };
    let exhaustive = pairs.len() == gs.len() * gs.len();
    let rhos: Vec<CycMatrix> = gs.par_iter().map(|g| weil_rep(&holder, g).map(|w| w.mat)).collect::<Result<_>>()?;
    let hom = run_cases("rho-multiplicative", &pairs, exhaustive, |&(i, j)| {
        let lhs = weil_rep(&holder, &gs[i].compose(&gs[j])?)?.mat;
        let rhs = rhos[i].mul(&rhos[j]);
        Ok(verdict(lhs == rhs, || mats_witness(json!({ "g1": gs[i].mat(), "g2": gs[j].mat() }), &lhs, &rhs)))
    });
    let identity = run_cases("rho-identity", &[SymplecticMap::identity(&space)], true, |g| {
        let m = weil_rep(&holder, g)?.mat;
        Ok(verdict(m.is_identity(), || json!({ "matrix": m })))
    });

    // pull-back lemma for five elements over pairs of oriented Lagrangians
    let five: Vec<SpElement> = sample_sp(&space, 5, rng.random());
    let (lpairs, _) = tuples(lags.len(), 2, EXHAUSTIVE_LIMIT / 4, cfg.samples / 5, &mut rng);
    let cases: Vec<(usize, Vec<usize>)> = (0..five.len()).flat_map(|g| lpairs.iter().map(move |t| (g, t.clone()))).collect();
    let transport = holder.transport();
    let pullback = run_cases("pullback-lemma", &cases, false, |(gi, t)| {
        let g = &five[*gi];
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let (sl, rl) = pullback_matrix(g, l, 1)?;
        let (sm, rm) = pullback_matrix(g, m, 1)?;
        let lhs = transport.t(m, l)?.mul(&rl);
        let rhs = rm.mul(&*transport.t(&sm, &sl)?);
        Ok(verdict(lhs == rhs, || mats_witness(json!({ "g": g.mat(), "pair": labels(&lags, t) }), &lhs, &rhs)))
    });
    let fpairs: Vec<(SpElement, SpElement)> = (0..20).map(|_| {
        let a = sample_sp(&space, 1, rng.random()).remove(0);
        let b = sample_sp(&space, 1, rng.random()).remove(0);
        (a, b)
    }).collect();
    let contravariance = run_cases("functor-contravariant", &fpairs, false, |(f, g)| {
        let lhs = functor_matrix(&g.compose(f)?, &holder, &holder)?;
        let rhs = functor_matrix(f, &holder, &holder)?.mul(&functor_matrix(g, &holder, &holder)?);
        Ok(verdict(lhs == rhs, || mats_witness(json!({ "f": f.mat(), "g": g.mat() }), &lhs, &rhs)))
    });
    // moving the base point conjugates ρ by T_{B′,B}
    let bases: Vec<OrientedSubspace> = (0..4).map(|_| lags[rng.random_range(0..lags.len())].clone()).collect();
    let bcases: Vec<(usize, usize)> = (0..bases.len()).flat_map(|b| (0..gs.len().min(6)).map(move |g| (b, g))).collect();
    let base_change = run_cases("base-change", &bcases, false, |&(b, g)| {
        let other = CanonicalSpace::with_base(&space, &bases[b], 1)?;
        let lhs = weil_rep(&other, &gs[g])?.mat;
        let rhs = holder
            .t(&bases[b], holder.base())?
            .mul(&rhos[g])
            .mul(&*holder.t(holder.base(), &bases[b])?);
        Ok(verdict(lhs == rhs, || mats_witness(json!({ "base": bases[b].to_string(), "g": gs[g].mat() }), &lhs, &rhs)))
    });
    let sections = run_cases("horizontal-sections", &lpairs[..lpairs.len().min(64)], false, |t| {
        let v = CanonicalVector::new(&holder, (0..holder.dim()).map(|i| CycNum::root(cfg.p, i as u64 % cfg.p).scale_int(i as i64 + 1)).collect())?;
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let lhs = transport.t(m, l)?.apply(v.component(l)?.values());
        let rhs = v.component(m)?.values().to_vec();
        Ok(verdict(lhs == rhs, || json!({ "case": labels(&lags, t), "transported": lhs, "component": rhs })))
    });
    Ok(vec![hom, identity, pullback, contravariance, base_change, sections])
}

fn idempotent_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let space = SymplecticSpace::standard(cfg.p, cfg.n)?;
    let count = space.oriented_lagrangians()?.len() * (cfg.p as usize).pow(cfg.n as u32);
    if count > IDEMPOTENT_LIMIT {
        let why = format!("dim Γ(V) = {count} exceeds {IDEMPOTENT_LIMIT}");
        return Ok(vec![skipped("square", why.clone()), skipped("rank", why.clone()), skipped("sp-invariant", why)]);
    }
    let t = total_idempotent(&space)?;
    let sq = t.matrix.mul(&t.matrix);
    let square = run_cases("square", &[()], true, |_| Ok(verdict(sq == t.matrix, || mats_witness(json!(null), &sq, &t.matrix))));
    let expected = (cfg.p as usize).pow(cfg.n as u32);
    let complement = CycMatrix::identity(cfg.p, t.matrix.rows()).sub(&t.matrix);
    let rank = run_cases("rank", &[()], true, |_| {
        let (r, rc) = (t.matrix.rank(), complement.rank());
        let ok = r == expected && rc == t.matrix.rows() - expected && complement.mul(&complement) == complement;
        Ok(verdict(ok, || json!({ "rank": r, "complement_rank": rc, "expected": expected })))
    });
    let mut rng = cfg.rng(Suite::Idempotent, 0);
    let (gs, all_g) = group_sample(&space, 24, &mut rng);
    let invariant = run_cases("sp-invariant", &gs, all_g, |g| {
        let a = gamma_action(&space, &t.lagrangians, g)?;
        let (lhs, rhs) = (a.mul(&t.matrix), t.matrix.mul(&a));
        Ok(verdict(lhs == rhs, || json!({ "g": g.mat() })))
    });
    Ok(vec![square, rank, invariant])
}

/// `V₁ = V(p, 1)`, `V₂ = V(p, max(1, n−1))`.
fn tensor_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let v1 = SymplecticSpace::standard(cfg.p, 1)?;
    let v2 = SymplecticSpace::standard(cfg.p, cfg.n.saturating_sub(1).max(1))?;
    let (c1, c2) = (CanonicalSpace::new(&v1)?, CanonicalSpace::new(&v2)?);
    let iso = tensor_iso(&c1, &c2)?;
    let dims = run_cases("dimension", &[()], true, |_| {
        let (a, b, c) = (iso.product.dim(), c1.dim(), c2.dim());
        Ok(verdict(a == b * c && iso.alpha.rank() == a, || json!({ "product": a, "factors": [b, c] })))
    });
    let delta = run_cases("delta", &[()], true, |_| {
        let d = CanonicalVector::new(&iso.product, ModelVector::delta(iso.product.base_model()).values().to_vec())?;
        let lhs = iso.apply(&d)?;
        let d1 = ModelVector::delta(c1.base_model());
        let d2 = ModelVector::delta(c2.base_model());
        let rhs: Vec<CycNum> = d1.values().iter().flat_map(|a| d2.values().iter().map(move |b| a * b)).collect();
        Ok(verdict(lhs == rhs, || json!({ "alpha_delta": lhs, "delta_tensor_delta": rhs })))
    });
    let mut rng = cfg.rng(Suite::Tensor, 0);
    let count = (cfg.samples / 10).max(50);
    let pairs: Vec<(SpElement, SpElement)> = (0..count)
        .map(|_| (sample_sp(&v1, 1, rng.random()).remove(0), sample_sp(&v2, 1, rng.random()).remove(0)))
        .collect();
    let conj = run_cases("conjugation", &pairs, false, |(g1, g2)| {
        let big = weil_rep(&iso.product, &g1.product(g2)?)?.mat;
        let lhs = iso.alpha.mul(&big);
        let rhs = weil_rep(&c1, g1)?.mat.kron(&weil_rep(&c2, g2)?.mat).mul(&iso.alpha);
        Ok(verdict(lhs == rhs, || mats_witness(json!({ "g1": g1.mat(), "g2": g2.mat() }), &lhs, &rhs)))
    });
    Ok(vec![dims, delta, conj])
}

fn duality_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, holder, lags) = context(cfg)?;
    let dual = dual_space(&holder)?;
    let inverse = Transport::with_character(&space, cfg.p - 1);
    let mut rng = cfg.rng(Suite::Duality, 0);
    let delta = run_cases("delta-pairing", &[()], true, |_| {
        let a = CanonicalVector::new(&dual, ModelVector::delta(dual.base_model()).values().to_vec())?;
        let b = CanonicalVector::new(&holder, ModelVector::delta(holder.base_model()).values().to_vec())?;
        let v = duality_pairing(&a, &b, holder.base())?;
        Ok(verdict(v.is_one(), || json!({ "value": v })))
    });
    let gram = run_cases("nondegenerate", &[()], true, |_| {
        let g = duality_gram(&dual, &holder, holder.base())?;
        Ok(verdict(g.rank() == g.rows(), || json!({ "gram": g })))
    });
    let base_gram = duality_gram(&dual, &holder, holder.base())?;
    let independent = run_cases("base-independent", &lags, true, |l| {
        let g = duality_gram(&dual, &holder, l)?;
        Ok(verdict(g == base_gram, || mats_witness(json!(l.to_string()), &g, &base_gram)))
    });
    let (pairs, exhaustive) = tuples(lags.len(), 2, EXHAUSTIVE_LIMIT, cfg.samples, &mut rng);
    let lemma = run_cases("dual-transport-lemma", &pairs, exhaustive, |t| {
        let (m, l) = (&lags[t[0]], &lags[t[1]]);
        let lhs = dual.t(m, l)?;
        let rhs = inverse.t(m, l)?;
        Ok(verdict(*lhs == *rhs, || mats_witness(labels(&lags, t), &lhs, &rhs)))
    });
    Ok(vec![delta, gram, independent, lemma])
}

fn reduction_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let (space, holder, _) = context(cfg)?;
    let mut rng = cfg.rng(Suite::Reduction, 0);
    let f = space.field();
    // up to four oriented isotropic subspaces per dimension 0..=n
    let mut isos: Vec<OrientedSubspace> = Vec::new();
    for k in 0..=cfg.n {
        let candidates: Vec<_> = subspaces_of_dim(cfg.p, space.dim(), k)
            .into_iter()
            .filter(|s| space.is_isotropic(s))
            .collect();
        let take = candidates.len().min(4);
        for _ in 0..take {
            let s = candidates[rng.random_range(0..candidates.len())].clone();
            isos.push(OrientedSubspace::new(s, rng.random_range(1..cfg.p))?);
        }
    }
    isos.sort_by_key(|i| i.to_string());
    isos.dedup();
    let dimension = run_cases("invariant-dimension", &isos, false, |i| {
        let r = reduction_iso(&holder, i)?;
        let expected = (cfg.p as usize).pow((cfg.n - i.dim()) as u32);
        let ok = r.invariant.cols() == expected && r.restricted().rank() == expected;
        Ok(verdict(ok, || json!({ "isotropic": i.to_string(), "dim": r.invariant.cols(), "expected": expected })))
    });
    let independent = run_cases("base-independent", &isos, false, |i| {
        let r = reduction_iso(&holder, i)?;
        let base = r.restricted();
        for l in r.reduction.reduced().oriented_lagrangians()? {
            let other = r.alpha_at(&l)?.mul(&r.invariant);
            if other != base {
                return Ok(Some(mats_witness(json!([i.to_string(), l.to_string()]), &other, &base)));
            }
        }
        Ok(None)
    });
    let seeds: Vec<u64> = isos.iter().map(|_| rng.random()).collect();
    let indexed: Vec<usize> = (0..isos.len()).collect();
    let equivariant = run_cases("stabilizer-equivariant", &indexed, false, |&k| {
        let r = reduction_iso(&holder, &isos[k])?;
        for g in r.reduction.sample_stabilizer(5, seeds[k]) {
            let gbar = r.reduction.induced(&g, &r.reduction)?;
            let lhs = r.alpha.mul(&weil_rep(&holder, &g)?.mat).mul(&r.invariant);
            let rhs = weil_rep(&r.reduced, &gbar)?.mat.mul(&r.restricted());
            if lhs != rhs {
                return Ok(Some(mats_witness(json!({ "isotropic": isos[k].to_string(), "g": g.mat() }), &lhs, &rhs)));
            }
        }
        Ok(None)
    });
    let natural = run_cases("naturality", &indexed, false, |&k| {
        let i = &isos[k];
        let ri = reduction_iso(&holder, i)?;
        for g in sample_sp(&space, 3, seeds[k] ^ 0x5eed) {
            let j = g.act_on_lagrangian(i)?;
            let rj = reduction_iso(&holder, &j)?;
            let g_red = ri.reduction.induced(&g, &rj.reduction)?;
            // H(g_I)∘α_J = α_I∘H(g) on H(V)^J
            let lhs = functor_matrix(&g_red, &ri.reduced, &rj.reduced)?.mul(&rj.alpha).mul(&rj.invariant);
            let rhs = ri.alpha.mul(&functor_matrix(&g, &holder, &holder)?).mul(&rj.invariant);
            if lhs != rhs {
                return Ok(Some(mats_witness(json!({ "isotropic": i.to_string(), "g": g.mat() }), &lhs, &rhs)));
            }
        }
        Ok(None)
    });
    let zero = OrientedSubspace::new(crate::symplectic::Subspace::zero(cfg.p, space.dim()), 1)?;
    let trivial = run_cases("zero-isotropic", &[zero], true, |i| {
        let r = reduction_iso(&holder, i)?;
        Ok(verdict(r.alpha.is_identity(), || json!({ "alpha": r.alpha })))
    });
    let lag_cases: Vec<OrientedSubspace> = isos.iter().filter(|i| i.dim() == cfg.n).cloned().collect();
    let distinguished = run_cases("distinguished-vector", &lag_cases, false, |l| {
        let v = crate::canonical::distinguished_vector(&holder, l)?;
        let model = holder.base_model();
        for b in l.sub().rows() {
            let moved = model.pi(&HeisElement::section(b.clone())).apply(v.value_at_base().values());
            if moved != v.value_at_base().values() {
                return Ok(Some(json!({ "lagrangian": l.to_string(), "vector": v.value_at_base().values() })));
            }
        }
        let scaled = crate::canonical::distinguished_vector(&holder, &l.rescaled(f.neg(1))?)?;
        let sign = CycNum::from_int(cfg.p, legendre_symbol(cfg.p - 1, cfg.p) as i64);
        let expected: Vec<CycNum> = v.value_at_base().values().iter().map(|x| x * &sign).collect();
        Ok(verdict(scaled.value_at_base().values() == expected.as_slice(), || json!({ "lagrangian": l.to_string() })))
    });
    Ok(vec![dimension, independent, equivariant, natural, trivial, distinguished])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain(&[Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn gauss_small() {
        let r = run_suite(Suite::Gauss, &VerifyConfig::new(3, 1)).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks[0].cases, 3);
    }

    #[test]
    fn tuples_exhaustive_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (t, ex) = tuples(2, 2, 10, 0, &mut rng);
        assert!(ex);
        assert_eq!(t, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
