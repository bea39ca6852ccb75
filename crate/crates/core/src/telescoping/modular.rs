//! Evaluation/interpolation over random primes and points.
//!
//! The first prime runs three full confinements and keeps the data they agree
//! on; every later point replays the winning tracer and must reproduce the
//! same leading monomials and supports. Per prime, the entries of `[f]_η` and
//! of the matrix of `[L(·)]_η` are interpolated in `𝔽_p(t)`, the relation is
//! found over `𝔽_p(t)` and normalized, and the integer coefficients are lifted
//! across primes.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{confine, confinement_at, relation_from_matrix, ConfineOptions, DerivedPresentation, Telescoper};
use crate::arith::{random_prime, AdaptiveReconstructor, Field, PrimeField, RatFunField, RationalLifter, Rationals, UniPoly, QT};
use crate::error::{Error, Result};
use crate::reduction::Tracer;
use crate::weyl::{evaluate_and_reduce, Monomial};

/// Deliberate corruption, for exercising the consistency checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaultPlan {
    /// Adds one to the first coordinate of `[f]_η` at `(prime index, point index)`.
    pub corrupt_value: Option<(usize, usize)>,
    /// Perturbs the tracer of this one of the three voting runs.
    pub corrupt_tracer: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ModularConfig {
    pub seed: u64,
    pub rho: u32,
    pub workers: usize,
    pub max_primes: usize,
    /// Evaluation points allowed per prime.
    pub max_points: usize,
    /// Points evaluated per parallel round; fixed so that results do not
    /// depend on the worker count.
    pub batch: usize,
    pub degree_ceiling: u32,
    pub faults: FaultPlan,
}

impl Default for ModularConfig {
    fn default() -> Self {
        ModularConfig {
            seed: 0,
            rho: 1,
            workers: 1,
            max_primes: 64,
            max_points: 4096,
            batch: 16,
            degree_ceiling: super::DEFAULT_DEGREE_CEILING,
            faults: FaultPlan::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModularOutcome {
    pub telescoper: Telescoper,
    pub eta: Monomial,
    pub support: Vec<Monomial>,
    pub primes: Vec<u64>,
    /// Evaluation points fed to the reconstructors, over all primes.
    pub points: usize,
    /// Points dropped as unlucky (pole, basis or support mismatch, tracer).
    pub unlucky_points: usize,
    /// Interpolation candidates contradicted by a fresh value.
    pub rejected_candidates: usize,
    /// Values dropped as outliers by the interpolators.
    pub discarded_values: usize,
    /// Voting runs whose data disagreed with the majority.
    pub outvoted: usize,
    pub transcript: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
struct Fingerprint {
    leading: Vec<Monomial>,
    eta: Monomial,
    support: Vec<Monomial>,
    tracer: Tracer,
}

struct PointData {
    initial: Vec<u64>,
    images: Vec<Vec<u64>>,
}

fn specialize(pres: &DerivedPresentation<QT>, p: u64, a: u64) -> Result<DerivedPresentation<PrimeField>> {
    let src = pres.algebra();
    let alg = src.over(PrimeField::new(p))?;
    let ev = |op| evaluate_and_reduce(src, &alg, op, a);
    let gens = pres.generators().iter().map(ev).collect::<Result<Vec<_>>>()?;
    let lambda = pres
        .lambda()
        .iter()
        .map(|row| row.iter().map(ev).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let f = ev(pres.integrand())?;
    DerivedPresentation::new(alg, gens, lambda, f)
}

fn full_run(pres: &DerivedPresentation<QT>, p: u64, a: u64, cfg: &ModularConfig) -> Result<(Fingerprint, PointData)> {
    let sp = specialize(pres, p, a)?;
    let opts = ConfineOptions {
        degree_ceiling: cfg.degree_ceiling,
    };
    let conf = confine(&sp, cfg.rho, &opts)?;
    let fp = Fingerprint {
        leading: sp.basis().leading_monomials(),
        eta: conf.eta.clone(),
        support: conf.support.clone(),
        tracer: conf.eta_basis.tracer.clone(),
    };
    Ok((
        fp,
        PointData {
            initial: conf.initial,
            images: conf.images,
        },
    ))
}

fn replay_run(pres: &DerivedPresentation<QT>, p: u64, a: u64, fixed: &Fingerprint, rho: u32) -> Result<PointData> {
    let sp = specialize(pres, p, a)?;
    if sp.basis().leading_monomials() != fixed.leading {
        return Err(Error::Mismatch("leading monomials differ".into()));
    }
    let conf = confinement_at(&sp, &fixed.eta, &fixed.support, rho, Some(&fixed.tracer))?;
    Ok(PointData {
        initial: conf.initial,
        images: conf.images,
    })
}

/// Data-dependent failures that another point may avoid.
fn is_unlucky(e: &Error) -> bool {
    matches!(e, Error::Unlucky | Error::UnluckyTracer | Error::Mismatch(_))
}

fn corrupt(t: &Tracer, eta: &Monomial) -> Tracer {
    let mut skipped = t.skipped().to_vec();
    if skipped.pop().is_none() {
        skipped.push(eta.clone());
    }
    Tracer::from_skipped(skipped)
}

struct PrimeRun<'a> {
    pres: &'a DerivedPresentation<QT>,
    cfg: &'a ModularConfig,
    p: u64,
    rng: ChaCha8Rng,
    seen: HashSet<u64>,
    drawn: usize,
}

impl PrimeRun<'_> {
    fn draw(&mut self, n: usize) -> Result<Vec<u64>> {
        if self.drawn + n > self.cfg.max_points {
            return Err(Error::BudgetExhausted(format!(
                "more than {} evaluation points needed modulo {}",
                self.cfg.max_points, self.p
            )));
        }
        self.drawn += n;
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let a = self.rng.gen_range(0..self.p);
            if self.seen.insert(a) {
                out.push(a);
            }
        }
        Ok(out)
    }
}

pub fn telescope_modular(pres: &DerivedPresentation<QT>, cfg: &ModularConfig) -> Result<ModularOutcome> {
    if cfg.workers == 0 || cfg.batch == 0 || cfg.max_primes == 0 || cfg.max_points == 0 {
        return Err(Error::Invalid("budgets must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    pool.install(|| run(pres, cfg))
}

fn run(pres: &DerivedPresentation<QT>, cfg: &ModularConfig) -> Result<ModularOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut transcript = vec![format!("seed {}", cfg.seed)];
    let mut fixed: Option<Fingerprint> = None;
    let mut lifters: Vec<(Vec<usize>, RationalLifter)> = Vec::new();
    let mut used = HashSet::new();
    let mut out = ModularOutcome {
        telescoper: Telescoper::from_integers(vec![vec![1.into()]])?,
        eta: Monomial::one(pres.algebra().n(), false),
        support: Vec::new(),
        primes: Vec::new(),
        points: 0,
        unlucky_points: 0,
        rejected_candidates: 0,
        discarded_values: 0,
        outvoted: 0,
        transcript: Vec::new(),
    };
    for pi in 0..cfg.max_primes {
        let p = loop {
            let p = random_prime(&mut rng);
            if used.insert(p) {
                break p;
            }
        };
        out.primes.push(p);
        let mut run = PrimeRun {
            pres,
            cfg,
            p,
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            seen: HashSet::new(),
            drawn: 0,
        };
        let mut first: Vec<(u64, PointData)> = Vec::new();
        if fixed.is_none() {
            let (fp, data) = vote(&mut run, &mut transcript, &mut out)?;
            out.eta = fp.eta.clone();
            out.support = fp.support.clone();
            fixed = Some(fp);
            first = data;
        }
        let fp = fixed.as_ref().unwrap();
        let rel = interpolate_relation(&mut run, fp, first, pi, &mut transcript, &mut out)?;
        let layout: Vec<usize> = rel.iter().map(|c| c.coeffs().len()).collect();
        let values: Vec<u64> = rel
            .iter()
            .zip(&layout)
            .flat_map(|(c, &len)| (0..len).map(move |i| c.coeffs()[i]))
            .collect();
        transcript.push(format!(
            "prime {p}: relation of order {} with degrees {:?}",
            rel.len() - 1,
            layout.iter().map(|l| l.saturating_sub(1)).collect::<Vec<_>>()
        ));
        let lifter = match lifters.iter_mut().find(|(l, _)| *l == layout) {
            Some((_, lf)) => lf,
            None => {
                lifters.push((layout.clone(), RationalLifter::new()));
                &mut lifters.last_mut().unwrap().1
            }
        };
        if lifter.feed(p, &values)? {
            let q = Rationals;
            let flat = lifter.result().unwrap();
            let mut polys = Vec::new();
            let mut at = 0;
            for &len in &layout {
                polys.push(UniPoly::from_coeffs(&q, flat[at..at + len].to_vec()));
                at += len;
            }
            out.telescoper = Telescoper::from_rational(&polys)?;
            transcript.push(format!("lifted after {} primes: {}", out.primes.len(), out.telescoper));
            out.transcript = transcript;
            return Ok(out);
        }
    }
    Err(Error::BudgetExhausted(format!(
        "coefficients did not stabilize within {} primes",
        cfg.max_primes
    )))
}

/// Three full runs at distinct points; the data of the majority is kept.
fn vote(
    run: &mut PrimeRun,
    transcript: &mut Vec<String>,
    out: &mut ModularOutcome,
) -> Result<(Fingerprint, Vec<(u64, PointData)>)> {
    let mut runs: Vec<(u64, Fingerprint, PointData)> = Vec::new();
    while runs.len() < 3 {
        let pts = run.draw(3 - runs.len())?;
        let (pres, cfg, p) = (run.pres, run.cfg, run.p);
        let res: Vec<_> = pts.par_iter().map(|&a| full_run(pres, p, a, cfg)).collect();
        for (a, r) in pts.into_iter().zip(res) {
            match r {
                Ok((fp, d)) => runs.push((a, fp, d)),
                Err(e) if is_unlucky(&e) => {
                    out.unlucky_points += 1;
                    transcript.push(format!("prime {p}: point {a} unlucky ({e})"));
                }
                Err(e) => return Err(e),
            }
        }
    }
    if let Some(i) = run.cfg.faults.corrupt_tracer {
        if let Some(r) = runs.get_mut(i) {
            r.1.tracer = corrupt(&r.1.tracer, &r.1.eta);
        }
    }
    let winner = (0..3)
        .find(|&i| runs.iter().filter(|r| r.1 == runs[i].1).count() >= 2)
        .ok_or_else(|| Error::Inconsistent("the three tracer runs disagree pairwise".into()))?;
    let fp = runs[winner].1.clone();
    let mut kept = Vec::new();
    for (a, f, d) in runs {
        if f == fp {
            kept.push((a, d));
        } else {
            out.outvoted += 1;
            transcript.push(format!("prime {}: run at point {a} outvoted", run.p));
        }
    }
    transcript.push(format!(
        "confinement: eta of degree {}, {} basis monomials, {} skipped candidates",
        fp.eta.degree(),
        fp.support.len(),
        fp.tracer.skipped().len()
    ));
    Ok((fp, kept))
}

fn interpolate_relation(
    run: &mut PrimeRun,
    fp: &Fingerprint,
    first: Vec<(u64, PointData)>,
    prime_index: usize,
    transcript: &mut Vec<String>,
    out: &mut ModularOutcome,
) -> Result<Vec<UniPoly<u64>>> {
    let k = PrimeField::new(run.p);
    let nb = fp.support.len();
    let mut recs = vec![AdaptiveReconstructor::new(k); nb + nb * nb];
    let corrupt_at = run.cfg.faults.corrupt_value;
    let mut fed = 0usize;
    let mut feed = |a: u64, d: PointData, recs: &mut [AdaptiveReconstructor]| -> Result<()> {
        let mut values: Vec<u64> = d.initial;
        values.extend(d.images.into_iter().flatten());
        if corrupt_at == Some((prime_index, fed)) && !values.is_empty() {
            values[0] = k.add(&values[0], &1);
        }
        fed += 1;
        for (r, v) in recs.iter_mut().zip(values) {
            if !r.is_done() {
                r.feed(a, v)?;
            }
        }
        Ok(())
    };
    for (a, d) in first {
        feed(a, d, &mut recs)?;
    }
    while !recs.iter().all(|r| r.is_done()) {
        let pts = run.draw(run.cfg.batch)?;
        let (pres, p, rho) = (run.pres, run.p, run.cfg.rho);
        let res: Vec<_> = pts.par_iter().map(|&a| replay_run(pres, p, a, fp, rho)).collect();
        for (a, r) in pts.into_iter().zip(res) {
            if recs.iter().all(|r| r.is_done()) {
                break;
            }
            match r {
                Ok(d) => feed(a, d, &mut recs)?,
                Err(e) if is_unlucky(&e) => {
                    out.unlucky_points += 1;
                    transcript.push(format!("prime {p}: point {a} unlucky ({e})"));
                }
                Err(e) => return Err(e),
            }
        }
    }
    let rejected: usize = recs.iter().map(|r| r.rejections()).sum();
    let discarded: usize = recs.iter().map(|r| r.discarded().len()).sum();
    out.points += fed;
    out.rejected_candidates += rejected;
    out.discarded_values += discarded;
    transcript.push(format!(
        "prime {}: {fed} points, {rejected} rejected candidates, {discarded} discarded values",
        run.p
    ));
    let kt = RatFunField::new(k);
    let mut vals = recs.into_iter().map(|r| r.result().unwrap().clone());
    let initial: Vec<_> = vals.by_ref().take(nb).collect();
    let images: Vec<Vec<_>> = (0..nb).map(|_| vals.by_ref().take(nb).collect()).collect();
    relation_from_matrix(&kt, &initial, &images)
}
