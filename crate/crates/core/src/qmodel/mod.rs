//! Monte Carlo simulator for the Q-model of creative careers.
//!
//! Each author has a fixed ability `Q` with `ln Q ~ Normal(mu_q, sigma_q)`.
//! Each of their works gets an independent luck factor `P` with
//! `ln P ~ Normal(mu_p, sigma_p)`, and its impact is `c10 = Q * P`.
//!
//! Only `mu_q + mu_p` is identifiable from impacts; `mu_p` defaults to 0 so
//! the scale lives in `Q`.

mod rng;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sieve::{LabeledRanking, SieveError, SieveReport};

pub use rng::NormalStream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("career has no works")]
    EmptyCareer,
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QModelParams {
    pub mu_q: f64,
    pub sigma_q: f64,
    pub mu_p: f64,
    pub sigma_p: f64,
    /// Works per author; the median when `productivity_sigma` is set.
    pub papers_per_author: u32,
    /// Enables lognormal productivity: each author writes
    /// `max(1, round(papers_per_author * exp(productivity_sigma * Z)))` works.
    pub productivity_sigma: Option<f64>,
    pub population_size: usize,
    pub seed: u64,
}

impl Default for QModelParams {
    fn default() -> Self {
        Self {
            mu_q: 0.0,
            sigma_q: 0.5,
            mu_p: 0.0,
            sigma_p: 1.0,
            papers_per_author: 20,
            productivity_sigma: None,
            population_size: 2915,
            seed: 0,
        }
    }
}

impl QModelParams {
    pub fn validate(&self) -> Result<(), QModelError> {
        let bad = |m: &str| Err(QModelError::InvalidParams(m.to_string()));
        if !(self.mu_q.is_finite() && self.mu_p.is_finite()) {
            return bad("means must be finite");
        }
        if !(self.sigma_q >= 0.0 && self.sigma_q.is_finite()) {
            return bad("sigma_q must be finite and >= 0");
        }
        if !(self.sigma_p >= 0.0 && self.sigma_p.is_finite()) {
            return bad("sigma_p must be finite and >= 0");
        }
        if self.population_size < 2 {
            return bad("population_size must be >= 2");
        }
        if self.papers_per_author < 1 {
            return bad("papers_per_author must be >= 1");
        }
        if let Some(s) = self.productivity_sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return bad("productivity_sigma must be finite and >= 0");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Career {
    pub author_id: String,
    pub true_q: f64,
    /// c10 of each work.
    pub impacts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub params: QModelParams,
    pub careers: Vec<Career>,
    pub prize_labels: Option<Vec<bool>>,
}

impl Population {
    pub fn prize_count(&self) -> Option<usize> {
        self.prize_labels.as_ref().map(|l| l.iter().filter(|&&b| b).count())
    }
}

fn author_id(index: usize) -> String {
    format!("A{index:06}")
}

/// Draws a population. Author `i` uses stream `i` of the seeded generator:
/// one draw for `ln Q`, one for productivity when enabled, then one per work.
pub fn sample_population(params: &QModelParams) -> Result<Population, QModelError> {
    params.validate()?;
    let careers = (0..params.population_size)
        .map(|i| {
            let mut stream = NormalStream::new(params.seed, i as u64);
            let log_q = stream.normal(params.mu_q, params.sigma_q);
            let works = match params.productivity_sigma {
                None => params.papers_per_author as usize,
                Some(s) => {
                    let k = f64::from(params.papers_per_author) * (s * stream.standard_normal()).exp();
                    (k.round() as usize).max(1)
                }
            };
            let impacts =
                (0..works).map(|_| (log_q + stream.normal(params.mu_p, params.sigma_p)).exp()).collect();
            Career { author_id: author_id(i), true_q: log_q.exp(), impacts }
        })
        .collect();
    Ok(Population { params: params.clone(), careers, prize_labels: None })
}

/// Maximum-likelihood Q under the lognormal model:
/// `exp(mean(ln c10) - mu_p)`.
pub fn estimate_q(career: &Career, mu_p: f64) -> Result<f64, QModelError> {
    if career.impacts.is_empty() {
        return Err(QModelError::EmptyCareer);
    }
    let mean_log = career.impacts.iter().map(|c| c.ln()).sum::<f64>() / career.impacts.len() as f64;
    Ok((mean_log - mu_p).exp())
}

/// Stream ids at or above this are reserved for prize noise, so a prize seed
/// equal to the population seed never reuses an author's draws.
const PRIZE_STREAM_BASE: u64 = 1 << 63;

/// Labels the `n_prizes` authors with the largest `ln Q + Normal(0, noise_sigma)`.
/// Noise for author `i` comes from stream `PRIZE_STREAM_BASE + i` under
/// `seed`; ties go to the lower index.
pub fn assign_prizes(
    pop: &Population,
    n_prizes: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<Population, QModelError> {
    let n = pop.careers.len();
    if n_prizes == 0 || n_prizes >= n {
        return Err(QModelError::InvalidCounts(format!("need 1 <= n_prizes < {n}, got {n_prizes}")));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(QModelError::InvalidParams("noise_sigma must be finite and >= 0".into()));
    }
    let merit: Vec<f64> = pop
        .careers
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.true_q.ln() + NormalStream::new(seed, PRIZE_STREAM_BASE + i as u64).normal(0.0, noise_sigma)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| merit[b].total_cmp(&merit[a]).then(a.cmp(&b)));
    let mut labels = vec![false; n];
    for &i in &order[..n_prizes] {
        labels[i] = true;
    }
    Ok(Population { prize_labels: Some(labels), ..pop.clone() })
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub population: Population,
    /// Authors ranked by estimated Q.
    pub ranking: LabeledRanking,
    pub report: SieveReport,
}

impl Experiment {
    pub fn auc(&self) -> f64 {
        self.report.auc
    }
}

/// Samples a population with `params.seed`, awards prizes with
/// `prize_seed`, ranks authors by estimated Q and analyzes the sieve.
pub fn run_experiment(
    params: &QModelParams,
    n_prizes: usize,
    noise_sigma: f64,
    prize_seed: u64,
) -> Result<Experiment, QModelError> {
    let population = assign_prizes(&sample_population(params)?, n_prizes, noise_sigma, prize_seed)?;
    let labels = population.prize_labels.as_deref().expect("labels assigned");
    let rows = population
        .careers
        .iter()
        .zip(labels)
        .map(|(c, &won)| Ok((c.author_id.clone(), estimate_q(c, params.mu_p)?, won)))
        .collect::<Result<Vec<_>, QModelError>>()?;
    let ranking = LabeledRanking::build(rows)?;
    let report = ranking.analyze();
    Ok(Experiment { population, ranking, report })
}

/// Everything a simulation run needs, as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub mu_q: f64,
    pub sigma_q: f64,
    pub mu_p: f64,
    pub sigma_p: f64,
    pub papers_per_author: u32,
    pub productivity_sigma: Option<f64>,
    pub population_size: usize,
    pub seed: u64,
    pub n_prizes: usize,
    /// Spread of the non-Q component in prize decisions, on the ln Q scale.
    pub noise_sigma: f64,
}

pub const DEFAULT_N_PRIZES: usize = 25;
pub const DEFAULT_NOISE_SIGMA: f64 = 0.75;

impl Default for SimulationConfig {
    fn default() -> Self {
        let p = QModelParams::default();
        Self {
            mu_q: p.mu_q,
            sigma_q: p.sigma_q,
            mu_p: p.mu_p,
            sigma_p: p.sigma_p,
            papers_per_author: p.papers_per_author,
            productivity_sigma: p.productivity_sigma,
            population_size: p.population_size,
            seed: p.seed,
            n_prizes: DEFAULT_N_PRIZES,
            noise_sigma: DEFAULT_NOISE_SIGMA,
        }
    }
}

impl SimulationConfig {
    pub fn params(&self) -> QModelParams {
        QModelParams {
            mu_q: self.mu_q,
            sigma_q: self.sigma_q,
            mu_p: self.mu_p,
            sigma_p: self.sigma_p,
            papers_per_author: self.papers_per_author,
            productivity_sigma: self.productivity_sigma,
            population_size: self.population_size,
            seed: self.seed,
        }
    }

    /// Runs the experiment; the same seed drives population and prizes.
    pub fn run(&self) -> Result<Experiment, QModelError> {
        run_experiment(&self.params(), self.n_prizes, self.noise_sigma, self.seed)
    }
}
