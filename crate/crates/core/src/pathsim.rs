//! Random-walk discretization of the spectrally negative stable process on a
//! uniform grid, reflected at its running supremum or infimum.

use serde::{Deserialize, Serialize};

use crate::dist::{
    draw_blocks_sized, mean_and_se, mom_xhat, stable_increment_draw, xhat_sample, LawKind, LawTag, Method,
    SamplePopulation,
};
use crate::error::{Error, Result};
use crate::specfun::StabilityIndex;
use crate::stats::ks_statistic;

/// Paths per RNG block.
pub const PATH_BLOCK: usize = 64;

const SUM_STREAM: u64 = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reflect {
    /// `X = S - Z`
    AtSupremum,
    /// `X̂ = Z - I`
    AtInfimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathConfig {
    pub alpha: StabilityIndex,
    pub n_steps: u32,
    pub n_paths: usize,
    pub seed: u64,
    pub reflect: Reflect,
    /// Terminal time; increments are rescaled by `(horizon/n)^{1/α}`.
    pub horizon: f64,
    /// Number of dyadic halvings of the last step (0 = plain uniform grid).
    /// The last step of length h becomes h/2, h/4, ..., h/2^k, h/2^k.
    pub terminal_refinement: u32,
}

impl PathConfig {
    pub fn new(alpha: StabilityIndex, n_steps: u32, n_paths: usize, seed: u64, reflect: Reflect) -> Self {
        PathConfig {
            alpha,
            n_steps,
            n_paths,
            seed,
            reflect,
            horizon: 1.0,
            terminal_refinement: 0,
        }
    }

    pub fn with_terminal_refinement(mut self, k: u32) -> Self {
        self.terminal_refinement = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_steps.is_power_of_two() {
            return Err(Error::Domain(format!("n_steps = {} must be a power of two", self.n_steps)));
        }
        if self.n_paths == 0 {
            return Err(Error::Domain("n_paths must be at least 1".into()));
        }
        if self.terminal_refinement > 60 {
            return Err(Error::Domain(format!("terminal_refinement = {} exceeds 60", self.terminal_refinement)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon = {} must be positive", self.horizon)));
        }
        Ok(())
    }

    fn law(&self) -> LawTag {
        let kind = match self.reflect {
            Reflect::AtSupremum => LawKind::XPathApprox,
            Reflect::AtInfimum => LawKind::XhatPathApprox,
        };
        LawTag {
            kind,
            alpha: self.alpha.alpha(),
            steps: Some(self.n_steps),
        }
    }
}

/// Terminal values of the reflected walk.
pub fn simulate_reflected(cfg: &PathConfig) -> Result<SamplePopulation> {
    cfg.validate()?;
    let a = cfg.alpha.alpha();
    let n = cfg.n_steps;
    let scale = (cfg.horizon / f64::from(n)).powf(1.0 / a);
    let reflect = cfg.reflect;
    let law = cfg.law();
    let k = cfg.terminal_refinement;
    // step lengths of the refined last step, in units of h
    let tail: Vec<f64> = if k == 0 {
        vec![1.0]
    } else {
        (1..=k).map(|j| 0.5f64.powi(j as i32)).chain([0.5f64.powi(k as i32)]).collect()
    };
    let tail_scale: Vec<f64> = tail.iter().map(|l| scale * l.powf(1.0 / a)).collect();
    let values = draw_blocks_sized(cfg.seed, law.kind.stream_tag(), cfg.n_paths, PATH_BLOCK, |rng| {
        let (mut z, mut hi, mut lo) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..n - 1 {
            z += scale * stable_increment_draw(a, rng);
            hi = hi.max(z);
            lo = lo.min(z);
        }
        for s in &tail_scale {
            z += s * stable_increment_draw(a, rng);
            hi = hi.max(z);
            lo = lo.min(z);
        }
        Ok(match reflect {
            Reflect::AtSupremum => hi - z,
            Reflect::AtInfimum => z - lo,
        })
    })?;
    Ok(SamplePopulation {
        values,
        law,
        seed: cfg.seed,
        n: cfg.n_paths,
        method: Method::PathDiscretized,
    })
}

/// Unreflected walk values at t = 1.
pub fn simulate_terminal(alpha: StabilityIndex, n_steps: u32, n_paths: usize, seed: u64) -> Result<SamplePopulation> {
    let cfg = PathConfig::new(alpha, n_steps, n_paths, seed, Reflect::AtInfimum);
    cfg.validate()?;
    let a = alpha.alpha();
    let scale = f64::from(n_steps).powf(-1.0 / a);
    let values = draw_blocks_sized(seed, SUM_STREAM, n_paths, PATH_BLOCK, |rng| {
        Ok((0..n_steps).map(|_| scale * stable_increment_draw(a, rng)).sum())
    })?;
    Ok(SamplePopulation {
        values,
        law: LawTag {
            kind: LawKind::StableIncrement,
            alpha: a,
            steps: Some(n_steps),
        },
        seed,
        n: n_paths,
        method: Method::PathDiscretized,
    })
}

/// Moment orders reported by [`bias_calibration`].
pub const CALIBRATION_ORDERS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasRung {
    pub n_steps: u32,
    /// KS distance between path X̂₁ and exact `T₁^{-1/α}` draws.
    pub ks: f64,
    /// `(s, relative gap of the path moment to E[X̂₁^s], standard error of that gap)`
    pub moment_gaps: Vec<(f64, f64, f64)>,
}

impl BiasRung {
    pub fn max_moment_gap(&self) -> f64 {
        self.moment_gaps.iter().map(|g| g.1.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasReport {
    pub alpha: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub terminal_refinement: u32,
    pub rungs: Vec<BiasRung>,
}

impl BiasReport {
    pub fn rung(&self, n_steps: u32) -> Option<&BiasRung> {
        self.rungs.iter().find(|r| r.n_steps == n_steps)
    }
}

/// Path-discretized X̂₁ against the exact law along a ladder of step counts.
pub fn bias_calibration(
    alpha: StabilityIndex,
    ladder: &[u32],
    n_paths: usize,
    seed: u64,
    terminal_refinement: u32,
) -> Result<BiasReport> {
    if ladder.len() < 3 {
        return Err(Error::Domain(format!("ladder has {} rungs, need at least 3", ladder.len())));
    }
    let exact = xhat_sample(alpha, n_paths, seed)?;
    let mut rungs = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let cfg = PathConfig::new(alpha, n, n_paths, seed, Reflect::AtInfimum).with_terminal_refinement(terminal_refinement);
        let path = simulate_reflected(&cfg)?;
        let mut moment_gaps = Vec::new();
        for s in CALIBRATION_ORDERS {
            let m = mom_xhat(alpha, s)?;
            let (mean, se) = mean_and_se(path.values.iter().map(|v| v.powf(s)));
            moment_gaps.push((s, mean / m - 1.0, se / m));
        }
        rungs.push(BiasRung {
            n_steps: n,
            ks: ks_statistic(&path.values, &exact.values),
            moment_gaps,
        });
    }
    Ok(BiasReport {
        alpha: alpha.alpha(),
        n_paths,
        seed,
        terminal_refinement,
        rungs,
    })
}
