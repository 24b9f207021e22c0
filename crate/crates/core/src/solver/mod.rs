//! Capacity-achieving discrete inputs by escalation in the number of mass
//! points, certified by the KKT condition on the information density.
//!
//! Inputs are searched over symmetric laws only. For each `K` the solver
//! refines a few candidates (the maxentropic law and the previous optimum
//! grown by one point) by alternating a Newton-type weight step with a
//! golden-section sweep over the nonnegative mass-point locations. `K`
//! grows until `s(x; F) <= rate + tol` on the verification grid with
//! equality at every mass point.

pub mod distribution;
mod objective;
mod polish;
mod weights;

pub use distribution::DiscreteDistribution;

use crate::channel::{equivalent_channel, ChannelParams};
use crate::error::{Error, Result};
use crate::optim::golden_section_max;
use distribution::MIN_RELATIVE_GAP;
use objective::Objective;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const MAX_SWEEPS: usize = 400;
const SWEEP_IMPROVEMENT: f64 = 1e-14;
const MIN_ORBIT_MASS: f64 = 1e-13;
const NEW_POINT_MASS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub kkt_tolerance: f64,
    pub kkt_grid_size: usize,
    pub max_k: usize,
    pub inner_opt_tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            kkt_tolerance: 1e-6,
            kkt_grid_size: 2001,
            max_k: 64,
            inner_opt_tolerance: 1e-9,
            restarts: 8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kkt_tolerance > 0.0 && self.inner_opt_tolerance > 0.0) {
            return Err(Error::InvalidParameter(
                "tolerances must be positive".into(),
            ));
        }
        if self.kkt_grid_size < 2 || self.max_k < 2 {
            return Err(Error::InvalidParameter(
                "kkt_grid_size and max_k must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// One sample of the information density `s(x; F)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktPoint {
    pub x: f64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub distribution: DiscreteDistribution,
    pub rate_nats: f64,
    pub num_points_k: usize,
    pub kkt_max_violation: f64,
    /// Verification grid plus the mass points, sorted by `x`.
    pub kkt_grid: Vec<KktPoint>,
    pub converged: bool,
    /// Simplex stationarity residual of the final weight step.
    pub weight_residual: f64,
    /// Best rate found at each support size tried, starting from `K = 2`.
    pub rate_by_k: Vec<f64>,
}

/// Capacity of `Y = X + N`, `N ~ N(0, sigma^2)`, `|X| <= amplitude`.
pub fn plain_capacity(amplitude: f64, sigma: f64, cfg: &SolverConfig) -> Result<SolverReport> {
    for (name, v) in [("amplitude", amplitude), ("sigma", sigma)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    cfg.validate()?;
    Search::new(Objective::plain(amplitude, sigma), cfg).run()
}

/// Secret-key capacity: the maximum over discrete inputs of the rate of the
/// equivalent wiretap channel.
pub fn secret_key_capacity(params: &ChannelParams, cfg: &SolverConfig) -> Result<SolverReport> {
    cfg.validate()?;
    let eq = equivalent_channel(params);
    Search::new(
        Objective::secret_key(params.amplitude(), eq.sigma_eq(), eq.sigma_e()),
        cfg,
    )
    .run()
}

/// Orbits `{-a, +a}` (a single point when `a = 0`) with total masses.
#[derive(Debug, Clone)]
struct Candidate {
    locs: Vec<f64>,
    masses: Vec<f64>,
}

impl Candidate {
    fn num_points(&self) -> usize {
        self.locs
            .iter()
            .map(|&a| if a == 0.0 { 1 } else { 2 })
            .sum()
    }

    fn has_zero(&self) -> bool {
        self.locs.first() == Some(&0.0)
    }

    fn normalize(&mut self) {
        let total: f64 = self.masses.iter().sum();
        self.masses.iter_mut().for_each(|q| *q /= total);
    }

    fn sort(&mut self) {
        let mut pairs: Vec<(f64, f64)> = self
            .locs
            .iter()
            .copied()
            .zip(self.masses.iter().copied())
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        (self.locs, self.masses) = pairs.into_iter().unzip();
    }

    fn maxentropic(amplitude: f64, k: usize) -> Self {
        let step = 2.0 * amplitude / (k - 1) as f64;
        let mut locs = Vec::new();
        let mut masses = Vec::new();
        for i in (k / 2)..k {
            let a = if i + 1 == k {
                amplitude
            } else {
                (-amplitude + step * i as f64).max(0.0)
            };
            let a = if 2 * i + 1 == k { 0.0 } else { a };
            locs.push(a);
            masses.push(if a == 0.0 { 1.0 } else { 2.0 } / k as f64);
        }
        let mut c = Self { locs, masses };
        c.normalize();
        c
    }

    fn to_distribution(&self) -> Result<DiscreteDistribution> {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for (&a, &q) in self.locs.iter().zip(&self.masses) {
            if a == 0.0 {
                pts.push((0.0, q));
            } else {
                pts.push((-a, 0.5 * q));
                pts.push((a, 0.5 * q));
            }
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pts.iter().map(|p| p.1).sum();
        let (points, probs) = pts.into_iter().map(|(x, p)| (x, p / total)).unzip();
        DiscreteDistribution::new(points, probs)
    }
}

#[derive(Debug, Clone)]
struct Refined {
    cand: Candidate,
    rate: f64,
    residual: f64,
}

struct Profile {
    /// `s(x)` on the nonnegative half of the grid, ascending in `x`.
    half_x: Vec<f64>,
    half_s: Vec<f64>,
    mass_s: Vec<f64>,
    violation: f64,
}

struct Search<'a> {
    obj: Objective,
    cfg: &'a SolverConfig,
    amplitude: f64,
    gap: f64,
}

impl<'a> Search<'a> {
    fn new(obj: Objective, cfg: &'a SolverConfig) -> Self {
        let amplitude = obj.amplitude;
        Self {
            obj,
            cfg,
            amplitude,
            gap: MIN_RELATIVE_GAP * amplitude,
        }
    }

    fn run(&self) -> Result<SolverReport> {
        let mut best: Option<Refined> = None;
        let mut profile: Option<Profile> = None;
        let mut last_violation = f64::INFINITY;
        let mut history = Vec::new();
        for k in 2..=self.cfg.max_k {
            let mut starts = vec![Candidate::maxentropic(self.amplitude, k)];
            if let (Some(b), Some(p)) = (&best, &profile) {
                if let Some(c) = self.grow(&b.cand, k, p) {
                    starts.push(c);
                }
            }
            let previous_rate = best.as_ref().map_or(f64::NEG_INFINITY, |b| b.rate);
            let round = self.best_of(starts);
            best = Some(Self::better(best, round));
            let mut b = best.clone().expect("candidate present");
            let mut p = self.profile(&b);
            let stalled = b.rate - previous_rate <= self.cfg.inner_opt_tolerance;
            if p.violation > self.cfg.kkt_tolerance && (stalled || k == self.cfg.max_k) {
                let restarted = self.restarts(&b, k);
                if let Some(r) = restarted.filter(|r| r.rate > b.rate) {
                    b = r;
                    p = self.profile(&b);
                    best = Some(b.clone());
                }
            }
            last_violation = p.violation;
            history.push(b.rate);
            if p.violation <= self.cfg.kkt_tolerance {
                return self.report(&b, &p, history);
            }
            profile = Some(p);
        }
        Err(Error::NoConvergence {
            max_k: self.cfg.max_k,
            violation: last_violation,
        })
    }

    fn better(a: Option<Refined>, b: Refined) -> Refined {
        match a {
            Some(a) if a.rate >= b.rate => a,
            _ => b,
        }
    }

    fn best_of(&self, starts: Vec<Candidate>) -> Refined {
        starts
            .into_par_iter()
            .map(|c| self.refine(c))
            .collect::<Vec<_>>()
            .into_iter()
            .reduce(|a, b| if b.rate > a.rate { b } else { a })
            .expect("at least one start")
    }

    fn restarts(&self, from: &Refined, k: usize) -> Option<Refined> {
        if self.cfg.restarts == 0 {
            return None;
        }
        let starts: Vec<Candidate> = (0..self.cfg.restarts)
            .map(|r| {
                let seed = self.cfg.seed
                    ^ ((k as u64) << 32)
                    ^ (r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                self.perturb(&from.cand, k, r % 2 == 1, &mut rng)
            })
            .collect();
        Some(self.best_of(starts))
    }

    /// A random `k`-point symmetric start: a jittered copy of `base` when it
    /// already has `k` points, otherwise fresh random locations.
    fn perturb(&self, base: &Candidate, k: usize, fresh: bool, rng: &mut ChaCha8Rng) -> Candidate {
        let a = self.amplitude;
        let mut locs: Vec<f64> = if !fresh && base.num_points() == k {
            base.locs
                .iter()
                .map(|&x| {
                    if x == 0.0 {
                        0.0
                    } else {
                        let z: f64 = StandardNormal.sample(rng);
                        (x + 0.1 * a * z).clamp(0.05 * a, a)
                    }
                })
                .collect()
        } else {
            let mut v: Vec<f64> = (0..k / 2).map(|_| rng.random_range(0.05 * a..=a)).collect();
            if k % 2 == 1 {
                v.push(0.0);
            }
            v
        };
        if let Some(m) = locs
            .iter_mut()
            .filter(|x| **x > 0.0)
            .max_by(|x, y| x.total_cmp(y))
        {
            *m = a;
        }
        locs.sort_by(|x, y| x.total_cmp(y));
        locs.dedup_by(|x, y| (*x - *y).abs() < 1e-3 * a);
        let masses = locs.iter().map(|_| Exp1.sample(rng)).collect();
        let mut c = Candidate { locs, masses };
        c.normalize();
        c
    }

    /// Adds points to `base` until it has `k`, at the largest local maxima
    /// of the information density.
    fn grow(&self, base: &Candidate, k: usize, profile: &Profile) -> Option<Candidate> {
        let have = base.num_points();
        if have >= k {
            return None;
        }
        let mut c = base.clone();
        c.masses.iter_mut().for_each(|q| *q *= 1.0 - NEW_POINT_MASS);
        let mut hints = self.hints(&c, profile).into_iter();
        let mut need = k - have;
        if need % 2 == 1 {
            if c.has_zero() {
                let first = c.locs.get(1).copied().unwrap_or(self.amplitude);
                c.locs[0] = 0.25 * first;
                c.masses[0] += NEW_POINT_MASS;
            } else {
                c.locs.insert(0, 0.0);
                c.masses.insert(0, NEW_POINT_MASS);
            }
            need -= 1;
        }
        while need >= 2 {
            let x = hints.next()?;
            c.locs.push(x);
            c.masses.push(NEW_POINT_MASS);
            need -= 2;
        }
        c.sort();
        c.normalize();
        Some(c)
    }

    /// Positive local maxima of `s(x) - rate` away from existing locations,
    /// best first.
    fn hints(&self, cand: &Candidate, profile: &Profile) -> Vec<f64> {
        let xs = &profile.half_x;
        let s = &profile.half_s;
        let spacing = if xs.len() > 1 {
            xs[1] - xs[0]
        } else {
            self.amplitude
        };
        let mut peaks: Vec<(f64, f64)> = (0..xs.len())
            .filter(|&i| {
                let left = i == 0 || s[i] >= s[i - 1];
                let right = i + 1 == xs.len() || s[i] >= s[i + 1];
                left && right && xs[i] > 0.0
            })
            .filter(|&i| cand.locs.iter().all(|&a| (a - xs[i]).abs() > 2.0 * spacing))
            .map(|i| (xs[i], s[i]))
            .collect();
        peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut out: Vec<f64> = peaks.into_iter().map(|p| p.0).collect();
        // fall back to the widest gaps between existing orbits
        let mut edges: Vec<f64> = cand.locs.clone();
        edges.push(self.amplitude);
        let mut gaps: Vec<(f64, f64)> = edges
            .windows(2)
            .map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0]))
            .collect();
        gaps.sort_by(|a, b| b.1.total_cmp(&a.1));
        out.extend(gaps.into_iter().map(|g| g.0).filter(|&x| x > 0.0));
        out
    }

    /// Alternating weight and location optimisation at a fixed support size.
    fn refine(&self, mut cand: Candidate) -> Refined {
        let w_tol = 0.01 * self.cfg.inner_opt_tolerance;
        let mut rate = f64::NEG_INFINITY;
        for _ in 0..MAX_SWEEPS {
            let cols = self.obj.columns(&cand.locs);
            let (r, _) = weights::optimize_weights(&self.obj, &cols, &mut cand.masses, w_tol);
            if !self.prune(&mut cand) && r - rate <= SWEEP_IMPROVEMENT {
                break;
            }
            rate = r;
            self.sweep_locations(&mut cand);
            polish::polish(&self.obj, &mut cand.locs, &mut cand.masses, self.gap);
            self.prune(&mut cand);
        }
        let cols = self.obj.columns(&cand.locs);
        let (r, res) = weights::optimize_weights(&self.obj, &cols, &mut cand.masses, w_tol);
        self.prune(&mut cand);
        Refined {
            rate: r,
            residual: res,
            cand,
        }
    }

    /// Drops negligible orbits and merges orbits that have collided.
    fn prune(&self, cand: &mut Candidate) -> bool {
        let merge = 4.0 * self.gap;
        let mut locs: Vec<f64> = Vec::with_capacity(cand.locs.len());
        let mut masses: Vec<f64> = Vec::with_capacity(cand.locs.len());
        for (&a, &q) in cand.locs.iter().zip(&cand.masses) {
            if q < MIN_ORBIT_MASS {
                continue;
            }
            let a = if a <= merge { 0.0 } else { a };
            match (locs.last_mut(), masses.last_mut()) {
                (Some(prev), Some(qp)) if a - *prev <= merge => {
                    if *prev != 0.0 {
                        *prev = (*prev * *qp + a * q) / (*qp + q);
                    }
                    *qp += q;
                }
                _ => {
                    locs.push(a);
                    masses.push(q);
                }
            }
        }
        if locs == cand.locs && masses == cand.masses {
            return false;
        }
        *cand = Candidate { locs, masses };
        cand.normalize();
        true
    }

    fn sweep_locations(&self, cand: &mut Candidate) {
        let obj = &self.obj;
        let m = cand.locs.len();
        let mut cols = obj.columns(&cand.locs);
        let mut f: Vec<Vec<f64>> = cols
            .iter()
            .map(|c| Objective::mixture(c, &cand.masses))
            .collect();
        let tol = 1e-10 * self.amplitude;
        let mut buf = Vec::new();
        for i in 0..m {
            if cand.locs[i] == 0.0 {
                continue;
            }
            let lo = if i == 0 {
                self.gap
            } else {
                cand.locs[i - 1] + self.gap
            };
            let hi = if i + 1 == m {
                self.amplitude
            } else {
                cand.locs[i + 1] - self.gap
            };
            if hi <= lo {
                continue;
            }
            let q = cand.masses[i];
            let rest: Vec<Vec<f64>> = f
                .iter()
                .zip(&cols)
                .map(|(fc, c)| {
                    fc.iter()
                        .zip(&c[i])
                        .map(|(a, b)| (a - q * b).max(0.0))
                        .collect()
                })
                .collect();
            let value = |x: f64, buf: &mut Vec<f64>| -> f64 {
                let mut total = 0.0;
                for (ch, r) in obj.channels.iter().zip(&rest) {
                    ch.orbit_column(x, buf);
                    let h: f64 = ch
                        .rule
                        .weights
                        .iter()
                        .zip(r)
                        .zip(buf.iter())
                        .map(|((&w, &rv), &p)| {
                            let v = rv + q * p;
                            if v > 0.0 {
                                -w * v * v.ln()
                            } else {
                                0.0
                            }
                        })
                        .sum();
                    total += ch.sign * h;
                }
                total
            };
            let current = value(cand.locs[i], &mut buf);
            let (x, fx) = golden_section_max(|x| value(x, &mut buf), lo, hi, tol);
            if fx > current {
                cand.locs[i] = x;
                for (c, ch) in obj.channels.iter().enumerate() {
                    ch.orbit_column(x, &mut cols[c][i]);
                    for ((fv, r), p) in f[c].iter_mut().zip(&rest[c]).zip(&cols[c][i]) {
                        *fv = r + q * p;
                    }
                }
            }
        }
    }

    fn profile(&self, refined: &Refined) -> Profile {
        let n = self.cfg.kkt_grid_size;
        let a = self.amplitude;
        let grid = |j: usize| -a + 2.0 * a * j as f64 / (n - 1) as f64;
        let half_x: Vec<f64> = (n / 2..n).map(|j| grid(j).abs()).collect();
        let c = &refined.cand;
        let half_s = self.obj.density_profile(&c.locs, &c.masses, &half_x);
        let mass_s = self.obj.density_profile(&c.locs, &c.masses, &c.locs);
        let rate = refined.rate;
        let grid_excess = half_s
            .iter()
            .map(|s| s - rate)
            .fold(f64::NEG_INFINITY, f64::max);
        let mass_gap = mass_s.iter().map(|s| (s - rate).abs()).fold(0.0, f64::max);
        Profile {
            half_x,
            half_s,
            mass_s,
            violation: grid_excess.max(mass_gap).max(0.0),
        }
    }

    fn report(
        &self,
        refined: &Refined,
        profile: &Profile,
        rate_by_k: Vec<f64>,
    ) -> Result<SolverReport> {
        let n = self.cfg.kkt_grid_size;
        let a = self.amplitude;
        let offset = n / 2;
        let mut kkt_grid: Vec<KktPoint> = (0..n)
            .map(|j| {
                let x = -a + 2.0 * a * j as f64 / (n - 1) as f64;
                let h = if j >= offset {
                    j - offset
                } else {
                    n - 1 - j - offset
                };
                KktPoint {
                    x,
                    density: profile.half_s[h],
                }
            })
            .collect();
        for (&loc, &s) in refined.cand.locs.iter().zip(&profile.mass_s) {
            kkt_grid.push(KktPoint { x: loc, density: s });
            if loc > 0.0 {
                kkt_grid.push(KktPoint {
                    x: -loc,
                    density: s,
                });
            }
        }
        kkt_grid.sort_by(|p, q| p.x.total_cmp(&q.x));
        let distribution = refined.cand.to_distribution()?;
        Ok(SolverReport {
            num_points_k: distribution.len(),
            distribution,
            rate_nats: refined.rate,
            kkt_max_violation: profile.violation,
            kkt_grid,
            converged: true,
            weight_residual: refined.residual,
            rate_by_k,
        })
    }
}
