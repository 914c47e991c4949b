//! Partially asymmetric exclusion on a finite window via the graphical
//! construction.
//!
//! The state is the height function itself: a right jump across bond
//! `(y, y+1)` turns a local minimum of `h` at `y` into a local maximum, a left
//! jump does the reverse. Every bond carries arrows at total rate 1, so the
//! superposed clock has rate equal to the number of bonds. Between two
//! observation times only the order of arrows matters, which lets us draw a
//! Poisson count and then that many independent (bond, direction) marks.
//! All coupled copies consume the same marks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::environment::sample_seed;
use crate::error::{config, domain, Result};

const IC_STREAM: u64 = 1;
const ARROW_STREAM: u64 = 2;

/// Initial particle configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PasepIc {
    /// Sites `<= 0` occupied.
    Step,
    /// Sites `<= 0` occupied with probability `rho`, sites `> 0` empty.
    StepBernoulli {
        rho: f64,
    },
    TwoSidedBernoulli {
        rho_minus: f64,
        rho_plus: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PasepConfig {
    /// Right-jump probability; left jumps happen with `1 - p`.
    pub p: f64,
    pub ic: PasepIc,
    /// Sites `-half_width..=half_width` are simulated.
    pub half_width: i64,
    pub horizon: f64,
    pub seed: u64,
    /// Largest `|x|` at which observables are read.
    pub monitor: i64,
    /// Light-cone safety factor on the horizon.
    pub margin: f64,
}

impl PasepConfig {
    /// Config with the smallest window passing the light-cone check.
    pub fn auto(
        p: f64,
        ic: PasepIc,
        horizon: f64,
        seed: u64,
        monitor: i64,
        margin: f64,
    ) -> Result<Self> {
        let half_width = (margin * horizon).ceil() as i64 + monitor.abs() + 1;
        let c = Self {
            p,
            ic,
            half_width,
            horizon,
            seed,
            monitor: monitor.abs(),
            margin,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.5 && self.p <= 1.0) {
            return config(format!("right rate p must lie in (1/2, 1], got {}", self.p));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return config(format!(
                "horizon must be finite and non-negative, got {}",
                self.horizon
            ));
        }
        if !(self.margin >= 1.0) {
            return config(format!(
                "light-cone margin must be at least 1, got {}",
                self.margin
            ));
        }
        let need = self.margin * self.horizon + self.monitor as f64;
        if (self.half_width as f64) <= need {
            return config(format!(
                "window half-width {} is inside the light cone (needs > {need:.1})",
                self.half_width
            ));
        }
        match self.ic {
            PasepIc::Step => {}
            PasepIc::StepBernoulli { rho } if (0.0..=1.0).contains(&rho) => {}
            PasepIc::TwoSidedBernoulli {
                rho_minus,
                rho_plus,
            } if (0.0..=1.0).contains(&rho_minus) && (0.0..=1.0).contains(&rho_plus) => {}
            _ => return config(format!("densities of {:?} must lie in [0, 1]", self.ic)),
        }
        Ok(())
    }

    /// Drift `p - q`.
    pub fn gamma(&self) -> f64 {
        2.0 * self.p - 1.0
    }
}

/// Height function on `[left - 1, -left]`, advanced in time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PasepState {
    left: i64,
    h: Vec<i64>,
}

impl PasepState {
    /// Occupations on `[left, right]` with `h(0) = 0`.
    pub fn from_occupation(left: i64, occupied: &[bool]) -> Self {
        let n = occupied.len() as i64;
        assert!(left <= 0 && left + n > 0, "window must contain the origin");
        let eta = |y: i64| occupied[(y - left) as usize];
        let mut h = vec![0i64; n as usize + 1];
        let at = |x: i64| (x - left + 1) as usize;
        for x in 1..left + n {
            h[at(x)] = h[at(x - 1)] + 1 - 2 * eta(x) as i64;
        }
        for x in (left - 1..0).rev() {
            h[at(x)] = h[at(x + 1)] - (1 - 2 * eta(x + 1) as i64);
        }
        Self { left, h }
    }

    /// State from a height function on `[left - 1, right]`.
    pub fn from_height(left: i64, right: i64, height: impl Fn(i64) -> i64) -> Result<Self> {
        let h: Vec<i64> = (left - 1..=right).map(height).collect();
        if h.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return domain("height increments must be +1 or -1");
        }
        Ok(Self { left, h })
    }

    /// Initial state of a config, with Bernoulli sites drawn from its seed.
    pub fn initial(cfg: &PasepConfig) -> Self {
        let l = cfg.half_width;
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, IC_STREAM));
        let occ: Vec<bool> = (-l..=l)
            .map(|y| {
                let rho = match cfg.ic {
                    PasepIc::Step => return y <= 0,
                    PasepIc::StepBernoulli { rho } => {
                        if y > 0 {
                            return false;
                        }
                        rho
                    }
                    PasepIc::TwoSidedBernoulli {
                        rho_minus,
                        rho_plus,
                    } => {
                        if y <= 0 {
                            rho_minus
                        } else {
                            rho_plus
                        }
                    }
                };
                rng.random::<f64>() < rho
            })
            .collect();
        Self::from_occupation(-l, &occ)
    }

    fn idx(&self, x: i64) -> Option<usize> {
        let k = x - self.left + 1;
        (k >= 0 && (k as usize) < self.h.len()).then_some(k as usize)
    }

    /// Sites `(left, right)` of the window.
    pub fn window(&self) -> (i64, i64) {
        (self.left, self.left + self.h.len() as i64 - 2)
    }

    pub fn height(&self, x: i64) -> Option<i64> {
        self.idx(x).map(|k| self.h[k])
    }

    pub fn occupied(&self, y: i64) -> Option<bool> {
        let (l, r) = self.window();
        (l..=r).contains(&y).then(|| {
            let k = (y - self.left + 1) as usize;
            self.h[k] < self.h[k - 1]
        })
    }

    pub fn particle_count(&self) -> usize {
        self.h.windows(2).filter(|w| w[1] < w[0]).count()
    }

    /// Applies one arrow on bond `(y, y+1)`.
    #[inline]
    fn arrow(&mut self, y: i64, right: bool) {
        let k = (y - self.left + 1) as usize;
        let (a, c) = (self.h[k - 1], self.h[k + 1]);
        let b = self.h[k];
        if a != c {
            return;
        }
        if right && b < a {
            self.h[k] = b + 2;
        } else if !right && b > a {
            self.h[k] = b - 2;
        }
    }

    /// Pointwise `self <= other` on the common window.
    pub fn dominated_by(&self, other: &PasepState) -> bool {
        self.left == other.left
            && self.h.len() == other.h.len()
            && self.h.iter().zip(&other.h).all(|(a, b)| a <= b)
    }
}

/// Poisson arrow marks, generated lazily in time order.
pub struct ArrowEnvironment {
    rng: ChaCha8Rng,
    left: i64,
    bonds: u64,
    threshold: u64,
    time: f64,
}

impl ArrowEnvironment {
    pub fn new(cfg: &PasepConfig) -> Self {
        let bonds = 2 * cfg.half_width as u64;
        // The low 32 bits of each draw decide the direction.
        let threshold = (cfg.p * (1u64 << 32) as f64) as u64;
        Self {
            rng: ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, ARROW_STREAM)),
            left: -cfg.half_width,
            bonds,
            threshold,
            time: 0.0,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Draws the arrows in `(time, until]` and applies each to every state.
    pub fn advance(&mut self, until: f64, states: &mut [&mut PasepState]) {
        if until <= self.time {
            return;
        }
        let mean = self.bonds as f64 * (until - self.time);
        self.time = until;
        let count = if mean > 0.0 {
            Poisson::new(mean).map_or(0, |d| d.sample(&mut self.rng) as u64)
        } else {
            0
        };
        for _ in 0..count {
            let r: u64 = self.rng.random();
            let bond = ((r >> 32) * self.bonds) >> 32;
            let right = (r & 0xffff_ffff) < self.threshold;
            let y = self.left + bond as i64;
            for s in states.iter_mut() {
                s.arrow(y, right);
            }
        }
    }
}

/// States at the requested increasing times.
pub fn simulate(cfg: &PasepConfig, times: &[f64]) -> Result<Vec<PasepState>> {
    simulate_from(cfg, PasepState::initial(cfg), times)
}

/// Like [`simulate`] from an explicit initial state.
pub fn simulate_from(
    cfg: &PasepConfig,
    mut state: PasepState,
    times: &[f64],
) -> Result<Vec<PasepState>> {
    cfg.validate()?;
    check_times(cfg, times)?;
    if state.window() != (-cfg.half_width, cfg.half_width) {
        return domain("initial state does not cover the configured window");
    }
    let mut arrows = ArrowEnvironment::new(cfg);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        arrows.advance(t, &mut [&mut state]);
        out.push(state.clone());
    }
    Ok(out)
}

fn check_times(cfg: &PasepConfig, times: &[f64]) -> Result<()> {
    if times.windows(2).any(|w| w[1] < w[0])
        || times.iter().any(|&t| !(t >= 0.0) || t > cfg.horizon)
    {
        return config(format!(
            "observation times must increase within [0, {}]",
            cfg.horizon
        ));
    }
    Ok(())
}

/// `(h(x), I(x))` with `I = (h - x) / 2`.
pub fn height_and_current(state: &PasepState, x: i64) -> Result<(i64, f64)> {
    let h = state
        .height(x)
        .ok_or_else(|| crate::Error::Domain(format!("site {x} outside the window")))?;
    Ok((h, crate::models::current_from_height(h as f64, x as f64)))
}

/// Currents of the step-reset decomposition
/// `i_main = i_base + i_reset + x_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResetOutcome {
    /// Reset centre, the lattice point nearest `v t`.
    pub x0: i64,
    /// Observation site, nearest `v t + u t^nu`.
    pub y: i64,
    pub i_base: f64,
    pub i_main: f64,
    pub i_reset: f64,
    /// Compensator, never positive.
    pub x_t: f64,
}

/// Runs the system to `t`, restarts a step system at `v t` that dominates it,
/// and drives both with the same arrows until `t + t^nu`.
pub fn coupled_step_reset(
    cfg: &PasepConfig,
    v: f64,
    u: f64,
    nu: f64,
    t: f64,
) -> Result<ResetOutcome> {
    coupled_step_reset_from(cfg, PasepState::initial(cfg), v, u, nu, t)
}

/// [`coupled_step_reset`] from an explicit initial state.
pub fn coupled_step_reset_from(
    cfg: &PasepConfig,
    mut main: PasepState,
    v: f64,
    u: f64,
    nu: f64,
    t: f64,
) -> Result<ResetOutcome> {
    cfg.validate()?;
    if !(0.0..1.0).contains(&nu) || !(t > 0.0) {
        return config(format!("need t > 0 and nu in [0, 1), got t={t}, nu={nu}"));
    }
    let dt = t.powf(nu);
    check_times(cfg, &[t, t + dt])?;
    let x0 = (v * t).round() as i64;
    let y = (v * t + u * dt).round() as i64;
    if x0.abs() > cfg.monitor || y.abs() > cfg.monitor {
        return config(format!(
            "sites {x0} and {y} must lie within the monitored range {}",
            cfg.monitor
        ));
    }
    let mut arrows = ArrowEnvironment::new(cfg);
    arrows.advance(t, &mut [&mut main]);
    let h0 = main.height(x0).expect("monitored site");
    let (l, r) = main.window();
    let mut reset = PasepState::from_height(l, r, |x| h0 + (x - x0).abs())?;
    arrows.advance(t + dt, &mut [&mut main, &mut reset]);
    let hm = main.height(y).expect("monitored site");
    let hr = reset.height(y).expect("monitored site");
    let i_base = 0.5 * (h0 - x0) as f64;
    let i_main = 0.5 * (hm - y) as f64;
    let i_reset = 0.5 * (hr - h0 - (y - x0)) as f64;
    Ok(ResetOutcome {
        x0,
        y,
        i_base,
        i_main,
        i_reset,
        x_t: 0.5 * (hm - hr) as f64,
    })
}

/// Runs the config's system together with `max(h, c + |x - x0|)` (a
/// dominating height) and counts sites where the order fails at `times`.
pub fn attractiveness(cfg: &PasepConfig, x0: i64, c: i64, times: &[f64]) -> Result<usize> {
    cfg.validate()?;
    check_times(cfg, times)?;
    if (c + x0).rem_euclid(2) != 0 {
        return domain("the tent must have the parity of the height function");
    }
    let mut low = PasepState::initial(cfg);
    let (l, r) = low.window();
    let base = low.clone();
    let mut high =
        PasepState::from_height(l, r, |x| base.height(x).unwrap().max(c + (x - x0).abs()))?;
    let mut arrows = ArrowEnvironment::new(cfg);
    let mut violations = 0;
    for &t in times {
        arrows.advance(t, &mut [&mut low, &mut high]);
        violations += low.h.iter().zip(&high.h).filter(|(a, b)| a > b).count();
    }
    Ok(violations)
}
