//! The oracle suite behind `tdho verify`.

use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdho::auxode::{solve_auxiliary, AuxiliarySolution, KBranch};
use tdho::canon::{dilatation_transform, standardize, DilatationParameter, QuadraticHamiltonian};
use tdho::config::{RunConfig, Tolerances, VerifySpec};
use tdho::export::{Body, Field};
use tdho::oracle::{
    fidelity, fundamental_trajectory, generator_commutator_check, grid_propagate_from, observed_order, GridGeometry,
    GridState, Moments,
};
use tdho::propagator::{evolve_gaussian, Propagator};
use tdho::{Error, GaussianState, OscillatorProfile, Result};

use crate::commands::{base_document, Outcome};

const DEFAULT_SEED: u64 = 0;
const SAMPLES: usize = 100;

/// One line of the report: the worst value seen and the bound it must meet.
#[derive(Debug, Clone, PartialEq)]
struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    /// `true` when `value` must reach the threshold from above.
    at_least: bool,
}

impl Check {
    fn max_error(name: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            name,
            value,
            threshold,
            at_least: false,
        }
    }

    fn passed(&self) -> bool {
        if self.at_least {
            self.value >= self.threshold
        } else {
            self.value <= self.threshold
        }
    }
}

/// Everything the individual checks share.
struct Setup {
    profile: OscillatorProfile,
    t_end: f64,
    chi0: f64,
    chidot0: f64,
    branch: KBranch,
    state: GaussianState,
    tol: Tolerances,
    spec: VerifySpec,
    seed: u64,
}

impl Setup {
    fn new(cfg: &RunConfig) -> Result<Self> {
        let profile = cfg.build_profile()?;
        let dom = profile.domain();
        let t_end = cfg.grid.map_or(dom.end, |g| g.t_max);
        if dom.start != 0.0 || t_end > dom.end {
            return Err(Error::Config(format!(
                "[grid] t_max = {t_end} must lie in the profile domain [{}, {}] starting at 0",
                dom.start, dom.end
            )));
        }
        let s0 = profile.eval(0.0)?;
        let (branch, chi0, chidot0) = match cfg.aux {
            Some(aux) => (aux.branch()?, aux.chi0, aux.chidot0),
            None if s0.freq_sq > 0.0 => (KBranch::Ermakov, (s0.mass * s0.freq_sq.sqrt()).powf(-0.5), 0.0),
            None => (KBranch::Ermakov, 1.0, 0.0),
        };
        let state = match cfg.state {
            Some(s) => s.gaussian()?,
            None => GaussianState::pure(0.0, 0.0, 0.5 * chi0 * chi0, 0.0)?,
        };
        Ok(Self {
            profile,
            t_end,
            chi0,
            chidot0,
            branch,
            state,
            tol: cfg.tolerances,
            spec: cfg.verify_spec(),
            seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        })
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Solves up to `t_end`, keeping the positive part if `chi` reaches zero.
    fn solve(&self, branch: KBranch, chi0: f64, chidot0: f64) -> Result<AuxiliarySolution> {
        let opts = self.tol.ode_options();
        match solve_auxiliary(&self.profile, branch.k_squared(), chi0, chidot0, self.t_end, &opts) {
            Err(Error::PositivityHorizon { partial, .. }) => Ok(*partial),
            other => other,
        }
    }

    fn span(&self, end: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..=n).map(move |i| end * i as f64 / n as f64)
    }

    fn symplectic(&self) -> Result<Vec<Check>> {
        let mut rng = self.rng(1);
        let mut worst: f64 = 0.0;
        for _ in 0..self.spec.draws {
            let branch = KBranch::ALL[rng.gen_range(0..3)];
            let sol = self.solve(branch, rng.gen_range(0.5..2.0), rng.gen_range(-0.5..0.5))?;
            let t = rng.gen_range(0.0..=0.9 * sol.t_max());
            let m = Propagator::new(&self.profile, &sol)?.heisenberg_map(t)?;
            worst = worst.max((m.det() - 1.0).abs());
        }
        Ok(vec![Check::max_error("symplectic", worst, self.tol.det)])
    }

    fn oracle(&self) -> Result<Vec<Check>> {
        let sol = self.solve(self.branch, self.chi0, self.chidot0)?;
        let end = if sol.t_max() < self.t_end {
            0.95 * sol.t_max()
        } else {
            self.t_end
        };
        let times: Vec<f64> = self.span(end, SAMPLES).collect();
        let prop = Propagator::new(&self.profile, &sol)?;
        let reference = fundamental_trajectory(&self.profile, &times)?;
        let mut worst: f64 = 0.0;
        for (t, f) in times.iter().zip(&reference) {
            worst = worst.max(prop.heisenberg_map(*t)?.max_abs_diff(f));
        }
        Ok(vec![Check::max_error("oracle", worst, self.tol.oracle)])
    }

    fn gauge(&self) -> Result<Vec<Check>> {
        let mut rng = self.rng(3);
        let sols = KBranch::ALL
            .iter()
            .map(|&b| self.solve(b, self.chi0 * rng.gen_range(0.8..1.5), rng.gen_range(0.2..1.0)))
            .collect::<Result<Vec<_>>>()?;
        let common = sols.iter().map(|s| s.t_max()).fold(self.t_end, f64::min);
        let props = sols
            .iter()
            .map(|s| Propagator::new(&self.profile, s))
            .collect::<Result<Vec<_>>>()?;
        let mut worst: f64 = 0.0;
        for t in self.span(0.95 * common, SAMPLES) {
            let maps = props.iter().map(|p| p.heisenberg_map(t)).collect::<Result<Vec<_>>>()?;
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                worst = worst.max(maps[i].max_abs_diff(&maps[j]));
            }
        }
        Ok(vec![Check::max_error("gauge", worst, self.tol.gauge)])
    }

    fn reduction(&self) -> Result<Vec<Check>> {
        let sol = self.solve(KBranch::Classical, self.chi0, self.chidot0)?;
        let mut worst: f64 = 0.0;
        for t in self.span(0.95 * sol.t_max(), 2 * SAMPLES) {
            let [chi, v, a] = sol.eval(t)?;
            let d = DilatationParameter::from_chi(chi, v, a, t)?;
            let h = QuadraticHamiltonian::oscillator(&self.profile, t)?;
            let b = standardize(&dilatation_transform(&h, &d), &d, &self.profile)?.stiffness;
            worst = worst.max(b.abs());
        }
        Ok(vec![Check::max_error("reduction", worst, self.tol.reduction)])
    }

    fn wavefunction(&self) -> Result<Vec<Check>> {
        let sol = self.solve(KBranch::Ermakov, self.chi0, self.chidot0)?;
        let end = if sol.t_max() < self.t_end {
            0.95 * sol.t_max()
        } else {
            self.t_end
        };
        let prop = Propagator::new(&self.profile, &sol)?;
        let geometry = GridGeometry::centered(self.spec.box_half_width, self.spec.grid_points)?;
        let mut psi = GridState::from_gaussian(geometry, &self.state)?;
        let (mut infidelity, mut moments): (f64, f64) = (0.0, 0.0);
        let mut t_prev = 0.0;
        for t in [0.5 * end, end] {
            let steps = ((t - t_prev) / self.spec.time_step).ceil().max(1.0) as usize;
            psi = grid_propagate_from(&self.profile, &psi, t_prev, t, steps)?;
            t_prev = t;
            let analytic = evolve_gaussian(&prop.factorize(t)?, &self.state);
            let sampled = GridState::from_gaussian(geometry, &analytic)?;
            infidelity = infidelity.max(1.0 - fidelity(&psi, &sampled)?);
            moments = moments.max(psi.moments().max_abs_diff(&Moments::of_gaussian(&analytic)));
        }
        Ok(vec![
            Check::max_error("fidelity", infidelity, self.tol.fidelity),
            Check::max_error("moments", moments, self.tol.moments),
        ])
    }

    fn generator(&self) -> Result<Vec<Check>> {
        type Pair = (fn(f64) -> (f64, f64), fn(f64) -> (f64, f64));
        let pairs: [Pair; 3] = [
            (|x| (x, 1.0), |x| (x * x, 2.0 * x)),
            (|x| (x * x, 2.0 * x), |x| ((-x).exp(), -(-x).exp())),
            (|_| (1.0, 0.0), |x| (x, 1.0)),
        ];
        let coarse_grid = GridGeometry::centered(10.0, 1024)?;
        let fine_grid = GridGeometry::centered(10.0, 2048)?;
        let mut lowest = f64::INFINITY;
        for (f1, f2) in pairs {
            let coarse = generator_commutator_check(f1, f2, &coarse_grid)?;
            let fine = generator_commutator_check(f1, f2, &fine_grid)?;
            lowest = lowest
                .min(observed_order(coarse.residual1, fine.residual1))
                .min(observed_order(coarse.residual2, fine.residual2));
        }
        Ok(vec![Check {
            name: "generator_order",
            value: lowest,
            threshold: self.tol.order,
            at_least: true,
        }])
    }
}

type Job = fn(&Setup) -> Result<Vec<Check>>;

const JOBS: [Job; 6] = [
    Setup::symplectic,
    Setup::oracle,
    Setup::gauge,
    Setup::reduction,
    Setup::wavefunction,
    Setup::generator,
];

/// Runs every check on its own thread and assembles the report in a fixed
/// order.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let mut cfg = cfg.clone();
    cfg.seed.get_or_insert(DEFAULT_SEED);
    let setup = Setup::new(&cfg)?;
    let results: Vec<Result<Vec<Check>>> = thread::scope(|scope| {
        let handles: Vec<_> = JOBS.iter().map(|job| scope.spawn(|| job(&setup))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    let mut checks = Vec::new();
    for r in results {
        checks.extend(r?);
    }

    let mut record: Vec<(String, Field)> = Vec::new();
    let mut failures = Vec::new();
    for c in &checks {
        let key = if c.at_least { "min" } else { "max_error" };
        record.push((format!("{}.{key}", c.name), c.value.into()));
        record.push((format!("{}.threshold", c.name), c.threshold.into()));
        record.push((format!("{}.pass", c.name), c.passed().into()));
        if !c.passed() {
            failures.push(format!("{} = {:e} (threshold {:e})", c.name, c.value, c.threshold));
        }
    }
    let passed = failures.is_empty();
    record.push(("all_pass".into(), passed.into()));

    let document = base_document(&cfg, Body::Record(record))
        .meta("profile", setup.profile.kind().to_string())
        .meta("t_end", setup.t_end)
        .meta("k_squared", setup.branch.k_squared() as i64)
        .meta("chi0", setup.chi0)
        .meta("chidot0", setup.chidot0)
        .meta("draws", setup.spec.draws)
        .meta("grid_points", setup.spec.grid_points)
        .meta("time_step", setup.spec.time_step);
    Ok(Outcome {
        document,
        warnings: failures,
        passed,
    })
}
