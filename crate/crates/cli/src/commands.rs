use tdho::auxode::{solve_auxiliary, AuxiliarySolution};
use tdho::canon::{classify as scan, diffeo_map, induced_metric, uniform_condition_holds, DiffeoKind};
use tdho::config::RunConfig;
use tdho::export::{Body, Document, Table};
use tdho::propagator::{evolve_gaussian, Propagator};
use tdho::{Error, OscillatorProfile, Result};

/// A rendered result plus anything worth telling the user on stderr.
pub struct Outcome {
    pub document: Document,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl Outcome {
    pub fn ok(document: Document) -> Self {
        Self {
            document,
            warnings: Vec::new(),
            passed: true,
        }
    }
}

/// Metadata shared by every command: seed and effective tolerances.
pub fn base_document(cfg: &RunConfig, body: Body) -> Document {
    let mut doc = Document::new("", body);
    if let Some(seed) = cfg.seed {
        doc = doc.meta("seed", seed);
    }
    for (name, value) in cfg.tolerances.entries() {
        doc = doc.meta(&format!("tolerance.{name}"), value);
    }
    doc
}

/// Profile and time grid, with the grid checked against the profile domain.
fn profile_and_times(cfg: &RunConfig) -> Result<(OscillatorProfile, Vec<f64>)> {
    let profile = cfg.build_profile()?;
    let grid = cfg.grid_spec()?;
    let dom = profile.domain();
    if dom.start != 0.0 || grid.t_max > dom.end {
        return Err(Error::Config(format!(
            "[grid] t_max = {} must lie in the profile domain [{}, {}] starting at 0",
            grid.t_max, dom.start, dom.end
        )));
    }
    Ok((profile, grid.times()))
}

fn solve(cfg: &RunConfig, profile: &OscillatorProfile, t_max: f64) -> Result<AuxiliarySolution> {
    let aux = cfg.aux_spec()?;
    let branch = aux.branch()?;
    solve_auxiliary(
        profile,
        branch.k_squared(),
        aux.chi0,
        aux.chidot0,
        t_max,
        &cfg.tolerances.ode_options(),
    )
}

fn with_aux_meta(cfg: &RunConfig, doc: Document, profile: &OscillatorProfile) -> Result<Document> {
    let aux = cfg.aux_spec()?;
    Ok(doc
        .meta("profile", profile.kind().to_string())
        .meta("k_squared", aux.k_squared)
        .meta("chi0", aux.chi0)
        .meta("chidot0", aux.chidot0))
}

pub fn solve_aux(cfg: &RunConfig) -> Result<Outcome> {
    let (profile, times) = profile_and_times(cfg)?;
    let sol = solve(cfg, &profile, *times.last().expect("grid has samples"))?;
    let mut table = Table::new(&["t", "chi", "chi_dot"]);
    for &t in &times {
        let [chi, chi_dot, _] = sol.eval(t)?;
        table.push(vec![t, chi, chi_dot]);
    }
    let doc = with_aux_meta(cfg, base_document(cfg, Body::Table(table)), &profile)?;
    Ok(Outcome::ok(doc))
}

pub fn heisenberg(cfg: &RunConfig) -> Result<Outcome> {
    let (profile, times) = profile_and_times(cfg)?;
    let sol = solve(cfg, &profile, *times.last().expect("grid has samples"))?;
    let prop = Propagator::new(&profile, &sol)?;
    let mut table = Table::new(&["t", "a", "b", "c", "d"]);
    for &t in &times {
        let [a, b, c, d] = prop.heisenberg_map(t)?.entries();
        table.push(vec![t, a, b, c, d]);
    }
    let doc = with_aux_meta(cfg, base_document(cfg, Body::Table(table)), &profile)?;
    Ok(Outcome::ok(doc))
}

pub fn evolve(cfg: &RunConfig) -> Result<Outcome> {
    let (profile, times) = profile_and_times(cfg)?;
    let state = cfg.state_spec()?.gaussian()?;
    let sol = solve(cfg, &profile, *times.last().expect("grid has samples"))?;
    let prop = Propagator::new(&profile, &sol)?;
    let mut table = Table::new(&[
        "t", "a", "b", "c", "d", "mean_x", "mean_p", "cov_xx", "cov_xp", "cov_pp",
    ]);
    for &t in &times {
        let fact = prop.factorize(t)?;
        let [a, b, c, d] = fact.symplectic_map().entries();
        let g = evolve_gaussian(&fact, &state);
        table.push(vec![t, a, b, c, d, g.mean_x, g.mean_p, g.cov_xx, g.cov_xp, g.cov_pp]);
    }
    let doc = with_aux_meta(cfg, base_document(cfg, Body::Table(table)), &profile)?;
    Ok(Outcome::ok(doc))
}

const CLASSIFY_SAMPLES: usize = 1000;

pub fn classify(cfg: &RunConfig) -> Result<Outcome> {
    let profile = cfg.build_profile()?;
    let samples = cfg.grid.map_or(CLASSIFY_SAMPLES, |g| g.samples);
    let c = scan(&profile, samples, cfg.tolerances.classify)?;
    let body = Body::Record(vec![
        ("in_class".into(), c.in_class.into()),
        ("omega0_best".into(), c.omega0_best.into()),
        ("max_residual".into(), c.max_residual.into()),
    ]);
    let doc = base_document(cfg, body)
        .meta("profile", profile.kind().to_string())
        .meta("samples", samples);
    Ok(Outcome::ok(doc))
}

pub fn metric(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.metric_spec()?;
    let kind = spec.diffeo()?;
    let mut table = Table::new(&["x", "x_prime", "f2", "g"]);
    for x in spec.points() {
        let image = diffeo_map(kind, spec.eps, x)?;
        table.push(vec![x, image.x_prime, image.f2, induced_metric(kind, spec.eps, x)?]);
    }
    let uniform = uniform_condition_holds(kind, spec.eps);
    let mut doc = base_document(cfg, Body::Table(table))
        .meta("kind", format!("{:?}", spec.kind).to_lowercase())
        .meta("eps", spec.eps);
    if let DiffeoKind::Exponential { lambda } = kind {
        doc = doc.meta("lambda", lambda);
    }
    let doc = doc.meta("uniform_condition", uniform);
    let mut outcome = Outcome::ok(doc);
    if !uniform {
        outcome.warnings.push(format!(
            "|eps lambda| = {} is not below 1; the map is only guaranteed on the sampled points",
            spec.eps * spec.lambda.unwrap_or(0.0)
        ));
    }
    Ok(outcome)
}
