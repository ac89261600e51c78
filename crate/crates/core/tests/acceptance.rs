//! End-to-end acceptance checks. Runs as a plain binary so that every check
//! prints its PASS/FAIL line; exits non-zero if any check fails.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use lagflux_core::coupling::{self, CoupledParams, CouplingKind, CouplingMode, ParticleScheme, SimulationState};
use lagflux_core::debris::{
    debris_convective_step, debris_general_step_1d, debris_source_update, density_from_spacing, DebrisParams,
    DebrisState, DiscreteDebris,
};
use lagflux_core::euler::sod::ShockTube;
use lagflux_core::io::{lake_at_rest_check, parse_config, Scenario, SimConfig};
use lagflux_core::swe::{stable_dt, swe_step, DryVelocityField, SweParams, SweState, Topography};
use lagflux_core::{Boundaries, BoundaryKind, CellField, Grid2D};

const G: f64 = 9.81;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn sod_shock_tube() -> Outcome {
    let name = "sod shock tube, 384 cells";
    let start = Instant::now();
    let fine = match ShockTube::sod().report() {
        Ok(r) => r,
        Err(e) => return outcome(name, false, format!("run failed: {e}")),
    };
    let elapsed = start.elapsed();
    let coarse = match ShockTube::sod().with_cells(192).report() {
        Ok(r) => r,
        Err(e) => return outcome(name, false, format!("192-cell run failed: {e}")),
    };
    let pass = fine.l1_density <= 0.01
        && coarse.l1_density > fine.l1_density
        && fine.shock_spread <= 6
        && within(elapsed, 5.0);
    outcome(
        name,
        pass,
        format!(
            "L1(rho) {:.3e} <= 1e-2, 192 cells {:.3e} larger, shock spread {} <= 6 cells, {:.2?} < 5 s",
            fine.l1_density, coarse.l1_density, fine.shock_spread, elapsed
        ),
    )
}

fn lake_at_rest() -> Outcome {
    let name = "lake at rest over a gaussian bump, 100x100, 1000 steps";
    let text = "[grid]\nnx = 100\nny = 100\n[water]\nlevel = 1.0\n\
                [[topography.hill]]\nx = 0.5\ny = 0.5\nheight = 0.5\nwidth = 0.1\n";
    let start = Instant::now();
    let report = parse_config(text).and_then(|c| lake_at_rest_check(&c, 1000));
    let elapsed = start.elapsed();
    match report {
        Ok(r) => outcome(
            name,
            r.level_deviation <= 1e-12 && r.max_discharge <= 1e-12 && r.wet_cells == 10_000 && within(elapsed, 30.0),
            format!(
                "max|h+z-1| {:.2e}, max|hu|,|hv| {:.2e} (<= 1e-12), {:.2?} < 30 s",
                r.level_deviation, r.max_discharge, elapsed
            ),
        ),
        Err(e) => outcome(name, false, format!("run failed: {e}")),
    }
}

fn dry_beach() -> Outcome {
    let name = "dam break onto a dry sloping beach, 400 cells, 2000 steps";
    let grid = Grid2D::line(400, 0.0, 4.0).unwrap();
    let params = SweParams::new(G, 1.0);
    let bed = CellField::from_fn(grid, |x, _| (0.5 * (x - 2.0)).max(0.0));
    let topo = Topography::new(bed, &params.bcs).unwrap();
    let mut state = SweState::dry(grid);
    for i in 0..grid.nx {
        state.h[i] = if grid.xc(i) < 1.0 { 1.0 } else { 0.0 };
    }
    let mut dry = DryVelocityField::zeros(grid.nx);
    let front = |s: &SweState| {
        (0..grid.nx)
            .rev()
            .find(|&i| s.h[i] > params.wet_dry.h_wet)
            .map_or(0.0, |i| grid.xc(i))
    };
    let mut fronts = vec![front(&state)];
    let mut min_h = f64::INFINITY;
    for step in 0..2000 {
        let result = stable_dt(&state, &dry, &params).and_then(|dt| swe_step(&mut state, &topo, &mut dry, &params, dt));
        if let Err(e) = result {
            return outcome(name, false, format!("step {step} failed: {e}"));
        }
        let finite = state.h.iter().chain(&state.hu).all(|v| v.is_finite());
        min_h = state.h.iter().copied().fold(min_h, f64::min);
        if !finite || min_h < 0.0 {
            return outcome(name, false, format!("step {step}: finite {finite}, min h {min_h:e}"));
        }
        fronts.push(front(&state));
    }
    // the run-up ends where the front first reaches its furthest point
    let furthest = fronts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let peak = fronts.iter().position(|&f| f == furthest).unwrap();
    let retreats = fronts[..=peak].windows(2).filter(|w| w[1] < w[0]).count();
    let pass = retreats == 0 && furthest > 2.0;
    outcome(
        name,
        pass,
        format!(
            "min h {min_h:.1e} >= 0, no NaN/Inf, front {:.3} -> {furthest:.3} with {retreats} retreats before the run-up peak (step {peak})",
            fronts[0]
        ),
    )
}

fn dam_break_2d(grid: Grid2D) -> (SweState, Topography) {
    let bed = CellField::from_fn(grid, |x, y| {
        0.8 * (-((x - 0.7).powi(2) + (y - 0.5).powi(2)) / 0.01).exp()
    });
    let topo = Topography::new(bed, &Boundaries::default()).unwrap();
    let mut water = SweState::dry(grid);
    for k in 0..grid.len() {
        let level = if grid.center(k).0 < 0.3 { 1.0 } else { 0.5 };
        water.h[k] = (level - topo.z.values[k]).max(0.0);
    }
    (water, topo)
}

fn conservation() -> Outcome {
    let name = "wall-bounded 2D dam break with debris, 10^4 steps";
    let grid = Grid2D::new(40, 40, 0.0, 1.0, 0.0, 1.0).unwrap();
    let (water, topo) = dam_break_2d(grid);
    let rho: Vec<f64> = (0..grid.len())
        .map(|k| {
            let (x, y) = grid.center(k);
            if (0.35..0.55).contains(&x) && (0.2..0.8).contains(&y) {
                2.0
            } else {
                0.0
            }
        })
        .collect();
    let debris = DebrisState::from_velocity(grid, rho, &vec![0.0; grid.len()], &vec![0.0; grid.len()]).unwrap();
    let params = CoupledParams {
        swe: SweParams::new(G, 1.0),
        debris: DebrisParams::default(),
        mode: CouplingMode {
            kind: CouplingKind::TwoWay,
            mu_debris: 0.01,
        },
        particle_scheme: ParticleScheme::Heun,
    };
    let mut state = SimulationState::new(water, debris, 0).unwrap();
    let (v0, m0) = (state.water.volume(), state.debris.mass());
    for step in 0..10_000 {
        let result =
            coupling::stable_dt(&state, &params).and_then(|dt| coupling::coupled_step(&mut state, &topo, &params, dt));
        if let Err(e) = result {
            return outcome(name, false, format!("step {step} failed: {e}"));
        }
    }
    let dv = (state.water.volume() - v0).abs() / v0;
    let dm = (state.debris.mass() - m0).abs() / m0;
    outcome(
        name,
        dv <= 1e-10 && dm <= 1e-10,
        format!(
            "relative drift: water volume {dv:.1e}, debris mass {dm:.1e} (<= 1e-10), t = {:.3}",
            state.t
        ),
    )
}

/// Classical RK4 on `dv/dt = (u - v)/tau_D - F(h) v`.
fn source_oracle(v0: f64, u: f64, h: f64, dt: f64, p: &DebrisParams, substeps: usize) -> f64 {
    let friction = if h >= p.h_f {
        0.0
    } else {
        (p.h_f / h).max(1.0) * (1.0 - h / p.h_f).powf(p.beta_f) / p.tau_f
    };
    let f = |v: f64| (u - v) / p.tau_d - friction * v;
    let k = dt / substeps as f64;
    let mut v = v0;
    for _ in 0..substeps {
        let k1 = f(v);
        let k2 = f(v + 0.5 * k * k1);
        let k3 = f(v + 0.5 * k * k2);
        let k4 = f(v + k * k3);
        v += k / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    v
}

fn source_integrator() -> Outcome {
    let name = "exponential drag/friction update vs RK4 oracle";
    let start = Instant::now();
    let (mut worst, mut cases) = (0.0f64, 0);
    for tau_d in [0.5, 0.01] {
        for tau_f in [0.05, 0.002] {
            for h in [0.01, 0.04, 0.2] {
                let p = DebrisParams {
                    tau_d,
                    tau_f,
                    ..DebrisParams::default()
                };
                let friction = if h < p.h_f {
                    (p.h_f / h).max(1.0) * (1.0 - h / p.h_f) / tau_f
                } else {
                    0.0
                };
                let rate = 1.0 / tau_d + friction;
                for ratio in [1e-2, 1.0, 1e2] {
                    let dt = ratio / rate;
                    let (v0, u) = (1.3, 0.7);
                    let got = debris_source_update(v0, u, h, dt, &p);
                    let want = source_oracle(v0, u, h, dt, &p, 10_000);
                    worst = worst.max((got - want).abs() / want.abs());
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        name,
        worst <= 1e-8 && within(elapsed, 1.0),
        format!("{cases} cases with dt*rate in {{1e-2, 1, 1e2}}: worst relative error {worst:.1e} <= 1e-8, {elapsed:.2?} < 1 s"),
    )
}

fn compressive_velocity(x: f64) -> f64 {
    if x < 0.2 {
        1.0
    } else if x > 0.5 {
        0.2
    } else {
        0.6 + 0.4 * (PI * (x - 0.2) / 0.3).cos()
    }
}

fn peak_pressureless(n: usize) -> f64 {
    let grid = Grid2D::line(n, 0.0, 1.0).unwrap();
    let bcs = Boundaries::uniform(BoundaryKind::Transmissive);
    let mut rho = vec![1.0; n];
    let mut rv: Vec<f64> = (0..n).map(|i| compressive_velocity(grid.xc(i))).collect();
    let dt = 0.25 / n as f64;
    for _ in 0..(0.5 / dt).round() as usize {
        debris_general_step_1d(&grid, &bcs, &mut rho, &mut rv, 0.0, dt).unwrap();
    }
    rho.iter().copied().fold(0.0, f64::max)
}

fn peak_interacting(n: usize) -> f64 {
    let grid = Grid2D::line(n, 0.0, 1.0).unwrap();
    let bcs = Boundaries::uniform(BoundaryKind::Transmissive);
    let v: Vec<f64> = (0..n).map(|i| compressive_velocity(grid.xc(i))).collect();
    let mut s = DebrisState::from_velocity(grid, vec![1.0; n], &v, &vec![0.0; n]).unwrap();
    let dt = 0.25 / n as f64;
    for _ in 0..(0.5 / dt).round() as usize {
        debris_convective_step(&mut s, &bcs, dt).unwrap();
    }
    s.rho.iter().copied().fold(0.0, f64::max)
}

fn delta_shock() -> Outcome {
    let name = "delta shock without interaction, bounded peak with it (4x refinement)";
    let free = peak_pressureless(800) / peak_pressureless(200);
    let bounded = peak_interacting(800) / peak_interacting(200);
    outcome(
        name,
        free > 2.0 && bounded < 1.2,
        format!("peak density ratio 800/200 cells: lambda=0 {free:.3} > 2, lambda=1 {bounded:.3} < 1.2"),
    )
}

fn discrete_vs_continuum() -> Outcome {
    let name = "10^4-particle follow-the-leader vs 200-cell continuum";
    let params = DebrisParams {
        lambda: 1.0,
        tau_d: 0.1,
        rho0: 4.0,
        ell: 1.25e-4,
        ..DebrisParams::default()
    };
    let water_u = |x: f64| 1.0 + 0.5 * (TAU * x).sin();
    let t_end = 0.5;

    let n = 200;
    let grid = Grid2D::line(n, 0.0, 1.0).unwrap();
    let bcs = Boundaries::uniform(BoundaryKind::Periodic);
    let mut s = DebrisState::from_velocity(grid, vec![1.0; n], &vec![1.0; n], &vec![0.0; n]).unwrap();
    let u: Vec<f64> = (0..n).map(|i| water_u(grid.xc(i))).collect();
    let (zeros, depth) = (vec![0.0; n], vec![1.0; n]);
    let mut t = 0.0;
    while t < t_end {
        let dt = (0.25 * grid.dx / s.max_speed()).min(t_end - t);
        debris_convective_step(&mut s, &bcs, dt).unwrap();
        s.apply_sources(&u, &zeros, &depth, dt, &params);
        t += dt;
    }

    // particles spaced so that rho0 ell / gap = 1, covering every trajectory
    // that can reach [0, 1] by t_end
    let np = 10_000;
    let x: Vec<f64> = (0..np).map(|j| -2.0 + 5.0 * j as f64 / np as f64).collect();
    let mut particles = DiscreteDebris::new(x, vec![1.0; np], 1.0).unwrap();
    let steps = 5000;
    if let Err(e) = particles.integrate(|x| (water_u(x), 1.0), &params, t_end / steps as f64, steps) {
        return outcome(name, false, format!("particle run failed: {e}"));
    }
    let rho_p = density_from_spacing(&particles, &params).unwrap();
    let mids: Vec<f64> = particles.x.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let sample = |xc: f64| {
        let j = mids.partition_point(|&m| m < xc);
        let (a, b) = (mids[j - 1], mids[j]);
        rho_p[j - 1] + (rho_p[j] - rho_p[j - 1]) * (xc - a) / (b - a)
    };
    let (mut err, mut norm) = (0.0, 0.0);
    for i in 0..n {
        let r = sample(grid.xc(i));
        err += (s.rho[i] - r).abs();
        norm += r;
    }
    let rel = err / norm;
    outcome(
        name,
        rel < 0.05,
        format!("relative L1 density difference {:.2}% < 5%", 100.0 * rel),
    )
}

fn scenario_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/three_hills.toml")
}

fn three_hills() -> Outcome {
    let name = "three-hill tidal wave scenario, 200x100";
    let start = Instant::now();
    let config = match SimConfig::from_file(&scenario_config()) {
        Ok(c) => c,
        Err(e) => return outcome(name, false, format!("config: {e}")),
    };
    let mut scenario = match Scenario::from_config(&config) {
        Ok(s) => s,
        Err(e) => return outcome(name, false, format!("setup: {e}")),
    };
    let initial_rho = config.debris.region.iter().map(|r| r.rho).fold(0.0, f64::max);
    if let Err(e) = scenario.run_with(0, |_| Ok(())) {
        return outcome(name, false, format!("run failed: {e}"));
    }
    let elapsed = start.elapsed();
    let grid = scenario.grid;
    let hills = &config.topography.hill;
    let level = config.water.level;
    let s = &scenario.state;

    // channel: the band of the hill row between the outermost hill centres
    let x_mid = hills.iter().map(|h| h.x).sum::<f64>() / hills.len() as f64;
    let half_band = 3.0 * hills.iter().map(|h| h.width).fold(0.0, f64::max);
    let y_lo = hills.iter().map(|h| h.y).fold(f64::INFINITY, f64::min);
    let y_hi = hills.iter().map(|h| h.y).fold(f64::NEG_INFINITY, f64::max);
    let (k, dmax) = s.damage.argmax().unwrap();
    let (xa, ya) = grid.center(k);
    let in_channel = (xa - x_mid).abs() <= half_band && ya >= y_lo && ya <= y_hi;

    // a local density maximum, denser than the initial strip, within five
    // cells of each hill's shoreline
    let rho = &s.debris.rho;
    let local_max = |i: usize, j: usize| {
        let r = rho[grid.idx(i, j)];
        r > 0.0
            && (j.saturating_sub(1)..=(j + 1).min(grid.ny - 1))
                .all(|jj| (i.saturating_sub(1)..=(i + 1).min(grid.nx - 1)).all(|ii| rho[grid.idx(ii, jj)] <= r))
    };
    let mut piles = Vec::new();
    for h in hills {
        let shore = h.width * (2.0 * (h.height / level).ln()).sqrt();
        let reach = shore + 5.0 * grid.dx.max(grid.dy);
        let best = (0..grid.len())
            .filter(|&k| {
                let (x, y) = grid.center(k);
                let r = (x - h.x).hypot(y - h.y);
                r >= shore && r <= reach && scenario.topo.z.values[k] < level
            })
            .filter(|&k| local_max(k % grid.nx, k / grid.nx))
            .map(|k| rho[k])
            .fold(0.0, f64::max);
        piles.push(best);
    }
    let piled = piles.iter().all(|&r| r > initial_rho);
    let pass = in_channel && piled && within(elapsed, 300.0);
    outcome(
        name,
        pass,
        format!(
            "damage argmax {dmax:.3} at ({xa:.3}, {ya:.3}) in channel |x-{x_mid}| <= {half_band:.2}, y in [{y_lo}, {y_hi}]: {in_channel}; \
             peak density next to each hill {piles:.2?} > {initial_rho}; {elapsed:.1?} < 300 s"
        ),
    )
}

fn coupling_degeneracy() -> Outcome {
    let name = "one-way coupling with no debris reproduces plain shallow water";
    let grid = Grid2D::new(60, 30, 0.0, 2.0, 0.0, 1.0).unwrap();
    let (water, topo) = dam_break_2d(grid);
    let params = CoupledParams {
        swe: SweParams::new(G, 1.0),
        debris: DebrisParams::default(),
        mode: CouplingMode::default(),
        particle_scheme: ParticleScheme::Heun,
    };
    let mut plain = water.clone();
    let mut plain_dry = DryVelocityField::zeros(grid.len());
    let mut coupled = SimulationState::new(water, DebrisState::empty(grid), 0).unwrap();
    for step in 0..500 {
        let dt = match coupling::stable_dt(&coupled, &params) {
            Ok(dt) => dt,
            Err(e) => return outcome(name, false, format!("step {step}: {e}")),
        };
        let a = coupling::coupled_step(&mut coupled, &topo, &params, dt);
        let b = swe_step(&mut plain, &topo, &mut plain_dry, &params.swe, dt);
        if let Err(e) = a.and(b) {
            return outcome(name, false, format!("step {step}: {e}"));
        }
    }
    let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits());
    let w = &coupled.water;
    let pass = same(&w.h, &plain.h) && same(&w.hu, &plain.hu) && same(&w.hv, &plain.hv);
    outcome(
        name,
        pass,
        format!("h, hu, hv bit-identical after 500 shared steps: {pass}"),
    )
}

fn main() {
    let checks: [fn() -> Outcome; 8] = [
        sod_shock_tube,
        lake_at_rest,
        dry_beach,
        conservation,
        source_integrator,
        delta_shock,
        discrete_vs_continuum,
        coupling_degeneracy,
    ];
    // the long scenario runs alongside the rest; the timed checks run one
    // at a time so that their clocks are not shared
    let results: Vec<Outcome> = std::thread::scope(|scope| {
        let long = scope.spawn(three_hills);
        let mut out: Vec<Outcome> = checks.iter().map(|c| c()).collect();
        out.insert(
            7,
            long.join()
                .unwrap_or_else(|_| outcome("three-hill tidal wave scenario", false, "panicked".into())),
        );
        out
    });
    let mut failed = 0;
    for r in &results {
        println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
        failed += usize::from(!r.pass);
    }
    println!(
        "{} of {} acceptance checks passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
