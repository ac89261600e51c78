use crate::error::{Error, Result};

use super::{friction_rate, DebrisParams};

/// Speed `a` of the interaction term `a (v_next - v) / gap`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Anticipation {
    /// `a = lambda v`, the form carried over to the continuum model.
    #[default]
    Proportional,
    /// A fixed speed `a`; `lambda` is then unused.
    Constant(f64),
}

/// Ordered debris particles on a line.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDebris {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub m: f64,
    pub anticipation: Anticipation,
}

impl DiscreteDebris {
    pub fn new(x: Vec<f64>, v: Vec<f64>, m: f64) -> Result<Self> {
        if x.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} velocities", x.len()),
                found: v.len().to_string(),
            });
        }
        Ok(Self {
            x,
            v,
            m,
            anticipation: Anticipation::Proportional,
        })
    }

    pub fn with_anticipation(mut self, anticipation: Anticipation) -> Self {
        self.anticipation = anticipation;
        self
    }

    fn check_order(x: &[f64], gap_min: f64) -> Result<()> {
        match x.windows(2).position(|w| {
            let gap = w[1] - w[0];
            gap.is_nan() || gap <= gap_min
        }) {
            Some(j) => Err(Error::OrderingViolated { index: j }),
            None => Ok(()),
        }
    }

    /// Right-hand side of the car-following system
    /// `x' = v`, `v' = (u - v)/tau_D - friction(h) v + lambda v (v_next - v)/gap`.
    /// The leading particle has no interaction term.
    pub fn rhs(&self, water: impl Fn(f64) -> (f64, f64), params: &DebrisParams) -> Result<(Vec<f64>, Vec<f64>)> {
        self.eval(&self.x, &self.v, &water, params)
    }

    fn eval(
        &self,
        x: &[f64],
        v: &[f64],
        water: &impl Fn(f64) -> (f64, f64),
        params: &DebrisParams,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        Self::check_order(x, 1e-9 * params.ell)?;
        let n = x.len();
        let mut dv = Vec::with_capacity(n);
        for j in 0..n {
            let (u, h) = water(x[j]);
            let mut a = (u - v[j]) / params.tau_d - friction_rate(h, params) * v[j];
            if j + 1 < n {
                let speed = match self.anticipation {
                    Anticipation::Proportional => params.lambda * v[j],
                    Anticipation::Constant(a) => a,
                };
                a += speed * (v[j + 1] - v[j]) / (x[j + 1] - x[j]);
            }
            dv.push(a);
        }
        Ok((v.to_vec(), dv))
    }

    /// Classical fourth-order Runge-Kutta with a fixed step.
    pub fn integrate(
        &mut self,
        water: impl Fn(f64) -> (f64, f64),
        params: &DebrisParams,
        dt: f64,
        steps: usize,
    ) -> Result<()> {
        let n = self.x.len();
        let shifted = |base: &[f64], d: &[f64], c: f64| -> Vec<f64> { (0..n).map(|j| base[j] + c * d[j]).collect() };
        for _ in 0..steps {
            let (k1x, k1v) = self.eval(&self.x, &self.v, &water, params)?;
            let (k2x, k2v) = self.eval(
                &shifted(&self.x, &k1x, 0.5 * dt),
                &shifted(&self.v, &k1v, 0.5 * dt),
                &water,
                params,
            )?;
            let (k3x, k3v) = self.eval(
                &shifted(&self.x, &k2x, 0.5 * dt),
                &shifted(&self.v, &k2v, 0.5 * dt),
                &water,
                params,
            )?;
            let (k4x, k4v) = self.eval(&shifted(&self.x, &k3x, dt), &shifted(&self.v, &k3v, dt), &water, params)?;
            for j in 0..n {
                self.x[j] += dt / 6.0 * (k1x[j] + 2.0 * k2x[j] + 2.0 * k3x[j] + k4x[j]);
                self.v[j] += dt / 6.0 * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]);
            }
        }
        Self::check_order(&self.x, 1e-9 * params.ell)
    }
}

/// Density `rho0 ell / (x_{j+1} - x_j)` sampled at each particle but the last.
pub fn density_from_spacing(sys: &DiscreteDebris, params: &DebrisParams) -> Result<Vec<f64>> {
    DiscreteDebris::check_order(&sys.x, 1e-9 * params.ell)?;
    Ok(sys
        .x
        .windows(2)
        .map(|w| params.rho0 * params.ell / (w[1] - w[0]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> DebrisParams {
        // drag and friction switched off
        DebrisParams {
            tau_d: f64::INFINITY,
            h_f: 1e-3,
            lambda: 1.0,
            ..Default::default()
        }
    }

    #[test]
    fn rhs_examples() {
        let p = DebrisParams::default();
        let s = DiscreteDebris::new(vec![0.0, 1.0], vec![0.4, 0.4], 1.0).unwrap();
        let (dx, dv) = s.rhs(|_| (0.4, 1.0), &p).unwrap();
        assert_eq!(dx, vec![0.4, 0.4]);
        assert_eq!(dv, vec![0.0, 0.0]);

        let s = DiscreteDebris::new(vec![0.0, 0.5], vec![0.0, 1.0], 1.0).unwrap();
        let (_, dv) = s.rhs(|_| (0.0, 1.0), &free()).unwrap();
        assert_eq!(dv[0], 0.0);

        let s = DiscreteDebris::new(vec![0.0, 0.5], vec![1.0, 2.0], 1.0).unwrap();
        let (_, dv) = s.rhs(|_| (0.0, 1.0), &free()).unwrap();
        assert_eq!(dv[0], 2.0);
        assert_eq!(dv[1], 0.0);
    }

    #[test]
    fn constant_speed_interaction() {
        let s = DiscreteDebris::new(vec![0.0, 0.5], vec![0.0, 1.0], 1.0)
            .unwrap()
            .with_anticipation(Anticipation::Constant(2.0));
        let (_, dv) = s.rhs(|_| (0.0, 1.0), &free()).unwrap();
        assert_eq!(dv[0], 4.0);
    }

    #[test]
    fn ordering_is_enforced() {
        let s = DiscreteDebris::new(vec![0.0, 0.5, 0.5], vec![0.0; 3], 1.0).unwrap();
        assert!(matches!(
            s.rhs(|_| (0.0, 1.0), &free()),
            Err(Error::OrderingViolated { index: 1 })
        ));
    }

    #[test]
    fn spacing_density_examples() {
        let p = DebrisParams {
            rho0: 3.0,
            ell: 0.1,
            ..Default::default()
        };
        let s = DiscreteDebris::new(vec![0.0, 0.1, 0.3], vec![0.0; 3], 1.0).unwrap();
        let rho = density_from_spacing(&s, &p).unwrap();
        assert!((rho[0] - 3.0).abs() < 1e-12);
        assert!((rho[1] - 1.5).abs() < 1e-12);

        let n = 50;
        let k = 4.0;
        let p = DebrisParams {
            rho0: 2.0,
            ell: 1.0 / (n as f64 * k),
            ..Default::default()
        };
        let x = (0..n).map(|j| j as f64 / n as f64).collect();
        let s = DiscreteDebris::new(x, vec![0.0; n], 1.0).unwrap();
        assert!(density_from_spacing(&s, &p)
            .unwrap()
            .iter()
            .all(|r| (r - 0.5).abs() < 1e-12));
    }

    #[test]
    fn rk4_matches_pure_drag() {
        let p = DebrisParams {
            tau_d: 0.5,
            h_f: 1e-3,
            lambda: 0.0,
            ..Default::default()
        };
        let mut s = DiscreteDebris::new(vec![0.0], vec![0.0], 1.0).unwrap();
        s.integrate(|_| (1.0, 1.0), &p, 1e-3, 500).unwrap();
        assert!((s.v[0] - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    }
}
