//! Exact solution of the Euler Riemann problem for a perfect gas, sampled
//! on the self-similar variable `x/t`. Newton iteration on the star pressure.

use crate::error::{Error, Result};

use super::{check_primitive, GasParams, Primitive};

const MAX_ITER: usize = 100;
const TOL: f64 = 1e-12;

/// Star-region pressure and velocity of an exact Riemann solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub p: f64,
    pub u: f64,
}

/// Pressure function `f_K(p)` and its derivative for one side.
fn pressure_function(p: f64, w: &Primitive, gas: GasParams) -> (f64, f64) {
    let g = gas.gamma;
    let c = w.sound_speed(gas);
    if p > w.p {
        let a = 2.0 / ((g + 1.0) * w.rho);
        let b = (g - 1.0) / (g + 1.0) * w.p;
        let q = (a / (p + b)).sqrt();
        ((p - w.p) * q, q * (1.0 - 0.5 * (p - w.p) / (b + p)))
    } else {
        let ratio = p / w.p;
        let f = 2.0 * c / (g - 1.0) * (ratio.powf((g - 1.0) / (2.0 * g)) - 1.0);
        let df = 1.0 / (w.rho * c) * ratio.powf(-(g + 1.0) / (2.0 * g));
        (f, df)
    }
}

pub fn star_state(left: &Primitive, right: &Primitive, gas: GasParams) -> Result<StarState> {
    check_primitive(left, 0)?;
    check_primitive(right, 1)?;
    let g = gas.gamma;
    let (cl, cr) = (left.sound_speed(gas), right.sound_speed(gas));
    let du = right.u - left.u;
    if 2.0 * (cl + cr) / (g - 1.0) <= du {
        return Err(Error::InvalidInput(
            "Riemann data generates vacuum (pressure positivity condition violated)".into(),
        ));
    }
    // two-rarefaction guess, safe for all non-vacuum data
    let z = (g - 1.0) / (2.0 * g);
    let guess = ((cl + cr - 0.5 * (g - 1.0) * du) / (cl / left.p.powf(z) + cr / right.p.powf(z))).powf(1.0 / z);
    let mut p = guess.max(1e-14);
    for _ in 0..MAX_ITER {
        let (fl, dfl) = pressure_function(p, left, gas);
        let (fr, dfr) = pressure_function(p, right, gas);
        let next = (p - (fl + fr + du) / (dfl + dfr)).max(1e-14);
        let change = 2.0 * (next - p).abs() / (next + p);
        p = next;
        if change < TOL {
            let (fl, _) = pressure_function(p, left, gas);
            let (fr, _) = pressure_function(p, right, gas);
            return Ok(StarState {
                p,
                u: 0.5 * (left.u + right.u) + 0.5 * (fr - fl),
            });
        }
    }
    Err(Error::NoConvergence { iterations: MAX_ITER })
}

/// Exact solution at a single value of `s = x / t`.
pub fn sample(left: &Primitive, right: &Primitive, star: StarState, gas: GasParams, s: f64) -> Primitive {
    let g = gas.gamma;
    let gm = (g - 1.0) / (g + 1.0);
    if s <= star.u {
        let w = left;
        let c = w.sound_speed(gas);
        if star.p > w.p {
            let shock = w.u - c * ((g + 1.0) / (2.0 * g) * star.p / w.p + (g - 1.0) / (2.0 * g)).sqrt();
            if s <= shock {
                *w
            } else {
                Primitive {
                    rho: w.rho * (star.p / w.p + gm) / (gm * star.p / w.p + 1.0),
                    u: star.u,
                    p: star.p,
                }
            }
        } else {
            let head = w.u - c;
            let c_star = c * (star.p / w.p).powf((g - 1.0) / (2.0 * g));
            let tail = star.u - c_star;
            if s <= head {
                *w
            } else if s >= tail {
                Primitive {
                    rho: w.rho * (star.p / w.p).powf(1.0 / g),
                    u: star.u,
                    p: star.p,
                }
            } else {
                let k = 2.0 / (g + 1.0) + gm / c * (w.u - s);
                Primitive {
                    rho: w.rho * k.powf(2.0 / (g - 1.0)),
                    u: 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * w.u + s),
                    p: w.p * k.powf(2.0 * g / (g - 1.0)),
                }
            }
        }
    } else {
        let w = right;
        let c = w.sound_speed(gas);
        if star.p > w.p {
            let shock = w.u + c * ((g + 1.0) / (2.0 * g) * star.p / w.p + (g - 1.0) / (2.0 * g)).sqrt();
            if s >= shock {
                *w
            } else {
                Primitive {
                    rho: w.rho * (star.p / w.p + gm) / (gm * star.p / w.p + 1.0),
                    u: star.u,
                    p: star.p,
                }
            }
        } else {
            let head = w.u + c;
            let c_star = c * (star.p / w.p).powf((g - 1.0) / (2.0 * g));
            let tail = star.u + c_star;
            if s >= head {
                *w
            } else if s <= tail {
                Primitive {
                    rho: w.rho * (star.p / w.p).powf(1.0 / g),
                    u: star.u,
                    p: star.p,
                }
            } else {
                let k = 2.0 / (g + 1.0) - gm / c * (w.u - s);
                Primitive {
                    rho: w.rho * k.powf(2.0 / (g - 1.0)),
                    u: 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * w.u + s),
                    p: w.p * k.powf(2.0 * g / (g - 1.0)),
                }
            }
        }
    }
}

/// Exact solution sampled at each `x/t` value.
pub fn exact_riemann_oracle(
    left: &Primitive,
    right: &Primitive,
    gas: GasParams,
    x_over_t: &[f64],
) -> Result<Vec<Primitive>> {
    let star = star_state(left, right, gas)?;
    Ok(x_over_t.iter().map(|&s| sample(left, right, star, gas, s)).collect())
}

/// Position of the right-moving shock for data whose right wave is a shock.
pub fn right_shock_speed(right: &Primitive, star: StarState, gas: GasParams) -> f64 {
    let g = gas.gamma;
    right.u + right.sound_speed(gas) * ((g + 1.0) / (2.0 * g) * star.p / right.p + (g - 1.0) / (2.0 * g)).sqrt()
}
