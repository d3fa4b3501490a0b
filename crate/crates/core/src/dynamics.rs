//! Numerical dynamics: RK4 flows (Lorenz, ABC), 1-D map attractors with
//! Lyapunov exponents and Feigenbaum-ratio estimation, and digit-driven
//! lattice walks.
//!
//! The ABC flow is supplied in its standard Arnold-Beltrami-Childress
//! form (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x).

use std::f64::consts::PI;

use crate::error::{MeshError, Result};
use crate::geom::{vec3, Vec3};
use crate::tessellate::Polyline3;

/// A velocity field in R^3.
pub struct FlowField {
    eval: Box<dyn Fn(Vec3) -> Vec3 + Sync>,
    pub name: String,
    pub params: Vec<(String, f64)>,
}

impl FlowField {
    pub fn new(
        name: impl Into<String>,
        params: Vec<(String, f64)>,
        eval: impl Fn(Vec3) -> Vec3 + Sync + 'static,
    ) -> Self {
        FlowField {
            eval: Box::new(eval),
            name: name.into(),
            params,
        }
    }

    pub fn eval(&self, x: Vec3) -> Vec3 {
        (self.eval)(x)
    }

    /// Lorenz system (10(y - x), -xz + 28x - y, xy - 8z/3).
    pub fn lorenz(sigma: f64, rho: f64, beta: f64) -> Self {
        Self::new(
            "lorenz",
            vec![
                ("sigma".into(), sigma),
                ("rho".into(), rho),
                ("beta".into(), beta),
            ],
            move |p| {
                vec3(
                    sigma * (p.y - p.x),
                    -p.x * p.z + rho * p.x - p.y,
                    p.x * p.y - beta * p.z,
                )
            },
        )
    }

    /// Arnold-Beltrami-Childress flow, standard form.
    pub fn abc(a: f64, b: f64, c: f64) -> Self {
        Self::new(
            "abc",
            vec![("a".into(), a), ("b".into(), b), ("c".into(), c)],
            move |p| {
                vec3(
                    a * p.z.sin() + c * p.y.cos(),
                    b * p.x.sin() + a * p.z.cos(),
                    c * p.y.sin() + b * p.x.cos(),
                )
            },
        )
    }

    /// Constant velocity field.
    pub fn constant(v: Vec3) -> Self {
        Self::new("constant", vec![], move |_| v)
    }
}

/// Points of an integrated orbit; points has n + 1 entries.
#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub points: Polyline3,
    pub h: f64,
    pub n: usize,
}

/// Samples and Lyapunov exponent of the map x -> c sin(pi x).
#[derive(Debug, Clone)]
pub struct MapAttractor {
    pub c: f64,
    /// Sorted, deduplicated samples in [0, 1].
    pub samples: Vec<f64>,
    /// Mean of log|c pi cos(pi x)| over kept samples; -inf when the orbit
    /// hits a superstable point.
    pub lyapunov: f64,
}

fn rk4_raw(f: &FlowField, x: Vec3, h: f64) -> Vec3 {
    let u = f.eval(x) * h;
    let v = f.eval(x + u * 0.5) * h;
    let w = f.eval(x + v * 0.5) * h;
    let q = f.eval(x + w) * h;
    x + (u + v * 2.0 + w * 2.0 + q) * (1.0 / 6.0)
}

/// One classical four-stage Runge-Kutta step.
pub fn rk4_step(f: &FlowField, x: Vec3, h: f64) -> Result<Vec3> {
    if !(h.is_finite() && h > 0.0) {
        return Err(MeshError::Parameter(format!(
            "step size must be positive, got {h}"
        )));
    }
    let next = rk4_raw(f, x, h);
    if !next.is_finite() {
        return Err(MeshError::Integration {
            step: 0,
            msg: format!("non-finite state leaving ({}, {}, {})", x.x, x.y, x.z),
        });
    }
    Ok(next)
}

/// n RK4 steps from x0; the orbit polyline has n + 1 points.
pub fn integrate(f: &FlowField, x0: Vec3, h: f64, n: usize) -> Result<OrbitSample> {
    if n < 1 {
        return Err(MeshError::Parameter("need at least one step".into()));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(MeshError::Parameter(format!(
            "step size must be positive, got {h}"
        )));
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0);
    let mut x = x0;
    for step in 0..n {
        x = rk4_raw(f, x, h);
        if !x.is_finite() {
            return Err(MeshError::Integration {
                step: step + 1,
                msg: "non-finite state".into(),
            });
        }
        points.push(x);
    }
    Ok(OrbitSample {
        points: Polyline3::new(points, false)?,
        h,
        n,
    })
}

/// Dedup tolerance for map attractor samples and period detection.
pub const ATTRACTOR_TOL: f64 = 1e-7;

fn sine_map(c: f64, x: f64) -> f64 {
    c * (PI * x).sin()
}

/// Iterate x -> c sin(pi x) from 0.3, keep samples after the burn-in and
/// report the deduplicated attractor plus the Lyapunov exponent.
pub fn map_attractor(c: f64, burn_in: usize, keep: usize) -> Result<MapAttractor> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(MeshError::Parameter(format!(
            "map parameter must be in (0, 1], got {c}"
        )));
    }
    if keep == 0 {
        return Err(MeshError::Parameter("must keep at least one sample".into()));
    }
    let mut x = 0.3f64;
    for _ in 0..burn_in {
        x = sine_map(c, x);
    }
    let mut kept = Vec::with_capacity(keep);
    let mut log_sum = 0.0f64;
    let mut superstable = false;
    for _ in 0..keep {
        kept.push(x);
        let deriv = (c * PI * (PI * x).cos()).abs();
        if deriv == 0.0 {
            superstable = true;
        } else {
            log_sum += deriv.ln();
        }
        x = sine_map(c, x);
    }
    let lyapunov = if superstable {
        f64::NEG_INFINITY
    } else {
        log_sum / keep as f64
    };
    kept.sort_by(|a, b| a.partial_cmp(b).unwrap());
    kept.dedup_by(|a, b| (*a - *b).abs() <= ATTRACTOR_TOL);
    Ok(MapAttractor {
        c,
        samples: kept,
        lyapunov,
    })
}

/// Smallest period p <= max_period such that |x_{i+p} - x_i| < tolerance
/// holds for 100 consecutive i on the settled orbit; None if aperiodic.
pub fn attractor_period(c: f64, burn_in: usize, max_period: usize) -> Option<usize> {
    let confirm = 100;
    let mut x = 0.3f64;
    for _ in 0..burn_in {
        x = sine_map(c, x);
    }
    let n = max_period + confirm;
    let mut orbit = Vec::with_capacity(n);
    for _ in 0..n {
        orbit.push(x);
        x = sine_map(c, x);
    }
    (1..=max_period).find(|&p| (0..confirm).all(|i| (orbit[i + p] - orbit[i]).abs() < ATTRACTOR_TOL))
}

/// Locate the first `count` period-doubling parameters of c sin(pi x) by
/// bisection on the detected attractor period (1 -> 2 -> 4 -> ...).
pub fn detect_bifurcations(count: usize) -> Result<Vec<f64>> {
    let burn_in = 4000;
    let mut out = Vec::with_capacity(count);
    let mut lo = 0.55f64;
    let mut target = 1usize; // period below the doubling being located
    for _ in 0..count {
        let next = target * 2;
        // scan upward until the period exceeds `target`
        let mut hi = lo;
        loop {
            hi += 0.01;
            if hi > 1.0 {
                return Err(MeshError::Generation(
                    "ran out of parameter range while scanning for doublings".into(),
                ));
            }
            match attractor_period(hi, burn_in, 64) {
                Some(p) if p <= target => continue,
                _ => break,
            }
        }
        let mut a = hi - 0.01;
        let mut b = hi;
        for _ in 0..40 {
            let mid = 0.5 * (a + b);
            match attractor_period(mid, burn_in, 64) {
                Some(p) if p <= target => a = mid,
                _ => b = mid,
            }
        }
        out.push(0.5 * (a + b));
        lo = b;
        target = next;
    }
    Ok(out)
}

/// Ratios of successive doubling intervals; the last ratio is the
/// Feigenbaum delta estimate.
pub fn feigenbaum_delta(bifurcations: &[f64]) -> Result<Vec<f64>> {
    if bifurcations.len() < 4 {
        return Err(MeshError::Parameter(format!(
            "need at least 4 bifurcation parameters, got {}",
            bifurcations.len()
        )));
    }
    for w in bifurcations.windows(2) {
        if w[1] <= w[0] {
            return Err(MeshError::Parameter(format!(
                "bifurcation parameters must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    let gaps: Vec<f64> = bifurcations.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(gaps.windows(2).map(|g| g[0] / g[1]).collect())
}

/// Cumulative lattice walk from the origin. Base 6 maps digits 0..5 to
/// +-x, +-y, +-z; base 4 maps 0..3 to +-x, +-y in the z = 0 plane.
pub fn digit_walk(digits: &[u8], base: u8, step: f64) -> Result<Polyline3> {
    if base != 4 && base != 6 {
        return Err(MeshError::Parameter(format!(
            "walk base must be 4 or 6, got {base}"
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(MeshError::Parameter(format!(
            "walk step must be positive, got {step}"
        )));
    }
    let dirs = [
        vec3(1.0, 0.0, 0.0),
        vec3(-1.0, 0.0, 0.0),
        vec3(0.0, 1.0, 0.0),
        vec3(0.0, -1.0, 0.0),
        vec3(0.0, 0.0, 1.0),
        vec3(0.0, 0.0, -1.0),
    ];
    let mut points = Vec::with_capacity(digits.len() + 1);
    let mut p = Vec3::ZERO;
    points.push(p);
    for (i, &d) in digits.iter().enumerate() {
        if d >= base {
            return Err(MeshError::Input(format!(
                "digit {d} at index {i} out of range for base {base}"
            )));
        }
        p = p + dirs[d as usize] * step;
        points.push(p);
    }
    Polyline3::new(points, false)
}

/// Parse a digit file: one digit per character, whitespace ignored.
pub fn parse_digits(text: &str, base: u8) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for (i, ch) in text.chars().filter(|c| !c.is_whitespace()).enumerate() {
        let d = ch
            .to_digit(10)
            .ok_or_else(|| MeshError::Input(format!("non-digit character '{ch}' at index {i}")))?
            as u8;
        if d >= base {
            return Err(MeshError::Input(format!(
                "digit {d} at index {i} out of range for base {base}"
            )));
        }
        out.push(d);
    }
    if out.is_empty() {
        return Err(MeshError::Input("digit input is empty".into()));
    }
    Ok(out)
}
