use crate::PropError;
use nalgebra::Matrix3;
use quantum_core::C64;

pub(crate) type M3 = Matrix3<C64>;

/// Adaptive stepper settings.  `n_steps` sets the initial trial step as
/// span/n_steps; accuracy is governed by the tolerances, not the count.
#[derive(Clone, Copy, Debug)]
pub struct PropagationGrid {
    pub n_steps: usize,
    pub atol: f64,
    pub rtol: f64,
}

impl Default for PropagationGrid {
    fn default() -> Self {
        PropagationGrid {
            n_steps: 2000,
            atol: 1e-10,
            rtol: 1e-8,
        }
    }
}

impl PropagationGrid {
    pub fn validate(&self) -> Result<(), PropError> {
        if self.n_steps < 100 {
            return Err(PropError::BadGrid(format!(
                "n_steps = {} below the minimum of 100",
                self.n_steps
            )));
        }
        if !(self.atol > 0.0 && self.rtol > 0.0) {
            return Err(PropError::BadGrid("tolerances must be positive".into()));
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) coefficients.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

fn weighted_sum(y: &M3, h: f64, ks: &[&M3], ws: &[f64]) -> M3 {
    let mut out = *y;
    for (k, w) in ks.iter().zip(ws) {
        if *w != 0.0 {
            out += **k * quantum_core::cr(h * *w);
        }
    }
    out
}

/// Hairer-style mixed error norm: RMS over real components of
/// e_i / (atol + rtol·max(|y_i|, |y_new_i|)).
fn error_norm(err: &M3, y: &M3, y_new: &M3, atol: f64, rtol: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let sc_re = atol + rtol * y[(i, j)].re.abs().max(y_new[(i, j)].re.abs());
            let sc_im = atol + rtol * y[(i, j)].im.abs().max(y_new[(i, j)].im.abs());
            acc += (err[(i, j)].re / sc_re).powi(2) + (err[(i, j)].im / sc_im).powi(2);
        }
    }
    (acc / 18.0).sqrt()
}

/// Integrate dy/dt = f(t, y) over [t0, t1] adaptively.  `post_step` runs on
/// every accepted state (structure checks, e.g. trace drift) and may abort.
pub(crate) fn rk45_segment<F, P>(
    f: &F,
    y0: M3,
    t0: f64,
    t1: f64,
    h0: f64,
    grid: &PropagationGrid,
    post_step: &P,
) -> Result<M3, PropError>
where
    F: Fn(f64, &M3) -> M3,
    P: Fn(f64, &M3) -> Result<(), PropError>,
{
    let span = t1 - t0;
    debug_assert!(span > 0.0);
    let h_floor = span.max(t1.abs()) * 1e-14;
    let mut t = t0;
    let mut y = y0;
    let mut h = h0.min(span);
    let mut k1 = f(t, &y);

    // Stall guard: unattainable tolerances can trap the controller in an
    // accept/reject cycle at ulp-scale steps that technically advances t.
    const MAX_STAGES: usize = 1_000_000;
    let mut stages = 0usize;

    while t < t1 {
        stages += 1;
        if stages > MAX_STAGES {
            return Err(PropError::StepLimit { t, n: stages });
        }
        // Land exactly on the segment end; otherwise fp residue can stall
        // the loop on steps too small to advance t.
        let last = t + h >= t1;
        let h_eff = if last { t1 - t } else { h };
        if !last && h_eff < h_floor {
            return Err(PropError::StepUnderflow { t, h: h_eff });
        }

        let k2 = f(t + C[0] * h_eff, &weighted_sum(&y, h_eff, &[&k1], &A2));
        let k3 = f(t + C[1] * h_eff, &weighted_sum(&y, h_eff, &[&k1, &k2], &A3));
        let k4 = f(t + C[2] * h_eff, &weighted_sum(&y, h_eff, &[&k1, &k2, &k3], &A4));
        let k5 = f(
            t + C[3] * h_eff,
            &weighted_sum(&y, h_eff, &[&k1, &k2, &k3, &k4], &A5),
        );
        let k6 = f(
            t + C[4] * h_eff,
            &weighted_sum(&y, h_eff, &[&k1, &k2, &k3, &k4, &k5], &A6),
        );
        let y5 = weighted_sum(&y, h_eff, &[&k1, &k2, &k3, &k4, &k5, &k6], &B5);
        // FSAL: the last stage sits on the 5th-order solution.
        let k7 = f(t + h_eff, &y5);
        let y4 = weighted_sum(&y, h_eff, &[&k1, &k2, &k3, &k4, &k5, &k6, &k7], &B4);
        let err = error_norm(&(y5 - y4), &y, &y5, grid.atol, grid.rtol);

        if err <= 1.0 {
            t = if last { t1 } else { t + h_eff };
            y = y5;
            k1 = k7;
            post_step(t, &y)?;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = h_eff * factor;
    }
    Ok(y)
}

/// Drive [`rk45_segment`] across a breakpoint partition of [0, t_end].
/// `make_rhs` receives the segment midpoint so piecewise-constant terms can
/// be frozen exactly per segment.
pub(crate) fn integrate_piecewise<M, F, P>(
    make_rhs: M,
    y0: M3,
    t_end: f64,
    breakpoints: &[f64],
    grid: &PropagationGrid,
    post_step: &P,
) -> Result<M3, PropError>
where
    M: Fn(f64) -> F,
    F: Fn(f64, &M3) -> M3,
    P: Fn(f64, &M3) -> Result<(), PropError>,
{
    grid.validate()?;
    let h0 = t_end / grid.n_steps as f64;
    let mut edges = vec![0.0];
    edges.extend(breakpoints.iter().copied().filter(|&b| b > 0.0 && b < t_end));
    edges.push(t_end);

    let mut y = y0;
    for w in edges.windows(2) {
        let (sa, sb) = (w[0], w[1]);
        if sb - sa <= 0.0 {
            continue;
        }
        let rhs = make_rhs(0.5 * (sa + sb));
        y = rk45_segment(&rhs, y, sa, sb, h0, grid, post_step)?;
    }
    Ok(y)
}
