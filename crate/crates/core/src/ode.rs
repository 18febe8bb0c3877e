//! Adaptive Dormand–Prince 5(4) integration of `u'' = (x² - 2E) u`.

use crate::error::{Error, Result};

/// Default local relative tolerance.
pub const DEFAULT_RTOL: f64 = 1e-11;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State = [f64; 2];

/// Integrator for the oscillator equation at a fixed energy.
#[derive(Debug, Clone, Copy)]
pub struct WeberOde {
    energy: f64,
    rtol: f64,
}

impl WeberOde {
    pub fn new(energy: f64) -> Self {
        Self { energy, rtol: DEFAULT_RTOL }
    }

    pub fn with_rtol(energy: f64, rtol: f64) -> Self {
        Self { energy, rtol }
    }

    fn rhs(&self, x: f64, y: State) -> State {
        [y[1], (x * x - 2.0 * self.energy) * y[0]]
    }

    fn initial_step(&self, x: f64, span: f64) -> f64 {
        let k = (x * x - 2.0 * self.energy).abs().max(1.0).sqrt();
        (0.05 / k).min(span.abs())
    }

    /// Advances `y` from `x0` to `x1` (either direction).
    pub fn integrate(&self, x0: f64, y0: State, x1: f64) -> Result<State> {
        let mut h = self.initial_step(x0, x1 - x0);
        self.advance(x0, y0, x1, &mut h)
    }

    /// Integrates through the monotone sequence `nodes`, starting from
    /// `y0` at `nodes[0]`, returning the state at every node.
    pub fn integrate_nodes(&self, nodes: &[f64], y0: State) -> Result<Vec<State>> {
        let mut out = Vec::with_capacity(nodes.len());
        let Some(&first) = nodes.first() else {
            return Ok(out);
        };
        out.push(y0);
        let mut y = y0;
        let mut h = self.initial_step(first, nodes.last().unwrap() - first);
        for w in nodes.windows(2) {
            y = self.advance(w[0], y, w[1], &mut h)?;
            out.push(y);
        }
        Ok(out)
    }

    /// One adaptive march; `h` carries the step-size estimate between calls.
    fn advance(&self, x0: f64, y0: State, x1: f64, h: &mut f64) -> Result<State> {
        let dir = if x1 >= x0 { 1.0 } else { -1.0 };
        let mut x = x0;
        let mut y = y0;
        let mut running_max = [y0[0].abs(), y0[1].abs()];
        *h = h.abs().max(1e-6 * (x1 - x0).abs()).min((x1 - x0).abs().max(f64::MIN_POSITIVE));
        let mut k0 = self.rhs(x, y);
        while (x1 - x) * dir > 0.0 {
            let remaining = (x1 - x).abs();
            let last = *h >= remaining;
            let step = if last { remaining } else { *h };
            let hs = step * dir;

            let mut k = [[0.0; 2]; 7];
            k[0] = k0;
            for s in 1..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        ys[0] += hs * a * kj[0];
                        ys[1] += hs * a * kj[1];
                    }
                }
                k[s] = self.rhs(x + C[s] * hs, ys);
            }
            // FSAL: the 7th stage is evaluated at the new point with the 5th-order state
            let mut y_new = y;
            for (j, kj) in k.iter().enumerate().take(6) {
                y_new[0] += hs * A[6][j] * kj[0];
                y_new[1] += hs * A[6][j] * kj[1];
            }
            let mut err: f64 = 0.0;
            for i in 0..2 {
                let e: f64 = hs * (0..7).map(|s| ERR[s] * k[s][i]).sum::<f64>();
                let scale = self.rtol
                    * (y[i].abs().max(y_new[i].abs()) + 1e-3 * running_max[i])
                    + f64::MIN_POSITIVE;
                err = err.max(e.abs() / scale);
            }

            if err <= 1.0 {
                x = if last { x1 } else { x + hs };
                y = y_new;
                k0 = k[6];
                running_max[0] = running_max[0].max(y[0].abs());
                running_max[1] = running_max[1].max(y[1].abs());
                if !last {
                    let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).min(5.0) };
                    *h = step * grow.max(1.0);
                }
            } else {
                let shrink = (0.9 * err.powf(-0.2)).max(0.2);
                *h = step * shrink;
                if *h < 1e-13 * (x.abs() + 1.0) {
                    return Err(Error::StepUnderflow { x, h: *h, energy: self.energy });
                }
            }
        }
        Ok(y)
    }
}
