//! Augmented-Lagrangian local solver for one multistart run.
//!
//! Minimizes `Σ ξ_j` over the free slots of a face subject to the four
//! equality residuals, `ξ ≥ 0` and an optional `Σ ξ_j ≤ B`. The inner problem
//! is solved by a projected BFGS method with an Armijo search along the
//! projection arc. A Gauss-Newton polish on the non-zero slots then drives
//! the residual to rounding level.

use nalgebra::{Matrix5, SMatrix, Vector5};

use crate::path::{norm4, residual_with_jacobian, ArcKind, Instance, SLOTS};
use crate::word::zero_threshold;

const MAX_OUTER: usize = 40;
const PENALTY_MAX: f64 = 1e10;
const STALL_PENALTY: f64 = 1e5;
const RESTORE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Outcome {
    pub xi: [f64; SLOTS],
    pub residual: f64,
    pub optimality: f64,
    pub bound_excess: f64,
}

struct Multipliers {
    eq: [f64; 4],
    bound: f64,
    penalty: f64,
}

struct Face<'a> {
    instance: &'a Instance,
    free: [bool; SLOTS],
    bound: Option<f64>,
}

impl Face<'_> {
    fn merit(&self, x: &Vector5<f64>, m: &Multipliers) -> (f64, Vector5<f64>) {
        let xi: [f64; SLOTS] = (*x).into();
        let (c, jac) = residual_with_jacobian(self.instance, &xi);
        let r = m.penalty;
        let lam: [f64; 4] = std::array::from_fn(|i| m.eq[i] + r * c[i]);
        let mut val: f64 = xi.iter().sum();
        for i in 0..4 {
            val += m.eq[i] * c[i] + 0.5 * r * c[i] * c[i];
        }
        let mut bound_grad = 0.0;
        if let Some(b) = self.bound {
            let z = (m.bound + r * (xi.iter().sum::<f64>() - b)).max(0.0);
            val += (z * z - m.bound * m.bound) / (2.0 * r);
            bound_grad = z;
        }
        let mut grad = Vector5::zeros();
        for j in 0..SLOTS {
            if self.free[j] {
                grad[j] = 1.0 + bound_grad + (0..4).map(|i| jac[i][j] * lam[i]).sum::<f64>();
            }
        }
        (val, grad)
    }

    fn projected_gradient(&self, x: &Vector5<f64>, g: &Vector5<f64>) -> Vector5<f64> {
        Vector5::from_fn(|j, _| {
            if !self.free[j] || (x[j] <= 0.0 && g[j] > 0.0) {
                0.0
            } else {
                g[j]
            }
        })
    }

    fn project(&self, x: &Vector5<f64>) -> Vector5<f64> {
        Vector5::from_fn(|j, _| if self.free[j] { x[j].max(0.0) } else { 0.0 })
    }

    fn minimize_inner(
        &self,
        x0: Vector5<f64>,
        m: &Multipliers,
        tol: f64,
        max_iter: usize,
    ) -> Vector5<f64> {
        let mut x = self.project(&x0);
        let (mut fx, mut gx) = self.merit(&x, m);
        let mut h = Matrix5::<f64>::identity();
        let mut fresh = true;
        for _ in 0..max_iter {
            let pg = self.projected_gradient(&x, &gx);
            if pg.amax() <= tol {
                break;
            }
            let blocked = |j: usize| !self.free[j] || (x[j] <= 0.0 && gx[j] > 0.0);
            let mut d = -(h * gx);
            for j in 0..SLOTS {
                if blocked(j) {
                    d[j] = 0.0;
                }
            }
            if d.dot(&gx) >= 0.0 {
                h = Matrix5::identity();
                fresh = true;
                d = -pg;
            }
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let xn = self.project(&(x + d * alpha));
                let (fnew, gnew) = self.merit(&xn, m);
                if fnew <= fx + 1e-4 * gx.dot(&(xn - x)) {
                    accepted = Some((xn, fnew, gnew));
                    break;
                }
                alpha *= 0.5;
            }
            let Some((xn, fnew, gnew)) = accepted else {
                if fresh {
                    break;
                }
                h = Matrix5::identity();
                fresh = true;
                continue;
            };
            let s = xn - x;
            let y = gnew - gx;
            let sy = s.dot(&y);
            if sy > 1e-12 * s.norm() * y.norm() {
                if fresh {
                    h *= sy / y.dot(&y);
                    fresh = false;
                }
                let rho = 1.0 / sy;
                let left = Matrix5::identity() - s * y.transpose() * rho;
                h = left * h * left.transpose() + s * s.transpose() * rho;
            }
            if (fx - fnew).abs() <= 1e-16 * fx.abs().max(1.0) && s.amax() <= 1e-15 {
                x = xn;
                break;
            }
            x = xn;
            fx = fnew;
            gx = gnew;
        }
        x
    }
}

/// One augmented-Lagrangian run from `start` restricted to the `free` slots.
pub(crate) fn run(
    instance: &Instance,
    start: [f64; SLOTS],
    free: [bool; SLOTS],
    bound: Option<f64>,
    max_inner: usize,
) -> Outcome {
    let face = Face {
        instance,
        free,
        bound,
    };
    let mut m = Multipliers {
        eq: [0.0; 4],
        bound: 0.0,
        penalty: 10.0,
    };
    let mut x = face.project(&Vector5::from(start));
    let mut tol = 1e-2;
    let mut prev_violation = f64::INFINITY;

    for _ in 0..MAX_OUTER {
        x = face.minimize_inner(x, &m, tol, max_inner);
        let xi: [f64; SLOTS] = x.into();
        let (c, _) = residual_with_jacobian(instance, &xi);
        let mut violation = norm4(&c);
        for i in 0..4 {
            m.eq[i] += m.penalty * c[i];
        }
        if let Some(b) = bound {
            let g = xi.iter().sum::<f64>() - b;
            violation = violation.max(g.max(-m.bound / m.penalty));
            m.bound = (m.bound + m.penalty * g).max(0.0);
        }
        if violation <= 1e-8 && tol <= 1e-7 {
            break;
        }
        // A large penalty that still leaves the constraints far from
        // satisfied means the run sits in an infeasible basin.
        if m.penalty >= STALL_PENALTY && violation > 1e-2 {
            break;
        }
        if violation > 0.25 * prev_violation {
            m.penalty = (m.penalty * 10.0).min(PENALTY_MAX);
        }
        prev_violation = violation;
        tol = (tol * 0.1).max(1e-9);
    }

    let mut xi = polish(instance, drop_loops(instance, x.into()), free, bound);
    let (mut c, mut jac) = residual_with_jacobian(instance, &xi);
    if norm4(&c) > RESTORE_TOL {
        // Feasibility restoration from the start point on the same face.
        let restored = polish(
            instance,
            face.project(&Vector5::from(start)).into(),
            free,
            bound,
        );
        let restored = drop_loops(instance, restored);
        let (rc, rjac) = residual_with_jacobian(instance, &restored);
        if norm4(&rc) < norm4(&c) {
            (xi, c, jac) = (restored, rc, rjac);
        }
    }
    let total: f64 = xi.iter().sum();
    let bound_excess = bound.map_or(0.0, |b| (total - b).max(0.0));
    let bound_active = bound.is_some_and(|b| (total - b).abs() <= 1e-9 * b.max(1.0));
    Outcome {
        xi,
        residual: norm4(&c),
        optimality: reduced_gradient(&xi, &jac, free, bound_active),
        bound_excess,
    }
}

/// Removes whole turns from the turning slots. A full loop changes neither
/// the endpoint nor the constraint Jacobian, so feasibility and stationarity
/// carry over to the shorter point.
pub(crate) fn drop_loops(instance: &Instance, mut xi: [f64; SLOTS]) -> [f64; SLOTS] {
    let period = instance.full_turn();
    for (j, kind) in ArcKind::WORD.into_iter().enumerate() {
        if kind.is_turn() && xi[j] >= period {
            xi[j] = xi[j].rem_euclid(period);
        }
    }
    xi
}

/// Gauss-Newton on the four residuals over slots that are free and above the
/// zero threshold; the other slots are pinned to zero.
pub(crate) fn polish(
    instance: &Instance,
    mut xi: [f64; SLOTS],
    free: [bool; SLOTS],
    bound: Option<f64>,
) -> [f64; SLOTS] {
    for _ in 0..4 {
        let thr = zero_threshold(xi.iter().sum());
        let active: [bool; SLOTS] = std::array::from_fn(|j| free[j] && xi[j] >= thr);
        for j in 0..SLOTS {
            if !active[j] {
                xi[j] = 0.0;
            }
        }
        xi = gauss_newton(instance, xi, active, bound);
        let thr = zero_threshold(xi.iter().sum());
        if (0..SLOTS).all(|j| !active[j] || xi[j] >= thr) {
            break;
        }
    }
    xi
}

fn gauss_newton(
    instance: &Instance,
    mut xi: [f64; SLOTS],
    active: [bool; SLOTS],
    bound: Option<f64>,
) -> [f64; SLOTS] {
    let (mut r, mut jac) = residual_with_jacobian(instance, &xi);
    let mut norm = norm4(&r);
    for _ in 0..60 {
        if norm <= 1e-15 {
            break;
        }
        let mut normal = Matrix5::<f64>::zeros();
        let mut rhs = Vector5::<f64>::zeros();
        for p in 0..SLOTS {
            if !active[p] {
                normal[(p, p)] = 1.0;
                continue;
            }
            rhs[p] = -(0..4).map(|i| jac[i][p] * r[i]).sum::<f64>();
            for q in 0..SLOTS {
                if active[q] {
                    normal[(p, q)] = (0..4).map(|i| jac[i][p] * jac[i][q]).sum();
                }
            }
        }
        let damping = 1e-13 * (1.0 + normal.diagonal().amax());
        for p in 0..SLOTS {
            if active[p] {
                normal[(p, p)] += damping;
            }
        }
        let Some(step) = normal.lu().solve(&rhs) else {
            break;
        };
        let mut alpha = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial: [f64; SLOTS] = std::array::from_fn(|j| (xi[j] + alpha * step[j]).max(0.0));
            if let Some(b) = bound {
                if trial.iter().sum::<f64>() > b * (1.0 + 1e-12) {
                    alpha *= 0.5;
                    continue;
                }
            }
            let (rt, jt) = residual_with_jacobian(instance, &trial);
            let nt = norm4(&rt);
            if nt < norm {
                xi = trial;
                r = rt;
                jac = jt;
                norm = nt;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    xi
}

/// Norm of the objective gradient on the free non-zero slots after removing
/// its component along the constraint gradients.
pub(crate) fn reduced_gradient(
    xi: &[f64; SLOTS],
    jac: &[[f64; SLOTS]; 4],
    free: [bool; SLOTS],
    bound_active: bool,
) -> f64 {
    let thr = zero_threshold(xi.iter().sum());
    let active: [bool; SLOTS] = std::array::from_fn(|j| free[j] && xi[j] >= thr);
    let g = Vector5::from_fn(|j, _| if active[j] { 1.0 } else { 0.0 });
    if g.norm() == 0.0 {
        return 0.0;
    }
    let mut cols = SMatrix::<f64, SLOTS, 5>::zeros();
    for j in 0..SLOTS {
        if active[j] {
            for i in 0..4 {
                cols[(j, i)] = jac[i][j];
            }
            if bound_active {
                cols[(j, 4)] = 1.0;
            }
        }
    }
    let Ok(pinv) = cols.pseudo_inverse(1e-10) else {
        return g.norm();
    };
    let proj = cols * (pinv * g);
    (g - proj).norm()
}
