//! Fixed-step classical Runge–Kutta on complex state arrays.

use num_complex::Complex;

use crate::scalar::Real;

pub(crate) type CVec<T, const N: usize> = [Complex<T>; N];

/// Splits `[0, t_end]` at the given breakpoints, dropping empty pieces.
pub(crate) fn pieces<T: Real>(mut breaks: Vec<T>, t_end: T) -> Vec<(T, T)> {
    breaks.push(T::zero());
    breaks.push(t_end);
    breaks.retain(|b| b.is_finite() && *b >= T::zero() && *b <= t_end);
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    let min_len = t_end * T::lit(1e-14);
    let mut out = Vec::with_capacity(breaks.len());
    let mut start = T::zero();
    for &b in &breaks[1..] {
        if b - start > min_len {
            out.push((start, b));
            start = b;
        }
    }
    if let Some(last) = out.last_mut() {
        last.1 = t_end;
    }
    out
}

fn axpy<T: Real, const N: usize>(y: &CVec<T, N>, h: T, k: &CVec<T, N>) -> CVec<T, N> {
    let mut out = *y;
    for (o, kk) in out.iter_mut().zip(k) {
        *o += *kk * h;
    }
    out
}

/// Integrates `y' = rhs(t, y)` from 0 to `t_end`.
///
/// Each piece between breakpoints is covered by equal steps no wider than
/// `dt`. Stage times are kept strictly inside the current piece so that
/// right-open control supports are sampled from the correct side. `post`
/// runs after every step with the new time and state.
pub(crate) fn rk4_piecewise<T, const N: usize, F, G>(
    y0: CVec<T, N>,
    t_end: T,
    dt: T,
    breaks: Vec<T>,
    mut rhs: F,
    mut post: G,
) -> CVec<T, N>
where
    T: Real,
    F: FnMut(T, &CVec<T, N>) -> CVec<T, N>,
    G: FnMut(T, &mut CVec<T, N>),
{
    let mut y = y0;
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    for (a, b) in pieces(breaks, t_end) {
        let steps = ((b - a) / dt).ceil().to_usize().unwrap_or(1).max(1);
        let h = (b - a) / T::from_usize(steps).unwrap();
        let nudge = (b - a) * T::lit(1e-12);
        let inside = |t: T| t.max(a + nudge).min(b - nudge);
        for k in 0..steps {
            let t = a + h * T::from_usize(k).unwrap();
            let half = h / two;
            let k1 = rhs(inside(t), &y);
            let k2 = rhs(inside(t + half), &axpy(&y, half, &k1));
            let k3 = rhs(inside(t + half), &axpy(&y, half, &k2));
            let k4 = rhs(inside(t + h), &axpy(&y, h, &k3));
            for i in 0..N {
                y[i] += (k1[i] + (k2[i] + k3[i]) * two + k4[i]) * (h / six);
            }
            let t_next = if k + 1 == steps { b } else { t + h };
            post(t_next, &mut y);
        }
    }
    y
}
