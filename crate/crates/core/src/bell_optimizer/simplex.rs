//! Nelder–Mead maximisation in three variables.

pub(crate) struct Outcome {
    pub x: [f64; 3],
    pub value: f64,
}

/// Maximises `f` from an axis-aligned simplex of edge `step` around `x0`.
/// Stops once the spread of vertex values drops below `tol · (1 + |best|)`
/// and the simplex has shrunk below `1e3 · tol`, or after `max_iters`
/// iterations.
pub(crate) fn maximize(mut f: impl FnMut(&[f64; 3]) -> f64, x0: [f64; 3], step: f64, max_iters: usize, tol: f64) -> Outcome {
    let mut pts = [x0; 4];
    for (k, p) in pts.iter_mut().skip(1).enumerate() {
        p[k] += step;
    }
    let mut vals = pts.map(|p| f(&p));
    let order = |vals: &[f64; 4]| {
        let mut idx = [0usize, 1, 2, 3];
        // Best first; ties keep the earlier vertex for reproducibility.
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
        idx
    };
    for _ in 0..max_iters {
        let idx = order(&vals);
        let (best, worst, second) = (idx[0], idx[3], idx[2]);
        let size = pts
            .iter()
            .map(|p| (0..3).map(|k| (p[k] - pts[best][k]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if vals[best] - vals[worst] <= tol * (1.0 + vals[best].abs()) && size <= 1e3 * tol {
            break;
        }
        let mut centroid = [0.0; 3];
        for &i in &idx[..3] {
            for k in 0..3 {
                centroid[k] += pts[i][k] / 3.0;
            }
        }
        let along = |s: f64| -> [f64; 3] { std::array::from_fn(|k| centroid[k] + s * (pts[worst][k] - centroid[k])) };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr > vals[best] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe > fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if fr > vals[second] {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr > vals[worst] {
            let x = along(-0.5);
            let v = f(&x);
            (x, v)
        } else {
            let x = along(0.5);
            let v = f(&x);
            (x, v)
        };
        if fc > vals[worst].max(fr) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        let anchor = pts[best];
        for i in 0..4 {
            if i != best {
                pts[i] = std::array::from_fn(|k| anchor[k] + 0.5 * (pts[i][k] - anchor[k]));
                vals[i] = f(&pts[i]);
            }
        }
    }
    let best = order(&vals)[0];
    Outcome {
        x: pts[best],
        value: vals[best],
    }
}
