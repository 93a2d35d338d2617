//! Derivative-free one-dimensional search.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 − 1)/2

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// True when `candidate` strictly improves on `incumbent`.
    pub fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Sense::Maximize => candidate > incumbent,
            Sense::Minimize => candidate < incumbent,
        }
    }

    /// Worst possible score, used for points that fail to evaluate.
    pub fn worst(self) -> f64 {
        match self {
            Sense::Maximize => f64::NEG_INFINITY,
            Sense::Minimize => f64::INFINITY,
        }
    }
}

/// Golden-section search for an extremum of a unimodal `f` on `[lo, hi]`.
///
/// `f` returns `None` where it cannot be evaluated; such points count as the
/// worst possible value. Iterates until the bracket is narrower than `tol`
/// and returns the best point seen with its value. Ties go to the lower
/// abscissa.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64, sense: Sense) -> (f64, f64)
where
    F: FnMut(f64) -> Option<f64>,
{
    let mut eval = |x: f64| f(x).filter(|v| !v.is_nan()).unwrap_or(sense.worst());
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let tol = tol.max(f64::EPSILON * (a.abs() + b.abs()));

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);

    let (fa, fb) = (eval(a), eval(b));
    let mut best = (a, fa);
    for (x, v) in [(x1, f1), (x2, f2), (b, fb)] {
        if sense.improves(v, best.1) {
            best = (x, v);
        }
    }

    while b - a > tol {
        if sense.improves(f2, f1) {
            // optimum in [x1, b]
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
            if sense.improves(f2, best.1) {
                best = (x2, f2);
            }
        } else {
            // optimum in [a, x2]; ties move toward the lower end
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
            if sense.improves(f1, best.1) || (f1 == best.1 && x1 < best.0) {
                best = (x1, f1);
            }
        }
    }
    best
}
