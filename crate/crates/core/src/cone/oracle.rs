use super::ConeModel;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

const MAX_DOUBLINGS: usize = 200;
const MAX_BISECTIONS: usize = 400;

/// Independent gauge evaluation: bisection on μ using only the membership
/// test for μy − x, to absolute accuracy `abs_tol`.
pub fn gauge_oracle(
    model: &ConeModel,
    x: &Element,
    y: &Element,
    abs_tol: f64,
    tol: &Tolerance,
) -> Result<f64> {
    model.check_dim(x)?;
    model.require_interior(y, "oracle denominator", tol)?;
    if !(abs_tol > 0.0) {
        return Err(Error::input("oracle tolerance must be positive"));
    }
    let member = |mu: f64| model.contains(&y.scale(mu).axpy(-1.0, x), false, 0.0);

    let mut hi = 1.0_f64;
    let mut steps = 0;
    while !member(hi) {
        hi *= 2.0;
        steps += 1;
        if steps > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::internal(
                "gauge oracle: no upper bracket (broken membership?)",
            ));
        }
    }
    let mut lo = -1.0_f64;
    steps = 0;
    while member(lo) {
        lo *= 2.0;
        steps += 1;
        if steps > MAX_DOUBLINGS || !lo.is_finite() {
            return Err(Error::internal(
                "gauge oracle: no lower bracket (broken membership?)",
            ));
        }
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= abs_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if member(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
