use num_complex::Complex64;

use super::{check_len, FixedPointProblem, ProblemError};

/// Presents a complex problem on `C^n` as a real problem on `R^{2n}`, laid
/// out as `[Re u; Im u]`.
///
/// Maps that are not complex-analytic in `u` (for example through `|u|^2`)
/// have only a real-linear Jacobian. Least-squares coefficients must then be
/// real to model it, which this view provides. Norms are unchanged.
#[derive(Debug, Clone)]
pub struct RealView<P> {
    inner: P,
}

impl<P: FixedPointProblem<Complex64>> RealView<P> {
    pub fn new(inner: P) -> Self {
        Self { inner }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

pub fn split_complex(u: &[Complex64]) -> Vec<f64> {
    u.iter().map(|z| z.re).chain(u.iter().map(|z| z.im)).collect()
}

/// Inverse of [`split_complex`].
///
/// # Panics
/// If `x` has odd length.
pub fn join_complex(x: &[f64]) -> Vec<Complex64> {
    assert!(x.len().is_multiple_of(2), "stacked vector must have even length");
    let n = x.len() / 2;
    (0..n).map(|i| Complex64::new(x[i], x[n + i])).collect()
}

impl<P: FixedPointProblem<Complex64>> FixedPointProblem<f64> for RealView<P> {
    fn dim(&self) -> usize {
        2 * self.inner.dim()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        check_len(self.dim(), x.len())?;
        Ok(split_complex(&self.inner.apply(&join_complex(x))?))
    }

    fn description(&self) -> String {
        format!("{} (real coefficients)", self.inner.description())
    }

    fn initial_guess(&self) -> Vec<f64> {
        split_complex(&self.inner.initial_guess())
    }

    fn known_solution(&self) -> Option<Vec<f64>> {
        self.inner.known_solution().map(|u| split_complex(&u))
    }

    fn beta_star(&self) -> Option<f64> {
        self.inner.beta_star()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{NlhParams, NonlinearHelmholtz};

    #[test]
    fn round_trip() {
        let u = vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 3.0)];
        assert_eq!(split_complex(&u), vec![1.0, 0.5, -2.0, 3.0]);
        assert_eq!(join_complex(&split_complex(&u)), u);
    }

    #[test]
    fn view_matches_inner_map() {
        let p = NonlinearHelmholtz::new(NlhParams {
            nodes: 51,
            ..Default::default()
        })
        .unwrap();
        let u0 = p.initial_guess();
        let expected = split_complex(&p.apply(&u0).unwrap());
        let view = RealView::new(p);
        assert_eq!(view.dim(), 102);
        assert_eq!(view.apply(&view.initial_guess()).unwrap(), expected);
    }
}
