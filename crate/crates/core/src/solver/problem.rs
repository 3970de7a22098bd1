use crate::measurement::Measurements;
use crate::operator::LinearOperator;
use crate::scalar::{self, Scalar};

/// Negative-semidefinite operator stored in factored form
/// `Q = sum_k lambda_k v_k v_k^H` with every `lambda_k <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NsdOperator<T> {
    n: usize,
    vectors: Vec<Vec<T>>,
    values: Vec<f64>,
}

impl<T: Scalar> NsdOperator<T> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            vectors: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds `Q` from orthonormal eigenvectors and nonpositive eigenvalues.
    pub fn from_eigenpairs(n: usize, vectors: Vec<Vec<T>>, values: Vec<f64>) -> Self {
        assert_eq!(vectors.len(), values.len());
        assert!(vectors.iter().all(|v| v.len() == n));
        assert!(values.iter().all(|&l| l <= 0.0), "eigenvalues must be nonpositive");
        Self { n, vectors, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&l| l == 0.0)
    }

    /// Spectral norm `max |lambda_k|`.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, l| acc.max(l.abs()))
    }

    pub fn apply(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|v| *v = T::zero());
        for (v, &l) in self.vectors.iter().zip(&self.values) {
            let c = scalar::dot(v, x).scale(l);
            scalar::axpy(c, v, out);
        }
    }

    /// `x^H Q x` (real because `Q` is Hermitian).
    pub fn quadratic_form(&self, x: &[T]) -> f64 {
        self.vectors
            .iter()
            .zip(&self.values)
            .map(|(v, &l)| l * scalar::dot(v, x).abs_sqr())
            .sum()
    }
}

/// What to maximize over the magnitude polytope.
#[derive(Clone, Debug, PartialEq)]
pub enum Objective<T> {
    /// `Re <c, x>`
    Linear(Vec<T>),
    /// `x^H Q x + Re <b, x>` with `Q` negative semidefinite.
    ConcaveQuadratic { q: NsdOperator<T>, b: Vec<T> },
}

impl<T: Scalar> Objective<T> {
    pub fn value(&self, x: &[T]) -> f64 {
        match self {
            Objective::Linear(c) => scalar::dot(c, x).re(),
            Objective::ConcaveQuadratic { q, b } => q.quadratic_form(x) + scalar::dot(b, x).re(),
        }
    }

    /// Gradient with respect to the real inner product `Re <., .>`.
    pub fn gradient(&self, x: &[T]) -> Vec<T> {
        match self {
            Objective::Linear(c) => c.clone(),
            Objective::ConcaveQuadratic { q, b } => {
                let mut g = vec![T::zero(); x.len()];
                q.apply(x, &mut g);
                g.iter_mut().zip(b).for_each(|(gi, &bi)| *gi = gi.scale(2.0) + bi);
                g
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Objective::Linear(c) => c.len(),
            Objective::ConcaveQuadratic { b, .. } => b.len(),
        }
    }
}

/// Maximize an objective over `{x : |<a_i, x>| <= y_i for all i}`.
pub struct PolytopeProblem<'a, T: Scalar, O: LinearOperator<T> + ?Sized> {
    pub op: &'a O,
    pub y: &'a Measurements,
    pub objective: Objective<T>,
}

impl<'a, T: Scalar, O: LinearOperator<T> + ?Sized> PolytopeProblem<'a, T, O> {
    pub fn new(op: &'a O, y: &'a Measurements, objective: Objective<T>) -> Self {
        Self { op, y, objective }
    }

    pub fn linear(op: &'a O, y: &'a Measurements, c: Vec<T>) -> Self {
        Self::new(op, y, Objective::Linear(c))
    }

    /// `max_i max(|<a_i, x>| - y_i, 0)`, recomputed from scratch.
    pub fn feasibility_violation(&self, x: &[T]) -> f64 {
        let mut z = vec![T::zero(); self.op.rows()];
        self.op.apply(x, &mut z);
        max_violation(&z, self.y.as_slice())
    }
}

pub(crate) fn max_violation<T: Scalar>(z: &[T], y: &[f64]) -> f64 {
    z.iter()
        .zip(y)
        .fold(0.0, |acc, (zi, &yi)| acc.max(zi.abs() - yi))
}

/// Euclidean projection of one measurement onto `|z| <= bound`: clipping for
/// reals, radial shrinking (phase preserved) for complex values.
#[inline]
pub fn project_row<T: Scalar>(z: T, bound: f64) -> T {
    debug_assert!(bound >= 0.0);
    let mag = z.abs();
    if mag <= bound {
        z
    } else if bound == 0.0 {
        T::zero()
    } else {
        z.scale(bound / mag)
    }
}

/// Proximal map of `t |.|`: shrinks the magnitude by `t`, keeping the phase.
/// Equals `v - project_row(v, t)` (Moreau decomposition).
#[inline]
pub(crate) fn shrink<T: Scalar>(v: T, t: f64) -> T {
    let mag = v.abs();
    if mag <= t {
        T::zero()
    } else {
        v.scale((mag - t) / mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn project_row_examples() {
        assert_eq!(project_row(1.7, 1.0), 1.0);
        assert_eq!(project_row(-1.7, 1.0), -1.0);
        assert_eq!(project_row(-0.3, 1.0), -0.3);
        assert_eq!(project_row(0.4, 0.0), 0.0);
        let p = project_row(Complex64::new(3.0, 4.0), 2.5);
        assert!((p - Complex64::new(1.5, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn shrink_is_moreau_complement() {
        for &(v, t) in &[(2.0, 0.5), (-0.2, 0.5), (0.5, 0.5), (-3.0, 1.0)] {
            assert!((shrink(v, t) + project_row(v, t) - v).abs() < 1e-15);
        }
        let v = Complex64::new(-1.0, 2.0);
        assert!((shrink(v, 0.7) + project_row(v, 0.7) - v).norm() < 1e-15);
    }

    #[test]
    fn quadratic_objective_gradient() {
        let q = NsdOperator::from_eigenpairs(2, vec![vec![1.0, 0.0]], vec![-3.0]);
        let obj = Objective::ConcaveQuadratic { q, b: vec![1.0, 2.0] };
        let x = [0.5, -1.0];
        assert!((obj.value(&x) - (-0.75 + 0.5 - 2.0)).abs() < 1e-15);
        assert_eq!(obj.gradient(&x), vec![-3.0 + 1.0, 2.0]);
    }
}
