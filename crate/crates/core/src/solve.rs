//! Back substitution for shape-position lex bases over prime fields.

use crate::field::{Field, FiniteField};
use crate::poly::Polynomial;
use crate::shapegen::is_shape_position;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("the zero polynomial has every element as a root")]
    ZeroPolynomial,
    #[error("basis is not in lex shape position")]
    NotShapePosition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet<C> {
    pub points: Vec<Vec<C>>,
    /// The roots of `h` were enumerated exhaustively.
    pub complete: bool,
}

/// All roots in the field, by evaluation at every element. The polynomial may
/// live in any number of variables but use at most one of them.
pub fn univariate_roots_fp<C: FiniteField>(h: &Polynomial<C>) -> Result<Vec<C>, SolveError> {
    if h.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let n = h.nvars();
    let used: Vec<usize> = (0..n).filter(|&i| h.degree_in(i) > 0).collect();
    if used.len() > 1 {
        return Err(SolveError::NotUnivariate);
    }
    let Some(&var) = used.first() else {
        return Ok(Vec::new());
    };
    let mut point = vec![C::zero(); n];
    Ok(C::elements()
        .filter(|&r| {
            point[var] = r;
            h.evaluate(&point).expect("arity matches").is_zero()
        })
        .collect())
}

/// Points `(g1(r), ..., g{n-1}(r), r)` for every root `r` of `h`; each point
/// is checked against every member of `g`.
pub fn solve_shape<C: FiniteField>(g: &[Polynomial<C>]) -> Result<SolutionSet<C>, SolveError> {
    if !is_shape_position(g) {
        return Err(SolveError::NotShapePosition);
    }
    let n = g.len();
    let h = &g[n - 1];
    let mut points = Vec::new();
    for r in univariate_roots_fp(h)? {
        let mut point = vec![C::zero(); n];
        point[n - 1] = r;
        for (j, p) in g[..n - 1].iter().enumerate() {
            // p = x_j - g_j(x{n-1}); evaluating with x_j = 0 gives -g_j(r).
            let mut at = point.clone();
            at[j] = C::zero();
            point[j] = -p.evaluate(&at).expect("arity matches");
        }
        assert!(
            g.iter().all(|p| p.evaluate(&point).unwrap().is_zero()),
            "back substitution produced a non-solution"
        );
        points.push(point);
    }
    Ok(SolutionSet { points, complete: true })
}

/// Whether every member of `f` vanishes at `point`.
pub fn vanishes_at<C: Field>(f: &[Polynomial<C>], point: &[C]) -> bool {
    f.iter().all(|p| p.evaluate(point).is_ok_and(|v| v.is_zero()))
}
