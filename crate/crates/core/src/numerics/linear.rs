use num_complex::Complex64;

use super::{rk4, Grid, Trajectory};
use crate::error::{Error, Result};

pub type Vec2 = [Complex64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat_vec(m: &Mat2, v: &Vec2) -> Vec2 {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn det(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Classical RK4 for `U' = M(x) U + F(x)`, `U(0) = u0`, with every stage point
/// on the refined grid. This is the reference integrator every reduction is
/// checked against.
pub fn integrate_linear_system(
    matrix: impl Fn(f64) -> Mat2,
    forcing: Option<&dyn Fn(f64) -> Vec2>,
    u0: Vec2,
    grid: &Grid,
) -> Result<Trajectory> {
    let xs = grid.refined_nodes();
    let ms: Vec<Mat2> = xs.iter().map(|&x| matrix(x)).collect();
    if let Some(j) = ms.iter().position(|m| !m.iter().flatten().all(finite)) {
        return Err(Error::NonFinite {
            what: "system matrix".into(),
            node: j,
            x: xs[j],
        });
    }
    let fs: Option<Vec<Vec2>> = forcing.map(|f| xs.iter().map(|&x| f(x)).collect());
    if let Some(fs) = &fs {
        if let Some(j) = fs.iter().position(|v| !v.iter().all(finite)) {
            return Err(Error::NonFinite {
                what: "forcing".into(),
                node: j,
                x: xs[j],
            });
        }
    }
    integrate_tabulated(&ms, fs.as_deref(), u0, grid)
}

/// [`integrate_linear_system`] with `M` and `F` already tabulated on the
/// refined nodes.
pub fn integrate_tabulated(
    ms: &[Mat2],
    fs: Option<&[Vec2]>,
    u0: Vec2,
    grid: &Grid,
) -> Result<Trajectory> {
    if !u0.iter().all(finite) {
        return Err(Error::InvalidInput("initial state is not finite".into()));
    }
    let states = rk4::integrate(grid, u0, "linear system state", |j, u| {
        let mut du = mat_vec(&ms[j], u);
        if let Some(fs) = fs {
            du[0] += fs[j][0];
            du[1] += fs[j][1];
        }
        du
    })?;
    let (a, b) = states.into_iter().map(|s| (s[0], s[1])).unzip();
    Trajectory::pair(*grid, a, b)
}

/// Propagates both unit vectors and returns `Φ(x_j)` at every refined node.
pub fn fundamental_matrix(matrix: impl Fn(f64) -> Mat2, grid: &Grid) -> Result<Vec<Mat2>> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let ms: Vec<Mat2> = grid.refined_nodes().iter().map(|&x| matrix(x)).collect();
    let c0 = integrate_tabulated(&ms, None, [one, zero], grid)?;
    let c1 = integrate_tabulated(&ms, None, [zero, one], grid)?;
    Ok((0..grid.refined_len())
        .map(|j| [[c0.at(j, 0), c1.at(j, 0)], [c0.at(j, 1), c1.at(j, 1)]])
        .collect())
}

fn finite(z: &Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
