//! Nine-point Laplacian with mirror-reflected (no-flux) boundaries.
//!
//! Interior stencil, with `C` the center and compass-point neighbors:
//!
//! ```text
//! (1 / 6 dx^2) * [ 4(W + E + S + N) + NW + NE + SW + SE - 20 C ]
//! ```
//!
//! Out-of-domain neighbors are replaced by their mirror image across the
//! boundary node (`u(-1, j) = u(1, j)` and so on); diagonal ghosts at corners
//! reflect across both boundaries. This closure keeps the discrete normal
//! flux zero on every edge.

use super::grid::Field;

#[inline]
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let r = if i < 0 {
        -i
    } else if i >= n {
        2 * n - 2 - i
    } else {
        i
    };
    r as usize
}

pub fn nine_point_laplacian(f: &Field) -> Field {
    let g = f.grid;
    let (nx, ny) = (g.nx, g.ny);
    let inv = 1.0 / (6.0 * g.dx * g.dx);
    let mut out = Field::constant(g, 0.0);
    for iy in 0..ny {
        let ym = reflect(iy as isize - 1, ny);
        let yp = reflect(iy as isize + 1, ny);
        for ix in 0..nx {
            let xm = reflect(ix as isize - 1, nx);
            let xp = reflect(ix as isize + 1, nx);
            let c = f.at(ix, iy);
            let side = f.at(xm, iy) + f.at(xp, iy) + f.at(ix, ym) + f.at(ix, yp);
            let diag = f.at(xm, ym) + f.at(xp, ym) + f.at(xm, yp) + f.at(xp, yp);
            out.set(ix, iy, inv * (4.0 * side + diag - 20.0 * c));
        }
    }
    out
}
