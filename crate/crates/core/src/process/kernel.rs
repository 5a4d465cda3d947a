//! The kernel `k_S(t) = (1/π) ∫₀^π |sin(t+z) sin z| dz` and the matrices `K(t)`.

use crate::circulant::CirculantMatrix;
use crate::geometry::regular_subdivision;
use crate::scalar::{cst, Scalar};

/// Closed form of `k_S`, extended π-periodically from `[0, π]`.
pub fn k_s<T: Scalar>(t: T) -> T {
    let pi = T::PI();
    let r = t - (t / pi).floor() * pi;
    let two = cst::<T>(2.0);
    let s = r.sin();
    (two * s * s * s + r.cos() * (pi - two * r + (two * r).sin())) / (two * pi)
}

/// `K(t)` with `K_ij = k_S(t + θᵢ − θⱼ)` on the regular `n`-grid.
pub fn k_matrix<T: Scalar>(n: usize, t: T) -> CirculantMatrix<T> {
    let col = regular_subdivision::<T>(n).into_iter().map(|th| k_s(t + th)).collect();
    CirculantMatrix::new(col).expect("n >= 1")
}
