use nalgebra::{DMatrix, SymmetricEigen};

use super::DistanceMatrix;
use crate::geometry::PointCloud;
use crate::{Error, Result};

/// Classical multidimensional scaling into `R^dim`.
///
/// Double-centres `-½ D²`, keeps the `dim` largest eigenpairs and scales each
/// eigenvector by `√max(λ, 0)`. Each axis is oriented so that its first
/// non-negligible coordinate is positive.
pub fn mds_project(dist: &DistanceMatrix, dim: usize) -> Result<PointCloud> {
    let n = dist.len();
    if dim == 0 || dim >= n.max(2) {
        return Err(Error::invalid(format!("embedding dimension must be in 1..{n}, got {dim}")));
    }
    if let Some(pos) = dist.lower().iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("MDS needs finite distances (entry {pos} is not)")));
    }
    let gram = double_centered_gram(dist);
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let mut coords = vec![0.0; n * dim];
    for (axis, &e) in order.iter().take(dim).enumerate() {
        let scale = eig.eigenvalues[e].max(0.0).sqrt();
        let v = eig.eigenvectors.column(e);
        let sign = v
            .iter()
            .find(|c| c.abs() > 1e-12)
            .map_or(1.0, |c| c.signum());
        for i in 0..n {
            coords[i * dim + axis] = sign * v[i] * scale;
        }
    }
    PointCloud::from_flat(coords, dim)
}

/// `B = -½ J D² J` with `J = I - 11ᵀ/n`.
pub(crate) fn double_centered_gram(dist: &DistanceMatrix) -> DMatrix<f64> {
    let n = dist.len();
    let sq = DMatrix::from_fn(n, n, |i, j| dist.get(i, j).powi(2));
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand))
}
