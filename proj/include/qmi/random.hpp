// random.hpp: seeded sampling of Haar isometries, states and unit vectors.

#pragma once

#include <cstdint>
#include <random>

#include "qmi/operator_core.hpp"

namespace qmi {

using Rng = std::mt19937_64;

// Decorrelates per-item seeds drawn from one suite seed (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Entries i.i.d. standard complex normal (E|z|^2 = 1).
inline Matrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = cplx(normal(rng), normal(rng));
  return g;
}

// Haar-distributed isometry (rows >= cols) via QR with the phase of R fixed.
inline Matrix haar_isometry(Index rows, Index cols, Rng& rng) {
  if (rows < cols) throw DimensionError("haar_isometry: rows < cols");
  const Matrix g = complex_gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  for (Index k = 0; k < cols; ++k) {
    const cplx d = r(k, k);
    const double a = std::abs(d);
    if (a > 0.0) q.col(k) *= d / a;
  }
  return q;
}

inline Matrix haar_unitary(Index d, Rng& rng) { return haar_isometry(d, d, rng); }

inline Vector random_unit_vector(Index d, Rng& rng) {
  Vector v = complex_gaussian(d, 1, rng).col(0);
  return v / v.norm();
}

// Hilbert-Schmidt-type random state G G* / Tr with G of shape d x rank.
inline DensityOperator random_density(Index d, Rng& rng, Index rank = 0) {
  if (rank <= 0 || rank > d) rank = d;
  const Matrix g = complex_gaussian(d, rank, rng);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator(m);
}

} // namespace qmi
