// operator_core.hpp: Hermitian spectral calculus, tensor algebra, partial
// traces, purification, support projectors and the Bures distance.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "qmi/errors.hpp"

namespace qmi {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Eigenvalues in [-positivity, 0) are clamped to zero.
inline constexpr double positivity = 1e-10;
// Support threshold, relative to the largest eigenvalue.
inline constexpr double support_relative = 1e-10;
inline constexpr double unit_trace = 1e-10;
// Relative trace mass of A allowed outside supp B before H(A||B) = +inf.
inline constexpr double support_mass = 1e-9;
inline constexpr double completeness = 1e-9;
} // namespace tol

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix identity(Index d) { return Matrix::Identity(d, d); }

inline Vector basis_vector(Index d, Index i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

// |i><j|
inline Matrix matrix_unit(Index d, Index i, Index j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

inline Matrix outer(const Vector& a, const Vector& b) { return a * b.adjoint(); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k = Eigen::kroneckerProduct(a, b);
  return k;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector k(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) k.segment(i * b.size(), b.size()) = a(i) * b;
  return k;
}

// ---------------------------------------------------------------------------
// Operator types

class HermitianOperator {
public:
  explicit HermitianOperator(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      std::ostringstream os;
      os << "HermitianOperator: expected a nonempty square matrix, got " << m.rows() << "x"
         << m.cols();
      throw DimensionError(os.str());
    }
    const double tau = 1e-12 * std::max(1.0, max_abs(m));
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i <= j; ++i) {
        const double diff = std::abs(m(i, j) - std::conj(m(j, i)));
        if (!(diff <= tau)) {
          std::ostringstream os;
          os << "HermitianOperator: entry (" << i << "," << j << ") differs from the conjugate of ("
             << j << "," << i << ") by " << diff;
          throw ValidationError(os.str(), "entries", diff);
        }
      }
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

protected:
  HermitianOperator() = default;
  Matrix m_;
};

// Eigenvalues sorted descending, eigenvectors as orthonormal columns.
struct Spectrum {
  RealVector values;
  Matrix vectors;

  Matrix reconstruct() const { return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint(); }
};

inline Spectrum eig_hermitian(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: eigensolver failed");
  Spectrum s;
  s.values = es.eigenvalues().reverse();
  s.vectors = es.eigenvectors().rowwise().reverse();
  return s;
}

inline Spectrum eig_hermitian(const Matrix& m) { return eig_hermitian(HermitianOperator(m)); }

class PositiveOperator : public HermitianOperator {
public:
  explicit PositiveOperator(const HermitianOperator& h) : HermitianOperator(h), spec_(eig_hermitian(h)) {
    clamp_and_check();
  }
  explicit PositiveOperator(const Matrix& m) : PositiveOperator(HermitianOperator(m)) {}

  // Assemble from a known orthonormal eigenbasis; skips the eigensolver.
  static PositiveOperator from_spectrum(Spectrum s) {
    PositiveOperator p;
    p.m_ = s.reconstruct();
    p.m_ = 0.5 * (p.m_ + p.m_.adjoint());
    p.spec_ = std::move(s);
    p.clamp_and_check();
    return p;
  }

  const Spectrum& spectrum() const { return spec_; }
  const RealVector& eigenvalues() const { return spec_.values; }
  double trace() const { return trace_; }
  double max_eigenvalue() const { return spec_.values(0); }
  double min_eigenvalue() const { return spec_.values(spec_.values.size() - 1); }
  double support_cutoff() const { return tol::support_relative * max_eigenvalue(); }

  Index rank() const {
    const double cut = support_cutoff();
    return static_cast<Index>((spec_.values.array() > cut).count());
  }

protected:
  PositiveOperator() = default;

private:
  void clamp_and_check() {
    const double lo = spec_.values.minCoeff();
    if (lo < -tol::positivity) {
      std::ostringstream os;
      os << "PositiveOperator: eigenvalue " << lo << " below -" << tol::positivity;
      throw ValidationError(os.str(), "spectrum", -lo);
    }
    spec_.values = spec_.values.cwiseMax(0.0);
    // Keep descending order after clamping / external assembly.
    std::vector<Index> order(static_cast<std::size_t>(spec_.values.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return spec_.values(a) > spec_.values(b); });
    Spectrum sorted;
    sorted.values.resize(spec_.values.size());
    sorted.vectors.resize(spec_.vectors.rows(), spec_.vectors.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
      sorted.values(static_cast<Index>(k)) = spec_.values(order[k]);
      sorted.vectors.col(static_cast<Index>(k)) = spec_.vectors.col(order[k]);
    }
    spec_ = std::move(sorted);
    trace_ = spec_.values.sum();
  }

  Spectrum spec_;
  double trace_ = 0.0;
};

class DensityOperator : public PositiveOperator {
public:
  explicit DensityOperator(const PositiveOperator& p) : PositiveOperator(p) {
    const double err = std::abs(trace() - 1.0);
    if (!(err <= tol::unit_trace)) {
      std::ostringstream os;
      os << "DensityOperator: trace " << trace() << " deviates from 1 by " << err;
      throw ValidationError(os.str(), "trace", err);
    }
  }
  explicit DensityOperator(const Matrix& m) : DensityOperator(PositiveOperator(m)) {}

  // Rescales a nonzero positive operator to unit trace.
  static DensityOperator normalized(const PositiveOperator& p) {
    if (!(p.trace() > 0.0)) throw ValidationError("DensityOperator::normalized: zero trace", "trace");
    Spectrum s = p.spectrum();
    s.values /= p.trace();
    return DensityOperator(PositiveOperator::from_spectrum(std::move(s)));
  }
};

// Density operator on a tensor product with declared factor dimensions.
class BipartiteState : public DensityOperator {
public:
  BipartiteState(const DensityOperator& op, std::vector<Index> dims)
      : DensityOperator(op), dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("BipartiteState: empty dims");
    Index prod = 1;
    for (Index d : dims_) {
      if (d <= 0) throw DimensionError("BipartiteState: nonpositive factor dimension");
      prod *= d;
    }
    if (prod != dim()) {
      std::ostringstream os;
      os << "BipartiteState: product of dims " << prod << " != operator dimension " << dim();
      throw DimensionError(os.str());
    }
  }

  const std::vector<Index>& dims() const { return dims_; }
  std::size_t factor_count() const { return dims_.size(); }

private:
  std::vector<Index> dims_;
};

inline DensityOperator pure_state(const Vector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw ValidationError("pure_state: zero vector", "vector");
  const Vector u = psi / n;
  Spectrum s;
  s.values = RealVector::Zero(psi.size());
  s.values(0) = 1.0;
  // Orthonormal completion with u as the first column.
  Eigen::HouseholderQR<Matrix> qr{Matrix(u)};
  Matrix q = qr.householderQ();
  q.col(0) = u;
  s.vectors = q;
  return DensityOperator(PositiveOperator::from_spectrum(std::move(s)));
}

inline DensityOperator maximally_mixed(Index d) {
  return DensityOperator(Matrix(identity(d) / static_cast<double>(d)));
}

inline DensityOperator diagonal_state(const std::vector<double>& probs) {
  const Index d = static_cast<Index>(probs.size());
  Matrix m = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) m(i, i) = probs[static_cast<std::size_t>(i)];
  return DensityOperator(m);
}

// ---------------------------------------------------------------------------
// Spectral functional calculus

enum class ZeroPolicy {
  evaluate,      // f is applied to every clamped eigenvalue, zeros included
  support_only,  // kernel eigenvalues map to 0 (log restricted to the support)
};

template <class F>
HermitianOperator apply_spectral(const PositiveOperator& a, F&& f, ZeroPolicy policy = ZeroPolicy::evaluate) {
  const Spectrum& s = a.spectrum();
  const double cut = a.support_cutoff();
  RealVector fv(s.values.size());
  for (Index i = 0; i < s.values.size(); ++i) {
    const double lam = s.values(i);
    if (policy == ZeroPolicy::support_only && !(lam > cut)) {
      fv(i) = 0.0;
      continue;
    }
    const double v = f(lam);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "apply_spectral: function undefined at eigenvalue " << lam;
      throw DomainError(os.str());
    }
    fv(i) = v;
  }
  return HermitianOperator(Matrix(s.vectors * fv.cast<cplx>().asDiagonal() * s.vectors.adjoint()));
}

// log restricted to supp(a); zero on the kernel.
inline HermitianOperator log_on_support(const PositiveOperator& a) {
  return apply_spectral(a, [](double x) { return std::log(x); }, ZeroPolicy::support_only);
}

inline HermitianOperator sqrt_op(const PositiveOperator& a) {
  return apply_spectral(a, [](double x) { return std::sqrt(x); });
}

inline HermitianOperator support_projector(const PositiveOperator& a) {
  return apply_spectral(a, [](double) { return 1.0; }, ZeroPolicy::support_only);
}

// ---------------------------------------------------------------------------
// Tensor products and partial traces

inline HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

// Product of positive operators; the spectrum is assembled from the factors.
inline PositiveOperator tensor(const PositiveOperator& a, const PositiveOperator& b) {
  const Spectrum& sa = a.spectrum();
  const Spectrum& sb = b.spectrum();
  Spectrum s;
  s.values.resize(sa.values.size() * sb.values.size());
  s.vectors.resize(a.dim() * b.dim(), a.dim() * b.dim());
  Index k = 0;
  for (Index i = 0; i < sa.values.size(); ++i) {
    for (Index j = 0; j < sb.values.size(); ++j, ++k) {
      s.values(k) = sa.values(i) * sb.values(j);
      s.vectors.col(k) = kron(Vector(sa.vectors.col(i)), Vector(sb.vectors.col(j)));
    }
  }
  return PositiveOperator::from_spectrum(std::move(s));
}

// Traces out factor `factor` of a square matrix on the product space with
// factor dimensions `dims`.
inline Matrix partial_trace(const Matrix& m, std::span<const Index> dims, std::size_t factor) {
  if (factor >= dims.size()) {
    std::ostringstream os;
    os << "partial_trace: factor index " << factor << " out of range for " << dims.size() << " factors";
    throw DimensionError(os.str());
  }
  Index left = 1, right = 1;
  for (std::size_t k = 0; k < factor; ++k) left *= dims[k];
  for (std::size_t k = factor + 1; k < dims.size(); ++k) right *= dims[k];
  const Index mid = dims[factor];
  if (left * mid * right != m.rows() || m.rows() != m.cols())
    throw DimensionError("partial_trace: dims do not match the matrix");
  Matrix out = Matrix::Zero(left * right, left * right);
  for (Index l1 = 0; l1 < left; ++l1)
    for (Index r1 = 0; r1 < right; ++r1)
      for (Index l2 = 0; l2 < left; ++l2)
        for (Index r2 = 0; r2 < right; ++r2) {
          cplx acc = 0.0;
          for (Index k = 0; k < mid; ++k) acc += m((l1 * mid + k) * right + r1, (l2 * mid + k) * right + r2);
          out(l1 * right + r1, l2 * right + r2) = acc;
        }
  return out;
}

inline Matrix partial_trace(const Matrix& m, std::initializer_list<Index> dims, std::size_t factor) {
  const std::vector<Index> d(dims);
  return partial_trace(m, std::span<const Index>(d), factor);
}

inline DensityOperator partial_trace(const BipartiteState& w, std::size_t factor) {
  return DensityOperator(partial_trace(w.matrix(), std::span<const Index>(w.dims()), factor));
}

// Reduced operator on a single factor `keep`.
inline Matrix reduce_to(const Matrix& m, std::vector<Index> dims, std::size_t keep) {
  Matrix cur = m;
  for (std::size_t f = dims.size(); f-- > 0;) {
    if (f == keep) continue;
    cur = partial_trace(cur, std::span<const Index>(dims), f);
    dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(f));
    if (f < keep) --keep;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Purification

// sum_i sqrt(lambda_i) |e_i> (x) |e_i> in H_A (x) H_R, dim R = dim A.
inline Vector purify(const DensityOperator& rho) {
  const Spectrum& s = rho.spectrum();
  const Index d = rho.dim();
  Vector v = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) {
    if (s.values(i) <= 0.0) continue;
    v += std::sqrt(s.values(i)) * kron(Vector(s.vectors.col(i)), Vector(s.vectors.col(i)));
  }
  return v;
}

// Schmidt-minimal purification sum_i sqrt(lambda_i) |e_i> (x) |i>, with the
// reference dimension equal to rank(rho). The reduced state on R is
// diag(lambda_1..lambda_r).
struct CompactPurification {
  Vector vector;
  Index reference_dim = 0;
  RealVector reference_spectrum;
  Matrix eigenvectors;  // the |e_i>, i < reference_dim
};

inline CompactPurification purify_compact(const DensityOperator& rho) {
  const Spectrum& s = rho.spectrum();
  const Index d = rho.dim();
  const Index r = std::max<Index>(rho.rank(), 1);
  CompactPurification p;
  p.reference_dim = r;
  p.reference_spectrum = s.values.head(r);
  p.eigenvectors = s.vectors.leftCols(r);
  p.vector = Vector::Zero(d * r);
  for (Index i = 0; i < r; ++i)
    p.vector += std::sqrt(s.values(i)) * kron(Vector(s.vectors.col(i)), basis_vector(r, i));
  return p;
}

// ---------------------------------------------------------------------------
// Norms and distances

inline double trace_norm(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// Trace norm of a Hermitian difference a - b.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  Matrix d = a - b;
  d = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// Sum of singular values; for non-Hermitian residuals.
inline double trace_norm_general(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Matrix prod = sqrt_op(rho).matrix() * sqrt_op(sigma).matrix();
  Eigen::JacobiSVD<Matrix> svd(prod);
  const double root = svd.singularValues().sum();
  return root * root;
}

inline double bures_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("bures_distance: dimension mismatch");
  const double root_f = std::min(1.0, std::sqrt(fidelity(rho, sigma)));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * root_f));
}

} // namespace qmi
