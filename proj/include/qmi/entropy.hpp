// entropy.hpp: entropy and relative entropy of positive trace-class operators.
//
// H(A) = Tr eta(A) - eta(Tr A) extends the von Neumann entropy to
// non-normalized operators; H(A||B) carries the +Tr B - Tr A correction and is
// +inf when A has mass outside supp B. Natural logarithms throughout.

#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "qmi/operator_core.hpp"

namespace qmi {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct EntropyValue {
  double nats = 0.0;
  bool infinite() const { return std::isinf(nats); }
};

struct RelEntropyValue {
  double nats = 0.0;
  bool support_violation = false;
  bool infinite() const { return std::isinf(nats); }
};

inline double eta(double x) {
  if (x < 0.0 || std::isnan(x)) {
    std::ostringstream os;
    os << "eta: negative argument " << x;
    throw DomainError(os.str());
  }
  return x == 0.0 ? 0.0 : -x * std::log(x);
}

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "binary_entropy: argument " << x << " outside [0,1]";
    throw DomainError(os.str());
  }
  return eta(x) + eta(1.0 - x);
}

// S(A) = Tr eta(A)
inline EntropyValue entropy_S(const PositiveOperator& a) {
  double s = 0.0;
  for (Index i = 0; i < a.eigenvalues().size(); ++i) s += eta(a.eigenvalues()(i));
  return {s};
}

// H(A) = Tr eta(A) - eta(Tr A); equals S(A) on states and 0 on A = 0.
inline EntropyValue entropy_H(const PositiveOperator& a) {
  const double h = entropy_S(a).nats - eta(a.trace());
  return {std::max(0.0, h)};
}

// Second form: Tr A * H(A / Tr A).
inline EntropyValue entropy_H_normalized_form(const PositiveOperator& a) {
  const double t = a.trace();
  if (t == 0.0) return {0.0};
  double s = 0.0;
  for (Index i = 0; i < a.eigenvalues().size(); ++i) s += eta(a.eigenvalues()(i) / t);
  return {t * s};
}

inline double von_neumann_entropy(const DensityOperator& rho) { return entropy_S(rho).nats; }

// Evaluated in the joint eigenbases:
//   sum_i l_i ln l_i - sum_ij |<a_i|b_j>|^2 l_i ln m_j + Tr B - Tr A
// with both sums restricted to the supports.
inline RelEntropyValue relative_entropy(const PositiveOperator& a, const PositiveOperator& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "relative_entropy: dimension mismatch " << a.dim() << " vs " << b.dim();
    throw DimensionError(os.str());
  }
  const Spectrum& sa = a.spectrum();
  const Spectrum& sb = b.spectrum();
  const double cut_b = b.support_cutoff();
  const Index n = a.dim();

  // Overlaps |<a_i|b_j>|^2
  const Eigen::MatrixXd overlap = (sa.vectors.adjoint() * sb.vectors).cwiseAbs2();

  // Mass of A outside supp B: Tr (I-P_B) A (I-P_B) = sum_ij l_i |<a_i|b_j>|^2 over kernel j.
  double outside = 0.0;
  for (Index j = 0; j < n; ++j) {
    if (sb.values(j) > cut_b) continue;
    for (Index i = 0; i < n; ++i) outside += sa.values(i) * overlap(i, j);
  }
  if (outside > tol::support_mass * a.trace()) return {infinity, true};

  double value = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double li = sa.values(i);
    if (li <= 0.0) continue;
    value += li * std::log(li);
    for (Index j = 0; j < n; ++j) {
      const double mj = sb.values(j);
      if (!(mj > cut_b)) continue;
      value -= overlap(i, j) * li * std::log(mj);
    }
  }
  value += b.trace() - a.trace();
  if (value < 0.0 && value >= -1e-10) value = 0.0;
  return {value, false};
}

} // namespace qmi
