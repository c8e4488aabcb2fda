// information.hpp: mutual and coherent information of a channel at a state.
//
// mutual_information() is the reference implementation: the relative entropy
// between (Phi (x) Id_R)(|phi_rho><phi_rho|) and Phi(rho) (x) rho_R. The
// entropy-triple form H(A) + H(B) - H(E) is kept as an independent cross-check.

#pragma once

#include <numeric>
#include <sstream>
#include <vector>

#include "qmi/channels.hpp"
#include "qmi/entropy.hpp"

namespace qmi {

namespace detail {

// (Phi (x) Id_R)(|phi><phi|) for a purification phi in H_A (x) H_R, returned
// as the list of vectors (V_i (x) I_R) phi, H_B (x) H_R ordering.
inline Matrix lift_purification(const QuantumOperation& ch, const Vector& phi, Index ref_dim) {
  const Index da = ch.dim_in(), db = ch.dim_out();
  // phi[(a, r)] = M(a, r), row-major over (a, r).
  const Matrix m = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      phi.data(), da, ref_dim);
  Matrix cols(db * ref_dim, static_cast<Index>(ch.size()));
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> vm = ch[k] * m;
    cols.col(static_cast<Index>(k)) = Eigen::Map<const Vector>(vm.data(), db * ref_dim);
  }
  return cols;
}

inline PositiveOperator reference_state(const CompactPurification& p) {
  Spectrum s;
  s.values = p.reference_spectrum;
  s.vectors = identity(p.reference_dim);
  return PositiveOperator::from_spectrum(std::move(s));
}

} // namespace detail

// I(rho, Phi) = H((Phi (x) Id_R)(|phi_rho><phi_rho|) || Phi(rho) (x) rho_R),
// with the Schmidt-minimal reference system (dim R = rank rho).
inline double mutual_information(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "mutual_information");
  const CompactPurification p = purify_compact(rho);
  const Matrix cols = detail::lift_purification(ch, p.vector, p.reference_dim);
  const PositiveOperator joint(Matrix(cols * cols.adjoint()));
  const PositiveOperator product = tensor(PositiveOperator(ch.act(rho.matrix())), detail::reference_state(p));
  return relative_entropy(joint, product).nats;
}

inline double output_entropy(const KrausChannel& ch, const DensityOperator& rho) {
  return entropy_S(PositiveOperator(ch.act(rho.matrix()))).nats;
}

inline double environment_entropy(const KrausChannel& ch, const DensityOperator& rho) {
  return entropy_S(PositiveOperator(complement_output(ch, rho.matrix()))).nats;
}

// H(A) + H(B) - H(E)
inline double mutual_information_triple(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "mutual_information_triple");
  return von_neumann_entropy(rho) + output_entropy(ch, rho) - environment_entropy(ch, rho);
}

// I_c = I(rho, Phi) - H(rho)
inline double coherent_information(const KrausChannel& ch, const DensityOperator& rho) {
  return mutual_information(ch, rho) - von_neumann_entropy(rho);
}

// I_c = H(Phi(rho)) - H(Phi~(rho))
inline double coherent_information_entropic(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "coherent_information_entropic");
  return output_entropy(ch, rho) - environment_entropy(ch, rho);
}

// ---------------------------------------------------------------------------
// Ensembles and chi quantities

class Ensemble {
public:
  Ensemble(std::vector<double> weights, std::vector<DensityOperator> states)
      : weights_(std::move(weights)), states_(std::move(states)) {
    if (weights_.empty() || weights_.size() != states_.size())
      throw ValidationError("Ensemble: weights and states must be nonempty and of equal length", "weights");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw ValidationError("Ensemble: negative weight", "weights");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "Ensemble: weights sum to " << total;
      throw ValidationError(os.str(), "weights", std::abs(total - 1.0));
    }
    for (const auto& s : states_)
      if (s.dim() != states_.front().dim()) throw DimensionError("Ensemble: states of unequal dimension");
  }

  // Spectral decomposition of rho: {lambda_i, |e_i><e_i|} over the support.
  static Ensemble spectral(const DensityOperator& rho) {
    std::vector<double> w;
    std::vector<DensityOperator> s;
    for (Index i = 0; i < rho.rank(); ++i) {
      w.push_back(rho.eigenvalues()(i));
      s.push_back(pure_state(rho.spectrum().vectors.col(i)));
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return Ensemble(std::move(w), std::move(s));
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DensityOperator>& states() const { return states_; }
  std::size_t size() const { return weights_.size(); }
  Index dim() const { return states_.front().dim(); }

  Matrix average_matrix() const {
    Matrix m = Matrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < size(); ++i) m += weights_[i] * states_[i].matrix();
    return m;
  }
  DensityOperator average() const { return DensityOperator(average_matrix()); }

private:
  std::vector<double> weights_;
  std::vector<DensityOperator> states_;
};

// sum_i pi_i H(Phi(rho_i) || Phi(rho_bar)); one decomposition of the chi sup.
inline double chi_ensemble(const KrausChannel& ch, const Ensemble& e) {
  ch.check_input(e.dim(), "chi_ensemble");
  const PositiveOperator avg_out(ch.act(e.average_matrix()));
  double chi = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.weights()[i] == 0.0) continue;
    const PositiveOperator out(ch.act(e.states()[i].matrix()));
    chi += e.weights()[i] * relative_entropy(out, avg_out).nats;
  }
  return chi;
}

// chi_Phi(E) - chi_Phi~(E) for a pure-state ensemble averaging to rho.
inline double coherent_via_chi(const KrausChannel& ch, const DensityOperator& rho, const Ensemble& e) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double purity_gap = 1.0 - e.states()[i].max_eigenvalue();
    if (purity_gap > 1e-10) {
      std::ostringstream os;
      os << "coherent_via_chi: ensemble member " << i << " is not pure (1 - lambda_max = " << purity_gap << ")";
      throw ValidationError(os.str(), "states", purity_gap);
    }
  }
  if (e.dim() != rho.dim()) throw DimensionError("coherent_via_chi: ensemble dimension mismatch");
  const double mismatch = max_abs(e.average_matrix() - rho.matrix());
  if (mismatch > 1e-10) {
    std::ostringstream os;
    os << "coherent_via_chi: ensemble average differs from rho by " << mismatch;
    throw ValidationError(os.str(), "average", mismatch);
  }
  return chi_ensemble(ch, e) - chi_ensemble(complement(ch), e);
}

// sum_i H(V_i rho V_i*), the mean a-posteriori entropy of the measurement {V_i}.
inline double posterior_entropy_bound(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "posterior_entropy_bound");
  double total = 0.0;
  for (const auto& v : ch.kraus()) total += entropy_H(PositiveOperator(Matrix(v * rho.matrix() * v.adjoint()))).nats;
  return total;
}

// ---------------------------------------------------------------------------

struct InfoReport {
  double mutual = 0.0;             // I(rho, Phi)
  double mutual_complement = 0.0;  // I(rho, Phi~)
  double coherent = 0.0;           // I_c(rho, Phi) = I - H(rho)
  double entropy_input = 0.0;
  double entropy_output = 0.0;
  double entropy_env = 0.0;
  double theorem1_residual = 0.0;    // I(rho,Phi) + I(rho,Phi~) - 2H(rho)
  double corollary1_residual = 0.0;  // I_c(rho,Phi) + I_c(rho,Phi~), entropic forms
};

inline InfoReport info_report(const KrausChannel& ch, const DensityOperator& rho) {
  InfoReport r;
  const KrausChannel comp = complement(ch);
  r.entropy_input = von_neumann_entropy(rho);
  r.entropy_output = output_entropy(ch, rho);
  r.entropy_env = environment_entropy(ch, rho);
  r.mutual = mutual_information(ch, rho);
  r.mutual_complement = mutual_information(comp, rho);
  r.coherent = r.mutual - r.entropy_input;
  r.theorem1_residual = r.mutual + r.mutual_complement - 2.0 * r.entropy_input;
  // I_c(rho, Phi~) = H(Phi~(rho)) - H(Phi~~(rho)), evaluated through the double complement.
  const double coherent_comp = r.entropy_env - environment_entropy(comp, rho);
  r.corollary1_residual = (r.entropy_output - r.entropy_env) + coherent_comp;
  return r;
}

} // namespace qmi
