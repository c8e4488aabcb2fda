// capacity.hpp: maximization of I(rho, Phi) and I_c(rho, Phi) over input states.
//
// Concave mode: Frank-Wolfe over the state set with exact line search; the
// linear oracle is the top eigenvector of the gradient and the duality gap
// max_sigma Tr G(sigma - rho) bounds the suboptimality. Every iteration also
// tries an entropic mirror step exp(log rho + t G); either step is taken only
// if it increases the objective, so the trace is monotone.
//
// Energy-constrained mode: the oracle maximizes Tr G sigma over
// Tr H sigma <= h by bisection on the multiplier of G - mu H.
//
// Coherent mode: multistart projected gradient ascent. I_c is not concave, so
// results are local maxima and never certified.

#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "qmi/information.hpp"
#include "qmi/random.hpp"

namespace qmi {

struct OptimizerConfig {
  int max_iters = 5000;
  double gap_tol = 1e-6;
  double floor = 1e-9;
  std::uint64_t seed = 0;
  int multistarts = 8;

  void validate() const {
    if (!(gap_tol > 0.0)) throw ValidationError("OptimizerConfig: gap_tol must be positive", "gap_tol");
    if (!(floor > 0.0 && floor <= 1e-6)) throw ValidationError("OptimizerConfig: floor must lie in (0, 1e-6]", "floor");
    if (max_iters < 0) throw ValidationError("OptimizerConfig: max_iters must be nonnegative", "max_iters");
    if (multistarts < 0) throw ValidationError("OptimizerConfig: multistarts must be nonnegative", "multistarts");
  }
};

struct TraceRow {
  int iteration = 0;
  double objective = 0.0;
  double duality_gap = 0.0;
  std::optional<double> constraint_slack;
};

struct CapacityResult {
  double value = 0.0;
  DensityOperator argmax = maximally_mixed(1);
  double duality_gap = 0.0;
  int iterations = 0;
  std::optional<double> constraint_slack;
  bool certified = false;
  std::vector<TraceRow> trace;
};

// ---------------------------------------------------------------------------
// Gradient

namespace detail {

inline Matrix log_support(const Matrix& m) { return log_on_support(PositiveOperator(m)).matrix(); }

inline double entropy_of(const Matrix& m) { return entropy_S(PositiveOperator(m)).nats; }

// Exponential of a Hermitian matrix, normalized to unit trace.
inline Matrix exp_normalized(const Matrix& h) {
  const Spectrum s = eig_hermitian(h);
  RealVector w = (s.values.array() - s.values(0)).exp();
  w /= w.sum();
  return s.vectors * w.cast<cplx>().asDiagonal() * s.vectors.adjoint();
}

// Channel objective I = H(rho) + H(Phi rho) - H(Phi~ rho) (coherent: drop H(rho)).
class InfoObjective {
public:
  InfoObjective(const KrausChannel& ch, bool coherent) : ch_(ch), comp_(complement(ch)), coherent_(coherent) {}

  double value(const Matrix& rho) const {
    double v = entropy_of(ch_.act(rho)) - entropy_of(comp_.act(rho));
    if (!coherent_) v += entropy_of(rho);
    return v;
  }

  // Gradient up to a multiple of I, with logs restricted to supports.
  Matrix gradient(const Matrix& rho) const {
    Matrix g = -ch_.adjoint_act(log_support(ch_.act(rho))) + comp_.adjoint_act(log_support(comp_.act(rho)));
    if (!coherent_) g -= log_support(rho);
    return (g + g.adjoint()) / 2.0;
  }

  const KrausChannel& channel() const { return ch_; }
  Index dim() const { return ch_.dim_in(); }

private:
  KrausChannel ch_;
  KrausChannel comp_;
  bool coherent_;
};

} // namespace detail

// G = -log rho - Phi*(log Phi(rho)) + Phi~*(log Phi~(rho)), so that
// d/dt I(rho + t D, Phi) = Tr G D for traceless D.
inline HermitianOperator mutual_info_gradient(const KrausChannel& ch, const DensityOperator& rho,
                                              double floor = 1e-9) {
  ch.check_input(rho.dim(), "mutual_info_gradient");
  const PositiveOperator out(ch.act(rho.matrix()));
  const PositiveOperator env(complement_output(ch, rho.matrix()));
  const struct {
    const char* name;
    double min_eig;
  } checks[] = {{"rho", rho.min_eigenvalue()}, {"Phi(rho)", out.min_eigenvalue()}, {"Phi~(rho)", env.min_eigenvalue()}};
  for (const auto& c : checks) {
    if (c.min_eig < floor) {
      std::ostringstream os;
      os << "mutual_info_gradient: min eigenvalue of " << c.name << " is " << c.min_eig << " < floor " << floor;
      throw InteriorPointError(os.str());
    }
  }
  const KrausChannel comp = complement(ch);
  const Matrix g = -log_on_support(rho).matrix() - ch.adjoint_act(log_on_support(out).matrix()) +
                   comp.adjoint_act(log_on_support(env).matrix());
  return HermitianOperator(Matrix((g + g.adjoint()) / 2.0));
}

// ---------------------------------------------------------------------------
// Linear oracles

namespace detail {

// Top eigenvector of m; within a degenerate top eigenspace, the one of lowest energy.
inline Vector top_vector(const Matrix& m, const Matrix* energy) {
  const Spectrum s = eig_hermitian(m);
  const double scale = std::max(1.0, std::abs(s.values(0)));
  Index k = 1;
  while (k < s.values.size() && s.values(0) - s.values(k) <= 1e-12 * scale) ++k;
  if (k == 1 || energy == nullptr) return s.vectors.col(0);
  const Matrix basis = s.vectors.leftCols(k);
  const Spectrum r = eig_hermitian(Matrix(basis.adjoint() * *energy * basis));
  return basis * r.vectors.col(k - 1);
}

inline double lambda_max(const Matrix& m) { return eig_hermitian(m).values(0); }

inline double energy_of(const Matrix& h, const Vector& v) { return (v.adjoint() * h * v)(0, 0).real(); }

struct OracleResult {
  Matrix sigma;        // maximizer of Tr G sigma over the feasible set
  double bound = 0.0;  // max (or dual upper bound) of Tr G sigma
  double mu = 0.0;     // multiplier of the energy constraint
};

inline OracleResult unconstrained_oracle(const Matrix& g) {
  const Vector v = top_vector(g, nullptr);
  return {outer(v, v), lambda_max(g), 0.0};
}

// max Tr G sigma subject to Tr H sigma <= h, via bisection on mu >= 0 in G - mu H.
inline OracleResult energy_oracle(const Matrix& g, const Matrix& hop, double h) {
  const Vector v0 = top_vector(g, &hop);
  if (energy_of(hop, v0) <= h) return {outer(v0, v0), lambda_max(g), 0.0};

  double lo = 0.0, hi = 1.0;
  Vector vhi = top_vector(g - hi * hop, &hop);
  for (int k = 0; k < 200 && energy_of(hop, vhi) > h; ++k) {
    lo = hi;
    hi *= 2.0;
    vhi = top_vector(g - hi * hop, &hop);
  }
  Vector vlo = v0;
  if (lo > 0.0) vlo = top_vector(g - lo * hop, &hop);
  for (int k = 0; k < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++k) {
    const double mid = 0.5 * (lo + hi);
    const Vector v = top_vector(g - mid * hop, &hop);
    if (energy_of(hop, v) > h) {
      lo = mid;
      vlo = v;
    } else {
      hi = mid;
      vhi = v;
    }
  }
  const double elo = energy_of(hop, vlo), ehi = energy_of(hop, vhi);
  OracleResult r;
  r.mu = hi;
  // Two-point mix at the active constraint.
  const double theta = elo > ehi ? std::clamp((h - ehi) / (elo - ehi), 0.0, 1.0) : 0.0;
  r.sigma = theta * outer(vlo, vlo) + (1.0 - theta) * outer(vhi, vhi);
  r.bound = lambda_max(g - hi * hop) + hi * h;
  return r;
}

struct EnergyConstraint {
  Matrix hop;
  double h = 0.0;
  Matrix reference;  // feasible, full-rank mixing reference

  double slack(const Matrix& rho) const { return h - (hop * rho).trace().real(); }

  // exp(m - nu H) / Z with the least nu >= 0 meeting Tr H rho <= h: the
  // relative-entropy projection of exp(m) / Z onto the constraint set.
  Matrix tilted(const Matrix& m) const {
    Matrix rho = exp_normalized(m);
    if (slack(rho) >= 0.0) return rho;
    double lo = 0.0, hi = 1.0;
    Matrix rho_hi = exp_normalized(m - hi * hop);
    for (int k = 0; k < 200 && slack(rho_hi) < 0.0; ++k) {
      lo = hi;
      hi *= 2.0;
      rho_hi = exp_normalized(m - hi * hop);
    }
    for (int k = 0; k < 100 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
      const double mid = 0.5 * (lo + hi);
      const Matrix r = exp_normalized(m - mid * hop);
      if (slack(r) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
        rho_hi = r;
      }
    }
    return rho_hi;
  }

  // Pulls rho back onto Tr H rho <= h by mixing with the reference.
  Matrix restore(const Matrix& rho) const {
    const double e = (hop * rho).trace().real();
    if (e <= h) return rho;
    const double er = (hop * reference).trace().real();
    const double theta = (e - h) / (e - er);
    return (1.0 - theta) * rho + theta * reference;
  }
};

inline Matrix floor_eigenvalues(const Matrix& rho, double floor) {
  const Spectrum s = eig_hermitian(rho);
  RealVector w = s.values.cwiseMax(floor);
  w /= w.sum();
  return s.vectors * w.cast<cplx>().asDiagonal() * s.vectors.adjoint();
}

inline Matrix renormalize(const Matrix& m) {
  Matrix r = (m + m.adjoint()) / 2.0;
  return r / r.trace().real();
}

// Maximizes the concave objective on the state set (or its energy slice).
inline CapacityResult frank_wolfe(const InfoObjective& obj, const OptimizerConfig& cfg,
                                  const std::optional<EnergyConstraint>& con, const Matrix& start) {
  const Index d = obj.dim();
  const Matrix mix_ref = con ? con->reference : Matrix(identity(d) / static_cast<double>(d));
  Matrix rho = start;
  double f = obj.value(rho);
  double mirror_t = 1.0;
  CapacityResult res;

  for (int it = 0;; ++it) {
    const Matrix g = obj.gradient(rho);
    const OracleResult orc = con ? energy_oracle(g, con->hop, con->h) : unconstrained_oracle(g);
    const double gap = std::max(0.0, orc.bound - (g * rho).trace().real());
    TraceRow row{it, f, gap, std::nullopt};
    if (con) row.constraint_slack = con->slack(rho);
    res.trace.push_back(row);
    res.iterations = it;
    res.duality_gap = gap;
    if (gap <= cfg.gap_tol || it >= cfg.max_iters) break;

    // Frank-Wolfe step with exact line search on the concave restriction.
    const Matrix s = (1.0 - cfg.floor) * orc.sigma + cfg.floor * mix_ref;
    const Matrix dir = s - rho;
    auto slope = [&](double gamma) { return (obj.gradient(rho + gamma * dir) * dir).trace().real(); };
    double gamma = 0.0;
    if (slope(1.0) >= 0.0) {
      gamma = 1.0;
    } else if (slope(0.0) > 0.0) {
      double lo = 0.0, hi = 1.0;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? lo : hi) = mid;
      }
      gamma = lo;
    }
    if (gamma > 0.0) {
      const Matrix cand = renormalize(rho + gamma * dir);
      const double fc = obj.value(cand);
      if (fc >= f) {
        rho = cand;
        f = fc;
      }
    }

    // Mirror step exp(log rho + t G), projected onto the energy constraint in
    // relative entropy; kept only on ascent.
    const Matrix gm = obj.gradient(rho);
    const Matrix logr = log_on_support(PositiveOperator(rho)).matrix();
    for (int tries = 0; tries < 4; ++tries) {
      const Matrix m = logr + mirror_t * gm;
      Matrix cand = floor_eigenvalues(con ? con->tilted(m) : exp_normalized(m), cfg.floor);
      if (con) cand = renormalize(con->restore(cand));
      const double fc = obj.value(cand);
      if (fc > f) {
        rho = cand;
        f = fc;
        mirror_t = std::min(mirror_t * 2.0, 1e6);
        break;
      }
      mirror_t *= 0.25;
    }
    if (mirror_t < 1e-12) mirror_t = 1e-12;
  }

  res.argmax = DensityOperator(renormalize(rho));
  res.value = mutual_information(obj.channel(), res.argmax);
  if (con) res.constraint_slack = con->slack(res.argmax.matrix());
  res.certified = res.duality_gap <= cfg.gap_tol;
  return res;
}

// Euclidean projection of eigenvalues onto {y >= floor, sum y = 1}.
inline RealVector project_simplex(const RealVector& x, double floor) {
  double lo = x.minCoeff() - 1.0, hi = x.maxCoeff();
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    ((x.array() - mid).cwiseMax(floor).sum() > 1.0 ? lo : hi) = mid;
  }
  RealVector y = (x.array() - hi).cwiseMax(floor);
  return y / y.sum();
}

inline Matrix project_states(const Matrix& m, double floor) {
  const Spectrum s = eig_hermitian(Matrix((m + m.adjoint()) / 2.0));
  const RealVector y = project_simplex(s.values, floor);
  return s.vectors * y.cast<cplx>().asDiagonal() * s.vectors.adjoint();
}

} // namespace detail

inline CapacityResult maximize_mutual_info(const KrausChannel& ch, const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const detail::InfoObjective obj(ch, false);
  const Index d = ch.dim_in();
  return detail::frank_wolfe(obj, cfg, std::nullopt, identity(d) / static_cast<double>(d));
}

inline CapacityResult maximize_mutual_info_constrained(const KrausChannel& ch, const HermitianOperator& hop, double h,
                                                       const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const Index d = ch.dim_in();
  if (hop.dim() != d) throw DimensionError("maximize_mutual_info_constrained: Hamiltonian dimension mismatch");
  const Spectrum hs = eig_hermitian(hop);
  const double e_min = hs.values(d - 1), e_max = hs.values(0);
  const double scale = std::max(1.0, std::max(std::abs(e_min), std::abs(e_max)));
  if (h < e_min - 1e-12 * scale) {
    std::ostringstream os;
    os << "maximize_mutual_info_constrained: energy " << h << " is below the ground energy " << e_min;
    throw InfeasibleError(os.str());
  }

  // Boundary case: only states on the ground space are feasible.
  if (h <= e_min + 1e-12 * scale) {
    Index g = 1;
    while (g < d && hs.values(d - 1 - g) - e_min <= 1e-12 * scale) ++g;
    Matrix ground(d, g);
    for (Index k = 0; k < g; ++k) ground.col(k) = hs.vectors.col(d - 1 - k);
    CapacityResult res;
    if (g == 1) {
      res.argmax = pure_state(ground.col(0));
      res.value = mutual_information(ch, res.argmax);
      res.duality_gap = 0.0;
      res.trace.push_back({0, res.value, 0.0, 0.0});
    } else {
      CapacityResult sub = maximize_mutual_info(restrict_input(ch, ground), cfg);
      res = sub;
      res.argmax = DensityOperator(Matrix(ground * sub.argmax.matrix() * ground.adjoint()));
      res.value = mutual_information(ch, res.argmax);
    }
    res.constraint_slack = h - (hop.matrix() * res.argmax.matrix()).trace().real();
    for (auto& row : res.trace) row.constraint_slack = res.constraint_slack;
    res.certified = res.duality_gap <= cfg.gap_tol;
    return res;
  }

  detail::EnergyConstraint con;
  con.hop = hop.matrix();
  con.h = h;
  const Matrix mixed = identity(d) / static_cast<double>(d);
  const double e_mean = hop.trace() / static_cast<double>(d);
  if (e_mean <= h) {
    con.reference = mixed;
  } else {
    const Matrix ground = outer(Vector(hs.vectors.col(d - 1)), Vector(hs.vectors.col(d - 1)));
    const double eps = 0.5 * (h - e_min) / (e_mean - e_min);
    con.reference = (1.0 - eps) * ground + eps * mixed;
  }
  const detail::InfoObjective obj(ch, false);
  return detail::frank_wolfe(obj, cfg, con, con.reference);
}

inline CapacityResult maximize_coherent_info(const KrausChannel& ch, const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const detail::InfoObjective obj(ch, true);
  const Index d = ch.dim_in();

  std::vector<Matrix> starts{identity(d) / static_cast<double>(d)};
  for (int k = 0; k < cfg.multistarts; ++k) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    starts.push_back(detail::floor_eigenvalues(random_density(d, rng).matrix(), cfg.floor));
  }

  CapacityResult best;
  double best_f = -infinity;
  Matrix best_rho = starts.front();
  int total_iters = 0;
  std::vector<TraceRow> best_trace;

  for (const Matrix& start : starts) {
    Matrix rho = detail::project_states(start, cfg.floor);
    double f = obj.value(rho);
    double t = 1.0;
    std::vector<TraceRow> trace;
    int it = 0;
    for (;; ++it) {
      const Matrix g = obj.gradient(rho);
      const double lin_gap = std::max(0.0, detail::lambda_max(g) - (g * rho).trace().real());
      trace.push_back({it, f, lin_gap, std::nullopt});
      if (lin_gap <= cfg.gap_tol || it >= cfg.max_iters) break;
      bool moved = false;
      t = std::min(t * 4.0, 1e6);
      for (int tries = 0; tries < 60; ++tries, t *= 0.5) {
        const Matrix cand = detail::project_states(rho + t * g, cfg.floor);
        const double ascent = (g * (cand - rho)).trace().real();
        if (ascent <= 0.0) break;
        const double fc = obj.value(cand);
        if (fc >= f + 1e-4 * ascent) {
          moved = max_abs(cand - rho) > 1e-15;
          rho = cand;
          f = fc;
          break;
        }
      }
      if (!moved) break;
    }
    total_iters += it;
    if (f > best_f) {
      best_f = f;
      best_rho = rho;
      best.duality_gap = trace.back().duality_gap;
      best_trace = std::move(trace);
    }
  }

  best.argmax = DensityOperator(detail::renormalize(best_rho));
  best.value = coherent_information(ch, best.argmax);
  best.iterations = total_iters;
  best.trace = std::move(best_trace);
  best.certified = false;
  return best;
}

} // namespace qmi
