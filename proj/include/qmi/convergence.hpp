// convergence.hpp: finite-dimensional sweeps of the truncation limits.
//
// Each sweep returns one record per (n, quantity) with the value, the limit it
// should approach and their distance, plus the violations of the inequalities
// that hold at every n. Limits are checked at the terminal index.

#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "qmi/information.hpp"

namespace qmi {

struct SweepRecord {
  int n = 0;
  std::string quantity;
  double value = 0.0;
  double target = 0.0;
  double deviation = 0.0;
};

struct SweepViolation {
  std::size_t row = 0;  // index into records
  std::string what;
};

struct SweepReport {
  std::string name;
  std::vector<SweepRecord> records;
  std::vector<SweepViolation> violations;
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }

  std::size_t add(int n, std::string quantity, double value, double target) {
    const double dev = std::isinf(value) || std::isinf(target) ? (value == target ? 0.0 : infinity)
                                                               : std::abs(value - target);
    records.push_back({n, std::move(quantity), value, target, dev});
    return records.size() - 1;
  }
  void flag(std::size_t row, std::string what) { violations.push_back({row, std::move(what)}); }
  void check(bool holds, std::size_t row, const std::string& what) {
    if (!holds) flag(row, what);
  }
};

inline std::string format_g9(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline std::string csv_row(const SweepRecord& r) {
  return std::to_string(r.n) + "," + r.quantity + "," + format_g9(r.value) + "," + format_g9(r.target) + "," +
         format_g9(r.deviation);
}

inline std::string to_csv(const SweepReport& rep) {
  std::string out = "n,quantity,value,target,deviation\n";
  for (const auto& r : rep.records) out += csv_row(r) + "\n";
  return out;
}

namespace sweep_tol {
inline constexpr double monotone = 1e-10;
inline constexpr double terminal = 1e-9;
inline constexpr double bound = 1e-9;
inline constexpr double identity = 1e-8;
inline constexpr double positivity = 1e-10;
} // namespace sweep_tol

// ---------------------------------------------------------------------------
// Ladders

using ProjectorLadder = std::vector<HermitianOperator>;

// P_n = projector onto the first n coordinates, n = 1..d.
inline ProjectorLadder coordinate_ladder(Index d) {
  ProjectorLadder l;
  for (Index n = 1; n <= d; ++n) l.push_back(coordinate_projector(d, n));
  return l;
}

// P_n = projector onto the n leading eigenvectors of a, n = 1..d.
inline ProjectorLadder spectral_ladder(const PositiveOperator& a) {
  const Matrix& v = a.spectrum().vectors;
  ProjectorLadder l;
  for (Index n = 1; n <= a.dim(); ++n) l.push_back(HermitianOperator(Matrix(v.leftCols(n) * v.leftCols(n).adjoint())));
  return l;
}

inline void validate_ladder(const ProjectorLadder& ladder, Index d) {
  if (ladder.empty()) throw ValidationError("ladder: empty", "ladder");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const Matrix& p = ladder[k].matrix();
    if (p.rows() != d) throw DimensionError("ladder: projector dimension mismatch");
    const double idem = max_abs(p * p - p);
    if (idem > 1e-9) {
      std::ostringstream os;
      os << "ladder: entry " << k << " is not a projector (residual " << idem << ")";
      throw ValidationError(os.str(), "ladder", idem);
    }
    if (k > 0) {
      const double nest = max_abs(p * ladder[k - 1].matrix() - ladder[k - 1].matrix());
      if (nest > 1e-9) {
        std::ostringstream os;
        os << "ladder: entry " << k << " does not dominate entry " << k - 1 << " (residual " << nest << ")";
        throw ValidationError(os.str(), "ladder", nest);
      }
    }
  }
  const double term = max_abs(ladder.back().matrix() - identity(d));
  if (term > 1e-9) throw ValidationError("ladder: terminal projector is not the identity", "ladder", term);
}

// rho_n = mu_n^{-1} sum_{i<=n} lambda_i |e_i><e_i|, n = 1..rank.
struct SpectralTruncation {
  DensityOperator state;
  double mu = 1.0;
};

inline std::vector<SpectralTruncation> spectral_truncations(const DensityOperator& rho0) {
  const Spectrum& s = rho0.spectrum();
  std::vector<SpectralTruncation> out;
  for (Index n = 1; n <= std::max<Index>(rho0.rank(), 1); ++n) {
    Spectrum t;
    t.values = RealVector::Zero(rho0.dim());
    t.values.head(n) = s.values.head(n);
    const double mu = t.values.sum();
    t.values /= mu;
    t.vectors = s.vectors;
    out.push_back({DensityOperator(t.reconstruct()), mu});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monotone truncations of entropy and relative entropy

inline SweepReport sweep_lemma1(const PositiveOperator& a, const PositiveOperator& b, const ProjectorLadder& ladder) {
  if (a.dim() != b.dim()) throw DimensionError("sweep_lemma1: dimension mismatch");
  validate_ladder(ladder, a.dim());
  SweepReport rep;
  rep.name = "lemma1";
  const double h_target = entropy_H(a).nats;
  const double rel_target = relative_entropy(a, b).nats;
  double prev_h = -infinity, prev_rel = -infinity;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const int n = static_cast<int>(k + 1);
    const Matrix& p = ladder[k].matrix();
    const PositiveOperator pa(Matrix(p * a.matrix() * p)), pb(Matrix(p * b.matrix() * p));
    const double h = entropy_H(pa).nats;
    const double rel = relative_entropy(pa, pb).nats;
    const std::size_t rh = rep.add(n, "H(PAP)", h, h_target);
    const std::size_t rr = rep.add(n, "H(PAP||PBP)", rel, rel_target);
    rep.check(h >= prev_h - sweep_tol::monotone, rh, "H(P_n A P_n) decreased");
    rep.check(rel >= prev_rel - sweep_tol::monotone, rr, "H(P_n A P_n || P_n B P_n) decreased");
    prev_h = h;
    prev_rel = rel;
    if (k + 1 == ladder.size()) {
      rep.check(rep.records[rh].deviation <= sweep_tol::terminal, rh, "terminal H differs from H(A)");
      rep.check(rep.records[rr].deviation <= sweep_tol::terminal, rr, "terminal relative entropy differs from H(A||B)");
    }
  }
  return rep;
}

// I(rho_n, Phi) along spectral truncations, with the proof's identity
// I_n - I(rho_n, Phi) = H(Phi(rho_n) || Phi(rho_0)) <= -ln mu_n.
inline SweepReport sweep_lemma3(const KrausChannel& ch, const DensityOperator& rho0) {
  ch.check_input(rho0.dim(), "sweep_lemma3");
  SweepReport rep;
  rep.name = "lemma3";
  const double target = mutual_information(ch, rho0);
  const CompactPurification p0 = purify_compact(rho0);
  const Index r = p0.reference_dim, d = rho0.dim();
  const PositiveOperator out0(ch.act(rho0.matrix()));
  if (r < 2) rep.notes.push_back("rank(rho_0) = 1: the sequence has the single term n = 1");

  const auto truncs = spectral_truncations(rho0);
  for (std::size_t k = 0; k < truncs.size(); ++k) {
    const int n = static_cast<int>(k + 1);
    const double mu = truncs[k].mu;
    const double i_n = mutual_information(ch, truncs[k].state);
    const std::size_t ri = rep.add(n, "I(rho_n)", i_n, target);

    // I_n = H((Phi (x) Id)(phi_n) || Phi(rho_0) (x) rho_n) on the reference of rho_0
    Vector phi_n = Vector::Zero(d * r);
    RealVector ref = RealVector::Zero(r);
    for (Index i = 0; i < n; ++i) {
      const double l = p0.reference_spectrum(i) / mu;
      phi_n += std::sqrt(l) * kron(Vector(p0.eigenvectors.col(i)), basis_vector(r, i));
      ref(i) = l;
    }
    const Matrix cols = detail::lift_purification(ch, phi_n, r);
    Spectrum rs;
    rs.values = ref;
    rs.vectors = identity(r);
    const double big_i =
        relative_entropy(PositiveOperator(Matrix(cols * cols.adjoint())), tensor(out0, PositiveOperator::from_spectrum(rs)))
            .nats;
    const double rel = relative_entropy(PositiveOperator(ch.act(truncs[k].state.matrix())), out0).nats;
    const double bound = -std::log(mu);
    const std::size_t rr = rep.add(n, "H(Phi(rho_n)||Phi(rho_0))", rel, 0.0);
    rep.add(n, "-ln mu_n", bound, 0.0);
    const std::size_t rid = rep.add(n, "identity_residual", std::abs(big_i - i_n - rel), 0.0);
    rep.check(rel <= bound + sweep_tol::bound, rr, "H(Phi(rho_n)||Phi(rho_0)) exceeds -ln mu_n");
    rep.check(rep.records[rid].value <= sweep_tol::identity, rid, "I_n - I(rho_n) != H(Phi(rho_n)||Phi(rho_0))");
    if (k + 1 == truncs.size())
      rep.check(rep.records[ri].deviation <= sweep_tol::terminal, ri, "terminal I(rho_n) differs from I(rho_0)");
  }
  return rep;
}

// I(rho_n, Pi_n o Phi) with Pi_n the truncation channels of the coordinate
// ladder on H_B and rho_n the spectral truncations (mu_n rho_n <= rho_0).
inline SweepReport sweep_lemma4(const KrausChannel& ch, const DensityOperator& rho0, Index psi_index = 0) {
  ch.check_input(rho0.dim(), "sweep_lemma4");
  SweepReport rep;
  rep.name = "lemma4";
  const double target = mutual_information(ch, rho0);
  const Index db = ch.dim_out();
  const auto truncs = spectral_truncations(rho0);
  const Index steps = std::max<Index>(db, static_cast<Index>(truncs.size()));
  const Vector psi = basis_vector(db, psi_index);
  for (Index n = 1; n <= steps; ++n) {
    const auto& t = truncs[static_cast<std::size_t>(std::min<Index>(n, static_cast<Index>(truncs.size())) - 1)];
    const KrausChannel pi = truncation_channel(coordinate_projector(db, n), psi);
    const double v = mutual_information(compose(pi, ch), t.state);
    const std::size_t row = rep.add(static_cast<int>(n), "I(rho_n,Pi_n o Phi)", v, target);
    rep.add(static_cast<int>(n), "lambda_n", t.mu, 1.0);
    if (n == steps)
      rep.check(rep.records[row].deviation <= sweep_tol::identity, row, "terminal value differs from I(rho_0,Phi)");
  }
  return rep;
}

// X_n, Y_n, C_n, D_n, R_n of the finite-rank argument, for Phi_n = first n
// Kraus operators and its complementary operation P_n Phi~ P_n.
inline SweepReport sweep_theorem1_proof(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "sweep_theorem1_proof");
  SweepReport rep;
  rep.name = "theorem1-proof";
  if (ch.size() < 2) rep.notes.push_back("single Kraus operator: only n = 1");
  const CompactPurification p = purify_compact(rho);
  const Index r = p.reference_dim, db = ch.dim_out();
  const PositiveOperator out(ch.act(rho.matrix()));
  const PositiveOperator rho_r = detail::reference_state(p);
  RealVector log_ref = p.reference_spectrum.array().log();
  const Matrix log_r = log_ref.cast<cplx>().asDiagonal();
  const double h = von_neumann_entropy(rho);
  const double i_phi = mutual_information(ch, rho);
  const double i_comp = mutual_information(complement(ch), rho);
  double prev_y = -infinity;

  for (std::size_t n = 1; n <= ch.size(); ++n) {
    const int ni = static_cast<int>(n);
    const KrausTruncation t = kraus_truncate(ch, n);
    const QuantumOperation& op = t.operation;
    const QuantumOperation comp = complement(op);
    const Index dn = static_cast<Index>(n);

    const Matrix cb = detail::lift_purification(op, p.vector, r);
    const Matrix ce = detail::lift_purification(comp, p.vector, r);
    const Matrix omega_b = cb * cb.adjoint();  // (Phi_n (x) Id)(rho^) on B R
    const Matrix omega_e = ce * ce.adjoint();  // (Phi~_n (x) Id)(rho^) on E_n R
    const PositiveOperator out_n(op.act(rho.matrix()));
    const PositiveOperator env_n(complement_output(op, rho.matrix()));

    const double x = relative_entropy(PositiveOperator(omega_b), tensor(out, rho_r)).nats;
    const double y = relative_entropy(PositiveOperator(omega_e), tensor(env_n, rho_r)).nats;
    const double c_direct = -(partial_trace(omega_b, {db, r}, 0) * log_r).trace().real();
    const double d_direct = -(partial_trace(omega_e, {dn, r}, 0) * log_r).trace().real();
    double c_formula = 0.0;
    for (Index i = 0; i < r; ++i) {
      const Vector e = p.eigenvectors.col(i);
      c_formula += eta(p.reference_spectrum(i)) * op.act(outer(e, e)).trace().real();
    }
    const double rel = relative_entropy(out_n, out).nats;
    const double r_n = 1.0 - out_n.trace();

    rep.add(ni, "X_n", x, i_phi);
    const std::size_t ry = rep.add(ni, "Y_n", y, i_comp);
    const std::size_t rc = rep.add(ni, "C_n", c_direct, h);
    const std::size_t rcf = rep.add(ni, "C_n_formula", c_formula, c_direct);
    const std::size_t rd = rep.add(ni, "D_n", d_direct, h);
    const std::size_t rrel = rep.add(ni, "H(Phi_n(rho)||Phi(rho))", rel, 0.0);
    rep.add(ni, "R_n", r_n, 0.0);
    const std::size_t rxy = rep.add(ni, "X_n+Y_n", x + y, 2.0 * h);
    const std::size_t rid = rep.add(ni, "identity_residual", std::abs(x + y - (rel + c_direct + d_direct)), 0.0);

    rep.check(rep.records[rid].value <= sweep_tol::identity, rid, "X_n + Y_n != H(Phi_n(rho)||Phi(rho)) + C_n + D_n");
    rep.check(rep.records[rcf].deviation <= sweep_tol::identity, rcf, "C_n formula disagrees with direct evaluation");
    rep.check(y >= prev_y - 1e-9, ry, "Y_n decreased");
    prev_y = y;
    if (n == ch.size()) {
      for (std::size_t row : {rc, rd, rrel, rxy})
        rep.check(rep.records[row].deviation <= sweep_tol::identity, row, "terminal value differs from its limit");
    }
  }
  return rep;
}

// Ladder A_n <= A_0 and the two-sided corridor
// 0 <= H(A_n||B) <= H(A_0||B) + Tr B (1 - l_n) + t (l_n ln l_n + h2(l_n)),
// l_n = Tr A_n / t, t = Tr A_0 (the bound rescaled from unit-trace A_0).
inline SweepReport sweep_lemma8(const PositiveOperator& a0, const PositiveOperator& b,
                                const std::vector<PositiveOperator>& ladder) {
  if (a0.dim() != b.dim()) throw DimensionError("sweep_lemma8: dimension mismatch");
  if (ladder.empty()) throw ValidationError("sweep_lemma8: empty ladder", "ladder");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (ladder[k].dim() != a0.dim()) throw DimensionError("sweep_lemma8: ladder dimension mismatch");
    const double m = eig_hermitian(Matrix(a0.matrix() - ladder[k].matrix())).values.minCoeff();
    if (m < -sweep_tol::positivity) {
      std::ostringstream os;
      os << "sweep_lemma8: ladder entry " << k << " is not dominated by A_0 (min eigenvalue of A_0 - A_n = " << m << ")";
      throw ValidationError(os.str(), "ladder", -m);
    }
  }
  SweepReport rep;
  rep.name = "lemma8";
  rep.notes.push_back("lower corridor edge is 0 (nonnegativity of H(A_n||B))");
  const double t = a0.trace();
  const double target = relative_entropy(a0, b).nats;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const int n = static_cast<int>(k + 1);
    const double v = relative_entropy(ladder[k], b).nats;
    const double l = std::clamp(ladder[k].trace() / t, 0.0, 1.0);
    const double upper = target + b.trace() * (1.0 - l) + t * (-eta(l) + binary_entropy(l));
    const std::size_t row = rep.add(n, "H(A_n||B)", v, target);
    rep.add(n, "upper_bound", upper, target);
    rep.add(n, "lambda_n", l, 1.0);
    rep.check(v <= upper + sweep_tol::bound, row, "H(A_n||B) above the upper bound");
    rep.check(v >= -sweep_tol::bound, row, "H(A_n||B) below 0");
    if (k + 1 == ladder.size())
      rep.check(rep.records[row].deviation <= sweep_tol::terminal, row, "terminal H(A_n||B) differs from H(A_0||B)");
  }
  return rep;
}

inline std::vector<PositiveOperator> lemma8_spectral_ladder(const PositiveOperator& a0) {
  std::vector<PositiveOperator> out;
  for (const auto& p : spectral_ladder(a0)) out.emplace_back(Matrix(p.matrix() * a0.matrix() * p.matrix()));
  return out;
}

// A_n = (1 - 2^-n) A_0 for n < steps, A_steps = A_0.
inline std::vector<PositiveOperator> lemma8_scaled_ladder(const PositiveOperator& a0, int steps) {
  std::vector<PositiveOperator> out;
  for (int n = 1; n <= steps; ++n) {
    const double s = n == steps ? 1.0 : 1.0 - std::ldexp(1.0, -n);
    out.emplace_back(Matrix(s * a0.matrix()));
  }
  return out;
}

struct Lemma7Check {
  double max_violation = 0.0;  // max over the grid of RHS - LHS
  bool skipped = false;        // supports not contained in supp C
};

// H(l rho + (1-l) sigma || C) >= l H(rho||C) + (1-l) H(sigma||C) - h2(l)
inline Lemma7Check check_lemma7(const DensityOperator& rho, const DensityOperator& sigma, const PositiveOperator& c,
                                const std::vector<double>& grid) {
  if (rho.dim() != sigma.dim() || rho.dim() != c.dim()) throw DimensionError("check_lemma7: dimension mismatch");
  Lemma7Check out;
  const RelEntropyValue hr = relative_entropy(rho, c), hs = relative_entropy(sigma, c);
  if (hr.infinite() || hs.infinite()) {
    out.skipped = true;
    return out;
  }
  out.max_violation = -infinity;
  for (double l : grid) {
    const PositiveOperator mix(Matrix(l * rho.matrix() + (1.0 - l) * sigma.matrix()));
    const double lhs = relative_entropy(mix, c).nats;
    const double rhs = l * hr.nats + (1.0 - l) * hs.nats - binary_entropy(l);
    out.max_violation = std::max(out.max_violation, rhs - lhs);
  }
  return out;
}

// Completions Phi_n = first n Kraus operators + W_n (.) W_n.
inline SweepReport sweep_example2(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "sweep_example2");
  SweepReport rep;
  rep.name = "example2";
  const Matrix out = ch.act(rho.matrix());
  const double i_target = mutual_information(ch, rho);
  const double ic_target = coherent_information(ch, rho);
  double prev_td = infinity;
  for (std::size_t n = 1; n <= ch.size(); ++n) {
    const int ni = static_cast<int>(n);
    const KrausChannel phi_n = kraus_truncate(ch, n).completion;
    const double td = trace_distance(phi_n.act(rho.matrix()), out);
    const std::size_t rt = rep.add(ni, "||Phi_n(rho)-Phi(rho)||_1", td, 0.0);
    const std::size_t ri = rep.add(ni, "I(rho,Phi_n)", mutual_information(phi_n, rho), i_target);
    const std::size_t rc = rep.add(ni, "I_c(rho,Phi_n)", coherent_information(phi_n, rho), ic_target);
    if (td > prev_td + 1e-12) rep.notes.push_back("trace distance increased at n = " + std::to_string(n));
    prev_td = td;
    if (n == ch.size())
      for (std::size_t row : {rt, ri, rc})
        rep.check(rep.records[row].deviation <= sweep_tol::identity, row, "terminal value differs from its limit");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Gibbs families and continuity

struct GibbsFamily {
  HermitianOperator hamiltonian;

  DensityOperator state(double beta) const {
    if (!(beta > 0.0)) throw DomainError("GibbsFamily: beta must be positive");
    const Spectrum s = eig_hermitian(hamiltonian);
    const double e0 = s.values.minCoeff();
    RealVector w = (-beta * (s.values.array() - e0)).exp();
    w /= w.sum();
    Spectrum g{w, s.vectors};
    return DensityOperator(g.reconstruct());
  }

  double energy(const DensityOperator& rho) const { return (hamiltonian.matrix() * rho.matrix()).trace().real(); }
};

// Records H, I, I_c along a nonincreasing beta ladder ending at beta_0 and
// the empirical constant L in
//   |I(b) - I(b0)| <= L (|H(b) - H(b0)| + ||rho_b - rho_b0||_1 ln d).
inline SweepReport continuity_on_energy_ball(const KrausChannel& ch, const GibbsFamily& fam,
                                             const std::vector<double>& betas) {
  if (betas.empty()) throw ValidationError("continuity_on_energy_ball: empty ladder", "betas");
  for (std::size_t k = 0; k < betas.size(); ++k) {
    if (!(betas[k] > 0.0)) throw ValidationError("continuity_on_energy_ball: beta must be positive", "betas");
    if (k > 0 && betas[k] > betas[k - 1])
      throw ValidationError("continuity_on_energy_ball: ladder must be nonincreasing", "betas");
  }
  ch.check_input(fam.hamiltonian.dim(), "continuity_on_energy_ball");
  SweepReport rep;
  rep.name = "continuity";
  const DensityOperator rho0 = fam.state(betas.back());
  const double h0 = von_neumann_entropy(rho0), i0 = mutual_information(ch, rho0), c0 = coherent_information(ch, rho0);
  const double lnd = std::log(static_cast<double>(rho0.dim()));
  double big_l = 0.0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const int n = static_cast<int>(k + 1);
    const DensityOperator rho = fam.state(betas[k]);
    const double h = von_neumann_entropy(rho), i = mutual_information(ch, rho);
    rep.add(n, "beta", betas[k], betas.back());
    rep.add(n, "H(rho_beta)", h, h0);
    rep.add(n, "I(rho_beta,Phi)", i, i0);
    rep.add(n, "I_c(rho_beta,Phi)", coherent_information(ch, rho), c0);
    const double denom = std::abs(h - h0) + trace_distance(rho.matrix(), rho0.matrix()) * lnd;
    if (denom > 1e-12) big_l = std::max(big_l, std::abs(i - i0) / denom);
  }
  rep.notes.push_back("empirical L = " + format_g9(big_l));
  return rep;
}

} // namespace qmi
