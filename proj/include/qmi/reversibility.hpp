// reversibility.hpp: perfect reversibility of a channel on a state.
//
// The channel is reversible on rho iff I(rho, Phi~) = 0, i.e. iff rho_ER is a
// product. The decoder is read off from the isometry W on H_B that carries
// the purification |phi_BRE> onto |phi_AR> (x) |phi_EE'>.

#pragma once

#include <optional>
#include <sstream>

#include <Eigen/SVD>

#include "qmi/information.hpp"
#include "qmi/random.hpp"

namespace qmi {

inline constexpr double tau_rev = 1e-9;

namespace detail {

// Joint pure state (V (x) I_R)|phi_AR> of B, E, R as a dim_B x (dim_E * r) matrix Y
// with Y(b, e * r + k) = psi[(b * dim_E + e) * r + k].
struct BerState {
  Matrix y;
  Index dim_b = 0, dim_e = 0, dim_r = 0;
  CompactPurification purification;

  Vector vector() const {
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = y;
    return Eigen::Map<const Vector>(rm.data(), y.size());
  }
  Matrix rho_er() const { return y.transpose() * y.conjugate(); }
};

inline BerState ber_state(const QuantumOperation& ch, const DensityOperator& rho) {
  BerState s;
  s.purification = purify_compact(rho);
  s.dim_b = ch.dim_out();
  s.dim_e = static_cast<Index>(ch.size());
  s.dim_r = s.purification.reference_dim;
  const Matrix m = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      s.purification.vector.data(), rho.dim(), s.dim_r);
  const Matrix vm = dilate(ch).isometry * m;  // rows (b, e), cols r
  s.y.resize(s.dim_b, s.dim_e * s.dim_r);
  for (Index b = 0; b < s.dim_b; ++b)
    for (Index e = 0; e < s.dim_e; ++e)
      for (Index k = 0; k < s.dim_r; ++k) s.y(b, e * s.dim_r + k) = vm(b * s.dim_e + e, k);
  return s;
}

} // namespace detail

// I(rho, Phi~) = H(rho_ER || rho_E (x) rho_R)
inline double reversibility_gap(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "reversibility_gap");
  const detail::BerState s = detail::ber_state(ch, rho);
  const Matrix er = s.rho_er();
  const PositiveOperator joint(er);
  const PositiveOperator rho_e(partial_trace(er, {s.dim_e, s.dim_r}, 1));
  const PositiveOperator rho_r(partial_trace(er, {s.dim_e, s.dim_r}, 0));
  return relative_entropy(joint, tensor(rho_e, rho_r)).nats;
}

struct ProductTest {
  bool product = false;
  double defect = 0.0;  // || w - w_1 (x) w_2 ||_1
};

inline ProductTest is_product(const BipartiteState& w) {
  if (w.factor_count() != 2) {
    std::ostringstream os;
    os << "is_product: expected 2 factors, got " << w.factor_count();
    throw DimensionError(os.str());
  }
  const Matrix w1 = partial_trace(w.matrix(), std::span<const Index>(w.dims()), 1);
  const Matrix w2 = partial_trace(w.matrix(), std::span<const Index>(w.dims()), 0);
  ProductTest t;
  t.defect = trace_distance(w.matrix(), kron(w1, w2));
  t.product = t.defect <= 1e-8;
  return t;
}

// Decoder from the purification alignment, without checking the gap. On a
// non-reversible pair the result is the best alignment, not a recovery map.
inline KrausChannel decoder_from_alignment(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "build_decoder");
  const detail::BerState s = detail::ber_state(ch, rho);
  const Index da = rho.dim(), db = s.dim_b, de = s.dim_e, dr = s.dim_r;
  const Index de2 = std::max(de, (db + da - 1) / da);

  // |phi_EE'> = sum_k sqrt(mu_k) |f_k> (x) |k>
  const Matrix er = s.rho_er();
  const Spectrum se = eig_hermitian(Matrix(partial_trace(er, {de, dr}, 1)));
  Vector phi_ee = Vector::Zero(de * de2);
  for (Index k = 0; k < de; ++k) {
    const double mu = std::max(0.0, se.values(k));
    if (mu == 0.0) continue;
    phi_ee += std::sqrt(mu) * kron(Vector(se.vectors.col(k)), basis_vector(de2, k));
  }

  // P[(r,e), b] = psi_BER, C[(r,e), (a,e')] = phi_AR (x) phi_EE'
  const Vector& phi_ar = s.purification.vector;
  Matrix p(dr * de, db), c(dr * de, da * de2);
  for (Index k = 0; k < dr; ++k)
    for (Index e = 0; e < de; ++e) {
      const Index row = k * de + e;
      for (Index b = 0; b < db; ++b) p(row, b) = s.y(b, e * dr + k);
      for (Index a = 0; a < da; ++a)
        for (Index f = 0; f < de2; ++f) c(row, a * de2 + f) = phi_ar(a * dr + k) * phi_ee(e * de2 + f);
    }

  // W maximizes Re <chi|(I (x) W)|psi>: the polar part of conj(C* P).
  const Matrix x = c.transpose() * p.conjugate();
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix w = svd.matrixU().leftCols(db) * svd.matrixV().adjoint();

  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(de2));
  for (Index f = 0; f < de2; ++f) {
    Matrix d(da, db);
    for (Index a = 0; a < da; ++a) d.row(a) = w.row(a * de2 + f);
    kraus.push_back(std::move(d));
  }
  return KrausChannel::validate(std::move(kraus));
}

inline KrausChannel build_decoder(const KrausChannel& ch, const DensityOperator& rho) {
  const double gap = reversibility_gap(ch, rho);
  if (gap > tau_rev) {
    std::ostringstream os;
    os << "build_decoder: channel is not reversible on this state (gap " << gap << " > " << tau_rev << ")";
    throw NotReversibleError(os.str(), gap);
  }
  return decoder_from_alignment(ch, rho);
}

struct ReversibilityVerdict {
  bool reversible = false;
  double gap = 0.0;
  std::optional<KrausChannel> witness;
};

inline ReversibilityVerdict assess_reversibility(const KrausChannel& ch, const DensityOperator& rho) {
  ReversibilityVerdict v;
  v.gap = reversibility_gap(ch, rho);
  v.reversible = v.gap <= tau_rev;
  if (v.reversible) v.witness = decoder_from_alignment(ch, rho);
  return v;
}

// ---------------------------------------------------------------------------
// Equivalent recovery conditions for T = D o Phi on supp rho

struct RecoveryResiduals {
  double a1 = 0.0;    // max over sampled pure states in supp rho of ||T(P) - P||_1
  double a3 = 0.0;    // max over eigenbasis matrix units of max|T(E_ij) - E_ij|
  double eobr = 0.0;  // ||(T (x) Id_R)(rho_AR) - rho_AR||_1
  double tolerance = 1e-7;

  bool a1_pass() const { return a1 <= tolerance; }
  bool a3_pass() const { return a3 <= tolerance; }
  bool eobr_pass() const { return eobr <= tolerance; }
  bool consistent() const { return a1_pass() == a3_pass() && a3_pass() == eobr_pass(); }
};

inline RecoveryResiduals verify_reversibility_conditions(const KrausChannel& ch, const KrausChannel& decoder,
                                                         const DensityOperator& rho, std::uint64_t seed = 0,
                                                         int samples = 16) {
  ch.check_input(rho.dim(), "verify_reversibility_conditions");
  if (decoder.dim_in() != ch.dim_out() || decoder.dim_out() != rho.dim())
    throw DimensionError("verify_reversibility_conditions: decoder must map the output space back to the input space");
  const KrausChannel t = compose(decoder, ch);
  const CompactPurification p = purify_compact(rho);
  const Index r = p.reference_dim;
  const Matrix& e = p.eigenvectors;

  RecoveryResiduals res;
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) {
      const Matrix u = outer(Vector(e.col(i)), Vector(e.col(j)));
      res.a3 = std::max(res.a3, max_abs(t.act(u) - u));
    }

  Rng rng(seed);
  for (int s = 0; s < samples + static_cast<int>(r); ++s) {
    Vector v = s < r ? Vector(e.col(s)) : Vector(e * random_unit_vector(r, rng));
    const Matrix pv = outer(v, v);
    res.a1 = std::max(res.a1, trace_distance(t.act(pv), pv));
  }

  const Matrix rho_ar = outer(p.vector, p.vector);
  const Matrix lifted = tensor_channel(t, channels::identity_channel(r)).act(rho_ar);
  res.eobr = trace_distance(lifted, rho_ar);
  return res;
}

} // namespace qmi
