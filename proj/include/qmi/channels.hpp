// channels.hpp: Kraus channels and quantum operations, Stinespring dilation,
// complementary channels, composition, tensor products, truncation channels
// and seeded random sampling.

#pragma once

#include <cstdint>
#include <sstream>
#include <utility>
#include <vector>

#include "qmi/operator_core.hpp"
#include "qmi/random.hpp"

namespace qmi {

// Completely positive, trace non-increasing map sum_i V_i (.) V_i*.
class QuantumOperation {
public:
  static QuantumOperation validate(std::vector<Matrix> kraus) {
    QuantumOperation op(std::move(kraus));
    const Matrix defect = identity(op.dim_in_) - op.gram();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (defect + defect.adjoint())), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -tol::positivity) {
      std::ostringstream os;
      os << "QuantumOperation: I - sum V_i*V_i has eigenvalue " << lo << " (not trace non-increasing)";
      throw ValidationError(os.str(), "kraus", -lo);
    }
    return op;
  }

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  std::size_t size() const { return kraus_.size(); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const Matrix& operator[](std::size_t i) const { return kraus_[i]; }

  // sum_i V_i* V_i
  Matrix gram() const {
    Matrix s = Matrix::Zero(dim_in_, dim_in_);
    for (const auto& v : kraus_) s.noalias() += v.adjoint() * v;
    return s;
  }

  double completeness_residual() const { return max_abs(gram() - identity(dim_in_)); }

  // Linear action on an arbitrary dim_in x dim_in matrix.
  Matrix act(const Matrix& x) const {
    check_input(x.rows(), "act");
    Matrix out = Matrix::Zero(dim_out_, dim_out_);
    for (const auto& v : kraus_) out.noalias() += v * x * v.adjoint();
    return out;
  }

  // Heisenberg-picture adjoint sum_i V_i* (.) V_i.
  Matrix adjoint_act(const Matrix& y) const {
    if (y.rows() != dim_out_) throw DimensionError("adjoint_act: dimension mismatch");
    Matrix out = Matrix::Zero(dim_in_, dim_in_);
    for (const auto& v : kraus_) out.noalias() += v.adjoint() * y * v;
    return out;
  }

  void check_input(Index d, const char* who) const {
    if (d != dim_in_) {
      std::ostringstream os;
      os << who << ": input dimension " << d << " != channel input dimension " << dim_in_;
      throw DimensionError(os.str());
    }
  }

protected:
  explicit QuantumOperation(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ValidationError("kraus list is empty", "kraus");
    dim_out_ = kraus_.front().rows();
    dim_in_ = kraus_.front().cols();
    if (dim_in_ == 0 || dim_out_ == 0) throw ValidationError("kraus operators have a zero dimension", "kraus");
    for (std::size_t i = 0; i < kraus_.size(); ++i) {
      if (kraus_[i].rows() != dim_out_ || kraus_[i].cols() != dim_in_) {
        std::ostringstream os;
        os << "kraus operator " << i << " has shape " << kraus_[i].rows() << "x" << kraus_[i].cols()
           << ", expected " << dim_out_ << "x" << dim_in_;
        throw ValidationError(os.str(), "kraus");
      }
    }
  }

  std::vector<Matrix> kraus_;
  Index dim_in_ = 0;
  Index dim_out_ = 0;
};

// Trace-preserving Kraus channel: sum_i V_i* V_i = I within tol::completeness.
class KrausChannel : public QuantumOperation {
public:
  static KrausChannel validate(std::vector<Matrix> kraus) {
    KrausChannel ch(std::move(kraus));
    const double r = ch.completeness_residual();
    if (!(r <= tol::completeness)) {
      std::ostringstream os;
      os << "kraus: completeness residual ||sum V_i*V_i - I||_max = " << r << " exceeds " << tol::completeness;
      throw ValidationError(os.str(), "kraus", r);
    }
    return ch;
  }

private:
  explicit KrausChannel(std::vector<Matrix> kraus) : QuantumOperation(std::move(kraus)) {}
};

inline DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
  ch.check_input(rho.dim(), "apply");
  return DensityOperator(ch.act(rho.matrix()));
}

inline PositiveOperator apply(const QuantumOperation& op, const PositiveOperator& a) {
  op.check_input(a.dim(), "apply");
  return PositiveOperator(op.act(a.matrix()));
}

// ---------------------------------------------------------------------------
// Stinespring dilation  V|phi> = sum_i V_i|phi> (x) |h_i>,  H_B (x) H_E ordering.

struct StinespringDilation {
  Matrix isometry;
  Index dim_out = 0;
  Index dim_env = 0;

  Index dim_in() const { return isometry.cols(); }
  double isometry_residual() const { return max_abs(isometry.adjoint() * isometry - identity(dim_in())); }

  Matrix joint(const Matrix& rho) const { return isometry * rho * isometry.adjoint(); }

  Matrix output(const Matrix& rho) const { return partial_trace(joint(rho), {dim_out, dim_env}, 1); }
  Matrix environment(const Matrix& rho) const { return partial_trace(joint(rho), {dim_out, dim_env}, 0); }
};

inline StinespringDilation dilate(const QuantumOperation& ch) {
  StinespringDilation d;
  d.dim_out = ch.dim_out();
  d.dim_env = static_cast<Index>(ch.size());
  d.isometry = Matrix::Zero(d.dim_out * d.dim_env, ch.dim_in());
  for (Index i = 0; i < d.dim_env; ++i)
    for (Index b = 0; b < d.dim_out; ++b) d.isometry.row(b * d.dim_env + i) = ch[static_cast<std::size_t>(i)].row(b);
  return d;
}

// Complement Kraus set: K_b = sum_i |h_i><b| V_i, so that
// Phi~(rho) = sum_ij [Tr V_i rho V_j*] |h_i><h_j|.
inline std::vector<Matrix> complement_kraus(const QuantumOperation& ch) {
  const Index n = static_cast<Index>(ch.size());
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(ch.dim_out()));
  for (Index b = 0; b < ch.dim_out(); ++b) {
    Matrix k(n, ch.dim_in());
    for (Index i = 0; i < n; ++i) k.row(i) = ch[static_cast<std::size_t>(i)].row(b);
    out.push_back(std::move(k));
  }
  return out;
}

inline KrausChannel complement(const KrausChannel& ch) { return KrausChannel::validate(complement_kraus(ch)); }

inline QuantumOperation complement(const QuantumOperation& ch) {
  return QuantumOperation::validate(complement_kraus(ch));
}

// Gram matrix [Tr V_i x V_j*]_ij evaluated directly.
inline Matrix complement_output(const QuantumOperation& ch, const Matrix& x) {
  ch.check_input(x.rows(), "complement_output");
  const Index n = static_cast<Index>(ch.size());
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    const Matrix vx = ch[static_cast<std::size_t>(i)] * x;
    for (Index j = 0; j < n; ++j) g(i, j) = (vx * ch[static_cast<std::size_t>(j)].adjoint()).trace();
  }
  return g;
}

// ---------------------------------------------------------------------------
// Constructions

// Psi o Phi
inline KrausChannel compose(const KrausChannel& psi, const KrausChannel& phi) {
  if (phi.dim_out() != psi.dim_in()) {
    std::ostringstream os;
    os << "compose: output dimension " << phi.dim_out() << " != input dimension " << psi.dim_in();
    throw DimensionError(os.str());
  }
  std::vector<Matrix> k;
  k.reserve(psi.size() * phi.size());
  for (const auto& w : psi.kraus())
    for (const auto& v : phi.kraus()) k.push_back(w * v);
  return KrausChannel::validate(std::move(k));
}

inline KrausChannel tensor_channel(const KrausChannel& phi, const KrausChannel& psi) {
  std::vector<Matrix> k;
  k.reserve(phi.size() * psi.size());
  for (const auto& v : phi.kraus())
    for (const auto& w : psi.kraus()) k.push_back(kron(v, w));
  return KrausChannel::validate(std::move(k));
}

// lambda Phi1 + (1 - lambda) Phi2 realized as the weighted Kraus union.
inline KrausChannel mix_channels(double lambda, const KrausChannel& phi1, const KrausChannel& phi2) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("mix_channels: weight outside [0,1]");
  if (phi1.dim_in() != phi2.dim_in() || phi1.dim_out() != phi2.dim_out())
    throw DimensionError("mix_channels: dimension mismatch");
  std::vector<Matrix> k;
  for (const auto& v : phi1.kraus()) k.push_back(std::sqrt(lambda) * v);
  for (const auto& w : phi2.kraus()) k.push_back(std::sqrt(1.0 - lambda) * w);
  return KrausChannel::validate(std::move(k));
}

// Phi o J for an isometry J into the input space.
inline KrausChannel restrict_input(const KrausChannel& ch, const Matrix& embedding) {
  ch.check_input(embedding.rows(), "restrict_input");
  std::vector<Matrix> k;
  for (const auto& v : ch.kraus()) k.push_back(v * embedding);
  return KrausChannel::validate(std::move(k));
}

// Each V_i is followed by an isometric embedding U_i into the i-th block of
// H_C = (+)_i H_B, giving mutually orthogonal ranges.
inline KrausChannel block_embedding_lift(const KrausChannel& ch) {
  const Index n = static_cast<Index>(ch.size());
  const Index db = ch.dim_out();
  std::vector<Matrix> k;
  for (Index i = 0; i < n; ++i) {
    Matrix u = Matrix::Zero(n * db, ch.dim_in());
    u.block(i * db, 0, db, ch.dim_in()) = ch[static_cast<std::size_t>(i)];
    k.push_back(std::move(u));
  }
  return KrausChannel::validate(std::move(k));
}

// Pi(rho) = P rho P + Tr((I-P) rho) |psi><psi|
inline KrausChannel truncation_channel(const HermitianOperator& p, const Vector& psi) {
  const Index d = p.dim();
  const double idem = max_abs(p.matrix() * p.matrix() - p.matrix());
  if (idem > 1e-9) {
    std::ostringstream os;
    os << "truncation_channel: P is not a projector (||P^2 - P||_max = " << idem << ")";
    throw ValidationError(os.str(), "projector", idem);
  }
  if (psi.size() != d) throw DimensionError("truncation_channel: psi dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw ValidationError("truncation_channel: psi is not a unit vector", "psi");
  const Spectrum s = eig_hermitian(p);
  std::vector<Matrix> k{p.matrix()};
  for (Index j = 0; j < d; ++j)
    if (s.values(j) < 0.5) k.push_back(psi * s.vectors.col(j).adjoint());
  return KrausChannel::validate(std::move(k));
}

// Projector onto the first n computational basis vectors of C^d.
inline HermitianOperator coordinate_projector(Index d, Index n) {
  Matrix p = Matrix::Zero(d, d);
  for (Index i = 0; i < std::min(n, d); ++i) p(i, i) = 1.0;
  return HermitianOperator(p);
}

struct KrausTruncation {
  QuantumOperation operation;  // sum_{i<=n} V_i (.) V_i*
  KrausChannel completion;     // operation + W_n (.) W_n
  Matrix remainder_root;       // W_n = sqrt(I - sum_{i<=n} V_i* V_i)
};

// When dim_out >= dim_in, W_n is appended through the canonical embedding of
// H_A into H_B. Otherwise the W_n branch is routed to |0>_B via the Kraus
// operators |0><a| W_n, which keeps the completion trace-preserving.
inline KrausTruncation kraus_truncate(const KrausChannel& ch, std::size_t n) {
  if (n < 1 || n > ch.size()) {
    std::ostringstream os;
    os << "kraus_truncate: n = " << n << " outside [1, " << ch.size() << "]";
    throw DimensionError(os.str());
  }
  std::vector<Matrix> head(ch.kraus().begin(), ch.kraus().begin() + static_cast<std::ptrdiff_t>(n));
  QuantumOperation op = QuantumOperation::validate(head);
  const Matrix defect = identity(ch.dim_in()) - op.gram();
  Spectrum s = eig_hermitian(Matrix(0.5 * (defect + defect.adjoint())));
  if (s.values.minCoeff() < -tol::positivity)
    throw ValidationError("kraus_truncate: I - sum V_i*V_i is not positive", "kraus", -s.values.minCoeff());
  s.values = s.values.cwiseMax(0.0).cwiseSqrt();
  Matrix w = s.reconstruct();
  w = 0.5 * (w + w.adjoint());

  std::vector<Matrix> full = head;
  const Index da = ch.dim_in(), db = ch.dim_out();
  if (db >= da) {
    Matrix embedded = Matrix::Zero(db, da);
    embedded.topRows(da) = w;
    full.push_back(std::move(embedded));
  } else {
    for (Index a = 0; a < da; ++a) {
      Matrix k = Matrix::Zero(db, da);
      k.row(0) = w.row(a);
      full.push_back(std::move(k));
    }
  }
  return {std::move(op), KrausChannel::validate(std::move(full)), std::move(w)};
}

// Choi matrix sum_ij |i><j| (x) Phi(|i><j|), H_A (x) H_B ordering.
inline Matrix choi_matrix(const QuantumOperation& ch) {
  const Index da = ch.dim_in(), db = ch.dim_out();
  Matrix j = Matrix::Zero(da * db, da * db);
  for (Index a = 0; a < da; ++a)
    for (Index b = 0; b < da; ++b) j.block(a * db, b * db, db, db) = ch.act(matrix_unit(da, a, b));
  return j;
}

// Minimal Kraus representation from the Choi eigendecomposition. Utility
// only; complement() always uses the Kraus set it is given.
inline KrausChannel minimal_kraus(const KrausChannel& ch) {
  const Index da = ch.dim_in(), db = ch.dim_out();
  const PositiveOperator choi{choi_matrix(ch)};
  const Spectrum& s = choi.spectrum();
  std::vector<Matrix> k;
  for (Index m = 0; m < choi.rank(); ++m) {
    Matrix v(db, da);
    for (Index a = 0; a < da; ++a)
      for (Index b = 0; b < db; ++b) v(b, a) = std::sqrt(s.values(m)) * s.vectors(a * db + b, m);
    k.push_back(std::move(v));
  }
  return KrausChannel::validate(std::move(k));
}

// Haar-random isometry of shape (n_kraus * dim_out) x dim_in sliced into
// Kraus blocks with the dilate() row layout. Deterministic per seed.
inline KrausChannel random_channel(Index dim_in, Index dim_out, Index n_kraus, std::uint64_t seed) {
  if (dim_in <= 0 || dim_out <= 0 || n_kraus <= 0 || n_kraus * dim_out < dim_in) {
    std::ostringstream os;
    os << "random_channel: infeasible dimensions (dim_in=" << dim_in << ", dim_out=" << dim_out
       << ", n_kraus=" << n_kraus << ")";
    throw DimensionError(os.str());
  }
  Rng rng(seed);
  const Matrix v = haar_isometry(n_kraus * dim_out, dim_in, rng);
  std::vector<Matrix> k(static_cast<std::size_t>(n_kraus), Matrix(dim_out, dim_in));
  for (Index i = 0; i < n_kraus; ++i)
    for (Index b = 0; b < dim_out; ++b) k[static_cast<std::size_t>(i)].row(b) = v.row(b * n_kraus + i);
  return KrausChannel::validate(std::move(k));
}

// ---------------------------------------------------------------------------
// Standard channel families

namespace channels {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline KrausChannel identity_channel(Index d) { return KrausChannel::validate({identity(d)}); }

inline KrausChannel unitary(const Matrix& u) { return KrausChannel::validate({u}); }

// Canonical embedding C^dim_in -> C^dim_out.
inline KrausChannel isometric_embedding(Index dim_in, Index dim_out) {
  if (dim_out < dim_in) throw DimensionError("isometric_embedding: dim_out < dim_in");
  return KrausChannel::validate({Matrix::Identity(dim_out, dim_in)});
}

// {sqrt(1-p) I, sqrt(p) Z}
inline KrausChannel dephasing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("dephasing: p outside [0,1]");
  return KrausChannel::validate({std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * pauli_z()});
}

// rho -> (1-p) rho + p I/d via the Weyl (clock-shift) operator basis.
inline KrausChannel depolarizing(Index d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing: p outside [0,1]");
  const double dd = static_cast<double>(d);
  const double pi = std::acos(-1.0);
  std::vector<Matrix> k;
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      Matrix w = Matrix::Zero(d, d);
      for (Index j = 0; j < d; ++j)
        w((j + a) % d, j) = std::polar(1.0, 2.0 * pi * static_cast<double>(b * j) / dd);
      const double weight = (a == 0 && b == 0) ? 1.0 - p + p / (dd * dd) : p / (dd * dd);
      k.push_back(std::sqrt(weight) * w);
    }
  }
  return KrausChannel::validate(std::move(k));
}

// Qubit erasure: output space span{|0>,|1>,|e>} with |e> = |2>.
inline KrausChannel erasure(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("erasure: p outside [0,1]");
  Matrix keep = Matrix::Zero(3, 2);
  keep(0, 0) = keep(1, 1) = std::sqrt(1.0 - p);
  Matrix e0 = Matrix::Zero(3, 2), e1 = Matrix::Zero(3, 2);
  e0(2, 0) = std::sqrt(p);
  e1(2, 1) = std::sqrt(p);
  return KrausChannel::validate({keep, e0, e1});
}

inline KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("amplitude_damping: gamma outside [0,1]");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel::validate({k0, k1});
}

// rho -> sigma for every input, Kraus {sqrt(mu_k) |f_k><i|}.
inline KrausChannel constant(const DensityOperator& sigma, Index dim_in) {
  const Spectrum& s = sigma.spectrum();
  std::vector<Matrix> k;
  for (Index m = 0; m < sigma.dim(); ++m) {
    if (s.values(m) <= 0.0) continue;
    for (Index i = 0; i < dim_in; ++i)
      k.push_back(std::sqrt(s.values(m)) * outer(Vector(s.vectors.col(m)), basis_vector(dim_in, i)));
  }
  return KrausChannel::validate(std::move(k));
}

} // namespace channels

} // namespace qmi
