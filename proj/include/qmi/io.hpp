// io.hpp: JSON documents for channels, states, Hamiltonians and sweep configs.
//
// Matrix encoding: a row-major list of [re, im] pairs, either flat or nested
// by rows. A bare number is read as a real entry; a list whose first element
// is a pair of numbers is always read as flat.
//
//   channel:     {"dim_in": 2, "dim_out": 2, "kraus": [M, M, ...]}
//   state:       {"matrix": M, "dims": [2, 2]}      ("dims" optional)
//   hamiltonian: {"matrix": M}
//
// Requires nlohmann/json (vendor/json.hpp) on the include path.

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "json.hpp"
#include "qmi/channels.hpp"
#include "qmi/convergence.hpp"

namespace qmi::io {

using json = nlohmann::json;

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string(), "path");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": malformed JSON: " + e.what(), "json");
  }
}

inline json load_json(const std::filesystem::path& path) { return parse_json(read_text(path), path.string()); }

inline const json& require(const json& doc, const std::string& field) {
  if (!doc.is_object() || !doc.contains(field)) throw ValidationError("missing field \"" + field + "\"", field);
  return doc.at(field);
}

inline Index read_dim(const json& doc, const std::string& field) {
  const json& v = require(doc, field);
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw ValidationError("field \"" + field + "\" must be a positive integer", field);
  return static_cast<Index>(v.get<long long>());
}

namespace detail {
inline cplx read_entry(const json& e, const std::string& field) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ValidationError("field \"" + field + "\": entries must be [re, im] pairs", field);
}

inline bool is_entry(const json& e) { return e.is_number() || (e.is_array() && e.size() == 2 && e[0].is_number()); }
} // namespace detail

// rows/cols < 0 means "infer" (square for flat lists).
inline Matrix read_matrix(const json& m, const std::string& field, Index rows = -1, Index cols = -1) {
  if (!m.is_array() || m.empty()) throw ValidationError("field \"" + field + "\" must be a non-empty list", field);
  std::vector<cplx> flat;
  Index r = rows, c = cols;
  const bool nested = m[0].is_array() && !m[0].empty() && !detail::is_entry(m[0]);
  if (nested) {
    r = static_cast<Index>(m.size());
    c = static_cast<Index>(m[0].size());
    for (const auto& row : m) {
      if (!row.is_array() || static_cast<Index>(row.size()) != c)
        throw ValidationError("field \"" + field + "\": ragged rows", field);
      for (const auto& e : row) flat.push_back(detail::read_entry(e, field));
    }
    if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
      std::ostringstream os;
      os << "field \"" << field << "\": matrix is " << r << "x" << c << ", expected " << rows << "x" << cols;
      throw ValidationError(os.str(), field);
    }
  } else {
    for (const auto& e : m) flat.push_back(detail::read_entry(e, field));
    const auto n = static_cast<Index>(flat.size());
    if (r < 0 && c < 0) {
      r = c = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
    } else if (r < 0) {
      r = c > 0 ? n / c : 0;
    } else if (c < 0) {
      c = r > 0 ? n / r : 0;
    }
    if (r * c != n || r == 0) {
      std::ostringstream os;
      os << "field \"" << field << "\": " << n << " entries do not fill a " << r << "x" << c << " matrix";
      throw ValidationError(os.str(), field);
    }
  }
  Matrix out(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) out(i, j) = flat[static_cast<std::size_t>(i * c + j)];
  return out;
}

inline json write_matrix(const Matrix& m, bool round9 = true) {
  json rows = json::array();
  const auto num = [&](double x) { return round9 ? std::stod(format_g9(x)) : x; };
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({num(m(i, j).real()), num(m(i, j).imag())});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline KrausChannel channel_from_json(const json& doc) {
  const Index din = read_dim(doc, "dim_in"), dout = read_dim(doc, "dim_out");
  const json& k = require(doc, "kraus");
  if (!k.is_array() || k.empty()) throw ValidationError("field \"kraus\" must be a non-empty list of matrices", "kraus");
  std::vector<Matrix> kraus;
  for (const auto& m : k) kraus.push_back(read_matrix(m, "kraus", dout, din));
  try {
    return KrausChannel::validate(std::move(kraus));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field \"kraus\": ") + e.what(), "kraus", e.residual());
  }
}

inline json channel_to_json(const QuantumOperation& ch) {
  json k = json::array();
  for (const auto& v : ch.kraus()) k.push_back(write_matrix(v, false));
  return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", k}};
}

inline Matrix matrix_field(const json& doc) { return read_matrix(require(doc, "matrix"), "matrix"); }

inline DensityOperator state_from_json(const json& doc) {
  const Matrix m = matrix_field(doc);
  if (doc.contains("dims")) {
    const json& d = doc.at("dims");
    if (!d.is_array() || d.empty()) throw ValidationError("field \"dims\" must be a list of positive integers", "dims");
    Index prod = 1;
    for (const auto& x : d) {
      if (!x.is_number_integer() || x.get<long long>() <= 0)
        throw ValidationError("field \"dims\" must be a list of positive integers", "dims");
      prod *= static_cast<Index>(x.get<long long>());
    }
    if (prod != m.rows()) throw ValidationError("field \"dims\": product does not match the matrix size", "dims");
  }
  return DensityOperator(m);
}

inline std::vector<Index> state_dims(const json& doc) {
  std::vector<Index> out;
  if (doc.contains("dims"))
    for (const auto& x : doc.at("dims")) out.push_back(static_cast<Index>(x.get<long long>()));
  return out;
}

inline json state_to_json(const Matrix& m, const std::vector<Index>& dims = {}) {
  json doc{{"matrix", write_matrix(m, false)}};
  if (!dims.empty()) doc["dims"] = dims;
  return doc;
}

inline PositiveOperator positive_from_json(const json& doc) { return PositiveOperator(matrix_field(doc)); }

inline HermitianOperator hamiltonian_from_json(const json& doc) { return HermitianOperator(matrix_field(doc)); }

inline KrausChannel load_channel(const std::filesystem::path& p) { return channel_from_json(load_json(p)); }
inline DensityOperator load_state(const std::filesystem::path& p) { return state_from_json(load_json(p)); }
inline HermitianOperator load_hamiltonian(const std::filesystem::path& p) { return hamiltonian_from_json(load_json(p)); }

// ---------------------------------------------------------------------------
// Sweep configuration
//
//   {"lemma": "lemma1", "seed": 7,
//    "channel": "dephasing.json" | {...inline...},
//    "state": "half.json" | {...},
//    "a": ..., "b": ...,                          lemma1, lemma8 operands
//    "ladder": {"kind": "coordinate" | "spectral" | "scaled" | "explicit",
//               "steps": 20, "projectors": [M, ...], "operators": [M, ...]},
//    "hamiltonian": ..., "betas": [1.0, 0.9, ...], continuity
//    "count": 500, "dims": [2, 5], "grid": [0.1, ...]}  lemma7
//
// File references are resolved relative to the config's directory.

inline const std::vector<std::string>& sweep_names() {
  static const std::vector<std::string> names{"lemma1", "lemma3",  "lemma4",   "lemma7",
                                              "lemma8", "theorem1-proof", "example2", "continuity"};
  return names;
}

struct SweepConfig {
  json doc;
  std::filesystem::path base;

  static SweepConfig load(const std::filesystem::path& p) {
    return {load_json(p), p.has_parent_path() ? p.parent_path() : std::filesystem::path(".")};
  }

  bool has(const std::string& field) const { return doc.is_object() && doc.contains(field); }

  // A field holding either a path (string) or an inline document.
  json document(const std::string& field) const {
    const json& v = require(doc, field);
    if (v.is_string()) return load_json(base / v.get<std::string>());
    if (v.is_object()) return v;
    throw ValidationError("field \"" + field + "\" must be a path or an inline document", field);
  }

  std::uint64_t seed() const {
    if (!has("seed")) return 0;
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ValidationError("field \"seed\" must be a nonnegative integer", "seed");
    return s.get<std::uint64_t>();
  }

  std::vector<double> numbers(const std::string& field) const {
    const json& v = require(doc, field);
    if (!v.is_array()) throw ValidationError("field \"" + field + "\" must be a list of numbers", field);
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ValidationError("field \"" + field + "\" must be a list of numbers", field);
      out.push_back(x.get<double>());
    }
    return out;
  }

  int integer(const std::string& field, int fallback) const {
    if (!has(field)) return fallback;
    const json& v = doc.at(field);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
      throw ValidationError("field \"" + field + "\" must be a positive integer", field);
    return static_cast<int>(v.get<long long>());
  }

  const json& ladder() const { return require(doc, "ladder"); }

  std::string ladder_kind() const {
    const json& k = require(ladder(), "kind");
    if (!k.is_string()) throw ValidationError("field \"kind\" must be a string", "kind");
    return k.get<std::string>();
  }

  ProjectorLadder projector_ladder(const PositiveOperator& spectral_source) const {
    const std::string kind = ladder_kind();
    const Index d = spectral_source.dim();
    if (kind == "coordinate") return coordinate_ladder(d);
    if (kind == "spectral") return spectral_ladder(spectral_source);
    if (kind == "explicit") {
      const json& ps = require(ladder(), "projectors");
      if (!ps.is_array()) throw ValidationError("field \"projectors\" must be a list of matrices", "projectors");
      ProjectorLadder out;
      for (const auto& m : ps) out.emplace_back(read_matrix(m, "projectors", d, d));
      return out;
    }
    throw ValidationError("ladder kind \"" + kind + "\" is not one of coordinate, spectral, explicit", "kind");
  }

  std::vector<PositiveOperator> operator_ladder(const PositiveOperator& a0) const {
    const std::string kind = ladder_kind();
    const Index d = a0.dim();
    if (kind == "spectral") return lemma8_spectral_ladder(a0);
    if (kind == "scaled") return lemma8_scaled_ladder(a0, SweepConfig{ladder(), base}.integer("steps", 20));
    if (kind == "coordinate") {
      std::vector<PositiveOperator> out;
      for (const auto& p : coordinate_ladder(d)) out.emplace_back(Matrix(p.matrix() * a0.matrix() * p.matrix()));
      return out;
    }
    if (kind == "explicit") {
      const json& ops = require(ladder(), "operators");
      if (!ops.is_array()) throw ValidationError("field \"operators\" must be a list of matrices", "operators");
      std::vector<PositiveOperator> out;
      for (const auto& m : ops) out.emplace_back(read_matrix(m, "operators", d, d));
      return out;
    }
    throw ValidationError("ladder kind \"" + kind + "\" is not one of spectral, scaled, coordinate, explicit", "kind");
  }
};

} // namespace qmi::io
