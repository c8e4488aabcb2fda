// suites.hpp: seeded property suites over random (channel, state) corpora and
// the config-driven sweep dispatcher used by the CLI and the acceptance run.
//
// Residual convention: for an identity, |lhs - rhs|; for an inequality
// lhs <= rhs, lhs - rhs (negative means slack). An instance violates when its
// residual exceeds the invariant's tolerance.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "qmi/convergence.hpp"
#include "qmi/information.hpp"
#include "qmi/io.hpp"
#include "qmi/random.hpp"

namespace qmi {

struct SuiteRow {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Index dim = 0;
  std::string invariant;
  double residual = 0.0;
};

struct InvariantSummary {
  std::string name;
  double tolerance = 0.0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_residual = -infinity;
  std::uint64_t worst_seed = 0;
  std::vector<std::uint64_t> violating_seeds;  // first few, in index order
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<InvariantSummary> invariants;
  std::vector<SuiteRow> rows;

  bool ok() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const auto& s) { return s.violations == 0; });
  }
  std::size_t total_violations() const {
    std::size_t n = 0;
    for (const auto& s : invariants) n += s.violations;
    return n;
  }
  const InvariantSummary& at(const std::string& name) const {
    for (const auto& s : invariants)
      if (s.name == name) return s;
    throw std::out_of_range("no invariant " + name);
  }
};

inline std::string to_csv(const SuiteResult& r) {
  std::string out = "index,seed,dim,invariant,residual\n";
  for (const auto& row : r.rows)
    out += std::to_string(row.index) + "," + std::to_string(row.seed) + "," + std::to_string(row.dim) + "," +
           row.invariant + "," + format_g9(row.residual) + "\n";
  return out;
}

namespace detail {

class SuiteRecorder {
public:
  SuiteRecorder(std::string suite, std::uint64_t seed, std::size_t count, std::optional<double> tol_override)
      : tol_override_(tol_override) {
    result_.suite = std::move(suite);
    result_.seed = seed;
    result_.count = count;
  }

  void declare(const std::string& name, double tol) {
    index_[name] = result_.invariants.size();
    result_.invariants.push_back({name, tol_override_.value_or(tol)});
  }

  void record(std::size_t k, std::uint64_t seed, Index dim, const std::string& name, double residual) {
    InvariantSummary& s = result_.invariants.at(index_.at(name));
    result_.rows.push_back({k, seed, dim, name, residual});
    ++s.checked;
    if (residual > s.max_residual || std::isnan(residual)) {
      s.max_residual = residual;
      s.worst_seed = seed;
    }
    if (!(residual <= s.tolerance)) {
      ++s.violations;
      if (s.violating_seeds.size() < 10) s.violating_seeds.push_back(seed);
    }
  }

  SuiteResult take() { return std::move(result_); }

private:
  std::optional<double> tol_override_;
  SuiteResult result_;
  std::map<std::string, std::size_t> index_;
};

inline PositiveOperator random_positive(Index d, Rng& rng) {
  const Matrix g = complex_gaussian(d, d, rng);
  return PositiveOperator(Matrix(g * g.adjoint() / static_cast<double>(d)));
}

// random_channel with n_kraus raised to the isometry minimum ceil(din/dout).
inline KrausChannel channel_at_least(Index din, Index dout, Index nk, std::uint64_t seed) {
  return random_channel(din, dout, std::max(nk, (din + dout - 1) / dout), seed);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Corpus: instance k has dim = dims[k mod |dims|], 1..6 Kraus operators (at
// least ceil(d / d_out)),
// output dimension d, d+1 or max(d-1, 2), and alternately a full-rank or a
// rank-deficient state.

inline const std::vector<Index>& corpus_dims() {
  static const std::vector<Index> d{2, 3, 4, 6};
  return d;
}

struct CorpusItem {
  std::uint64_t seed = 0;
  Index dim = 0;
  KrausChannel channel;
  DensityOperator state;
};

inline CorpusItem corpus_item(std::uint64_t base_seed, std::size_t k, const std::vector<Index>& dims = corpus_dims()) {
  const std::uint64_t s = derive_seed(base_seed, k);
  const Index d = dims[k % dims.size()];
  const std::size_t round = k / dims.size();
  const Index nk = 1 + static_cast<Index>(round % 6);
  const Index dout_options[3] = {d, d + 1, std::max<Index>(d - 1, 2)};
  const Index dout = dout_options[(round / 6) % 3];
  Rng rng(derive_seed(s, 2));
  const Index rank = round % 2 == 0 ? 0 : 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(d - 1));
  KrausChannel ch = detail::channel_at_least(d, dout, nk, derive_seed(s, 1));
  DensityOperator rho = random_density(d, rng, rank);
  return {s, d, std::move(ch), std::move(rho)};
}

// ---------------------------------------------------------------------------
// Suites

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t count = 100;
  std::optional<double> tol;
};

inline SuiteResult suite_theorem1(const SuiteOptions& o) {
  detail::SuiteRecorder rec("theorem1", o.seed, o.count, o.tol);
  rec.declare("theorem1", 1e-8);
  for (std::size_t k = 0; k < o.count; ++k) {
    const CorpusItem it = corpus_item(o.seed, k);
    rec.record(k, it.seed, it.dim, "theorem1", std::abs(info_report(it.channel, it.state).theorem1_residual));
  }
  return rec.take();
}

inline SuiteResult suite_corollary1(const SuiteOptions& o) {
  detail::SuiteRecorder rec("corollary1", o.seed, o.count, o.tol);
  rec.declare("corollary1_entropic", 1e-8);
  rec.declare("corollary1_definition", 1e-8);
  for (std::size_t k = 0; k < o.count; ++k) {
    const CorpusItem it = corpus_item(o.seed, k);
    const InfoReport r = info_report(it.channel, it.state);
    rec.record(k, it.seed, it.dim, "corollary1_entropic", std::abs(r.corollary1_residual));
    const double via_def = coherent_information(it.channel, it.state) + coherent_information(complement(it.channel), it.state);
    rec.record(k, it.seed, it.dim, "corollary1_definition", std::abs(via_def));
  }
  return rec.take();
}

inline SuiteResult suite_definition(const SuiteOptions& o) {
  detail::SuiteRecorder rec("definition", o.seed, o.count, o.tol);
  rec.declare("def4_vs_triple", 1e-8);
  rec.declare("coherent_forms", 1e-8);
  rec.declare("pure_input_symmetry", 1e-9);
  for (std::size_t k = 0; k < o.count; ++k) {
    const CorpusItem it = corpus_item(o.seed, k);
    rec.record(k, it.seed, it.dim, "def4_vs_triple",
               std::abs(mutual_information(it.channel, it.state) - mutual_information_triple(it.channel, it.state)));
    rec.record(k, it.seed, it.dim, "coherent_forms",
               std::abs(coherent_information(it.channel, it.state) - coherent_information_entropic(it.channel, it.state)));
    Rng rng(derive_seed(it.seed, 3));
    const Matrix psi = random_density(it.dim, rng, 1).matrix();
    const RealVector sb = eig_hermitian(it.channel.act(psi)).values;
    const RealVector se = eig_hermitian(complement_output(it.channel, psi)).values;
    const Index m = std::max(sb.size(), se.size());
    RealVector a = RealVector::Zero(m), b = RealVector::Zero(m);
    a.head(sb.size()) = sb;
    b.head(se.size()) = se;
    rec.record(k, it.seed, it.dim, "pure_input_symmetry", (a - b).cwiseAbs().maxCoeff());
  }
  return rec.take();
}

inline SuiteResult suite_prop1(const SuiteOptions& o) {
  detail::SuiteRecorder rec("prop1", o.seed, o.count, o.tol);
  rec.declare("nonnegativity", 1e-10);
  rec.declare("concavity", 1e-8);
  rec.declare("convexity_channel", 1e-8);
  rec.declare("chain_rule_first", 1e-8);
  rec.declare("chain_rule_second", 1e-8);
  rec.declare("subadditivity", 1e-8);
  const double grid[] = {0.25, 0.5, 0.75};
  for (std::size_t k = 0; k < o.count; ++k) {
    const CorpusItem it = corpus_item(o.seed, k);
    const Index d = it.dim, dout = it.channel.dim_out();
    Rng rng(derive_seed(it.seed, 4));
    const double i0 = mutual_information(it.channel, it.state);
    rec.record(k, it.seed, d, "nonnegativity", -i0);

    const DensityOperator other = random_density(d, rng);
    const double i1 = mutual_information(it.channel, other);
    double worst = -infinity;
    for (double l : grid) {
      const DensityOperator mix(Matrix(l * it.state.matrix() + (1 - l) * other.matrix()));
      worst = std::max(worst, l * i0 + (1 - l) * i1 - mutual_information(it.channel, mix));
    }
    rec.record(k, it.seed, d, "concavity", worst);

    const KrausChannel phi2 = detail::channel_at_least(d, dout, 1 + static_cast<Index>(k % 4), derive_seed(it.seed, 5));
    const double j2 = mutual_information(phi2, it.state);
    worst = -infinity;
    for (double l : grid)
      worst = std::max(worst, mutual_information(mix_channels(l, it.channel, phi2), it.state) - (l * i0 + (1 - l) * j2));
    rec.record(k, it.seed, d, "convexity_channel", worst);

    const KrausChannel psi = detail::channel_at_least(dout, 2 + static_cast<Index>(k % 3), 1 + static_cast<Index>(k % 3),
                                            derive_seed(it.seed, 6));
    const double chain = mutual_information(compose(psi, it.channel), it.state);
    rec.record(k, it.seed, d, "chain_rule_first", chain - i0);
    rec.record(k, it.seed, d, "chain_rule_second", chain - mutual_information(psi, apply(it.channel, it.state)));

    // bipartite factors of size 2 or 3
    const Index da = 2 + static_cast<Index>(k % 2), dc = 2 + static_cast<Index>((k / 2) % 2);
    const DensityOperator omega = random_density(da * dc, rng, k % 3 == 0 ? 1 + static_cast<Index>(k % 4) : 0);
    const KrausChannel fa = detail::channel_at_least(da, 2, 1 + static_cast<Index>(k % 3), derive_seed(it.seed, 7));
    const KrausChannel fc = detail::channel_at_least(dc, 2, 1 + static_cast<Index>((k + 1) % 3), derive_seed(it.seed, 8));
    const DensityOperator wa(partial_trace(omega.matrix(), {da, dc}, 1));
    const DensityOperator wc(partial_trace(omega.matrix(), {da, dc}, 0));
    rec.record(k, it.seed, d, "subadditivity",
               mutual_information(tensor_channel(fa, fc), omega) - mutual_information(fa, wa) -
                   mutual_information(fc, wc));
  }
  return rec.take();
}

inline SuiteResult suite_prop3(const SuiteOptions& o) {
  detail::SuiteRecorder rec("prop3", o.seed, o.count, o.tol);
  rec.declare("posterior_bound", 1e-9);
  rec.declare("glo_bound", 1e-9);
  rec.declare("orthogonal_ranges_equality", 1e-8);
  for (std::size_t k = 0; k < o.count; ++k) {
    const CorpusItem it = corpus_item(o.seed, k);
    const double bound = posterior_entropy_bound(it.channel, it.state);
    rec.record(k, it.seed, it.dim, "posterior_bound", coherent_information(it.channel, it.state) - bound);
    rec.record(k, it.seed, it.dim, "glo_bound", bound - von_neumann_entropy(it.state));
    const KrausChannel small = detail::channel_at_least(it.dim, 2, 1 + static_cast<Index>(k % 4), derive_seed(it.seed, 9));
    const KrausChannel lifted = block_embedding_lift(small);
    rec.record(k, it.seed, it.dim, "orthogonal_ranges_equality",
               std::abs(coherent_information(lifted, it.state) - posterior_entropy_bound(lifted, it.state)));
  }
  return rec.take();
}

inline std::vector<double> lemma7_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

inline SuiteResult suite_lemma7(const SuiteOptions& o, Index dim_lo = 2, Index dim_hi = 5,
                                std::vector<double> grid = lemma7_grid()) {
  detail::SuiteRecorder rec("lemma7", o.seed, o.count, o.tol);
  rec.declare("lemma7", 1e-9);
  const Index span = dim_hi - dim_lo + 1;
  for (std::size_t k = 0; k < o.count; ++k) {
    const std::uint64_t s = derive_seed(o.seed, k);
    const Index d = dim_lo + static_cast<Index>(k % static_cast<std::size_t>(span));
    Rng rng(s);
    const DensityOperator rho = random_density(d, rng, k % 5 == 4 ? 1 : 0);
    const DensityOperator sigma = random_density(d, rng);
    const PositiveOperator c = detail::random_positive(d, rng);
    const Lemma7Check chk = check_lemma7(rho, sigma, c, grid);
    if (!chk.skipped) rec.record(k, s, d, "lemma7", chk.max_violation);
  }
  return rec.take();
}

inline SuiteResult suite_monotonicity(const SuiteOptions& o) {
  detail::SuiteRecorder rec("monotonicity", o.seed, o.count, o.tol);
  rec.declare("lemma1_monotone", sweep_tol::monotone);
  rec.declare("lemma1_terminal", sweep_tol::terminal);
  constexpr Index d = 8;
  for (std::size_t k = 0; k < o.count; ++k) {
    const std::uint64_t s = derive_seed(o.seed, k);
    Rng rng(s);
    const PositiveOperator a = detail::random_positive(d, rng), b = detail::random_positive(d, rng);
    const SweepReport r = sweep_lemma1(a, b, k % 2 == 0 ? coordinate_ladder(d) : spectral_ladder(b));
    double drop = -infinity, term = 0.0;
    std::map<std::string, double> prev;
    for (const auto& row : r.records) {
      if (prev.count(row.quantity)) drop = std::max(drop, prev[row.quantity] - row.value);
      prev[row.quantity] = row.value;
      if (row.n == static_cast<int>(d)) term = std::max(term, row.deviation);
    }
    rec.record(k, s, d, "lemma1_monotone", drop);
    rec.record(k, s, d, "lemma1_terminal", term);
  }
  return rec.take();
}

using SuiteFn = std::function<SuiteResult(const SuiteOptions&)>;

inline const std::map<std::string, SuiteFn>& suite_registry() {
  static const std::map<std::string, SuiteFn> reg{
      {"theorem1", suite_theorem1},
      {"corollary1", suite_corollary1},
      {"definition", suite_definition},
      {"prop1", suite_prop1},
      {"prop3", suite_prop3},
      {"lemma7", [](const SuiteOptions& o) { return suite_lemma7(o); }},
      {"monotonicity", suite_monotonicity},
  };
  return reg;
}

inline std::string suite_names() {
  std::string out;
  for (const auto& [name, fn] : suite_registry()) out += (out.empty() ? "" : ", ") + name;
  return out;
}

// ---------------------------------------------------------------------------
// Sweep dispatch from a config document

inline SweepReport sweep_lemma7_random(std::uint64_t seed, std::size_t count, Index dim_lo, Index dim_hi,
                                       const std::vector<double>& grid) {
  const SuiteResult s = suite_lemma7({seed, count, std::nullopt}, dim_lo, dim_hi, grid);
  SweepReport rep;
  rep.name = "lemma7";
  for (const auto& row : s.rows) {
    const std::size_t r = rep.add(static_cast<int>(row.index + 1), "max_violation", row.residual, 0.0);
    rep.check(row.residual <= 1e-9, r, "almost-convexity violated");
  }
  const std::size_t skipped = count - s.rows.size();
  if (skipped > 0) rep.notes.push_back(std::to_string(skipped) + " triples skipped (support not contained)");
  return rep;
}

inline SweepReport run_sweep(const std::string& lemma, const io::SweepConfig& cfg) {
  const auto& names = io::sweep_names();
  if (std::find(names.begin(), names.end(), lemma) == names.end())
    throw ValidationError("unknown lemma \"" + lemma + "\"", "lemma");
  if (cfg.has("lemma") && cfg.doc.at("lemma") != lemma)
    throw ValidationError("config names lemma " + cfg.doc.at("lemma").dump() + ", command asked for " + lemma, "lemma");

  if (lemma == "lemma1") {
    const PositiveOperator a = io::positive_from_json(cfg.document("a"));
    const PositiveOperator b = io::positive_from_json(cfg.document("b"));
    return sweep_lemma1(a, b, cfg.projector_ladder(a));
  }
  if (lemma == "lemma8") {
    const PositiveOperator a0 = io::positive_from_json(cfg.document("a"));
    const PositiveOperator b = io::positive_from_json(cfg.document("b"));
    return sweep_lemma8(a0, b, cfg.operator_ladder(a0));
  }
  if (lemma == "lemma7") {
    std::vector<double> grid = cfg.has("grid") ? cfg.numbers("grid") : lemma7_grid();
    Index lo = 2, hi = 5;
    if (cfg.has("dims")) {
      const auto d = cfg.numbers("dims");
      if (d.size() != 2 || d[0] < 1 || d[1] < d[0]) throw ValidationError("field \"dims\" must be [lo, hi]", "dims");
      lo = static_cast<Index>(d[0]);
      hi = static_cast<Index>(d[1]);
    }
    return sweep_lemma7_random(cfg.seed(), static_cast<std::size_t>(cfg.integer("count", 500)), lo, hi, grid);
  }
  const KrausChannel ch = io::channel_from_json(cfg.document("channel"));
  if (lemma == "continuity") {
    const GibbsFamily fam{io::hamiltonian_from_json(cfg.document("hamiltonian"))};
    return continuity_on_energy_ball(ch, fam, cfg.numbers("betas"));
  }
  const DensityOperator rho = io::state_from_json(cfg.document("state"));
  if (lemma == "lemma3") return sweep_lemma3(ch, rho);
  if (lemma == "lemma4") {
    Index psi = 0;
    if (cfg.has("psi_index")) {
      const auto& v = cfg.doc.at("psi_index");
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() >= ch.dim_out())
        throw ValidationError("field \"psi_index\" must index an output basis vector", "psi_index");
      psi = static_cast<Index>(v.get<long long>());
    }
    return sweep_lemma4(ch, rho, psi);
  }
  if (lemma == "theorem1-proof") return sweep_theorem1_proof(ch, rho);
  return sweep_example2(ch, rho);
}

} // namespace qmi
