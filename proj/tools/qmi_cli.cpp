// qmi_cli: compute, verify, optimize, sweep and random-suite front end.
//
// Exit status: 0 success, 1 invariant violation, 2 input error, 3 infeasible.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmi/qmi.hpp"

namespace {

using qmi::io::json;

constexpr int kOk = 0, kViolation = 1, kInput = 2, kInfeasible = 3;

json num(double x) {
  if (std::isfinite(x)) return std::stod(qmi::format_g9(x));
  return qmi::format_g9(x);
}

struct Manifest {
  std::string command;
  json inputs = json::object();
  std::optional<std::uint64_t> seed;
  json tolerances = json::object();
  std::string output = "-";

  json to_json() const {
    json m{{"command", command}, {"inputs", inputs}, {"tolerances", tolerances}, {"output", output}};
    m["seed"] = seed ? json(*seed) : json(nullptr);
    return m;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw qmi::ValidationError("cannot write " + out, "out");
  f << text;
}

void emit_json(const json& doc, const std::string& out) { emit(doc.dump(2) + "\n", out); }

// CSV outputs carry the manifest as one leading comment line.
void emit_csv(const Manifest& m, const std::string& body, const std::string& out) {
  emit("# manifest: " + m.to_json().dump() + "\n" + body, out);
}

struct Options {
  std::string channel, state, hamiltonian, out = "-", mode = "ea", trace_csv;
  std::string suite, lemma, config;
  std::optional<std::uint64_t> seed;
  std::size_t count = 100;
  std::optional<double> tol, energy;
};

int cmd_compute(const Options& o) {
  const qmi::KrausChannel ch = qmi::io::load_channel(o.channel);
  const qmi::DensityOperator rho = qmi::io::load_state(o.state);
  const qmi::InfoReport r = qmi::info_report(ch, rho);
  Manifest m{"compute", {{"channel", o.channel}, {"state", o.state}}, o.seed, json::object(), o.out};
  json doc{{"manifest", m.to_json()},
           {"mutual", num(r.mutual)},
           {"mutual_complement", num(r.mutual_complement)},
           {"coherent", num(r.coherent)},
           {"entropy_input", num(r.entropy_input)},
           {"entropy_output", num(r.entropy_output)},
           {"entropy_env", num(r.entropy_env)},
           {"theorem1_residual", num(r.theorem1_residual)},
           {"corollary1_residual", num(r.corollary1_residual)},
           {"reversibility_gap", num(qmi::reversibility_gap(ch, rho))}};
  emit_json(doc, o.out);
  return kOk;
}

json suite_json(const qmi::SuiteResult& r) {
  json inv = json::array();
  for (const auto& s : r.invariants)
    inv.push_back({{"name", s.name},
                   {"tolerance", num(s.tolerance)},
                   {"checked", s.checked},
                   {"violations", s.violations},
                   {"max_residual", num(s.max_residual)},
                   {"worst_seed", s.worst_seed},
                   {"violating_seeds", s.violating_seeds}});
  return {{"suite", r.suite}, {"count", r.count}, {"pass", r.ok()}, {"invariants", inv}};
}

const qmi::SuiteFn* find_suite(const std::string& name) {
  const auto& reg = qmi::suite_registry();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    std::cerr << "error: unknown suite \"" << name << "\"; available: " << qmi::suite_names() << "\n";
    return nullptr;
  }
  return &it->second;
}

Manifest suite_manifest(const std::string& cmd, const Options& o) {
  Manifest m{cmd, {{"suite", o.suite}, {"count", o.count}}, o.seed, json::object(), o.out};
  if (o.tol) m.tolerances["override"] = num(*o.tol);
  return m;
}

int cmd_verify(const Options& o) {
  const qmi::SuiteFn* fn = find_suite(o.suite);
  if (!fn) return kInput;
  const qmi::SuiteResult r = (*fn)({*o.seed, o.count, o.tol});
  json doc = suite_json(r);
  doc["manifest"] = suite_manifest("verify", o).to_json();
  emit_json(doc, o.out);
  return r.ok() ? kOk : kViolation;
}

int cmd_random_suite(const Options& o) {
  const qmi::SuiteFn* fn = find_suite(o.suite);
  if (!fn) return kInput;
  const qmi::SuiteResult r = (*fn)({*o.seed, o.count, o.tol});
  emit_csv(suite_manifest("random-suite", o), qmi::to_csv(r), o.out);
  if (!r.ok()) std::cerr << "violations: " << r.total_violations() << "\n";
  return r.ok() ? kOk : kViolation;
}

std::string trace_csv(const qmi::CapacityResult& r) {
  std::string out = "iteration,objective,duality_gap,constraint_slack\n";
  for (const auto& t : r.trace)
    out += std::to_string(t.iteration) + "," + qmi::format_g9(t.objective) + "," + qmi::format_g9(t.duality_gap) + "," +
           (t.constraint_slack ? qmi::format_g9(*t.constraint_slack) : "") + "\n";
  return out;
}

int cmd_optimize(const Options& o) {
  const qmi::KrausChannel ch = qmi::io::load_channel(o.channel);
  qmi::OptimizerConfig cfg;
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol) cfg.gap_tol = *o.tol;
  Manifest m{"optimize", {{"channel", o.channel}, {"mode", o.mode}}, o.seed, {{"gap_tol", num(cfg.gap_tol)}}, o.out};

  qmi::CapacityResult r;
  if (o.mode == "ea") {
    r = qmi::maximize_mutual_info(ch, cfg);
  } else if (o.mode == "coherent") {
    r = qmi::maximize_coherent_info(ch, cfg);
  } else {
    if (o.hamiltonian.empty() || !o.energy)
      throw qmi::ValidationError("mode ea-constrained needs --hamiltonian and --energy", "hamiltonian");
    m.inputs["hamiltonian"] = o.hamiltonian;
    m.inputs["energy"] = num(*o.energy);
    r = qmi::maximize_mutual_info_constrained(ch, qmi::io::load_hamiltonian(o.hamiltonian), *o.energy, cfg);
  }
  if (!o.trace_csv.empty()) {
    m.inputs["trace_csv"] = o.trace_csv;
    emit_csv(m, trace_csv(r), o.trace_csv);
  }
  json doc{{"manifest", m.to_json()},
           {"value", num(r.value)},
           {"duality_gap", num(r.duality_gap)},
           {"iterations", r.iterations},
           {"certified", r.certified},
           {"constraint_slack", r.constraint_slack ? num(*r.constraint_slack) : json(nullptr)},
           {"argmax", qmi::io::write_matrix(r.argmax.matrix())}};
  emit_json(doc, o.out);
  return kOk;
}

int cmd_sweep(const Options& o) {
  const auto cfg = qmi::io::SweepConfig::load(o.config);
  const qmi::SweepReport rep = qmi::run_sweep(o.lemma, cfg);
  Manifest m{"sweep", {{"lemma", o.lemma}, {"config", o.config}}, cfg.seed(), json::object(), o.out};
  emit_csv(m, qmi::to_csv(rep), o.out);
  for (const auto& n : rep.notes) std::cerr << "note: " << n << "\n";
  if (!rep.ok()) {
    const auto& v = rep.violations.front();
    std::cerr << "violation: " << v.what << "\n" << qmi::csv_row(rep.records[v.row]) << "\n";
    return kViolation;
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum mutual and coherent information toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--seed", o.seed, "Seed (nonnegative integer)");
    if (required) opt->required();
  };

  auto* compute = app.add_subcommand("compute", "Information quantities of a channel at a state");
  compute->add_option("--channel", o.channel, "Channel JSON file")->required();
  compute->add_option("--state", o.state, "State JSON file")->required();
  compute->add_option("--out", o.out, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run a seeded property suite and summarize");
  auto* random_suite = app.add_subcommand("random-suite", "Run a seeded property suite and emit per-instance CSV");
  for (auto* c : {verify, random_suite}) {
    c->add_option("suite", o.suite, "Suite name")->required();
    add_seed(c, true);
    c->add_option("--count", o.count, "Number of instances")->check(CLI::PositiveNumber);
    c->add_option("--tol", o.tol, "Override every invariant tolerance");
    c->add_option("--out", o.out, "Output file (default stdout)");
  }

  auto* optimize = app.add_subcommand("optimize", "Maximize I or I_c over input states");
  optimize->add_option("--channel", o.channel, "Channel JSON file")->required();
  optimize->add_option("--mode", o.mode, "ea | ea-constrained | coherent")
      ->check(CLI::IsMember({"ea", "ea-constrained", "coherent"}));
  optimize->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian JSON file (ea-constrained)");
  optimize->add_option("--energy", o.energy, "Energy bound h (ea-constrained)");
  optimize->add_option("--tol", o.tol, "Duality-gap tolerance");
  optimize->add_option("--trace-csv", o.trace_csv, "Write the iterate trace as CSV");
  optimize->add_option("--out", o.out, "Output file (default stdout)");
  add_seed(optimize, false);

  auto* sweep = app.add_subcommand("sweep", "Run a convergence sweep from a config file");
  sweep->add_option("lemma", o.lemma, "lemma1 | lemma3 | lemma4 | lemma7 | lemma8 | theorem1-proof | example2 | continuity")
      ->required();
  sweep->add_option("config", o.config, "Sweep config JSON file")->required();
  sweep->add_option("--out", o.out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*compute) return cmd_compute(o);
    if (*verify) return cmd_verify(o);
    if (*random_suite) return cmd_random_suite(o);
    if (*optimize) return cmd_optimize(o);
    if (*sweep) return cmd_sweep(o);
  } catch (const qmi::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const qmi::ValidationError& e) {
    std::cerr << "error: " << e.what();
    if (!e.field().empty()) std::cerr << " [field: " << e.field() << "]";
    if (e.residual() != 0.0) std::cerr << " [residual: " << qmi::format_g9(e.residual()) << "]";
    std::cerr << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
