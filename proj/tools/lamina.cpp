// Command line front end: run, counterexample, relax, oracle.

#include "lamina/envelope.hpp"
#include "lamina/norms.hpp"
#include "lamina/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lamina;
using nlohmann::json;

namespace {

struct Common {
  std::string mode = "bd";
  std::string field = "identity2d";
  std::size_t subdiv = 4;
  std::vector<int> ks{4, 8, 16, 32, 64};
  std::vector<std::string> norms;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t mc_samples = 100000;
  bool serial = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--mode", c.mode, "bv or bd")->check(CLI::IsMember({"bv", "bd"}));
  cmd->add_option("--field", c.field, "builtin name or JSON field file");
  cmd->add_option("--subdiv", c.subdiv, "mesh subdivisions per axis")->check(CLI::PositiveNumber);
  cmd->add_option("--k", c.ks, "strictly increasing k values")->delimiter(',');
  cmd->add_option("--norms", c.norms, "frobenius, schatten1, ssym")->delimiter(',');
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--mc-samples", c.mc_samples, "L1 and face Monte Carlo samples")->check(CLI::PositiveNumber);
  cmd->add_flag("--serial", c.serial, "disable OpenMP kernels");
}

ExperimentConfig to_config(const Common& c) {
  ExperimentConfig cfg;
  cfg.mode = parse_mode(c.mode);
  cfg.field = c.field;
  cfg.subdivisions = c.subdiv;
  cfg.ks = c.ks;
  for (const std::string& n : c.norms) cfg.norms.push_back(parse_norm(n));
  cfg.out_dir = c.out;
  cfg.seed = c.seed;
  cfg.mc_samples = c.mc_samples;
  cfg.exec = c.serial ? Exec::serial : Exec::openmp;
  cfg.validate();
  return cfg;
}

void print_table(const ConvergenceTable& t) {
  std::printf("%6s %16s %16s %16s %12s %12s\n", "k", "var_frobenius", "var_schatten", "var_interface", "sup_err",
              "l1_err");
  for (const ConvergenceRow& r : t.rows)
    std::printf("%6d %16.10f %16.10f %16.3e %12.3e %12.3e\n", r.k, r.var_frobenius, r.var_schatten, r.var_interface,
                r.sup_err, r.l1_err);
  std::printf("target (%s) %.10f   frobenius target %.10f\n", std::string(to_string(schatten_norm(t.mode))).c_str(),
              t.target, t.target_frobenius);
  std::printf("mesh: %zu cells, size %.4g, regularity %.4g; interface constant %.4g\n", t.cells, t.mesh_size,
              t.regularity, t.interface_constant());
}

MatrixMN parse_matrix(const std::string& text) {
  const auto rows = json::parse(text).get<std::vector<std::vector<double>>>();
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("matrix must be non-empty");
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw std::invalid_argument("matrix rows differ in length");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return MatrixMN(rows.size(), rows.front().size(), std::move(flat));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staircase laminates and Schatten-type variations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common run_opts, relax_opts;
  auto* run = app.add_subcommand("run", "convergence table for one field");
  add_common(run, run_opts);

  auto* relax = app.add_subcommand("relax", "recovery-sequence estimate of the relaxed Frobenius functional");
  add_common(relax, relax_opts);

  std::string cx_mode = "bd", cx_out;
  std::vector<int> cx_ks{4, 8, 16, 32, 64};
  std::size_t cx_subdiv = 4;
  auto* cx = app.add_subcommand("counterexample", "u(x) = x: Frobenius and Schatten variations of its laminates");
  cx->add_option("--mode", cx_mode, "bv or bd")->check(CLI::IsMember({"bv", "bd"}));
  cx->add_option("--k", cx_ks, "strictly increasing k values")->delimiter(',');
  cx->add_option("--subdiv", cx_subdiv, "mesh subdivisions per axis")->check(CLI::PositiveNumber);
  cx->add_option("--out", cx_out, "output directory");

  std::string matrix_text;
  std::size_t trials = 1000, samples = 1000;
  std::uint64_t oracle_seed = 0x1a3b5c7d;
  std::vector<std::string> oracle_norms{"schatten1", "ssym"};
  auto* oracle = app.add_subcommand("oracle", "dual and primal bounds for the convex envelopes");
  oracle->add_option("--matrix", matrix_text, "JSON rows, e.g. [[1,0],[0,-5]]")->required();
  oracle->add_option("--trials", trials, "random decompositions")->check(CLI::PositiveNumber);
  oracle->add_option("--mc-samples", samples, "random dual witnesses")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "random seed");
  oracle->add_option("--norms", oracle_norms, "schatten1, ssym")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ExperimentConfig cfg = to_config(run_opts);
      const ConvergenceTable t = run_experiment(cfg);
      print_table(t);
      write_outputs(cfg, t);
    } else if (relax->parsed()) {
      const ExperimentConfig cfg = to_config(relax_opts);
      const RelaxationEstimate e = relaxation_estimate(cfg);
      std::printf("relaxed Frobenius functional ~ %.10f (k = %d), extrapolated %.10f, Schatten target %.10f\n",
                  e.value, e.k, e.extrapolated, e.target);
    } else if (cx->parsed()) {
      const CounterexampleReport r = verify_counterexample(cx_ks, parse_mode(cx_mode), cx_subdiv);
      std::printf("%6s %16s %16s\n", "k", "var_frobenius", "var_schatten");
      for (std::size_t i = 0; i < r.ks.size(); ++i)
        std::printf("%6d %16.10f %16.10f\n", r.ks[i], r.frobenius[i], r.schatten[i]);
      std::printf("|Id| = %.10f   %s(Id) = %.10f   gap = %.10f\n", r.frobenius_of_identity,
                  r.mode == LaminateMode::bd ? "Ssym" : "S1", r.schatten_of_identity, r.obstruction);
      std::printf("limit estimate %.10f (extrapolated %.10f), norms coincide: %s\n", r.limit_estimate,
                  r.extrapolated, r.coincide ? "yes" : "no");
      if (!cx_out.empty()) {
        std::filesystem::create_directories(cx_out);
        std::ofstream(std::filesystem::path(cx_out) / "counterexample.json") << to_json(r).dump(2) << "\n";
      }
    } else if (oracle->parsed()) {
      const MatrixMN a = parse_matrix(matrix_text);
      const OracleOptions opt{oracle_seed, Exec::openmp};
      json out;
      for (const std::string& name : oracle_norms) {
        const Norm n = parse_norm(name);
        if (n == Norm::schatten1) {
          const EnvelopeEstimate e = envelope_s1(a, samples, trials, opt);
          out["schatten1"] = {{"lower", e.lower}, {"upper", e.upper}, {"exact", schatten1(a)},
                              {"accepted", e.accepted_trials}, {"rejected", e.rejected_trials}};
        } else if (n == Norm::ssym) {
          if (!a.square()) throw std::invalid_argument("ssym needs a square matrix");
          const SymMatrix s(a);
          const EnvelopeEstimate e = envelope_ssym(s, samples, trials, opt);
          out["ssym"] = {{"lower", e.lower}, {"upper", e.upper}, {"exact", ssym(s)},
                         {"accepted", e.accepted_trials}, {"rejected", e.rejected_trials}};
        } else {
          throw std::invalid_argument("oracle supports schatten1 and ssym");
        }
      }
      std::cout << out.dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
