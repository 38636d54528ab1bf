// Serial reference against the OpenMP kernels on the same fields: wall time
// per stage and a bitwise comparison of the results.
#include "lamina/exec.hpp"
#include "lamina/kernels.hpp"
#include "lamina/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace lamina;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel timings"};
  std::string field = "sinusoid2d";
  std::size_t subdiv = 16;
  std::vector<int> ks{16, 64};
  int repeats = 3;
  bool quick = false;
  app.add_option("--field", field, "builtin name");
  app.add_option("--subdiv", subdiv, "mesh subdivisions per axis")->check(CLI::PositiveNumber);
  app.add_option("--k", ks, "k values")->delimiter(',');
  app.add_option("--repeats", repeats, "timed repetitions, best kept")->check(CLI::PositiveNumber);
  app.add_flag("--quick", quick, "small sizes, one repetition");
  CLI11_PARSE(app, argc, argv);
  if (quick) {
    subdiv = 4;
    ks = {8};
    repeats = 1;
  }

  ExperimentConfig c;
  c.field = field;
  c.subdivisions = subdiv;
  const PiecewiseAffineField u = load_field(c);
  std::printf("field %s, %zu cells, %d threads\n", field.c_str(), u.mesh.cell_count(), max_threads());
  std::printf("%-4s %5s %12s %12s %8s %s\n", "mode", "k", "serial[s]", "openmp[s]", "speedup", "identical");

  bool all_identical = true;
  for (LaminateMode mode : {LaminateMode::bd, LaminateMode::bv})
    for (int k : ks) {
      VariationReport rs, rp;
      std::vector<double> l1(2);
      const Exec execs[2] = {Exec::serial, Exec::openmp};
      double times[2];
      for (int i = 0; i < 2; ++i) {
        VariationReport& out = i == 0 ? rs : rp;
        times[i] = best_of(repeats, [&] {
          const std::vector<StaircaseField> fields = build_laminates(u, mode, k, execs[i]);
          out = measure_variation(u, fields, mode, k, execs[i], 20000);
          l1[i] = l1_error(u, fields, 20000, execs[i]);
        });
      }
      const bool same = rs.total_frobenius == rp.total_frobenius && rs.total_schatten == rp.total_schatten &&
                        rs.interface_schatten == rp.interface_schatten && rs.sup_bound == rp.sup_bound &&
                        l1[0] == l1[1];
      all_identical = all_identical && same;
      std::printf("%-4s %5d %12.4f %12.4f %8.2f %s\n", to_string(mode).c_str(), k, times[0], times[1],
                  times[0] / times[1], same ? "yes" : "NO");
    }
  return all_identical ? 0 : 1;
}
