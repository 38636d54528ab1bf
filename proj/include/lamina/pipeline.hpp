#pragma once
//
// End-to-end runs: mesh a box, interpolate a field, laminate every cell at
// each k, and tabulate total and interface variations against the target
// sum_i N(A_i) vol(T_i).
//

#include "lamina/exec.hpp"
#include "lamina/geometry.hpp"
#include "lamina/kernels.hpp"
#include "lamina/laminate.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lamina {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  LaminateMode mode = LaminateMode::bd;
  std::string field = "identity2d";  // builtin name or path to a JSON field file
  std::optional<Box> box;            // default: the builtin's box, else the unit box
  std::size_t subdivisions = 4;
  std::vector<int> ks{4, 8, 16, 32, 64};
  std::vector<Norm> norms;  // empty: frobenius and the mode's Schatten norm
  std::string out_dir;      // empty: nothing written
  std::uint64_t seed = 1;
  std::size_t mc_samples = 100000;
  Exec exec = Exec::openmp;

  // Throws std::invalid_argument on non-increasing or non-positive k,
  // zero subdivisions or a norm that does not fit the mode.
  void validate() const;
  bool wants(Norm n) const;
};

// Builtin fields:
//   identity2d      u(x) = x on (0,1)^2
//   identity3d      u(x) = x on (0,1)^3
//   skew2d          u(x) = (-x2, x1), a rigid motion
//   rankone-sym2d   u(x) = (a (.) b) x with a = (1,2), b = (3,-1)
//   sinusoid2d      u(x) = (sin x2, sin x1) / 2
//   affine-random   u(x) = A x + b, entries uniform in [-1,1] from the seed
//   pwaffine-random P1 field with nodal values uniform in [-1,1] from the seed
struct BuiltinField {
  std::string name;
  std::size_t n = 2;
  std::size_t m = 2;
  Box box;
  FieldFn value;
  bool piecewise = false;  // nodal data, not a global formula
};

std::vector<std::string> builtin_names();
std::optional<BuiltinField> find_builtin(const std::string& name, std::uint64_t seed);

// Resolves the config's field: builtins are interpolated on the Kuhn mesh
// of the box; JSON files carry their own mesh or name a builtin.
PiecewiseAffineField load_field(const ExperimentConfig& config);

nlohmann::json field_to_json(const PiecewiseAffineField& u);
PiecewiseAffineField field_from_json(const nlohmann::json& j);
nlohmann::json laminate_to_json(const StaircaseField& f);

struct ConvergenceRow {
  int k = 0;
  double var_frobenius = 0.0;
  double var_schatten = 0.0;
  double var_interface = 0.0;
  double sup_err = 0.0;
  double l1_err = 0.0;
  double interface_frobenius = 0.0;
  bool monte_carlo_faces = false;
};

struct ConvergenceTable {
  LaminateMode mode = LaminateMode::bd;
  double target = 0.0;            // sum_i N(A_i) vol(T_i), mode's Schatten norm
  double target_frobenius = 0.0;  // same with the Frobenius norm
  double volume = 0.0;
  std::size_t cells = 0;
  double mesh_size = 0.0;
  double regularity = 0.0;     // min vol(T) / delta^n over the mesh
  double face_measure = 0.0;   // (n-1)-measure of the interior faces
  std::vector<ConvergenceRow> rows;

  // max over rows of k * var_interface / face_measure: the observed constant
  // in interface <= (C / k) H^{n-1}(faces); 0 without interior faces
  double interface_constant() const;

  std::string to_csv() const;
};

ConvergenceTable run_experiment(const ExperimentConfig& config);
ConvergenceTable run_experiment(const ExperimentConfig& config, const PiecewiseAffineField& u);

// Writes convergence.csv and manifest.json into config.out_dir.
void write_outputs(const ExperimentConfig& config, const ConvergenceTable& table);
nlohmann::json manifest(const ExperimentConfig& config, const ConvergenceTable& table);

// Frobenius variation along the laminate recovery sequence: the value at the
// largest k and, when k/2 is also in the run, the extrapolation
// 2 V(k) - V(k/2). Both approximate the relaxed Frobenius functional, to be
// compared with `target`.
struct RelaxationEstimate {
  double value = 0.0;
  int k = 0;
  double extrapolated = 0.0;
  double target = 0.0;
};
RelaxationEstimate relaxation_estimate(const ExperimentConfig& config);

struct CounterexampleReport {
  LaminateMode mode = LaminateMode::bd;
  std::vector<int> ks;
  std::vector<double> frobenius;
  std::vector<double> schatten;
  double max_relative_gap = 0.0;  // between the two columns, over all k
  double schatten_of_identity = 0.0;
  double frobenius_of_identity = 0.0;
  double limit_estimate = 0.0;  // value at the largest k
  double extrapolated = 0.0;    // 2 V(k_max) - V(k_max / 2) when available
  double obstruction = 0.0;     // schatten_of_identity - frobenius_of_identity
  bool coincide = false;        // columns agree within 1e-9 relative
};

// u(x) = x on the unit square, laminated at every k in `ks` (k_max >= 8).
CounterexampleReport verify_counterexample(const std::vector<int>& ks, LaminateMode mode = LaminateMode::bd,
                                           std::size_t subdivisions = 4, Exec exec = Exec::openmp);
nlohmann::json to_json(const CounterexampleReport& r);

std::string to_string(LaminateMode mode);
LaminateMode parse_mode(const std::string& s);

}  // namespace lamina
