#include "lamina/pipeline.hpp"

#include "lamina/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace lamina {

using nlohmann::json;

std::string to_string(LaminateMode mode) { return mode == LaminateMode::bd ? "bd" : "bv"; }

LaminateMode parse_mode(const std::string& s) {
  if (s == "bd") return LaminateMode::bd;
  if (s == "bv") return LaminateMode::bv;
  throw std::invalid_argument("unknown mode: " + s + " (expected bv or bd)");
}

void ExperimentConfig::validate() const {
  if (subdivisions == 0) throw std::invalid_argument("subdivisions must be >= 1");
  if (ks.empty()) throw std::invalid_argument("at least one k is required");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1) throw std::invalid_argument("k values must be positive");
    if (i > 0 && ks[i] <= ks[i - 1]) throw std::invalid_argument("k values must be strictly increasing");
  }
  for (Norm n : norms)
    if (n != Norm::frobenius && n != schatten_norm(mode))
      throw std::invalid_argument("norm " + std::string(lamina::to_string(n)) + " does not apply to mode " +
                                  lamina::to_string(mode));
  if (mc_samples == 0) throw std::invalid_argument("mc-samples must be >= 1");
  if (box) {
    if (box->lo.size() != box->hi.size()) throw std::invalid_argument("box corners differ in dimension");
    for (std::size_t i = 0; i < box->lo.size(); ++i)
      if (!(box->hi[i] > box->lo[i])) throw std::invalid_argument("box is empty");
  }
}

bool ExperimentConfig::wants(Norm n) const {
  return norms.empty() || std::find(norms.begin(), norms.end(), n) != norms.end();
}

// ------------------------------------------------------------- builtins

namespace {

Box unit_box(std::size_t n) { return {Point(n, 0.0), Point(n, 1.0)}; }

FieldFn affine_fn(MatrixMN a, Vector b) {
  return [a = std::move(a), b = std::move(b)](std::span<const double> x) { return add(a.apply(x), b); };
}

std::uint64_t point_hash(std::span<const double> x, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  for (double v : x) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v + 0.0));
  return h;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"identity2d", "identity3d", "skew2d", "rankone-sym2d", "sinusoid2d", "affine-random", "pwaffine-random"};
}

std::optional<BuiltinField> find_builtin(const std::string& name, std::uint64_t seed) {
  if (name == "identity2d") return BuiltinField{name, 2, 2, unit_box(2), affine_fn(MatrixMN::identity(2), {0, 0})};
  if (name == "identity3d")
    return BuiltinField{name, 3, 3, unit_box(3), affine_fn(MatrixMN::identity(3), {0, 0, 0})};
  if (name == "skew2d") return BuiltinField{name, 2, 2, unit_box(2), affine_fn(MatrixMN{{0, -1}, {1, 0}}, {0, 0})};
  if (name == "rankone-sym2d")
    return BuiltinField{name, 2, 2, unit_box(2), affine_fn(sym_tensor(Vector{1, 2}, Vector{3, -1}).matrix(), {0, 0})};
  if (name == "sinusoid2d")
    return BuiltinField{name, 2, 2, unit_box(2), [](std::span<const double> x) {
                          return Vector{0.5 * std::sin(x[1]), 0.5 * std::sin(x[0])};
                        }};
  if (name == "affine-random") {
    Rng rng = make_stream(seed, 0);
    MatrixMN a = uniform_matrix(rng, 2, 2);
    const MatrixMN b = uniform_matrix(rng, 2, 1);
    return BuiltinField{name, 2, 2, unit_box(2), affine_fn(std::move(a), b.col(0))};
  }
  if (name == "pwaffine-random")
    return BuiltinField{name, 2, 2, unit_box(2),
                        [seed](std::span<const double> x) {
                          Rng rng(point_hash(x, seed));
                          std::uniform_real_distribution<double> u(-1.0, 1.0);
                          const double a = u(rng);
                          return Vector{a, u(rng)};
                        },
                        true};
  return std::nullopt;
}

// ------------------------------------------------------------------ JSON

json field_to_json(const PiecewiseAffineField& u) {
  json cells = json::array();
  for (std::size_t c = 0; c < u.mesh.cell_count(); ++c) {
    json rows = json::array();
    for (std::size_t i = 0; i < u.a[c].rows(); ++i) rows.push_back(u.a[c].row(i));
    cells.push_back({{"A", rows}, {"b", u.b[c]}});
  }
  return {{"n", u.mesh.dim()},
          {"m", u.m},
          {"mesh", {{"vertices", u.mesh.points()}, {"cells", u.mesh.cell_indices()}}},
          {"cells", cells}};
}

PiecewiseAffineField field_from_json(const json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const auto m = j.at("m").get<std::size_t>();
  auto points = j.at("mesh").at("vertices").get<std::vector<Point>>();
  auto cells = j.at("mesh").at("cells").get<std::vector<std::vector<std::size_t>>>();
  for (const Point& p : points)
    if (p.size() != n) throw std::invalid_argument("field JSON: vertex dimension differs from n");
  PiecewiseAffineField u{Triangulation(n, std::move(points), std::move(cells)), m, {}, {}, false};
  const json& data = j.at("cells");
  if (data.size() != u.mesh.cell_count()) throw std::invalid_argument("field JSON: one (A, b) per cell required");
  for (const json& c : data) {
    const auto rows = c.at("A").get<std::vector<std::vector<double>>>();
    if (rows.size() != m) throw std::invalid_argument("field JSON: A must have m rows");
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (r.size() != n) throw std::invalid_argument("field JSON: A must have n columns");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    u.a.emplace_back(m, n, std::move(flat));
    auto b = c.at("b").get<Vector>();
    if (b.size() != m) throw std::invalid_argument("field JSON: b must have m entries");
    u.b.push_back(std::move(b));
  }
  u.continuous = continuity_defect(u) <= 1e-10;
  return u;
}

json laminate_to_json(const StaircaseField& f) {
  json terms = json::array();
  for (const StaircaseTerm& t : f.terms) terms.push_back({{"coefficient", t.c}, {"direction", t.d}, {"k", t.k}});
  json affine = json::array();
  for (std::size_t i = 0; i < f.affine.rows(); ++i) affine.push_back(f.affine.row(i));
  return {{"mode", to_string(f.mode)},
          {"k", f.terms.empty() ? 0 : f.terms.front().k},
          {"affine", {{"M", affine}, {"b", f.b}}},
          {"terms", terms}};
}

PiecewiseAffineField load_field(const ExperimentConfig& config) {
  std::string name = config.field;
  std::uint64_t seed = config.seed;
  if (!find_builtin(name, seed)) {
    std::ifstream in(name);
    if (!in) throw std::invalid_argument("field is neither a builtin nor a readable file: " + name);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument("cannot parse field JSON " + name + ": " + e.what());
    }
    if (!j.contains("builtin")) return field_from_json(j);
    name = j.at("builtin").get<std::string>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  }
  const auto b = find_builtin(name, seed);
  if (!b) throw std::invalid_argument("unknown builtin field: " + name);
  const Box box = config.box.value_or(b->box);
  if (box.dim() != b->n) throw std::invalid_argument("box dimension does not match field " + name);
  return interpolate(b->value, freudenthal_mesh(box, config.subdivisions));
}

// ----------------------------------------------------------------- runs

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string ConvergenceTable::to_csv() const {
  std::string out = "k,var_frobenius,var_schatten,var_interface,sup_err,l1_err,target\n";
  for (const ConvergenceRow& r : rows) {
    out += std::to_string(r.k) + "," + fmt(r.var_frobenius) + "," + fmt(r.var_schatten) + "," +
           fmt(r.var_interface) + "," + fmt(r.sup_err) + "," + fmt(r.l1_err) + "," + fmt(target) + "\n";
  }
  return out;
}

ConvergenceTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, load_field(config));
}

ConvergenceTable run_experiment(const ExperimentConfig& config, const PiecewiseAffineField& u) {
  config.validate();
  if (config.mode == LaminateMode::bd && u.m != u.mesh.dim())
    throw std::invalid_argument("BD mode needs a field with m == n");
  ConvergenceTable t;
  t.mode = config.mode;
  t.cells = u.mesh.cell_count();
  t.mesh_size = u.mesh.mesh_size();
  t.regularity = u.mesh.regularity_constant();
  for (const MeshFace& f : u.mesh.interior_faces())
    t.face_measure += ConvexPolytope(u.mesh.dim(), u.mesh.cell(f.cell).facet(f.facet)).measure();
  const Norm schatten = schatten_norm(config.mode);
  for (std::size_t c = 0; c < u.mesh.cell_count(); ++c) {
    const double vol = u.mesh.cell(c).volume();
    t.volume += vol;
    t.target += evaluate(schatten, u.a[c]) * vol;
    t.target_frobenius += frobenius(u.a[c]) * vol;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k : config.ks) {
    const std::vector<StaircaseField> fields = build_laminates(u, config.mode, k, config.exec);
    const VariationReport r = measure_variation(u, fields, config.mode, k, config.exec, config.mc_samples, config.seed);
    ConvergenceRow row;
    row.k = k;
    row.var_frobenius = config.wants(Norm::frobenius) ? r.total_frobenius : nan;
    row.var_schatten = config.wants(schatten) ? r.total_schatten : nan;
    row.var_interface = r.interface_schatten;
    row.interface_frobenius = r.interface_frobenius;
    row.sup_err = r.sup_bound;
    row.l1_err = l1_error(u, fields, config.mc_samples, config.exec);
    row.monte_carlo_faces = r.monte_carlo_faces;
    t.rows.push_back(row);
  }
  return t;
}

double ConvergenceTable::interface_constant() const {
  if (face_measure <= 0.0) return 0.0;
  double c = 0.0;
  for (const ConvergenceRow& r : rows) c = std::max(c, r.k * r.var_interface / face_measure);
  return c;
}

json manifest(const ExperimentConfig& config, const ConvergenceTable& table) {
  json norms = json::array();
  for (Norm n : {Norm::frobenius, schatten_norm(config.mode)})
    if (config.wants(n)) norms.push_back(std::string(to_string(n)));
  json cfg = {{"mode", to_string(config.mode)},
              {"field", config.field},
              {"subdivisions", config.subdivisions},
              {"k", config.ks},
              {"norms", norms},
              {"seed", config.seed},
              {"mc_samples", config.mc_samples}};
  if (config.box) cfg["box"] = {{"lo", config.box->lo}, {"hi", config.box->hi}};
  json rows = json::array();
  for (const ConvergenceRow& r : table.rows)
    rows.push_back({{"k", r.k},
                    {"interface_frobenius", r.interface_frobenius},
                    {"monte_carlo_faces", r.monte_carlo_faces}});
  return {{"version", kVersion},
          {"config", cfg},
          {"targets",
           {{"norm", std::string(to_string(schatten_norm(config.mode)))},
            {"schatten", table.target},
            {"frobenius", table.target_frobenius}}},
          {"mesh",
           {{"cells", table.cells},
            {"volume", table.volume},
            {"mesh_size", table.mesh_size},
            {"regularity_constant", table.regularity},
            {"interior_face_measure", table.face_measure}}},
          {"interface_constant", table.interface_constant()},
          {"rows", rows}};
}

void write_outputs(const ExperimentConfig& config, const ConvergenceTable& table) {
  if (config.out_dir.empty()) return;
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  std::ofstream csv(fs::path(config.out_dir) / "convergence.csv");
  csv << table.to_csv();
  std::ofstream man(fs::path(config.out_dir) / "manifest.json");
  man << manifest(config, table).dump(2) << "\n";
  if (!csv || !man) throw std::runtime_error("cannot write outputs to " + config.out_dir);
}

RelaxationEstimate relaxation_estimate(const ExperimentConfig& config) {
  const ConvergenceTable t = run_experiment(config);
  RelaxationEstimate e;
  e.target = t.target;
  const ConvergenceRow& last = t.rows.back();
  e.k = last.k;
  e.value = last.var_frobenius;
  e.extrapolated = e.value;
  for (const ConvergenceRow& r : t.rows)
    if (2 * r.k == last.k) e.extrapolated = 2 * last.var_frobenius - r.var_frobenius;
  return e;
}

CounterexampleReport verify_counterexample(const std::vector<int>& ks, LaminateMode mode, std::size_t subdivisions,
                                           Exec exec) {
  ExperimentConfig config;
  config.mode = mode;
  config.field = "identity2d";
  config.ks = ks;
  config.subdivisions = subdivisions;
  config.exec = exec;
  config.validate();
  if (ks.back() < 8) throw std::invalid_argument("counterexample: largest k must be >= 8");
  const ConvergenceTable t = run_experiment(config);

  CounterexampleReport r;
  r.mode = mode;
  r.ks = ks;
  const MatrixMN id = MatrixMN::identity(2);
  r.schatten_of_identity = evaluate(schatten_norm(mode), id);
  r.frobenius_of_identity = frobenius(id);
  r.obstruction = r.schatten_of_identity - r.frobenius_of_identity;
  for (const ConvergenceRow& row : t.rows) {
    r.frobenius.push_back(row.var_frobenius);
    r.schatten.push_back(row.var_schatten);
    const double scale = std::max(std::abs(row.var_frobenius), std::abs(row.var_schatten));
    if (scale > 0.0)
      r.max_relative_gap = std::max(r.max_relative_gap, std::abs(row.var_frobenius - row.var_schatten) / scale);
  }
  r.coincide = r.max_relative_gap <= 1e-9;
  r.limit_estimate = r.frobenius.back();
  r.extrapolated = r.limit_estimate;
  const auto half = std::find(ks.begin(), ks.end(), ks.back() / 2);
  if (ks.back() % 2 == 0 && half != ks.end())
    r.extrapolated = 2.0 * r.limit_estimate - r.frobenius[static_cast<std::size_t>(half - ks.begin())];
  return r;
}

json to_json(const CounterexampleReport& r) {
  return {{"mode", to_string(r.mode)},
          {"k", r.ks},
          {"var_frobenius", r.frobenius},
          {"var_schatten", r.schatten},
          {"norms_coincide", r.coincide},
          {"max_relative_gap", r.max_relative_gap},
          {"schatten_of_identity", r.schatten_of_identity},
          {"frobenius_of_identity", r.frobenius_of_identity},
          {"limit_estimate", r.limit_estimate},
          {"extrapolated_limit", r.extrapolated},
          {"obstruction", r.obstruction}};
}

}  // namespace lamina
