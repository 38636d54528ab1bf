#pragma once
//
// Mesh-wide kernels: per-cell laminates, cell and face variations, L1
// error. Each kernel fills one slot per cell (or face) and the caller
// reduces in index order, so Exec::serial and Exec::openmp give identical
// bits.
//

#include "lamina/exec.hpp"
#include "lamina/geometry.hpp"
#include "lamina/laminate.hpp"

#include <cstdint>
#include <vector>

namespace lamina {

std::vector<StaircaseField> build_laminates(const PiecewiseAffineField& u, LaminateMode mode, int k, Exec exec);

// variation_on_cell for every cell, boundary hyperplanes of the mesh dropped.
std::vector<double> cell_variations(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields,
                                    Norm norm, Exec exec);

// Jump part on every interior face, with traces taken by eval_displaced.
std::vector<FaceIntegral> face_variations(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields,
                                          Norm norm, Exec exec, std::size_t mc_samples = 100000,
                                          std::uint64_t seed = 0);

// Quasi-random estimate of the L1 distance between the laminates and u,
// `samples` points split across cells in proportion to volume.
double l1_error(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields, std::size_t samples,
                Exec exec);

// Fixed-order sum.
double ordered_sum(const std::vector<double>& v);

struct RegionVariation {
  std::size_t cell = 0;
  double volume = 0.0;
  double frobenius = 0.0;
  double schatten = 0.0;   // schatten1 (BV) or ssym (BD)
  double interface = 0.0;  // faces whose lower-index cell is this one, schatten norm
  double sup_bound = 0.0;
};

struct VariationReport {
  int k = 0;
  LaminateMode mode = LaminateMode::bv;
  std::vector<RegionVariation> regions;
  double total_frobenius = 0.0;  // cells + faces
  double total_schatten = 0.0;
  double interface_frobenius = 0.0;
  double interface_schatten = 0.0;
  double sup_bound = 0.0;  // max over cells
  bool monte_carlo_faces = false;
};

// Norm of the mode: schatten1 for BV, ssym for BD.
Norm schatten_norm(LaminateMode mode);

VariationReport measure_variation(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields,
                                  LaminateMode mode, int k, Exec exec, std::size_t mc_samples = 100000,
                                  std::uint64_t seed = 0);

}  // namespace lamina
