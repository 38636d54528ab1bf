#pragma once
//
// Brute-force checks of the convexification formulas: the Schatten-1 norm is
// the convex envelope of |.| restricted to rank-one matrices, and ssym is the
// convex envelope of |.| restricted to symmetric rank-one matrices.
//
// Lower bounds come from linear functionals (support-function duality),
// upper bounds from explicit rank-one decompositions. Randomized parts are
// reproducible: trial t always draws from make_stream(seed, t).
//

#include "lamina/exec.hpp"
#include "lamina/linalg.hpp"
#include "lamina/random.hpp"
#include "lamina/rank_one.hpp"

#include <cstdint>
#include <limits>
#include <optional>

namespace lamina {

struct EnvelopeEstimate {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  Decomposition witness_decomposition;
  MatrixMN witness_dual;
  std::size_t accepted_trials = 0;
  std::size_t rejected_trials = 0;
};

struct OracleOptions {
  std::uint64_t seed = 0x1a3b5c7d;
  Exec exec = Exec::openmp;
};

// max A:X over sampled X with |X|_{S,inf} = 1, plus the analytic maximizer
// sum_{s_i > 0} u_i v_i^T.
EnvelopeEstimate dual_bound_s1(const MatrixMN& a, std::size_t samples, const OracleOptions& opt = {});

// min cost over random exact rank-one decompositions, plus bv_decompose(A).
EnvelopeEstimate envelope_upper_s1(const MatrixMN& a, std::size_t trials, const OracleOptions& opt = {});

EnvelopeEstimate envelope_s1(const MatrixMN& a, std::size_t samples, std::size_t trials,
                             const OracleOptions& opt = {});

// max A:(cos t X - sin t Y) over sampled 0 <= X, Y <= I, plus the analytic
// maximizer built from the positive and negative spectral projectors.
EnvelopeEstimate dual_bound_ssym(const SymMatrix& a, std::size_t samples, const OracleOptions& opt = {});

// min cost over random exact symmetric rank-one decompositions, plus
// bd_decompose(A).
EnvelopeEstimate envelope_upper_ssym(const SymMatrix& a, std::size_t trials, const OracleOptions& opt = {});

EnvelopeEstimate envelope_ssym(const SymMatrix& a, std::size_t samples, std::size_t trials,
                               const OracleOptions& opt = {});

// Single random decompositions. k - 1 pieces come from a random basis
// (optionally after a random additive split of A); the last piece is the
// residual, accepted only when it is rank-one (resp. of the form a (.) b)
// within 1e-10 (1 + |A|_F). std::nullopt marks a rejected trial.
std::optional<Decomposition> random_rank_one_split(const MatrixMN& a, Rng& rng);
std::optional<Decomposition> random_sym_rank_one_split(const SymMatrix& a, Rng& rng);

}  // namespace lamina
