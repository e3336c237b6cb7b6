#pragma once

// Figure-grade sweeps over the pure-state Schmidt angle and over the
// single-parameter mixed family, plus detection of the violation onset
// (bound crossing the classical value 2) and of the turning point where the
// bound changes character. Rows are computed independently and may run in
// parallel; output is identical to the sequential order.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bellbound/entanglement.hpp"
#include "bellbound/optimizer.hpp"
#include "bellbound/parallel.hpp"
#include "bellbound/states.hpp"

namespace bellbound {

struct NoOnsetInRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lo, lo + step, ... clamped so the final point is exactly hi.
inline std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("uniform_grid: need step > 0 and hi >= lo");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = std::min(lo + static_cast<double>(k) * step, hi);
  if (g.back() < hi - step * 1e-9) g.push_back(hi);
  return g;
}

struct ThetaSweepRow {
  double theta;
  double chi;
  double bound_analytic;
  double bound_numeric;
  double entropy;
};

// One row per (theta, chi), theta-major, chi in the given order. The numeric
// column always runs the search (force_numeric), since its whole point is to
// check the closed form and the chi-independence.
inline std::vector<ThetaSweepRow> sweep_theta(const std::vector<double>& thetas,
                                              const std::vector<double>& chis,
                                              const OptimizerConfig& cfg = {}) {
  std::vector<ThetaSweepRow> rows(thetas.size() * chis.size());
  OptimizerConfig numeric_cfg = cfg;
  numeric_cfg.force_numeric = true;

  parallel_for(rows.size(), [&](std::size_t idx) {
    const double theta = thetas[idx / chis.size()];
    const double chi = chis[idx % chis.size()];
    const DensityMatrix rho = pure_to_density(schmidt_to_pure(SchmidtForm(theta, chi)));
    rows[idx] = ThetaSweepRow{theta, chi, pure_bound_analytic(theta),
                              maximize_bound(rho, numeric_cfg).value, von_neumann_entropy(rho)};
  });
  return rows;
}

struct LambdaSweepRow {
  double lambda;
  double bound;
  double concurrence;
  double horodecki_max;
};

inline std::vector<LambdaSweepRow> sweep_lambda(const std::vector<double>& lambdas,
                                                const OptimizerConfig& cfg = {}) {
  std::vector<LambdaSweepRow> rows(lambdas.size());
  parallel_for(rows.size(), [&](std::size_t idx) {
    const DensityMatrix rho = lambda_state(lambdas[idx]);
    rows[idx] = LambdaSweepRow{lambdas[idx], maximize_bound(rho, cfg).value, concurrence(rho),
                               horodecki_max(rho)};
  });
  return rows;
}

// Smallest lambda where the bound crosses the classical value 2, refined by
// bisection from the first bracketing grid interval. The bound is
// nondecreasing in lambda on this family, so a single crossing exists or
// none does.
inline double find_onset(const std::vector<LambdaSweepRow>& rows, const OptimizerConfig& cfg = {}) {
  std::size_t bracket = rows.size();
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i].bound <= 2.0 && rows[i + 1].bound > 2.0) {
      bracket = i;
      break;
    }
  }
  if (bracket == rows.size()) {
    throw NoOnsetInRangeError("find_onset: bound never crosses 2 on the given grid");
  }

  double lo = rows[bracket].lambda, hi = rows[bracket + 1].lambda;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (maximize_bound(lambda_state(mid), cfg).value > 2.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double find_onset(double lambda_lo, double lambda_hi, const OptimizerConfig& cfg = {},
                         double grid_step = 0.01) {
  return find_onset(sweep_lambda(uniform_grid(lambda_lo, lambda_hi, std::min(grid_step, 0.01)), cfg),
                    cfg);
}

namespace detail {

inline std::size_t argmax_second_difference(const std::vector<LambdaSweepRow>& rows) {
  std::size_t best = 1;
  double best_mag = -1.0;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double d2 = std::abs(rows[i - 1].bound - 2.0 * rows[i].bound + rows[i + 1].bound);
    if (d2 > best_mag) {
      best_mag = d2;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

// Grid lambda maximizing |discrete second difference| of the bound, refined
// once on a 10x denser local grid around the coarse winner.
inline double find_turning_point(const std::vector<LambdaSweepRow>& rows,
                                 const OptimizerConfig& cfg = {}) {
  if (rows.size() < 3) {
    throw std::invalid_argument("find_turning_point: need at least 3 grid points");
  }
  const std::size_t coarse = detail::argmax_second_difference(rows);
  const double step = rows[1].lambda - rows[0].lambda;
  const double lo = std::max(rows.front().lambda, rows[coarse].lambda - step);
  const double hi = std::min(rows.back().lambda, rows[coarse].lambda + step);

  const std::vector<LambdaSweepRow> fine = sweep_lambda(uniform_grid(lo, hi, step / 10.0), cfg);
  return fine[detail::argmax_second_difference(fine)].lambda;
}

inline double find_turning_point(double lambda_lo, double lambda_hi,
                                 const OptimizerConfig& cfg = {}, double grid_step = 0.01) {
  return find_turning_point(
      sweep_lambda(uniform_grid(lambda_lo, lambda_hi, std::min(grid_step, 0.01)), cfg), cfg);
}

}  // namespace bellbound
