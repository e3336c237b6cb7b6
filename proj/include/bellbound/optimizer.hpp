#pragma once

// Tight bound of the CHSH operator under local vertical measurements.
//
// Every vertical scheme is the canonical one conjugated by a product unitary,
// so the bound for a state rho is
//
//     max over Ua, Ub of | < (Ua x Ub)^dag W (Ua x Ub) >_rho |
//
// with W the canonical operator. Writing W in its eigenbasis leaves only the
// +/- 2 sqrt2 projectors, which is what `objective` evaluates. Pure states
// have the closed form sqrt2 (sin theta + 1) in the Schmidt angle; mixed
// states are handled by multi-start Nelder-Mead over the six effective Euler
// angles (beta, gamma, delta per qubit -- the alphas are global phases and
// cancel under conjugation, so they are frozen at 0).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "bellbound/linalg.hpp"
#include "bellbound/random.hpp"
#include "bellbound/states.hpp"

namespace bellbound {

// ZYZ angles of a single-qubit unitary e^{-i alpha} Rz(beta) Ry(gamma) Rz(delta).
struct EulerParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  // Fold into the canonical ranges: beta, delta in [0, 4 pi) (full double
  // cover), gamma in [0, 2 pi), alpha in [0, 2 pi).
  EulerParams canonicalized() const;
};

struct ProductUnitary {
  EulerParams a_params;
  EulerParams b_params;

  ProductUnitary canonicalized() const {
    return ProductUnitary{a_params.canonicalized(), b_params.canonicalized()};
  }
};

namespace detail {

inline double wrap_angle(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

}  // namespace detail

inline EulerParams EulerParams::canonicalized() const {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return EulerParams{detail::wrap_angle(alpha, kTwoPi), detail::wrap_angle(beta, 2.0 * kTwoPi),
                     detail::wrap_angle(gamma, kTwoPi), detail::wrap_angle(delta, 2.0 * kTwoPi)};
}

inline CMatrix2 single_qubit_unitary(const EulerParams& p) {
  const double c = std::cos(p.gamma / 2.0);
  const double s = std::sin(p.gamma / 2.0);
  CMatrix2 u;
  u(0, 0) = std::polar(c, -p.alpha - p.beta / 2.0 - p.delta / 2.0);
  u(0, 1) = -std::polar(s, -p.alpha - p.beta / 2.0 + p.delta / 2.0);
  u(1, 0) = std::polar(s, -p.alpha + p.beta / 2.0 - p.delta / 2.0);
  u(1, 1) = std::polar(c, -p.alpha + p.beta / 2.0 + p.delta / 2.0);
  return u;
}

inline CMatrix4 product_unitary(const ProductUnitary& u) {
  return kron(single_qubit_unitary(u.a_params), single_qubit_unitary(u.b_params));
}

// Inverse of single_qubit_unitary: ZYZ angles of an arbitrary U(2) element.
inline EulerParams euler_from_unitary(const CMatrix2& u) {
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const double alpha = -0.5 * std::arg(det);
  const Complex lift = std::polar(1.0, alpha);
  const Complex s00 = lift * u(0, 0);
  const Complex s10 = lift * u(1, 0);
  const Complex s11 = lift * u(1, 1);

  const double cg = std::abs(s00);
  const double sg = std::abs(s10);
  const double gamma = 2.0 * std::atan2(sg, cg);

  double beta = 0.0, delta = 0.0;
  if (cg > 1e-12 && sg > 1e-12) {
    const double phi_diag = std::arg(s11);  // (beta + delta) / 2
    const double phi_off = std::arg(s10);   // (beta - delta) / 2
    beta = phi_diag + phi_off;
    delta = phi_diag - phi_off;
  } else if (sg <= 1e-12) {
    beta = 2.0 * std::arg(s11);
  } else {
    beta = 2.0 * std::arg(s10);
  }
  return EulerParams{alpha, beta, gamma, delta}.canonicalized();
}

namespace detail {

// | 2 sqrt2 ( <eta3| U rho U^dag |eta3> - <eta1| U rho U^dag |eta1> ) | for
// U = ua (x) ub, with eta1 = (|00>+|11>)/sqrt2 and eta3 = (|10>-|01>)/sqrt2
// the +/- 2 sqrt2 eigenvectors of the canonical operator. U^dag eta is
// assembled from the conjugated rows of ua, ub; no 4x4 product is needed.
inline double vertical_objective(const CMatrix2& ua, const CMatrix2& ub, const CMatrix4& rho) {
  const Complex a0[2] = {std::conj(ua(0, 0)), std::conj(ua(0, 1))};
  const Complex a1[2] = {std::conj(ua(1, 0)), std::conj(ua(1, 1))};
  const Complex b0[2] = {std::conj(ub(0, 0)), std::conj(ub(0, 1))};
  const Complex b1[2] = {std::conj(ub(1, 0)), std::conj(ub(1, 1))};

  Complex v1[4], v3[4];
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      v1[2 * i + j] = a0[i] * b0[j] + a1[i] * b1[j];
      v3[2 * i + j] = a1[i] * b0[j] - a0[i] * b1[j];
    }
  }

  double q1 = 0.0, q3 = 0.0;  // 2 <eta| U rho U^dag |eta>
  for (std::size_t i = 0; i < 4; ++i) {
    Complex r1(0.0, 0.0), r3(0.0, 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
      r1 += rho(i, j) * v1[j];
      r3 += rho(i, j) * v3[j];
    }
    q1 += (std::conj(v1[i]) * r1).real();
    q3 += (std::conj(v3[i]) * r3).real();
  }
  return kSqrt2 * std::abs(q3 - q1);  // 2 sqrt2 * |q3 - q1| / 2
}

}  // namespace detail

inline double objective(const ProductUnitary& u, const DensityMatrix& rho) {
  return detail::vertical_objective(single_qubit_unitary(u.a_params),
                                    single_qubit_unitary(u.b_params), rho.matrix());
}

// sqrt2 (sin theta + 1): the bound for the pure state with Schmidt angle
// theta in [0, pi]. Crosses the classical value 2 at sin theta = sqrt2 - 1.
inline double pure_bound_analytic(double theta) {
  return kSqrt2 * (std::sin(theta) + 1.0);
}

struct OptimizerConfig {
  int num_starts = 64;
  int max_iters = 2000;
  double f_tol = 1e-10;
  double x_tol = 1e-9;
  std::uint64_t seed = 0;
  // Run the numeric search even when rho is (numerically) pure, instead of
  // the closed-form route. Used to verify the formula against the search.
  bool force_numeric = false;
};

struct BoundResult {
  double value = 0.0;
  ProductUnitary best_params;
  int starts_converged = 0;   // 0 together with evaluations == 0 marks the analytic route
  long evaluations = 0;
};

namespace detail {

using Point6 = std::array<double, 6>;

struct SimplexOutcome {
  Point6 x{};
  double value = 0.0;
  bool converged = false;
  long evaluations = 0;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5), maximizing f. Terminates when the simplex function spread
// falls below f_tol, every vertex is within x_tol of the best one, or
// max_iters is hit.
template <typename F>
inline SimplexOutcome nelder_mead_max(const F& f, const Point6& x0, double step, int max_iters,
                                      double f_tol, double x_tol) {
  constexpr int n = 6;
  std::array<Point6, n + 1> xs;
  std::array<double, n + 1> fs;
  SimplexOutcome out;

  xs[0] = x0;
  fs[0] = -f(x0);
  for (int i = 0; i < n; ++i) {
    xs[i + 1] = x0;
    xs[i + 1][i] += step;
    fs[i + 1] = -f(xs[i + 1]);
  }
  out.evaluations = n + 1;

  std::array<int, n + 1> idx{};
  for (int i = 0; i <= n; ++i) idx[i] = i;

  for (int iter = 0; iter < max_iters; ++iter) {
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];

    if (fs[worst] - fs[best] <= f_tol) {
      out.converged = true;
      break;
    }
    double spread = 0.0;
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j < n; ++j)
        spread = std::max(spread, std::abs(xs[idx[i]][j] - xs[best][j]));
    if (spread <= x_tol) {
      out.converged = true;
      break;
    }

    Point6 centroid{};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) centroid[j] += xs[idx[i]][j];
    }
    for (int j = 0; j < n; ++j) centroid[j] /= n;

    Point6 xr;
    for (int j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - xs[worst][j]);
    const double fr = -f(xr);
    ++out.evaluations;

    if (fr < fs[best]) {
      Point6 xe;
      for (int j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (xr[j] - centroid[j]);
      const double fe = -f(xe);
      ++out.evaluations;
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
      continue;
    }

    Point6 xc;
    const Point6& base = (fr < fs[worst]) ? xr : xs[worst];
    const double fbase = std::min(fr, fs[worst]);
    for (int j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
    const double fc = -f(xc);
    ++out.evaluations;
    if (fc < fbase) {
      xs[worst] = xc;
      fs[worst] = fc;
      continue;
    }

    for (int i = 1; i <= n; ++i) {  // shrink toward the best vertex
      for (int j = 0; j < n; ++j) xs[idx[i]][j] = xs[best][j] + 0.5 * (xs[idx[i]][j] - xs[best][j]);
      fs[idx[i]] = -f(xs[idx[i]]);
    }
    out.evaluations += n;
  }

  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  out.x = xs[best];
  out.value = -fs[best];
  return out;
}

// Radical-inverse (Halton) sequence; bases 2..13 give a low-discrepancy
// cover of the 6-torus for the coarse multi-start stage.
inline double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

inline Point6 start_point(int start_index, std::uint64_t seed) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  constexpr std::uint32_t bases[6] = {2, 3, 5, 7, 11, 13};
  SplitMix64 jitter(derive_seed(seed, static_cast<std::uint64_t>(start_index)));
  Point6 x;
  for (int d = 0; d < 6; ++d) {
    const double h = halton(static_cast<std::uint64_t>(start_index) + 1, bases[d]);
    double t = h + jitter.uniform();
    t -= std::floor(t);
    x[d] = kTwoPi * t;
  }
  return x;
}

// Closed-form route for a (numerically) pure rho. The dominant eigenvector
// is brought to Schmidt position (0, c, s, 0) by the product unitary
// dagger(basis_a) (x) sigma_x transpose(basis_b), after which i sigma_x (x) 1
// pushes all weight onto the -2 sqrt2 eigenvector pair, giving
// sqrt2 (1 + 2 c s) = sqrt2 (1 + sin theta).
inline BoundResult pure_route(const DensityMatrix& rho) {
  const HermEig<4> eig = herm_eig(rho.matrix());
  const PureState psi(normalized(eig.vectors[3]));
  const SchmidtDecomposition dec = schmidt_decompose(psi);

  CMatrix2 ua_canon;  // Rz(pi) Ry(pi) = i sigma_x
  ua_canon(0, 1) = Complex(0.0, 1.0);
  ua_canon(1, 0) = Complex(0.0, 1.0);
  const CMatrix2 ua = ua_canon * dagger(dec.basis_a);

  CMatrix2 flip;  // sigma_x
  flip(0, 1) = 1.0;
  flip(1, 0) = 1.0;
  CMatrix2 b_t;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) b_t(i, j) = dec.basis_b(j, i);
  const CMatrix2 ub = flip * b_t;

  BoundResult r;
  r.value = kSqrt2 * (1.0 + 2.0 * dec.coeff0 * dec.coeff1);
  r.best_params = ProductUnitary{euler_from_unitary(ua), euler_from_unitary(ub)};
  return r;
}

}  // namespace detail

// Multi-start derivative-free maximization of `objective` over the six
// effective parameters. Deterministic for a fixed cfg.seed: start k is a
// jittered Halton point with jitter stream derive_seed(seed, k), and the
// best-of-starts merge is an order-independent strict max (ties keep the
// lowest start index). Pure inputs (purity > 1 - 1e-9) take the closed-form
// route unless cfg.force_numeric is set.
inline BoundResult maximize_bound(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  if (cfg.num_starts < 1 || cfg.max_iters < 1 || !(cfg.f_tol > 0.0) || !(cfg.x_tol > 0.0)) {
    throw std::invalid_argument("maximize_bound: num_starts, max_iters, f_tol, x_tol must be positive");
  }

  if (!cfg.force_numeric && rho.purity() > 1.0 - 1e-9) {
    return detail::pure_route(rho);
  }

  const CMatrix4& m = rho.matrix();
  const auto f = [&m](const detail::Point6& x) {
    const CMatrix2 ua = single_qubit_unitary(EulerParams{0.0, x[0], x[1], x[2]});
    const CMatrix2 ub = single_qubit_unitary(EulerParams{0.0, x[3], x[4], x[5]});
    return detail::vertical_objective(ua, ub, m);
  };

  BoundResult best;
  best.value = -1.0;
  for (int k = 0; k < cfg.num_starts; ++k) {
    const detail::SimplexOutcome o = detail::nelder_mead_max(
        f, detail::start_point(k, cfg.seed), 0.6, cfg.max_iters, cfg.f_tol, cfg.x_tol);
    best.evaluations += o.evaluations;
    if (o.converged) ++best.starts_converged;
    if (o.value > best.value) {
      best.value = o.value;
      best.best_params = ProductUnitary{EulerParams{0.0, o.x[0], o.x[1], o.x[2]},
                                        EulerParams{0.0, o.x[3], o.x[4], o.x[5]}}
                             .canonicalized();
    }
  }
  return best;
}

}  // namespace bellbound
