#pragma once

// Cross-module property suites behind the `verify` subcommand, plus the
// seeded generators they need. Counts scale linearly with the requested
// sample budget (1000 = the documented full run).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "bellbound/bell.hpp"
#include "bellbound/entanglement.hpp"
#include "bellbound/optimizer.hpp"
#include "bellbound/parallel.hpp"
#include "bellbound/state_io.hpp"
#include "bellbound/states.hpp"
#include "bellbound/sweeps.hpp"

namespace bellbound::verify {

// ---- seeded generators ----

inline BlochVector random_bloch(SplitMix64& rng) {
  for (;;) {
    const double x = rng.normal(), y = rng.normal(), z = rng.normal();
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-6) return BlochVector(x / n, y / n, z / n);
  }
}

inline MeasurementSetting random_setting(SplitMix64& rng) {
  return MeasurementSetting{random_bloch(rng), random_bloch(rng), random_bloch(rng),
                            random_bloch(rng)};
}

inline EulerParams random_euler(SplitMix64& rng) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return EulerParams{rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 2.0 * kTwoPi),
                     rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 2.0 * kTwoPi)};
}

inline ProductUnitary random_product_unitary(SplitMix64& rng) {
  return ProductUnitary{random_euler(rng), random_euler(rng)};
}

inline CMatrix4 random_complex4(SplitMix64& rng) {
  CMatrix4 m;
  for (Complex& c : m.entries) c = Complex(rng.normal(), rng.normal());
  return m;
}

inline CMatrix4 random_hermitian4(SplitMix64& rng) {
  const CMatrix4 g = random_complex4(rng);
  return 0.5 * (g + dagger(g));
}

inline CVector2 random_qubit(SplitMix64& rng) {
  CVector2 v;
  v[0] = Complex(rng.normal(), rng.normal());
  v[1] = Complex(rng.normal(), rng.normal());
  return normalized(v);
}

// Convex mixture of up to four random product states.
inline DensityMatrix random_separable(SplitMix64& rng) {
  const std::size_t terms = 1 + static_cast<std::size_t>(rng.next_u64() % 4);
  double weights[4];
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    weights[t] = rng.uniform() + 1e-3;
    total += weights[t];
  }
  CMatrix4 rho;
  for (std::size_t t = 0; t < terms; ++t) {
    const CVector2 qa = random_qubit(rng);
    const CVector2 qb = random_qubit(rng);
    rho = rho + (weights[t] / total) * kron(outer(qa, qa), outer(qb, qb));
  }
  return DensityMatrix(rho);
}

// ---- suites ----

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::string note;     // extra per-suite statistic, e.g. the largest rhs seen
  std::string failure;  // first counterexample, empty when clean
  bool ok() const { return passed == total; }
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int samples = 1000;
  OptimizerConfig opt{};
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string dump_matrix(const CMatrix4& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < 16; ++i) {
    if (i) s += ", ";
    s += "[" + fmt(m.entries[i].real()) + ", " + fmt(m.entries[i].imag()) + "]";
  }
  return s + "]";
}

inline int scaled(int pinned, int samples) {
  const long v = std::lround(pinned * static_cast<double>(samples) / 1000.0);
  return static_cast<int>(std::max(1L, v));
}

inline std::uint64_t sample_seed(const VerifyOptions& o, int suite, int k) {
  return derive_seed(o.seed, static_cast<std::uint64_t>(suite) * 1000003ULL +
                                 static_cast<std::uint64_t>(k));
}

inline double binary_entropy(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

}  // namespace detail

inline SuiteResult suite_spectral_reconstruction(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "herm-eig-spectral-reconstruction";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 1, k));
    const CMatrix4 h = random_hermitian4(rng);
    const HermEig<4> eig = herm_eig(h);
    CMatrix4 rebuilt;
    for (std::size_t i = 0; i < 4; ++i) {
      rebuilt = rebuilt + eig.values[i] * outer(eig.vectors[i], eig.vectors[i]);
    }
    double residual = max_abs_diff(rebuilt, h);
    for (std::size_t i = 0; i < 4; ++i) {  // eigenpair residual and orthonormality
      residual = std::max(residual, max_abs_diff(h * eig.vectors[i], eig.values[i] * eig.vectors[i]));
      for (std::size_t j = 0; j < 4; ++j) {
        const double want = (i == j) ? 1.0 : 0.0;
        residual = std::max(residual, std::abs(std::abs(inner(eig.vectors[i], eig.vectors[j])) - want));
      }
    }
    if (residual <= 1e-8) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": residual " + detail::fmt(residual) +
                  ", matrix " + detail::dump_matrix(h);
    }
  }
  return r;
}

inline SuiteResult suite_trace_cyclicity(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "trace-cyclicity";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 2, k));
    const CMatrix4 a = random_complex4(rng);
    const CMatrix4 b = random_complex4(rng);
    const double diff = std::abs(trace(a * b) - trace(b * a));
    if (diff <= 1e-10) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": |Tr(AB)-Tr(BA)| = " + detail::fmt(diff);
    }
  }
  return r;
}

inline SuiteResult suite_kron_mixed_product(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "kron-mixed-product";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 3, k));
    CMatrix2 m[4];
    for (auto& mm : m) {
      for (Complex& c : mm.entries) c = Complex(rng.normal(), rng.normal());
    }
    const double diff = max_abs_diff(kron(m[0], m[1]) * kron(m[2], m[3]),
                                     kron(m[0] * m[2], m[1] * m[3]));
    if (diff <= 1e-10) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": max entry diff " + detail::fmt(diff);
    }
  }
  return r;
}

inline SuiteResult suite_lambda_grid_validity(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "lambda-grid-validity";
  r.total = detail::scaled(400, o.samples);
  for (int k = 0; k < r.total; ++k) {
    const double lambda = 4.0 * k / std::max(1, r.total - 1);
    try {
      lambda_state(lambda);
      ++r.passed;
    } catch (const std::exception& e) {
      if (r.failure.empty()) {
        r.failure = "lambda " + detail::fmt(lambda) + ": " + e.what();
      }
    }
  }
  return r;
}

inline SuiteResult suite_schmidt_global_phase(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "schmidt-global-phase";
  r.total = detail::scaled(100, o.samples);
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 5, k));
    const PureState p = random_pure(rng);
    const Complex phase = std::polar(1.0, rng.uniform(0.0, 6.283185307179586));
    const PureState q(phase * p.amplitudes());
    const double diff = std::abs(schmidt_angle(p).theta - schmidt_angle(q).theta);
    if (diff <= 1e-9) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": theta shift " + detail::fmt(diff);
    }
  }
  return r;
}

inline SuiteResult suite_schmidt_product_states(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "schmidt-product-states";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 6, k));
    const CVector2 qa = random_qubit(rng);
    const CVector2 qb = random_qubit(rng);
    CVector4 amps;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) amps[2 * i + j] = qa[i] * qb[j];
    const double theta = schmidt_angle(PureState(amps)).theta;
    if (theta <= 1e-6) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": product state got theta " + detail::fmt(theta);
    }
  }
  return r;
}

inline SuiteResult suite_tsirelson_ordering(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "tsirelson-ordering";
  r.total = o.samples;
  double max_rhs = 0.0;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 7, k));
    const MeasurementSetting s = random_setting(rng);
    const DensityMatrix rho = random_density(rng);
    const double value = std::abs(chsh_value(s, rho));
    const double rhs = tsirelson_rhs(s, rho);
    max_rhs = std::max(max_rhs, rhs);
    if (value <= rhs + 1e-8 && rhs <= kTsirelsonBound + 1e-9) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": |<W>| = " + detail::fmt(value) +
                  ", rhs = " + detail::fmt(rhs) + ", rho " + detail::dump_matrix(rho.matrix());
    }
  }
  r.note = "max rhs " + detail::fmt(max_rhs);
  return r;
}

inline SuiteResult suite_max_violation_tightness(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "max-violation-tightness";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 8, k));
    const MeasurementSetting s = random_setting(rng);
    const MaxViolation mv = max_violating_state(s);
    const DensityMatrix rho = pure_to_density(mv.state);
    const bool ceiling = mv.value <= kTsirelsonBound + 1e-9;
    const bool attained = std::abs(std::abs(chsh_value(s, rho)) - mv.value) <= 1e-9;
    const bool tight = std::abs(tsirelson_rhs(s, rho) - mv.value) <= 1e-6;
    if (ceiling && attained && tight) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": value " + detail::fmt(mv.value) +
                  ", |<W>| " + detail::fmt(std::abs(chsh_value(s, rho))) + ", rhs " +
                  detail::fmt(tsirelson_rhs(s, rho));
    }
  }
  return r;
}

inline SuiteResult suite_canonical_consistency(const VerifyOptions&) {
  SuiteResult r;
  r.name = "canonical-consistency";
  r.total = 1;
  const double setting_diff = max_abs_diff(bell_operator(canonical_setting()), canonical_W());

  const BellEigensystem sys = canonical_eigensystem();
  const HermEig<4> eig = herm_eig(canonical_W());
  const CMatrix4 p_minus = outer(sys.eta1, sys.eta1);
  const CMatrix4 p_plus = outer(sys.eta3, sys.eta3);
  const CMatrix4 p_zero = outer(sys.eta2, sys.eta2) + outer(sys.eta4, sys.eta4);
  double proj_diff = max_abs_diff(p_minus, outer(eig.vectors[0], eig.vectors[0]));
  proj_diff = std::max(proj_diff, max_abs_diff(p_plus, outer(eig.vectors[3], eig.vectors[3])));
  proj_diff = std::max(proj_diff, max_abs_diff(p_zero, outer(eig.vectors[1], eig.vectors[1]) +
                                                           outer(eig.vectors[2], eig.vectors[2])));
  double value_diff = 0.0;
  const double expected[4] = {-kTsirelsonBound, 0.0, 0.0, kTsirelsonBound};
  for (std::size_t i = 0; i < 4; ++i) {
    value_diff = std::max(value_diff, std::abs(eig.values[i] - expected[i]));
  }

  if (setting_diff <= 1e-12 && proj_diff <= 1e-9 && value_diff <= 1e-9) {
    r.passed = 1;
  } else {
    r.failure = "setting diff " + detail::fmt(setting_diff) + ", projector diff " +
                detail::fmt(proj_diff) + ", eigenvalue diff " + detail::fmt(value_diff);
  }
  return r;
}

inline SuiteResult suite_separable_classical(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "separable-chsh-classical";
  r.total = o.samples;
  double max_value = 0.0;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 10, k));
    const DensityMatrix rho = random_separable(rng);
    const MeasurementSetting s = random_setting(rng);
    const double value = std::abs(chsh_value(s, rho));
    max_value = std::max(max_value, value);
    if (value <= 2.0 + 1e-8) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": separable |<W>| = " + detail::fmt(value) +
                  ", rho " + detail::dump_matrix(rho.matrix());
    }
  }
  r.note = "max |<W>| " + detail::fmt(max_value);
  return r;
}

inline SuiteResult suite_pure_concurrence_entropy(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "pure-concurrence-entropy";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 11, k));
    const PureState p = random_pure(rng);
    const DensityMatrix rho = pure_to_density(p);
    const double theta = schmidt_angle(p).theta;
    const double c_half = std::cos(theta / 2.0);
    const double conc_diff = std::abs(concurrence(rho) - std::sin(theta));
    const double ent_diff =
        std::abs(von_neumann_entropy(rho) - detail::binary_entropy(c_half * c_half));
    if (conc_diff <= 1e-8 && ent_diff <= 1e-8) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": concurrence diff " + detail::fmt(conc_diff) +
                  ", entropy diff " + detail::fmt(ent_diff);
    }
  }
  return r;
}

inline SuiteResult suite_lu_invariance_measures(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "lu-invariance-measures";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 12, k));
    const DensityMatrix rho = random_density(rng);
    const CMatrix4 u = product_unitary(random_product_unitary(rng));
    const DensityMatrix rotated(u * rho.matrix() * dagger(u));
    double diff = std::abs(concurrence(rho) - concurrence(rotated));
    diff = std::max(diff, std::abs(von_neumann_entropy(rho) - von_neumann_entropy(rotated)));
    diff = std::max(diff, std::abs(horodecki_M(rho) - horodecki_M(rotated)));
    const double c = concurrence(rho);
    const bool in_range = c >= 0.0 && c <= 1.0 + 1e-9 &&
                          horodecki_max(rho) <= kTsirelsonBound + 1e-9;
    if (diff <= 1e-8 && in_range) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": max measure shift " + detail::fmt(diff) +
                  ", concurrence " + detail::fmt(c);
    }
  }
  return r;
}

inline SuiteResult suite_spectral_identity(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "spectral-identity";
  r.total = o.samples;
  const CMatrix4 w = canonical_W();
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 13, k));
    const ProductUnitary u = random_product_unitary(rng);
    const DensityMatrix rho = random_density(rng);
    const CMatrix4 um = product_unitary(u);
    const double via_trace = std::abs(expectation(dagger(um) * w * um, rho.matrix()));
    const double diff = std::abs(objective(u, rho) - via_trace);
    if (diff <= 1e-10) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": |objective - |Tr(U^dag W U rho)|| = " +
                  detail::fmt(diff);
    }
  }
  return r;
}

inline SuiteResult suite_alpha_shift_invariance(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "alpha-shift-invariance";
  r.total = o.samples;
  for (int k = 0; k < r.total; ++k) {
    SplitMix64 rng(detail::sample_seed(o, 14, k));
    ProductUnitary u = random_product_unitary(rng);
    const DensityMatrix rho = random_density(rng);
    const double base = objective(u, rho);
    u.a_params.alpha += rng.uniform(-10.0, 10.0);
    u.b_params.alpha += rng.uniform(-10.0, 10.0);
    const double diff = std::abs(objective(u, rho) - base);
    if (diff <= 1e-12) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": objective moved by " + detail::fmt(diff);
    }
  }
  return r;
}

inline SuiteResult suite_bound_dominance(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "bound-dominance-ceiling";
  r.total = detail::scaled(20, o.samples);
  std::vector<double> bounds(r.total), hmax(r.total);
  std::vector<CMatrix4> mats(r.total);
  parallel_for(static_cast<std::size_t>(r.total), [&](std::size_t k) {
    SplitMix64 rng(detail::sample_seed(o, 15, static_cast<int>(k)));
    const DensityMatrix rho = random_density(rng);
    mats[k] = rho.matrix();
    bounds[k] = maximize_bound(rho, o.opt).value;
    hmax[k] = horodecki_max(rho);
  });
  for (int k = 0; k < r.total; ++k) {
    if (bounds[k] >= 0.0 && bounds[k] <= hmax[k] + 1e-6 && hmax[k] <= kTsirelsonBound + 1e-6) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": bound " + detail::fmt(bounds[k]) +
                  ", horodecki_max " + detail::fmt(hmax[k]) + ", rho " + detail::dump_matrix(mats[k]);
    }
  }
  return r;
}

inline SuiteResult suite_bound_lu_invariance(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "bound-lu-invariance";
  r.total = detail::scaled(8, o.samples);
  std::vector<double> diffs(r.total);
  parallel_for(static_cast<std::size_t>(r.total), [&](std::size_t k) {
    SplitMix64 rng(detail::sample_seed(o, 16, static_cast<int>(k)));
    const DensityMatrix rho = random_density(rng);
    const CMatrix4 u = product_unitary(random_product_unitary(rng));
    const DensityMatrix rotated(u * rho.matrix() * dagger(u));
    diffs[k] = std::abs(maximize_bound(rho, o.opt).value - maximize_bound(rotated, o.opt).value);
  });
  for (int k = 0; k < r.total; ++k) {
    if (diffs[k] <= 2e-4) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": bound shifted by " + detail::fmt(diffs[k]);
    }
  }
  return r;
}

inline SuiteResult suite_analytic_numeric_agreement(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "analytic-numeric-agreement";
  const int n_theta = detail::scaled(50, o.samples);
  constexpr int n_chi = 5;
  r.total = n_theta * n_chi;
  std::vector<double> diffs(static_cast<std::size_t>(r.total));
  OptimizerConfig cfg = o.opt;
  cfg.force_numeric = true;

  parallel_for(diffs.size(), [&](std::size_t idx) {
    constexpr double kPi = 3.14159265358979323846;
    const int i = static_cast<int>(idx) / n_chi;
    const int j = static_cast<int>(idx) % n_chi;
    const double theta = kPi * (i + 0.5) / n_theta;
    const double chi = 2.0 * kPi * j / n_chi;
    const DensityMatrix rho = pure_to_density(schmidt_to_pure(SchmidtForm(theta, chi)));
    diffs[idx] = std::abs(maximize_bound(rho, cfg).value - pure_bound_analytic(theta));
  });
  double worst = 0.0;
  for (std::size_t idx = 0; idx < diffs.size(); ++idx) {
    worst = std::max(worst, diffs[idx]);
    if (diffs[idx] <= 1e-4) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "grid point " + std::to_string(idx) + ": |numeric - analytic| = " +
                  detail::fmt(diffs[idx]);
    }
  }
  r.note = "max |numeric - analytic| " + detail::fmt(worst);
  return r;
}

inline SuiteResult suite_bound_ceiling(const VerifyOptions& o) {
  SuiteResult r;
  r.name = "tsirelson-ceiling-bound";
  r.total = detail::scaled(20, o.samples);
  std::vector<double> values(r.total);
  parallel_for(static_cast<std::size_t>(r.total), [&](std::size_t k) {
    SplitMix64 rng(detail::sample_seed(o, 17, static_cast<int>(k)));
    values[k] = maximize_bound(random_density(rng), o.opt).value;
  });
  for (int k = 0; k < r.total; ++k) {
    if (values[k] <= kTsirelsonBound + 1e-9) {
      ++r.passed;
    } else if (r.failure.empty()) {
      r.failure = "sample " + std::to_string(k) + ": bound " + detail::fmt(values[k]);
    }
  }
  return r;
}

inline std::vector<SuiteResult> run_all_suites(const VerifyOptions& o) {
  return {
      suite_spectral_reconstruction(o),
      suite_trace_cyclicity(o),
      suite_kron_mixed_product(o),
      suite_lambda_grid_validity(o),
      suite_schmidt_global_phase(o),
      suite_schmidt_product_states(o),
      suite_tsirelson_ordering(o),
      suite_max_violation_tightness(o),
      suite_canonical_consistency(o),
      suite_separable_classical(o),
      suite_pure_concurrence_entropy(o),
      suite_lu_invariance_measures(o),
      suite_spectral_identity(o),
      suite_alpha_shift_invariance(o),
      suite_bound_dominance(o),
      suite_bound_lu_invariance(o),
      suite_analytic_numeric_agreement(o),
      suite_bound_ceiling(o),
  };
}

}  // namespace bellbound::verify
