#pragma once

// Two-qubit pure and mixed states. Basis order is |00>, |01>, |10>, |11>
// with qubit a as the first tensor factor; density matrices are row-major
// in the same basis. All state types validate their invariants on
// construction and are immutable afterwards.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "bellbound/linalg.hpp"
#include "bellbound/random.hpp"

namespace bellbound {

struct InvalidStateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LambdaOutOfRangeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool all_finite(const CVector4& v) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

inline bool all_finite(const CMatrix4& m) {
  for (const Complex& c : m.entries) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

}  // namespace detail

class PureState {
 public:
  explicit PureState(const CVector4& amplitudes) : amps_(amplitudes) {
    if (!detail::all_finite(amps_)) throw InvalidStateError("pure state: non-finite amplitude");
    const double n = norm(amps_);
    if (std::abs(n * n - 1.0) > kStateNormTol) {
      throw InvalidStateError("pure state: squared norm is " + std::to_string(n * n) +
                              " (must be 1 within " + std::to_string(kStateNormTol) + ")");
    }
  }

  const CVector4& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

 private:
  CVector4 amps_;
};

// Canonical pure-state parameters: cos(theta/2)|01> + e^{i chi} sin(theta/2)|10>.
// theta in [0, pi]; chi is folded into [0, 2 pi).
struct SchmidtForm {
  double theta;
  double chi;

  SchmidtForm(double theta_in, double chi_in) : theta(theta_in), chi(chi_in) {
    if (!std::isfinite(theta) || !std::isfinite(chi)) {
      throw InvalidStateError("schmidt form: non-finite angle");
    }
    constexpr double kPi = 3.14159265358979323846;
    if (theta < 0.0 || theta > kPi) {
      throw InvalidStateError("schmidt form: theta = " + std::to_string(theta) +
                              " outside [0, pi]");
    }
    chi = std::fmod(chi, 2.0 * kPi);
    if (chi < 0.0) chi += 2.0 * kPi;
  }
};

class DensityMatrix {
 public:
  explicit DensityMatrix(const CMatrix4& m) : mat_(m) {
    if (!detail::all_finite(mat_)) throw InvalidStateError("density matrix: non-finite entry");
    const double defect = hermiticity_defect(mat_);
    if (defect > kHermiticityTol) {
      throw InvalidStateError("density matrix: not Hermitian (max |m - dagger(m)| = " +
                              std::to_string(defect) + ")");
    }
    const Complex tr = trace(mat_);
    if (std::abs(tr - Complex(1.0, 0.0)) > kHermiticityTol) {
      throw InvalidStateError("density matrix: trace is " + std::to_string(tr.real()) +
                              (tr.imag() != 0.0 ? " + " + std::to_string(tr.imag()) + "i" : "") +
                              " (must be 1)");
    }
    const HermEig<4> eig = herm_eig(mat_);
    if (eig.values[0] < kPsdFloor) {
      throw InvalidStateError("density matrix: not positive semidefinite (min eigenvalue = " +
                              std::to_string(eig.values[0]) + ")");
    }
  }

  const CMatrix4& matrix() const { return mat_; }

  // Tr(rho^2); 1 for pure states.
  double purity() const {
    double s = 0.0;
    for (const Complex& c : mat_.entries) s += std::norm(c);
    return s;
  }

 private:
  CMatrix4 mat_;
};

// Single-parameter mixed family (1/9) [[1,0,0,0],[0,4,l,0],[0,l,4,0],[0,0,0,0]].
struct LambdaFamily {
  double lambda;

  explicit LambdaFamily(double lambda_in) : lambda(lambda_in) {
    if (!(lambda >= 0.0 && lambda <= 4.0)) {
      throw LambdaOutOfRangeError("lambda = " + std::to_string(lambda_in) +
                                  " outside [0, 4]; the state would not be positive");
    }
  }
};

inline DensityMatrix lambda_state(const LambdaFamily& f) {
  CMatrix4 m;
  m(0, 0) = 1.0 / 9.0;
  m(1, 1) = 4.0 / 9.0;
  m(2, 2) = 4.0 / 9.0;
  m(1, 2) = f.lambda / 9.0;
  m(2, 1) = f.lambda / 9.0;
  return DensityMatrix(m);
}

inline DensityMatrix lambda_state(double lambda) { return lambda_state(LambdaFamily(lambda)); }

inline PureState schmidt_to_pure(const SchmidtForm& s) {
  CVector4 v;
  v[1] = Complex(std::cos(s.theta / 2.0), 0.0);
  v[2] = std::polar(std::sin(s.theta / 2.0), s.chi);
  return PureState(v);
}

inline DensityMatrix pure_to_density(const PureState& p) {
  return DensityMatrix(outer(p.amplitudes(), p.amplitudes()));
}

// Schmidt decomposition of the 2x2 amplitude matrix psi(i,j) = amps[2i+j]:
// psi = basis_a . diag(coeff0, coeff1) . dagger(basis_b), coeff0 >= coeff1 >= 0.
// Columns of basis_a / basis_b are the local Schmidt bases, so
// amps = coeff0 a0 (x) conj(b0) + coeff1 a1 (x) conj(b1).
struct SchmidtDecomposition {
  double coeff0;
  double coeff1;
  CMatrix2 basis_a;
  CMatrix2 basis_b;
};

inline SchmidtDecomposition schmidt_decompose(const PureState& p) {
  CMatrix2 psi;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) psi(i, j) = p[2 * i + j];

  const CMatrix2 h = dagger(psi) * psi;  // Hermitian, PSD, trace 1
  const HermEig<2> eig = herm_eig(h);

  SchmidtDecomposition d;
  d.coeff0 = std::sqrt(std::max(eig.values[1], 0.0));
  d.coeff1 = std::sqrt(std::max(eig.values[0], 0.0));
  const CVector2 b0 = eig.vectors[1];
  const CVector2 b1 = eig.vectors[0];
  for (std::size_t i = 0; i < 2; ++i) {
    d.basis_b(i, 0) = b0[i];
    d.basis_b(i, 1) = b1[i];
  }

  const CVector2 a0 = normalized(psi * b0);  // coeff0 >= 1/sqrt(2), always safe
  CVector2 a1;
  if (d.coeff1 > 1e-12) {
    a1 = psi * b1;
    for (std::size_t i = 0; i < 2; ++i) a1[i] /= d.coeff1;
  } else {
    a1[0] = -std::conj(a0[1]);  // orthonormal completion for product states
    a1[1] = std::conj(a0[0]);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    d.basis_a(i, 0) = a0[i];
    d.basis_a(i, 1) = a1[i];
  }
  return d;
}

// Canonical Schmidt angle: theta in [0, pi/2] (larger coefficient on cos),
// chi = 0 since the relative phase is removable by local unitaries.
inline SchmidtForm schmidt_angle(const PureState& p) {
  const SchmidtDecomposition d = schmidt_decompose(p);
  return SchmidtForm(2.0 * std::atan2(d.coeff1, d.coeff0), 0.0);
}

inline PureState random_pure(SplitMix64& rng) {
  CVector4 v;
  for (std::size_t i = 0; i < 4; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return PureState(normalized(v));
}

inline PureState random_pure(std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_pure(rng);
}

// rho = G dagger(G) / Tr(G dagger(G)) for a standard-normal complex G.
inline DensityMatrix random_density(SplitMix64& rng) {
  CMatrix4 g;
  for (Complex& c : g.entries) c = Complex(rng.normal(), rng.normal());
  CMatrix4 rho = g * dagger(g);
  const double tr = trace(rho).real();
  rho = (1.0 / tr) * rho;
  return DensityMatrix(rho);
}

inline DensityMatrix random_density(std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_density(rng);
}

}  // namespace bellbound
