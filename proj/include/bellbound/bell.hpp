#pragma once

// CHSH Bell operator machinery: spin observables from Bloch vectors, the
// operator W = A(x)(B+B') + A'(x)(B-B'), the canonical anti-commuting
// (vertical) measurement scheme with its closed-form eigensystem, the
// state-dependent Tsirelson bound, and the state that saturates it.

#include <cmath>
#include <stdexcept>
#include <string>

#include "bellbound/linalg.hpp"
#include "bellbound/states.hpp"

namespace bellbound {

struct NotUnitVectorError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BlochVector {
  double x;
  double y;
  double z;

  BlochVector(double x_in, double y_in, double z_in) : x(x_in), y(y_in), z(z_in) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw NotUnitVectorError("bloch vector: non-finite component");
    }
    const double n2 = x * x + y * y + z * z;
    if (std::abs(n2 - 1.0) > kStateNormTol) {
      throw NotUnitVectorError("bloch vector: squared norm is " + std::to_string(n2) +
                               " (must be 1)");
    }
  }

  static BlochVector normalized(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    return BlochVector(x / n, y / n, z / n);
  }

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
};

struct MeasurementSetting {
  BlochVector a;
  BlochVector a_prime;
  BlochVector b;
  BlochVector b_prime;

  // Both parties measure along orthogonal (anti-commuting) directions.
  bool is_vertical(double tol = kStateNormTol) const {
    return std::abs(a.dot(a_prime)) <= tol && std::abs(b.dot(b_prime)) <= tol;
  }
};

// A = v . sigma: Hermitian, traceless, eigenvalues +/-1.
inline CMatrix2 observable(const BlochVector& v) {
  CMatrix2 m;
  m(0, 0) = Complex(v.z, 0.0);
  m(0, 1) = Complex(v.x, -v.y);
  m(1, 0) = Complex(v.x, v.y);
  m(1, 1) = Complex(-v.z, 0.0);
  return m;
}

inline CMatrix4 bell_operator(const MeasurementSetting& s) {
  const CMatrix2 a = observable(s.a);
  const CMatrix2 ap = observable(s.a_prime);
  const CMatrix2 b = observable(s.b);
  const CMatrix2 bp = observable(s.b_prime);
  return kron(a, b + bp) + kron(ap, b - bp);
}

// The vertical scheme A = sigma_z, A' = sigma_x, B = -(sigma_z+sigma_x)/sqrt2,
// B' = (sigma_x-sigma_z)/sqrt2, for which W takes the fixed matrix below.
inline MeasurementSetting canonical_setting() {
  const double r = 1.0 / kSqrt2;
  return MeasurementSetting{BlochVector(0.0, 0.0, 1.0), BlochVector(1.0, 0.0, 0.0),
                            BlochVector(-r, 0.0, -r), BlochVector(r, 0.0, -r)};
}

// W for the canonical setting, as exact constants: -sqrt2 (sz(x)sz + sx(x)sx).
inline CMatrix4 canonical_W() {
  CMatrix4 w;
  const double s = kSqrt2;
  w(0, 0) = -s;
  w(0, 3) = -s;
  w(1, 1) = s;
  w(1, 2) = -s;
  w(2, 1) = -s;
  w(2, 2) = s;
  w(3, 0) = -s;
  w(3, 3) = -s;
  return w;
}

// Eigensystem of the canonical W. eigenvalues[k] pairs with eta(k+1):
// eta1 <-> -2 sqrt2, eta2 <-> 0, eta3 <-> +2 sqrt2, eta4 <-> 0.
struct BellEigensystem {
  std::array<double, 4> eigenvalues;
  CVector4 eta1;
  CVector4 eta2;
  CVector4 eta3;
  CVector4 eta4;
};

inline BellEigensystem canonical_eigensystem() {
  const double r = 1.0 / kSqrt2;
  BellEigensystem e;
  e.eigenvalues = {-kTsirelsonBound, 0.0, kTsirelsonBound, 0.0};
  e.eta1[0] = r;
  e.eta1[3] = r;
  e.eta2[0] = -r;
  e.eta2[3] = r;
  e.eta3[1] = -r;
  e.eta3[2] = r;
  e.eta4[1] = r;
  e.eta4[2] = r;
  return e;
}

// <W>_rho. Real for Hermitian W and a valid density matrix.
inline double chsh_value(const MeasurementSetting& s, const DensityMatrix& rho) {
  return expectation(bell_operator(s), rho.matrix()).real();
}

// State-dependent quantum ceiling sqrt(4 + |<[A,A'](x)[B,B']>_rho|) on |<W>|.
inline double tsirelson_rhs(const MeasurementSetting& s, const DensityMatrix& rho) {
  const CMatrix2 a = observable(s.a);
  const CMatrix2 ap = observable(s.a_prime);
  const CMatrix2 b = observable(s.b);
  const CMatrix2 bp = observable(s.b_prime);
  const CMatrix4 comm = kron(a * ap - ap * a, b * bp - bp * b);
  return std::sqrt(4.0 + std::abs(expectation(comm, rho.matrix())));
}

struct MaxViolation {
  PureState state;
  double value;  // max over all states of |<W>|, attained by `state`
};

// Eigenvector of bell_operator(s) with the largest |eigenvalue|, and that
// |eigenvalue|. When +/- branches tie (they do for vertical settings) the
// positive branch is returned; the first nonzero component is made real
// positive so the output is reproducible.
inline MaxViolation max_violating_state(const MeasurementSetting& s) {
  const HermEig<4> eig = herm_eig(bell_operator(s));
  const double neg = -eig.values[0];
  const double pos = eig.values[3];
  const bool take_positive = pos >= neg - 1e-9;
  CVector4 v = eig.vectors[take_positive ? 3 : 0];

  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(v[i]) > 1e-8) {
      v = (std::conj(v[i]) / std::abs(v[i])) * v;
      break;
    }
  }
  return MaxViolation{PureState(normalized(v)), take_positive ? pos : neg};
}

}  // namespace bellbound
