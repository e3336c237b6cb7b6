#pragma once

// Shared fixtures for the test suites: Pauli matrices, canonical vectors,
// and frozen reference constants.

#include <cmath>

#include "bellbound/bell.hpp"
#include "bellbound/linalg.hpp"

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;
using bellbound::kSqrt2;

inline bellbound::CMatrix2 pauli_x() {
  bellbound::CMatrix2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline bellbound::CMatrix2 pauli_y() {
  bellbound::CMatrix2 m;
  m(0, 1) = bellbound::Complex(0.0, -1.0);
  m(1, 0) = bellbound::Complex(0.0, 1.0);
  return m;
}

inline bellbound::CMatrix2 pauli_z() {
  bellbound::CMatrix2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline bellbound::CVector4 bell_phi_plus() {  // (|00> + |11>)/sqrt2
  bellbound::CVector4 v;
  v[0] = 1.0 / kSqrt2;
  v[3] = 1.0 / kSqrt2;
  return v;
}

inline bellbound::CVector4 eta3_vector() {  // (|10> - |01>)/sqrt2
  bellbound::CVector4 v;
  v[1] = -1.0 / kSqrt2;
  v[2] = 1.0 / kSqrt2;
  return v;
}

}  // namespace testutil
