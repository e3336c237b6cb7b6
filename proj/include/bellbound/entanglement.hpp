#pragma once

// Entanglement quantifiers: von Neumann entropy of the reduced state,
// Wootters concurrence, and the Horodecki correlation-matrix criterion,
// which gives the CHSH maximum over unrestricted measurement settings.

#include <algorithm>
#include <cmath>

#include "bellbound/bell.hpp"
#include "bellbound/linalg.hpp"
#include "bellbound/states.hpp"

namespace bellbound {

// Trace out qubit b: r(i,j) = sum_k rho(2i+k, 2j+k).
inline CMatrix2 partial_trace_b(const DensityMatrix& rho) {
  const CMatrix4& m = rho.matrix();
  CMatrix2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) r(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return r;
}

// -sum p log2 p over the reduced-state spectrum, with 0 log 0 = 0. Equals the
// entanglement entropy when rho is a pure global state; in [0, 1].
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const HermEig<2> eig = herm_eig(partial_trace_b(rho));
  double s = 0.0;
  for (double p : eig.values) {
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

namespace detail {

inline CMatrix4 spin_flip() {  // sigma_y (x) sigma_y, real in this basis
  CMatrix4 f;
  f(0, 3) = -1.0;
  f(1, 2) = 1.0;
  f(2, 1) = 1.0;
  f(3, 0) = -1.0;
  return f;
}

inline CMatrix4 matrix_sqrt_psd(const CMatrix4& m) {
  const HermEig<4> eig = herm_eig(m);
  CMatrix4 r;
  for (std::size_t k = 0; k < 4; ++k) {
    const double lam = std::max(eig.values[k], 0.0);
    r = r + std::sqrt(lam) * outer(eig.vectors[k], eig.vectors[k]);
  }
  return r;
}

}  // namespace detail

// Wootters concurrence C = max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4))
// with mu the descending eigenvalues of rho (sy x sy) rho* (sy x sy). They are
// computed from the Hermitian similar matrix sqrt(rho) F rho* F sqrt(rho).
// Eigenvalues within rounding distance of zero (relative to the largest one)
// are floored to 0 before the square roots; sqrt would otherwise amplify
// O(eps) residue on an exact zero into O(1e-8).
inline double concurrence(const DensityMatrix& rho) {
  const CMatrix4 f = detail::spin_flip();
  const CMatrix4 root = detail::matrix_sqrt_psd(rho.matrix());
  const CMatrix4 s = root * f * conjugated(rho.matrix()) * f * root;
  HermEig<4> eig = herm_eig(s);

  const double floor = std::max(eig.values[3], 0.0) * 1e-13;
  double mu[4];
  for (std::size_t k = 0; k < 4; ++k) {
    const double v = eig.values[3 - k];  // descending
    mu[k] = (v <= floor) ? 0.0 : std::sqrt(v);
  }
  return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

// 3x3 spin-correlation matrix T(i,j) = Tr(rho sigma_i (x) sigma_j), Pauli
// order (x, y, z).
inline CMatrix3 correlation_matrix(const DensityMatrix& rho) {
  const std::array<CMatrix2, 3> pauli = {
      observable(BlochVector(1.0, 0.0, 0.0)),
      observable(BlochVector(0.0, 1.0, 0.0)),
      observable(BlochVector(0.0, 0.0, 1.0)),
  };
  CMatrix3 t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      t(i, j) = expectation(kron(pauli[i], pauli[j]), rho.matrix()).real();
  return t;
}

// Sum of the two largest eigenvalues of T^T T. The CHSH maximum over all
// (not necessarily vertical) settings is 2 sqrt(M); violation iff M > 1.
inline double horodecki_M(const DensityMatrix& rho) {
  const CMatrix3 t = correlation_matrix(rho);
  const CMatrix3 tt = dagger(t) * t;  // real symmetric
  const HermEig<3> eig = herm_eig(tt);
  return eig.values[1] + eig.values[2];
}

inline double horodecki_max(const DensityMatrix& rho) {
  return 2.0 * std::sqrt(std::max(horodecki_M(rho), 0.0));
}

struct EntanglementReport {
  double entropy;
  double concurrence;
  double horodecki_M;
  double horodecki_max;
};

inline EntanglementReport analyze_entanglement(const DensityMatrix& rho) {
  const double m = horodecki_M(rho);
  return EntanglementReport{von_neumann_entropy(rho), bellbound::concurrence(rho), m,
                            2.0 * std::sqrt(std::max(m, 0.0))};
}

}  // namespace bellbound
