#pragma once

// Fixed-size complex vectors and matrices (dimensions 2..4) with just enough
// algebra for two-qubit work, plus a cyclic-Jacobi Hermitian eigensolver.
// Dimensions are template parameters, so size mismatches fail at compile time.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bellbound {

using Complex = std::complex<double>;

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kTsirelsonBound = 2.0 * kSqrt2;

// Shared tolerances.
inline constexpr double kHermiticityTol = 1e-10;    // entrywise |m - dagger(m)|
inline constexpr double kEigResidualTol = 1e-9;     // |m v - lambda v| per eigenpair
inline constexpr double kJacobiOffDiagTol = 1e-12;  // off-diagonal Frobenius norm at convergence
inline constexpr double kStateNormTol = 1e-10;
inline constexpr double kPsdFloor = -1e-10;         // smallest tolerated density-matrix eigenvalue

struct NotHermitianError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <std::size_t N>
struct CVector {
  std::array<Complex, N> entries{};

  Complex& operator[](std::size_t i) { return entries[i]; }
  const Complex& operator[](std::size_t i) const { return entries[i]; }
  static constexpr std::size_t size() { return N; }
};

template <std::size_t N>
struct CMatrix {
  std::array<Complex, N * N> entries{};

  Complex& operator()(std::size_t i, std::size_t j) { return entries[i * N + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries[i * N + j]; }
  static constexpr std::size_t dim() { return N; }

  static CMatrix identity() {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = Complex(1.0, 0.0);
    return m;
  }
};

using CVector2 = CVector<2>;
using CVector3 = CVector<3>;
using CVector4 = CVector<4>;
using CMatrix2 = CMatrix<2>;
using CMatrix3 = CMatrix<3>;
using CMatrix4 = CMatrix<4>;

// ---- vector algebra ----

template <std::size_t N>
inline CVector<N> operator+(const CVector<N>& a, const CVector<N>& b) {
  CVector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
inline CVector<N> operator-(const CVector<N>& a, const CVector<N>& b) {
  CVector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
inline CVector<N> operator*(const Complex& c, const CVector<N>& v) {
  CVector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = c * v[i];
  return r;
}

template <std::size_t N>
inline CVector<N> operator*(double c, const CVector<N>& v) {
  return Complex(c, 0.0) * v;
}

// <u|v>, conjugate-linear in the first argument.
template <std::size_t N>
inline Complex inner(const CVector<N>& u, const CVector<N>& v) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < N; ++i) s += std::conj(u[i]) * v[i];
  return s;
}

template <std::size_t N>
inline double norm(const CVector<N>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::norm(v[i]);
  return std::sqrt(s);
}

template <std::size_t N>
inline CVector<N> normalized(const CVector<N>& v) {
  const double n = norm(v);
  CVector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = v[i] / n;
  return r;
}

// ---- matrix algebra ----

template <std::size_t N>
inline CMatrix<N> operator+(const CMatrix<N>& a, const CMatrix<N>& b) {
  CMatrix<N> r;
  for (std::size_t i = 0; i < N * N; ++i) r.entries[i] = a.entries[i] + b.entries[i];
  return r;
}

template <std::size_t N>
inline CMatrix<N> operator-(const CMatrix<N>& a, const CMatrix<N>& b) {
  CMatrix<N> r;
  for (std::size_t i = 0; i < N * N; ++i) r.entries[i] = a.entries[i] - b.entries[i];
  return r;
}

template <std::size_t N>
inline CMatrix<N> operator*(const Complex& c, const CMatrix<N>& m) {
  CMatrix<N> r;
  for (std::size_t i = 0; i < N * N; ++i) r.entries[i] = c * m.entries[i];
  return r;
}

template <std::size_t N>
inline CMatrix<N> operator*(double c, const CMatrix<N>& m) {
  return Complex(c, 0.0) * m;
}

template <std::size_t N>
inline CMatrix<N> operator*(const CMatrix<N>& a, const CMatrix<N>& b) {
  CMatrix<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <std::size_t N>
inline CVector<N> operator*(const CMatrix<N>& m, const CVector<N>& v) {
  CVector<N> r;
  for (std::size_t i = 0; i < N; ++i) {
    Complex s(0.0, 0.0);
    for (std::size_t j = 0; j < N; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

template <std::size_t N>
inline CVector<N> mat_apply(const CMatrix<N>& m, const CVector<N>& v) {
  return m * v;
}

template <std::size_t N>
inline CMatrix<N> mat_mul(const CMatrix<N>& a, const CMatrix<N>& b) {
  return a * b;
}

template <std::size_t N>
inline CMatrix<N> dagger(const CMatrix<N>& m) {
  CMatrix<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(m(j, i));
  return r;
}

// Entrywise complex conjugate (no transpose).
template <std::size_t N>
inline CMatrix<N> conjugated(const CMatrix<N>& m) {
  CMatrix<N> r;
  for (std::size_t i = 0; i < N * N; ++i) r.entries[i] = std::conj(m.entries[i]);
  return r;
}

template <std::size_t N>
inline Complex trace(const CMatrix<N>& m) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < N; ++i) s += m(i, i);
  return s;
}

// |u><v|
template <std::size_t N>
inline CMatrix<N> outer(const CVector<N>& u, const CVector<N>& v) {
  CMatrix<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = u[i] * std::conj(v[j]);
  return r;
}

// Tr(m rho)
template <std::size_t N>
inline Complex expectation(const CMatrix<N>& m, const CMatrix<N>& rho) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) s += m(i, j) * rho(j, i);
  return s;
}

// (kron(a,b))[A i + k][A j + l] = a(i,j) b(k,l) for b of dimension A.
template <std::size_t N, std::size_t M>
inline CMatrix<N * M> kron(const CMatrix<N>& a, const CMatrix<M>& b) {
  CMatrix<N * M> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < M; ++k)
        for (std::size_t l = 0; l < M; ++l) r(M * i + k, M * j + l) = a(i, j) * b(k, l);
  return r;
}

template <std::size_t N>
inline double max_abs_diff(const CMatrix<N>& a, const CMatrix<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
  return m;
}

template <std::size_t N>
inline double max_abs_diff(const CVector<N>& a, const CVector<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <std::size_t N>
inline double hermiticity_defect(const CMatrix<N>& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

// ---- Hermitian eigensolver ----

template <std::size_t N>
struct HermEig {
  std::array<double, N> values{};          // ascending
  std::array<CVector<N>, N> vectors{};     // orthonormal; vectors[k] pairs with values[k]
};

namespace detail {

template <std::size_t N>
inline double offdiag_norm(const CMatrix<N>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations,
// iterated until the off-diagonal Frobenius norm drops below
// kJacobiOffDiagTol. Eigenvalues come back ascending. The matrix is
// symmetrised first so rounding-level asymmetry cannot bias the sweeps;
// anything beyond kHermiticityTol is rejected.
template <std::size_t N>
inline HermEig<N> herm_eig(const CMatrix<N>& m) {
  const double defect = hermiticity_defect(m);
  if (defect > kHermiticityTol) {
    throw NotHermitianError("herm_eig: matrix is not Hermitian (max |m - dagger(m)| = " +
                            std::to_string(defect) + ")");
  }

  CMatrix<N> a;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  CMatrix<N> v = CMatrix<N>::identity();

  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps && detail::offdiag_norm(a) > kJacobiOffDiagTol; ++sweep) {
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const Complex phase = apq / mag;
        const double theta =
            0.5 * std::atan2(2.0 * mag, std::real(a(p, p)) - std::real(a(q, q)));
        const double c = std::cos(theta);
        const Complex sp = std::sin(theta) * phase;

        // a <- dagger(R) a R with R(p,p)=R(q,q)=c, R(q,p)=conj(sp), R(p,q)=-sp
        for (std::size_t i = 0; i < N; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + std::conj(sp) * aiq;
          a(i, q) = -sp * aip + c * aiq;
        }
        for (std::size_t j = 0; j < N; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + sp * aqj;
          a(q, j) = -std::conj(sp) * apj + c * aqj;
        }
        for (std::size_t i = 0; i < N; ++i) {
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + std::conj(sp) * viq;
          v(i, q) = -sp * vip + c * viq;
        }
      }
    }
  }

  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i + 1 < N; ++i) {  // insertion sort, stable
    for (std::size_t j = i + 1; j > 0; --j) {
      if (std::real(a(order[j], order[j])) < std::real(a(order[j - 1], order[j - 1]))) {
        std::swap(order[j], order[j - 1]);
      }
    }
  }

  HermEig<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = std::real(a(order[k], order[k]));
    for (std::size_t i = 0; i < N; ++i) out.vectors[k][i] = v(i, order[k]);
  }
  return out;
}

}  // namespace bellbound
