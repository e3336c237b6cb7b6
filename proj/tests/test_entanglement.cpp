#include <catch2/catch_amalgamated.hpp>

#include "bellbound/entanglement.hpp"
#include "bellbound/verify.hpp"
#include "helpers.hpp"

using namespace bellbound;
using testutil::kPi;

namespace {

double binary_entropy(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

// X-state closed form: C = 2 max(0, |rho12| - sqrt(rho00 rho33)).
double x_state_concurrence(const CMatrix4& m) {
  const double inner_term = std::abs(m(1, 2)) - std::sqrt(m(0, 0).real() * m(3, 3).real());
  const double outer_term = std::abs(m(0, 3)) - std::sqrt(m(1, 1).real() * m(2, 2).real());
  return 2.0 * std::max({0.0, inner_term, outer_term});
}

}  // namespace

TEST_CASE("partial_trace_b") {
  const DensityMatrix bell = pure_to_density(PureState(testutil::bell_phi_plus()));
  const CMatrix2 reduced = partial_trace_b(bell);
  CHECK(max_abs_diff(reduced, 0.5 * CMatrix2::identity()) <= 1e-15);

  CMatrix4 corner;
  corner(0, 0) = 1.0;
  const CMatrix2 product = partial_trace_b(DensityMatrix(corner));
  CHECK(product(0, 0).real() == Catch::Approx(1.0));
  CHECK(std::abs(product(1, 1)) == 0.0);

  for (double lam : {0.0, 1.3, 2.7, 4.0}) {
    const CMatrix2 r = partial_trace_b(lambda_state(lam));
    CHECK(r(0, 0).real() == Catch::Approx(5.0 / 9.0).margin(1e-12));
    CHECK(r(1, 1).real() == Catch::Approx(4.0 / 9.0).margin(1e-12));
    CHECK(std::abs(r(0, 1)) <= 1e-15);
  }
}

TEST_CASE("von_neumann_entropy pure-state anchors") {
  CHECK(von_neumann_entropy(pure_to_density(schmidt_to_pure(SchmidtForm(kPi / 2.0, 0.0)))) ==
        Catch::Approx(1.0).margin(1e-10));
  CHECK(von_neumann_entropy(pure_to_density(schmidt_to_pure(SchmidtForm(0.0, 0.0)))) ==
        Catch::Approx(0.0).margin(1e-12));

  const double threshold_theta = std::asin(kSqrt2 - 1.0);
  const double at_threshold =
      von_neumann_entropy(pure_to_density(schmidt_to_pure(SchmidtForm(threshold_theta, 0.0))));
  CHECK(at_threshold == Catch::Approx(0.2644).margin(1e-3));
  const double c2 = std::cos(threshold_theta / 2.0) * std::cos(threshold_theta / 2.0);
  CHECK(at_threshold == Catch::Approx(binary_entropy(c2)).margin(1e-9));
}

TEST_CASE("concurrence anchors") {
  CHECK(concurrence(pure_to_density(PureState(testutil::bell_phi_plus()))) ==
        Catch::Approx(1.0).margin(1e-10));
  CHECK(concurrence(DensityMatrix(0.25 * CMatrix4::identity())) == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("concurrence of the lambda family is 2 lambda / 9") {
  for (int k = 0; k <= 40; ++k) {
    const double lam = 4.0 * k / 40.0;
    const DensityMatrix rho = lambda_state(lam);
    CHECK(concurrence(rho) == Catch::Approx(2.0 * lam / 9.0).margin(1e-9));
    CHECK(concurrence(rho) == Catch::Approx(x_state_concurrence(rho.matrix())).margin(1e-9));
  }
  CHECK(concurrence(lambda_state(2.7)) == Catch::Approx(0.6).margin(1e-9));
}

TEST_CASE("concurrence of pure states equals sin theta") {
  for (int k = 0; k <= 30; ++k) {
    const double theta = kPi * k / 30.0;
    for (double chi : {0.0, 2.0}) {
      CHECK(concurrence(pure_to_density(schmidt_to_pure(SchmidtForm(theta, chi)))) ==
            Catch::Approx(std::sin(theta)).margin(1e-9));
    }
  }
}

TEST_CASE("horodecki criterion anchors") {
  const DensityMatrix bell = pure_to_density(PureState(testutil::bell_phi_plus()));
  const CMatrix3 t = correlation_matrix(bell);
  CHECK(t(0, 0).real() == Catch::Approx(1.0).margin(1e-12));   // Txx
  CHECK(t(1, 1).real() == Catch::Approx(-1.0).margin(1e-12));  // Tyy
  CHECK(t(2, 2).real() == Catch::Approx(1.0).margin(1e-12));   // Tzz
  CHECK(horodecki_M(bell) == Catch::Approx(2.0).margin(1e-10));
  CHECK(horodecki_max(bell) == Catch::Approx(2.0 * kSqrt2).margin(1e-10));

  CHECK(horodecki_M(DensityMatrix(0.25 * CMatrix4::identity())) == Catch::Approx(0.0).margin(1e-12));

  for (double lam : {0.0, 1.0, 2.5, 3.5, 3.8, 4.0}) {
    // T = diag(2l/9, 2l/9, -7/9); M = sum of the two largest squares
    const double a = 2.0 * lam / 9.0, b = 7.0 / 9.0;
    double v[3] = {a * a, a * a, b * b};
    std::sort(v, v + 3);
    CHECK(horodecki_M(lambda_state(lam)) == Catch::Approx(v[1] + v[2]).margin(1e-9));
  }
}

TEST_CASE("entanglement report is internally consistent") {
  SplitMix64 rng(14);
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix rho = random_density(rng);
    const EntanglementReport rep = analyze_entanglement(rho);
    CHECK(rep.horodecki_max == Catch::Approx(2.0 * std::sqrt(rep.horodecki_M)).margin(1e-10));
    CHECK(rep.concurrence >= 0.0);
    CHECK(rep.concurrence <= 1.0 + 1e-9);
    CHECK(rep.entropy >= -1e-12);
    CHECK(rep.entropy <= 1.0 + 1e-9);
    CHECK(rep.horodecki_max <= 2.0 * kSqrt2 + 1e-9);
  }
}

TEST_CASE("measures are invariant under local unitaries") {
  SplitMix64 rng(15);
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix rho = random_density(rng);
    const CMatrix4 u = product_unitary(verify::random_product_unitary(rng));
    const DensityMatrix rotated(u * rho.matrix() * dagger(u));
    CHECK(concurrence(rotated) == Catch::Approx(concurrence(rho)).margin(1e-8));
    CHECK(von_neumann_entropy(rotated) == Catch::Approx(von_neumann_entropy(rho)).margin(1e-8));
    CHECK(horodecki_M(rotated) == Catch::Approx(horodecki_M(rho)).margin(1e-8));
  }
}
