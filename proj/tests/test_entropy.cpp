#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qcorr/entropy.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/oracle.hpp"
#include "qcorr/states.hpp"

using namespace qcorr;
using qcorr::testing::diag;
using qcorr::testing::h2;

namespace {

const double kH75 = h2(0.75);  // 0.811278...

DensityMatrix maximally_mixed(std::size_t d, std::optional<BipartiteDims> dims = std::nullopt) {
  const auto n = static_cast<Eigen::Index>(d);
  return validate_density(ComplexMatrix::Identity(n, n) / static_cast<double>(d), dims);
}

}  // namespace

TEST_CASE("von_neumann_entropy examples") {
  CHECK(von_neumann_entropy(states::pure_bell()).value == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(maximally_mixed(2)).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(states::bell_mixture(0.75)).value ==
        doctest::Approx(0.811278124459).epsilon(1e-12));
  CHECK(von_neumann_entropy(maximally_mixed(2), LogBase::Nats).value ==
        doctest::Approx(std::numbers::ln2).epsilon(1e-14));
}

TEST_CASE("von_neumann_entropy stays within [0, log d]") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t rank = 1 + seed % 4;
    const double s = von_neumann_entropy(oracle::random_state(seed, {2, 2}, rank)).value;
    CHECK(s >= 0.0);
    CHECK(s <= std::log2(static_cast<double>(rank)) + 1e-9);
  }
}

TEST_CASE("shannon_entropy treats 0 log 0 as 0") {
  const std::vector<double> p{0.5, 0.5, 0.0};
  CHECK(shannon_entropy(p) == doctest::Approx(1.0));
  CHECK(from_nats(std::numbers::ln2, LogBase::Bits) == doctest::Approx(1.0));
  CHECK(from_nats(3.0, LogBase::Nats) == 3.0);
}

TEST_CASE("relative_entropy examples") {
  const DensityMatrix rho = oracle::random_state(11, {2, 2}, 4);
  CHECK(std::abs(relative_entropy(rho, rho).value) <= 1e-12);

  const DensityMatrix zero = validate_density(diag({1.0, 0.0}));
  const DensityMatrix one = validate_density(diag({0.0, 1.0}));
  const EntropyValue inf = relative_entropy(zero, one);
  CHECK_FALSE(inf.finite);
  CHECK(std::isinf(inf.value));

  const EntropyValue to_mixed =
      relative_entropy(states::bell_mixture(0.75), maximally_mixed(4, BipartiteDims{2, 2}));
  CHECK(to_mixed.finite);
  CHECK(to_mixed.value == doctest::Approx(2.0 - kH75).epsilon(1e-12));
}

TEST_CASE("relative_entropy detects rho leaking out of sigma's support") {
  // rho pure on |+>, sigma = |0><0|: <+|sigma|+> = 1/2 passes the first
  // test but half of rho lies in sigma's kernel.
  const double s = 1.0 / std::numbers::sqrt2;
  ComplexVector plus(2);
  plus << s, s;
  const DensityMatrix rho = validate_density(projector(plus));
  const DensityMatrix sigma = validate_density(diag({1.0, 0.0}));
  CHECK_FALSE(relative_entropy(rho, sigma).finite);
  CHECK_FALSE(relative_entropy(sigma, rho).finite);
}

TEST_CASE("relative_entropy requires equal dimensions") {
  CHECK_THROWS_AS(relative_entropy(maximally_mixed(2), maximally_mixed(3)), Error);
  CHECK_THROWS_AS(relative_entropy_floored(maximally_mixed(2), maximally_mixed(2), 0.0), Error);
}

TEST_CASE("relative_entropy is nonnegative on 1000 random pairs") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const DensityMatrix rho = oracle::random_state(seed, {2, 2}, 1 + seed % 4);
    const DensityMatrix sigma = oracle::random_state(seed + 100000, {2, 2}, 4);
    const EntropyValue d = relative_entropy(rho, sigma);
    REQUIRE(d.finite);
    CHECK(d.value >= -1e-12);
    if (d.value <= 1e-12) CHECK((rho.matrix() - sigma.matrix()).norm() <= 1e-6);
  }
}

TEST_CASE("floored relative entropy approaches the exact value monotonically") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix rho = oracle::random_state(seed, {2, 2}, 2);
    // sigma full rank but with a tiny eigenvalue, so the floor bites at 1e-6
    const DensityMatrix base = oracle::random_state(seed + 500, {2, 2}, 3);
    const ComplexMatrix mixed = (1.0 - 1e-8) * base.matrix() +
                                1e-8 * ComplexMatrix::Identity(4, 4) / 4.0;
    const DensityMatrix sigma = validate_density(mixed, BipartiteDims{2, 2});
    const EntropyValue exact = relative_entropy(rho, sigma);
    REQUIRE(exact.finite);
    const double e6 = relative_entropy_floored(rho, sigma, 1e-6).value;
    const double e9 = relative_entropy_floored(rho, sigma, 1e-9).value;
    const double e12 = relative_entropy_floored(rho, sigma, 1e-12).value;
    const double g6 = std::abs(e6 - exact.value);
    const double g9 = std::abs(e9 - exact.value);
    const double g12 = std::abs(e12 - exact.value);
    CHECK(g9 <= g6 + 1e-12);
    CHECK(g12 <= g9 + 1e-12);
    CHECK(g12 <= 1e-6);
  }
}

TEST_CASE("floored relative entropy is finite where the exact one is not") {
  const DensityMatrix zero = validate_density(diag({1.0, 0.0}));
  const DensityMatrix one = validate_density(diag({0.0, 1.0}));
  const EntropyValue f = relative_entropy_floored(zero, one);
  CHECK(f.finite);
  CHECK(f.value == doctest::Approx(-std::log2(1e-12 / (1.0 + 1e-12))));
}

TEST_CASE("entropy is additive under tensor products") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix a = partial_trace(oracle::random_state(seed, {2, 3}, 3), Subsystem::B);
    const DensityMatrix b = partial_trace(oracle::random_state(seed + 1, {2, 2}, 2), Subsystem::A);
    const double joint = von_neumann_entropy(tensor_product(a, b)).value;
    CHECK(joint == doctest::Approx(von_neumann_entropy(a).value + von_neumann_entropy(b).value)
                       .epsilon(1e-9));
  }
}

TEST_CASE("mutual_information examples") {
  const DensityMatrix product =
      tensor_product(validate_density(diag({0.3, 0.7})), validate_density(diag({0.6, 0.4})));
  CHECK(std::abs(mutual_information(product).value) <= 1e-12);
  CHECK(mutual_information(states::pure_bell()).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mutual_information(states::bell_mixture(0.75)).value ==
        doctest::Approx(2.0 - kH75).epsilon(1e-12));
  CHECK_THROWS_AS(mutual_information(maximally_mixed(4)), Error);
}

TEST_CASE("mutual_information cross-check holds on random states") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const DensityMatrix rho = oracle::random_state(seed, {2, 2}, 1 + seed % 4);
    CHECK_NOTHROW(mutual_information(rho));
    const double by_sum = von_neumann_entropy(partial_trace(rho, Subsystem::A)).value +
                          von_neumann_entropy(partial_trace(rho, Subsystem::B)).value -
                          von_neumann_entropy(rho).value;
    CHECK(std::abs(mutual_information(rho).value - by_sum) <= 1e-9);
  }
}

TEST_CASE("conditional_entropy_vn examples") {
  CHECK(conditional_entropy_vn(states::pure_bell()).value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(conditional_entropy_vn(maximally_mixed(4, BipartiteDims{2, 2})).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(conditional_entropy_vn(states::bell_mixture(0.75)).value ==
        doctest::Approx(kH75 - 1.0).epsilon(1e-12));
}

TEST_CASE("RelativeEntropyFrom matches the free functions") {
  const DensityMatrix rho = oracle::random_state(5, {2, 2}, 3);
  const DensityMatrix sigma = oracle::random_state(6, {2, 2}, 4);
  const RelativeEntropyFrom cached(rho);
  CHECK(cached.exact_nats(sigma.matrix()) / std::numbers::ln2 ==
        doctest::Approx(relative_entropy(rho, sigma).value).epsilon(1e-14));
  CHECK(cached.floored_nats(sigma.matrix(), 1e-12) ==
        doctest::Approx(relative_entropy_floored(rho, sigma, 1e-12, LogBase::Nats).value));
  CHECK(cached.negentropy_nats() ==
        doctest::Approx(-von_neumann_entropy(rho, LogBase::Nats).value).epsilon(1e-14));
}
