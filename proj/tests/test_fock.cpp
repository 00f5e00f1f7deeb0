#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctap/fock.hpp"

using ctap::FockBasis;
using ctap::FockState;

namespace {

// C(n, k) by the additive recurrence; exact for the small sizes used here.
long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("basis size matches the stars-and-bars count") {
  for (int modes = 1; modes <= 8; ++modes) {
    for (int photons = 0; photons <= 3; ++photons) {
      const FockBasis basis = ctap::enumerate_basis(modes, photons);
      CHECK(basis.size() == binomial(modes + photons - 1, photons));
      for (const FockState& state : basis.states) {
        int total = 0;
        for (int n : state) {
          CHECK(n >= 0);
          total += n;
        }
        CHECK(total == photons);
        CHECK(static_cast<int>(state.size()) == modes);
      }
    }
  }
}

TEST_CASE("enumeration is strictly descending and the index is a bijection") {
  for (int modes = 2; modes <= 6; ++modes) {
    for (int photons = 1; photons <= 3; ++photons) {
      const FockBasis basis = ctap::enumerate_basis(modes, photons);
      for (int k = 1; k < basis.size(); ++k) {
        CHECK(basis.states[k - 1] > basis.states[k]);  // lexicographic
      }
      for (int k = 0; k < basis.size(); ++k) {
        CHECK(basis.index_of(basis.states[k]) == k);
      }
    }
  }
}

TEST_CASE("the two-photon four-mode sector enumerates in the known order") {
  const FockBasis basis = ctap::enumerate_basis(4, 2);
  const std::vector<FockState> expected = {
      {2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {0, 2, 0, 0},
      {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 2, 0}, {0, 0, 1, 1}, {0, 0, 0, 2}};
  REQUIRE(basis.size() == 10);
  CHECK(basis.states == expected);
}

TEST_CASE("one-photon basis index equals the occupied mode") {
  const FockBasis basis = ctap::enumerate_basis(5, 1);
  for (int mode = 0; mode < 5; ++mode) {
    FockState state(5, 0);
    state[mode] = 1;
    CHECK(basis.index_of(state) == mode);
  }
}

TEST_CASE("index_of rejects states outside the sector") {
  const FockBasis basis = ctap::enumerate_basis(4, 2);
  CHECK_THROWS_AS(basis.index_of(FockState{1, 0, 0, 0}), std::out_of_range);
  CHECK_THROWS_AS(basis.index_of(FockState{2, 0, 0}), std::out_of_range);
  CHECK_THROWS_AS(basis.index_of(FockState{3, -1, 0, 0}), std::out_of_range);
}

TEST_CASE("enumerate_basis rejects invalid sector parameters") {
  CHECK_THROWS_AS(ctap::enumerate_basis(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ctap::enumerate_basis(3, -1), std::invalid_argument);
}

TEST_CASE("hopping carries the bosonic matrix element") {
  const auto hop = ctap::apply_hopping(FockState{1, 1, 0, 0}, 0, 1);
  REQUIRE(hop.has_value());
  CHECK(hop->first == FockState{2, 0, 0, 0});
  CHECK(hop->second == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const auto up = ctap::apply_hopping(FockState{0, 1, 1, 0}, 2, 1);
  REQUIRE(up.has_value());
  CHECK(up->first == FockState{0, 0, 2, 0});
  CHECK(up->second == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("hopping from an empty mode yields nothing") {
  CHECK_FALSE(ctap::apply_hopping(FockState{0, 0, 2, 0}, 2, 1).has_value());
}

TEST_CASE("hopping matrix elements are symmetric under reversal") {
  // <s'|a†_d a_s|s> must equal <s|a†_s a_d|s'>: the assembled Hamiltonian
  // relies on this to be exactly symmetric.
  const FockBasis basis = ctap::enumerate_basis(3, 2);
  for (const FockState& state : basis.states) {
    for (int dest = 0; dest < 3; ++dest) {
      for (int src = 0; src < 3; ++src) {
        if (dest == src) continue;
        const auto forward = ctap::apply_hopping(state, dest, src);
        if (!forward.has_value()) continue;
        const auto backward = ctap::apply_hopping(forward->first, src, dest);
        REQUIRE(backward.has_value());
        CHECK(backward->first == state);
        CHECK(backward->second == doctest::Approx(forward->second).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("hopping validates its mode indices") {
  CHECK_THROWS_AS(ctap::apply_hopping(FockState{1, 1}, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(ctap::apply_hopping(FockState{1, 1}, 2, 0),
                  std::out_of_range);
  CHECK_THROWS_AS(ctap::apply_hopping(FockState{1, 1}, 0, -1),
                  std::out_of_range);
}

TEST_CASE("state labels are the occupation digits, bus first") {
  CHECK(ctap::state_label(FockState{0, 1, 1, 0}) == "0110");
  CHECK(ctap::state_label(FockState{2, 0, 0, 0}) == "2000");
  CHECK(ctap::state_label(FockState{0, 0, 0, 0, 1, 0, 1, 0}) == "00001010");
  CHECK_THROWS_AS(ctap::state_label(FockState{10, 0}), std::invalid_argument);
}

}  // TEST_SUITE
