#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctap/coupling.hpp"
#include "ctap/errors.hpp"

using ctap::CouplingSchedule;
using ctap::SlabParams;

TEST_SUITE("coupling") {

TEST_CASE("coupling follows the standing-wave profile") {
  const SlabParams slab{1.0, 1.0};
  CHECK(ctap::coupling_from_position(0.0, slab) == 0.0);
  CHECK(ctap::coupling_from_position(std::numbers::pi / 2.0, slab) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // The next standing-wave period carries the opposite sign.
  CHECK(ctap::coupling_from_position(3.0 * std::numbers::pi / 2.0, slab) ==
        doctest::Approx(-1.0).epsilon(1e-15));

  const SlabParams scaled{2.0, 0.7};
  CHECK(ctap::coupling_from_position(std::numbers::pi / 4.0, scaled) ==
        doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("position inversion round-trips through every period") {
  const SlabParams slab{1.3, 0.9};
  for (int period = -2; period <= 3; ++period) {
    for (int i = -10; i <= 10; ++i) {
      const double target = 0.9 * i / 10.0;
      const double x = ctap::position_for_coupling(target, slab, period);
      CHECK(std::abs(ctap::coupling_from_position(x, slab) - target) <= 1e-9);
      // The position stays inside the chosen period's half-wave.
      const double center = period * std::numbers::pi / slab.beta0;
      CHECK(std::abs(x - center) <=
            std::numbers::pi / (2.0 * slab.beta0) + 1e-12);
    }
  }
}

TEST_CASE("couplings beyond the standing-wave peak are unreachable") {
  const SlabParams slab{1.0, 0.5};
  CHECK_THROWS_AS(ctap::position_for_coupling(0.6, slab),
                  ctap::UnreachableCouplingError);
  CHECK_THROWS_AS(ctap::position_for_coupling(-0.51, slab),
                  ctap::UnreachableCouplingError);
  CHECK_NOTHROW(ctap::position_for_coupling(0.5, slab));
}

TEST_CASE("divider schedule keeps the total coupling rate constant") {
  const SlabParams slab{1.0, 0.8};
  const double z_max = 40.0;
  const CouplingSchedule schedule = ctap::divider_schedule(z_max, slab);
  REQUIRE(schedule.waveguide_count() == 3);
  for (int k = 0; k <= 100; ++k) {
    const double z = z_max * k / 100.0;
    const double w1 = schedule.omega(1, z);
    const double w2 = schedule.omega(2, z);
    const double w3 = schedule.omega(3, z);
    CHECK(w1 == w2);  // the two receiving waveguides stay identical
    CHECK(w1 * w1 + w3 * w3 ==
          doctest::Approx(slab.omega_max * slab.omega_max).epsilon(1e-12));
  }
  // Counter-intuitive ordering: the receivers start fully coupled, the
  // sender ends fully coupled.
  CHECK(schedule.omega(1, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(schedule.omega(3, 0.0) == 0.0);
  CHECK(std::abs(schedule.omega(1, z_max)) <= 1e-12);
  CHECK(schedule.omega(3, z_max) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("gate schedule holds the coupling ratio fixed") {
  const SlabParams slab{1.0, 1.0};
  const double alpha = 0.63;
  const double z_max = 25.0;
  const CouplingSchedule schedule =
      ctap::usb_gate_schedule(alpha, z_max, slab);
  REQUIRE(schedule.waveguide_count() == 3);
  for (int k = 1; k < 100; ++k) {
    const double z = z_max * k / 100.0;
    const double w1 = schedule.omega(1, z);
    if (std::abs(w1) < 1e-12) continue;
    CHECK(schedule.omega(2, z) / w1 == doctest::Approx(alpha).epsilon(1e-12));
  }
}

TEST_CASE("gate schedule's auxiliary coupling crosses zero exactly once") {
  const SlabParams slab{1.0, 1.0};
  const double z_max = 30.0;
  const CouplingSchedule schedule = ctap::usb_gate_schedule(0.5, z_max, slab);
  int sign_changes = 0;
  double previous = schedule.omega(3, 0.0);
  for (int k = 1; k <= 2000; ++k) {
    const double current = schedule.omega(3, z_max * k / 2000.0);
    if (previous > 0.0 && current < 0.0) ++sign_changes;
    if (previous < 0.0 && current > 0.0) ++sign_changes;
    previous = current;
  }
  CHECK(sign_changes == 1);
  // The qubit-pair couplings turn off at both ends.
  CHECK(schedule.omega(1, 0.0) == 0.0);
  CHECK(std::abs(schedule.omega(1, z_max)) <= 1e-12);
}

TEST_CASE("schedules reject invalid parameters") {
  const SlabParams slab{1.0, 1.0};
  CHECK_THROWS_AS(ctap::divider_schedule(0.0, slab), std::invalid_argument);
  CHECK_THROWS_AS(ctap::divider_schedule(-5.0, slab), std::invalid_argument);
  CHECK_THROWS_AS(ctap::usb_gate_schedule(0.0, 10.0, slab),
                  std::invalid_argument);
  CHECK_THROWS_AS(ctap::usb_gate_schedule(-0.3, 10.0, slab),
                  std::invalid_argument);
  CHECK_THROWS_AS(ctap::usb_gate_schedule(0.5, -1.0, slab),
                  std::invalid_argument);
}

TEST_CASE("schedule omega accessor validates the waveguide index") {
  const CouplingSchedule schedule =
      ctap::divider_schedule(10.0, SlabParams{});
  CHECK_THROWS_AS(schedule.omega(0, 1.0), std::out_of_range);
  CHECK_THROWS_AS(schedule.omega(4, 1.0), std::out_of_range);
  CHECK(schedule.at(1.0).size() == 3);
}

TEST_CASE("divider paths realise the schedule exactly") {
  const SlabParams slab{1.0, 1.0};
  const double z_max = 20.0;
  const CouplingSchedule schedule = ctap::divider_schedule(z_max, slab);
  const auto paths = ctap::schedule_to_paths(schedule, slab, 201);
  REQUIRE(paths.size() == 3);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    REQUIRE(paths[i].z.size() == 201);
    for (std::size_t k = 0; k < paths[i].z.size(); ++k) {
      const double induced = ctap::coupling_from_position(paths[i].x[k], slab);
      const double wanted =
          schedule.omega(static_cast<int>(i) + 1, paths[i].z[k]);
      CHECK(std::abs(induced - wanted) <= 1e-9);
    }
  }
}

TEST_CASE("paths of different waveguides never meet") {
  const SlabParams slab{1.0, 1.0};
  const auto paths =
      ctap::schedule_to_paths(ctap::divider_schedule(15.0, slab), slab, 101);
  for (std::size_t k = 0; k < paths[0].z.size(); ++k) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        CHECK(std::abs(paths[i].x[k] - paths[j].x[k]) > 0.1);
      }
    }
  }
}

TEST_CASE("a sign-changing schedule stays continuous through the node") {
  const SlabParams slab{1.0, 1.0};
  const double z_max = 16.0;
  // The auxiliary coupling of the gate schedule flips sign at z_max/2.
  const CouplingSchedule schedule = ctap::usb_gate_schedule(1.0, z_max, slab);
  const auto paths = ctap::schedule_to_paths(schedule, slab, 801);
  const auto& aux = paths[2];
  double max_jump = 0.0;
  for (std::size_t k = 1; k < aux.x.size(); ++k) {
    max_jump = std::max(max_jump, std::abs(aux.x[k] - aux.x[k - 1]));
  }
  // 801 samples over z_max=16: a continuous path moves far less than a
  // half-period between neighbours.
  CHECK(max_jump < 0.5);
  for (std::size_t k = 0; k < aux.z.size(); ++k) {
    CHECK(std::abs(ctap::coupling_from_position(aux.x[k], slab) -
                   schedule.omega(3, aux.z[k])) <= 1e-9);
  }
}

TEST_CASE("paths are rejected when the schedule exceeds the peak coupling") {
  const SlabParams weak{1.0, 0.5};
  CouplingSchedule schedule;
  schedule.z_max = 10.0;
  schedule.omega_funcs = {[](double) { return 0.8; }};
  CHECK_THROWS_AS(ctap::schedule_to_paths(schedule, weak, 11),
                  ctap::UnreachableCouplingError);
}

}  // TEST_SUITE
