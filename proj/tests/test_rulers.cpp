#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "toepcov/rulers.hpp"

using namespace toepcov;
using doctest::Approx;

TEST_CASE("full_ruler") {
  CHECK(full_ruler(1).indices() == std::vector<int>{1});
  CHECK(full_ruler(4).indices() == std::vector<int>{1, 2, 3, 4});
  const Ruler r = full_ruler(10);
  CHECK(r.size() == 10);
  CHECK(is_ruler(r.indices(), 10));
}

TEST_CASE("sqrt_ruler examples") {
  CHECK(sqrt_ruler(9).indices() == std::vector<int>{1, 2, 3, 6, 9});
  CHECK(sqrt_ruler(1).indices() == std::vector<int>{1});
  CHECK(sqrt_ruler(16).indices() == std::vector<int>{1, 2, 3, 4, 8, 12, 16});
}

TEST_CASE("sqrt_ruler is complete and small for d up to 400") {
  for (int d = 1; d <= 400; ++d) {
    const Ruler r = sqrt_ruler(d);
    const int c = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
    CHECK(is_ruler(r.indices(), d));
    CHECK(r.size() <= 2 * c - 1);
  }
}

TEST_CASE("alpha_ruler examples") {
  CHECK(alpha_ruler(16, 1.0).indices() == full_ruler(16).indices());
  CHECK(alpha_ruler(16, 0.5).indices() == std::vector<int>{1, 2, 3, 4, 8, 12, 16});
  const Ruler r = alpha_ruler(16, 0.75);
  CHECK(r.indices() == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 14, 16});
  CHECK(r.size() == 12);
  CHECK(r.repair_slack() == 0);
  CHECK_THROWS_AS(alpha_ruler(16, 0.49), std::invalid_argument);
  CHECK_THROWS_AS(alpha_ruler(16, 1.01), std::invalid_argument);
}

TEST_CASE("alpha_ruler is complete, with size bounded up to its slack") {
  for (int d : {1, 2, 3, 7, 10, 31, 50, 99, 128, 257, 500}) {
    for (double a : {0.5, 0.55, 0.625, 0.7, 0.75, 0.875, 0.9, 1.0}) {
      const Ruler r = alpha_ruler(d, a);
      CHECK(is_ruler(r.indices(), d));
      CHECK(r.size() <= 2 * ceil_power(d, a) + r.repair_slack());
    }
  }
}

TEST_CASE("is_ruler") {
  CHECK(is_ruler(std::vector<int>{1, 2, 5, 8, 10}, 10));
  CHECK_FALSE(is_ruler(std::vector<int>{1, 3}, 3));
  CHECK(is_ruler(std::vector<int>{1, 2, 4}, 4));
  CHECK_FALSE(is_ruler(std::vector<int>{}, 1));
  CHECK_THROWS_AS(Ruler(4, {1, 2, 5}), std::invalid_argument);
  CHECK_THROWS_AS(Ruler(4, {1, 2}), std::invalid_argument);
}

TEST_CASE("coverage_coefficient examples") {
  CHECK(coverage_coefficient(full_ruler(1)) == Approx(1.0));
  CHECK(coverage_coefficient(full_ruler(4)) == Approx(7.0 / 6.0));
  CHECK(coverage_coefficient(std::vector<int>{1, 2, 5, 8, 10}, 10) == Approx(4.45));
  CHECK_THROWS_AS(coverage_coefficient(std::vector<int>{1, 3}, 3), std::invalid_argument);
}

TEST_CASE("distance index pair counts") {
  for (int d : {1, 5, 17, 64}) {
    for (const Ruler& r : {full_ruler(d), sqrt_ruler(d), alpha_ruler(d, 0.75)}) {
      const DistanceIndex idx = r.distance_index();
      long total = 0;
      for (int s = 0; s <= idx.max_distance(); ++s) total += idx.size(s);
      CHECK(total == static_cast<long>(r.size()) * r.size());
      CHECK(idx.size(0) == r.size());
    }
  }
}

TEST_CASE("coverage bounds hold") {
  for (int d : {16, 100, 256, 1000}) {
    CHECK(coverage_coefficient(full_ruler(d)) <= full_coverage_bound(d));
    for (double a : {0.5, 0.625, 0.75, 0.875, 1.0}) {
      const Ruler r = alpha_ruler(d, a);
      CHECK(coverage_coefficient(r) <= alpha_coverage_bound(d, a) + r.repair_slack());
    }
  }
}

TEST_CASE("power rounding snaps near-integers") {
  CHECK(ceil_power(16, 0.5) == 4);
  CHECK(floor_power(16, 0.5) == 4);
  CHECK(ceil_power(64, 1.0 / 3.0) == 4);
  CHECK(floor_power(64, 1.0 / 3.0) == 4);
  CHECK(ceil_power(10, 0.5) == 4);
  CHECK(floor_power(10, 0.5) == 3);
}
