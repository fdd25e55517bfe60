#include <cmath>

#include "doctest.h"

#include "evac/equity.hpp"
#include "evac/errors.hpp"
#include "evac/rng.hpp"
#include "support/oracles.hpp"

using namespace evac;
using evac::testsupport::pearson;

TEST_CASE("worked point-biserial values") {
  CHECK(point_biserial({{10, 30}, {1, 0}}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(point_biserial({{5, 5}, {1, 0}}) == 0.0);  // zero variance
  CHECK(point_biserial({{4, 8, 6, 2}, {1, 1, 0, 0}}) ==
        doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("degenerate groups give zero") {
  CHECK(point_biserial({{3, 7, 9}, {0, 0, 0}}) == 0.0);
  CHECK(point_biserial({{3, 7, 9}, {1, 1, 1}}) == 0.0);
  CHECK_THROWS_AS(point_biserial({{}, {}}), ContractError);
}

TEST_CASE("penalty composes |r| with the step cost") {
  CHECK(inequity_penalty({{10, 30}, {1, 0}}, 40.0) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(inequity_penalty({{4, 8, 6, 2}, {1, 1, 0, 0}}, 0.0) == 0.0);
  CHECK(inequity_penalty({{3, 7}, {0, 0}}, 100.0) == 0.0);
  CHECK_THROWS_AS(inequity_penalty({{1, 2}, {1, 0}}, -1.0), ContractError);
}

TEST_CASE("matches Pearson correlation and stays within [-1, 1]") {
  Rng rng(20240811);
  int compared = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = static_cast<int>(rng.int_range(2, 200));
    ZoneDemandSnapshot snap;
    for (int i = 0; i < n; ++i) {
      snap.demand.push_back(static_cast<double>(rng.int_range(0, 10000)));
      snap.epc_flag.push_back(static_cast<int>(rng.below(2)));
    }
    const double r = point_biserial(snap);
    CHECK(std::abs(r) <= 1.0 + 1e-12);

    std::vector<double> x = snap.demand, y;
    for (const int f : snap.epc_flag) y.push_back(static_cast<double>(f));
    const double ref = pearson(x, y);
    if (std::isfinite(ref)) {
      CHECK(r == doctest::Approx(ref).epsilon(0).scale(1.0));
      CHECK(std::abs(r - ref) <= 1e-9);
      ++compared;
    } else {
      CHECK(r == 0.0);
    }
  }
  CHECK(compared > 9000);  // degenerate draws are rare at these sizes
}

TEST_CASE("sign symmetry under flag flips") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.int_range(2, 40));
    ZoneDemandSnapshot snap, flipped;
    for (int i = 0; i < n; ++i) {
      const double d = static_cast<double>(rng.int_range(0, 500));
      const int f = static_cast<int>(rng.below(2));
      snap.demand.push_back(d);
      snap.epc_flag.push_back(f);
      flipped.demand.push_back(d);
      flipped.epc_flag.push_back(1 - f);
    }
    CHECK(point_biserial(snap) == doctest::Approx(-point_biserial(flipped)).epsilon(1e-12));
  }
}

TEST_CASE("|r| invariant under positive affine demand rescaling") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.int_range(3, 50));
    ZoneDemandSnapshot snap;
    for (int i = 0; i < n; ++i) {
      snap.demand.push_back(static_cast<double>(rng.int_range(0, 1000)));
      snap.epc_flag.push_back(static_cast<int>(rng.below(2)));
    }
    const double a = rng.uniform(0.1, 20.0);
    const double b = rng.uniform(0.0, 100.0);
    ZoneDemandSnapshot scaled = snap;
    for (double& d : scaled.demand) d = a * d + b;
    CHECK(std::abs(std::abs(point_biserial(snap)) - std::abs(point_biserial(scaled))) <= 1e-9);
  }
}
