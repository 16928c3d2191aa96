#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "mqka/costmodel.hpp"

using namespace mqka::costmodel;

TEST_CASE("names") {
  CHECK(protocol_name(Protocol::ShiZhong) == "ShiZhong");
  CHECK(protocol_name(Protocol::Proposed) == "Proposed");
  CHECK(metric_name(Metric::Transmissions) == "transmissions");
  CHECK(metric_name(Metric::DecoyQubits) == "decoys");
  for (Metric m : kMetrics) CHECK(metric_from_name(metric_name(m)) == m);
  CHECK_THROWS_AS(metric_from_name("latency"), std::invalid_argument);
}

TEST_CASE("spot formula values") {
  CHECK(cost(Protocol::ShiZhong, Metric::Transmissions, 5) == 25);
  CHECK(cost(Protocol::Liu, Metric::Transmissions, 3) == 6);
  CHECK(cost(Protocol::Shukla, Metric::Transmissions, 4) == 32);
  CHECK(cost(Protocol::Sun1, Metric::Transmissions, 6) == 144);
  CHECK(cost(Protocol::Sun2, Metric::Transmissions, 7) == 49);
  CHECK(cost(Protocol::Proposed, Metric::Transmissions, 10) == 36);

  CHECK(cost(Protocol::ShiZhong, Metric::Measurements, 4) == 32);
  CHECK(cost(Protocol::Liu, Metric::Measurements, 5) == 40);
  CHECK(cost(Protocol::Sun1, Metric::Measurements, 9) == 54);
  CHECK(cost(Protocol::Proposed, Metric::Measurements, 2) == 4);

  CHECK(cost(Protocol::Liu, Metric::DecoyQubits, 5) == 400);
  CHECK(cost(Protocol::Shukla, Metric::DecoyQubits, 10) == 2000);
  CHECK(cost(Protocol::Sun1, Metric::DecoyQubits, 4) == 640);
  CHECK(cost(Protocol::Proposed, Metric::DecoyQubits, 6) == 200);

  CHECK(cost(Protocol::ShiZhong, Metric::DelayUnits, 8) == 8);
  CHECK(cost(Protocol::Liu, Metric::DelayUnits, 9) == 2);
  CHECK(cost(Protocol::Shukla, Metric::DelayUnits, 2) == 4);
  CHECK(cost(Protocol::Sun1, Metric::DelayUnits, 7) == 6);
  CHECK(cost(Protocol::Sun1, Metric::DelayUnits, 8) == 8);
  CHECK(cost(Protocol::Proposed, Metric::DelayUnits, 10) == 4);

  CHECK_THROWS_AS(cost(Protocol::Liu, Metric::Transmissions, 1),
                  std::invalid_argument);
}

TEST_CASE("comparison table layout and csv") {
  const auto table = comparison_table(Metric::Transmissions, 3, 4);
  REQUIRE(table.n_values.size() == 2);
  CHECK(table.rows[0][0] == 9);
  CHECK(table.rows[0][5] == 8);
  CHECK(to_csv(table) ==
        "N,ShiZhong,Liu,Shukla,Sun1,Sun2,Proposed\n"
        "3,9,6,18,24,9,8\n"
        "4,16,12,32,64,16,12\n");
  CHECK_THROWS_AS(comparison_table(Metric::DelayUnits, 1, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(comparison_table(Metric::DelayUnits, 4, 3),
                  std::invalid_argument);
}

TEST_CASE("simulated accounting reproduces the closed forms") {
  for (int n = 2; n <= 4; ++n) {
    CHECK(empirical_cost_check(Metric::Transmissions, n) ==
          cost(Protocol::Proposed, Metric::Transmissions, n));
    CHECK(empirical_cost_check(Metric::Measurements, n) ==
          cost(Protocol::Proposed, Metric::Measurements, n));
    CHECK(empirical_cost_check(Metric::DecoyQubits, n) ==
          cost(Protocol::Proposed, Metric::DecoyQubits, n));
    CHECK(empirical_cost_check(Metric::DelayUnits, n) ==
          cost(Protocol::Proposed, Metric::DelayUnits, n));
  }
}
