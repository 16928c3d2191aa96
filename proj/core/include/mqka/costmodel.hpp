#pragma once

#include <array>
#include <string>
#include <vector>

namespace mqka::costmodel {

// Column order is fixed; it is also the CSV column order.
enum class Protocol { ShiZhong, Liu, Shukla, Sun1, Sun2, Proposed };
inline constexpr std::array<Protocol, 6> kProtocols = {
    Protocol::ShiZhong, Protocol::Liu,  Protocol::Shukla,
    Protocol::Sun1,     Protocol::Sun2, Protocol::Proposed};

enum class Metric { Transmissions, Measurements, DecoyQubits, DelayUnits };
inline constexpr std::array<Metric, 4> kMetrics = {
    Metric::Transmissions, Metric::Measurements, Metric::DecoyQubits,
    Metric::DelayUnits};

std::string protocol_name(Protocol p);
std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// Closed-form resource count for agreeing on one round's worth of key
// material among n participants, with ten decoys per transmitted sequence.
long long cost(Protocol p, Metric m, int n);

struct ComparisonTable {
  Metric metric;
  std::vector<int> n_values;
  std::vector<std::array<long long, 6>> rows;  // aligned with n_values
};

ComparisonTable comparison_table(Metric m, int n_lo, int n_hi);

// CSV with header N,ShiZhong,Liu,Shukla,Sun1,Sun2,Proposed and LF line ends.
std::string to_csv(const ComparisonTable& table);

// Runs the simulated agreement in a configuration that isolates the per-round
// accounting (two key bits, one state per batch, ten decoys per sequence) and
// reads the requested counter back out.
long long empirical_cost_check(Metric m, int n);

}  // namespace mqka::costmodel
