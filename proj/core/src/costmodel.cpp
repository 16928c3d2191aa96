#include "mqka/costmodel.hpp"

#include <stdexcept>

#include "mqka/protocol.hpp"

namespace mqka::costmodel {

std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::ShiZhong: return "ShiZhong";
    case Protocol::Liu: return "Liu";
    case Protocol::Shukla: return "Shukla";
    case Protocol::Sun1: return "Sun1";
    case Protocol::Sun2: return "Sun2";
    case Protocol::Proposed: return "Proposed";
  }
  throw std::invalid_argument("unknown protocol");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::Transmissions: return "transmissions";
    case Metric::Measurements: return "measurements";
    case Metric::DecoyQubits: return "decoys";
    case Metric::DelayUnits: return "delay";
  }
  throw std::invalid_argument("unknown metric");
}

Metric metric_from_name(const std::string& name) {
  if (name == "transmissions") return Metric::Transmissions;
  if (name == "measurements") return Metric::Measurements;
  if (name == "decoys") return Metric::DecoyQubits;
  if (name == "delay") return Metric::DelayUnits;
  throw std::invalid_argument("unknown metric name: " + name);
}

namespace {

long long half_up(int n) { return (n + 1) / 2; }  // ceil(n/2) for n >= 0

}  // namespace

long long cost(Protocol p, Metric m, int n) {
  if (n < 2) throw std::invalid_argument("cost model needs n >= 2");
  const long long nn = n;
  switch (m) {
    case Metric::Transmissions:
      switch (p) {
        case Protocol::ShiZhong: return nn * nn;
        case Protocol::Liu: return nn * (nn - 1);
        case Protocol::Shukla: return 2 * nn * nn;
        case Protocol::Sun1: return half_up(n - 1) * 8 * nn;
        case Protocol::Sun2: return nn * nn;
        case Protocol::Proposed: return 4 * (nn - 1);
      }
      break;
    case Metric::Measurements:
      switch (p) {
        case Protocol::ShiZhong: return 2 * nn * nn;
        case Protocol::Liu: return 2 * nn * (nn - 1);
        case Protocol::Shukla: return 4 * nn;
        case Protocol::Sun1: return 6 * nn;
        case Protocol::Sun2: return 4 * nn;
        case Protocol::Proposed: return 2 * nn;
      }
      break;
    case Metric::DecoyQubits:
      switch (p) {
        case Protocol::ShiZhong: return 10 * nn * nn;
        case Protocol::Liu: return 20 * nn * (nn - 1);
        case Protocol::Shukla: return 20 * nn * nn;
        case Protocol::Sun1: return half_up(n - 1) * 80 * nn;
        case Protocol::Sun2: return 10 * nn * nn;
        case Protocol::Proposed: return 40 * (nn - 1);
      }
      break;
    case Metric::DelayUnits:
      switch (p) {
        case Protocol::ShiZhong: return nn;
        case Protocol::Liu: return 2;
        case Protocol::Shukla: return 2 * nn;
        case Protocol::Sun1: return 2 * half_up(n - 1);
        case Protocol::Sun2: return nn;
        case Protocol::Proposed: return 4;
      }
      break;
  }
  throw std::invalid_argument("unknown protocol/metric");
}

ComparisonTable comparison_table(Metric m, int n_lo, int n_hi) {
  if (n_lo < 2 || n_hi < n_lo)
    throw std::invalid_argument("bad participant range");
  ComparisonTable table;
  table.metric = m;
  for (int n = n_lo; n <= n_hi; ++n) {
    table.n_values.push_back(n);
    std::array<long long, 6> row{};
    for (std::size_t i = 0; i < kProtocols.size(); ++i)
      row[i] = cost(kProtocols[i], m, n);
    table.rows.push_back(row);
  }
  return table;
}

std::string to_csv(const ComparisonTable& table) {
  std::string out = "N";
  for (Protocol p : kProtocols) out += "," + protocol_name(p);
  out += '\n';
  for (std::size_t i = 0; i < table.n_values.size(); ++i) {
    out += std::to_string(table.n_values[i]);
    for (long long value : table.rows[i]) out += "," + std::to_string(value);
    out += '\n';
  }
  return out;
}

long long empirical_cost_check(Metric m, int n) {
  protocol::RoundConfig config;
  config.participants = n;
  config.key_bits = 2;
  config.sequence_len = 1;
  config.decoys_per_sequence = 10;
  config.error_threshold = 0.0;
  config.seed = 1;
  const std::vector<std::string> keys(n, "00");
  const auto outcome = protocol::run_agreement(config, keys);
  if (outcome.result.aborted)
    throw std::runtime_error("honest accounting run aborted unexpectedly");
  const auto& counters = outcome.result.counters;
  switch (m) {
    case Metric::Transmissions: return counters.transmissions;
    case Metric::Measurements: return counters.measurements;
    case Metric::DecoyQubits: return counters.decoy_qubits;
    case Metric::DelayUnits: return counters.delay_units;
  }
  throw std::invalid_argument("unknown metric");
}

}  // namespace mqka::costmodel
