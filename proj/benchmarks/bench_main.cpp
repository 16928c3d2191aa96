#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "mqka/adversary.hpp"
#include "mqka/entangle.hpp"
#include "mqka/protocol.hpp"
#include "mqka/qsim.hpp"
#include "mqka/rng.hpp"

using mqka::Rng;
using mqka::qsim::StateVector;

namespace {

void BM_SingleQubitGate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StateVector sv = StateVector::zero_state(n);
  for (auto _ : state) {
    sv.apply_gate1(mqka::qsim::Gate1::H, 0);
    benchmark::DoNotOptimize(sv.amplitudes());
  }
  state.SetComplexityN(1LL << n);
}
BENCHMARK(BM_SingleQubitGate)->DenseRange(4, 16, 4)->Complexity();

void BM_Cnot(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StateVector sv = StateVector::zero_state(n);
  sv.apply_gate1(mqka::qsim::Gate1::H, 0);
  for (auto _ : state) {
    sv.apply_cnot(0, n - 1);
    benchmark::DoNotOptimize(sv.amplitudes());
  }
}
BENCHMARK(BM_Cnot)->DenseRange(4, 16, 4);

void BM_GhzPrepareMeasure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(42);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  const mqka::entangle::GhzLabel label(n, 0);
  for (auto _ : state) {
    StateVector sv = mqka::entangle::prepare_ghz(n, label);
    auto outcome = mqka::entangle::ghz_measure(sv, order, rng);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(BM_GhzPrepareMeasure)->DenseRange(2, 10, 2);

void BM_HonestRound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  mqka::protocol::RoundConfig config;
  config.participants = n;
  config.key_bits = 8;
  config.sequence_len = 8;
  config.decoys_per_sequence = 2;
  config.seed = 7;
  std::vector<std::string> keys(n, "10110010");
  for (auto _ : state) {
    auto outcome = mqka::protocol::run_agreement(config, keys);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(BM_HonestRound)->DenseRange(2, 6, 1);

void BM_InterceptResendTrial(benchmark::State& state) {
  mqka::adversary::AttackSpec spec;
  spec.kind = mqka::adversary::AttackKind::InterceptResend;
  mqka::protocol::RoundConfig config;
  config.participants = 3;
  config.key_bits = 1;
  config.sequence_len = 1;
  config.decoys_per_sequence = 10;
  for (auto _ : state) {
    auto report =
        mqka::adversary::estimate_detection(spec, config, 10, Rng(1));
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_InterceptResendTrial);

}  // namespace

BENCHMARK_MAIN();
