#include "mqka/selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "mqka/entangle.hpp"
#include "mqka/protocol.hpp"
#include "mqka/qsim.hpp"
#include "mqka/rng.hpp"

namespace mqka::selftest {

using entangle::Bell;
using entangle::EncodingOp;
using entangle::GhzLabel;
using qsim::Basis;
using qsim::Gate1;
using qsim::StateVector;

namespace {

constexpr EncodingOp kAllOps[] = {EncodingOp::I, EncodingOp::X, EncodingOp::Y,
                                  EncodingOp::Z};
constexpr EncodingOp kFollowerOps[] = {EncodingOp::I, EncodingOp::X};

Item pass(std::string name, std::string detail) {
  return {std::move(name), true, std::move(detail)};
}

Item fail(std::string name, std::string detail) {
  return {std::move(name), false, std::move(detail)};
}

}  // namespace

Item check_two_party_key_table() {
  const std::string name = "two-party key table";
  // Expected resulting pair state and group key bit for every combination of
  // one encoding by each party, starting from the 00-labelled pair.
  struct Cell {
    EncodingOp follower;
    EncodingOp leader;
    Bell expect_state;
    int expect_key;
  };
  const Cell cells[] = {
      {EncodingOp::I, EncodingOp::I, Bell::PhiPlus, 0},
      {EncodingOp::I, EncodingOp::X, Bell::PsiPlus, 0},
      {EncodingOp::I, EncodingOp::Y, Bell::PsiMinus, 1},
      {EncodingOp::I, EncodingOp::Z, Bell::PhiMinus, 1},
      {EncodingOp::X, EncodingOp::I, Bell::PsiPlus, 1},
      {EncodingOp::X, EncodingOp::X, Bell::PhiPlus, 1},
      {EncodingOp::X, EncodingOp::Y, Bell::PhiMinus, 0},
      {EncodingOp::X, EncodingOp::Z, Bell::PsiMinus, 0},
  };
  Rng rng(20240229);
  int checked = 0;
  for (const Cell& cell : cells) {
    StateVector sv = entangle::prepare_bell(Bell::PhiPlus);
    sv.apply_gate1(entangle::to_gate(cell.leader), 0);
    sv.apply_gate1(entangle::to_gate(cell.follower), 1);
    const int qubits[] = {0, 1};
    const GhzLabel outcome = entangle::ghz_measure(sv, qubits, rng);
    if (entangle::bell_from_bits(outcome) != cell.expect_state)
      return fail(name, "unexpected pair state for ops " +
                            std::string(1, entangle::op_char(cell.leader)) +
                            std::string(1, entangle::op_char(cell.follower)));
    const auto predicted = entangle::label_after_ops(
        GhzLabel(2, 0), std::vector<EncodingOp>{cell.leader, cell.follower}, 0);
    if (!(predicted == outcome))
      return fail(name, "codebook disagrees with simulation");
    const auto by_leader =
        protocol::extract_key_leader(outcome, cell.leader, 0, 2);
    const auto by_follower =
        protocol::extract_key_follower(outcome, cell.follower, 1, 0, 2);
    if (by_leader.key_bit != cell.expect_key ||
        by_follower.key_bit != cell.expect_key)
      return fail(name, "extracted key bit wrong for state " +
                            std::string(entangle::bell_name(cell.expect_state)));
    if (by_leader.ops[1] != cell.follower || by_follower.ops[0] != cell.leader)
      return fail(name, "decoded operation wrong for state " +
                            std::string(entangle::bell_name(cell.expect_state)));
    ++checked;
  }
  return pass(name, std::to_string(checked) + "/8 cells agree");
}

Item check_ghz_round_trip() {
  const std::string name = "ghz round-trip";
  Rng rng(8211026);
  int checked = 0;
  for (int n = 2; n <= 5; ++n) {
    std::vector<int> qubits(n);
    for (int q = 0; q < n; ++q) qubits[q] = q;
    for (std::uint32_t value = 0; value < (1u << n); ++value) {
      const GhzLabel label(n, value);
      StateVector sv = entangle::prepare_ghz(n, label);
      if (std::abs(sv.norm() - 1.0) > 1e-10)
        return fail(name, "prepared state not normalized for " + label.to_string());
      const GhzLabel outcome = entangle::ghz_measure(sv, qubits, rng);
      if (!(outcome == label))
        return fail(name, "label " + label.to_string() + " measured as " +
                              outcome.to_string());
      ++checked;
    }
  }
  return pass(name, std::to_string(checked) + " labels round-trip for 2..5 parties");
}

Item check_ancilla_entanglement_evolution() {
  const std::string name = "ancilla entanglement evolution";
  // Three-party entangled state, one X-basis check qubit, one probe qubit.
  // Copying the second and fourth qubit into the probe must yield a specific
  // four-branch superposition.
  StateVector plus = StateVector::zero_state(1);
  plus.apply_gate1(Gate1::H, 0);
  StateVector sv = StateVector::tensor(
      StateVector::tensor(entangle::prepare_ghz(3, GhzLabel::from_string("010")),
                          plus),
      StateVector::zero_state(1));
  sv.apply_cnot(1, 4);
  sv.apply_cnot(3, 4);

  std::vector<std::complex<double>> expected(32, 0.0);
  expected[StateVector::basis_index("01001")] = 0.5;
  expected[StateVector::basis_index("01010")] = 0.5;
  expected[StateVector::basis_index("10100")] = 0.5;
  expected[StateVector::basis_index("10111")] = 0.5;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto delta = sv.amplitude(i) - expected[i];
    if (std::abs(delta) > 1e-12) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "amplitude %zu off by %.3e", i,
                    std::abs(delta));
      return fail(name, buf);
    }
  }
  return pass(name, "all 32 amplitudes match to 1e-12");
}

Item check_codebook_equivalence() {
  const std::string name = "codebook equivalence";
  Rng rng(430881);
  long long checked = 0;
  for (int n = 2; n <= 5; ++n) {
    std::vector<int> qubits(n);
    for (int q = 0; q < n; ++q) qubits[q] = q;
    for (std::uint32_t value = 0; value < (1u << n); ++value) {
      const GhzLabel initial(n, value);
      for (int leader = 0; leader < n; ++leader) {
        for (EncodingOp leader_op : kAllOps) {
          const int followers = n - 1;
          for (std::uint32_t mask = 0; mask < (1u << followers); ++mask) {
            std::vector<EncodingOp> ops(n);
            int truth = protocol::bit_of_leader_op(leader_op, n);
            int fi = 0;
            for (int pos = 0; pos < n; ++pos) {
              if (pos == leader) {
                ops[pos] = leader_op;
                continue;
              }
              ops[pos] = kFollowerOps[(mask >> fi) & 1u];
              truth ^= protocol::bit_of_follower_op(ops[pos]);
              ++fi;
            }

            StateVector sv = entangle::prepare_ghz(n, initial);
            for (int pos = 0; pos < n; ++pos)
              sv.apply_gate1(entangle::to_gate(ops[pos]), pos);
            const GhzLabel outcome = entangle::ghz_measure(sv, qubits, rng);
            const GhzLabel predicted =
                entangle::label_after_ops(initial, ops, leader);
            if (!(predicted == outcome))
              return fail(name, "predicted " + predicted.to_string() +
                                    " but measured " + outcome.to_string());
            ++checked;

            // Extraction is defined relative to the all-zero start label the
            // protocol distributes, so only those outcomes decode to ops.
            if (value != 0) continue;

            const auto by_leader =
                protocol::extract_key_leader(outcome, leader_op, leader, n);
            if (by_leader.ops != ops || by_leader.key_bit != truth)
              return fail(name, "leader-side extraction wrong at outcome " +
                                    outcome.to_string());
            for (int pos = 0; pos < n; ++pos) {
              if (pos == leader) continue;
              const auto by_follower = protocol::extract_key_follower(
                  outcome, ops[pos], pos, leader, n);
              if (by_follower.ops != ops || by_follower.key_bit != truth)
                return fail(name, "follower-side extraction wrong at outcome " +
                                      outcome.to_string());
            }
          }
        }
      }
    }
  }
  return pass(name, std::to_string(checked) + " encoding combinations agree");
}

std::vector<Item> run_all() {
  return {
      check_two_party_key_table(),
      check_ghz_round_trip(),
      check_ancilla_entanglement_evolution(),
      check_codebook_equivalence(),
  };
}

}  // namespace mqka::selftest
