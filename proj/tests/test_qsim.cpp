#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "mqka/qsim.hpp"
#include "mqka/rng.hpp"

using mqka::Rng;
using mqka::qsim::Basis;
using mqka::qsim::Gate1;
using mqka::qsim::QubitPool;
using mqka::qsim::StateVector;

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

TEST_CASE("basis state indexing is big-endian") {
  CHECK(StateVector::basis_index("101") == 5);
  CHECK(StateVector::basis_index("100") == 4);
  CHECK(StateVector::basis_index("001") == 1);
  CHECK(StateVector::basis_index("0") == 0);
  CHECK_THROWS_AS(StateVector::basis_state("12"), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::basis_state(""), std::invalid_argument);
}

TEST_CASE("zero state") {
  StateVector sv = StateVector::zero_state(3);
  CHECK(sv.num_qubits() == 3);
  CHECK(sv.dim() == 8);
  CHECK(sv.amplitude(0) == std::complex<double>(1.0, 0.0));
  for (std::size_t i = 1; i < 8; ++i) CHECK(std::abs(sv.amplitude(i)) == 0.0);
  CHECK_THROWS_AS(StateVector::zero_state(0), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::zero_state(17), std::invalid_argument);
}

TEST_CASE("X flips the addressed qubit, leftmost first") {
  StateVector sv = StateVector::zero_state(3);
  sv.apply_gate1(Gate1::X, 0);
  CHECK(std::abs(sv.amplitude(StateVector::basis_index("100")) - 1.0) < 1e-12);
  sv.apply_gate1(Gate1::X, 2);
  CHECK(std::abs(sv.amplitude(StateVector::basis_index("101")) - 1.0) < 1e-12);
}

TEST_CASE("single qubit gate matrices") {
  SUBCASE("H twice is identity") {
    StateVector sv = StateVector::zero_state(1);
    sv.apply_gate1(Gate1::H, 0);
    CHECK(std::abs(sv.amplitude(0) - kInvSqrt2) < 1e-12);
    CHECK(std::abs(sv.amplitude(1) - kInvSqrt2) < 1e-12);
    sv.apply_gate1(Gate1::H, 0);
    CHECK(std::abs(sv.amplitude(0) - 1.0) < 1e-12);
    CHECK(std::abs(sv.amplitude(1)) < 1e-12);
  }
  SUBCASE("Z flips the sign of |1>") {
    StateVector sv = StateVector::zero_state(1);
    sv.apply_gate1(Gate1::H, 0);
    sv.apply_gate1(Gate1::Z, 0);
    CHECK(std::abs(sv.amplitude(0) - kInvSqrt2) < 1e-12);
    CHECK(std::abs(sv.amplitude(1) + kInvSqrt2) < 1e-12);
  }
  SUBCASE("Y maps |0> to i|1> and |1> to -i|0>") {
    StateVector sv = StateVector::zero_state(1);
    sv.apply_gate1(Gate1::Y, 0);
    CHECK(std::abs(sv.amplitude(1) - std::complex<double>(0.0, 1.0)) < 1e-12);
    sv.apply_gate1(Gate1::Y, 0);
    CHECK(std::abs(sv.amplitude(0) - 1.0) < 1e-12);
    StateVector one = StateVector::zero_state(1);
    one.apply_gate1(Gate1::X, 0);
    one.apply_gate1(Gate1::Y, 0);
    CHECK(std::abs(one.amplitude(0) - std::complex<double>(0.0, -1.0)) < 1e-12);
  }
}

TEST_CASE("random gate strings preserve the norm") {
  Rng rng(91);
  StateVector sv = StateVector::zero_state(4);
  const Gate1 gates[] = {Gate1::I, Gate1::X, Gate1::Y, Gate1::Z, Gate1::H};
  for (int step = 0; step < 200; ++step) {
    sv.apply_gate1(gates[rng.below(5)], static_cast<int>(rng.below(4)));
    if (step % 3 == 0) {
      const int control = static_cast<int>(rng.below(4));
      const int target = (control + 1 + static_cast<int>(rng.below(3))) % 4;
      sv.apply_cnot(control, target);
    }
  }
  CHECK(std::abs(sv.norm() - 1.0) < 1e-12);
}

TEST_CASE("cnot") {
  StateVector sv = StateVector::zero_state(2);
  sv.apply_cnot(0, 1);
  CHECK(std::abs(sv.amplitude(StateVector::basis_index("00")) - 1.0) < 1e-12);
  sv.apply_gate1(Gate1::X, 0);
  sv.apply_cnot(0, 1);
  CHECK(std::abs(sv.amplitude(StateVector::basis_index("11")) - 1.0) < 1e-12);
  sv.apply_cnot(1, 0);
  CHECK(std::abs(sv.amplitude(StateVector::basis_index("01")) - 1.0) < 1e-12);
  CHECK_THROWS_AS(sv.apply_cnot(0, 0), std::invalid_argument);
}

TEST_CASE("Z measurement statistics on |+> match Born weights") {
  Rng rng(1234);
  int ones = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    StateVector sv = StateVector::zero_state(1);
    sv.apply_gate1(Gate1::H, 0);
    ones += sv.measure_qubit(0, Basis::Z, rng);
  }
  const double rate = static_cast<double>(ones) / trials;
  CHECK(rate > 0.48);
  CHECK(rate < 0.52);
}

TEST_CASE("X basis measurement is deterministic on |+> and |->") {
  Rng rng(77);
  StateVector plus = StateVector::zero_state(1);
  plus.apply_gate1(Gate1::H, 0);
  CHECK(plus.measure_qubit(0, Basis::X, rng) == 0);
  StateVector minus = StateVector::zero_state(1);
  minus.apply_gate1(Gate1::X, 0);
  minus.apply_gate1(Gate1::H, 0);
  CHECK(minus.measure_qubit(0, Basis::X, rng) == 1);
  // the collapsed state stays |->
  CHECK(minus.measure_qubit(0, Basis::X, rng) == 1);
}

TEST_CASE("measurement collapses and renormalizes") {
  Rng rng(5);
  StateVector sv = StateVector::zero_state(2);
  sv.apply_gate1(Gate1::H, 0);
  sv.apply_cnot(0, 1);
  const int first = sv.measure_qubit(0, Basis::Z, rng);
  CHECK(std::abs(sv.norm() - 1.0) < 1e-10);
  const int second = sv.measure_qubit(1, Basis::Z, rng);
  CHECK(first == second);
}

TEST_CASE("measure_all returns the bit string of a basis state") {
  Rng rng(9);
  StateVector sv = StateVector::zero_state(3);
  sv.apply_gate1(Gate1::X, 0);
  sv.apply_gate1(Gate1::X, 2);
  CHECK(sv.measure_all(rng) == "101");
}

TEST_CASE("tensor and remove_qubit") {
  StateVector one = StateVector::zero_state(1);
  one.apply_gate1(Gate1::X, 0);
  StateVector combined = StateVector::tensor(one, StateVector::zero_state(1));
  CHECK(combined.num_qubits() == 2);
  CHECK(std::abs(combined.amplitude(StateVector::basis_index("10")) - 1.0) < 1e-12);

  StateVector reduced = combined;
  reduced.remove_qubit(1);
  CHECK(reduced.num_qubits() == 1);
  CHECK(std::abs(reduced.amplitude(1) - 1.0) < 1e-12);

  StateVector undetermined = StateVector::zero_state(2);
  undetermined.apply_gate1(Gate1::H, 0);
  CHECK_THROWS_AS(undetermined.remove_qubit(0), std::invalid_argument);
}

TEST_CASE("inner product") {
  StateVector a = StateVector::zero_state(1);
  StateVector b = StateVector::zero_state(1);
  b.apply_gate1(Gate1::H, 0);
  CHECK(std::abs(a.inner(b) - std::complex<double>(kInvSqrt2, 0.0)) < 1e-12);
}

TEST_CASE("pool merges registers on cross-register cnot") {
  QubitPool pool;
  const int a = pool.add_qubit(StateVector::zero_state(1));
  const int b = pool.add_qubit(StateVector::zero_state(1));
  pool.apply_gate1(Gate1::H, a);
  pool.apply_cnot(a, b);
  CHECK(&pool.register_of(a) == &pool.register_of(b));
  Rng rng(31);
  const int bit_a = pool.measure(a, Basis::Z, rng);
  const int bit_b = pool.measure(b, Basis::Z, rng);
  CHECK(bit_a == bit_b);
}

TEST_CASE("pool measure_and_discard retires the qubit") {
  QubitPool pool;
  Rng rng(8);
  StateVector minus = StateVector::zero_state(1);
  minus.apply_gate1(Gate1::X, 0);
  minus.apply_gate1(Gate1::H, 0);
  const int q = pool.add_qubit(minus);
  CHECK(pool.alive(q));
  CHECK(pool.measure_and_discard(q, Basis::X, rng) == 1);
  CHECK_FALSE(pool.alive(q));
  CHECK_THROWS_AS(pool.apply_gate1(Gate1::X, q), std::invalid_argument);
}

TEST_CASE("pool keeps entangled registers consistent after discards") {
  QubitPool pool;
  Rng rng(44);
  auto ids = pool.add_register(StateVector::zero_state(3));
  pool.apply_gate1(Gate1::H, ids[0]);
  pool.apply_cnot(ids[0], ids[1]);
  pool.apply_cnot(ids[0], ids[2]);
  const int extra = pool.add_qubit(StateVector::zero_state(1));
  pool.apply_cnot(ids[1], extra);  // merges, register now 4 qubits
  const int freed = pool.measure_and_discard(extra, Basis::Z, rng);
  const int b0 = pool.measure(ids[0], Basis::Z, rng);
  const int b1 = pool.measure(ids[1], Basis::Z, rng);
  const int b2 = pool.measure(ids[2], Basis::Z, rng);
  CHECK(b0 == b1);
  CHECK(b1 == b2);
  CHECK(freed == b1);
}
