#ifndef MQKA_QSIM_HPP
#define MQKA_QSIM_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqka/rng.hpp"

namespace mqka::qsim {

using Amplitude = std::complex<double>;

enum class Gate1 { I, X, Y, Z, H };
enum class Basis { Z, X };

char basis_char(Basis b);
Basis basis_from_char(char c);

// Dense state vector over n qubits, n <= 16. Qubit 0 is the leftmost symbol
// in a ket, i.e. the most significant bit of the amplitude index.
class StateVector {
 public:
  // |bits>, e.g. basis_state("101") puts amplitude 1 at index 5.
  static StateVector basis_state(std::string_view bits);
  static std::size_t basis_index(std::string_view bits);
  static StateVector zero_state(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  Amplitude amplitude(std::size_t index) const { return amps_.at(index); }

  void apply_gate1(Gate1 g, int qubit);
  void apply_cnot(int control, int target);

  // Projective measurement of one qubit; collapses and renormalises.
  // X basis reports 0 for |+> and 1 for |->.
  int measure_qubit(int qubit, Basis basis, Rng& rng);

  // Z-measures every qubit left to right, returns the outcome bit string.
  std::string measure_all(Rng& rng);

  static StateVector tensor(const StateVector& a, const StateVector& b);

  // Drops a qubit whose value is already determined (post-measurement).
  void remove_qubit(int qubit);

  double norm() const;
  Amplitude inner(const StateVector& other) const;

 private:
  StateVector(int n, std::vector<Amplitude> amps);
  int bit_shift(int qubit) const { return num_qubits_ - 1 - qubit; }
  void check_qubit(int qubit) const;

  int num_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

// A pool of independent registers with stable qubit ids. Two-qubit gates
// across registers merge them; measured qubits can be discarded to keep the
// joint dimension small. This is what lets an eavesdropper entangle an
// ancilla with qubits that live in otherwise separate states.
class QubitPool {
 public:
  // Adds the register and returns one id per qubit, in qubit order.
  std::vector<int> add_register(StateVector sv);
  int add_qubit(StateVector sv);  // single-qubit convenience

  void apply_gate1(Gate1 g, int id);
  void apply_cnot(int control_id, int target_id);

  int measure(int id, Basis basis, Rng& rng);
  int measure_and_discard(int id, Basis basis, Rng& rng);

  // Register currently holding `id`, plus the qubit's position inside it.
  const StateVector& register_of(int id) const;
  int position_of(int id) const;
  bool alive(int id) const;

 private:
  struct Slot {
    int reg = -1;  // -1 once discarded
    int pos = -1;
  };
  void merge(int reg_a, int reg_b);
  std::pair<int, int> locate(int id) const;

  std::vector<Slot> slots_;
  std::vector<StateVector> regs_;
  std::vector<std::vector<int>> members_;
};

}  // namespace mqka::qsim

#endif
