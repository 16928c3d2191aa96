#ifndef MQKA_ENTANGLE_HPP
#define MQKA_ENTANGLE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "mqka/qsim.hpp"

namespace mqka::entangle {

// Label b1 b2 .. bn of an n-qubit maximally entangled state
//   (|0 b2..bn> + (-1)^b1 |1 ~b2..~bn>) / sqrt(2).
// b1 is the sign bit, b2..bn the pattern bits. The Bell states are n = 2.
class GhzLabel {
 public:
  GhzLabel(int n, std::uint32_t value);
  static GhzLabel from_string(std::string_view bits);

  int size() const { return n_; }
  std::uint32_t value() const { return value_; }
  bool bit(int pos) const;          // pos 0 is the sign bit
  bool sign() const { return bit(0); }

  GhzLabel with_flipped(int pos) const;
  std::string to_string() const;

  friend bool operator==(const GhzLabel&, const GhzLabel&) = default;

 private:
  int n_;
  std::uint32_t value_;
};

enum class Bell { PhiPlus, PsiPlus, PhiMinus, PsiMinus };

GhzLabel bell_bits(Bell b);               // PhiPlus<->00, PsiPlus<->01, PhiMinus<->10, PsiMinus<->11
Bell bell_from_bits(const GhzLabel& two_bit);
std::string_view bell_name(Bell b);       // "Phi+", "Psi+", "Phi-", "Psi-"

qsim::StateVector prepare_bell(Bell b);
qsim::StateVector prepare_ghz(int n, const GhzLabel& label);

// Entangled-basis measurement: CNOT from the first listed qubit to each of
// the others, H on the first, then Z-measure all, in listed order. Collapses
// the measured qubits. The outcome string is the state's label when the
// listed order matches the label's qubit order.
GhzLabel ghz_measure(qsim::StateVector& s, std::span<const int> qubits, Rng& rng);
Bell bell_measure(qsim::StateVector& s, int qa, int qb, Rng& rng);

GhzLabel ghz_measure(qsim::QubitPool& pool, std::span<const int> ids, Rng& rng);
Bell bell_measure(qsim::QubitPool& pool, int id_a, int id_b, Rng& rng);

// Per-qubit encoding operations used by the key agreement. A round's leader
// may apply any of the four; everyone else is restricted to I/X.
enum class EncodingOp { I, X, Y, Z };

qsim::Gate1 to_gate(EncodingOp op);
char op_char(EncodingOp op);
EncodingOp op_from_char(char c);
bool flips_pattern(EncodingOp op);  // X or Y
bool flips_sign(EncodingOp op);     // Y or Z
EncodingOp op_from_flips(bool pattern, bool sign);

// Label reached from `initial` after each position applies its op, computed
// without touching amplitudes. Position 0 is special: X/Y there complement
// every pattern bit. Y/Z anywhere flip the sign bit; X (or Y) at position
// k >= 1 flips pattern bit k. Ops in {Y, Z} are rejected at any position
// other than leader_pos.
GhzLabel label_after_ops(const GhzLabel& initial, std::span<const EncodingOp> ops,
                         int leader_pos = 0);

}  // namespace mqka::entangle

#endif
