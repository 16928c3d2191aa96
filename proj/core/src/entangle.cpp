#include "mqka/entangle.hpp"

#include <stdexcept>

namespace mqka::entangle {

GhzLabel::GhzLabel(int n, std::uint32_t value) : n_(n), value_(value) {
  if (n < 2 || n > 16) throw std::invalid_argument("label size out of range");
  if (value >> n) throw std::invalid_argument("label value too wide");
}

GhzLabel GhzLabel::from_string(std::string_view bits) {
  std::uint32_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("label must be 0/1");
    v = (v << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return GhzLabel(static_cast<int>(bits.size()), v);
}

bool GhzLabel::bit(int pos) const {
  if (pos < 0 || pos >= n_) throw std::out_of_range("label position");
  return (value_ >> (n_ - 1 - pos)) & 1u;
}

GhzLabel GhzLabel::with_flipped(int pos) const {
  if (pos < 0 || pos >= n_) throw std::out_of_range("label position");
  return GhzLabel(n_, value_ ^ (1u << (n_ - 1 - pos)));
}

std::string GhzLabel::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int i = 0; i < n_; ++i)
    if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

GhzLabel bell_bits(Bell b) {
  switch (b) {
    case Bell::PhiPlus: return GhzLabel(2, 0b00);
    case Bell::PsiPlus: return GhzLabel(2, 0b01);
    case Bell::PhiMinus: return GhzLabel(2, 0b10);
    case Bell::PsiMinus: return GhzLabel(2, 0b11);
  }
  throw std::invalid_argument("bad Bell value");
}

Bell bell_from_bits(const GhzLabel& two_bit) {
  if (two_bit.size() != 2) throw std::invalid_argument("Bell label needs 2 bits");
  switch (two_bit.value()) {
    case 0b00: return Bell::PhiPlus;
    case 0b01: return Bell::PsiPlus;
    case 0b10: return Bell::PhiMinus;
    default: return Bell::PsiMinus;
  }
}

std::string_view bell_name(Bell b) {
  switch (b) {
    case Bell::PhiPlus: return "Phi+";
    case Bell::PsiPlus: return "Psi+";
    case Bell::PhiMinus: return "Phi-";
    case Bell::PsiMinus: return "Psi-";
  }
  throw std::invalid_argument("bad Bell value");
}

qsim::StateVector prepare_bell(Bell b) { return prepare_ghz(2, bell_bits(b)); }

qsim::StateVector prepare_ghz(int n, const GhzLabel& label) {
  if (label.size() != n) throw std::invalid_argument("label size mismatch");
  // H then CNOT fan-out gives (|00..0> + |11..1>)/sqrt(2); X on the pattern
  // positions and Z on qubit 0 carry it to the labelled state.
  qsim::StateVector out = qsim::StateVector::zero_state(n);
  out.apply_gate1(qsim::Gate1::H, 0);
  for (int q = 1; q < n; ++q) out.apply_cnot(0, q);
  for (int q = 1; q < n; ++q)
    if (label.bit(q)) out.apply_gate1(qsim::Gate1::X, q);
  if (label.sign()) out.apply_gate1(qsim::Gate1::Z, 0);
  return out;
}

GhzLabel ghz_measure(qsim::StateVector& s, std::span<const int> qubits, Rng& rng) {
  int n = static_cast<int>(qubits.size());
  if (n < 2) throw std::invalid_argument("need at least two qubits");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (qubits[static_cast<std::size_t>(i)] == qubits[static_cast<std::size_t>(j)])
        throw std::invalid_argument("duplicate qubit in measurement list");
  int pivot = qubits[0];
  for (int k = 1; k < n; ++k) s.apply_cnot(pivot, qubits[static_cast<std::size_t>(k)]);
  s.apply_gate1(qsim::Gate1::H, pivot);
  std::uint32_t v = 0;
  for (int k = 0; k < n; ++k) {
    int bit = s.measure_qubit(qubits[static_cast<std::size_t>(k)], qsim::Basis::Z, rng);
    v = (v << 1) | static_cast<std::uint32_t>(bit);
  }
  return GhzLabel(n, v);
}

Bell bell_measure(qsim::StateVector& s, int qa, int qb, Rng& rng) {
  const int qs[2] = {qa, qb};
  return bell_from_bits(ghz_measure(s, qs, rng));
}

GhzLabel ghz_measure(qsim::QubitPool& pool, std::span<const int> ids, Rng& rng) {
  int n = static_cast<int>(ids.size());
  if (n < 2) throw std::invalid_argument("need at least two qubits");
  int pivot = ids[0];
  for (int k = 1; k < n; ++k) pool.apply_cnot(pivot, ids[static_cast<std::size_t>(k)]);
  pool.apply_gate1(qsim::Gate1::H, pivot);
  std::uint32_t v = 0;
  for (int k = 0; k < n; ++k) {
    int bit = pool.measure(ids[static_cast<std::size_t>(k)], qsim::Basis::Z, rng);
    v = (v << 1) | static_cast<std::uint32_t>(bit);
  }
  return GhzLabel(n, v);
}

Bell bell_measure(qsim::QubitPool& pool, int id_a, int id_b, Rng& rng) {
  const int ids[2] = {id_a, id_b};
  return bell_from_bits(ghz_measure(pool, ids, rng));
}

qsim::Gate1 to_gate(EncodingOp op) {
  switch (op) {
    case EncodingOp::I: return qsim::Gate1::I;
    case EncodingOp::X: return qsim::Gate1::X;
    case EncodingOp::Y: return qsim::Gate1::Y;
    case EncodingOp::Z: return qsim::Gate1::Z;
  }
  throw std::invalid_argument("bad op");
}

char op_char(EncodingOp op) {
  switch (op) {
    case EncodingOp::I: return 'I';
    case EncodingOp::X: return 'X';
    case EncodingOp::Y: return 'Y';
    case EncodingOp::Z: return 'Z';
  }
  throw std::invalid_argument("bad op");
}

EncodingOp op_from_char(char c) {
  switch (c) {
    case 'I': return EncodingOp::I;
    case 'X': return EncodingOp::X;
    case 'Y': return EncodingOp::Y;
    case 'Z': return EncodingOp::Z;
  }
  throw std::invalid_argument("op must be one of I X Y Z");
}

bool flips_pattern(EncodingOp op) { return op == EncodingOp::X || op == EncodingOp::Y; }
bool flips_sign(EncodingOp op) { return op == EncodingOp::Y || op == EncodingOp::Z; }

EncodingOp op_from_flips(bool pattern, bool sign) {
  if (pattern) return sign ? EncodingOp::Y : EncodingOp::X;
  return sign ? EncodingOp::Z : EncodingOp::I;
}

GhzLabel label_after_ops(const GhzLabel& initial, std::span<const EncodingOp> ops,
                         int leader_pos) {
  int n = initial.size();
  if (static_cast<int>(ops.size()) != n)
    throw std::invalid_argument("need one op per qubit position");
  if (leader_pos < 0 || leader_pos >= n) throw std::out_of_range("leader position");
  std::uint32_t v = initial.value();
  const std::uint32_t sign_mask = 1u << (n - 1);
  const std::uint32_t pattern_mask = sign_mask - 1;
  for (int pos = 0; pos < n; ++pos) {
    EncodingOp op = ops[static_cast<std::size_t>(pos)];
    if (pos != leader_pos && flips_sign(op))
      throw std::invalid_argument("Y/Z is reserved for the leader's position");
    if (flips_sign(op)) v ^= sign_mask;
    if (flips_pattern(op)) {
      if (pos == 0) v ^= pattern_mask;
      else v ^= 1u << (n - 1 - pos);
    }
  }
  return GhzLabel(n, v);
}

}  // namespace mqka::entangle
