#include "mqka/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace mqka::qsim {

namespace {
constexpr int kMaxQubits = 16;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

char basis_char(Basis b) { return b == Basis::Z ? 'Z' : 'X'; }

Basis basis_from_char(char c) {
  if (c == 'Z') return Basis::Z;
  if (c == 'X') return Basis::X;
  throw std::invalid_argument("basis must be Z or X");
}

StateVector::StateVector(int n, std::vector<Amplitude> amps)
    : num_qubits_(n), amps_(std::move(amps)) {}

std::size_t StateVector::basis_index(std::string_view bits) {
  const int n = static_cast<int>(bits.size());
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("qubit count out of range");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must be 0/1");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return index;
}

StateVector StateVector::basis_state(std::string_view bits) {
  const int n = static_cast<int>(bits.size());
  const std::size_t index = basis_index(bits);
  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude{0.0, 0.0});
  amps[index] = Amplitude{1.0, 0.0};
  return StateVector(n, std::move(amps));
}

StateVector StateVector::zero_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count out of range");
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amps[0] = Amplitude{1.0, 0.0};
  return StateVector(num_qubits, std::move(amps));
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) throw std::out_of_range("qubit index");
}

void StateVector::apply_gate1(Gate1 g, int qubit) {
  check_qubit(qubit);
  if (g == Gate1::I) return;
  const std::size_t stride = std::size_t{1} << bit_shift(qubit);
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      Amplitude a0 = amps_[i];
      Amplitude a1 = amps_[i + stride];
      switch (g) {
        case Gate1::X:
          amps_[i] = a1;
          amps_[i + stride] = a0;
          break;
        case Gate1::Y:
          amps_[i] = Amplitude{0.0, -1.0} * a1;
          amps_[i + stride] = Amplitude{0.0, 1.0} * a0;
          break;
        case Gate1::Z:
          amps_[i + stride] = -a1;
          break;
        case Gate1::H:
          amps_[i] = (a0 + a1) * kInvSqrt2;
          amps_[i + stride] = (a0 - a1) * kInvSqrt2;
          break;
        case Gate1::I:
          break;
      }
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("cnot needs distinct qubits");
  const std::size_t cmask = std::size_t{1} << bit_shift(control);
  const std::size_t tmask = std::size_t{1} << bit_shift(target);
  const std::size_t dim = amps_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
  }
}

int StateVector::measure_qubit(int qubit, Basis basis, Rng& rng) {
  check_qubit(qubit);
  if (basis == Basis::X) {
    apply_gate1(Gate1::H, qubit);
    int bit = measure_qubit(qubit, Basis::Z, rng);
    apply_gate1(Gate1::H, qubit);  // leave |+> or |-> behind
    return bit;
  }
  const std::size_t mask = std::size_t{1} << bit_shift(qubit);
  double p1 = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) p1 += std::norm(amps_[i]);
  }
  int bit = rng.next_double() < p1 ? 1 : 0;
  double p = bit ? p1 : 1.0 - p1;
  if (p <= 0.0) throw std::runtime_error("measurement hit a zero-probability branch");
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    bool keep = ((i & mask) != 0) == (bit == 1);
    amps_[i] = keep ? amps_[i] * scale : Amplitude{0.0, 0.0};
  }
  return bit;
}

std::string StateVector::measure_all(Rng& rng) {
  std::string bits(static_cast<std::size_t>(num_qubits_), '0');
  for (int q = 0; q < num_qubits_; ++q) {
    bits[static_cast<std::size_t>(q)] =
        measure_qubit(q, Basis::Z, rng) ? '1' : '0';
  }
  return bits;
}

StateVector StateVector::tensor(const StateVector& a, const StateVector& b) {
  int n = a.num_qubits_ + b.num_qubits_;
  if (n > kMaxQubits) throw std::invalid_argument("tensor exceeds max qubit count");
  std::vector<Amplitude> amps(std::size_t{1} << n);
  const std::size_t bdim = b.amps_.size();
  for (std::size_t i = 0; i < a.amps_.size(); ++i) {
    for (std::size_t j = 0; j < bdim; ++j) {
      amps[i * bdim + j] = a.amps_[i] * b.amps_[j];
    }
  }
  return StateVector(n, std::move(amps));
}

void StateVector::remove_qubit(int qubit) {
  check_qubit(qubit);
  if (num_qubits_ == 1) throw std::invalid_argument("cannot empty a register");
  const std::size_t mask = std::size_t{1} << bit_shift(qubit);
  double w1 = 0.0, w0 = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) w1 += std::norm(amps_[i]);
    else w0 += std::norm(amps_[i]);
  }
  if (w0 > 1e-9 && w1 > 1e-9)
    throw std::invalid_argument("qubit still undetermined, measure it first");
  const int kept = w1 > w0 ? 1 : 0;
  const std::size_t low = mask - 1;  // bits below the removed one
  std::vector<Amplitude> amps(amps_.size() / 2);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (((i & mask) != 0) != (kept == 1)) continue;
    amps[((i >> 1) & ~low) | (i & low)] = amps_[i];
  }
  amps_ = std::move(amps);
  --num_qubits_;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Amplitude StateVector::inner(const StateVector& other) const {
  if (other.num_qubits_ != num_qubits_)
    throw std::invalid_argument("inner product needs equal qubit counts");
  Amplitude s{0.0, 0.0};
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

std::vector<int> QubitPool::add_register(StateVector sv) {
  int reg = static_cast<int>(regs_.size());
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(sv.num_qubits()));
  std::vector<int> member_ids;
  for (int pos = 0; pos < sv.num_qubits(); ++pos) {
    int id = static_cast<int>(slots_.size());
    slots_.push_back(Slot{reg, pos});
    ids.push_back(id);
    member_ids.push_back(id);
  }
  regs_.push_back(std::move(sv));
  members_.push_back(std::move(member_ids));
  return ids;
}

int QubitPool::add_qubit(StateVector sv) {
  if (sv.num_qubits() != 1) throw std::invalid_argument("expected a single qubit");
  return add_register(std::move(sv))[0];
}

std::pair<int, int> QubitPool::locate(int id) const {
  if (id < 0 || id >= static_cast<int>(slots_.size()))
    throw std::out_of_range("qubit id");
  const Slot& s = slots_[static_cast<std::size_t>(id)];
  if (s.reg < 0) throw std::invalid_argument("qubit was discarded");
  return {s.reg, s.pos};
}

bool QubitPool::alive(int id) const {
  return id >= 0 && id < static_cast<int>(slots_.size()) &&
         slots_[static_cast<std::size_t>(id)].reg >= 0;
}

const StateVector& QubitPool::register_of(int id) const {
  return regs_[static_cast<std::size_t>(locate(id).first)];
}

int QubitPool::position_of(int id) const { return locate(id).second; }

void QubitPool::merge(int reg_a, int reg_b) {
  StateVector joined = StateVector::tensor(regs_[static_cast<std::size_t>(reg_a)],
                                           regs_[static_cast<std::size_t>(reg_b)]);
  int offset = regs_[static_cast<std::size_t>(reg_a)].num_qubits();
  for (int id : members_[static_cast<std::size_t>(reg_b)]) {
    Slot& s = slots_[static_cast<std::size_t>(id)];
    s.reg = reg_a;
    s.pos += offset;
    members_[static_cast<std::size_t>(reg_a)].push_back(id);
  }
  members_[static_cast<std::size_t>(reg_b)].clear();
  regs_[static_cast<std::size_t>(reg_b)] = StateVector::zero_state(1);
  regs_[static_cast<std::size_t>(reg_a)] = std::move(joined);
}

void QubitPool::apply_gate1(qsim::Gate1 g, int id) {
  auto [reg, pos] = locate(id);
  regs_[static_cast<std::size_t>(reg)].apply_gate1(g, pos);
}

void QubitPool::apply_cnot(int control_id, int target_id) {
  auto [creg, cpos] = locate(control_id);
  auto [treg, tpos] = locate(target_id);
  if (creg != treg) {
    merge(creg, treg);
    std::tie(creg, cpos) = locate(control_id);
    std::tie(treg, tpos) = locate(target_id);
  }
  regs_[static_cast<std::size_t>(creg)].apply_cnot(cpos, tpos);
}

int QubitPool::measure(int id, Basis basis, Rng& rng) {
  auto [reg, pos] = locate(id);
  return regs_[static_cast<std::size_t>(reg)].measure_qubit(pos, basis, rng);
}

int QubitPool::measure_and_discard(int id, Basis basis, Rng& rng) {
  int bit = measure(id, basis, rng);
  auto [reg, pos] = locate(id);
  auto& members = members_[static_cast<std::size_t>(reg)];
  if (members.size() > 1) {
    // X-basis leaves |+>/|->; rotate back so the qubit is determinate.
    if (basis == Basis::X) regs_[static_cast<std::size_t>(reg)].apply_gate1(Gate1::H, pos);
    regs_[static_cast<std::size_t>(reg)].remove_qubit(pos);
    for (int m : members) {
      Slot& s = slots_[static_cast<std::size_t>(m)];
      if (s.pos > pos) --s.pos;
    }
    members.erase(std::find(members.begin(), members.end(), id));
  } else {
    members.clear();
    regs_[static_cast<std::size_t>(reg)] = StateVector::zero_state(1);
  }
  slots_[static_cast<std::size_t>(id)] = Slot{-1, -1};
  return bit;
}

}  // namespace mqka::qsim
