#include "mqka/adversary.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mqka/entangle.hpp"
#include "mqka/qsim.hpp"

namespace mqka::adversary {

using entangle::Bell;
using entangle::GhzLabel;
using protocol::AgreementOutcome;
using protocol::ChannelView;
using protocol::Decoded;
using protocol::RoundConfig;
using qsim::Basis;
using qsim::Gate1;
using qsim::QubitPool;
using qsim::StateVector;

std::string attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::InterceptResend: return "intercept-resend";
    case AttackKind::CnotAttack: return "cnot";
    case AttackKind::FakeParticipant: return "fake-participant";
    case AttackKind::LeaderForge: return "leader-forge";
  }
  throw std::invalid_argument("unknown attack kind");
}

AttackKind attack_from_name(const std::string& name) {
  if (name == "intercept-resend") return AttackKind::InterceptResend;
  if (name == "cnot") return AttackKind::CnotAttack;
  if (name == "fake-participant") return AttackKind::FakeParticipant;
  if (name == "leader-forge") return AttackKind::LeaderForge;
  throw std::invalid_argument("unknown attack name: " + name);
}

namespace {

int batch_length(const RoundConfig& config, int batch) {
  const int start = batch * config.sequence_len;
  return std::min(config.sequence_len, config.key_bits - start);
}

// Measures every slot of a sequence in a random basis and resends the
// collapsed qubit. Applied to one participant's return channel.
class InterceptResendTap final : public AttackTap {
 public:
  explicit InterceptResendTap(int victim) : victim_(victim) {}

  void on_sequence(ChannelView& view) override {
    if (view.phase != 4 || view.from != victim_) return;
    for (auto& slot : view.slots) {
      const Basis basis = view.tap_rng.next_bit() ? Basis::X : Basis::Z;
      view.pool.measure(slot.qubit_id, basis, view.tap_rng);
      slot.touched = true;
    }
  }

  std::optional<GhzLabel> forge_publication(int, int, const GhzLabel&,
                                            const Decoded&, Rng& tap_rng) override {
    // No forging; the publication is just the moment the eavesdropper commits
    // to a guess for that state's key bit. Basis-mismatched single-qubit
    // snapshots carry no usable correlation, so the guess is a coin flip.
    guesses_.push_back(static_cast<int>(tap_rng.next_bit()));
    return std::nullopt;
  }

  double info_fraction(const AgreementOutcome& outcome,
                       std::span<const std::string> self_keys) const override {
    if (guesses_.empty()) return -1.0;
    const std::string oracle = protocol::final_key_oracle(self_keys);
    int correct = 0;
    for (std::size_t s = 0; s < guesses_.size() && s < oracle.size(); ++s)
      if (guesses_[s] == oracle[s] - '0') ++correct;
    return static_cast<double>(correct) / static_cast<double>(guesses_.size());
  }

  void reset() override { guesses_.clear(); }

 private:
  int victim_;
  std::vector<int> guesses_;
};

// One ancilla per batch; every qubit returning to a leader gets CNOTed into
// it. The ancilla then holds the parity of the followers' encoded bits, masked
// by whatever decoys happened to share the sequences. The eavesdropper
// unmasks the announced Z-basis decoys afterwards; X-basis decoys contribute
// coin flips she cannot remove.
class CnotTap final : public AttackTap {
 public:
  explicit CnotTap(const RoundConfig& config) : config_(config) {}

  void on_sequence(ChannelView& view) override {
    if (view.phase != 4) return;
    if (view.batch != ancilla_batch_) {
      ancilla_id_ = view.pool.add_qubit(StateVector::zero_state(1));
      ancilla_batch_ = view.batch;
    }
    for (auto& slot : view.slots) {
      view.pool.apply_cnot(slot.qubit_id, ancilla_id_);
      slot.touched = true;
    }
  }

  void on_return_phase_end(QubitPool& pool, Rng& tap_rng) override {
    if (ancilla_batch_ < 0) return;
    ancilla_bits_.push_back(pool.measure_and_discard(ancilla_id_, Basis::Z, tap_rng));
    ancilla_batch_ = -1;
    ancilla_id_ = -1;
  }

  double info_fraction(const AgreementOutcome& outcome,
                       std::span<const std::string> self_keys) const override {
    if (ancilla_bits_.empty()) return -1.0;
    int correct = 0;
    for (std::size_t b = 0; b < ancilla_bits_.size(); ++b) {
      int guess = ancilla_bits_[b];
      for (const auto& rec : outcome.result.decoy_log) {
        if (rec.touched && rec.phase == 4 && rec.batch == static_cast<int>(b) &&
            rec.basis == Basis::Z)
          guess ^= rec.expected;
      }
      int truth = 0;
      const int start = static_cast<int>(b) * config_.sequence_len;
      for (int s = start; s < start + batch_length(config_, static_cast<int>(b)); ++s) {
        const int leader = protocol::leader_for(s, config_.participants);
        for (int p = 0; p < config_.participants; ++p)
          if (p != leader) truth ^= self_keys[p][s] - '0';
      }
      if (guess == truth) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(ancilla_bits_.size());
  }

  void reset() override {
    ancilla_bits_.clear();
    ancilla_batch_ = -1;
    ancilla_id_ = -1;
  }

 private:
  RoundConfig config_;
  int ancilla_id_ = -1;
  int ancilla_batch_ = -1;
  std::vector<int> ancilla_bits_;
};

// Poses as the victim on both legs of their channel. Outbound data qubits are
// swapped for halves of fresh Bell pairs while the originals stay with the
// eavesdropper; when the victim returns an encoded substitute, a Bell
// measurement against its kept twin reads the encoded bit exactly, and the
// original (re-encoded to match) travels on to the leader. Decoy positions on
// the return leg are unknown to her, so those get measure-and-resend.
class FakeParticipantTap final : public AttackTap {
 public:
  FakeParticipantTap(const RoundConfig& config, int victim)
      : config_(config), victim_(victim) {}

  void on_sequence(ChannelView& view) override {
    if (view.phase == 1 && view.to == victim_) {
      held_.clear();
      for (std::size_t k = 0; k < view.data_slot_indices.size(); ++k) {
        const int state_index =
            view.batch * config_.sequence_len + static_cast<int>(k);
        if (protocol::leader_for(state_index, config_.participants) == victim_)
          continue;  // that qubit never comes back; substituting gains nothing
        auto pair_ids = view.pool.add_register(prepare_bell(Bell::PhiPlus));
        auto& slot = view.slots[view.data_slot_indices[k]];
        held_[static_cast<int>(k)] = {slot.qubit_id, pair_ids[0]};
        slot.qubit_id = pair_ids[1];
        slot.touched = true;
      }
      return;
    }
    if (view.phase != 4 || view.from != victim_) return;

    const int batch_len = batch_length(config_, view.batch);
    std::size_t next_data = 0;
    for (int s = 0; s < batch_len; ++s) {
      const int state_index = view.batch * config_.sequence_len + s;
      if (protocol::leader_for(state_index, config_.participants) == victim_)
        continue;
      auto& slot = view.slots[view.data_slot_indices[next_data++]];
      const auto held = held_.at(s);
      const Bell bell =
          entangle::bell_measure(view.pool, held.second, slot.qubit_id, view.tap_rng);
      const int readout = entangle::bell_bits(bell).bit(1);
      readouts_.emplace_back(state_index, readout);
      if (readout) view.pool.apply_gate1(Gate1::X, held.first);
      slot.qubit_id = held.first;
      slot.touched = true;
    }
    for (std::size_t i = 0; i < view.slots.size(); ++i) {
      if (view.slots[i].touched) continue;
      const Basis basis = view.tap_rng.next_bit() ? Basis::X : Basis::Z;
      view.pool.measure(view.slots[i].qubit_id, basis, view.tap_rng);
      view.slots[i].touched = true;
    }
  }

  double info_fraction(const AgreementOutcome&,
                       std::span<const std::string> self_keys) const override {
    if (readouts_.empty()) return -1.0;
    int correct = 0;
    for (const auto& [state, bit] : readouts_)
      if (bit == self_keys[victim_][state] - '0') ++correct;
    return static_cast<double>(correct) / static_cast<double>(readouts_.size());
  }

  void reset() override {
    held_.clear();
    readouts_.clear();
  }

 private:
  RoundConfig config_;
  int victim_;
  std::map<int, std::pair<int, int>> held_;  // batch state -> (original, kept twin)
  std::vector<std::pair<int, int>> readouts_;
};

// A dishonest leader who wants the group key bits of their own states to come
// out a chosen way. Flipping the sign bit of the published outcome toggles the
// bit every follower extracts without changing the follower operations they
// infer, so the forgery is undetectable by the published-consistency checks.
class LeaderForgeTap final : public AttackTap {
 public:
  LeaderForgeTap(const RoundConfig& config, int attacker, int desired_bit)
      : config_(config), attacker_(attacker), desired_(desired_bit) {}

  std::optional<GhzLabel> forge_publication(int, int leader,
                                            const GhzLabel& true_label,
                                            const Decoded& true_decoded,
                                            Rng&) override {
    if (leader != attacker_) return std::nullopt;
    if (true_decoded.key_bit == desired_) return std::nullopt;
    return true_label.with_flipped(0);
  }

  double info_fraction(const AgreementOutcome& outcome,
                       std::span<const std::string>) const override {
    const int witness = (attacker_ + 1) % config_.participants;
    const std::string& key = outcome.result.extracted_keys[witness];
    int forced = 0, correct = 0;
    for (int s = 0; s < static_cast<int>(key.size()); ++s) {
      if (protocol::leader_for(s, config_.participants) != attacker_) continue;
      ++forced;
      if (key[s] - '0' == desired_) ++correct;
    }
    if (forced == 0) return -1.0;
    return static_cast<double>(correct) / static_cast<double>(forced);
  }

  void reset() override {}

 private:
  RoundConfig config_;
  int attacker_;
  int desired_;
};

double interval_half_width(double rate, long long n) {
  if (n <= 0) return 0.0;
  return 1.96 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

}  // namespace

std::unique_ptr<AttackTap> make_tap(const AttackSpec& spec,
                                    const RoundConfig& config) {
  const int n = config.participants;
  switch (spec.kind) {
    case AttackKind::InterceptResend:
      if (spec.victim < 0 || spec.victim >= n)
        throw std::invalid_argument("victim out of range");
      return std::make_unique<InterceptResendTap>(spec.victim);
    case AttackKind::CnotAttack:
      return std::make_unique<CnotTap>(config);
    case AttackKind::FakeParticipant:
      if (spec.victim < 1 || spec.victim >= n)
        throw std::invalid_argument(
            "fake-participant victim must be a non-preparer participant");
      return std::make_unique<FakeParticipantTap>(config, spec.victim);
    case AttackKind::LeaderForge:
      if (spec.attacker < 0 || spec.attacker >= n)
        throw std::invalid_argument("attacker out of range");
      if (spec.desired_bit != 0 && spec.desired_bit != 1)
        throw std::invalid_argument("desired bit must be 0 or 1");
      return std::make_unique<LeaderForgeTap>(config, spec.attacker,
                                              spec.desired_bit);
  }
  throw std::invalid_argument("unknown attack kind");
}

AttackReport estimate_detection(const AttackSpec& spec,
                                const RoundConfig& config, int trials,
                                const Rng& rng) {
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  auto tap = make_tap(spec, config);

  AttackReport report;
  report.kind = spec.kind;
  report.trials = trials;
  double info_sum = 0.0;
  int info_count = 0;

  for (int t = 0; t < trials; ++t) {
    Rng trial_rng = rng.derive(static_cast<std::uint64_t>(t));
    RoundConfig trial_config = config;
    trial_config.seed = trial_rng.next_u64();
    std::vector<std::string> keys(config.participants);
    for (auto& key : keys) {
      key.reserve(config.key_bits);
      for (int b = 0; b < config.key_bits; ++b)
        key += static_cast<char>('0' + trial_rng.next_bit());
    }

    tap->reset();
    const AgreementOutcome outcome =
        protocol::run_agreement(trial_config, keys, tap.get());

    if (outcome.result.aborted) {
      ++report.detections;
    } else {
      ++report.undetected;
      const double f = tap->info_fraction(outcome, keys);
      if (f >= 0.0) {
        info_sum += f;
        ++info_count;
      }
    }
    for (const auto& rec : outcome.result.decoy_log) {
      if (!rec.touched) continue;
      ++report.decoy_trials;
      if (rec.measured != rec.expected) ++report.decoy_detections;
    }
  }

  report.detection_rate =
      static_cast<double>(report.detections) / static_cast<double>(trials);
  report.half_width = interval_half_width(report.detection_rate, trials);
  if (report.decoy_trials > 0) {
    report.per_decoy_rate = static_cast<double>(report.decoy_detections) /
                            static_cast<double>(report.decoy_trials);
    report.per_decoy_half_width =
        interval_half_width(report.per_decoy_rate, report.decoy_trials);
  }
  report.eve_info_bits = info_count ? info_sum / info_count : 0.0;
  return report;
}

}  // namespace mqka::adversary
