#pragma once

#include <memory>
#include <span>
#include <string>

#include "mqka/protocol.hpp"
#include "mqka/rng.hpp"

namespace mqka::adversary {

enum class AttackKind {
  InterceptResend,  // measure-and-resend on one participant's return channel
  CnotAttack,       // CNOT every returning qubit into a shared ancilla
  FakeParticipant,  // entangle-substitute one participant's qubits, read them out
  LeaderForge,      // a dishonest leader publishes doctored outcomes
};

std::string attack_name(AttackKind kind);
AttackKind attack_from_name(const std::string& name);

struct AttackSpec {
  AttackKind kind = AttackKind::InterceptResend;
  int victim = 1;       // InterceptResend / FakeParticipant: whose channel
  int attacker = 0;     // LeaderForge: the dishonest participant
  int desired_bit = 1;  // LeaderForge: bit forced on states the attacker leads
};

// Channel tap with an attack-specific inference step. After an undetected run
// the estimator asks how much of what the attack set out to learn (or force)
// actually came out right.
class AttackTap : public protocol::ChannelTap {
 public:
  // Fraction of this trial's inferences that match the ground truth, or a
  // negative value when the trial produced nothing to score.
  virtual double info_fraction(const protocol::AgreementOutcome& outcome,
                               std::span<const std::string> self_keys) const = 0;
  // Clears per-run state so one tap can serve many trials.
  virtual void reset() = 0;
};

std::unique_ptr<AttackTap> make_tap(const AttackSpec& spec,
                                    const protocol::RoundConfig& config);

struct AttackReport {
  AttackKind kind = AttackKind::InterceptResend;
  int trials = 0;
  int detections = 0;             // aborted rounds
  double detection_rate = 0.0;
  double half_width = 0.0;        // 95% normal-approximation interval
  long long decoy_trials = 0;     // checked decoys the tap acted on
  long long decoy_detections = 0;
  double per_decoy_rate = 0.0;
  double per_decoy_half_width = 0.0;
  int undetected = 0;
  double eve_info_bits = 0.0;     // mean info_fraction over undetected trials
};

// Monte Carlo estimate of detection probability and leaked information.
// Each trial derives its own seed and key material from `rng`, so results do
// not depend on trial order.
AttackReport estimate_detection(const AttackSpec& spec,
                                const protocol::RoundConfig& config, int trials,
                                const Rng& rng);

}  // namespace mqka::adversary
