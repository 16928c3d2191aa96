#ifndef MQKA_PROTOCOL_HPP
#define MQKA_PROTOCOL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mqka/entangle.hpp"
#include "mqka/qsim.hpp"
#include "mqka/rng.hpp"

namespace mqka::protocol {

struct RoundConfig {
  int participants = 3;
  int key_bits = 8;
  int decoys_per_sequence = 10;
  int sequence_len = 100;      // data qubits carried per sequence batch
  double error_threshold = 0.0;
  std::uint64_t seed = 0;
};

// Participant 0 prepares and distributes; names are only for transcripts.
std::string participant_name(int index);

// GHZ state i is led by participant i mod n.
int leader_for(int state_index, int n);

// Follower encoding: I for 0, X for 1.
entangle::EncodingOp follower_op_for_bit(int bit);
int bit_of_follower_op(entangle::EncodingOp op);

// Leader encoding depends on the parity of the party count:
//   n odd:  {I, Y} encode 0, {X, Z} encode 1
//   n even: {I, X} encode 0, {Y, Z} encode 1
// Each bit has two representatives; the choice between them is uniform.
entangle::EncodingOp leader_op_for_bit(int bit, int n, Rng& rng);
int bit_of_leader_op(entangle::EncodingOp op, int n);

struct DecoySpec {
  int position;          // slot index within the interleaved sequence
  qsim::Basis basis;
  int bit;               // 0 -> |0>/|+>, 1 -> |1>/|->
};

// `count` decoys for a sequence of `data_len` qubits: distinct slots drawn
// uniformly from [0, data_len + count), random basis, random bit.
std::vector<DecoySpec> insert_decoys(int data_len, int count, Rng& rng);

qsim::StateVector decoy_state(const DecoySpec& spec);

// Fraction of announced decoys whose measured bit disagrees.
double channel_check(std::span<const DecoySpec> specs, std::span<const int> measured);

// Everything any participant can reconstruct from a published outcome.
struct Decoded {
  std::vector<entangle::EncodingOp> ops;  // one per position, leader's included
  int key_bit;
};

// The leader knows its own op; the outcome then fixes every follower's op.
Decoded extract_key_leader(const entangle::GhzLabel& outcome,
                           entangle::EncodingOp leader_op, int leader_pos, int n);

// A follower knows only its own op and position, and recovers the rest,
// including which of the four ops the leader applied.
Decoded extract_key_follower(const entangle::GhzLabel& outcome,
                             entangle::EncodingOp own_op, int own_pos,
                             int leader_pos, int n);

// Reference final key: bitwise XOR of all self keys.
std::string final_key_oracle(std::span<const std::string> self_keys);

enum class MessageKind { DecoyAnnounce, CheckResult, Abort, OutcomePublish };
std::string_view kind_name(MessageKind k);

struct TranscriptMessage {
  int seq;
  std::string sender;
  MessageKind kind;
  std::vector<std::pair<std::string, std::string>> payload;
};

struct RoundTranscript {
  std::vector<TranscriptMessage> messages;
  void add(std::string sender, MessageKind kind,
           std::vector<std::pair<std::string, std::string>> payload);
};

std::string to_text_line(const TranscriptMessage& m);

struct CheckStats {
  int batch;
  int phase;      // 1 = distribution, 4 = return
  int channel;    // phase 1: receiving participant; phase 4: sending participant
  int checked;
  int mismatched;
};

struct CostCounters {
  long long transmissions = 0;   // data qubit transfer events
  long long measurements = 0;    // single-qubit measurements on data qubits
  long long decoy_qubits = 0;    // decoys inserted across all sequences
  long long delay_units = 0;     // transmission rounds (send + return per batch)
};

// Outcome of checking a single decoy, kept at full granularity so attack
// statistics can be conditioned on basis and on whether a tap acted on it.
struct DecoyRecord {
  int batch;
  int phase;
  int channel;  // same convention as CheckStats
  int slot;
  qsim::Basis basis;
  int expected;
  int measured;
  bool touched;  // a tap acted on this slot while it was in transit
};

struct AgreementResult {
  bool aborted = false;
  std::string abort_reason;
  std::vector<std::string> extracted_keys;  // per participant; aligned, possibly short on abort
  std::vector<CheckStats> checks;
  std::vector<DecoyRecord> decoy_log;
  CostCounters counters;
};

// One position of a sequence in transit. Taps may measure or replace the
// qubit behind `qubit_id` but are not told whether it is data or decoy.
// A tap that acts on a slot should set `touched`.
struct TransitSlot {
  int qubit_id;
  bool touched = false;
};

class ChannelTap;

struct ChannelView {
  qsim::QubitPool& pool;
  Rng& tap_rng;                 // adversary's private stream
  int phase;                    // 1 = distribution, 4 = return
  int batch;
  int from;                     // sending participant
  int to;                       // receiving participant; -1 when routed per state
  std::span<TransitSlot> slots;
  // Which slots carry data, in state order. A tap that models a
  // position-blind adversary must not read this.
  std::span<const int> data_slot_indices;
};

// Adversary hook. The honest run never calls tap_rng and a null tap changes
// nothing, so runs with and without an installed tap are bit-identical.
class ChannelTap {
 public:
  virtual ~ChannelTap() = default;
  virtual void on_sequence(ChannelView& view) { (void)view; }
  virtual void on_return_phase_end(qsim::QubitPool& pool, Rng& tap_rng) {
    (void)pool;
    (void)tap_rng;
  }
  // A dishonest leader may replace the label it publishes.
  virtual std::optional<entangle::GhzLabel> forge_publication(
      int state_index, int leader, const entangle::GhzLabel& true_label,
      const Decoded& true_decoded, Rng& tap_rng) {
    (void)state_index;
    (void)leader;
    (void)true_label;
    (void)true_decoded;
    (void)tap_rng;
    return std::nullopt;
  }
};

struct AgreementOutcome {
  AgreementResult result;
  RoundTranscript transcript;
};

// Runs the full agreement: GHZ distribution with decoys, channel check,
// round-robin leader/follower encoding, decoy-protected return, entangled
// measurement, publication and extraction. `self_keys` holds one bit string
// of length key_bits per participant. A tap, if given, sees every sequence.
AgreementOutcome run_agreement(const RoundConfig& config,
                               std::span<const std::string> self_keys,
                               ChannelTap* tap = nullptr);

}  // namespace mqka::protocol

#endif
