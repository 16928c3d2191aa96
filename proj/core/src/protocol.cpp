#include "mqka/protocol.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace mqka::protocol {

using entangle::EncodingOp;
using entangle::GhzLabel;
using qsim::Basis;
using qsim::Gate1;
using qsim::QubitPool;
using qsim::StateVector;

std::string participant_name(int index) {
  // E-initials are left out so "Eve" stays unambiguous in transcripts.
  static const char* kNames[] = {"Alice", "Bob",   "Charlie", "David", "Frank",
                                 "Grace", "Heidi", "Ivan",    "Judy",  "Kevin",
                                 "Laura", "Mike",  "Nina",    "Oscar"};
  if (index >= 0 && index < static_cast<int>(std::size(kNames)))
    return kNames[index];
  return "P" + std::to_string(index);
}

int leader_for(int state_index, int participants) {
  if (participants <= 0) throw std::invalid_argument("participants must be positive");
  if (state_index < 0) throw std::invalid_argument("state index must be non-negative");
  return state_index % participants;
}

EncodingOp follower_op_for_bit(int bit) {
  return bit ? EncodingOp::X : EncodingOp::I;
}

int bit_of_follower_op(EncodingOp op) {
  switch (op) {
    case EncodingOp::I: return 0;
    case EncodingOp::X: return 1;
    default: throw std::invalid_argument("followers encode with I or X only");
  }
}

EncodingOp leader_op_for_bit(int bit, int participants, Rng& rng) {
  // Each bit has two unitary representatives; pick one uniformly so the
  // published outcomes do not leak the bit by themselves.
  const bool alt = rng.next_bit() != 0;
  if (participants % 2 != 0) {
    if (bit == 0) return alt ? EncodingOp::Y : EncodingOp::I;
    return alt ? EncodingOp::Z : EncodingOp::X;
  }
  if (bit == 0) return alt ? EncodingOp::X : EncodingOp::I;
  return alt ? EncodingOp::Z : EncodingOp::Y;
}

int bit_of_leader_op(EncodingOp op, int participants) {
  const int x = entangle::flips_pattern(op) ? 1 : 0;
  const int z = entangle::flips_sign(op) ? 1 : 0;
  return participants % 2 != 0 ? (x ^ z) : z;
}

std::vector<DecoySpec> insert_decoys(int data_len, int count, Rng& rng) {
  if (data_len < 0 || count < 0)
    throw std::invalid_argument("negative decoy layout");
  const int total = data_len + count;
  std::vector<int> slots(total);
  std::iota(slots.begin(), slots.end(), 0);
  // Partial Fisher-Yates: the first `count` entries become the decoy slots.
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint32_t>(total - i)));
    std::swap(slots[i], slots[j]);
  }
  std::vector<int> chosen(slots.begin(), slots.begin() + count);
  std::sort(chosen.begin(), chosen.end());

  std::vector<DecoySpec> specs;
  specs.reserve(count);
  for (int pos : chosen) {
    DecoySpec spec;
    spec.position = pos;
    spec.basis = rng.next_bit() ? Basis::X : Basis::Z;
    spec.bit = static_cast<int>(rng.next_bit());
    specs.push_back(spec);
  }
  return specs;
}

StateVector decoy_state(const DecoySpec& spec) {
  StateVector sv = StateVector::zero_state(1);
  if (spec.bit) sv.apply_gate1(Gate1::X, 0);
  if (spec.basis == Basis::X) sv.apply_gate1(Gate1::H, 0);
  return sv;
}

double channel_check(std::span<const DecoySpec> specs, std::span<const int> measured) {
  if (specs.size() != measured.size())
    throw std::invalid_argument("decoy spec/measurement size mismatch");
  if (specs.empty()) return 0.0;
  int mismatched = 0;
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (measured[i] != specs[i].bit) ++mismatched;
  return static_cast<double>(mismatched) / static_cast<double>(specs.size());
}

namespace {

int key_bit_of(const std::vector<EncodingOp>& ops, int leader_pos, int participants) {
  int key = bit_of_leader_op(ops[leader_pos], participants);
  for (int pos = 0; pos < participants; ++pos)
    if (pos != leader_pos) key ^= bit_of_follower_op(ops[pos]);
  return key;
}

Decoded decode_from_flip(const GhzLabel& outcome, int leader_pos, int flip,
                         EncodingOp leader_op) {
  const int n = outcome.size();
  Decoded decoded;
  decoded.ops.resize(n);
  for (int pos = 0; pos < n; ++pos) {
    if (pos == leader_pos) {
      decoded.ops[pos] = leader_op;
      continue;
    }
    const int pattern = pos == 0 ? flip : (outcome.bit(pos) ^ flip);
    decoded.ops[pos] = pattern ? EncodingOp::X : EncodingOp::I;
  }
  decoded.key_bit = key_bit_of(decoded.ops, leader_pos, n);
  return decoded;
}

}  // namespace

Decoded extract_key_leader(const GhzLabel& outcome, EncodingOp leader_op,
                           int leader_pos, int participants) {
  if (outcome.size() != participants)
    throw std::invalid_argument("outcome size does not match participant count");
  if (leader_pos < 0 || leader_pos >= participants)
    throw std::invalid_argument("leader position out of range");
  const int x = entangle::flips_pattern(leader_op) ? 1 : 0;
  const int flip = leader_pos == 0 ? x : (outcome.bit(leader_pos) ^ x);
  return decode_from_flip(outcome, leader_pos, flip, leader_op);
}

Decoded extract_key_follower(const GhzLabel& outcome, EncodingOp own_op,
                             int own_pos, int leader_pos, int participants) {
  if (outcome.size() != participants)
    throw std::invalid_argument("outcome size does not match participant count");
  if (own_pos < 0 || own_pos >= participants || leader_pos < 0 ||
      leader_pos >= participants || own_pos == leader_pos)
    throw std::invalid_argument("bad follower/leader positions");
  const int f = bit_of_follower_op(own_op);
  const int flip = own_pos == 0 ? f : (outcome.bit(own_pos) ^ f);
  const int x = leader_pos == 0 ? flip : (outcome.bit(leader_pos) ^ flip);
  const int z = outcome.sign();
  return decode_from_flip(outcome, leader_pos, flip, entangle::op_from_flips(x != 0, z != 0));
}

std::string final_key_oracle(std::span<const std::string> self_keys) {
  if (self_keys.empty()) throw std::invalid_argument("no keys given");
  std::string out(self_keys.front().size(), '0');
  for (const auto& key : self_keys) {
    if (key.size() != out.size())
      throw std::invalid_argument("key length mismatch");
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] != '0' && key[i] != '1')
        throw std::invalid_argument("keys must be binary strings");
      out[i] = ((out[i] - '0') ^ (key[i] - '0')) ? '1' : '0';
    }
  }
  return out;
}

std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::DecoyAnnounce: return "decoy-announce";
    case MessageKind::CheckResult: return "check-result";
    case MessageKind::Abort: return "abort";
    case MessageKind::OutcomePublish: return "outcome-publish";
  }
  throw std::invalid_argument("unknown message kind");
}

void RoundTranscript::add(std::string sender, MessageKind kind,
                          std::vector<std::pair<std::string, std::string>> payload) {
  TranscriptMessage msg;
  msg.seq = static_cast<int>(messages.size());
  msg.sender = std::move(sender);
  msg.kind = kind;
  msg.payload = std::move(payload);
  messages.push_back(std::move(msg));
}

std::string to_text_line(const TranscriptMessage& msg) {
  std::string line = "seq=" + std::to_string(msg.seq) + " sender=" + msg.sender +
                     " kind=" + std::string(kind_name(msg.kind));
  for (const auto& [key, value] : msg.payload) line += " " + key + "=" + value;
  return line;
}

namespace {

std::string format_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", rate);
  return buf;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

struct SequenceLayout {
  std::vector<protocol::TransitSlot> slots;
  std::vector<int> data_slot_indices;  // slot index per data qubit, in data order
  std::vector<DecoySpec> specs;
  std::vector<int> decoy_slot_indices;  // slot index per decoy, announce order
};

// Lays out a transmission sequence: data qubits keep their relative order and
// decoys occupy the positions drawn by insert_decoys.
SequenceLayout build_sequence(QubitPool& pool, const std::vector<int>& data_ids,
                              int decoy_count, Rng& rng) {
  SequenceLayout layout;
  const int data_len = static_cast<int>(data_ids.size());
  layout.specs = insert_decoys(data_len, decoy_count, rng);
  const int total = data_len + decoy_count;
  layout.slots.resize(total);
  std::vector<bool> is_decoy(total, false);
  for (std::size_t i = 0; i < layout.specs.size(); ++i) {
    const int pos = layout.specs[i].position;
    is_decoy[pos] = true;
    layout.slots[pos].qubit_id = pool.add_qubit(decoy_state(layout.specs[i]));
    layout.decoy_slot_indices.push_back(pos);
  }
  int next_data = 0;
  for (int pos = 0; pos < total; ++pos) {
    if (is_decoy[pos]) continue;
    layout.slots[pos].qubit_id = data_ids[next_data++];
    layout.data_slot_indices.push_back(pos);
  }
  return layout;
}

std::vector<std::pair<std::string, std::string>> announce_payload(
    const SequenceLayout& layout, const std::string& phase, const std::string& route) {
  std::vector<int> positions;
  std::string bases, bits;
  for (std::size_t i = 0; i < layout.specs.size(); ++i) {
    const auto& spec = layout.specs[i];
    positions.push_back(spec.position);
    if (i) {
      bases += ',';
      bits += ',';
    }
    bases += qsim::basis_char(spec.basis);
    bits += static_cast<char>('0' + spec.bit);
  }
  return {{"phase", phase},
          {"route", route},
          {"positions", join_ints(positions)},
          {"bases", bases},
          {"bits", bits}};
}

// Measures the announced decoys of one sequence and returns the mismatch count.
// Measured immediately so adversary workspace registers stay small; decoy
// supports are disjoint from everything later ops touch, so the statistics are
// the same as a deferred check.
int run_decoy_check(QubitPool& pool, const SequenceLayout& layout, Rng& rng,
                    int batch, int phase, int channel,
                    std::vector<DecoyRecord>& log) {
  int mismatched = 0;
  for (std::size_t i = 0; i < layout.specs.size(); ++i) {
    const int slot = layout.decoy_slot_indices[i];
    const auto& spec = layout.specs[i];
    const int bit =
        pool.measure_and_discard(layout.slots[slot].qubit_id, spec.basis, rng);
    if (bit != spec.bit) ++mismatched;
    log.push_back({batch, phase, channel, slot, spec.basis, spec.bit, bit,
                   layout.slots[slot].touched});
  }
  return mismatched;
}

}  // namespace

AgreementOutcome run_agreement(const RoundConfig& config,
                               std::span<const std::string> self_keys,
                               ChannelTap* tap) {
  const int n = config.participants;
  if (n < 2 || n > 14)
    throw std::invalid_argument("participants must be between 2 and 14");
  if (config.key_bits < 1) throw std::invalid_argument("key_bits must be positive");
  if (config.decoys_per_sequence < 0)
    throw std::invalid_argument("decoys_per_sequence must be non-negative");
  if (config.sequence_len < 1)
    throw std::invalid_argument("sequence_len must be positive");
  if (config.error_threshold < 0.0 || config.error_threshold > 1.0)
    throw std::invalid_argument("error_threshold must lie in [0,1]");
  if (static_cast<int>(self_keys.size()) != n)
    throw std::invalid_argument("need one key string per participant");
  for (const auto& key : self_keys) {
    if (static_cast<int>(key.size()) != config.key_bits)
      throw std::invalid_argument("key string length must equal key_bits");
    for (char c : key)
      if (c != '0' && c != '1')
        throw std::invalid_argument("key strings must be binary");
  }

  Rng run_rng(config.seed);
  Rng tap_rng = Rng(config.seed).derive(0x7461702d726e67ULL);

  AgreementOutcome out;
  out.result.extracted_keys.assign(n, std::string());

  const int d = config.decoys_per_sequence;

  for (int batch_start = 0; batch_start < config.key_bits && !out.result.aborted;
       batch_start += config.sequence_len) {
    const int batch_end = std::min(batch_start + config.sequence_len, config.key_bits);
    const int batch_len = batch_end - batch_start;
    const int batch_index = batch_start / config.sequence_len;

    QubitPool pool;
    // qubit ids per state, indexed by participant position
    std::vector<std::vector<int>> state_ids(batch_len);
    std::vector<std::vector<EncodingOp>> state_ops(batch_len,
                                                   std::vector<EncodingOp>(n));
    const GhzLabel base_label(n, 0);
    for (int s = 0; s < batch_len; ++s)
      state_ids[s] = pool.add_register(entangle::prepare_ghz(n, base_label));

    // distribution: one sequence from the preparer to every other participant
    out.result.counters.delay_units += 1;
    int dist_checked = 0, dist_mismatched = 0;
    for (int p = 1; p < n; ++p) {
      std::vector<int> data_ids(batch_len);
      for (int s = 0; s < batch_len; ++s) data_ids[s] = state_ids[s][p];
      SequenceLayout layout = build_sequence(pool, data_ids, d, run_rng);
      out.result.counters.transmissions += batch_len;
      out.result.counters.decoy_qubits += d;

      if (tap) {
        ChannelView view{pool,
                         tap_rng,
                         1,
                         batch_index,
                         0,
                         p,
                         std::span<TransitSlot>(layout.slots),
                         std::span<const int>(layout.data_slot_indices)};
        tap->on_sequence(view);
      }
      for (int s = 0; s < batch_len; ++s)
        state_ids[s][p] = layout.slots[layout.data_slot_indices[s]].qubit_id;

      const std::string route = participant_name(0) + "->" + participant_name(p);
      out.transcript.add(participant_name(0), MessageKind::DecoyAnnounce,
                         announce_payload(layout, "distribution", route));
      const int mismatched = run_decoy_check(pool, layout, run_rng, batch_index,
                                             1, p, out.result.decoy_log);
      dist_checked += d;
      dist_mismatched += mismatched;
      out.result.checks.push_back({batch_index, 1, p, d, mismatched});
    }

    const double dist_rate =
        dist_checked ? static_cast<double>(dist_mismatched) / dist_checked : 0.0;
    out.transcript.add(participant_name(0), MessageKind::CheckResult,
                       {{"phase", "distribution"},
                        {"batch", std::to_string(batch_index)},
                        {"checked", std::to_string(dist_checked)},
                        {"mismatches", std::to_string(dist_mismatched)},
                        {"rate", format_rate(dist_rate)}});
    if (dist_rate > config.error_threshold) {
      out.result.aborted = true;
      out.result.abort_reason = "distribution check failed";
      out.transcript.add(participant_name(0), MessageKind::Abort,
                         {{"phase", "distribution"},
                          {"rate", format_rate(dist_rate)},
                          {"threshold", format_rate(config.error_threshold)}});
      break;
    }

    // encoding: everyone applies their key operation to their own qubit
    for (int s = 0; s < batch_len; ++s) {
      const int state_index = batch_start + s;
      const int leader = leader_for(state_index, n);
      for (int p = 0; p < n; ++p) {
        const int bit = self_keys[p][state_index] - '0';
        const EncodingOp op = p == leader ? leader_op_for_bit(bit, n, run_rng)
                                          : follower_op_for_bit(bit);
        state_ops[s][p] = op;
        pool.apply_gate1(entangle::to_gate(op), state_ids[s][p]);
      }
    }

    // return: each participant sends the qubits of the states they do not lead
    out.result.counters.delay_units += 1;
    int ret_checked = 0, ret_mismatched = 0;
    for (int p = 0; p < n; ++p) {
      std::vector<int> data_ids;
      std::vector<int> data_states;
      std::string dest;
      for (int s = 0; s < batch_len; ++s) {
        const int leader = leader_for(batch_start + s, n);
        if (leader == p) continue;
        data_ids.push_back(state_ids[s][p]);
        data_states.push_back(s);
        if (!dest.empty()) dest += ',';
        dest += participant_name(leader);
      }
      if (data_ids.empty()) continue;

      SequenceLayout layout = build_sequence(pool, data_ids, d, run_rng);
      out.result.counters.transmissions += static_cast<long long>(data_ids.size());
      out.result.counters.decoy_qubits += d;

      if (tap) {
        ChannelView view{pool,
                         tap_rng,
                         4,
                         batch_index,
                         p,
                         -1,
                         std::span<TransitSlot>(layout.slots),
                         std::span<const int>(layout.data_slot_indices)};
        tap->on_sequence(view);
      }
      for (std::size_t k = 0; k < data_states.size(); ++k)
        state_ids[data_states[k]][p] =
            layout.slots[layout.data_slot_indices[k]].qubit_id;

      auto payload = announce_payload(layout, "return",
                                      participant_name(p) + "->leaders");
      payload.insert(payload.begin() + 2, {"dest", dest});
      out.transcript.add(participant_name(p), MessageKind::DecoyAnnounce,
                         std::move(payload));
      const int mismatched = run_decoy_check(pool, layout, run_rng, batch_index,
                                             4, p, out.result.decoy_log);
      ret_checked += d;
      ret_mismatched += mismatched;
      out.result.checks.push_back({batch_index, 4, p, d, mismatched});
    }
    if (tap) tap->on_return_phase_end(pool, tap_rng);

    const std::string checker = participant_name(leader_for(batch_start, n));
    const double ret_rate =
        ret_checked ? static_cast<double>(ret_mismatched) / ret_checked : 0.0;
    out.transcript.add(checker, MessageKind::CheckResult,
                       {{"phase", "return"},
                        {"batch", std::to_string(batch_index)},
                        {"checked", std::to_string(ret_checked)},
                        {"mismatches", std::to_string(ret_mismatched)},
                        {"rate", format_rate(ret_rate)}});
    if (ret_rate > config.error_threshold) {
      out.result.aborted = true;
      out.result.abort_reason = "return check failed";
      out.transcript.add(checker, MessageKind::Abort,
                         {{"phase", "return"},
                          {"rate", format_rate(ret_rate)},
                          {"threshold", format_rate(config.error_threshold)}});
      break;
    }

    // measurement and key extraction
    for (int s = 0; s < batch_len; ++s) {
      const int state_index = batch_start + s;
      const int leader = leader_for(state_index, n);
      const GhzLabel label = entangle::ghz_measure(pool, state_ids[s], run_rng);
      out.result.counters.measurements += n;

      const Decoded true_decoded =
          extract_key_leader(label, state_ops[s][leader], leader, n);
      GhzLabel published = label;
      if (tap) {
        auto forged =
            tap->forge_publication(state_index, leader, label, true_decoded, tap_rng);
        if (forged) published = *forged;
      }
      out.transcript.add(participant_name(leader), MessageKind::OutcomePublish,
                         {{"state", std::to_string(state_index)},
                          {"outcome", published.to_string()}});

      for (int p = 0; p < n; ++p) {
        int bit;
        if (p == leader) {
          if (published == label) {
            bit = true_decoded.key_bit;
          } else {
            // A leader who altered the publication records what the others will
            // extract; any follower viewpoint gives the group bit.
            const int other = leader == 0 ? 1 : 0;
            bit = extract_key_follower(published, state_ops[s][other], other,
                                       leader, n)
                      .key_bit;
          }
        } else {
          bit = extract_key_follower(published, state_ops[s][p], p, leader, n)
                    .key_bit;
        }
        out.result.extracted_keys[p] += static_cast<char>('0' + bit);
      }
    }
  }

  return out;
}

}  // namespace mqka::protocol
