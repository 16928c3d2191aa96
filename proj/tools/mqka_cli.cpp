#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mqka/adversary.hpp"
#include "mqka/costmodel.hpp"
#include "mqka/protocol.hpp"
#include "mqka/rng.hpp"
#include "mqka/selftest.hpp"

namespace {

using json = nlohmann::ordered_json;
using mqka::Rng;
using mqka::adversary::AttackSpec;
using mqka::protocol::RoundConfig;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitAborted = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitUsage = 64;

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Emits either plain text lines or one JSON object per line; in the JSON
// stream every line carries seq, sender, kind and payload.
class Emitter {
 public:
  explicit Emitter(bool json_lines) : json_lines_(json_lines) {}

  void line(const std::string& sender, const std::string& kind,
            const std::vector<std::pair<std::string, std::string>>& payload,
            const std::string& text) {
    if (json_lines_) {
      json obj;
      obj["seq"] = seq_++;
      obj["sender"] = sender;
      obj["kind"] = kind;
      json pl = json::object();
      for (const auto& [key, value] : payload) pl[key] = value;
      obj["payload"] = pl;
      std::printf("%s\n", obj.dump().c_str());
    } else {
      std::printf("%s\n", text.c_str());
    }
  }

  void transcript(const mqka::protocol::TranscriptMessage& msg) {
    line(msg.sender, std::string(kind_name(msg.kind)), msg.payload,
         mqka::protocol::to_text_line(msg));
  }

 private:
  bool json_lines_;
  int seq_ = 0;
};

std::vector<std::pair<std::string, std::string>> config_payload(
    const RoundConfig& config) {
  return {{"participants", std::to_string(config.participants)},
          {"key-bits", std::to_string(config.key_bits)},
          {"decoys", std::to_string(config.decoys_per_sequence)},
          {"sequence-len", std::to_string(config.sequence_len)},
          {"threshold", format_double(config.error_threshold)}};
}

std::string payload_text(
    const std::string& prefix,
    const std::vector<std::pair<std::string, std::string>>& payload) {
  std::string out = prefix;
  for (const auto& [key, value] : payload) out += " " + key + "=" + value;
  return out;
}

std::vector<std::string> make_keys(const RoundConfig& config, std::uint64_t seed,
                                   const std::string& keys_arg) {
  if (!keys_arg.empty()) {
    std::vector<std::string> keys;
    std::string current;
    for (char c : keys_arg + ",") {
      if (c == ',') {
        keys.push_back(current);
        current.clear();
      } else {
        current += c;
      }
    }
    return keys;
  }
  Rng rng = Rng(seed).derive(0x6b657973ULL);
  std::vector<std::string> keys(config.participants);
  for (auto& key : keys)
    for (int b = 0; b < config.key_bits; ++b)
      key += static_cast<char>('0' + rng.next_bit());
  return keys;
}

struct SharedFlags {
  RoundConfig config;
  std::optional<std::uint64_t> seed;
};

void add_round_flags(CLI::App* cmd, SharedFlags& flags) {
  cmd->add_option("-N,--participants", flags.config.participants,
                  "number of participants")
      ->check(CLI::Range(2, 14));
  cmd->add_option("--key-bits", flags.config.key_bits, "agreed key length");
  cmd->add_option("--decoys", flags.config.decoys_per_sequence,
                  "decoy qubits per transmitted sequence");
  cmd->add_option("--sequence-len", flags.config.sequence_len,
                  "states processed per batch");
  cmd->add_option("--threshold", flags.config.error_threshold,
                  "tolerated check error rate");
  cmd->add_option("--seed", flags.seed, "deterministic seed");
}

int cmd_agree(const SharedFlags& flags, const std::string& keys_arg,
              const std::string& attack_arg, const AttackSpec& partial_spec,
              bool show_transcript, bool json_lines) {
  RoundConfig config = flags.config;
  config.seed = flags.seed ? *flags.seed : fresh_seed();

  Emitter out(json_lines);
  out.line("cli", "seed", {{"seed", std::to_string(config.seed)}},
           "seed " + std::to_string(config.seed));
  out.line("cli", "config", config_payload(config),
           payload_text("config", config_payload(config)));

  const std::vector<std::string> keys = make_keys(config, config.seed, keys_arg);
  if (static_cast<int>(keys.size()) != config.participants)
    throw CLI::ValidationError("--keys",
                               "need one comma-separated key per participant");
  for (const auto& key : keys)
    if (static_cast<int>(key.size()) != config.key_bits)
      throw CLI::ValidationError("--keys", "each key must have key-bits bits");

  std::unique_ptr<mqka::adversary::AttackTap> tap;
  if (!attack_arg.empty()) {
    AttackSpec spec = partial_spec;
    spec.kind = mqka::adversary::attack_from_name(attack_arg);
    tap = mqka::adversary::make_tap(spec, config);
    out.line("cli", "attack",
             {{"kind", attack_arg},
              {"victim", std::to_string(spec.victim)},
              {"attacker", std::to_string(spec.attacker)}},
             "attack kind=" + attack_arg);
  }

  const auto outcome = mqka::protocol::run_agreement(config, keys, tap.get());

  if (show_transcript || json_lines)
    for (const auto& msg : outcome.transcript.messages) out.transcript(msg);

  const auto& result = outcome.result;
  for (int p = 0; p < config.participants; ++p) {
    const std::string name = mqka::protocol::participant_name(p);
    out.line("cli", "key", {{"participant", name}, {"key", result.extracted_keys[p]}},
             "key " + name + "=" + result.extracted_keys[p]);
  }

  const auto& c = result.counters;
  const std::vector<std::pair<std::string, std::string>> counter_payload = {
      {"transmissions", std::to_string(c.transmissions)},
      {"measurements", std::to_string(c.measurements)},
      {"decoys", std::to_string(c.decoy_qubits)},
      {"delay", std::to_string(c.delay_units)}};

  if (result.aborted) {
    out.line("cli", "result", {{"status", "aborted"}, {"reason", result.abort_reason}},
             "result aborted reason=\"" + result.abort_reason + "\"");
    out.line("cli", "counters", counter_payload,
             payload_text("counters", counter_payload));
    return kExitAborted;
  }

  bool all_equal = true;
  for (const auto& key : result.extracted_keys)
    if (key != result.extracted_keys.front()) all_equal = false;

  if (!all_equal) {
    out.line("cli", "result", {{"status", "mismatch"}},
             "result mismatch");
    out.line("cli", "counters", counter_payload,
             payload_text("counters", counter_payload));
    return kExitMismatch;
  }

  out.line("cli", "result",
           {{"status", "agreed"}, {"key", result.extracted_keys.front()}},
           "result agreed key=" + result.extracted_keys.front());
  out.line("cli", "counters", counter_payload,
           payload_text("counters", counter_payload));
  return kExitOk;
}

int cmd_attack(const SharedFlags& flags, const std::string& kind_arg,
               AttackSpec spec, int trials, bool json_lines) {
  RoundConfig config = flags.config;
  const std::uint64_t seed = flags.seed ? *flags.seed : fresh_seed();
  spec.kind = mqka::adversary::attack_from_name(kind_arg);

  Emitter out(json_lines);
  out.line("cli", "seed", {{"seed", std::to_string(seed)}},
           "seed " + std::to_string(seed));
  auto payload = config_payload(config);
  payload.insert(payload.begin(), {"trials", std::to_string(trials)});
  payload.insert(payload.begin(), {"kind", kind_arg});
  out.line("cli", "attack-config", payload, payload_text("attack", payload));

  const auto report =
      mqka::adversary::estimate_detection(spec, config, trials, Rng(seed));

  const std::vector<std::pair<std::string, std::string>> report_payload = {
      {"detection-rate", format_double(report.detection_rate)},
      {"detection-half-width", format_double(report.half_width)},
      {"per-decoy-rate", format_double(report.per_decoy_rate)},
      {"per-decoy-half-width", format_double(report.per_decoy_half_width)},
      {"decoys-checked", std::to_string(report.decoy_trials)},
      {"undetected", std::to_string(report.undetected)},
      {"eve-info", format_double(report.eve_info_bits)}};
  out.line("cli", "attack-report", report_payload,
           payload_text("report", report_payload));
  return kExitOk;
}

int cmd_cost(const std::string& metric_arg, const std::string& range_arg,
             bool csv, bool check) {
  const auto metric = mqka::costmodel::metric_from_name(metric_arg);
  int n_lo = 0, n_hi = 0;
  const auto sep = range_arg.find("..");
  try {
    if (sep == std::string::npos) {
      n_lo = n_hi = std::stoi(range_arg);
    } else {
      n_lo = std::stoi(range_arg.substr(0, sep));
      n_hi = std::stoi(range_arg.substr(sep + 2));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--n", "expected a number or lo..hi");
  }
  if (n_lo < 2 || n_hi < n_lo)
    throw CLI::ValidationError("--n", "range must lie within 2..");

  const auto table = mqka::costmodel::comparison_table(metric, n_lo, n_hi);
  if (csv) {
    std::printf("%s", mqka::costmodel::to_csv(table).c_str());
  } else {
    std::printf("cost %s\n", metric_arg.c_str());
    std::printf("%4s", "N");
    for (auto p : mqka::costmodel::kProtocols)
      std::printf(" %9s", mqka::costmodel::protocol_name(p).c_str());
    std::printf("\n");
    for (std::size_t i = 0; i < table.n_values.size(); ++i) {
      std::printf("%4d", table.n_values[i]);
      for (long long value : table.rows[i]) std::printf(" %9lld", value);
      std::printf("\n");
    }
  }
  if (check) {
    for (int n = 2; n <= 6; ++n) {
      const long long empirical = mqka::costmodel::empirical_cost_check(metric, n);
      const long long formula =
          mqka::costmodel::cost(mqka::costmodel::Protocol::Proposed, metric, n);
      std::printf("check N=%d empirical=%lld formula=%lld %s\n", n, empirical,
                  formula, empirical == formula ? "ok" : "MISMATCH");
      if (empirical != formula) return kExitRuntime;
    }
  }
  return kExitOk;
}

int cmd_selftest() {
  bool all = true;
  for (const auto& item : mqka::selftest::run_all()) {
    std::printf("%s %s (%s)\n", item.passed ? "pass" : "FAIL", item.name.c_str(),
                item.detail.c_str());
    all = all && item.passed;
  }
  std::printf("selftest %s\n", all ? "passed" : "failed");
  return all ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GHZ-state multiparty key agreement simulator"};
  app.require_subcommand(1);

  SharedFlags agree_flags;
  std::string agree_keys, agree_attack;
  AttackSpec agree_spec;
  bool agree_transcript = false;
  std::string agree_format = "text";
  auto* agree = app.add_subcommand("agree", "run one key agreement round");
  add_round_flags(agree, agree_flags);
  agree->add_option("--keys", agree_keys, "comma-separated per-participant keys");
  agree->add_option("--attack", agree_attack,
                    "install an eavesdropper or dishonest participant")
      ->check(CLI::IsMember({"intercept-resend", "cnot", "fake-participant",
                             "leader-forge"}));
  agree->add_option("--victim", agree_spec.victim, "attacked participant");
  agree->add_option("--attacker", agree_spec.attacker, "dishonest participant");
  agree->add_option("--desired-bit", agree_spec.desired_bit,
                    "bit a forging leader forces");
  agree->add_flag("--transcript", agree_transcript, "print exchanged messages");
  agree->add_option("--format", agree_format, "output format")
      ->check(CLI::IsMember({"text", "json-lines"}));

  SharedFlags attack_flags;
  attack_flags.config.sequence_len = 1;  // keeps entangling attacks in range
  std::string attack_kind = "intercept-resend";
  AttackSpec attack_spec;
  int attack_trials = 20000;
  std::string attack_format = "text";
  auto* attack = app.add_subcommand("attack", "estimate attack detection odds");
  add_round_flags(attack, attack_flags);
  attack->add_option("--kind", attack_kind, "attack model")
      ->check(CLI::IsMember({"intercept-resend", "cnot", "fake-participant",
                             "leader-forge"}));
  attack->add_option("--victim", attack_spec.victim, "attacked participant");
  attack->add_option("--attacker", attack_spec.attacker, "dishonest participant");
  attack->add_option("--desired-bit", attack_spec.desired_bit,
                     "bit a forging leader forces");
  attack->add_option("--trials", attack_trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  attack->add_option("--format", attack_format, "output format")
      ->check(CLI::IsMember({"text", "json-lines"}));

  std::string cost_metric = "transmissions";
  std::string cost_range = "2..10";
  std::string cost_format = "text";
  bool cost_check = false;
  auto* cost = app.add_subcommand("cost", "compare per-round resource counts");
  cost->add_option("--metric", cost_metric, "resource to tabulate")
      ->check(CLI::IsMember({"transmissions", "measurements", "decoys", "delay"}));
  cost->add_option("--n", cost_range, "participant count or lo..hi range");
  cost->add_option("--format", cost_format, "output format")
      ->check(CLI::IsMember({"text", "csv"}));
  cost->add_flag("--check", cost_check,
                 "cross-check the Proposed column against the simulator");

  app.add_subcommand("selftest", "run built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("agree"))
      return cmd_agree(agree_flags, agree_keys, agree_attack, agree_spec,
                       agree_transcript, agree_format == "json-lines");
    if (app.got_subcommand("attack"))
      return cmd_attack(attack_flags, attack_kind, attack_spec, attack_trials,
                        attack_format == "json-lines");
    if (app.got_subcommand("cost"))
      return cmd_cost(cost_metric, cost_range, cost_format == "csv", cost_check);
    if (app.got_subcommand("selftest")) return cmd_selftest();
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
