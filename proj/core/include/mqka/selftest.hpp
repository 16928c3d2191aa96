#pragma once

#include <string>
#include <vector>

namespace mqka::selftest {

struct Item {
  std::string name;
  bool passed;
  std::string detail;
};

// Deterministic consistency checks wiring the simulator, the entangled-state
// codebook and the key extraction rules against each other.
Item check_two_party_key_table();
Item check_ghz_round_trip();
Item check_ancilla_entanglement_evolution();
Item check_codebook_equivalence();

std::vector<Item> run_all();

}  // namespace mqka::selftest
