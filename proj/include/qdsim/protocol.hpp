#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qdsim/adversary.hpp"
#include "qdsim/channel.hpp"
#include "qdsim/dfs.hpp"
#include "qdsim/rng.hpp"

namespace qdsim {

struct ProtocolConfig {
  int message_bits = 1;       // N: secret bits per party
  int first_check_decoys = 0;  // delta1
  int second_check_decoys = 0; // delta2
  NoiseCode code = NoiseCode::Dephasing;
  NoiseModel noise{};
  double abort_threshold = 0.0;  // max tolerated decoy error rate
  std::uint64_t seed = 0;

  // Every violated field, empty when valid.
  std::vector<std::string> violations() const;
};

// Append-only event log; an abort is the final event of a truncated run.
class Transcript {
 public:
  void append(std::string kind, long index, std::string payload);
  const std::vector<std::string>& lines() const { return lines_; }
  std::string serialize() const;  // one event per line

 private:
  std::vector<std::string> lines_;
};

struct BobRecord {
  NoiseCode code = NoiseCode::Dephasing;
  std::vector<LogicalLabel> pair_labels;            // per round
  std::vector<std::size_t> first_check_positions;   // in S', ascending
  std::vector<LogicalLabel> first_check_labels;
  std::vector<std::size_t> second_check_positions;  // in S', ascending
  std::vector<LogicalLabel> second_check_labels;
};

struct AliceRecord {
  std::vector<int> message_bits;   // k
  std::vector<int> checking_bits;  // c_j, uniform random
  std::vector<ItemPtr> auxiliary;  // retained twins, per round
  std::vector<std::size_t> encoded_decoy_positions;  // in L'', per j
};

struct Announcement {
  LogicalLabel final_label;  // two classical bits: basis + bit
};

struct CheckResult {
  int decoys = 0;
  int mismatches = 0;
  double error_rate = 0.0;
  bool vacuous = false;  // no decoys to check
  bool aborted = false;
};

struct DialogueResult {
  Transcript transcript;
  CheckResult first_check;
  CheckResult second_check;
  bool aborted = false;
  std::string abort_stage;  // "first_check" | "second_check" | ""
  std::vector<Announcement> announcements;
  std::vector<int> k_sent, i_sent;
  std::vector<int> k_decoded, i_decoded;
  std::vector<LogicalLabel> initial_labels;  // Bob's private preparation record
  std::shared_ptr<EveSession> eve;
  PublicView public_view;
};

// Step 1: Bob prepares N identical message pairs plus decoys at random
// positions, every logical qubit uniform over the code's four states.
std::pair<TransmissionBatch, BobRecord> bob_prepare(const ProtocolConfig& config,
                                                    Rng& rng);

// Step 2: Alice measures the announced first-check decoys in Bob's bases and
// reports; mismatches (or physically impossible outcomes) count as errors.
CheckResult first_security_check(TransmissionBatch& received,
                                 const BobRecord& record,
                                 const ProtocolConfig& config, Rng& rng,
                                 Transcript* transcript = nullptr);

// Splits Alice's received batch by the announced decoy positions: the
// restored message sequence and the extracted second-check decoys.
struct AliceReceived {
  TransmissionBatch restored;             // 2N message items in order
  std::vector<BatchEntry> second_decoys;  // ascending original position
};
AliceReceived alice_extract(TransmissionBatch received, const BobRecord& record);

// Step 3: Alice encodes k on each lead, retains each twin, encodes random
// checking bits on the second-check decoys, and reinserts them at fresh
// uniform positions.
std::pair<TransmissionBatch, AliceRecord> alice_encode(
    AliceReceived received, std::span<const int> k_bits,
    const ProtocolConfig& config, Rng& rng);

// Step 4: Bob measures the announced encoded decoys in their preparation
// bases, announces the decoded checking bits, Alice compares.
CheckResult second_security_check(TransmissionBatch& received,
                                  const BobRecord& bob,
                                  const AliceRecord& alice,
                                  const ProtocolConfig& config, Rng& rng,
                                  Transcript* transcript = nullptr);

// Step 5, Bob's side: encode i, measure in the known initial basis, announce
// the final label, decode k.
std::pair<std::vector<Announcement>, std::vector<int>> bob_encode_measure_announce(
    std::vector<BatchEntry>& message_items, std::span<const int> i_bits,
    const BobRecord& record, Rng& rng);

// Step 5, Alice's side: measure each retained twin in the announced basis and
// decode i from announcement, twin outcome, and her own k.
std::vector<int> alice_decode(std::span<const Announcement> announcements,
                              const AliceRecord& record,
                              std::span<const int> k_bits, NoiseCode code,
                              Rng& rng);

// The whole five-step dialogue with the attack's interceptors installed.
// Deterministic given config.seed, the messages, and the attack.
DialogueResult run_dialogue(const ProtocolConfig& config,
                            std::span<const int> k_bits,
                            std::span<const int> i_bits,
                            const AttackModel& attack);

}  // namespace qdsim
