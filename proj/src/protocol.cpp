#include "qdsim/protocol.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qdsim {
namespace {

// Draws `count` distinct positions in [0, size), ascending.
std::vector<std::size_t> sample_positions(std::size_t count, std::size_t size,
                                          Rng& rng) {
  std::vector<std::size_t> all(size);
  for (std::size_t i = 0; i < size; ++i) all[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.next_below(size - i);
    std::swap(all[i], all[j]);
  }
  std::vector<std::size_t> chosen(all.begin(), all.begin() + count);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::string check_payload(const CheckResult& r) {
  std::ostringstream out;
  out << "decoys=" << r.decoys << " mismatches=" << r.mismatches
      << " rate=" << r.error_rate << " abort=" << (r.aborted ? 1 : 0)
      << " vacuous=" << (r.vacuous ? 1 : 0);
  return out.str();
}

CheckResult make_check_result(int decoys, int mismatches, double threshold) {
  CheckResult r;
  r.decoys = decoys;
  r.mismatches = mismatches;
  r.vacuous = (decoys == 0);
  r.error_rate = r.vacuous ? 0.0 : static_cast<double>(mismatches) / decoys;
  r.aborted = !r.vacuous && r.error_rate > threshold;
  return r;
}

}  // namespace

std::vector<std::string> ProtocolConfig::violations() const {
  std::vector<std::string> out;
  if (message_bits < 1) out.push_back("protocol.n: must be >= 1");
  if (first_check_decoys < 0) out.push_back("protocol.delta1: must be >= 0");
  if (second_check_decoys < 0) out.push_back("protocol.delta2: must be >= 0");
  if (!(abort_threshold >= 0.0 && abort_threshold <= 1.0)) {
    out.push_back("check.abort_threshold: must lie in [0,1]");
  }
  if (noise.code != code) {
    out.push_back("noise: noise code must match the protocol code");
  }
  return out;
}

void Transcript::append(std::string kind, long index, std::string payload) {
  std::ostringstream line;
  line << kind << '\t' << index << '\t' << payload;
  lines_.push_back(line.str());
}

std::string Transcript::serialize() const {
  std::string out;
  for (const auto& line : lines_) {
    out += line;
    out += '\n';
  }
  return out;
}

std::pair<TransmissionBatch, BobRecord> bob_prepare(const ProtocolConfig& config,
                                                    Rng& rng) {
  const auto violations = config.violations();
  if (!violations.empty()) {
    throw std::invalid_argument("invalid protocol config: " + violations.front());
  }
  const std::size_t rounds = static_cast<std::size_t>(config.message_bits);
  const std::size_t d1 = static_cast<std::size_t>(config.first_check_decoys);
  const std::size_t d2 = static_cast<std::size_t>(config.second_check_decoys);
  const std::size_t total = 2 * rounds + d1 + d2;

  BobRecord record;
  record.code = config.code;
  record.pair_labels.reserve(rounds);
  for (std::size_t n = 0; n < rounds; ++n) {
    record.pair_labels.push_back(uniform_label(rng));
  }

  // Decoy slots, then a uniform split into first- and second-check service.
  std::vector<std::size_t> decoy_positions = sample_positions(d1 + d2, total, rng);
  for (std::size_t i = 0; i + 1 < decoy_positions.size(); ++i) {
    const std::size_t j = i + rng.next_below(decoy_positions.size() - i);
    std::swap(decoy_positions[i], decoy_positions[j]);
  }
  record.first_check_positions.assign(decoy_positions.begin(),
                                      decoy_positions.begin() + d1);
  record.second_check_positions.assign(decoy_positions.begin() + d1,
                                       decoy_positions.end());
  std::sort(record.first_check_positions.begin(), record.first_check_positions.end());
  std::sort(record.second_check_positions.begin(), record.second_check_positions.end());
  record.first_check_labels.reserve(d1);
  record.second_check_labels.reserve(d2);

  std::vector<int> slot_kind(total, 0);  // 0 message, 1 first decoy, 2 second decoy
  for (std::size_t p : record.first_check_positions) slot_kind[p] = 1;
  for (std::size_t p : record.second_check_positions) slot_kind[p] = 2;

  TransmissionBatch batch;
  std::size_t next_message = 0;
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (slot_kind[pos] == 1) {
      const LogicalLabel label = uniform_label(rng);
      record.first_check_labels.push_back(label);
      batch.append(logical_state(config.code, label), QubitRole::DecoyFirst);
    } else if (slot_kind[pos] == 2) {
      const LogicalLabel label = uniform_label(rng);
      record.second_check_labels.push_back(label);
      batch.append(logical_state(config.code, label), QubitRole::DecoySecond);
    } else {
      const std::size_t n = next_message / 2;
      const bool lead = (next_message % 2 == 0);
      batch.append(logical_state(config.code, record.pair_labels[n]),
                   lead ? QubitRole::MessageLead : QubitRole::MessageTwin);
      ++next_message;
    }
  }
  return {std::move(batch), std::move(record)};
}

CheckResult first_security_check(TransmissionBatch& received,
                                 const BobRecord& record,
                                 const ProtocolConfig& config, Rng& rng,
                                 Transcript* transcript) {
  int mismatches = 0;
  for (std::size_t j = 0; j < record.first_check_positions.size(); ++j) {
    const std::size_t pos = record.first_check_positions[j];
    const LogicalLabel expected = record.first_check_labels[j];
    // Alice measures in Bob's announced basis and reports the label; an
    // outcome impossible inside the code subspace is reported as such and
    // always counts as an error.
    const auto reported = measure_item(*received.at(pos).item, config.code,
                                       expected.basis, rng);
    const bool pass = reported.has_value() && *reported == expected;
    if (!pass) ++mismatches;
    if (transcript != nullptr) {
      transcript->append(
          "check1_decoy", static_cast<long>(j),
          "position=" + std::to_string(pos) + " expected=" + to_string(expected) +
              " reported=" + (reported ? to_string(*reported) : "invalid") +
              " pass=" + (pass ? "1" : "0"));
    }
  }
  CheckResult result =
      make_check_result(static_cast<int>(record.first_check_positions.size()),
                        mismatches, config.abort_threshold);
  if (transcript != nullptr) {
    transcript->append("check1_result", -1, check_payload(result));
  }
  return result;
}

AliceReceived alice_extract(TransmissionBatch received, const BobRecord& record) {
  std::vector<int> slot_kind(received.size(), 0);
  for (std::size_t p : record.first_check_positions) slot_kind.at(p) = 1;
  for (std::size_t p : record.second_check_positions) slot_kind.at(p) = 2;

  AliceReceived out;
  for (std::size_t pos = 0; pos < received.size(); ++pos) {
    if (slot_kind[pos] == 1) continue;  // measured and discarded
    if (slot_kind[pos] == 2) {
      out.second_decoys.push_back(received.at(pos));
    } else {
      out.restored.append(received.at(pos));
    }
  }
  return out;
}

std::pair<TransmissionBatch, AliceRecord> alice_encode(
    AliceReceived received, std::span<const int> k_bits,
    const ProtocolConfig& config, Rng& rng) {
  const std::size_t rounds = static_cast<std::size_t>(config.message_bits);
  if (received.restored.size() != 2 * rounds ||
      k_bits.size() != rounds) {
    throw std::invalid_argument("message batch length inconsistent with the record");
  }

  AliceRecord record;
  record.message_bits.assign(k_bits.begin(), k_bits.end());

  // Only the lead of each pair is encoded; the twin stays with Alice.
  std::vector<BatchEntry> encoded_leads;
  for (std::size_t n = 0; n < rounds; ++n) {
    BatchEntry lead = received.restored.at(2 * n);
    apply_pair_gate(*lead.item, composite_unitary(config.code, k_bits[n]));
    encoded_leads.push_back(std::move(lead));
    record.auxiliary.push_back(received.restored.at(2 * n + 1).item);
  }

  for (auto& decoy : received.second_decoys) {
    const int c = rng.next_bit();
    record.checking_bits.push_back(c);
    apply_pair_gate(*decoy.item, composite_unitary(config.code, c));
  }

  // Fresh uniform slots for the encoded decoys; entry j of the announcement
  // maps Bob's j-th second-check decoy to its new position.
  const std::size_t total = encoded_leads.size() + received.second_decoys.size();
  std::vector<std::size_t> decoy_slots =
      sample_positions(received.second_decoys.size(), total, rng);
  record.encoded_decoy_positions = decoy_slots;

  std::vector<bool> is_decoy(total, false);
  for (std::size_t p : decoy_slots) is_decoy[p] = true;

  TransmissionBatch out;
  std::size_t next_lead = 0;
  std::size_t next_decoy = 0;
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (is_decoy[pos]) {
      out.append(received.second_decoys[next_decoy++]);
    } else {
      out.append(encoded_leads[next_lead++]);
    }
  }
  return {std::move(out), std::move(record)};
}

CheckResult second_security_check(TransmissionBatch& received,
                                  const BobRecord& bob, const AliceRecord& alice,
                                  const ProtocolConfig& config, Rng& rng,
                                  Transcript* transcript) {
  int mismatches = 0;
  for (std::size_t j = 0; j < alice.encoded_decoy_positions.size(); ++j) {
    const std::size_t pos = alice.encoded_decoy_positions[j];
    const LogicalLabel prepared = bob.second_check_labels[j];
    const int expected_bit = alice.checking_bits[j];
    // Bob knows the preparation basis, measures, and announces the decoded
    // checking bit; Alice compares against her own.
    const auto measured =
        measure_item(*received.at(pos).item, config.code, prepared.basis, rng);
    const int decoded = measured ? (measured->bit ^ prepared.bit) : -1;
    const bool pass = (decoded == expected_bit);
    if (!pass) ++mismatches;
    if (transcript != nullptr) {
      transcript->append(
          "check2_decoy", static_cast<long>(j),
          "position=" + std::to_string(pos) +
              " expected_bit=" + std::to_string(expected_bit) +
              " decoded_bit=" + std::to_string(decoded) +
              " pass=" + (pass ? "1" : "0"));
    }
  }
  CheckResult result =
      make_check_result(static_cast<int>(alice.encoded_decoy_positions.size()),
                        mismatches, config.abort_threshold);
  if (transcript != nullptr) {
    transcript->append("check2_result", -1, check_payload(result));
  }
  return result;
}

std::pair<std::vector<Announcement>, std::vector<int>> bob_encode_measure_announce(
    std::vector<BatchEntry>& message_items, std::span<const int> i_bits,
    const BobRecord& record, Rng& rng) {
  const std::size_t rounds = record.pair_labels.size();
  if (message_items.size() != rounds || i_bits.size() != rounds) {
    throw std::invalid_argument("message batch length inconsistent with the record");
  }
  std::vector<Announcement> announcements;
  std::vector<int> k_decoded;
  for (std::size_t n = 0; n < rounds; ++n) {
    const LogicalLabel initial = record.pair_labels[n];
    ItemState& item = *message_items[n].item;
    apply_pair_gate(item, composite_unitary(record.code, i_bits[n]));
    const auto final_label = measure_item(item, record.code, initial.basis, rng);
    if (!final_label) {
      throw std::logic_error("message qubit measured outside the code subspace");
    }
    announcements.push_back({*final_label});
    k_decoded.push_back(final_label->bit ^ initial.bit ^ i_bits[n]);
  }
  return {std::move(announcements), std::move(k_decoded)};
}

std::vector<int> alice_decode(std::span<const Announcement> announcements,
                              const AliceRecord& record,
                              std::span<const int> k_bits, NoiseCode code,
                              Rng& rng) {
  if (announcements.size() != record.auxiliary.size() ||
      k_bits.size() != record.auxiliary.size()) {
    throw std::invalid_argument("announcement count inconsistent with the record");
  }
  std::vector<int> i_decoded;
  for (std::size_t n = 0; n < announcements.size(); ++n) {
    const LogicalLabel announced = announcements[n].final_label;
    const auto initial =
        measure_item(*record.auxiliary[n], code, announced.basis, rng);
    if (!initial) {
      throw std::logic_error("auxiliary qubit measured outside the code subspace");
    }
    i_decoded.push_back(announced.bit ^ initial->bit ^ k_bits[n]);
  }
  return i_decoded;
}

DialogueResult run_dialogue(const ProtocolConfig& config,
                            std::span<const int> k_bits,
                            std::span<const int> i_bits,
                            const AttackModel& attack) {
  if (k_bits.size() != static_cast<std::size_t>(config.message_bits) ||
      i_bits.size() != static_cast<std::size_t>(config.message_bits)) {
    throw std::invalid_argument("message lengths must equal protocol.n");
  }
  attack.validate(config.code);

  DialogueResult result;
  result.k_sent.assign(k_bits.begin(), k_bits.end());
  result.i_sent.assign(i_bits.begin(), i_bits.end());
  result.eve = std::make_shared<EveSession>(attack, config.code);

  Rng rng(config.seed);

  // Step 1: preparation and first transmission.
  auto [prepared, bob] = bob_prepare(config, rng);
  result.initial_labels = bob.pair_labels;
  result.transcript.append("transmission", 0,
                           "direction=bob_to_alice items=" +
                               std::to_string(prepared.size()));
  TransmissionBatch at_alice = transmit(std::move(prepared), config.noise,
                                        result.eve->first_interceptor(), rng);

  result.public_view.first_check_positions = bob.first_check_positions;
  result.public_view.second_check_positions = bob.second_check_positions;

  // Step 2: first security check.
  result.first_check =
      first_security_check(at_alice, bob, config, rng, &result.transcript);
  if (result.first_check.aborted) {
    result.aborted = true;
    result.abort_stage = "first_check";
    result.transcript.append("abort", -1, "stage=first_check");
    return result;
  }

  // Step 3: Alice's encoding and second transmission.
  auto extracted = alice_extract(std::move(at_alice), bob);
  auto [encoded, alice] = alice_encode(std::move(extracted), k_bits, config, rng);
  result.transcript.append("transmission", 1,
                           "direction=alice_to_bob items=" +
                               std::to_string(encoded.size()));
  TransmissionBatch at_bob = transmit(std::move(encoded), config.noise,
                                      result.eve->second_interceptor(), rng);
  result.public_view.encoded_decoy_positions = alice.encoded_decoy_positions;

  // Step 4: second security check.
  result.second_check =
      second_security_check(at_bob, bob, alice, config, rng, &result.transcript);
  if (result.second_check.aborted) {
    result.aborted = true;
    result.abort_stage = "second_check";
    result.transcript.append("abort", -1, "stage=second_check");
    return result;
  }

  // Step 5: Bob encodes, measures, announces; both sides decode.
  std::vector<bool> is_decoy(at_bob.size(), false);
  for (std::size_t p : alice.encoded_decoy_positions) is_decoy[p] = true;
  std::vector<BatchEntry> message_items;
  for (std::size_t pos = 0; pos < at_bob.size(); ++pos) {
    if (!is_decoy[pos]) message_items.push_back(at_bob.at(pos));
  }
  auto [announcements, k_decoded] =
      bob_encode_measure_announce(message_items, i_bits, bob, rng);
  result.announcements = announcements;
  result.k_decoded = std::move(k_decoded);
  for (std::size_t n = 0; n < announcements.size(); ++n) {
    result.public_view.announcements.push_back(announcements[n].final_label);
    result.transcript.append(
        "announcement", static_cast<long>(n),
        "basis=" + to_string(announcements[n].final_label.basis) +
            " bit=" + std::to_string(announcements[n].final_label.bit));
  }

  result.i_decoded =
      alice_decode(announcements, alice, k_bits, config.code, rng);
  for (std::size_t n = 0; n < result.k_decoded.size(); ++n) {
    result.transcript.append("decoded", static_cast<long>(n),
                             "k_hat=" + std::to_string(result.k_decoded[n]) +
                                 " i_hat=" + std::to_string(result.i_decoded[n]));
  }
  return result;
}

}  // namespace qdsim
