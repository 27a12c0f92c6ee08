#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qdsim/adversary.hpp"
#include "qdsim/protocol.hpp"
#include "qdsim/rng.hpp"

namespace qdsim {

// Reduced rational; keeps the efficiency and enumeration arithmetic exact.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction&) const = default;
};

Fraction make_fraction(std::int64_t num, std::int64_t den);
Fraction operator+(Fraction a, Fraction b);
Fraction operator*(Fraction a, Fraction b);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 0.0;
};

// 95% Wilson score interval by default (z = Phi^-1(0.975)).
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z = 1.959963984540054);

struct DetectionEstimate {
  AttackKind kind = AttackKind::None;
  AttackTarget target = AttackTarget::FirstTransmission;
  std::int64_t trials = 0;
  std::int64_t detections = 0;
  double estimate = 0.0;    // detections / trials
  double half_width = 0.0;  // half the Wilson interval
  WilsonInterval interval{};
};

// Monte-Carlo per-decoy detection probability of the check the attack
// targets. One decoy experiment per trial.
DetectionEstimate estimate_detection(const AttackModel& attack,
                                     const ProtocolConfig& config,
                                     std::int64_t trials, Rng& rng);

// Exact per-decoy detection probability by enumeration over the prepared
// decoy states and the attack's discrete branches. Branch probabilities come
// from Born-rule evaluation and must be dyadic (they are, for every supported
// attack); a non-dyadic probability throws.
Fraction exhaustive_detection(const AttackModel& attack, NoiseCode code);

enum class LeakageMode { Exhaustive, MonteCarlo };

struct PosteriorRow {
  LogicalLabel announcement;
  std::array<double, 4> p_ki{};  // (k,i) = 00, 01, 10, 11
};

struct LeakageReport {
  LeakageMode mode = LeakageMode::Exhaustive;
  double entropy_bits = 0.0;
  double std_error = 0.0;   // 0 for the exhaustive mode
  std::int64_t samples = 0; // enumerated cases or Monte-Carlo rounds
  std::vector<PosteriorRow> posterior_table;
};

// Conditional entropy of (k,i) given the public announcement, by exact
// enumeration of the 16 equiprobable (initial label, k, i) triples.
// `auxiliary_public` additionally hands the initial label to the listener,
// quantifying what the retained twin protects.
LeakageReport leakage_entropy_exhaustive(NoiseCode code,
                                         bool auxiliary_public = false);

// Mean per-round posterior entropy of (k,i) under the attack, over completed
// (non-aborted) dialogues.
LeakageReport empirical_leakage(const AttackModel& attack,
                                const ProtocolConfig& config,
                                std::int64_t trials, Rng& rng);

enum class ProtocolKind { ThisWork, SingleAnnouncementComparator };

struct EfficiencyReport {
  int secret_bits = 0;     // b_s per round
  int qubits_used = 0;     // q_t per round
  int classical_bits = 0;  // b_t per round
  Fraction eta{};          // b_s / (q_t + b_t)
};

EfficiencyReport cabello_efficiency(ProtocolKind kind);

// Worker cap for trial loops: QDSIM_THREADS (0 or unset = auto).
int worker_count();

}  // namespace qdsim
