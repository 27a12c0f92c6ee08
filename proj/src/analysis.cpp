#include "qdsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace qdsim {
namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

// Born-rule branch probabilities in the enumerations below are multiples of
// small powers of two; anything else means the attack is outside the
// enumerable family.
Fraction snap_dyadic(double p) {
  constexpr std::int64_t den = 64;
  const double scaled = p * den;
  const auto num = static_cast<std::int64_t>(std::llround(scaled));
  if (std::abs(scaled - static_cast<double>(num)) > 1e-6 || num < 0 || num > den) {
    throw std::invalid_argument("branch probability is not dyadic; enumeration unsupported");
  }
  return make_fraction(num, den);
}

// Probability that a logical measurement of `joint` (pair + optional ancilla)
// reports the logical state `pair_vec`.
double pass_probability(const StateVector& joint, const AmpVector& pair_vec) {
  const Eigen::Index anc_dim = joint.dim() / 4;
  double p = 0.0;
  for (Eigen::Index a = 0; a < anc_dim; ++a) {
    Complex overlap = 0.0;
    for (Eigen::Index pb = 0; pb < 4; ++pb) {
      overlap += std::conj(pair_vec(pb)) * joint.amplitudes()(pb * anc_dim + a);
    }
    p += std::norm(overlap);
  }
  return p;
}

// Runs `fn(trial)` for every trial index, split over worker threads. Each
// trial owns a derived random stream, so results do not depend on the split.
template <typename Fn>
void run_trials(std::int64_t trials, Fn&& fn) {
  const int workers = std::min<std::int64_t>(worker_count(), trials > 0 ? trials : 1);
  if (workers <= 1) {
    for (std::int64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (trials + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min<std::int64_t>(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (std::int64_t t = begin; t < end; ++t) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

// One decoy experiment of the security check the attack targets.
bool decoy_trial(const AttackModel& attack, const ProtocolConfig& config,
                 Rng& rng) {
  EveSession session(attack, config.code);
  const LogicalLabel prepared = uniform_label(rng);

  TransmissionBatch batch;
  batch.append(logical_state(config.code, prepared),
               attack.attacks_first() ? QubitRole::DecoyFirst
                                      : QubitRole::DecoySecond);

  if (attack.attacks_first()) {
    batch = transmit(std::move(batch), config.noise, session.first_interceptor(),
                     rng);
    const auto reported =
        measure_item(*batch.at(0).item, config.code, prepared.basis, rng);
    return !(reported.has_value() && *reported == prepared);
  }

  // Second-check experiment: the decoy survives the first transit untouched,
  // Alice encodes a random checking bit, Eve hits the return leg.
  batch = transmit(std::move(batch), config.noise, nullptr, rng);
  const int checking_bit = rng.next_bit();
  apply_pair_gate(*batch.at(0).item, composite_unitary(config.code, checking_bit));
  batch = transmit(std::move(batch), config.noise, session.second_interceptor(),
                   rng);
  const auto measured =
      measure_item(*batch.at(0).item, config.code, prepared.basis, rng);
  const int decoded = measured ? (measured->bit ^ prepared.bit) : -1;
  return decoded != checking_bit;
}

}  // namespace

Fraction make_fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = gcd64(num == 0 ? den : num, den);
  return {num / g, den / g};
}

Fraction operator+(Fraction a, Fraction b) {
  return make_fraction(a.num * b.den + b.num * a.den, a.den * b.den);
}

Fraction operator*(Fraction a, Fraction b) {
  return make_fraction(a.num * b.num, a.den * b.den);
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z) {
  if (trials <= 0) throw std::invalid_argument("Wilson interval needs trials >= 1");
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("successes out of range");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double spread =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval interval{std::max(0.0, center - spread),
                          std::min(1.0, center + spread)};
  // The score bounds are exactly the sample extremes there; keep them free of
  // rounding residue.
  if (successes == 0) interval.lower = 0.0;
  if (successes == trials) interval.upper = 1.0;
  return interval;
}

int worker_count() {
  if (const char* env = std::getenv("QDSIM_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<int>(std::min<long>(parsed, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

DetectionEstimate estimate_detection(const AttackModel& attack,
                                     const ProtocolConfig& config,
                                     std::int64_t trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("detection estimate needs trials >= 1");
  attack.validate(config.code);

  const std::uint64_t base = rng.next_u64();
  std::vector<unsigned char> detected(static_cast<std::size_t>(trials), 0);
  run_trials(trials, [&](std::int64_t t) {
    Rng trial_rng = Rng::derive(base, static_cast<std::uint64_t>(t));
    detected[static_cast<std::size_t>(t)] =
        decoy_trial(attack, config, trial_rng) ? 1 : 0;
  });

  DetectionEstimate est;
  est.kind = attack.kind;
  est.target = attack.target;
  est.trials = trials;
  est.detections = std::accumulate(detected.begin(), detected.end(), std::int64_t{0});
  est.estimate = static_cast<double>(est.detections) / static_cast<double>(trials);
  est.interval = wilson_interval(est.detections, trials);
  est.half_width = 0.5 * (est.interval.upper - est.interval.lower);
  return est;
}

Fraction exhaustive_detection(const AttackModel& attack, NoiseCode code) {
  attack.validate(code);
  if (attack.kind == AttackKind::None) return {0, 1};

  // Expected labels under the relevant check: the prepared label itself for
  // the first check, the label after a checking bit c for the second.
  const bool first_leg = attack.attacks_first();
  Fraction detection{0, 1};
  Fraction weight_total{0, 1};

  for (int prep = 0; prep < 4; ++prep) {
    const LogicalLabel prepared = label_from_index(prep);
    for (int c = 0; c < (first_leg ? 1 : 2); ++c) {
      const LogicalLabel expected =
          first_leg ? prepared : encoded_label(prepared, c, 0);
      const AmpVector expected_vec = logical_vector(code, expected).amplitudes();
      const StateVector in_flight =
          first_leg ? logical_vector(code, prepared)
                    : StateVector(logical_vector(code, expected).amplitudes());
      const Fraction weight = make_fraction(1, first_leg ? 4 : 8);
      weight_total = weight_total + weight;

      switch (attack.kind) {
        case AttackKind::InterceptResend: {
          for (int fake = 0; fake < 4; ++fake) {
            const double p_pass = fidelity(
                logical_vector(code, label_from_index(fake)),
                StateVector(expected_vec));
            detection = detection +
                        weight * make_fraction(1, 4) *
                            (Fraction{1, 1} + make_fraction(-1, 1) * snap_dyadic(p_pass));
          }
          break;
        }
        case AttackKind::MeasureResend: {
          for (int eb = 0; eb < 2; ++eb) {
            const LogicalBasis eve_basis = eb ? LogicalBasis::X : LogicalBasis::Z;
            double p_pass = 0.0;
            if (eve_basis == expected.basis) {
              p_pass = 1.0;  // eigenstate measurement leaves the decoy intact
            } else {
              for (int bit = 0; bit < 2; ++bit) {
                const StateVector collapsed =
                    logical_vector(code, {eve_basis, bit});
                p_pass += fidelity(collapsed, in_flight) *
                          fidelity(StateVector(expected_vec), collapsed);
              }
            }
            detection = detection +
                        weight * make_fraction(1, 2) *
                            (Fraction{1, 1} + make_fraction(-1, 1) * snap_dyadic(p_pass));
          }
          break;
        }
        case AttackKind::CEAttack:
        case AttackKind::EntangleMeasure: {
          TransmissionBatch batch;
          batch.append(LogicalQubitState(LogicalQubitState::UncheckedTag{}, code,
                                         in_flight),
                       QubitRole::DecoyFirst);
          Rng scratch(0);
          auto [out, rec] =
              attack.kind == AttackKind::CEAttack
                  ? ce_attack(std::move(batch), scratch)
                  : entangle_measure(std::move(batch), *attack.em, scratch);
          const double p_pass = pass_probability(out.at(0).item->state, expected_vec);
          detection = detection + weight * (Fraction{1, 1} +
                                            make_fraction(-1, 1) * snap_dyadic(p_pass));
          break;
        }
        case AttackKind::None:
          break;
      }
    }
  }
  if (!(weight_total == Fraction{1, 1})) {
    throw std::logic_error("enumeration weights do not sum to one");
  }
  return detection;
}

LeakageReport leakage_entropy_exhaustive(NoiseCode code, bool auxiliary_public) {
  (void)code;  // the XOR structure is identical for both codes; enumerated anyway
  // Count the 16 equiprobable (initial label, k, i) triples per conditioning
  // cell: the announcement alone, or announcement + initial label.
  struct Cell {
    std::array<int, 4> ki_counts{};
    int total = 0;
  };
  std::array<Cell, 16> cells{};  // announcement index * 4 + (oracle ? label : 0)

  for (int lab = 0; lab < 4; ++lab) {
    const LogicalLabel initial = label_from_index(lab);
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        const LogicalLabel announced = encoded_label(initial, k, i);
        const std::size_t cell =
            static_cast<std::size_t>(label_index(announced)) * 4 +
            (auxiliary_public ? static_cast<std::size_t>(lab) : 0);
        cells[cell].ki_counts[static_cast<std::size_t>(k * 2 + i)] += 1;
        cells[cell].total += 1;
      }
    }
  }

  LeakageReport report;
  report.mode = LeakageMode::Exhaustive;
  report.samples = 16;
  double entropy = 0.0;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    if (cells[cell].total == 0) continue;
    const double cell_weight = cells[cell].total / 16.0;
    double h = 0.0;
    PosteriorRow row;
    row.announcement = label_from_index(static_cast<int>(cell / 4));
    for (std::size_t ki = 0; ki < 4; ++ki) {
      const double p =
          static_cast<double>(cells[cell].ki_counts[ki]) / cells[cell].total;
      row.p_ki[ki] = p;
      if (p > 0.0) h -= p * std::log2(p);
    }
    entropy += cell_weight * h;
    report.posterior_table.push_back(row);
  }
  report.entropy_bits = entropy;
  return report;
}

LeakageReport empirical_leakage(const AttackModel& attack,
                                const ProtocolConfig& config,
                                std::int64_t trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("leakage estimate needs trials >= 1");
  attack.validate(config.code);

  const std::uint64_t base = rng.next_u64();
  const std::size_t rounds = static_cast<std::size_t>(config.message_bits);
  std::vector<std::vector<double>> per_trial(static_cast<std::size_t>(trials));
  std::vector<std::vector<std::pair<int, std::array<double, 4>>>> tables(
      static_cast<std::size_t>(trials));

  run_trials(trials, [&](std::int64_t t) {
    Rng trial_rng = Rng::derive(base, static_cast<std::uint64_t>(t));
    std::vector<int> k_bits(rounds), i_bits(rounds);
    for (auto& b : k_bits) b = trial_rng.next_bit();
    for (auto& b : i_bits) b = trial_rng.next_bit();
    ProtocolConfig trial_config = config;
    trial_config.seed = trial_rng.next_u64();

    DialogueResult result = run_dialogue(trial_config, k_bits, i_bits, attack);
    if (result.aborted) return;  // undetected runs only

    const auto posteriors = result.eve->posterior(result.public_view, trial_rng);
    auto& entropies = per_trial[static_cast<std::size_t>(t)];
    for (std::size_t n = 0; n < posteriors.size(); ++n) {
      entropies.push_back(posteriors[n].entropy_bits());
      tables[static_cast<std::size_t>(t)].push_back(
          {label_index(result.public_view.announcements[n]), posteriors[n].p});
    }
  });

  double sum = 0.0, sum_sq = 0.0;
  std::int64_t samples = 0;
  std::array<std::array<double, 4>, 4> posterior_sum{};
  std::array<std::int64_t, 4> posterior_n{};
  for (std::size_t t = 0; t < per_trial.size(); ++t) {
    for (double h : per_trial[t]) {
      sum += h;
      sum_sq += h * h;
      ++samples;
    }
    for (const auto& [announced, p] : tables[t]) {
      for (std::size_t ki = 0; ki < 4; ++ki) {
        posterior_sum[static_cast<std::size_t>(announced)][ki] += p[ki];
      }
      posterior_n[static_cast<std::size_t>(announced)] += 1;
    }
  }
  if (samples == 0) {
    throw std::runtime_error("every trial aborted; no completed dialogue to analyze");
  }

  LeakageReport report;
  report.mode = LeakageMode::MonteCarlo;
  report.samples = samples;
  report.entropy_bits = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double variance =
        std::max(0.0, (sum_sq - sum * sum / static_cast<double>(samples)) /
                          static_cast<double>(samples - 1));
    report.std_error = std::sqrt(variance / static_cast<double>(samples));
  }
  for (int a = 0; a < 4; ++a) {
    if (posterior_n[static_cast<std::size_t>(a)] == 0) continue;
    PosteriorRow row;
    row.announcement = label_from_index(a);
    for (std::size_t ki = 0; ki < 4; ++ki) {
      row.p_ki[ki] = posterior_sum[static_cast<std::size_t>(a)][ki] /
                     static_cast<double>(posterior_n[static_cast<std::size_t>(a)]);
    }
    report.posterior_table.push_back(row);
  }
  return report;
}

EfficiencyReport cabello_efficiency(ProtocolKind kind) {
  EfficiencyReport report;
  report.secret_bits = 2;
  report.qubits_used = 4;
  report.classical_bits = kind == ProtocolKind::ThisWork ? 2 : 1;
  report.eta = make_fraction(report.secret_bits,
                             report.qubits_used + report.classical_bits);
  return report;
}

}  // namespace qdsim
