#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qdsim/channel.hpp"
#include "qdsim/dfs.hpp"
#include "qdsim/qcore.hpp"
#include "qdsim/rng.hpp"

namespace qdsim {

enum class AttackKind {
  None,
  InterceptResend,
  MeasureResend,
  EntangleMeasure,
  CEAttack,
};

enum class AttackTarget { FirstTransmission, SecondTransmission, Both };

std::string to_string(AttackKind kind);
std::string to_string(AttackTarget target);

// Parameters of the entangle-measure attack: the joint action on the two
// antiparallel pair inputs, each coupling to a fresh ancilla.
// Coefficient/ancilla index order is the delivered pair state: HH, HV, VH, VV.
struct EMParams {
  int ancilla_dim = 4;
  std::array<Complex, 4> alpha{};
  std::array<Complex, 4> beta{};
  std::array<AmpVector, 4> alpha_ancilla{};
  std::array<AmpVector, 4> beta_ancilla{};

  // Throws std::invalid_argument when the induced map is not an isometry
  // (coefficient norms, ancilla norms, image consistency within 1e-10).
  void validate() const;

  // Coupling that acts as the identity on the pair: Eve learns nothing.
  static EMParams identity_attack();
  // Ancilla marks |HV> vs |VH> with orthogonal states: full Z information,
  // per-decoy detection 1/4.
  static EMParams orthogonal_attack();
};

struct AttackModel {
  AttackKind kind = AttackKind::None;
  AttackTarget target = AttackTarget::FirstTransmission;
  std::optional<EMParams> em;

  static AttackModel none();
  static AttackModel intercept_resend(
      AttackTarget target = AttackTarget::FirstTransmission);
  static AttackModel measure_resend(
      AttackTarget target = AttackTarget::FirstTransmission);
  static AttackModel entangle_measure(EMParams params);
  static AttackModel ce_attack(
      AttackTarget target = AttackTarget::FirstTransmission);

  bool attacks_first() const;
  bool attacks_second() const;
  // Throws when the combination is unsupported (entangle-measure and the
  // CNOT attack are defined on the dephasing code; entangle-measure only on
  // the first transmission, where inputs are antiparallel).
  void validate(NoiseCode code) const;
};

// What Eve holds about one attacked batch position.
struct PositionRecord {
  // intercept-resend: the genuine pair she kept and the fake she delivered
  ItemPtr kept;
  std::optional<LogicalLabel> fake_label;
  // measure-resend: her basis choice and outcome
  std::optional<LogicalBasis> measured_basis;
  std::optional<LogicalLabel> measured_label;
  // entangle-measure / CNOT attack: the delivered item her ancilla lives in
  ItemPtr entangled;
};

struct EveRecord {
  AttackKind kind = AttackKind::None;
  NoiseCode code = NoiseCode::Dephasing;
  std::vector<PositionRecord> positions;
};

// The attacks as batch transforms. Each returns the batch delivered to the
// receiver plus Eve's record for that transit.
std::pair<TransmissionBatch, EveRecord> intercept_resend(TransmissionBatch batch,
                                                         NoiseCode code,
                                                         Rng& rng);
std::pair<TransmissionBatch, EveRecord> measure_resend(TransmissionBatch batch,
                                                       NoiseCode code,
                                                       Rng& rng);
std::pair<TransmissionBatch, EveRecord> entangle_measure(TransmissionBatch batch,
                                                         const EMParams& params,
                                                         Rng& rng);
std::pair<TransmissionBatch, EveRecord> ce_attack(TransmissionBatch batch,
                                                  Rng& rng);

// Applies the entangle-measure coupling to one antiparallel pair state
// (2 qubits in, 2 + ancilla qubits out; ancilla_dim embeds into qubits).
StateVector em_couple(const StateVector& pair, const EMParams& params);

// Eve's reduced ancilla state after coupling to a given logical input.
DensityMatrix em_conditional_ancilla(const EMParams& params, NoiseCode code,
                                     LogicalLabel input);

// Classical knowledge Eve extracts from the public channel: decoy positions
// (announced during the checks, in first- and second-transmission
// coordinates) and Bob's per-round announcements.
struct PublicView {
  std::vector<std::size_t> first_check_positions;   // decoys in S'
  std::vector<std::size_t> second_check_positions;  // decoys in S'
  std::vector<std::size_t> encoded_decoy_positions; // decoys in L''
  std::vector<LogicalLabel> announcements;
};

struct RoundPosterior {
  // Probability of (k,i) = (0,0), (0,1), (1,0), (1,1).
  std::array<double, 4> p{};
  double entropy_bits() const;
};

// Per-dialogue adversary: owns the interceptors for the transmissions the
// model targets and accumulates Eve's records.
class EveSession {
 public:
  EveSession(AttackModel model, NoiseCode code);
  ~EveSession();

  const AttackModel& model() const { return model_; }
  Interceptor* first_interceptor();
  Interceptor* second_interceptor();

  const EveRecord& first_record() const { return first_record_; }
  const EveRecord& second_record() const { return second_record_; }

  // Bayesian posterior over (k_n, i_n) per round, given Eve's records and all
  // public classical information. Measures any retained quantum systems
  // (passive ordering: after all announcements). `oracle_initials`, when
  // non-empty, additionally conditions on the true initial labels; a test
  // hook quantifying what initial-state knowledge would be worth.
  std::vector<RoundPosterior> posterior(
      const PublicView& pub, Rng& rng,
      std::span<const LogicalLabel> oracle_initials = {});

  // Posterior over the four initial states of one attacked position, given
  // only Eve's measurement of her retained system for that position.
  std::array<double, 4> initial_state_posterior(std::size_t position, Rng& rng);

 private:
  struct Impl;

  double round_likelihood(std::size_t round, LogicalBasis basis, int f, int b0,
                          int k, int i,
                          const std::vector<std::size_t>& s_positions,
                          const std::vector<std::size_t>& l_positions) const;

  AttackModel model_;
  NoiseCode code_;
  EveRecord first_record_;
  EveRecord second_record_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qdsim
