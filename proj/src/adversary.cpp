#include "qdsim/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdsim {
namespace {

int ceil_log2(int x) {
  int n = 0;
  while ((1 << n) < x) ++n;
  return n;
}

// Ancilla vector padded into the enclosing power-of-two register.
AmpVector pad_to(const AmpVector& v, Eigen::Index dim) {
  AmpVector out = AmpVector::Zero(dim);
  out.head(v.size()) = v;
  return out;
}

AmpVector unit(Eigen::Index dim, Eigen::Index at) {
  AmpVector v = AmpVector::Zero(dim);
  v(at) = 1.0;
  return v;
}

int pair_bit1(int pb) { return (pb >> 1) & 1; }
int pair_bit2(int pb) { return pb & 1; }

}  // namespace

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::None: return "none";
    case AttackKind::InterceptResend: return "intercept_resend";
    case AttackKind::MeasureResend: return "measure_resend";
    case AttackKind::EntangleMeasure: return "entangle_measure";
    case AttackKind::CEAttack: return "ce";
  }
  return "?";
}

std::string to_string(AttackTarget target) {
  switch (target) {
    case AttackTarget::FirstTransmission: return "first";
    case AttackTarget::SecondTransmission: return "second";
    case AttackTarget::Both: return "both";
  }
  return "?";
}

void EMParams::validate() const {
  if (ancilla_dim < 1) {
    throw std::invalid_argument("entangle-measure ancilla dimension must be >= 1");
  }
  double alpha_norm = 0.0;
  double beta_norm = 0.0;
  for (int i = 0; i < 4; ++i) {
    alpha_norm += std::norm(alpha[i]);
    beta_norm += std::norm(beta[i]);
    if (alpha_ancilla[i].size() != ancilla_dim ||
        beta_ancilla[i].size() != ancilla_dim) {
      throw std::invalid_argument("entangle-measure ancilla vector has wrong dimension");
    }
    if (std::abs(alpha_ancilla[i].norm() - 1.0) > kBasisTol ||
        std::abs(beta_ancilla[i].norm() - 1.0) > kBasisTol) {
      throw std::invalid_argument("entangle-measure ancilla vectors must be normalized");
    }
  }
  if (std::abs(alpha_norm - 1.0) > kBasisTol || std::abs(beta_norm - 1.0) > kBasisTol) {
    throw std::invalid_argument("entangle-measure coefficients must have unit norm sum");
  }
  // The two image vectors must stay orthogonal for the map to extend to a
  // unitary on pair + ancilla.
  Complex cross = 0.0;
  for (int i = 0; i < 4; ++i) {
    cross += std::conj(alpha[i]) * beta[i] * alpha_ancilla[i].dot(beta_ancilla[i]);
  }
  if (std::abs(cross) > kBasisTol) {
    throw std::invalid_argument("entangle-measure map is not an isometry");
  }
}

EMParams EMParams::identity_attack() {
  EMParams p;
  p.ancilla_dim = 4;
  for (int i = 0; i < 4; ++i) {
    p.alpha_ancilla[i] = unit(4, 0);
    p.beta_ancilla[i] = unit(4, 0);
  }
  p.alpha[1] = 1.0;  // |HV> -> |HV>, shared ancilla state
  p.beta[2] = 1.0;   // |VH> -> |VH>, same ancilla state
  return p;
}

EMParams EMParams::orthogonal_attack() {
  EMParams p = identity_attack();
  p.beta_ancilla[2] = unit(4, 1);  // |VH> marked orthogonally to |HV>
  return p;
}

AttackModel AttackModel::none() { return {}; }

AttackModel AttackModel::intercept_resend(AttackTarget target) {
  return {AttackKind::InterceptResend, target, std::nullopt};
}

AttackModel AttackModel::measure_resend(AttackTarget target) {
  return {AttackKind::MeasureResend, target, std::nullopt};
}

AttackModel AttackModel::entangle_measure(EMParams params) {
  return {AttackKind::EntangleMeasure, AttackTarget::FirstTransmission,
          std::move(params)};
}

AttackModel AttackModel::ce_attack(AttackTarget target) {
  return {AttackKind::CEAttack, target, std::nullopt};
}

bool AttackModel::attacks_first() const {
  return kind != AttackKind::None && target != AttackTarget::SecondTransmission;
}

bool AttackModel::attacks_second() const {
  return kind != AttackKind::None && target != AttackTarget::FirstTransmission;
}

void AttackModel::validate(NoiseCode code) const {
  if (kind == AttackKind::EntangleMeasure) {
    if (!em.has_value()) {
      throw std::invalid_argument("entangle-measure attack needs parameters");
    }
    em->validate();
    if (code != NoiseCode::Dephasing) {
      throw std::invalid_argument("entangle-measure attack is defined on the dephasing code");
    }
    if (target != AttackTarget::FirstTransmission) {
      throw std::invalid_argument(
          "entangle-measure attack couples to the first transmission only");
    }
  }
  if (kind == AttackKind::CEAttack && code != NoiseCode::Dephasing) {
    throw std::invalid_argument("the CNOT attack is defined on the dephasing code");
  }
}

std::pair<TransmissionBatch, EveRecord> intercept_resend(TransmissionBatch batch,
                                                         NoiseCode code,
                                                         Rng& rng) {
  EveRecord record{AttackKind::InterceptResend, code, {}};
  record.positions.resize(batch.size());
  for (std::size_t pos = 0; pos < batch.size(); ++pos) {
    BatchEntry& entry = batch.at(pos);
    const LogicalLabel fake = uniform_label(rng);
    record.positions[pos].kept = entry.item;
    record.positions[pos].fake_label = fake;
    entry.item = std::make_shared<ItemState>(
        ItemState{logical_vector(code, fake), 0});
  }
  return {std::move(batch), std::move(record)};
}

std::pair<TransmissionBatch, EveRecord> measure_resend(TransmissionBatch batch,
                                                       NoiseCode code,
                                                       Rng& rng) {
  EveRecord record{AttackKind::MeasureResend, code, {}};
  record.positions.resize(batch.size());
  for (std::size_t pos = 0; pos < batch.size(); ++pos) {
    ItemState& item = *batch.at(pos).item;
    if (item.ancilla_qubits != 0) {
      throw std::logic_error("measure-resend expects unentangled pairs");
    }
    const LogicalBasis basis = rng.next_bit() ? LogicalBasis::X : LogicalBasis::Z;
    LogicalQubitState s(LogicalQubitState::UncheckedTag{}, code, item.state);
    auto [label, post] = logical_measure(s, basis, rng);
    item.state = post.state();
    record.positions[pos].measured_basis = basis;
    record.positions[pos].measured_label = label;
  }
  return {std::move(batch), std::move(record)};
}

StateVector em_couple(const StateVector& pair, const EMParams& params) {
  if (pair.qubit_count() != 2) {
    throw std::invalid_argument("entangle-measure coupling expects a bare photon pair");
  }
  const Complex a = pair.amplitude(1);  // |HV>
  const Complex b = pair.amplitude(2);  // |VH>
  if (std::abs(pair.amplitude(0)) > kBasisTol ||
      std::abs(pair.amplitude(3)) > kBasisTol) {
    throw std::invalid_argument(
        "entangle-measure coupling is defined on antiparallel pair states");
  }
  const int anc_qubits = ceil_log2(params.ancilla_dim);
  const Eigen::Index dim = Eigen::Index{1} << anc_qubits;
  AmpVector out = AmpVector::Zero(4 * dim);
  for (int pb = 0; pb < 4; ++pb) {
    out.segment(pb * dim, dim) =
        a * params.alpha[pb] * pad_to(params.alpha_ancilla[pb], dim) +
        b * params.beta[pb] * pad_to(params.beta_ancilla[pb], dim);
  }
  out /= out.norm();
  return StateVector(std::move(out));
}

DensityMatrix em_conditional_ancilla(const EMParams& params, NoiseCode code,
                                     LogicalLabel input) {
  const StateVector joint = em_couple(logical_vector(code, input), params);
  std::vector<int> keep;
  for (int q = 2; q < joint.qubit_count(); ++q) keep.push_back(q);
  return partial_trace(joint, keep);
}

std::pair<TransmissionBatch, EveRecord> entangle_measure(TransmissionBatch batch,
                                                         const EMParams& params,
                                                         Rng& rng) {
  (void)rng;  // the coupling is unitary; Eve measures later
  params.validate();
  EveRecord record{AttackKind::EntangleMeasure, NoiseCode::Dephasing, {}};
  record.positions.resize(batch.size());
  for (std::size_t pos = 0; pos < batch.size(); ++pos) {
    BatchEntry& entry = batch.at(pos);
    if (entry.item->ancilla_qubits != 0) {
      throw std::logic_error("entangle-measure expects unentangled pairs");
    }
    entry.item->state = em_couple(entry.item->state, params);
    entry.item->ancilla_qubits = ceil_log2(params.ancilla_dim);
    record.positions[pos].entangled = entry.item;
  }
  return {std::move(batch), std::move(record)};
}

std::pair<TransmissionBatch, EveRecord> ce_attack(TransmissionBatch batch,
                                                  Rng& rng) {
  (void)rng;
  EveRecord record{AttackKind::CEAttack, NoiseCode::Dephasing, {}};
  record.positions.resize(batch.size());
  const GateMatrix cnot = gates::cnot();
  for (std::size_t pos = 0; pos < batch.size(); ++pos) {
    BatchEntry& entry = batch.at(pos);
    ItemState& item = *entry.item;
    const int ancilla_index = 2 + item.ancilla_qubits;
    item.state = tensor_product(item.state, StateVector::basis_state(1, 0));
    const int first[2] = {0, ancilla_index};
    const int second[2] = {1, ancilla_index};
    item.state = apply_gate(apply_gate(item.state, cnot, first), cnot, second);
    item.ancilla_qubits += 1;
    record.positions[pos].entangled = entry.item;
  }
  return {std::move(batch), std::move(record)};
}

double RoundPosterior::entropy_bits() const {
  double h = 0.0;
  for (double q : p) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

// ---------------------------------------------------------------------------
// EveSession

namespace {

class AttackInterceptor final : public Interceptor {
 public:
  AttackInterceptor(AttackKind kind, NoiseCode code,
                    const std::optional<EMParams>* em, EveRecord* record)
      : kind_(kind), code_(code), em_(em), record_(record) {}

  TransmissionBatch intercept(TransmissionBatch batch, Rng& rng) override {
    switch (kind_) {
      case AttackKind::InterceptResend: {
        auto [out, rec] = qdsim::intercept_resend(std::move(batch), code_, rng);
        *record_ = std::move(rec);
        return out;
      }
      case AttackKind::MeasureResend: {
        auto [out, rec] = qdsim::measure_resend(std::move(batch), code_, rng);
        *record_ = std::move(rec);
        return out;
      }
      case AttackKind::EntangleMeasure: {
        auto [out, rec] = qdsim::entangle_measure(std::move(batch), **em_, rng);
        *record_ = std::move(rec);
        return out;
      }
      case AttackKind::CEAttack: {
        auto [out, rec] = qdsim::ce_attack(std::move(batch), rng);
        *record_ = std::move(rec);
        return out;
      }
      case AttackKind::None:
        break;
    }
    return batch;
  }

 private:
  AttackKind kind_;
  NoiseCode code_;
  const std::optional<EMParams>* em_;
  EveRecord* record_;
};

}  // namespace

struct EveSession::Impl {
  std::unique_ptr<AttackInterceptor> first;
  std::unique_ptr<AttackInterceptor> second;

  // Entangle-measure machinery: measurement basis over the padded ancilla
  // register, chosen to best separate the Z-conditional ancilla states.
  std::vector<AmpVector> em_basis;
  int em_anc_qubits = 0;

  // Cached classical outcomes of Eve's retained-system measurements,
  // per transit and batch position (-1 = not measured / nothing retained).
  bool measured = false;
  std::vector<int> first_outcomes;
  std::vector<int> second_outcomes;
};

EveSession::EveSession(AttackModel model, NoiseCode code)
    : model_(std::move(model)), code_(code), impl_(std::make_unique<Impl>()) {
  model_.validate(code);
  if (model_.attacks_first()) {
    impl_->first = std::make_unique<AttackInterceptor>(model_.kind, code,
                                                       &model_.em, &first_record_);
  }
  if (model_.attacks_second()) {
    impl_->second = std::make_unique<AttackInterceptor>(
        model_.kind, code, &model_.em, &second_record_);
  }
  if (model_.kind == AttackKind::EntangleMeasure) {
    const EMParams& p = *model_.em;
    impl_->em_anc_qubits = ceil_log2(p.ancilla_dim);
    const Eigen::Index dim = Eigen::Index{1} << impl_->em_anc_qubits;
    const CMatrix diff =
        em_conditional_ancilla(p, code, {LogicalBasis::Z, 0}).matrix() -
        em_conditional_ancilla(p, code, {LogicalBasis::Z, 1}).matrix();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(diff);
    for (Eigen::Index c = 0; c < dim; ++c) {
      impl_->em_basis.push_back(solver.eigenvectors().col(c));
    }
  }
}

EveSession::~EveSession() = default;

Interceptor* EveSession::first_interceptor() { return impl_->first.get(); }
Interceptor* EveSession::second_interceptor() { return impl_->second.get(); }

namespace {

// Measures the ancilla qubits of a retained item in the given basis.
int measure_ancilla(ItemState& item, const std::vector<AmpVector>& basis,
                    Rng& rng) {
  MeasurementBasis mb;
  for (int q = 2; q < 2 + item.ancilla_qubits; ++q) mb.targets.push_back(q);
  mb.vectors = basis;
  auto [outcome, post] = measure_projective(item.state, mb, rng);
  item.state = std::move(post);
  return outcome;
}

std::vector<AmpVector> computational_basis(int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  std::vector<AmpVector> out;
  for (Eigen::Index i = 0; i < dim; ++i) out.push_back(unit(dim, i));
  return out;
}

}  // namespace

std::vector<RoundPosterior> EveSession::posterior(
    const PublicView& pub, Rng& rng,
    std::span<const LogicalLabel> oracle_initials) {
  const std::size_t rounds = pub.announcements.size();

  // Public decoy announcements reveal which first-transmission slots carry
  // message pairs (in order: lead, twin, lead, twin, ...) and which
  // second-transmission slots carry the encoded leads.
  std::vector<std::size_t> s_positions;
  if (!first_record_.positions.empty()) {
    std::vector<bool> is_decoy(first_record_.positions.size(), false);
    for (std::size_t p : pub.first_check_positions) is_decoy.at(p) = true;
    for (std::size_t p : pub.second_check_positions) is_decoy.at(p) = true;
    for (std::size_t p = 0; p < first_record_.positions.size(); ++p) {
      if (!is_decoy[p]) s_positions.push_back(p);
    }
    if (s_positions.size() != 2 * rounds) {
      throw std::invalid_argument("public view inconsistent with the first-transmission record");
    }
  }
  std::vector<std::size_t> l_positions;
  if (!second_record_.positions.empty()) {
    std::vector<bool> is_decoy(second_record_.positions.size(), false);
    for (std::size_t p : pub.encoded_decoy_positions) is_decoy.at(p) = true;
    for (std::size_t p = 0; p < second_record_.positions.size(); ++p) {
      if (!is_decoy[p]) l_positions.push_back(p);
    }
    if (l_positions.size() != rounds) {
      throw std::invalid_argument("public view inconsistent with the second-transmission record");
    }
  }

  // Measure retained systems once, in the bases the announcements select.
  if (!impl_->measured) {
    impl_->first_outcomes.assign(first_record_.positions.size(), -1);
    impl_->second_outcomes.assign(second_record_.positions.size(), -1);
    for (std::size_t n = 0; n < rounds; ++n) {
      const LogicalBasis announced = pub.announcements[n].basis;
      if (!first_record_.positions.empty()) {
        for (std::size_t p :
             {s_positions[2 * n], s_positions[2 * n + 1]}) {
          PositionRecord& rec = first_record_.positions[p];
          if (rec.kept) {
            LogicalQubitState s(LogicalQubitState::UncheckedTag{}, code_,
                                rec.kept->state);
            auto [label, post] = logical_measure(s, announced, rng);
            rec.kept->state = post.state();
            impl_->first_outcomes[p] = label.bit;
          } else if (rec.entangled) {
            const auto& basis = model_.kind == AttackKind::CEAttack
                                    ? computational_basis(
                                          rec.entangled->ancilla_qubits)
                                    : impl_->em_basis;
            impl_->first_outcomes[p] = measure_ancilla(*rec.entangled, basis, rng);
          }
        }
      }
      if (!second_record_.positions.empty()) {
        PositionRecord& rec = second_record_.positions[l_positions[n]];
        if (rec.kept) {
          LogicalQubitState s(LogicalQubitState::UncheckedTag{}, code_,
                              rec.kept->state);
          auto [label, post] = logical_measure(s, announced, rng);
          rec.kept->state = post.state();
          impl_->second_outcomes[l_positions[n]] = label.bit;
        } else if (rec.entangled) {
          impl_->second_outcomes[l_positions[n]] = measure_ancilla(
              *rec.entangled, computational_basis(rec.entangled->ancilla_qubits),
              rng);
        }
      }
    }
    impl_->measured = true;
  }

  std::vector<RoundPosterior> result(rounds);
  for (std::size_t n = 0; n < rounds; ++n) {
    const LogicalBasis basis = pub.announcements[n].basis;
    const int f = pub.announcements[n].bit;

    std::array<double, 4> joint_ki{};
    for (int b0 = 0; b0 < 2; ++b0) {
      if (!oracle_initials.empty() && oracle_initials[n].bit != b0) continue;
      for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
          double like = 1.0;
          if (first_record_.positions.empty() &&
              second_record_.positions.empty()) {
            like = (f == (b0 ^ k ^ i)) ? 1.0 : 0.0;
          } else {
            like = round_likelihood(n, basis, f, b0, k, i, s_positions,
                                    l_positions);
          }
          joint_ki[static_cast<std::size_t>(k * 2 + i)] += 0.125 * like;
        }
      }
    }
    double z = joint_ki[0] + joint_ki[1] + joint_ki[2] + joint_ki[3];
    if (z <= 0.0) {
      throw std::logic_error("round evidence has zero probability under every hypothesis");
    }
    for (auto& q : joint_ki) q /= z;
    result[n].p = joint_ki;
  }
  return result;
}

namespace {

// Joint probability that Bob announces bit `f` and Eve's ancilla measurement
// on the lead pair yields `o`, for initial (basis,b0) and net message m=k^i.
double em_lead_likelihood(const EMParams& params,
                          const std::vector<AmpVector>& eve_basis,
                          NoiseCode code, LogicalBasis basis, int b0, int m,
                          int f, int o) {
  StateVector joint =
      em_couple(logical_vector(code, {basis, b0}), params);
  const int pair[2] = {0, 1};
  if (m) joint = apply_gate(joint, composite_unitary(code, 1), pair);
  joint = apply_gate(joint, decode_pair_gate(code, basis), pair);

  const Eigen::Index dim = joint.dim() / 4;
  double prob = 0.0;
  for (int pb = 0; pb < 4; ++pb) {
    const auto label =
        label_from_physical(code, basis, pair_bit1(pb), pair_bit2(pb));
    if (!label || label->bit != f) continue;
    const AmpVector slice = joint.amplitudes().segment(pb * dim, dim);
    prob += std::norm(eve_basis[static_cast<std::size_t>(o)].dot(slice));
  }
  return prob;
}

// Probability of Eve's ancilla outcome on the retained twin, any Alice outcome.
double em_twin_likelihood(const EMParams& params,
                          const std::vector<AmpVector>& eve_basis,
                          NoiseCode code, LogicalBasis basis, int b0, int o) {
  const DensityMatrix rho = em_conditional_ancilla(params, code, {basis, b0});
  const AmpVector& v = eve_basis[static_cast<std::size_t>(o)];
  return std::real(Complex(v.dot(rho.matrix() * v)));
}

}  // namespace

double EveSession::round_likelihood(
    std::size_t round, LogicalBasis basis, int f, int b0, int k, int i,
    const std::vector<std::size_t>& s_positions,
    const std::vector<std::size_t>& l_positions) const {
  const bool first = !first_record_.positions.empty();
  const bool second = !second_record_.positions.empty();

  switch (model_.kind) {
    case AttackKind::None:
    case AttackKind::CEAttack:
      // Delivered states are untouched and the ancilla outcome has unit
      // probability for every hypothesis.
      return f == (b0 ^ k ^ i) ? 1.0 : 0.0;

    case AttackKind::InterceptResend: {
      double like = 1.0;
      LogicalLabel at_alice{basis, b0};  // lead label reaching Alice
      if (first) {
        // Kept originals, measured in the announced basis, reveal b0 exactly.
        const int m_lead = impl_->first_outcomes[s_positions[2 * round]];
        const int m_twin = impl_->first_outcomes[s_positions[2 * round + 1]];
        if (m_lead != b0 || m_twin != b0) return 0.0;
        at_alice = *first_record_.positions[s_positions[2 * round]].fake_label;
      }
      // Alice encodes k on whatever reached her.
      if (second) {
        const auto& rec = second_record_.positions[l_positions[round]];
        const int m2 = impl_->second_outcomes[l_positions[round]];
        // Eve measured the kept encoded lead in the announced basis.
        if (at_alice.basis == basis) {
          if (m2 != (at_alice.bit ^ k)) return 0.0;
        } else {
          like *= 0.5;
        }
        const LogicalLabel fake2 = *rec.fake_label;
        like *= (fake2.basis == basis) ? (f == (fake2.bit ^ i) ? 1.0 : 0.0) : 0.5;
        return like;
      }
      like *= (at_alice.basis == basis)
                  ? (f == (at_alice.bit ^ k ^ i) ? 1.0 : 0.0)
                  : 0.5;
      return like;
    }

    case AttackKind::MeasureResend: {
      double like = 1.0;
      LogicalLabel at_alice{basis, b0};
      if (first) {
        const auto& lead = first_record_.positions[s_positions[2 * round]];
        const auto& twin = first_record_.positions[s_positions[2 * round + 1]];
        if (*twin.measured_basis == basis) {
          if (twin.measured_label->bit != b0) return 0.0;
        } else {
          like *= 0.5;
        }
        if (*lead.measured_basis == basis) {
          if (lead.measured_label->bit != b0) return 0.0;
        } else {
          like *= 0.5;
        }
        at_alice = *lead.measured_label;  // delivered collapsed state
      }
      LogicalLabel at_bob{at_alice.basis, at_alice.bit ^ k};
      if (second) {
        const auto& rec = second_record_.positions[l_positions[round]];
        if (*rec.measured_basis == at_bob.basis) {
          if (rec.measured_label->bit != at_bob.bit) return 0.0;
        } else {
          like *= 0.5;
        }
        at_bob = *rec.measured_label;
      }
      like *= (at_bob.basis == basis) ? (f == (at_bob.bit ^ i) ? 1.0 : 0.0) : 0.5;
      return like;
    }

    case AttackKind::EntangleMeasure: {
      const int o_lead = impl_->first_outcomes[s_positions[2 * round]];
      const int o_twin = impl_->first_outcomes[s_positions[2 * round + 1]];
      return em_lead_likelihood(*model_.em, impl_->em_basis, code_, basis, b0,
                                k ^ i, f, o_lead) *
             em_twin_likelihood(*model_.em, impl_->em_basis, code_, basis, b0,
                                o_twin);
    }
  }
  return 0.0;
}

std::array<double, 4> EveSession::initial_state_posterior(std::size_t position,
                                                          Rng& rng) {
  if (model_.kind != AttackKind::CEAttack &&
      model_.kind != AttackKind::EntangleMeasure) {
    throw std::invalid_argument(
        "initial-state posterior needs a retained ancilla (CNOT or entangle-measure attack)");
  }
  PositionRecord& rec = first_record_.positions.at(position);
  const auto& basis = model_.kind == AttackKind::CEAttack
                          ? computational_basis(rec.entangled->ancilla_qubits)
                          : impl_->em_basis;
  const int outcome = measure_ancilla(*rec.entangled, basis, rng);

  std::array<double, 4> posterior{};
  double z = 0.0;
  for (int idx = 0; idx < 4; ++idx) {
    const LogicalLabel label = label_from_index(idx);
    double like = 1.0;
    if (model_.kind == AttackKind::EntangleMeasure) {
      like = em_twin_likelihood(*model_.em, impl_->em_basis, code_,
                                label.basis, label.bit, outcome);
    }
    posterior[static_cast<std::size_t>(idx)] = 0.25 * like;
    z += posterior[static_cast<std::size_t>(idx)];
  }
  for (auto& q : posterior) q /= z;
  return posterior;
}

}  // namespace qdsim
