#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qdsim/dfs.hpp"
#include "qdsim/qcore.hpp"
#include "qdsim/rng.hpp"

namespace qdsim {

enum class DriftPolicy { PerBlock, PerLogicalQubit };

// Collective noise acting on photons in flight. The fluctuating parameter is
// drawn uniformly from [0, 2*pi) per the drift policy.
struct NoiseModel {
  NoiseCode code = NoiseCode::Dephasing;
  bool enabled = true;
  DriftPolicy drift = DriftPolicy::PerLogicalQubit;
};

// Simulator-side tag for what a batch slot carries. Bookkeeping only: neither
// the receiver nor an interceptor may branch on it.
enum class QubitRole { MessageLead, MessageTwin, DecoyFirst, DecoySecond };

// One photon pair in flight. Qubits {0,1} are the pair; an adversary may have
// appended ancilla qubits {2,...} entangled with it. Shared between the batch
// and an eavesdropper record so later measurements collapse both views.
struct ItemState {
  StateVector state;
  int ancilla_qubits = 0;
};
using ItemPtr = std::shared_ptr<ItemState>;

struct BatchEntry {
  ItemPtr item;
  QubitRole role;
};

// Ordered sequence of photon pairs; position = index.
class TransmissionBatch {
 public:
  TransmissionBatch() = default;

  void append(LogicalQubitState s, QubitRole role) {
    entries_.push_back(
        {std::make_shared<ItemState>(ItemState{s.state(), 0}), role});
  }
  void append(BatchEntry entry) { entries_.push_back(std::move(entry)); }

  std::size_t size() const { return entries_.size(); }
  BatchEntry& at(std::size_t pos) { return entries_.at(pos); }
  const BatchEntry& at(std::size_t pos) const { return entries_.at(pos); }

 private:
  std::vector<BatchEntry> entries_;
};

// Adversary hook installed on a transmission. Stateful per dialogue.
class Interceptor {
 public:
  virtual ~Interceptor() = default;
  virtual TransmissionBatch intercept(TransmissionBatch batch, Rng& rng) = 0;
};

// Single-photon noise unitary: dephasing diag(1, e^{i*phi}) or rotation by
// theta in the {|H>,|V>} plane.
GateMatrix noise_unitary(NoiseCode code, double parameter);

double sample_noise_parameter(const NoiseModel& model, Rng& rng);

// Applies the noise unitary to both photons with one shared parameter.
StateVector apply_collective_noise(const StateVector& pair, NoiseCode code,
                                   double parameter);

// Per-item quantum operations on states in flight (pair = qubits {0,1}).
void apply_pair_gate(ItemState& item, const GateMatrix& gate);
std::optional<LogicalLabel> measure_item(ItemState& item, NoiseCode code,
                                         LogicalBasis basis, Rng& rng);

// Sends a batch through the noisy channel, then through the interceptor if
// one is installed. Lossless and order-preserving.
TransmissionBatch transmit(TransmissionBatch batch, const NoiseModel& model,
                           Interceptor* interceptor, Rng& rng);

}  // namespace qdsim
