#include "qdsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdsim {

GateMatrix noise_unitary(NoiseCode code, double parameter) {
  if (!std::isfinite(parameter)) {
    throw std::invalid_argument("noise parameter must be finite");
  }
  CMatrix m(2, 2);
  if (code == NoiseCode::Dephasing) {
    m << 1.0, 0.0, 0.0, std::polar(1.0, parameter);
  } else {
    const double c = std::cos(parameter);
    const double s = std::sin(parameter);
    m << c, -s, s, c;
  }
  return GateMatrix(m);
}

double sample_noise_parameter(const NoiseModel& model, Rng& rng) {
  if (!model.enabled) {
    throw std::logic_error("noise parameter sampled from a disabled model");
  }
  return 2.0 * std::numbers::pi * rng.next_real();
}

StateVector apply_collective_noise(const StateVector& pair, NoiseCode code,
                                   double parameter) {
  const GateMatrix u = noise_unitary(code, parameter);
  const int first[1] = {0};
  const int second[1] = {1};
  return apply_gate(apply_gate(pair, u, first), u, second);
}

void apply_pair_gate(ItemState& item, const GateMatrix& gate) {
  const int targets[2] = {0, 1};
  item.state = apply_gate(item.state, gate, targets);
}

std::optional<LogicalLabel> measure_item(ItemState& item, NoiseCode code,
                                         LogicalBasis basis, Rng& rng) {
  auto result = decode_photon_pair(item.state, code, basis, rng);
  item.state = std::move(result.post);
  return result.label;
}

TransmissionBatch transmit(TransmissionBatch batch, const NoiseModel& model,
                           Interceptor* interceptor, Rng& rng) {
  if (model.enabled) {
    // Both photons of one pair always share the parameter; the drift policy
    // decides how often a fresh value is drawn.
    double parameter = sample_noise_parameter(model, rng);
    for (std::size_t pos = 0; pos < batch.size(); ++pos) {
      if (model.drift == DriftPolicy::PerLogicalQubit && pos > 0) {
        parameter = sample_noise_parameter(model, rng);
      }
      ItemState& item = *batch.at(pos).item;
      const GateMatrix u = noise_unitary(model.code, parameter);
      const int first[1] = {0};
      const int second[1] = {1};
      item.state = apply_gate(apply_gate(item.state, u, first), u, second);
    }
  }

  if (interceptor != nullptr) {
    const std::size_t sent = batch.size();
    batch = interceptor->intercept(std::move(batch), rng);
    if (batch.size() != sent) {
      throw std::runtime_error("interceptor changed the batch length");
    }
  }
  return batch;
}

}  // namespace qdsim
