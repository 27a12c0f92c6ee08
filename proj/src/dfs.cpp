#include "qdsim/dfs.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qdsim {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Two-qubit basis indices with qubit 0 (photon A1) as the high bit.
constexpr Eigen::Index kHH = 0;
constexpr Eigen::Index kHV = 1;
constexpr Eigen::Index kVH = 2;
constexpr Eigen::Index kVV = 3;

AmpVector two_qubit(Complex hh, Complex hv, Complex vh, Complex vv) {
  AmpVector v(4);
  v << hh, hv, vh, vv;
  return v;
}

AmpVector logical_amplitudes(NoiseCode code, LogicalLabel label) {
  if (code == NoiseCode::Dephasing) {
    switch (label_index(label)) {
      case 0: return two_qubit(0, 1, 0, 0);                       // |HV>
      case 1: return two_qubit(0, 0, 1, 0);                       // |VH>
      case 2: return two_qubit(0, kInvSqrt2, kInvSqrt2, 0);       // |psi+>
      default: return two_qubit(0, kInvSqrt2, -kInvSqrt2, 0);     // |psi->
    }
  }
  switch (label_index(label)) {
    case 0: return two_qubit(kInvSqrt2, 0, 0, kInvSqrt2);         // |phi+>
    case 1: return two_qubit(0, kInvSqrt2, -kInvSqrt2, 0);        // |psi->
    case 2: return two_qubit(0.5, 0.5, -0.5, 0.5);                // (|0r>+|1r>)/sqrt2
    default: return two_qubit(0.5, -0.5, 0.5, 0.5);               // (|0r>-|1r>)/sqrt2
  }
}

}  // namespace

int label_index(LogicalLabel label) {
  return (label.basis == LogicalBasis::X ? 2 : 0) + label.bit;
}

LogicalLabel label_from_index(int index) {
  if (index < 0 || index > 3) {
    throw std::invalid_argument("label index out of range");
  }
  return {index >= 2 ? LogicalBasis::X : LogicalBasis::Z, index & 1};
}

LogicalLabel uniform_label(Rng& rng) {
  return label_from_index(static_cast<int>(rng.next_below(4)));
}

std::string to_string(LogicalBasis basis) {
  return basis == LogicalBasis::Z ? "Z" : "X";
}

std::string to_string(LogicalLabel label) {
  return to_string(label.basis) + std::to_string(label.bit);
}

std::string to_string(NoiseCode code) {
  return code == NoiseCode::Dephasing ? "dephasing" : "rotation";
}

LogicalQubitState::LogicalQubitState(NoiseCode code, StateVector state)
    : code_(code), state_(std::move(state)) {
  if (state_.qubit_count() != 2) {
    throw std::invalid_argument("logical qubit needs exactly two photons");
  }
  if (!in_code_subspace()) {
    throw std::invalid_argument("state lies outside the code subspace");
  }
}

bool LogicalQubitState::in_code_subspace() const {
  if (state_.qubit_count() != 2) return false;
  // Project onto span{|0>_L, |1>_L} and check the residual.
  const AmpVector zero = logical_amplitudes(code_, {LogicalBasis::Z, 0});
  const AmpVector one = logical_amplitudes(code_, {LogicalBasis::Z, 1});
  const AmpVector& psi = state_.amplitudes();
  const AmpVector residual = psi - zero * zero.dot(psi) - one * one.dot(psi);
  return residual.norm() <= kBasisTol;
}

StateVector logical_vector(NoiseCode code, LogicalLabel label) {
  return StateVector(logical_amplitudes(code, label));
}

LogicalQubitState logical_state(NoiseCode code, LogicalLabel label) {
  return LogicalQubitState(code, logical_vector(code, label));
}

GateMatrix composite_unitary(NoiseCode code, int message_bit) {
  if (message_bit != 0 && message_bit != 1) {
    throw std::invalid_argument("message bit must be 0 or 1");
  }
  if (message_bit == 0) {
    return gates::identity(2);
  }
  if (code == NoiseCode::Dephasing) {
    return gates::kron(gates::minus_i_pauli_y(), gates::pauli_x());
  }
  return gates::kron(gates::identity(1), gates::minus_i_pauli_y());
}

std::pair<LogicalLabel, LogicalQubitState> logical_measure(
    const LogicalQubitState& s, LogicalBasis basis, Rng& rng) {
  // Complete the two-vector logical basis with the orthogonal complement of
  // the code subspace; landing there means the state leaked out of the code.
  MeasurementBasis mb;
  mb.targets = {0, 1};
  mb.vectors.push_back(logical_amplitudes(s.code(), {basis, 0}));
  mb.vectors.push_back(logical_amplitudes(s.code(), {basis, 1}));
  if (s.code() == NoiseCode::Dephasing) {
    mb.vectors.push_back(two_qubit(1, 0, 0, 0));
    mb.vectors.push_back(two_qubit(0, 0, 0, 1));
  } else {
    mb.vectors.push_back(two_qubit(kInvSqrt2, 0, 0, -kInvSqrt2));   // |phi->
    mb.vectors.push_back(two_qubit(0, kInvSqrt2, kInvSqrt2, 0));    // |psi+>
  }
  auto [outcome, post] = measure_projective(s.state(), mb, rng);
  if (outcome >= 2) {
    throw std::logic_error("logical measurement found the state outside the code subspace");
  }
  return {LogicalLabel{basis, outcome},
          LogicalQubitState(LogicalQubitState::UncheckedTag{}, s.code(),
                            std::move(post))};
}

GateMatrix decode_pair_gate(NoiseCode code, LogicalBasis basis) {
  if (basis == LogicalBasis::Z) {
    return gates::identity(2);
  }
  if (code == NoiseCode::Dephasing) {
    return gates::kron(gates::hadamard(), gates::hadamard());
  }
  return gates::kron(gates::identity(1), gates::hadamard());
}

std::optional<LogicalLabel> label_from_physical(NoiseCode code,
                                                LogicalBasis basis,
                                                int bit1, int bit2) {
  const bool parallel = (bit1 == bit2);
  if (code == NoiseCode::Dephasing && basis == LogicalBasis::Z) {
    if (parallel) return std::nullopt;  // HH/VV: impossible inside the subspace
    return LogicalLabel{LogicalBasis::Z, bit1 == 0 ? 0 : 1};
  }
  return LogicalLabel{basis, parallel ? 0 : 1};
}

PairDecodeResult decode_photon_pair(const StateVector& joint, NoiseCode code,
                                    LogicalBasis basis, Rng& rng) {
  const int targets[2] = {0, 1};
  StateVector work = apply_gate(joint, decode_pair_gate(code, basis), targets);

  // Photon-by-photon {|H>,|V>} measurements.
  AmpVector ket_h(2), ket_v(2);
  ket_h << 1, 0;
  ket_v << 0, 1;
  MeasurementBasis z1{{0}, {ket_h, ket_v}};
  MeasurementBasis z2{{1}, {ket_h, ket_v}};
  auto [bit1, post1] = measure_projective(work, z1, rng);
  auto [bit2, post2] = measure_projective(post1, z2, rng);

  return {label_from_physical(code, basis, bit1, bit2), std::move(post2)};
}

LogicalLabel decode_single_photon(const LogicalQubitState& s,
                                  LogicalBasis basis, Rng& rng) {
  auto result = decode_photon_pair(s.state(), s.code(), basis, rng);
  if (!result.label) {
    throw std::logic_error("single-photon decode found the state outside the code subspace");
  }
  return *result.label;
}

LogicalLabel encoded_label(LogicalLabel initial, int k, int i) {
  return {initial.basis, initial.bit ^ (k & 1) ^ (i & 1)};
}

}  // namespace qdsim
