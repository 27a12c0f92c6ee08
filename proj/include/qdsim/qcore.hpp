#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qdsim/rng.hpp"

namespace qdsim {

using Complex = std::complex<double>;
using AmpVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Tolerances: algebraic identities vs. user-supplied bases.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kBasisTol = 1e-10;

// Normalized pure state of `n` qubits, amplitudes indexed big-endian:
// qubit 0 is the most significant bit (first transmitted photon).
// Basis convention: |H> = 0, |V> = 1.
class StateVector {
 public:
  explicit StateVector(AmpVector amplitudes);

  static StateVector basis_state(int qubit_count, std::uint64_t index);

  int qubit_count() const { return qubit_count_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const AmpVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::uint64_t index) const {
    return amplitudes_(static_cast<Eigen::Index>(index));
  }

 private:
  AmpVector amplitudes_;
  int qubit_count_;
};

// Unitary on `arity` qubits, entries 2^k x 2^k, unitarity checked to 1e-12.
class GateMatrix {
 public:
  explicit GateMatrix(CMatrix entries);

  int arity() const { return arity_; }
  const CMatrix& matrix() const { return entries_; }

 private:
  CMatrix entries_;
  int arity_;
};

// Hermitian, unit-trace, positive-semidefinite (to tolerance) operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }

 private:
  CMatrix entries_;
};

// Orthonormal measurement basis on an ordered subset of qubits.
// `vectors` must hold 2^|targets| orthonormal vectors of that dimension.
struct MeasurementBasis {
  std::vector<int> targets;
  std::vector<AmpVector> vectors;
};

namespace gates {
GateMatrix identity(int arity = 1);
GateMatrix pauli_x();
// -i sigma_y = |V><H| - |H><V|
GateMatrix minus_i_pauli_y();
GateMatrix hadamard();
// Control = first target, target = second.
GateMatrix cnot();
GateMatrix kron(const GateMatrix& a, const GateMatrix& b);
}  // namespace gates

StateVector tensor_product(const StateVector& a, const StateVector& b);

StateVector apply_gate(const StateVector& state, const GateMatrix& gate,
                       std::span<const int> targets);

// Samples an outcome with Born probabilities; returns (outcome index,
// renormalized post-measurement state).
std::pair<int, StateVector> measure_projective(const StateVector& state,
                                               const MeasurementBasis& basis,
                                               Rng& rng);

// Outcome probabilities of the same measurement, no sampling.
std::vector<double> measurement_probabilities(const StateVector& state,
                                              const MeasurementBasis& basis);

// |<a|b>|^2, insensitive to global phase of either argument.
double fidelity(const StateVector& a, const StateVector& b);

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep);

// (1/2) sum of |eigenvalues(rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qdsim
