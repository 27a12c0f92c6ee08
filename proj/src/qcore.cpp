#include "qdsim/qcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdsim {
namespace {

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

int log2_exact(std::uint64_t x) {
  int n = 0;
  while (x > 1) {
    x >>= 1;
    ++n;
  }
  return n;
}

// Bit of qubit `q` in basis index `b` of an n-qubit state (big-endian).
inline std::uint64_t qubit_bit(std::uint64_t b, int q, int n) {
  return (b >> (n - 1 - q)) & 1ull;
}

void check_targets(std::span<const int> targets, int qubit_count) {
  std::vector<bool> seen(static_cast<std::size_t>(qubit_count), false);
  for (int t : targets) {
    if (t < 0 || t >= qubit_count) {
      throw std::invalid_argument("target qubit index " + std::to_string(t) +
                                  " out of range for " +
                                  std::to_string(qubit_count) + " qubits");
    }
    if (seen[static_cast<std::size_t>(t)]) {
      throw std::invalid_argument("duplicate target qubit index " +
                                  std::to_string(t));
    }
    seen[static_cast<std::size_t>(t)] = true;
  }
}

// Scatters the sub-index bits of `targets` into a full basis index whose
// remaining bits come from `rest_pattern` (which has zeros at target bits).
inline std::uint64_t compose_index(std::uint64_t rest_pattern,
                                   std::span<const int> targets,
                                   std::uint64_t sub, int n) {
  std::uint64_t b = rest_pattern;
  const int m = static_cast<int>(targets.size());
  for (int j = 0; j < m; ++j) {
    const std::uint64_t bit = (sub >> (m - 1 - j)) & 1ull;
    b |= bit << (n - 1 - targets[j]);
  }
  return b;
}

// Enumerates basis indices that are zero on all target bits.
std::vector<std::uint64_t> rest_patterns(std::span<const int> targets, int n) {
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    bool is_target = false;
    for (int t : targets) is_target |= (t == q);
    if (!is_target) rest.push_back(q);
  }
  const std::uint64_t count = 1ull << rest.size();
  std::vector<std::uint64_t> out(count, 0);
  for (std::uint64_t r = 0; r < count; ++r) {
    std::uint64_t b = 0;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      const std::uint64_t bit = (r >> (rest.size() - 1 - j)) & 1ull;
      b |= bit << (n - 1 - rest[j]);
    }
    out[r] = b;
  }
  return out;
}

void check_basis(const MeasurementBasis& basis, int qubit_count) {
  check_targets(basis.targets, qubit_count);
  if (basis.targets.empty()) {
    throw std::invalid_argument("measurement needs at least one target qubit");
  }
  const Eigen::Index d = Eigen::Index{1} << basis.targets.size();
  if (static_cast<Eigen::Index>(basis.vectors.size()) != d) {
    throw std::invalid_argument("measurement basis must span the target subsystem");
  }
  for (const auto& v : basis.vectors) {
    if (v.size() != d) {
      throw std::invalid_argument("measurement basis vector has wrong dimension");
    }
  }
  for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
    for (std::size_t j = i; j < basis.vectors.size(); ++j) {
      const Complex g = basis.vectors[i].dot(basis.vectors[j]);
      const double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - expect) > kBasisTol) {
        throw std::invalid_argument("measurement basis is not orthonormal");
      }
    }
  }
}

}  // namespace

StateVector::StateVector(AmpVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  const auto n = static_cast<std::uint64_t>(amplitudes_.size());
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("state dimension must be a power of two");
  }
  qubit_count_ = log2_exact(n);
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

StateVector StateVector::basis_state(int qubit_count, std::uint64_t index) {
  AmpVector v = AmpVector::Zero(Eigen::Index{1} << qubit_count);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

GateMatrix::GateMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() ||
      !is_power_of_two(static_cast<std::uint64_t>(entries_.rows()))) {
    throw std::invalid_argument("gate must be square with power-of-two dimension");
  }
  arity_ = log2_exact(static_cast<std::uint64_t>(entries_.rows()));
  const CMatrix gram = entries_.adjoint() * entries_;
  const CMatrix id = CMatrix::Identity(entries_.rows(), entries_.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw std::invalid_argument("gate matrix is not unitary");
  }
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > kAlgebraTol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

namespace gates {

GateMatrix identity(int arity) {
  const Eigen::Index d = Eigen::Index{1} << arity;
  return GateMatrix(CMatrix::Identity(d, d));
}

GateMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return GateMatrix(m);
}

GateMatrix minus_i_pauli_y() {
  CMatrix m(2, 2);
  m << 0, -1, 1, 0;
  return GateMatrix(m);
}

GateMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(2, 2);
  m << s, s, s, -s;
  return GateMatrix(m);
}

GateMatrix cnot() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(3, 2) = 1;
  m(2, 3) = 1;
  return GateMatrix(m);
}

GateMatrix kron(const GateMatrix& a, const GateMatrix& b) {
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  CMatrix out(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = 0; j < ma.cols(); ++j) {
      out.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) =
          ma(i, j) * mb;
    }
  }
  return GateMatrix(std::move(out));
}

}  // namespace gates

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  AmpVector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  }
  return StateVector(std::move(out));
}

StateVector apply_gate(const StateVector& state, const GateMatrix& gate,
                       std::span<const int> targets) {
  const int n = state.qubit_count();
  if (static_cast<int>(targets.size()) != gate.arity()) {
    throw std::invalid_argument("gate arity does not match target count");
  }
  check_targets(targets, n);

  const Eigen::Index sub_dim = Eigen::Index{1} << targets.size();
  AmpVector out(state.dim());
  AmpVector block(sub_dim);
  for (std::uint64_t rest : rest_patterns(targets, n)) {
    for (Eigen::Index s = 0; s < sub_dim; ++s) {
      block(s) = state.amplitudes()(static_cast<Eigen::Index>(
          compose_index(rest, targets, static_cast<std::uint64_t>(s), n)));
    }
    block = gate.matrix() * block;
    for (Eigen::Index s = 0; s < sub_dim; ++s) {
      out(static_cast<Eigen::Index>(
          compose_index(rest, targets, static_cast<std::uint64_t>(s), n))) =
          block(s);
    }
  }
  return StateVector(std::move(out));
}

std::vector<double> measurement_probabilities(const StateVector& state,
                                              const MeasurementBasis& basis) {
  check_basis(basis, state.qubit_count());
  const int n = state.qubit_count();
  const Eigen::Index sub_dim = Eigen::Index{1} << basis.targets.size();
  const auto rests = rest_patterns(basis.targets, n);

  std::vector<double> probs(basis.vectors.size(), 0.0);
  for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
    const AmpVector& v = basis.vectors[k];
    for (std::uint64_t rest : rests) {
      Complex overlap = 0.0;
      for (Eigen::Index s = 0; s < sub_dim; ++s) {
        overlap += std::conj(v(s)) *
                   state.amplitudes()(static_cast<Eigen::Index>(compose_index(
                       rest, basis.targets, static_cast<std::uint64_t>(s), n)));
      }
      probs[k] += std::norm(overlap);
    }
  }
  return probs;
}

std::pair<int, StateVector> measure_projective(const StateVector& state,
                                               const MeasurementBasis& basis,
                                               Rng& rng) {
  const std::vector<double> probs = measurement_probabilities(state, basis);

  const double u = rng.next_real();
  double cumulative = 0.0;
  int outcome = static_cast<int>(probs.size()) - 1;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cumulative += probs[k];
    if (u < cumulative) {
      outcome = static_cast<int>(k);
      break;
    }
  }

  // Project onto the sampled basis vector and renormalize.
  const int n = state.qubit_count();
  const Eigen::Index sub_dim = Eigen::Index{1} << basis.targets.size();
  const AmpVector& v = basis.vectors[static_cast<std::size_t>(outcome)];
  AmpVector post = AmpVector::Zero(state.dim());
  for (std::uint64_t rest : rest_patterns(basis.targets, n)) {
    Complex overlap = 0.0;
    for (Eigen::Index s = 0; s < sub_dim; ++s) {
      overlap += std::conj(v(s)) *
                 state.amplitudes()(static_cast<Eigen::Index>(compose_index(
                     rest, basis.targets, static_cast<std::uint64_t>(s), n)));
    }
    for (Eigen::Index s = 0; s < sub_dim; ++s) {
      post(static_cast<Eigen::Index>(compose_index(
          rest, basis.targets, static_cast<std::uint64_t>(s), n))) +=
          overlap * v(s);
    }
  }
  post /= post.norm();
  return {outcome, StateVector(std::move(post))};
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("fidelity requires equal dimensions");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

DensityMatrix partial_trace(const StateVector& state,
                            std::span<const int> keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial trace must keep at least one qubit");
  }
  const int n = state.qubit_count();
  check_targets(keep, n);

  const Eigen::Index keep_dim = Eigen::Index{1} << keep.size();
  const auto rests = rest_patterns(keep, n);
  CMatrix rho = CMatrix::Zero(keep_dim, keep_dim);
  for (Eigen::Index r = 0; r < keep_dim; ++r) {
    for (Eigen::Index c = 0; c < keep_dim; ++c) {
      Complex sum = 0.0;
      for (std::uint64_t rest : rests) {
        const auto ir = compose_index(rest, keep, static_cast<std::uint64_t>(r), n);
        const auto ic = compose_index(rest, keep, static_cast<std::uint64_t>(c), n);
        sum += state.amplitudes()(static_cast<Eigen::Index>(ir)) *
               std::conj(state.amplitudes()(static_cast<Eigen::Index>(ic)));
      }
      rho(r, c) = sum;
    }
  }
  return DensityMatrix(std::move(rho));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("trace distance requires equal dimensions");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix() - sigma.matrix(),
                                                Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace qdsim
