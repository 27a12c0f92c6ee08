#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "qdsim/qcore.hpp"

using namespace qdsim;

namespace {

StateVector make_state(std::initializer_list<Complex> amps) {
  AmpVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const Complex& a : amps) v(i++) = a;
  return StateVector(std::move(v));
}

const double kInv2 = 1.0 / std::sqrt(2.0);

StateVector ket_h() { return StateVector::basis_state(1, 0); }
StateVector ket_v() { return StateVector::basis_state(1, 1); }
StateVector ket_plus() { return make_state({kInv2, kInv2}); }
StateVector ket_minus() { return make_state({kInv2, -kInv2}); }
StateVector psi_plus() { return make_state({0, kInv2, kInv2, 0}); }
StateVector psi_minus() { return make_state({0, kInv2, -kInv2, 0}); }

MeasurementBasis hv_basis(int qubit) {
  AmpVector h(2), v(2);
  h << 1, 0;
  v << 0, 1;
  return {{qubit}, {h, v}};
}

MeasurementBasis bell_basis() {
  MeasurementBasis b;
  b.targets = {0, 1};
  AmpVector phip(4), phim(4), psip(4), psim(4);
  phip << kInv2, 0, 0, kInv2;
  phim << kInv2, 0, 0, -kInv2;
  psip << 0, kInv2, kInv2, 0;
  psim << 0, kInv2, -kInv2, 0;
  b.vectors = {phip, phim, psip, psim};
  return b;
}

}  // namespace

TEST_CASE("state vector invariants") {
  CHECK_THROWS_AS((make_state({1.0, 1.0})), std::invalid_argument);  // not normalized
  AmpVector bad(3);
  bad << 1, 0, 0;
  CHECK_THROWS_AS((StateVector(bad)), std::invalid_argument);  // not a power of two
  CHECK(ket_h().qubit_count() == 1);
  CHECK(make_state({0, 1, 0, 0}).qubit_count() == 2);
}

TEST_CASE("gate matrix rejects non-unitary entries") {
  CMatrix m(2, 2);
  m << 1, 0, 0, 2;
  CHECK_THROWS_AS((GateMatrix(m)), std::invalid_argument);
  CHECK(gates::hadamard().arity() == 1);
  CHECK(gates::cnot().arity() == 2);
}

TEST_CASE("tensor product basis states and superpositions") {
  const StateVector hv = tensor_product(ket_h(), ket_v());
  CHECK(hv.amplitude(1) == Complex(1.0));
  for (std::uint64_t i : {0ull, 2ull, 3ull}) CHECK(std::abs(hv.amplitude(i)) == 0.0);

  const StateVector h_plus = tensor_product(ket_h(), ket_plus());
  CHECK(h_plus.amplitude(0).real() == doctest::Approx(kInv2).epsilon(1e-14));
  CHECK(h_plus.amplitude(1).real() == doctest::Approx(kInv2).epsilon(1e-14));
  CHECK(std::abs(h_plus.amplitude(2)) == 0.0);
  CHECK(std::abs(h_plus.amplitude(3)) == 0.0);

  const StateVector pm = tensor_product(ket_plus(), ket_minus());
  CHECK(pm.amplitude(0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pm.amplitude(1).real() == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(pm.amplitude(2).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pm.amplitude(3).real() == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("apply_gate single-qubit actions") {
  const int q0[1] = {0};
  const StateVector flipped = apply_gate(ket_h(), gates::pauli_x(), q0);
  CHECK(std::abs(flipped.amplitude(1) - Complex(1.0)) < 1e-15);

  const StateVector rotated = apply_gate(ket_v(), gates::minus_i_pauli_y(), q0);
  CHECK(std::abs(rotated.amplitude(0) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(rotated.amplitude(1)) < 1e-15);
}

TEST_CASE("apply_gate against direct 4x4 multiplication") {
  // H (x) H on |psi-> via targets vs. the explicit Kronecker matrix.
  const GateMatrix hh = gates::kron(gates::hadamard(), gates::hadamard());
  const int both[2] = {0, 1};
  const StateVector via_targets = apply_gate(psi_minus(), hh, both);
  const AmpVector direct = hh.matrix() * psi_minus().amplitudes();
  CHECK((via_targets.amplitudes() - direct).cwiseAbs().maxCoeff() < 1e-15);
  // Result is |psi-> up to global sign.
  CHECK(fidelity(via_targets, psi_minus()) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("apply_gate respects target order and validates inputs") {
  // CNOT with control=1, target=0 on |HV>: control bit (qubit 1) is 1.
  const int reversed[2] = {1, 0};
  const StateVector out =
      apply_gate(tensor_product(ket_h(), ket_v()), gates::cnot(), reversed);
  CHECK(std::abs(out.amplitude(3) - Complex(1.0)) < 1e-15);  // |VV>

  const int bad_index[1] = {2};
  CHECK_THROWS_AS(apply_gate(ket_plus(), gates::pauli_x(), bad_index),
                  std::invalid_argument);
  const int dup[2] = {0, 0};
  CHECK_THROWS_AS(apply_gate(psi_plus(), gates::cnot(), dup),
                  std::invalid_argument);
  const int one[1] = {0};
  CHECK_THROWS_AS(apply_gate(psi_plus(), gates::cnot(), one),
                  std::invalid_argument);  // arity mismatch
}

TEST_CASE("norm preservation under random gates") {
  Rng rng(11);
  StateVector s = make_state({0.5, Complex(0, 0.5), 0.5, -0.5});
  const int q0[1] = {0};
  const int q1[1] = {1};
  const int both[2] = {0, 1};
  for (int step = 0; step < 50; ++step) {
    switch (rng.next_below(4)) {
      case 0: s = apply_gate(s, gates::hadamard(), q0); break;
      case 1: s = apply_gate(s, gates::minus_i_pauli_y(), q1); break;
      case 2: s = apply_gate(s, gates::cnot(), both); break;
      default: s = apply_gate(s, gates::pauli_x(), q1); break;
    }
    CHECK(std::abs(s.amplitudes().squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("measurement of eigenstates is deterministic") {
  Rng rng(3);
  const StateVector hv = tensor_product(ket_h(), ket_v());
  auto [o1, post1] = measure_projective(hv, hv_basis(0), rng);
  auto [o2, post2] = measure_projective(post1, hv_basis(1), rng);
  CHECK(o1 == 0);
  CHECK(o2 == 1);

  auto [bell, post3] = measure_projective(psi_plus(), bell_basis(), rng);
  CHECK(bell == 2);  // |psi+>
}

TEST_CASE("measurement of entangled state is unbiased and idempotent") {
  Rng rng(17);
  int zeros = 0;
  const int samples = 10000;
  for (int t = 0; t < samples; ++t) {
    auto [outcome, post] = measure_projective(psi_plus(), hv_basis(0), rng);
    if (outcome == 0) ++zeros;
    // Repeating the same measurement reproduces the outcome.
    auto [again, post2] = measure_projective(post, hv_basis(0), rng);
    CHECK(again == outcome);
  }
  // Born rule: p=1/2 within 3 standard errors.
  const double se = std::sqrt(0.25 / samples);
  CHECK(std::abs(zeros / static_cast<double>(samples) - 0.5) < 3 * se);
}

TEST_CASE("measurement validates the basis") {
  Rng rng(1);
  MeasurementBasis bad = hv_basis(0);
  bad.vectors[1] = bad.vectors[0];  // not orthogonal
  CHECK_THROWS_AS(measure_projective(ket_plus(), bad, rng), std::invalid_argument);

  MeasurementBasis incomplete;
  incomplete.targets = {0, 1};
  incomplete.vectors = bell_basis().vectors;
  incomplete.vectors.pop_back();  // does not span
  CHECK_THROWS_AS(measure_projective(psi_plus(), incomplete, rng),
                  std::invalid_argument);
}

TEST_CASE("fidelity identities") {
  const StateVector s = make_state({0.6, Complex(0, 0.8)});
  CHECK(fidelity(s, s) == doctest::Approx(1.0).epsilon(1e-14));
  const Complex phase = std::polar(1.0, 1.2345);
  const StateVector rotated = make_state({0.6 * phase, Complex(0, 0.8) * phase});
  CHECK(fidelity(s, rotated) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fidelity(ket_h(), ket_v()) == 0.0);
  CHECK_THROWS_AS(fidelity(ket_h(), psi_plus()), std::invalid_argument);
}

TEST_CASE("global phase is unobservable in measurement") {
  const Complex phase = std::polar(1.0, 0.7753);
  const StateVector plain = psi_plus();
  const StateVector shifted = StateVector(AmpVector(phase * plain.amplitudes()));

  const auto probs_plain = measurement_probabilities(plain, hv_basis(0));
  const auto probs_shifted = measurement_probabilities(shifted, hv_basis(0));
  for (std::size_t i = 0; i < probs_plain.size(); ++i) {
    CHECK(std::abs(probs_plain[i] - probs_shifted[i]) < 1e-12);
  }

  Rng rng_a(123), rng_b(123);
  for (int t = 0; t < 100; ++t) {
    auto [oa, pa] = measure_projective(plain, hv_basis(1), rng_a);
    auto [ob, pb] = measure_projective(shifted, hv_basis(1), rng_b);
    CHECK(oa == ob);
  }
}

TEST_CASE("partial trace") {
  const int keep_first[1] = {0};
  const DensityMatrix pure =
      partial_trace(tensor_product(ket_h(), ket_v()), keep_first);
  CHECK(std::abs(pure.matrix()(0, 0) - Complex(1.0)) < 1e-14);
  CHECK(std::abs(pure.matrix()(1, 1)) < 1e-14);

  const DensityMatrix mixed = partial_trace(psi_plus(), keep_first);
  CHECK(std::abs(mixed.matrix()(0, 0) - Complex(0.5)) < 1e-14);
  CHECK(std::abs(mixed.matrix()(1, 1) - Complex(0.5)) < 1e-14);
  CHECK(std::abs(mixed.matrix()(0, 1)) < 1e-14);

  const int keep_all[2] = {0, 1};
  const DensityMatrix projector = partial_trace(psi_plus(), keep_all);
  const CMatrix expected =
      psi_plus().amplitudes() * psi_plus().amplitudes().adjoint();
  CHECK((projector.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(partial_trace(psi_plus(), std::span<const int>{}),
                  std::invalid_argument);
}

TEST_CASE("trace distance") {
  const int keep0[1] = {0};
  const DensityMatrix h = partial_trace(tensor_product(ket_h(), ket_h()), keep0);
  const DensityMatrix v = partial_trace(tensor_product(ket_v(), ket_h()), keep0);
  const DensityMatrix mixed = partial_trace(psi_plus(), keep0);

  CHECK(trace_distance(h, h) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(trace_distance(h, v) == doctest::Approx(1.0).epsilon(1e-13));
  // Pure |H><H| vs the maximally mixed state: eigenvalues +-1/2.
  CHECK(trace_distance(h, mixed) == doctest::Approx(0.5).epsilon(1e-13));

  const int keep_both[2] = {0, 1};
  CHECK_THROWS_AS(trace_distance(h, partial_trace(psi_plus(), keep_both)),
                  std::invalid_argument);
}

TEST_CASE("density matrix invariants") {
  CMatrix not_hermitian(2, 2);
  not_hermitian << 0.5, 0.5, -0.5, 0.5;
  CHECK_THROWS_AS((DensityMatrix(not_hermitian)), std::invalid_argument);
  CMatrix wrong_trace = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS((DensityMatrix(wrong_trace)), std::invalid_argument);
  CMatrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS((DensityMatrix(negative)), std::invalid_argument);
}
