#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "qdsim/dfs.hpp"

using namespace qdsim;

namespace {

const double kInv2 = 1.0 / std::sqrt(2.0);

AmpVector two_qubit(Complex hh, Complex hv, Complex vh, Complex vv) {
  AmpVector v(4);
  v << hh, hv, vh, vv;
  return v;
}

bool amplitudes_close(const StateVector& got, const AmpVector& want,
                      double tol = 1e-12) {
  return (got.amplitudes() - want).cwiseAbs().maxCoeff() <= tol;
}

constexpr LogicalLabel kZ0{LogicalBasis::Z, 0};
constexpr LogicalLabel kZ1{LogicalBasis::Z, 1};
constexpr LogicalLabel kX0{LogicalBasis::X, 0};
constexpr LogicalLabel kX1{LogicalBasis::X, 1};

}  // namespace

TEST_CASE("logical state vectors") {
  CHECK(amplitudes_close(logical_vector(NoiseCode::Dephasing, kZ0),
                         two_qubit(0, 1, 0, 0)));
  CHECK(amplitudes_close(logical_vector(NoiseCode::Dephasing, kZ1),
                         two_qubit(0, 0, 1, 0)));
  CHECK(amplitudes_close(logical_vector(NoiseCode::Dephasing, kX0),
                         two_qubit(0, kInv2, kInv2, 0)));
  CHECK(amplitudes_close(logical_vector(NoiseCode::Dephasing, kX1),
                         two_qubit(0, kInv2, -kInv2, 0)));

  CHECK(amplitudes_close(logical_vector(NoiseCode::Rotation, kZ0),
                         two_qubit(kInv2, 0, 0, kInv2)));
  CHECK(amplitudes_close(logical_vector(NoiseCode::Rotation, kZ1),
                         two_qubit(0, kInv2, -kInv2, 0)));
  CHECK(amplitudes_close(logical_vector(NoiseCode::Rotation, kX0),
                         two_qubit(0.5, 0.5, -0.5, 0.5)));
  CHECK(amplitudes_close(logical_vector(NoiseCode::Rotation, kX1),
                         two_qubit(0.5, -0.5, 0.5, 0.5)));
}

TEST_CASE("logical bases are orthonormal and mutually unbiased") {
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const double overlap =
            fidelity(logical_vector(code, label_from_index(a)),
                     logical_vector(code, label_from_index(b)));
        const LogicalLabel la = label_from_index(a);
        const LogicalLabel lb = label_from_index(b);
        if (a == b) {
          CHECK(overlap == doctest::Approx(1.0).epsilon(1e-13));
        } else if (la.basis == lb.basis) {
          CHECK(overlap < 1e-13);
        } else {
          CHECK(overlap == doctest::Approx(0.5).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("subspace membership") {
  CHECK(LogicalQubitState(NoiseCode::Dephasing,
                          StateVector(two_qubit(0, kInv2, kInv2, 0)))
            .in_code_subspace());
  // |HH> is outside the dephasing code.
  CHECK_THROWS_AS(LogicalQubitState(NoiseCode::Dephasing,
                                    StateVector(two_qubit(1, 0, 0, 0))),
                  std::invalid_argument);
  // |phi-> is outside the rotation code.
  CHECK_THROWS_AS(LogicalQubitState(NoiseCode::Rotation,
                                    StateVector(two_qubit(kInv2, 0, 0, -kInv2))),
                  std::invalid_argument);
}

TEST_CASE("composite unitary flip algebra, signs exact") {
  struct Relation {
    LogicalLabel in, out;
    double sign;
  };
  const std::array<Relation, 4> relations = {{
      {kZ0, kZ1, 1.0},
      {kZ1, kZ0, -1.0},
      {kX0, kX1, -1.0},
      {kX1, kX0, 1.0},
  }};
  const int pair[2] = {0, 1};
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    const GateMatrix flip = composite_unitary(code, 1);
    const GateMatrix id = composite_unitary(code, 0);
    for (const Relation& r : relations) {
      const StateVector got = apply_gate(logical_vector(code, r.in), flip, pair);
      CHECK(amplitudes_close(
          got, AmpVector(r.sign * logical_vector(code, r.out).amplitudes())));
      // bit 0 is the identity
      CHECK(amplitudes_close(apply_gate(logical_vector(code, r.in), id, pair),
                             logical_vector(code, r.in).amplitudes()));
      // applying the flip twice gives -1 times the original
      const StateVector twice = apply_gate(got, flip, pair);
      CHECK(amplitudes_close(
          twice, AmpVector(-logical_vector(code, r.in).amplitudes())));
    }
  }
}

TEST_CASE("logical measurement of eigenstates and superpositions") {
  Rng rng(21);
  auto [l1, p1] = logical_measure(
      logical_state(NoiseCode::Dephasing, kZ1), LogicalBasis::Z, rng);
  CHECK(l1 == kZ1);

  auto [l2, p2] = logical_measure(
      logical_state(NoiseCode::Rotation, kX0), LogicalBasis::X, rng);
  CHECK(l2 == kX0);

  // |0_L> in the X basis: both outcomes, half and half.
  int zeros = 0;
  const int samples = 10000;
  for (int t = 0; t < samples; ++t) {
    auto [label, post] = logical_measure(
        logical_state(NoiseCode::Dephasing, kZ0), LogicalBasis::X, rng);
    CHECK(label.basis == LogicalBasis::X);
    if (label.bit == 0) ++zeros;
  }
  const double se = std::sqrt(0.25 / samples);
  CHECK(std::abs(zeros / static_cast<double>(samples) - 0.5) < 3 * se);
}

TEST_CASE("logical measurement flags states outside the code subspace") {
  Rng rng(4);
  const LogicalQubitState leaked(LogicalQubitState::UncheckedTag{},
                                 NoiseCode::Dephasing,
                                 StateVector(two_qubit(1, 0, 0, 0)));
  CHECK_THROWS_AS(logical_measure(leaked, LogicalBasis::Z, rng), std::logic_error);
  CHECK_THROWS_AS(decode_single_photon(leaked, LogicalBasis::Z, rng),
                  std::logic_error);
}

TEST_CASE("single-photon decode on decisive cases") {
  Rng rng(8);
  // Hadamard on both photons turns |+x> into |phi->: parallel outcomes.
  CHECK(decode_single_photon(logical_state(NoiseCode::Dephasing, kX0),
                             LogicalBasis::X, rng) == kX0);
  // |-x_r> with a Hadamard on the second photon becomes |psi+>: antiparallel.
  CHECK(decode_single_photon(logical_state(NoiseCode::Rotation, kX1),
                             LogicalBasis::X, rng) == kX1);
  // Rotation Z decode reads parity directly.
  CHECK(decode_single_photon(logical_state(NoiseCode::Rotation, kZ0),
                             LogicalBasis::Z, rng) == kZ0);
  CHECK(decode_single_photon(logical_state(NoiseCode::Rotation, kZ1),
                             LogicalBasis::Z, rng) == kZ1);
  // Dephasing Z decode reads the V position.
  CHECK(decode_single_photon(logical_state(NoiseCode::Dephasing, kZ0),
                             LogicalBasis::Z, rng) == kZ0);
  CHECK(decode_single_photon(logical_state(NoiseCode::Dephasing, kZ1),
                             LogicalBasis::Z, rng) == kZ1);
}

TEST_CASE("decoder equivalence with the logical-measure oracle") {
  // Eigenstate cases are exact; superposed cases agree within 3 standard
  // errors of the two-sample difference over 10^4 draws.
  const int samples = 10000;
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    for (int lab = 0; lab < 4; ++lab) {
      const LogicalLabel prepared = label_from_index(lab);
      for (LogicalBasis basis : {LogicalBasis::Z, LogicalBasis::X}) {
        if (basis == prepared.basis) {
          Rng rng(1000 + lab);
          for (int t = 0; t < 32; ++t) {
            CHECK(decode_single_photon(logical_state(code, prepared), basis,
                                       rng) == prepared);
            auto [label, post] =
                logical_measure(logical_state(code, prepared), basis, rng);
            CHECK(label == prepared);
          }
        } else {
          Rng rng(2000 + lab);
          int decode_zeros = 0;
          int oracle_zeros = 0;
          for (int t = 0; t < samples; ++t) {
            if (decode_single_photon(logical_state(code, prepared), basis, rng)
                    .bit == 0) {
              ++decode_zeros;
            }
            auto [label, post] =
                logical_measure(logical_state(code, prepared), basis, rng);
            if (label.bit == 0) ++oracle_zeros;
          }
          const double diff =
              (decode_zeros - oracle_zeros) / static_cast<double>(samples);
          const double se_diff = std::sqrt(2 * 0.25 / samples);
          CHECK(std::abs(diff) < 3 * se_diff);
          // Both must also match the analytic value 1/2.
          const double se = std::sqrt(0.25 / samples);
          CHECK(std::abs(decode_zeros / static_cast<double>(samples) - 0.5) <
                3 * se);
        }
      }
    }
  }
}

TEST_CASE("encoded label follows the XOR law") {
  CHECK(encoded_label(kZ0, 1, 0) == kZ1);
  CHECK(encoded_label(kX1, 0, 0) == kX1);
  CHECK(encoded_label(kX0, 1, 1) == kX0);

  // Quantum route: measuring U^i U^k |initial> in the initial basis yields
  // the predicted label with certainty, for all 16 cases and both codes.
  const int pair[2] = {0, 1};
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    for (int lab = 0; lab < 4; ++lab) {
      for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
          const LogicalLabel initial = label_from_index(lab);
          StateVector s = logical_vector(code, initial);
          s = apply_gate(s, composite_unitary(code, k), pair);
          s = apply_gate(s, composite_unitary(code, i), pair);
          const LogicalLabel predicted = encoded_label(initial, k, i);
          CHECK(fidelity(s, logical_vector(code, predicted)) ==
                doctest::Approx(1.0).epsilon(1e-13));
          Rng rng(300 + lab * 4 + k * 2 + i);
          const LogicalQubitState in_flight(LogicalQubitState::UncheckedTag{},
                                            code, s);
          CHECK(decode_single_photon(in_flight, initial.basis, rng) == predicted);
        }
      }
    }
  }
}

TEST_CASE("label helpers round-trip") {
  for (int i = 0; i < 4; ++i) {
    CHECK(label_index(label_from_index(i)) == i);
  }
  CHECK_THROWS_AS(label_from_index(4), std::invalid_argument);
  CHECK(to_string(kZ0) == "Z0");
  CHECK(to_string(kX1) == "X1");
  Rng rng(5);
  std::array<int, 4> counts{};
  for (int t = 0; t < 4000; ++t) counts[label_index(uniform_label(rng))]++;
  for (int c : counts) CHECK(c > 800);
}
