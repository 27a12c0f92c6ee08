#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qdsim/channel.hpp"

using namespace qdsim;

namespace {

AmpVector two_qubit(Complex hh, Complex hv, Complex vh, Complex vv) {
  AmpVector v(4);
  v << hh, hv, vh, vv;
  return v;
}

constexpr LogicalLabel kZ0{LogicalBasis::Z, 0};

TransmissionBatch four_states(NoiseCode code) {
  TransmissionBatch batch;
  for (int lab = 0; lab < 4; ++lab) {
    batch.append(logical_state(code, label_from_index(lab)),
                 QubitRole::MessageLead);
  }
  return batch;
}

}  // namespace

TEST_CASE("noise parameter sampling") {
  NoiseModel model{NoiseCode::Dephasing, true, DriftPolicy::PerLogicalQubit};
  Rng rng(42);
  const double first = sample_noise_parameter(model, rng);
  CHECK(first >= 0.0);
  CHECK(first < 2.0 * std::numbers::pi);
  Rng replay(42);
  CHECK(sample_noise_parameter(model, replay) == first);

  NoiseModel disabled{NoiseCode::Dephasing, false, DriftPolicy::PerLogicalQubit};
  CHECK_THROWS_AS(sample_noise_parameter(disabled, rng), std::logic_error);
}

TEST_CASE("noise parameter distribution is uniform (Kolmogorov-Smirnov)") {
  NoiseModel model{NoiseCode::Rotation, true, DriftPolicy::PerLogicalQubit};
  Rng rng(2024);
  const int n = 10000;
  std::vector<double> draws(n);
  for (double& d : draws) {
    d = sample_noise_parameter(model, rng) / (2.0 * std::numbers::pi);
  }
  std::sort(draws.begin(), draws.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ecdf_hi = static_cast<double>(i + 1) / n;
    const double ecdf_lo = static_cast<double>(i) / n;
    ks = std::max({ks, std::abs(ecdf_hi - draws[i]), std::abs(draws[i] - ecdf_lo)});
  }
  // 1% critical value 1.628/sqrt(n).
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("collective dephasing leaves the antiparallel pair invariant") {
  Rng rng(1);
  NoiseModel model{NoiseCode::Dephasing, true, DriftPolicy::PerLogicalQubit};
  for (int t = 0; t < 100; ++t) {
    const double phi = sample_noise_parameter(model, rng);
    const StateVector in = logical_vector(NoiseCode::Dephasing, kZ0);
    const StateVector out = apply_collective_noise(in, NoiseCode::Dephasing, phi);
    CHECK(fidelity(out, in) == doctest::Approx(1.0).epsilon(1e-13));
    // The carried global phase is e^{i phi}.
    CHECK(std::abs(out.amplitude(1) - std::polar(1.0, phi)) < 1e-12);
  }
}

TEST_CASE("collective rotation invariants and non-invariants") {
  const StateVector phi_plus = StateVector(two_qubit(std::sqrt(0.5), 0, 0, std::sqrt(0.5)));
  Rng rng(2);
  NoiseModel model{NoiseCode::Rotation, true, DriftPolicy::PerLogicalQubit};
  for (int t = 0; t < 100; ++t) {
    const double theta = sample_noise_parameter(model, rng);
    const StateVector out = apply_collective_noise(phi_plus, NoiseCode::Rotation, theta);
    CHECK((out.amplitudes() - phi_plus.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // theta = pi/2 turns bare |HH> into |VV>.
  const StateVector hh = StateVector(two_qubit(1, 0, 0, 0));
  const StateVector vv = apply_collective_noise(hh, NoiseCode::Rotation,
                                                std::numbers::pi / 2.0);
  CHECK(std::abs(vv.amplitude(3)) == doctest::Approx(1.0).epsilon(1e-13));

  // Mean fidelity of |HH> with itself is E[cos^4 theta] = 3/8.
  double sum = 0.0;
  const int samples = 10000;
  for (int t = 0; t < samples; ++t) {
    const double theta = sample_noise_parameter(model, rng);
    sum += fidelity(apply_collective_noise(hh, NoiseCode::Rotation, theta), hh);
  }
  const double mean = sum / samples;
  // Var(cos^4) = E[cos^8] - (3/8)^2 = 35/128 - 9/64 = 17/128.
  const double se = std::sqrt((35.0 / 128.0 - 9.0 / 64.0) / samples);
  CHECK(std::abs(mean - 0.375) < 3 * se);
}

TEST_CASE("DFS invariance across 1000 sampled parameters per code") {
  Rng rng(3);
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    NoiseModel model{code, true, DriftPolicy::PerLogicalQubit};
    for (int t = 0; t < 1000; ++t) {
      const double parameter = sample_noise_parameter(model, rng);
      for (int lab = 0; lab < 4; ++lab) {
        const StateVector s = logical_vector(code, label_from_index(lab));
        CHECK(fidelity(apply_collective_noise(s, code, parameter), s) >=
              1.0 - 1e-12);
      }
    }
  }
}

TEST_CASE("transmit with noise disabled is the identity channel") {
  NoiseModel off{NoiseCode::Dephasing, false, DriftPolicy::PerLogicalQubit};
  Rng rng(4);
  TransmissionBatch batch = four_states(NoiseCode::Dephasing);
  std::vector<AmpVector> before;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    before.push_back(batch.at(i).item->state.amplitudes());
  }
  batch = transmit(std::move(batch), off, nullptr, rng);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK((batch.at(i).item->state.amplitudes() - before[i]).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("transmit with noise keeps every code state, either drift policy") {
  Rng rng(5);
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    for (DriftPolicy drift : {DriftPolicy::PerLogicalQubit, DriftPolicy::PerBlock}) {
      NoiseModel model{code, true, drift};
      for (int t = 0; t < 50; ++t) {
        TransmissionBatch batch = four_states(code);
        batch = transmit(std::move(batch), model, nullptr, rng);
        for (int lab = 0; lab < 4; ++lab) {
          CHECK(fidelity(batch.at(static_cast<std::size_t>(lab)).item->state,
                         logical_vector(code, label_from_index(lab))) >=
                1.0 - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("per-block drift shares one parameter across the batch") {
  // Under dephasing, |HV> picks up the phase e^{i phi}; with PerBlock drift
  // two items must show the identical phase.
  NoiseModel model{NoiseCode::Dephasing, true, DriftPolicy::PerBlock};
  Rng rng(6);
  TransmissionBatch batch;
  batch.append(logical_state(NoiseCode::Dephasing, kZ0), QubitRole::MessageLead);
  batch.append(logical_state(NoiseCode::Dephasing, kZ0), QubitRole::MessageTwin);
  batch = transmit(std::move(batch), model, nullptr, rng);
  const Complex a = batch.at(0).item->state.amplitude(1);
  const Complex b = batch.at(1).item->state.amplitude(1);
  CHECK(std::abs(a - b) < 1e-12);

  // PerLogicalQubit redraws: with overwhelming probability the phases differ.
  NoiseModel fresh{NoiseCode::Dephasing, true, DriftPolicy::PerLogicalQubit};
  TransmissionBatch batch2;
  batch2.append(logical_state(NoiseCode::Dephasing, kZ0), QubitRole::MessageLead);
  batch2.append(logical_state(NoiseCode::Dephasing, kZ0), QubitRole::MessageTwin);
  batch2 = transmit(std::move(batch2), fresh, nullptr, rng);
  CHECK(std::abs(batch2.at(0).item->state.amplitude(1) -
                 batch2.at(1).item->state.amplitude(1)) > 1e-6);
}

TEST_CASE("interceptor hook replaces the delivered batch") {
  class Swapper final : public Interceptor {
   public:
    TransmissionBatch intercept(TransmissionBatch batch, Rng&) override {
      for (std::size_t i = 0; i < batch.size(); ++i) {
        batch.at(i).item = std::make_shared<ItemState>(
            ItemState{logical_vector(NoiseCode::Dephasing, kZ0), 0});
      }
      return batch;
    }
  };
  NoiseModel off{NoiseCode::Dephasing, false, DriftPolicy::PerLogicalQubit};
  Rng rng(7);
  Swapper swapper;
  TransmissionBatch batch = four_states(NoiseCode::Dephasing);
  batch = transmit(std::move(batch), off, &swapper, rng);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(fidelity(batch.at(i).item->state,
                   logical_vector(NoiseCode::Dephasing, kZ0)) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }

  class Shrinker final : public Interceptor {
   public:
    TransmissionBatch intercept(TransmissionBatch, Rng&) override {
      return TransmissionBatch{};
    }
  };
  Shrinker shrinker;
  CHECK_THROWS_AS(
      transmit(four_states(NoiseCode::Dephasing), off, &shrinker, rng),
      std::runtime_error);
}

TEST_CASE("measure_item decodes pairs inside larger joints") {
  // A pair entangled with nothing: plain decode.
  Rng rng(8);
  ItemState item{logical_vector(NoiseCode::Dephasing, kZ0), 0};
  const auto label = measure_item(item, NoiseCode::Dephasing, LogicalBasis::Z, rng);
  REQUIRE(label.has_value());
  CHECK(*label == kZ0);
}
