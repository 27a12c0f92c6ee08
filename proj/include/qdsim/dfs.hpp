#pragma once

#include <optional>
#include <string>
#include <utility>

#include "qdsim/qcore.hpp"
#include "qdsim/rng.hpp"

namespace qdsim {

enum class NoiseCode { Dephasing, Rotation };

enum class LogicalBasis { Z, X };

// One of the four logical states of a code: (Z,0), (Z,1), (X,0), (X,1).
struct LogicalLabel {
  LogicalBasis basis;
  int bit;  // 0 or 1

  bool operator==(const LogicalLabel&) const = default;
};

int label_index(LogicalLabel label);            // Z0=0, Z1=1, X0=2, X1=3
LogicalLabel label_from_index(int index);
LogicalLabel uniform_label(Rng& rng);
std::string to_string(LogicalLabel label);
std::string to_string(LogicalBasis basis);
std::string to_string(NoiseCode code);

// Two physical photons carrying one noise-protected qubit. The public
// constructor requires the state to lie in the code subspace; `unchecked`
// is for states in flight that an adversary may have disturbed.
class LogicalQubitState {
 public:
  LogicalQubitState(NoiseCode code, StateVector state);

  struct UncheckedTag {};
  LogicalQubitState(UncheckedTag, NoiseCode code, StateVector state)
      : code_(code), state_(std::move(state)) {}

  NoiseCode code() const { return code_; }
  const StateVector& state() const { return state_; }
  bool in_code_subspace() const;

 private:
  NoiseCode code_;
  StateVector state_;
};

// Exact two-photon vector for a label under a code.
LogicalQubitState logical_state(NoiseCode code, LogicalLabel label);
StateVector logical_vector(NoiseCode code, LogicalLabel label);

// Message-encoding unitary: identity for bit 0, the code's two-photon flip
// for bit 1. Flips the state inside either logical basis, up to sign.
GateMatrix composite_unitary(NoiseCode code, int message_bit);

// Projective measurement in the code's logical basis. Throws if the state
// has left the code subspace (simulator bug on honest paths).
std::pair<LogicalLabel, LogicalQubitState> logical_measure(
    const LogicalQubitState& s, LogicalBasis basis, Rng& rng);

// Production decode path: single-photon {|H>,|V>} measurements only.
//   Dephasing/Z: measure both photons; V position gives the bit.
//   Dephasing/X: Hadamard on both photons, then parity (parallel -> 0).
//   Rotation/Z:  measure both photons; parity (parallel -> 0).
//   Rotation/X:  Hadamard on the second photon, then parity (parallel -> 0).
// Distribution equals logical_measure. Throws on an out-of-subspace outcome.
LogicalLabel decode_single_photon(const LogicalQubitState& s,
                                  LogicalBasis basis, Rng& rng);

// Classical prediction of the measured label after encoding bits k and i.
LogicalLabel encoded_label(LogicalLabel initial, int k, int i);

// Pieces of the single-photon decode, shared with the transmission layer so
// it can decode pairs that are entangled with adversary ancillas:
// the pre-measurement gate on the photon pair, and the outcome map from the
// two physical bits (nullopt = outcome impossible inside the code subspace).
GateMatrix decode_pair_gate(NoiseCode code, LogicalBasis basis);
std::optional<LogicalLabel> label_from_physical(NoiseCode code,
                                                LogicalBasis basis,
                                                int bit1, int bit2);

// Single-photon decode applied to qubits {0,1} of `joint`, which may carry
// extra (ancilla) qubits that stay unmeasured and collapse alongside.
// label is nullopt when the physical outcome is impossible inside the code
// subspace (reachable only through tampering).
struct PairDecodeResult {
  std::optional<LogicalLabel> label;
  StateVector post;
};
PairDecodeResult decode_photon_pair(const StateVector& joint, NoiseCode code,
                                    LogicalBasis basis, Rng& rng);

}  // namespace qdsim
