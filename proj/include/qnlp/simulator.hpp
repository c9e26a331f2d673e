// Copyright 2026 The qnlp-ansatz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qnlp/circuit.hpp"

namespace qnlp {

using Amplitude = std::complex<double>;

/// Dense 2^n amplitudes; qubit 0 is the most significant bit of the index.
class StateVector {
 public:
  explicit StateVector(std::size_t n_qubits);
  StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes);

  std::size_t n_qubits() const { return n_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> amplitudes() { return amps_; }
  double norm_squared() const;

 private:
  std::size_t n_;
  std::vector<Amplitude> amps_;
};

/// Angle bound to a gate under `params` (0 for unparametrized gates).
double gate_angle(const Gate& gate, std::span<const double> params);

/// Left-multiplies the gate's unitary. Throws IndexOutOfRange.
void apply(StateVector& state, const Gate& gate, double angle = 0.0);

struct RunResult {
  /// Amplitudes over the non-postselected qubits (in increasing order) after
  /// projecting the postselected ones onto 0, not renormalized.
  std::vector<Amplitude> amplitudes;
  std::vector<std::size_t> kept_qubits;
  double survival_norm = 0.0;
};

inline constexpr double kSurvivalFloor = 1e-12;

/// Throws ZeroSurvival when survival_norm < kSurvivalFloor.
RunResult run(const Circuit& circuit, std::span<const double> params);

/// As run, from an arbitrary (possibly unnormalized) initial state. Used by
/// tests to probe linearity of the postselected map.
RunResult run_from(const Circuit& circuit, std::span<const double> params, StateVector initial);

struct Distribution {
  std::array<double, 2> p{0.5, 0.5};
  bool degenerate = false;
};

/// Renormalized two-outcome distribution of the single output qubit within
/// the postselected subspace; uniform and flagged degenerate when nothing
/// survives. Throws WrongOutputArity.
Distribution sentence_distribution(const Circuit& circuit, std::span<const double> params);

struct GradientResult {
  std::vector<double> grad;
  bool degenerate = false;
};

/// d loss / d params given upstream = d loss / d (p0, p1). Single-use
/// RX/RY/RZ parameters use the two-term shift rule, single-use controlled
/// rotations the four-term rule, and reused parameters central differences.
GradientResult gradient(const Circuit& circuit, std::span<const double> params,
                        std::array<double, 2> upstream);

}  // namespace qnlp
