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

#include "qnlp/simulator.hpp"

#include <cmath>
#include <numbers>

#include "qnlp/error.hpp"

namespace qnlp {

StateVector::StateVector(std::size_t n_qubits) : n_(n_qubits), amps_(std::size_t{1} << n_qubits) {
  amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
  if (amps_.size() != (std::size_t{1} << n_)) {
    throw Error(ErrorKind::ShapeMismatch, "amplitude count does not match qubit count");
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

double gate_angle(const Gate& gate, std::span<const double> params) {
  if (const auto* v = std::get_if<double>(&gate.param)) return *v;
  if (const auto* s = std::get_if<SymbolRef>(&gate.param)) {
    if (s->index >= params.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "parameter index " + std::to_string(s->index));
    }
    return params[s->index];
  }
  return 0.0;
}

namespace {

using Mat2 = std::array<Amplitude, 4>;

Mat2 single_qubit_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const Amplitude i{0.0, 1.0};
  switch (kind) {
    case GateKind::H: {
      const double r = std::numbers::sqrt2 / 2;
      return {r, r, r, -r};
    }
    case GateKind::RX:
    case GateKind::CRX:
      return {c, -i * s, -i * s, c};
    case GateKind::RY:
      return {c, -s, s, c};
    case GateKind::RZ:
    case GateKind::CRZ:
      return {std::exp(-i * (angle / 2)), 0.0, 0.0, std::exp(i * (angle / 2))};
    case GateKind::CNOT:
      return {0.0, 1.0, 1.0, 0.0};
  }
  return {1.0, 0.0, 0.0, 1.0};
}

// Applies m to `target` on the basis states where all `control_mask` bits are set.
void apply_matrix(std::span<Amplitude> amps, const Mat2& m, std::size_t target_bit,
                  std::size_t control_mask) {
  const std::size_t dim = amps.size();
  for (std::size_t idx = 0; idx < dim; ++idx) {
    if ((idx & target_bit) || (idx & control_mask) != control_mask) continue;
    const std::size_t j = idx | target_bit;
    const Amplitude a0 = amps[idx];
    const Amplitude a1 = amps[j];
    amps[idx] = m[0] * a0 + m[1] * a1;
    amps[j] = m[2] * a0 + m[3] * a1;
  }
}

void execute(const Circuit& circuit, std::span<const double> params, StateVector& state) {
  for (const auto& g : circuit.gates) apply(state, g, gate_angle(g, params));
}

std::size_t mask_of(std::size_t n, std::span<const std::size_t> qubits) {
  std::size_t m = 0;
  for (std::size_t q : qubits) m |= std::size_t{1} << (n - 1 - q);
  return m;
}

// Postselected weights of output outcome 0 and 1.
std::array<double, 2> outcome_weights(const Circuit& circuit, std::span<const double> params) {
  StateVector state(circuit.n_qubits);
  execute(circuit, params, state);
  const std::size_t n = circuit.n_qubits;
  const std::size_t post = mask_of(n, circuit.postselect);
  const std::size_t out = mask_of(n, circuit.outputs);
  std::array<double, 2> w{0.0, 0.0};
  const auto amps = state.amplitudes();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    if (idx & post) continue;
    w[(idx & out) ? 1 : 0] += std::norm(amps[idx]);
  }
  return w;
}

void check_single_output(const Circuit& circuit) {
  if (circuit.outputs.size() != 1) {
    throw Error(ErrorKind::WrongOutputArity,
                "expected one output qubit, got " + std::to_string(circuit.outputs.size()));
  }
}

}  // namespace

void apply(StateVector& state, const Gate& gate, double angle) {
  const std::size_t n = state.n_qubits();
  const std::size_t arity = is_controlled(gate.kind) ? 2 : 1;
  if (gate.qubits.size() != arity) {
    throw Error(ErrorKind::IndexOutOfRange, std::string(to_string(gate.kind)) +
                                                " expects " + std::to_string(arity) + " qubits");
  }
  for (std::size_t q : gate.qubits) {
    if (q >= n) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "qubit " + std::to_string(q) + " on a " + std::to_string(n) + "-qubit state");
    }
  }
  if (arity == 2 && gate.qubits[0] == gate.qubits[1]) {
    throw Error(ErrorKind::IndexOutOfRange, "control equals target");
  }
  const std::size_t target = gate.qubits.back();
  const std::size_t control_mask = arity == 2 ? std::size_t{1} << (n - 1 - gate.qubits[0]) : 0;
  apply_matrix(state.amplitudes(), single_qubit_matrix(gate.kind, angle),
               std::size_t{1} << (n - 1 - target), control_mask);
}

RunResult run_from(const Circuit& circuit, std::span<const double> params, StateVector state) {
  if (state.n_qubits() != circuit.n_qubits) {
    throw Error(ErrorKind::ShapeMismatch, "initial state width differs from circuit");
  }
  execute(circuit, params, state);
  const std::size_t n = circuit.n_qubits;
  const std::size_t post = mask_of(n, circuit.postselect);
  RunResult r;
  for (std::size_t q = 0; q < n; ++q) {
    if (!(post & (std::size_t{1} << (n - 1 - q)))) r.kept_qubits.push_back(q);
  }
  const auto amps = state.amplitudes();
  r.amplitudes.reserve(std::size_t{1} << r.kept_qubits.size());
  // Enumerating indices in increasing order keeps the kept qubits in order.
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    if (idx & post) continue;
    r.amplitudes.push_back(amps[idx]);
    r.survival_norm += std::norm(amps[idx]);
  }
  if (r.survival_norm < kSurvivalFloor) {
    throw Error(ErrorKind::ZeroSurvival, "postselection survival " + std::to_string(r.survival_norm));
  }
  return r;
}

RunResult run(const Circuit& circuit, std::span<const double> params) {
  if (params.size() != circuit.symbols.size()) {
    throw Error(ErrorKind::ShapeMismatch, "expected " + std::to_string(circuit.symbols.size()) +
                                              " parameters, got " + std::to_string(params.size()));
  }
  return run_from(circuit, params, StateVector(circuit.n_qubits));
}

Distribution sentence_distribution(const Circuit& circuit, std::span<const double> params) {
  check_single_output(circuit);
  const auto w = outcome_weights(circuit, params);
  const double s = w[0] + w[1];
  if (s < kSurvivalFloor) return {{0.5, 0.5}, true};
  return {{w[0] / s, w[1] / s}, false};
}

GradientResult gradient(const Circuit& circuit, std::span<const double> params,
                        std::array<double, 2> upstream) {
  check_single_output(circuit);
  const std::size_t np = circuit.symbols.size();
  GradientResult result;
  result.grad.assign(np, 0.0);

  const auto w = outcome_weights(circuit, params);
  const double s = w[0] + w[1];
  if (s < kSurvivalFloor) {
    result.degenerate = true;
    return result;
  }

  std::vector<std::size_t> uses(np, 0);
  std::vector<GateKind> kind(np, GateKind::H);
  for (const auto& g : circuit.gates) {
    if (const auto* ref = std::get_if<SymbolRef>(&g.param)) {
      ++uses[ref->index];
      kind[ref->index] = g.kind;
    }
  }

  std::vector<double> shifted(params.begin(), params.end());
  auto weights_at = [&](std::size_t j, double delta) {
    shifted[j] = params[j] + delta;
    auto r = outcome_weights(circuit, shifted);
    shifted[j] = params[j];
    return r;
  };
  auto diff = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double scale) {
    return std::array<double, 2>{scale * (a[0] - b[0]), scale * (a[1] - b[1])};
  };

  constexpr double kHalfPi = std::numbers::pi / 2;
  constexpr double kFdStep = 1e-6;
  const double c_near = (std::numbers::sqrt2 + 1) / (4 * std::numbers::sqrt2);
  const double c_far = (std::numbers::sqrt2 - 1) / (4 * std::numbers::sqrt2);

  for (std::size_t j = 0; j < np; ++j) {
    if (uses[j] == 0) continue;
    std::array<double, 2> dw{};
    if (uses[j] == 1 && (kind[j] == GateKind::RX || kind[j] == GateKind::RY ||
                         kind[j] == GateKind::RZ)) {
      dw = diff(weights_at(j, kHalfPi), weights_at(j, -kHalfPi), 0.5);
    } else if (uses[j] == 1 && (kind[j] == GateKind::CRX || kind[j] == GateKind::CRZ)) {
      const auto near = diff(weights_at(j, kHalfPi), weights_at(j, -kHalfPi), c_near);
      const auto far = diff(weights_at(j, 3 * kHalfPi), weights_at(j, -3 * kHalfPi), c_far);
      dw = {near[0] - far[0], near[1] - far[1]};
    } else {
      dw = diff(weights_at(j, kFdStep), weights_at(j, -kFdStep), 1.0 / (2 * kFdStep));
    }
    // p_k = w_k / s
    const double ds = dw[0] + dw[1];
    const double dp0 = (dw[0] * s - w[0] * ds) / (s * s);
    const double dp1 = (dw[1] * s - w[1] * ds) / (s * s);
    result.grad[j] = upstream[0] * dp0 + upstream[1] * dp1;
  }
  return result;
}

}  // namespace qnlp
