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

#include <span>
#include <string_view>
#include <vector>

#include "qnlp/diagram.hpp"

namespace qnlp {

enum class RewriteScheme { Re, ReNorm, ReNormCur, ReNormCurNorm };

std::string_view to_string(RewriteScheme scheme);
/// Accepts re, re_norm, re_norm_cur, re_norm_cur_norm. Throws ConfigError.
RewriteScheme parse_scheme(std::string_view name);

/// Provenance of a rewritten box: its tensor is the source box's tensor with
/// axes permuted (`axes[i]` is the source axis of new axis i). Caps have no
/// source.
struct BoxOrigin {
  std::size_t source = kUnbound;
  std::vector<std::size_t> axes;
};

struct Rewritten {
  Diagram diagram;
  std::vector<BoxOrigin> origin;
};

Rewritten identity_rewrite(const Diagram& d);
Rewritten normal_form_traced(const Diagram& d);
Rewritten curry_traced(const Diagram& d);
Rewritten rewrite_traced(const Diagram& d, RewriteScheme scheme);

/// Removes cup-cap snakes (leftmost cup first) until none remain, then
/// puts the diagram in canonical drawing order. Idempotent.
Diagram normal_form(const Diagram& d);

/// Replaces each Word box whose adjoint outputs are cupped to plain wires by
/// a Curried box taking those wires as inputs. Throws CurryUnsupported when
/// an adjoint output is cupped to another adjoint.
Diagram curry(const Diagram& d);

Diagram rewrite(const Diagram& d, RewriteScheme scheme);

/// Curry's first half: bent words become caps feeding a Curried box. The
/// result still holds every original cup, now forming snakes with the caps.
Rewritten bend_adjoints(const Diagram& d);

/// Tensors for the rewritten diagram under the same semantics.
TensorAssignment transport(const TensorAssignment& a, std::span<const BoxOrigin> origin);

}  // namespace qnlp
