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

#include "qnlp/error.hpp"

namespace qnlp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownWord: return "UnknownWord";
    case ErrorKind::NoReduction: return "NoReduction";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidDiagram: return "InvalidDiagram";
    case ErrorKind::CurryUnsupported: return "CurryUnsupported";
    case ErrorKind::ZeroParameterModel: return "ZeroParameterModel";
    case ErrorKind::WidthOverflow: return "WidthOverflow";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ZeroSurvival: return "ZeroSurvival";
    case ErrorKind::WrongOutputArity: return "WrongOutputArity";
    case ErrorKind::EmptyEvalSet: return "EmptyEvalSet";
    case ErrorKind::TooFewEpochs: return "TooFewEpochs";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::VocabularyLeak: return "VocabularyLeak";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::EmptyResults: return "EmptyResults";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qnlp
