// Copyright 2026 The SCST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCST_ERROR_H_
#define SCST_ERROR_H_

#include <stdexcept>
#include <string>

namespace scst {

// Error categories surfaced by the library. The C API maps each one onto a
// distinct status code.
enum class ErrorKind {
  kParse,       // malformed input file content
  kValidation,  // well-formed input violating a value constraint
  kStructure,   // graph-level defects such as cyclic dependency heads
  kConfig,      // invalid configuration or code parameters
  kShape,       // tensor shape mismatch
  kIo,          // file could not be opened or written
  kRuntime,     // numerical failure during training or evaluation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ParseError(const std::string& msg) {
  return Error(ErrorKind::kParse, msg);
}
inline Error ValidationError(const std::string& msg) {
  return Error(ErrorKind::kValidation, msg);
}
inline Error StructureError(const std::string& msg) {
  return Error(ErrorKind::kStructure, msg);
}
inline Error ConfigError(const std::string& msg) {
  return Error(ErrorKind::kConfig, msg);
}
inline Error ShapeError(const std::string& msg) {
  return Error(ErrorKind::kShape, msg);
}
inline Error IoError(const std::string& msg) {
  return Error(ErrorKind::kIo, msg);
}

}  // namespace scst

#endif  // SCST_ERROR_H_
