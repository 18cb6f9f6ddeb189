/*
 * Copyright 2026 The planar-ising Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planar_ising {

/// Broad classes of failure. The CLI maps these onto exit codes.
enum class ErrorKind {
  invalid_argument,  // caller passed something outside the contract
  data,              // malformed or infeasible input data
  not_planar,        // a planar graph was required
  size,              // problem too large for the requested method
  numerical,         // factorization failure, lost consistency, divergence
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::data: return "data";
    case ErrorKind::not_planar: return "not_planar";
    case ErrorKind::size: return "size";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace detail
}  // namespace planar_ising
