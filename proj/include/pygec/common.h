// Copyright 2026 The pygec Authors
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

#ifndef PYGEC_COMMON_H_
#define PYGEC_COMMON_H_

#include <stdexcept>
#include <string>

namespace pygec {

inline constexpr const char* kToolkitVersion = PYGEC_VERSION;

// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or missing input files, bad configuration values.
class InputError : public Error {
 public:
  using Error::Error;
};

// The model endpoint could not produce an answer (after retries).
class EndpointError : public Error {
 public:
  EndpointError(const std::string& what, bool transient)
      : Error(what), transient_(transient) {}
  bool transient() const { return transient_; }

 private:
  bool transient_;
};

}  // namespace pygec

#endif  // PYGEC_COMMON_H_
