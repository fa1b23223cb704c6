// Copyright 2026 The qdaif Authors.
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

#ifndef QDAIF_ERRORS_HPP_
#define QDAIF_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdaif {

// Root of every error thrown by the library. Callers that only care about
// "did the operation fail" can catch this; the run loop dispatches on the
// concrete subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A value that must lie in a closed interval did not.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Descriptor does not match the archive's axes.
class DescriptorError : public Error {
 public:
  using Error::Error;
};

// Bin key out of range for the archive grid.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Label log-probabilities missing a queried label.
class FeedbackShapeError : public Error {
 public:
  using Error::Error;
};

// A judge response could not be interpreted. The iteration is logged as
// failed and the loop continues.
class FeedbackParseError : public Error {
 public:
  using Error::Error;
};

class InsufficientParentsError : public Error {
 public:
  using Error::Error;
};

// Transport or protocol failure talking to a model. `retryable` is false once
// the retry budget has been spent.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// The model returned only whitespace (after stop-sequence truncation).
class EmptyGenerationError : public Error {
 public:
  using Error::Error;
};

// A scripted mock ran out of responses.
class ScriptExhaustedError : public Error {
 public:
  using Error::Error;
};

// The configured endpoint cannot serve a required query type.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration. `path()` is the dotted field path at fault.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A run log line could not be replayed.
class ReplayError : public Error {
 public:
  ReplayError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qdaif

#endif  // QDAIF_ERRORS_HPP_
