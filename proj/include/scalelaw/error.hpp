// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace scalelaw {

/// A value lies outside the domain of a law, a definition, or an operation
/// precondition (sparsity outside [0,1), counts below 1, empty inputs, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed external input: CSV rows, JSON documents, unreadable files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scalelaw
