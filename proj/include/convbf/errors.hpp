// convbf/errors.hpp

// Copyright 2026  convbf authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CONVBF_ERRORS_HPP_
#define CONVBF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace convbf {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied parameters (CLI flags, config files, shape mismatches
// detectable before any numerics run).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed files.
class IoError : public Error {
 public:
  using Error::Error;
};

// A solver or decomposition failed its residual/consistency check.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace convbf

#endif  // CONVBF_ERRORS_HPP_
