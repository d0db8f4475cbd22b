// Copyright 2026 The drccmdp Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace drccmdp {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed model data (kernel rows not summing to one, bad file contents, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A generator/radius combination violating the assumptions a reformulation
/// theorem needs (e.g. inf_{t<=0} psi(t) >= exp(-delta)).
class AssumptionError : public Error {
  public:
    using Error::Error;
};

/// Requested value outside the attainable range of an invertible map.
class RangeError : public Error {
  public:
    using Error::Error;
};

/// A chance constraint whose tightened confidence drops below 1/2, so the
/// deterministic equivalent is not a second-order cone.
class NonconvexityError : public Error {
  public:
    using Error::Error;
};

/// Generator has no tractable CDF/quantile (generalized stable laws).
class UnsupportedGeneratorError : public Error {
  public:
    using Error::Error;
};

/// Log-elliptical mean does not exist for the given dispersion.
class DivergentMeanError : public Error {
  public:
    using Error::Error;
};

} // namespace drccmdp
