// Copyright 2026 The opholder Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace opholder {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric parameter is outside its admissible range (p <= 0, theta out of (0,1), ...).
class parameter_error : public error {
 public:
  using error::error;
};

/// Matrix dimensions do not fit together.
class shape_error : public error {
 public:
  using error::error;
};

/// A function was evaluated outside its domain (negative spectrum for a
/// positivity-only routine, non-finite f(lambda), ...).
class domain_error : public error {
 public:
  using error::error;
};

/// A divided difference or bivariate symbol has no finite value at the requested point.
class singularity_error : public error {
 public:
  singularity_error(const std::string& what, double s, double t)
      : error(what), s_(s), t_(t) {}

  double s() const noexcept { return s_; }
  double t() const noexcept { return t_; }

 private:
  double s_;
  double t_;
};

/// The request needs more than the object provides (derivative order, grid resolution).
class capability_error : public error {
 public:
  using error::error;
};

/// An iterative kernel did not reach its accuracy target.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, double residual)
      : error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace opholder
