/*
   Copyright 2026 The fflab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace fflab {

// Bad user input: field parameters, polynomials, configs. Maps to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured budget. Maps to exit code 3.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical invariant failed (RH residual, functional equation, ...).
// Always an implementation bug or a wrong curve declaration. Exit code 4.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fflab
