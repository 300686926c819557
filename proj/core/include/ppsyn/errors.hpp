// Copyright 2026 The ppsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPSYN_ERRORS_HPP_
#define PPSYN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ppsyn {

// Malformed input: bad schema, CSV, clique, or argument outside its domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A charge or a request that the privacy ledger cannot honor.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The dense full-domain representation would exceed the configured cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ppsyn

#endif  // PPSYN_ERRORS_HPP_
