/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace seqrep {

// A request fell outside the regime where the analytic treatment holds
// (e.g. asking for closed-form yield bounds with the repeater closer to
// Alice than to Bob).  Distinct from plain domain errors so callers can
// fall back to Monte Carlo instead of aborting.
class ValidityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed config file / unknown key / unparsable value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqrep
