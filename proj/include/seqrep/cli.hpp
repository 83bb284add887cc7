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

#include <iosfwd>
#include <string>
#include <vector>

namespace seqrep {

// Whole CLI behind one function so tests can drive it in-process.
// `args` excludes the program name.  Exit codes: 0 success, 1 runtime
// failure or failed validation checks, 2 bad usage / bad config.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace seqrep
