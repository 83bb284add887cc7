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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace seqrep {

// One pinned numeric check loaded from tests/fixtures/*.cases.  Format:
//
//   [case some-id]
//   source = stated | arithmetic | oracle
//   op = click_probability
//   config = expected            # optional named base config
//   set L_total = 8.13           # optional parameter assignments
//   arg eta = 0.25               # op arguments (op-specific names)
//   expect value = 0.01234       # one or more named outputs
//   tol_rel = 1e-10              # optional, default 1e-10
//   tol_abs = 1e-15              # optional, default 1e-15
//   oracle = tests/test_noise.cpp:truncated mean matches direct summation
//   note = free text
//
// `expect x = error` asserts the op throws.  CLI cases use
// `argv = rate --set L_total=2.71`, `expect_exit = 0` and repeated
// `expect_contains = text`.
struct GoldenCase {
  std::string id;
  std::string source;  // stated | arithmetic | oracle
  std::string op;
  std::string config;  // "", "expected", "improved", "telecom", "ideal"
  std::vector<std::pair<std::string, double>> sets;
  std::map<std::string, std::string> args;
  std::map<std::string, std::string> expects;  // value or "error"
  double tol_rel = 1e-10;
  double tol_abs = 1e-15;
  std::string oracle;  // provenance pointer for source = oracle
  std::string note;
  // CLI cases
  std::vector<std::string> argv;
  int expect_exit = 0;
  std::vector<std::string> expect_contains;
  std::string file;  // for error reporting
  int line = 0;
};

struct GoldenResult {
  std::string id;
  bool pass;
  std::string message;  // failure detail
};

std::vector<GoldenCase> load_golden_cases(const std::filesystem::path& file);
GoldenResult run_golden_case(const GoldenCase& c);

struct GoldenStats {
  std::vector<GoldenResult> results;
  std::set<std::string> ops_seen;
  std::size_t failures = 0;
};
// Runs every *.cases file under dir.  Throws std::runtime_error if the
// directory is missing or holds no case files.
GoldenStats run_golden_dir(const std::filesystem::path& dir);

// Ops that must each be exercised by at least one fixture case.
const std::set<std::string>& golden_required_ops();

}  // namespace seqrep
