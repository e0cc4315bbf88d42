#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "deltaspec/interpreter.hpp"

namespace deltaspec {

struct GenConfig {
  std::uint64_t seed = 1;
  int maxTests = 100;
  int maxCallsPerTest = 6;
  std::uint64_t stepBudget = kDefaultStepBudget;
  std::vector<std::int64_t> intPool{-2, -1, 0, 1, 2, 10};
  std::vector<double> realPool{-1.5, -1.0, 0.0, 1.0, 2.5, std::numeric_limits<double>::quiet_NaN()};
  int arrayLenMin = 0;
  int arrayLenMax = 4;
};

/// Throws Error(InputError) when the configuration is unusable.
void validate(const GenConfig& cfg);

struct TestSuite {
  std::string unitName;
  GenConfig config;
  std::vector<TestCase> tests;
  std::vector<ExecutionRecord> records;  // parallel to tests
};

/// Feedback-directed random generation. Calls ending abnormally truncate the
/// test before that call; tests left without a completed constructor are dropped.
TestSuite generate_suite(const Unit& unit, const GenConfig& cfg);

/// Executes existing tests on `unit`, keeping ids and order.
TestSuite replay_suite(const Unit& unit, const std::vector<TestCase>& tests, const GenConfig& cfg);

/// Union of both suites' call sequences (a's tests first, duplicates removed),
/// restricted to tests type-valid on both units and renumbered from 0.
std::vector<TestCase> union_tests(const Unit& pre, const Unit& post, const TestSuite& a, const TestSuite& b);

std::string serialize_calls(const TestCase& t);
std::uint64_t suite_hash(const TestSuite& suite);

}  // namespace deltaspec
