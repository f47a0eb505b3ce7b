#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace bmshift {

enum class Command { classify, densities, dim, verify, decompose };

struct JobConfig {
  Command command = Command::classify;
  std::string alpha = "1";
  std::string beta = "0";
  std::string gamma = "2";
  std::string delta = "0";
  std::string matrix = "11;10";
  std::int64_t n = 0;        // 0: per-command default
  std::int64_t horizon = 0;  // 0: automatic
  std::size_t K = 40;
  double eps = 1e-10;
  std::string mode = "closed";  // closed | empirical | both
  std::string which = "both";   // hausdorff | minkowski | both
  std::string format = "json";  // json | csv
  std::string out;              // empty: stdout
  std::uint64_t seed = 0;
};

// Exit codes: 0 success, 1 verification failure, 2 validation error,
// 3 numeric failure.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

// Parses argv with CLI11 and runs the job.
int cli_main(int argc, char** argv);

}  // namespace bmshift
