#pragma once

namespace mkldd {

/// Exit codes: 0 success, 1 usage or config error, 2 data error,
/// 3 training finished without meeting its convergence test (artifacts are
/// still written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNotConverged = 3;

int run_cli(int argc, char** argv);

}  // namespace mkldd
