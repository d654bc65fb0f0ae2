#pragma once

#include <cstddef>
#include <iosfwd>

namespace posekit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `posekit` tool. Subcommands: match, pairs,
/// render-skeleton, align, assemble, validate. Returns 0 on success, 1 on a
/// usage error and 2 on a data, schema or I/O error; failures are reported on
/// `err` as "ERROR:<kind>: <message>".
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Worker threads for frame-parallel stages: the hardware concurrency,
/// capped by POSEKIT_THREADS when that is a positive integer.
std::size_t worker_count();

}  // namespace posekit
