#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace calipers {

/// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
///
///   calipers run <config>                  run an experiment, write results
///   calipers compare <a.summary.json> <b.summary.json>
///   calipers report <snapshot.json>        render a timer snapshot
///   calipers serve <config>                run with the HTTP monitor
///   calipers restart <checkpoint> <config> continue a run from a checkpoint
///
/// Common flags: --out-dir DIR, --seed N (accepted, unused: runs are
/// deterministic), --quiet.
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace calipers
