#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bm {

// Batch driver. Subcommands: expand, rank, variance, second-chaos, simulate,
// covcheck, verify-clt, verify-fclt. Returns 0 on success, 2 when a
// verification subcommand fails its checks, 1 on errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bm
