#pragma once

#include "subreg/config.hpp"

namespace subreg {

// Subcommand drivers. Exit-code contract: 0 = all claims confirmed,
// 1 = a mathematical claim failed validation (or the solver stalled),
// 2 = usage/config error (reported by throwing; the CLI maps exceptions).

int cmd_estimate(const Json& config, const RunContext& ctx);
int cmd_certify(const Json& config, const RunContext& ctx);
int cmd_uniformize(const Json& config, const RunContext& ctx);
int cmd_follow(const Json& config, const RunContext& ctx);
int cmd_counterexample(const Json& config, const RunContext& ctx);

}  // namespace subreg
