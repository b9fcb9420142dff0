#pragma once

#include "subreg/json_util.hpp"

#include <optional>
#include <string>

namespace subreg {

/// Command-line context threaded through every subcommand. The only
/// environment override is the output directory (SUBREG_OUT); everything
/// else lives in the config document for reproducibility.
struct RunContext {
  std::string out_dir = ".";
  int threads = 1;
  std::optional<double> eta_override;
  std::optional<double> tol_override;
};

Json load_config_file(const std::string& path);

double config_number(const Json& config, const char* key, double fallback);
double require_number(const Json& config, const char* key, const char* what);
int config_int(const Json& config, const char* key, int fallback);

}  // namespace subreg
