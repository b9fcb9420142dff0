#pragma once

#include "subreg/json_util.hpp"
#include "subreg/moduli.hpp"
#include "subreg/certificates.hpp"
#include "subreg/pathfollow.hpp"
#include "subreg/uniformize.hpp"

#include <string>
#include <vector>

namespace subreg {

Json to_json(const Witness& w);
Json to_json(const ModulusEstimate& est);
Json to_json(const StrongSubregAtCert& cert);
Json to_json(const StrongSubregAroundCert& cert);
Json to_json(const CalmnessCert& cert);
Json to_json(const IsolatedSelectionCert& cert);
Json to_json(const ValidationReport& report);
Json to_json(const LocalUniformRecord& rec);
Json to_json(const AtUniformRecord& rec);
Json to_json(const UniformCert& cert);
Json to_json(const UniformAtCert& cert);
Json to_json(const UniformValidationReport& report);
Json to_json(const Trajectory& traj);

/// CSV with columns radius, estimate, grid_step.
std::string divergence_csv(const std::vector<ModulusEstimate>& profile);
/// CSV with columns t, x_0.., residual, step_norm.
std::string trajectory_csv(const Trajectory& traj);
/// Per-point record summary of a uniform certificate.
std::string records_csv(const UniformCert& cert);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace subreg
