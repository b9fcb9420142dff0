#include "subreg/io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace subreg {

Json to_json(const Witness& w) {
  Json j = Json::object();
  for (const auto& [label, point] : w.entries) j[label] = json_vec(point);
  return j;
}

Json to_json(const ModulusEstimate& est) {
  Json j;
  j["value"] = json_number(est.value);
  j["witness"] = to_json(est.witness);
  j["sample_count"] = est.sample_count;
  Json radii = Json::array();
  for (double r : est.radii_used) radii.push_back(json_number(r));
  j["radii_used"] = std::move(radii);
  j["grid_step"] = json_number(est.grid_step);
  return j;
}

namespace {

Json provenance_json(const std::vector<std::string>& chain) {
  Json arr = Json::array();
  for (const std::string& line : chain) arr.push_back(line);
  return arr;
}

}  // namespace

Json to_json(const StrongSubregAtCert& cert) {
  Json j;
  j["kind"] = "strong_subregular_at";
  j["xbar"] = json_vec(cert.xbar);
  j["ybar"] = json_vec(cert.ybar);
  j["kappa"] = json_number(cert.kappa);
  j["alpha"] = json_number(cert.alpha);
  j["eta"] = json_number(cert.eta);
  j["provenance"] = provenance_json(cert.provenance);
  return j;
}

Json to_json(const StrongSubregAroundCert& cert) {
  Json j;
  j["kind"] = "strong_subregular_around";
  j["xbar"] = json_vec(cert.xbar);
  j["ybar"] = json_vec(cert.ybar);
  j["kappa"] = json_number(cert.kappa);
  j["a"] = json_number(cert.a);
  j["b"] = json_number(cert.b);
  j["r0"] = json_number(cert.r0);
  j["eta"] = json_number(cert.eta);
  j["provenance"] = provenance_json(cert.provenance);
  return j;
}

Json to_json(const CalmnessCert& cert) {
  Json j;
  j["kind"] = "calm";
  j["xbar"] = json_vec(cert.xbar);
  j["value_at_center"] = json_vec(cert.value_at_center);
  j["mu"] = json_number(cert.mu);
  j["radius"] = json_number(cert.radius);
  j["value_bound"] = json_number(cert.value_bound);
  return j;
}

Json to_json(const IsolatedSelectionCert& cert) {
  Json j;
  j["kind"] = "isolated_selection";
  j["xbar"] = json_vec(cert.xbar);
  j["zbar"] = json_vec(cert.zbar);
  j["mu"] = json_number(cert.mu);
  j["beta"] = json_number(cert.beta);
  return j;
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["holds"] = report.holds;
  j["worst_ratio"] = json_number(report.worst_ratio);
  j["bound"] = json_number(report.bound);
  j["replayed"] = json_number(report.replayed);
  j["witness"] = to_json(report.witness);
  j["sample_count"] = report.sample_count;
  j["grid_step"] = json_number(report.grid_step);
  return j;
}

Json to_json(const LocalUniformRecord& rec) {
  Json j;
  j["t"] = json_vec(rec.t);
  j["xbar"] = json_vec(rec.xbar);
  j["kappa_base"] = json_number(rec.kappa_base);
  j["a_base"] = json_number(rec.a_base);
  j["b_base"] = json_number(rec.b_base);
  j["mu"] = json_number(rec.mu);
  j["kappa_prime"] = json_number(rec.kappa_prime);
  j["alpha"] = json_number(rec.alpha);
  j["beta"] = json_number(rec.beta);
  j["r_prime"] = json_number(rec.r_prime);
  return j;
}

Json to_json(const AtUniformRecord& rec) {
  Json j;
  j["t"] = json_vec(rec.t);
  j["xbar"] = json_vec(rec.xbar);
  j["kappa_base"] = json_number(rec.kappa_base);
  j["alpha_base"] = json_number(rec.alpha_base);
  j["mu"] = json_number(rec.mu);
  j["kappa_prime"] = json_number(rec.kappa_prime);
  j["c"] = json_number(rec.c);
  j["r_prime"] = json_number(rec.r_prime);
  return j;
}

Json to_json(const UniformCert& cert) {
  Json j;
  j["kind"] = "uniform_around";
  j["kappa"] = json_number(cert.kappa);
  j["a"] = json_number(cert.a);
  j["b"] = json_number(cert.b);
  j["subcover"] = cert.subcover;
  Json records = Json::array();
  for (const LocalUniformRecord& rec : cert.records) records.push_back(to_json(rec));
  j["records"] = std::move(records);
  return j;
}

Json to_json(const UniformAtCert& cert) {
  Json j;
  j["kind"] = "uniform_at";
  j["kappa"] = json_number(cert.kappa);
  j["c"] = json_number(cert.c);
  j["subcover"] = cert.subcover;
  Json records = Json::array();
  for (const AtUniformRecord& rec : cert.records) records.push_back(to_json(rec));
  j["records"] = std::move(records);
  return j;
}

Json to_json(const UniformValidationReport& report) {
  Json j;
  j["ok"] = report.ok();
  j["bound"] = json_number(report.bound);
  Json ratios = Json::array();
  for (double r : report.per_point_ratio) ratios.push_back(json_number(r));
  j["per_point_ratio"] = std::move(ratios);
  Json violations = Json::array();
  for (const UniformViolation& v : report.violations) {
    Json vj;
    vj["sample_index"] = v.sample_index;
    vj["ratio"] = json_number(v.ratio);
    vj["bound"] = json_number(v.bound);
    vj["witness"] = to_json(v.witness);
    violations.push_back(std::move(vj));
  }
  j["violations"] = std::move(violations);
  return j;
}

Json to_json(const Trajectory& traj) {
  Json j;
  j["status"] =
      traj.status == Trajectory::Status::Complete ? "complete" : "stalled";
  j["stall_index"] = traj.stall_index;
  j["nodes"] = static_cast<long long>(traj.nodes.size());
  return j;
}

std::string divergence_csv(const std::vector<ModulusEstimate>& profile) {
  std::string csv = "radius,estimate,grid_step\n";
  for (const ModulusEstimate& est : profile) {
    csv += format_full(est.radii_used.empty() ? 0.0 : est.radii_used[0]);
    csv += ",";
    csv += format_full(est.value);
    csv += ",";
    csv += format_full(est.grid_step);
    csv += "\n";
  }
  return csv;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string csv = "t";
  const int d = traj.nodes.empty() ? 0 : static_cast<int>(traj.nodes[0].x.size());
  for (int i = 0; i < d; ++i) csv += ",x_" + std::to_string(i);
  csv += ",residual,step_norm\n";
  for (const TrajectoryNode& node : traj.nodes) {
    csv += format_full(node.t);
    for (int i = 0; i < d; ++i) csv += "," + format_full(node.x[i]);
    csv += "," + format_full(node.residual);
    csv += "," + format_full(node.step_norm);
    csv += "\n";
  }
  return csv;
}

std::string records_csv(const UniformCert& cert) {
  std::string csv =
      "index,selected,kappa_base,kappa_prime,mu,alpha,beta,r_prime\n";
  for (size_t i = 0; i < cert.records.size(); ++i) {
    const LocalUniformRecord& rec = cert.records[i];
    const bool selected =
        std::find(cert.subcover.begin(), cert.subcover.end(),
                  static_cast<int>(i)) != cert.subcover.end();
    csv += std::to_string(i);
    csv += selected ? ",1" : ",0";
    csv += "," + format_full(rec.kappa_base);
    csv += "," + format_full(rec.kappa_prime);
    csv += "," + format_full(rec.mu);
    csv += "," + format_full(rec.alpha);
    csv += "," + format_full(rec.beta);
    csv += "," + format_full(rec.r_prime);
    csv += "\n";
  }
  return csv;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace subreg
