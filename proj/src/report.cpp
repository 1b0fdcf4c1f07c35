#include "uniteig/report.hpp"

#include <fstream>

#include "uniteig/unit_circle.hpp"

namespace uniteig {

const char* version() { return UNITEIG_VERSION; }

nlohmann::json recovery_report_json(const RecoveryReport& report, const InputPaths& inputs,
                                    bool pass, const std::string& error) {
  nlohmann::json groups = nlohmann::json::array();
  for (const GroupRecord& g : report.groups) {
    groups.push_back({{"mu_re", g.mu.real()},
                      {"mu_im", g.mu.imag()},
                      {"phase", principal_phase(g.mu)},
                      {"raw_mu_re", g.raw_mean.real()},
                      {"raw_mu_im", g.raw_mean.imag()},
                      {"m_M", g.m_m},
                      {"rank", g.rank},
                      {"m_Ubar", g.m_ubar},
                      {"tau", g.tau},
                      {"singular_values", g.singular_values}});
  }
  nlohmann::json doc;
  doc["version"] = version();
  doc["inputs"] = inputs;
  doc["tolerances"] = {{"delta_group", report.delta_group},
                       {"tau_rank", report.tau_rank ? nlohmann::json(*report.tau_rank)
                                                    : nlohmann::json("auto")}};
  doc["groups"] = std::move(groups);
  doc["total_rank"] = report.total_rank();
  doc["min_group_gap"] = report.min_group_gap;
  doc["near_degenerate"] = report.near_degenerate;
  doc["residuals"] = {{"decomp", report.residual_decomp},
                      {"unitary", report.residual_unitary},
                      {"reconstruction", report.residual_reconstruction},
                      {"reference", report.reference_supplied ? "input" : "rebuilt"}};
  doc["pass"] = pass;
  if (!error.empty()) doc["error"] = error;
  return doc;
}

nlohmann::json verification_json(const VerificationRecord& record, const InputPaths& inputs) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : record.checks) {
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
  }
  nlohmann::json doc;
  doc["version"] = version();
  doc["inputs"] = inputs;
  doc["residuals"] = {{"decomp", record.residual_decomp},
                      {"unitary", record.residual_unitary},
                      {"reconstruction", record.residual_reconstruction},
                      {"max_modulus_deviation", record.max_modulus_deviation}};
  doc["threshold"] = record.threshold;
  doc["checks"] = std::move(checks);
  doc["pass"] = record.pass;
  return doc;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace uniteig
