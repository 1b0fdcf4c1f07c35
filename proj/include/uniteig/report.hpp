#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "uniteig/recover.hpp"

namespace uniteig {

const char* version();

/// Input file paths keyed by role ("z", "sigma", "u", ...).
using InputPaths = std::map<std::string, std::string>;

/// {"version", "inputs", "tolerances": {"delta_group", "tau_rank"},
///  "groups": [{"mu_re", "mu_im", "m_M", "rank", "m_Ubar", ...}],
///  "residuals": {"decomp", "unitary", "reconstruction"}, "pass"}
nlohmann::json recovery_report_json(const RecoveryReport& report, const InputPaths& inputs,
                                    bool pass, const std::string& error = {});

nlohmann::json verification_json(const VerificationRecord& record, const InputPaths& inputs);

void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace uniteig
