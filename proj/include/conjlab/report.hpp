// JSON serialization of evaluation, equivalence and search reports.
#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "conjlab/functionals.hpp"
#include "conjlab/lp_search.hpp"
#include "conjlab/transforms.hpp"

namespace conjlab {

inline constexpr std::string_view kToolVersion = "1.0.0";

nlohmann::json params_json(const Params& p);
nlohmann::json quad_json(const QuadOptions& q);
nlohmann::json scan_json(const ScanSpec& s);

// {version, config, form, params, constraint_sup, argmax, objective, bound,
//  ratio, errors, ...}; ratio and objective are null on refusal.
nlohmann::json eval_report_json(const EvalReport& r, const nlohmann::json& config);

nlohmann::json certificate_json(const Certificate& c);
nlohmann::json search_json(const SearchResult& r, const Params& p, const SearchConfig& cfg,
                           const nlohmann::json& config);
nlohmann::json cross_form_json(const CrossFormRatios& r, const nlohmann::json& config);

// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace conjlab
