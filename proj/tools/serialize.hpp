#pragma once

#include <string>

#include <json.hpp>

#include "bprh/fit.hpp"
#include "bprh/gof.hpp"
#include "bprh/model.hpp"
#include "bprh/simulate.hpp"

namespace bprh::io {

using nlohmann::json;

/// {"family": "bprhm1", "baseline": "weibull:1.5,1.2", "params": [1.3,1.2,1.0]}
json model_to_json(const Model& model);
Model model_from_json(const json& j);

Model make_model_from_strings(const std::string& family, const std::string& baseline,
                              const std::vector<double>& params);

/// CSV with header y1,y2,delta1,delta2 (or just y1,y2 with all events
/// observed). Lines starting with '#' are skipped. Parse failures throw
/// std::runtime_error carrying the path and line number.
CensoredSample read_sample_csv(const std::string& path);
void write_sample_csv(const std::string& path, const CensoredSample& sample);

/// Sidecar metadata: model, seed, n, censoring plan, sampler name.
json sample_metadata(const Model& model, const CensoredSample& sample, SamplerKind kind);
void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

json gof_report_to_json(const GofReport& report);
json fit_result_to_json(const FitResult& result);

std::string target_name(GofTarget target);

}  // namespace bprh::io
