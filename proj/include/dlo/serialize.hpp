#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dlo/pipeline.hpp"
#include "dlo/synthbench.hpp"

namespace dlo {

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// All documents are version-1 JSON with keys in a fixed order, so identical
// inputs serialize to identical bytes.

std::string config_to_json(const PipelineConfig& config);
/// Missing keys keep their defaults; merge weights and the overlap gate
/// default from the configured segment length. Throws ParseError.
PipelineConfig config_from_json(const std::string& text);

std::string detection_to_json(const DetectionResult& result, double segment_length,
                              bool include_timings);
DetectionResult detection_from_json(const std::string& text, double* segment_length = nullptr);

std::string truth_to_json(const SceneTruth& truth, const SceneParams& params);
/// Geometric fields only; the stroke mask is not part of the document.
SceneTruth truth_from_json(const std::string& text);

std::string manifest_to_json(const std::vector<SceneParams>& scenes);
std::vector<SceneParams> manifest_from_json(const std::string& text);

std::string report_to_json(const BenchmarkReport& report, const PipelineConfig& config);

}  // namespace dlo
