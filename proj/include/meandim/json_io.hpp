#pragma once

#include <json.hpp>
#include <string>

#include "meandim/castle.hpp"
#include "meandim/pipeline.hpp"
#include "meandim/widim.hpp"

namespace meandim::io {

using nlohmann::json;

// Windows are arrays of integers; delta and other rationals are exact
// fraction strings ("p/q", dyadics as "p/2^e").
json window_to_json(const FiniteWindow& f);
FiniteWindow window_from_json(const json& j);

json invariance_to_json(const InvarianceParams& p);
InvarianceParams invariance_from_json(const json& j);

// {"pre":"0110","per":"01"}
json odometer_to_json(const OdometerPoint& y);
OdometerPoint odometer_from_json(const json& j);

// {"k":1,"entries":{"0":["1/2^1"], "-2":["1"]}}
json cubeseq_to_json(const CubeSeqPoint& u);
CubeSeqPoint cubeseq_from_json(const json& j);

json product_to_json(const ProductPoint& x);
ProductPoint product_from_json(const json& j);

json sample_spec_to_json(const SampleSpec& s);
SampleSpec sample_spec_from_json(const json& j);

json box_to_json(const Box& b);
json cover_to_json(const BoxCover& c);
json widim_result_to_json(const WidimResult& r);

// bases as cylinder descriptors, shapes as integer arrays
json castle_to_json(const Castle& c);
Castle castle_from_json(const json& j);
json castle_report_to_json(const CastleCheckReport& r);

json certificate_to_json(const EmbeddingCertificate& c);
json pipeline_result_to_json(const PipelineResult& r);

// Schema-validated; unknown keys rejected with the offending key named.
PipelineConfig pipeline_config_from_json(const json& j);
json pipeline_config_to_json(const PipelineConfig& c);

/// FNV-1a hash of the canonical (sorted-key, no-whitespace) dump; used for
/// deterministic output file names.
std::string config_hash(const json& j);

/// Throws std::invalid_argument naming the first key of j outside allowed.
void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context);

}  // namespace meandim::io
