#ifndef HOMF_SERIALIZE_HPP
#define HOMF_SERIALIZE_HPP

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "homf/spectra.hpp"
#include "homf/timeresolved.hpp"

namespace homf::serialize {

// Stable-key-order JSON is used everywhere so identical inputs produce
// byte-identical files.
using json = nlohmann::ordered_json;

// JointAmplitude container: a self-describing header (format tag, domain,
// grid origin/step/counts) plus a row-major array of [re, im] pairs.
json to_json(const spectra::JointAmplitude& ja);
spectra::JointAmplitude amplitude_from_json(const json& j);

json to_json(const timeresolved::ClickDistribution& cd);

void save_json(const json& j, const std::string& path);
json load_json(const std::string& path);

}  // namespace homf::serialize

#endif
