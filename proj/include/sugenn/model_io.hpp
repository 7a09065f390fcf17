#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sugenn/core.hpp"
#include "sugenn/verify.hpp"

namespace sugenn {

inline constexpr int kModelFormatVersion = 1;

/// Network plus the optional class labels carried by the file.
struct LoadedModel {
  Network network;
  std::vector<std::string> labels;  // empty or one per class
};

/// Parses and validates a model document. Hidden neurons carry either a
/// plain theta or a batchnorm block (folded on load); an optional per-neuron
/// bias is folded into the threshold. Weights must be exactly +-1.
LoadedModel model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const Network& network,
                             const std::vector<std::string>& labels = {});

LoadedModel load_model_file(const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);
void save_model(const Network& network, const std::filesystem::path& path,
                const std::vector<std::string>& labels = {});

/// Input rows: JSON arrays of +-1, or bitstrings ('1' -> +1, '0' -> -1).
std::vector<BipolarVector> inputs_from_json(const nlohmann::json& doc,
                                            std::size_t expected_width);
std::vector<BipolarVector> load_inputs(const std::filesystem::path& path,
                                       std::size_t expected_width);

struct GenSpec {
  std::vector<std::size_t> widths;  // hidden layer sizes, first entry's fan-in = widths[0]
  std::size_t input_width = 0;      // 0 means: same as widths[0]
  std::size_t classes = 1;
  std::uint64_t seed = 0;
};

/// Synthetic model: uniform +-1 weights; theta = 2*tau - n - u with tau
/// uniform on [1,n] and u uniform on [0,2), so every neuron is non-constant;
/// output biases uniform on [-1,1]. Deterministic per seed.
nlohmann::json generate_model(const GenSpec& spec);

nlohmann::ordered_json report_to_json(const EquivalenceReport& report);

}  // namespace sugenn
