#include "sugenn/model_io.hpp"

#include <fstream>
#include <random>

namespace sugenn {

namespace {

using nlohmann::json;

BipolarVector weights_from_json(const json& arr) {
  if (!arr.is_array() || arr.empty())
    throw parse_error("model: weights must be a nonempty array");
  std::vector<int> values;
  values.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1))
      throw parse_error("model: weight values must be exactly +1 or -1");
    values.push_back(v.get<int>());
  }
  return BipolarVector(values);
}

double number_field(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number())
    throw parse_error(std::string("model: missing numeric field '") + key + "'");
  return obj.at(key).get<double>();
}

HiddenNeuron hidden_neuron_from_json(const json& obj) {
  if (!obj.is_object() || !obj.contains("weights"))
    throw parse_error("model: hidden neuron must be an object with weights");
  BipolarVector weights = weights_from_json(obj.at("weights"));
  const bool has_theta = obj.contains("theta");
  const bool has_bn = obj.contains("batchnorm");
  if (has_theta == has_bn)
    throw parse_error("model: hidden neuron needs exactly one of theta/batchnorm");

  // an optional pre-activation bias is folded into the threshold
  const double bias = obj.contains("bias") ? number_field(obj, "bias") : 0.0;
  const std::size_t n = weights.size();

  if (has_theta) {
    return {std::move(weights), number_field(obj, "theta") - bias};
  }

  const json& bn = obj.at("batchnorm");
  BatchNormParams params;
  params.gamma = number_field(bn, "gamma");
  params.beta = number_field(bn, "beta");
  params.mean = number_field(bn, "mean") - bias;
  params.stddev = number_field(bn, "stddev");
  if (!(params.stddev > 0.0)) throw parse_error("model: batchnorm stddev must be > 0");
  const BatchNormFold fold = fold_batchnorm(params, weights);
  if (fold.is_constant) {
    // constant output: represent with a threshold no sum can cross
    const double theta = fold.constant_sign > 0 ? -(static_cast<double>(n) + 1.0)
                                                : static_cast<double>(n) + 1.0;
    return {std::move(weights), theta};
  }
  return {fold.weights, fold.theta};
}

OutputNeuron output_neuron_from_json(const json& obj) {
  if (!obj.is_object() || !obj.contains("weights"))
    throw parse_error("model: output neuron must be an object with weights");
  return {weights_from_json(obj.at("weights")),
          obj.contains("bias") ? number_field(obj, "bias") : 0.0};
}

LoadedModel model_from_json_impl(const json& doc) {
  if (!doc.is_object()) throw parse_error("model: document must be an object");
  if (doc.contains("format_version") &&
      doc.at("format_version").get<int>() != kModelFormatVersion)
    throw parse_error("model: unsupported format_version");
  if (!doc.contains("hidden_layers") || !doc.at("hidden_layers").is_array() ||
      doc.at("hidden_layers").empty())
    throw parse_error("model: hidden_layers must be a nonempty array");
  if (!doc.contains("output_layer") || !doc.at("output_layer").is_array() ||
      doc.at("output_layer").empty())
    throw parse_error("model: output_layer must be a nonempty array");

  std::vector<std::vector<HiddenNeuron>> hidden;
  for (const auto& layer : doc.at("hidden_layers")) {
    if (!layer.is_array() || layer.empty())
      throw parse_error("model: each hidden layer must be a nonempty array");
    std::vector<HiddenNeuron> neurons;
    neurons.reserve(layer.size());
    for (const auto& neuron : layer) neurons.push_back(hidden_neuron_from_json(neuron));
    hidden.push_back(std::move(neurons));
  }
  std::vector<OutputNeuron> output;
  for (const auto& unit : doc.at("output_layer"))
    output.push_back(output_neuron_from_json(unit));

  LoadedModel loaded{Network(std::move(hidden), std::move(output)), {}};
  if (doc.contains("labels")) {
    const auto& labels = doc.at("labels");
    if (!labels.is_array() || labels.size() != loaded.network.class_count())
      throw parse_error("model: labels must list one name per class");
    for (const auto& l : labels) loaded.labels.push_back(l.get<std::string>());
  }
  return loaded;
}

}  // namespace

LoadedModel model_from_json(const json& doc) {
  try {
    return model_from_json_impl(doc);
  } catch (const json::exception& e) {
    throw parse_error(std::string("model: malformed document: ") + e.what());
  }
}

nlohmann::json model_to_json(const Network& network,
                             const std::vector<std::string>& labels) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  json layers = json::array();
  for (const auto& layer : network.hidden_layers()) {
    json row = json::array();
    for (const auto& neuron : layer)
      row.push_back({{"weights", neuron.weights.to_ints()}, {"theta", neuron.theta}});
    layers.push_back(std::move(row));
  }
  doc["hidden_layers"] = std::move(layers);
  json output = json::array();
  for (const auto& unit : network.output_layer())
    output.push_back({{"weights", unit.weights.to_ints()}, {"bias", unit.bias}});
  doc["output_layer"] = std::move(output);
  if (!labels.empty()) doc["labels"] = labels;
  return doc;
}

LoadedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open model file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw parse_error("model: invalid JSON in " + path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

Network load_model(const std::filesystem::path& path) {
  return load_model_file(path).network;
}

void save_model(const Network& network, const std::filesystem::path& path,
                const std::vector<std::string>& labels) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write model file: " + path.string());
  out << model_to_json(network, labels).dump(2) << '\n';
}

std::vector<BipolarVector> inputs_from_json(const json& doc, std::size_t expected_width) {
  if (!doc.is_array()) throw parse_error("inputs: document must be an array of rows");
  std::vector<BipolarVector> rows;
  rows.reserve(doc.size());
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const auto& row = doc[r];
    BipolarVector v;
    if (row.is_string()) {
      const std::string bits = row.get<std::string>();
      BitVec packed(bits.size());
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
          packed.set(i);
        else if (bits[i] != '0')
          throw parse_error("inputs: row " + std::to_string(r) +
                            " bitstring may contain only 0 and 1");
      }
      v = BipolarVector::from_packed(std::move(packed));
    } else if (row.is_array()) {
      std::vector<int> values;
      values.reserve(row.size());
      for (const auto& e : row) {
        if (!e.is_number_integer() || (e.get<int>() != 1 && e.get<int>() != -1))
          throw parse_error("inputs: row " + std::to_string(r) +
                            " values must be exactly +1 or -1");
        values.push_back(e.get<int>());
      }
      v = BipolarVector(values);
    } else {
      throw parse_error("inputs: row " + std::to_string(r) +
                        " must be an array or a bitstring");
    }
    if (v.size() != expected_width)
      throw dimension_error("inputs: row " + std::to_string(r) + " has width " +
                            std::to_string(v.size()) + ", model expects " +
                            std::to_string(expected_width));
    rows.push_back(std::move(v));
  }
  return rows;
}

std::vector<BipolarVector> load_inputs(const std::filesystem::path& path,
                                       std::size_t expected_width) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open input file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw parse_error("inputs: invalid JSON in " + path.string() + ": " + e.what());
  }
  return inputs_from_json(doc, expected_width);
}

nlohmann::json generate_model(const GenSpec& spec) {
  if (spec.widths.empty()) throw error("generate_model: widths must be nonempty");
  if (spec.classes == 0) throw error("generate_model: need at least one class");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit_offset(0.0, 2.0);
  std::uniform_real_distribution<double> bias_dist(-1.0, 1.0);

  const auto random_weights = [&](std::size_t n) {
    json arr = json::array();
    for (std::size_t i = 0; i < n; ++i) arr.push_back(rng() & 1 ? 1 : -1);
    return arr;
  };

  json layers = json::array();
  std::size_t fan_in = spec.input_width == 0 ? spec.widths.front() : spec.input_width;
  for (std::size_t width : spec.widths) {
    json row = json::array();
    for (std::size_t j = 0; j < width; ++j) {
      std::uniform_int_distribution<std::size_t> tau_dist(1, fan_in);
      const std::size_t tau = tau_dist(rng);
      // theta = 2*tau - n - u with u in [0,2) keeps ceil((theta+n)/2) = tau
      const double theta = 2.0 * static_cast<double>(tau) -
                           static_cast<double>(fan_in) - unit_offset(rng);
      row.push_back({{"weights", random_weights(fan_in)}, {"theta", theta}});
    }
    layers.push_back(std::move(row));
    fan_in = width;
  }
  json output = json::array();
  for (std::size_t k = 0; k < spec.classes; ++k)
    output.push_back({{"weights", random_weights(fan_in)}, {"bias", bias_dist(rng)}});

  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["hidden_layers"] = std::move(layers);
  doc["output_layer"] = std::move(output);
  return doc;
}

nlohmann::ordered_json report_to_json(const EquivalenceReport& report) {
  nlohmann::ordered_json doc;
  doc["mode"] = report.mode == CheckMode::exhaustive ? "exhaustive" : "randomized";
  doc["inputs_checked"] = report.inputs_checked;
  doc["mismatch_count"] = report.mismatch_count;
  doc["pass"] = report.pass();
  if (report.mode == CheckMode::randomized) doc["seed"] = report.seed;
  auto mismatches = nlohmann::ordered_json::array();
  for (const auto& m : report.mismatches)
    mismatches.push_back({{"input", m.input}, {"expected", m.expected}, {"got", m.got}});
  doc["mismatches"] = std::move(mismatches);
  return doc;
}

}  // namespace sugenn
