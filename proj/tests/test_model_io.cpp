#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "sugenn/model_io.hpp"
#include "sugenn/network.hpp"
#include "test_util.hpp"

using namespace sugenn;
using namespace sugenn::testutil;
using nlohmann::json;

namespace {

json example_model_doc() {
  return json::parse(R"({
    "format_version": 1,
    "hidden_layers": [[{"weights": [1, 1, -1, 1], "theta": 0.0}]],
    "output_layer": [{"weights": [1], "bias": 0.0}]
  })");
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("sugenn-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("model_from_json on the worked example") {
  const LoadedModel loaded = model_from_json(example_model_doc());
  CHECK(loaded.network.input_width() == 4);
  CHECK(loaded.network.hidden_layers()[0][0].theta == 0.0);
  CHECK(loaded.network.hidden_layers()[0][0].weights ==
        four_input_neuron().weights);
  CHECK(loaded.labels.empty());
}

TEST_CASE("batchnorm form folds on load") {
  SUBCASE("identity parameters give theta = 0") {
    json doc = example_model_doc();
    doc["hidden_layers"][0][0] = {
        {"weights", {1, 1, -1, 1}},
        {"batchnorm", {{"gamma", 1.0}, {"beta", 0.0}, {"mean", 0.0}, {"stddev", 1.0}}}};
    const Network net = model_from_json(doc).network;
    CHECK(net.hidden_layers()[0][0].theta == 0.0);
  }
  SUBCASE("gamma = 0 becomes a constant-threshold neuron") {
    json doc = example_model_doc();
    doc["hidden_layers"][0][0] = {
        {"weights", {1, 1, -1, 1}},
        {"batchnorm", {{"gamma", 0.0}, {"beta", 1.0}, {"mean", 0.0}, {"stddev", 1.0}}}};
    const Network net = model_from_json(doc).network;
    CHECK(decide_tau(net.hidden_layers()[0][0].theta, 4).kind ==
          NeuronDecision::Kind::always_active);
  }
  SUBCASE("nonpositive stddev is rejected") {
    json doc = example_model_doc();
    doc["hidden_layers"][0][0] = {
        {"weights", {1, 1, -1, 1}},
        {"batchnorm", {{"gamma", 1.0}, {"beta", 0.0}, {"mean", 0.0}, {"stddev", 0.0}}}};
    CHECK_THROWS_AS(model_from_json(doc), parse_error);
  }
}

TEST_CASE("hidden bias folds into the threshold") {
  // s + b >= theta is the same test as s >= theta - b
  json doc = example_model_doc();
  doc["hidden_layers"][0][0]["bias"] = 1.5;
  const Network with_bias = model_from_json(doc).network;
  CHECK(with_bias.hidden_layers()[0][0].theta == -1.5);
  const Network manual({{HiddenNeuron{four_input_neuron().weights, -1.5}}},
                       {OutputNeuron{BipolarVector({+1}), 0.0}});
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    std::vector<int> signs(4);
    for (std::size_t i = 0; i < 4; ++i) signs[i] = (mask >> i) & 1 ? +1 : -1;
    const BipolarVector x(signs);
    CHECK(reference_network(with_bias, x).trace == reference_network(manual, x).trace);
  }
}

TEST_CASE("model document validation") {
  SUBCASE("weight value 0") {
    json doc = example_model_doc();
    doc["hidden_layers"][0][0]["weights"][1] = 0;
    CHECK_THROWS_AS(model_from_json(doc), parse_error);
  }
  SUBCASE("fractional weight") {
    json doc = example_model_doc();
    doc["hidden_layers"][0][0]["weights"][1] = 0.5;
    CHECK_THROWS_AS(model_from_json(doc), parse_error);
  }
  SUBCASE("both theta and batchnorm") {
    json doc = example_model_doc();
    doc["hidden_layers"][0][0]["batchnorm"] = {
        {"gamma", 1.0}, {"beta", 0.0}, {"mean", 0.0}, {"stddev", 1.0}};
    CHECK_THROWS_AS(model_from_json(doc), parse_error);
  }
  SUBCASE("neither theta nor batchnorm") {
    json doc = example_model_doc();
    doc["hidden_layers"][0][0].erase("theta");
    CHECK_THROWS_AS(model_from_json(doc), parse_error);
  }
  SUBCASE("width chain break surfaces as dimension_error") {
    json doc = example_model_doc();
    doc["hidden_layers"].push_back(
        json::array({{{"weights", {1, 1}}, {"theta", 0.0}}}));
    CHECK_THROWS_AS(model_from_json(doc), dimension_error);
  }
  SUBCASE("unsupported format version") {
    json doc = example_model_doc();
    doc["format_version"] = 2;
    CHECK_THROWS_AS(model_from_json(doc), parse_error);
  }
  SUBCASE("labels must match the class count") {
    json doc = example_model_doc();
    doc["labels"] = {"a", "b"};
    CHECK_THROWS_AS(model_from_json(doc), parse_error);
    doc["labels"] = {"only"};
    CHECK(model_from_json(doc).labels == std::vector<std::string>{"only"});
  }
}

TEST_CASE("inputs_from_json") {
  SUBCASE("array rows and bitstring rows mix") {
    const json doc = json::parse(R"([[1, -1, 1, -1], "1110", [-1, -1, -1, -1]])");
    const auto rows = inputs_from_json(doc, 4);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == four_input_sample());
    CHECK(rows[1] == BipolarVector({+1, +1, +1, -1}));
    CHECK(rows[2] == BipolarVector({-1, -1, -1, -1}));
  }
  SUBCASE("width mismatch") {
    CHECK_THROWS_AS(inputs_from_json(json::parse("[[1, -1]]"), 4), dimension_error);
  }
  SUBCASE("non-binary values") {
    CHECK_THROWS_AS(inputs_from_json(json::parse("[[1, 2, 1, 1]]"), 4), parse_error);
    CHECK_THROWS_AS(inputs_from_json(json::parse(R"(["10x0"])"), 4), parse_error);
  }
}

TEST_CASE("file round trip preserves inference") {
  TempDir tmp;
  std::mt19937_64 rng(401);
  const Network net = random_network(rng, 6, {5, 3}, 2);
  const auto path = tmp.path / "model.json";
  save_model(net, path, {"first", "second"});
  const LoadedModel loaded = load_model_file(path);
  CHECK(loaded.labels == std::vector<std::string>{"first", "second"});
  const SugenoNetwork a = compile(net);
  const SugenoNetwork b = compile(loaded.network);
  for (int rep = 0; rep < 100; ++rep) {
    const BipolarVector x = random_bipolar(rng, 6);
    CHECK(network_forward(a, x).scores.pre_logits ==
          network_forward(b, x).scores.pre_logits);
  }
}

TEST_CASE("load_model propagates file errors") {
  TempDir tmp;
  CHECK_THROWS_AS(load_model(tmp.path / "missing.json"), parse_error);
  const auto bad = tmp.path / "bad.json";
  std::ofstream(bad) << "{not json";
  CHECK_THROWS_AS(load_model(bad), parse_error);
}

TEST_CASE("generate_model") {
  SUBCASE("deterministic per seed") {
    const GenSpec spec{{4}, 0, 1, 7};
    CHECK(generate_model(spec).dump() == generate_model(spec).dump());
    const GenSpec other{{4}, 0, 1, 8};
    CHECK(generate_model(spec).dump() != generate_model(other).dump());
  }
  SUBCASE("round-trips through the loader with only non-constant neurons") {
    const GenSpec spec{{6, 4}, 5, 3, 11};
    const LoadedModel loaded = model_from_json(generate_model(spec));
    CHECK(loaded.network.input_width() == 5);
    CHECK(loaded.network.class_count() == 3);
    for (const auto& layer : loaded.network.hidden_layers())
      for (const auto& neuron : layer) {
        const NeuronDecision d = decide_tau(neuron.theta, neuron.weights.size());
        CHECK(d.kind == NeuronDecision::Kind::threshold);
      }
  }
  SUBCASE("tau draws cover the whole range [1, n]") {
    std::set<int> taus_seen;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const json doc = generate_model({{8}, 0, 1, seed});
      const LoadedModel loaded = model_from_json(doc);
      for (const auto& neuron : loaded.network.hidden_layers()[0])
        taus_seen.insert(decide_tau(neuron.theta, 8).tau);
    }
    CHECK(taus_seen == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8});
  }
}

TEST_CASE("report_to_json carries the mismatch payload") {
  EquivalenceReport r;
  r.mode = CheckMode::randomized;
  r.seed = 3;
  r.inputs_checked = 10;
  r.add_mismatch("(+1,-1)", "1", "0");
  const json doc = report_to_json(r);
  CHECK(doc["mode"] == "randomized");
  CHECK(doc["pass"] == false);
  CHECK(doc["mismatch_count"] == 1);
  CHECK(doc["mismatches"][0]["input"] == "(+1,-1)");
}
