// sugenn command line: inference, rule extraction, explanations,
// counterfactuals, and equivalence verification over bipolar network models.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sugenn/explain.hpp"
#include "sugenn/model_io.hpp"
#include "sugenn/network.hpp"
#include "sugenn/verify.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

json literal_list(const sugenn::BitVec& set) {
  json out = json::array();
  set.for_each_set([&](std::size_t pos) { out.push_back(sugenn::literal_name(pos)); });
  return out;
}

const sugenn::SugenoNeuron& neuron_at(const sugenn::SugenoNetwork& net,
                                      std::size_t layer, std::size_t index) {
  if (layer >= net.hidden_layers().size())
    throw sugenn::parse_error("layer " + std::to_string(layer) + " out of range (" +
                              std::to_string(net.hidden_layers().size()) +
                              " hidden layers)");
  if (index >= net.hidden_layers()[layer].size())
    throw sugenn::parse_error("neuron " + std::to_string(index) +
                              " out of range (layer has " +
                              std::to_string(net.hidden_layers()[layer].size()) +
                              " neurons)");
  return net.hidden_layers()[layer][index];
}

// bipolar input feeding hidden layer `layer` for this row
sugenn::BipolarVector layer_input(const sugenn::ForwardResult& forward,
                                  const sugenn::BipolarVector& row, std::size_t layer) {
  if (layer == 0) return row;
  const auto& activations = forward.trace[layer - 1];
  std::vector<int> signs(activations.size());
  for (std::size_t j = 0; j < activations.size(); ++j)
    signs[j] = activations[j] ? +1 : -1;
  return sugenn::BipolarVector(signs);
}

int run_infer(const std::string& model_path, const std::string& inputs_path,
              bool with_trace, bool softmax, bool possibility, unsigned threads) {
  const sugenn::LoadedModel loaded = sugenn::load_model_file(model_path);
  const sugenn::SugenoNetwork net = sugenn::compile(loaded.network);
  const auto rows = sugenn::load_inputs(inputs_path, loaded.network.input_width());

  std::vector<std::string> lines(rows.size());
  const auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const sugenn::ForwardResult fwd = sugenn::network_forward(net, rows[r], with_trace);
      ordered_json line;
      line["row"] = r;
      line["pre_logits"] = fwd.scores.pre_logits;
      json sugeno = json::array();
      for (const auto& s : fwd.scores.sugeno_scores)
        sugeno.push_back(json::array({s.num, s.den}));
      line["sugeno_scores"] = std::move(sugeno);
      line["argmax"] = fwd.scores.argmax;
      if (!loaded.labels.empty()) line["label"] = loaded.labels[fwd.scores.argmax];
      if (softmax) line["probabilities"] = fwd.scores.probabilities;
      if (possibility) line["possibilities"] = fwd.scores.possibilities;
      if (with_trace) line["trace"] = fwd.trace;
      lines[r] = line.dump();
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned wanted = threads == 0 ? hw : threads;
  const unsigned used =
      static_cast<unsigned>(std::min<std::size_t>(wanted, std::max<std::size_t>(rows.size(), 1)));
  if (used <= 1 || rows.size() < 2) {
    worker(0, rows.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (rows.size() + used - 1) / used;
    for (unsigned t = 0; t < used; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(rows.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& line : lines) std::cout << line << '\n';
  return kExitOk;
}

int run_explain(const std::string& model_path, const std::string& inputs_path,
                std::size_t layer, std::size_t index, std::uint64_t limit) {
  const sugenn::LoadedModel loaded = sugenn::load_model_file(model_path);
  const sugenn::SugenoNetwork net = sugenn::compile(loaded.network);
  const auto rows = sugenn::load_inputs(inputs_path, loaded.network.input_width());
  const sugenn::SugenoNeuron& neuron = neuron_at(net, layer, index);

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const sugenn::ForwardResult fwd = sugenn::network_forward(net, rows[r]);
    const sugenn::BipolarVector input = layer_input(fwd, rows[r], layer);
    ordered_json line;
    line["row"] = r;
    line["layer"] = layer;
    line["neuron"] = index;
    if (neuron.decision.is_constant()) {
      line["constant"] =
          neuron.decision.kind == sugenn::NeuronDecision::Kind::always_active
              ? "always_active"
              : "never_active";
      std::cout << line.dump() << '\n';
      continue;
    }
    const std::size_t matches =
        sugenn::active_match_count(sugenn::polarize(input), neuron.lambda);
    line["match_count"] = matches;
    line["tau"] = neuron.decision.tau;
    const bool activated = neuron.decision.accepts(matches);
    line["activated"] = activated;
    if (activated) {
      const sugenn::Explanation e = sugenn::explain_activation(neuron, input, limit);
      line["fired_count"] = e.fired_count;
      line["truncated"] = e.truncated;
      json fired = json::array();
      for (const auto& set : e.fired) fired.push_back(literal_list(set));
      line["fired"] = std::move(fired);
    }
    std::cout << line.dump() << '\n';
  }
  return kExitOk;
}

int run_counterfactual(const std::string& model_path, const std::string& inputs_path,
                       std::size_t layer, std::size_t index, int target) {
  const sugenn::LoadedModel loaded = sugenn::load_model_file(model_path);
  const sugenn::SugenoNetwork net = sugenn::compile(loaded.network);
  const auto rows = sugenn::load_inputs(inputs_path, loaded.network.input_width());
  const sugenn::SugenoNeuron& neuron = neuron_at(net, layer, index);

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const sugenn::ForwardResult fwd = sugenn::network_forward(net, rows[r]);
    const sugenn::BipolarVector input = layer_input(fwd, rows[r], layer);
    ordered_json line;
    line["row"] = r;
    line["layer"] = layer;
    line["neuron"] = index;
    line["target"] = target;
    try {
      const sugenn::Counterfactual result = sugenn::counterfactual(neuron, input, target);
      line["current"] = result.flip_count == 0 ? target : 1 - target;
      line["flip_count"] = result.flip_count;
      json witness = json::array();
      for (std::size_t c : result.witness) witness.push_back(c + 1);  // 1-based, as x1..xn
      line["witness"] = std::move(witness);
      line["minimal_witness_count"] = result.minimal_witness_count;
    } catch (const sugenn::impossible_target&) {
      line["error"] = "impossible-target";
    }
    std::cout << line.dump() << '\n';
  }
  return kExitOk;
}

int run_rules(const std::string& model_path, std::size_t layer, std::size_t index,
              bool elimination, std::uint64_t limit, bool as_json) {
  const sugenn::LoadedModel loaded = sugenn::load_model_file(model_path);
  const sugenn::SugenoNetwork net = sugenn::compile(loaded.network);
  const sugenn::SugenoNeuron& neuron = neuron_at(net, layer, index);

  if (neuron.decision.is_constant()) {
    const std::string kind =
        neuron.decision.kind == sugenn::NeuronDecision::Kind::always_active
            ? "always_active"
            : "never_active";
    if (as_json) {
      ordered_json doc;
      doc["layer"] = layer;
      doc["neuron"] = index;
      doc["constant"] = kind;
      doc["count"] = 0;
      doc["rules"] = json::array();
      std::cout << doc.dump() << '\n';
    } else {
      std::cout << "# constant neuron (" << kind << "); no rules\n";
    }
    return kExitOk;
  }

  ordered_json doc;
  doc["layer"] = layer;
  doc["neuron"] = index;
  doc["tau"] = neuron.decision.tau;
  doc["kind"] = elimination ? "elimination" : "selection";
  json rule_array = json::array();
  std::uint64_t total = 0;
  bool truncated = false;

  if (elimination) {
    const sugenn::EliminationRuleList rules =
        sugenn::elimination_rules(*neuron.capacity, limit);
    total = rules.total_count;
    truncated = rules.truncated;
    for (const auto& rule : rules.rules) {
      if (as_json)
        rule_array.push_back({{"literals", literal_list(rule.focal)},
                              {"bound", rule.bound},
                              {"text", sugenn::rule_text(rule)}});
      else
        std::cout << sugenn::rule_text(rule) << '\n';
    }
  } else {
    const sugenn::SelectionRuleList rules =
        sugenn::selection_rules(sugenn::focal_family(*neuron.capacity), limit);
    total = rules.total_count;
    truncated = rules.truncated;
    for (const auto& rule : rules.rules) {
      if (as_json)
        rule_array.push_back({{"literals", literal_list(rule.focal)},
                              {"weight", rule.weight},
                              {"text", sugenn::rule_text(rule)}});
      else
        std::cout << sugenn::rule_text(rule) << '\n';
    }
  }

  if (as_json) {
    doc["count"] = total;
    doc["truncated"] = truncated;
    doc["rules"] = std::move(rule_array);
    std::cout << doc.dump() << '\n';
  } else if (truncated) {
    std::cout << "# truncated: showing " << std::min<std::uint64_t>(limit, total)
              << " of " << total << " rules\n";
  }
  return kExitOk;
}

int run_verify(const std::string& model_path, bool exhaustive, std::uint64_t trials,
               std::uint64_t seed) {
  const sugenn::LoadedModel loaded = sugenn::load_model_file(model_path);
  const sugenn::Network& net = loaded.network;

  ordered_json doc;
  doc["model"] = model_path;
  doc["mode"] = exhaustive ? "exhaustive" : "randomized";
  bool pass = true;

  ordered_json neuron_reports = ordered_json::array();
  std::uint64_t neuron_seed = seed;
  for (std::size_t l = 0; l < net.hidden_layers().size(); ++l) {
    for (std::size_t j = 0; j < net.hidden_layers()[l].size(); ++j) {
      const sugenn::HiddenNeuron& neuron = net.hidden_layers()[l][j];
      const sugenn::EquivalenceReport report =
          exhaustive
              ? sugenn::check_neuron_equivalence(neuron, sugenn::CheckMode::exhaustive)
              : sugenn::check_neuron_equivalence(neuron, sugenn::CheckMode::randomized,
                                                 trials, ++neuron_seed);
      pass = pass && report.pass();
      ordered_json entry;
      entry["layer"] = l;
      entry["neuron"] = j;
      entry["report"] = sugenn::report_to_json(report);
      neuron_reports.push_back(std::move(entry));
    }
  }
  doc["neurons"] = std::move(neuron_reports);

  const sugenn::EquivalenceReport network_report =
      exhaustive ? sugenn::check_network_equivalence_exhaustive(net)
                 : sugenn::check_network_equivalence(net, trials, seed);
  pass = pass && network_report.pass();
  doc["network"] = sugenn::report_to_json(network_report);
  doc["pass"] = pass;
  std::cout << doc.dump(2) << '\n';
  return pass ? kExitOk : kExitVerifyFailed;
}

int run_gen(const std::vector<std::size_t>& widths, std::size_t input_width,
            std::size_t classes, std::uint64_t seed, const std::string& out_path) {
  const json doc = sugenn::generate_model({widths, input_width, classes, seed});
  if (out_path.empty() || out_path == "-") {
    std::cout << doc.dump(2) << '\n';
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) throw sugenn::parse_error("cannot write " + out_path);
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int run_bench(const std::string& model_path, std::uint64_t trials, std::uint64_t seed) {
  const sugenn::LoadedModel loaded = sugenn::load_model_file(model_path);
  const sugenn::SugenoNetwork net = sugenn::compile(loaded.network);
  std::mt19937_64 rng(seed);
  std::vector<sugenn::BipolarVector> inputs;
  inputs.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t)
    inputs.push_back(sugenn::random_bipolar(rng, loaded.network.input_width()));

  using clock = std::chrono::steady_clock;
  long long sink = 0;

  const auto t0 = clock::now();
  for (const auto& x : inputs)
    sink += static_cast<long long>(
        sugenn::network_forward(net, x, /*with_trace=*/false).scores.argmax);
  const auto t1 = clock::now();
  for (const auto& x : inputs)
    sink += static_cast<long long>(sugenn::reference_network(loaded.network, x)
                                       .pre_logits.size());
  const auto t2 = clock::now();

  const auto seconds = [](auto a, auto b) {
    return std::chrono::duration<double>(b - a).count();
  };
  const double sugeno_s = std::max(seconds(t0, t1), 1e-9);
  const double naive_s = std::max(seconds(t1, t2), 1e-9);
  ordered_json doc;
  doc["trials"] = trials;
  doc["checksum"] = sink;
  doc["bitpacked_rows_per_sec"] = static_cast<double>(trials) / sugeno_s;
  doc["naive_rows_per_sec"] = static_cast<double>(trials) / naive_s;
  doc["speedup"] = naive_s / sugeno_s;
  std::cout << doc.dump() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sugeno-integral inference and explanation for bipolar threshold networks"};
  app.require_subcommand(1);

  std::string model_path, inputs_path, out_path;
  bool with_trace = false, softmax = false, possibility = false;
  bool elimination = false, as_json = false, exhaustive = false;
  std::size_t layer = 0, neuron = 0;
  std::uint64_t limit = 1000, trials = 10000, seed = 1;
  int target = 1;
  unsigned threads = 0;
  std::vector<std::size_t> widths;
  std::size_t input_width = 0, classes = 1;

  auto* infer = app.add_subcommand("infer", "Run inference and print JSON lines");
  infer->add_option("model", model_path)->required();
  infer->add_option("inputs", inputs_path)->required();
  infer->add_flag("--trace", with_trace, "include hidden activations");
  infer->add_flag("--softmax", softmax, "include softmax probabilities");
  infer->add_flag("--possibility", possibility, "include possibility degrees");
  infer->add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* explain = app.add_subcommand("explain", "Fired focal sets of one neuron");
  explain->add_option("model", model_path)->required();
  explain->add_option("inputs", inputs_path)->required();
  explain->add_option("--layer", layer)->required();
  explain->add_option("--neuron", neuron)->required();
  explain->add_option("--limit", limit, "max listed focal sets");

  auto* cf = app.add_subcommand("counterfactual", "Minimal flips to reach a target");
  cf->add_option("model", model_path)->required();
  cf->add_option("inputs", inputs_path)->required();
  cf->add_option("--layer", layer)->required();
  cf->add_option("--neuron", neuron)->required();
  cf->add_option("--target", target)->required()->check(CLI::Range(0, 1));

  auto* rules = app.add_subcommand("rules", "Selection or elimination rules");
  rules->add_option("model", model_path)->required();
  rules->add_option("--layer", layer)->required();
  rules->add_option("--neuron", neuron)->required();
  rules->add_flag("--elimination", elimination, "emit elimination rules");
  rules->add_option("--limit", limit, "max listed rules");
  rules->add_flag("--json", as_json, "machine-readable output");

  auto* verify = app.add_subcommand("verify", "Check Sugeno path against the reference");
  verify->add_option("model", model_path)->required();
  verify->add_flag("--exhaustive", exhaustive, "sweep all inputs (width <= 20)");
  verify->add_option("--trials", trials, "random trials per check");
  verify->add_option("--seed", seed);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic model");
  gen->add_option("--widths", widths, "hidden layer widths")->required()->delimiter(',');
  gen->add_option("--input-width", input_width, "input width (default: first width)");
  gen->add_option("--classes", classes);
  gen->add_option("--seed", seed);
  gen->add_option("-o,--output", out_path, "output file (default: stdout)");

  auto* bench = app.add_subcommand("bench", "Bit-packed vs naive throughput");
  bench->add_option("model", model_path)->required();
  bench->add_option("--trials", trials);
  bench->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (infer->parsed())
      return run_infer(model_path, inputs_path, with_trace, softmax, possibility,
                       threads);
    if (explain->parsed()) return run_explain(model_path, inputs_path, layer, neuron, limit);
    if (cf->parsed())
      return run_counterfactual(model_path, inputs_path, layer, neuron, target);
    if (rules->parsed()) return run_rules(model_path, layer, neuron, elimination, limit, as_json);
    if (verify->parsed()) return run_verify(model_path, exhaustive, trials, seed);
    if (gen->parsed()) return run_gen(widths, input_width, classes, seed, out_path);
    if (bench->parsed()) return run_bench(model_path, trials, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
