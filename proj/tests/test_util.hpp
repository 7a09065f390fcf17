#pragma once

#include <random>
#include <vector>

#include "sugenn/core.hpp"
#include "sugenn/network.hpp"

namespace sugenn::testutil {

// The running four-input neuron used across the suites:
// w = (+1,+1,-1,+1), theta = 0, so tau = 2 and Lambda = {1+,2+,3-,4+}.
inline HiddenNeuron four_input_neuron() {
  return {BipolarVector({+1, +1, -1, +1}), 0.0};
}

inline BipolarVector four_input_sample() { return BipolarVector({+1, -1, +1, -1}); }

// the same sample with coordinate 2 flipped, which activates the neuron
inline BipolarVector four_input_sample_flipped() {
  return BipolarVector({+1, +1, +1, -1});
}

inline SugenoNeuron compile_single(const HiddenNeuron& neuron) {
  const Network net({{neuron}}, {OutputNeuron{BipolarVector({+1}), 0.0}});
  return compile(net).hidden_layers()[0][0];
}

inline double random_theta(std::mt19937_64& rng, std::size_t n) {
  // spans the constant branches on both sides, half-step grid
  std::uniform_int_distribution<int> halves(-2 * static_cast<int>(n) - 4,
                                            2 * static_cast<int>(n) + 4);
  return 0.5 * halves(rng);
}

inline BipolarVector random_bipolar_signs(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> values(n);
  for (auto& v : values) v = rng() & 1 ? +1 : -1;
  return BipolarVector(values);
}

inline HiddenNeuron random_neuron(std::mt19937_64& rng, std::size_t n) {
  return {random_bipolar_signs(rng, n), random_theta(rng, n)};
}

inline Network random_network(std::mt19937_64& rng, std::size_t input_width,
                              std::vector<std::size_t> widths, std::size_t classes) {
  std::vector<std::vector<HiddenNeuron>> hidden;
  std::size_t fan_in = input_width;
  for (std::size_t w : widths) {
    std::vector<HiddenNeuron> layer;
    for (std::size_t j = 0; j < w; ++j) layer.push_back(random_neuron(rng, fan_in));
    hidden.push_back(std::move(layer));
    fan_in = w;
  }
  std::vector<OutputNeuron> output;
  std::uniform_real_distribution<double> bias(-1.0, 1.0);
  for (std::size_t k = 0; k < classes; ++k)
    output.push_back({random_bipolar_signs(rng, fan_in), bias(rng)});
  return Network(std::move(hidden), std::move(output));
}

}  // namespace sugenn::testutil
