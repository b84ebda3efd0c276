#pragma once

#include <string>

#include "nnquad/network.hpp"

namespace nnquad {

// .nnet.json: {activation, input_dim, layers:[{weights, bias}], alphabet?}
std::string to_json(const Network<double>& net, int indent = -1);
Network<double> network_from_json(const std::string& text);

void save_network(const Network<double>& net, const std::string& path);
Network<double> load_network(const std::string& path);

}  // namespace nnquad
