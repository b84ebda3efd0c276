#include "nnquad/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nnquad {

using nlohmann::json;

std::string to_json(const Network<double>& net, int indent) {
    json j;
    j["activation"] = to_string(net.activation());
    j["input_dim"] = net.input_dim();
    json layers = json::array();
    for (const auto& l : net.layers()) {
        json w = json::array();
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c) row.push_back(l.weights(r, c));
            w.push_back(std::move(row));
        }
        json b = json::array();
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) b.push_back(l.bias(r));
        layers.push_back({{"weights", std::move(w)}, {"bias", std::move(b)}});
    }
    j["layers"] = std::move(layers);
    if (net.alphabet()) j["alphabet"] = net.alphabet()->values();
    return j.dump(indent);
}

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where, std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where, "expected a number");
    return v.get<double>();
}

}  // namespace

Network<double> network_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    const std::string act_s = field(j, "activation", "/").is_string() ? j["activation"].get<std::string>() : "";
    Activation act;
    if (act_s == "relu")
        act = Activation::relu;
    else if (act_s == "tanh")
        act = Activation::tanh;
    else
        throw ParseError("/activation", "expected \"relu\" or \"tanh\"");
    const json& dim_v = field(j, "input_dim", "/");
    if (!dim_v.is_number_integer() || dim_v.get<long long>() < 1) throw ParseError("/input_dim", "expected a positive integer");
    Eigen::Index cols = dim_v.get<Eigen::Index>();

    const json& lj = field(j, "layers", "/");
    if (!lj.is_array() || lj.empty()) throw ParseError("/layers", "expected a non-empty array");
    std::vector<Layer<double>> layers;
    for (std::size_t i = 0; i < lj.size(); ++i) {
        const std::string at = "/layers/" + std::to_string(i);
        const json& w = field(lj[i], "weights", at);
        const json& b = field(lj[i], "bias", at);
        if (!w.is_array() || w.empty()) throw ParseError(at + "/weights", "expected a non-empty array of rows");
        if (!b.is_array()) throw ParseError(at + "/bias", "expected an array");
        const auto rows = static_cast<Eigen::Index>(w.size());
        if (static_cast<Eigen::Index>(b.size()) != rows)
            throw ParseError(at + "/bias", "length " + std::to_string(b.size()) + " does not match " +
                                               std::to_string(rows) + " weight rows");
        Layer<double> l{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
        for (Eigen::Index r = 0; r < rows; ++r) {
            const std::string rat = at + "/weights/" + std::to_string(r);
            if (!w[r].is_array()) throw ParseError(rat, "expected an array");
            if (static_cast<Eigen::Index>(w[r].size()) != cols)
                throw ParseError(rat, "row has " + std::to_string(w[r].size()) + " entries, expected " +
                                          std::to_string(cols));
            for (Eigen::Index c = 0; c < cols; ++c) l.weights(r, c) = number(w[r][c], rat + "/" + std::to_string(c));
            l.bias(r) = number(b[r], at + "/bias/" + std::to_string(r));
        }
        cols = rows;
        layers.push_back(std::move(l));
    }
    std::optional<Alphabet<double>> alpha;
    if (auto it = j.find("alphabet"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError("/alphabet", "expected an array");
        std::vector<double> v;
        for (std::size_t i = 0; i < it->size(); ++i) v.push_back(number((*it)[i], "/alphabet/" + std::to_string(i)));
        alpha = Alphabet<double>(std::move(v));
    }
    try {
        return Network<double>(act, std::move(layers), std::move(alpha));
    } catch (const InputError& e) {
        throw ParseError("/", e.what());
    }
}

void save_network(const Network<double>& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path + " for writing");
    out << to_json(net) << '\n';
}

Network<double> load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return network_from_json(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ":" + e.location, std::string(e.what()).substr(e.location.size() + 2));
    }
}

}  // namespace nnquad
