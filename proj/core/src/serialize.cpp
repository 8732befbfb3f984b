// Model file layout (version 1):
//
//   nns-mlp 1
//   layers <count>
//   <fan_in> <fan_out> <activation>      one line per layer
//   weights <k>                          then fan_out rows of fan_in values
//   biases <k>                           then one line of fan_out values
//   end

#include "nns/mlp.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nns {

namespace {

constexpr int kFormatVersion = 1;

[[noreturn]] void parse_fail(const std::string& what) {
    throw std::runtime_error("model file: " + what);
}

void expect_token(std::istream& is, const std::string& want) {
    std::string got;
    if (!(is >> got) || got != want) {
        parse_fail("expected '" + want + "', found '" + got + "'");
    }
}

std::size_t read_count(std::istream& is, const char* what) {
    long long v = -1;
    if (!(is >> v) || v < 0) {
        parse_fail(std::string("bad ") + what);
    }
    return static_cast<std::size_t>(v);
}

double read_real(std::istream& is) {
    std::string tok;
    if (!(is >> tok)) {
        parse_fail("unexpected end of file");
    }
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
        parse_fail("bad number '" + tok + "'");
    }
    return v;
}

}  // namespace

void write_network(std::ostream& os, const Network& net) {
    os << "nns-mlp " << kFormatVersion << '\n';
    os << "layers " << net.layer_count() << '\n';
    for (const auto& spec : net.layers()) {
        os << spec.fan_in << ' ' << spec.fan_out << ' ' << to_string(spec.activation) << '\n';
    }
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        const auto& w = net.weights(k);
        os << "weights " << k << '\n';
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                os << (c ? " " : "") << fmt::format("{:.17g}", w(r, c));
            }
            os << '\n';
        }
        const auto& b = net.biases(k);
        os << "biases " << k << '\n';
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            os << (r ? " " : "") << fmt::format("{:.17g}", b[r]);
        }
        os << '\n';
    }
    os << "end\n";
}

Network read_network(std::istream& is) {
    expect_token(is, "nns-mlp");
    const std::size_t version = read_count(is, "version");
    if (version != kFormatVersion) {
        parse_fail("unsupported version " + std::to_string(version));
    }
    expect_token(is, "layers");
    const std::size_t count = read_count(is, "layer count");
    std::vector<LayerSpec> specs(count);
    for (auto& spec : specs) {
        spec.fan_in = read_count(is, "fan_in");
        spec.fan_out = read_count(is, "fan_out");
        std::string act;
        is >> act;
        spec.activation = parse_activation(act);
    }
    Network net(specs);
    for (std::size_t k = 0; k < count; ++k) {
        expect_token(is, "weights");
        if (read_count(is, "layer index") != k) {
            parse_fail("layer blocks out of order");
        }
        auto& w = net.weights(k);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = read_real(is);
            }
        }
        expect_token(is, "biases");
        if (read_count(is, "layer index") != k) {
            parse_fail("layer blocks out of order");
        }
        auto& b = net.biases(k);
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            b[r] = read_real(is);
        }
    }
    expect_token(is, "end");
    return net;
}

void save_network(const std::string& path, const Network& net) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write_network(os, net);
    if (!os) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

Network load_network(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read_network(is);
}

}  // namespace nns
