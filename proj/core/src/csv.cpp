#include "nns/csv.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nns {

std::string format_real(double v) {
    return fmt::format("{:.17g}", v);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_real(const std::string& tok, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0') {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    }
    return v;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        if (t.header.empty()) {
            t.header = split_line(line);
            continue;
        }
        const auto fields = split_line(line);
        if (fields.size() != t.header.size()) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(t.header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(to_real(f, line_no));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) {
        throw std::runtime_error("csv: missing header");
    }
    return t;
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
    const auto d = ds.input_dim();
    const auto m = ds.output_dim();
    for (std::size_t j = 0; j < d; ++j) os << (j ? "," : "") << 'x' << j + 1;
    for (std::size_t j = 0; j < m; ++j) os << ",y" << j + 1;
    os << '\n';
    for (Eigen::Index i = 0; i < ds.inputs().rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.inputs().cols(); ++j) {
            os << (j ? "," : "") << format_real(ds.inputs()(i, j));
        }
        for (Eigen::Index j = 0; j < ds.targets().cols(); ++j) {
            os << ',' << format_real(ds.targets()(i, j));
        }
        os << '\n';
    }
}

Dataset read_dataset_csv(std::istream& is, std::string provenance) {
    const CsvTable t = read_csv(is);
    std::size_t d = 0;
    std::size_t m = 0;
    for (const auto& h : t.header) {
        if (h.size() > 1 && h[0] == 'x' && m == 0) {
            ++d;
        } else if (h.size() > 1 && h[0] == 'y') {
            ++m;
        } else {
            throw std::runtime_error("dataset csv: unexpected column '" + h + "'");
        }
    }
    if (d == 0 || m == 0) {
        throw std::runtime_error("dataset csv: need x and y columns");
    }
    Eigen::MatrixXd in(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(d));
    Eigen::MatrixXd out(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) in(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i][j];
        for (std::size_t j = 0; j < m; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i][d + j];
    }
    return Dataset(std::move(in), std::move(out), std::move(provenance));
}

void save_dataset_csv(const std::string& path, const Dataset& ds) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_dataset_csv(os, ds);
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_dataset_csv(is, path);
}

// Scale file (version 1):
//   nns-scale 1
//   interval <lo> <hi>
//   inputs <count>
//   <min> <max> <constant 0|1>          one line per feature
//   targets <count>
//   ...
namespace {

void write_block(std::ostream& os, const char* name, const FeatureScale& fs) {
    os << name << ' ' << fs.features() << '\n';
    for (std::size_t j = 0; j < fs.features(); ++j) {
        const bool constant = !fs.constant.empty() && fs.constant[j];
        const auto idx = static_cast<Eigen::Index>(j);
        os << format_real(fs.min[idx]) << ' ' << format_real(fs.max[idx]) << ' ' << (constant ? 1 : 0) << '\n';
    }
}

FeatureScale read_block(std::istream& is, const char* name, double lo, double hi) {
    std::string tok;
    std::size_t count = 0;
    if (!(is >> tok) || tok != name || !(is >> count)) {
        throw std::runtime_error(std::string("scale file: expected '") + name + "' block");
    }
    FeatureScale fs;
    fs.lo = lo;
    fs.hi = hi;
    fs.min.resize(static_cast<Eigen::Index>(count));
    fs.max.resize(static_cast<Eigen::Index>(count));
    fs.constant.assign(count, false);
    for (std::size_t j = 0; j < count; ++j) {
        std::string a;
        std::string b;
        int c = 0;
        if (!(is >> a >> b >> c)) throw std::runtime_error("scale file: truncated feature line");
        fs.min[static_cast<Eigen::Index>(j)] = to_real(a, 0);
        fs.max[static_cast<Eigen::Index>(j)] = to_real(b, 0);
        fs.constant[j] = c != 0;
    }
    return fs;
}

}  // namespace

void write_scale(std::ostream& os, const ScaleParams& sp) {
    os << "nns-scale 1\n";
    os << "interval " << format_real(sp.inputs.lo) << ' ' << format_real(sp.inputs.hi) << '\n';
    write_block(os, "inputs", sp.inputs);
    write_block(os, "targets", sp.targets);
}

ScaleParams read_scale(std::istream& is) {
    std::string tok;
    int version = 0;
    if (!(is >> tok) || tok != "nns-scale" || !(is >> version) || version != 1) {
        throw std::runtime_error("scale file: bad header");
    }
    std::string lo;
    std::string hi;
    if (!(is >> tok) || tok != "interval" || !(is >> lo >> hi)) {
        throw std::runtime_error("scale file: missing interval");
    }
    const double l = to_real(lo, 0);
    const double h = to_real(hi, 0);
    ScaleParams sp;
    sp.inputs = read_block(is, "inputs", l, h);
    sp.targets = read_block(is, "targets", l, h);
    return sp;
}

void save_scale(const std::string& path, const ScaleParams& sp) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_scale(os, sp);
}

ScaleParams load_scale(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_scale(is);
}

}  // namespace nns
