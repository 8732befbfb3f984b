#pragma once

#include "nns/pipeline.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nns {

/// Numeric CSV: one header line, then rows of reals. Lines starting with
/// '#' are comments and are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& is);

/// Header `x1,...,xd,y1,...,ym`, one row per sample, 17 significant digits.
void write_dataset_csv(std::ostream& os, const Dataset& ds);
Dataset read_dataset_csv(std::istream& is, std::string provenance = {});

void save_dataset_csv(const std::string& path, const Dataset& ds);
Dataset load_dataset_csv(const std::string& path);

/// Versioned text file holding both input and target FeatureScale blocks.
void write_scale(std::ostream& os, const ScaleParams& sp);
ScaleParams read_scale(std::istream& is);
void save_scale(const std::string& path, const ScaleParams& sp);
ScaleParams load_scale(const std::string& path);

std::string format_real(double v);

}  // namespace nns
