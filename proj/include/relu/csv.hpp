#pragma once

#include <string>

#include "relu/dataset.hpp"

namespace relu {

// Dataset CSV: header "x0,...,x{p-1},y", one row per sample, decimal floats,
// LF line endings. The loader rejects NaN/Inf and malformed rows.
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const std::string& path, const Dataset& d);

// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

}  // namespace relu
