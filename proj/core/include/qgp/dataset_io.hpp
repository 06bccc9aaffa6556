#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qgp/types.hpp"

namespace qgp {

/// Shortest decimal string that parses back to the same double. Used for all
/// CSV output so that reruns are byte-identical.
std::string format_double(double value);

/// Strict double parse of the whole string. Throws ParseError on trailing
/// garbage, empty input, or out-of-range values.
double parse_double(std::string_view text);

/// Reads a dataset from CSV with header `x1,...,xd,energy`. The dimension is
/// inferred from the header; every row must provide d+1 finite values.
Dataset load_dataset_csv(const std::filesystem::path& path);

/// Writes the dataset in the same format load_dataset_csv reads.
void save_dataset_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace qgp
