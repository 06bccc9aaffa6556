#include "qgp/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace qgp {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || text.empty()) {
    throw ParseError("cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open dataset file " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("dataset file " + path.string() + " is empty");
  }
  const auto header = split_fields(strip_cr(line));
  if (header.size() < 2 || header.back() != "energy") {
    throw ParseError("dataset header must be x1,...,xd,energy");
  }
  const int dim = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < dim; ++i) {
    if (header[i] != "x" + std::to_string(i + 1)) {
      throw ParseError("dataset header column " + std::to_string(i + 1) +
                       " is '" + header[i] + "', expected x" +
                       std::to_string(i + 1));
    }
  }

  Dataset data{dim, {}};
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) {
      continue;  // tolerate a trailing blank line
    }
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    DataPoint p;
    p.x.resize(dim);
    try {
      for (int i = 0; i < dim; ++i) {
        p.x[i] = parse_double(fields[i]);
      }
      p.energy = parse_double(fields.back());
    } catch (const ParseError& e) {
      throw ParseError("row " + std::to_string(row) + ": " + e.what());
    }
    data.points.push_back(std::move(p));
  }
  data.validate();
  return data;
}

void save_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  std::ostringstream out;
  for (int i = 0; i < data.dimension; ++i) {
    out << 'x' << (i + 1) << ',';
  }
  out << "energy\n";
  for (const DataPoint& p : data.points) {
    for (int i = 0; i < data.dimension; ++i) {
      out << format_double(p.x[i]) << ',';
    }
    out << format_double(p.energy) << '\n';
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  file << out.str();
  if (!file) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace qgp
