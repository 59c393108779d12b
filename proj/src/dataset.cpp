#include "leafsight/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace leafsight {

void Dataset::validate() const {
  if (static_cast<Index>(labels.size()) != x.rows())
    throw ParamError("dataset: label count does not match row count");
  if (static_cast<Index>(feature_names.size()) != x.cols())
    throw ParamError("dataset: feature name count does not match column count");
  std::vector<Index> counts(classes.size(), 0);
  for (int l : labels) {
    if (l < 0 || l >= num_classes())
      throw ParamError("dataset: row label out of range");
    ++counts[l];
  }
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (counts[c] == 0)
      throw ParamError("dataset: class '" + classes[c] + "' has no rows");
}

Dataset Dataset::select_rows(const std::vector<Index>& row_idx) const {
  Dataset out;
  out.feature_names = feature_names;
  out.classes = classes;
  out.x.resize(static_cast<Index>(row_idx.size()), x.cols());
  out.labels.reserve(row_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i) {
    out.x.row(static_cast<Index>(i)) = x.row(row_idx[i]);
    out.labels.push_back(labels[row_idx[i]]);
  }
  return out;
}

Dataset Dataset::select_columns(const std::vector<Index>& col_idx) const {
  Dataset out;
  out.labels = labels;
  out.classes = classes;
  out.x.resize(x.rows(), static_cast<Index>(col_idx.size()));
  for (std::size_t j = 0; j < col_idx.size(); ++j) {
    out.x.col(static_cast<Index>(j)) = x.col(col_idx[j]);
    out.feature_names.push_back(feature_names[col_idx[j]]);
  }
  return out;
}

std::vector<Index> Dataset::class_counts() const {
  std::vector<Index> counts(classes.size(), 0);
  for (int l : labels) ++counts[l];
  return counts;
}

std::string format_double(Scalar v) {
  char buf[40];
  // Shortest representation that parses back bit-identically.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string dataset_to_csv(const Dataset& data) {
  std::ostringstream out;
  for (const auto& name : data.feature_names) out << name << ",";
  out << "label\n";
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.features(); ++j)
      out << format_double(data.x(i, j)) << ",";
    out << data.classes[data.labels[i]] << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Dataset dataset_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("feature csv: empty input");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "label")
    throw FormatError("feature csv: header must end with 'label'");

  Dataset data;
  data.feature_names.assign(header.begin(), header.end() - 1);
  const std::size_t width = data.feature_names.size();

  std::vector<VecX> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != width + 1)
      throw FormatError("feature csv: row " + std::to_string(rows.size() + 1) +
                        " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(width + 1));
    VecX row(static_cast<Index>(width));
    for (std::size_t j = 0; j < width; ++j) {
      char* end = nullptr;
      row(static_cast<Index>(j)) = std::strtod(fields[j].c_str(), &end);
      if (end == fields[j].c_str())
        throw FormatError("feature csv: non-numeric value '" + fields[j] + "'");
    }
    const std::string& label = fields.back();
    auto it = std::find(data.classes.begin(), data.classes.end(), label);
    int cls;
    if (it == data.classes.end()) {
      cls = static_cast<int>(data.classes.size());
      data.classes.push_back(label);
    } else {
      cls = static_cast<int>(it - data.classes.begin());
    }
    data.labels.push_back(cls);
    rows.push_back(std::move(row));
  }

  data.x.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    data.x.row(static_cast<Index>(i)) = rows[i];
  data.validate();
  return data;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return dataset_from_csv(ss.str());
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << dataset_to_csv(data);
}

}  // namespace leafsight
