#include "leafsight/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "leafsight/dataset.hpp"

namespace leafsight {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes)
    : classes_(std::move(classes)) {
  counts_.setZero(static_cast<Index>(classes_.size()),
                  static_cast<Index>(classes_.size()));
}

void ConfusionMatrix::accumulate(const std::string& actual,
                                 const std::string& predicted) {
  auto find = [&](const std::string& name) {
    auto it = std::find(classes_.begin(), classes_.end(), name);
    if (it == classes_.end())
      throw ParamError("confusion matrix: unknown label '" + name + "'");
    return static_cast<int>(it - classes_.begin());
  };
  accumulate(find(actual), find(predicted));
}

void ConfusionMatrix::accumulate(int actual, int predicted) {
  if (actual < 0 || actual >= num_classes() || predicted < 0 ||
      predicted >= num_classes())
    throw ParamError("confusion matrix: label index out of range");
  ++counts_(actual, predicted);
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.classes_ != classes_)
    throw ParamError("confusion matrix: merge with mismatched class lists");
  counts_ += other.counts_;
}

std::uint64_t ConfusionMatrix::total() const { return counts_.sum(); }

void ConfusionMatrix::set(int actual, int predicted, std::uint64_t count) {
  counts_(actual, predicted) = count;
}

MetricReport report(const ConfusionMatrix& cm) {
  const int n = cm.num_classes();
  if (n == 0 || cm.total() == 0)
    throw ParamError("report: empty confusion matrix");

  MetricReport r;
  std::uint64_t trace = 0;
  for (int c = 0; c < n; ++c) {
    std::uint64_t tp = cm.at(c, c);
    std::uint64_t row_sum = 0, col_sum = 0;
    for (int k = 0; k < n; ++k) {
      row_sum += cm.at(c, k);
      col_sum += cm.at(k, c);
    }
    trace += tp;
    const std::uint64_t fp = col_sum - tp;
    const std::uint64_t fn = row_sum - tp;

    ClassMetrics m;
    m.name = cm.classes()[c];
    m.support = row_sum;
    m.precision = tp + fp > 0 ? static_cast<Scalar>(tp) / (tp + fp) : 0;
    m.recall = tp + fn > 0 ? static_cast<Scalar>(tp) / (tp + fn) : 0;
    m.f1 = m.precision + m.recall > 0
               ? 2 * m.precision * m.recall / (m.precision + m.recall)
               : 0;
    r.per_class.push_back(m);
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
  }
  r.accuracy = static_cast<Scalar>(trace) / static_cast<Scalar>(cm.total());
  r.macro_precision /= n;
  r.macro_recall /= n;
  r.macro_f1 /= n;
  return r;
}

std::string render_report_text(const MetricReport& r) {
  std::size_t width = 5;
  for (const auto& m : r.per_class) width = std::max(width, m.name.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width) + 2) << "class"
      << std::right << std::setw(11) << "precision" << std::setw(11) << "recall"
      << std::setw(11) << "f1" << std::setw(9) << "support" << "\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& m : r.per_class) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << m.name
        << std::right << std::setw(11) << m.precision << std::setw(11)
        << m.recall << std::setw(11) << m.f1 << std::setw(9) << m.support
        << "\n";
  }
  out << std::left << std::setw(static_cast<int>(width) + 2) << "macro"
      << std::right << std::setw(11) << r.macro_precision << std::setw(11)
      << r.macro_recall << std::setw(11) << r.macro_f1 << std::setw(9) << ""
      << "\n";
  out << "accuracy " << r.accuracy << "\n";
  return out.str();
}

std::string render_report_csv(const MetricReport& r) {
  std::ostringstream out;
  out << "class,precision,recall,f1,support\n";
  for (const auto& m : r.per_class)
    out << m.name << "," << format_double(m.precision) << ","
        << format_double(m.recall) << "," << format_double(m.f1) << ","
        << m.support << "\n";
  out << "macro," << format_double(r.macro_precision) << ","
      << format_double(r.macro_recall) << "," << format_double(r.macro_f1)
      << ",\n";
  out << "accuracy," << format_double(r.accuracy) << ",,,\n";
  return out.str();
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
  std::ostringstream out;
  out << "actual";
  for (const auto& c : cm.classes()) out << "," << c;
  out << "\n";
  for (int a = 0; a < cm.num_classes(); ++a) {
    out << cm.classes()[a];
    for (int p = 0; p < cm.num_classes(); ++p) out << "," << cm.at(a, p);
    out << "\n";
  }
  return out.str();
}

ConfusionMatrix confusion_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("confusion csv: empty input");
  std::vector<std::string> classes;
  {
    std::istringstream hs(line);
    std::string tok;
    bool first = true;
    while (std::getline(hs, tok, ',')) {
      if (!tok.empty() && tok.back() == '\r') tok.pop_back();
      if (first)
        first = false;
      else
        classes.push_back(tok);
    }
  }
  ConfusionMatrix cm(classes);
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= cm.num_classes()) throw FormatError("confusion csv: too many rows");
    std::istringstream ls(line);
    std::string tok;
    std::getline(ls, tok, ',');  // actual-class column
    int col = 0;
    while (std::getline(ls, tok, ',')) {
      if (col >= cm.num_classes()) throw FormatError("confusion csv: too many columns");
      cm.set(row, col, std::stoull(tok));
      ++col;
    }
    if (col != cm.num_classes()) throw FormatError("confusion csv: short row");
    ++row;
  }
  if (row != cm.num_classes()) throw FormatError("confusion csv: missing rows");
  return cm;
}

}  // namespace leafsight
