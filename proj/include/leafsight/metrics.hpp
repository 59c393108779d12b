#ifndef LEAFSIGHT_METRICS_HPP
#define LEAFSIGHT_METRICS_HPP

#include <string>
#include <vector>

#include "leafsight/core.hpp"

namespace leafsight {

// N x N counts with rows = actual class and columns = predicted class.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> classes);

  void accumulate(const std::string& actual, const std::string& predicted);
  void accumulate(int actual, int predicted);

  // Cell-wise sum; class lists must match.
  void merge(const ConfusionMatrix& other);

  std::uint64_t total() const;
  std::uint64_t at(int actual, int predicted) const { return counts_(actual, predicted); }
  void set(int actual, int predicted, std::uint64_t count);
  const std::vector<std::string>& classes() const { return classes_; }
  int num_classes() const { return static_cast<int>(classes_.size()); }

 private:
  std::vector<std::string> classes_;
  Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> counts_;
};

struct ClassMetrics {
  std::string name;
  Scalar precision = 0;
  Scalar recall = 0;
  Scalar f1 = 0;
  std::uint64_t support = 0;
};

// One-vs-rest precision/recall/F1 per class (0/0 conventions map to 0),
// overall accuracy, and unweighted macro averages.
struct MetricReport {
  std::vector<ClassMetrics> per_class;
  Scalar accuracy = 0;
  Scalar macro_precision = 0;
  Scalar macro_recall = 0;
  Scalar macro_f1 = 0;
};

MetricReport report(const ConfusionMatrix& cm);

std::string render_report_text(const MetricReport& r);
std::string render_report_csv(const MetricReport& r);
std::string confusion_to_csv(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_csv(const std::string& csv);

}  // namespace leafsight

#endif
