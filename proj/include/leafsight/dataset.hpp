#ifndef LEAFSIGHT_DATASET_HPP
#define LEAFSIGHT_DATASET_HPP

#include <string>
#include <vector>

#include "leafsight/core.hpp"

namespace leafsight {

// Feature table: one row per sample, labels as indices into `classes`.
struct Dataset {
  MatX x;                                  // rows x features
  std::vector<int> labels;                 // per-row class index
  std::vector<std::string> feature_names;  // one per column
  std::vector<std::string> classes;        // ordered distinct labels

  Index rows() const { return x.rows(); }
  Index features() const { return x.cols(); }
  int num_classes() const { return static_cast<int>(classes.size()); }

  // Checks the shape/label invariants; throws ParamError on violation.
  void validate() const;

  // Rows restricted to `row_idx` (all rows when empty is not intended;
  // pass the full index list).
  Dataset select_rows(const std::vector<Index>& row_idx) const;

  // Columns restricted to `col_idx`, preserving labels and classes.
  Dataset select_columns(const std::vector<Index>& col_idx) const;

  std::vector<Index> class_counts() const;
};

// Feature CSV: header of feature names plus a final `label` column, one
// row per sample, values at full decimal precision.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& csv);
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Shortest decimal form that round-trips a double (%.17g with trailing
// precision as needed); used for every numeric artifact the project emits.
std::string format_double(Scalar v);

}  // namespace leafsight

#endif
