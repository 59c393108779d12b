#include "leafsight/ovo.hpp"

#include <cmath>

namespace leafsight {

OvoSvmModel ovo_train(const Dataset& data, const KernelSpec& spec,
                      const SmoParams& params) {
  data.validate();
  const int n = data.num_classes();
  if (n < 2) throw ParamError("ovo_train: need at least two classes");

  OvoSvmModel model;
  model.classes = data.classes;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      std::vector<Index> rows;
      for (Index i = 0; i < data.rows(); ++i)
        if (data.labels[i] == a || data.labels[i] == b) rows.push_back(i);
      MatX x(static_cast<Index>(rows.size()), data.features());
      VecX y(static_cast<Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        x.row(static_cast<Index>(i)) = data.x.row(rows[i]);
        y(static_cast<Index>(i)) = data.labels[rows[i]] == a ? 1 : -1;
      }
      try {
        model.pairs.push_back({a, b, smo_train(x, y, spec, params)});
      } catch (const Error& e) {
        throw Error("ovo_train: pair (" + data.classes[a] + ", " +
                    data.classes[b] + "): " + e.what());
      }
    }
  }
  return model;
}

OvoPrediction ovo_predict(const OvoSvmModel& model, const VecX& x) {
  const int n = model.num_classes();
  OvoPrediction pred;
  pred.votes.assign(n, 0);
  pred.score_sum.assign(n, 0);
  for (const auto& pair : model.pairs) {
    const Scalar f = svm_decision(pair.svm, x);
    const int winner = f >= 0 ? pair.a : pair.b;
    ++pred.votes[winner];
    pred.score_sum[winner] += std::abs(f);
  }
  int best = 0;
  for (int c = 1; c < n; ++c) {
    if (pred.votes[c] > pred.votes[best] ||
        (pred.votes[c] == pred.votes[best] &&
         pred.score_sum[c] > pred.score_sum[best]))
      best = c;
  }
  pred.label = best;
  return pred;
}

}  // namespace leafsight
