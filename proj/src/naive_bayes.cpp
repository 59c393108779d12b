#include "leafsight/naive_bayes.hpp"

#include <cmath>

namespace leafsight {

GnbModel gnb_train(const Dataset& data) {
  data.validate();
  const int nc = data.num_classes();
  const Index nf = data.features();
  const std::vector<Index> counts = data.class_counts();
  for (int c = 0; c < nc; ++c)
    if (counts[c] < 2)
      throw ParamError("gnb_train: class '" + data.classes[c] +
                       "' needs at least 2 rows");

  GnbModel model;
  model.classes = data.classes;
  model.priors.resize(nc);
  model.means = MatX::Zero(nc, nf);
  model.vars = MatX::Zero(nc, nf);

  for (Index i = 0; i < data.rows(); ++i)
    model.means.row(data.labels[i]) += data.x.row(i);
  for (int c = 0; c < nc; ++c) {
    model.priors(c) = static_cast<Scalar>(counts[c]) / static_cast<Scalar>(data.rows());
    model.means.row(c) /= static_cast<Scalar>(counts[c]);
  }
  for (Index i = 0; i < data.rows(); ++i) {
    const int c = data.labels[i];
    model.vars.row(c) +=
        (data.x.row(i) - model.means.row(c)).array().square().matrix();
  }

  const VecX global_mean = data.x.colwise().mean();
  for (int c = 0; c < nc; ++c) {
    for (Index j = 0; j < nf; ++j) {
      const Scalar global_var =
          (data.x.col(j).array() - global_mean(j)).square().mean();
      const Scalar floor = 1e-9 * (global_var + 1);
      model.vars(c, j) = std::max(model.vars(c, j) / counts[c], floor);
    }
  }
  return model;
}

GnbPrediction gnb_predict(const GnbModel& model, const VecX& x) {
  if (x.size() != model.means.cols())
    throw ParamError("gnb_predict: width mismatch");
  const int nc = static_cast<int>(model.classes.size());
  VecX log_post(nc);
  for (int c = 0; c < nc; ++c) {
    Scalar lp = std::log(model.priors(c));
    for (Index j = 0; j < x.size(); ++j) {
      const Scalar var = model.vars(c, j);
      const Scalar d = x(j) - model.means(c, j);
      lp += -Scalar(0.5) * std::log(2 * M_PI * var) - d * d / (2 * var);
    }
    log_post(c) = lp;
  }
  const Scalar mx = log_post.maxCoeff();
  VecX post = (log_post.array() - mx).exp();
  post /= post.sum();

  GnbPrediction pred;
  pred.posterior = post;
  Index best = 0;
  post.maxCoeff(&best);
  pred.label = static_cast<int>(best);
  return pred;
}

}  // namespace leafsight
