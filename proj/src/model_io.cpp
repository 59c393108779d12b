#include "leafsight/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace leafsight {

namespace {

using nlohmann::json;

json vec_to_json(const VecX& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VecX vec_from_json(const json& a) {
  VecX v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Index>(i)) = a[i].get<Scalar>();
  return v;
}

json mat_to_json(const MatX& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i).transpose()));
  return rows;
}

MatX mat_from_json(const json& rows, Index cols_hint = 0) {
  const Index nr = static_cast<Index>(rows.size());
  Index nc = cols_hint;
  if (nr > 0) nc = static_cast<Index>(rows[0].size());
  MatX m(nr, nc);
  for (Index i = 0; i < nr; ++i)
    m.row(i) = vec_from_json(rows[static_cast<std::size_t>(i)]).transpose();
  return m;
}

json kernel_to_json(const KernelSpec& k) {
  json j;
  switch (k.kind) {
    case KernelKind::Linear: j["kind"] = "linear"; break;
    case KernelKind::Polynomial: j["kind"] = "polynomial"; break;
    case KernelKind::Gaussian: j["kind"] = "gaussian"; break;
  }
  j["degree"] = k.degree;
  j["sigma"] = k.sigma;
  return j;
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec k;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") k.kind = KernelKind::Linear;
  else if (kind == "polynomial") k.kind = KernelKind::Polynomial;
  else if (kind == "gaussian") k.kind = KernelKind::Gaussian;
  else throw FormatError("model json: unknown kernel kind '" + kind + "'");
  k.degree = j.at("degree").get<int>();
  k.sigma = j.at("sigma").get<Scalar>();
  return k;
}

json svm_to_json(const BinarySvmModel& m) {
  json j;
  j["kernel"] = kernel_to_json(m.kernel);
  j["C"] = m.c;
  j["support_vectors"] = mat_to_json(m.support_vectors);
  j["dual_coefs"] = vec_to_json(m.dual_coefs);
  j["bias"] = m.bias;
  return j;
}

BinarySvmModel svm_from_json(const json& j, Index width_hint = 0) {
  BinarySvmModel m;
  m.kernel = kernel_from_json(j.at("kernel"));
  m.c = j.at("C").get<Scalar>();
  m.support_vectors = mat_from_json(j.at("support_vectors"), width_hint);
  m.dual_coefs = vec_from_json(j.at("dual_coefs"));
  m.bias = j.at("bias").get<Scalar>();
  return m;
}

}  // namespace

std::string model_to_json(const DiseaseModel& model) {
  json j;
  j["version"] = 1;
  j["kind"] = "ovo_svm";
  j["classes"] = model.ovo.classes;
  // OvO pairs share one kernel spec and C; record them at the top level
  // per the document schema and per pair for reload.
  if (!model.ovo.pairs.empty()) {
    j["kernel"] = kernel_to_json(model.ovo.pairs.front().svm.kernel);
    j["C"] = model.ovo.pairs.front().svm.c;
  }
  json pairs = json::array();
  for (const auto& p : model.ovo.pairs) {
    json pj;
    pj["a"] = p.a;
    pj["b"] = p.b;
    pj["support_vectors"] = mat_to_json(p.svm.support_vectors);
    pj["dual_coefs"] = vec_to_json(p.svm.dual_coefs);
    pj["bias"] = p.svm.bias;
    pj["kernel"] = kernel_to_json(p.svm.kernel);
    pj["C"] = p.svm.c;
    pairs.push_back(pj);
  }
  j["pairs"] = pairs;
  j["standardizer"] = {{"means", vec_to_json(model.standardizer.means)},
                       {"sigmas", vec_to_json(model.standardizer.sigmas)}};
  j["selected_features"] = model.selected_features;

  if (model.gate) {
    const GateModel& g = *model.gate;
    json gj;
    gj["k"] = g.vocabulary.k();
    gj["centroids"] = mat_to_json(g.vocabulary.centroids);
    gj["svm"] = svm_to_json(g.svm);
    gj["detector_params"] = {{"filter_sizes", g.detector.filter_sizes},
                             {"threshold", g.detector.threshold}};
    gj["sample_fraction"] = g.config.sample_fraction;
    gj["strongest_fraction"] = g.config.strongest_fraction;
    j["gate"] = gj;
  }
  return j.dump(2) + "\n";
}

DiseaseModel model_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model json: ") + e.what());
  }
  if (j.at("kind").get<std::string>() != "ovo_svm")
    throw FormatError("model json: unsupported kind");

  DiseaseModel model;
  model.ovo.classes = j.at("classes").get<std::vector<std::string>>();
  model.selected_features =
      j.at("selected_features").get<std::vector<std::string>>();
  model.standardizer.means = vec_from_json(j.at("standardizer").at("means"));
  model.standardizer.sigmas = vec_from_json(j.at("standardizer").at("sigmas"));
  const Index width = model.standardizer.means.size();
  for (const auto& pj : j.at("pairs")) {
    OvoSvmModel::Pair p;
    p.a = pj.at("a").get<int>();
    p.b = pj.at("b").get<int>();
    p.svm = svm_from_json(pj, width);
    model.ovo.pairs.push_back(std::move(p));
  }

  if (j.contains("gate")) {
    const json& gj = j.at("gate");
    GateModel g;
    g.vocabulary.centroids = mat_from_json(gj.at("centroids"), 64);
    g.svm = svm_from_json(gj.at("svm"), g.vocabulary.k());
    g.detector.filter_sizes = gj.at("detector_params").at("filter_sizes").get<std::vector<int>>();
    g.detector.threshold = gj.at("detector_params").at("threshold").get<Scalar>();
    g.config.vocabulary_size = gj.at("k").get<int>();
    g.config.sample_fraction = gj.at("sample_fraction").get<Scalar>();
    g.config.strongest_fraction = gj.at("strongest_fraction").get<Scalar>();
    g.config.detector = g.detector;
    model.gate = std::move(g);
  }
  return model;
}

void write_model_file(const std::string& path, const DiseaseModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << model_to_json(model);
}

DiseaseModel read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace leafsight
