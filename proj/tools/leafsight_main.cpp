// leafsight: two-stage leaf-disease identification pipeline CLI.
//
// Subcommands wire the library end to end: segment, extract, select,
// train-gate, train-disease, crossval, predict, report. Every run writes
// a reproducibility record (run.json) with the config snapshot, seed and
// FNV-1a hashes of the artifacts it produced.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "leafsight/config.hpp"
#include "leafsight/crossval.hpp"
#include "leafsight/dataset.hpp"
#include "leafsight/forward_select.hpp"
#include "leafsight/imaging.hpp"
#include "leafsight/manifest.hpp"
#include "leafsight/model_io.hpp"
#include "leafsight/parallel.hpp"
#include "leafsight/relieff.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace leafsight;

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Tracks artifacts and emits run.json; content-determined, no timestamps.
class RunRecord {
 public:
  RunRecord(std::string subcommand, const PipelineConfig& cfg, std::string out_dir)
      : subcommand_(std::move(subcommand)), out_dir_(std::move(out_dir)) {
    record_["subcommand"] = subcommand_;
    record_["seed"] = cfg.rng_seed;
    record_["config"] = cfg.to_text();
    record_["artifacts"] = json::array();
    record_["warnings"] = json::array();
    fs::create_directories(out_dir_);
  }

  std::string path(const std::string& name) const {
    return (fs::path(out_dir_) / name).string();
  }

  void emit(const std::string& name, const std::string& bytes) {
    write_file(path(name), bytes);
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    record_["artifacts"].push_back({{"path", name}, {"fnv1a64", hex}});
  }

  void warn(const std::string& message) {
    record_["warnings"].push_back(message);
    std::cerr << "warning: " << message << "\n";
  }

  void finish() { write_file(path("run.json"), record_.dump(2) + "\n"); }

 private:
  std::string subcommand_;
  std::string out_dir_;
  json record_;
};

struct SegmentResult {
  BinaryMask leaf;
  BinaryMask lesion;
};

SegmentResult segment_image(const RgbImage& img, const PipelineConfig& cfg) {
  SegmentResult r;
  r.leaf = leaf_mask(img, cfg.segmentation_params());
  r.lesion = diseased_region_mask(to_grayscale(img), r.leaf, cfg.polarity());
  return r;
}

std::string stem_of(const std::string& rel_path) {
  std::string s = fs::path(rel_path).stem().string();
  const std::string dir = fs::path(rel_path).parent_path().string();
  return dir.empty() ? s : dir + "_" + s;
}

SmoParams smo_params(const PipelineConfig& cfg) {
  SmoParams p;
  p.c = cfg.svm_c;
  p.tol = cfg.svm_tol;
  p.max_passes = cfg.svm_max_passes;
  p.rng_seed = cfg.rng_seed;
  return p;
}

KernelSpec kernel_spec(const PipelineConfig& cfg, const std::string& name) {
  KernelSpec spec = kernel_from_name(name);
  if (spec.kind == KernelKind::Gaussian)
    spec.sigma = cfg.gaussian_sigma;  // <= 0 resolves to the median heuristic
  return spec;
}

// ---- subcommands ---------------------------------------------------------

int cmd_segment(const PipelineConfig& cfg, const std::string& root,
                const std::string& single_image, const std::string& out_dir) {
  RunRecord run("segment", cfg, out_dir);

  std::vector<std::string> rel_paths;
  std::string base;
  if (!single_image.empty()) {
    rel_paths.push_back(fs::path(single_image).filename().string());
    base = fs::path(single_image).parent_path().string();
    if (base.empty()) base = ".";
  } else {
    const CorpusManifest manifest = ingest(root);
    for (const auto& w : manifest.warnings) run.warn(w);
    for (const auto& cls : manifest.classes)
      rel_paths.insert(rel_paths.end(), cls.files.begin(), cls.files.end());
    base = root;
  }

  std::vector<std::optional<SegmentResult>> results(rel_paths.size());
  std::vector<std::string> errors(rel_paths.size());
  parallel_for(rel_paths.size(), cfg.jobs, [&](std::size_t i) {
    try {
      const RgbImage img = read_ppm_file((fs::path(base) / rel_paths[i]).string());
      results[i] = segment_image(img, cfg);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < rel_paths.size(); ++i) {
    if (!results[i]) {
      if (!single_image.empty()) throw Error(rel_paths[i] + ": " + errors[i]);
      run.warn(rel_paths[i] + ": " + errors[i] + " (skipped)");
      continue;
    }
    const std::string stem = stem_of(rel_paths[i]);
    run.emit(stem + ".leaf.pbm", encode_pbm(results[i]->leaf));
    run.emit(stem + ".lesion.pbm", encode_pbm(results[i]->lesion));
  }
  run.finish();
  return 0;
}

int cmd_extract(const PipelineConfig& cfg, const std::string& root,
                const std::string& out_dir, bool include_healthy) {
  RunRecord run("extract", cfg, out_dir);
  const CorpusManifest manifest = ingest(root);
  for (const auto& w : manifest.warnings) run.warn(w);

  struct Item {
    std::string rel;
    std::string label;
  };
  std::vector<Item> items;
  std::vector<std::string> class_order;
  for (const auto& cls : manifest.classes) {
    if (cls.healthy && !include_healthy) {
      run.warn("class '" + cls.label + "' is healthy, excluded from stage-2 features");
      continue;
    }
    class_order.push_back(cls.label);
    for (const auto& f : cls.files) items.push_back({f, cls.label});
  }
  if (items.empty()) throw ParamError("extract: no diseased-class images in corpus");

  const FeatureConfig fcfg = cfg.feature_config();
  std::vector<std::optional<FeatureVector>> rows(items.size());
  std::vector<std::string> errors(items.size());
  parallel_for(items.size(), cfg.jobs, [&](std::size_t i) {
    try {
      const RgbImage img = read_ppm_file((fs::path(root) / items[i].rel).string());
      const SegmentResult seg = segment_image(img, cfg);
      rows[i] = extract_feature_vector(img, seg.leaf, seg.lesion, fcfg);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  Dataset data;
  data.feature_names = feature_names();
  data.classes = class_order;
  std::vector<VecX> kept;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!rows[i]) {
      run.warn(items[i].rel + ": " + errors[i] + " (skipped)");
      continue;
    }
    kept.push_back(rows[i]->values);
    const auto it = std::find(class_order.begin(), class_order.end(), items[i].label);
    data.labels.push_back(static_cast<int>(it - class_order.begin()));
  }
  if (kept.empty()) throw Error("extract: every image failed segmentation");
  data.x.resize(static_cast<Index>(kept.size()), static_cast<Index>(feature_names().size()));
  for (std::size_t i = 0; i < kept.size(); ++i)
    data.x.row(static_cast<Index>(i)) = kept[i].transpose();

  // A class may have lost all rows to segmentation failures.
  std::vector<Index> counts(data.classes.size(), 0);
  for (int l : data.labels) ++counts[l];
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == 0)
      throw Error("extract: class '" + data.classes[c] + "' has no surviving rows");

  run.emit("features.csv", dataset_to_csv(data));
  run.finish();
  return 0;
}

int cmd_select(const PipelineConfig& cfg, const std::string& features_path,
               const std::string& out_dir) {
  RunRecord run("select", cfg, out_dir);
  if (!fs::exists(features_path))
    throw Error("select: features csv not found: " + features_path +
                " (produce it with the `extract` subcommand)");
  const Dataset data = dataset_from_csv(read_file(features_path));

  const ReliefFWeights weights =
      relieff_rank(data, cfg.relieff_k, cfg.relieff_m, cfg.rng_seed);
  {
    std::ostringstream csv;
    csv << "feature,weight,rank\n";
    for (std::size_t r = 0; r < weights.rank.size(); ++r) {
      const Index j = weights.rank[r];
      csv << data.feature_names[j] << "," << format_double(weights.weights(j))
          << "," << (r + 1) << "\n";
    }
    run.emit("relieff_weights.csv", csv.str());
  }

  const KernelSpec ffs_kernel = kernel_spec(cfg, cfg.ffs_kernel);
  const SelectionTrace trace = forward_select(
      data, make_ovo_svm_evaluator(ffs_kernel, smo_params(cfg)), cfg.ffs_folds,
      cfg.rng_seed, cfg.ffs_epsilon);
  {
    std::ostringstream csv;
    csv << "step,feature,cv_accuracy\n";
    for (std::size_t s = 0; s < trace.steps.size(); ++s)
      csv << (s + 1) << "," << trace.steps[s].feature << ","
          << format_double(trace.steps[s].cv_accuracy) << "\n";
    run.emit("ffs_trace.csv", csv.str());
  }
  {
    std::ostringstream txt;
    for (const auto& s : trace.steps) txt << s.feature << "\n";
    run.emit("selected_features.txt", txt.str());
  }
  run.finish();
  return 0;
}

std::vector<GrayImage> load_gate_images(const CorpusManifest& manifest,
                                        const PipelineConfig& cfg,
                                        std::vector<bool>& healthy,
                                        std::vector<std::string>& rels,
                                        RunRecord& run) {
  struct Item {
    std::string rel;
    bool healthy;
  };
  std::vector<Item> items;
  for (const auto& cls : manifest.classes)
    for (const auto& f : cls.files) items.push_back({f, cls.healthy});

  std::vector<std::optional<GrayImage>> grays(items.size());
  std::vector<std::string> errors(items.size());
  parallel_for(items.size(), cfg.jobs, [&](std::size_t i) {
    try {
      const RgbImage img =
          read_ppm_file((fs::path(manifest.root) / items[i].rel).string());
      // Background-removed grayscale feeds the detector.
      const BinaryMask leaf = leaf_mask(img, cfg.segmentation_params());
      grays[i] = to_grayscale(apply_mask(img, leaf));
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  std::vector<GrayImage> images;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!grays[i]) {
      run.warn(items[i].rel + ": " + errors[i] + " (skipped)");
      continue;
    }
    images.push_back(std::move(*grays[i]));
    healthy.push_back(items[i].healthy);
    rels.push_back(items[i].rel);
  }
  return images;
}

int cmd_train_gate(const PipelineConfig& cfg, const std::string& root,
                   const std::string& out_dir) {
  RunRecord run("train-gate", cfg, out_dir);
  const CorpusManifest manifest = ingest(root);
  for (const auto& w : manifest.warnings) run.warn(w);

  std::vector<bool> healthy;
  std::vector<std::string> rels;
  const std::vector<GrayImage> images =
      load_gate_images(manifest, cfg, healthy, rels, run);

  GateConfig gcfg;
  gcfg.vocabulary_size = cfg.bovw_k;
  gcfg.detector.threshold = cfg.bovw_detector_threshold;
  gcfg.sample_fraction = cfg.bovw_sample_fraction;
  gcfg.strongest_fraction = cfg.bovw_strongest_fraction;
  gcfg.svm_c = cfg.svm_c;
  gcfg.svm_tol = cfg.svm_tol;
  gcfg.rng_seed = cfg.rng_seed;
  const GateModel gate = train_health_gate(images, healthy, gcfg);

  // Training-set confusion of the gate, for quick inspection.
  ConfusionMatrix cm({"healthy", "diseased"});
  for (std::size_t i = 0; i < images.size(); ++i) {
    const GateDecision d = classify_health(gate, images[i]);
    cm.accumulate(healthy[i] ? 0 : 1, d.healthy ? 0 : 1);
  }
  run.emit("gate_train_report.csv", render_report_csv(report(cm)));

  DiseaseModel doc;
  doc.gate = gate;
  run.emit("gate.json", model_to_json(doc));
  run.finish();
  return 0;
}

int cmd_train_disease(const PipelineConfig& cfg, const std::string& features_path,
                      const std::string& selected_path, const std::string& gate_path,
                      const std::string& out_dir) {
  RunRecord run("train-disease", cfg, out_dir);
  if (!fs::exists(features_path))
    throw Error("train-disease: features csv not found: " + features_path +
                " (produce it with the `extract` subcommand)");
  Dataset data = dataset_from_csv(read_file(features_path));

  std::vector<std::string> selected = data.feature_names;
  if (!selected_path.empty()) {
    selected.clear();
    std::istringstream in(read_file(selected_path));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) selected.push_back(line);
    }
    if (selected.empty())
      throw Error("train-disease: no features listed in " + selected_path);
  }
  std::vector<Index> cols;
  for (const auto& name : selected) {
    const auto it = std::find(data.feature_names.begin(), data.feature_names.end(), name);
    if (it == data.feature_names.end())
      throw ParamError("train-disease: unknown feature '" + name + "'");
    cols.push_back(it - data.feature_names.begin());
  }
  const Dataset subset = data.select_columns(cols);

  DiseaseModel model;
  model.selected_features = selected;
  model.standardizer = fit_standardizer(subset);
  const Dataset scaled = apply_standardizer(subset, model.standardizer);
  KernelSpec spec = kernel_spec(cfg, cfg.svm_kernel);
  if (spec.kind == KernelKind::Gaussian && spec.sigma <= 0)
    spec.sigma = median_pairwise_distance(scaled.x, 500, cfg.rng_seed);
  model.ovo = ovo_train(scaled, spec, smo_params(cfg));

  if (!gate_path.empty()) {
    const DiseaseModel gate_doc = read_model_file(gate_path);
    if (!gate_doc.gate)
      throw Error("train-disease: " + gate_path +
                  " has no gate (produce it with the `train-gate` subcommand)");
    model.gate = gate_doc.gate;
  }

  run.emit("model.json", model_to_json(model));
  run.finish();
  return 0;
}

int cmd_crossval(const PipelineConfig& cfg, const std::string& features_path,
                 const std::string& out_dir) {
  RunRecord run("crossval", cfg, out_dir);
  if (!fs::exists(features_path))
    throw Error("crossval: features csv not found: " + features_path +
                " (produce it with the `extract` subcommand)");
  const Dataset data = dataset_from_csv(read_file(features_path));

  const FoldPlan plan = stratified_folds(data, cfg.cv_folds, cfg.rng_seed);
  for (const auto& w : plan.warnings) run.warn(w);
  const KernelSpec spec = kernel_spec(cfg, cfg.svm_kernel);
  const CvResult result =
      cross_validate(data, plan, make_ovo_svm_fit(spec, smo_params(cfg)));

  for (int f = 0; f < plan.k; ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "fold_%02d.csv", f);
    run.emit(name, render_report_csv(report(result.fold_matrices[f])));
  }
  {
    std::ostringstream csv;
    csv << "metric,mean,stddev\n";
    csv << "accuracy," << format_double(result.mean_accuracy) << ","
        << format_double(result.stddev_accuracy) << "\n";
    csv << "macro_precision," << format_double(result.mean_macro_precision)
        << "," << format_double(result.stddev_macro_precision) << "\n";
    csv << "macro_recall," << format_double(result.mean_macro_recall) << ","
        << format_double(result.stddev_macro_recall) << "\n";
    csv << "macro_f1," << format_double(result.mean_macro_f1) << ","
        << format_double(result.stddev_macro_f1) << "\n";
    run.emit("cv_summary.csv", csv.str());
  }
  run.emit("confusion.csv", confusion_to_csv(result.pooled));
  run.finish();

  std::cout << "accuracy " << format_double(result.mean_accuracy) << " +- "
            << format_double(result.stddev_accuracy) << " over " << plan.k
            << " folds\n";
  return 0;
}

int cmd_predict(const PipelineConfig& cfg, const std::string& model_path,
                const std::string& image_path, const std::string& out_dir) {
  RunRecord run("predict", cfg, out_dir);
  if (!fs::exists(model_path))
    throw Error("predict: model not found: " + model_path +
                " (produce it with the `train-disease` subcommand)");
  const DiseaseModel model = read_model_file(model_path);
  if (!model.gate)
    throw Error("predict: model has no stage-1 gate (train it with the "
                "`train-gate` subcommand and pass --gate to `train-disease`)");

  const RgbImage img = read_ppm_file(image_path);
  const std::string stem = fs::path(image_path).stem().string();

  // Stage 1 runs on the background-removed grayscale.
  const BinaryMask leaf = leaf_mask(img, cfg.segmentation_params());
  const GateDecision gate = classify_health(*model.gate, to_grayscale(apply_mask(img, leaf)));

  std::ostringstream txt;
  if (gate.healthy) {
    txt << "label healthy\n";
    txt << "gate_score " << format_double(gate.score) << "\n";
    run.emit(stem + ".prediction.txt", txt.str());
    run.finish();
    std::cout << "healthy\n";
    return 0;
  }

  if (model.ovo.pairs.empty())
    throw Error("predict: model has no disease classifier (produce it with "
                "the `train-disease` subcommand)");

  const BinaryMask lesion = diseased_region_mask(to_grayscale(img), leaf, cfg.polarity());
  const FeatureVector fv = extract_feature_vector(img, leaf, lesion, cfg.feature_config());

  std::vector<Index> cols;
  for (const auto& name : model.selected_features) {
    const auto& all = feature_names();
    const auto it = std::find(all.begin(), all.end(), name);
    if (it == all.end()) throw Error("predict: model selects unknown feature '" + name + "'");
    cols.push_back(it - all.begin());
  }
  VecX x(static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) x(static_cast<Index>(j)) = fv.values(cols[j]);
  const OvoPrediction pred =
      ovo_predict(model.ovo, apply_standardizer(x, model.standardizer));
  const std::string label = model.ovo.classes[pred.label];

  run.emit(stem + ".leaf.pbm", encode_pbm(leaf));
  run.emit(stem + ".lesion.pbm", encode_pbm(lesion));
  txt << "label " << label << "\n";
  txt << "gate_score " << format_double(gate.score) << "\n";
  if (gate.low_confidence) txt << "gate_low_confidence true\n";
  txt << "votes";
  for (int v : pred.votes) txt << " " << v;
  txt << "\n";
  run.emit(stem + ".prediction.txt", txt.str());
  run.finish();
  std::cout << label << "\n";
  return 0;
}

int cmd_report(const PipelineConfig& cfg, const std::string& confusion_path,
               const std::string& out_dir) {
  RunRecord run("report", cfg, out_dir);
  if (!fs::exists(confusion_path))
    throw Error("report: confusion csv not found: " + confusion_path +
                " (produce it with the `crossval` subcommand)");
  const ConfusionMatrix cm = confusion_from_csv(read_file(confusion_path));
  const MetricReport rep = report(cm);
  run.emit("report.txt", render_report_text(rep));
  run.emit("report.csv", render_report_csv(rep));
  run.finish();
  std::cout << render_report_text(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leafsight: leaf-disease identification via color and texture features"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string config_file, root, out_dir = "out", image, features, model_path;
  std::string selected_path, gate_path, confusion_path;
  bool include_healthy = false;

  // Flags shared across subcommands; CLI values override the config file.
  std::map<std::string, std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "flat key = value config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { overrides["rng_seed"] = std::to_string(v); },
        "rng seed");
    sub->add_option_function<int>(
        "--jobs", [&](int v) { overrides["jobs"] = std::to_string(v); },
        "worker threads for per-image stages");
    sub->add_option_function<std::string>(
        "--kernel",
        [&](const std::string& v) { overrides["svm_kernel"] = v; },
        "linear|quadratic|cubic|gaussian");
    sub->add_option_function<int>(
        "--folds", [&](int v) { overrides["cv_folds"] = std::to_string(v); },
        "cross-validation folds");
    sub->add_option_function<std::string>(
        "--lesion",
        [&](const std::string& v) { overrides["lesion_polarity"] = v; },
        "lesion polarity: dark|bright");
  };

  CLI::App* seg = app.add_subcommand("segment", "write leaf and lesion masks");
  seg->add_option("--root", root, "corpus root (class-per-directory)");
  seg->add_option("--image", image, "single image instead of a corpus");
  add_common(seg);

  CLI::App* ext = app.add_subcommand("extract", "segment and extract the feature table");
  ext->add_option("--root", root, "corpus root")->required();
  ext->add_flag("--include-healthy", include_healthy,
                "also extract features for healthy classes");
  add_common(ext);

  CLI::App* sel = app.add_subcommand("select", "rank features and run forward selection");
  sel->add_option("--features", features, "features csv from `extract`")->required();
  add_common(sel);

  CLI::App* tg = app.add_subcommand("train-gate", "train the healthy/diseased gate");
  tg->add_option("--root", root, "corpus root")->required();
  add_common(tg);

  CLI::App* td = app.add_subcommand("train-disease", "train the one-vs-one disease SVM");
  td->add_option("--features", features, "features csv from `extract`")->required();
  td->add_option("--selected", selected_path, "feature subset file from `select`");
  td->add_option("--gate", gate_path, "gate.json from `train-gate` to embed");
  add_common(td);

  CLI::App* cv = app.add_subcommand("crossval", "stratified k-fold evaluation");
  cv->add_option("--features", features, "features csv from `extract`")->required();
  add_common(cv);

  CLI::App* pr = app.add_subcommand("predict", "two-stage prediction for one image");
  pr->add_option("--model", model_path, "model.json from `train-disease`")->required();
  pr->add_option("--image", image, "input image (PPM)")->required();
  add_common(pr);

  CLI::App* rp = app.add_subcommand("report", "render metrics from a confusion csv");
  rp->add_option("--confusion", confusion_path, "confusion csv from `crossval`")->required();
  add_common(rp);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_file.empty()) cfg.apply_text(read_file(config_file));
    for (const auto& [key, value] : overrides)
      if (!cfg.set(key, value)) throw ParamError("unknown config key " + key);
    cfg.validate();

    if (seg->parsed()) {
      if (root.empty() == image.empty())
        throw ParamError("segment: pass exactly one of --root or --image");
      return cmd_segment(cfg, root, image, out_dir);
    }
    if (ext->parsed()) return cmd_extract(cfg, root, out_dir, include_healthy);
    if (sel->parsed()) return cmd_select(cfg, features, out_dir);
    if (tg->parsed()) return cmd_train_gate(cfg, root, out_dir);
    if (td->parsed())
      return cmd_train_disease(cfg, features, selected_path, gate_path, out_dir);
    if (cv->parsed()) return cmd_crossval(cfg, features, out_dir);
    if (pr->parsed()) return cmd_predict(cfg, model_path, image, out_dir);
    if (rp->parsed()) return cmd_report(cfg, confusion_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
