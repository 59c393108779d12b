#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "leafsight/config.hpp"
#include "leafsight/dataset.hpp"
#include "leafsight/manifest.hpp"
#include "support/fixtures.hpp"

using namespace leafsight;
namespace fs = std::filesystem;
namespace lt = leafsight::testing;

namespace {

std::string cli_path() {
  const char* p = std::getenv("LEAFSIGHT_CLI");
  return p ? p : "";
}

int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& name)
      : dir(fs::temp_directory_path() / ("leafsight_test_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string operator/(const std::string& sub) const { return (dir / sub).string(); }
};

}  // namespace

TEST_CASE("ingest maps directories to classes with the healthy naming rule") {
  Sandbox sb("ingest");
  const RgbImage img = lt::disk_image(8, 4, 4, 2, {10, 200, 10}, {120, 120, 120});
  fs::create_directories(sb.dir / "Apple___healthy");
  fs::create_directories(sb.dir / "Apple___Black_rot");
  write_ppm_file(sb / "Apple___healthy/a.ppm", img);
  write_ppm_file(sb / "Apple___Black_rot/b.ppm", img);

  const CorpusManifest m = ingest(sb.dir.string());
  REQUIRE(m.classes.size() == 2);
  CHECK(m.classes[0].label == "Apple___Black_rot");  // lexicographic order
  CHECK(!m.classes[0].healthy);
  CHECK(m.classes[1].healthy);
  CHECK(m.image_count() == 2);

  // identical rerun yields an identical manifest
  const CorpusManifest n = ingest(sb.dir.string());
  CHECK(n.classes.size() == m.classes.size());
  for (std::size_t i = 0; i < m.classes.size(); ++i) {
    CHECK(n.classes[i].label == m.classes[i].label);
    CHECK(n.classes[i].files == m.classes[i].files);
  }
}

TEST_CASE("ingest counts 12 healthy classes in a 38-directory tree") {
  Sandbox sb("ingest38");
  const RgbImage img = lt::disk_image(8, 4, 4, 2, {10, 200, 10}, {120, 120, 120});
  // 26 disease + 12 healthy directories, mirroring the corpus layout
  for (int i = 0; i < 26; ++i) {
    const fs::path d = sb.dir / ("plant" + std::to_string(i) + "___disease");
    fs::create_directories(d);
    write_ppm_file((d / "x.ppm").string(), img);
  }
  for (int i = 0; i < 12; ++i) {
    const fs::path d = sb.dir / ("plant" + std::to_string(i) + "___healthy");
    fs::create_directories(d);
    write_ppm_file((d / "x.ppm").string(), img);
  }
  const CorpusManifest m = ingest(sb.dir.string());
  CHECK(m.classes.size() == 38);
  CHECK(m.healthy_count() == 12);
}

TEST_CASE("ingest skips imageless directories with a warning") {
  Sandbox sb("ingest_empty");
  fs::create_directories(sb.dir / "has_images");
  fs::create_directories(sb.dir / "empty_dir");
  write_ppm_file(sb / "has_images/a.ppm",
                 lt::disk_image(8, 4, 4, 2, {10, 200, 10}, {120, 120, 120}));
  const CorpusManifest m = ingest(sb.dir.string());
  CHECK(m.classes.size() == 1);
  REQUIRE(m.warnings.size() == 1);
  CHECK(m.warnings[0].find("empty_dir") != std::string::npos);

  Sandbox sb2("ingest_none");
  CHECK_THROWS_AS(ingest(sb2.dir.string()), ParamError);
}

TEST_CASE("config files parse, round-trip, and reject unknown keys") {
  PipelineConfig cfg;
  cfg.apply_text("gray_levels = 16\nsvm_kernel = linear\n# comment\n\nrng_seed = 7\n");
  CHECK(cfg.gray_levels == 16);
  CHECK(cfg.svm_kernel == "linear");
  CHECK(cfg.rng_seed == 7);

  PipelineConfig back;
  back.apply_text(cfg.to_text());
  CHECK(back.to_text() == cfg.to_text());

  CHECK_THROWS_AS(cfg.apply_text("no_such_key = 1\n"), FormatError);
  CHECK_THROWS_AS(cfg.apply_text("gray_levels 16\n"), FormatError);
  cfg.gray_levels = 1;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
}

TEST_CASE("feature csv round-trips at full precision") {
  Dataset d = lt::gaussian_blobs(3, 5, 4, 1.0, 1.0, 3);
  d.x(0, 0) = 0.1234567890123456789;
  d.x(1, 1) = 1e-17;
  d.x(2, 2) = -3.0000000000000004;
  const Dataset back = dataset_from_csv(dataset_to_csv(d));
  CHECK(back.x == d.x);  // bitwise round-trip through %.17g
  CHECK(back.labels == d.labels);
  CHECK(back.classes == d.classes);
  CHECK(back.feature_names == d.feature_names);
}

TEST_CASE("cli segment writes leaf and lesion masks for a corpus") {
  REQUIRE(!cli_path().empty());
  Sandbox sb("segment");
  lt::write_leaf_corpus(sb / "corpus", 2, 2, 96, 11);
  const std::string out = sb / "out";
  REQUIRE(run_cli("segment --root " + (sb / "corpus") + " --out " + out) == 0);
  CHECK(fs::exists(fs::path(out) / "d0_img_000.leaf.pbm"));
  CHECK(fs::exists(fs::path(out) / "d0_img_000.lesion.pbm"));
  CHECK(fs::exists(fs::path(out) / "d1_img_001.lesion.pbm"));
  CHECK(fs::exists(fs::path(out) / "run.json"));

  // lesion must nest inside the leaf
  const BinaryMask leaf = read_pbm_file((fs::path(out) / "d0_img_000.leaf.pbm").string());
  const BinaryMask lesion =
      read_pbm_file((fs::path(out) / "d0_img_000.lesion.pbm").string());
  CHECK(lesion.subset_of(leaf));
  CHECK(lesion.count() > 0);
}

TEST_CASE("cli extract emits a loadable 29-column feature table") {
  REQUIRE(!cli_path().empty());
  Sandbox sb("extract");
  lt::write_leaf_corpus(sb / "corpus", 3, 4, 96, 21);
  const std::string out = sb / "out";
  REQUIRE(run_cli("extract --root " + (sb / "corpus") + " --out " + out) == 0);

  const Dataset d = read_dataset_csv((fs::path(out) / "features.csv").string());
  CHECK(d.features() == 28);
  CHECK(d.feature_names == feature_names());
  CHECK(d.rows() == 12);
  CHECK(d.classes.size() == 3);

  // header = 28 feature names + label = 29 columns
  std::istringstream head(slurp(fs::path(out) / "features.csv"));
  std::string header;
  std::getline(head, header);
  CHECK(std::count(header.begin(), header.end(), ',') == 28);
}

TEST_CASE("cli crossval is byte-deterministic given config and seed") {
  REQUIRE(!cli_path().empty());
  Sandbox sb("crossval");
  lt::write_leaf_corpus(sb / "corpus", 3, 20, 96, 31);
  const std::string feat_out = sb / "features";
  REQUIRE(run_cli("extract --root " + (sb / "corpus") + " --out " + feat_out +
                  " --jobs 2") == 0);
  const std::string features = (fs::path(feat_out) / "features.csv").string();

  const std::string args = "crossval --features " + features +
                           " --kernel linear --folds 10 --seed 7 --out ";
  REQUIRE(run_cli(args + (sb / "cv1")) == 0);
  REQUIRE(run_cli(args + (sb / "cv2")) == 0);

  for (const char* name :
       {"cv_summary.csv", "confusion.csv", "fold_00.csv", "fold_09.csv", "run.json"}) {
    INFO("artifact ", name);
    CHECK(slurp(fs::path(sb / "cv1") / name) == slurp(fs::path(sb / "cv2") / name));
  }

  // ten fold reports + summary exist
  for (int f = 0; f < 10; ++f) {
    char n[32];
    std::snprintf(n, sizeof(n), "fold_%02d.csv", f);
    CHECK(fs::exists(fs::path(sb / "cv1") / n));
  }

  // report renders the pooled confusion matrix
  REQUIRE(run_cli("report --confusion " + (sb / "cv1") + "/confusion.csv --out " +
                  (sb / "rep")) == 0);
  CHECK(fs::exists(fs::path(sb / "rep") / "report.txt"));
  CHECK(fs::exists(fs::path(sb / "rep") / "report.csv"));
}

TEST_CASE("cli two-stage predict short-circuits healthy images") {
  REQUIRE(!cli_path().empty());
  Sandbox sb("predict");

  // corpus with one healthy family and two disease classes
  lt::write_gate_corpus(sb / "corpus", 12, 96, 41);
  fs::remove_all(fs::path(sb / "corpus") / "sweet_blight");
  lt::write_leaf_corpus(sb / "corpus", 2, 12, 96, 43);

  {
    std::ofstream cfg(sb / "gate.cfg");
    // small fixture corpus: small codebook, stiffer regularization
    cfg << "bovw_k = 20\nsvm_c = 10\n";
  }
  REQUIRE(run_cli("train-gate --root " + (sb / "corpus") + " --out " + (sb / "gate") +
                  " --config " + (sb / "gate.cfg") + " --seed 3") == 0);
  REQUIRE(run_cli("extract --root " + (sb / "corpus") + " --out " + (sb / "feat")) == 0);
  REQUIRE(run_cli("train-disease --features " + (sb / "feat") + "/features.csv" +
                  " --gate " + (sb / "gate") + "/gate.json --kernel cubic --out " +
                  (sb / "model")) == 0);

  // healthy-family image: gate short-circuits, no stage-2 artifacts
  const std::string healthy_img =
      (fs::path(sb / "corpus") / "sweet_healthy" / "img_003.ppm").string();
  REQUIRE(run_cli("predict --model " + (sb / "model") + "/model.json --image " +
                  healthy_img + " --out " + (sb / "p1")) == 0);
  CHECK(slurp(fs::path(sb / "p1") / "img_003.prediction.txt").find("label healthy") !=
        std::string::npos);
  CHECK(!fs::exists(fs::path(sb / "p1") / "img_003.lesion.pbm"));

  // diseased image: stage 2 labels it with one of the disease classes
  const std::string diseased_img =
      (fs::path(sb / "corpus") / "d1" / "img_002.ppm").string();
  REQUIRE(run_cli("predict --model " + (sb / "model") + "/model.json --image " +
                  diseased_img + " --out " + (sb / "p2")) == 0);
  const std::string pred = slurp(fs::path(sb / "p2") / "img_002.prediction.txt");
  const bool labeled_d0 = pred.find("label d0") != std::string::npos;
  const bool labeled_d1 = pred.find("label d1") != std::string::npos;
  CHECK((labeled_d0 || labeled_d1));
  CHECK(fs::exists(fs::path(sb / "p2") / "img_002.lesion.pbm"));
}

TEST_CASE("cli select writes weights, trace, and the chosen subset") {
  REQUIRE(!cli_path().empty());
  Sandbox sb("select");
  lt::write_leaf_corpus(sb / "corpus", 3, 8, 96, 51);
  REQUIRE(run_cli("extract --root " + (sb / "corpus") + " --out " + (sb / "feat")) == 0);
  {
    std::ofstream cfg(sb / "select.cfg");
    cfg << "relieff_k = 3\nffs_kernel = linear\nffs_folds = 3\n";
  }
  REQUIRE(run_cli("select --features " + (sb / "feat") + "/features.csv" +
                  " --seed 5 --out " + (sb / "sel") + " --config " +
                  (sb / "select.cfg")) == 0);

  const std::string weights = slurp(fs::path(sb / "sel") / "relieff_weights.csv");
  CHECK(weights.rfind("feature,weight,rank\n", 0) == 0);
  CHECK(std::count(weights.begin(), weights.end(), '\n') == 29);  // header + 28

  const std::string trace = slurp(fs::path(sb / "sel") / "ffs_trace.csv");
  CHECK(trace.rfind("step,feature,cv_accuracy\n", 0) == 0);
  CHECK(fs::exists(fs::path(sb / "sel") / "selected_features.txt"));
}

TEST_CASE("cli errors name the producing subcommand for missing artifacts") {
  REQUIRE(!cli_path().empty());
  Sandbox sb("missing");
  const std::string cmd = cli_path() + " crossval --features " + (sb / "nope.csv") +
                          " --out " + (sb / "out") + " 2>" + (sb / "err.txt");
  CHECK(std::system(cmd.c_str()) != 0);
  CHECK(slurp(fs::path(sb / "err.txt")).find("extract") != std::string::npos);
}
