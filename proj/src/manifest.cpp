#include "leafsight/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

namespace leafsight {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

CorpusManifest ingest(const std::string& root) {
  if (!fs::is_directory(root)) throw ParamError("ingest: not a directory: " + root);

  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) dirs.push_back(entry.path().filename().string());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw ParamError("ingest: no class directories under " + root);

  CorpusManifest manifest;
  manifest.root = root;
  for (const auto& dir : dirs) {
    CorpusManifest::ClassEntry cls;
    cls.directory = dir;
    cls.label = dir;
    cls.healthy = lower(dir).find("healthy") != std::string::npos;
    for (const auto& entry : fs::directory_iterator(fs::path(root) / dir)) {
      if (!entry.is_regular_file()) continue;
      if (lower(entry.path().extension().string()) != ".ppm") continue;
      cls.files.push_back(dir + "/" + entry.path().filename().string());
    }
    std::sort(cls.files.begin(), cls.files.end());
    if (cls.files.empty())
      manifest.warnings.push_back("directory '" + dir + "' has no readable images, skipped");
    else
      manifest.classes.push_back(std::move(cls));
  }
  if (manifest.classes.empty())
    throw ParamError("ingest: no class directory under " + root + " contains images");
  return manifest;
}

}  // namespace leafsight
