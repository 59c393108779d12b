#ifndef LEAFSIGHT_MANIFEST_HPP
#define LEAFSIGHT_MANIFEST_HPP

#include <string>
#include <vector>

#include "leafsight/core.hpp"

namespace leafsight {

// Class-per-directory corpus layout. A class is healthy when its directory
// name contains "healthy" (case-insensitive). Classes and files are listed
// lexicographically, so a manifest is a pure function of the tree.
struct CorpusManifest {
  struct ClassEntry {
    std::string directory;
    std::string label;  // = directory name
    bool healthy = false;
    std::vector<std::string> files;  // paths relative to root
  };

  std::string root;
  std::vector<ClassEntry> classes;
  std::vector<std::string> warnings;  // skipped imageless directories

  int healthy_count() const {
    int n = 0;
    for (const auto& c : classes) n += c.healthy ? 1 : 0;
    return n;
  }
  std::size_t image_count() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.files.size();
    return n;
  }
};

// Scans root's immediate subdirectories for .ppm images. Directories with
// no readable images are skipped with a recorded warning; an empty root is
// an error.
CorpusManifest ingest(const std::string& root);

}  // namespace leafsight

#endif
