#ifndef LEAFSIGHT_MODEL_IO_HPP
#define LEAFSIGHT_MODEL_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "leafsight/bovw.hpp"
#include "leafsight/ovo.hpp"
#include "leafsight/standardize.hpp"

namespace leafsight {

// Everything `predict` needs, reloadable bit-identically from JSON.
struct DiseaseModel {
  OvoSvmModel ovo;
  StandardizationParams standardizer;             // over the selected features
  std::vector<std::string> selected_features;
  std::optional<GateModel> gate;
};

std::string model_to_json(const DiseaseModel& model);
DiseaseModel model_from_json(const std::string& json_text);

void write_model_file(const std::string& path, const DiseaseModel& model);
DiseaseModel read_model_file(const std::string& path);

}  // namespace leafsight

#endif
