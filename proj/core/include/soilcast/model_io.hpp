#pragma once

#include <string>
#include <vector>

#include "soilcast/dataset.hpp"
#include "soilcast/model.hpp"

namespace soilcast {

inline constexpr int kModelFormatVersion = 1;

// On-disk model: versioned JSON carrying the pipeline descriptor, a snapshot
// of the training schema (enough to validate any prediction input), and the
// model body. Doubles are written with shortest round-trip precision, so a
// loaded model predicts bit-identically.
struct ModelFile {
  int format_version = kModelFormatVersion;
  std::string pipeline;
  std::string params_echo;
  std::vector<AttributeSpec> schema;
  std::size_t class_index = 0;
  Model model;
};

// Throws IoError when the path cannot be written.
void save_model(const ModelFile& file, const std::string& path);

// Throws IoError on unreadable paths, ParseError (with a byte offset) on
// malformed or truncated files, and UnsupportedVersionError on a
// format_version this build does not know.
ModelFile load_model(const std::string& path);

}  // namespace soilcast
