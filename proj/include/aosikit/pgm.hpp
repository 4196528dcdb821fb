#pragma once

#include <filesystem>

#include "aosikit/csm.hpp"

// Binary PGM (P5, maxval 255) masks. Foreground masks use 0/255; labeled
// masks use the part palette 0..10 (see csm::part_label).

namespace aosikit::io {

csm::Mask read_mask_pgm(const std::filesystem::path& path);
void write_mask_pgm(const std::filesystem::path& path, const csm::Mask& mask);

csm::LabelGrid read_label_pgm(const std::filesystem::path& path);
void write_label_pgm(const std::filesystem::path& path, const csm::LabelGrid& labels);

}  // namespace aosikit::io
