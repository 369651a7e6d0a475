#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "awpkit/tree.hpp"

namespace awpkit {

// HWT tree files:
//
//   HWT 1
//   I <id> <left_id> <right_id>
//   L <id> <leaf_label>
//
// Blank lines and '#' comments are ignored. The root is the id that never
// appears as a child. Parse failures raise InputError naming the line.
HierTree read_hwt(std::istream& in);
HierTree read_hwt_file(const std::filesystem::path& path);
void write_hwt(std::ostream& out, const HierTree& tree);
void write_hwt_file(const std::filesystem::path& path, const HierTree& tree);

// Weights files: one "<leaf_label> <decimal_weight>" per line, same comment rules.
WeightTable read_weights(std::istream& in, bool normalize = false);
WeightTable read_weights_file(const std::filesystem::path& path, bool normalize = false);
void write_weights(std::ostream& out, const MassTable& weights);
void write_weights_file(const std::filesystem::path& path, const MassTable& weights);

// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

}  // namespace awpkit
