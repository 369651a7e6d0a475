#include "awpkit/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace awpkit {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw InputError("line " + std::to_string(line_no) + ": " + what);
}

NodeId parse_id(std::string_view tok, std::size_t line_no) {
  NodeId v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    fail(line_no, "bad node id '" + std::string(tok) + "'");
  }
  return v;
}

double parse_weight(std::string_view tok, std::size_t line_no) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    fail(line_no, "bad weight '" + std::string(tok) + "'");
  }
  return x;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

HierTree read_hwt(std::istream& in) {
  std::vector<NodeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "HWT" || tok[1] != "1") fail(line_no, "expected 'HWT 1'");
      header = true;
      continue;
    }
    if (tok[0] == "I") {
      if (tok.size() != 4) fail(line_no, "internal record needs id, left, right");
      records.push_back({parse_id(tok[1], line_no), NodeKind::kInternal,
                         {parse_id(tok[2], line_no), parse_id(tok[3], line_no)}, {}});
    } else if (tok[0] == "L") {
      if (tok.size() != 3) fail(line_no, "leaf record needs id and label");
      records.push_back({parse_id(tok[1], line_no), NodeKind::kLeaf, {}, std::string(tok[2])});
    } else {
      fail(line_no, "unknown record type '" + std::string(tok[0]) + "'");
    }
  }
  if (!header) throw InputError("missing 'HWT 1' header");
  return HierTree::from_records(std::move(records));
}

HierTree read_hwt_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_hwt(in);
}

void write_hwt(std::ostream& out, const HierTree& tree) {
  out << "HWT 1\n";
  for (const auto& r : tree.records()) {
    if (r.kind == NodeKind::kInternal) {
      out << "I " << r.id << ' ' << r.children[0] << ' ' << r.children[1] << '\n';
    } else {
      out << "L " << r.id << ' ' << r.label << '\n';
    }
  }
}

void write_hwt_file(const std::filesystem::path& path, const HierTree& tree) {
  auto out = open_out(path);
  write_hwt(out, tree);
}

WeightTable read_weights(std::istream& in, bool normalize) {
  MassTable::Map masses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) fail(line_no, "expected '<leaf_label> <weight>'");
    if (!masses.emplace(std::string(tok[0]), parse_weight(tok[1], line_no)).second) {
      fail(line_no, "duplicate label '" + std::string(tok[0]) + "'");
    }
  }
  return WeightTable(std::move(masses), normalize);
}

WeightTable read_weights_file(const std::filesystem::path& path, bool normalize) {
  auto in = open_in(path);
  return read_weights(in, normalize);
}

void write_weights(std::ostream& out, const MassTable& weights) {
  for (const auto& [label, mass] : weights.masses()) {
    out << label << ' ' << format_double(mass) << '\n';
  }
}

void write_weights_file(const std::filesystem::path& path, const MassTable& weights) {
  auto out = open_out(path);
  write_weights(out, weights);
}

}  // namespace awpkit
