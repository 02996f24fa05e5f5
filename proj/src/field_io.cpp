#include "embedfield/field_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace embedfield {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

void write_field_csv(std::ostream& out, const FieldBuffer& field) {
  out << "index";
  for (std::size_t j = 0; j < field.components(); ++j) out << ",c" << j;
  out << '\n';
  for (std::size_t i = 0; i < field.elements(); ++i) {
    out << i;
    for (double v : field.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const FieldBuffer& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field_csv(out, field);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("field csv: bad number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

FieldBuffer read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("field csv: missing header");
  const auto header = split(line);
  if (header.empty() || header[0] != "index" || header.size() < 2) {
    throw std::runtime_error("field csv: malformed header '" + line + "'");
  }
  const std::size_t components = header.size() - 1;
  std::vector<double> data;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != components + 1) {
      throw std::runtime_error("field csv: row " + std::to_string(rows) + " has " +
                               std::to_string(cells.size()) + " cells");
    }
    for (std::size_t j = 1; j < cells.size(); ++j) data.push_back(parse_double(cells[j]));
    ++rows;
  }
  return FieldBuffer(rows, components, std::move(data));
}

FieldBuffer read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field_csv(in);
}

}  // namespace embedfield
