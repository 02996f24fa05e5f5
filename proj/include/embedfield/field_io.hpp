#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "embedfield/field.hpp"

namespace embedfield {

/// Formats with 17 significant digits so a dump re-reads bit-exactly.
std::string format_double(double value);

/// CSV dump: header `index,c0,...,c{k-1}`, one row per element.
void write_field_csv(std::ostream& out, const FieldBuffer& field);
void write_field_csv(const std::filesystem::path& path, const FieldBuffer& field);

FieldBuffer read_field_csv(std::istream& in);
FieldBuffer read_field_csv(const std::filesystem::path& path);

}  // namespace embedfield
