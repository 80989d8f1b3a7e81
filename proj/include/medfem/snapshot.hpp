#pragma once

#include "medfem/field.hpp"

#include <iosfwd>
#include <string>

namespace medfem {

// Line-oriented text snapshot of a field and its mesh: header with dimension
// and counts, node coordinates, element indices, nodal values. Floats are
// written with 17 significant digits so decimals round-trip exactly.
void write_snapshot(std::ostream& out, const DiscreteField& field);
DiscreteField read_snapshot(std::istream& in);

void write_snapshot_file(const std::string& path, const DiscreteField& field);
DiscreteField read_snapshot_file(const std::string& path);

// Shortest decimal form that round-trips; used by snapshots and CSV curves.
std::string format_double(double v);

}  // namespace medfem
