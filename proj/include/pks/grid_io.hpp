#ifndef PKS_GRID_IO_HPP
#define PKS_GRID_IO_HPP

#include <string>

#include "pks/field.hpp"

namespace pks {

// .pksgrid snapshot: text header (dim, cells, extent, time, epsilon, one per
// line) followed by row-major binary IEEE-754 little-endian 64-bit cell values.
struct GridSnapshot {
  Field field;
  double time = 0.0;
  double epsilon = 0.0;
};

void save_pksgrid(const std::string& path, const Field& field, double time,
                  double epsilon);
GridSnapshot load_pksgrid(const std::string& path);

// x,value CSV for 1D fields.
void save_field_csv(const std::string& path, const Field& field);

// Versioned CSV header comment shared by every emitted table.
inline constexpr const char* kCsvVersionLine = "# pks-gamma-lab v1";

}  // namespace pks

#endif
