#pragma once

#include <filesystem>
#include <iosfwd>

#include "beclab/field.hpp"

namespace beclab {

// GPF1 field snapshot:
//   bytes 0..3   magic "GPF1"
//   u32 LE       n
//   f64 LE       L (half width)
//   n*n pairs    (re, im) as f64 LE, row-major
void write_snapshot(std::ostream& os, const ComplexField& u);
ComplexField read_snapshot(std::istream& is);

void write_snapshot(const std::filesystem::path& path, const ComplexField& u);
ComplexField read_snapshot(const std::filesystem::path& path);

}  // namespace beclab
