#include "beclab/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace beclab {

namespace {

constexpr std::array<char, 4> kMagic{'G', 'P', 'F', '1'};

template <typename U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> buf;
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf.data(), buf.size());
}

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> buf;
  if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw InvalidArgument("GPF1: truncated stream");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double d) { put_le(os, std::bit_cast<std::uint64_t>(d)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void write_snapshot(std::ostream& os, const ComplexField& u) {
  os.write(kMagic.data(), kMagic.size());
  put_le(os, static_cast<std::uint32_t>(u.grid().n()));
  put_f64(os, u.grid().half_width());
  for (const auto& z : u.values()) {
    put_f64(os, z.real());
    put_f64(os, z.imag());
  }
  if (!os) throw Error("GPF1: write failed");
}

ComplexField read_snapshot(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw InvalidArgument("GPF1: bad magic");
  const auto n = get_le<std::uint32_t>(is);
  const double L = get_f64(is);
  if (n > (1u << 15)) throw InvalidArgument("GPF1: implausible grid size");
  const Grid2D grid(static_cast<int>(n), L);
  ComplexField u(grid);
  for (auto& z : u.values()) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    z = {re, im};
  }
  if (is.peek() != std::char_traits<char>::eof()) throw InvalidArgument("GPF1: trailing bytes after payload");
  return u;
}

void write_snapshot(const std::filesystem::path& path, const ComplexField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("GPF1: cannot open " + path.string() + " for writing");
  write_snapshot(os, u);
}

ComplexField read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("GPF1: cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace beclab
