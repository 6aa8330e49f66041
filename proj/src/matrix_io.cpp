#include "mixedrom/matrix_io.hpp"

#include "mixedrom/error.hpp"

#include <zlib.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

static_assert(std::endian::native == std::endian::little, "matrix files assume a little-endian host");

namespace mixedrom {

namespace {

constexpr char kMagic[4] = {'R', 'O', 'M', 'F'};

}  // namespace

void write_matrix(const std::string& path, const Eigen::MatrixXd& m, std::uint32_t slices) {
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() || m.cols() > std::numeric_limits<std::uint32_t>::max())
    throw Error(Stage::Io, "matrix too large for file header: " + path);
  if (slices == 0 ? m.size() != 0 : m.cols() % slices != 0)
    throw Error(Stage::Io, "slice count does not divide columns: " + path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Stage::Io, "cannot open for writing: " + path);
  const std::uint32_t hdr[3] = {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols()), slices};
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!out) throw Error(Stage::Io, "write failed: " + path);
}

Eigen::MatrixXd read_matrix(const std::string& path, std::uint32_t* slices) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Stage::Io, "cannot open: " + path);
  char magic[4];
  std::uint32_t hdr[3];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(Stage::Io, "bad matrix header: " + path);
  Eigen::MatrixXd m(hdr[0], hdr[1]);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!in) throw Error(Stage::Io, "truncated matrix payload: " + path);
  in.peek();
  if (!in.eof()) throw Error(Stage::Io, "trailing bytes after matrix payload: " + path);
  if (slices) *slices = hdr[2];
  return m;
}

void write_tensor(const std::string& path, const std::vector<Eigen::MatrixXd>& t) {
  if (t.empty()) {
    write_matrix(path, Eigen::MatrixXd(0, 0), 0);
    return;
  }
  const Eigen::Index r = t[0].rows();
  const Eigen::Index c = t[0].cols();
  Eigen::MatrixXd m(r, c * static_cast<Eigen::Index>(t.size()));
  for (size_t s = 0; s < t.size(); ++s) {
    if (t[s].rows() != r || t[s].cols() != c) throw Error(Stage::Io, "ragged tensor slices: " + path);
    m.middleCols(static_cast<Eigen::Index>(s) * c, c) = t[s];
  }
  write_matrix(path, m, static_cast<std::uint32_t>(t.size()));
}

std::vector<Eigen::MatrixXd> read_tensor(const std::string& path) {
  std::uint32_t slices = 0;
  const Eigen::MatrixXd m = read_matrix(path, &slices);
  std::vector<Eigen::MatrixXd> t;
  if (slices == 0) {
    if (m.size() != 0) throw Error(Stage::Io, "bad slice count: " + path);
    return t;
  }
  if (m.cols() % slices != 0) throw Error(Stage::Io, "bad slice count: " + path);
  const Eigen::Index c = m.cols() / slices;
  for (std::uint32_t s = 0; s < slices; ++s) t.push_back(m.middleCols(static_cast<Eigen::Index>(s) * c, c));
  return t;
}

std::uint32_t file_crc32(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Stage::Io, "cannot open: " + path);
  uLong crc = crc32(0L, Z_NULL, 0);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    const auto n = in.gcount();
    if (n > 0) crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace mixedrom
