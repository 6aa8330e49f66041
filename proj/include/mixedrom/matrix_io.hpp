#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mixedrom {

/// On-disk matrix file: 16-byte header ("ROMF", u32 rows, u32 cols, u32 flags)
/// followed by little-endian float64 values in column-major order. `flags`
/// holds the number of stacked slices; a plain matrix has one slice and an empty tensor none.
void write_matrix(const std::string& path, const Eigen::MatrixXd& m, std::uint32_t slices = 1);
Eigen::MatrixXd read_matrix(const std::string& path, std::uint32_t* slices = nullptr);

/// Third-order tensor T[s](i, k) stored as rows = n_i, cols = S * n_k.
void write_tensor(const std::string& path, const std::vector<Eigen::MatrixXd>& t);
std::vector<Eigen::MatrixXd> read_tensor(const std::string& path);

/// zlib crc32 of a whole file.
std::uint32_t file_crc32(const std::string& path);

}  // namespace mixedrom
