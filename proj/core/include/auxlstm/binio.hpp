#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "auxlstm/errors.hpp"
#include "auxlstm/tensor.hpp"

namespace auxlstm::binio {

// Little-endian fixed-width encoding shared by the binary containers.

inline void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void put_tensor(std::ostream& out, const Tensor& t) {
  put_u64(out, t.rows());
  put_u64(out, t.cols());
  for (double v : t.data()) put_f64(out, v);
}

inline void read_exact(std::istream& in, void* dst, std::size_t n, const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw LengthError(std::string("truncated input while reading ") + what);
  }
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
  unsigned char b[4];
  read_exact(in, b, 4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
  return v;
}

inline std::uint64_t get_u64(std::istream& in, const char* what) {
  unsigned char b[8];
  read_exact(in, b, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

inline double get_f64(std::istream& in, const char* what) {
  return std::bit_cast<double>(get_u64(in, what));
}

inline std::string get_string(std::istream& in, const char* what, std::size_t max_len = 1 << 20) {
  const std::uint32_t n = get_u32(in, what);
  if (n > max_len) throw FormatError(std::string("implausible string length in ") + what);
  std::string s(n, '\0');
  read_exact(in, s.data(), n, what);
  return s;
}

inline Tensor get_tensor(std::istream& in, const char* what) {
  const std::uint64_t rows = get_u64(in, what);
  const std::uint64_t cols = get_u64(in, what);
  if (rows > (1ULL << 32) || cols > (1ULL << 32) || rows * cols > (1ULL << 34)) {
    throw FormatError(std::string("implausible tensor shape in ") + what);
  }
  Tensor t(rows, cols);
  for (double& v : t.data()) v = get_f64(in, what);
  return t;
}

}  // namespace auxlstm::binio
