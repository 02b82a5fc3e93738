#include "phi4/snapshot.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "phi4/error.hpp"

namespace phi4 {

namespace {

constexpr char kMagic[8] = {'P', 'H', 'I', '4', 'F', 'L', 'D', '1'};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const FourierField& f) {
  std::vector<unsigned char> out(kMagic, kMagic + 8);
  out.reserve(17 + 16 * f.size());
  put_u32(out, std::uint32_t(f.grid().K()));
  put_u32(out, std::uint32_t(f.grid().M()));
  out.push_back(f.hermitian() ? 1 : 0);
  for (const auto& c : f.coeffs()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  return out;
}

FourierField decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 17 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    fail(ErrorKind::io, "not a PHI4FLD1 snapshot");
  const int K = int(get_u32(bytes.data() + 8));
  const int M = int(get_u32(bytes.data() + 12));
  const bool herm = bytes[16] != 0;
  const FrequencyLattice grid(K, M);
  if (bytes.size() != 17 + 16 * grid.size()) fail(ErrorKind::io, "snapshot length does not match its header");
  FourierField f(grid, herm);
  const unsigned char* p = bytes.data() + 17;
  for (std::size_t i = 0; i < grid.size(); ++i, p += 16) f[i] = cplx(get_f64(p), get_f64(p + 8));
  return f;
}

std::string write_snapshot(const std::string& path, const FourierField& f) {
  const auto bytes = encode_snapshot(f);
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io, "cannot open " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!os) fail(ErrorKind::io, "write failed for " + path);
  return sha256_hex(bytes.data(), bytes.size());
}

FourierField read_snapshot(const std::string& path, const std::optional<std::string>& expected_sha256) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (expected_sha256 && sha256_hex(bytes.data(), bytes.size()) != *expected_sha256)
    fail(ErrorKind::checksum, "snapshot " + path + " does not match its recorded SHA-256");
  return decode_snapshot(bytes);
}

std::string sha256_hex(const void* data, std::size_t n) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data, n, md, &len, EVP_sha256(), nullptr) != 1) fail(ErrorKind::io, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s.push_back(hex[md[i] >> 4]);
    s.push_back(hex[md[i] & 15]);
  }
  return s;
}

std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

}  // namespace phi4
