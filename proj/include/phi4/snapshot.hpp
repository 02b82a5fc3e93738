#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phi4/field.hpp"

namespace phi4 {

// Binary layout: "PHI4FLD1", u32 K, u32 M, u8 hermitian, then (re, im) f64
// pairs in lattice order. All integers and floats little-endian.
std::vector<unsigned char> encode_snapshot(const FourierField& f);
FourierField decode_snapshot(const std::vector<unsigned char>& bytes);

// Writes the snapshot and returns its SHA-256 (hex).
std::string write_snapshot(const std::string& path, const FourierField& f);
// Reads a snapshot; when expected_sha256 is given a mismatch raises a checksum error.
FourierField read_snapshot(const std::string& path, const std::optional<std::string>& expected_sha256 = {});

std::string sha256_hex(const void* data, std::size_t n);
std::string sha256_hex(const std::string& s);

}  // namespace phi4
