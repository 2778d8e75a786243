#ifndef IXOMD_CHECKED_FILE_HPP
#define IXOMD_CHECKED_FILE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ixomd {

std::uint64_t fnv1a64(std::string_view bytes);

// Layout: "<magic> <version>\nchecksum <16 hex digits>\n<body>". The checksum
// covers the body only.
void write_checked(std::ostream& out, std::string_view magic, int version,
                   const std::string& body);
void write_checked_file(const std::string& path, std::string_view magic,
                        int version, const std::string& body);

// Returns the body after checking magic, version and checksum; throws Error
// on any mismatch.
std::string read_checked(std::istream& in, std::string_view magic, int version);
std::string read_checked_file(const std::string& path, std::string_view magic,
                              int version);

// Bit-exact text encoding of doubles (C99 hexfloat).
std::string hex_double(double value);
double parse_hex_double(std::string_view text);

}  // namespace ixomd

#endif  // IXOMD_CHECKED_FILE_HPP
