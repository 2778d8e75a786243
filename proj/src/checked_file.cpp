#include "ixomd/checked_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "ixomd/types.hpp"

namespace ixomd {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void write_checked(std::ostream& out, std::string_view magic, int version,
                   const std::string& body) {
  out << magic << ' ' << version << '\n'
      << "checksum " << std::hex << std::setw(16) << std::setfill('0')
      << fnv1a64(body) << std::dec << '\n'
      << body;
  if (!out) throw Error("write failed for " + std::string(magic));
}

void write_checked_file(const std::string& path, std::string_view magic,
                        int version, const std::string& body) {
  // Write to a sibling file first so an interrupted save never clobbers the
  // previous checkpoint.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp + "' for writing");
    write_checked(out, magic, version, body);
    out.flush();
    if (!out) throw Error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error("cannot move '" + tmp + "' to '" + path + "'");
  }
}

std::string read_checked(std::istream& in, std::string_view magic, int version) {
  std::string header;
  std::string checksum_line;
  if (!std::getline(in, header) || !std::getline(in, checksum_line)) {
    throw Error("truncated " + std::string(magic) + " file");
  }
  std::istringstream head(header);
  std::string got_magic;
  int got_version = 0;
  if (!(head >> got_magic >> got_version) || got_magic != magic) {
    throw Error("not a " + std::string(magic) + " file");
  }
  if (got_version != version) {
    throw Error(std::string(magic) + " version " + std::to_string(got_version) +
                " is not supported (expected " + std::to_string(version) + ")");
  }
  std::istringstream check(checksum_line);
  std::string keyword;
  std::uint64_t expected = 0;
  if (!(check >> keyword >> std::hex >> expected) || keyword != "checksum") {
    throw Error("missing checksum line in " + std::string(magic) + " file");
  }
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (fnv1a64(body) != expected) {
    throw Error(std::string(magic) + " checksum mismatch (file corrupted)");
  }
  return body;
}

std::string read_checked_file(const std::string& path, std::string_view magic,
                              int version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_checked(in, magic, version);
}

std::string hex_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::hex);
  return std::string(buf, res.ptr);
}

double parse_hex_double(std::string_view text) {
  // Accept the printf-style "0x" prefix as well as the bare to_chars form.
  std::string bare(text);
  const std::size_t sign = !bare.empty() && (bare[0] == '-' || bare[0] == '+') ? 1 : 0;
  if (bare.compare(sign, 2, "0x") == 0 || bare.compare(sign, 2, "0X") == 0) {
    bare.erase(sign, 2);
  }
  if (!bare.empty() && bare[0] == '+') bare.erase(0, 1);
  text = bare;
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(),
                                   value, std::chars_format::hex);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error("bad hexfloat '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace ixomd
