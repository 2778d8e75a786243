#ifndef IXOMD_GAME_IO_HPP
#define IXOMD_GAME_IO_HPP

#include <iosfwd>
#include <string>

#include "ixomd/game_tree.hpp"

namespace ixomd {

// Line-oriented text format, documented in docs/game_format.md. Numbers are
// written in shortest round-trip form so parse(serialize(g)) == g exactly.
std::string serialize_game(const GameTree& game);
GameTree parse_game(std::istream& in);
GameTree parse_game_string(const std::string& text);

GameTree load_game_file(const std::string& path);
void save_game_file(const GameTree& game, const std::string& path);

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace ixomd

#endif  // IXOMD_GAME_IO_HPP
