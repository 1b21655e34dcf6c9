#pragma once

#include <string>

#include "shoga/game.hpp"

namespace shoga {

// Game file schema: { "players": n, "worth": { "<coalition>": number, ... } }
// with coalitions keyed "1,3" style (ascending, 1-based), "" for the empty
// set (worth 0 if present), and missing coalitions defaulting to 0.
TuGame parse_game_json(const std::string& text);

// Emits all 2^n entries in ascending mask order; doubles round-trip exactly.
std::string write_game_json(const TuGame& u);

TuGame read_game_file(const std::string& path);

// "glove", "bankruptcy?E=200&c=100,200,300", "airport?costs=12,28,28,30",
// "unanimity?n=3&S=1,2", "majority?n=5&q=3", "random?n=6&seed=42".
TuGame builtin_game(const std::string& spec);

// Dispatches "builtin:<spec>" pseudo-paths to builtin_game, everything else
// to read_game_file.
TuGame load_game(const std::string& path_or_builtin);

}  // namespace shoga
