#include "shoga/game_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace shoga {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Parses while tracking keys per open object so literal duplicates are
// rejected (the default parser silently keeps the last one).
json parse_rejecting_duplicates(const std::string& text) {
  std::vector<std::set<std::string>> scopes;
  json::parser_callback_t cb = [&scopes](int, json::parse_event_t event, json& parsed) {
    if (event == json::parse_event_t::object_start) {
      scopes.emplace_back();
    } else if (event == json::parse_event_t::object_end) {
      scopes.pop_back();
    } else if (event == json::parse_event_t::key) {
      const auto key = parsed.get<std::string>();
      if (!scopes.back().insert(key).second)
        throw std::invalid_argument("duplicate key '" + key + "'");
    }
    return true;
  };
  return json::parse(text, cb);
}

}  // namespace

TuGame parse_game_json(const std::string& text) {
  const json j = parse_rejecting_duplicates(text);
  if (!j.is_object()) throw std::invalid_argument("game file: top level must be an object");
  if (!j.contains("players")) throw std::invalid_argument("game file: missing \"players\"");
  for (const auto& [key, value] : j.items())
    if (key != "players" && key != "worth")
      throw std::invalid_argument("game file: unknown field \"" + key + "\"");
  if (!j["players"].is_number_integer())
    throw std::invalid_argument("game file: \"players\" must be an integer");
  const int n = j["players"].get<int>();
  if (n < 1 || n > kMaxPlayers)
    throw std::invalid_argument("game file: \"players\" must be in [1, " +
                                std::to_string(kMaxPlayers) + "]");

  std::vector<double> worth(std::size_t{1} << n, 0.0);
  if (j.contains("worth")) {
    if (!j["worth"].is_object())
      throw std::invalid_argument("game file: \"worth\" must be an object");
    for (const auto& [key, value] : j["worth"].items()) {
      if (!value.is_number())
        throw std::invalid_argument("game file: worth of \"" + key + "\" is not a number");
      const double w = value.get<double>();
      if (key.empty()) {
        if (w != 0.0)
          throw std::invalid_argument("game file: worth of the empty coalition must be 0, got " +
                                      std::to_string(w));
        continue;
      }
      const Coalition s = Coalition::parse(key, n);
      worth[s.mask()] = w;
    }
  }
  return TuGame(n, std::move(worth));
}

std::string write_game_json(const TuGame& u) {
  ordered_json worth;
  for (std::uint32_t s = 0; s < u.table_size(); ++s)
    worth[Coalition(s).to_string()] = u.worth(s);
  ordered_json j;
  j["players"] = u.players();
  j["worth"] = std::move(worth);
  return j.dump();
}

TuGame read_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open game file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_game_json(buffer.str());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("game file '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("game file '" + path + "': " + e.what());
  }
}

namespace {

std::vector<std::pair<std::string, std::string>> parse_params(const std::string& query) {
  std::vector<std::pair<std::string, std::string>> params;
  std::size_t pos = 0;
  while (pos < query.size()) {
    std::size_t amp = query.find('&', pos);
    if (amp == std::string::npos) amp = query.size();
    const std::string item = query.substr(pos, amp - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("builtin game: malformed parameter '" + item + "'");
    params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    pos = amp + 1;
  }
  return params;
}

class ParamMap {
public:
  explicit ParamMap(const std::string& query) : params_(parse_params(query)) {}

  const std::string& require(const std::string& key) const {
    for (const auto& [k, v] : params_)
      if (k == key) return v;
    throw std::invalid_argument("builtin game: missing parameter '" + key + "'");
  }

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : params_)
      if (k == key) return &v;
    return nullptr;
  }

  void expect_only(std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : params_) {
      bool known = false;
      for (const char* key : keys)
        if (k == key) known = true;
      if (!known) throw std::invalid_argument("builtin game: unknown parameter '" + k + "'");
    }
  }

private:
  std::vector<std::pair<std::string, std::string>> params_;
};

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("builtin game: parameter '" + key + "' is not a number: '" +
                                text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("builtin game: parameter '" + key + "' is not a number: '" +
                                text + "'");
  return value;
}

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    values.push_back(parse_number(key, text.substr(pos, comma - pos)));
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return values;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("builtin game: parameter '" + key + "' must be an integer");
  return i;
}

}  // namespace

TuGame builtin_game(const std::string& spec) {
  const std::size_t qmark = spec.find('?');
  const std::string name = spec.substr(0, qmark);
  const ParamMap params(qmark == std::string::npos ? "" : spec.substr(qmark + 1));

  if (name == "glove") {
    params.expect_only({});
    return glove_game();
  }
  if (name == "bankruptcy") {
    params.expect_only({"E", "c"});
    const double estate = parse_number("E", params.require("E"));
    const std::vector<double> claims = parse_number_list("c", params.require("c"));
    return bankruptcy_game(estate, claims);
  }
  if (name == "airport") {
    params.expect_only({"costs"});
    return airport_game(parse_number_list("costs", params.require("costs")));
  }
  if (name == "unanimity") {
    params.expect_only({"n", "S"});
    const int n = parse_int("n", params.require("n"));
    if (n < 1 || n > kMaxPlayers) throw std::invalid_argument("builtin game: parameter 'n' out of range");
    return unanimity_game(n, Coalition::parse(params.require("S"), n));
  }
  if (name == "majority") {
    params.expect_only({"n", "q"});
    return majority_game(parse_int("n", params.require("n")), parse_int("q", params.require("q")));
  }
  if (name == "random") {
    params.expect_only({"n", "seed", "dist"});
    if (const std::string* dist = params.find("dist"); dist && *dist != "uniform")
      throw std::invalid_argument("builtin game: unsupported distribution '" + *dist + "'");
    const int n = parse_int("n", params.require("n"));
    const std::string* seed = params.find("seed");
    return random_game(n, seed ? static_cast<std::uint64_t>(parse_number("seed", *seed)) : 0);
  }
  throw std::invalid_argument("builtin game: unknown name '" + name + "'");
}

TuGame load_game(const std::string& path_or_builtin) {
  constexpr const char* kPrefix = "builtin:";
  if (path_or_builtin.rfind(kPrefix, 0) == 0)
    return builtin_game(path_or_builtin.substr(std::string(kPrefix).size()));
  return read_game_file(path_or_builtin);
}

}  // namespace shoga
