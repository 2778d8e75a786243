#include "ixomd/game_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace ixomd {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string serialize_game(const GameTree& game) {
  std::ostringstream out;
  out << "ixomd-game 1\n";
  if (!game.name.empty()) out << "name " << game.name << '\n';
  out << "horizon " << game.horizon << '\n';
  out << "actions " << game.max_actions << ' ' << game.min_actions << '\n';
  out << "scale " << format_double(game.scale.scale) << ' '
      << format_double(game.scale.offset) << '\n';
  out << "infosets " << game.max_infoset_actions.size() << ' '
      << game.min_infoset_actions.size() << '\n';
  for (std::size_t x = 0; x < game.max_infoset_actions.size(); ++x) {
    out << "max-infoset " << x << ' ' << game.max_infoset_actions[x];
    if (x < game.max_infoset_labels.size() && !game.max_infoset_labels[x].empty()) {
      out << ' ' << game.max_infoset_labels[x];
    }
    out << '\n';
  }
  for (std::size_t y = 0; y < game.min_infoset_actions.size(); ++y) {
    out << "min-infoset " << y << ' ' << game.min_infoset_actions[y];
    if (y < game.min_infoset_labels.size() && !game.min_infoset_labels[y].empty()) {
      out << ' ' << game.min_infoset_labels[y];
    }
    out << '\n';
  }
  out << "states " << game.states.size() << '\n';
  for (std::size_t s = 0; s < game.states.size(); ++s) {
    const StateNode& node = game.states[s];
    out << "state " << s << ' ' << node.level + 1 << ' ' << node.max_infoset
        << ' ' << node.min_infoset << '\n';
  }
  for (const auto& init : game.initial) {
    out << "initial " << init.next << ' ' << format_double(init.prob) << '\n';
  }
  for (std::size_t s = 0; s < game.states.size(); ++s) {
    const StateNode& node = game.states[s];
    const int b_count = game.state_min_actions(static_cast<StateId>(s));
    for (std::size_t j = 0; j < node.reward.size(); ++j) {
      out << "reward " << s << ' ' << j / static_cast<std::size_t>(b_count)
          << ' ' << j % static_cast<std::size_t>(b_count) << ' '
          << format_double(node.reward[j]) << '\n';
    }
    for (std::size_t j = 0; j < node.successors.size(); ++j) {
      for (const auto& succ : node.successors[j]) {
        out << "transition " << s << ' ' << j / static_cast<std::size_t>(b_count)
            << ' ' << j % static_cast<std::size_t>(b_count) << ' ' << succ.next
            << ' ' << format_double(succ.prob) << '\n';
      }
    }
  }
  out << "end\n";
  return out.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty, non-comment line split into tokens; false at EOF.
  bool next(std::istringstream& fields, std::string& keyword) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      fields.clear();
      fields.str(line);
      if (fields >> keyword) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("game file line " + std::to_string(line_no_) + ": " + what);
  }

  template <typename T>
  T read(std::istringstream& fields, const char* what) const {
    std::string token;
    if (!(fields >> token)) fail(std::string("missing ") + what);
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) {
      fail(std::string("bad ") + what + " '" + token + "'");
    }
    return value;
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

struct StateRecord {
  int level = 0;
  InfoSetId x = 0;
  InfoSetId y = 0;
  bool seen = false;
};

}  // namespace

GameTree parse_game(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  std::string keyword;
  if (!reader.next(fields, keyword) || keyword != "ixomd-game") {
    reader.fail("expected header 'ixomd-game 1'");
  }
  if (reader.read<int>(fields, "format version") != 1) {
    reader.fail("unsupported format version");
  }

  GameTree game;
  bool have_actions = false;
  bool ended = false;
  std::vector<StateRecord> records;
  std::vector<std::tuple<StateId, int, int, double>> rewards;
  std::vector<std::tuple<StateId, int, int, Successor>> transitions;
  std::size_t num_max = 0;
  std::size_t num_min = 0;
  std::map<std::size_t, int> max_counts;
  std::map<std::size_t, int> min_counts;
  std::map<std::size_t, std::string> max_labels;
  std::map<std::size_t, std::string> min_labels;

  while (!ended && reader.next(fields, keyword)) {
    if (keyword == "name") {
      fields >> game.name;
    } else if (keyword == "horizon") {
      game.horizon = reader.read<int>(fields, "horizon");
    } else if (keyword == "actions") {
      game.max_actions = reader.read<int>(fields, "A");
      game.min_actions = reader.read<int>(fields, "B");
      have_actions = true;
    } else if (keyword == "scale") {
      game.scale.scale = reader.read<double>(fields, "scale");
      game.scale.offset = reader.read<double>(fields, "offset");
    } else if (keyword == "infosets") {
      num_max = reader.read<std::size_t>(fields, "X");
      num_min = reader.read<std::size_t>(fields, "Y");
    } else if (keyword == "max-infoset" || keyword == "min-infoset") {
      const auto id = reader.read<std::size_t>(fields, "info set id");
      const int n = reader.read<int>(fields, "action count");
      (keyword == "max-infoset" ? max_counts : min_counts)[id] = n;
      std::string label;
      if (fields >> label) {
        (keyword == "max-infoset" ? max_labels : min_labels)[id] = label;
      }
    } else if (keyword == "states") {
      records.resize(reader.read<std::size_t>(fields, "state count"));
    } else if (keyword == "state") {
      const auto id = reader.read<std::size_t>(fields, "state id");
      if (id >= records.size()) reader.fail("state id beyond 'states' count");
      StateRecord& rec = records[id];
      if (rec.seen) reader.fail("duplicate state record");
      rec.level = reader.read<int>(fields, "level") - 1;
      rec.x = reader.read<InfoSetId>(fields, "max info set");
      rec.y = reader.read<InfoSetId>(fields, "min info set");
      rec.seen = true;
    } else if (keyword == "initial") {
      const auto s = reader.read<StateId>(fields, "state");
      const double p = reader.read<double>(fields, "probability");
      game.initial.push_back({s, p});
    } else if (keyword == "transition") {
      const auto s = reader.read<StateId>(fields, "state");
      const int a = reader.read<int>(fields, "a");
      const int b = reader.read<int>(fields, "b");
      const auto next = reader.read<StateId>(fields, "successor");
      const double p = reader.read<double>(fields, "probability");
      transitions.emplace_back(s, a, b, Successor{next, p});
    } else if (keyword == "reward") {
      const auto s = reader.read<StateId>(fields, "state");
      const int a = reader.read<int>(fields, "a");
      const int b = reader.read<int>(fields, "b");
      rewards.emplace_back(s, a, b, reader.read<double>(fields, "reward"));
    } else if (keyword == "end") {
      ended = true;
    } else {
      reader.fail("unknown record '" + keyword + "'");
    }
  }
  if (!ended) reader.fail("missing 'end'");
  if (!have_actions) reader.fail("missing 'actions' record");

  game.max_infoset_actions.assign(num_max, game.max_actions);
  game.min_infoset_actions.assign(num_min, game.min_actions);
  for (const auto& [id, n] : max_counts) {
    if (id >= num_max) reader.fail("max-infoset id beyond 'infosets' count");
    game.max_infoset_actions[id] = n;
  }
  for (const auto& [id, n] : min_counts) {
    if (id >= num_min) reader.fail("min-infoset id beyond 'infosets' count");
    game.min_infoset_actions[id] = n;
  }

  if (!max_labels.empty()) game.max_infoset_labels.assign(num_max, "");
  if (!min_labels.empty()) game.min_infoset_labels.assign(num_min, "");
  for (const auto& [id, label] : max_labels) {
    if (id >= num_max) reader.fail("max-infoset id beyond 'infosets' count");
    game.max_infoset_labels[id] = label;
  }
  for (const auto& [id, label] : min_labels) {
    if (id >= num_min) reader.fail("min-infoset id beyond 'infosets' count");
    game.min_infoset_labels[id] = label;
  }

  game.states.resize(records.size());
  for (std::size_t s = 0; s < records.size(); ++s) {
    const StateRecord& rec = records[s];
    if (!rec.seen) reader.fail("state " + std::to_string(s) + " never declared");
    if (rec.x < 0 || static_cast<std::size_t>(rec.x) >= num_max || rec.y < 0 ||
        static_cast<std::size_t>(rec.y) >= num_min) {
      reader.fail("state " + std::to_string(s) + " has an unknown info set");
    }
    StateNode& node = game.states[s];
    node.level = rec.level;
    node.max_infoset = rec.x;
    node.min_infoset = rec.y;
    const auto joint = static_cast<std::size_t>(
        game.max_infoset_actions[static_cast<std::size_t>(rec.x)] *
        game.min_infoset_actions[static_cast<std::size_t>(rec.y)]);
    node.reward.assign(joint, 0.0);
    if (rec.level + 1 < game.horizon) node.successors.assign(joint, {});
  }

  auto joint_index = [&](StateId s, int a, int b) {
    if (s < 0 || static_cast<std::size_t>(s) >= game.states.size()) {
      reader.fail("record refers to unknown state " + std::to_string(s));
    }
    const int a_count = game.state_max_actions(s);
    const int b_count = game.state_min_actions(s);
    if (a < 0 || a >= a_count || b < 0 || b >= b_count) {
      reader.fail("action pair out of range at state " + std::to_string(s));
    }
    return static_cast<std::size_t>(a * b_count + b);
  };
  for (const auto& [s, a, b, r] : rewards) {
    game.states[static_cast<std::size_t>(s)].reward[joint_index(s, a, b)] = r;
  }
  for (const auto& [s, a, b, succ] : transitions) {
    auto& lists = game.states[static_cast<std::size_t>(s)].successors;
    const std::size_t j = joint_index(s, a, b);
    if (j >= lists.size()) {
      reader.fail("transition out of last-level state " + std::to_string(s));
    }
    lists[j].push_back(succ);
  }
  return game;
}

GameTree parse_game_string(const std::string& text) {
  std::istringstream in(text);
  return parse_game(in);
}

GameTree load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open game file '" + path + "'");
  return parse_game(in);
}

void save_game_file(const GameTree& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write game file '" + path + "'");
  out << serialize_game(game);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace ixomd
