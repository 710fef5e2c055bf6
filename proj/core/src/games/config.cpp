#include "gabe/games/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gabe/errors.hpp"

#ifndef GABE_DEFAULT_CONFIG_DIR
#define GABE_DEFAULT_CONFIG_DIR ""
#endif

namespace gabe::games {

using nlohmann::json;

namespace {

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": invalid JSON: " + e.what());
  }
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError((path.empty() ? "" : path + ".") + key + " is required");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + " must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path + " must be an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + " must be a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + " must be an array");
  return v;
}

std::vector<Task> parse_tasks(const json& v, const std::string& path) {
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < array(v, path).size(); ++k) {
    const std::string at = path + "[" + std::to_string(k) + "]";
    const json& t = v[k];
    Task task;
    task.id = integer(field(t, "id", at), at + ".id");
    const json& window = array(field(t, "window", at), at + ".window");
    if (window.size() != 2) throw ConfigError(at + ".window must be [start, end]");
    task.start = integer(window[0], at + ".window[0]");
    task.end = integer(window[1], at + ".window[1]");
    task.load = number(field(t, "load", at), at + ".load");
    task.utility = number(field(t, "utility", at), at + ".utility");
    tasks.push_back(task);
  }
  return tasks;
}

json tasks_json(const std::vector<Task>& tasks) {
  json out = json::array();
  for (const Task& t : tasks) {
    out.push_back({{"id", t.id}, {"window", {t.start, t.end}}, {"load", t.load},
                   {"utility", t.utility}});
  }
  return out;
}

Seat parse_player(const json& v, const std::string& path) {
  const int p = integer(v, path);
  if (p != 1 && p != 2) throw ConfigError(path + " must be 1 or 2");
  return p == 1 ? Seat::first : Seat::second;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

MicrogridConfig parse_microgrid(const std::string& json_text) {
  const json j = parse_text(json_text, "microgrid");
  MicrogridConfig c = MicrogridConfig::defaults();
  if (j.contains("tasks_p1")) c.tasks_p1 = parse_tasks(j["tasks_p1"], "tasks_p1");
  if (j.contains("tasks_p2")) c.tasks_p2 = parse_tasks(j["tasks_p2"], "tasks_p2");
  if (j.contains("generation")) {
    const json& g = array(j["generation"], "generation");
    if (g.size() != c.generation.size()) throw ConfigError("generation must hold 24 numbers");
    for (std::size_t h = 0; h < g.size(); ++h) {
      c.generation[h] = number(g[h], "generation[" + std::to_string(h) + "]");
    }
  }
  if (j.contains("storage_cap")) c.storage_cap = number(j["storage_cap"], "storage_cap");
  if (j.contains("blackout_cost")) c.blackout_cost = number(j["blackout_cost"], "blackout_cost");
  c.validate();
  return c;
}

GridPDConfig parse_gridpd(const std::string& json_text) {
  const json j = parse_text(json_text, "gridpd");
  GridPDConfig c = GridPDConfig::defaults();
  if (j.contains("maze")) {
    c.maze.clear();
    const json& rows = array(j["maze"], "maze");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      c.maze.push_back(text(rows[r], "maze[" + std::to_string(r) + "]"));
    }
  }
  if (j.contains("score_reward")) c.score_reward = number(j["score_reward"], "score_reward");
  if (j.contains("move_cost")) c.move_cost = number(j["move_cost"], "move_cost");
  c.validate();
  return c;
}

BlockConfig parse_blocks(const std::string& json_text) {
  const json j = parse_text(json_text, "blocks");
  BlockConfig c = BlockConfig::defaults();
  if (j.contains("blocks")) {
    c.blocks.clear();
    const json& list = array(j["blocks"], "blocks");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string at = "blocks[" + std::to_string(k) + "]";
      Block b;
      try {
        b.shape = parse_shape(text(field(list[k], "shape", at), at + ".shape"));
        b.color = parse_color(text(field(list[k], "color", at), at + ".color"));
      } catch (const ConfigError& e) {
        throw ConfigError(at + ": " + e.what());
      }
      b.number = number(field(list[k], "number", at), at + ".number");
      c.blocks.push_back(b);
    }
  }
  if (j.contains("picks_per_player")) {
    c.picks_per_player = integer(j["picks_per_player"], "picks_per_player");
  }
  if (j.contains("first_mover")) c.first_mover = parse_player(j["first_mover"], "first_mover");
  c.validate();
  return c;
}

std::string to_json(const MicrogridConfig& c) {
  json j;
  j["tasks_p1"] = tasks_json(c.tasks_p1);
  j["tasks_p2"] = tasks_json(c.tasks_p2);
  j["generation"] = c.generation;
  j["storage_cap"] = c.storage_cap;
  j["blackout_cost"] = c.blackout_cost;
  return j.dump(2) + "\n";
}

std::string to_json(const GridPDConfig& c) {
  json j;
  j["maze"] = c.maze;
  j["score_reward"] = c.score_reward;
  j["move_cost"] = c.move_cost;
  return j.dump(2) + "\n";
}

std::string to_json(const BlockConfig& c) {
  json j;
  j["blocks"] = json::array();
  for (const Block& b : c.blocks) {
    j["blocks"].push_back(
        {{"shape", to_string(b.shape)}, {"color", to_string(b.color)}, {"number", b.number}});
  }
  j["picks_per_player"] = c.picks_per_player;
  j["first_mover"] = c.first_mover == Seat::first ? 1 : 2;
  return j.dump(2) + "\n";
}

bool is_game_name(const std::string& name) {
  return name == "microgrid" || name == "gridpd" || name == "blocks";
}

std::unique_ptr<Rsg> make_game(const std::string& name, const std::string& json_text) {
  const bool defaults = json_text.empty();
  if (name == "microgrid") {
    return std::make_unique<MicrogridGame>(defaults ? MicrogridConfig::defaults()
                                                    : parse_microgrid(json_text));
  }
  if (name == "gridpd") {
    return std::make_unique<GridPDGame>(defaults ? GridPDConfig::defaults()
                                                 : parse_gridpd(json_text));
  }
  if (name == "blocks") {
    return std::make_unique<BlockGame>(defaults ? BlockConfig::defaults()
                                                : parse_blocks(json_text));
  }
  throw ConfigError("unknown game '" + name + "' (valid: microgrid, gridpd, blocks)");
}

std::optional<std::filesystem::path> find_config(
    const std::string& name, const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) {
    if (!std::filesystem::exists(*explicit_path)) {
      throw ConfigError("config file not found: " + explicit_path->string());
    }
    return explicit_path;
  }
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("GABE_LAB_CONFIG_DIR"); env && *env) dirs.emplace_back(env);
  if (*GABE_DEFAULT_CONFIG_DIR) dirs.emplace_back(GABE_DEFAULT_CONFIG_DIR);
  for (const auto& dir : dirs) {
    const auto candidate = dir / (name + ".json");
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return std::nullopt;
}

std::unique_ptr<Rsg> load_game(const std::string& name,
                               const std::optional<std::filesystem::path>& explicit_path) {
  if (!is_game_name(name)) make_game(name);  // throws with the valid names
  const auto path = find_config(name, explicit_path);
  return make_game(name, path ? read_file(*path) : std::string{});
}

}  // namespace gabe::games
