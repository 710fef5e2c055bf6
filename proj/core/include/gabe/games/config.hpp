#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "gabe/games/blocks.hpp"
#include "gabe/games/gridpd.hpp"
#include "gabe/games/microgrid.hpp"
#include "gabe/rsg.hpp"

namespace gabe::games {

// JSON readers and writers. Parse errors throw ConfigError naming the field.
MicrogridConfig parse_microgrid(const std::string& json_text);
GridPDConfig parse_gridpd(const std::string& json_text);
BlockConfig parse_blocks(const std::string& json_text);

std::string to_json(const MicrogridConfig& config);
std::string to_json(const GridPDConfig& config);
std::string to_json(const BlockConfig& config);

// Registered game names: microgrid, gridpd, blocks.
bool is_game_name(const std::string& name);

// Builds a game from JSON text, or from built-in defaults when empty.
std::unique_ptr<Rsg> make_game(const std::string& name, const std::string& json_text = {});

// Resolves the config file for `name`: the explicit path when given, else
// $GABE_LAB_CONFIG_DIR/<name>.json, else the installed config directory.
// Returns nullopt when no file exists (built-in defaults apply).
std::optional<std::filesystem::path> find_config(const std::string& name,
                                                 const std::optional<std::filesystem::path>& explicit_path);

// make_game over find_config.
std::unique_ptr<Rsg> load_game(const std::string& name,
                               const std::optional<std::filesystem::path>& explicit_path = {});

}  // namespace gabe::games
