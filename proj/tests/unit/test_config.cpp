#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "gabe/errors.hpp"
#include "gabe/games/config.hpp"

namespace gabe::games {
namespace {

namespace fs = std::filesystem;

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gabe_config_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override {
    unsetenv("GABE_LAB_CONFIG_DIR");
    fs::remove_all(dir_);
  }
  fs::path write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }
  fs::path dir_;
};

TEST(ConfigParse, ShippedFilesEqualTheDefaults) {
  const fs::path dir = GABE_TEST_CONFIG_DIR;
  EXPECT_EQ(to_json(parse_microgrid(slurp(dir / "microgrid.json"))), to_json(MicrogridConfig::defaults()));
  EXPECT_EQ(to_json(parse_gridpd(slurp(dir / "gridpd.json"))), to_json(GridPDConfig::defaults()));
  EXPECT_EQ(to_json(parse_blocks(slurp(dir / "blocks.json"))), to_json(BlockConfig::defaults()));
}

TEST(ConfigParse, RoundTripsThroughJson) {
  auto c = BlockConfig::defaults();
  c.first_mover = Seat::second;
  c.blocks[0].number = 2.5;
  const auto back = parse_blocks(to_json(c));
  EXPECT_EQ(back.blocks, c.blocks);
  EXPECT_EQ(back.first_mover, Seat::second);
}

TEST(ConfigParse, ErrorsNameTheField) {
  EXPECT_NE(error_of([] { parse_microgrid(R"({"storage_cap": "big"})"); }).find("storage_cap"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_microgrid(R"({"tasks_p1": [{"id": 1, "window": [3, 2], "load": 1, "utility": 1}]})"); })
                .find("tasks_p1[0].window"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_microgrid(R"({"tasks_p2": [{"id": 1, "window": [0, 2], "utility": 1}]})"); })
                .find("tasks_p2[0].load"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_microgrid(R"({"generation": [1, 2]})"); }).find("generation"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_gridpd(R"({"maze": ["#1x2#"]})"); }).find("maze[0]"), std::string::npos);
  EXPECT_NE(error_of([] { parse_gridpd(R"({"maze": ["#1#2#"]})"); }).find("maze"), std::string::npos);
  EXPECT_NE(error_of([] { parse_blocks(R"({"blocks": [{"shape": "hexagon", "color": "red", "number": 1}]})"); })
                .find("blocks[0]"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_blocks(R"({"first_mover": 3})"); }).find("first_mover"), std::string::npos);
  EXPECT_NE(error_of([] { parse_blocks("{not json"); }).find("invalid JSON"), std::string::npos);
}

TEST(ConfigParse, UnknownGameListsValidNames) {
  const auto msg = error_of([] { make_game("chess"); });
  EXPECT_NE(msg.find("microgrid"), std::string::npos);
  EXPECT_NE(msg.find("blocks"), std::string::npos);
}

TEST_F(ScratchDir, ExplicitPathWins) {
  write("gridpd.json", R"({"move_cost": 3})");
  const auto explicit_file = write("mine.json", R"({"move_cost": 2})");
  setenv("GABE_LAB_CONFIG_DIR", dir_.c_str(), 1);
  EXPECT_EQ(find_config("gridpd", explicit_file), explicit_file);
  const auto g = load_game("gridpd", explicit_file);
  EXPECT_EQ(dynamic_cast<const GridPDGame&>(*g).config().move_cost, 2.0);
}

TEST_F(ScratchDir, EnvironmentDirectoryBeatsTheInstalledDefault) {
  write("gridpd.json", R"({"move_cost": 3})");
  setenv("GABE_LAB_CONFIG_DIR", dir_.c_str(), 1);
  EXPECT_EQ(find_config("gridpd", std::nullopt), dir_ / "gridpd.json");
  const auto g = load_game("gridpd");
  EXPECT_EQ(dynamic_cast<const GridPDGame&>(*g).config().move_cost, 3.0);
}

TEST_F(ScratchDir, FallsBackToTheInstalledDirectory) {
  setenv("GABE_LAB_CONFIG_DIR", dir_.c_str(), 1);
  const auto found = find_config("blocks", std::nullopt);
  ASSERT_TRUE(found.has_value());
  EXPECT_EQ(fs::weakly_canonical(found->parent_path()), fs::weakly_canonical(GABE_TEST_CONFIG_DIR));
}

TEST_F(ScratchDir, MissingExplicitFileIsAConfigError) {
  EXPECT_THROW(find_config("blocks", dir_ / "absent.json"), ConfigError);
}

}  // namespace
}  // namespace gabe::games
