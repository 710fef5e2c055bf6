#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "gabe/errors.hpp"
#include "gabe/harness.hpp"

namespace gabe {

namespace {

constexpr const char* kRawHeader = "game,agent_a,agent_b,seed,seat_a,round,payoff_a,payoff_b";

std::string file_safe(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
    out += keep ? c : '_';
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string gunzip_all(const std::filesystem::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) throw Error("cannot open " + path.string());
  std::string data;
  char buf[1 << 15];
  int n = 0;
  while ((n = gzread(f, buf, sizeof buf)) > 0) data.append(buf, static_cast<std::size_t>(n));
  const bool failed = n < 0;
  gzclose(f);
  if (failed) throw Error("corrupt gzip stream in " + path.string());
  return data;
}

}  // namespace

std::filesystem::path raw_match_filename(const MatchResult& m) {
  return file_safe(m.game) + "__" + file_safe(m.agent_a) + "__vs__" + file_safe(m.agent_b) +
         "__seed" + std::to_string(m.seed) + "__seat" + std::to_string(index_of(m.seat_a) + 1) +
         ".csv.gz";
}

void write_raw_match(const MatchResult& m, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::string text = std::string(kRawHeader) + "\n";
  char buf[256];
  for (std::size_t r = 0; r < m.payoffs.size(); ++r) {
    std::snprintf(buf, sizeof buf, ",%llu,%d,%zu,%.17g,%.17g\n",
                  static_cast<unsigned long long>(m.seed), index_of(m.seat_a) + 1, r + 1,
                  m.payoffs[r].first, m.payoffs[r].second);
    text += m.game + "," + m.agent_a + "," + m.agent_b + buf;
  }
  // An empty match still records its identity.
  if (m.payoffs.empty()) {
    std::snprintf(buf, sizeof buf, ",%llu,%d,0,,\n", static_cast<unsigned long long>(m.seed),
                  index_of(m.seat_a) + 1);
    text += m.game + "," + m.agent_a + "," + m.agent_b + buf;
  }
  gzFile f = gzopen(path.string().c_str(), "wb");
  if (!f) throw Error("cannot write " + path.string());
  const int written = gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  const int closed = gzclose(f);
  if (written != static_cast<int>(text.size()) || closed != Z_OK) {
    throw Error("failed writing " + path.string());
  }
}

MatchResult read_raw_match(const std::filesystem::path& path) {
  std::istringstream in(gunzip_all(path));
  std::string line;
  if (!std::getline(in, line) || line != kRawHeader) {
    throw ConfigError(path.string() + ": missing raw match header");
  }
  MatchResult m;
  bool first = true;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 8 fields");
    }
    try {
      if (first) {
        m.game = f[0];
        m.agent_a = f[1];
        m.agent_b = f[2];
        m.seed = std::stoull(f[3]);
        m.seat_a = seat_from_index(std::stoi(f[4]) - 1);
        first = false;
      }
      const int round = std::stoi(f[5]);
      if (round == 0) continue;
      if (round != static_cast<int>(m.payoffs.size()) + 1) {
        throw ConfigError("rounds out of order");
      }
      m.payoffs.push_back({std::stod(f[6]), std::stod(f[7])});
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  if (first) throw ConfigError(path.string() + ": no rows");
  m.rounds = static_cast<int>(m.payoffs.size());
  return m;
}

std::vector<MatchResult> read_raw_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 7 &&
        name.compare(name.size() - 7, 7, ".csv.gz") == 0) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<MatchResult> out;
  for (const auto& p : files) out.push_back(read_raw_match(p));
  return out;
}

}  // namespace gabe
