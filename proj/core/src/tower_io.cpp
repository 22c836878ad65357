#include <charconv>
#include <sstream>

#include "lfends/error.hpp"
#include "lfends/tower.hpp"

namespace lfends {

std::string write_tower(const EndTower& t) {
  std::ostringstream out;
  out << "tower v1\n";
  for (std::size_t l = 0; l < t.depth(); ++l) out << "level " << l + 1 << " " << t.size(l) << "\n";
  for (std::size_t l = 1; l < t.depth(); ++l) {
    for (std::size_t e = 0; e < t.size(l); ++e) out << "bond " << l + 1 << " " << e << " " << t.parent(l, e) << "\n";
  }
  return out.str();
}

namespace {

std::size_t parse_count(std::string_view token, std::size_t line_no) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

EndTower read_tower(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::size_t>> bonds;
  std::vector<std::vector<char>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty() || tok[0].front() == '#') continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
    };
    if (!header) {
      if (tok.size() != 2 || tok[0] != "tower" || tok[1] != "v1") bad("expected 'tower v1' header");
      header = true;
      continue;
    }
    if (tok[0] == "level" && tok.size() == 3) {
      const auto i = parse_count(tok[1], line_no);
      if (i != sizes.size() + 1) bad("levels must be listed in order from 1");
      if (!bonds.empty()) bad("level after bond lines");
      sizes.push_back(parse_count(tok[2], line_no));
    } else if (tok[0] == "bond" && tok.size() == 4) {
      const auto i = parse_count(tok[1], line_no);
      const auto child = parse_count(tok[2], line_no);
      const auto parent = parse_count(tok[3], line_no);
      if (bonds.empty()) {
        for (std::size_t l = 1; l < sizes.size(); ++l) {
          bonds.emplace_back(sizes[l], 0);
          seen.emplace_back(sizes[l], 0);
        }
      }
      if (i < 2 || i > sizes.size()) bad("bond level out of range");
      if (child >= sizes[i - 1] || parent >= sizes[i - 2]) bad("bond index out of range");
      if (seen[i - 2][child]) bad("duplicate bond");
      seen[i - 2][child] = 1;
      bonds[i - 2][child] = parent;
    } else {
      bad("unrecognized '" + line + "'");
    }
  }
  if (!header) fail(ErrorKind::ParseError, "missing 'tower v1' header");
  if (bonds.empty()) {
    for (std::size_t l = 1; l < sizes.size(); ++l) {
      bonds.emplace_back(sizes[l], 0);
      seen.emplace_back(sizes[l], 0);
    }
  }
  for (std::size_t l = 0; l < seen.size(); ++l) {
    for (std::size_t e = 0; e < seen[l].size(); ++e) {
      if (!seen[l][e]) {
        fail(ErrorKind::ParseError, "missing bond for element " + std::to_string(e) + " at level " + std::to_string(l + 2));
      }
    }
  }
  return make_tower(std::move(sizes), std::move(bonds), Provenance::Imported);
}

}  // namespace lfends
