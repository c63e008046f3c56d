#include "wsnkm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wsnkm {

namespace {

std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::parse, std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::parse, std::string(what) + ": not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

KeyValueFile KeyValueFile::parse(std::string_view text) {
  KeyValueFile out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": empty key");
    if (!out.values_.emplace(key, value).second) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }
  return out;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueFile::get_double(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_double(*v, key);
}

std::optional<std::uint64_t> KeyValueFile::get_u64(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_u64(*v, key);
}

std::optional<std::vector<double>> KeyValueFile::get_double_list(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  std::vector<double> out;
  std::string_view rest = *v;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    out.push_back(parse_double(rest.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

}  // namespace wsnkm
