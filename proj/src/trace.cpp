#include "wsnkm/trace.hpp"

#include <fmt/format.h>

#include <ostream>
#include <sstream>

#include "wsnkm/config.hpp"

namespace wsnkm {

namespace {

constexpr std::string_view kHeader = "time_s,node_id,event,bytes,energy_mJ,verdict,cycle,origin";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto at = line.find(sep);
    out.push_back(line.substr(0, at));
    if (at == std::string_view::npos) break;
    line = line.substr(at + 1);
  }
  return out;
}

}  // namespace

void TraceLog::write_csv(std::ostream& out) const {
  out << kHeader << '\n';
  for (const auto& r : records_) {
    out << fmt::format("{:.6f},{},{},{},{:.6f},{},{},{}\n", r.time_s, r.node, r.event, r.bytes, r.energy_mj,
                       r.verdict, r.cycle, r.origin == Origin::adversary ? "adversary" : "honest");
  }
}

std::string TraceLog::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

TraceLog TraceLog::parse_csv(std::string_view text) {
  TraceLog log;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kHeader) throw Error(ErrorKind::parse, "unexpected trace header");
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 8) throw Error(ErrorKind::parse, fmt::format("trace line {}: expected 8 fields", line_no));
    TraceRecord r;
    r.time_s = parse_double(f[0], "time_s");
    r.node = static_cast<NodeId>(parse_u64(f[1], "node_id"));
    r.event = std::string(f[2]);
    r.bytes = parse_u64(f[3], "bytes");
    r.energy_mj = parse_double(f[4], "energy_mJ");
    r.verdict = std::string(f[5]);
    r.cycle = static_cast<CycleIndex>(parse_u64(f[6], "cycle"));
    if (f[7] == "adversary") {
      r.origin = Origin::adversary;
    } else if (f[7] != "honest") {
      throw Error(ErrorKind::parse, fmt::format("trace line {}: bad origin", line_no));
    }
    log.append(std::move(r));
  }
  return log;
}

}  // namespace wsnkm
