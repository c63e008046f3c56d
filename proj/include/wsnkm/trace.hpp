#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wsnkm/energy.hpp"
#include "wsnkm/types.hpp"

namespace wsnkm {

/// One simulator event. `energy_mj` is what the event cost `node`.
struct TraceRecord {
  double time_s = 0;
  NodeId node = 0;
  std::string event;
  std::size_t bytes = 0;
  double energy_mj = 0;
  std::string verdict;
  CycleIndex cycle = 0;
  Origin origin = Origin::honest;
};

/// Append-only event log.
class TraceLog {
 public:
  void append(TraceRecord r) { records_.push_back(std::move(r)); }
  const std::vector<TraceRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

  /// Header: time_s,node_id,event,bytes,energy_mJ,verdict,cycle,origin
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
  /// Inverse of write_csv. Throws Error{parse}.
  static TraceLog parse_csv(std::string_view text);

 private:
  std::vector<TraceRecord> records_;
};

}  // namespace wsnkm
