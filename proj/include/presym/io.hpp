#pragma once

// Deterministic text output: every number is rendered with 17 significant
// digits (%.16e), so re-running a command with the same config and seed
// produces byte-identical files.

#include <string>
#include <utility>
#include <vector>

#include "presym/dynamics.hpp"
#include "presym/presymplectic.hpp"

namespace presym {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// %.16e rendering; NaN -> "nan", infinities -> "inf"/"-inf".
std::string format_number(double v);

// One named scalar in a run summary.  Non-numeric items (pass/fail flags,
// preset names) carry their text verbatim.
struct SummaryItem {
  std::string key;
  std::string value;
  bool numeric = true;
};

SummaryItem summary_number(const std::string& key, double v);
SummaryItem summary_count(const std::string& key, long long v);
SummaryItem summary_text(const std::string& key, const std::string& v);

// "key,value" CSV preceded by "# section.key = value" config-echo comments.
std::string render_summary_csv(const ConfigEcho& config,
                               const std::vector<SummaryItem>& items);

// Two-object JSON document {"config": {...}, "results": {...}}.  Config
// values are strings (already canonically rendered); result values are bare
// numeric literals, with NaN mapped to null.
std::string render_summary_json(const ConfigEcho& config,
                                const std::vector<SummaryItem>& items);

// Generic comma-separated table with config-echo comment lines on top.
std::string render_table_csv(const ConfigEcho& config,
                             const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows);

// Trajectory table in the fixed schema
//   tau,x,y,z,t,Ix,Iy,Iz,It,Jx,Jy,Jz,Jt,Px,Py,Pz,E,H,Jx_am,Jy_am,Jz_am,c1,c2,c3
// where E is the time component of the momentum, H is the energy observable
// (nan when the field has no static potential) and (Jx_am,Jy_am,Jz_am) is the
// angular-momentum vector.
std::string render_trajectory_csv(const TwoFormModel& model,
                                  const Trajectory& trajectory,
                                  const ConfigEcho& config);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace presym
