#include "presym/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "presym/observables.hpp"

namespace presym {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

SummaryItem summary_number(const std::string& key, double v) {
  return SummaryItem{key, format_number(v), true};
}

SummaryItem summary_count(const std::string& key, long long v) {
  return SummaryItem{key, std::to_string(v), true};
}

SummaryItem summary_text(const std::string& key, const std::string& v) {
  return SummaryItem{key, v, false};
}

namespace {

std::string echo_comments(const ConfigEcho& config) {
  std::string out;
  for (const auto& [key, value] : config) {
    out += "# " + key + " = " + value + "\n";
  }
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_summary_csv(const ConfigEcho& config,
                               const std::vector<SummaryItem>& items) {
  std::string out = echo_comments(config);
  out += "key,value\n";
  for (const auto& item : items) {
    out += item.key + "," + item.value + "\n";
  }
  return out;
}

std::string render_summary_json(const ConfigEcho& config,
                                const std::vector<SummaryItem>& items) {
  std::string out = "{\n  \"config\": {\n";
  for (std::size_t i = 0; i < config.size(); ++i) {
    out += "    \"" + json_escape(config[i].first) + "\": \"" +
           json_escape(config[i].second) + "\"";
    out += (i + 1 < config.size()) ? ",\n" : "\n";
  }
  out += "  },\n  \"results\": {\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    out += "    \"" + json_escape(item.key) + "\": ";
    if (!item.numeric) {
      out += "\"" + json_escape(item.value) + "\"";
    } else if (item.value == "nan" || item.value == "inf" ||
               item.value == "-inf") {
      out += "null";
    } else {
      out += item.value;
    }
    out += (i + 1 < items.size()) ? ",\n" : "\n";
  }
  out += "  }\n}\n";
  return out;
}

std::string render_table_csv(
    const ConfigEcho& config, const std::vector<std::string>& header,
    const std::vector<std::vector<std::string>>& rows) {
  std::string out = echo_comments(config);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += header[i];
  }
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  return out;
}

std::string render_trajectory_csv(const TwoFormModel& model,
                                  const Trajectory& trajectory,
                                  const ConfigEcho& config) {
  std::string out = echo_comments(config);
  out +=
      "tau,x,y,z,t,Ix,Iy,Iz,It,Jx,Jy,Jz,Jt,Px,Py,Pz,E,H,"
      "Jx_am,Jy_am,Jz_am,c1,c2,c3\n";
  const bool with_potential = model.field.has_potential();
  for (const auto& sample : trajectory.samples) {
    // Both E and H come from the momentum recorded with the sample, so the
    // columns stay consistent for every flow kind (the reference flow carries
    // its own momentum variable).
    const double H = with_potential
                         ? sample.P(3) - model.coeffs.q *
                                             model.field.potential_at(
                                                 sample.point.X)
                         : std::numeric_limits<double>::quiet_NaN();
    const Vec3 Jam = angular_momentum(model, sample.point).Jvec;
    std::string row = format_number(sample.tau);
    const auto push = [&row](double v) { row += "," + format_number(v); };
    for (int i = 0; i < 4; ++i) push(sample.point.X(i));
    for (int i = 0; i < 4; ++i) push(sample.point.I(i));
    for (int i = 0; i < 4; ++i) push(sample.point.J(i));
    push(sample.P(0));
    push(sample.P(1));
    push(sample.P(2));
    push(sample.P(3));
    push(H);
    push(Jam(0));
    push(Jam(1));
    push(Jam(2));
    push(sample.constraints(0));
    push(sample.constraints(1));
    push(sample.constraints(2));
    out += row + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file for writing: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed while writing output file: " + path);
  }
}

}  // namespace presym
