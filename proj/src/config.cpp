#include "presym/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace presym {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string fmt_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string fmt_vec3(const Vec3& v) {
  return fmt_num(v(0)) + " " + fmt_num(v(1)) + " " + fmt_num(v(2));
}

double parse_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + what + ": '" + raw + "'");
  }
  if (pos != s.size()) {
    throw ConfigError("invalid number for " + what + ": '" + raw + "'");
  }
  return v;
}

long long parse_int(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + what + ": '" + raw + "'");
  }
  if (pos != s.size()) {
    throw ConfigError("invalid integer for " + what + ": '" + raw + "'");
  }
  return v;
}

std::vector<double> parse_number_list(const std::string& raw,
                                      const std::string& what) {
  std::string s = raw;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, what));
  if (out.empty()) {
    throw ConfigError("empty list for " + what);
  }
  return out;
}

Vec3 parse_vec3(const std::string& raw, const std::string& what) {
  const auto nums = parse_number_list(raw, what);
  if (nums.size() != 3) {
    throw ConfigError(what + " needs exactly 3 components, got '" + raw +
                      "'");
  }
  return Vec3(nums[0], nums[1], nums[2]);
}

void check_enum(const std::string& value, const std::string& what,
                std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::string msg = "invalid value '" + value + "' for " + what + " (allowed:";
  for (const char* a : allowed) msg += std::string(" ") + a;
  msg += ")";
  throw ConfigError(msg);
}

void apply(RunConfig& c, const std::string& section, const std::string& key,
           const std::string& value) {
  const std::string where = "[" + section + "] " + key;
  if (section == "model") {
    if (key == "preset") {
      check_enum(value, where, {"free", "souriau", "stora", "custom"});
      c.preset = value;
    } else if (key == "m") {
      c.m = parse_double(value, where);
    } else if (key == "s") {
      c.s = parse_double(value, where);
    } else if (key == "q") {
      c.q = parse_double(value, where);
    } else if (key == "g") {
      c.g = parse_double(value, where);
    } else if (key == "k") {
      c.k = parse_double(value, where);
    } else if (key == "l") {
      c.l = parse_double(value, where);
    } else {
      throw ConfigError("unknown key '" + key + "' in section [model]");
    }
  } else if (section == "field") {
    if (key == "kind") {
      check_enum(value, where, {"none", "uniform", "central"});
      c.field_kind = value;
    } else if (key == "profile") {
      check_enum(value, where, {"coulomb", "harmonic", "table"});
      c.profile = value;
    } else if (key == "kappa") {
      c.kappa = parse_double(value, where);
    } else if (key == "r_min") {
      c.r_min = parse_double(value, where);
    } else if (key == "table_path") {
      c.table_path = trim(value);
    } else if (key == "E") {
      c.E = parse_vec3(value, where);
    } else if (key == "B") {
      c.B = parse_vec3(value, where);
    } else if (key == "gauge_origin") {
      if (trim(value) == "none") {
        c.has_gauge_origin = false;
        c.gauge_origin = Vec3::Zero();
      } else {
        c.has_gauge_origin = true;
        c.gauge_origin = parse_vec3(value, where);
      }
    } else {
      throw ConfigError("unknown key '" + key + "' in section [field]");
    }
  } else if (section == "state") {
    if (key == "r") {
      c.r = parse_vec3(value, where);
    } else if (key == "t") {
      c.t = parse_double(value, where);
    } else if (key == "v") {
      c.v = parse_vec3(value, where);
    } else if (key == "u") {
      c.u = parse_vec3(value, where);
    } else {
      throw ConfigError("unknown key '" + key + "' in section [state]");
    }
  } else if (section == "integration") {
    if (key == "h") {
      c.h = parse_double(value, where);
    } else if (key == "n_steps") {
      c.n_steps = static_cast<int>(parse_int(value, where));
    } else if (key == "project_every") {
      c.project_every = static_cast<int>(parse_int(value, where));
    } else if (key == "gauge") {
      check_enum(value, where, {"plain", "starred"});
      c.gauge = value;
    } else if (key == "horizon") {
      c.horizon = parse_double(value, where);
    } else if (key == "drift_tolerance") {
      c.drift_tolerance = parse_double(value, where);
    } else {
      throw ConfigError("unknown key '" + key + "' in section [integration]");
    }
  } else if (section == "experiment") {
    if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(parse_int(value, where));
    } else if (key == "n_points") {
      c.n_points = static_cast<int>(parse_int(value, where));
    } else if (key == "eps_list") {
      c.eps_list = parse_number_list(value, where);
    } else if (key == "family_size") {
      c.family_size = static_cast<int>(parse_int(value, where));
    } else if (key == "study_steps") {
      c.study_steps = static_cast<int>(parse_int(value, where));
    } else if (key == "drift_bound") {
      c.drift_bound = parse_double(value, where);
    } else if (key == "closedness_bound") {
      c.closedness_bound = parse_double(value, where);
    } else {
      throw ConfigError("unknown key '" + key + "' in section [experiment]");
    }
  } else if (section == "output") {
    if (key == "directory") {
      c.directory = trim(value);
    } else if (key == "format") {
      check_enum(value, where, {"csv", "json"});
      c.format = value;
    } else {
      throw ConfigError("unknown key '" + key + "' in section [output]");
    }
  } else {
    throw ConfigError("unknown section [" + section + "]");
  }
}

}  // namespace

RunConfig default_config(const std::string& command) {
  RunConfig c;
  if (command == "audit" || command == "conserve" || command == "spinorbit") {
    // coulomb defaults from the struct
  } else if (command == "bmt") {
    c.field_kind = "uniform";
    c.E = Vec3(0.3, -0.2, 0.1);
    c.B = Vec3(0.1, 0.4, -0.3);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno) + ": '" + t + "'");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value' at line " +
                        std::to_string(lineno) + ": '" + t + "'");
    }
    if (section.empty()) {
      throw ConfigError("key outside of any section at line " +
                        std::to_string(lineno));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    apply(base, section, key, value);
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::vector<std::pair<std::string, std::string>> canonical_items(
    const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> items;
  const auto add = [&](const std::string& k, const std::string& v) {
    items.emplace_back(k, v);
  };
  add("model.preset", c.preset);
  add("model.m", fmt_num(c.m));
  add("model.s", fmt_num(c.s));
  add("model.q", fmt_num(c.q));
  add("model.g", fmt_num(c.g));
  add("model.k", fmt_num(c.k));
  add("model.l", fmt_num(c.l));
  add("field.kind", c.field_kind);
  add("field.profile", c.profile);
  add("field.kappa", fmt_num(c.kappa));
  add("field.r_min", fmt_num(c.r_min));
  add("field.table_path", c.table_path);
  add("field.E", fmt_vec3(c.E));
  add("field.B", fmt_vec3(c.B));
  add("field.gauge_origin",
      c.has_gauge_origin ? fmt_vec3(c.gauge_origin) : std::string("none"));
  add("state.r", fmt_vec3(c.r));
  add("state.t", fmt_num(c.t));
  add("state.v", fmt_vec3(c.v));
  add("state.u", fmt_vec3(c.u));
  add("integration.h", fmt_num(c.h));
  add("integration.n_steps", std::to_string(c.n_steps));
  add("integration.project_every", std::to_string(c.project_every));
  add("integration.gauge", c.gauge);
  add("integration.horizon", fmt_num(c.horizon));
  add("integration.drift_tolerance", fmt_num(c.drift_tolerance));
  add("experiment.seed", std::to_string(c.seed));
  add("experiment.n_points", std::to_string(c.n_points));
  {
    std::string eps;
    for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
      if (i) eps += " ";
      eps += fmt_num(c.eps_list[i]);
    }
    add("experiment.eps_list", eps);
  }
  add("experiment.family_size", std::to_string(c.family_size));
  add("experiment.study_steps", std::to_string(c.study_steps));
  add("experiment.drift_bound", fmt_num(c.drift_bound));
  add("experiment.closedness_bound", fmt_num(c.closedness_bound));
  add("output.directory", c.directory);
  add("output.format", c.format);
  return items;
}

std::vector<std::pair<std::string, std::string>> echo_items(
    const RunConfig& c) {
  auto items = canonical_items(c);
  std::erase_if(items,
                [](const auto& kv) { return kv.first == "output.directory"; });
  return items;
}

std::string canonical_text(const RunConfig& c) {
  std::string out;
  std::string current_section;
  for (const auto& [full_key, value] : canonical_items(c)) {
    const auto dot = full_key.find('.');
    const std::string section = full_key.substr(0, dot);
    const std::string key = full_key.substr(dot + 1);
    if (section != current_section) {
      if (!out.empty()) out += "\n";
      out += "[" + section + "]\n";
      current_section = section;
    }
    out += key + " = " + value + "\n";
  }
  return out;
}

FieldModel make_field(const RunConfig& c) {
  if (c.field_kind == "none") {
    return FieldModel::none();
  }
  if (c.field_kind == "uniform") {
    return c.has_gauge_origin
               ? FieldModel::uniform_with_origin(c.E, c.B, c.gauge_origin)
               : FieldModel::uniform(c.E, c.B);
  }
  // central
  if (c.profile == "coulomb") {
    return FieldModel::coulomb(c.kappa, c.r_min);
  }
  if (c.profile == "harmonic") {
    return FieldModel::harmonic(c.kappa);
  }
  if (c.table_path.empty()) {
    throw ConfigError("profile = table requires field.table_path");
  }
  return FieldModel::tabulated_from_file(c.table_path).scaled(c.kappa);
}

TwoFormModel make_model(const RunConfig& c) {
  if (!(c.m > 0.0)) throw ConfigError("model.m must be positive");
  if (!(c.s > 0.0)) throw ConfigError("model.s must be positive");
  TwoFormModel model;
  model.field = make_field(c);
  if (c.preset == "free") {
    model.variant = ModelVariant::free_form;
    model.coeffs = ModelCoefficients::custom(c.m, c.s, c.q, c.g, 0.0, 0.0);
  } else if (c.preset == "souriau") {
    model.variant = ModelVariant::souriau;
    model.coeffs = ModelCoefficients::souriau(c.m, c.s, c.q, c.g);
  } else if (c.preset == "stora") {
    model.variant = ModelVariant::stora;
    model.coeffs = ModelCoefficients::stora(c.m, c.s, c.q, c.g);
  } else {  // custom
    model.variant = ModelVariant::stora;
    model.coeffs = ModelCoefficients::custom(c.m, c.s, c.q, c.g, c.k, c.l);
  }
  return model;
}

LabFrameState make_lab_state(const RunConfig& c) {
  LabFrameState lab;
  lab.r = c.r;
  lab.t = c.t;
  lab.v = c.v;
  if (!(c.u.norm() > 0.0)) {
    throw ConfigError("state.u must be a nonzero direction");
  }
  lab.u = c.u.normalized();
  if (!(lab.v.norm() < 1.0)) {
    throw ConfigError("state.v must be subluminal (|v| < 1)");
  }
  return lab;
}

IntegrationOptions make_integration_options(const RunConfig& c) {
  IntegrationOptions opt;
  opt.h = c.h;
  opt.n_steps = c.n_steps;
  opt.project_every = c.project_every;
  opt.gauge = (c.gauge == "starred") ? GaugeKind::starred : GaugeKind::plain;
  opt.drift_tolerance = c.drift_tolerance;
  if (!(opt.h > 0.0)) throw ConfigError("integration.h must be positive");
  if (opt.n_steps < 1) throw ConfigError("integration.n_steps must be >= 1");
  if (opt.project_every < 1) {
    throw ConfigError("integration.project_every must be >= 1");
  }
  return opt;
}

}  // namespace presym
