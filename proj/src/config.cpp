#include "uwoc/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace uwoc::config {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

struct Value {
  enum class Kind { kNumber, kString, kBool, kArray };
  Kind kind = Kind::kNumber;
  std::string text;                // number token or decoded string
  std::vector<std::string> items;  // array number tokens
  bool flag = false;
  int line = 0;
};

struct Entry {
  std::string key;
  Value value;
};

std::string at_line(int line) { return "line " + std::to_string(line) + ": "; }

[[noreturn]] void fail(const Entry& e, const std::string& what) {
  throw ParseError(at_line(e.value.line) + "key '" + e.key + "': " + what);
}

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool is_valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  if (key.find("..") != std::string::npos) return false;
  for (char c : key) {
    if (!is_key_char(c)) return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Removes a trailing comment, honouring quoted strings.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string parse_string(const std::string& raw, int line) {
  std::string out;
  std::size_t i = 1;
  for (; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '"') break;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i == raw.size()) break;
    switch (raw[i]) {
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      default:
        throw ParseError(at_line(line) + "unknown escape '\\" +
                         std::string(1, raw[i]) + "'");
    }
  }
  if (i >= raw.size()) throw ParseError(at_line(line) + "unterminated string");
  if (i + 1 != raw.size()) {
    throw ParseError(at_line(line) + "unexpected text after string");
  }
  return out;
}

Value parse_value(const std::string& raw, int line) {
  Value v;
  v.line = line;
  if (raw.empty()) throw ParseError(at_line(line) + "missing value");
  if (raw.front() == '"') {
    v.kind = Value::Kind::kString;
    v.text = parse_string(raw, line);
  } else if (raw == "true" || raw == "false") {
    v.kind = Value::Kind::kBool;
    v.flag = raw == "true";
  } else if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError(at_line(line) + "unterminated array");
    v.kind = Value::Kind::kArray;
    const std::string body = trim(raw.substr(1, raw.size() - 2));
    if (!body.empty()) {
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ParseError(at_line(line) + "empty array element");
        v.items.push_back(item);
      }
      if (body.back() == ',') {
        throw ParseError(at_line(line) + "empty array element");
      }
    }
  } else {
    v.kind = Value::Kind::kNumber;
    v.text = raw;
  }
  return v;
}

std::vector<Entry> tokenize(const std::string& text) {
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::string section;
  std::stringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(at_line(line) + "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!is_valid_key(section)) {
        throw ParseError(at_line(line) + "invalid section name '" + section + "'");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(at_line(line) + "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    if (!is_valid_key(key)) {
      throw ParseError(at_line(line) + "invalid key '" + key + "'");
    }
    Entry e;
    e.key = section.empty() ? key : section + "." + key;
    e.value = parse_value(trim(s.substr(eq + 1)), line);
    if (!seen.insert(e.key).second) fail(e, "duplicate key");
    entries.push_back(std::move(e));
  }
  return entries;
}

double to_double(const Entry& e, const std::string& token) {
  double out = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) fail(e, "'" + token + "' is not a number");
  return out;
}

double as_number(const Entry& e) {
  if (e.value.kind != Value::Kind::kNumber) fail(e, "expected a number");
  return to_double(e, e.value.text);
}

std::vector<double> as_array(const Entry& e, std::size_t n) {
  if (e.value.kind != Value::Kind::kArray) fail(e, "expected an array");
  if (e.value.items.size() != n) {
    fail(e, "expected " + std::to_string(n) + " elements");
  }
  std::vector<double> out;
  for (const auto& item : e.value.items) out.push_back(to_double(e, item));
  return out;
}

const std::string& as_string(const Entry& e) {
  if (e.value.kind != Value::Kind::kString) fail(e, "expected a string");
  return e.value.text;
}

bool as_bool(const Entry& e) {
  if (e.value.kind != Value::Kind::kBool) fail(e, "expected true or false");
  return e.value.flag;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out + "]";
}

std::string fmt_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

// Parse-time view of a RunConfig: the optional sections are staged so their
// fields can be set independently of whether the section ends up enabled.
struct State {
  RunConfig cfg;
  sim::DisturbanceSpec disturbance;
  sim::NoiseSpec noise;
  bool disturbance_on = false;
  bool noise_on = false;

  explicit State(const RunConfig& c) : cfg(c) {
    disturbance_on = c.scenario.disturbance.has_value();
    noise_on = c.scenario.noise.has_value();
    if (disturbance_on) disturbance = *c.scenario.disturbance;
    if (noise_on) noise = *c.scenario.noise;
  }
};

enum class Group { kAlways, kDisturbance, kNoise };

struct Field {
  std::string key;
  Group group = Group::kAlways;
  std::function<void(State&, const Entry&)> set;
  // Empty for write-only aliases.
  std::function<std::string(State&)> get;
};

using NumberRef = std::function<double&(State&)>;
using Vec3Ref = std::function<vehicle::Vec3&(State&)>;
using GainRef = std::function<control::AxisGain&(State&)>;

Field number(std::string key, NumberRef ref, Group group = Group::kAlways) {
  return {std::move(key), group,
          [ref](State& s, const Entry& e) { ref(s) = as_number(e); },
          [ref](State& s) { return fmt(ref(s)); }};
}

Field degrees(std::string key, NumberRef ref) {
  return {std::move(key), Group::kAlways,
          [ref](State& s, const Entry& e) { ref(s) = as_number(e) * kDegree; },
          {}};
}

Field vec3(std::string key, Vec3Ref ref, Group group = Group::kAlways) {
  return {std::move(key), group,
          [ref](State& s, const Entry& e) {
            const auto v = as_array(e, 3);
            ref(s) = vehicle::Vec3(v[0], v[1], v[2]);
          },
          [ref](State& s) {
            const vehicle::Vec3& v = ref(s);
            return fmt_array({v[0], v[1], v[2]});
          }};
}

Field axis_gain(std::string key, GainRef ref) {
  return {std::move(key), Group::kAlways,
          [ref](State& s, const Entry& e) {
            const auto v = as_array(e, 3);
            ref(s) = {v[0], v[1], v[2]};
          },
          [ref](State& s) {
            const control::AxisGain& g = ref(s);
            return fmt_array({g.a, g.b, g.mu});
          }};
}

Field text(std::string key, std::function<std::string&(State&)> ref) {
  return {std::move(key), Group::kAlways,
          [ref](State& s, const Entry& e) { ref(s) = as_string(e); },
          [ref](State& s) { return fmt_string(ref(s)); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(text("name", [](State& s) -> std::string& { return s.cfg.scenario.name; }));

    f.push_back(number("scenario.duration", [](State& s) -> double& { return s.cfg.scenario.duration; }));
    f.push_back(number("scenario.dt", [](State& s) -> double& { return s.cfg.scenario.dt; }));
    f.push_back(number("scenario.depth", [](State& s) -> double& { return s.cfg.scenario.depth; }));
    f.push_back(vec3("scenario.initial_eta", [](State& s) -> vehicle::Vec3& { return s.cfg.scenario.initial_eta; }));
    f.push_back(number("scenario.mass_scale", [](State& s) -> double& { return s.cfg.scenario.mass_scale; }));
    f.push_back({"scenario.rmse_window", Group::kAlways,
                 [](State& s, const Entry& e) {
                   const auto v = as_array(e, 2);
                   s.cfg.scenario.rmse_window = std::make_pair(v[0], v[1]);
                 },
                 [](State& s) -> std::string {
                   const auto& w = s.cfg.scenario.rmse_window;
                   return w ? fmt_array({w->first, w->second}) : "";
                 }});

    f.push_back({"controller.type", Group::kAlways,
                 [](State& s, const Entry& e) {
                   try {
                     s.cfg.scenario.controller.kind =
                         sim::controller_kind_from_string(as_string(e));
                   } catch (const std::invalid_argument& ex) {
                     fail(e, ex.what());
                   }
                 },
                 [](State& s) {
                   return fmt_string(sim::to_string(s.cfg.scenario.controller.kind));
                 }});
    f.push_back(number("controller.kp", [](State& s) -> double& { return s.cfg.scenario.controller.kp; }));
    f.push_back(number("controller.kv", [](State& s) -> double& { return s.cfg.scenario.controller.kv; }));
    const char* axes[] = {"x", "y", "yaw"};
    for (int j = 0; j < 3; ++j) {
      const std::string base = std::string("controller.nlpd.") + axes[j];
      f.push_back(axis_gain(base + ".position", [j](State& s) -> control::AxisGain& {
        return s.cfg.scenario.controller.nlpd.axes[j].position;
      }));
      f.push_back(axis_gain(base + ".velocity", [j](State& s) -> control::AxisGain& {
        return s.cfg.scenario.controller.nlpd.axes[j].velocity;
      }));
    }

    f.push_back({"disturbance.enabled", Group::kAlways,
                 [](State& s, const Entry& e) { s.disturbance_on = as_bool(e); },
                 [](State& s) -> std::string { return s.disturbance_on ? "true" : "false"; }});
    f.push_back(number("disturbance.start", [](State& s) -> double& { return s.disturbance.start; }, Group::kDisturbance));
    f.push_back(number("disturbance.duration", [](State& s) -> double& { return s.disturbance.duration; }, Group::kDisturbance));
    f.push_back(vec3("disturbance.wrench", [](State& s) -> vehicle::Vec3& { return s.disturbance.wrench.tau; }, Group::kDisturbance));

    f.push_back({"noise.enabled", Group::kAlways,
                 [](State& s, const Entry& e) { s.noise_on = as_bool(e); },
                 [](State& s) -> std::string { return s.noise_on ? "true" : "false"; }});
    f.push_back(number("noise.sigma_pos", [](State& s) -> double& { return s.noise.sigma_pos; }, Group::kNoise));
    f.push_back(number("noise.sigma_yaw", [](State& s) -> double& { return s.noise.sigma_yaw; }, Group::kNoise));
    f.push_back(number("noise.sigma_vel", [](State& s) -> double& { return s.noise.sigma_vel; }, Group::kNoise));
    f.push_back({"noise.seed", Group::kNoise,
                 [](State& s, const Entry& e) {
                   if (e.value.kind != Value::Kind::kNumber) fail(e, "expected an integer");
                   const std::string& t = e.value.text;
                   std::uint64_t seed = 0;
                   const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
                   if (ec != std::errc() || ptr != t.data() + t.size()) {
                     fail(e, "'" + t + "' is not an unsigned 64-bit integer");
                   }
                   s.noise.seed = seed;
                 },
                 [](State& s) { return std::to_string(s.noise.seed); }});

    f.push_back(number("vehicle.m11", [](State& s) -> double& { return s.cfg.scenario.vehicle.m11; }));
    f.push_back(number("vehicle.m22", [](State& s) -> double& { return s.cfg.scenario.vehicle.m22; }));
    f.push_back(number("vehicle.m33", [](State& s) -> double& { return s.cfg.scenario.vehicle.m33; }));
    f.push_back(number("vehicle.d11_lin", [](State& s) -> double& { return s.cfg.scenario.vehicle.d11_lin; }));
    f.push_back(number("vehicle.d22_lin", [](State& s) -> double& { return s.cfg.scenario.vehicle.d22_lin; }));
    f.push_back(number("vehicle.d33_lin", [](State& s) -> double& { return s.cfg.scenario.vehicle.d33_lin; }));
    f.push_back(number("vehicle.d11_quad", [](State& s) -> double& { return s.cfg.scenario.vehicle.d11_quad; }));
    f.push_back(number("vehicle.d22_quad", [](State& s) -> double& { return s.cfg.scenario.vehicle.d22_quad; }));
    f.push_back(number("vehicle.d33_quad", [](State& s) -> double& { return s.cfg.scenario.vehicle.d33_quad; }));
    f.push_back(number("vehicle.mass_scale", [](State& s) -> double& { return s.cfg.scenario.vehicle.mass_scale; }));

    f.push_back(number("ship.radius", [](State& s) -> double& { return s.cfg.scenario.ship.radius; }));
    f.push_back(number("ship.angular_rate", [](State& s) -> double& { return s.cfg.scenario.ship.angular_rate; }));
    f.push_back(number("ship.yaw_amplitude", [](State& s) -> double& { return s.cfg.scenario.ship.yaw_amplitude; }));
    f.push_back(degrees("ship.yaw_amplitude_deg", [](State& s) -> double& { return s.cfg.scenario.ship.yaw_amplitude; }));

    f.push_back(number("optics.transmitter.power", [](State& s) -> double& { return s.cfg.target.link.tx.power_tx; }));
    f.push_back(number("optics.transmitter.half_angle", [](State& s) -> double& { return s.cfg.target.link.tx.half_angle; }));
    f.push_back(degrees("optics.transmitter.half_angle_deg", [](State& s) -> double& { return s.cfg.target.link.tx.half_angle; }));
    f.push_back(number("optics.transmitter.filter_bandwidth", [](State& s) -> double& { return s.cfg.target.link.tx.filter_bandwidth; }));
    f.push_back(number("optics.receiver.area", [](State& s) -> double& { return s.cfg.target.link.rx.area; }));
    f.push_back(number("optics.receiver.fov_half_angle", [](State& s) -> double& { return s.cfg.target.link.rx.fov_half_angle; }));
    f.push_back(degrees("optics.receiver.fov_half_angle_deg", [](State& s) -> double& { return s.cfg.target.link.rx.fov_half_angle; }));
    f.push_back(number("optics.receiver.refractive_index", [](State& s) -> double& { return s.cfg.target.link.rx.refractive_index; }));
    f.push_back(number("optics.receiver.responsivity", [](State& s) -> double& { return s.cfg.target.link.rx.responsivity; }));
    f.push_back(number("optics.water.attenuation", [](State& s) -> double& { return s.cfg.target.link.water.attenuation; }));
    f.push_back(number("optics.water.transmittance", [](State& s) -> double& { return s.cfg.target.link.water.transmittance; }));
    f.push_back(number("optics.water.surface_irradiance", [](State& s) -> double& { return s.cfg.target.link.water.surface_irradiance; }));
    f.push_back({"optics.solar_model", Group::kAlways,
                 [](State& s, const Entry& e) {
                   try {
                     s.cfg.target.link.solar_model =
                         optics::solar_noise_model_from_string(as_string(e));
                   } catch (const optics::DomainError& ex) {
                     fail(e, ex.what());
                   }
                 },
                 [](State& s) {
                   return fmt_string(optics::to_string(s.cfg.target.link.solar_model));
                 }});

    f.push_back(number("target.ber", [](State& s) -> double& { return s.cfg.target.target_ber; }));
    f.push_back(number("target.min_bit_rate", [](State& s) -> double& { return s.cfg.target.min_bit_rate; }));

    f.push_back(text("output.timeseries", [](State& s) -> std::string& { return s.cfg.output.timeseries; }));
    f.push_back(text("output.metrics", [](State& s) -> std::string& { return s.cfg.output.metrics; }));
    f.push_back(text("output.contour", [](State& s) -> std::string& { return s.cfg.output.contour; }));

    f.push_back(number("contour.offset_min", [](State& s) -> double& { return s.cfg.contour.offset_min; }));
    f.push_back(number("contour.offset_max", [](State& s) -> double& { return s.cfg.contour.offset_max; }));
    f.push_back(number("contour.depth_min", [](State& s) -> double& { return s.cfg.contour.depth_min; }));
    f.push_back(number("contour.depth_max", [](State& s) -> double& { return s.cfg.contour.depth_max; }));
    f.push_back(number("contour.step", [](State& s) -> double& { return s.cfg.contour.step; }));
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("invalid configuration: " + what);
}

}  // namespace

std::vector<std::string> preset_names() { return {"nominal", "case1", "case2"}; }

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.scenario.name = name;
  if (name == "nominal") return c;
  if (name == "case1" || name == "case2") {
    c.scenario.disturbance = sim::DisturbanceSpec{};
    c.scenario.noise = sim::NoiseSpec{};
    if (name == "case2") c.scenario.mass_scale = 1.2;
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected nominal, case1 or case2)");
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  const std::vector<Entry> entries = tokenize(text);

  RunConfig start = base;
  std::set<std::string> keys;
  for (const Entry& e : entries) {
    keys.insert(e.key);
    if (e.key != "preset") continue;
    try {
      start = preset(as_string(e));
    } catch (const std::invalid_argument& ex) {
      fail(e, ex.what());
    }
  }

  State state(start);
  bool disturbance_touched = false;
  bool noise_touched = false;
  for (const Entry& e : entries) {
    if (e.key == "preset") continue;
    const Field* f = find_field(e.key);
    if (!f) fail(e, "unknown key");
    const std::string alias = "_deg";
    if (e.key.ends_with(alias) &&
        keys.count(e.key.substr(0, e.key.size() - alias.size()))) {
      fail(e, "conflicts with the radian form of the same angle");
    }
    f->set(state, e);
    disturbance_touched |= f->group == Group::kDisturbance;
    noise_touched |= f->group == Group::kNoise;
  }

  if (!keys.count("disturbance.enabled") && disturbance_touched) {
    state.disturbance_on = true;
  }
  if (!keys.count("noise.enabled") && noise_touched) state.noise_on = true;
  if (!state.disturbance_on && disturbance_touched) {
    throw ValidationError(
        "invalid configuration: disturbance fields given while "
        "disturbance.enabled = false");
  }
  if (!state.noise_on && noise_touched) {
    throw ValidationError(
        "invalid configuration: noise fields given while noise.enabled = false");
  }

  RunConfig out = state.cfg;
  out.scenario.disturbance.reset();
  out.scenario.noise.reset();
  if (state.disturbance_on) out.scenario.disturbance = state.disturbance;
  if (state.noise_on) out.scenario.noise = state.noise;
  validate(out);
  return out;
}

std::string serialize(const RunConfig& config) {
  State state(config);
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    if (!f.get) continue;
    if (f.group == Group::kDisturbance && !state.disturbance_on) continue;
    if (f.group == Group::kNoise && !state.noise_on) continue;
    const std::string value = f.get(state);
    if (value.empty()) continue;
    const auto dot = f.key.rfind('.');
    const std::string prefix = dot == std::string::npos ? "" : f.key.substr(0, dot);
    const std::string leaf = dot == std::string::npos ? f.key : f.key.substr(dot + 1);
    if (prefix != section) {
      out += "\n[" + prefix + "]\n";
      section = prefix;
    }
    out += leaf + " = " + value + "\n";
  }
  return out;
}

void validate(const RunConfig& config) {
  try {
    sim::validate(config.scenario);
    optics::validate(config.target.link.tx);
    optics::validate(config.target.link.rx);
    optics::validate(config.target.link.water);
  } catch (const std::logic_error& e) {
    throw ValidationError(std::string("invalid configuration: ") + e.what());
  }
  const auto& t = config.target;
  require(t.target_ber > 0 && t.target_ber < 0.5, "0 < target.ber < 0.5");
  require(std::isfinite(t.min_bit_rate) && t.min_bit_rate > 0,
          "target.min_bit_rate > 0");
  const auto& c = config.contour;
  require(std::isfinite(c.offset_min) && std::isfinite(c.offset_max) &&
              c.offset_min <= c.offset_max,
          "contour.offset_min <= contour.offset_max");
  require(std::isfinite(c.depth_min) && std::isfinite(c.depth_max) &&
              c.depth_min <= c.depth_max,
          "contour.depth_min <= contour.depth_max");
  require(std::isfinite(c.step) && c.step > 0, "contour.step > 0");
  require((c.offset_max - c.offset_min) / c.step <= 1e6 &&
              (c.depth_max - c.depth_min) / c.step <= 1e6,
          "contour grid has at most 1e6 points per axis");
}

std::vector<double> grid_axis(double min, double max, double step) {
  const auto n =
      static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    out.push_back(min + static_cast<double>(i) * step);
  }
  return out;
}

}  // namespace uwoc::config
