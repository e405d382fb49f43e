#include "tmc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "tmc/errors.hpp"

namespace tmc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& v) {
  std::size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("trailing junk in number: '" + v + "'");
  return out;
}

long long parse_int(const std::string& v) {
  std::size_t used = 0;
  long long out;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("trailing junk in integer: '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& v) {
  std::size_t used = 0;
  unsigned long long out;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an unsigned integer: '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("trailing junk in integer: '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true/false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::vector<double> parse_double_list(const std::string& v) {
  std::vector<double> out;
  if (v == "unset") return out;
  for (const auto& p : split(v, ',')) {
    if (p.empty()) throw ConfigError("empty list entry");
    out.push_back(parse_double(p));
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<std::pair<double, double>> parse_pair_table(const std::string& v) {
  std::vector<std::pair<double, double>> out;
  if (v == "unset") return out;
  for (const auto& p : split(v, ',')) {
    const auto colon = p.find(':');
    if (colon == std::string::npos) throw ConfigError("expected a:b pair, got '" + p + "'");
    out.emplace_back(parse_double(trim(p.substr(0, colon))),
                     parse_double(trim(p.substr(colon + 1))));
  }
  if (out.empty()) throw ConfigError("empty table");
  return out;
}

std::string fmt_double_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(v[i]);
  }
  return out.empty() ? "unset" : out;
}

std::string fmt_pair_table(const std::vector<std::pair<double, double>>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(v[i].first) + ":" + fmt_double(v[i].second);
  }
  return out.empty() ? "unset" : out;
}

MaterialSpec& touch_material(SystemConfig& c) {
  if (!c.material) c.material = MaterialSpec{};
  return *c.material;
}

struct KeyHandler {
  const char* section;
  const char* key;
  std::function<void(SystemConfig&, const std::string&)> set;
  std::function<std::string(const SystemConfig&)> get;
};

const std::vector<KeyHandler>& registry() {
  static const std::vector<KeyHandler> handlers = {
      {"material", "conductivity_s_per_m",
       [](SystemConfig& c, const std::string& v) { touch_material(c).conductivity = parse_double(v); },
       [](const SystemConfig& c) { return c.material ? fmt_double(c.material->conductivity) : "unset"; }},
      {"material", "relative_permeability",
       [](SystemConfig& c, const std::string& v) { touch_material(c).relative_permeability = parse_double(v); },
       [](const SystemConfig& c) { return c.material ? fmt_double(c.material->relative_permeability) : "unset"; }},
      {"material", "thickness_m",
       [](SystemConfig& c, const std::string& v) { touch_material(c).thickness = parse_double(v); },
       [](const SystemConfig& c) { return c.material ? fmt_double(c.material->thickness) : "unset"; }},

      {"link", "v_transmit_v",
       [](SystemConfig& c, const std::string& v) { c.link.v_transmit = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.link.v_transmit); }},
      {"link", "v_receive_min_v",
       [](SystemConfig& c, const std::string& v) { c.link.v_receive_min = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.link.v_receive_min); }},

      {"coil", "inductance_h",
       [](SystemConfig& c, const std::string& v) { c.coil.inductance = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.coil.inductance); }},
      {"coil", "diameter_m",
       [](SystemConfig& c, const std::string& v) {
         c.coil.diameter = parse_double(v);
         c.coil.loop_area = 3.14159265358979323846 * c.coil.diameter * c.coil.diameter / 4.0;
       },
       [](const SystemConfig& c) { return fmt_double(c.coil.diameter); }},
      {"coil", "loop_area_m2",
       [](SystemConfig& c, const std::string& v) { c.coil.loop_area = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.coil.loop_area); }},
      {"coil", "resistance_table",
       [](SystemConfig& c, const std::string& v) { c.coil.resistance_table = parse_pair_table(v); },
       [](const SystemConfig& c) { return fmt_pair_table(c.coil.resistance_table); }},

      {"pipe_loading", "inductance_factor",
       [](SystemConfig& c, const std::string& v) { c.pipe_loading.inductance_factor = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.pipe_loading.inductance_factor); }},
      {"pipe_loading", "resistance_ratio",
       [](SystemConfig& c, const std::string& v) { c.pipe_loading.resistance_ratio = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.pipe_loading.resistance_ratio); }},
      {"pipe_loading", "anchor_frequency_hz",
       [](SystemConfig& c, const std::string& v) { c.pipe_loading.anchor_frequency = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.pipe_loading.anchor_frequency); }},

      {"modem", "symbol_rate_hz",
       [](SystemConfig& c, const std::string& v) { c.modem.symbol_rate = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.modem.symbol_rate); }},
      {"modem", "sample_rate_hz",
       [](SystemConfig& c, const std::string& v) { c.modem.sample_rate = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.modem.sample_rate); }},
      {"modem", "duty",
       [](SystemConfig& c, const std::string& v) { c.modem.duty = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.modem.duty); }},
      {"modem", "amplitude_v",
       [](SystemConfig& c, const std::string& v) { c.modem.amplitude = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.modem.amplitude); }},
      {"modem", "line_code",
       [](SystemConfig& c, const std::string& v) { c.modem.line_code = parse_line_code(v); },
       [](const SystemConfig& c) { return std::string(line_code_name(c.modem.line_code)); }},
      {"modem", "preamble",
       [](SystemConfig& c, const std::string& v) { c.modem.preamble = v; },
       [](const SystemConfig& c) { return c.modem.preamble; }},
      {"modem", "payload_bits",
       [](SystemConfig& c, const std::string& v) { c.modem.payload_len = static_cast<int>(parse_int(v)); },
       [](const SystemConfig& c) { return std::to_string(c.modem.payload_len); }},
      {"modem", "gap_s",
       [](SystemConfig& c, const std::string& v) { c.modem.gap = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.modem.gap); }},
      {"modem", "payload",
       [](SystemConfig& c, const std::string& v) { c.payload = v; },
       [](const SystemConfig& c) { return c.payload; }},

      {"amplifier", "supply_v",
       [](SystemConfig& c, const std::string& v) { c.amplifier.supply_volts = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.amplifier.supply_volts); }},
      {"amplifier", "current_table",
       [](SystemConfig& c, const std::string& v) { c.supply_current_table = parse_pair_table(v); },
       [](const SystemConfig& c) { return fmt_pair_table(c.supply_current_table); }},

      {"channel", "coupling_gain_ref",
       [](SystemConfig& c, const std::string& v) { c.channel.coupling_gain_ref = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.channel.coupling_gain_ref); }},
      {"channel", "reference_separation_m",
       [](SystemConfig& c, const std::string& v) { c.channel.reference_separation = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.channel.reference_separation); }},
      {"channel", "falloff_exponent",
       [](SystemConfig& c, const std::string& v) { c.channel.falloff_exponent = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.channel.falloff_exponent); }},
      {"channel", "pole_frequency_hz",
       [](SystemConfig& c, const std::string& v) { c.channel.pole_frequency = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.channel.pole_frequency); }},
      {"channel", "derivative_coupling",
       [](SystemConfig& c, const std::string& v) { c.channel.derivative_coupling = parse_bool(v); },
       [](const SystemConfig& c) { return std::string(c.channel.derivative_coupling ? "true" : "false"); }},
      {"channel", "use_material",
       [](SystemConfig& c, const std::string& v) { c.channel_use_material = parse_bool(v); },
       [](const SystemConfig& c) { return std::string(c.channel_use_material ? "true" : "false"); }},
      {"channel", "noise_rms_v",
       [](SystemConfig& c, const std::string& v) { c.channel.noise_rms = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.channel.noise_rms); }},
      {"channel", "seed",
       [](SystemConfig& c, const std::string& v) { c.channel.seed = parse_u64(v); },
       [](const SystemConfig& c) { return std::to_string(c.channel.seed); }},

      {"geometry", "horizontal_m",
       [](SystemConfig& c, const std::string& v) { c.geometry.horizontal_offset = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.geometry.horizontal_offset); }},
      {"geometry", "vertical_m",
       [](SystemConfig& c, const std::string& v) { c.geometry.vertical_offset = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.geometry.vertical_offset); }},
      {"geometry", "coplanar_m",
       [](SystemConfig& c, const std::string& v) {
         if (v == "unset")
           c.geometry.coplanar_distance.reset();
         else
           c.geometry.coplanar_distance = parse_double(v);
       },
       [](const SystemConfig& c) {
         return c.geometry.coplanar_distance ? fmt_double(*c.geometry.coplanar_distance)
                                             : std::string("unset");
       }},

      {"rx", "amp_gain",
       [](SystemConfig& c, const std::string& v) { c.rx_amp.gain = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.rx_amp.gain); }},
      {"rx", "auto_gain",
       [](SystemConfig& c, const std::string& v) { c.rx_auto_gain = parse_bool(v); },
       [](const SystemConfig& c) { return std::string(c.rx_auto_gain ? "true" : "false"); }},
      {"rx", "auto_gain_target_v",
       [](SystemConfig& c, const std::string& v) { c.rx_auto_gain_target = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.rx_auto_gain_target); }},
      {"rx", "amp_saturation_v",
       [](SystemConfig& c, const std::string& v) { c.rx_amp.saturation = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.rx_amp.saturation); }},
      {"rx", "adc_sample_rate_hz",
       [](SystemConfig& c, const std::string& v) { c.adc.sample_rate = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.adc.sample_rate); }},
      {"rx", "adc_bits",
       [](SystemConfig& c, const std::string& v) { c.adc.resolution_bits = static_cast<int>(parse_int(v)); },
       [](const SystemConfig& c) { return std::to_string(c.adc.resolution_bits); }},
      {"rx", "adc_vref_v",
       [](SystemConfig& c, const std::string& v) { c.adc.v_ref = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.adc.v_ref); }},
      {"rx", "adc_buffer_len",
       [](SystemConfig& c, const std::string& v) { c.adc.buffer_len = static_cast<int>(parse_int(v)); },
       [](const SystemConfig& c) { return std::to_string(c.adc.buffer_len); }},
      {"rx", "adc_loss_per_flush",
       [](SystemConfig& c, const std::string& v) { c.adc.loss_per_flush = static_cast<int>(parse_int(v)); },
       [](const SystemConfig& c) { return std::to_string(c.adc.loss_per_flush); }},

      {"demod", "line_code",
       [](SystemConfig& c, const std::string& v) { c.demod.line_code = parse_line_code(v); },
       [](const SystemConfig& c) { return std::string(line_code_name(c.demod.line_code)); }},
      {"demod", "movavg_window_symbols",
       [](SystemConfig& c, const std::string& v) { c.demod.movavg_window_symbols = static_cast<int>(parse_int(v)); },
       [](const SystemConfig& c) { return std::to_string(c.demod.movavg_window_symbols); }},
      {"demod", "ones_fraction",
       [](SystemConfig& c, const std::string& v) { c.demod.ones_fraction = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.demod.ones_fraction); }},
      {"demod", "decision_threshold_v",
       [](SystemConfig& c, const std::string& v) { c.demod.decision_threshold = parse_double(v); },
       [](const SystemConfig& c) { return fmt_double(c.demod.decision_threshold); }},

      {"experiment", "trials",
       [](SystemConfig& c, const std::string& v) { c.experiment.trials = static_cast<int>(parse_int(v)); },
       [](const SystemConfig& c) { return std::to_string(c.experiment.trials); }},
      {"experiment", "packets_per_trial",
       [](SystemConfig& c, const std::string& v) { c.experiment.packets_per_trial = static_cast<int>(parse_int(v)); },
       [](const SystemConfig& c) { return std::to_string(c.experiment.packets_per_trial); }},
      {"experiment", "seed",
       [](SystemConfig& c, const std::string& v) { c.experiment.seed = parse_u64(v); },
       [](const SystemConfig& c) { return std::to_string(c.experiment.seed); }},
      {"experiment", "symbol_rates_hz",
       [](SystemConfig& c, const std::string& v) { c.experiment.symbol_rates = parse_double_list(v); },
       [](const SystemConfig& c) { return fmt_double_list(c.experiment.symbol_rates); }},
      {"experiment", "supply_sweep_v",
       [](SystemConfig& c, const std::string& v) { c.experiment.supply_sweep = parse_double_list(v); },
       [](const SystemConfig& c) { return fmt_double_list(c.experiment.supply_sweep); }},
      {"experiment", "horizontal_sweep_m",
       [](SystemConfig& c, const std::string& v) { c.experiment.horizontal_sweep = parse_double_list(v); },
       [](const SystemConfig& c) { return fmt_double_list(c.experiment.horizontal_sweep); }},
      {"experiment", "coplanar_sweep_m",
       [](SystemConfig& c, const std::string& v) { c.experiment.coplanar_sweep = parse_double_list(v); },
       [](const SystemConfig& c) { return fmt_double_list(c.experiment.coplanar_sweep); }},
      {"experiment", "adc_auto_rate",
       [](SystemConfig& c, const std::string& v) { c.experiment.adc_auto_rate = parse_bool(v); },
       [](const SystemConfig& c) { return std::string(c.experiment.adc_auto_rate ? "true" : "false"); }},
  };
  return handlers;
}

const KeyHandler* find_handler(const std::string& section, const std::string& key) {
  for (const auto& h : registry()) {
    if (section == h.section && key == h.key) return &h;
  }
  return nullptr;
}

bool section_exists(const std::string& section) {
  for (const auto& h : registry()) {
    if (section == h.section) return true;
  }
  return false;
}

bool is_bit_string(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

}  // namespace

double SystemConfig::drive_current_for(double supply_volts) const {
  if (supply_current_table.empty())
    throw ConfigError("amplifier: empty supply-current table");
  const auto& t = supply_current_table;
  if (supply_volts <= t.front().first) return t.front().second;
  if (supply_volts >= t.back().first) return t.back().second;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (supply_volts <= t[i].first) {
      const double v0 = t[i - 1].first, v1 = t[i].first;
      const double a0 = t[i - 1].second, a1 = t[i].second;
      return a0 + (a1 - a0) * (supply_volts - v0) / (v1 - v0);
    }
  }
  return t.back().second;
}

ChannelModel SystemConfig::effective_channel() const {
  ChannelModel ch = channel;
  if (channel_use_material && material)
    ch.material = material;
  else
    ch.material.reset();
  return ch;
}

void SystemConfig::validate() const {
  if (material) material->validate();
  link.validate();
  coil.validate();
  modem.validate();
  effective_channel().validate();
  geometry.validate();
  rx_amp.validate();
  adc.validate();
  if (!is_bit_string(payload) || static_cast<int>(payload.size()) != modem.payload_len)
    throw ConfigError("payload must be a bit string of payload_bits length");
  if (experiment.trials < 1) throw ConfigError("experiment: trials must be >= 1");
  if (experiment.packets_per_trial < 1)
    throw ConfigError("experiment: packets_per_trial must be >= 1");
  if (!experiment.horizontal_sweep.empty() && !experiment.coplanar_sweep.empty())
    throw ConfigError("experiment: horizontal_sweep_m and coplanar_sweep_m are exclusive");
}

SystemConfig default_config() {
  SystemConfig c;
  c.coil.inductance = 15e-3;
  c.coil.diameter = 0.095;
  c.coil.loop_area = 3.14159265358979323846 * 0.095 * 0.095 / 4.0;
  c.coil.resistance_table = {{1000.0, 3.369}};
  c.channel.coupling_gain_ref = 0.2;
  c.channel.reference_separation = 0.017;
  c.channel.pole_frequency = 40.0;
  c.geometry.coplanar_distance = 0.105;
  c.experiment.symbol_rates = {500.0, 1000.0, 2500.0, 5000.0};
  return c;
}

SystemConfig parse_config(const std::string& text, const std::string& origin) {
  SystemConfig cfg = default_config();
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!section_exists(section))
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const KeyHandler* handler = find_handler(section, key);
    if (!handler)
      throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    try {
      handler->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void config_set(SystemConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ConfigError("expected section.key, got '" + dotted_key + "'");
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  const KeyHandler* handler = find_handler(section, key);
  if (!handler) throw ConfigError("unknown config key '" + dotted_key + "'");
  handler->set(cfg, value);
}

std::string config_get(const SystemConfig& cfg, const std::string& dotted_key) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ConfigError("expected section.key, got '" + dotted_key + "'");
  const KeyHandler* handler =
      find_handler(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (!handler) throw ConfigError("unknown config key '" + dotted_key + "'");
  return handler->get(cfg);
}

std::string serialize_config(const SystemConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& h : registry()) {
    if (section != h.section) {
      section = h.section;
      out += "[" + section + "]\n";
    }
    out += std::string(h.key) + " = " + h.get(cfg) + "\n";
  }
  return out;
}

std::uint64_t config_hash(const SystemConfig& cfg) {
  const std::string canon = serialize_config(cfg);
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : canon) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace tmc
