#include "gramint/sim/experiment_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace gramint::sim {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMse: return "mse";
    case ExperimentKind::kBer: return "ber";
    case ExperimentKind::kComplexity: return "complexity";
    case ExperimentKind::kTradeoff: return "tradeoff";
    case ExperimentKind::kValidate: return "validate";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::kMse, ExperimentKind::kBer, ExperimentKind::kComplexity,
                 ExperimentKind::kTradeoff, ExperimentKind::kValidate})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

std::string_view to_string(Scale scale) { return scale == Scale::kDesk ? "desk" : "paper"; }

Scale parse_scale(std::string_view name) {
  if (name == "desk") return Scale::kDesk;
  if (name == "paper") return Scale::kPaper;
  throw std::invalid_argument("unknown scale '" + std::string(name) + "'");
}

std::string_view to_string(CsiMode mode) {
  switch (mode) {
    case CsiMode::kPerfect: return "perfect";
    case CsiMode::kEstimated: return "estimated";
    case CsiMode::kPerturbed: return "perturbed";
  }
  return "unknown";
}

CsiMode parse_csi_mode(std::string_view name) {
  for (auto m : {CsiMode::kPerfect, CsiMode::kEstimated, CsiMode::kPerturbed})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown csi mode '" + std::string(name) + "'");
}

std::string_view to_string(ChannelModel model) {
  return model == ChannelModel::kIid ? "iid" : "exp_pdp";
}

ChannelModel parse_channel_model(std::string_view name) {
  if (name == "iid") return ChannelModel::kIid;
  if (name == "exp_pdp") return ChannelModel::kExpPdp;
  throw std::invalid_argument("unknown channel model '" + std::string(name) + "'");
}

SystemConfig ScenarioConfig::system() const {
  SystemConfig cfg;
  cfg.num_bs_antennas = bs_antennas;
  cfg.num_users = users;
  cfg.fft_size = fft_size;
  if (active_first < 0) {
    cfg.active_set = centered_active_set(fft_size, active_count);
  } else {
    if (active_count < 1 || active_first + active_count > fft_size)
      throw std::invalid_argument("active block exceeds [0, fft_size)");
    for (int i = 0; i < active_count; ++i) cfg.active_set.push_back(active_first + i);
  }
  cfg.delay_spread = delay_spread;
  cfg.correlation = correlation;
  cfg.csi_error_std = csi_error_std;
  cfg.symbol_energy = symbol_energy;
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

std::vector<double> grid(double first, double last, double step) {
  std::vector<double> out;
  for (int i = 0; first + i * step <= last + 1e-9; ++i) out.push_back(first + i * step);
  return out;
}

}  // namespace

ExperimentConfig preset(ExperimentKind kind, Scale scale) {
  ExperimentConfig c;
  c.kind = kind;
  c.scale = scale;
  auto& s = c.scenario;
  if (scale == Scale::kPaper) {
    s.bs_antennas = 128;
    s.users = 8;
    s.fft_size = 2048;
    s.active_count = 1200;
    s.delay_spread = 144;
    c.mse.bs_sweep = {16, 32, 64, 128};
    c.mse.trials = 100000;
    c.ber.base_point_counts = {36, 287, 576};  // L/4, 2L-1, 4L
    c.ber.snr_db = grid(4, 28, 2);
    c.ber.trials = 40;
    c.tradeoff.base_point_counts = {144, 200, 287, 400, 576, 800, 1000, 1200};
    c.tradeoff.snr_db = grid(10, 30, 1);
    c.tradeoff.trials = 40;
  } else {
    c.ber.base_point_counts = {4, 31, 64};
    c.ber.snr_db = grid(4, 28, 2);
    c.ber.trials = 300;
    c.tradeoff.base_point_counts = {16, 24, 31, 48, 64, 100, 140, 200};
    c.tradeoff.snr_db = grid(10, 30, 1);
    c.tradeoff.trials = 300;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s) {
  s = trim(s);
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  return value;
}

template <typename T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, double>) return format_double(v);
  else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
  else return std::to_string(v);
}

template <typename T>
T parse_value(std::string_view s) {
  if constexpr (std::is_same_v<T, bool>) {
    s = trim(s);
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
  } else {
    return parse_number<T>(s);
  }
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string()> get;
  std::function<void(std::string_view)> set;
};

template <typename T>
Field scalar(std::string section, std::string key, T& ref) {
  return {std::move(section), std::move(key), [&ref] { return format_value(ref); },
          [&ref](std::string_view s) { ref = parse_value<T>(s); }};
}

template <typename T>
Field list(std::string section, std::string key, std::vector<T>& ref) {
  return {std::move(section), std::move(key),
          [&ref] {
            std::string out;
            for (std::size_t i = 0; i < ref.size(); ++i) out += (i ? ", " : "") + format_value(ref[i]);
            return out;
          },
          [&ref](std::string_view s) {
            std::vector<T> v;
            for (const auto item : split_list(s)) v.push_back(parse_value<T>(item));
            ref = std::move(v);
          }};
}

template <typename E, typename ToS, typename Parse>
Field enumerated(std::string section, std::string key, E& ref, ToS to_s, Parse parse) {
  return {std::move(section), std::move(key), [&ref, to_s] { return std::string(to_s(ref)); },
          [&ref, parse](std::string_view s) { ref = parse(trim(s)); }};
}

template <typename E, typename ToS, typename Parse>
Field enum_list(std::string section, std::string key, std::vector<E>& ref, ToS to_s, Parse parse) {
  return {std::move(section), std::move(key),
          [&ref, to_s] {
            std::string out;
            for (std::size_t i = 0; i < ref.size(); ++i) out += (i ? ", " : "") + std::string(to_s(ref[i]));
            return out;
          },
          [&ref, parse](std::string_view s) {
            std::vector<E> v;
            for (const auto item : split_list(s)) v.push_back(parse(item));
            ref = std::move(v);
          }};
}

std::vector<Field> fields(ExperimentConfig& c) {
  auto kind_s = [](ExperimentKind k) { return to_string(k); };
  auto scale_s = [](Scale k) { return to_string(k); };
  auto csi_s = [](CsiMode m) { return to_string(m); };
  auto chan_s = [](ChannelModel m) { return to_string(m); };
  auto method_s = [](GramMethod m) { return gramint::to_string(m); };
  auto& s = c.scenario;
  return {
      enumerated("experiment", "kind", c.kind, kind_s, parse_experiment_kind),
      scalar("experiment", "seed", c.seed),
      enumerated("experiment", "scale", c.scale, scale_s, parse_scale),

      scalar("scenario", "bs_antennas", s.bs_antennas),
      scalar("scenario", "users", s.users),
      scalar("scenario", "fft_size", s.fft_size),
      scalar("scenario", "active_count", s.active_count),
      scalar("scenario", "active_first", s.active_first),
      scalar("scenario", "delay_spread", s.delay_spread),
      scalar("scenario", "correlation", s.correlation),
      scalar("scenario", "csi_error_std", s.csi_error_std),
      scalar("scenario", "symbol_energy", s.symbol_energy),
      enumerated("scenario", "channel", s.channel, chan_s, parse_channel_model),
      scalar("scenario", "pdp_decay", s.pdp_decay),

      list("mse", "bs_sweep", c.mse.bs_sweep),
      list("mse", "delay_spreads", c.mse.delay_spreads),
      scalar("mse", "fft_size", c.mse.fft_size),
      list("mse", "base_points", c.mse.base_points),
      scalar("mse", "target", c.mse.target),
      scalar("mse", "entry_row", c.mse.entry_row),
      scalar("mse", "entry_col", c.mse.entry_col),
      scalar("mse", "csi_snr_db", c.mse.csi_snr_db),
      scalar("mse", "nonideal_correlation", c.mse.nonideal_correlation),
      scalar("mse", "trials", c.mse.trials),

      list("ber", "snr_db", c.ber.snr_db),
      list("ber", "base_point_counts", c.ber.base_point_counts),
      enum_list("ber", "methods", c.ber.methods, method_s, parse_gram_method),
      enum_list("ber", "csi_modes", c.ber.csi_modes, csi_s, parse_csi_mode),
      scalar("ber", "trials", c.ber.trials),

      list("complexity", "base_point_fractions", c.complexity.base_point_fractions),
      scalar("complexity", "measure", c.complexity.measure),

      list("tradeoff", "base_point_counts", c.tradeoff.base_point_counts),
      list("tradeoff", "snr_db", c.tradeoff.snr_db),
      scalar("tradeoff", "target_ber", c.tradeoff.target_ber),
      scalar("tradeoff", "reference_fraction", c.tradeoff.reference_fraction),
      enumerated("tradeoff", "csi", c.tradeoff.csi, csi_s, parse_csi_mode),
      scalar("tradeoff", "trials", c.tradeoff.trials),

      scalar("validate", "oracle_trials", c.validate.oracle_trials),
      scalar("validate", "oracle_sigmas", c.validate.oracle_sigmas),
      scalar("validate", "complexity_tuples", c.validate.complexity_tuples),
  };
}

}  // namespace

std::string serialize(const ExperimentConfig& config) {
  ExperimentConfig copy = config;
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields(copy)) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get() << '\n';
  }
  return out.str();
}

ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  auto table = fields(c);
  std::map<std::pair<std::string, std::string>, Field*> index;
  std::set<std::string> sections;
  for (auto& f : table) {
    index[{f.section, f.key}] = &f;
    sections.insert(f.section);
  }

  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.count(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside of a section");
    const std::string key(trim(line.substr(0, eq)));
    const auto it = index.find({section, key});
    if (it == index.end()) fail("unknown key '" + key + "' in section [" + section + "]");
    if (!seen.insert({section, key}).second) fail("duplicate key '" + key + "'");
    try {
      it->second->set(line.substr(eq + 1));
    } catch (const std::exception& e) {
      fail("key '" + key + "': " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate_config(const ExperimentConfig& c) {
  const SystemConfig sys = c.scenario.system();
  const std::size_t active = sys.active_set.size();
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  check(c.scenario.pdp_decay > 0.0, "scenario.pdp_decay must be positive");
  for (const auto n : c.ber.base_point_counts)
    check(n >= 1 && n <= active, "ber.base_point_counts entries must lie in [1, active_count]");
  for (const auto n : c.tradeoff.base_point_counts)
    check(n >= 1 && n <= active, "tradeoff.base_point_counts entries must lie in [1, active_count]");
  for (const auto f : c.complexity.base_point_fractions)
    check(f > 0.0 && f <= 1.0, "complexity.base_point_fractions must lie in (0, 1]");
  check(c.ber.trials >= 1 && c.tradeoff.trials >= 1 && c.mse.trials >= 1, "trial counts must be positive");
  check(c.tradeoff.target_ber > 0.0 && c.tradeoff.target_ber < 0.5, "tradeoff.target_ber must lie in (0, 0.5)");
  check(!c.mse.base_points.empty() && c.mse.base_points.size() <= 2, "mse.base_points needs one or two entries");
  check(c.mse.entry_row >= 0 && c.mse.entry_col >= 0, "mse entry indices must be non-negative");
  for (const auto l : c.mse.delay_spreads) check(l >= 1 && l <= c.mse.fft_size, "mse.delay_spreads out of range");
  for (const auto b : c.mse.bs_sweep) check(b >= 1, "mse.bs_sweep entries must be positive");
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gramint::sim
