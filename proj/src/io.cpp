#include "ebseq/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ebseq/errors.hpp"
#include "ebseq/version.hpp"

namespace ebseq {

using nlohmann::json;

std::string format_double(double v) {
  // shortest decimal that round-trips to the same bits
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  return std::string(buf, ptr);
}

std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open data file: " + path);
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 &&
        static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF)
      line.erase(0, 3);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t'))
      line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && (line[start] == ' ' || line[start] == '\t'))
      ++start;
    if (start > 0) line.erase(0, start);
    if (line.empty()) continue;
    double v = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": not a number: '" << line << "'";
      throw parse_error(msg.str(), line_no);
    }
    values.push_back(v);
  }
  return values;
}

void write_column(const std::string& path, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open for writing: " + path);
  for (double v : values) out << format_double(v) << "\n";
  if (!out) throw parse_error("short write: " + path);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string opt_cell(const std::optional<bool>& v) {
  return v ? (*v ? "1" : "0") : std::string();
}

}  // namespace

std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "replicate,covered,radius,alpha_hat,risk_q,point_risk_median,"
         "point_risk_mean\r\n";
  for (const auto& rec : result.records) {
    out << rec.replicate << ',' << opt_cell(rec.covered) << ','
        << opt_cell(rec.radius) << ',' << opt_cell(rec.alpha_hat) << ','
        << opt_cell(rec.risk_q) << ',' << opt_cell(rec.point_risk_median) << ','
        << opt_cell(rec.point_risk_mean) << "\r\n";
  }
  return out.str();
}

std::string experiment_summary(const ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  std::ostringstream out;
  out << "experiment=" << experiment_kind_name(cfg.kind) << "\n";
  out << "n=" << cfg.n << "\n";
  out << "s=" << cfg.s << "\n";
  out << "q=" << format_double(cfg.q) << "\n";
  out << "family=" << family_name(cfg.family) << "\n";
  if (cfg.family == SlabFamily::heavy_tail)
    out << "delta=" << format_double(cfg.delta) << "\n";
  if (cfg.family == SlabFamily::laplace)
    out << "scale=" << format_double(cfg.scale) << "\n";
  out << "signal=" << signal_kind_name(cfg.signal.kind) << "\n";
  out << "alpha_rule=" << alpha_rule_name(cfg.alpha_rule) << "\n";
  if (cfg.alpha_rule == AlphaRule::fixed)
    out << "fixed_alpha=" << format_double(cfg.fixed_alpha) << "\n";
  if (cfg.alpha_rule == AlphaRule::oracle)
    out << "oracle_multiplier=" << format_double(cfg.oracle_multiplier) << "\n";
  out << "M=" << format_double(cfg.M) << "\n";
  out << "beta=" << format_double(cfg.beta) << "\n";
  out << "replicates=" << cfg.replicates << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "alpha_n=" << format_double(result.alpha_n) << "\n";
  out << "completed=" << result.completed << "\n";
  out << "failures=" << result.failures << "\n";
  if (cfg.kind == ExperimentKind::coverage) {
    out << "coverage=" << format_double(result.coverage_rate) << "\n";
    out << "coverage_ci_lo=" << format_double(result.coverage_ci.lo) << "\n";
    out << "coverage_ci_hi=" << format_double(result.coverage_ci.hi) << "\n";
    out << "mean_radius=" << format_double(result.mean_radius) << "\n";
    out << "mean_diameter_bound=" << format_double(result.mean_diameter_bound)
        << "\n";
  }
  out << "mean_alpha_hat=" << format_double(result.mean_alpha_hat) << "\n";
  if (cfg.kind == ExperimentKind::risk)
    out << "mean_risk_q=" << format_double(result.mean_risk_q) << "\n";
  if (cfg.kind != ExperimentKind::coverage) {
    out << "mean_point_risk_median="
        << format_double(result.mean_point_risk_median) << "\n";
    out << "mean_point_risk_mean=" << format_double(result.mean_point_risk_mean)
        << "\n";
  }
  for (const auto& w : result.warnings) out << "warning=" << w << "\n";
  return out.str();
}

std::string run_manifest_json(const std::string& command, std::uint64_t seed,
                              int workers, double wall_seconds) {
  json j;
  j["tool"] = "ebseq";
  j["version"] = version;
  j["command"] = command;
  j["seed"] = seed;
  j["workers"] = workers;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

namespace {

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw config_error(std::string("unknown key in ") + where + ": '" +
                         it.key() + "'");
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(std::string("bad value for key '") + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw config_error("config must be a JSON object");
  require_keys(root, "config",
               {"experiment", "n", "s", "q", "family", "delta", "scale",
                "signal", "alpha_rule", "M", "beta", "replicates", "seed"});
  ExperimentConfig cfg;
  cfg.kind = parse_experiment_kind(get_or<std::string>(root, "experiment",
                                                       "coverage"));
  cfg.n = get_or<long>(root, "n", cfg.n);
  cfg.s = get_or<long>(root, "s", cfg.s);
  cfg.q = get_or<double>(root, "q", cfg.q);
  cfg.family = parse_family(get_or<std::string>(root, "family", "heavytail"));
  cfg.delta = get_or<double>(root, "delta", cfg.delta);
  cfg.scale = get_or<double>(root, "scale", cfg.scale);
  cfg.M = get_or<double>(root, "M", cfg.M);
  cfg.beta = get_or<double>(root, "beta", cfg.beta);
  cfg.replicates = get_or<long>(root, "replicates", cfg.replicates);
  cfg.seed = get_or<std::uint64_t>(root, "seed", cfg.seed);

  if (root.contains("signal")) {
    const json& sig = root.at("signal");
    if (!sig.is_object()) throw config_error("signal must be a JSON object");
    require_keys(sig, "signal",
                 {"kind", "amplitude_multiplier", "threshold_t", "A", "q",
                  "D_q", "s1", "s2", "c"});
    cfg.signal.kind = parse_signal_kind(get_or<std::string>(sig, "kind", "flat"));
    cfg.signal.amplitude_multiplier =
        get_or<double>(sig, "amplitude_multiplier", cfg.signal.amplitude_multiplier);
    cfg.signal.threshold_t = get_or<double>(sig, "threshold_t", cfg.signal.threshold_t);
    cfg.signal.A = get_or<double>(sig, "A", cfg.signal.A);
    cfg.signal.q = get_or<double>(sig, "q", cfg.signal.q);
    cfg.signal.D_q = get_or<double>(sig, "D_q", cfg.signal.D_q);
    cfg.signal.s1 = get_or<long>(sig, "s1", cfg.signal.s1);
    cfg.signal.s2 = get_or<long>(sig, "s2", cfg.signal.s2);
    cfg.signal.c = get_or<double>(sig, "c", cfg.signal.c);
  }
  if (root.contains("alpha_rule")) {
    const json& rule = root.at("alpha_rule");
    if (rule.is_string()) {
      cfg.alpha_rule = parse_alpha_rule(rule.get<std::string>());
    } else if (rule.is_object()) {
      require_keys(rule, "alpha_rule", {"kind", "alpha", "multiplier"});
      cfg.alpha_rule = parse_alpha_rule(get_or<std::string>(rule, "kind", "mmle"));
      cfg.fixed_alpha = get_or<double>(rule, "alpha", cfg.fixed_alpha);
      cfg.oracle_multiplier =
          get_or<double>(rule, "multiplier", cfg.oracle_multiplier);
    } else {
      throw config_error("alpha_rule must be a string or object");
    }
  }
  return cfg;
}

std::string experiment_config_json(const ExperimentConfig& cfg) {
  json root;
  root["experiment"] = experiment_kind_name(cfg.kind);
  root["n"] = cfg.n;
  root["s"] = cfg.s;
  root["q"] = cfg.q;
  root["family"] = family_name(cfg.family);
  root["delta"] = cfg.delta;
  root["scale"] = cfg.scale;
  root["signal"] = {
      {"kind", signal_kind_name(cfg.signal.kind)},
      {"amplitude_multiplier", cfg.signal.amplitude_multiplier},
      {"threshold_t", cfg.signal.threshold_t},
      {"A", cfg.signal.A},
      {"q", cfg.signal.q},
      {"D_q", cfg.signal.D_q},
      {"s1", cfg.signal.s1},
      {"s2", cfg.signal.s2},
      {"c", cfg.signal.c},
  };
  root["alpha_rule"] = {
      {"kind", alpha_rule_name(cfg.alpha_rule)},
      {"alpha", cfg.fixed_alpha},
      {"multiplier", cfg.oracle_multiplier},
  };
  root["M"] = cfg.M;
  root["beta"] = cfg.beta;
  root["replicates"] = cfg.replicates;
  root["seed"] = cfg.seed;
  return root.dump(2) + "\n";
}

}  // namespace ebseq
