// Experiment configuration: key = value grammar and validation.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "dgs/error.hpp"
#include "dgs/harness.hpp"

namespace dgs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key),
                      "expected a non-negative integer, got '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(value) + "'");
}

std::optional<double> parse_optional_real(std::string_view key, std::string_view value) {
  const std::string v = lower(value);
  if (v == "auto" || v == "none" || v.empty()) return std::nullopt;
  return parse_real(key, value);
}

// Shared `<section>.lr.*` / `<section>.sigma.*` handling. Returns false when
// `field` names no schedule parameter.
bool set_schedule_field(Schedule& lr, Schedule& sigma, bool has_sigma, std::string_view key,
                        std::string_view field, std::string_view value) {
  Schedule* target = nullptr;
  std::string_view part;
  if (field.starts_with("lr.")) {
    target = &lr;
    part = field.substr(3);
  } else if (has_sigma && field.starts_with("sigma.")) {
    target = &sigma;
    part = field.substr(6);
  } else {
    return false;
  }
  if (part == "initial") {
    target->initial = parse_real(key, value);
  } else if (part == "final") {
    target->final_value = parse_real(key, value);
  } else if (part == "power") {
    target->power = parse_real(key, value);
  } else {
    return false;
  }
  return true;
}

void set_iterations(std::size_t& iterations, Schedule& lr, Schedule& sigma, std::size_t value) {
  iterations = value;
  lr.horizon = std::max<std::size_t>(value, 1);
  sigma.horizon = std::max<std::size_t>(value, 1);
}

[[noreturn]] void unknown_key(std::string_view key) {
  throw ConfigError(std::string(key), "unknown configuration key");
}

void set_baseline(BaselineConfig& cfg, std::string_view key, std::string_view field,
                  std::string_view value) {
  const bool has_sigma = cfg.method == BaselineMethod::mc_gs;
  if (set_schedule_field(cfg.learning_rate, cfg.sigma, has_sigma, key, field, value)) return;
  if (field == "iterations") {
    set_iterations(cfg.iterations, cfg.learning_rate, cfg.sigma, parse_unsigned(key, value));
  } else if (field == "target_loss") {
    cfg.target_loss = parse_optional_real(key, value);
  } else if (field == "step" && cfg.method != BaselineMethod::mc_gs) {
    cfg.step = parse_optional_real(key, value);
  } else {
    unknown_key(key);
  }
}

}  // namespace

std::string_view method_id(Method method) noexcept {
  switch (method) {
    case Method::dgs: return "dgs";
    case Method::mc_gs: return "mcgs";
    case Method::fd: return "fd";
    case Method::nesterov: return "nesterov";
  }
  return "?";
}

std::string_view method_label(Method method) noexcept {
  switch (method) {
    case Method::dgs: return "DGS-ES";
    case Method::mc_gs: return "ES-Bpop";
    case Method::fd: return "FD";
    case Method::nesterov: return "Nesterov";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view text) {
  std::string key;
  for (char ch : trim(text)) {
    if (ch == '-' || ch == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (key == "dgs" || key == "dgses") return Method::dgs;
  if (key == "mcgs" || key == "esbpop") return Method::mc_gs;
  if (key == "fd") return Method::fd;
  if (key == "nesterov") return Method::nesterov;
  return std::nullopt;
}

BaselineConfig& ExperimentConfig::baseline(Method method) {
  switch (method) {
    case Method::mc_gs: return mc_gs;
    case Method::fd: return fd;
    case Method::nesterov: return nesterov;
    case Method::dgs: break;
  }
  throw InvalidArgument("DGS-ES has no baseline configuration");
}

const BaselineConfig& ExperimentConfig::baseline(Method method) const {
  return const_cast<ExperimentConfig*>(this)->baseline(method);
}

std::size_t ExperimentConfig::resolved_mc_gs_samples() const {
  if (mc_gs_samples) return *mc_gs_samples;
  return static_cast<std::size_t>(dgs.order) * dimension;
}

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
  const std::string_view key = trim(raw_key);
  const std::string_view value = trim(raw_value);

  if (key == "preset") {
    const Preset* p = find_preset(value);
    if (!p) throw ConfigError("preset", "unknown preset '" + std::string(value) + "'");
    apply_preset(*this, *p);
  } else if (key == "benchmark") {
    const auto kind = parse_benchmark(value);
    if (!kind) throw ConfigError("benchmark", "unknown benchmark '" + std::string(value) + "'");
    benchmark = *kind;
  } else if (key == "dimension") {
    dimension = parse_unsigned(key, value);
  } else if (key == "method" || key == "methods") {
    std::vector<Method> parsed;
    std::string_view rest = value;
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      const auto m = parse_method(item);
      if (!m) throw ConfigError(std::string(key), "unknown method '" + std::string(item) + "'");
      if (std::find(parsed.begin(), parsed.end(), *m) == parsed.end()) parsed.push_back(*m);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (parsed.empty()) throw ConfigError(std::string(key), "no method given");
    methods = std::move(parsed);
    methods_explicit = true;
  } else if (key == "trials") {
    trials = parse_unsigned(key, value);
  } else if (key == "seed") {
    seed = parse_unsigned(key, value);
  } else if (key == "workers") {
    workers = parse_unsigned(key, value);
  } else if (key == "output") {
    output_dir = std::string(value);
  } else if (key == "match_budget") {
    match_budget = parse_bool(key, value);
  } else if (key.starts_with("dgs.")) {
    const std::string_view field = key.substr(4);
    if (set_schedule_field(dgs.learning_rate, dgs.sigma, true, key, field, value)) return;
    if (field == "order") {
      dgs.order = static_cast<int>(parse_unsigned(key, value));
    } else if (field == "iterations") {
      set_iterations(dgs.iterations, dgs.learning_rate, dgs.sigma, parse_unsigned(key, value));
    } else if (field == "alpha") {
      dgs.alpha = parse_real(key, value);
    } else if (field == "beta") {
      dgs.beta = parse_real(key, value);
    } else if (field == "gamma") {
      dgs.gamma = parse_real(key, value);
    } else if (field == "perturb") {
      dgs.perturb = parse_bool(key, value);
    } else if (field == "share_center") {
      dgs.share_center = parse_bool(key, value);
    } else if (field == "basis_update") {
      const std::string v = lower(value);
      if (v == "reset") {
        dgs.basis_update = BasisUpdate::reset;
      } else if (v == "cumulative") {
        dgs.basis_update = BasisUpdate::cumulative;
      } else {
        throw ConfigError(std::string(key), "expected reset or cumulative");
      }
    } else if (field == "target_loss") {
      dgs.target_loss = parse_optional_real(key, value);
    } else {
      unknown_key(key);
    }
  } else if (key.starts_with("mcgs.")) {
    const std::string_view field = key.substr(5);
    if (field == "samples") {
      const std::string v = lower(value);
      mc_gs_samples = v == "auto" ? std::nullopt : std::optional(parse_unsigned(key, value));
    } else {
      set_baseline(mc_gs, key, field, value);
    }
  } else if (key.starts_with("fd.")) {
    set_baseline(fd, key, key.substr(3), value);
  } else if (key.starts_with("nesterov.")) {
    set_baseline(nesterov, key, key.substr(9), value);
  } else {
    unknown_key(key);
  }
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  if (workers < 1) throw ConfigError("workers", "must be at least 1");
  if (methods.empty()) throw ConfigError("methods", "no method selected");
  try {
    make_benchmark(benchmark, dimension);
  } catch (const InvalidArgument& e) {
    throw ConfigError("dimension", e.what());
  }
  auto check = [](std::string_view section, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(section) + "." + e.field(), e.message());
    }
  };
  check("dgs", [&] { dgs.validate(); });
  check("mcgs", [&] { mc_gs.validate(); });
  check("fd", [&] { fd.validate(); });
  check("nesterov", [&] { nesterov.validate(); });
  if (mc_gs_samples && *mc_gs_samples == 0) throw ConfigError("mcgs.samples", "must be at least 1");
  const std::size_t budget = static_cast<std::size_t>(dgs.order) * dimension;
  if (match_budget && mc_gs_samples && *mc_gs_samples != budget) {
    throw ConfigError("mcgs.samples",
                      "ES-Bpop must use the DGS-ES per-iteration budget M * d = " +
                          std::to_string(budget) + " (got " + std::to_string(*mc_gs_samples) +
                          "); set match_budget = false to override");
  }
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  struct Assignment {
    std::size_t line;
    std::string key;
    std::string value;
  };
  std::vector<Assignment> assignments;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    assignments.push_back({number, std::string(trim(view.substr(0, eq))),
                           std::string(trim(view.substr(eq + 1)))});
  }

  ExperimentConfig cfg;
  auto apply = [&](const Assignment& a) {
    try {
      cfg.set(a.key, a.value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), source + ":" + std::to_string(a.line) + ": " + e.message());
    }
  };
  for (const auto& a : assignments) {
    if (a.key == "preset") apply(a);
  }
  for (const auto& a : assignments) {
    if (a.key != "preset") apply(a);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open configuration file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace dgs
