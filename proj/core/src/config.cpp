#include "qopdd/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qopdd {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw config_error("unknown key '" + it.key() + "' in " + where);
}

ProfileSpec parse_profile(const json& j) {
  require_keys(j, {"type", "coeffs", "sin_coeffs", "mean", "gap_below_previous", "roughness"},
               "profile");
  ProfileSpec p;
  p.type = j.at("type").get<std::string>();
  if (p.type != "cosine-series" && p.type != "triangle" && p.type != "lamellar" &&
      p.type != "flat")
    throw config_error("unknown profile type '" + p.type + "'");
  if (j.contains("coeffs")) p.cos_coeffs = j.at("coeffs").get<std::vector<double>>();
  if (j.contains("sin_coeffs")) p.sin_coeffs = j.at("sin_coeffs").get<std::vector<double>>();
  if (j.contains("mean")) p.mean = j.at("mean").get<double>();
  if (j.contains("gap_below_previous"))
    p.gap_below_previous = j.at("gap_below_previous").get<double>();
  if (j.contains("roughness")) p.roughness = j.at("roughness").get<double>();
  return p;
}

template <typename T>
std::vector<T> one_or_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::layer_slab: return "layer_Zslab";
    case Scheme::layer_semi: return "layer_Zsemi";
    case Scheme::strip: return "strip";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& s) {
  if (s == "layer_Zslab") return Scheme::layer_slab;
  if (s == "layer_Zsemi") return Scheme::layer_semi;
  if (s == "strip") return Scheme::strip;
  throw config_error("unknown scheme '" + s + "'");
}

std::string precond_name(PrecondMode m) {
  switch (m) {
    case PrecondMode::none: return "none";
    case PrecondMode::sweep: return "sweep";
    case PrecondMode::exact: return "exact";
  }
  return "?";
}

PrecondMode precond_from_name(const std::string& s) {
  if (s == "none") return PrecondMode::none;
  if (s == "sweep") return PrecondMode::sweep;
  if (s == "exact") return PrecondMode::exact;
  throw config_error("unknown preconditioner mode '" + s + "'");
}

std::string family_name(OperatorFamily f) {
  switch (f) {
    case OperatorFamily::quasi_optimal: return "qo";
    case OperatorFamily::despres: return "despres";
    case OperatorFamily::hilbert: return "hilbert";
  }
  return "?";
}

OperatorFamily family_from_name(const std::string& s) {
  if (s == "qo") return OperatorFamily::quasi_optimal;
  if (s == "despres") return OperatorFamily::despres;
  if (s == "hilbert") return OperatorFamily::hilbert;
  throw config_error("unknown operator family '" + s + "'");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw config_error(std::string("config parse failure: ") + e.what());
  }
  require_keys(j,
               {"name", "note", "period", "alpha", "profile", "profiles", "layers", "roughness",
                "scheme", "L", "precond", "n", "A", "gmres", "sigma", "strip_cuts", "wood_tol",
                "operator_family", "output"},
               "config root");
  ExperimentConfig cfg;
  cfg.name = j.value("name", "experiment");
  cfg.period = j.value("period", 2.0 * PI);
  cfg.alpha = j.value("alpha", 0.0);

  if (j.contains("profile") == j.contains("profiles"))
    throw config_error("config needs exactly one of 'profile' or 'profiles'");
  if (j.contains("profile")) {
    cfg.repeated_profile = true;
    cfg.profile_specs = {parse_profile(j.at("profile"))};
  } else {
    cfg.repeated_profile = false;
    for (const auto& pj : j.at("profiles")) cfg.profile_specs.push_back(parse_profile(pj));
    if (cfg.profile_specs.empty()) throw config_error("'profiles' must be non-empty");
  }

  const json& layers = j.at("layers");
  require_keys(layers, {"N", "spacing", "wavenumbers"}, "layers");
  cfg.N_values = one_or_list<int>(layers.at("N"));
  cfg.spacing = layers.value("spacing", 3.3);
  const json& wn = layers.at("wavenumbers");
  require_keys(wn, {"law", "values"}, "wavenumbers");
  if (wn.contains("law") == wn.contains("values"))
    throw config_error("wavenumbers need exactly one of 'law' or 'values'");
  if (wn.contains("law")) {
    require_keys(wn.at("law"), {"a", "b"}, "wavenumber law");
    cfg.wavenumbers.has_law = true;
    cfg.wavenumbers.law_a = one_or_list<double>(wn.at("law").at("a"));
    cfg.wavenumbers.law_b = wn.at("law").at("b").get<double>();
  } else {
    cfg.wavenumbers.values = wn.at("values").get<std::vector<std::vector<double>>>();
  }

  cfg.roughness_values = j.contains("roughness") ? one_or_list<double>(j.at("roughness"))
                                                 : std::vector<double>{1.0};
  for (const auto& s : j.contains("scheme") ? one_or_list<std::string>(j.at("scheme"))
                                            : std::vector<std::string>{"layer_Zslab"})
    cfg.schemes.push_back(scheme_from_name(s));
  cfg.L_values = j.contains("L") ? one_or_list<int>(j.at("L")) : std::vector<int>{0};
  for (const auto& s : j.contains("precond") ? one_or_list<std::string>(j.at("precond"))
                                             : std::vector<std::string>{"none"})
    cfg.precond_modes.push_back(precond_from_name(s));
  if (j.contains("operator_family")) {
    cfg.families.clear();
    for (const auto& s : one_or_list<std::string>(j.at("operator_family")))
      cfg.families.push_back(family_from_name(s));
  }

  cfg.n = j.value("n", 256);
  cfg.A = j.value("A", 120.0);
  if (j.contains("gmres")) {
    require_keys(j.at("gmres"), {"rel_tol", "max_iter", "restart"}, "gmres");
    cfg.gmres.rel_tol = j.at("gmres").value("rel_tol", 1e-4);
    cfg.gmres.max_iter = j.at("gmres").value("max_iter", 2000);
    cfg.gmres.restart = j.at("gmres").value("restart", 0);
  } else {
    cfg.gmres.max_iter = 2000;
  }
  if (j.contains("sigma")) {
    require_keys(j.at("sigma"), {"policy", "value"}, "sigma");
    const std::string policy = j.at("sigma").value("policy", "default");
    if (policy == "default") {
      cfg.sigma.kind = SigmaPolicy::Kind::by_wavenumber;
    } else if (policy == "fixed") {
      cfg.sigma.kind = SigmaPolicy::Kind::fixed;
      cfg.sigma.value = j.at("sigma").at("value").get<double>();
    } else {
      throw config_error("sigma policy must be 'default' or 'fixed'");
    }
  }
  if (j.contains("strip_cuts")) cfg.strip_cuts = j.at("strip_cuts").get<std::vector<double>>();
  cfg.wood_tol_factor = j.value("wood_tol", 1e-6);
  cfg.output = j.value("output", cfg.name + ".csv");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

LayerStack build_stack(const ExperimentConfig& cfg, int N, double roughness,
                       const std::vector<double>& wavenumbers) {
  LayerStack stack;
  stack.qp.alpha = cfg.alpha;
  stack.qp.period = cfg.period;
  stack.wavenumbers = wavenumbers;
  stack.wood_tol_factor = cfg.wood_tol_factor;
  stack.strip_cuts = cfg.strip_cuts;

  auto make_profile = [&](const ProfileSpec& spec, double mean, double eps) {
    if (spec.type == "flat") return GratingProfile::flat(mean, cfg.period);
    if (spec.type == "triangle") return GratingProfile::triangle(mean, eps, cfg.period);
    if (spec.type == "lamellar") return GratingProfile::lamellar(mean, eps, cfg.period);
    return GratingProfile::cosine_series(mean, eps, spec.cos_coeffs, spec.sin_coeffs,
                                         cfg.period);
  };

  if (cfg.repeated_profile) {
    const auto& spec = cfg.profile_specs.front();
    const double eps = spec.roughness.value_or(roughness);
    const double base_mean = spec.mean.value_or(0.0);
    for (int l = 0; l <= N; ++l)
      stack.profiles.push_back(make_profile(spec, base_mean - l * cfg.spacing, eps));
  } else {
    if (static_cast<int>(cfg.profile_specs.size()) != N + 1)
      throw config_error("explicit profile list must have N+1 entries");
    for (int l = 0; l <= N; ++l) {
      const auto& spec = cfg.profile_specs[l];
      const double eps = spec.roughness.value_or(roughness);
      double mean = 0.0;
      if (spec.mean) {
        mean = *spec.mean;
      } else if (spec.gap_below_previous) {
        if (l == 0) throw config_error("first profile cannot use gap_below_previous");
        const double prev_min = stack.profiles.back().extrema().first;
        // place so that the new profile's max sits 'gap' below the previous min
        GratingProfile probe = make_profile(spec, 0.0, eps);
        const double probe_max = probe.extrema().second;
        mean = prev_min - *spec.gap_below_previous - probe_max;
      } else {
        throw config_error("profile " + std::to_string(l) + " needs 'mean' or 'gap_below_previous'");
      }
      stack.profiles.push_back(make_profile(spec, mean, eps));
    }
  }
  if (static_cast<int>(stack.wavenumbers.size()) != N + 2)
    throw config_error("cell needs N+2 wavenumbers, got " +
                       std::to_string(stack.wavenumbers.size()));
  return stack;
}

std::vector<std::vector<double>> wavenumber_lists(const ExperimentConfig& cfg, int N) {
  if (cfg.wavenumbers.has_law) {
    std::vector<std::vector<double>> out;
    for (double a : cfg.wavenumbers.law_a) {
      std::vector<double> ks(N + 2);
      for (int l = 0; l <= N + 1; ++l) ks[l] = a * l + cfg.wavenumbers.law_b;
      out.push_back(std::move(ks));
    }
    return out;
  }
  return cfg.wavenumbers.values;
}

std::string wavenumber_label(const ExperimentConfig& cfg, const std::vector<double>& ks) {
  std::ostringstream os;
  if (cfg.wavenumbers.has_law && ks.size() >= 2) {
    os << "k=" << (ks[1] - ks[0]) << "*l+" << ks[0];
  } else {
    os << "k=[";
    for (size_t i = 0; i < ks.size(); ++i) os << (i ? ";" : "") << ks[i];
    os << "]";
  }
  return os.str();
}

}  // namespace qopdd
