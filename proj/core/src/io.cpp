#include "lidreg/io.hpp"

#include "lidreg/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace lidreg {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw DataFormatError("empty number for " + what);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw DataFormatError("cannot parse '" + t + "' as a number for " + what);
  }
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t.front() == '-' || end != t.c_str() + t.size() || errno == ERANGE) {
    throw DataFormatError("cannot parse '" + t + "' as a non-negative integer for " + what);
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vector parse_vector(const std::string& text) {
  const auto parts = split(trim(text), ',');
  if (parts.empty()) throw DataFormatError("empty vector");
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_double(parts[i], "vector entry");
  return v;
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v(i));
  }
  return out;
}

BatchCollection read_batches_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataFormatError("missing CSV header");
  const auto header = split(trim(line), ',');
  if (header.size() < 3 || header.front() != "batch_id" || header.back() != "y") {
    throw DataFormatError("header must be batch_id,x_0,...,x_{d-1},y");
  }
  const std::size_t d = header.size() - 2;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j + 1] != "x_" + std::to_string(j)) throw DataFormatError("unexpected header column '" + header[j + 1] + "'");
  }

  std::vector<Batch> batches;
  std::set<std::string> seen;
  std::string current;
  std::vector<Sample> rows;
  std::size_t n = 0;
  std::size_t line_no = 1;

  auto flush = [&] {
    if (rows.empty()) return;
    if (n == 0) n = rows.size();
    if (rows.size() != n) {
      throw DataFormatError("batch '" + current + "' has " + std::to_string(rows.size()) + " rows, expected " +
                            std::to_string(n));
    }
    batches.emplace_back(rows);
    rows.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != d + 2) {
      throw DataFormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(d + 2) + " fields");
    }
    const std::string& id = fields.front();
    if (id.empty()) throw DataFormatError("line " + std::to_string(line_no) + ": empty batch_id");
    if (rows.empty() || id != current) {
      flush();
      if (!seen.insert(id).second) {
        throw DataFormatError("line " + std::to_string(line_no) + ": rows of batch '" + id + "' are not contiguous");
      }
      current = id;
    }
    Sample s{Vector(static_cast<Eigen::Index>(d)), 0.0};
    const std::string where = "line " + std::to_string(line_no);
    for (std::size_t j = 0; j < d; ++j) s.x(static_cast<Eigen::Index>(j)) = parse_double(fields[j + 1], where);
    s.y = parse_double(fields.back(), where);
    if (!s.x.allFinite() || !std::isfinite(s.y)) throw DataFormatError(where + ": non-finite value");
    rows.push_back(std::move(s));
  }
  flush();
  if (batches.empty()) throw DataFormatError("CSV contains no batches");
  return BatchCollection(std::move(batches));
}

BatchCollection read_batches_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_batches_csv(in);
}

void write_batches_csv(std::ostream& out, const BatchCollection& coll) {
  out << "batch_id";
  for (std::size_t j = 0; j < coll.dim(); ++j) out << ",x_" << j;
  out << ",y\n";
  for (std::size_t b = 0; b < coll.size(); ++b) {
    const Batch& batch = coll[b];
    for (Eigen::Index i = 0; i < batch.covariates().rows(); ++i) {
      out << b;
      for (Eigen::Index j = 0; j < batch.covariates().cols(); ++j) out << ',' << format_double(batch.covariates()(i, j));
      out << ',' << format_double(batch.responses()(i)) << '\n';
    }
  }
}

void write_batches_csv(const std::filesystem::path& path, const BatchCollection& coll) {
  std::ofstream out(path);
  if (!out) throw DataFormatError("cannot write " + path.string());
  write_batches_csv(out, coll);
}

FlatConfig parse_flat_config(std::istream& in) {
  FlatConfig out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataFormatError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw DataFormatError("config line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second) {
      throw DataFormatError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

FlatConfig read_flat_config(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_flat_config(in);
}

const std::vector<std::string>& algo_config_keys() {
  static const std::vector<std::string> keys = {
      "alpha", "sigma",  "C", "C_p", "p", "c2", "c3", "c4", "stationary_tol_scale", "power_iter_tol",
      "power_iter_max", "max_filter_calls", "rng_seed"};
  return keys;
}

const std::vector<std::string>& generator_spec_keys() {
  static const std::vector<std::string> keys = {
      "d",           "n",      "m",           "alpha",  "w_stars", "k",         "w_radius",   "w_separation",
      "covariate_model", "condition_number", "C1", "noise_model", "sigma", "dof", "adversary", "adv_w",
      "adv_scale",   "adv_x0", "adv_y0",      "adv_target", "seed"};
  return keys;
}

void check_known_keys(const FlatConfig& flat) {
  for (const auto& [key, value] : flat) {
    const auto& a = algo_config_keys();
    const auto& g = generator_spec_keys();
    if (std::find(a.begin(), a.end(), key) == a.end() && std::find(g.begin(), g.end(), key) == g.end()) {
      throw DataFormatError("unknown config key '" + key + "'");
    }
  }
}

AlgoConfig algo_config_from_flat(const FlatConfig& flat, AlgoConfig cfg) {
  auto num = [&](const char* key, double& dst) {
    if (auto it = flat.find(key); it != flat.end()) dst = parse_double(it->second, key);
  };
  num("alpha", cfg.alpha);
  num("sigma", cfg.sigma);
  num("C", cfg.C);
  num("C_p", cfg.C_p);
  num("p", cfg.p);
  num("c2", cfg.c2);
  num("c3", cfg.c3);
  num("c4", cfg.c4);
  num("stationary_tol_scale", cfg.stationary_tol_scale);
  num("power_iter_tol", cfg.power_iter_tol);
  if (auto it = flat.find("power_iter_max"); it != flat.end()) {
    cfg.power_iter_max = static_cast<int>(parse_uint(it->second, "power_iter_max"));
  }
  if (auto it = flat.find("max_filter_calls"); it != flat.end()) {
    cfg.max_filter_calls = static_cast<long>(parse_uint(it->second, "max_filter_calls"));
  }
  if (auto it = flat.find("rng_seed"); it != flat.end()) cfg.rng_seed = parse_uint(it->second, "rng_seed");
  return cfg;
}

GeneratorSpec generator_spec_from_flat(const FlatConfig& flat, GeneratorSpec spec) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = flat.find(key);
    return it == flat.end() ? nullptr : &it->second;
  };
  auto size = [&](const char* key, std::size_t& dst) {
    if (auto v = get(key)) dst = static_cast<std::size_t>(parse_uint(*v, key));
  };
  auto num = [&](const char* key, double& dst) {
    if (auto v = get(key)) dst = parse_double(*v, key);
  };
  auto vec = [&](const char* key, Vector& dst) {
    if (auto v = get(key)) dst = parse_vector(*v);
  };
  size("d", spec.d);
  size("n", spec.n);
  size("m", spec.m);
  num("alpha", spec.alpha);
  num("condition_number", spec.condition_number);
  num("C1", spec.C1);
  num("sigma", spec.sigma);
  num("dof", spec.dof);
  num("adv_scale", spec.adv_scale);
  num("adv_y0", spec.adv_y0);
  vec("adv_w", spec.adv_w);
  vec("adv_x0", spec.adv_x0);
  vec("adv_target", spec.adv_target);
  if (auto v = get("seed")) spec.seed = parse_uint(*v, "seed");
  try {
    if (auto v = get("covariate_model")) spec.covariates = parse_covariate_model(*v);
    if (auto v = get("noise_model")) spec.noise = parse_noise_model(*v);
    if (auto v = get("adversary")) spec.adversary = parse_adversary(*v);
  } catch (const ArgumentError& e) {
    throw DataFormatError(e.what());
  }

  if (auto v = get("w_stars")) {
    spec.w_stars.clear();
    for (const auto& part : split(*v, ';')) {
      if (!part.empty()) spec.w_stars.push_back(parse_vector(part));
    }
  } else if (spec.w_stars.empty() || get("k") || get("w_radius") || get("w_separation")) {
    std::size_t k = 1;
    double radius = 1.0;
    double separation = 1.0;
    size("k", k);
    num("w_radius", radius);
    num("w_separation", separation);
    spec.w_stars = random_separated_regressors(k, spec.d, radius, separation, spec.seed ^ 0x5eed'0f'57a7ULL);
  }
  return spec;
}

std::string to_flat(const AlgoConfig& cfg) {
  std::ostringstream out;
  out << "alpha = " << format_double(cfg.alpha) << '\n'
      << "sigma = " << format_double(cfg.sigma) << '\n'
      << "C = " << format_double(cfg.C) << '\n'
      << "C_p = " << format_double(cfg.C_p) << '\n'
      << "p = " << format_double(cfg.p) << '\n'
      << "c2 = " << format_double(cfg.c2) << '\n'
      << "c3 = " << format_double(cfg.c3) << '\n'
      << "c4 = " << format_double(cfg.c4) << '\n'
      << "stationary_tol_scale = " << format_double(cfg.stationary_tol_scale) << '\n'
      << "power_iter_tol = " << format_double(cfg.power_iter_tol) << '\n'
      << "power_iter_max = " << cfg.power_iter_max << '\n'
      << "max_filter_calls = " << cfg.max_filter_calls << '\n'
      << "rng_seed = " << cfg.rng_seed << '\n';
  return out.str();
}

std::string to_flat(const GeneratorSpec& spec) {
  std::ostringstream out;
  out << "d = " << spec.d << '\n'
      << "n = " << spec.n << '\n'
      << "m = " << spec.m << '\n'
      << "alpha = " << format_double(spec.alpha) << '\n';
  out << "w_stars = ";
  for (std::size_t k = 0; k < spec.w_stars.size(); ++k) out << (k ? ";" : "") << format_vector(spec.w_stars[k]);
  out << '\n'
      << "covariate_model = " << to_string(spec.covariates) << '\n'
      << "condition_number = " << format_double(spec.condition_number) << '\n'
      << "C1 = " << format_double(spec.C1) << '\n'
      << "noise_model = " << to_string(spec.noise) << '\n'
      << "sigma = " << format_double(spec.sigma) << '\n'
      << "dof = " << format_double(spec.dof) << '\n'
      << "adversary = " << to_string(spec.adversary) << '\n';
  if (spec.adv_w.size()) out << "adv_w = " << format_vector(spec.adv_w) << '\n';
  out << "adv_scale = " << format_double(spec.adv_scale) << '\n';
  if (spec.adv_x0.size()) out << "adv_x0 = " << format_vector(spec.adv_x0) << '\n';
  out << "adv_y0 = " << format_double(spec.adv_y0) << '\n';
  if (spec.adv_target.size()) out << "adv_target = " << format_vector(spec.adv_target) << '\n';
  out << "seed = " << spec.seed << '\n';
  return out.str();
}

}  // namespace lidreg
