// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

// Batch front end: JSON configuration in, CSV or JSON out.
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qring/qring.h"

using json = nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  NumericError(qring_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  qring_status status;
};

void check(qring_status s) {
  if (s != QRING_OK)
    throw NumericError(s, std::string(qring_status_string(s)) + ": " + qring_last_error());
}

void check_config(qring_status s, const std::string& where) {
  if (s != QRING_OK)
    throw ConfigError(where + ": " + qring_status_string(s) + ": " + qring_last_error());
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), r.ptr);
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);
}

struct RunConfig {
  std::string command;
  std::optional<json> u, u1, u2;
  qring_geometry geom{1.0, 1.0};
  int levels = 20;
  bool levels_set = false;
  double tol = 1e-9;
  double tau = 0.1;
  int grid = 16;
  std::string method = "both";
  std::string family = "auto";
  std::uint64_t seed = 0;
  int samples = 5;
  std::string format = "csv";
  std::string output;
  std::string input;
};

struct Flags {
  std::string config;
  std::optional<int> levels;
  std::optional<double> tol, tau, l, l0;
  std::optional<int> grid, samples;
  std::optional<std::string> method, family, output, input;
  std::optional<std::uint64_t> seed;
  bool json_out = false;
  bool csv_out = false;
};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for " + where);
  }
}

qring_complex complex_of(const json& j, const std::string& where) {
  if (j.is_number()) return {get<double>(j, where), 0.0};
  if (j.is_array() && j.size() == 2) return {get<double>(j[0], where), get<double>(j[1], where)};
  throw ConfigError(where + " must be a number or [re, im]");
}

qring_u2 named_u(const std::string& name) {
  static const std::map<std::string, std::array<double, 8>> table = {
      {"identity", {1, 0, 0, 0, 0, 0, 1, 0}},   {"-identity", {-1, 0, 0, 0, 0, 0, -1, 0}},
      {"sigma1", {0, 0, 1, 0, 1, 0, 0, 0}},     {"-sigma1", {0, 0, -1, 0, -1, 0, 0, 0}},
      {"sigma2", {0, 0, 0, -1, 0, 1, 0, 0}},    {"-sigma2", {0, 0, 0, 1, 0, -1, 0, 0}},
      {"sigma3", {1, 0, 0, 0, 0, 0, -1, 0}},    {"-sigma3", {-1, 0, 0, 0, 0, 0, 1, 0}},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown named matrix '" + name + "'");
  const auto& v = it->second;
  const qring_complex m[4] = {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
  qring_u2 u;
  check_config(qring_u2_from_matrix(m, &u), name);
  return u;
}

// A matrix is a name, {"matrix": [[a, b], [c, d]]}, {"xi", "alpha", "beta"} or {"triple": [...]}.
qring_u2 parse_u(const json& j, const std::string& where) {
  if (j.is_string()) return named_u(j.get<std::string>());
  if (!j.is_object()) throw ConfigError(where + " must be a name or an object");
  qring_u2 u{};
  if (j.contains("matrix")) {
    reject_unknown(j, {"matrix"}, where);
    const json& m = j["matrix"];
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
        !m[1].is_array() || m[1].size() != 2)
      throw ConfigError(where + ".matrix must be 2x2");
    qring_complex e[4];
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) e[2 * r + c] = complex_of(m[r][c], where + ".matrix");
    check_config(qring_u2_from_matrix(e, &u), where);
  } else if (j.contains("triple")) {
    reject_unknown(j, {"triple"}, where);
    const json& t = j["triple"];
    if (!t.is_array() || t.size() != 3) throw ConfigError(where + ".triple must be [xi, alpha_r, beta_i]");
    const qring_triple tr{get<double>(t[0], where), get<double>(t[1], where), get<double>(t[2], where)};
    check_config(qring_u2_canonical(&tr, &u), where);
  } else {
    reject_unknown(j, {"xi", "alpha", "beta"}, where);
    if (!j.contains("xi") || !j.contains("alpha") || !j.contains("beta"))
      throw ConfigError(where + " needs xi, alpha and beta");
    u.xi = get<double>(j["xi"], where + ".xi");
    u.alpha = complex_of(j["alpha"], where + ".alpha");
    u.beta = complex_of(j["beta"], where + ".beta");
    qring_triple t;
    check_config(qring_u2_triple(&u, &t), where);
  }
  return u;
}

RunConfig load(const std::string& command, const Flags& f) {
  RunConfig c;
  c.command = command;
  if (command == "roundtrip") c.levels = 200;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot open config " + f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
    reject_unknown(j, {"u", "u1", "u2", "geometry", "levels", "tol", "tau", "grid", "method",
                       "family", "seed", "samples", "format", "output", "input"},
                   "config");
    if (j.contains("u")) c.u = j["u"];
    if (j.contains("u1")) c.u1 = j["u1"];
    if (j.contains("u2")) c.u2 = j["u2"];
    if (j.contains("geometry")) {
      reject_unknown(j["geometry"], {"l", "l0"}, "geometry");
      if (j["geometry"].contains("l")) c.geom.l = get<double>(j["geometry"]["l"], "geometry.l");
      if (j["geometry"].contains("l0")) c.geom.l0 = get<double>(j["geometry"]["l0"], "geometry.l0");
    }
    if (j.contains("levels")) {
      c.levels = get<int>(j["levels"], "levels");
      c.levels_set = true;
    }
    if (j.contains("tol")) c.tol = get<double>(j["tol"], "tol");
    if (j.contains("tau")) c.tau = get<double>(j["tau"], "tau");
    if (j.contains("grid")) c.grid = get<int>(j["grid"], "grid");
    if (j.contains("method")) c.method = get<std::string>(j["method"], "method");
    if (j.contains("family")) c.family = get<std::string>(j["family"], "family");
    if (j.contains("seed")) c.seed = get<std::uint64_t>(j["seed"], "seed");
    if (j.contains("samples")) c.samples = get<int>(j["samples"], "samples");
    if (j.contains("format")) c.format = get<std::string>(j["format"], "format");
    if (j.contains("output")) c.output = get<std::string>(j["output"], "output");
    if (j.contains("input")) c.input = get<std::string>(j["input"], "input");
  }
  if (f.levels) c.levels = *f.levels;
  if (f.tol) c.tol = *f.tol;
  if (f.tau) c.tau = *f.tau;
  if (f.l) c.geom.l = *f.l;
  if (f.l0) c.geom.l0 = *f.l0;
  if (f.grid) c.grid = *f.grid;
  if (f.samples) c.samples = *f.samples;
  if (f.method) c.method = *f.method;
  if (f.family) c.family = *f.family;
  if (f.seed) c.seed = *f.seed;
  if (f.output) c.output = *f.output;
  if (f.input) c.input = *f.input;
  if (f.json_out && f.csv_out) throw ConfigError("--json and --csv are exclusive");
  if (f.json_out) c.format = "json";
  if (f.csv_out) c.format = "csv";

  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
  if (!(c.geom.l > 0.0) || !(c.geom.l0 > 0.0) || !std::isfinite(c.geom.l) || !std::isfinite(c.geom.l0))
    throw ConfigError("geometry lengths must be positive and finite");
  if (c.levels < 1) throw ConfigError("levels must be >= 1");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(c.tau > 0.0)) throw ConfigError("tau must be positive");
  if (c.grid < 1 || c.grid > 4096) throw ConfigError("grid must lie in [1, 4096]");
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (c.method != "asymptotic" && c.method != "fit" && c.method != "both")
    throw ConfigError("method must be asymptotic, fit or both");
  static const std::set<std::string> families = {"auto", "box", "smooth", "f2", "spectral"};
  if (!families.count(c.family)) throw ConfigError("family must be auto, box, smooth, f2 or spectral");
  return c;
}

qring_u2 need_u(const std::optional<json>& j, const char* key) {
  if (!j) throw ConfigError(std::string("config needs '") + key + "'");
  return parse_u(*j, key);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

Table key_values(const json& j) {
  Table t{{"key", "value"}, {}};
  for (auto it = j.begin(); it != j.end(); ++it)
    t.rows.push_back({it.key(), it->is_string() ? it->get<std::string>() : it->dump()});
  return t;
}

const char* sector_text(int s) {
  return s == QRING_NEGATIVE ? "negative" : (s == QRING_ZERO ? "zero" : "positive");
}

std::vector<qring_level> levels_of(qring_spectrum* s) {
  std::vector<qring_level> out(qring_spectrum_size(s));
  for (std::size_t i = 0; i < out.size(); ++i) check(qring_spectrum_level(s, i, &out[i]));
  qring_spectrum_free(s);
  return out;
}

std::vector<qring_level> one_point(const qring_u2& u, const RunConfig& c) {
  qring_spectrum* s = nullptr;
  check(qring_spectrum_compute(&u, &c.geom, c.levels, nullptr, &s));
  return levels_of(s);
}

std::vector<qring_level> two_point(const qring_u2& a, const qring_u2& b, const RunConfig& c) {
  qring_spectrum* s = nullptr;
  check(qring_spectrum_compute_two_point(&a, &b, &c.geom, c.levels, nullptr, &s));
  return levels_of(s);
}

std::string emit_levels(const std::vector<qring_level>& lv, const RunConfig& c) {
  if (c.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < lv.size(); ++i)
      arr.push_back({{"index", i},
                     {"sector", sector_text(lv[i].sector)},
                     {"wavenumber", lv[i].wavenumber},
                     {"energy", lv[i].energy},
                     {"multiplicity", lv[i].multiplicity}});
    json j = {{"geometry", {{"l", c.geom.l}, {"l0", c.geom.l0}}}, {"levels", arr}};
    return j.dump(2) + "\n";
  }
  Table t{{"index", "sector", "wavenumber", "energy", "multiplicity"}, {}};
  for (std::size_t i = 0; i < lv.size(); ++i)
    t.rows.push_back({std::to_string(i), sector_text(lv[i].sector), num(lv[i].wavenumber),
                      num(lv[i].energy), std::to_string(lv[i].multiplicity)});
  return csv(t);
}

json triple_json(const qring_triple& t) {
  return {{"xi", t.xi}, {"alpha_r", t.alpha_r}, {"beta_i", t.beta_i}};
}

std::string emit_object(const json& j, const RunConfig& c) {
  if (c.format == "json") return j.dump(2) + "\n";
  json flat = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object())
      for (auto jt = it->begin(); jt != it->end(); ++jt) flat[it.key() + "." + jt.key()] = *jt;
    else
      flat[it.key()] = *it;
  }
  return csv(key_values(flat));
}

double level_deviation(const std::vector<qring_level>& a, const std::vector<qring_level>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].sector != b[i].sector || a[i].multiplicity != b[i].multiplicity)
      return std::numeric_limits<double>::infinity();
    d = std::max(d, std::abs(a[i].wavenumber - b[i].wavenumber) / std::max(1.0, a[i].wavenumber));
  }
  return d;
}

std::string cmd_spectrum(const RunConfig& c) { return emit_levels(one_point(need_u(c.u, "u"), c), c); }

std::string cmd_twopoint(const RunConfig& c) {
  return emit_levels(two_point(need_u(c.u1, "u1"), need_u(c.u2, "u2"), c), c);
}

std::string cmd_classify(const RunConfig& c) {
  const qring_u2 u = need_u(c.u, "u");
  qring_classification r;
  check(qring_u2_classify(&u, &c.geom, &r));
  static const char* names[] = {"P", "T", "PT", "F1", "F2", "F3", "F4", "F5",
                                "self_dual", "susy_plus", "susy_minus"};
  json flags = json::object();
  for (unsigned i = 0; i < 11; ++i) flags[names[i]] = (r.flags >> i & 1u) != 0;
  json j = {{"flags", flags}};
  if (r.has_separated) j["separated_lengths"] = {{"first", jnum(r.separated[0])}, {"second", jnum(r.separated[1])}};
  if (r.has_walls) j["wall_lengths"] = {{"L1", jnum(r.walls[0])}, {"L2", jnum(r.walls[1])}};
  qring_triple t;
  check(qring_u2_triple(&u, &t));
  j["triple"] = triple_json(t);
  return emit_object(j, c);
}

qring_complex cx(double re, double im) { return {re, im}; }

// exp(i rho n.sigma) for a unit vector n.
std::array<qring_complex, 4> su2(double rho, double n1, double n2, double n3) {
  const double co = std::cos(rho), si = std::sin(rho);
  return {cx(co, si * n3), cx(si * n2, si * n1), cx(-si * n2, si * n1), cx(co, -si * n3)};
}

std::string cmd_orbit(const RunConfig& c) {
  Table t{{"map", "parameter", "max_deviation", "isospectral"}, {}};
  json rows = json::array();
  auto add = [&](const std::string& name, double p, double d) {
    const bool ok = d <= c.tol;
    t.rows.push_back({name, num(p), num(d), ok ? "true" : "false"});
    rows.push_back({{"map", name}, {"parameter", p}, {"max_deviation", jnum(d)}, {"isospectral", ok}});
  };
  std::vector<qring_u2> draws(static_cast<std::size_t>(2 * c.samples));
  check(qring_haar_u2(c.seed, draws.size(), draws.data()));
  if (c.u1 || c.u2) {
    const qring_u2 a = need_u(c.u1, "u1"), b = need_u(c.u2, "u2");
    const auto base = two_point(a, b, c);
    for (int i = 0; i < c.samples; ++i) {
      // Axis and angle drawn from the seeded U(2) stream.
      const qring_u2& w = draws[static_cast<std::size_t>(2 * i)];
      double n1 = w.beta.im, n2 = w.beta.re, n3 = w.alpha.im;
      const double nn = std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
      if (nn == 0.0) n1 = 1.0; else { n1 /= nn; n2 /= nn; n3 /= nn; }
      const double rho = std::atan2(nn, w.alpha.re);
      const auto v = su2(rho, n1, n2, n3);
      qring_u2 ca, cb;
      check(qring_conjugate_pair(&a, &b, v.data(), &ca, &cb));
      add("conjugate", rho, level_deviation(base, two_point(ca, cb, c)));
    }
  } else {
    const qring_u2 u = need_u(c.u, "u");
    const auto base = one_point(u, c);
    qring_u2 m;
    check(qring_u2_parity(&u, &m));
    add("parity", 0.0, level_deviation(base, one_point(m, c)));
    check(qring_u2_time_reversal(&u, &m));
    add("time_reversal", 0.0, level_deviation(base, one_point(m, c)));
    check(qring_u2_pt(&u, &m));
    add("pt", 0.0, level_deviation(base, one_point(m, c)));
    for (int i = 0; i < c.samples; ++i) {
      const double theta = draws[static_cast<std::size_t>(i)].xi * 2.0;
      check(qring_u2_p_theta(&u, theta, &m));
      add("p_theta", theta, level_deviation(base, one_point(m, c)));
    }
  }
  if (c.format == "json") return json({{"maps", rows}}).dump(2) + "\n";
  return csv(t);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("bad number '" + s + "' in " + where);
  return v;
}

struct Prefix {
  std::vector<double> positive;
  std::vector<double> negative;
  bool zero = false;
};

Prefix read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input " + path);
  std::string line;
  if (!std::getline(in, line) || line != "index,sector,wavenumber,energy,multiplicity")
    throw ConfigError("input is not a spectrum table: " + path);
  Prefix p;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split(line);
    const std::string where = path + " row " + std::to_string(row);
    if (f.size() != 5) throw ConfigError("expected 5 fields in " + where);
    const double k = parse_double(f[2], where);
    parse_double(f[3], where);
    if (parse_double(f[4], where) < 1) throw ConfigError("multiplicity must be >= 1 in " + where);
    if (f[1] == "positive") p.positive.push_back(k);
    else if (f[1] == "negative") p.negative.push_back(k);
    else if (f[1] == "zero") p.zero = true;
    else throw ConfigError("unknown sector '" + f[1] + "' in " + where);
  }
  return p;
}

qring_method method_of(const std::string& m) {
  return m == "asymptotic" ? QRING_ASYMPTOTIC : (m == "fit" ? QRING_FIT : QRING_BOTH);
}

const char* case_text(int k) {
  static const char* names[] = {"I", "II", "III", "ambiguous"};
  return k >= 0 && k < 4 ? names[k] : "unknown";
}

json inversion_json(const qring_inversion& r) {
  json j = {{"triple", triple_json(r.triple)},
            {"case", case_text(r.label)},
            {"resolved_case", case_text(r.resolved)},
            {"max_abs_sin", r.max_abs_sin},
            {"tail_cos_mean", r.tail_cos_mean},
            {"tail_cos_spread", r.tail_cos_spread}};
  if (r.has_fit) {
    j["fit"] = triple_json(r.fit);
    j["fit_residual"] = r.fit_residual;
    j["disagreement"] = r.disagreement;
  }
  json w = json::array();
  for (int i = 0; i < r.n_warnings; ++i) w.push_back(qring_invert_warning(i));
  for (std::size_t i = 0; i < w.size(); ++i) std::cerr << "warning: " << w[i].get<std::string>() << '\n';
  return j;
}

qring_inversion invert(const Prefix& p, const RunConfig& c) {
  qring_prefix* h = nullptr;
  std::vector<double> neg = p.negative;
  std::sort(neg.begin(), neg.end());
  check(qring_prefix_create(&c.geom, p.positive.data(), p.positive.size(), p.zero ? 1 : 0, neg.data(),
                            neg.size(), &h));
  qring_inversion r;
  const qring_status s = qring_invert(h, method_of(c.method), c.seed, &r);
  qring_prefix_free(h);
  check(s);
  return r;
}

std::string cmd_invert(const RunConfig& c) {
  if (c.input.empty()) throw ConfigError("invert needs an input spectrum table");
  return emit_object(inversion_json(invert(read_spectrum_csv(c.input), c)), c);
}

std::string cmd_kernel(const RunConfig& c) {
  const qring_u2 u = need_u(c.u, "u");
  static const std::map<std::string, qring_kernel_family> fam = {
      {"auto", QRING_KERNEL_AUTO}, {"box", QRING_KERNEL_BOX}, {"smooth", QRING_KERNEL_SMOOTH},
      {"f2", QRING_KERNEL_F2}, {"spectral", QRING_KERNEL_SPECTRAL}};
  qring_kernel* k = nullptr;
  check(qring_kernel_create(&u, &c.geom, fam.at(c.family), std::max(c.levels, 60), &k));
  static const char* fam_names[] = {"auto", "box", "smooth", "f2", "spectral"};
  const char* used = fam_names[qring_kernel_family_of(k)];
  Table t{{"a", "b", "re", "im"}, {}};
  json pts = json::array();
  const double tau = c.tau * c.geom.l * c.geom.l;
  try {
    for (int i = 0; i < c.grid; ++i) {
      for (int j = 0; j < c.grid; ++j) {
        const double a = (i + 0.5) * c.geom.l / c.grid, b = (j + 0.5) * c.geom.l / c.grid;
        qring_complex v;
        check(qring_kernel_eval(k, a, b, cx(0.0, -tau), 1e-15, 0, &v));
        t.rows.push_back({num(a), num(b), num(v.re), num(v.im)});
        pts.push_back({{"a", a}, {"b", b}, {"re", v.re}, {"im", v.im}});
      }
    }
  } catch (...) {
    qring_kernel_free(k);
    throw;
  }
  qring_kernel_free(k);
  if (c.format == "json") return json({{"family", used}, {"tau", tau}, {"points", pts}}).dump(2) + "\n";
  return csv(t);
}

std::string cmd_roundtrip(const RunConfig& c) {
  qring_u2 u;
  check(qring_haar_u2(c.seed, 1, &u));
  qring_triple truth;
  check(qring_u2_triple(&u, &truth));
  qring_spectrum* s = nullptr;
  check(qring_spectrum_compute(&u, &c.geom, c.levels, nullptr, &s));
  const auto lv = levels_of(s);
  Prefix p;
  for (const auto& l : lv) {
    if (l.sector == QRING_POSITIVE) p.positive.push_back(l.wavenumber);
    else if (l.sector == QRING_NEGATIVE) p.negative.push_back(l.wavenumber);
    else p.zero = true;
  }
  const qring_inversion r = invert(p, c);
  double dist;
  check(qring_triple_distance(&truth, &r.triple, &dist));
  const double tolerance = c.method == "fit" ? 1e-9 : 1e-3;
  json j = {{"seed", c.seed}, {"levels", c.levels}, {"true", triple_json(truth)}};
  json rec = inversion_json(r);
  j["recovered"] = rec["triple"];
  j["case"] = rec["case"];
  j["resolved_case"] = rec["resolved_case"];
  if (r.has_fit) j["fit"] = rec["fit"];
  j["distance"] = dist;
  j["tolerance"] = tolerance;
  j["within_tolerance"] = dist <= tolerance;
  if (!(dist <= tolerance)) {
    std::cerr << "error: recovered triple is " << num(dist) << " from the truth\n";
    std::cout << emit_object(j, c);
    throw NumericError(QRING_NO_CONVERGENCE, "roundtrip outside tolerance");
  }
  return emit_object(j, c);
}

void write_out(const std::string& text, const RunConfig& c) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(c.output, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + c.output);
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, inversion and propagators for a ring with point singularities"};
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"spectrum", "Levels of the one-singularity ring"},
      {"classify", "Subfamily flags and wall lengths"},
      {"orbit", "Spectra under symmetry maps or SU(2) conjugation"},
      {"invert", "Recover the spectral triple from a spectrum table"},
      {"kernel", "Euclidean propagator on an (a, b) grid"},
      {"twopoint", "Levels of the two-singularity ring"},
      {"roundtrip", "Random U, forward spectrum, inverse recovery"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", f.config, "JSON configuration file");
    sub->add_option("--levels", f.levels, "Number of positive levels");
    sub->add_option("--tol", f.tol, "Comparison tolerance");
    sub->add_option("--tau", f.tau, "Euclidean time in units of l^2");
    sub->add_option("--grid", f.grid, "Points per axis of the kernel grid");
    sub->add_option("--samples", f.samples, "Random maps per orbit");
    sub->add_option("--method", f.method, "asymptotic, fit or both");
    sub->add_option("--family", f.family, "auto, box, smooth, f2 or spectral");
    sub->add_option("--seed", f.seed, "Seed for sampling subcommands (default 0)");
    sub->add_option("--l", f.l, "Circumference");
    sub->add_option("--l0", f.l0, "Reference length");
    sub->add_option("-i,--input", f.input, "Spectrum table for invert");
    sub->add_option("-o,--out", f.output, "Output file (default standard output)");
    sub->add_flag("--json", f.json_out, "Emit JSON");
    sub->add_flag("--csv", f.csv_out, "Emit CSV (default)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig c = load(command, f);
    std::string text;
    if (command == "spectrum") text = cmd_spectrum(c);
    else if (command == "classify") text = cmd_classify(c);
    else if (command == "orbit") text = cmd_orbit(c);
    else if (command == "invert") text = cmd_invert(c);
    else if (command == "kernel") text = cmd_kernel(c);
    else if (command == "twopoint") text = cmd_twopoint(c);
    else text = cmd_roundtrip(c);
    write_out(text, c);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  }
}
