#include "algebroid/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace gla {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Table = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string key_of(const std::string& base, std::initializer_list<int> idx) {
  std::string k = base;
  for (int i : idx) k += "[" + std::to_string(i + 1) + "]";
  return k;
}

Entry* lookup(Table& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

double number(const Entry& e, const std::string& key) {
  const std::string v = trim(e.value);
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("'" + key + "' expects a number", e.line);
  return out;
}

int integer(const Entry& e, const std::string& key) {
  const std::string v = trim(e.value);
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("'" + key + "' expects an integer", e.line);
  return static_cast<int>(out);
}

std::vector<double> numbers(const Entry& e, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(Entry{item, e.line, true}, key));
  return out;
}

Expr expression(const Entry& e, const std::string& key, Arity arity, bool base_only) {
  Expr out;
  try {
    out = parse(e.value, arity);
  } catch (const ParseError& err) {
    throw ConfigError("'" + key + "': " + err.what(), e.line);
  } catch (const ArityError& err) {
    throw ConfigError("'" + key + "': " + err.what(), e.line);
  }
  if (base_only && depends_on_fiber(out)) throw ConfigError("'" + key + "' must depend on x only", e.line);
  return out;
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
  static const std::regex key_re(R"(^[A-Za-z_][A-Za-z_.0-9]*(\[[0-9]+\])*$)");
  Table table;
  std::stringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!std::regex_match(key, key_re)) throw ConfigError("malformed key '" + key + "'", line_no);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
    if (!table.emplace(key, Entry{value, line_no, false}).second)
      throw ConfigError("duplicate key '" + key + "'", line_no);
  }

  SystemConfig cfg;
  Entry* me = lookup(table, "m");
  Entry* re = lookup(table, "r");
  if (me == nullptr || re == nullptr) throw ConfigError("config must set m and r");
  cfg.m = integer(*me, "m");
  cfg.r = integer(*re, "r");
  if (cfg.m < 1 || cfg.r < 1 || cfg.m > 16 || cfg.r > 16) throw ConfigError("m and r must lie in 1..16");
  const int m = cfg.m, r = cfg.r;
  const Arity base{m, 0}, full{m, r};
  if (Entry* e = lookup(table, "name")) cfg.name = e->value;

  auto field = [&](const std::string& key, Arity ar, bool base_only) -> std::optional<Expr> {
    Entry* e = lookup(table, key);
    if (e == nullptr) return std::nullopt;
    return expression(*e, key, ar, base_only);
  };
  auto any_with_prefix = [&](const std::string& prefix) {
    for (const auto& [k, v] : table)
      if (k.rfind(prefix, 0) == 0) return true;
    return false;
  };

  // anchor: identity by default when m == r
  std::vector<Expr> rho;
  const bool rho_given = any_with_prefix("rho[");
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < r; ++a) {
      auto v = field(key_of("rho", {i, a}), base, true);
      rho.push_back(v ? *v : Expr(!rho_given && m == r && i == a ? 1.0 : 0.0));
    }

  auto diffeo = [&](const std::string& name) {
    if (!any_with_prefix(name + ".")) return DiffeoMap::identity(m);
    DiffeoMap d;
    for (int i = 0; i < m; ++i) {
      auto f = field(key_of(name + ".fwd", {i}), base, true);
      auto g = field(key_of(name + ".inv", {i}), base, true);
      if (!f || !g) throw ConfigError(name + " needs every fwd and inv component");
      d.fwd.push_back(*f);
      d.inv.push_back(*g);
    }
    return d;
  };
  DiffeoMap h = diffeo("h"), eta = diffeo("eta");
  auto alg = std::make_shared<GenAlgebroid>(m, r, rho, h, eta);
  for (int c = 0; c < r; ++c)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        const std::string key = key_of("L", {c, a, b});
        if (a >= b) {
          if (table.count(key)) throw ConfigError("'" + key + "': give structure functions with a < b only",
                                                  table[key].line);
          continue;
        }
        if (auto v = field(key, base, true)) alg->set_structure(c, a, b, *v);
      }
  cfg.alg = alg;

  if (any_with_prefix("g[") || any_with_prefix("gtil[")) {
    if (!any_with_prefix("g[") || !any_with_prefix("gtil["))
      throw ConfigError("g and gtil must be given together");
    cfg.gh.r = r;
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        auto g = field(key_of("g", {a, b}), base, true);
        auto gt = field(key_of("gtil", {a, b}), base, true);
        cfg.gh.g.push_back(g ? *g : Expr(0.0));
        cfg.gh.gtil.push_back(gt ? *gt : Expr(0.0));
      }
  } else {
    cfg.gh = GhMorphism::identity(r);
  }

  if (any_with_prefix("Gamma[")) {
    for (int a = 0; a < r; ++a)
      for (int c = 0; c < r; ++c) {
        auto v = field(key_of("Gamma", {a, c}), full, false);
        cfg.gamma.push_back(v ? *v : Expr(0.0));
      }
  }
  for (int a = 0; a < r; ++a) {
    auto g = field(key_of("G", {a}), full, false);
    auto f = field(key_of("F", {a}), full, false);
    cfg.G.push_back(g ? *g : Expr(0.0));
    cfg.F.push_back(f ? *f : Expr(0.0));
  }
  cfg.f = field("f", full, false);

  if (any_with_prefix("H[") || any_with_prefix("Htil[") || any_with_prefix("V[") || any_with_prefix("Vtil[")) {
    for (auto [name, out] : {std::pair{"H", &cfg.H}, {"Htil", &cfg.Htil}, {"V", &cfg.V}, {"Vtil", &cfg.Vtil}})
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          for (int c = 0; c < r; ++c) {
            auto v = field(key_of(name, {a, b, c}), full, false);
            out->push_back(v ? *v : Expr(0.0));
          }
  }

  auto num = [&](const std::string& key, double& out) {
    if (Entry* e = lookup(table, key)) out = number(*e, key);
  };
  num("sample.lo", cfg.sample.lo);
  num("sample.hi", cfg.sample.hi);
  if (Entry* e = lookup(table, "sample.count")) cfg.sample.count = integer(*e, "sample.count");
  if (Entry* e = lookup(table, "sample.seed")) {
    const int s = integer(*e, "sample.seed");
    if (s < 0) throw ConfigError("sample.seed must be non-negative", e->line);
    cfg.sample.seed = static_cast<std::uint64_t>(s);
  }
  num("tol.symbolic", cfg.tol_symbolic);
  num("tol.fd", cfg.tol_fd);
  num("ode.dt", cfg.ode_dt);
  num("geodesic.t1", cfg.t1);
  if (!(cfg.sample.hi > cfg.sample.lo)) throw ConfigError("sample.hi must exceed sample.lo");
  if (cfg.sample.count < 1) throw ConfigError("sample.count must be positive");
  if (!(cfg.ode_dt > 0.0)) throw ConfigError("ode.dt must be positive");
  if (Entry* e = lookup(table, "geodesic.x0")) cfg.x0 = numbers(*e, "geodesic.x0");
  if (Entry* e = lookup(table, "geodesic.y0")) cfg.y0 = numbers(*e, "geodesic.y0");
  if (cfg.x0.empty()) cfg.x0.assign(static_cast<std::size_t>(m), 0.0);
  if (cfg.y0.empty()) cfg.y0.assign(static_cast<std::size_t>(r), 1.0);
  if (cfg.x0.size() != static_cast<std::size_t>(m) || cfg.y0.size() != static_cast<std::size_t>(r))
    throw ConfigError("geodesic.x0 needs m values and geodesic.y0 needs r values");

  for (const auto& [k, v] : table)
    if (!v.used) throw ConfigError("unknown or out-of-range key '" + k + "'", v.line);
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace gla
